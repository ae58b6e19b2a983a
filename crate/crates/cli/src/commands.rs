use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use hmcolor::affine::{solve_bilinear_lights, solve_linear_light};
use hmcolor::compositing::{
    add_phase_composite, generalized_composite, over, BlendRegistry, Layer, MaterialMatrix,
    WeightSource,
};
use hmcolor::filter::{pipeline, Kernel, Stage};
use hmcolor::imageio::{load_stem, save_stem, save_weights, FloatPlane, StemFiles};
use hmcolor::shading::{
    profile_csv, shade_diffuse, terminator_profile, SceneConfig, PROFILE_SAMPLES,
};
use hmcolor::verify::{run_suite, suite_names, VerifyReport};
use hmcolor::{Exponent, PhasedImage};

use crate::{
    CompositeArgs, ConvertArgs, FilterArgs, OutputArgs, ShadeArgs, SolveArgs, SolveMode,
    VerifyArgs, WeightMode,
};

const GEO_HINT: &str = "p=geo is not available here: the geometric limit is only defined as a weighted \
mean of positive real values per pixel and has no accumulating form; use a small exponent such as 1e-3";

fn load_kernel(spec: &str) -> Result<Kernel> {
    if spec.starts_with("box:") {
        Ok(spec.parse()?)
    } else {
        Kernel::from_file(Path::new(spec)).with_context(|| format!("reading kernel {spec}"))
    }
}

fn parse_stage(spec: &str) -> Result<Stage> {
    let mut exponent = None;
    let mut kernel = None;
    for part in spec.split(',') {
        match part.split_once('=') {
            Some(("p", v)) => exponent = Some(v.parse::<Exponent>()?),
            Some(("kernel", v)) => kernel = Some(load_kernel(v)?),
            _ => bail!("bad stage `{spec}`, expected p=<exp>,kernel=<box:N|file>"),
        }
    }
    let exponent = exponent.with_context(|| format!("stage `{spec}` has no p"))?;
    let kernel = kernel.with_context(|| format!("stage `{spec}` has no kernel"))?;
    Ok(Stage::new(kernel, exponent))
}

fn write(img: &PhasedImage, stem: &Path, out: OutputArgs) -> Result<StemFiles> {
    let files = save_stem(img, stem, out.format, out.display)
        .with_context(|| format!("writing {}", stem.display()))?;
    println!("wrote {}", files.amplitude.display());
    if let Some(p) = &files.phase {
        println!("wrote {}", p.display());
    }
    Ok(files)
}

pub fn filter(args: FilterArgs) -> Result<ExitCode> {
    let mut stages = Vec::new();
    if !args.p.is_empty() {
        let kernel = load_kernel(&args.kernel)?;
        stages.extend(args.p.iter().map(|&p| Stage::new(kernel.clone(), p)));
    }
    for spec in &args.stages {
        stages.push(parse_stage(spec)?);
    }
    if stages.is_empty() {
        bail!("nothing to do: give at least one --p or --stage");
    }
    if stages
        .iter()
        .any(|s| s.exponent == Exponent::GeometricLimit)
    {
        bail!(GEO_HINT);
    }
    let (img, _) =
        load_stem(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let out = pipeline(&img, &stages)?;
    write(&out, &args.out, args.output)?;
    Ok(ExitCode::SUCCESS)
}

fn load_layer(stem: &Path) -> Result<Layer> {
    let (img, plane) = load_stem(stem).with_context(|| format!("reading {}", stem.display()))?;
    Ok(Layer::from_planes(&img, plane)?)
}

pub fn composite(args: CompositeArgs) -> Result<ExitCode> {
    if args.mode == "addphase" {
        let (fg, _) =
            load_stem(&args.fg).with_context(|| format!("reading {}", args.fg.display()))?;
        let (bg, _) =
            load_stem(&args.bg).with_context(|| format!("reading {}", args.bg.display()))?;
        write(
            &add_phase_composite(&bg, &fg, args.weight)?,
            &args.out,
            args.output,
        )?;
        return Ok(ExitCode::SUCCESS);
    }
    let (fg, bg) = (load_layer(&args.fg)?, load_layer(&args.bg)?);
    let layer = if args.mode == "over" {
        over(&fg, &bg)?
    } else {
        let blend = BlendRegistry::default().resolve(&args.mode)?;
        let source = match args.weights {
            WeightMode::Alpha => WeightSource::SharedAlpha,
            WeightMode::Channels => WeightSource::PerChannel,
        };
        generalized_composite(blend.as_ref(), &fg, &bg, source)?
    };
    write(&layer.straight(), &args.out, args.output)?;
    let (w, h) = (layer.color.width(), layer.color.height());
    let alpha = FloatPlane {
        width: w,
        height: h,
        channels: 1,
        data: layer.alpha,
    };
    println!("wrote {}", save_weights(&alpha, &args.out)?.display());
    Ok(ExitCode::SUCCESS)
}

pub fn shade(args: ShadeArgs) -> Result<ExitCode> {
    let mut cfg = match &args.config {
        Some(path) => fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?
            .parse::<SceneConfig>()?,
        None => SceneConfig::default(),
    };
    if let Some(preset) = args.preset {
        cfg.preset = preset;
    }
    if let Some(size) = args.size {
        cfg.size = size;
    }
    cfg.lift |= args.lift;
    let p = args.p.or(cfg.exponent).unwrap_or(Exponent::Finite(1.0));
    if p == Exponent::GeometricLimit {
        bail!(GEO_HINT);
    }
    let scene = cfg.to_scene()?;
    let img = shade_diffuse(&scene, p, cfg.lift)?;
    write(&img, &args.out, args.output)?;
    if let Some(path) = &args.profile {
        let profile = terminator_profile(p, PROFILE_SAMPLES)?;
        fs::write(path, profile_csv(&profile))
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_color(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map(|v| v as f64)
                .with_context(|| format!("bad color component `{c}` in `{s}`"))
        })
        .collect()
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn solve(args: SolveArgs) -> Result<ExitCode> {
    let colors: Vec<Vec<f64>> = args
        .colors
        .iter()
        .map(|c| parse_color(c))
        .collect::<Result<_>>()?;
    match args.mode {
        SolveMode::Linear => {
            let [c0, c1] = &colors[..] else {
                bail!("linear mode needs 2 colors, got {}", colors.len());
            };
            let (a, b) = solve_linear_light(c0, c1)?;
            println!("a = {}", join(&a));
            println!("b = {}", join(&b));
        }
        SolveMode::Bilinear => {
            let [c00, c01, c10, c11] = &colors[..] else {
                bail!("bilinear mode needs 4 colors, got {}", colors.len());
            };
            let m = solve_bilinear_lights(c00, c01, c10, c11)?;
            println!("c00 = {}", join(&m.c00));
            println!("dt1 = {}", join(&m.dt1));
            println!("dt0 = {}", join(&m.dt0));
            println!("dt0t1 = {}", join(&m.dt0t1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let names: Vec<String> = if args.suites.is_empty() {
        suite_names().map(String::from).collect()
    } else {
        args.suites.clone()
    };
    let mut suites = Vec::new();
    for name in &names {
        let report = run_suite(name, args.seed, args.cases).with_context(|| {
            format!(
                "unknown suite `{name}`; known: {}",
                suite_names().collect::<Vec<_>>().join(", ")
            )
        })?;
        suites.push(report);
    }
    let report = VerifyReport {
        seed: args.seed,
        cases: args.cases,
        suites,
    };
    println!("{report}");
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

pub fn convert(args: ConvertArgs) -> Result<ExitCode> {
    let (mut img, _) =
        load_stem(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    if let Some(path) = &args.matrix {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        img = text.parse::<MaterialMatrix>()?.apply_image(&img)?;
    }
    write(&img, &args.out, args.output)?;
    Ok(ExitCode::SUCCESS)
}
