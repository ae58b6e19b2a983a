use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hmcolor::imageio::{load_stem, save_stem, save_weights, DisplayMode, FileFormat, FloatPlane};
use hmcolor::shading::{light_preset, DEFAULT_RADIUS};
use hmcolor::PhasedImage;
use tempfile::TempDir;

fn hmcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmcolor"))
        .args(args)
        .output()
        .expect("run hmcolor")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_gray(
    dir: &TempDir,
    name: &str,
    w: usize,
    h: usize,
    values: Vec<f32>,
) -> std::path::PathBuf {
    let stem = dir.path().join(name);
    let img = PhasedImage::from_amplitude(w, h, 1, values).unwrap();
    save_stem(&img, &stem, FileFormat::Pfm, DisplayMode::Clamp).unwrap();
    stem
}

#[test]
fn solve_reproduces_light_fits() {
    let o = hmcolor(&[
        "solve",
        "--mode",
        "linear",
        "--colors",
        "214,66,90",
        "200,132,209",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("b = -14,66,119"), "{}", stdout(&o));

    let o = hmcolor(&[
        "solve",
        "--mode",
        "bilinear",
        "--colors",
        "117,57,2",
        "230,55,33",
        "113,108,67",
        "222,100,87",
    ]);
    let out = stdout(&o);
    assert!(out.contains("dt1 = 113,-2,31"), "{out}");
    assert!(out.contains("dt0 = -4,51,65"), "{out}");
    assert!(out.contains("dt0t1 = -4,-6,-11"), "{out}");

    let o = hmcolor(&["solve", "--mode", "linear", "--colors", "5,5,5", "5,5,5"]);
    assert!(stdout(&o).contains("b = 0,0,0"));

    let o = hmcolor(&["solve", "--mode", "linear", "--colors", "1,2,3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("needs 2 colors"));
}

#[test]
fn verify_exit_codes_and_determinism() {
    let o = hmcolor(&["verify", "--cases", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let a = hmcolor(&["verify", "--seed", "7", "--cases", "20"]);
    let b = hmcolor(&["verify", "--seed", "7", "--cases", "20"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("PASS inverse"));
    let o = hmcolor(&["verify", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn filter_identity_kernel_and_recipe() {
    let dir = TempDir::new().unwrap();
    let values: Vec<f32> = (0..30).map(|i| 0.1 + i as f32 / 40.0).collect();
    let input = write_gray(&dir, "ramp", 6, 5, values.clone());
    let out = dir.path().join("same");
    let o = hmcolor(&[
        "filter",
        "--in",
        s(&input),
        "--kernel",
        "box:0",
        "--p",
        "2",
        "--out",
        s(&out),
        "--format",
        "pfm",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (img, _) = load_stem(&out).unwrap();
    for (a, b) in img.amplitude().iter().zip(&values) {
        assert!((a - b).abs() <= 1e-6);
    }

    let out = dir.path().join("recipe");
    let o = hmcolor(&[
        "filter",
        "--in",
        s(&input),
        "--kernel",
        "box:7",
        "--p",
        "1",
        "--p",
        "-1",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("recipe.amp.png").is_file());
    assert!(!dir.path().join("recipe.phase.png").exists());

    let out = dir.path().join("staged");
    let o = hmcolor(&[
        "filter",
        "--in",
        s(&input),
        "--stage",
        "p=inf,kernel=box:1",
        "--stage",
        "p=-inf,kernel=box:1",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn filter_rejects_geo_and_zero() {
    let dir = TempDir::new().unwrap();
    let input = write_gray(&dir, "flat", 2, 2, vec![0.5; 4]);
    let out = dir.path().join("never");
    let o = hmcolor(&["filter", "--in", s(&input), "--p", "geo", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("geometric"), "{}", stderr(&o));
    assert!(!dir.path().join("never.amp.png").exists());

    let o = hmcolor(&["filter", "--in", s(&input), "--p", "0", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("geo"), "{}", stderr(&o));

    let o = hmcolor(&[
        "filter",
        "--in",
        s(&dir.path().join("missing")),
        "--p",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn shade_single_pixel_and_profile() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("px");
    let o = hmcolor(&[
        "shade",
        "--preset",
        "tetrahedron",
        "--p",
        "1",
        "--size",
        "1",
        "--out",
        s(&out),
        "--format",
        "pfm",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (img, _) = load_stem(&out).unwrap();
    // center pixel sees the sphere point (0, 0, 1)
    let center = [0.0, 0.0, 1.0];
    let lights = light_preset("tetrahedron", DEFAULT_RADIUS).unwrap();
    let expected = lights
        .iter()
        .map(|l| l.diffuse(center, center))
        .sum::<f64>()
        / 4.0;
    assert!((f64::from(img.amplitude()[0]) - expected).abs() < 1e-6);

    let csv = dir.path().join("profile.csv");
    let out = dir.path().join("octa");
    let o = hmcolor(&[
        "shade",
        "--preset",
        "octahedron",
        "--p",
        "inf",
        "--size",
        "32",
        "--out",
        s(&out),
        "--profile",
        s(&csv),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 513);

    let o = hmcolor(&["shade", "--preset", "dodecahedron", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("dodecahedron"));
}

#[test]
fn shade_config_and_lift() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("scene.cfg");
    fs::write(
        &cfg,
        "preset = octahedron\nsize = 8\np = -1\nintensity = 1,0.5,0.25\n",
    )
    .unwrap();
    let out = dir.path().join("neg");
    let o = hmcolor(&["shade", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(
        o.status.code(),
        Some(1),
        "zero diffuse terms at p < 0 need --lift"
    );
    let o = hmcolor(&[
        "shade",
        "--config",
        s(&cfg),
        "--lift",
        "--out",
        s(&out),
        "--format",
        "pfm",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (img, _) = load_stem(&out).unwrap();
    assert_eq!((img.width(), img.channels()), (8, 3));
}

#[test]
fn composite_modes() {
    let dir = TempDir::new().unwrap();
    let fg = write_gray(&dir, "fg", 1, 1, vec![0.5]);
    let bg = write_gray(&dir, "bg", 1, 1, vec![0.9]);
    let run = |mode: &str, name: &str| {
        let out = dir.path().join(name);
        let o = hmcolor(&[
            "composite",
            "--fg",
            s(&fg),
            "--bg",
            s(&bg),
            "--mode",
            mode,
            "--out",
            s(&out),
            "--format",
            "pfm",
        ]);
        assert!(o.status.success(), "{mode}: {}", stderr(&o));
        f64::from(load_stem(&out).unwrap().0.amplitude()[0])
    };
    assert!((run("hm:1", "mean") - 0.7).abs() < 1e-6);
    assert!((run("hm:-1", "harm") - 0.9 / 1.4).abs() < 1e-6);
    assert!((run("add", "sum") - 1.4).abs() < 1e-6);
    assert!((run("over", "over") - 0.5).abs() < 1e-6);
    assert!((run("addphase", "phase") - 0.7).abs() < 1e-6);

    save_weights(
        &FloatPlane {
            width: 1,
            height: 1,
            channels: 1,
            data: vec![0.25],
        },
        &fg,
    )
    .unwrap();
    assert!((run("over", "half") - (0.25 * 0.5 + 0.75 * 0.9)).abs() < 1e-6);
    assert!(dir.path().join("half.w.pfm").is_file());

    let out = dir.path().join("bad");
    let o = hmcolor(&[
        "composite",
        "--fg",
        s(&fg),
        "--bg",
        s(&bg),
        "--mode",
        "screen",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn convert_applies_matrix() {
    let dir = TempDir::new().unwrap();
    let stem = dir.path().join("rgb");
    let img = PhasedImage::from_amplitude(1, 1, 3, vec![0.2, 0.6, 1.0]).unwrap();
    save_stem(&img, &stem, FileFormat::Pfm, DisplayMode::Clamp).unwrap();
    let matrix = dir.path().join("swap.txt");
    fs::write(&matrix, "3\n0,0 1,0 0,0\n1,0 0,0 0,0\n0,0 0,0 1,0\n").unwrap();
    let out = dir.path().join("swapped");
    let o = hmcolor(&[
        "convert",
        "--in",
        s(&stem),
        "--matrix",
        s(&matrix),
        "--out",
        s(&out),
        "--format",
        "pfm",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let amp = load_stem(&out).unwrap().0.amplitude().to_vec();
    assert!(
        (amp[0] - 0.6).abs() < 1e-6 && (amp[1] - 0.2).abs() < 1e-6 && (amp[2] - 1.0).abs() < 1e-6
    );
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(hmcolor(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hmcolor(&["solve"]).status.code(), Some(1));
    assert_eq!(hmcolor(&["--help"]).status.code(), Some(0));
}
