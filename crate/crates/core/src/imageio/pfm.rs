//! Portable float maps: `Pf` (1 channel) or `PF` (3 channels), rows stored
//! bottom to top. Written little-endian with scale `-1.0`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::image::FloatPlane;
use crate::error::{Error, Result};

fn header_line<R: BufRead>(r: &mut R) -> Result<String> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    Ok(line.trim().to_string())
}

pub fn read_pfm(path: &Path) -> Result<FloatPlane> {
    let mut reader = BufReader::new(File::open(path)?);
    let channels = match header_line(&mut reader)?.as_str() {
        "PF" => 3,
        "Pf" => 1,
        other => return Err(Error::Parse(format!("bad PFM magic `{other}`"))),
    };
    let dims = header_line(&mut reader)?;
    let mut it = dims.split_whitespace().map(str::parse::<usize>);
    let (width, height) = match (it.next(), it.next(), it.next()) {
        (Some(Ok(w)), Some(Ok(h)), None) if w > 0 && h > 0 => (w, h),
        _ => return Err(Error::Parse(format!("bad PFM dimensions `{dims}`"))),
    };
    let scale: f32 = header_line(&mut reader)?
        .parse()
        .map_err(|_| Error::Parse("bad PFM scale".into()))?;
    let little_endian = scale < 0.0;

    let row_len = width * channels;
    let mut bytes = vec![0u8; row_len * height * 4];
    reader.read_exact(&mut bytes)?;
    let mut data = vec![0f32; row_len * height];
    for (file_row, chunk) in bytes.chunks_exact(row_len * 4).enumerate() {
        let y = height - 1 - file_row;
        for (i, b) in chunk.chunks_exact(4).enumerate() {
            let b = [b[0], b[1], b[2], b[3]];
            data[y * row_len + i] = if little_endian {
                f32::from_le_bytes(b)
            } else {
                f32::from_be_bytes(b)
            };
        }
    }
    Ok(FloatPlane {
        width,
        height,
        channels,
        data,
    })
}

pub fn write_pfm(path: &Path, plane: &FloatPlane) -> Result<()> {
    let magic = match plane.channels {
        1 => "Pf",
        3 => "PF",
        k => {
            return Err(Error::DimensionMismatch(format!(
                "PFM holds 1 or 3 channels, not {k}"
            )))
        }
    };
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "{magic}\n{} {}\n-1.0\n", plane.width, plane.height)?;
    let row_len = plane.width * plane.channels;
    for y in (0..plane.height).rev() {
        for v in &plane.data[y * row_len..(y + 1) * row_len] {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}
