//! Plain-text matrix loading and binary PGM images.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linops::LinearMap;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Parses comma-separated rows (blank lines and `#` comments skipped) into a dense map.
pub fn parse_dense_csv(text: &str) -> Result<LinearMap<f64>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: bad number `{}`", i + 1, f.trim())))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("matrix file has no rows".into()));
    }
    LinearMap::from_rows(&rows)
}

pub fn load_dense_csv(path: &Path) -> Result<LinearMap<f64>> {
    parse_dense_csv(&fs::read_to_string(path).map_err(|e| io_err(path, e))?)
}

/// Writes a row-major matrix as CSV with round-trip precision.
pub fn dense_to_csv(rows: usize, cols: usize, data: &[f64]) -> String {
    let mut out = String::new();
    for i in 0..rows {
        let line: Vec<String> = data[i * cols..(i + 1) * cols]
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Grayscale image with values in `[0, 1]`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub height: usize,
    pub width: usize,
    pub pixels: Vec<f64>,
}

impl Image {
    pub fn new(height: usize, width: usize, pixels: Vec<f64>) -> Result<Self> {
        crate::error::check_len("image pixels", height * width, pixels.len())?;
        Ok(Image { height, width, pixels })
    }
}

fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Result<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Parse("truncated PGM header".into()));
    }
    Ok(&bytes[start..*pos])
}

fn header_number(bytes: &[u8], pos: &mut usize) -> Result<usize> {
    let tok = next_token(bytes, pos)?;
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad number in PGM header".into()))
}

/// Decodes an 8-bit binary PGM (P5), rescaling samples to `[0, 1]`.
pub fn decode_pgm(bytes: &[u8]) -> Result<Image> {
    let mut pos = 0;
    if next_token(bytes, &mut pos)? != b"P5" {
        return Err(Error::Parse("not a binary PGM (P5) file".into()));
    }
    let width = header_number(bytes, &mut pos)?;
    let height = header_number(bytes, &mut pos)?;
    let maxval = header_number(bytes, &mut pos)?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Parse("only 8-bit PGM files are supported".into()));
    }
    pos += 1;
    let n = width * height;
    let data = bytes
        .get(pos..pos + n)
        .ok_or_else(|| Error::Parse("PGM pixel data is truncated".into()))?;
    let scale = 1.0 / maxval as f64;
    Image::new(height, width, data.iter().map(|&b| b as f64 * scale).collect())
}

/// Encodes as 8-bit P5, clamping to `[0, 1]` first.
pub fn encode_pgm(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend(img.pixels.iter().map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8));
    out
}

pub fn load_pgm(path: &Path) -> Result<Image> {
    decode_pgm(&fs::read(path).map_err(|e| io_err(path, e))?)
}

pub fn save_pgm(path: &Path, img: &Image) -> Result<()> {
    fs::write(path, encode_pgm(img)).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_matrix() {
        let m = parse_dense_csv("# comment\n1, 0\n0,2\n\n1,1\n").unwrap();
        assert_eq!(m.apply(&[1.0, 1.0]).unwrap(), vec![1.0, 2.0, 2.0]);
        assert!(parse_dense_csv("1,2\n3\n").is_err());
        assert!(parse_dense_csv("1,x\n").is_err());
        let back = parse_dense_csv(&dense_to_csv(1, 2, &[0.1, 1.0 / 3.0])).unwrap();
        assert_eq!(back.apply(&[1.0, 0.0]).unwrap(), vec![0.1]);
    }

    #[test]
    fn pgm_round_trip_on_grid_values() {
        let pixels: Vec<f64> = (0..12).map(|i| (i * 20) as f64 / 255.0).collect();
        let img = Image::new(3, 4, pixels).unwrap();
        let back = decode_pgm(&encode_pgm(&img)).unwrap();
        assert_eq!(back.height, 3);
        assert_eq!(back.width, 4);
        for (a, b) in back.pixels.iter().zip(&img.pixels) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pgm_clamps_and_rejects_garbage() {
        let img = Image::new(1, 2, vec![-0.5, 1.5]).unwrap();
        assert_eq!(&encode_pgm(&img)[encode_pgm(&img).len() - 2..], &[0, 255]);
        assert!(decode_pgm(b"P2\n1 1\n255\n0").is_err());
        assert!(decode_pgm(b"P5\n# note\n2 2\n255\n\x00").is_err());
    }
}
