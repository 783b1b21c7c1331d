//! Field files, spectrum CSV and atomic file output.
//!
//! A field file is one JSON object:
//!
//! ```text
//! { "dims": [N0, N1, N2, N3], "coeffs": [re, im, re, im, ...] }
//! ```
//!
//! `coeffs` holds `2·16·V` numbers ordered by site (canonical row-major order),
//! then blade mask `0..16`, then real before imaginary part. Numbers are written
//! with 17 significant digits, which reads back bit-exactly.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use dkcalc::spectral::Spectrum;
use dkcalc::{Complex64, FormField, LatticeDims};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid field file: {0}")]
    Invalid(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldDoc {
    dims: [usize; 4],
    coeffs: Vec<f64>,
}

/// Formats a finite `f64` with 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn field_to_json(field: &FormField) -> String {
    let d = field.dims().extents();
    let mut out = String::with_capacity(field.len() * 2 * 26 + 64);
    write!(
        out,
        "{{\"dims\":[{},{},{},{}],\"coeffs\":[",
        d[0], d[1], d[2], d[3]
    )
    .unwrap();
    for (i, z) in field.coeffs().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format_number(z.re));
        out.push(',');
        out.push_str(&format_number(z.im));
    }
    out.push_str("]}\n");
    out
}

/// Byte offset of a 1-based `(line, column)` position in `text`.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

pub fn field_from_json(text: &str) -> Result<FormField, FileError> {
    let doc: FieldDoc = serde_json::from_str(text).map_err(|e| FileError::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let dims = LatticeDims::new(doc.dims).map_err(|e| FileError::Invalid(e.to_string()))?;
    let expected = dims.volume() * 32;
    if doc.coeffs.len() != expected {
        return Err(FileError::Invalid(format!(
            "lattice {dims} needs {expected} numbers in coeffs, found {}",
            doc.coeffs.len()
        )));
    }
    let coeffs: Vec<Complex64> = doc
        .coeffs
        .chunks_exact(2)
        .map(|c| Complex64::new(c[0], c[1]))
        .collect();
    FormField::from_coeffs(dims, &coeffs).map_err(|e| FileError::Invalid(e.to_string()))
}

pub fn read_field(path: &Path) -> Result<FormField, FileError> {
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    field_from_json(&text)
}

/// Writes `contents` to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), FileError> {
    let io_err = |source| FileError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn write_field(path: &Path, field: &FormField) -> Result<(), FileError> {
    write_atomic(path, &field_to_json(field))
}

pub const SPECTRUM_HEADER: &str = "p0,p1,p2,p3,re_lambda,im_lambda";

/// One header line, then sixteen rows per momentum.
pub fn spectrum_csv<'a>(spectra: impl IntoIterator<Item = &'a Spectrum>) -> String {
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    for s in spectra {
        for lam in &s.eigenvalues {
            let p = s.p;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                p[0],
                p[1],
                p[2],
                p[3],
                format_number(lam.re),
                format_number(lam.im)
            )
            .unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use dkcalc::fields::random_field;

    #[test]
    fn round_trip_is_bit_exact() {
        let f = random_field(LatticeDims::new([2, 1, 3, 1]).unwrap(), 5);
        let back = field_from_json(&field_to_json(&f)).unwrap();
        let bits = |g: &FormField| {
            g.coeffs()
                .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&back), bits(&f));
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
        assert_eq!(format_number(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn layout_is_site_then_blade_then_re_im() {
        let d = LatticeDims::new([1, 1, 1, 2]).unwrap();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 32];
        coeffs[16 + 3] = Complex64::new(1.5, -2.5);
        let f = FormField::from_coeffs(d, &coeffs).unwrap();
        let json = field_to_json(&f);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let arr = v["coeffs"].as_array().unwrap();
        assert_eq!(arr.len(), 64);
        assert_eq!(arr[2 * (16 + 3)].as_f64(), Some(1.5));
        assert_eq!(arr[2 * (16 + 3) + 1].as_f64(), Some(-2.5));
        assert_eq!(v["dims"], serde_json::json!([1, 1, 1, 2]));
    }

    #[test]
    fn parse_error_reports_byte_offset() {
        let text = "{\"dims\":[1,1,1,1],\n\"coeffs\":[1.0,,]}";
        match field_from_json(text) {
            Err(FileError::Parse { offset, .. }) => assert_eq!(&text[offset..offset + 1], ","),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_length_is_rejected() {
        let text = "{\"dims\":[1,1,1,1],\"coeffs\":[1.0, 2.0]}";
        assert!(matches!(field_from_json(text), Err(FileError::Invalid(_))));
        let text = "{\"dims\":[0,1,1,1],\"coeffs\":[]}";
        assert!(matches!(field_from_json(text), Err(FileError::Invalid(_))));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.json");
        write_atomic(&path, "one").unwrap();
        write_atomic(&path, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
