use std::path::Path;

use crate::sampler::{NoiseSequence, Origin};

use super::{fmt_f64, IoError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFormat {
    /// One decimal per line.
    Text,
    /// Little-endian IEEE-754 doubles, no header.
    Binary,
}

impl SampleFormat {
    /// `.f64` is binary; `.csv`, `.txt` and anything else is text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("f64") => SampleFormat::Binary,
            _ => SampleFormat::Text,
        }
    }
}

/// Parse one value per line; blank lines and `#` comments are skipped.
pub fn read_text_samples(text: &str) -> Result<Vec<f64>, IoError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t
            .parse()
            .map_err(|_| IoError::Parse(format!("line {}: not a number: {t:?}", i + 1)))?;
        if !v.is_finite() {
            return Err(IoError::Parse(format!("line {}: non-finite value", i + 1)));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn read_samples(path: &Path) -> Result<NoiseSequence, IoError> {
    let bytes = std::fs::read(path).map_err(|e| IoError::io(path, e))?;
    let samples = match SampleFormat::from_path(path) {
        SampleFormat::Binary => {
            if bytes.len() % 8 != 0 {
                return Err(IoError::Parse(format!(
                    "{}: length {} is not a multiple of 8",
                    path.display(),
                    bytes.len()
                )));
            }
            let v: Vec<f64> = bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
                .collect();
            if let Some(i) = v.iter().position(|x| !x.is_finite()) {
                return Err(IoError::Parse(format!(
                    "{}: non-finite value at index {i}",
                    path.display()
                )));
            }
            v
        }
        SampleFormat::Text => {
            let text =
                String::from_utf8(bytes).map_err(|_| IoError::Parse(format!("{}: not UTF-8 text", path.display())))?;
            read_text_samples(&text).map_err(|e| match e {
                IoError::Parse(m) => IoError::Parse(format!("{}: {m}", path.display())),
                other => other,
            })?
        }
    };
    if samples.is_empty() {
        return Err(IoError::Parse(format!("{}: no samples", path.display())));
    }
    Ok(NoiseSequence::new(samples, Origin::external())?)
}

pub fn write_samples(path: &Path, samples: &[f64]) -> Result<(), IoError> {
    let bytes: Vec<u8> = match SampleFormat::from_path(path) {
        SampleFormat::Binary => samples.iter().flat_map(|v| v.to_le_bytes()).collect(),
        SampleFormat::Text => {
            let mut s = String::with_capacity(samples.len() * 24);
            for &v in samples {
                s.push_str(&fmt_f64(v));
                s.push('\n');
            }
            s.into_bytes()
        }
    };
    std::fs::write(path, bytes).map_err(|e| IoError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_formats_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let v = vec![0.1, -1.0 / 3.0, 1e300, -0.0, 7.0];
        for name in ["a.txt", "a.csv", "a.f64"] {
            let p = dir.path().join(name);
            write_samples(&p, &v).unwrap();
            assert_eq!(read_samples(&p).unwrap().samples(), &v[..]);
        }
        assert_eq!(std::fs::metadata(dir.path().join("a.f64")).unwrap().len(), 40);
    }

    #[test]
    fn bad_inputs() {
        let dir = tempfile::tempdir().unwrap();
        let empty = dir.path().join("e.txt");
        std::fs::write(&empty, "").unwrap();
        assert!(matches!(read_samples(&empty), Err(IoError::Parse(_))));
        let odd = dir.path().join("o.f64");
        std::fs::write(&odd, [0u8; 12]).unwrap();
        assert!(matches!(read_samples(&odd), Err(IoError::Parse(_))));
        let e = read_text_samples("1.0\n\nabc\n").unwrap_err();
        assert!(e.to_string().contains("line 3"));
        assert!(read_text_samples("inf\n").is_err());
    }
}
