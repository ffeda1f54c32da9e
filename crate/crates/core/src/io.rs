//! Plain-text tensor files.
//!
//! ```text
//! tensor <d> <n1> ... <nd>
//! <values in buffer order, first index fastest, whitespace separated>
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

/// Serializes with 17 significant digits so that reading back is exact.
pub fn to_text(t: &DenseTensor) -> String {
    let mut s = String::with_capacity(t.len() * 25 + 32);
    write!(s, "tensor {}", t.order()).unwrap();
    for n in t.dims() {
        write!(s, " {n}").unwrap();
    }
    s.push('\n');
    for (k, v) in t.data().iter().enumerate() {
        write!(s, "{v:.16e}").unwrap();
        s.push(if (k + 1) % 8 == 0 { '\n' } else { ' ' });
    }
    if !s.ends_with('\n') {
        s.pop();
        s.push('\n');
    }
    s
}

pub fn from_text(text: &str) -> Result<DenseTensor> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty tensor file".into()))?;
    let mut head = header.split_whitespace();
    if head.next() != Some("tensor") {
        return Err(Error::Parse(format!("bad header line: {header:?}")));
    }
    let parse_usize = |tok: &str| {
        tok.parse::<usize>()
            .map_err(|e| Error::Parse(format!("bad integer {tok:?}: {e}")))
    };
    let d = parse_usize(head.next().ok_or_else(|| Error::Parse("missing order".into()))?)?;
    let dims: Vec<usize> = head.map(parse_usize).collect::<Result<_>>()?;
    if dims.len() != d {
        return Err(Error::Parse(format!(
            "header declares order {d} but lists {} dimensions",
            dims.len()
        )));
    }
    let data: Vec<f64> = lines
        .flat_map(str::split_whitespace)
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad value {tok:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    DenseTensor::new(dims, data)
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<DenseTensor> {
    from_text(&fs::read_to_string(path)?)
}

pub fn write_tensor(path: impl AsRef<Path>, t: &DenseTensor) -> Result<()> {
    fs::write(path, to_text(t))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let t = DenseTensor::from_fn(&[3, 2, 5], |i| {
            (i[0] as f64 + 0.1).ln() * std::f64::consts::PI.powi(i[1] as i32) / (i[2] as f64 + 3.0)
        });
        let back = from_text(&to_text(&t)).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn header_errors() {
        assert!(from_text("").is_err());
        assert!(from_text("matrix 2 2 2\n0 0 0 0").is_err());
        assert!(from_text("tensor 3 2 2\n0 0 0 0").is_err());
        assert!(from_text("tensor 2 2 2\n0 0 0").is_err());
        assert!(from_text("tensor 2 2 2\n0 0 x 0").is_err());
        let t = from_text("tensor 2 2 2\n1 2\n3 4\n").unwrap();
        assert_eq!(t.get(&[1, 0]), 2.0);
        assert_eq!(t.get(&[0, 1]), 3.0);
    }
}
