//! Text and binary encodings for variate columns.

use std::io::{self, BufRead, Read, Write};

use crate::error::{domain, Result};

/// Formats `v` with 17 significant digits, positional when the magnitude
/// allows it and in exponent form otherwise. Always uses '.' as separator.
pub fn fmt_sig17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:?}");
    }
    let mag = v.abs().log10().floor() as i32;
    if (-5..16).contains(&mag) {
        let decimals = (16 - mag) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.16e}")
    }
}

/// One value per line, 17 significant digits, no header.
pub fn write_csv<W: Write>(values: &[f64], mut out: W) -> io::Result<()> {
    for &v in values {
        writeln!(out, "{}", fmt_sig17(v))?;
    }
    out.flush()
}

pub fn read_csv<R: BufRead>(input: R) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for line in input.lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        match t.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) => return domain(format!("not a number: '{t}'")),
        }
    }
    Ok(values)
}

/// Raw little-endian `f64` column.
pub fn write_binary<W: Write>(values: &[f64], mut out: W) -> io::Result<()> {
    for &v in values {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()
}

pub fn read_binary<R: Read>(mut input: R) -> Result<Vec<f64>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() % 8 != 0 {
        return domain(format!(
            "binary column length {} is not a multiple of 8",
            bytes.len()
        ));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}
