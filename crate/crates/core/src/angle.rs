//! Parsing of angles written as rational multiples of π.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Parse `pi`, `-pi`, `pi/3`, `2pi/3`, `2*pi/3`, `-16pi/15` or a plain number.
pub fn parse_angle(text: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("cannot parse angle `{text}`"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.to_ascii_lowercase().replace('π', "pi");
    let Some(pos) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let head = s[..pos].trim_end_matches('*');
    let tail = &s[pos + 2..];
    let factor = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let divisor = match tail {
        "" => 1.0,
        t => t
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(bad)?,
    };
    let value = factor * PI / divisor;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}
