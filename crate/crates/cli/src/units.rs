//! Unit-suffixed number grammar for run configurations.
//!
//! Physical quantities are written as strings like `"780 nm"`, `"3 mW"`,
//! `"2 mrad"`, `"150 uK"`, `"10 s"`: a number, whitespace, then an SI unit
//! with an optional n/u/m/k prefix on the bases m, W, rad, K, s. Explicit
//! units keep the mixed nm/mW/uK inputs of this domain from silently
//! dropping factors of a thousand. Dimensionless values (indices, counts,
//! fractions) and quantities whose units fall outside the grammar (kg,
//! J m^3, rad/s, m/s, cycles/m — documented per field) are plain JSON
//! numbers.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Meter,
    Watt,
    Radian,
    Kelvin,
    Second,
}

impl Unit {
    fn symbol(&self) -> &'static str {
        match self {
            Unit::Meter => "m",
            Unit::Watt => "W",
            Unit::Radian => "rad",
            Unit::Kelvin => "K",
            Unit::Second => "s",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Parse `"780 nm"`-style strings into SI base units, checking the
/// dimension against `expected`.
pub fn parse_quantity(raw: &str, expected: Unit) -> Result<f64, String> {
    let s = raw.trim();
    let (num_part, unit_part) = match s.find(|c: char| c.is_whitespace()) {
        Some(i) => (&s[..i], s[i..].trim()),
        None => {
            // allow forms like "780nm" by splitting at the first letter
            // after the numeric body
            let idx = s
                .find(|c: char| c.is_alphabetic() && c != 'e' && c != 'E')
                .ok_or_else(|| format!("missing unit in {raw:?} (expected {expected})"))?;
            (&s[..idx], &s[idx..])
        }
    };
    let value: f64 = num_part
        .parse()
        .map_err(|_| format!("unparseable number {num_part:?} in {raw:?}"))?;
    if unit_part.is_empty() {
        return Err(format!("missing unit in {raw:?} (expected {expected})"));
    }
    let (prefix, base) = split_unit(unit_part)
        .ok_or_else(|| format!("unknown unit {unit_part:?} in {raw:?}"))?;
    if base != expected {
        return Err(format!(
            "unit mismatch in {raw:?}: got {base}, expected {expected}"
        ));
    }
    Ok(value * prefix)
}

fn split_unit(u: &str) -> Option<(f64, Unit)> {
    let base_of = |s: &str| match s {
        "m" => Some(Unit::Meter),
        "W" => Some(Unit::Watt),
        "rad" => Some(Unit::Radian),
        "K" => Some(Unit::Kelvin),
        "s" => Some(Unit::Second),
        _ => None,
    };
    if let Some(base) = base_of(u) {
        return Some((1.0, base));
    }
    let mut chars = u.chars();
    let head = chars.next()?;
    let rest: &str = &u[head.len_utf8()..];
    let scale = match head {
        'n' => 1e-9,
        'u' | 'µ' => 1e-6,
        'm' => 1e-3,
        'k' => 1e3,
        _ => return None,
    };
    base_of(rest).map(|b| (scale, b))
}
