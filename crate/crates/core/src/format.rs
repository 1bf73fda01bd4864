//! Output formatting shared by the JSON, CSV and text emitters.

use serde::Serializer;
use serde_json::value::RawValue;

/// Decimal rendering with 17 significant digits. Positional notation is used
/// for magnitudes in `[1e-5, 1e17)`, scientific otherwise.
pub fn real17(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "Infinity".into()
        } else {
            "-Infinity".into()
        };
    }
    if x == 0.0 {
        return "0.0000000000000000".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..17).contains(&mag) {
        let decimals = (16 - mag).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        // rounding can bump the magnitude (9.99.. -> 10.0); re-render if so
        let digits = s.chars().filter(|c| c.is_ascii_digit()).count();
        let leading_zeros = s
            .trim_start_matches('-')
            .chars()
            .take_while(|&c| c == '0' || c == '.')
            .filter(|&c| c == '0')
            .count();
        if digits - leading_zeros > 17 && decimals > 0 {
            return format!("{:.*}", decimals - 1, x);
        }
        s
    } else {
        format!("{:.16e}", x)
    }
}

/// serde adapter emitting an `f64` as a raw JSON number with 17 significant digits.
pub fn ser_real<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return s.serialize_none();
    }
    let raw = RawValue::from_string(real17(*x)).map_err(serde::ser::Error::custom)?;
    serde::Serialize::serialize(&raw, s)
}

pub fn ser_reals<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&Real(*x))?;
    }
    seq.end()
}

pub fn ser_real_pair<S: Serializer>(xs: &(f64, f64), s: S) -> Result<S::Ok, S::Error> {
    ser_reals(&[xs.0, xs.1], s)
}

/// Newtype wrapper serializing through [`ser_real`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl serde::Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_real(&self.0, s)
    }
}
