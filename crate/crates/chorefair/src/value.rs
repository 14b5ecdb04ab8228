//! Exact rational values.
//!
//! Every cost the library reports (bin counts, makespans, ratios, thresholds)
//! is an exact rational. Bin counts and plane counts happen to be integers;
//! makespans are `load / speed`; ratios divide two of the former. Keeping one
//! value domain means audits never compare across float rounding.

use num_rational::Ratio;
use thiserror::Error;

/// Exact rational value, stored in lowest terms with a positive denominator.
///
/// `i128` leaves ample headroom: with 64-bit integer sizes the worst sums and
/// cross-multiplied ratio comparisons in this crate stay far below the limit.
pub type Value = Ratio<i128>;

/// Shorthand for an integer-valued `Value`.
pub fn int(v: impl Into<i128>) -> Value {
    Value::from_integer(v.into())
}

/// `numer / denom` as a `Value`. Panics on a zero denominator.
pub fn frac(numer: i128, denom: i128) -> Value {
    Value::new(numer, denom)
}

/// Ceiling of `a / b` on nonnegative integers. Panics if `b == 0`.
pub fn ceil_div(a: u128, b: u128) -> u128 {
    assert!(b > 0, "ceil_div by zero");
    a / b + u128::from(a % b != 0)
}

/// Smallest integer ≥ `v` (for nonnegative `v`), as a `Value`.
pub fn ceil_value(v: Value) -> Value {
    Value::from_integer(v.ceil().to_integer())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseValueError {
    #[error("empty value")]
    Empty,
    #[error("invalid value literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `"p/q"`, a plain integer `"k"`, or a decimal literal `"0.1"`
/// (decimals are read exactly: `0.1` becomes `1/10`, not a float).
pub fn parse_value(s: &str) -> Result<Value, ParseValueError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseValueError::Empty);
    }
    let invalid = || ParseValueError::Invalid(s.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let n: i128 = num.trim().parse().map_err(|_| invalid())?;
        let d: i128 = den.trim().parse().map_err(|_| invalid())?;
        if d == 0 {
            return Err(ParseValueError::ZeroDenominator(s.to_string()));
        }
        return Ok(Value::new(n, d));
    }
    if let Some((whole, fract)) = s.split_once('.') {
        let sign = if whole.trim_start().starts_with('-') { -1 } else { 1 };
        let w: i128 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().map_err(|_| invalid())?
        };
        if fract.is_empty() || !fract.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let f: i128 = fract.parse().map_err(|_| invalid())?;
        let scale = 10i128
            .checked_pow(fract.len() as u32)
            .ok_or_else(invalid)?;
        return Ok(Value::from_integer(w) + Value::new(sign * f, scale));
    }
    let n: i128 = s.parse().map_err(|_| invalid())?;
    Ok(Value::from_integer(n))
}

/// Canonical `"p/q"` rendering (always carries the denominator, e.g. `"2/1"`).
pub fn fraction_string(v: &Value) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Decimal rendering with `places` digits after the point, rounded half away
/// from zero. A convenience next to the authoritative fraction column.
pub fn decimal_string(v: &Value, places: u32) -> String {
    let scale = 10i128.pow(places);
    let num = v.numer() * scale;
    let den = *v.denom();
    let (q, r) = (num / den, num % den);
    let mut scaled = q;
    if 2 * r.abs() >= den.abs() {
        scaled += if (num < 0) != (den < 0) { -1 } else { 1 };
    }
    let neg = scaled < 0;
    let abs = scaled.abs();
    let (whole, fract) = (abs / scale, abs % scale);
    format!(
        "{}{}.{:0width$}",
        if neg { "-" } else { "" },
        whole,
        fract,
        width = places as usize
    )
}
