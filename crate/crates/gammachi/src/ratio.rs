//! Exact rational helpers.
//!
//! All quantities with arithmetic content are `BigRational`; floating
//! point never participates in a comparison that decides an outcome.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Shorthand for building a rational from machine integers.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Parses `"a/b"` or `"a"`. Decimal notation is rejected: the exactness
/// contract of the toolkit starts at the command line.
pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if s.contains('.') {
        return Err(Error::Parse(format!(
            "decimal notation is not accepted, write a ratio instead: {s:?}"
        )));
    }
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from(parse_int(s)?)),
        Some((n, d)) => {
            let numer = parse_int(n)?;
            let denom = parse_int(d)?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(numer, denom))
        }
    }
}

/// Renders `a/b`, or plain `a` for integers.
pub fn format_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn cube(r: &BigRational) -> BigRational {
    r * r * r
}

/// Largest integer `s >= 0` with `s * unit < bound`, or `None` when even
/// `s = 0` fails (i.e. `bound <= 0`). `unit` must be positive.
pub fn strict_multiple_bound(unit: &BigRational, bound: &BigRational) -> Option<BigInt> {
    debug_assert!(unit.is_positive());
    if !bound.is_positive() {
        return None;
    }
    let q = bound / unit;
    let c = q.ceil().to_integer();
    Some(c - BigInt::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ratios_and_integers() {
        assert_eq!(parse_rat("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rat("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert!(parse_rat("0.5").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rat(&rat(2, 4)), "1/2");
        assert_eq!(format_rat(&rat(8, 4)), "2");
    }

    #[test]
    fn strict_multiple_bound_handles_exact_division() {
        // 4 * (1/8) = 1/2 is not < 1/2, so the bound is 3.
        assert_eq!(
            strict_multiple_bound(&rat(1, 8), &rat(1, 2)),
            Some(BigInt::from(3))
        );
        assert_eq!(
            strict_multiple_bound(&rat(1, 8), &rat(3, 8)),
            Some(BigInt::from(2))
        );
        assert_eq!(strict_multiple_bound(&rat(1, 2), &rat_int(0)), None);
    }
}
