//! Exact fractions. Every density, λ, γ and ε value in the crate is one of these.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn rat(num: i64, den: i64) -> Rational {
    Ratio::new(num, den)
}

pub fn int(n: i64) -> Rational {
    Ratio::from_integer(n)
}

/// Always "p/q", even for integers, so that columns parse uniformly.
pub fn fmt_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses "p/q", "p", or a finite decimal such as "0.01".
pub fn parse_ratio(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Config(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::Config(format!("zero denominator in {text:?}")));
        }
        return Ok(rat(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let w: i64 = if whole.is_empty() || whole == "-" { 0 } else { whole.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let mag = w.abs() * den + f;
        return Ok(rat(if negative { -mag } else { mag }, den));
    }
    t.parse::<i64>().map(int).map_err(|_| bad())
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_three_spellings() {
        assert_eq!(parse_ratio("1/100").unwrap(), rat(1, 100));
        assert_eq!(parse_ratio("0.01").unwrap(), rat(1, 100));
        assert_eq!(parse_ratio("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_ratio("3").unwrap(), int(3));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }

    #[test]
    fn lowest_terms_and_sign() {
        let r = rat(6, -8);
        assert_eq!((*r.numer(), *r.denom()), (-3, 4));
        assert_eq!(fmt_ratio(&int(2)), "2/1");
    }
}
