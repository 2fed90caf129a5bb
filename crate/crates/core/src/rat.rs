//! Exact rationals and their canonical `p/q` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// `p/q` with an explicit denominator, `1/1` included.
pub fn to_text(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn from_text(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let q: BigInt = q
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(p, q))
}

pub fn sign_of(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Least common multiple of the denominators, as an integer.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Sign helper for Koszul rules: `(-1)^e`.
#[inline]
pub fn parity_sign(e: u32) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Clear denominators and common factors; the first nonzero entry becomes
/// positive.
pub fn primitive_integers(v: &[Rat]) -> Vec<i64> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let d = common_denominator(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|r| (r * Rat::from_integer(d.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let flip = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    ints.iter()
        .map(|x| {
            let mut y = if g.is_zero() { x.clone() } else { x / &g };
            if flip {
                y = -y;
            }
            y.to_i64().expect("small integer form")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_is_canonical() {
        assert_eq!(to_text(&frac(4, -6)), "-2/3");
        assert_eq!(to_text(&int(5)), "5/1");
        assert_eq!(from_text("-2/3").unwrap(), frac(-2, 3));
        assert_eq!(from_text("7").unwrap(), int(7));
        assert!(from_text("1/0").is_err());
        assert!(from_text("x/2").is_err());
    }
}
