//! Exact rational scalars.
//!
//! All geometric state in this crate is held as arbitrary-precision
//! rationals so tangency tests and Descartes identities can be decided
//! bit-exactly. Floating point only enters at the summation boundary and
//! in rendering.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator (both enforced by the underlying representation).
pub type Rat = BigRational;

/// Integer-valued rational.
pub fn rat_i(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// `p / q`. Panics on `q == 0`; callers own that check.
pub fn rat(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"` or `"p"`, signs allowed on either part.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t, None),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let q: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?,
        None => BigInt::from(1),
    };
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(p, q))
}

/// `"p/q"` for non-integers, `"p"` otherwise. Round-trips through
/// [`parse_rat`].
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn sqrt_exact_bigint(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Exact square root of a nonnegative rational, when one exists.
pub fn sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = sqrt_exact_bigint(r.numer())?;
    let d = sqrt_exact_bigint(r.denom())?;
    Some(BigRational::new(n, d))
}

/// Converts to `i64` when the value is an integer in range.
pub fn to_i64_exact(r: &Rat) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Sums `terms` by balanced pairwise reduction. Far cheaper than a left
/// fold when the common denominator grows large.
pub fn balanced_sum(mut terms: Vec<Rat>) -> Rat {
    if terms.is_empty() {
        return Rat::zero();
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len() / 2 + 1);
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}
