//! Rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number with a positive, coprime denominator.
pub type BigRat = BigRational;

pub fn rat(p: i64, q: i64) -> BigRat {
    BigRat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn from_big(n: BigInt) -> BigRat {
    BigRat::from_integer(n)
}

/// Largest integer not exceeding `r`.
pub fn floor(r: &BigRat) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Smallest integer not below `r`.
pub fn ceil(r: &BigRat) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

pub fn to_f64(r: &BigRat) -> f64 {
    // numerator and denominator may both overflow f64; scale first
    let n = r.numer();
    let d = r.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    if nb < 1000 && db < 1000 {
        return n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN);
    }
    let shift = (nb.max(db) - 900).max(0) as usize;
    let ns: BigInt = n >> shift;
    let ds: BigInt = d >> shift;
    ns.to_f64().unwrap_or(0.0) / ds.to_f64().unwrap_or(1.0)
}

/// Formats as `p` or `p/q`.
pub fn fmt(r: &BigRat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or a finite decimal such as `-1.25`.
pub fn parse(s: &str) -> Result<BigRat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRat::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip.is_empty() {
            BigInt::zero()
        } else {
            ip.parse().map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?
        };
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let frac: BigInt = if fp.is_empty() { BigInt::zero() } else { fp.parse().unwrap() };
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let v = BigRat::new(whole * &scale + frac, scale);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(BigRat::from_integer(n))
}

pub fn abs(r: &BigRat) -> BigRat {
    r.abs()
}

/// Midpoint of two rationals.
pub fn mid(a: &BigRat, b: &BigRat) -> BigRat {
    (a + b) / int(2)
}

/// Returns 2^-bits.
pub fn pow2_neg(bits: u32) -> BigRat {
    BigRat::new(BigInt::one(), BigInt::one() << bits as usize)
}

pub fn big_to_i64(n: &BigInt) -> Result<i64> {
    n.to_i64().ok_or(Error::Overflow)
}

/// Rational interval arithmetic used for certified evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRat,
    pub hi: BigRat,
}

impl RatInterval {
    pub fn point(v: BigRat) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn new(lo: BigRat, hi: BigRat) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn add(&self, o: &Self) -> Self {
        RatInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Self) -> Self {
        RatInterval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Self {
        RatInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    pub fn scale(&self, k: &BigRat) -> Self {
        if k.is_negative() {
            RatInterval { lo: &self.hi * k, hi: &self.lo * k }
        } else {
            RatInterval { lo: &self.lo * k, hi: &self.hi * k }
        }
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(RatInterval { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn width(&self) -> BigRat {
        &self.hi - &self.lo
    }

    /// Sign when the interval excludes zero.
    pub fn sign(&self) -> Option<std::cmp::Ordering> {
        if self.lo.is_positive() {
            Some(std::cmp::Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(std::cmp::Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(std::cmp::Ordering::Equal)
        } else {
            None
        }
    }
}
