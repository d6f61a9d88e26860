//! Real algebraic numbers of degree at most three.
//!
//! A number is stored as its primitive integer minimal polynomial together
//! with a rational isolating interval. Rational numbers have degree one and a
//! degenerate interval `lo == hi`. For irrational numbers the endpoints are
//! never roots and the open interval holds exactly one real root.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use super::field::NumberField;
use super::poly::Poly;
use super::rational::{self, BigRat, RatInterval};
use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 3;

#[derive(Clone, Debug)]
pub struct RealAlgebraic {
    minpoly: Vec<BigInt>,
    lo: BigRat,
    hi: BigRat,
}

impl PartialEq for RealAlgebraic {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl Eq for RealAlgebraic {}

impl PartialOrd for RealAlgebraic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}

impl Ord for RealAlgebraic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl RealAlgebraic {
    pub fn from_rational(r: BigRat) -> Self {
        let minpoly = vec![-r.numer().clone(), r.denom().clone()];
        RealAlgebraic { minpoly, lo: r.clone(), hi: r }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rational::int(n))
    }

    /// Builds the unique root of `poly` inside `[lo, hi]`.
    ///
    /// `poly` must have degree at most three and be irreducible, or be any
    /// polynomial whose root in the interval is rational.
    pub fn new(poly: &Poly, lo: BigRat, hi: BigRat) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInput("isolating interval has lo > hi".into()));
        }
        let deg = poly.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
        if deg == 0 {
            return Err(Error::InvalidInput("constant polynomial has no roots".into()));
        }
        // rational roots in the interval are returned as degree one
        let rr: Vec<BigRat> = poly.rational_roots().into_iter().filter(|r| *r >= lo && *r <= hi).collect();
        if rr.len() > 1 {
            return Err(Error::InvalidInput("interval contains several roots".into()));
        }
        if let Some(r) = rr.into_iter().next() {
            let sf = poly.squarefree();
            let n = sf.count_roots(&lo, &hi) + usize::from(sf.eval(&lo).is_zero());
            if n != 1 {
                return Err(Error::InvalidInput("interval does not isolate a single root".into()));
            }
            return Ok(Self::from_rational(r));
        }
        if deg > MAX_DEGREE {
            return Err(Error::Unsupported(format!("algebraic numbers of degree {deg}")));
        }
        if !poly.is_irreducible_low_degree()? {
            return Err(Error::InvalidInput(format!("{poly} is reducible and the root is irrational")));
        }
        if poly.count_roots(&lo, &hi) != 1 {
            return Err(Error::InvalidInput(format!("[{}, {}] does not isolate one root of {poly}", rational::fmt(&lo), rational::fmt(&hi))));
        }
        Ok(RealAlgebraic { minpoly: poly.primitive_int(), lo, hi })
    }

    /// All real roots of a polynomial of degree at most three, ascending.
    pub fn roots_of(poly: &Poly) -> Result<Vec<RealAlgebraic>> {
        let deg = poly.degree().unwrap_or(0);
        if deg > MAX_DEGREE {
            return Err(Error::Unsupported(format!("polynomial of degree {deg}")));
        }
        let mut out = Vec::new();
        // split off rational roots; the cofactor is irreducible (degree <= 3)
        let mut rest = poly.squarefree();
        for r in poly.rational_roots() {
            out.push(Self::from_rational(r.clone()));
            let lin = Poly::new(vec![-r, BigRat::one()]);
            rest = rest.div_rem(&lin)?.0;
        }
        if rest.degree().unwrap_or(0) >= 2 {
            for (lo, hi) in rest.isolate_real_roots() {
                out.push(RealAlgebraic { minpoly: rest.primitive_int(), lo, hi });
            }
        }
        out.sort();
        Ok(out)
    }

    /// Convenience constructor: the positive square root of a positive
    /// rational (rational result when it is a perfect square).
    pub fn sqrt(r: &BigRat) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::InvalidInput("square root of a negative number".into()));
        }
        let p = Poly::new(vec![-r.clone(), BigRat::zero(), BigRat::one()]);
        let roots = Self::roots_of(&p)?;
        Ok(roots.into_iter().last().expect("nonnegative rational has a real square root"))
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn minpoly_poly(&self) -> Poly {
        Poly::from_bigints(&self.minpoly)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn as_rational(&self) -> Option<BigRat> {
        if self.is_rational() {
            Some(BigRat::new(-self.minpoly[0].clone(), self.minpoly[1].clone()))
        } else {
            None
        }
    }

    pub fn interval(&self) -> (&BigRat, &BigRat) {
        (&self.lo, &self.hi)
    }

    pub fn rat_interval(&self) -> RatInterval {
        RatInterval::new(self.lo.clone(), self.hi.clone())
    }

    /// Halves the isolating interval once.
    pub fn bisect(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        let p = self.minpoly_poly();
        let m = rational::mid(&self.lo, &self.hi);
        let s_lo = p.sign_at(&self.lo);
        let s_m = p.sign_at(&m);
        debug_assert_ne!(s_m, Ordering::Equal, "irreducible polynomial of degree > 1 has a rational root");
        if s_m == s_lo {
            RealAlgebraic { minpoly: self.minpoly.clone(), lo: m, hi: self.hi.clone() }
        } else {
            RealAlgebraic { minpoly: self.minpoly.clone(), lo: self.lo.clone(), hi: m }
        }
    }

    /// Refines until the interval width is at most `width`.
    pub fn refine_to(&self, width: &BigRat) -> Self {
        let mut a = self.clone();
        while &a.hi - &a.lo > *width {
            a = a.bisect();
        }
        a
    }

    pub fn approx(&self) -> f64 {
        if let Some(r) = self.as_rational() {
            return rational::to_f64(&r);
        }
        let a = self.refine_to(&rational::pow2_neg(60));
        rational::to_f64(&rational::mid(&a.lo, &a.hi))
    }

    pub fn neg(&self) -> Self {
        let minpoly: Vec<BigInt> = self
            .minpoly
            .iter()
            .enumerate()
            .map(|(i, c)| if (self.degree() - i) % 2 == 1 { -c } else { c.clone() })
            .collect();
        // keep the leading coefficient positive
        RealAlgebraic { minpoly, lo: -&self.hi, hi: -&self.lo }
    }

    pub fn signum(&self) -> Ordering {
        self.compare_rational(&BigRat::zero())
    }

    pub fn compare_rational(&self, r: &BigRat) -> Ordering {
        if let Some(v) = self.as_rational() {
            return v.cmp(r);
        }
        let mut a = self.clone();
        loop {
            if r <= &a.lo {
                return Ordering::Greater;
            }
            if r >= &a.hi {
                return Ordering::Less;
            }
            a = a.bisect();
        }
    }

    /// Exact comparison of two real algebraic numbers.
    pub fn compare(&self, other: &Self) -> Ordering {
        if let Some(r) = other.as_rational() {
            return self.compare_rational(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.compare_rational(&r).reverse();
        }
        if self.minpoly == other.minpoly {
            // same minimal polynomial: equal iff the isolating intervals share the root
            let lo = (&self.lo).max(&other.lo).clone();
            let hi = (&self.hi).min(&other.hi).clone();
            if lo < hi && self.minpoly_poly().count_roots(&lo, &hi) == 1 {
                return Ordering::Equal;
            }
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            if &a.hi - &a.lo >= &b.hi - &b.lo {
                a = a.bisect();
            } else {
                b = b.bisect();
            }
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return rational::floor(&r);
        }
        let mut a = self.clone();
        loop {
            let f = rational::floor(&a.lo);
            // no integer in (lo, hi): floor(root) = floor(lo)
            if BigRat::from_integer(&f + BigInt::one()) >= a.hi {
                return f;
            }
            a = a.bisect();
        }
    }

    /// The number field `Q(self)` with `self` as its generator.
    pub fn field(&self) -> Result<NumberField> {
        NumberField::new(self.minpoly_poly(), self.clone())
    }

    /// Parses `p/q`, `sqrt(r)`, or `root(poly, lo, hi)`, optionally negated.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('-').filter(|r| r.trim_start().starts_with(['s', 'r'])) {
            return Ok(Self::parse(rest)?.neg());
        }
        if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            return Self::sqrt(&rational::parse(inner)?);
        }
        if let Some(inner) = s.strip_prefix("root(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("expected root(poly, lo, hi), got {s:?}")));
            }
            let p = Poly::parse(parts[0])?;
            return Self::new(&p, rational::parse(parts[1])?, rational::parse(parts[2])?);
        }
        Ok(Self::from_rational(rational::parse(s)?))
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return f.write_str(&rational::fmt(&r));
        }
        write!(
            f,
            "root({}, {}, {})",
            self.minpoly_poly(),
            rational::fmt(&self.lo),
            rational::fmt(&self.hi)
        )
    }
}

impl Serialize for RealAlgebraic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RealAlgebraic", 3)?;
        let coeffs: Vec<JsonInt> = self.minpoly.iter().map(JsonInt::from).collect();
        st.serialize_field("minpoly", &coeffs)?;
        st.serialize_field("lo", &rational::fmt(&self.lo))?;
        st.serialize_field("hi", &rational::fmt(&self.hi))?;
        st.end()
    }
}

/// Integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise.
#[derive(Serialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        use num_traits::ToPrimitive;
        match v.to_i64() {
            Some(x) => JsonInt::Small(x),
            None => JsonInt::Big(v.to_string()),
        }
    }
}

#[derive(Deserialize)]
struct RawAlgebraic {
    minpoly: Vec<serde_json_number::Num>,
    lo: String,
    hi: String,
}

mod serde_json_number {
    use serde::Deserialize;

    /// Coefficients may arrive as JSON numbers or strings.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub enum Num {
        Int(i64),
        Str(String),
    }
}

impl<'de> Deserialize<'de> for RealAlgebraic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawAlgebraic::deserialize(d)?;
        let coeffs: Vec<BigInt> = raw
            .minpoly
            .iter()
            .map(|c| match c {
                serde_json_number::Num::Int(v) => Ok(BigInt::from(*v)),
                serde_json_number::Num::Str(s) => s.parse::<BigInt>().map_err(|e| D::Error::custom(e.to_string())),
            })
            .collect::<std::result::Result<_, _>>()?;
        let lo = rational::parse(&raw.lo).map_err(|e| D::Error::custom(e.to_string()))?;
        let hi = rational::parse(&raw.hi).map_err(|e| D::Error::custom(e.to_string()))?;
        RealAlgebraic::new(&Poly::from_bigints(&coeffs), lo, hi).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Arithmetic operation selector for [`ra_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact field arithmetic on two real algebraic numbers lying in a common
/// number field of degree at most three.
pub fn ra_arith(a: &RealAlgebraic, b: &RealAlgebraic, op: ArithOp) -> Result<RealAlgebraic> {
    if op == ArithOp::Div && b.signum() == Ordering::Equal {
        return Err(Error::DivisionByZero);
    }
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        let r = match op {
            ArithOp::Add => x + y,
            ArithOp::Sub => x - y,
            ArithOp::Mul => x * y,
            ArithOp::Div => x / y,
        };
        return Ok(RealAlgebraic::from_rational(r));
    }
    // pick the operand of larger degree as the field generator
    let (gen, other, swapped) = if a.degree() >= b.degree() { (a, b, false) } else { (b, a, true) };
    let field = gen.field()?;
    let g = field.generator();
    let o = field.embed(other)?;
    let (x, y) = if swapped { (o, g) } else { (g, o) };
    let r = match op {
        ArithOp::Add => field.add(&x, &y),
        ArithOp::Sub => field.sub(&x, &y),
        ArithOp::Mul => field.mul(&x, &y),
        ArithOp::Div => field.div(&x, &y)?,
    };
    field.to_real(&r)
}
