//! Ordinary continued fractions: finite expansions with parity control,
//! periodic expansions of quadratic irrationals, evaluation and convergents.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{rational, BigRat, JsonInt, Poly, RealAlgebraic};

/// Requested parity of the length of a finite expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Any,
    Odd,
    Even,
}

/// `[a0; a1, ..., ak, (p1, ..., pm)]`; the period is empty for finite ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    head: Vec<BigInt>,
    period: Vec<BigInt>,
}

fn check_tail(terms: &[BigInt], skip_first: bool) -> Result<()> {
    let start = usize::from(skip_first);
    if terms.iter().skip(start).any(|a| !a.is_positive()) {
        return Err(Error::InvalidInput("partial quotients after the first must be positive".into()));
    }
    Ok(())
}

impl ContinuedFraction {
    pub fn finite(head: Vec<BigInt>) -> Result<Self> {
        if head.is_empty() {
            return Err(Error::InvalidInput("empty continued fraction".into()));
        }
        check_tail(&head, true)?;
        Ok(ContinuedFraction { head, period: Vec::new() })
    }

    pub fn from_i64(head: &[i64]) -> Result<Self> {
        Self::finite(head.iter().map(|&a| BigInt::from(a)).collect())
    }

    /// A periodic expansion, reduced to a primitive period and the shortest
    /// preperiod.
    pub fn periodic(head: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidInput("empty period".into()));
        }
        check_tail(&head, true)?;
        if period.iter().any(|a| !a.is_positive()) {
            return Err(Error::InvalidInput("period terms must be positive".into()));
        }
        let mut period = primitive_word(period);
        let mut head = head;
        // absorb the end of the head into the period
        while head.last().is_some_and(|l| *l == period[period.len() - 1]) {
            period.rotate_right(1);
            head.pop();
        }
        Ok(ContinuedFraction { head, period })
    }

    pub fn head(&self) -> &[BigInt] {
        &self.head
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Number of terms of a finite expansion.
    pub fn len(&self) -> Option<usize> {
        self.is_finite().then_some(self.head.len())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `i`-th partial quotient, when it exists.
    pub fn term(&self, i: usize) -> Option<&BigInt> {
        if i < self.head.len() {
            Some(&self.head[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(&self.period[(i - self.head.len()) % self.period.len()])
        }
    }

    /// Up to `k` leading terms.
    pub fn terms(&self, k: usize) -> Vec<BigInt> {
        (0..k).map_while(|i| self.term(i).cloned()).collect()
    }

    /// Parses `[1;2,2]`, `[1;(2)]`, `[(1)]` or a bare list `1,2,2`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).unwrap_or(t);
        let (pre, per) = match inner.find('(') {
            Some(i) => {
                let close = inner.rfind(')').ok_or_else(|| Error::Parse(format!("unbalanced period in {s:?}")))?;
                (&inner[..i], Some(&inner[i + 1..close]))
            }
            None => (inner, None),
        };
        let nums = |x: &str| -> Result<Vec<BigInt>> {
            x.split([';', ','])
                .map(str::trim)
                .filter(|w| !w.is_empty())
                .map(|w| w.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad term {w:?} in {s:?}"))))
                .collect()
        };
        let head = nums(pre)?;
        match per {
            Some(p) => Self::periodic(head, nums(p)?),
            None => Self::finite(head),
        }
    }
}

fn primitive_word(w: Vec<BigInt>) -> Vec<BigInt> {
    let n = w.len();
    for d in 1..n {
        if n % d == 0 && (0..n).all(|i| w[i] == w[i % d]) {
            return w[..d].to_vec();
        }
    }
    w
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
        if self.head.is_empty() {
            return write!(f, "[({})]", join(&self.period));
        }
        write!(f, "[{}", self.head[0])?;
        let rest = join(&self.head[1..]);
        let has_tail = !rest.is_empty() || !self.period.is_empty();
        if has_tail {
            f.write_str(";")?;
        }
        f.write_str(&rest)?;
        if !self.period.is_empty() {
            if !rest.is_empty() {
                f.write_str(",")?;
            }
            write!(f, "({})", join(&self.period))?;
        }
        f.write_str("]")
    }
}

impl Serialize for ContinuedFraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ContinuedFraction", 2)?;
        st.serialize_field("head", &self.head.iter().map(JsonInt::from).collect::<Vec<_>>())?;
        st.serialize_field("period", &self.period.iter().map(JsonInt::from).collect::<Vec<_>>())?;
        st.end()
    }
}

/// Euclidean expansion of `r`, with the last term rewritten when needed to
/// reach the requested parity of length.
pub fn expand(r: &BigRat, parity: Parity) -> ContinuedFraction {
    let mut terms = Vec::new();
    let (mut p, mut q) = (r.numer().clone(), r.denom().clone());
    while !q.is_zero() {
        let (a, rem) = p.div_mod_floor(&q);
        terms.push(a);
        p = q;
        q = rem;
    }
    let odd = terms.len() % 2 == 1;
    let flip = match parity {
        Parity::Any => false,
        Parity::Odd => !odd,
        Parity::Even => odd,
    };
    if flip {
        let last = terms.last_mut().expect("nonempty");
        *last -= 1;
        terms.push(BigInt::one());
    }
    ContinuedFraction { head: terms, period: Vec::new() }
}

/// Continuants `(p_k, q_k)` of the given terms.
pub fn continuants(terms: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::with_capacity(terms.len());
    for a in terms {
        let p2 = a * &p1 + &p0;
        let q2 = a * &q1 + &q0;
        out.push((p2.clone(), q2.clone()));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    out
}

/// Exact value of a finite expansion.
pub fn evaluate_finite(cf: &ContinuedFraction) -> Result<BigRat> {
    if !cf.is_finite() {
        return Err(Error::InvalidInput("expansion is periodic".into()));
    }
    let (p, q) = continuants(&cf.head).pop().expect("nonempty");
    Ok(BigRat::new(p, q))
}

/// Exact value: a rational for finite expansions, a quadratic irrational for
/// periodic ones.
pub fn evaluate(cf: &ContinuedFraction) -> Result<RealAlgebraic> {
    if cf.is_finite() {
        return Ok(RealAlgebraic::from_rational(evaluate_finite(cf)?));
    }
    // purely periodic tail y = [p1; ..., pm, y]
    let c = continuants(&cf.period);
    let (pm, qm) = c[c.len() - 1].clone();
    let (pm1, qm1) = if c.len() >= 2 { c[c.len() - 2].clone() } else { (BigInt::one(), BigInt::zero()) };
    // qm y^2 + (qm1 - pm) y - pm1 = 0
    let quad = Poly::from_bigints(&[-pm1, qm1 - pm, qm]);
    let roots = RealAlgebraic::roots_of(&quad)?;
    let y = roots.into_iter().last().ok_or(Error::ComplexRoots)?;
    if cf.head.is_empty() {
        return Ok(y);
    }
    let k = y.field()?;
    let yy = k.generator();
    let h = continuants(&cf.head);
    let (hk, gk) = h[h.len() - 1].clone();
    let (hk1, gk1) = if h.len() >= 2 { h[h.len() - 2].clone() } else { (BigInt::one(), BigInt::zero()) };
    let lin = |a: BigInt, b: BigInt| k.add(&k.scale(&yy, &BigRat::from_integer(a)), &k.from_rat(BigRat::from_integer(b)));
    let x = k.div(&lin(hk, hk1), &lin(gk, gk1))?;
    k.to_real(&x)
}

/// Periodic expansion of a quadratic irrational, found by running the Gauss
/// map on exact surd states `(P + sqrt(D)) / Q` until a state repeats.
pub fn expand_quadratic(a: &RealAlgebraic) -> Result<ContinuedFraction> {
    if let Some(r) = a.as_rational() {
        return Ok(expand(&r, Parity::Any));
    }
    if a.degree() != 2 {
        return Err(Error::InvalidInput(format!("expected a quadratic irrational, got degree {}", a.degree())));
    }
    let m = a.minpoly();
    let (c0, c1, c2) = (&m[0], &m[1], &m[2]);
    let disc: BigInt = c1 * c1 - BigInt::from(4) * c2 * c0;
    // decide which root a is by comparing with -c1 / (2 c2)
    let centre = BigRat::new(-c1.clone(), BigInt::from(2) * c2);
    let upper = a.compare_rational(&centre) == std::cmp::Ordering::Greater;
    let (mut p, mut q) = if upper { (-c1.clone(), BigInt::from(2) * c2) } else { (c1.clone(), BigInt::from(-2) * c2) };
    let s = disc.sqrt();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut digits = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let period = digits.split_off(start);
            return ContinuedFraction::periodic(digits, period);
        }
        seen.insert((p.clone(), q.clone()), digits.len());
        let a_k = if q.is_positive() { (&p + &s).div_floor(&q) } else { (&p + &s + BigInt::one()).div_floor(&q) };
        let p2 = &a_k * &q - &p;
        let q2 = (&disc - &p2 * &p2) / &q;
        digits.push(a_k);
        p = p2;
        q = q2;
    }
}

/// The first `k` convergents `p_i / q_i`.
pub fn convergents(cf: &ContinuedFraction, k: usize) -> Result<Vec<BigRat>> {
    if let Some(n) = cf.len() {
        if k > n {
            return Err(Error::OutOfRange { index: k, available: n });
        }
    }
    Ok(continuants(&cf.terms(k)).into_iter().map(|(p, q)| BigRat::new(p, q)).collect())
}

/// Formats a list of rationals as strings.
pub fn fmt_rats(v: &[BigRat]) -> Vec<String> {
    v.iter().map(rational::fmt).collect()
}
