//! Planar integer angles: sail broken lines, LLS sequences, integer
//! trigonometry and a bounded search for triangles with prescribed angles.
//!
//! Every angle is moved by an integer affine map to the model angle between
//! the rays `y = 0` and `y = alpha x` with `alpha >= 1`. Corners of the sail
//! of the model angle are `(1,0)` and the even convergent vectors of
//! `alpha`, so all geometric output is produced from exact partial
//! quotients and mapped back.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::contfrac::{self, ContinuedFraction, Parity};
use crate::error::{Error, Result};
use crate::exact::{BigRat, FieldElem, IntMatrix, JsonInt, NumberField, RealAlgebraic};
use crate::intgeom::{int_length, int_sine, IntPoint};

/// Upper bound on partial quotients computed when looking for a period.
pub const MAX_PERIOD_SEARCH: usize = 400;

/// A ray from the vertex: through an integer point, or with direction
/// `(1, alpha)` for an irrational slope `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ray {
    Point(IntPoint),
    Slope(RealAlgebraic),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntAngle {
    vertex: IntPoint,
    ray1: Ray,
    ray2: Ray,
}

/// Lattice length-sine sequence; finite, or a head followed by a period.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LlsSequence {
    head: Vec<BigInt>,
    period: Vec<BigInt>,
}

impl LlsSequence {
    pub fn finite(elements: Vec<BigInt>) -> Result<Self> {
        if elements.is_empty() || elements.iter().any(|a| !a.is_positive()) {
            return Err(Error::InvalidInput("LLS elements must be positive and nonempty".into()));
        }
        Ok(LlsSequence { head: elements, period: Vec::new() })
    }

    pub fn from_i64(v: &[i64]) -> Result<Self> {
        Self::finite(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn periodic(head: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self> {
        if head.iter().chain(&period).any(|a| !a.is_positive()) {
            return Err(Error::InvalidInput("LLS elements must be positive".into()));
        }
        let cf = ContinuedFraction::periodic(head, period)?;
        Ok(LlsSequence { head: cf.head().to_vec(), period: cf.period().to_vec() })
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

    pub fn reversed(&self) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::Unsupported("reversal of an infinite sequence".into()));
        }
        let mut v = self.head.clone();
        v.reverse();
        Ok(LlsSequence { head: v, period: Vec::new() })
    }

    pub fn to_cf(&self) -> ContinuedFraction {
        if self.is_finite() {
            ContinuedFraction::finite(self.head.clone()).expect("validated")
        } else {
            ContinuedFraction::periodic(self.head.clone(), self.period.clone()).expect("validated")
        }
    }

    /// Parses the display form `(1,2,2)`, `((1))` or `(1,(1,2))`, or the
    /// same without the outer parentheses.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = match s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Some(r) if balanced(r) => r,
            _ => s,
        };
        let cf = ContinuedFraction::parse(&inner.replace(';', ","))?;
        if cf.is_finite() {
            Self::finite(cf.head().to_vec())
        } else {
            Self::periodic(cf.head().to_vec(), cf.period().to_vec())
        }
    }
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

impl fmt::Display for LlsSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
        f.write_str("(")?;
        f.write_str(&join(&self.head))?;
        if !self.period.is_empty() {
            if !self.head.is_empty() {
                f.write_str(",")?;
            }
            write!(f, "({})", join(&self.period))?;
        }
        f.write_str(")")
    }
}

impl Serialize for LlsSequence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LlsSequence", 2)?;
        st.serialize_field("head", &self.head.iter().map(JsonInt::from).collect::<Vec<_>>())?;
        st.serialize_field("period", &self.period.iter().map(JsonInt::from).collect::<Vec<_>>())?;
        st.end()
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Slope of the model angle: exact rational `p/q` or an element of `Q(alpha)`.
#[derive(Clone, Debug)]
enum Model {
    Rational { q: i64, p: i64 },
    Irrational { field: NumberField, alpha: FieldElem },
}

/// The affine map taking the model angle to the given one.
#[derive(Clone, Debug)]
struct Normalized {
    back: IntMatrix,
    vertex: IntPoint,
    model: Model,
}

impl Normalized {
    fn to_original(&self, x: &BigInt, y: &BigInt) -> Result<IntPoint> {
        let x = x.to_i64().ok_or(Error::Overflow)?;
        let y = y.to_i64().ok_or(Error::Overflow)?;
        let v = self.back.mul_vec(&[x, y])?;
        Ok(IntPoint::from([v[0] + self.vertex.coords()[0], v[1] + self.vertex.coords()[1]]))
    }
}

impl IntAngle {
    pub fn new(vertex: IntPoint, ray1: Ray, ray2: Ray) -> Result<Self> {
        if vertex.dim() != 2 {
            return Err(Error::InvalidInput("angles live in the plane".into()));
        }
        let fix = |r: Ray| -> Result<Ray> {
            match r {
                Ray::Point(p) => {
                    if p.dim() != 2 {
                        return Err(Error::InvalidInput("angles live in the plane".into()));
                    }
                    if p == vertex {
                        return Err(Error::ZeroDirection);
                    }
                    Ok(Ray::Point(p))
                }
                Ray::Slope(a) => match a.as_rational() {
                    // a rational slope has integer points on its ray
                    Some(r) => {
                        let q = r.denom().to_i64().ok_or(Error::Overflow)?;
                        let p = r.numer().to_i64().ok_or(Error::Overflow)?;
                        Ok(Ray::Point(&vertex + &IntPoint::from([q, p])))
                    }
                    None => Ok(Ray::Slope(a)),
                },
            }
        };
        let ray1 = fix(ray1)?;
        let ray2 = fix(ray2)?;
        let a = IntAngle { vertex, ray1, ray2 };
        if let (Ray::Slope(_), Ray::Slope(_)) = (&a.ray1, &a.ray2) {
            return Err(Error::Unsupported("angles with two irrational rays".into()));
        }
        if let (Ray::Point(p), Ray::Point(q)) = (&a.ray1, &a.ray2) {
            let u = p - &a.vertex;
            let w = q - &a.vertex;
            if u.coords()[0] as i128 * w.coords()[1] as i128 == u.coords()[1] as i128 * w.coords()[0] as i128 {
                return Err(Error::DegenerateAngle);
            }
        }
        Ok(a)
    }

    pub fn from_points(vertex: IntPoint, p1: IntPoint, p2: IntPoint) -> Result<Self> {
        Self::new(vertex, Ray::Point(p1), Ray::Point(p2))
    }

    /// The angle at the origin between `(1,0)` and `(1, alpha)`.
    pub fn with_slope(alpha: RealAlgebraic) -> Result<Self> {
        Self::new(IntPoint::origin(2), Ray::Point(IntPoint::from([1, 0])), Ray::Slope(alpha))
    }

    pub fn vertex(&self) -> &IntPoint {
        &self.vertex
    }

    pub fn ray1(&self) -> &Ray {
        &self.ray1
    }

    pub fn ray2(&self) -> &Ray {
        &self.ray2
    }

    pub fn is_rational(&self) -> bool {
        matches!((&self.ray1, &self.ray2), (Ray::Point(_), Ray::Point(_)))
    }

    fn normalize(&self) -> Result<Normalized> {
        // the integer ray plays the role of y = 0
        let (u_pt, other) = match (&self.ray1, &self.ray2) {
            (Ray::Point(p), r) => (p, r),
            (r, Ray::Point(p)) => (p, r),
            _ => unreachable!("checked in the constructor"),
        };
        let u = (u_pt - &self.vertex).primitive()?;
        let (a, b) = (u.coords()[0], u.coords()[1]);
        let (_, s, t) = ext_gcd(a, b);
        let m1 = IntMatrix::from_rows(&[vec![s, t], vec![-b, a]])?;
        match other {
            Ray::Point(p) => {
                let w = (p - &self.vertex).primitive()?;
                let w1 = m1.mul_vec(w.coords())?;
                let flip = if w1[1] < 0 { -1 } else { 1 };
                let (wx, wy) = (w1[0], w1[1] * flip);
                let k = Integer::div_ceil(&wx, &wy) - 1;
                let m = IntMatrix::from_rows(&[vec![1, -k], vec![0, 1]])?
                    .mul(&IntMatrix::from_rows(&[vec![1, 0], vec![0, flip]])?)?
                    .mul(&m1)?;
                let q = wx - k * wy;
                Ok(Normalized { back: m.inverse_unimodular()?, vertex: self.vertex.clone(), model: Model::Rational { q, p: wy } })
            }
            Ray::Slope(alpha) => {
                let field = alpha.field()?;
                let al = field.generator();
                let comp = |c0: i64, c1: i64| field.add(&field.from_int(c0), &field.scale(&al, &BigRat::from_integer(c1.into())));
                // direction (1, alpha) under m1
                let wx = comp(m1.get(0, 0), m1.get(0, 1));
                let wy = comp(m1.get(1, 0), m1.get(1, 1));
                let flip = if field.sign(&wy) == std::cmp::Ordering::Less { -1 } else { 1 };
                let wy = if flip < 0 { field.neg(&wy) } else { wy };
                // wx / wy is irrational, so its ceiling minus one is its floor
                let k = field.floor(&field.div(&wx, &wy)?);
                let wx = field.sub(&wx, &field.scale(&wy, &BigRat::from_integer(k.clone())));
                let k = k.to_i64().ok_or(Error::Overflow)?;
                let m = IntMatrix::from_rows(&[vec![1, -k], vec![0, 1]])?
                    .mul(&IntMatrix::from_rows(&[vec![1, 0], vec![0, flip]])?)?
                    .mul(&m1)?;
                let alpha = field.div(&wy, &wx)?;
                Ok(Normalized { back: m.inverse_unimodular()?, vertex: self.vertex.clone(), model: Model::Irrational { field, alpha } })
            }
        }
    }
}

/// Exact partial quotients of the model slope, up to `limit` terms, with the
/// period when one is detected.
fn model_digits(model: &Model, limit: usize) -> Result<(Vec<BigInt>, Option<usize>)> {
    match model {
        Model::Rational { q, p } => {
            let cf = contfrac::expand(&BigRat::new((*p).into(), (*q).into()), Parity::Odd);
            Ok((cf.head().to_vec(), None))
        }
        Model::Irrational { field, alpha } => {
            let mut seen: HashMap<FieldElem, usize> = HashMap::new();
            let mut x = alpha.clone();
            let mut digits = Vec::new();
            while digits.len() < limit {
                if let Some(&start) = seen.get(&x) {
                    return Ok((digits, Some(start)));
                }
                seen.insert(x.clone(), digits.len());
                let a = field.floor(&x);
                let frac = field.sub_int(&x, &a);
                digits.push(a);
                x = field.inv(&frac)?;
            }
            Ok((digits, None))
        }
    }
}

/// Partial quotients up to `count` terms, continuing a detected period.
fn digits_upto(model: &Model, count: usize) -> Result<Vec<BigInt>> {
    let (mut digits, start) = model_digits(model, count)?;
    if let Some(s) = start {
        let period = digits[s..].to_vec();
        let mut i = 0;
        while digits.len() < count {
            digits.push(period[i % period.len()].clone());
            i += 1;
        }
    }
    digits.truncate(count);
    Ok(digits)
}

/// Sail of an angle: corners and all lattice points of the broken line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AngleSail {
    /// Lattice points of the broken line in order from the first ray.
    pub points: Vec<IntPoint>,
    /// Vertices of the broken line.
    pub corners: Vec<IntPoint>,
    /// True when the broken line is finite and fully listed.
    pub complete: bool,
}

/// Broken line of the angle. Irrational angles are cut at corners whose
/// offset from the vertex exceeds `window` in max-norm.
pub fn angle_sail(angle: &IntAngle, window: i64) -> Result<AngleSail> {
    let n = angle.normalize()?;
    let rational = matches!(n.model, Model::Rational { .. });
    let mut corners = vec![n.to_original(&BigInt::one(), &BigInt::zero())?];
    let mut points = corners.clone();
    // v_{k-2}, v_{k-1} in model coordinates
    let (mut v2, mut v1) = ((BigInt::one(), BigInt::zero()), (BigInt::zero(), BigInt::one()));
    let mut k = 0usize;
    let mut digits: Vec<BigInt> = Vec::new();
    let mut complete = rational;
    loop {
        if k >= digits.len() {
            let need = (digits.len() * 2).max(16);
            let d = digits_upto(&n.model, need)?;
            if d.len() <= digits.len() {
                break;
            }
            digits = d;
        }
        let a = &digits[k];
        let v = (&v2.0 + a * &v1.0, &v2.1 + a * &v1.1);
        if k % 2 == 0 {
            // even convergent: a new corner, with a - 1 lattice points before it
            let corner = n.to_original(&v.0, &v.1)?;
            if !rational && (&corner - &angle.vertex).max_norm() > window {
                break;
            }
            let mut j = BigInt::one();
            while &j < a {
                points.push(n.to_original(&(&v2.0 + &j * &v1.0), &(&v2.1 + &j * &v1.1))?);
                j += 1;
            }
            points.push(corner.clone());
            corners.push(corner);
        }
        v2 = v1;
        v1 = v;
        k += 1;
        if rational && k == digits.len() {
            break;
        }
    }
    if !rational {
        complete = false;
    }
    Ok(AngleSail { points, corners, complete })
}

/// LLS sequence of the angle, read from the integer ray.
pub fn lls(angle: &IntAngle) -> Result<LlsSequence> {
    let n = angle.normalize()?;
    let (digits, start) = model_digits(&n.model, MAX_PERIOD_SEARCH)?;
    match (&n.model, start) {
        (Model::Rational { .. }, _) => LlsSequence::finite(digits),
        (_, Some(s)) => {
            let mut head = digits;
            let period = head.split_off(s);
            LlsSequence::periodic(head, period)
        }
        (_, None) => Err(Error::Inconclusive(format!("no period within {MAX_PERIOD_SEARCH} elements"))),
    }
}

/// The first `count` elements of the LLS sequence.
pub fn lls_prefix(angle: &IntAngle, count: usize) -> Result<Vec<BigInt>> {
    digits_upto(&angle.normalize()?.model, count)
}

/// LLS sequence recomputed from the broken line itself: integer lengths of
/// the edges alternating with integer sines at the inner corners.
pub fn lls_from_corners(corners: &[IntPoint]) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..corners.len().saturating_sub(1) {
        if i > 0 {
            out.push(int_sine(&corners[i], &corners[i - 1], &corners[i + 1])?);
        }
        out.push(int_length(&corners[i], &corners[i + 1])?);
    }
    Ok(out)
}

/// Integer tangent `[a0; a1 : a2 : ...]`.
pub fn itan(angle: &IntAngle) -> Result<RealAlgebraic> {
    let n = angle.normalize()?;
    match &n.model {
        Model::Rational { q, p } => Ok(RealAlgebraic::from_rational(BigRat::new((*p).into(), (*q).into()))),
        Model::Irrational { field, alpha } => field.to_real(alpha),
    }
}

/// Integer sine; undefined when a ray is irrational.
pub fn isin(angle: &IntAngle) -> Result<i64> {
    match (&angle.ray1, &angle.ray2) {
        (Ray::Point(p), Ray::Point(q)) => int_sine(&angle.vertex, p, q),
        _ => Err(Error::InfiniteSine),
    }
}

/// Integer cosine `isin / itan`.
pub fn icos(angle: &IntAngle) -> Result<BigRat> {
    let s = isin(angle)?;
    let t = itan(angle)?.as_rational().ok_or(Error::InfiniteSine)?;
    Ok(BigRat::from_integer(s.into()) / t)
}

/// Model angle with rays `(1,0)` and `(q,p)` where `p/q` is the value of the
/// sequence; periodic sequences give the irrational slope.
pub fn angle_from_lls(seq: &LlsSequence) -> Result<IntAngle> {
    let v = contfrac::evaluate(&seq.to_cf())?;
    match v.as_rational() {
        Some(r) => {
            let q = r.denom().to_i64().ok_or(Error::Overflow)?;
            let p = r.numer().to_i64().ok_or(Error::Overflow)?;
            IntAngle::from_points(IntPoint::origin(2), IntPoint::from([1, 0]), IntPoint::from([q, p]))
        }
        None => IntAngle::with_slope(v),
    }
}

/// Outcome of the bounded triangle search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IkeaResult {
    Found { vertices: [IntPoint; 3] },
    NotFoundWithinBudget { budget: i64 },
}

/// Default coordinate budget for [`ikea_check_triangle`].
pub const DEFAULT_IKEA_BUDGET: i64 = 20;

fn lls_matches(angle: &IntAngle, s: &LlsSequence) -> bool {
    match lls(angle) {
        Ok(l) => l == *s || s.reversed().map(|r| r == l).unwrap_or(false),
        Err(_) => false,
    }
}

/// Searches integer triangles whose angles at `A`, `B`, `C` have the given
/// LLS sequences (each up to reversal). Vertex coordinates of the normalized
/// triangle (with `A` at the origin and `AB` along the x-axis) are bounded
/// by `budget`.
pub fn ikea_check_triangle(seqs: &[LlsSequence], budget: i64) -> Result<IkeaResult> {
    if seqs.len() != 3 {
        return Err(Error::Arity { expected: 3, got: seqs.len() });
    }
    if seqs.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidInput("triangle angles have finite LLS sequences".into()));
    }
    let r = contfrac::evaluate_finite(&seqs[0].to_cf())?;
    let (p, q) = (r.numer().to_i64().ok_or(Error::Overflow)?, r.denom().to_i64().ok_or(Error::Overflow)?);
    let mut rr = contfrac::evaluate_finite(&seqs[0].reversed()?.to_cf())?;
    if rr == r {
        rr = r.clone();
    }
    let (p2, q2) = (rr.numer().to_i64().ok_or(Error::Overflow)?, rr.denom().to_i64().ok_or(Error::Overflow)?);
    let dirs = [(q, p), (q2, p2)];
    let found = (1..=budget).into_par_iter().find_map_first(|m| {
        for &(dq, dp) in &dirs {
            let reach = dq.max(dp);
            for t in 1..=budget / reach.max(1) {
                let a = IntPoint::origin(2);
                let b = IntPoint::from([m, 0]);
                let c = IntPoint::from([t * dq, t * dp]);
                for (bb, cc) in [(&b, &c), (&c, &b)] {
                    let Ok(at_a) = IntAngle::from_points(a.clone(), bb.clone(), cc.clone()) else { continue };
                    let Ok(at_b) = IntAngle::from_points(bb.clone(), cc.clone(), a.clone()) else { continue };
                    let Ok(at_c) = IntAngle::from_points(cc.clone(), a.clone(), bb.clone()) else { continue };
                    if lls_matches(&at_a, &seqs[0]) && lls_matches(&at_b, &seqs[1]) && lls_matches(&at_c, &seqs[2]) {
                        return Some([a.clone(), bb.clone(), cc.clone()]);
                    }
                }
            }
        }
        None
    });
    Ok(match found {
        Some(vertices) => IkeaResult::Found { vertices },
        None => IkeaResult::NotFoundWithinBudget { budget },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use crate::exact::Poly;

    fn pt(x: i64, y: i64) -> IntPoint {
        IntPoint::from([x, y])
    }

    fn model(q: i64, p: i64) -> IntAngle {
        IntAngle::from_points(pt(0, 0), pt(1, 0), pt(q, p)).unwrap()
    }

    fn seq(v: &[i64]) -> LlsSequence {
        LlsSequence::from_i64(v).unwrap()
    }

    fn golden() -> RealAlgebraic {
        RealAlgebraic::roots_of(&Poly::from_ints(&[-1, -1, 1])).unwrap().pop().unwrap()
    }

    #[test]
    fn sail_of_seven_fifths() {
        let s = angle_sail(&model(5, 7), 0).unwrap();
        assert_eq!(s.points, vec![pt(1, 0), pt(1, 1), pt(3, 4), pt(5, 7)]);
        assert_eq!(s.corners, vec![pt(1, 0), pt(1, 1), pt(5, 7)]);
        assert!(s.complete);
        assert_eq!(lls_from_corners(&s.corners).unwrap(), vec![1, 2, 2]);
    }

    #[test]
    fn sail_small_angles() {
        let s = angle_sail(&model(0, 1), 0).unwrap();
        assert_eq!(s.points, vec![pt(1, 0), pt(0, 1)]);
        let s = angle_sail(&model(1, 1), 0).unwrap();
        assert_eq!(s.points, vec![pt(1, 0), pt(1, 1)]);
    }

    #[test]
    fn lls_examples() {
        assert_eq!(lls(&model(5, 7)).unwrap(), seq(&[1, 2, 2]));
        assert_eq!(lls(&model(0, 1)).unwrap(), seq(&[1]));
        let g = lls(&IntAngle::with_slope(golden()).unwrap()).unwrap();
        assert!(g.head().is_empty());
        assert_eq!(g.period(), &[BigInt::from(1)]);
        let s2 = lls(&IntAngle::with_slope(RealAlgebraic::sqrt(&int(2)).unwrap()).unwrap()).unwrap();
        assert_eq!(s2.to_string(), "(1,(2))");
    }

    #[test]
    fn trigonometry_examples() {
        let a = model(5, 7);
        assert_eq!(itan(&a).unwrap(), RealAlgebraic::from_rational(rat(7, 5)));
        assert_eq!(isin(&a).unwrap(), 7);
        assert_eq!(icos(&a).unwrap(), int(5));
        let b = model(1, 1);
        assert_eq!((isin(&b).unwrap(), icos(&b).unwrap()), (1, int(1)));
        let c = model(3, 7);
        assert_eq!(itan(&c).unwrap(), RealAlgebraic::from_rational(rat(7, 3)));
        assert_eq!((isin(&c).unwrap(), icos(&c).unwrap()), (7, int(3)));
        let g = IntAngle::with_slope(golden()).unwrap();
        assert_eq!(isin(&g), Err(Error::InfiniteSine));
        assert_eq!(itan(&g).unwrap(), golden());
    }

    #[test]
    fn from_lls_round_trip() {
        let a = angle_from_lls(&seq(&[1, 2, 2])).unwrap();
        assert_eq!(a.ray2(), &Ray::Point(pt(5, 7)));
        assert_eq!(angle_from_lls(&seq(&[1])).unwrap().ray2(), &Ray::Point(pt(1, 1)));
        let c = angle_from_lls(&seq(&[2, 3])).unwrap();
        assert_eq!(c.ray2(), &Ray::Point(pt(3, 7)));
        assert_eq!(lls(&c).unwrap(), seq(&[2, 2, 1]));
        let per = LlsSequence::parse("((1))").unwrap();
        assert_eq!(lls(&angle_from_lls(&per).unwrap()).unwrap(), per);
        for (text, s) in [("(1,2,2)", seq(&[1, 2, 2])), ("1,2,2", seq(&[1, 2, 2])), ("(1)", seq(&[1]))] {
            assert_eq!(LlsSequence::parse(text).unwrap(), s);
        }
        let mixed = LlsSequence::parse("(1,(1,2))").unwrap();
        assert_eq!((mixed.head().len(), mixed.period().len()), (1, 2));
        assert_eq!(LlsSequence::parse(&mixed.to_string()).unwrap(), mixed);
        assert_eq!(LlsSequence::parse(&per.to_string()).unwrap(), per);
    }

    #[test]
    fn irrational_sail_window() {
        let s = angle_sail(&IntAngle::with_slope(golden()).unwrap(), 30).unwrap();
        assert_eq!(s.corners, vec![pt(1, 0), pt(1, 1), pt(2, 3), pt(5, 8), pt(13, 21)]);
        assert!(!s.complete);
    }

    #[test]
    fn degenerate_and_unsupported() {
        assert_eq!(IntAngle::from_points(pt(0, 0), pt(1, 1), pt(2, 2)), Err(Error::DegenerateAngle));
        assert_eq!(IntAngle::from_points(pt(0, 0), pt(1, 1), pt(-2, -2)), Err(Error::DegenerateAngle));
        let g = golden();
        assert!(matches!(
            IntAngle::new(pt(0, 0), Ray::Slope(g.clone()), Ray::Slope(g)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn ikea_examples() {
        let one = seq(&[1]);
        match ikea_check_triangle(&[one.clone(), one.clone(), one.clone()], 20).unwrap() {
            IkeaResult::Found { vertices } => {
                assert_eq!(crate::intgeom::int_area(&vertices[0], &vertices[1], &vertices[2]).unwrap(), 1)
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            ikea_check_triangle(&[one.clone(), one], 20),
            Err(Error::Arity { expected: 3, got: 2 })
        );
    }
}
