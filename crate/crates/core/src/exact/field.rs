//! Real number fields `Q(theta)` of degree at most three.
//!
//! Elements are polynomials in `theta` of degree below the field degree with
//! rational coefficients. The real embedding is fixed by the isolating
//! interval of `theta`; every sign, floor and comparison is decided by
//! rational interval evaluation with refinement, so no decision depends on
//! floating point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::algebraic::RealAlgebraic;
use super::poly::Poly;
use super::rational::{self, BigRat, RatInterval};
use crate::error::{Error, Result};

/// An element of a [`NumberField`], stored as coefficients in the power basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    coeffs: Vec<BigRat>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRat> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn as_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }
}

#[derive(Clone, Debug)]
pub struct NumberField {
    modulus: Poly,
    theta: RealAlgebraic,
    degree: usize,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.theta == other.theta
    }
}

impl NumberField {
    /// `Q(theta)` where `theta` is a root of the irreducible `poly`.
    pub fn new(poly: Poly, theta: RealAlgebraic) -> Result<Self> {
        let deg = poly.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
        if deg == 0 || deg > 3 {
            return Err(Error::Unsupported(format!("number field of degree {deg}")));
        }
        if !poly.is_irreducible_low_degree()? {
            return Err(Error::InvalidInput(format!("{poly} is reducible")));
        }
        if theta.minpoly() != poly.primitive_int().as_slice() {
            return Err(Error::InvalidInput("generator is not a root of the field polynomial".into()));
        }
        let theta = theta.refine_to(&rational::pow2_neg(64));
        Ok(NumberField { modulus: poly.monic(), theta, degree: deg })
    }

    /// Field generated by the real root of `poly` with the given index in
    /// ascending order.
    pub fn from_poly_root(poly: &Poly, index: usize) -> Result<Self> {
        let roots = RealAlgebraic::roots_of(poly)?;
        let n = roots.len();
        let theta = roots
            .into_iter()
            .nth(index)
            .ok_or(Error::OutOfRange { index, available: n })?;
        Self::new(poly.clone(), theta)
    }

    /// The rational field, generated by 0.
    pub fn rationals() -> Self {
        NumberField::new(Poly::x(), RealAlgebraic::from_int(0)).expect("Q is a field")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn theta(&self) -> &RealAlgebraic {
        &self.theta
    }

    pub fn elem(&self, coeffs: Vec<BigRat>) -> FieldElem {
        self.reduce(&Poly::new(coeffs))
    }

    pub fn from_rat(&self, r: BigRat) -> FieldElem {
        self.elem(vec![r])
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        self.from_rat(rational::int(n))
    }

    pub fn zero(&self) -> FieldElem {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn generator(&self) -> FieldElem {
        self.reduce(&Poly::x())
    }

    /// Element given by a polynomial expression in the generator.
    pub fn from_poly(&self, p: &Poly) -> FieldElem {
        self.reduce(p)
    }

    fn reduce(&self, p: &Poly) -> FieldElem {
        let r = p.rem(&self.modulus).expect("modulus is nonzero");
        let mut coeffs = r.coeffs().to_vec();
        coeffs.resize(self.degree, BigRat::zero());
        FieldElem { coeffs }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem { coeffs: a.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &FieldElem, k: &BigRat) -> FieldElem {
        FieldElem { coeffs: a.coeffs.iter().map(|x| x * k).collect() }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.reduce(&a.as_poly().mul(&b.as_poly()))
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = a.as_poly().ext_gcd(&self.modulus);
        debug_assert_eq!(g.degree(), Some(0), "modulus is irreducible");
        Ok(self.reduce(&s))
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn sub_int(&self, a: &FieldElem, n: &BigInt) -> FieldElem {
        let mut c = a.coeffs.clone();
        c[0] -= BigRat::from_integer(n.clone());
        FieldElem { coeffs: c }
    }

    /// Enclosure of the element's value when `theta` lies in `t`.
    pub fn eval_interval(&self, a: &FieldElem, t: &RatInterval) -> RatInterval {
        a.as_poly().eval_interval(t)
    }

    /// Calls `f` with successively narrower enclosures of the element until it
    /// returns `Some`.
    fn refine_until<T>(&self, a: &FieldElem, mut f: impl FnMut(&RatInterval) -> Option<T>) -> T {
        let mut th = self.theta.clone();
        loop {
            let iv = self.eval_interval(a, &th.rat_interval());
            if let Some(v) = f(&iv) {
                return v;
            }
            for _ in 0..8 {
                th = th.bisect();
            }
        }
    }

    pub fn sign(&self, a: &FieldElem) -> Ordering {
        if a.is_zero() {
            return Ordering::Equal;
        }
        if let Some(r) = a.as_rational() {
            return r.cmp(&BigRat::zero());
        }
        // an irrational element is never zero
        self.refine_until(a, |iv| match iv.sign() {
            Some(Ordering::Equal) | None => None,
            s => s,
        })
    }

    pub fn compare(&self, a: &FieldElem, b: &FieldElem) -> Ordering {
        self.sign(&self.sub(a, b))
    }

    pub fn floor(&self, a: &FieldElem) -> BigInt {
        if let Some(r) = a.as_rational() {
            return rational::floor(&r);
        }
        self.refine_until(a, |iv| {
            let f = rational::floor(&iv.lo);
            if BigRat::from_integer(&f + BigInt::one()) > iv.hi && BigRat::from_integer(f.clone()) < iv.lo {
                Some(f)
            } else {
                None
            }
        })
    }

    /// Interval of width at most `width` containing the element.
    pub fn enclose(&self, a: &FieldElem, width: &BigRat) -> RatInterval {
        if let Some(r) = a.as_rational() {
            return RatInterval::point(r);
        }
        self.refine_until(a, |iv| if iv.width() <= *width { Some(iv.clone()) } else { None })
    }

    pub fn approx(&self, a: &FieldElem) -> f64 {
        let iv = self.enclose(a, &rational::pow2_neg(60));
        rational::to_f64(&rational::mid(&iv.lo, &iv.hi))
    }

    /// Characteristic polynomial of multiplication by `a` (monic, degree n).
    pub fn charpoly(&self, a: &FieldElem) -> Poly {
        let n = self.degree;
        // column j of M is a * theta^j
        let mut m = vec![vec![BigRat::zero(); n]; n];
        let mut basis = self.one();
        for j in 0..n {
            let col = self.mul(a, &basis);
            for i in 0..n {
                m[i][j] = col.coeffs[i].clone();
            }
            basis = self.mul(&basis, &self.generator());
        }
        match n {
            1 => Poly::new(vec![-m[0][0].clone(), BigRat::one()]),
            2 => {
                let tr = &m[0][0] + &m[1][1];
                let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
                Poly::new(vec![det, -tr, BigRat::one()])
            }
            _ => {
                let tr = &m[0][0] + &m[1][1] + &m[2][2];
                let minors = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0] + &m[0][0] * &m[2][2]
                    - &m[0][2] * &m[2][0]
                    + &m[1][1] * &m[2][2]
                    - &m[1][2] * &m[2][1];
                let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                    - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                    + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
                Poly::new(vec![-det, minors, -tr, BigRat::one()])
            }
        }
    }

    /// Norm from the field to Q.
    pub fn norm(&self, a: &FieldElem) -> BigRat {
        let cp = self.charpoly(a);
        let c0 = cp.coeff(0);
        if self.degree % 2 == 1 {
            -c0
        } else {
            c0
        }
    }

    /// The element as a standalone real algebraic number.
    pub fn to_real(&self, a: &FieldElem) -> Result<RealAlgebraic> {
        if let Some(r) = a.as_rational() {
            return Ok(RealAlgebraic::from_rational(r));
        }
        // field degree is 2 or 3 (prime), so the charpoly is the minimal polynomial
        let cp = self.charpoly(a);
        let sf = cp.squarefree();
        debug_assert_eq!(sf.degree(), cp.degree());
        let iv = self.refine_until(a, |iv| {
            if iv.lo < iv.hi
                && !cp.eval(&iv.lo).is_zero()
                && !cp.eval(&iv.hi).is_zero()
                && cp.count_roots(&iv.lo, &iv.hi) == 1
            {
                Some(iv.clone())
            } else {
                None
            }
        });
        RealAlgebraic::new(&cp, iv.lo, iv.hi)
    }

    /// Expresses `x` as an element of this field, when it lies in it.
    pub fn embed(&self, x: &RealAlgebraic) -> Result<FieldElem> {
        if let Some(r) = x.as_rational() {
            return Ok(self.from_rat(r));
        }
        if *x == self.theta {
            return Ok(self.generator());
        }
        let n = self.degree;
        if n % x.degree() != 0 {
            return Err(Error::IncompatibleFields(format!(
                "degree {} number does not lie in a degree {n} field",
                x.degree()
            )));
        }
        let target = x.approx();
        let own = complex_roots(&self.modulus);
        let other = complex_roots(&x.minpoly_poly());
        // conjugate of theta that is our real embedding
        let t_real = self.theta.approx();
        let i0 = nearest(&own, Complex64::new(t_real, 0.0));
        let j0 = nearest(&other, Complex64::new(target, 0.0));
        let others: Vec<usize> = (0..other.len()).filter(|&j| j != j0).collect();
        let own_rest: Vec<usize> = (0..n).filter(|&i| i != i0).collect();
        for perm in permutations(&others) {
            // target values at the conjugates of theta
            let mut rhs = vec![other[j0]];
            rhs.extend(perm.iter().map(|&j| other[j]));
            let mut nodes = vec![own[i0]];
            nodes.extend(own_rest.iter().map(|&i| own[i]));
            if nodes.len() != rhs.len() {
                continue;
            }
            let Some(c) = solve_vandermonde(&nodes, &rhs) else { continue };
            let coeffs: Vec<BigRat> = c.iter().map(|z| best_rational(z.re, 1_000_000)).collect();
            let cand = self.elem(coeffs);
            // exact verification: x's minimal polynomial vanishes and the embedding matches
            let mp = x.minpoly_poly();
            let mut acc = self.zero();
            for coef in mp.coeffs().iter().rev() {
                acc = self.add(&self.mul(&acc, &cand), &self.from_rat(coef.clone()));
            }
            if acc.is_zero() && self.to_real(&cand)? == *x {
                return Ok(cand);
            }
        }
        Err(Error::IncompatibleFields(format!("{x} does not lie in Q({})", self.theta)))
    }

    /// Formats an element as a polynomial in the generator `t`.
    pub fn format_elem(&self, a: &FieldElem) -> String {
        a.as_poly().to_string_var('t')
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(t), t = {}", self.theta)
    }
}

/// Approximate complex roots (Durand-Kerner); used only to propose
/// candidates that are then verified exactly.
fn complex_roots(p: &Poly) -> Vec<Complex64> {
    let m = p.monic();
    let c: Vec<f64> = m.coeffs().iter().map(rational::to_f64).collect();
    let n = c.len() - 1;
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k);
    let mut roots: Vec<Complex64> = (0..n).map(|k| Complex64::new(0.4, 0.9).powu(k as u32)).collect();
    for _ in 0..500 {
        let prev = roots.clone();
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
        }
        if roots.iter().zip(&prev).all(|(a, b)| (a - b).norm() < 1e-15) {
            break;
        }
    }
    roots
}

fn nearest(v: &[Complex64], z: Complex64) -> usize {
    (0..v.len())
        .min_by(|&a, &b| (v[a] - z).norm().partial_cmp(&(v[b] - z).norm()).unwrap())
        .unwrap()
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Solves sum_k c_k nodes_i^k = rhs_i by Gaussian elimination.
fn solve_vandermonde(nodes: &[Complex64], rhs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = nodes.len();
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            let mut row: Vec<Complex64> = (0..n).map(|k| nodes[i].powu(k as u32)).collect();
            row.push(rhs[i]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap())?;
        if a[piv][col].norm() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for k in col..=n {
                    let v = a[col][k];
                    a[r][k] -= f * v;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Best rational approximation with bounded denominator.
pub(crate) fn best_rational(x: f64, max_den: i64) -> BigRat {
    if !x.is_finite() {
        return BigRat::zero();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let (p2, q2) = (ai * p1 + p0, ai * q1 + q0);
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return rational::int(x.round() as i64);
    }
    BigRat::new(BigInt::from(p1), BigInt::from(q1))
}

/// Rational interval enclosing `x` with `|hi - lo|` tiny; used when a
/// rigorous enclosure of a real algebraic number is needed.
pub fn enclose_real(x: &RealAlgebraic, width: &BigRat) -> RatInterval {
    if let Some(r) = x.as_rational() {
        return RatInterval::point(r);
    }
    x.refine_to(width).rat_interval()
}

/// True when `a` is negative in the field's embedding.
pub fn is_negative(k: &NumberField, a: &FieldElem) -> bool {
    k.sign(a) == Ordering::Less
}
