//! Jacobi–Perron expansion of `(1, y, z)` over a real number field of degree
//! at most three.
//!
//! Convention: from the state `(α, β)` the digits are `(⌊α⌋, ⌊β⌋)` and the
//! next state is `((β - ⌊β⌋) / (α - ⌊α⌋), 1 / (α - ⌊α⌋))`. The initial state
//! is `(y, z)` itself. The expansion terminates when `α` is an integer; the
//! fractional part of `β` at that point is kept as the remainder.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{rational, BigRat, FieldElem, JsonInt, NumberField, Poly, RealAlgebraic};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JpVerdict {
    /// The state at step `steps` has an integer first coordinate.
    Terminated { steps: usize },
    /// The state after `preperiod + period` steps equals the state after
    /// `preperiod` steps.
    Periodic { preperiod: usize, period: usize },
    Inconclusive { steps: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct JpExpansion {
    pub field: NumberField,
    pub y: FieldElem,
    pub z: FieldElem,
    pub digits: Vec<(BigInt, BigInt)>,
    pub verdict: JpVerdict,
    /// Fractional part of `β` in the terminal state.
    pub remainder: Option<FieldElem>,
    /// Whether `1, y, z` are linearly independent over Q.
    pub independent: bool,
}

impl Serialize for JpExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let k = &self.field;
        let digits: Vec<[JsonInt; 2]> = self.digits.iter().map(|(a, b)| [JsonInt::from(a), JsonInt::from(b)]).collect();
        let mut st = s.serialize_struct("JpExpansion", 7)?;
        st.serialize_field("field", &k.modulus().to_string_var('x'))?;
        st.serialize_field("y", &k.format_elem(&self.y))?;
        st.serialize_field("z", &k.format_elem(&self.z))?;
        st.serialize_field("independent", &self.independent)?;
        st.serialize_field("digits", &digits)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("remainder", &self.remainder.as_ref().map(|r| k.format_elem(r)))?;
        st.end()
    }
}

impl JpExpansion {
    /// Digit `i`, continuing the period of a periodic expansion.
    pub fn digit(&self, i: usize) -> Option<&(BigInt, BigInt)> {
        match self.verdict {
            JpVerdict::Periodic { preperiod, period } if i >= self.digits.len() => {
                self.digits.get(preperiod + (i - preperiod) % period)
            }
            _ => self.digits.get(i),
        }
    }
}

/// Parses an element written as a polynomial in the generator, e.g. `t^2-1`.
pub fn parse_elem(field: &NumberField, s: &str) -> Result<FieldElem> {
    Ok(field.from_poly(&Poly::parse(s)?))
}

fn independent(field: &NumberField, y: &FieldElem, z: &FieldElem) -> bool {
    if field.degree() != 3 {
        return false;
    }
    let c = |e: &FieldElem, i: usize| e.coeffs().get(i).cloned().unwrap_or_else(BigRat::zero);
    // rows (1, 0, 0), y, z: the determinant is the 2x2 minor on t, t^2
    c(y, 1) * c(z, 2) - c(y, 2) * c(z, 1) != BigRat::zero()
}

pub fn jp_expand(field: &NumberField, y: &FieldElem, z: &FieldElem, max_steps: usize) -> Result<JpExpansion> {
    if field.sign(y).is_lt() || field.sign(z).is_lt() {
        return Err(Error::InvalidInput("y and z must be nonnegative".into()));
    }
    let indep = independent(field, y, z);
    let mut seen: HashMap<(FieldElem, FieldElem), usize> = HashMap::new();
    let (mut alpha, mut beta) = (y.clone(), z.clone());
    let mut digits = Vec::new();
    let mut verdict = JpVerdict::Inconclusive { steps: max_steps };
    let mut remainder = None;
    for step in 0..max_steps {
        if let Some(&j) = seen.get(&(alpha.clone(), beta.clone())) {
            verdict = JpVerdict::Periodic { preperiod: j, period: step - j };
            break;
        }
        seen.insert((alpha.clone(), beta.clone()), step);
        let a = field.floor(&alpha);
        let b = field.floor(&beta);
        let f = field.sub_int(&alpha, &a);
        let g = field.sub_int(&beta, &b);
        digits.push((a, b));
        if f.is_zero() {
            if indep {
                return Err(Error::InvalidInput("integer state reached for independent data".into()));
            }
            verdict = JpVerdict::Terminated { steps: step };
            remainder = Some(g);
            break;
        }
        let inv = field.inv(&f)?;
        (alpha, beta) = (field.mul(&g, &inv), inv);
    }
    Ok(JpExpansion { field: field.clone(), y: y.clone(), z: z.clone(), digits, verdict, remainder, independent: indep })
}

/// Expands real algebraic inputs after placing both in a common field.
pub fn jp_expand_real(y: &RealAlgebraic, z: &RealAlgebraic, max_steps: usize) -> Result<JpExpansion> {
    let field = match (y.degree(), z.degree()) {
        (1, 1) => NumberField::rationals(),
        (dy, dz) if dy >= dz => y.field()?,
        _ => z.field()?,
    };
    let (ey, ez) = (field.embed(y)?, field.embed(z)?);
    jp_expand(&field, &ey, &ez, max_steps)
}

type Mat3 = [[BigInt; 3]; 3];

fn digit_matrix(a: &BigInt, b: &BigInt) -> Mat3 {
    let (o, z) = (BigInt::one(), BigInt::zero());
    [[z.clone(), z.clone(), o.clone()], [o.clone(), z.clone(), a.clone()], [z.clone(), o, b.clone()]]
}

fn mat_mul(x: &Mat3, y: &Mat3) -> Mat3 {
    let mut out: Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| &x[i][k] * &y[k][j]).sum();
        }
    }
    out
}

/// Approximation of `(1, y, z)` from the first `k` digits: the product of
/// the digit matrices of steps `0..k-1` applied to `(1, a, b)` of step `k-1`
/// (plus the remainder when the expansion terminated there).
pub fn jp_reconstruct(exp: &JpExpansion, k: usize) -> Result<[BigRat; 3]> {
    if k == 0 {
        return Ok([BigRat::one(), BigRat::zero(), BigRat::zero()]);
    }
    let available = match exp.verdict {
        JpVerdict::Periodic { .. } => usize::MAX,
        _ => exp.digits.len(),
    };
    if k > available {
        return Err(Error::OutOfRange { index: k, available });
    }
    let mut p: Mat3 = Default::default();
    (0..3).for_each(|i| p[i][i] = BigInt::one());
    for i in 0..k - 1 {
        let (a, b) = exp.digit(i).expect("digit in range");
        p = mat_mul(&p, &digit_matrix(a, b));
    }
    let (a, b) = exp.digit(k - 1).expect("digit in range");
    let mut tail = [BigRat::one(), BigRat::from_integer(a.clone()), BigRat::from_integer(b.clone())];
    if matches!(exp.verdict, JpVerdict::Terminated { steps } if steps == k - 1) {
        let r = exp.remainder.as_ref().and_then(|r| r.as_rational());
        match r {
            Some(r) => tail[2] += r,
            None => return Err(Error::Unsupported("irrational remainder of a dependent triple".into())),
        }
    }
    let v: Vec<BigRat> = (0..3)
        .map(|i| (0..3).map(|j| BigRat::from_integer(p[i][j].clone()) * &tail[j]).sum())
        .collect();
    if v[0].is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok([BigRat::one(), &v[1] / &v[0], &v[2] / &v[0]])
}

/// Certified upper bound on `max(|y_k - y|, |z_k - z|)` for an approximation
/// `(1, y_k, z_k)`, from enclosures of width `2^-bits`.
pub fn certified_error(field: &NumberField, y: &FieldElem, z: &FieldElem, approx: &[BigRat; 3], bits: u32) -> BigRat {
    let w = rational::pow2_neg(bits);
    [(y, &approx[1]), (z, &approx[2])]
        .into_iter()
        .map(|(x, a)| {
            let iv = field.enclose(x, &w);
            let d1 = (a - &iv.lo).abs();
            let d2 = (a - &iv.hi).abs();
            if d1 > d2 {
                d1
            } else {
                d2
            }
        })
        .max()
        .expect("two coordinates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pure_cubic() -> (NumberField, FieldElem, FieldElem) {
        let k = NumberField::from_poly_root(&Poly::parse("x^3-2").unwrap(), 0).unwrap();
        let y = parse_elem(&k, "t-1").unwrap();
        let z = parse_elem(&k, "t^2-1").unwrap();
        (k, y, z)
    }

    #[test]
    fn rational_terminates_and_reconstructs() {
        let q = NumberField::rationals();
        let e = jp_expand(&q, &q.from_rat(rational::rat(1, 2)), &q.from_rat(rational::rat(1, 3)), 100).unwrap();
        assert!(matches!(e.verdict, JpVerdict::Terminated { .. }));
        let r = jp_reconstruct(&e, e.digits.len()).unwrap();
        assert_eq!(r, [BigRat::one(), rational::rat(1, 2), rational::rat(1, 3)]);
        assert_eq!(jp_reconstruct(&e, 0).unwrap(), [BigRat::one(), BigRat::zero(), BigRat::zero()]);
        assert!(jp_reconstruct(&e, e.digits.len() + 1).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let y = rational::rat(rng.gen_range(0..200), rng.gen_range(1..=50));
            let z = rational::rat(rng.gen_range(0..200), rng.gen_range(1..=50));
            let e = jp_expand(&q, &q.from_rat(y.clone()), &q.from_rat(z.clone()), 10_000).unwrap();
            assert!(matches!(e.verdict, JpVerdict::Terminated { .. }));
            assert_eq!(jp_reconstruct(&e, e.digits.len()).unwrap(), [BigRat::one(), y, z]);
        }
    }

    /// Float simulation of the map with a fixed number of guard digits.
    fn float_digits(y: f64, z: f64, n: usize) -> Vec<(i64, i64)> {
        let (mut a, mut b) = (y, z);
        let mut out = Vec::new();
        for _ in 0..n {
            let (fa, fb) = (a.floor(), b.floor());
            out.push((fa as i64, fb as i64));
            let f = a - fa;
            (a, b) = ((b - fb) / f, 1.0 / f);
        }
        out
    }

    #[test]
    fn pure_cubic_is_periodic() {
        let (k, y, z) = pure_cubic();
        assert!(independent(&k, &y, &z));
        let e = jp_expand(&k, &y, &z, 100).unwrap();
        let JpVerdict::Periodic { preperiod, period } = e.verdict.clone() else { panic!("{:?}", e.verdict) };
        let e10 = jp_expand(&k, &y, &z, 1000).unwrap();
        assert_eq!(e10.verdict, JpVerdict::Periodic { preperiod, period });
        let sim = float_digits(k.approx(&y), k.approx(&z), 12);
        for (i, d) in sim.iter().enumerate() {
            let (a, b) = e.digit(i).unwrap();
            assert_eq!((a.to_string(), b.to_string()), (d.0.to_string(), d.1.to_string()), "digit {i}");
        }
    }

    #[test]
    fn reconstruction_converges() {
        let (k, y, z) = pure_cubic();
        let e = jp_expand(&k, &y, &z, 100).unwrap();
        let err = |n| certified_error(&k, &y, &z, &jp_reconstruct(&e, n).unwrap(), 100);
        assert!(err(20) < rational::rat(1, 1_000_000_000));
        assert!(err(20) < err(10));
        assert!(err(10) < err(2));
    }

    #[test]
    fn totally_real_cubic_is_well_formed() {
        let k = NumberField::from_poly_root(&Poly::parse("x^3-3x+1").unwrap(), 2).unwrap();
        let t = k.generator();
        let y = k.sub_int(&t, &k.floor(&t));
        let t2 = k.mul(&t, &t);
        let z = k.sub_int(&t2, &k.floor(&t2));
        let e = jp_expand(&k, &y, &z, 60).unwrap();
        assert!(e.independent);
        assert!(!matches!(e.verdict, JpVerdict::Terminated { .. }));
        let a = jp_reconstruct(&e, 20).unwrap();
        assert!(certified_error(&k, &y, &z, &a, 100) < rational::rat(1, 1_000_000));
        let json = serde_json::to_value(&e).unwrap();
        assert!(json["digits"].is_array() && json["verdict"]["kind"].is_string());
    }

    #[test]
    fn real_inputs_share_a_field() {
        let y = RealAlgebraic::parse("root(x^3-2, 1, 2)").unwrap();
        let z = RealAlgebraic::from_rational(rational::rat(1, 3));
        let e = jp_expand_real(&y, &z, 5).unwrap();
        assert_eq!(e.field.degree(), 3);
        assert!(!e.independent);
        let s2 = RealAlgebraic::parse("sqrt(2)").unwrap();
        assert!(matches!(jp_expand_real(&y, &s2, 5), Err(Error::IncompatibleFields(_))));
        let q = NumberField::rationals();
        assert!(jp_expand(&q, &q.from_int(-1), &q.from_int(0), 5).is_err());
    }
}
