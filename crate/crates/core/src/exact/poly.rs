//! Dense univariate polynomials with rational coefficients.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{self, BigRat, RatInterval};
use crate::error::{Error, Result};

/// Polynomial with coefficients in ascending order of degree.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has
/// an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| rational::int(v)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Poly::new(c.iter().cloned().map(BigRat::from_integer).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: BigRat) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRat {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigRat {
        self.coeffs.last().cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigRat) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::constant(BigRat::one());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let mut r = self.coeffs.clone();
        let lc = d.lc();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![BigRat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.lc();
        self.scale(&lc.recip())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::constant(BigRat::one()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(BigRat::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rational::int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of the value at a rational point.
    pub fn sign_at(&self, x: &BigRat) -> Ordering {
        self.eval(x).cmp(&BigRat::zero())
    }

    /// Interval enclosure of the polynomial over an interval (Horner form).
    pub fn eval_interval(&self, x: &RatInterval) -> RatInterval {
        let mut acc = RatInterval::point(BigRat::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&RatInterval::point(c.clone()));
        }
        acc
    }

    /// Composition `self(p(x))`.
    pub fn compose(&self, p: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(p).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Primitive integer polynomial with positive leading coefficient and the
    /// same roots.
    pub fn primitive_int(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * BigRat::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// All rational roots, found with the rational root test.
    pub fn rational_roots(&self) -> Vec<BigRat> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        let mut ints = self.primitive_int();
        // strip factors of x
        let mut zero_root = false;
        while ints.len() > 1 && ints[0].is_zero() {
            ints.remove(0);
            zero_root = true;
        }
        if zero_root {
            out.push(BigRat::zero());
        }
        if ints.len() <= 1 {
            return out;
        }
        let p = Poly::from_bigints(&ints);
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let num_divs = divisors(&a0);
        let den_divs = divisors(&an);
        let mut seen = std::collections::BTreeSet::new();
        for n in &num_divs {
            for d in &den_divs {
                for s in [1i64, -1] {
                    let cand = BigRat::new(n * BigInt::from(s), d.clone());
                    if seen.insert(cand.clone()) && p.eval(&cand).is_zero() {
                        out.push(cand);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Irreducibility over Q for degree at most 3 (no rational roots).
    pub fn is_irreducible_low_degree(&self) -> Result<bool> {
        match self.degree() {
            None | Some(0) => Ok(false),
            Some(1) => Ok(true),
            Some(2) | Some(3) => Ok(self.rational_roots().is_empty()),
            Some(d) => Err(Error::Unsupported(format!("irreducibility test for degree {d}"))),
        }
    }

    /// Squarefree part (monic).
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.monic();
        }
        self.div_rem(&g).unwrap().0.monic()
    }

    /// Sturm sequence of a squarefree polynomial.
    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].rem(&seq[n - 1]).unwrap();
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &BigRat, hi: &BigRat) -> usize {
        let sf = self.squarefree();
        let seq = sf.sturm_sequence();
        let v = |x: &BigRat| sign_changes(seq.iter().map(|p| p.sign_at(x)));
        v(lo).saturating_sub(v(hi))
    }

    /// Cauchy bound: every real root has absolute value below the result.
    pub fn root_bound(&self) -> BigRat {
        let lc = self.lc().abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(BigRat::zero);
        m + rational::int(1)
    }

    /// Isolating intervals `(lo, hi)` for every real root of the squarefree
    /// part, in increasing order. Rational roots are returned as degenerate
    /// intervals `lo == hi`; irrational roots have rational endpoints that are
    /// not roots.
    pub fn isolate_real_roots(&self) -> Vec<(BigRat, BigRat)> {
        let sf = self.squarefree();
        if sf.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let seq = sf.sturm_sequence();
        let count = |x: &BigRat| sign_changes(seq.iter().map(|p| p.sign_at(x)));
        let b = sf.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = count(&lo) - count(&hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push((lo, hi));
                continue;
            }
            let m = rational::mid(&lo, &hi);
            stack.push((lo, m.clone()));
            stack.push((m, hi));
        }
        let mut res = Vec::new();
        for (lo, hi) in out {
            // the root is in (lo, hi]
            if sf.eval(&hi).is_zero() {
                res.push((hi.clone(), hi));
                continue;
            }
            let (mut lo, hi) = (lo, hi);
            if sf.eval(&lo).is_zero() {
                // lo is a root of a neighbouring interval; shrink it away
                let mut l2 = rational::mid(&lo, &hi);
                while count(&l2) - count(&hi) == 0 {
                    l2 = rational::mid(&lo, &l2);
                }
                lo = l2;
            }
            // exact rational root inside?
            let rr: Vec<BigRat> = sf.rational_roots().into_iter().filter(|r| r > &lo && r < &hi).collect();
            if let Some(r) = rr.first() {
                res.push((r.clone(), r.clone()));
            } else {
                res.push((lo, hi));
            }
        }
        res.sort_by(|a, b| a.0.cmp(&b.0));
        res
    }

    /// Parses a polynomial in a single variable, e.g. `x^3-3x+1`,
    /// `2*t^2 - 1/3 t + 5`. The variable is any single ASCII letter.
    pub fn parse(s: &str) -> Result<Poly> {
        parse_poly(s).map(|(p, _)| p)
    }

    pub fn to_string_var(&self, var: char) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = rational::fmt(&a);
            match i {
                0 => out.push_str(&coef),
                _ => {
                    if !a.is_one() {
                        out.push_str(&coef);
                        if !a.is_integer() {
                            out.push('*');
                        }
                    }
                    out.push(var);
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var('x'))
    }
}

fn sign_changes(it: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut n = 0;
    for s in it {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

/// Parses a polynomial; returns it together with the variable letter seen
/// (if any).
pub fn parse_poly(s: &str) -> Result<(Poly, Option<char>)> {
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut var: Option<char> = None;
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in src.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && i == 0 {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    let mut p = Poly::zero();
    for (neg, t) in terms {
        if t.is_empty() {
            return Err(Error::Parse(format!("empty term in {s:?}")));
        }
        let letter_pos = t.find(|c: char| c.is_ascii_alphabetic());
        let (coef, exp) = match letter_pos {
            None => (rational::parse(&t)?, 0u32),
            Some(pos) => {
                let letter = t[pos..].chars().next().unwrap();
                match var {
                    None => var = Some(letter),
                    Some(v) if v != letter => {
                        return Err(Error::Parse(format!("more than one variable in {s:?}")))
                    }
                    _ => {}
                }
                let cpart = t[..pos].trim_end_matches('*');
                let coef = if cpart.is_empty() { rational::int(1) } else { rational::parse(cpart)? };
                let rest = &t[pos + 1..];
                let exp = if rest.is_empty() {
                    1
                } else if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?
                } else {
                    return Err(Error::Parse(format!("unexpected {rest:?} in term {t:?}")));
                };
                (coef, exp)
            }
        };
        if exp > 64 {
            return Err(Error::Parse("exponent too large".into()));
        }
        let mut c = vec![BigRat::zero(); exp as usize + 1];
        c[exp as usize] = if neg { -coef } else { coef };
        p = p.add(&Poly::new(c));
    }
    Ok((p, var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn parse_and_print() {
        let p = Poly::parse("x^3-3x+1").unwrap();
        assert_eq!(p, Poly::from_ints(&[1, -3, 0, 1]));
        assert_eq!(p.to_string(), "x^3 - 3x + 1");
        let q = Poly::parse("-t^2 + 1/2*t - 5").unwrap();
        assert_eq!(q.coeffs(), &[int(-5), rat(1, 2), int(-1)]);
        assert!(Poly::parse("x^2+y").is_err());
        assert_eq!(Poly::parse("7").unwrap(), Poly::from_ints(&[7]));
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]); // x^2 - 1
        let b = Poly::from_ints(&[-1, 1]); // x - 1
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, Poly::from_ints(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&Poly::from_ints(&[1, 1])), Poly::from_ints(&[1, 1]));
        let (g, s, t) = Poly::from_ints(&[-2, 0, 1]).ext_gcd(&Poly::from_ints(&[1, 1]));
        assert_eq!(g.degree(), Some(0));
        let lhs = s.mul(&Poly::from_ints(&[-2, 0, 1])).add(&t.mul(&Poly::from_ints(&[1, 1])));
        assert_eq!(lhs, g);
    }

    #[test]
    fn rational_roots_and_irreducibility() {
        let p = Poly::from_ints(&[-6, 11, -6, 1]); // (x-1)(x-2)(x-3)
        assert_eq!(p.rational_roots(), vec![int(1), int(2), int(3)]);
        assert!(Poly::from_ints(&[1, -3, 0, 1]).is_irreducible_low_degree().unwrap());
        assert!(!Poly::from_ints(&[-1, 0, 1]).is_irreducible_low_degree().unwrap());
        assert_eq!(Poly::from_ints(&[-3, 2]).rational_roots(), vec![rat(3, 2)]);
    }

    #[test]
    fn sturm_isolation_of_cubic() {
        let p = Poly::from_ints(&[1, -3, 0, 1]);
        let roots = p.isolate_real_roots();
        assert_eq!(roots.len(), 3);
        // roots near -1.879, 0.347, 1.532
        let approx = [-1.879385, 0.347296, 1.532089];
        for ((lo, hi), a) in roots.iter().zip(approx) {
            assert!(rational::to_f64(lo) <= a && a <= rational::to_f64(hi));
            assert_eq!(p.count_roots(lo, hi), 1);
        }
        let q = Poly::from_ints(&[-2, 1, 1]); // (x+2)(x-1)
        let r = q.isolate_real_roots();
        assert_eq!(r, vec![(int(-2), int(-2)), (int(1), int(1))]);
    }
}
