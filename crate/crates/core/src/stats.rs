//! Gauss–Kuzmin statistics of continued fraction digits.
//!
//! The digit law is `P(a_n = k) = log2(1 + 1/(k(k+2)))`, which equals
//! `ln [-1, 0, k, k+1] / ln [-1, 0, 1, ∞]` in terms of cross-ratios.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rational, BigRat};
use crate::intgeom::IntPoint;
use crate::klein::{klein_sail, ConeSpec};

/// Largest denominator bound accepted by [`empirical_digits`].
pub const MAX_EMPIRICAL_QMAX: u64 = 20_000;
pub const DEFAULT_K_MAX: usize = 100;

/// `log2(1 + 1/(k(k+2)))`.
pub fn gk_probability(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("digit must be at least 1".into()));
    }
    let k = k as f64;
    Ok((1.0 / (k * (k + 2.0))).ln_1p() / std::f64::consts::LN_2)
}

/// A rational number or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtRat {
    Finite(BigRat),
    Infinity,
}

impl ExtRat {
    pub fn int(n: i64) -> Self {
        ExtRat::Finite(rational::int(n))
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => write!(f, "{}", rational::fmt(r)),
            ExtRat::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(ExtRat::Infinity),
            t => rational::parse(t).map(ExtRat::Finite),
        }
    }
}

impl Serialize for ExtRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `((c-a)(d-b)) / ((c-b)(d-a))`; factors involving `∞` cancel in pairs.
pub fn cross_ratio(a: &ExtRat, b: &ExtRat, c: &ExtRat, d: &ExtRat) -> Result<ExtRat> {
    let pts = [a, b, c, d];
    let distinct = (0..4).filter(|&i| (0..i).all(|j| pts[j] != pts[i])).count();
    if distinct < 3 {
        return Err(Error::UndefinedCrossRatio);
    }
    let factor = |x: &ExtRat, y: &ExtRat| match (x, y) {
        (ExtRat::Finite(x), ExtRat::Finite(y)) => Some(x - y),
        _ => None,
    };
    let prod = |fs: [Option<BigRat>; 2]| fs.into_iter().flatten().fold(BigRat::one(), |acc, f| acc * f);
    let num = prod([factor(c, a), factor(d, b)]);
    let den = prod([factor(c, b), factor(d, a)]);
    if den.is_zero() {
        return Ok(ExtRat::Infinity);
    }
    Ok(ExtRat::Finite(num / den))
}

/// `|sum_{k<=K} ln((k+1)^2 / (k(k+2))) - ln 2|`, summed from the smallest
/// term up.
pub fn telescoping_check(k_max: u64) -> Result<f64> {
    if k_max == 0 {
        return Err(Error::InvalidInput("K must be at least 1".into()));
    }
    let sum: f64 = (1..=k_max).rev().map(|k| (1.0 / (k as f64 * (k as f64 + 2.0))).ln_1p()).sum();
    Ok((sum - std::f64::consts::LN_2).abs())
}

/// Tally of continued fraction digits; `counts[k-1]` holds digit `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DigitHistogram {
    pub counts: Vec<u64>,
    /// Digits above `counts.len()`.
    pub overflow: u64,
    pub total: u64,
    pub source: String,
}

impl DigitHistogram {
    pub fn k_max(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, k: usize) -> u64 {
        if k == 0 {
            0
        } else {
            self.counts.get(k - 1).copied().unwrap_or(0)
        }
    }

    pub fn frequency(&self, k: usize) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.count(k) as f64 / self.total as f64
    }
}

pub fn empirical_digits(q_max: u64) -> Result<DigitHistogram> {
    empirical_digits_with(q_max, DEFAULT_K_MAX)
}

/// Digits `a_1, a_2, ...` of every reduced `p/q` with `1 <= p < q <= q_max`.
pub fn empirical_digits_with(q_max: u64, k_max: usize) -> Result<DigitHistogram> {
    if q_max < 2 {
        return Err(Error::InvalidInput("q_max must be at least 2".into()));
    }
    if q_max > MAX_EMPIRICAL_QMAX {
        return Err(Error::ResourceLimit(format!("q_max {q_max} exceeds the cap {MAX_EMPIRICAL_QMAX}")));
    }
    if k_max == 0 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    let tally = |q: u64| {
        let mut counts = vec![0u64; k_max + 1];
        for p in 1..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let (mut a, mut b) = (q, p);
            while b != 0 {
                let d = a / b;
                counts[(d as usize).min(k_max + 1) - 1] += 1;
                (a, b) = (b, a % b);
            }
        }
        counts
    };
    let all = (2..=q_max)
        .into_par_iter()
        .map(tally)
        .reduce(|| vec![0u64; k_max + 1], |mut x, y| {
            x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
            x
        });
    let overflow = all[k_max];
    let counts = all[..k_max].to_vec();
    let total = counts.iter().sum::<u64>() + overflow;
    Ok(DigitHistogram { counts, overflow, total, source: format!("reduced p/q, 1 <= p < q <= {q_max}") })
}

/// Tally of compact Klein sail faces over random rational cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceCensus {
    pub dim: usize,
    pub gen_bound: i64,
    pub samples: usize,
    pub seed: u64,
    pub cones: usize,
    pub skipped: usize,
    pub faces_distance_one: u64,
    pub faces_distance_above_one: u64,
    /// Face normal form to number of occurrences.
    pub classes: BTreeMap<String, u64>,
}

/// Samples cones whose generators have entries in `[-B, B]` and tallies the
/// normal forms of their compact sail faces.
pub fn face_census(dim: usize, gen_bound: i64, samples: usize, seed: u64) -> Result<FaceCensus> {
    if !(2..=3).contains(&dim) {
        return Err(Error::InvalidInput(format!("dimension must be 2 or 3, got {dim}")));
    }
    if gen_bound < 1 {
        return Err(Error::InvalidInput("generator bound must be positive".into()));
    }
    let per_cone: Vec<Option<Vec<(i64, String)>>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let gens = loop {
                let g: Vec<IntPoint> = (0..dim)
                    .map(|_| IntPoint::new((0..dim).map(|_| rng.gen_range(-gen_bound..=gen_bound)).collect()).expect("dim"))
                    .collect();
                if let Ok(c) = ConeSpec::rational(g) {
                    break c;
                }
            };
            let sail = klein_sail(&gens, 0).ok()?;
            Some(
                sail.faces
                    .iter()
                    .filter(|f| f.is_compact())
                    .filter_map(|f| f.normal_form.as_ref().map(|nf| (f.distance, nf.to_string())))
                    .collect(),
            )
        })
        .collect();
    let mut census = FaceCensus {
        dim,
        gen_bound,
        samples,
        seed,
        cones: 0,
        skipped: 0,
        faces_distance_one: 0,
        faces_distance_above_one: 0,
        classes: BTreeMap::new(),
    };
    for faces in per_cone {
        let Some(faces) = faces else {
            census.skipped += 1;
            continue;
        };
        census.cones += 1;
        for (d, nf) in faces {
            if d == 1 {
                census.faces_distance_one += 1;
            } else {
                census.faces_distance_above_one += 1;
            }
            *census.classes.entry(nf).or_default() += 1;
        }
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `ln x` for rational `x` near 1 via the atanh series.
    fn ln_oracle(x: &BigRat) -> f64 {
        let t = (x - BigRat::one()) / (x + BigRat::one());
        let t2 = &t * &t;
        let mut term = t.clone();
        let mut sum = BigRat::zero();
        for n in 0..30 {
            sum += &term / rational::int(2 * n + 1);
            term *= &t2;
        }
        rational::to_f64(&(sum * rational::int(2)))
    }

    #[test]
    fn closed_forms() {
        let p1 = gk_probability(1).unwrap();
        let ln43 = ln_oracle(&rational::rat(4, 3));
        let oracle = ln43 / (ln43 + ln_oracle(&rational::rat(3, 2)));
        assert!((p1 - oracle).abs() < 1e-12);
        assert!((p1 - 0.415037).abs() < 1e-6);
        assert!((gk_probability(2).unwrap() - 0.169925).abs() < 1e-6);
        assert!(gk_probability(0).is_err());
        let mut partial = 0.0;
        for k in 1..=1000u64 {
            let next = partial + gk_probability(k).unwrap();
            assert!(next > partial && next < 1.0);
            partial = next;
            let kf = k as f64;
            assert!((partial - (2.0 * (kf + 1.0) / (kf + 2.0)).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn cross_ratio_examples() {
        let r = |a, b, c, d| cross_ratio(&ExtRat::int(a), &ExtRat::int(b), &ExtRat::int(c), &ExtRat::int(d)).unwrap();
        assert_eq!(r(-1, 0, 1, 2), ExtRat::Finite(rational::rat(4, 3)));
        assert_eq!(r(0, 1, 2, 3), ExtRat::Finite(rational::rat(4, 3)));
        let inf = cross_ratio(&ExtRat::int(-1), &ExtRat::int(0), &ExtRat::int(1), &ExtRat::Infinity).unwrap();
        assert_eq!(inf, ExtRat::int(2));
        assert_eq!(r(0, 0, 1, 2), ExtRat::int(1));
        assert_eq!(r(0, 1, 0, 2), ExtRat::int(0));
        assert_eq!(r(0, 1, 2, 0), ExtRat::Infinity);
        assert!(matches!(cross_ratio(&ExtRat::int(0), &ExtRat::int(0), &ExtRat::int(1), &ExtRat::int(1)), Err(Error::UndefinedCrossRatio)));
        assert_eq!("inf".parse::<ExtRat>().unwrap(), ExtRat::Infinity);
        assert_eq!("-3/6".parse::<ExtRat>().unwrap().to_string(), "-1/2");
    }

    #[test]
    fn cross_ratio_identity() {
        for k in 1..=1000i64 {
            let cr = cross_ratio(&ExtRat::int(-1), &ExtRat::int(0), &ExtRat::int(k), &ExtRat::int(k + 1)).unwrap();
            let expect = rational::rat((k + 1) * (k + 1), k * (k + 2));
            assert_eq!(cr, ExtRat::Finite(expect.clone()));
            assert_eq!(expect, BigRat::one() + rational::rat(1, k * (k + 2)));
            let lhs = gk_probability(k as u64).unwrap() * std::f64::consts::LN_2;
            assert!((lhs - rational::to_f64(&(expect - BigRat::one())).ln_1p()).abs() <= 1e-15 * lhs.max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn telescoping() {
        assert!((telescoping_check(1).unwrap() - 1.5f64.ln()).abs() < 1e-15);
        let k = 1_000_000u64;
        let r = telescoping_check(k).unwrap();
        assert!(r < 2e-6);
        assert!((r - ((k as f64 + 2.0) / (k as f64 + 1.0)).ln()).abs() < 1e-11);
    }

    #[test]
    fn empirical_examples() {
        let h = empirical_digits(3).unwrap();
        assert_eq!((h.count(1), h.count(2), h.count(3), h.total), (1, 2, 1, 4));
        let h = empirical_digits(2).unwrap();
        assert_eq!((h.count(2), h.total), (1, 1));
        assert!(empirical_digits(1).is_err());
        assert!(matches!(empirical_digits(MAX_EMPIRICAL_QMAX + 1), Err(Error::ResourceLimit(_))));
        let a = empirical_digits_with(300, 5).unwrap();
        let b = empirical_digits_with(300, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.iter().sum::<u64>() + a.overflow, a.total);
    }

    #[test]
    fn census_is_deterministic() {
        let a = face_census(3, 3, 12, 5).unwrap();
        let b = face_census(3, 3, 12, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cones + a.skipped, 12);
        assert_eq!(a.classes.values().sum::<u64>(), a.faces_distance_one + a.faces_distance_above_one);
        assert!(face_census(4, 3, 1, 0).is_err());
    }
}
