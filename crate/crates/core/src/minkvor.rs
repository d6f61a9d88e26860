//! Minkowski–Voronoi staircases of symmetrized lattices in dimensions 2 and 3.
//!
//! A point `x >= 0` is free when the closed box `[0, x]` holds no point of
//! `|Γ|`. The staircase is the boundary of the free region; its vertices are
//! the domination-minimal points of `|Γ|` and its nodes are the maximal points
//! of the closed free region.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rational, BigRat, IntMatrix};
use crate::intgeom::IntPoint;

/// Absolute values of the nonzero points of a lattice inside `[-W, W]^n`.
///
/// A rational basis is scaled by the common denominator `D`; points are
/// stored as integer numerators over `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymLatticeWindow {
    dim: usize,
    #[serde(serialize_with = "ser_basis")]
    basis: Vec<Vec<BigRat>>,
    denominator: i64,
    window: i64,
    points: Vec<IntPoint>,
}

fn ser_basis<S: serde::Serializer>(b: &[Vec<BigRat>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = b.iter().map(|r| r.iter().map(rational::fmt).collect()).collect();
    serde::Serialize::serialize(&v, s)
}

impl SymLatticeWindow {
    pub fn new(basis: Vec<Vec<BigRat>>, window: i64) -> Result<Self> {
        let n = basis.len();
        if !(2..=3).contains(&n) || basis.iter().any(|b| b.len() != n) {
            return Err(Error::InvalidInput(format!("need n basis vectors of length n = 2 or 3, got {n}")));
        }
        if window < 1 {
            return Err(Error::InvalidInput("window must be positive".into()));
        }
        let mut d = num_bigint::BigInt::from(1);
        for x in basis.iter().flatten() {
            d = d.lcm(x.denom());
        }
        let d = d.to_i64().ok_or(Error::Overflow)?;
        let rows = basis
            .iter()
            .map(|b| b.iter().map(|x| (x * BigRat::from_integer(d.into())).to_integer().to_i64().ok_or(Error::Overflow)).collect())
            .collect::<Result<Vec<Vec<i64>>>>()?;
        let m = IntMatrix::from_rows(&rows)?;
        if m.det()? == 0 {
            return Err(Error::RankDeficient);
        }
        let bound = window.checked_mul(d).ok_or(Error::Overflow)?;
        let points = abs_points(&m.hnf_row()?.0, bound)?;
        Ok(SymLatticeWindow { dim: n, basis, denominator: d, window, points })
    }

    pub fn from_ints(basis: &[Vec<i64>], window: i64) -> Result<Self> {
        Self::new(basis.iter().map(|b| b.iter().map(|&x| rational::int(x)).collect()).collect(), window)
    }

    /// Parses `"2,1;1,2"`; entries may be rationals such as `1/2`.
    pub fn parse_basis(s: &str) -> Result<Vec<Vec<BigRat>>> {
        s.split(';').map(|row| row.split(',').map(rational::parse).collect()).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<BigRat>] {
        &self.basis
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// Numerators of the points of `|Γ|`, sorted lexicographically.
    pub fn points(&self) -> &[IntPoint] {
        &self.points
    }

    fn scaled_window(&self) -> i64 {
        self.window * self.denominator
    }

    fn doubled(&self) -> Result<Self> {
        Self::new(self.basis.clone(), self.window.checked_mul(2).ok_or(Error::Overflow)?)
    }
}

/// Enumerates `|x|` for nonzero `x = z H` with `H` upper triangular.
fn abs_points(h: &IntMatrix, bound: i64) -> Result<Vec<IntPoint>> {
    let n = h.rows();
    let mut out = BTreeSet::new();
    let mut x = vec![0i64; n];
    fn rec(h: &IntMatrix, k: usize, bound: i64, x: &mut Vec<i64>, out: &mut BTreeSet<Vec<i64>>) {
        let n = h.rows();
        if k == n {
            if x.iter().any(|&c| c != 0) {
                out.insert(x.iter().map(|c| c.abs()).collect());
            }
            return;
        }
        let piv = h.get(k, k);
        let (lo, hi) = (Integer::div_ceil(&(-bound - x[k]), &piv), Integer::div_floor(&(bound - x[k]), &piv));
        for z in lo..=hi {
            for j in k..n {
                x[j] += z * h.get(k, j);
            }
            rec(h, k + 1, bound, x, out);
            for j in k..n {
                x[j] -= z * h.get(k, j);
            }
        }
    }
    rec(h, 0, bound, &mut x, &mut out);
    out.into_iter().map(IntPoint::new).collect()
}

fn dominates(q: &[i64], p: &[i64]) -> bool {
    q.iter().zip(p).all(|(a, b)| a <= b)
}

/// Domination-minimal elements, sorted lexicographically.
fn minimal(points: &[IntPoint]) -> Vec<IntPoint> {
    let mut order: Vec<&IntPoint> = points.iter().collect();
    order.sort_by_key(|p| p.coords().iter().sum::<i64>());
    let mut mins: Vec<IntPoint> = Vec::new();
    for p in order {
        if !mins.iter().any(|m| dominates(m.coords(), p.coords())) {
            mins.push(p.clone());
        }
    }
    mins.sort();
    mins
}

fn minima_checked(l: &SymLatticeWindow) -> Result<Vec<IntPoint>> {
    let mins = minimal(&l.points);
    let w = l.scaled_window();
    for i in 0..l.dim {
        let on_axis = mins.iter().any(|m| m.coords().iter().enumerate().all(|(j, &c)| (j == i) == (c != 0)) && m.coords()[i] < w);
        if !on_axis {
            return Err(Error::WindowTooSmall(format!("no lattice point on axis {} strictly inside window {}", i + 1, l.window)));
        }
    }
    Ok(mins)
}

/// Local minima of `|Γ|`: points not dominated coordinate-wise by another one.
pub fn local_minima(l: &SymLatticeWindow) -> Result<Vec<IntPoint>> {
    let mins = minima_checked(l)?;
    let big = l.doubled()?;
    let w = l.scaled_window();
    let again: Vec<IntPoint> = minimal(&big.points).into_iter().filter(|m| m.max_norm() <= w).collect();
    if again != mins {
        return Err(Error::WindowTooSmall(format!("minima change when the window {} is doubled", l.window)));
    }
    Ok(mins)
}

/// An axis-aligned piece of the staircase, orthogonal to `axis`; `lo` and
/// `hi` are opposite corners (equal in the `axis` coordinate).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct StairFacet {
    pub axis: usize,
    pub lo: IntPoint,
    pub hi: IntPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Staircase {
    pub dim: usize,
    pub denominator: i64,
    pub window: i64,
    pub minima: Vec<IntPoint>,
    pub nodes: Vec<IntPoint>,
    pub facets: Vec<StairFacet>,
}

impl Staircase {
    /// Whether `x` (in unscaled coordinates) lies in the free region.
    pub fn is_free(&self, x: &[BigRat]) -> bool {
        if x.len() != self.dim || x.iter().any(|c| c.is_negative()) {
            return false;
        }
        let d = BigRat::from_integer(self.denominator.into());
        let x: Vec<BigRat> = x.iter().map(|c| c * &d).collect();
        !self.minima.iter().any(|m| m.coords().iter().zip(&x).all(|(&a, b)| BigRat::from_integer(a.into()) <= *b))
    }
}

struct Grid {
    vals: Vec<Vec<i64>>,
    cells: Vec<usize>,
    occ: Vec<bool>,
}

impl Grid {
    fn new(mins: &[IntPoint], w: i64, dim: usize) -> Grid {
        let vals: Vec<Vec<i64>> = (0..dim)
            .map(|i| {
                let mut v: BTreeSet<i64> = mins.iter().map(|m| m.coords()[i]).collect();
                v.insert(0);
                v.insert(w);
                v.into_iter().collect()
            })
            .collect();
        let cells: Vec<usize> = vals.iter().map(|v| v.len() - 1).collect();
        let total = cells.iter().product();
        let mut g = Grid { vals, cells, occ: vec![false; total] };
        for m in mins {
            let idx: Vec<usize> = (0..dim).map(|i| g.vals[i].binary_search(&m.coords()[i]).expect("grid value")).collect();
            if idx.iter().zip(&g.cells).all(|(a, b)| a < b) {
                let f = g.flat(&idx);
                g.occ[f] = true;
            }
        }
        for f in 0..total {
            let idx = g.unflat(f);
            for i in 0..dim {
                if idx[i] > 0 {
                    let mut j = idx.clone();
                    j[i] -= 1;
                    if g.occ[g.flat(&j)] {
                        g.occ[f] = true;
                    }
                }
            }
        }
        g
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.cells).fold(0, |acc, (i, c)| acc * c + i)
    }

    fn unflat(&self, mut f: usize) -> Vec<usize> {
        let mut idx = vec![0; self.cells.len()];
        for i in (0..self.cells.len()).rev() {
            idx[i] = f % self.cells[i];
            f /= self.cells[i];
        }
        idx
    }

    fn occupied(&self, idx: &[usize]) -> bool {
        self.occ[self.flat(idx)]
    }
}

/// The staircase bounding the free region of `|Γ|` inside the window.
pub fn mv_sail(l: &SymLatticeWindow) -> Result<Staircase> {
    let minima = local_minima(l)?;
    Ok(staircase_from(l, minima))
}

fn staircase_from(l: &SymLatticeWindow, minima: Vec<IntPoint>) -> Staircase {
    let dim = l.dim;
    let g = Grid::new(&minima, l.scaled_window(), dim);
    let total = g.occ.len();

    let nodes: BTreeSet<IntPoint> = (0..total)
        .into_par_iter()
        .filter_map(|f| {
            let c = g.unflat(f);
            if g.occ[f] {
                return None;
            }
            let maximal = (0..dim).all(|i| {
                let mut j = c.clone();
                j[i] += 1;
                j[i] < g.cells[i] && g.occupied(&j)
            });
            maximal.then(|| IntPoint::new((0..dim).map(|i| g.vals[i][c[i] + 1]).collect()).expect("dim"))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    // Unit pieces keyed by (axis, other coordinates except the merge axis).
    let mut pieces: BTreeMap<(usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for f in 0..total {
        let c = g.unflat(f);
        if !g.occ[f] {
            continue;
        }
        for i in 0..dim {
            if c[i] == 0 {
                continue;
            }
            let mut below = c.clone();
            below[i] -= 1;
            if g.occupied(&below) {
                continue;
            }
            let j = if i == 0 { 1 } else { 0 };
            let mut key = c.clone();
            key[j] = usize::MAX;
            pieces.entry((i, key)).or_default().push(c[j]);
        }
    }
    let mut facets = Vec::new();
    for ((i, key), mut run) in pieces {
        let j = if i == 0 { 1 } else { 0 };
        run.sort_unstable();
        let mut start = 0;
        while start < run.len() {
            let mut end = start;
            while end + 1 < run.len() && run[end + 1] == run[end] + 1 {
                end += 1;
            }
            let mut lo = vec![0i64; dim];
            let mut hi = vec![0i64; dim];
            for k in 0..dim {
                if k == i {
                    lo[k] = g.vals[k][key[k]];
                    hi[k] = lo[k];
                } else if k == j {
                    lo[k] = g.vals[k][run[start]];
                    hi[k] = g.vals[k][run[end] + 1];
                } else {
                    lo[k] = g.vals[k][key[k]];
                    hi[k] = g.vals[k][key[k] + 1];
                }
            }
            facets.push(StairFacet { axis: i, lo: IntPoint::new(lo).expect("dim"), hi: IntPoint::new(hi).expect("dim") });
            start = end + 1;
        }
    }
    facets.sort();
    Staircase { dim, denominator: l.denominator, window: l.window, minima, nodes: nodes.into_iter().collect(), facets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::{continuants, expand, Parity};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pts(v: &[&[i64]]) -> Vec<IntPoint> {
        v.iter().map(|c| IntPoint::new(c.to_vec()).unwrap()).collect()
    }

    #[test]
    fn integer_lattices() {
        let z2 = mv_sail(&SymLatticeWindow::from_ints(&[vec![1, 0], vec![0, 1]], 5).unwrap()).unwrap();
        assert_eq!(z2.minima, pts(&[&[0, 1], &[1, 0]]));
        assert_eq!(z2.nodes, pts(&[&[1, 1]]));
        assert_eq!(z2.facets.len(), 2);
        let z3 = mv_sail(&SymLatticeWindow::from_ints(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 4).unwrap()).unwrap();
        assert_eq!(z3.minima, pts(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
        assert_eq!(z3.nodes, pts(&[&[1, 1, 1]]));
        assert_eq!(z3.facets.len(), 3);
        for f in &z3.facets {
            let lo = f.lo.coords();
            let hi = f.hi.coords();
            assert!((0..3).all(|k| if k == f.axis { lo[k] == 1 && hi[k] == 1 } else { lo[k] == 0 && hi[k] == 1 }));
        }
    }

    #[test]
    fn skew_lattice_minima() {
        let l = SymLatticeWindow::from_ints(&[vec![2, 1], vec![1, 2]], 12).unwrap();
        let s = mv_sail(&l).unwrap();
        assert_eq!(s.minima, pts(&[&[0, 3], &[1, 1], &[3, 0]]));
        assert_eq!(s.nodes, pts(&[&[1, 3], &[3, 1]]));
    }

    #[test]
    fn rational_basis() {
        let b = SymLatticeWindow::parse_basis("1/2,0;0,1/3").unwrap();
        let s = mv_sail(&SymLatticeWindow::new(b, 3).unwrap()).unwrap();
        assert_eq!(s.denominator, 6);
        assert_eq!(s.minima, pts(&[&[0, 2], &[3, 0]]));
        assert!(s.is_free(&[rational::rat(1, 3), rational::rat(1, 4)]));
        assert!(!s.is_free(&[rational::rat(1, 2), rational::rat(0, 1)]));
    }

    #[test]
    fn window_too_small() {
        let l = SymLatticeWindow::from_ints(&[vec![1, 0], vec![0, 7]], 5).unwrap();
        assert!(matches!(local_minima(&l), Err(Error::WindowTooSmall(_))));
    }

    fn random_basis(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
        loop {
            let b: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect()).collect();
            let d = IntMatrix::from_rows(&b).unwrap().det().unwrap();
            if d != 0 && d.abs() <= 12 {
                return b;
            }
        }
    }

    #[test]
    fn random_lattices_match_brute_force_and_raster() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let b = random_basis(&mut rng, 2);
            let l = SymLatticeWindow::from_ints(&b, 30).unwrap();
            let s = mv_sail(&l).unwrap();
            let brute: Vec<IntPoint> = l
                .points()
                .iter()
                .filter(|p| !l.points().iter().any(|q| q != *p && dominates(q.coords(), p.coords())))
                .cloned()
                .collect();
            assert_eq!(s.minima, brute);
            // half-integer raster of the closed-box free region
            for x in 0..30 {
                for y in 0..30 {
                    let (hx, hy) = (2 * x + 1, 2 * y + 1);
                    let empty = !l.points().iter().any(|p| 2 * p.coords()[0] <= hx && 2 * p.coords()[1] <= hy);
                    assert_eq!(s.is_free(&[rational::rat(hx, 2), rational::rat(hy, 2)]), empty);
                }
            }
            let big = mv_sail(&SymLatticeWindow::from_ints(&b, 60).unwrap()).unwrap();
            assert_eq!(big.minima, s.minima);
            assert_eq!(big.nodes, s.nodes);
        }
    }

    #[test]
    fn facets_bound_the_free_region_3d() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let b = random_basis(&mut rng, 3);
            let s = mv_sail(&SymLatticeWindow::from_ints(&b, 16).unwrap()).unwrap();
            for f in &s.facets {
                let (lo, hi) = (f.lo.coords(), f.hi.coords());
                // midpoint of the facet, nudged to each side
                let mid: Vec<BigRat> = lo.iter().zip(hi).map(|(a, b)| rational::rat(a + b, 2)).collect();
                let mut under = mid.clone();
                under[f.axis] -= rational::rat(1, 4);
                let mut over = mid;
                over[f.axis] += rational::rat(1, 4);
                let d = rational::int(s.denominator);
                assert!(s.is_free(&under.iter().map(|c| c / &d).collect::<Vec<_>>()));
                assert!(!s.is_free(&over.iter().map(|c| c / &d).collect::<Vec<_>>()));
            }
            for n in &s.nodes {
                assert!(s.minima.iter().all(|m| !m.coords().iter().zip(n.coords()).all(|(a, b)| a < b)));
            }
        }
    }

    #[test]
    fn bridge_to_convergents() {
        for p in 2..=60i64 {
            for q in 1..p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let l = SymLatticeWindow::from_ints(&[vec![1, p], vec![0, q]], 2 * p).unwrap();
                let firsts: BTreeSet<i64> = local_minima(&l).unwrap().iter().map(|m| m.coords()[0]).filter(|&c| c > 0).collect();
                let cf = expand(&rational::rat(p, q), Parity::Any);
                let dens: BTreeSet<i64> = continuants(cf.head()).iter().map(|(_, d)| d.to_i64().unwrap()).collect();
                assert_eq!(firsts, dens, "{p}/{q}");
            }
        }
    }

    #[test]
    fn zero_window_rejected() {
        assert!(SymLatticeWindow::from_ints(&[vec![1, 0], vec![0, 1]], 0).is_err());
        assert!(matches!(SymLatticeWindow::from_ints(&[vec![1, 2], vec![2, 4]], 5), Err(Error::RankDeficient)));
    }
}
