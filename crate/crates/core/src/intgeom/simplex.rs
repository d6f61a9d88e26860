//! Lattice simplices: emptiness, lattice width, congruence normal forms and
//! the enumeration of empty tetrahedra.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::IntPoint;
use crate::error::{Error, Result};
use crate::exact::IntMatrix;

/// Largest normalized volume accepted by [`enumerate_empty_simplices_3d`].
pub const DEFAULT_MAX_VOLUME_CAP: i64 = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntSimplex {
    vertices: Vec<IntPoint>,
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!("dimension is at most three"),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

impl IntSimplex {
    /// A simplex from affinely independent vertices of a common dimension.
    pub fn new(vertices: Vec<IntPoint>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidInput("simplex without vertices".into()));
        };
        let n = first.dim();
        if vertices.iter().any(|v| v.dim() != n) {
            return Err(Error::InvalidInput("vertices of different dimensions".into()));
        }
        let k = vertices.len() - 1;
        if k > n {
            return Err(Error::InvalidInput(format!("{} vertices in dimension {n}", vertices.len())));
        }
        let s = IntSimplex { vertices };
        if k > 0 && s.edge_rows()?.rank() < k {
            return Err(Error::RankDeficient);
        }
        Ok(s)
    }

    pub fn vertices(&self) -> &[IntPoint] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    fn edges(&self) -> Vec<IntPoint> {
        self.vertices[1..].iter().map(|v| v - &self.vertices[0]).collect()
    }

    fn edge_rows(&self) -> Result<IntMatrix> {
        IntMatrix::from_rows(&self.edges().iter().map(|e| e.coords().to_vec()).collect::<Vec<_>>())
    }

    /// Normalized volume: index of the edge lattice in the lattice of the
    /// affine hull (`|det|` for full-dimensional simplices).
    pub fn normalized_volume(&self) -> Result<i64> {
        if self.dim() == 0 {
            return Ok(1);
        }
        self.edge_rows()?.saturation_index()
    }

    /// Exact membership test for a point of the ambient space.
    pub fn contains(&self, x: &IntPoint) -> bool {
        self.membership().contains(x)
    }

    fn membership(&self) -> Membership {
        let k = self.dim();
        let n = self.ambient_dim();
        let e: Vec<Vec<i128>> = self.edges().iter().map(|v| v.coords().iter().map(|&c| c as i128).collect()).collect();
        // choose k coordinates on which the edge vectors are independent
        let rows = subsets(n, k)
            .into_iter()
            .find(|r| det_i128(&square(&e, r)) != 0)
            .expect("edges are independent");
        let det = det_i128(&square(&e, &rows));
        Membership { v0: self.vertices[0].coords().iter().map(|&c| c as i128).collect(), e, rows, det }
    }

    /// All integer points of the closed simplex.
    pub fn lattice_points(&self) -> Vec<IntPoint> {
        let n = self.ambient_dim();
        let lo: Vec<i64> = (0..n).map(|i| self.vertices.iter().map(|v| v.coords()[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..n).map(|i| self.vertices.iter().map(|v| v.coords()[i]).max().unwrap()).collect();
        let mem = self.membership();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let p = IntPoint(cur.clone());
            if mem.contains(&p) {
                out.push(p);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                cur[i] += 1;
                if cur[i] <= hi[i] {
                    break;
                }
                cur[i] = lo[i];
                i += 1;
            }
        }
    }

    /// True when the vertices are the only integer points of the simplex.
    pub fn is_empty(&self) -> bool {
        self.lattice_points().len() == self.vertices.len()
    }

    /// Lattice width over nonzero integer functionals.
    ///
    /// The search radius is the largest coordinate spread `R`; the result is
    /// re-checked with radius `2R`.
    pub fn lattice_width(&self) -> Result<i64> {
        let n = self.ambient_dim();
        if self.dim() != n {
            return Err(Error::InvalidInput("lattice width needs a full-dimensional simplex".into()));
        }
        let spread = (0..n)
            .map(|i| {
                let c = self.vertices.iter().map(|v| v.coords()[i]);
                c.clone().max().unwrap() - c.min().unwrap()
            })
            .max()
            .unwrap()
            .max(1);
        let w = self.width_within(spread);
        let w2 = self.width_within(2 * spread);
        debug_assert_eq!(w, w2, "width search radius too small");
        Ok(w.min(w2))
    }

    fn width_within(&self, r: i64) -> i64 {
        let n = self.ambient_dim();
        let mut best = i64::MAX;
        let mut f = vec![-r; n];
        loop {
            // skip zero and functionals whose first nonzero entry is negative
            if let Some(first) = f.iter().find(|&&x| x != 0) {
                if *first > 0 {
                    let vals = self.vertices.iter().map(|v| v.coords().iter().zip(&f).map(|(a, b)| a * b).sum::<i64>());
                    let w = vals.clone().max().unwrap() - vals.min().unwrap();
                    best = best.min(w);
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    return best;
                }
                f[i] += 1;
                if f[i] <= r {
                    break;
                }
                f[i] = -r;
                i += 1;
            }
        }
    }
}

fn square(e: &[Vec<i128>], rows: &[usize]) -> Vec<Vec<i128>> {
    // entry (r, j) = coordinate rows[r] of edge j
    rows.iter().map(|&r| e.iter().map(|col| col[r]).collect()).collect()
}

struct Membership {
    v0: Vec<i128>,
    e: Vec<Vec<i128>>,
    rows: Vec<usize>,
    det: i128,
}

impl Membership {
    fn contains(&self, x: &IntPoint) -> bool {
        let y: Vec<i128> = x.coords().iter().zip(&self.v0).map(|(&a, b)| a as i128 - b).collect();
        let k = self.e.len();
        let base = square(&self.e, &self.rows);
        let s = self.det.signum();
        let mut nums = Vec::with_capacity(k);
        for j in 0..k {
            let mut m = base.clone();
            for (r, &row) in self.rows.iter().enumerate() {
                m[r][j] = y[row];
            }
            let num = det_i128(&m) * s;
            if num < 0 {
                return false;
            }
            nums.push(num);
        }
        let d = self.det.abs();
        if nums.iter().sum::<i128>() > d {
            return false;
        }
        // the point must lie in the affine hull
        (0..y.len()).all(|c| d * y[c] == (0..k).map(|j| nums[j] * self.e[j][c]).sum::<i128>())
    }
}

/// Congruence normal form: the lexicographically smallest row-style HNF of
/// the edge matrix (edges as columns) over all vertex orderings.
pub fn simplex_normal_form(s: &IntSimplex) -> Result<IntMatrix> {
    let k = s.dim();
    let mut best: Option<IntMatrix> = None;
    for perm in permutations(k + 1) {
        let v0 = &s.vertices[perm[0]];
        let cols: Vec<Vec<i64>> = perm[1..].iter().map(|&i| (&s.vertices[i] - v0).coords().to_vec()).collect();
        let m = IntMatrix::from_cols(&cols)?;
        let h = m.hnf_row()?.0;
        if best.as_ref().map_or(true, |b| h < *b) {
            best = Some(h);
        }
    }
    Ok(best.expect("at least one ordering"))
}

fn simplex_from_columns(h: &IntMatrix) -> IntSimplex {
    let mut v = vec![IntPoint::origin(h.rows())];
    for j in 0..h.cols() {
        v.push(IntPoint(h.col(j)));
    }
    IntSimplex { vertices: v }
}

/// One representative per congruence class of empty lattice tetrahedra with
/// normalized volume at most `max_volume`, sorted by volume and normal form.
///
/// Candidates are the upper-triangular Hermite forms of each determinant;
/// every tetrahedron with a vertex at the origin is congruent to one of them.
pub fn enumerate_empty_simplices_3d(max_volume: i64) -> Result<Vec<IntSimplex>> {
    if max_volume < 1 {
        return Err(Error::InvalidInput("max_volume must be at least 1".into()));
    }
    if max_volume > DEFAULT_MAX_VOLUME_CAP {
        return Err(Error::ResourceLimit(format!(
            "max_volume {max_volume} exceeds the cap {DEFAULT_MAX_VOLUME_CAP}"
        )));
    }
    let per_volume: Vec<Result<BTreeMap<IntMatrix, IntSimplex>>> = (1..=max_volume)
        .into_par_iter()
        .map(|vol| {
            let mut found = BTreeMap::new();
            for a in (1..=vol).filter(|a| vol % a == 0) {
                for d in (1..=vol / a).filter(|d| (vol / a) % d == 0) {
                    let f = vol / a / d;
                    for b in 0..d {
                        for c in 0..f {
                            for e in 0..f {
                                let m = IntMatrix::from_rows(&[vec![a, b, c], vec![0, d, e], vec![0, 0, f]])?;
                                let s = simplex_from_columns(&m);
                                if !facets_unimodular(&s) || !s.is_empty() {
                                    continue;
                                }
                                let nf = simplex_normal_form(&s)?;
                                found.entry(nf.clone()).or_insert_with(|| simplex_from_columns(&nf));
                            }
                        }
                    }
                }
            }
            Ok(found)
        })
        .collect();
    let mut out = Vec::new();
    for r in per_volume {
        out.extend(r?.into_values());
    }
    Ok(out)
}

/// Every facet of an empty tetrahedron is an empty, hence unimodular,
/// triangle; a cheap necessary condition checked before full enumeration.
fn facets_unimodular(s: &IntSimplex) -> bool {
    (0..4).all(|skip| {
        let v: Vec<&IntPoint> = s.vertices.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, p)| p).collect();
        super::int_area(v[0], v[1], v[2]) == Ok(1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex(v: &[&[i64]]) -> IntSimplex {
        IntSimplex::new(v.iter().map(|c| IntPoint::new(c.to_vec()).unwrap()).collect()).unwrap()
    }

    #[test]
    fn emptiness_examples() {
        assert!(simplex(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).is_empty());
        assert!(!simplex(&[&[0, 0], &[2, 0], &[0, 2]]).is_empty());
        assert!(simplex(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]).is_empty());
        // a triangle in space
        assert!(!simplex(&[&[0, 0, 0], &[2, 0, 2], &[0, 1, 0]]).is_empty());
        assert_eq!(simplex(&[&[0, 0, 0], &[2, 0, 2], &[0, 1, 0]]).normalized_volume().unwrap(), 2);
    }

    #[test]
    fn width_examples() {
        assert_eq!(simplex(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).lattice_width().unwrap(), 1);
        assert_eq!(simplex(&[&[0, 0], &[3, 0], &[0, 3]]).lattice_width().unwrap(), 3);
        assert_eq!(simplex(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]).lattice_width().unwrap(), 1);
    }

    #[test]
    fn degenerate_simplex_rejected() {
        let r = IntSimplex::new(vec![IntPoint::from([0, 0]), IntPoint::from([1, 1]), IntPoint::from([2, 2])]);
        assert_eq!(r, Err(Error::RankDeficient));
    }

    #[test]
    fn normal_form_is_congruence_invariant() {
        let s = simplex(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]);
        let moved = simplex(&[&[3, 1, 0], &[4, 1, 0], &[4, 2, 0], &[7, 4, 2]]);
        assert_eq!(simplex_normal_form(&s).unwrap(), simplex_normal_form(&moved).unwrap());
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_empty_simplices_3d(1).unwrap().len(), 1);
        assert_eq!(enumerate_empty_simplices_3d(2).unwrap().len(), 2);
        assert!(matches!(enumerate_empty_simplices_3d(21), Err(Error::ResourceLimit(_))));
        for s in enumerate_empty_simplices_3d(5).unwrap() {
            assert_eq!(s.lattice_width().unwrap(), 1);
        }
    }
}
