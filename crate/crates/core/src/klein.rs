//! Klein sails of simplicial cones in the plane and in space.
//!
//! For a rational cone spanned by `g_1..g_n` every vertex of the sail lies in
//! the closed parallelepiped `{sum t_i g_i : 0 <= t_i <= 1}`, so the sail is
//! read off the exact hull of its lattice points together with one shifted
//! copy along each generator (which exposes the unbounded faces).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebraic::AlgebraicCone;
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::hull::{convex_hull, hull_polygon, Facet};
use crate::intgeom::{int_area, int_length, IntPoint};

/// A simplicial rational cone with primitive generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    generators: Vec<IntPoint>,
    adj: IntMatrix,
    det: i64,
}

impl RationalCone {
    pub fn new(generators: Vec<IntPoint>) -> Result<Self> {
        let n = generators.len();
        if !(2..=3).contains(&n) || generators.iter().any(|g| g.dim() != n) {
            return Err(Error::InvalidInput(format!("a simplicial cone needs n generators in dimension n = 2 or 3, got {n}")));
        }
        let generators = generators.iter().map(|g| g.primitive()).collect::<Result<Vec<_>>>()?;
        let g = IntMatrix::from_cols(&generators.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>())?;
        let det = g.det()?;
        if det == 0 {
            return Err(Error::RankDeficient);
        }
        Ok(RationalCone { adj: g.adjugate()?, det, generators })
    }

    pub fn generators(&self) -> &[IntPoint] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// `|det|` times the barycentric coefficients of `p`.
    fn coefficients(&self, p: &[i64]) -> Vec<i128> {
        let n = self.dim();
        let s = self.det.signum() as i128;
        (0..n)
            .map(|i| s * (0..n).map(|k| self.adj.get(i, k) as i128 * p[k] as i128).sum::<i128>())
            .collect()
    }

    pub fn contains(&self, p: &IntPoint) -> bool {
        self.coefficients(p.coords()).iter().all(|&c| c >= 0)
    }

    /// Sum of the generators' max-norms; bounds the parallelepiped.
    pub fn auto_window(&self) -> i64 {
        self.generators.iter().map(|g| g.max_norm()).sum()
    }

    /// Nonzero lattice points `sum t_i g_i` with all `t_i` in `[0, t]`.
    pub fn parallelepiped_points(&self, t: i64) -> Result<Vec<IntPoint>> {
        let n = self.dim();
        let rows = IntMatrix::from_rows(&self.generators.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>())?;
        let (h, _) = rows.hnf_row()?;
        let diag: Vec<i64> = (0..n).map(|i| h.get(i, i)).collect();
        let d = self.det.abs() as i128;
        let mut reps: Vec<Vec<i64>> = vec![vec![]];
        for &m in &diag {
            reps = reps.into_iter().flat_map(|r| (0..m).map(move |x| [r.clone(), vec![x]].concat())).collect();
        }
        let mut out = BTreeSet::new();
        for x in reps {
            let c = self.coefficients(&x);
            let mut p = x.clone();
            let mut frac_zero = vec![false; n];
            for i in 0..n {
                let f = Integer::div_floor(&c[i], &d);
                frac_zero[i] = c[i] - f * d == 0;
                let f = i64::try_from(f).map_err(|_| Error::Overflow)?;
                for k in 0..n {
                    p[k] -= f * self.generators[i].coords()[k];
                }
            }
            let ranges: Vec<i64> = (0..n).map(|i| if frac_zero[i] { t } else { t - 1 }).collect();
            let mut ks: Vec<Vec<i64>> = vec![vec![]];
            for &r in &ranges {
                ks = ks.into_iter().flat_map(|k| (0..=r).map(move |x| [k.clone(), vec![x]].concat())).collect();
            }
            for k in ks {
                let mut q = p.clone();
                for i in 0..n {
                    for j in 0..n {
                        q[j] += k[i] * self.generators[i].coords()[j];
                    }
                }
                if q.iter().any(|&v| v != 0) {
                    out.insert(IntPoint::new(q)?);
                }
            }
        }
        Ok(out.into_iter().collect())
    }
}

/// A cone of the arrangement: rational generators or the eigen-cone of an
/// integer matrix.
#[derive(Clone, Debug)]
pub enum ConeSpec {
    Rational(RationalCone),
    Algebraic(AlgebraicCone),
}

impl ConeSpec {
    pub fn rational(generators: Vec<IntPoint>) -> Result<Self> {
        Ok(ConeSpec::Rational(RationalCone::new(generators)?))
    }

    /// Parses generators written as `"1,0;5,7"`.
    pub fn parse_generators(s: &str) -> Result<Self> {
        let pts = s.split(';').map(IntPoint::parse).collect::<Result<Vec<_>>>()?;
        Self::rational(pts)
    }

    pub fn dim(&self) -> usize {
        match self {
            ConeSpec::Rational(c) => c.dim(),
            ConeSpec::Algebraic(c) => c.dim(),
        }
    }

    pub fn contains(&self, p: &IntPoint) -> Result<bool> {
        match self {
            ConeSpec::Rational(c) => Ok(c.contains(p)),
            ConeSpec::Algebraic(c) => c.contains(p),
        }
    }
}

/// Nonzero integer points of the cone with max-norm at most `bound`.
pub fn lattice_points_in_cone(cone: &ConeSpec, bound: i64) -> Result<Vec<IntPoint>> {
    let n = cone.dim();
    let pts: Vec<Vec<IntPoint>> = (-bound..=bound)
        .into_par_iter()
        .map(|x| {
            let mut v = Vec::new();
            for y in -bound..=bound {
                if n == 2 {
                    let p = IntPoint::from([x, y]);
                    if !p.is_zero() && cone.contains(&p)? {
                        v.push(p);
                    }
                } else {
                    for z in -bound..=bound {
                        let p = IntPoint::from([x, y, z]);
                        if !p.is_zero() && cone.contains(&p)? {
                            v.push(p);
                        }
                    }
                }
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pts.into_iter().flatten().collect())
}

/// Canonical encoding of a lattice polygon, segment or point up to integer
/// congruence, together with its integer distance to the origin.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceForm {
    pub distance: i64,
    pub corners: usize,
    /// Row-HNF of the edge vectors from the first corner, flattened.
    pub data: Vec<i64>,
}

impl FaceForm {
    pub fn is_unit_simplex(&self) -> bool {
        self.corners == 3 && self.data == [1, 0, 0, 1]
    }
}

impl fmt::Display for FaceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        write!(f, "d{}:n{}:[{}]", self.distance, self.corners, d.join(","))
    }
}

impl Serialize for FaceForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Coordinates of `v - base` in a basis of the saturated lattice of the
/// span of the edge vectors.
fn plane_coordinates(points: &[IntPoint]) -> Result<Vec<IntPoint>> {
    let base = &points[0];
    let diffs: Vec<Vec<i64>> = points.iter().map(|p| (p - base).coords().to_vec()).collect();
    let m = IntMatrix::from_rows(&diffs)?;
    let r = m.rank();
    if r > 2 {
        return Err(Error::NonPlanar);
    }
    if r < 2 {
        return Err(Error::InvalidInput("not a polygon".into()));
    }
    let b = m.saturation_basis()?;
    let amb = base.dim();
    // a pair of columns where the basis is invertible
    let (i, j) = (0..amb)
        .flat_map(|i| (i + 1..amb).map(move |j| (i, j)))
        .find(|&(i, j)| b.get(0, i) as i128 * b.get(1, j) as i128 != b.get(0, j) as i128 * b.get(1, i) as i128)
        .ok_or(Error::RankDeficient)?;
    let det = b.get(0, i) as i128 * b.get(1, j) as i128 - b.get(0, j) as i128 * b.get(1, i) as i128;
    diffs
        .iter()
        .map(|d| {
            let x = d[i] as i128 * b.get(1, j) as i128 - d[j] as i128 * b.get(1, i) as i128;
            let y = b.get(0, i) as i128 * d[j] as i128 - b.get(0, j) as i128 * d[i] as i128;
            if x % det != 0 || y % det != 0 {
                return Err(Error::NonPlanar);
            }
            Ok(IntPoint::from([(x / det) as i64, (y / det) as i64]))
        })
        .collect()
}

/// Canonical congruence encoding of a planar lattice polygon (or a segment
/// or point) lying at integer distance `origin_distance` from the origin.
pub fn face_normal_form(face: &[IntPoint], origin_distance: i64) -> Result<FaceForm> {
    let mut pts: Vec<IntPoint> = face.to_vec();
    pts.sort();
    pts.dedup();
    match pts.len() {
        0 => return Err(Error::InvalidInput("empty face".into())),
        1 => return Ok(FaceForm { distance: origin_distance, corners: 1, data: vec![] }),
        _ => {}
    }
    let diffs = IntMatrix::from_rows(&pts.iter().map(|p| (p - &pts[0]).coords().to_vec()).collect::<Vec<_>>())?;
    if diffs.rank() == 1 {
        let len = pts.iter().flat_map(|a| pts.iter().map(move |b| (b - a).content())).max().unwrap_or(0);
        return Ok(FaceForm { distance: origin_distance, corners: 2, data: vec![len] });
    }
    let coords = plane_coordinates(&pts)?;
    let cyc = hull_polygon(&coords);
    let m = cyc.len();
    let mut best: Option<Vec<i64>> = None;
    for start in 0..m {
        for dir in [1isize, -1] {
            let at = |k: usize| -> &IntPoint {
                let idx = (start as isize + dir * k as isize).rem_euclid(m as isize) as usize;
                &coords[cyc[idx]]
            };
            let o = at(0);
            let mut rows = vec![Vec::with_capacity(m - 1), Vec::with_capacity(m - 1)];
            for k in 1..m {
                let w = at(k) - o;
                rows[0].push(w.coords()[0]);
                rows[1].push(w.coords()[1]);
            }
            let (h, _) = IntMatrix::from_rows(&rows)?.hnf_row()?;
            let data: Vec<i64> = h.to_rows().concat();
            if best.as_ref().map(|b| data < *b).unwrap_or(true) {
                best = Some(data);
            }
        }
    }
    Ok(FaceForm { distance: origin_distance, corners: m, data: best.expect("at least one ordering") })
}

/// Integer area of a convex lattice polygon given by its corners in order.
pub fn polygon_area(corners: &[IntPoint]) -> Result<i64> {
    let mut s = 0;
    for k in 1..corners.len().saturating_sub(1) {
        s += int_area(&corners[0], &corners[k], &corners[k + 1])?;
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SailFace {
    /// Indices into [`Sail::vertices`] of the sail vertices on the face.
    pub vertices: Vec<usize>,
    /// Corners in cyclic order, including truncation corners of unbounded
    /// faces.
    pub polygon: Vec<IntPoint>,
    pub dim: usize,
    /// Primitive normal pointing into the cone: `normal . x >= distance` on
    /// the sail with equality on the face.
    pub normal: IntPoint,
    pub distance: i64,
    pub area: Option<i64>,
    pub normal_form: Option<FaceForm>,
    /// Indices of generators along which the face is unbounded.
    pub unbounded: Vec<usize>,
}

impl SailFace {
    pub fn is_compact(&self) -> bool {
        self.unbounded.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sail {
    pub dim: usize,
    pub vertices: Vec<IntPoint>,
    pub faces: Vec<SailFace>,
    pub window: i64,
    pub complete: bool,
    /// In the plane: every lattice point of the broken line, in order.
    pub boundary_points: Vec<IntPoint>,
}

/// Sail data extracted from hull facets; `vertex_test` decides which corners
/// are sail vertices and `classify` returns `None` for facets that are not
/// sail faces or the unbounded directions otherwise.
pub(crate) fn faces_from_facets(
    q: &[IntPoint],
    facets: &[Facet],
    dim: usize,
    classify: impl Fn(&IntPoint, i64) -> Option<Vec<usize>>,
    vertex_test: impl Fn(&IntPoint, &[usize]) -> bool,
) -> Result<(Vec<IntPoint>, Vec<(Vec<IntPoint>, SailFace)>)> {
    let mut faces = Vec::new();
    let mut verts = BTreeSet::new();
    for f in facets {
        if f.offset >= 0 {
            continue;
        }
        let normal = IntPoint::new(f.normal.iter().map(|x| -x).collect())?;
        let distance = -f.offset;
        let Some(unb) = classify(&normal, distance) else { continue };
        let polygon: Vec<IntPoint> = f.vertices.iter().map(|&i| q[i].clone()).collect();
        let own: Vec<IntPoint> = polygon.iter().filter(|p| vertex_test(p, &unb)).cloned().collect();
        verts.extend(own.iter().cloned());
        let compact = unb.is_empty();
        let (area, nf) = if compact {
            if dim == 3 {
                (Some(polygon_area(&polygon)?), Some(face_normal_form(&polygon, distance)?))
            } else {
                (None, Some(face_normal_form(&polygon, distance)?))
            }
        } else {
            (None, None)
        };
        faces.push((
            own,
            SailFace { vertices: vec![], polygon, dim: dim - 1, normal, distance, area, normal_form: nf, unbounded: unb },
        ));
    }
    Ok((verts.into_iter().collect(), faces))
}

pub(crate) fn assemble(
    dim: usize,
    mut vertices: Vec<IntPoint>,
    faces: Vec<(Vec<IntPoint>, SailFace)>,
    order2d: Option<(&IntPoint, i64)>,
    window: i64,
    complete: bool,
) -> Sail {
    if let Some((g1, orient)) = order2d {
        // angular order starting at the first generator
        let key = |p: &IntPoint| {
            let (a, b) = (g1.coords(), p.coords());
            (a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128) * orient as i128
        };
        vertices.sort_by(|p, q| {
            let (a, b) = (p.coords(), q.coords());
            let c = (a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128) * orient as i128;
            0i128.cmp(&c).then_with(|| key(p).cmp(&key(q)))
        });
    }
    let index: BTreeMap<&IntPoint, usize> = vertices.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut out: Vec<SailFace> = faces
        .into_iter()
        .map(|(own, mut f)| {
            f.vertices = own.iter().map(|p| index[p]).collect();
            if dim == 2 {
                f.vertices.sort_unstable();
                if f.polygon.len() == 2 && index.get(&f.polygon[0]).copied() > index.get(&f.polygon[1]).copied() {
                    f.polygon.swap(0, 1);
                }
            }
            f
        })
        .collect();
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices).then_with(|| a.normal.cmp(&b.normal)));
    let mut boundary_points = Vec::new();
    if dim == 2 {
        for f in out.iter().filter(|f| f.is_compact()) {
            let (a, b) = (&vertices[f.vertices[0]], &vertices[f.vertices[1]]);
            let l = int_length(a, b).unwrap_or(1);
            let step = (b - a).primitive().expect("distinct corners");
            if boundary_points.is_empty() {
                boundary_points.push(a.clone());
            }
            for k in 1..=l {
                boundary_points.push(a + &step.scale(k));
            }
        }
    }
    Sail { dim, vertices, faces: out, window, complete, boundary_points }
}

fn rational_sail(cone: &RationalCone, t: i64) -> Result<Sail> {
    let p = cone.parallelepiped_points(t)?;
    let mut q: BTreeSet<IntPoint> = p.iter().cloned().collect();
    for x in &p {
        for g in cone.generators() {
            q.insert(x + g);
        }
    }
    let q: Vec<IntPoint> = q.into_iter().collect();
    let facets = convex_hull(&q)?;
    let gens = cone.generators();
    let classify = |n: &IntPoint, _d: i64| {
        let vals: Vec<i128> = gens.iter().map(|g| n.dot(g)).collect();
        if vals.iter().any(|&v| v < 0) {
            return None;
        }
        Some(vals.iter().enumerate().filter(|(_, &v)| v == 0).map(|(i, _)| i).collect())
    };
    let vertex_test = |c: &IntPoint, dirs: &[usize]| {
        dirs.iter().all(|&j| {
            let back = c - &gens[j];
            back.is_zero() || !cone.contains(&back)
        })
    };
    let (verts, faces) = faces_from_facets(&q, &facets, cone.dim(), classify, vertex_test)?;
    let order = if cone.dim() == 2 { Some((&gens[0], cone.det.signum())) } else { None };
    Ok(assemble(cone.dim(), verts, faces, order, cone.auto_window() * t, true))
}

fn signature(s: &Sail) -> BTreeSet<(Vec<IntPoint>, IntPoint, i64)> {
    s.faces
        .iter()
        .map(|f| {
            let mut v: Vec<IntPoint> = f.vertices.iter().map(|&i| s.vertices[i].clone()).collect();
            v.sort();
            (v, f.normal.clone(), f.distance)
        })
        .collect()
}

/// Klein sail of a cone. For rational cones the window is derived from the
/// generators (a larger `window` is only reported) and completeness is
/// certified by comparing with the sail computed from the doubled
/// parallelepiped.
pub fn klein_sail(cone: &ConeSpec, window: i64) -> Result<Sail> {
    match cone {
        ConeSpec::Rational(c) => {
            let s1 = rational_sail(c, 1)?;
            let s2 = rational_sail(c, 2)?;
            if signature(&s1) != signature(&s2) {
                return Err(Error::WindowTooSmall(format!(
                    "sail changed when doubling the window {}; this indicates a defect",
                    s1.window
                )));
            }
            Ok(Sail { window: s1.window.max(window), ..s1 })
        }
        ConeSpec::Algebraic(c) => crate::algebraic::algebraic_cone_sail(c, window),
    }
}

/// OFF mesh of the faces of a sail in space.
pub fn to_off(sail: &Sail) -> Result<String> {
    if sail.dim != 3 {
        return Err(Error::Unsupported("OFF export is for sails in space".into()));
    }
    let mut pts: Vec<IntPoint> = sail.vertices.clone();
    let mut index: BTreeMap<IntPoint, usize> = pts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let mut faces = Vec::new();
    for f in &sail.faces {
        let mut ids = Vec::new();
        for p in &f.polygon {
            let next = pts.len();
            let id = *index.entry(p.clone()).or_insert(next);
            if id == next {
                pts.push(p.clone());
            }
            ids.push(id);
        }
        faces.push(ids);
    }
    let mut s = format!("OFF\n{} {} 0\n", pts.len(), faces.len());
    for p in &pts {
        let c = p.coords();
        s.push_str(&format!("{} {} {}\n", c[0], c[1], c[2]));
    }
    for f in faces {
        let ids: Vec<String> = f.iter().map(|i| i.to_string()).collect();
        s.push_str(&format!("{} {}\n", f.len(), ids.join(" ")));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intgeom::int_distance;
    use crate::planar::{angle_sail, IntAngle};

    fn p2(x: i64, y: i64) -> IntPoint {
        IntPoint::from([x, y])
    }

    fn p3(x: i64, y: i64, z: i64) -> IntPoint {
        IntPoint::from([x, y, z])
    }

    fn cone(g: &[IntPoint]) -> ConeSpec {
        ConeSpec::rational(g.to_vec()).unwrap()
    }

    #[test]
    fn points_in_cones() {
        let q = lattice_points_in_cone(&cone(&[p2(1, 0), p2(0, 1)]), 2).unwrap();
        assert_eq!(q.len(), 8);
        let c = cone(&[p2(1, 0), p2(5, 7)]);
        let got = lattice_points_in_cone(&c, 7).unwrap();
        let brute: Vec<IntPoint> = (-7..=7i64)
            .flat_map(|x| (-7..=7i64).map(move |y| (x, y)))
            .filter(|&(x, y)| (x, y) != (0, 0) && y >= 0 && 7 * x - 5 * y >= 0)
            .map(|(x, y)| p2(x, y))
            .collect();
        assert_eq!(got, brute);
        let e = lattice_points_in_cone(&cone(&[p3(1, 0, 0), p3(0, 1, 0), p3(0, 0, 1)]), 1).unwrap();
        assert_eq!(e.len(), 7);
    }

    #[test]
    fn planar_cone_matches_angle_sail() {
        let s = klein_sail(&cone(&[p2(1, 0), p2(5, 7)]), 1).unwrap();
        assert_eq!(s.boundary_points, vec![p2(1, 0), p2(1, 1), p2(3, 4), p2(5, 7)]);
        assert_eq!(s.vertices, vec![p2(1, 0), p2(1, 1), p2(5, 7)]);
        for p in 2..=30i64 {
            for q in 1..p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let s = klein_sail(&cone(&[p2(1, 0), p2(q, p)]), 1).unwrap();
                let a = angle_sail(&IntAngle::from_points(p2(0, 0), p2(1, 0), p2(q, p)).unwrap(), 0).unwrap();
                assert_eq!(s.vertices, a.corners, "{p}/{q}");
                assert_eq!(s.boundary_points, a.points, "{p}/{q}");
            }
        }
    }

    #[test]
    fn unimodular_cone_in_space() {
        let s = klein_sail(&cone(&[p3(1, 0, 0), p3(0, 1, 0), p3(0, 0, 1)]), 1).unwrap();
        assert_eq!(s.faces.len(), 1);
        let f = &s.faces[0];
        assert_eq!((f.distance, f.area), (1, Some(1)));
        assert!(f.normal_form.as_ref().unwrap().is_unit_simplex());
        assert!(s.complete);
        let off = to_off(&s).unwrap();
        assert!(off.starts_with("OFF\n3 1 0\n"));
    }

    #[test]
    fn compact_faces_against_brute_force() {
        for g in [
            vec![p3(1, 0, 0), p3(0, 1, 0), p3(1, 1, 2)],
            vec![p3(1, 0, 0), p3(0, 1, 0), p3(2, 3, 5)],
            vec![p3(1, 2, 0), p3(0, 1, 3), p3(2, 0, 1)],
        ] {
            let c = cone(&g);
            let s = klein_sail(&c, 1).unwrap();
            let ConeSpec::Rational(rc) = &c else { unreachable!() };
            let pts = lattice_points_in_cone(&c, 2 * rc.auto_window()).unwrap();
            let mut brute = BTreeSet::new();
            // supporting planes through triples with positive values on all generators
            let cand: Vec<&IntPoint> = pts.iter().filter(|p| rc.parallelepiped_points(1).unwrap().contains(p)).collect();
            for i in 0..cand.len() {
                for j in i + 1..cand.len() {
                    for k in j + 1..cand.len() {
                        let (a, b, cc) = (cand[i], cand[j], cand[k]);
                        let u = b - a;
                        let v = cc - a;
                        let n = [
                            u.coords()[1] * v.coords()[2] - u.coords()[2] * v.coords()[1],
                            u.coords()[2] * v.coords()[0] - u.coords()[0] * v.coords()[2],
                            u.coords()[0] * v.coords()[1] - u.coords()[1] * v.coords()[0],
                        ];
                        let n = IntPoint::from(n);
                        if n.is_zero() {
                            continue;
                        }
                        let mut n = n.primitive().unwrap();
                        if n.dot(a) < 0 {
                            n = -&n;
                        }
                        let d = n.dot(a);
                        if d > 0 && g.iter().all(|x| n.dot(x) > 0) && pts.iter().all(|p| n.dot(p) >= d) {
                            brute.insert((n, d as i64));
                        }
                    }
                }
            }
            let got: BTreeSet<(IntPoint, i64)> =
                s.faces.iter().filter(|f| f.is_compact()).map(|f| (f.normal.clone(), f.distance)).collect();
            assert_eq!(got, brute);
            for f in &s.faces {
                assert!(f.distance >= 1);
                let corners: Vec<IntPoint> = f.polygon.iter().take(3).cloned().collect();
                assert_eq!(int_distance(&IntPoint::origin(3), &corners).unwrap(), f.distance);
            }
        }
    }

    #[test]
    fn equivariance_under_unimodular_maps() {
        let a = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 1, 0], vec![1, 3, 1]]).unwrap();
        assert_eq!(a.det().unwrap().abs(), 1);
        let g = vec![p3(1, 0, 0), p3(0, 1, 0), p3(1, 1, 3)];
        let img: Vec<IntPoint> = g.iter().map(|x| IntPoint::new(a.mul_vec(x.coords()).unwrap()).unwrap()).collect();
        let s = klein_sail(&cone(&g), 1).unwrap();
        let t = klein_sail(&cone(&img), 1).unwrap();
        let mapped: BTreeSet<IntPoint> =
            s.vertices.iter().map(|x| IntPoint::new(a.mul_vec(x.coords()).unwrap()).unwrap()).collect();
        assert_eq!(mapped, t.vertices.iter().cloned().collect());
    }

    #[test]
    fn normal_forms() {
        let unit = face_normal_form(&[p2(0, 0), p2(1, 0), p2(0, 1)], 1).unwrap();
        assert!(unit.is_unit_simplex());
        let t = [p2(0, 0), p2(2, 0), p2(0, 2)];
        let m = IntMatrix::from_rows(&[vec![2, 3], vec![1, 2]]).unwrap();
        let moved: Vec<IntPoint> =
            t.iter().map(|x| &IntPoint::new(m.mul_vec(x.coords()).unwrap()).unwrap() + &p2(4, -1)).collect();
        assert_eq!(face_normal_form(&t, 1).unwrap(), face_normal_form(&moved, 1).unwrap());
        assert_ne!(
            face_normal_form(&[p2(0, 0), p2(1, 0), p2(1, 3)], 1).unwrap(),
            face_normal_form(&[p2(0, 0), p2(1, 0), p2(2, 3)], 1).unwrap()
        );
        // a triangle in space is encoded in its own plane lattice
        let sp = face_normal_form(&[p3(1, 0, 0), p3(0, 1, 0), p3(0, 0, 1)], 1).unwrap();
        assert!(sp.is_unit_simplex());
        assert_eq!(
            face_normal_form(&[p3(0, 0, 0), p3(1, 0, 0), p3(0, 1, 0), p3(0, 0, 1)], 1),
            Err(Error::NonPlanar)
        );
    }
}
