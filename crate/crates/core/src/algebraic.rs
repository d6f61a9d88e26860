//! Cones of the eigen-arrangement of a unimodular integer matrix with
//! totally real irreducible characteristic polynomial, their periodic Klein
//! sails, Dirichlet groups, torus decompositions and Markov minima.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rational, BigRat, FieldElem, IntMatrix, NumberField, Poly, RealAlgebraic};
use crate::hull::convex_hull;
use crate::intgeom::{int_length, int_sine, IntPoint};
use crate::klein::{assemble, face_normal_form, faces_from_facets, lattice_points_in_cone, ConeSpec, FaceForm, Sail};

/// Coefficient box of the Dirichlet generator search.
pub const DEFAULT_GROUP_BOX: i64 = 50;

pub fn default_window(dim: usize) -> i64 {
    if dim == 2 {
        60
    } else {
        24
    }
}

/// Companion matrices of the shipped totally real cubics.
pub fn shipped_cubic_matrices() -> Vec<(&'static str, IntMatrix)> {
    let m = |r: [[i64; 3]; 3]| IntMatrix::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).expect("3x3");
    vec![
        ("x^3-3x+1", m([[0, 0, -1], [1, 0, 3], [0, 1, 0]])),
        ("x^3-x^2-2x+1", m([[0, 0, -1], [1, 0, 2], [0, 1, 1]])),
        ("x^3-4x+1", m([[0, 0, -1], [1, 0, 4], [0, 1, 0]])),
    ]
}

struct EigenData {
    matrix: IntMatrix,
    charpoly: Poly,
    /// `fields[i]` is generated by the i-th smallest root.
    fields: Vec<NumberField>,
    /// `left[i]`: left eigenvector for root i, in `fields[i]`.
    left: Vec<Vec<FieldElem>>,
    /// `right[j]`: right eigenvector for root j, in `fields[j]`.
    right: Vec<Vec<FieldElem>>,
    /// Centers and radii enclosing the left eigenvector entries.
    approx: Vec<Vec<(f64, f64)>>,
}

/// One of the `2^n` cones `{x : s_i L_i(x) >= 0}` cut out by the eigen-forms.
#[derive(Clone)]
pub struct AlgebraicCone {
    data: Arc<EigenData>,
    signs: Vec<i8>,
}

impl fmt::Debug for AlgebraicCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraicCone").field("matrix", &self.data.matrix.to_string()).field("signs", &self.signs).finish()
    }
}

fn charpoly_of(a: &IntMatrix) -> Result<Poly> {
    let n = a.rows();
    let g = |i, j| a.get(i, j);
    let det = a.det()?;
    match n {
        2 => Ok(Poly::from_ints(&[det, -(g(0, 0) + g(1, 1)), 1])),
        3 => {
            let tr = g(0, 0) + g(1, 1) + g(2, 2);
            let c2 = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) + g(0, 0) * g(2, 2) - g(0, 2) * g(2, 0) + g(1, 1) * g(2, 2)
                - g(1, 2) * g(2, 1);
            Ok(Poly::from_ints(&[-det, c2, -tr, 1]))
        }
        _ => Err(Error::InvalidInput("matrices must be 2x2 or 3x3".into())),
    }
}

fn adjugate_field(k: &NumberField, m: &[Vec<FieldElem>]) -> Vec<Vec<FieldElem>> {
    let n = m.len();
    if n == 2 {
        return vec![vec![m[1][1].clone(), k.neg(&m[0][1])], vec![k.neg(&m[1][0]), m[0][0].clone()]];
    }
    let minor = |r: usize, c: usize| {
        let rs: Vec<usize> = (0..3).filter(|&x| x != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&x| x != c).collect();
        k.sub(&k.mul(&m[rs[0]][cs[0]], &m[rs[1]][cs[1]]), &k.mul(&m[rs[0]][cs[1]], &m[rs[1]][cs[0]]))
    };
    // adj[i][j] = (-1)^{i+j} minor(j, i)
    (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let v = minor(j, i);
                    if (i + j) % 2 == 1 {
                        k.neg(&v)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect()
}

fn reinterpret(k: &NumberField, v: &[FieldElem]) -> Vec<FieldElem> {
    v.iter().map(|e| k.elem(e.coeffs().to_vec())).collect()
}

/// Checks the matrix and returns the cones of its eigen-arrangement, sign
/// vectors in binary order starting from all `+`.
pub fn validate_matrix(a: &IntMatrix) -> Result<Vec<AlgebraicCone>> {
    let n = a.rows();
    if !a.is_square() || !(2..=3).contains(&n) {
        return Err(Error::InvalidInput("matrices must be 2x2 or 3x3".into()));
    }
    let det = a.det()?;
    if det.abs() != 1 {
        return Err(Error::NotUnimodular(det));
    }
    let cp = charpoly_of(a)?;
    if !cp.is_irreducible_low_degree()? {
        return Err(Error::ReducibleCharpoly);
    }
    let roots = cp.isolate_real_roots();
    if roots.len() != n {
        return Err(Error::ComplexRoots);
    }
    let fields = (0..n).map(|i| NumberField::from_poly_root(&cp, i)).collect::<Result<Vec<_>>>()?;
    let k = &fields[0];
    let th = k.generator();
    let m: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = k.from_int(a.get(i, j));
                    if i == j {
                        k.sub(&e, &th)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let adj = adjugate_field(k, &m);
    let row = adj.iter().find(|r| r.iter().any(|e| !e.is_zero())).ok_or(Error::RankDeficient)?.clone();
    let col: Vec<FieldElem> = (0..n).map(|i| adj[i][0].clone()).collect();
    let col = if col.iter().any(|e| !e.is_zero()) {
        col
    } else {
        (0..n)
            .map(|j| (0..n).map(|i| adj[i][j].clone()).collect::<Vec<_>>())
            .find(|c| c.iter().any(|e| !e.is_zero()))
            .ok_or(Error::RankDeficient)?
    };
    let left: Vec<Vec<FieldElem>> = fields.iter().map(|f| reinterpret(f, &row)).collect();
    let right: Vec<Vec<FieldElem>> = fields.iter().map(|f| reinterpret(f, &col)).collect();
    let approx = left
        .iter()
        .zip(&fields)
        .map(|(w, f)| {
            w.iter()
                .map(|e| {
                    let iv = f.enclose(e, &rational::pow2_neg(60));
                    let c = rational::to_f64(&rational::mid(&iv.lo, &iv.hi));
                    (c, rational::to_f64(&iv.width()) + c.abs() * 4.0 * f64::EPSILON + 1e-300)
                })
                .collect()
        })
        .collect();
    let data = Arc::new(EigenData { matrix: a.clone(), charpoly: cp, fields, left, right, approx });
    Ok((0..1usize << n)
        .map(|mask| AlgebraicCone {
            data: data.clone(),
            signs: (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect(),
        })
        .collect())
}

impl AlgebraicCone {
    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.data.matrix
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn charpoly(&self) -> &Poly {
        &self.data.charpoly
    }

    pub fn field(&self, i: usize) -> &NumberField {
        &self.data.fields[i]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<RealAlgebraic>> {
        RealAlgebraic::roots_of(&self.data.charpoly)
    }

    /// The same arrangement with other signs.
    pub fn with_signs(&self, signs: Vec<i8>) -> AlgebraicCone {
        AlgebraicCone { data: self.data.clone(), signs }
    }

    /// `L_i(p)` as an element of the i-th conjugate field.
    pub fn form_value(&self, i: usize, p: &[i64]) -> FieldElem {
        let k = &self.data.fields[i];
        let mut acc = k.zero();
        for (w, &x) in self.data.left[i].iter().zip(p) {
            if x != 0 {
                acc = k.add(&acc, &k.scale(w, &BigRat::from_integer(x.into())));
            }
        }
        acc
    }

    /// Sign of `L_i(p)`, decided in floating point when the error bound
    /// allows and exactly otherwise.
    pub fn form_sign(&self, i: usize, p: &[i64]) -> Ordering {
        let mut v = 0.0f64;
        let mut err = 0.0f64;
        for (&(c, r), &x) in self.data.approx[i].iter().zip(p) {
            let x = x as f64;
            v += c * x;
            err += r * x.abs() + 8.0 * f64::EPSILON * (c * x).abs();
        }
        if v.abs() > 2.0 * err {
            return v.partial_cmp(&0.0).expect("finite");
        }
        self.data.fields[i].sign(&self.form_value(i, p))
    }

    pub fn contains(&self, p: &IntPoint) -> Result<bool> {
        if p.dim() != self.dim() {
            return Err(Error::InvalidInput("point dimension does not match the cone".into()));
        }
        if p.is_zero() {
            return Ok(false);
        }
        for i in 0..self.dim() {
            let s = self.form_sign(i, p.coords());
            if s == Ordering::Equal {
                return Err(Error::InvalidInput("integer point on an eigenplane".into()));
            }
            if (s == Ordering::Greater) != (self.signs[i] > 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Extreme ray `j` of the cone, an eigenvector in the j-th field.
    pub fn ray(&self, j: usize) -> Vec<FieldElem> {
        let k = &self.data.fields[j];
        let v = &self.data.right[j];
        let mut lv = k.zero();
        for (w, x) in self.data.left[j].iter().zip(v) {
            lv = k.add(&lv, &k.mul(w, x));
        }
        let s = k.sign(&lv) == Ordering::Greater;
        if s == (self.signs[j] > 0) {
            v.clone()
        } else {
            v.iter().map(|e| k.neg(e)).collect()
        }
    }

    /// Signs of the image cone under `m`, whose eigenvalues are `m`'s
    /// action on the eigenvectors.
    fn image_signs(&self, m: &IntMatrix) -> Result<Vec<i8>> {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let k = &self.data.fields[j];
                let v = &self.data.right[j];
                // m v = mu v; compare one nonzero coordinate
                let idx = v.iter().position(|e| !e.is_zero()).ok_or(Error::RankDeficient)?;
                let mut mv = k.zero();
                for c in 0..n {
                    mv = k.add(&mv, &k.scale(&v[c], &BigRat::from_integer(m.get(idx, c).into())));
                }
                let mu = k.div(&mv, &v[idx])?;
                Ok(match k.sign(&mu) {
                    Ordering::Greater => self.signs[j],
                    Ordering::Less => -self.signs[j],
                    Ordering::Equal => return Err(Error::NotUnimodular(0)),
                })
            })
            .collect()
    }

    /// True when the simplex cut from the cone by `normal . x <= distance`
    /// is bounded and inside the box of half-width `window`.
    fn certifies(&self, normal: &IntPoint, distance: i64, window: i64) -> bool {
        (0..self.dim()).all(|j| {
            let k = &self.data.fields[j];
            let r = self.ray(j);
            let mut s = k.zero();
            for (x, &c) in r.iter().zip(normal.coords()) {
                s = k.add(&s, &k.scale(x, &BigRat::from_integer(c.into())));
            }
            if k.sign(&s) != Ordering::Greater {
                return false;
            }
            let w = k.from_int(window);
            r.iter().all(|x| {
                let Ok(t) = k.div(&k.scale(x, &BigRat::from_integer(distance.into())), &s) else { return false };
                k.compare(&t, &w) != Ordering::Greater && k.compare(&k.neg(&t), &w) != Ordering::Greater
            })
        })
    }

    /// Logarithms of `|L_i(x)|`.
    fn log_coords(&self, x: &[i64]) -> Vec<f64> {
        (0..self.dim()).map(|i| self.data.fields[i].approx(&self.form_value(i, x)).abs().ln()).collect()
    }
}

/// Klein sail of an eigen-cone restricted to the faces certified inside the
/// window.
pub fn algebraic_sail(cone: &AlgebraicCone, window: i64) -> Result<Sail> {
    let spec = ConeSpec::Algebraic(cone.clone());
    let q = undominated(cone, lattice_points_in_cone(&spec, window)?);
    let facets = convex_hull(&q).map_err(|e| match e {
        Error::RankDeficient => Error::WindowTooSmall(format!("window {window} holds too few points")),
        e => e,
    })?;
    let dim = cone.dim();
    let classify = |n: &IntPoint, d: i64| if cone.certifies(n, d, window) { Some(vec![]) } else { None };
    let (verts, faces) = faces_from_facets(&q, &facets, dim, classify, |_, _| true)?;
    if faces.is_empty() {
        return Err(Error::WindowTooSmall(format!("no sail face is certified inside window {window}")));
    }
    let order = if dim == 2 {
        let (r0, r1) = (cone.ray(0), cone.ray(1));
        let a = |j: usize, v: &[FieldElem], c: usize| cone.field(j).approx(&v[c]);
        let cr = a(0, &r0, 0) * a(1, &r1, 1) - a(0, &r0, 1) * a(1, &r1, 0);
        Some(if cr > 0.0 { 1 } else { -1 })
    } else {
        None
    };
    let first = verts.first().cloned().unwrap_or_else(|| IntPoint::origin(dim));
    Ok(assemble(dim, verts, faces, order.map(|o| (&first, o)), window, false))
}

/// Drops points of the form `b + u` with `b` a short cone point and `u` a
/// nonzero lattice vector of the cone; none of them is a sail vertex.
fn undominated(cone: &AlgebraicCone, mut q: Vec<IntPoint>) -> Vec<IntPoint> {
    const SHORT: usize = 96;
    q.sort_by_key(|p| p.coords().iter().map(|c| c.abs()).sum::<i64>());
    let short: Vec<IntPoint> = q.iter().take(SHORT).cloned().collect();
    q.into_par_iter()
        .filter(|p| !short.iter().any(|b| b != p && cone.contains(&(p - b)).unwrap_or(false)))
        .collect()
}

pub(crate) fn algebraic_cone_sail(cone: &AlgebraicCone, window: i64) -> Result<Sail> {
    algebraic_sail(cone, window)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirichletGroup {
    pub generators: Vec<IntMatrix>,
    pub rank: usize,
    pub search_box: i64,
}

/// Interval enclosure of `ln` of a positive field element.
fn log_interval(k: &NumberField, e: &FieldElem, bits: u32) -> (f64, f64) {
    let iv = k.enclose(e, &rational::pow2_neg(bits));
    let lo = rational::to_f64(&iv.lo).max(f64::MIN_POSITIVE);
    let hi = rational::to_f64(&iv.hi);
    let pad = 1e-15;
    (lo.ln() - pad - lo.ln().abs() * 1e-15, hi.ln() + pad + hi.ln().abs() * 1e-15)
}

fn imul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let c = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1];
    let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo - lo.abs() * 1e-15 - 1e-300, hi + hi.abs() * 1e-15 + 1e-300)
}

/// Whether the log vectors of two units are certainly independent, certainly
/// dependent-looking, or undecided, at the given precision.
fn independent(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
    // some 2x2 minor of the log vectors excludes zero
    (0..a.len()).any(|i| {
        (i + 1..a.len()).any(|j| {
            let p = imul(a[i], b[j]);
            let q = imul(a[j], b[i]);
            let lo = p.0 - q.1;
            let hi = p.1 - q.0;
            lo > 0.0 || hi < 0.0
        })
    })
}

/// Generators of the group of determinant-one matrices with positive
/// eigenvalues in `Z[A]` found inside the coefficient box.
pub fn dirichlet_group(a: &IntMatrix, search_box: i64) -> Result<DirichletGroup> {
    let cones = validate_matrix(a)?;
    let c = &cones[0];
    let n = a.rows();
    let powers: Vec<IntMatrix> = (0..n).map(|e| a.pow(e as u32)).collect::<Result<_>>()?;
    let k0 = c.field(0);
    let coefs: Vec<Vec<i64>> = if n == 2 {
        (-search_box..=search_box).flat_map(|x| (-search_box..=search_box).map(move |y| vec![x, y])).collect()
    } else {
        (-search_box..=search_box)
            .flat_map(|x| (-search_box..=search_box).flat_map(move |y| (-search_box..=search_box).map(move |z| vec![x, y, z])))
            .collect()
    };
    let build = |co: &[i64]| -> Result<IntMatrix> {
        let mut m = IntMatrix::zeros(n, n);
        for (p, &c) in powers.iter().zip(co) {
            for i in 0..n {
                for j in 0..n {
                    let v = m.get(i, j).checked_add(c.checked_mul(p.get(i, j)).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
                    m.set(i, j, v);
                }
            }
        }
        Ok(m)
    };
    // unit candidates with det 1, eigenvalues positive and > 1 at the largest root
    let mut found: Vec<(f64, Vec<i64>, Vec<(f64, f64)>)> = coefs
        .par_iter()
        .filter_map(|co| {
            let m = build(co).ok()?;
            if m.det().ok()? != 1 || m == IntMatrix::identity(n) {
                return None;
            }
            let elem = k0.elem(co.iter().map(|&x| BigRat::from_integer(x.into())).collect());
            let mut logs = Vec::with_capacity(n);
            for i in 0..n {
                let ki = c.field(i);
                let e = ki.elem(elem.coeffs().to_vec());
                if ki.sign(&e) != Ordering::Greater {
                    return None;
                }
                logs.push(log_interval(ki, &e, 40));
            }
            if logs[n - 1].1 <= 0.0 {
                return None;
            }
            let norm: f64 = logs.iter().map(|l| ((l.0 + l.1) / 2.0).powi(2)).sum();
            Some((norm, co.clone(), logs))
        })
        .collect();
    found.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite").then_with(|| x.1.cmp(&y.1)));
    let mut chosen: Vec<(Vec<i64>, Vec<(f64, f64)>)> = Vec::new();
    for (_, co, logs) in &found {
        if chosen.len() == n - 1 {
            break;
        }
        match chosen.first() {
            None => chosen.push((co.clone(), logs.clone())),
            Some((c0, l0)) => {
                if independent(l0, logs) {
                    // recheck at doubled precision
                    let e0 = k0.elem(c0.iter().map(|&x| BigRat::from_integer(x.into())).collect());
                    let e1 = k0.elem(co.iter().map(|&x| BigRat::from_integer(x.into())).collect());
                    let fine = |e: &FieldElem| -> Vec<(f64, f64)> {
                        (0..n).map(|i| log_interval(c.field(i), &c.field(i).elem(e.coeffs().to_vec()), 80)).collect()
                    };
                    if !independent(&fine(&e0), &fine(&e1)) {
                        return Err(Error::Inconclusive("unit independence not confirmed at doubled precision".into()));
                    }
                    chosen.push((co.clone(), logs.clone()));
                }
            }
        }
    }
    if chosen.len() < n - 1 {
        return Err(Error::GeneratorsNotFound(search_box));
    }
    let generators = chosen.iter().map(|(co, _)| build(co)).collect::<Result<Vec<_>>>()?;
    Ok(DirichletGroup { generators, rank: n - 1, search_box })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub checked: usize,
    pub verified: usize,
    /// Images that even the sail at 16 times the window does not certify.
    pub skipped: usize,
    pub failures: Vec<(IntPoint, IntPoint)>,
}

/// Maps every certified vertex by `maps` and looks the image up among the
/// vertices of the image cone's sail at the doubled window. Images the
/// doubled window cannot decide are retried at up to 16 times the window.
pub fn check_invariance(cone: &AlgebraicCone, maps: &[IntMatrix], window: i64) -> Result<InvarianceReport> {
    let sail = algebraic_sail(cone, window)?;
    let mut rep = InvarianceReport { checked: 0, verified: 0, skipped: 0, failures: vec![] };
    let mut cache: HashMap<(Vec<i8>, i64), BTreeSet<IntPoint>> = HashMap::new();
    for m in maps {
        let signs = cone.image_signs(m)?;
        for v in &sail.vertices {
            let img = IntPoint::new(m.mul_vec(v.coords())?)?;
            rep.checked += 1;
            let mut w = 2 * window;
            loop {
                let key = (signs.clone(), w);
                if !cache.contains_key(&key) {
                    let t = algebraic_sail(&cone.with_signs(signs.clone()), w)?;
                    cache.insert(key.clone(), t.vertices.into_iter().collect());
                }
                if cache[&key].contains(&img) {
                    rep.verified += 1;
                } else if 2 * img.max_norm() <= w {
                    rep.failures.push((v.clone(), img.clone()));
                } else if w < 16 * window {
                    w *= 2;
                    continue;
                } else {
                    rep.skipped += 1;
                }
                break;
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FaceClass {
    pub normal_form: FaceForm,
    pub distance: i64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusDecomposition {
    pub dim: usize,
    /// Classes of top-dimensional cells (edges for sails in the plane).
    pub face_classes: Vec<FaceClass>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
}

struct GroupAction<'a> {
    cone: &'a AlgebraicCone,
    gens: Vec<(IntMatrix, IntMatrix)>,
    /// Inverse of the Gram matrix of the generators' log vectors.
    basis_logs: Vec<Vec<f64>>,
    gram_inv: Vec<Vec<f64>>,
}

impl<'a> GroupAction<'a> {
    fn new(cone: &'a AlgebraicCone, g: &DirichletGroup) -> Result<Self> {
        let n = cone.dim();
        let mut gens = Vec::new();
        let mut basis_logs = Vec::new();
        for m in &g.generators {
            gens.push((m.clone(), m.inverse_unimodular()?));
            let mut l = Vec::new();
            for j in 0..n {
                let k = cone.field(j);
                let v = &cone.data.right[j];
                let idx = v.iter().position(|e| !e.is_zero()).ok_or(Error::RankDeficient)?;
                let mut mv = k.zero();
                for c in 0..n {
                    mv = k.add(&mv, &k.scale(&v[c], &BigRat::from_integer(m.get(idx, c).into())));
                }
                l.push(k.approx(&k.div(&mv, &v[idx])?).ln());
            }
            basis_logs.push(l);
        }
        let r = basis_logs.len();
        let gram: Vec<Vec<f64>> =
            (0..r).map(|a| (0..r).map(|b| basis_logs[a].iter().zip(&basis_logs[b]).map(|(x, y)| x * y).sum()).collect()).collect();
        let gram_inv = if r == 1 {
            vec![vec![1.0 / gram[0][0]]]
        } else {
            let d = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
            vec![vec![gram[1][1] / d, -gram[0][1] / d], vec![-gram[1][0] / d, gram[0][0] / d]]
        };
        Ok(GroupAction { cone, gens, basis_logs, gram_inv })
    }

    fn coords(&self, pts: &[&IntPoint]) -> Vec<f64> {
        let n = self.cone.dim();
        let mut mean = vec![0.0; n];
        for p in pts {
            for (m, l) in mean.iter_mut().zip(self.cone.log_coords(p.coords())) {
                *m += l / pts.len() as f64;
            }
        }
        let b: Vec<f64> = self.basis_logs.iter().map(|l| l.iter().zip(&mean).map(|(x, y)| x * y).sum()).collect();
        self.gram_inv.iter().map(|row| row.iter().zip(&b).map(|(x, y)| x * y).sum()).collect()
    }

    fn apply(&self, shift: &[i64], p: &IntPoint) -> Result<IntPoint> {
        let mut v = p.coords().to_vec();
        for (k, &s) in shift.iter().enumerate() {
            let m = if s >= 0 { &self.gens[k].0 } else { &self.gens[k].1 };
            for _ in 0..s.abs() {
                v = m.mul_vec(&v)?;
            }
        }
        IntPoint::new(v)
    }

    /// Sorted vertex list of the translate whose log coordinates fall in the
    /// unit cube; near-ties are broken by the smaller vertex list.
    fn canonical(&self, pts: &[IntPoint]) -> Result<Vec<IntPoint>> {
        let refs: Vec<&IntPoint> = pts.iter().collect();
        let s = self.coords(&refs);
        let mut options: Vec<Vec<i64>> = vec![vec![]];
        for &x in &s {
            let f = x.floor();
            let mut cands = vec![-(f as i64)];
            if x - f < 1e-6 {
                cands.push(-(f as i64) + 1);
            }
            if f + 1.0 - x < 1e-6 {
                cands.push(-(f as i64) - 1);
            }
            options = options.into_iter().flat_map(|o| cands.iter().map(move |c| [o.clone(), vec![*c]].concat())).collect();
        }
        let mut best: Option<Vec<IntPoint>> = None;
        for sh in options {
            let mut img = pts.iter().map(|p| self.apply(&sh, p)).collect::<Result<Vec<_>>>()?;
            img.sort();
            if best.as_ref().map(|b| img < *b).unwrap_or(true) {
                best = Some(img);
            }
        }
        Ok(best.expect("one option"))
    }
}

/// Orbit classes of the certified sail under the Dirichlet group. Faces
/// whose neighbours are all certified are used, and their neighbours' classes
/// must already occur among them.
pub fn fundamental_domain(sail: &Sail, cone: &AlgebraicCone, group: &DirichletGroup) -> Result<TorusDecomposition> {
    let act = GroupAction::new(cone, group)?;
    let dim = sail.dim;
    let cells: Vec<Vec<IntPoint>> = sail.faces.iter().map(|f| f.polygon.clone()).collect();
    // ridges: edges of polygons, or endpoints of segments
    let ridges_of = |poly: &[IntPoint]| -> Vec<Vec<IntPoint>> {
        if dim == 2 {
            poly.iter().map(|p| vec![p.clone()]).collect()
        } else {
            (0..poly.len())
                .map(|k| {
                    let mut e = vec![poly[k].clone(), poly[(k + 1) % poly.len()].clone()];
                    e.sort();
                    e
                })
                .collect()
        }
    };
    let mut owners: BTreeMap<Vec<IntPoint>, Vec<usize>> = BTreeMap::new();
    for (i, c) in cells.iter().enumerate() {
        for r in ridges_of(c) {
            owners.entry(r).or_default().push(i);
        }
    }
    let interior: Vec<usize> =
        (0..cells.len()).filter(|&i| ridges_of(&cells[i]).iter().all(|r| owners[r].len() >= 2)).collect();
    if interior.is_empty() {
        return Err(Error::IncompleteOrbitCoverage("no certified face has all its neighbours certified".into()));
    }
    let keys: Vec<Vec<IntPoint>> = interior.iter().map(|&i| act.canonical(&cells[i])).collect::<Result<_>>()?;
    let key_set: BTreeSet<Vec<IntPoint>> = keys.iter().cloned().collect();
    for &i in &interior {
        for r in ridges_of(&cells[i]) {
            for &j in &owners[&r] {
                if !key_set.contains(&act.canonical(&cells[j])?) {
                    return Err(Error::IncompleteOrbitCoverage(format!(
                        "a neighbour orbit of a face at window {} is not represented",
                        sail.window
                    )));
                }
            }
        }
    }
    let mut vset = BTreeSet::new();
    let mut eset = BTreeSet::new();
    for &i in &interior {
        for p in &cells[i] {
            vset.insert(act.canonical(std::slice::from_ref(p))?);
        }
        if dim == 3 {
            for r in ridges_of(&cells[i]) {
                eset.insert(act.canonical(&r)?);
            }
        }
    }
    let mut classes: BTreeMap<(FaceForm, i64), usize> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for (&i, key) in interior.iter().zip(&keys) {
        if !seen.insert(key.clone()) {
            continue;
        }
        let f = &sail.faces[i];
        let nf = match &f.normal_form {
            Some(nf) => nf.clone(),
            None => face_normal_form(&f.polygon, f.distance)?,
        };
        *classes.entry((nf, f.distance)).or_default() += 1;
    }
    let (v, e, f) = if dim == 2 { (vset.len(), key_set.len(), 0) } else { (vset.len(), eset.len(), key_set.len()) };
    Ok(TorusDecomposition {
        dim,
        face_classes: classes
            .into_iter()
            .map(|((normal_form, distance), multiplicity)| FaceClass { normal_form, distance, multiplicity })
            .collect(),
        vertices: v,
        edges: e,
        faces: f,
        euler_characteristic: v as i64 - e as i64 + f as i64,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArnoldReport {
    pub applicable: bool,
    pub has_triangle: Option<bool>,
    pub has_distance_one: Option<bool>,
    pub has_distance_above_one: Option<bool>,
    pub quadrangle_classes: usize,
    pub only_quadrangles: bool,
    pub note: String,
}

/// Evidence for the conjectured face types of two-dimensional sails of cones
/// in space; nothing is asserted.
pub fn arnold_probe(td: &TorusDecomposition) -> ArnoldReport {
    if td.dim != 3 {
        return ArnoldReport {
            applicable: false,
            has_triangle: None,
            has_distance_one: None,
            has_distance_above_one: None,
            quadrangle_classes: 0,
            only_quadrangles: false,
            note: "the conjecture concerns two-dimensional sails of cones in space".into(),
        };
    }
    let quads: usize = td.face_classes.iter().filter(|c| c.normal_form.corners == 4).map(|c| c.multiplicity).sum();
    let total: usize = td.face_classes.iter().map(|c| c.multiplicity).sum();
    ArnoldReport {
        applicable: true,
        has_triangle: Some(td.face_classes.iter().any(|c| c.normal_form.corners == 3)),
        has_distance_one: Some(td.face_classes.iter().any(|c| c.distance == 1)),
        has_distance_above_one: Some(td.face_classes.iter().any(|c| c.distance > 1)),
        quadrangle_classes: quads,
        only_quadrangles: total > 0 && quads == total,
        note: "evidence only".into(),
    }
}

/// LLS sequence of a planar algebraic sail over one period of the group
/// generator, edges and corners alternating.
pub fn sail_lls_period(sail: &Sail, group: &DirichletGroup) -> Result<Vec<i64>> {
    if sail.dim != 2 || group.generators.is_empty() {
        return Err(Error::Unsupported("periods are read from planar sails".into()));
    }
    let v = &sail.vertices;
    let index: BTreeMap<&IntPoint, usize> = v.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let g = &group.generators[0];
    let gi = g.inverse_unimodular()?;
    for (i, p) in v.iter().enumerate() {
        for m in [g, &gi] {
            let img = IntPoint::new(m.mul_vec(p.coords())?)?;
            if let Some(&j) = index.get(&img) {
                if j > i && j + 1 < v.len() {
                    let mut out = Vec::new();
                    for t in i..j {
                        out.push(int_length(&v[t], &v[t + 1])?);
                        out.push(int_sine(&v[t + 1], &v[t], &v[t + 2])?);
                    }
                    return Ok(out);
                }
            }
        }
    }
    Err(Error::WindowTooSmall("no full period of the sail is certified".into()))
}

/// A linear form `a x + b y` with real algebraic coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub a: RealAlgebraic,
    pub b: RealAlgebraic,
}

impl LinearForm {
    pub fn new(a: RealAlgebraic, b: RealAlgebraic) -> Self {
        LinearForm { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        LinearForm { a: RealAlgebraic::from_int(a), b: RealAlgebraic::from_int(b) }
    }

    /// Parses `"a,b"` where each coefficient is a rational or an algebraic
    /// number in the exact syntax.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = split_top_level(s);
        if parts.len() != 2 {
            return Err(Error::Parse(format!("expected two coefficients in {s:?}")));
        }
        Ok(LinearForm { a: RealAlgebraic::parse(parts[0].trim())?, b: RealAlgebraic::parse(parts[1].trim())? })
    }
}

/// Splits at commas outside parentheses.
pub fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkovResult {
    #[serde(serialize_with = "crate::algebraic::ser_display")]
    pub value: RealAlgebraic,
    pub witness: IntPoint,
    pub sail_vertices: usize,
    pub points_scanned: usize,
}

pub(crate) fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Minimum of `|L1(p) L2(p)|` over integer points off both lines, computed
/// by brute force over max-norm at most `bound` and over the vertices of the
/// four sails of the arrangement; the two must agree.
pub fn markov_minimum_2d(l1: &LinearForm, l2: &LinearForm, bound: i64) -> Result<MarkovResult> {
    let coefs = [&l1.a, &l1.b, &l2.a, &l2.b];
    let k = match coefs.iter().find(|c| !c.is_rational()) {
        Some(c) => c.field()?,
        None => NumberField::rationals(),
    };
    let e: Vec<FieldElem> = coefs.iter().map(|c| k.embed(c)).collect::<Result<_>>()?;
    if k.sub(&k.mul(&e[0], &e[3]), &k.mul(&e[1], &e[2])).is_zero() {
        return Err(Error::DegenerateForms);
    }
    let eval = |f: usize, p: &IntPoint| {
        let (x, y) = (BigRat::from_integer(p.coords()[0].into()), BigRat::from_integer(p.coords()[1].into()));
        k.add(&k.scale(&e[2 * f], &x), &k.scale(&e[2 * f + 1], &y))
    };
    let pts: Vec<(IntPoint, FieldElem, i8, i8)> = (-bound..=bound)
        .into_par_iter()
        .flat_map_iter(|x| {
            let eval = &eval;
            let k = &k;
            (-bound..=bound).filter_map(move |y| {
                let p = IntPoint::from([x, y]);
                let (u, w) = (eval(0, &p), eval(1, &p));
                let (su, sw) = (k.sign(&u), k.sign(&w));
                if su == Ordering::Equal || sw == Ordering::Equal {
                    return None;
                }
                let mut v = k.mul(&u, &w);
                if k.sign(&v) == Ordering::Less {
                    v = k.neg(&v);
                }
                Some((p, v, if su == Ordering::Greater { 1 } else { -1 }, if sw == Ordering::Greater { 1 } else { -1 }))
            })
        })
        .collect();
    if pts.is_empty() {
        return Err(Error::WindowTooSmall(format!("no point off both lines within bound {bound}")));
    }
    let better = |a: &(IntPoint, FieldElem), b: &(IntPoint, FieldElem)| -> bool {
        match k.compare(&a.1, &b.1) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                let (na, nb) = (a.0.dot(&a.0), b.0.dot(&b.0));
                na < nb || (na == nb && a.0 > b.0)
            }
        }
    };
    let mut brute: Option<(IntPoint, FieldElem)> = None;
    for (p, v, _, _) in &pts {
        let c = (p.clone(), v.clone());
        if brute.as_ref().map(|b| better(&c, b)).unwrap_or(true) {
            brute = Some(c);
        }
    }
    let brute = brute.expect("nonempty");
    let mut sail_best: Option<(IntPoint, FieldElem)> = None;
    let mut nverts = 0;
    for (s1, s2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let cone: Vec<&(IntPoint, FieldElem, i8, i8)> = pts.iter().filter(|t| t.2 == s1 && t.3 == s2).collect();
        let q: Vec<IntPoint> = cone.iter().map(|t| t.0.clone()).collect();
        let cand: BTreeSet<usize> = match convex_hull(&q) {
            Ok(facets) => facets.iter().filter(|f| f.offset < 0).flat_map(|f| f.vertices.clone()).collect(),
            Err(Error::RankDeficient) => (0..q.len()).collect(),
            Err(e) => return Err(e),
        };
        nverts += cand.len();
        for i in cand {
            let c = (cone[i].0.clone(), cone[i].1.clone());
            if sail_best.as_ref().map(|b| better(&c, b)).unwrap_or(true) {
                sail_best = Some(c);
            }
        }
    }
    let sail_best = sail_best.expect("nonempty");
    if k.compare(&sail_best.1, &brute.1) != Ordering::Equal {
        return Err(Error::InconsistentMinima(format!(
            "sail vertices give {} at {}, brute force {} at {}",
            k.format_elem(&sail_best.1),
            sail_best.0,
            k.format_elem(&brute.1),
            brute.0
        )));
    }
    Ok(MarkovResult { value: k.to_real(&brute.1)?, witness: brute.0, sail_vertices: nverts, points_scanned: pts.len() })
}
