//! Exact convex hulls of integer point sets in the plane and in space.
//!
//! All predicates are integer determinants evaluated in `i128`. Facets are
//! merged by primitive normal, so a facet is a convex polygon (or an edge in
//! the plane) listed by its corners only.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::intgeom::IntPoint;

/// A facet `normal . x = offset` with every input point on the side
/// `normal . x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    /// Primitive outward normal.
    pub normal: Vec<i64>,
    pub offset: i64,
    /// Corner indices into the input slice; counterclockwise seen from
    /// outside in space, from tail to head of the boundary in the plane.
    pub vertices: Vec<usize>,
}

fn cross2(o: &[i64], a: &[i64], b: &[i64]) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

fn sub3(a: &[i64], b: &[i64]) -> [i128; 3] {
    [(a[0] - b[0]) as i128, (a[1] - b[1]) as i128, (a[2] - b[2]) as i128]
}

fn cross3(u: [i128; 3], v: [i128; 3]) -> [i128; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn dot3(u: [i128; 3], v: [i128; 3]) -> i128 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn primitive(v: &[i128]) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    v.iter().map(|x| x / g).collect()
}

fn to_i64(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

/// Indices of the hull corners of planar points in counterclockwise order,
/// starting from the lexicographically smallest.
pub fn hull_polygon(points: &[IntPoint]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].cmp(&points[b]));
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let c = |i: usize| points[i].coords();
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && cross2(c(lower[lower.len() - 2]), c(lower[lower.len() - 1]), c(i)) <= 0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && cross2(c(upper[upper.len() - 2]), c(upper[upper.len() - 1]), c(i)) <= 0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Convex hull of a full-dimensional point set in dimension 2 or 3.
pub fn convex_hull(points: &[IntPoint]) -> Result<Vec<Facet>> {
    let dim = points.first().map(|p| p.dim()).ok_or(Error::RankDeficient)?;
    if points.iter().any(|p| p.dim() != dim) {
        return Err(Error::InvalidInput("points of different dimensions".into()));
    }
    match dim {
        2 => hull2(points),
        3 => hull3(points),
        _ => Err(Error::InvalidInput("hulls are computed in dimension 2 or 3".into())),
    }
}

fn hull2(points: &[IntPoint]) -> Result<Vec<Facet>> {
    let poly = hull_polygon(points);
    if poly.len() < 3 {
        return Err(Error::RankDeficient);
    }
    let mut out = Vec::with_capacity(poly.len());
    for k in 0..poly.len() {
        let (a, b) = (points[poly[k]].coords(), points[poly[(k + 1) % poly.len()]].coords());
        let n = primitive(&[(b[1] - a[1]) as i128, (a[0] - b[0]) as i128]);
        let offset = n[0] * a[0] as i128 + n[1] * a[1] as i128;
        out.push(Facet {
            normal: vec![to_i64(n[0])?, to_i64(n[1])?],
            offset: to_i64(offset)?,
            vertices: vec![poly[k], poly[(k + 1) % poly.len()]],
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct Tri {
    v: [usize; 3],
    n: [i128; 3],
    off: i128,
}

impl Tri {
    fn new(pts: &[&[i64]], v: [usize; 3]) -> Tri {
        let n = cross3(sub3(pts[v[1]], pts[v[0]]), sub3(pts[v[2]], pts[v[0]]));
        let a = pts[v[0]];
        let off = dot3(n, [a[0] as i128, a[1] as i128, a[2] as i128]);
        Tri { v, n, off }
    }

    fn side(&self, p: &[i64]) -> i128 {
        dot3(self.n, [p[0] as i128, p[1] as i128, p[2] as i128]) - self.off
    }
}

fn hull3(points: &[IntPoint]) -> Result<Vec<Facet>> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]));
    order.dedup_by(|a, b| points[*a] == points[*b]);
    let pts: Vec<&[i64]> = points.iter().map(|p| p.coords()).collect();

    // initial tetrahedron
    let a = order[0];
    let b = *order.iter().find(|&&i| i != a).ok_or(Error::RankDeficient)?;
    let c = *order
        .iter()
        .find(|&&i| cross3(sub3(pts[b], pts[a]), sub3(pts[i], pts[a])) != [0, 0, 0])
        .ok_or(Error::RankDeficient)?;
    let n0 = cross3(sub3(pts[b], pts[a]), sub3(pts[c], pts[a]));
    let d = *order
        .iter()
        .find(|&&i| dot3(n0, sub3(pts[i], pts[a])) != 0)
        .ok_or(Error::RankDeficient)?;
    let inner: [i128; 3] = std::array::from_fn(|k| [a, b, c, d].iter().map(|&i| pts[i][k] as i128).sum());

    let mut tris: Vec<Option<Tri>> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let add = |tris: &mut Vec<Option<Tri>>, edges: &mut HashMap<(usize, usize), usize>, t: Tri| {
        let id = tris.len();
        for k in 0..3 {
            edges.insert((t.v[k], t.v[(k + 1) % 3]), id);
        }
        tris.push(Some(t));
    };
    for f in [[a, b, c], [a, b, d], [a, c, d], [b, c, d]] {
        let mut t = Tri::new(&pts, f);
        // the scaled centroid must lie strictly inside
        let s = dot3(t.n, inner) - 4 * t.off;
        if s > 0 {
            t = Tri::new(&pts, [f[0], f[2], f[1]]);
        }
        add(&mut tris, &mut edges, t);
    }

    for &p in &order {
        if p == a || p == b || p == c || p == d {
            continue;
        }
        let visible: Vec<usize> = tris
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.as_ref().filter(|t| t.side(pts[p]) >= 0).map(|_| i))
            .collect();
        if visible.is_empty() {
            continue;
        }
        let vis: std::collections::HashSet<usize> = visible.iter().copied().collect();
        let mut horizon = Vec::new();
        for &i in &visible {
            let t = tris[i].as_ref().expect("live");
            for k in 0..3 {
                let (u, v) = (t.v[k], t.v[(k + 1) % 3]);
                let twin = edges.get(&(v, u)).copied();
                if twin.map(|j| !vis.contains(&j)).unwrap_or(true) {
                    horizon.push((u, v));
                }
            }
        }
        for &i in &visible {
            let t = tris[i].take().expect("live");
            for k in 0..3 {
                let e = (t.v[k], t.v[(k + 1) % 3]);
                if edges.get(&e) == Some(&i) {
                    edges.remove(&e);
                }
            }
        }
        for (u, v) in horizon {
            add(&mut tris, &mut edges, Tri::new(&pts, [u, v, p]));
        }
    }

    // merge coplanar triangles
    let mut planes: BTreeMap<(Vec<i128>, i128), Vec<usize>> = BTreeMap::new();
    for t in tris.iter().flatten() {
        let n = primitive(&t.n);
        let g = t.n.iter().find(|x| **x != 0).expect("nondegenerate") / n.iter().find(|x| **x != 0).expect("nondegenerate");
        let entry = planes.entry((n, t.off / g)).or_default();
        entry.extend_from_slice(&t.v);
    }
    let mut out = Vec::with_capacity(planes.len());
    for ((n, off), mut vs) in planes {
        vs.sort_unstable();
        vs.dedup();
        let drop = (0..3).max_by_key(|&k| n[k].abs()).expect("3 axes");
        let keep: Vec<usize> = (0..3).filter(|&k| k != drop).collect();
        let proj: Vec<IntPoint> = vs.iter().map(|&i| IntPoint::from([pts[i][keep[0]], pts[i][keep[1]]])).collect();
        let mut cyc: Vec<usize> = hull_polygon(&proj).into_iter().map(|j| vs[j]).collect();
        if cyc.len() >= 3 {
            let orient = dot3(cross3(sub3(pts[cyc[1]], pts[cyc[0]]), sub3(pts[cyc[2]], pts[cyc[0]])), [n[0], n[1], n[2]]);
            if orient < 0 {
                cyc.reverse();
            }
        }
        out.push(Facet { normal: vec![to_i64(n[0])?, to_i64(n[1])?, to_i64(n[2])?], offset: to_i64(off)?, vertices: cyc });
    }
    Ok(out)
}
