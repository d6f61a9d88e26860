//! Integer-geometry invariants: lengths, sines, areas and distances, all
//! expressed as indices of sublattices.

mod simplex;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::IntMatrix;

pub use simplex::{enumerate_empty_simplices_3d, simplex_normal_form, IntSimplex, DEFAULT_MAX_VOLUME_CAP};

/// An integer point (or vector) of the plane or of space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPoint(Vec<i64>);

impl IntPoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if !(2..=3).contains(&coords.len()) {
            return Err(Error::InvalidInput(format!("points must have 2 or 3 coordinates, got {}", coords.len())));
        }
        Ok(IntPoint(coords))
    }

    pub fn origin(dim: usize) -> Self {
        IntPoint(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Gcd of the coordinates (0 for the origin).
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    /// The shortest integer vector with the same direction.
    pub fn primitive(&self) -> Result<IntPoint> {
        let g = self.content();
        if g == 0 {
            return Err(Error::ZeroDirection);
        }
        Ok(IntPoint(self.0.iter().map(|x| x / g).collect()))
    }

    pub fn dot(&self, o: &IntPoint) -> i128 {
        self.0.iter().zip(&o.0).map(|(a, b)| *a as i128 * *b as i128).sum()
    }

    pub fn scale(&self, k: i64) -> IntPoint {
        IntPoint(self.0.iter().map(|x| x * k).collect())
    }

    pub fn max_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// Parses `"x,y"` or `"x,y,z"`.
    pub fn parse(s: &str) -> Result<Self> {
        let v = s
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coordinate {x:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }
}

impl From<[i64; 2]> for IntPoint {
    fn from(v: [i64; 2]) -> Self {
        IntPoint(v.to_vec())
    }
}

impl From<[i64; 3]> for IntPoint {
    fn from(v: [i64; 3]) -> Self {
        IntPoint(v.to_vec())
    }
}

impl Add for &IntPoint {
    type Output = IntPoint;
    fn add(self, o: &IntPoint) -> IntPoint {
        IntPoint(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntPoint {
    type Output = IntPoint;
    fn sub(self, o: &IntPoint) -> IntPoint {
        IntPoint(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntPoint {
    type Output = IntPoint;
    fn neg(self) -> IntPoint {
        IntPoint(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn same_dim(pts: &[&IntPoint]) -> Result<usize> {
    let d = pts[0].dim();
    if pts.iter().any(|p| p.dim() != d) {
        return Err(Error::InvalidInput("points of different dimensions".into()));
    }
    Ok(d)
}

fn rows_of(vs: &[IntPoint]) -> Result<IntMatrix> {
    IntMatrix::from_rows(&vs.iter().map(|v| v.0.clone()).collect::<Vec<_>>())
}

/// Integer length of the segment `AB`.
pub fn int_length(a: &IntPoint, b: &IntPoint) -> Result<i64> {
    same_dim(&[a, b])?;
    let g = (b - a).content();
    if g == 0 {
        return Err(Error::DegenerateSegment);
    }
    Ok(g)
}

/// Integer sine of the angle with the given vertex and points on its rays.
pub fn int_sine(vertex: &IntPoint, ray1: &IntPoint, ray2: &IntPoint) -> Result<i64> {
    same_dim(&[vertex, ray1, ray2])?;
    let u = (ray1 - vertex).primitive()?;
    let w = (ray2 - vertex).primitive()?;
    let m = rows_of(&[u, w])?;
    if m.rank() < 2 {
        return Err(Error::CollinearRays);
    }
    m.saturation_index()
}

/// Integer area of the triangle `ABC`.
pub fn int_area(a: &IntPoint, b: &IntPoint, c: &IntPoint) -> Result<i64> {
    same_dim(&[a, b, c])?;
    let m = rows_of(&[b - a, c - a])?;
    if m.rank() < 2 {
        return Err(Error::CollinearPoints);
    }
    m.saturation_index()
}

/// Integer distance from `p` to the affine subspace spanned by `l`.
pub fn int_distance(p: &IntPoint, l: &[IntPoint]) -> Result<i64> {
    let q = l.first().ok_or_else(|| Error::InvalidInput("empty subspace".into()))?;
    let mut all: Vec<&IntPoint> = l.iter().collect();
    all.push(p);
    same_dim(&all)?;
    let dirs: Vec<IntPoint> = l[1..].iter().map(|x| x - q).filter(|v| !v.is_zero()).collect();
    let w = p - q;
    let mut with_w = dirs.clone();
    with_w.push(w);
    let big = rows_of(&with_w)?;
    let (base_rank, base_idx) = if dirs.is_empty() {
        (0, 1)
    } else {
        let d = rows_of(&dirs)?;
        (d.rank(), d.saturation_index()?)
    };
    if big.rank() == base_rank {
        return Err(Error::PointOnSubspace);
    }
    Ok(big.saturation_index()? / base_idx)
}

/// Applies the affine map `x -> m x + t` to a point.
pub fn apply_affine(m: &IntMatrix, t: &IntPoint, p: &IntPoint) -> Result<IntPoint> {
    let v = m.mul_vec(p.coords())?;
    Ok(IntPoint(v.iter().zip(t.coords()).map(|(a, b)| a + b).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(x: i64, y: i64) -> IntPoint {
        IntPoint::from([x, y])
    }

    fn p3(x: i64, y: i64, z: i64) -> IntPoint {
        IntPoint::from([x, y, z])
    }

    #[test]
    fn lengths() {
        assert_eq!(int_length(&p2(0, 0), &p2(3, 6)).unwrap(), 3);
        assert_eq!(int_length(&p2(0, 0), &p2(0, 1)).unwrap(), 1);
        assert_eq!(int_length(&p2(2, 3), &p2(7, 13)).unwrap(), 5);
        assert_eq!(int_length(&p2(1, 1), &p2(1, 1)), Err(Error::DegenerateSegment));
    }

    #[test]
    fn length_counts_points_on_segment() {
        let (a, b) = (p2(2, 3), p2(7, 13));
        let count = (2..=7)
            .flat_map(|x| (3..=13).map(move |y| (x, y)))
            .filter(|&(x, y)| (x - 2) * 10 == (y - 3) * 5)
            .count() as i64;
        assert_eq!(int_length(&a, &b).unwrap(), count - 1);
    }

    #[test]
    fn sines() {
        let o = p2(0, 0);
        assert_eq!(int_sine(&o, &p2(1, 0), &p2(0, 1)).unwrap(), 1);
        assert_eq!(int_sine(&o, &p2(1, 0), &p2(1, 2)).unwrap(), 2);
        assert_eq!(int_sine(&o, &p2(2, 0), &p2(3, 3)).unwrap(), 1);
        assert_eq!(int_sine(&o, &p2(1, 0), &p2(2, 0)), Err(Error::CollinearRays));
        assert_eq!(int_sine(&o, &o, &p2(2, 0)), Err(Error::ZeroDirection));
        // in space the index is taken inside the plane lattice
        assert_eq!(int_sine(&p3(0, 0, 0), &p3(1, 0, 0), &p3(1, 2, 2)).unwrap(), 2);
        assert_eq!(int_sine(&p3(0, 0, 0), &p3(1, 0, 0), &p3(0, 1, 1)).unwrap(), 1);
    }

    #[test]
    fn areas() {
        assert_eq!(int_area(&p2(0, 0), &p2(1, 0), &p2(0, 1)).unwrap(), 1);
        assert_eq!(int_area(&p2(0, 0), &p2(2, 0), &p2(0, 3)).unwrap(), 6);
        assert_eq!(int_area(&p2(0, 0), &p2(1, 0), &p2(2, 0)), Err(Error::CollinearPoints));
    }

    #[test]
    fn distances() {
        let xaxis = [p2(0, 0), p2(1, 0)];
        assert_eq!(int_distance(&p2(0, 2), &xaxis).unwrap(), 2);
        assert_eq!(int_distance(&p2(1, 1), &xaxis).unwrap(), 1);
        let plane = [p3(0, 0, 0), p3(1, 0, 0), p3(0, 1, 0)];
        assert_eq!(int_distance(&p3(0, 0, 2), &plane).unwrap(), 2);
        assert_eq!(int_distance(&p2(5, 0), &xaxis), Err(Error::PointOnSubspace));
        // plane x + y + z = 1 and the origin
        let tri = [p3(1, 0, 0), p3(0, 1, 0), p3(0, 0, 1)];
        assert_eq!(int_distance(&p3(0, 0, 0), &tri).unwrap(), 1);
        let tri2 = [p3(2, 0, 0), p3(0, 2, 0), p3(0, 0, 2)];
        assert_eq!(int_distance(&p3(0, 0, 0), &tri2).unwrap(), 2);
    }

    #[test]
    fn parse_points() {
        assert_eq!(IntPoint::parse("1, -2").unwrap(), p2(1, -2));
        assert!(IntPoint::parse("1").is_err());
        assert!(IntPoint::parse("a,b").is_err());
    }
}
