//! Dense integer matrices with Hermite and Smith normal forms.
//!
//! Entries are `i64`; intermediate arithmetic runs in checked `i128` and
//! reports [`Error::Overflow`] instead of wrapping.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<i64>>", try_from = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

type Work = Vec<Vec<i128>>;

fn ck(v: Option<i128>) -> Result<i128> {
    v.ok_or(Error::Overflow)
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    if a != 0 && b % a == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<i64>]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != o.rows {
            return Err(Error::InvalidInput("matrix shapes do not match".into()));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = 0i128;
                for k in 0..self.cols {
                    acc = ck(acc.checked_add(self.get(i, k) as i128 * o.get(k, j) as i128))?;
                }
                out.set(i, j, narrow(acc)?);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(Error::InvalidInput("vector length does not match".into()));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = 0i128;
                for (k, x) in v.iter().enumerate() {
                    acc = ck(acc.checked_add(self.get(i, k) as i128 * *x as i128))?;
                }
                narrow(acc)
            })
            .collect()
    }

    pub fn sub(&self, o: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::InvalidInput("matrix shapes do not match".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| a.checked_sub(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn pow(&self, e: u32) -> Result<IntMatrix> {
        let mut r = Self::identity(self.rows);
        for _ in 0..e {
            r = r.mul(self)?;
        }
        Ok(r)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn work(&self) -> Work {
        (0..self.rows).map(|i| self.row(i).into_iter().map(|x| x as i128).collect()).collect()
    }

    fn from_work(w: &Work, cols: usize) -> Result<Self> {
        let data = w.iter().flatten().map(|&x| narrow(x)).collect::<Result<Vec<_>>>()?;
        Self::new(w.len(), cols, data)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<i64> {
        if !self.is_square() {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.work();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = ck(ck(a[i][j].checked_mul(a[k][k]))?.checked_sub(ck(a[i][k].checked_mul(a[k][j]))?))?;
                    a[i][j] = v / prev;
                }
            }
            prev = a[k][k];
        }
        narrow(sign * a[n - 1][n - 1])
    }

    /// Rank over Q.
    pub fn rank(&self) -> usize {
        match self.hnf_row() {
            Ok((h, _)) => (0..h.rows).filter(|&i| h.row(i).iter().any(|&x| x != 0)).count(),
            Err(_) => self.rank_bigint(),
        }
    }

    fn rank_bigint(&self) -> usize {
        use num_rational::BigRational;
        let mut a: Vec<Vec<BigRational>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
            .collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| a[r][c] != BigRational::from_integer(0.into())) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..self.rows {
                if r != rank {
                    let f = &a[r][c] / &a[rank][c];
                    for k in c..self.cols {
                        let v = &a[rank][k] * &f;
                        a[r][k] -= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Row-style Hermite normal form: returns `(H, U)` with `U * self = H`,
    /// `U` unimodular, `H` in row echelon form with positive pivots and the
    /// entries above each pivot reduced into `[0, pivot)`.
    pub fn hnf_row(&self) -> Result<(IntMatrix, IntMatrix)> {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.work();
        let mut u: Work = (0..m).map(|i| (0..m).map(|j| (i == j) as i128).collect()).collect();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            // gcd-combine the rows below into row r
            for i in r + 1..m {
                if a[i][c] == 0 {
                    continue;
                }
                let (x, y) = (a[r][c], a[i][c]);
                let (g, s, t) = xgcd(x, y);
                let (p, q) = (x / g, y / g);
                for k in 0..n {
                    let (ar, ai) = (a[r][k], a[i][k]);
                    a[r][k] = ck(ck(s.checked_mul(ar))?.checked_add(ck(t.checked_mul(ai))?))?;
                    a[i][k] = ck(ck(p.checked_mul(ai))?.checked_sub(ck(q.checked_mul(ar))?))?;
                }
                for k in 0..m {
                    let (ur, ui) = (u[r][k], u[i][k]);
                    u[r][k] = ck(ck(s.checked_mul(ur))?.checked_add(ck(t.checked_mul(ui))?))?;
                    u[i][k] = ck(ck(p.checked_mul(ui))?.checked_sub(ck(q.checked_mul(ur))?))?;
                }
            }
            if a[r][c] == 0 {
                continue;
            }
            if a[r][c] < 0 {
                a[r].iter_mut().for_each(|x| *x = -*x);
                u[r].iter_mut().for_each(|x| *x = -*x);
            }
            let piv = a[r][c];
            for i in 0..r {
                let f = Integer::div_floor(&a[i][c], &piv);
                if f != 0 {
                    for k in 0..n {
                        a[i][k] = ck(a[i][k].checked_sub(ck(f.checked_mul(a[r][k]))?))?;
                    }
                    for k in 0..m {
                        u[i][k] = ck(u[i][k].checked_sub(ck(f.checked_mul(u[r][k]))?))?;
                    }
                }
            }
            r += 1;
        }
        Ok((Self::from_work(&a, n)?, Self::from_work(&u, m)?))
    }

    /// Column-style Hermite normal form `H = self * U`: lower column echelon
    /// form, positive pivots, entries left of each pivot reduced into
    /// `[0, pivot)`.
    pub fn hnf_column(&self) -> Result<IntMatrix> {
        Ok(self.transpose().hnf_row()?.0.transpose())
    }

    /// Nonzero Smith invariants `d1 | d2 | ...`, all positive.
    pub fn snf(&self) -> Result<Vec<i64>> {
        let mut a = self.work();
        let (m, n) = (self.rows, self.cols);
        let mut diag = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            // pick the smallest nonzero entry of the remaining block as pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            'pivot: loop {
                loop {
                    let mut clean = true;
                    for i in t + 1..m {
                        if a[i][t] != 0 {
                            let (x, y) = (a[t][t], a[i][t]);
                            let (g, s, u) = xgcd(x, y);
                            let (p, q) = (x / g, y / g);
                            for k in t..n {
                                let (ar, ai) = (a[t][k], a[i][k]);
                                a[t][k] = ck(ck(s.checked_mul(ar))?.checked_add(ck(u.checked_mul(ai))?))?;
                                a[i][k] = ck(ck(p.checked_mul(ai))?.checked_sub(ck(q.checked_mul(ar))?))?;
                            }
                        }
                    }
                    for j in t + 1..n {
                        if a[t][j] != 0 {
                            let (x, y) = (a[t][t], a[t][j]);
                            let (g, s, u) = xgcd(x, y);
                            let (p, q) = (x / g, y / g);
                            for row in a.iter_mut().skip(t) {
                                let (ar, ai) = (row[t], row[j]);
                                row[t] = ck(ck(s.checked_mul(ar))?.checked_add(ck(u.checked_mul(ai))?))?;
                                row[j] = ck(ck(p.checked_mul(ai))?.checked_sub(ck(q.checked_mul(ar))?))?;
                            }
                            clean = false;
                        }
                    }
                    if clean || (t + 1..m).all(|i| a[i][t] == 0) {
                        break;
                    }
                }
                // enforce divisibility against the remaining block
                let d = a[t][t];
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % d != 0));
                match bad {
                    Some(i) => {
                        for k in t..n {
                            a[t][k] = ck(a[t][k].checked_add(a[i][k]))?;
                        }
                    }
                    None => break 'pivot,
                }
            }
            let d = a[t][t];
            diag.push(d.abs());
            t += 1;
        }
        diag.into_iter().map(narrow).collect()
    }

    /// Index of the lattice generated by the rows inside its saturation
    /// `span(rows) ∩ Z^n`.
    pub fn saturation_index(&self) -> Result<i64> {
        let d = self.snf()?;
        d.into_iter().try_fold(1i64, |acc, x| acc.checked_mul(x).ok_or(Error::Overflow))
    }

    /// As [`saturation_index`](Self::saturation_index) but requires the rows
    /// to be linearly independent.
    pub fn full_rank_index(&self) -> Result<i64> {
        let d = self.snf()?;
        if d.len() < self.rows {
            return Err(Error::RankDeficient);
        }
        d.into_iter().try_fold(1i64, |acc, x| acc.checked_mul(x).ok_or(Error::Overflow))
    }

    /// A basis (as rows) of the saturated lattice `span(rows) ∩ Z^n`.
    pub fn saturation_basis(&self) -> Result<IntMatrix> {
        let k = self.integer_kernel()?;
        if k.rows == 0 {
            return Ok(IntMatrix::identity(self.cols));
        }
        k.integer_kernel()
    }

    /// Rows form a basis of `{x in Z^cols : self * x = 0}`.
    pub fn integer_kernel(&self) -> Result<IntMatrix> {
        let (h, u) = self.transpose().hnf_row()?;
        let zero_rows: Vec<usize> = (0..h.rows).filter(|&i| h.row(i).iter().all(|&x| x == 0)).collect();
        let rows: Vec<Vec<i64>> = zero_rows.into_iter().map(|i| u.row(i)).collect();
        if rows.is_empty() {
            return Ok(IntMatrix::zeros(0, self.cols));
        }
        Ok(IntMatrix::from_rows(&rows)?.hnf_row()?.0)
    }

    /// Inverse of a unimodular square matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let d = self.det()?;
        if d.abs() != 1 {
            return Err(Error::NotUnimodular(d));
        }
        let (h, u) = self.hnf_row()?;
        // H is the identity for a unimodular matrix, so U is the inverse
        debug_assert_eq!(h, IntMatrix::identity(self.rows));
        Ok(u)
    }

    /// Adjugate of a square matrix of size at most 3.
    pub fn adjugate(&self) -> Result<IntMatrix> {
        let n = self.rows;
        if !self.is_square() || n > 3 {
            return Err(Error::Unsupported("adjugate beyond 3x3".into()));
        }
        if n == 1 {
            return Ok(IntMatrix::identity(1));
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor_rows: Vec<Vec<i64>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (0..n).filter(|&c| c != j).map(|c| self.get(r, c)).collect())
                    .collect();
                let m = IntMatrix::from_rows(&minor_rows)?.det()?;
                let s = if (i + j) % 2 == 0 { m } else { -m };
                out.set(j, i, s);
            }
        }
        Ok(out)
    }

    /// Parses `"a,b,c;d,e,f;..."` (rows separated by `;`).
    pub fn parse(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|r| {
                r.split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad matrix entry {x:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.to_rows()
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        IntMatrix::from_rows(&rows)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(m(&[&[2, 0], &[0, 3]]).snf().unwrap(), vec![1, 6]);
        assert_eq!(m(&[&[1, 0], &[0, 1]]).snf().unwrap(), vec![1, 1]);
        assert_eq!(m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]).snf().unwrap(), vec![2, 6, 12]);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).snf().unwrap(), vec![1]);
    }

    #[test]
    fn hnf_of_identity() {
        let i = IntMatrix::identity(3);
        assert_eq!(i.hnf_column().unwrap(), i);
        assert_eq!(i.hnf_row().unwrap().0, i);
    }

    #[test]
    fn hnf_row_transform() {
        let a = m(&[&[3, 1], &[4, 2], &[5, 7]]);
        let (h, u) = a.hnf_row().unwrap();
        assert_eq!(u.mul(&a).unwrap(), h);
        assert_eq!(u.det().unwrap().abs(), 1);
        assert_eq!(h, m(&[&[1, 1], &[0, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_and_saturation() {
        let a = m(&[&[1, 1, 1]]);
        let k = a.integer_kernel().unwrap();
        assert_eq!(k.rows(), 2);
        for i in 0..2 {
            assert_eq!(a.mul_vec(&k.row(i)).unwrap(), vec![0]);
        }
        let s = m(&[&[2, 0, 0], &[0, 2, 0]]).saturation_basis().unwrap();
        assert_eq!(s.snf().unwrap(), vec![1, 1]);
        assert_eq!(m(&[&[2, 0, 0], &[0, 2, 0]]).saturation_index().unwrap(), 4);
    }

    #[test]
    fn inverse_and_adjugate() {
        let a = m(&[&[0, 0, -1], &[1, 0, 3], &[0, 1, 0]]);
        assert_eq!(a.det().unwrap(), -1);
        let inv = a.inverse_unimodular().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), IntMatrix::identity(3));
        let adj = a.adjugate().unwrap();
        assert_eq!(a.mul(&adj).unwrap(), m(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]]));
        assert!(m(&[&[2, 0], &[0, 1]]).inverse_unimodular().is_err());
    }

    #[test]
    fn parse_and_display() {
        let a = IntMatrix::parse("2,1;1,1").unwrap();
        assert_eq!(a.to_string(), "2,1;1,1");
        assert!(IntMatrix::parse("1,2;3").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn snf_product_equals_abs_det(v in proptest::collection::vec(-9i64..=9, 9)) {
            let a = IntMatrix::new(3, 3, v).unwrap();
            let d = a.det().unwrap();
            prop_assume!(d != 0);
            let inv = a.snf().unwrap();
            prop_assert_eq!(inv.len(), 3);
            prop_assert_eq!(inv.iter().product::<i64>(), d.abs());
            prop_assert!(inv[1] % inv[0] == 0 && inv[2] % inv[1] == 0);
        }

        #[test]
        fn column_hnf_is_canonical(v in proptest::collection::vec(-9i64..=9, 4), k in -3i64..=3) {
            let a = IntMatrix::new(2, 2, v).unwrap();
            prop_assume!(a.det().unwrap() != 0);
            let u = m(&[&[1, k], &[0, 1]]);
            let b = a.mul(&u).unwrap();
            prop_assert_eq!(a.hnf_column().unwrap(), b.hnf_column().unwrap());
        }
    }
}
