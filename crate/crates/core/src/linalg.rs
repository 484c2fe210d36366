//! Dense exact matrices and row reduction.

use crate::error::{Error, Result};
use crate::scalars::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors, each of length `nrows`.
    pub fn from_cols(cols: &[Vec<F>], nrows: usize) -> Self {
        let mut m = Mat::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn flat(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn mul(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out: Mat<F> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Mat<F> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn transpose(&self) -> Mat<F> {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Mat<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m.get(i, c).is_zero())
                .min_by_key(|&i| m.get(i, c).weight());
            let Some(p) = best else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let pj = m.get(r, j);
                    if pj.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).sub(&f.mul(pj));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (m, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m.get(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Mat<F>> {
        if self.rows != self.cols {
            return Err(Error::RankMismatch(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let (m, pivots) = aug.rref();
        let rank = pivots.iter().filter(|&&p| p < n).count();
        if rank < n {
            return Err(Error::SingularMap { rank, expected: n });
        }
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, m.get(i, n + j).clone());
            }
        }
        Ok(out)
    }
}

/// Rank of a family of vectors of equal length.
pub fn rank_of<F: Field>(vectors: &[Vec<F>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Mat::from_rows(vectors.to_vec()).rank()
}

pub fn vec_is_zero<F: Field>(v: &[F]) -> bool {
    v.iter().all(F::is_zero)
}

pub fn vec_add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_scale<F: Field>(a: &[F], c: &F) -> Vec<F> {
    a.iter().map(|x| x.mul(c)).collect()
}

/// Linear combination `sum c_i v_i`.
pub fn combine<F: Field>(coeffs: &[F], vectors: &[Vec<F>], len: usize) -> Vec<F> {
    let mut acc = vec![F::zero(); len];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(v) {
            if !x.is_zero() {
                *a = a.add(&c.mul(x));
            }
        }
    }
    acc
}

/// Coordinates with respect to a fixed linearly independent family.
///
/// A set of coordinate positions on which the family is independent is
/// chosen once; coordinates of a vector are read off from those positions
/// and then checked against the full vector.
#[derive(Clone, Debug)]
pub struct Coordinatizer<F> {
    basis: Vec<Vec<F>>,
    len: usize,
    positions: Vec<usize>,
    inv: Mat<F>,
}

impl<F: Field> Coordinatizer<F> {
    pub fn new(basis: Vec<Vec<F>>, len: usize) -> Result<Self> {
        let k = basis.len();
        if k == 0 {
            return Ok(Coordinatizer {
                basis,
                len,
                positions: Vec::new(),
                inv: Mat::zeros(0, 0),
            });
        }
        let rows = Mat::from_rows(basis.clone());
        let (_, positions) = rows.rref();
        if positions.len() < k {
            return Err(Error::SingularMap {
                rank: positions.len(),
                expected: k,
            });
        }
        // square block: entry (p, i) is basis[i][positions[p]]
        let mut block = Mat::zeros(k, k);
        for (p, &pos) in positions.iter().enumerate() {
            for (i, b) in basis.iter().enumerate() {
                block.set(p, i, b[pos].clone());
            }
        }
        let inv = block.inverse()?;
        Ok(Coordinatizer {
            basis,
            len,
            positions,
            inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    /// Coordinates of `v`, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        assert_eq!(v.len(), self.len);
        let picked: Vec<F> = self.positions.iter().map(|&p| v[p].clone()).collect();
        let c = if self.basis.is_empty() {
            Vec::new()
        } else {
            self.inv.mul_vec(&picked)
        };
        let back = combine(&c, &self.basis, self.len);
        (back == v).then_some(c)
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.coords(v).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, Rational};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect())
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(vec_is_zero(&a.mul_vec(&ns[0])));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        let s = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(Error::SingularMap { rank: 1, expected: 2 }));
    }

    #[test]
    fn coordinates() {
        let basis = vec![
            vec![rat(1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1)],
        ];
        let c = Coordinatizer::new(basis, 3).unwrap();
        assert_eq!(
            c.coords(&[rat(2, 1), rat(3, 1), rat(5, 1)]),
            Some(vec![rat(2, 1), rat(3, 1)])
        );
        assert_eq!(c.coords(&[rat(1, 1), rat(0, 1), rat(0, 1)]), None);
    }

    fn arb_mat(r: usize, c: usize) -> impl Strategy<Value = Mat<Rational>> {
        prop::collection::vec(-4i64..5, r * c)
            .prop_map(move |v| Mat::from_flat(r, c, v.into_iter().map(|x| rat(x, 1)).collect()))
    }

    proptest! {
        #[test]
        fn rank_nullity(a in arb_mat(4, 5)) {
            prop_assert_eq!(a.rank() + a.nullspace().len(), 5);
            for v in a.nullspace() {
                prop_assert!(vec_is_zero(&a.mul_vec(&v)));
            }
        }

        #[test]
        fn solve_is_consistent(a in arb_mat(3, 3), x in prop::collection::vec(-4i64..5, 3)) {
            let x: Vec<Rational> = x.into_iter().map(|v| rat(v, 1)).collect();
            let b = a.mul_vec(&x);
            let y = a.solve(&b).unwrap();
            prop_assert_eq!(a.mul_vec(&y), b);
        }
    }
}
