use std::cmp::Ordering;

use crate::error::{check_dim, Error, Result};
use crate::numeric::Scalar;

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc.add_r(&x.mul_r(y));
    }
    acc
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.add_r(y)).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.sub_r(y)).collect()
}

pub fn scale<S: Scalar>(a: &[S], k: &S) -> Vec<S> {
    a.iter().map(|x| x.mul_r(k)).collect()
}

/// `acc += k * v`
pub fn axpy<S: Scalar>(acc: &mut [S], k: &S, v: &[S]) {
    if k.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = a.add_r(&k.mul_r(x));
        }
    }
}

pub fn is_zero_vec<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(|x| x.is_negligible())
}

pub fn approx_eq_vec<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y))
}

pub fn sum_vecs<S: Scalar>(dim: usize, vs: &[Vec<S>]) -> Vec<S> {
    let mut acc = vec![S::zero(); dim];
    for v in vs {
        for (a, x) in acc.iter_mut().zip(v) {
            *a = a.add_r(x);
        }
    }
    acc
}

/// Coordinate tensor product: index `i * b.len() + j`.
pub fn kron<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.mul_r(y));
        }
    }
    out
}

pub fn canonical_ray<S: Scalar>(v: &[S]) -> Vec<S> {
    let mut w = v.to_vec();
    S::normalize_ray(&mut w);
    w
}

/// Lexicographic order with tolerance-aware equality.
pub fn cmp_lex<S: Scalar>(a: &[S], b: &[S]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x.approx_eq(y) {
            continue;
        }
        return x.partial_cmp(y).unwrap_or(Ordering::Equal);
    }
    a.len().cmp(&b.len())
}

/// Sorts canonical rays lexicographically and drops duplicates.
pub fn sort_dedup_rays<S: Scalar>(rays: &mut Vec<Vec<S>>) {
    rays.sort_by(|a, b| cmp_lex(a, b));
    rays.dedup_by(|a, b| approx_eq_vec(a, b));
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_dim(cols, r.len())?;
            data.extend(r.iter().cloned());
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    pub fn from_columns(cols: &[Vec<S>]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Permutation matrix sending basis vector `j` to basis vector `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, S::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// `M v`
    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        check_dim(self.cols, v.len())?;
        let nz: Vec<usize> = (0..v.len()).filter(|&j| !v[j].is_zero()).collect();
        Ok((0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut acc = S::zero();
                for &j in &nz {
                    if !row[j].is_zero() {
                        acc = acc.add_r(&row[j].mul_r(&v[j]));
                    }
                }
                acc
            })
            .collect())
    }

    /// `vᵀ M`, i.e. the pullback of a functional.
    pub fn vec_mul(&self, v: &[S]) -> Result<Vec<S>> {
        check_dim(self.rows, v.len())?;
        let mut out = vec![S::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            axpy(&mut out, vi, self.row(i));
        }
        Ok(out)
    }

    pub fn matmul(&self, o: &Self) -> Result<Self> {
        check_dim(self.cols, o.rows)?;
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            let mut acc = vec![S::zero(); o.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if !a.is_zero() {
                    axpy(&mut acc, a, o.row(k));
                }
            }
            for (j, x) in acc.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        Ok(out)
    }

    pub fn approx_eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && approx_eq_vec(&self.data, &o.data)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.approx_eq(&Self::identity(self.rows))
    }

    /// Exactly one `±1` per row and column.
    pub fn is_signed_permutation(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        let mut col_hit = vec![false; n];
        for i in 0..n {
            let mut found = false;
            for (j, x) in self.row(i).iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                if found || col_hit[j] || !x.abs().approx_eq(&S::one()) {
                    return false;
                }
                found = true;
                col_hit[j] = true;
            }
            if !found {
                return false;
            }
        }
        true
    }

    pub fn rank(&self) -> usize {
        row_reduce(self).1.len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        if self.is_signed_permutation() {
            return Some(self.transpose());
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let (r, piv) = row_reduce_cols(&aug, n);
        if piv.len() < n {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }
}

fn pick_pivot<S: Scalar>(m: &Matrix<S>, col: usize, from: usize) -> Option<usize> {
    if S::EXACT {
        (from..m.rows).find(|&i| !m.get(i, col).is_zero())
    } else {
        let best = (from..m.rows).max_by(|&a, &b| {
            m.get(a, col)
                .abs()
                .partial_cmp(&m.get(b, col).abs())
                .unwrap_or(Ordering::Equal)
        })?;
        (!m.get(best, col).is_negligible()).then_some(best)
    }
}

/// Reduced row echelon form; returns the pivot columns.
pub fn row_reduce<S: Scalar>(m: &Matrix<S>) -> (Matrix<S>, Vec<usize>) {
    row_reduce_cols(m, m.cols)
}

/// RREF where pivots are only sought among the first `ncols` columns.
fn row_reduce_cols<S: Scalar>(m: &Matrix<S>, ncols: usize) -> (Matrix<S>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.rows {
            break;
        }
        let Some(p) = pick_pivot(&a, c, r) else { continue };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = S::one().div_r(a.get(r, c));
        for j in 0..a.cols {
            let v = a.get(r, j).mul_r(&inv);
            a.set(r, j, v);
        }
        a.set(r, c, S::one());
        let prow = a.row(r).to_vec();
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let f = a.get(i, c).clone();
            if f.is_zero() {
                continue;
            }
            let start = i * a.cols;
            for j in 0..a.cols {
                if !prow[j].is_zero() {
                    a.data[start + j] = a.data[start + j].sub_r(&f.mul_r(&prow[j]));
                }
            }
            a.set(i, c, S::zero());
        }
        pivots.push(c);
        r += 1;
    }
    if !S::EXACT {
        for x in a.data.iter_mut() {
            if x.is_negligible() {
                *x = S::zero();
            }
        }
    }
    (a, pivots)
}

/// Solves `A x = b`. Free variables are set to zero; `None` if inconsistent.
pub fn solve_linear_system<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Result<Option<Vec<S>>> {
    check_dim(a.rows, b.len())?;
    let n = a.cols;
    let aug = Matrix::from_fn(a.rows, n + 1, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let (r, piv) = row_reduce_cols(&aug, n);
    for i in piv.len()..r.rows {
        if !r.get(i, n).is_negligible() {
            return Ok(None);
        }
    }
    let mut x = vec![S::zero(); n];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = r.get(i, n).clone();
    }
    if !S::EXACT {
        let resid = sub(&a.mul_vec(&x)?, b);
        if !is_zero_vec(&resid) {
            return Ok(None);
        }
    }
    Ok(Some(x))
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace<S: Scalar>(a: &Matrix<S>) -> Vec<Vec<S>> {
    let (r, piv) = row_reduce(a);
    let n = a.cols;
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); n];
            v[f] = S::one();
            for (i, &c) in piv.iter().enumerate() {
                v[c] = -r.get(i, f).clone();
            }
            v
        })
        .collect()
}

pub fn rank_of<S: Scalar>(vs: &[Vec<S>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Matrix::from_rows(vs).map(|m| m.rank()).unwrap_or(0)
}

/// Greedy lexicographic choice of a maximal linearly independent subset.
pub fn independent_subset<S: Scalar>(vs: &[Vec<S>]) -> Vec<usize> {
    let Some(dim) = vs.first().map(|v| v.len()) else { return Vec::new() };
    // running echelon basis, each row keyed by its pivot column
    let mut basis: Vec<(usize, Vec<S>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, v) in vs.iter().enumerate() {
        if basis.len() == dim {
            break;
        }
        let mut w = v.clone();
        for (p, b) in &basis {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                axpy(&mut w, &-f, b);
            }
        }
        let piv = if S::EXACT {
            w.iter().position(|x| !x.is_zero())
        } else {
            let best = (0..dim)
                .max_by(|&a, &b| w[a].abs().partial_cmp(&w[b].abs()).unwrap_or(Ordering::Equal))
                .unwrap();
            (w[best].abs() > S::from_f64(1e-7).unwrap()).then_some(best)
        };
        if let Some(p) = piv {
            let inv = S::one().div_r(&w[p]);
            let w = scale(&w, &inv);
            for (_, b) in basis.iter_mut() {
                if !b[p].is_zero() {
                    let f = b[p].clone();
                    axpy(b, &-f, &w);
                }
            }
            basis.push((p, w));
            chosen.push(idx);
        }
    }
    chosen
}

pub fn require_square<S: Scalar>(m: &Matrix<S>, n: usize) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::Invalid(format!(
            "expected {n}x{n} matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn qv(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| Q::from_i64(x)).collect()
    }

    #[test]
    fn identity_solve() {
        let a = Matrix::<Q>::identity(3);
        assert_eq!(solve_linear_system(&a, &qv(&[1, 2, 3])).unwrap(), Some(qv(&[1, 2, 3])));
    }

    #[test]
    fn homogeneous_free_variable_zeroed() {
        let a = Matrix::from_rows(&[qv(&[1, 1])]).unwrap();
        assert_eq!(solve_linear_system(&a, &qv(&[0])).unwrap(), Some(qv(&[0, 0])));
    }

    #[test]
    fn inconsistent_system() {
        let a = Matrix::from_rows(&[qv(&[1, 1]), qv(&[1, 1])]).unwrap();
        assert_eq!(solve_linear_system(&a, &qv(&[1, 2])).unwrap(), None);
    }

    #[test]
    fn dimension_mismatch() {
        let a = Matrix::<Q>::identity(2);
        assert!(matches!(
            solve_linear_system(&a, &qv(&[1, 2, 3])),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn float_solve_partial_pivoting() {
        let a = Matrix::from_rows(&[vec![1e-12, 1.0], vec![1.0, 1.0]]).unwrap();
        let x = solve_linear_system(&a, &[1.0, 2.0]).unwrap().unwrap();
        assert!((x[0] - 1.0).abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inverse_and_nullspace() {
        let a = Matrix::from_rows(&[qv(&[2, 1]), qv(&[1, 1])]).unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.matmul(&inv).unwrap().is_identity());
        let s = Matrix::from_rows(&[qv(&[1, 1, 0])]).unwrap();
        let ns = nullspace(&s);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&s.mul_vec(v).unwrap()));
        }
        assert!(Matrix::from_rows(&[qv(&[1, 2]), qv(&[2, 4])]).unwrap().inverse().is_none());
    }

    #[test]
    fn independent_subset_is_lexicographic() {
        let vs = vec![qv(&[1, 0, 0]), qv(&[2, 0, 0]), qv(&[0, 1, 0]), qv(&[1, 1, 0]), qv(&[0, 0, 5])];
        assert_eq!(independent_subset(&vs), vec![0, 2, 4]);
    }
}
