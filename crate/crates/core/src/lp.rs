//! Dense two-phase primal simplex with Bland's rule.
//!
//! Problems are in standard form `A x = b, x >= 0`. Infeasibility is reported
//! with a Farkas vector `y` satisfying `yᵀA >= 0` and `yᵀb < 0`.

use crate::error::{check_dim, Result};
use crate::numeric::{dot, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility<S> {
    Feasible(Vec<S>),
    Infeasible(Vec<S>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult<S> {
    Optimal { x: Vec<S>, value: S },
    Infeasible(Vec<S>),
    Unbounded,
}

struct Tableau<S> {
    n: usize,
    width: usize,
    rows: Vec<Vec<S>>,
    obj: Vec<S>,
    basis: Vec<usize>,
    flipped: Vec<bool>,
}

impl<S: Scalar> Tableau<S> {
    fn new(a: &Matrix<S>, b: &[S]) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let width = n + m;
        let mut rows = Vec::with_capacity(m);
        let mut flipped = Vec::with_capacity(m);
        for i in 0..m {
            let flip = b[i].is_neg();
            let mut r = Vec::with_capacity(width + 1);
            for j in 0..n {
                let v = a.get(i, j).clone();
                r.push(if flip { -v } else { v });
            }
            for k in 0..m {
                r.push(if k == i { S::one() } else { S::zero() });
            }
            r.push(if flip { -b[i].clone() } else { b[i].clone() });
            rows.push(r);
            flipped.push(flip);
        }
        let mut obj = vec![S::zero(); width + 1];
        for r in &rows {
            for j in 0..n {
                if !r[j].is_zero() {
                    obj[j] = obj[j].sub_r(&r[j]);
                }
            }
            obj[width] = obj[width].sub_r(&r[width]);
        }
        Tableau { n, width, rows, obj, basis: (n..n + m).collect(), flipped }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = S::one().div_r(&self.rows[r][c]);
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x = x.mul_r(&inv);
            }
        }
        self.rows[r][c] = S::one();
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..=self.width).filter(|&j| !prow[j].is_zero()).collect();
        let elim = |row: &mut Vec<S>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                row[j] = row[j].sub_r(&f.mul_r(&prow[j]));
            }
            row[c] = S::zero();
            if !S::EXACT {
                for x in row.iter_mut() {
                    if x.is_negligible() {
                        *x = S::zero();
                    }
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                elim(row);
            }
        }
        elim(&mut self.obj);
        self.basis[r] = c;
    }

    /// Runs Bland's rule; `false` means unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_neg()) else { return true };
            let mut best: Option<(usize, S)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_pos() {
                    continue;
                }
                let ratio = row[self.width].div_r(&row[c]);
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        if ratio.approx_eq(br) {
                            self.basis[i] < self.basis[*bi]
                        } else {
                            ratio < *br
                        }
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn farkas(&self) -> Vec<S> {
        (0..self.rows.len())
            .map(|i| {
                let y = S::one().sub_r(&self.obj[self.n + i]);
                if self.flipped[i] {
                    y
                } else {
                    -y
                }
            })
            .collect()
    }

    /// Pivots zero-level artificials out of the basis, dropping redundant rows.
    fn expel_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.n {
                match (0..self.n).find(|&j| !self.rows[i][j].is_negligible()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                        self.flipped.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    fn solution(&self) -> Vec<S> {
        let mut x = vec![S::zero(); self.n];
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < self.n {
                x[bv] = self.rows[i][self.width].clone();
            }
        }
        x
    }
}

fn phase_one<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Result<std::result::Result<Tableau<S>, Vec<S>>> {
    check_dim(a.rows(), b.len())?;
    let mut t = Tableau::new(a, b);
    let all = t.width;
    t.optimize(all);
    let value = -t.obj[t.width].clone();
    if value.is_pos() {
        return Ok(Err(t.farkas()));
    }
    t.expel_artificials();
    Ok(Ok(t))
}

/// Finds `x >= 0` with `A x = b`, or a Farkas certificate of infeasibility.
pub fn feasible<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Result<Feasibility<S>> {
    Ok(match phase_one(a, b)? {
        Ok(t) => Feasibility::Feasible(t.solution()),
        Err(y) => Feasibility::Infeasible(y),
    })
}

/// Minimizes `cᵀx` subject to `A x = b, x >= 0`.
pub fn minimize<S: Scalar>(c: &[S], a: &Matrix<S>, b: &[S]) -> Result<LpResult<S>> {
    check_dim(a.cols(), c.len())?;
    let mut t = match phase_one(a, b)? {
        Ok(t) => t,
        Err(y) => return Ok(LpResult::Infeasible(y)),
    };
    let w = t.width;
    let mut obj = vec![S::zero(); w + 1];
    obj[..t.n].clone_from_slice(c);
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < t.n && !c[bv].is_zero() {
            let cb = c[bv].clone();
            for j in 0..=w {
                if !t.rows[i][j].is_zero() {
                    obj[j] = obj[j].sub_r(&cb.mul_r(&t.rows[i][j]));
                }
            }
        }
    }
    t.obj = obj;
    let n = t.n;
    if !t.optimize(n) {
        return Ok(LpResult::Unbounded);
    }
    let x = t.solution();
    let value = dot(c, &x);
    Ok(LpResult::Optimal { x, value })
}

/// Checks `yᵀA >= 0` and `yᵀb < 0`.
pub fn verify_farkas<S: Scalar>(a: &Matrix<S>, b: &[S], y: &[S]) -> bool {
    let Ok(ya) = a.vec_mul(y) else { return false };
    ya.iter().all(|v| v.is_nonneg()) && dot(y, b).is_neg()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| Q::from_i64(x)).collect()).collect::<Vec<_>>())
            .unwrap()
    }
    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| Q::from_i64(x)).collect()
    }

    #[test]
    fn feasible_and_infeasible() {
        let a = m(&[&[1, 1], &[1, -1]]);
        match feasible(&a, &v(&[3, 1])).unwrap() {
            Feasibility::Feasible(x) => assert_eq!(x, v(&[2, 1])),
            other => panic!("{other:?}"),
        }
        let a = m(&[&[1, 0], &[0, 1]]);
        let b = v(&[1, -1]);
        match feasible(&a, &b).unwrap() {
            Feasibility::Infeasible(y) => assert!(verify_farkas(&a, &b, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_rows() {
        let a = m(&[&[1, 1, 0], &[2, 2, 0], &[0, 0, 1]]);
        match feasible(&a, &v(&[1, 2, 0])).unwrap() {
            Feasibility::Feasible(x) => assert_eq!(a.mul_vec(&x).unwrap(), v(&[1, 2, 0])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minimize_small() {
        // min -x0 - x1 s.t. x0 + x1 + s = 4, x0 + t = 3
        let a = m(&[&[1, 1, 1, 0], &[1, 0, 0, 1]]);
        match minimize(&v(&[-1, -2, 0, 0]), &a, &v(&[4, 3])).unwrap() {
            LpResult::Optimal { value, .. } => assert_eq!(value, Q::from_i64(-8)),
            other => panic!("{other:?}"),
        }
        let a = m(&[&[1, -1]]);
        assert_eq!(minimize(&v(&[-1, 0]), &a, &v(&[0])).unwrap(), LpResult::Unbounded);
    }
}
