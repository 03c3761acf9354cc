//! Double description: extreme rays of `{z : A z >= 0}` for full-column-rank `A`.

use crate::error::Result;
use crate::numeric::{
    canonical_ray, dot, independent_subset, is_zero_vec, nullspace, rank_of, sort_dedup_rays,
    Matrix, Scalar,
};

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray<S> {
    v: Vec<S>,
    tight: Bits,
}

/// Extreme rays of the pointed cone `{z : rows·z >= 0}`; `rows` must have rank
/// equal to their length.
fn extreme_rays_of_inequalities<S: Scalar>(rows: &[Vec<S>], r: usize) -> Result<Vec<Vec<S>>> {
    let m = rows.len();
    let init = independent_subset(rows);
    debug_assert_eq!(init.len(), r);
    let basis = Matrix::from_rows(&init.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>())?;
    let inv = basis.inverse().expect("independent rows");
    let mut rays: Vec<Ray<S>> = (0..r)
        .map(|k| {
            let mut v = inv.column(k);
            S::normalize_ray(&mut v);
            let mut tight = Bits::new(m);
            for (t, &i) in init.iter().enumerate() {
                if t != k {
                    tight.set(i);
                }
            }
            Ray { v, tight }
        })
        .collect();

    for (ci, a) in rows.iter().enumerate() {
        if init.contains(&ci) {
            continue;
        }
        let vals: Vec<S> = rays.iter().map(|ray| dot(a, &ray.v)).collect();
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for (i, s) in vals.iter().enumerate() {
            if s.is_pos() {
                pos.push(i);
            } else if s.is_neg() {
                neg.push(i);
            } else {
                zero.push(i);
            }
        }
        if neg.is_empty() {
            for &i in &zero {
                rays[i].tight.set(ci);
            }
            continue;
        }
        let mut next: Vec<Ray<S>> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.and(&rays[q].tight);
                if r >= 2 && common.count() < r - 2 {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, other)| k == p || k == q || !common.subset_of(&other.tight));
                if !adjacent {
                    continue;
                }
                let mut v = crate::numeric::scale(&rays[q].v, &vals[p]);
                crate::numeric::axpy(&mut v, &-vals[q].clone(), &rays[p].v);
                if is_zero_vec(&v) {
                    continue;
                }
                S::normalize_ray(&mut v);
                let mut tight = common;
                tight.set(ci);
                next.push(Ray { v, tight });
            }
        }
        let mut kept: Vec<Ray<S>> = Vec::with_capacity(pos.len() + zero.len() + next.len());
        for i in 0..rays.len() {
            if vals[i].is_pos() {
                kept.push(Ray { v: rays[i].v.clone(), tight: rays[i].tight.clone() });
            } else if !vals[i].is_neg() {
                let mut t = rays[i].tight.clone();
                t.set(ci);
                kept.push(Ray { v: rays[i].v.clone(), tight: t });
            }
        }
        kept.extend(next);
        rays = kept;
    }
    let mut out: Vec<Vec<S>> = rays.into_iter().map(|r| r.v).collect();
    sort_dedup_rays(&mut out);
    Ok(out)
}

/// Generators of the dual of `cone(gens)` in dimension `dim`.
///
/// The pointed part is computed inside `span(gens)`; the orthogonal complement
/// is appended as a `±` basis.
pub(crate) fn dual_generators<S: Scalar>(dim: usize, gens: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    let gens: Vec<Vec<S>> = gens.iter().filter(|g| !is_zero_vec(g)).cloned().collect();
    let r = rank_of(&gens);
    let complement: Vec<Vec<S>> = if gens.is_empty() {
        (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect()
    } else {
        nullspace(&Matrix::from_rows(&gens)?)
    };
    let mut out = Vec::new();
    if r > 0 {
        let span_idx = independent_subset(&gens);
        let span: Vec<Vec<S>> = span_idx.iter().map(|&i| gens[i].clone()).collect();
        // g·(Bᵀz) = (B g)·z
        let rows: Vec<Vec<S>> = gens
            .iter()
            .map(|g| span.iter().map(|b| dot(b, g)).collect())
            .collect();
        for z in extreme_rays_of_inequalities(&rows, r)? {
            let mut y = vec![S::zero(); dim];
            for (zk, b) in z.iter().zip(&span) {
                crate::numeric::axpy(&mut y, zk, b);
            }
            out.push(canonical_ray(&y));
        }
        sort_dedup_rays(&mut out);
    }
    for k in complement {
        let k = canonical_ray(&k);
        out.push(k.iter().map(|x| -x.clone()).collect());
        out.push(k);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| Q::from_i64(x)).collect()
    }

    #[test]
    fn square_cone_dual_is_rotated_square() {
        let sq = vec![v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), v(&[0, -1, 1])];
        let d = dual_generators(3, &sq).unwrap();
        // functionals vanishing on the four edges
        let mut want = vec![v(&[1, 1, 1]), v(&[1, -1, 1]), v(&[-1, 1, 1]), v(&[-1, -1, 1])];
        for w in want.iter_mut() {
            Q::normalize_ray(w);
        }
        sort_dedup_rays(&mut want);
        assert_eq!(d, want);
    }
}
