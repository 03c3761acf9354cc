//! Finitely generated convex cones.

mod dd;

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{check_dim, Error, Result};
use crate::lp::{self, Feasibility};
use crate::numeric::{
    approx_eq_vec, canonical_ray, dot, is_zero_vec, rank_of, sort_dedup_rays, Matrix, Scalar,
};

/// Largest ambient dimension accepted by LP and double-description routines.
pub const MAX_LP_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum MembershipVerdict<S> {
    /// Nonnegative weight per generator.
    Inside(Vec<S>),
    /// Farkas witness `w`: `w·g >= 0` on generators, `w·p < 0`.
    Outside(Vec<S>),
}

impl<S: Scalar> MembershipVerdict<S> {
    pub fn is_inside(&self) -> bool {
        matches!(self, MembershipVerdict::Inside(_))
    }

    /// Re-checks the certificate against explicit generators.
    pub fn verify(&self, generators: &[Vec<S>], point: &[S]) -> bool {
        match self {
            MembershipVerdict::Inside(w) => {
                if w.len() != generators.len() || w.iter().any(|x| x.is_neg()) {
                    return false;
                }
                let mut acc = vec![S::zero(); point.len()];
                for (wi, g) in w.iter().zip(generators) {
                    crate::numeric::axpy(&mut acc, wi, g);
                }
                approx_eq_vec(&acc, point)
            }
            MembershipVerdict::Outside(y) => {
                y.len() == point.len()
                    && dot(y, point).is_neg()
                    && generators.iter().all(|g| dot(y, g).is_nonneg())
            }
        }
    }
}

#[derive(Clone, Debug)]
enum RayIndex<S: Scalar> {
    Exact(HashMap<Vec<S::Key>, usize>),
    Approx(Vec<Vec<S>>),
}

impl<S: Scalar> RayIndex<S> {
    fn build(gens: &[Vec<S>]) -> Self {
        if S::EXACT {
            let mut map = HashMap::new();
            for (i, g) in gens.iter().enumerate() {
                if !is_zero_vec(g) {
                    map.entry(key_of(&canonical_ray(g))).or_insert(i);
                }
            }
            RayIndex::Exact(map)
        } else {
            RayIndex::Approx(gens.iter().map(|g| canonical_ray(g)).collect())
        }
    }

    fn find(&self, canon: &[S]) -> Option<usize> {
        match self {
            RayIndex::Exact(map) => map.get(&key_of(canon)).copied(),
            RayIndex::Approx(rays) => rays.iter().position(|r| approx_eq_vec(r, canon)),
        }
    }
}

fn key_of<S: Scalar>(v: &[S]) -> Vec<S::Key> {
    v.iter().map(|x| x.key().expect("exact backend")).collect()
}

#[derive(Clone, Debug)]
pub struct Cone<S: Scalar> {
    dim: usize,
    generators: Vec<Vec<S>>,
    index: OnceLock<RayIndex<S>>,
    extreme: OnceLock<Vec<usize>>,
    dual: OnceLock<Vec<Vec<S>>>,
}

impl<S: Scalar> Cone<S> {
    pub fn new(dim: usize, generators: Vec<Vec<S>>) -> Result<Self> {
        for g in &generators {
            check_dim(dim, g.len())?;
        }
        Ok(Cone {
            dim,
            generators,
            index: OnceLock::new(),
            extreme: OnceLock::new(),
            dual: OnceLock::new(),
        })
    }

    /// Cone whose generators are already known to be pairwise distinct extreme
    /// rays (e.g. produced by vertex enumeration).
    pub fn from_extreme_rays(dim: usize, generators: Vec<Vec<S>>) -> Result<Self> {
        let n = generators.len();
        let c = Self::new(dim, generators)?;
        let _ = c.extreme.set((0..n).collect());
        Ok(c)
    }

    pub fn positive_orthant(dim: usize) -> Self {
        let gens = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect();
        Self::from_extreme_rays(dim, gens).expect("consistent dims")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<S>] {
        &self.generators
    }

    fn index(&self) -> &RayIndex<S> {
        self.index.get_or_init(|| RayIndex::build(&self.generators))
    }

    /// Index of a generator on the same ray as `v`, if any.
    pub fn generator_on_ray(&self, v: &[S]) -> Option<usize> {
        if is_zero_vec(v) {
            return None;
        }
        self.index().find(&canonical_ray(v))
    }

    /// Decides `point ∈ cone`, returning a re-verified certificate.
    pub fn membership(&self, point: &[S]) -> Result<MembershipVerdict<S>> {
        check_dim(self.dim, point.len())?;
        let m = self.generators.len();
        if is_zero_vec(point) {
            return Ok(MembershipVerdict::Inside(vec![S::zero(); m]));
        }
        if let Some(k) = self.generator_on_ray(point) {
            let g = &self.generators[k];
            let j = g.iter().position(|x| !x.is_negligible()).expect("nonzero generator");
            let mut w = vec![S::zero(); m];
            w[k] = point[j].div_r(&g[j]);
            if !w[k].is_neg() {
                let v = MembershipVerdict::Inside(w);
                if v.verify(&self.generators, point) {
                    return Ok(v);
                }
            }
        }
        membership_lp(self.dim, &self.generators, point)
    }

    pub fn contains(&self, point: &[S]) -> Result<bool> {
        Ok(self.membership(point)?.is_inside())
    }

    fn extreme_indices(&self) -> &[usize] {
        self.extreme.get_or_init(|| {
            // drop zero vectors and duplicate rays, keeping first occurrences
            let idx = RayIndex::build(&self.generators);
            let seen: Vec<usize> = (0..self.generators.len())
                .filter(|&i| {
                    let g = &self.generators[i];
                    !is_zero_vec(g) && idx.find(&canonical_ray(g)) == Some(i)
                })
                .collect();
            let mut keep = Vec::new();
            for &i in &seen {
                let others: Vec<Vec<S>> = seen
                    .iter()
                    .filter(|&&j| j != i)
                    .map(|&j| self.generators[j].clone())
                    .collect();
                let outside = match membership_lp(self.dim, &others, &self.generators[i]) {
                    Ok(v) => !v.is_inside(),
                    Err(_) => true,
                };
                if outside {
                    keep.push(i);
                }
            }
            keep
        })
    }

    /// Minimal generating subset, in generator order.
    pub fn extreme_rays(&self) -> Vec<Vec<S>> {
        self.extreme_indices().iter().map(|&i| self.generators[i].clone()).collect()
    }

    pub fn extreme_ray_indices(&self) -> Vec<usize> {
        self.extreme_indices().to_vec()
    }

    /// `true` iff `v` is a nonzero element of the cone lying on an extreme ray.
    pub fn is_extreme(&self, v: &[S]) -> Result<bool> {
        check_dim(self.dim, v.len())?;
        if is_zero_vec(v) {
            return Ok(false);
        }
        if let Some(k) = self.generator_on_ray(v) {
            if self.extreme.get().is_some() {
                return Ok(self.extreme_indices().contains(&k));
            }
        }
        if !self.contains(v)? {
            return Ok(false);
        }
        let canon = canonical_ray(v);
        let others: Vec<Vec<S>> = self
            .generators
            .iter()
            .filter(|g| !is_zero_vec(g) && !approx_eq_vec(&canonical_ray(g), &canon))
            .cloned()
            .collect();
        Ok(!membership_lp(self.dim, &others, v)?.is_inside())
    }

    /// Generators of `{e : e·x >= 0 for all x in the cone}`.
    pub fn dual(&self) -> Result<Cone<S>> {
        if self.dual.get().is_none() {
            if self.dim > MAX_LP_DIM {
                return Err(Error::Unsupported(format!("dual cone in dimension {}", self.dim)));
            }
            let gens = dd::dual_generators(self.dim, &self.generators)?;
            let _ = self.dual.set(gens);
        }
        let gens = self.dual.get().unwrap().clone();
        let pointed_dual = rank_of(&self.generators) == self.dim;
        if pointed_dual {
            Cone::from_extreme_rays(self.dim, gens)
        } else {
            Cone::new(self.dim, gens)
        }
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.generators)
    }

    pub fn is_generating(&self) -> bool {
        self.rank() == self.dim
    }

    /// No nonzero `v` with `v, -v` both in the cone.
    pub fn is_pointed(&self) -> Result<bool> {
        let gens: Vec<&Vec<S>> = self.generators.iter().filter(|g| !is_zero_vec(g)).collect();
        if gens.is_empty() {
            return Ok(true);
        }
        let a = Matrix::from_fn(self.dim + 1, gens.len(), |i, j| {
            if i < self.dim {
                gens[j][i].clone()
            } else {
                S::one()
            }
        });
        let mut b = vec![S::zero(); self.dim + 1];
        b[self.dim] = S::one();
        Ok(matches!(lp::feasible(&a, &b)?, Feasibility::Infeasible(_)))
    }

    /// Canonical, sorted, deduplicated copy of the extreme rays.
    pub fn canonical_extreme_rays(&self) -> Vec<Vec<S>> {
        let mut rays: Vec<Vec<S>> = self.extreme_rays().iter().map(|r| canonical_ray(r)).collect();
        sort_dedup_rays(&mut rays);
        rays
    }
}

/// LP membership test against an explicit generator list.
pub fn membership_lp<S: Scalar>(
    dim: usize,
    generators: &[Vec<S>],
    point: &[S],
) -> Result<MembershipVerdict<S>> {
    check_dim(dim, point.len())?;
    if dim > MAX_LP_DIM {
        return Err(Error::Unsupported(format!("LP membership in dimension {dim}")));
    }
    if generators.is_empty() {
        if is_zero_vec(point) {
            return Ok(MembershipVerdict::Inside(Vec::new()));
        }
        let mut w: Vec<S> = point.iter().map(|x| -x.clone()).collect();
        S::normalize_ray(&mut w);
        return Ok(MembershipVerdict::Outside(w));
    }
    let a = Matrix::from_fn(dim, generators.len(), |i, j| generators[j][i].clone());
    let verdict = match lp::feasible(&a, point)? {
        Feasibility::Feasible(x) => MembershipVerdict::Inside(
            x.into_iter()
                .map(|v| if v.is_negligible() { S::zero() } else { v })
                .collect(),
        ),
        Feasibility::Infeasible(mut y) => {
            S::normalize_ray(&mut y);
            MembershipVerdict::Outside(y)
        }
    };
    if !verdict.verify(generators, point) {
        return Err(Error::Certificate(format!(
            "membership certificate for a {}-generator cone in dimension {dim}",
            generators.len()
        )));
    }
    Ok(verdict)
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
    fn orthant_membership() {
        let c = Cone::<Q>::positive_orthant(3);
        assert_eq!(c.membership(&v(&[1, 1, 0])).unwrap(), MembershipVerdict::Inside(v(&[1, 1, 0])));
        assert_eq!(c.membership(&v(&[1, -1, 0])).unwrap(), MembershipVerdict::Outside(v(&[0, 1, 0])));
    }

    #[test]
    fn two_generator_weights() {
        let c = Cone::new(2, vec![v(&[1, 1]), v(&[1, -1])]).unwrap();
        assert_eq!(c.membership(&v(&[3, 1])).unwrap(), MembershipVerdict::Inside(v(&[2, 1])));
    }

    #[test]
    fn extreme_rays_drop_interior_generator() {
        let c = Cone::new(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap();
        assert_eq!(c.extreme_rays(), vec![v(&[1, 0]), v(&[0, 1])]);
        let single = Cone::new(2, vec![v(&[2, 3])]).unwrap();
        assert_eq!(single.extreme_rays(), vec![v(&[2, 3])]);
        let dup = Cone::new(2, vec![v(&[1, 0]), v(&[2, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(dup.extreme_rays(), vec![v(&[1, 0]), v(&[0, 1])]);
    }

    #[test]
    fn orthant_is_self_dual() {
        let c = Cone::<Q>::positive_orthant(3);
        assert_eq!(c.dual().unwrap().canonical_extreme_rays(), c.canonical_extreme_rays());
    }

    #[test]
    fn dual_of_non_spanning_cone_contains_lineality() {
        let c = Cone::new(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let d = c.dual().unwrap();
        assert!(d.contains(&v(&[0, 0, 1])).unwrap());
        assert!(d.contains(&v(&[0, 0, -1])).unwrap());
        assert!(!d.contains(&v(&[-1, 0, 0])).unwrap());
        assert!(!d.is_pointed().unwrap());
        assert!(c.is_pointed().unwrap());
        assert!(!c.is_generating());
    }

    #[test]
    fn pointedness() {
        let line = Cone::new(2, vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])]).unwrap();
        assert!(!line.is_pointed().unwrap());
    }
}
