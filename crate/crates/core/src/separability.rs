//! Separable and entangled states and effects of composites.

use serde::Serialize;

use crate::composition::CompositeSystem;
use crate::cone::{membership_lp, MembershipVerdict};
use crate::error::{check_dim, Error, Result};
use crate::gpt::{ConeModel, LinearMapOnSystem, Role};
use crate::numeric::{approx_eq_vec, canonical_ray, dot, scale, sort_dedup_rays, sum_vecs, Scalar};
use crate::quantum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    State,
    Effect,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeparabilityVerdict<S> {
    /// Nonzero weights over the product generators, by generator index.
    Separable { terms: Vec<(usize, S)> },
    /// Functional nonnegative on the product generators and negative on the
    /// queried object. `complete` means it is nonnegative on every product
    /// of local objects, not only the listed ones.
    Entangled { witness: Vec<S>, complete: bool },
}

impl<S: Scalar> SeparabilityVerdict<S> {
    pub fn is_separable(&self) -> bool {
        matches!(self, SeparabilityVerdict::Separable { .. })
    }

    pub fn witness(&self) -> Option<&[S]> {
        match self {
            SeparabilityVerdict::Entangled { witness, .. } => Some(witness),
            _ => None,
        }
    }

    /// Re-check against the generator list.
    pub fn verify(&self, generators: &[Vec<S>], point: &[S]) -> bool {
        match self {
            SeparabilityVerdict::Separable { terms } => {
                if terms.iter().any(|(i, w)| *i >= generators.len() || w.is_neg()) {
                    return false;
                }
                let parts: Vec<Vec<S>> = terms.iter().map(|(i, w)| scale(&generators[*i], w)).collect();
                approx_eq_vec(&sum_vecs(point.len(), &parts), point)
            }
            SeparabilityVerdict::Entangled { witness, .. } => {
                dot(witness, point).is_neg() && generators.iter().all(|g| !dot(witness, g).is_neg())
            }
        }
    }
}

fn products<S: Scalar>(
    lists: Vec<Vec<Vec<S>>>,
    apply: impl Fn(&[Vec<S>]) -> Result<Vec<S>>,
) -> Result<Vec<Vec<S>>> {
    let mut acc: Vec<Vec<Vec<S>>> = vec![Vec::new()];
    for l in &lists {
        acc = acc
            .into_iter()
            .flat_map(|t| l.iter().map(move |x| [t.clone(), vec![x.clone()]].concat()))
            .collect();
    }
    let mut out = acc.iter().map(|t| apply(t)).collect::<Result<Vec<_>>>()?;
    sort_dedup_rays(&mut out);
    Ok(out)
}

/// Products of the factors' normalized extreme (or designated) states.
pub fn separable_state_generators<S: Scalar>(c: &CompositeSystem<S>) -> Result<Vec<Vec<S>>> {
    let lists = c.factors.iter().map(|f| f.extreme_states()).collect();
    products(lists, |t| c.product_state(t))
}

/// Products of the factors' pure effect rays.
pub fn separable_effect_generators<S: Scalar>(c: &CompositeSystem<S>) -> Result<Vec<Vec<S>>> {
    let lists = c.factors.iter().map(|f| f.pure_effect_rays()).collect();
    products(lists, |t| c.product_effect(t))
}

fn all_polyhedral<S: Scalar>(c: &CompositeSystem<S>) -> bool {
    c.factors.iter().all(|f| f.states().is_polyhedral() && f.effects().is_polyhedral())
}

/// Partial-transpose witness across the cut (first factors | last factor)
/// of a Hermitian-matrix composite, when the transpose is not PSD.
fn ppt_witness<S: Scalar>(c: &CompositeSystem<S>, kind: Kind, v: &[S]) -> Result<Option<Vec<S>>> {
    let ConeModel::Psd { n, role, .. } = c.system.states() else { return Ok(None) };
    let Some(last) = c.factors.last() else { return Ok(None) };
    let ConeModel::Psd { n: n_b, .. } = last.states() else { return Ok(None) };
    debug_assert_eq!(*role, Role::State);
    let (n, n_b) = (*n, *n_b);
    let m = match kind {
        Kind::State => quantum::density_matrix(n, v)?,
        Kind::Effect => quantum::effect_matrix(n, v)?,
    };
    let pt = quantum::partial_transpose(&m, n / n_b, n_b)?;
    let quantum::PsdVerdict::NotPsd { vector } = quantum::psd_check(&pt)? else { return Ok(None) };
    let w = quantum::partial_transpose(&quantum::projector(&vector), n / n_b, n_b)?;
    let mut w = match kind {
        Kind::State => quantum::effect_coords(&w),
        Kind::Effect => quantum::density_coords(&w),
    };
    S::normalize_ray(&mut w);
    Ok(Some(w))
}

fn decide<S: Scalar>(c: &CompositeSystem<S>, kind: Kind, gens: &[Vec<S>], v: &[S]) -> Result<SeparabilityVerdict<S>> {
    check_dim(c.system.dim(), v.len())?;
    let verdict = match membership_lp(c.system.dim(), gens, v)? {
        MembershipVerdict::Inside(w) => SeparabilityVerdict::Separable {
            terms: w.into_iter().enumerate().filter(|(_, x)| !x.is_negligible()).collect(),
        },
        MembershipVerdict::Outside(y) => {
            if all_polyhedral(c) {
                SeparabilityVerdict::Entangled { witness: canonical_ray(&y), complete: true }
            } else if let Some(w) = ppt_witness(c, kind, v)? {
                SeparabilityVerdict::Entangled { witness: w, complete: true }
            } else {
                SeparabilityVerdict::Entangled { witness: canonical_ray(&y), complete: false }
            }
        }
    };
    if !verdict.verify(gens, v) {
        return Err(Error::Certificate("separability verdict does not re-verify".into()));
    }
    Ok(verdict)
}

pub fn is_separable_state<S: Scalar>(c: &CompositeSystem<S>, omega: &[S]) -> Result<SeparabilityVerdict<S>> {
    let gens = separable_state_generators(c)?;
    is_separable_state_with(c, &gens, omega)
}

/// As [`is_separable_state`] with precomputed generators.
pub fn is_separable_state_with<S: Scalar>(
    c: &CompositeSystem<S>,
    gens: &[Vec<S>],
    omega: &[S],
) -> Result<SeparabilityVerdict<S>> {
    let v = decide(c, Kind::State, gens, omega)?;
    if let SeparabilityVerdict::Separable { terms } = &v {
        let total = terms.iter().fold(S::zero(), |a, (_, w)| a.add_r(w));
        if !total.approx_eq(&c.system.normalization(omega)?) {
            return Err(Error::Certificate("separable weights do not sum to the normalization".into()));
        }
    }
    Ok(v)
}

pub fn is_separable_effect<S: Scalar>(c: &CompositeSystem<S>, e: &[S]) -> Result<SeparabilityVerdict<S>> {
    let gens = separable_effect_generators(c)?;
    decide(c, Kind::Effect, &gens, e)
}

pub fn is_separable_effect_with<S: Scalar>(
    c: &CompositeSystem<S>,
    gens: &[Vec<S>],
    e: &[S],
) -> Result<SeparabilityVerdict<S>> {
    decide(c, Kind::Effect, gens, e)
}

/// `e ∘ T`, re-checked as a valid effect.
pub fn pullback_effect<S: Scalar>(c: &CompositeSystem<S>, e: &[S], t: &LinearMapOnSystem<S>) -> Result<Vec<S>> {
    let p = t.pull_back(e)?;
    if !c.system.is_valid_effect(&p)? {
        return Err(Error::Invalid("pullback is not a valid effect".into()));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::{compose, qt_composite, stm_composite, Method};
    use crate::stm;
    use crate::theories::{cpt, gbit, qubit_state};
    use crate::Q;

    #[test]
    fn generator_counts() {
        let c = compose(vec![cpt(2).unwrap(), cpt(2).unwrap()], Method::MinTensor).unwrap();
        assert_eq!(separable_state_generators(&c).unwrap().len(), 4);
        let g = compose(vec![gbit(), gbit()], Method::MaxTensor).unwrap();
        assert_eq!(separable_state_generators(&g).unwrap().len(), 16);
        let s = stm_composite(2).unwrap();
        assert_eq!(separable_state_generators(&s).unwrap().len(), 36);
    }

    #[test]
    fn toy_entangled_state() {
        let s = stm_composite(2).unwrap();
        let mask: u64 = ["11", "22", "33", "44"]
            .iter()
            .map(|l| 1u64 << stm::parse_ontic_label(2, l).unwrap())
            .fold(0, |a, b| a | b);
        let v = stm::mask_vector::<Q>(2, mask);
        let verdict = is_separable_state(&s, &v).unwrap();
        assert!(!verdict.is_separable());
    }

    #[test]
    fn bell_state_needs_the_transpose_witness() {
        let c = qt_composite(2).unwrap();
        let one = crate::numeric::Complex::<Q>::one();
        let zero = crate::numeric::Complex::<Q>::zero();
        let proj = crate::quantum::projector(&[one.clone(), zero.clone(), zero, one]);
        let bell: Vec<Q> =
            crate::quantum::density_coords(&proj).iter().map(|x| x * Q::ratio(1, 2)).collect();
        let v = is_separable_state(&c, &bell).unwrap();
        let SeparabilityVerdict::Entangled { complete, .. } = v else { panic!("Bell state reported separable") };
        assert!(complete);
        let p = c.product_state(&[qubit_state("x+").unwrap(), qubit_state("z-").unwrap()]).unwrap();
        assert!(is_separable_state(&c, &p).unwrap().is_separable());
    }
}
