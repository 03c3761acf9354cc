//! Single GPT systems: cones, unit effect, purity, transformations and frames.

mod cone_model;
mod frames;

pub use cone_model::{ConeModel, ConeVerdict, Role};
pub use frames::{FrameWithMeasurement, QuasiClassicalViolation};
pub(crate) use frames::all_cliques;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::numeric::{approx_eq_vec, dot, sub, sum_vecs, Matrix, Scalar};

/// Default cap on the number of extreme states for exhaustive frame search.
pub const DEFAULT_FRAME_SEARCH_LIMIT: usize = 20;

/// Effects summing to the unit.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement<S> {
    pub effects: Vec<Vec<S>>,
}

impl<S: Scalar> Measurement<S> {
    pub fn new(unit: &[S], effects: Vec<Vec<S>>) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::Invalid("measurement without outcomes".into()));
        }
        for e in &effects {
            check_dim(unit.len(), e.len())?;
        }
        if !approx_eq_vec(&sum_vecs(unit.len(), &effects), unit) {
            return Err(Error::Invalid("measurement effects do not sum to the unit effect".into()));
        }
        Ok(Measurement { effects })
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Some effect equals none of `other`'s effects.
    pub fn differs_from(&self, other: &Measurement<S>) -> bool {
        self.effects.iter().any(|e| !other.effects.iter().any(|f| approx_eq_vec(e, f)))
    }
}

#[derive(Clone, Debug)]
pub struct NamedMap<S> {
    pub name: String,
    pub matrix: Matrix<S>,
}

/// A linear map together with its validity flags on a particular system.
#[derive(Clone, Debug)]
pub struct LinearMapOnSystem<S> {
    pub matrix: Matrix<S>,
    pub inverse: Option<Matrix<S>>,
    pub preserves_states: bool,
    pub preserves_effects: bool,
    pub reversible: bool,
    /// First failed check, for reports.
    pub failure: Option<String>,
}

impl<S: Scalar> LinearMapOnSystem<S> {
    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        self.matrix.mul_vec(v)
    }

    /// `e ∘ T`
    pub fn pull_back(&self, e: &[S]) -> Result<Vec<S>> {
        self.matrix.vec_mul(e)
    }

    pub fn is_transformation(&self) -> bool {
        self.preserves_states && self.preserves_effects
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InvariantReport {
    pub normalizable: bool,
    pub unit_is_effect: bool,
    pub effects_nonnegative: bool,
    pub order_unit: bool,
    pub states_pointed: bool,
    pub states_generating: bool,
    pub failures: Vec<String>,
}

impl InvariantReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A GPT system `(A, A₊, E_A, u_A)` with optional designated structure.
#[derive(Clone, Debug)]
pub struct GptSystem<S: Scalar> {
    name: String,
    states: ConeModel<S>,
    effects: ConeModel<S>,
    unit: Vec<S>,
    transformations: Vec<NamedMap<S>>,
    frames: Vec<FrameWithMeasurement<S>>,
    measurements: Vec<Measurement<S>>,
    frame_search_limit: usize,
}

impl<S: Scalar> GptSystem<S> {
    /// Builds a system after the cheap checks: dimensions agree and the unit
    /// is strictly positive on every listed state generator.
    pub fn new(name: impl Into<String>, states: ConeModel<S>, effects: ConeModel<S>, unit: Vec<S>) -> Result<Self> {
        let name = name.into();
        check_dim(states.dim(), effects.dim())?;
        check_dim(states.dim(), unit.len())?;
        if states.generators().is_empty() {
            return Err(Error::Invalid(format!("{name}: empty state cone")));
        }
        if let Some(g) = states.generators().iter().find(|g| !dot(&unit, g).is_pos()) {
            return Err(Error::Invalid(format!("{name}: unit effect not positive on generator {g:?}")));
        }
        Ok(GptSystem {
            name,
            states,
            effects,
            unit,
            transformations: Vec::new(),
            frames: Vec::new(),
            measurements: Vec::new(),
            frame_search_limit: DEFAULT_FRAME_SEARCH_LIMIT,
        })
    }

    pub fn with_transformations(mut self, maps: Vec<NamedMap<S>>) -> Result<Self> {
        for m in &maps {
            crate::numeric::require_square(&m.matrix, self.dim())?;
        }
        self.transformations = maps;
        Ok(self)
    }

    pub fn with_frames(mut self, frames: Vec<FrameWithMeasurement<S>>) -> Result<Self> {
        for f in &frames {
            f.check_duality()?;
        }
        self.frames = frames;
        Ok(self)
    }

    pub fn with_measurements(mut self, ms: Vec<Measurement<S>>) -> Self {
        self.measurements = ms;
        self
    }

    pub fn with_frame_search_limit(mut self, limit: usize) -> Self {
        self.frame_search_limit = limit;
        self
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn states(&self) -> &ConeModel<S> {
        &self.states
    }

    pub fn effects(&self) -> &ConeModel<S> {
        &self.effects
    }

    pub fn unit(&self) -> &[S] {
        &self.unit
    }

    pub fn transformations(&self) -> &[NamedMap<S>] {
        &self.transformations
    }

    pub fn transformation(&self, name: &str) -> Option<&NamedMap<S>> {
        self.transformations.iter().find(|t| t.name == name)
    }

    pub fn designated_frames(&self) -> &[FrameWithMeasurement<S>] {
        &self.frames
    }

    pub fn designated_measurements(&self) -> &[Measurement<S>] {
        &self.measurements
    }

    pub fn frame_search_limit(&self) -> usize {
        self.frame_search_limit
    }

    /// Extreme rays are known exhaustively (not just designated).
    pub fn has_finite_extreme_states(&self) -> bool {
        self.states.is_polyhedral()
    }

    pub fn normalization(&self, omega: &[S]) -> Result<S> {
        check_dim(self.dim(), omega.len())?;
        Ok(dot(&self.unit, omega))
    }

    pub fn normalize(&self, omega: &[S]) -> Result<Vec<S>> {
        let n = self.normalization(omega)?;
        if !n.is_pos() {
            return Err(Error::Invalid("state with nonpositive normalization".into()));
        }
        let inv = S::one().div_r(&n);
        Ok(omega.iter().map(|x| x.mul_r(&inv)).collect())
    }

    /// Normalized extreme states, in generator order (designated ones for PSD cones).
    pub fn extreme_states(&self) -> Vec<Vec<S>> {
        self.states.extreme_rays().iter().map(|r| self.normalize(r).expect("positive on generators")).collect()
    }

    /// Pure effect rays (designated ones for PSD cones), unscaled.
    pub fn pure_effect_rays(&self) -> Vec<Vec<S>> {
        self.effects.extreme_rays()
    }

    pub fn is_state(&self, omega: &[S]) -> Result<bool> {
        self.states.contains(omega)
    }

    /// `e ∈ E_A` and `u − e ∈ E_A`.
    pub fn is_valid_effect(&self, e: &[S]) -> Result<bool> {
        Ok(self.effects.contains(e)? && self.effects.contains(&sub(&self.unit, e))?)
    }

    pub fn is_pure_state(&self, omega: &[S]) -> Result<bool> {
        if !self.normalization(omega)?.approx_eq(&S::one()) {
            return Err(Error::Invalid("purity test on an unnormalized state".into()));
        }
        self.states.is_extreme(omega)
    }

    pub fn is_pure_effect(&self, e: &[S]) -> Result<bool> {
        if !self.is_valid_effect(e)? {
            return Err(Error::Invalid("purity test on an invalid effect".into()));
        }
        self.effects.is_extreme(e)
    }

    /// Full invariant check; LP-heavy, so not run at construction.
    pub fn check_invariants(&self) -> Result<InvariantReport> {
        let mut failures = Vec::new();
        let sgens = self.states.generators();
        let egens = self.effects.generators();
        let normalizable = sgens.iter().all(|g| dot(&self.unit, g).is_pos());
        if !normalizable {
            failures.push("unit effect not positive on every state generator".into());
        }
        let unit_is_effect = self.effects.contains(&self.unit)?;
        if !unit_is_effect {
            failures.push("unit effect outside the effect cone".into());
        }
        let bad_pair = egens
            .par_iter()
            .enumerate()
            .find_map_first(|(i, e)| sgens.iter().position(|g| dot(e, g).is_neg()).map(|j| (i, j)));
        let effects_nonnegative = bad_pair.is_none();
        if let Some((i, j)) = bad_pair {
            failures.push(format!("effect generator {i} negative on state generator {j}"));
        }
        let mut order_unit = true;
        for (i, e) in egens.iter().enumerate() {
            // λ = max over normalized generators bounds e by λ·u on the state cone
            let lambda = sgens
                .iter()
                .map(|g| dot(e, g).div_r(&dot(&self.unit, g)))
                .fold(S::zero(), |a, b| if b > a { b } else { a });
            let lambda = lambda.add_r(&S::one());
            let gap: Vec<S> = self.unit.iter().zip(e).map(|(u, x)| u.mul_r(&lambda).sub_r(x)).collect();
            if !self.effects.contains(&gap)? {
                order_unit = false;
                failures.push(format!("effect generator {i} not bounded by a multiple of the unit"));
                break;
            }
        }
        let (states_pointed, states_generating) = match &self.states {
            ConeModel::Polyhedral(c) => (c.is_pointed()?, c.is_generating()),
            ConeModel::Psd { designated, .. } => {
                (true, designated.dim() > crate::cone::MAX_LP_DIM || designated.is_generating())
            }
        };
        if !states_pointed {
            failures.push("state cone not pointed".into());
        }
        if !states_generating {
            failures.push("state cone not generating".into());
        }
        Ok(InvariantReport {
            normalizable,
            unit_is_effect,
            effects_nonnegative,
            order_unit,
            states_pointed,
            states_generating,
            failures,
        })
    }

    fn first_state_failure(&self, m: &Matrix<S>) -> Result<Option<String>> {
        let gens = self.states.generators();
        let hit = gens.par_iter().enumerate().map(|(i, g)| -> Result<Option<String>> {
            let img = m.mul_vec(g)?;
            Ok((!self.states.contains(&img)?).then(|| format!("image of state generator {i} is not a state")))
        });
        first_some(hit.collect())
    }

    fn first_effect_failure(&self, m: &Matrix<S>) -> Result<Option<String>> {
        let gens = self.effects.generators();
        let hit = gens.par_iter().enumerate().map(|(i, e)| -> Result<Option<String>> {
            let img = m.vec_mul(e)?;
            Ok((!self.effects.contains(&img)?)
                .then(|| format!("pullback of effect generator {i} is not an effect")))
        });
        if let Some(f) = first_some(hit.collect())? {
            return Ok(Some(f));
        }
        let ut = m.vec_mul(&self.unit)?;
        if !self.is_valid_effect(&ut)? {
            return Ok(Some("pullback of the unit effect is not a valid effect".into()));
        }
        Ok(None)
    }

    /// Populates the state, effect and reversibility flags of `t`.
    pub fn validate_transformation(&self, t: &Matrix<S>) -> Result<LinearMapOnSystem<S>> {
        crate::numeric::require_square(t, self.dim())?;
        let sf = self.first_state_failure(t)?;
        let ef = self.first_effect_failure(t)?;
        let inverse = t.inverse();
        let mut failure = sf.clone().or(ef.clone());
        let reversible = match &inverse {
            Some(inv) if sf.is_none() && ef.is_none() => {
                let f = self.first_state_failure(inv)?.or(self.first_effect_failure(inv)?);
                if let Some(f) = &f {
                    failure = Some(format!("inverse: {f}"));
                }
                f.is_none()
            }
            None => {
                failure = failure.or(Some("matrix is singular".into()));
                false
            }
            _ => false,
        };
        Ok(LinearMapOnSystem {
            matrix: t.clone(),
            inverse,
            preserves_states: sf.is_none(),
            preserves_effects: ef.is_none(),
            reversible,
            failure,
        })
    }
}

fn first_some(results: Vec<Result<Option<String>>>) -> Result<Option<String>> {
    for r in results {
        if let Some(s) = r? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Cone;
    use crate::Q;

    fn cpt3() -> GptSystem<Q> {
        GptSystem::new(
            "cpt3",
            ConeModel::Polyhedral(Cone::positive_orthant(3)),
            ConeModel::Polyhedral(Cone::positive_orthant(3)),
            vec![Q::from_i64(1); 3],
        )
        .unwrap()
    }

    fn v(xs: &[(i64, i64)]) -> Vec<Q> {
        xs.iter().map(|&(n, d)| Q::ratio(n, d)).collect()
    }

    #[test]
    fn purity_in_the_simplex() {
        let s = cpt3();
        assert!(s.is_pure_state(&v(&[(1, 1), (0, 1), (0, 1)])).unwrap());
        assert!(!s.is_pure_state(&v(&[(1, 3), (1, 3), (1, 3)])).unwrap());
        assert!(s.is_pure_state(&v(&[(1, 2), (1, 2), (0, 1)])).is_ok());
        assert!(s.is_pure_state(&v(&[(1, 1), (1, 1), (0, 1)])).is_err());
        assert!(s.is_pure_effect(&v(&[(1, 1), (0, 1), (0, 1)])).unwrap());
        assert!(s.check_invariants().unwrap().ok());
    }

    #[test]
    fn transformation_flags() {
        let s = cpt3();
        let id = s.validate_transformation(&Matrix::identity(3)).unwrap();
        assert!(id.preserves_states && id.preserves_effects && id.reversible);
        let cyc = s.validate_transformation(&Matrix::permutation(&[1, 2, 0])).unwrap();
        assert!(cyc.reversible);
        // doubly stochastic but not invertible within the simplex
        let half = Q::ratio(1, 2);
        let z = Q::from_i64(0);
        let avg = Matrix::from_rows(&[
            vec![half.clone(), half.clone(), z.clone()],
            vec![half.clone(), half.clone(), z.clone()],
            vec![z.clone(), z.clone(), Q::from_i64(1)],
        ])
        .unwrap();
        let t = s.validate_transformation(&avg).unwrap();
        assert!(t.preserves_states && t.preserves_effects && !t.reversible);
        let neg = Matrix::from_rows(&[
            vec![Q::from_i64(0), Q::from_i64(1), z.clone()],
            vec![Q::from_i64(1), Q::from_i64(0), z.clone()],
            vec![z.clone(), z.clone(), Q::from_i64(-1)],
        ])
        .unwrap();
        let t = s.validate_transformation(&neg).unwrap();
        assert!(!t.preserves_states && !t.reversible);
    }
}
