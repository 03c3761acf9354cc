//! Frames, MCI-frames and refined measurements.

use crate::error::{Error, Result};
use crate::gpt::{GptSystem, Measurement};
use crate::lp::{self, Feasibility, LpResult};
use crate::numeric::{approx_eq_vec, dot, scale, sub, sum_vecs, Matrix, Scalar};

/// Pure states with a measurement satisfying `e_i(ω_j) = δ_ij`.
///
/// A refined measurement may carry extra outcomes beyond the frame size;
/// those vanish on every frame state.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameWithMeasurement<S> {
    pub states: Vec<Vec<S>>,
    /// Positions in [`GptSystem::extreme_states`], when found by search.
    pub indices: Vec<usize>,
    pub measurement: Measurement<S>,
    pub maximal: bool,
    pub mci: bool,
}

impl<S: Scalar> FrameWithMeasurement<S> {
    pub fn designated(states: Vec<Vec<S>>, measurement: Measurement<S>, mci: bool) -> Self {
        FrameWithMeasurement { states, indices: Vec::new(), measurement, maximal: true, mci }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `[e_i(ω_j)]` over the first `len()` effects.
    pub fn gram(&self) -> Vec<Vec<S>> {
        self.measurement.effects.iter().map(|e| self.states.iter().map(|w| dot(e, w)).collect()).collect()
    }

    pub fn check_duality(&self) -> Result<()> {
        let k = self.states.len();
        if self.measurement.len() < k {
            return Err(Error::Invalid("frame has fewer effects than states".into()));
        }
        for (i, row) in self.gram().iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j { S::one() } else { S::zero() };
                if !x.approx_eq(&want) {
                    return Err(Error::Invalid(format!("e_{i}(ω_{j}) = {x}, expected {want}")));
                }
            }
        }
        Ok(())
    }

    /// The first `len()` effects, the ones paired with frame states.
    pub fn distinguishing_effects(&self) -> &[Vec<S>] {
        &self.measurement.effects[..self.states.len()]
    }
}

/// A pure state on which a distinguishing effect is indeterminate.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiClassicalViolation<S> {
    pub state_index: usize,
    pub state: Vec<S>,
    pub effect_index: usize,
    pub value: S,
}

impl<S: Scalar> GptSystem<S> {
    fn require_searchable(&self) -> Result<Vec<Vec<S>>> {
        if !self.has_finite_extreme_states() {
            return Err(Error::Unsupported(format!(
                "{}: extreme states form a continuum; use designated frames",
                self.name()
            )));
        }
        let states = self.extreme_states();
        if states.len() > self.frame_search_limit() {
            return Err(Error::Unsupported(format!(
                "{}: {} extreme states exceed the frame-search limit {}",
                self.name(),
                states.len(),
                self.frame_search_limit()
            )));
        }
        Ok(states)
    }

    /// LP for effects `e_i ∈ E_A` with `Σ e_i = u` and `e_i(ω_j) = δ_ij`.
    ///
    /// Effect generators are nonnegative on states, so `e_i` can only use
    /// generators vanishing on every other frame state.
    pub fn distinguishing_measurement(&self, frame: &[Vec<S>]) -> Result<Option<Measurement<S>>> {
        let gens = self.effects().generators();
        let (k, dim) = (frame.len(), self.dim());
        if k == 0 {
            return Ok(None);
        }
        let vals: Vec<Vec<S>> = gens.iter().map(|g| frame.iter().map(|w| dot(g, w)).collect()).collect();
        let cols: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let vals = &vals;
                (0..gens.len())
                    .filter(move |&g| (0..k).all(|j| j == i || vals[g][j].is_negligible()))
                    .map(move |g| (i, g))
            })
            .collect();
        if (0..k).any(|i| !cols.iter().any(|&(ii, g)| ii == i && vals[g][i].is_pos())) {
            return Ok(None);
        }
        let a = Matrix::from_fn(dim + k, cols.len(), |r, c| {
            let (i, g) = cols[c];
            if r < dim {
                gens[g][r].clone()
            } else if r - dim == i {
                vals[g][i].clone()
            } else {
                S::zero()
            }
        });
        let mut b = self.unit().to_vec();
        b.extend((0..k).map(|_| S::one()));
        match lp::feasible(&a, &b)? {
            Feasibility::Infeasible(_) => Ok(None),
            Feasibility::Feasible(x) => {
                let mut effects = vec![vec![S::zero(); dim]; k];
                for (c, &(i, g)) in cols.iter().enumerate() {
                    crate::numeric::axpy(&mut effects[i], &x[c], &gens[g]);
                }
                Ok(Some(Measurement::new(self.unit(), effects)?))
            }
        }
    }

    /// All frames of maximal size among the extreme states.
    pub fn find_maximal_frames(&self) -> Result<Vec<FrameWithMeasurement<S>>> {
        if !self.has_finite_extreme_states() {
            if self.designated_frames().is_empty() {
                return Err(Error::Unsupported(format!("{}: no designated frames", self.name())));
            }
            return Ok(self.designated_frames().to_vec());
        }
        let states = self.require_searchable()?;
        let n = states.len();
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let ok = self.distinguishing_measurement(&[states[i].clone(), states[j].clone()])?.is_some();
                adj[i][j] = ok;
                adj[j][i] = ok;
            }
        }
        let cliques = all_cliques(&adj);
        let top = cliques.iter().map(|c| c.len()).max().unwrap_or(1).min(self.dim());
        for size in (1..=top).rev() {
            let mut found = Vec::new();
            for c in cliques.iter().filter(|c| c.len() == size) {
                let fs: Vec<Vec<S>> = c.iter().map(|&i| states[i].clone()).collect();
                if let Some(m) = self.distinguishing_measurement(&fs)? {
                    found.push(FrameWithMeasurement {
                        states: fs,
                        indices: c.clone(),
                        measurement: m,
                        maximal: true,
                        mci: false,
                    });
                }
            }
            if !found.is_empty() {
                return Ok(found);
            }
        }
        Ok(Vec::new())
    }

    /// Refined measurements distinguishing `frame`, in selection order.
    pub fn refined_measurements_for(&self, frame: &[Vec<S>]) -> Result<Vec<Measurement<S>>> {
        let rays = self.pure_effect_rays();
        let k = frame.len();
        let vals: Vec<Vec<S>> = rays.iter().map(|r| frame.iter().map(|w| dot(r, w)).collect()).collect();
        let candidates: Vec<Vec<usize>> = (0..k)
            .map(|i| {
                (0..rays.len())
                    .filter(|&r| vals[r][i].is_pos() && (0..k).all(|j| j == i || vals[r][j].is_negligible()))
                    .collect()
            })
            .collect();
        let extras: Vec<usize> = (0..rays.len()).filter(|&r| vals[r].iter().all(|x| x.is_negligible())).collect();
        let mut out = Vec::new();
        let mut pick = vec![0usize; k];
        if candidates.iter().any(|c| c.is_empty()) {
            return Ok(out);
        }
        loop {
            let chosen: Vec<Vec<S>> = (0..k)
                .map(|i| {
                    let r = candidates[i][pick[i]];
                    scale(&rays[r], &S::one().div_r(&vals[r][i]))
                })
                .collect();
            let residual = sub(self.unit(), &sum_vecs(self.dim(), &chosen));
            let extra_effects = self.decompose_residual(&residual, &extras, &rays)?;
            if let Some(extra) = extra_effects {
                let mut effects = chosen;
                effects.extend(extra);
                out.push(Measurement::new(self.unit(), effects)?);
            }
            // odometer over candidate selections
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < candidates[i].len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    }

    fn decompose_residual(&self, residual: &[S], extras: &[usize], rays: &[Vec<S>]) -> Result<Option<Vec<Vec<S>>>> {
        if residual.iter().all(|x| x.is_negligible()) {
            return Ok(Some(Vec::new()));
        }
        if extras.is_empty() {
            return Ok(None);
        }
        let gens: Vec<Vec<S>> = extras.iter().map(|&r| rays[r].clone()).collect();
        match crate::cone::membership_lp(self.dim(), &gens, residual)? {
            crate::cone::MembershipVerdict::Inside(w) => Ok(Some(
                w.iter()
                    .zip(&gens)
                    .filter(|(x, _)| x.is_pos())
                    .map(|(x, g)| scale(g, x))
                    .collect(),
            )),
            crate::cone::MembershipVerdict::Outside(_) => Ok(None),
        }
    }

    /// Maximal frames admitting a refined distinguishing measurement; one entry
    /// per (frame, refined measurement) pair.
    pub fn find_mci_frames(&self) -> Result<Vec<FrameWithMeasurement<S>>> {
        if !self.has_finite_extreme_states() {
            let fs: Vec<_> = self.find_maximal_frames()?.into_iter().filter(|f| f.mci).collect();
            return Ok(fs);
        }
        let mut out = Vec::new();
        for f in self.find_maximal_frames()? {
            for m in self.refined_measurements_for(&f.states)? {
                out.push(FrameWithMeasurement { measurement: m, mci: true, ..f.clone() });
            }
        }
        Ok(out)
    }

    /// First pure state making a distinguishing effect indeterminate.
    pub fn quasi_classical_violation(&self, frame: &FrameWithMeasurement<S>) -> Result<Option<QuasiClassicalViolation<S>>> {
        if !frame.mci {
            return Err(Error::Contract("quasi-classicality is defined for MCI-frames".into()));
        }
        for (si, nu) in self.extreme_states().iter().enumerate() {
            for (ei, e) in frame.distinguishing_effects().iter().enumerate() {
                let v = dot(e, nu);
                if !(v.is_negligible() || v.approx_eq(&S::one())) {
                    return Ok(Some(QuasiClassicalViolation {
                        state_index: si,
                        state: nu.clone(),
                        effect_index: ei,
                        value: v,
                    }));
                }
            }
        }
        Ok(None)
    }

    pub fn is_quasi_classical(&self, frame: &FrameWithMeasurement<S>) -> Result<bool> {
        Ok(self.quasi_classical_violation(frame)?.is_none())
    }

    /// `Σ λ_i r_i = u` with every `λ_i > 0`, or `None`.
    fn positive_unit_decomposition(&self, rays: &[&Vec<S>]) -> Result<Option<Vec<S>>> {
        // variables μ_i, t >= 0 with λ_i = μ_i + t; maximize t
        let d = rays.len();
        let dim = self.dim();
        let a = Matrix::from_fn(dim, d + 1, |r, c| {
            if c < d {
                rays[c][r].clone()
            } else {
                rays.iter().fold(S::zero(), |acc, g| acc.add_r(&g[r]))
            }
        });
        let mut cost = vec![S::zero(); d + 1];
        cost[d] = -S::one();
        // bound t to keep the LP bounded: Σμ + d·t fixed by the unit equation
        // whenever the rays are independent; otherwise cap t by one extra row
        let mut a_rows = a.row_vecs();
        let mut b = self.unit().to_vec();
        let mut cap = vec![S::zero(); d + 2];
        cap[d] = S::one();
        cap[d + 1] = S::one();
        for row in a_rows.iter_mut() {
            row.push(S::zero());
        }
        a_rows.push(cap);
        b.push(S::one());
        cost.push(S::zero());
        let a = Matrix::from_rows(&a_rows)?;
        match lp::minimize(&cost, &a, &b)? {
            LpResult::Optimal { x, value } if value.is_neg() => {
                Ok(Some((0..d).map(|i| x[i].add_r(&x[d])).collect()))
            }
            _ => Ok(None),
        }
    }

    /// A refined `base.len()`-outcome measurement not a relabelling of `base`.
    pub fn find_inequivalent_refined_measurement(&self, base: &Measurement<S>) -> Result<Option<Measurement<S>>> {
        let d = base.len();
        if !self.has_finite_extreme_states() {
            if self.designated_measurements().is_empty() {
                return Err(Error::Unsupported(format!("{}: no designated measurements", self.name())));
            }
            return Ok(self
                .designated_measurements()
                .iter()
                .find(|m| m.len() == d && m.differs_from(base))
                .cloned());
        }
        let rays = self.pure_effect_rays();
        let mut combo: Vec<usize> = (0..d).collect();
        if d > rays.len() {
            return Ok(None);
        }
        loop {
            let pick: Vec<&Vec<S>> = combo.iter().map(|&i| &rays[i]).collect();
            if let Some(l) = self.positive_unit_decomposition(&pick)? {
                let effects: Vec<Vec<S>> = pick.iter().zip(&l).map(|(r, x)| scale(r, x)).collect();
                if approx_eq_vec(&sum_vecs(self.dim(), &effects), self.unit()) {
                    let m = Measurement::new(self.unit(), effects)?;
                    if m.differs_from(base) {
                        return Ok(Some(m));
                    }
                }
            }
            if !next_combination(&mut combo, rays.len()) {
                return Ok(None);
            }
        }
    }
}

/// Every clique of an undirected graph, each sorted, in lexicographic order.
pub(crate) fn all_cliques(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn rec(adj: &[Vec<bool>], cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
        for v in start..adj.len() {
            if cur.iter().all(|&u| adj[u][v]) {
                cur.push(v);
                out.push(cur.clone());
                rec(adj, cur, v + 1, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(adj, &mut Vec::new(), 0, &mut out);
    out
}

pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cliques_of_a_path() {
        let adj = vec![vec![false, true, false], vec![true, false, true], vec![false, true, false]];
        assert_eq!(all_cliques(&adj), vec![vec![0], vec![0, 1], vec![1], vec![1, 2], vec![2]]);
    }

    #[test]
    fn combinations() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen.last().unwrap(), &vec![2, 3]);
    }
}
