//! Composite systems: product maps, the composition axioms, conditional states.

use serde::Serialize;

use crate::cone::Cone;
use crate::error::{check_dim, Error, Result};
use crate::gpt::{ConeModel, GptSystem};
use crate::numeric::{dot, independent_subset, kron, scale, solve_linear_system, sub, CMatrix, Matrix, Scalar};
use crate::quantum;
use crate::theories;
use crate::Q;

/// Largest number of factor-generator tuples checked exhaustively.
pub const MAX_PRODUCT_TUPLES: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MinTensor,
    MaxTensor,
    Explicit,
}

/// Product map of one association stage: `(x, y) ↦ P (x ⊗ y)`, with `P`
/// omitted when it is the identity.
#[derive(Clone, Debug)]
pub struct BilinearMap<S> {
    pub left_dim: usize,
    pub right_dim: usize,
    pub matrix: Option<Matrix<S>>,
}

impl<S: Scalar> BilinearMap<S> {
    pub fn coordinate(left_dim: usize, right_dim: usize) -> Self {
        BilinearMap { left_dim, right_dim, matrix: None }
    }

    pub fn out_dim(&self) -> usize {
        self.matrix.as_ref().map_or(self.left_dim * self.right_dim, |m| m.rows())
    }

    pub fn apply(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        check_dim(self.left_dim, x.len())?;
        check_dim(self.right_dim, y.len())?;
        let k = kron(x, y);
        match &self.matrix {
            None => Ok(k),
            Some(m) => m.mul_vec(&k),
        }
    }

    fn scaled(&self, c: &S) -> Self {
        let n = self.left_dim * self.right_dim;
        let base = self.matrix.clone().unwrap_or_else(|| Matrix::identity(n));
        let m = Matrix::from_fn(base.rows(), base.cols(), |i, j| base.get(i, j).mul_r(c));
        BilinearMap { matrix: Some(m), ..*self }
    }
}

/// An underlying system with its factors and left-associated product maps:
/// stage `s` combines the first `s+1` factors with factor `s+1`.
#[derive(Clone, Debug)]
pub struct CompositeSystem<S: Scalar> {
    pub system: GptSystem<S>,
    pub factors: Vec<GptSystem<S>>,
    pub method: Method,
    pub state_maps: Vec<BilinearMap<S>>,
    pub effect_maps: Vec<BilinearMap<S>>,
    /// How permutations of frame labels lift to transformations, if known.
    pub lift: Option<LabelLift>,
}

/// Lift of a permutation of product-frame labels to a transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelLift {
    /// Permutation of the outcome basis.
    Classical,
    /// Adjoint action of the computational-basis permutation unitary.
    Qubits,
    /// A valid ontic permutation moving the Z-frame blocks as prescribed.
    Toy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemResult {
    pub item: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionReport {
    pub system: String,
    pub items: Vec<ItemResult>,
}

impl CompositionReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, name: &str) -> Option<&ItemResult> {
        self.items.iter().find(|i| i.item == name)
    }

    pub fn first_failure(&self) -> Option<&ItemResult> {
        self.items.iter().find(|i| !i.passed)
    }
}

fn coordinate_maps<S: Scalar>(factors: &[GptSystem<S>]) -> Vec<BilinearMap<S>> {
    let mut left = factors[0].dim();
    factors[1..]
        .iter()
        .map(|f| {
            let m = BilinearMap::coordinate(left, f.dim());
            left *= f.dim();
            m
        })
        .collect()
}

fn kron_all<S: Scalar>(vs: &[&[S]]) -> Vec<S> {
    vs[1..].iter().fold(vs[0].to_vec(), |acc, v| kron(&acc, v))
}

fn tuples(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &c in counts {
        out = out.into_iter().flat_map(|t| (0..c).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

fn product_rays<S: Scalar>(lists: &[Vec<Vec<S>>]) -> Vec<Vec<S>> {
    let counts: Vec<usize> = lists.iter().map(|l| l.len()).collect();
    tuples(&counts)
        .into_iter()
        .map(|t| {
            let parts: Vec<&[S]> = t.iter().enumerate().map(|(k, &i)| lists[k][i].as_slice()).collect();
            kron_all(&parts)
        })
        .collect()
}

fn joined_name<S: Scalar>(factors: &[GptSystem<S>]) -> String {
    factors.iter().map(|f| f.name()).collect::<Vec<_>>().join("⊗")
}

/// Min- or max-tensor composite of systems with finite extreme-ray lists.
pub fn compose<S: Scalar>(factors: Vec<GptSystem<S>>, method: Method) -> Result<CompositeSystem<S>> {
    if factors.len() < 2 {
        return Err(Error::Invalid("composition needs at least two factors".into()));
    }
    if method == Method::Explicit {
        return Err(Error::Invalid("explicit composites need caller-supplied cones".into()));
    }
    if let Some(f) = factors.iter().find(|f| !f.has_finite_extreme_states()) {
        return Err(Error::Unsupported(format!("{}: no finite extreme-ray list", f.name())));
    }
    let dim: usize = factors.iter().map(|f| f.dim()).product();
    let units: Vec<&[S]> = factors.iter().map(|f| f.unit()).collect();
    let unit = kron_all(&units);
    let (states, effects) = match method {
        Method::MinTensor => {
            let p = product_rays(&factors.iter().map(|f| f.extreme_states()).collect::<Vec<_>>());
            let sc = Cone::new(dim, p)?;
            let ec = sc.dual()?;
            (sc, ec)
        }
        _ => {
            let p = product_rays(&factors.iter().map(|f| f.pure_effect_rays()).collect::<Vec<_>>());
            let ec = Cone::new(dim, p)?;
            let sc = ec.dual()?;
            (sc, ec)
        }
    };
    let tag = if method == Method::MinTensor { "min" } else { "max" };
    let system = GptSystem::new(
        format!("{}[{tag}]", joined_name(&factors)),
        ConeModel::Polyhedral(states),
        ConeModel::Polyhedral(effects),
        unit,
    )?;
    let maps = coordinate_maps(&factors);
    let c = CompositeSystem { system, factors, method, state_maps: maps.clone(), effect_maps: maps, lift: None };
    c.require_valid()
}

/// Composite with caller-supplied cones and product maps, validated.
pub fn compose_explicit<S: Scalar>(
    system: GptSystem<S>,
    factors: Vec<GptSystem<S>>,
    state_maps: Vec<BilinearMap<S>>,
    effect_maps: Vec<BilinearMap<S>>,
) -> Result<CompositeSystem<S>> {
    let c = CompositeSystem::from_parts(system, factors, state_maps, effect_maps)?;
    c.require_valid()
}

#[derive(Clone, Copy)]
enum Side {
    Density,
    Effect,
}

fn hermitian_stage(left: usize, right: usize, role: Side) -> Result<BilinearMap<Q>> {
    let (nl, nr) = (quantum::order_from_dim(left)?, quantum::order_from_dim(right)?);
    let to_matrix = |n: usize, v: &[Q]| match role {
        Side::Density => quantum::density_matrix(n, v),
        Side::Effect => quantum::effect_matrix(n, v),
    };
    let basis = |d: usize, i: usize| -> Vec<Q> { (0..d).map(|k| if k == i { Q::from_i64(1) } else { Q::from_i64(0) }).collect() };
    let mut cols = Vec::with_capacity(left * right);
    for i in 0..left {
        let a: CMatrix<Q> = to_matrix(nl, &basis(left, i))?;
        for j in 0..right {
            let b = to_matrix(nr, &basis(right, j))?;
            let m = a.kron(&b);
            cols.push(match role {
                Side::Density => quantum::density_coords(&m),
                Side::Effect => quantum::effect_coords(&m),
            });
        }
    }
    Ok(BilinearMap { left_dim: left, right_dim: right, matrix: Some(Matrix::from_columns(&cols)?) })
}

/// `qubits` copies of `qt(2)` composed by the matrix tensor product into
/// the register of [`theories::qt_register`].
pub fn qt_composite(qubits: usize) -> Result<CompositeSystem<Q>> {
    if qubits < 2 {
        return Err(Error::Invalid("composition needs at least two factors".into()));
    }
    let factors = (0..qubits).map(|_| theories::qt(2)).collect::<Result<Vec<_>>>()?;
    let mut sm = Vec::new();
    let mut em = Vec::new();
    for s in 1..qubits {
        let left = 1usize << (2 * s);
        sm.push(hermitian_stage(left, 4, Side::Density)?);
        em.push(hermitian_stage(left, 4, Side::Effect)?);
    }
    Ok(compose_explicit(theories::qt_register(qubits)?, factors, sm, em)?.with_lift(LabelLift::Qubits))
}

/// Toy-model systems composed by the Cartesian product of ontic spaces.
pub fn stm_composite(bits: usize) -> Result<CompositeSystem<Q>> {
    if bits < 2 {
        return Err(Error::Invalid("composition needs at least two factors".into()));
    }
    let factors = (0..bits).map(|_| crate::stm::stm_system(1)).collect::<Result<Vec<_>>>()?;
    let maps = coordinate_maps(&factors);
    Ok(compose_explicit(crate::stm::stm_system(bits)?, factors, maps.clone(), maps)?.with_lift(LabelLift::Toy))
}

/// `n` copies of `cpt(d)` under the min tensor, which is `cpt(dⁿ)`.
pub fn cpt_composite(d: usize, n: usize) -> Result<CompositeSystem<Q>> {
    let factors = (0..n).map(|_| theories::cpt(d)).collect::<Result<Vec<_>>>()?;
    Ok(compose(factors, Method::MinTensor)?.with_lift(LabelLift::Classical))
}

/// Two gbits under the max tensor.
pub fn boxworld_pair() -> Result<CompositeSystem<Q>> {
    compose(vec![theories::gbit(), theories::gbit()], Method::MaxTensor)
}

/// Negative control: a two-factor composite whose effect product map is
/// doubled, so `u_A ⊙ u_B` exceeds the composite unit.
pub fn corrupted_composite() -> Result<CompositeSystem<Q>> {
    let c = compose(vec![theories::cpt(2)?, theories::cpt(2)?], Method::MinTensor)?;
    let effect_maps = c.effect_maps.iter().map(|m| m.scaled(&Q::from_i64(2))).collect();
    let system = c.system.clone().rename("cpt(2)⊗cpt(2)[corrupted]");
    CompositeSystem::from_parts(system, c.factors, c.state_maps, effect_maps)
}

impl<S: Scalar> CompositeSystem<S> {
    pub fn with_lift(mut self, lift: LabelLift) -> Self {
        self.lift = Some(lift);
        self
    }

    /// Unvalidated explicit composite.
    pub fn from_parts(
        system: GptSystem<S>,
        factors: Vec<GptSystem<S>>,
        state_maps: Vec<BilinearMap<S>>,
        effect_maps: Vec<BilinearMap<S>>,
    ) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::Invalid("composition needs at least two factors".into()));
        }
        for maps in [&state_maps, &effect_maps] {
            if maps.len() != factors.len() - 1 {
                return Err(Error::Invalid("one product map per association stage".into()));
            }
            let mut left = factors[0].dim();
            for (m, f) in maps.iter().zip(&factors[1..]) {
                check_dim(left, m.left_dim)?;
                check_dim(f.dim(), m.right_dim)?;
                left = m.out_dim();
            }
            check_dim(system.dim(), left)?;
        }
        Ok(CompositeSystem { system, factors, method: Method::Explicit, state_maps, effect_maps, lift: None })
    }

    fn require_valid(self) -> Result<Self> {
        let r = self.validate_products()?;
        match r.first_failure() {
            Some(f) => Err(Error::Composition { item: f.item, detail: f.detail.clone().unwrap_or_default() }),
            None => Ok(self),
        }
    }

    fn fold(maps: &[BilinearMap<S>], locals: &[Vec<S>]) -> Result<Vec<S>> {
        if locals.len() != maps.len() + 1 {
            return Err(Error::Invalid(format!("expected {} local objects, got {}", maps.len() + 1, locals.len())));
        }
        let mut acc = locals[0].clone();
        for (m, x) in maps.iter().zip(&locals[1..]) {
            acc = m.apply(&acc, x)?;
        }
        Ok(acc)
    }

    /// `ω₁ ⊙ … ⊙ ω_N`, left-associated.
    pub fn product_state(&self, locals: &[Vec<S>]) -> Result<Vec<S>> {
        Self::fold(&self.state_maps, locals)
    }

    pub fn product_effect(&self, locals: &[Vec<S>]) -> Result<Vec<S>> {
        Self::fold(&self.effect_maps, locals)
    }

    /// Product of a state on the first `s+1` factors with a state on factor
    /// `s+1`, through stage `s`.
    pub fn stage_state(&self, stage: usize, left: &[S], right: &[S]) -> Result<Vec<S>> {
        self.state_maps.get(stage).ok_or_else(|| Error::Invalid(format!("no stage {stage}")))?.apply(left, right)
    }

    fn generator_lists(&self) -> (Vec<Vec<Vec<S>>>, Vec<Vec<Vec<S>>>) {
        let states = self.factors.iter().map(|f| f.extreme_states()).collect();
        let effects = self.factors.iter().map(|f| f.pure_effect_rays()).collect();
        (states, effects)
    }

    fn tuples_of(&self, lists: &[Vec<Vec<S>>]) -> Vec<Vec<Vec<S>>> {
        let counts: Vec<usize> = lists.iter().map(|l| l.len()).collect();
        let total: usize = counts.iter().product();
        let all = tuples(&counts);
        let step = total.div_ceil(MAX_PRODUCT_TUPLES).max(1);
        all.into_iter()
            .step_by(step)
            .map(|t| t.iter().enumerate().map(|(k, &i)| lists[k][i].clone()).collect())
            .collect()
    }

    /// Items i–iv: product states normalized and allowed, product effects
    /// allowed and bounded by the unit, factorization, purity of products.
    fn validate_products(&self) -> Result<CompositionReport> {
        let sys = &self.system;
        let (sl, el) = self.generator_lists();
        let st = self.tuples_of(&sl);
        let et = self.tuples_of(&el);
        let mut items = Vec::new();

        let mut fail = None;
        for t in &st {
            let p = self.product_state(t)?;
            if !sys.normalization(&p)?.approx_eq(&S::one()) {
                fail = Some(format!("product of normalized states has norm {}", sys.normalization(&p)?));
            } else if !sys.is_state(&p)? {
                fail = Some("product state outside the composite state cone".into());
            }
            if fail.is_some() {
                break;
            }
        }
        items.push(ItemResult { item: "i", passed: fail.is_none(), checked: st.len(), detail: fail });

        let mut fail = None;
        for t in &et {
            if !sys.effects().contains(&self.product_effect(t)?)? {
                fail = Some("product effect outside the composite effect cone".into());
                break;
            }
        }
        if fail.is_none() {
            let units: Vec<Vec<S>> = self.factors.iter().map(|f| f.unit().to_vec()).collect();
            let uu = self.product_effect(&units)?;
            if !sys.effects().contains(&sub(sys.unit(), &uu))? {
                fail = Some("product of unit effects exceeds the composite unit".into());
            }
        }
        items.push(ItemResult { item: "ii", passed: fail.is_none(), checked: et.len() + 1, detail: fail });

        // bilinearity reduces factorization to P_effᵀ P_st = I per stage
        let mut fail = None;
        for (s, (ms, me)) in self.state_maps.iter().zip(&self.effect_maps).enumerate() {
            let n = ms.left_dim * ms.right_dim;
            let ok = match (&ms.matrix, &me.matrix) {
                (None, None) => true,
                (a, b) => {
                    let id = Matrix::identity(n);
                    let a = a.clone().unwrap_or_else(|| id.clone());
                    let b = b.clone().unwrap_or(id);
                    check_dim(a.rows(), b.rows())?;
                    b.transpose().matmul(&a)?.is_identity()
                }
            };
            if !ok {
                fail = Some(format!("stage {s}: (e⊙f)(ω⊙φ) ≠ e(ω)·f(φ)"));
                break;
            }
        }
        items.push(ItemResult {
            item: "iii",
            passed: fail.is_none(),
            checked: self.state_maps.len(),
            detail: fail,
        });

        let mut fail = None;
        for t in &st {
            if !sys.states().is_extreme(&self.product_state(t)?)? {
                fail = Some("product of pure states is not pure".into());
                break;
            }
        }
        if fail.is_none() {
            for t in &et {
                if !sys.effects().is_extreme(&self.product_effect(t)?)? {
                    fail = Some("product of pure effects is not pure".into());
                    break;
                }
            }
        }
        items.push(ItemResult { item: "iv", passed: fail.is_none(), checked: st.len() + et.len(), detail: fail });
        Ok(CompositionReport { system: sys.name().to_string(), items })
    }

    fn require_bipartite(&self) -> Result<()> {
        if self.factors.len() != 2 {
            return Err(Error::Unsupported("conditional objects are built for two-factor composites".into()));
        }
        Ok(())
    }

    /// `ω_A ↦ e_AB(ω_A ⊙ ω_B)` as a functional on `A`.
    pub fn conditional_effect(&self, e_ab: &[S], omega_b: &[S]) -> Result<Vec<S>> {
        self.require_bipartite()?;
        let da = self.factors[0].dim();
        (0..da)
            .map(|i| {
                let mut b = vec![S::zero(); da];
                b[i] = S::one();
                Ok(dot(e_ab, &self.product_state(&[b, omega_b.to_vec()])?))
            })
            .collect()
    }

    /// Subnormalized state on `A` with `e(ω̃) = (e ⊙ f)(ω_AB)` for every
    /// effect `e`, solved over a lexicographic spanning subset of `A`'s
    /// effect generators.
    pub fn conditional_state(&self, omega_ab: &[S], f_b: &[S]) -> Result<Vec<S>> {
        self.require_bipartite()?;
        check_dim(self.system.dim(), omega_ab.len())?;
        let a = &self.factors[0];
        let gens = a.effects().generators();
        let basis = independent_subset(gens);
        if basis.len() != a.dim() {
            return Err(Error::Invalid(format!("{}: effect generators do not span", a.name())));
        }
        let rows: Vec<Vec<S>> = basis.iter().map(|&i| gens[i].clone()).collect();
        let vals: Vec<S> = rows
            .iter()
            .map(|e| Ok(dot(&self.product_effect(&[e.clone(), f_b.to_vec()])?, omega_ab)))
            .collect::<Result<_>>()?;
        let omega = solve_linear_system(&Matrix::from_rows(&rows)?, &vals)?
            .ok_or_else(|| Error::Composition { item: "vi", detail: "no conditional state".into() })?;
        if !a.is_state(&omega)? {
            return Err(Error::Composition { item: "vi", detail: "conditional state outside the state cone".into() });
        }
        Ok(omega)
    }

    /// Conditional state for the unit effect on `B`.
    pub fn marginal(&self, omega_ab: &[S]) -> Result<Vec<S>> {
        let u = self.factors[1].unit().to_vec();
        self.conditional_state(omega_ab, &u)
    }

    /// Items i–vi. Items v and vi are checked for two-factor composites.
    pub fn validate_composition(&self) -> Result<CompositionReport> {
        let mut report = self.validate_products()?;
        if self.factors.len() != 2 {
            for item in ["v", "vi"] {
                report.items.push(ItemResult {
                    item,
                    passed: true,
                    checked: 0,
                    detail: Some("not checked beyond two factors".into()),
                });
            }
            return Ok(report);
        }
        let (a, b) = (&self.factors[0], &self.factors[1]);
        let ab_states = self.system.extreme_states();
        let ab_effects = self.system.pure_effect_rays();

        let mut fail = None;
        let mut checked = 0;
        'v: for e in &ab_effects {
            for w in b.extreme_states() {
                checked += 1;
                if !a.is_valid_effect(&self.conditional_effect(e, &w)?)? {
                    fail = Some("conditional effect is not a valid effect".into());
                    break 'v;
                }
            }
        }
        report.items.push(ItemResult { item: "v", passed: fail.is_none(), checked, detail: fail });

        let mut fail = None;
        let mut checked = 0;
        'vi: for w in &ab_states {
            for f in b.pure_effect_rays() {
                checked += 1;
                match self.conditional_state(w, &f) {
                    Ok(_) => {}
                    Err(Error::Composition { detail, .. }) => {
                        fail = Some(detail);
                        break 'vi;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        report.items.push(ItemResult { item: "vi", passed: fail.is_none(), checked, detail: fail });
        Ok(report)
    }

    /// Mixture `Σ p_i x_i` helper for bilinearity checks.
    pub fn mix(weights: &[S], xs: &[Vec<S>]) -> Vec<S> {
        let dim = xs.first().map_or(0, |x| x.len());
        xs.iter().zip(weights).fold(vec![S::zero(); dim], |acc, (x, w)| crate::numeric::add(&acc, &scale(x, w)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theories::{cpt, gbit};

    #[test]
    fn classical_bits_compose_to_four_outcomes() {
        let c = compose(vec![cpt(2).unwrap(), cpt(2).unwrap()], Method::MinTensor).unwrap();
        assert_eq!(c.system.extreme_states().len(), 4);
        assert!(c.validate_composition().unwrap().passed());
        let e = vec![Q::from_i64(1), Q::from_i64(0)];
        let p = c.product_state(&[e.clone(), e]).unwrap();
        assert_eq!(p, vec![Q::from_i64(1), Q::from_i64(0), Q::from_i64(0), Q::from_i64(0)]);
    }

    #[test]
    fn gbits_under_max_tensor() {
        let c = compose(vec![gbit(), gbit()], Method::MaxTensor).unwrap();
        assert_eq!(c.system.extreme_states().len(), 24);
        assert!(c.validate_composition().unwrap().passed());
    }

    #[test]
    fn corrupted_control_fails_unit_bound() {
        let r = corrupted_composite().unwrap().validate_composition().unwrap();
        assert!(!r.item("ii").unwrap().passed);
        let c = corrupted_composite().unwrap();
        let err = compose_explicit(c.system, c.factors, c.state_maps, c.effect_maps).unwrap_err();
        assert!(matches!(err, Error::Composition { item: "ii", .. }), "{err}");
    }
}
