//! Decoherence maps onto classical frames, the commutation of classical
//! lifts with them, and the decoherence route to fan-out processes.

use std::sync::Arc;

use serde::Serialize;

use crate::composition::{cpt_composite, qt_composite, CompositeSystem, ItemResult};
use crate::cone::membership_lp;
use crate::darwinism::{
    check_idealized_darwinism, check_robust_spreading, fanout_labels, index_tuples, CheckReport, DarwinismScenario,
};
use crate::error::{check_dim, Error, Result};
use crate::gpt::{FrameWithMeasurement, GptSystem};
use crate::numeric::{approx_eq_vec, dot, CMatrix, Matrix, Scalar};
use crate::{quantum, theories, Q};

/// Classical label permutation to a matrix on the system, or `None` when
/// the theory has no transformation implementing it.
pub type LiftProvider<S> = Arc<dyn Fn(&[usize]) -> Result<Option<Matrix<S>>> + Send + Sync>;

#[derive(Clone)]
pub struct DecoherenceMap<S: Scalar> {
    pub name: String,
    pub system: GptSystem<S>,
    pub map: Matrix<S>,
    /// Classical states the map projects onto, in label order.
    pub frame: Vec<Vec<S>>,
    pub lift: LiftProvider<S>,
}

impl<S: Scalar> std::fmt::Debug for DecoherenceMap<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DecoherenceMap").field("name", &self.name).field("system", &self.system.name()).finish()
    }
}

impl<S: Scalar> DecoherenceMap<S> {
    pub fn new(name: impl Into<String>, system: GptSystem<S>, map: Matrix<S>, frame: Vec<Vec<S>>, lift: LiftProvider<S>) -> Result<Self> {
        crate::numeric::require_square(&map, system.dim())?;
        for w in &frame {
            check_dim(system.dim(), w.len())?;
        }
        Ok(DecoherenceMap { name: name.into(), system, map, frame, lift })
    }

    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        self.map.mul_vec(v)
    }

    /// Weights of `D(ν)` over the classical frame.
    pub fn decompose(&self, nu: &[S]) -> Result<Option<Vec<S>>> {
        let img = self.apply(nu)?;
        match membership_lp(self.system.dim(), &self.frame, &img)? {
            crate::cone::MembershipVerdict::Inside(w) => Ok(Some(w)),
            crate::cone::MembershipVerdict::Outside(_) => Ok(None),
        }
    }

    /// The classical permutation a map induces on the frame, if it permutes it.
    pub fn induced_permutation(&self, t: &Matrix<S>) -> Result<Option<Vec<usize>>> {
        let mut p = Vec::with_capacity(self.frame.len());
        for w in &self.frame {
            let img = t.mul_vec(w)?;
            match self.frame.iter().position(|x| approx_eq_vec(x, &img)) {
                Some(i) => p.push(i),
                None => return Ok(None),
            }
        }
        Ok(Some(p))
    }
}

fn item(name: &'static str, checked: usize, failure: Option<String>) -> ItemResult {
    ItemResult { item: name, passed: failure.is_none(), checked, detail: failure }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoherenceReport {
    pub map: String,
    pub items: Vec<ItemResult>,
}

impl DecoherenceReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, name: &str) -> Option<&ItemResult> {
        self.items.iter().find(|i| i.item == name)
    }
}

fn item1<S: Scalar>(d: &DecoherenceMap<S>) -> Result<ItemResult> {
    let sys = &d.system;
    let ut = d.map.vec_mul(sys.unit())?;
    if !approx_eq_vec(&ut, sys.unit()) {
        return Ok(item("1", 0, Some("unit ∘ D differs from the unit effect".into())));
    }
    for (i, w) in d.frame.iter().enumerate() {
        if !approx_eq_vec(&d.apply(w)?, w) {
            return Ok(item("1", i + 1, Some(format!("classical state {i} is not fixed"))));
        }
    }
    let states = sys.extreme_states();
    for (i, w) in states.iter().enumerate() {
        if d.decompose(w)?.is_none() {
            return Ok(item("1", d.frame.len() + i + 1, Some(format!("image of extreme state {i} leaves the classical simplex"))));
        }
    }
    Ok(item("1", d.frame.len() + states.len(), None))
}

fn item2<S: Scalar>(d: &DecoherenceMap<S>) -> Result<ItemResult> {
    let dd = d.map.matmul(&d.map)?;
    let failure = (!dd.approx_eq(&d.map)).then(|| "D ∘ D differs from D".to_string());
    Ok(item("2", 1, failure))
}

/// `e ∘ D` for every effect generator `e`.
fn classical_effects<S: Scalar>(d: &DecoherenceMap<S>) -> Result<Vec<Vec<S>>> {
    d.system.effects().generators().iter().map(|g| d.map.vec_mul(g)).collect()
}

fn item3<S: Scalar>(d: &DecoherenceMap<S>, perms: &[Vec<usize>]) -> Result<ItemResult> {
    let eff = classical_effects(d)?;
    let mut checked = 0;
    for p in perms {
        if p.len() != d.frame.len() {
            return Err(Error::Invalid(format!("permutation of {} labels for {} classical states", p.len(), d.frame.len())));
        }
        checked += 1;
        let Some(m) = (d.lift)(p)? else {
            return Ok(item("3", checked, Some(format!("no transformation implements {p:?}"))));
        };
        let t = d.system.validate_transformation(&m)?;
        if !t.reversible {
            return Ok(item("3", checked, Some(format!("lift of {p:?} is not reversible"))));
        }
        if d.induced_permutation(&m)?.as_deref() != Some(p.as_slice()) {
            return Ok(item("3", checked, Some(format!("lift of {p:?} moves the classical states differently"))));
        }
        for f in &eff {
            let g = m.vec_mul(f)?;
            if !approx_eq_vec(&d.map.vec_mul(&g)?, &g) || !d.system.is_valid_effect(&g)? {
                return Ok(item("3", checked, Some(format!("lift of {p:?} leaves the classical effect space"))));
            }
        }
    }
    Ok(item("3", checked, None))
}

/// `D_{0…N}(ν₀ ⊙ … ⊙ ν_N) = D₀(ν₀) ⊙ … ⊙ D_N(ν_N)` on products of extreme states.
fn item4<S: Scalar>(total: &DecoherenceMap<S>, c: &CompositeSystem<S>, locals: &[DecoherenceMap<S>]) -> Result<ItemResult> {
    if locals.len() != c.factors.len() {
        return Err(Error::Invalid(format!("{} local maps for {} factors", locals.len(), c.factors.len())));
    }
    let states: Vec<Vec<Vec<S>>> = c.factors.iter().map(|f| f.extreme_states()).collect();
    let counts: Vec<usize> = states.iter().map(|s| s.len()).collect();
    let mut t = vec![0usize; counts.len()];
    let mut checked = 0;
    loop {
        let nus: Vec<Vec<S>> = t.iter().enumerate().map(|(f, &i)| states[f][i].clone()).collect();
        let lhs = total.apply(&c.product_state(&nus)?)?;
        let imgs = nus.iter().zip(locals).map(|(v, d)| d.apply(v)).collect::<Result<Vec<_>>>()?;
        checked += 1;
        if !approx_eq_vec(&lhs, &c.product_state(&imgs)?) {
            return Ok(item("4", checked, Some(format!("product of extreme states {t:?}"))));
        }
        let mut i = t.len();
        loop {
            if i == 0 {
                return Ok(item("4", checked, None));
            }
            i -= 1;
            t[i] += 1;
            if t[i] < counts[i] {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Items 1–3 on `d`, item 3 for the supplied permutations only.
pub fn check_decoherence_axioms<S: Scalar>(d: &DecoherenceMap<S>, perms: &[Vec<usize>]) -> Result<DecoherenceReport> {
    Ok(DecoherenceReport { map: d.name.clone(), items: vec![item1(d)?, item2(d)?, item3(d, perms)?] })
}

/// Items 1–4 for a composite map with its local maps.
pub fn check_composite_decoherence<S: Scalar>(
    total: &DecoherenceMap<S>,
    c: &CompositeSystem<S>,
    locals: &[DecoherenceMap<S>],
    perms: &[Vec<usize>],
) -> Result<DecoherenceReport> {
    let mut r = check_decoherence_axioms(total, perms)?;
    r.items.push(item4(total, c, locals)?);
    Ok(r)
}

/// `D·T = T·D` for a lift `t` of a classical permutation.
pub fn check_lemma5_commutation<S: Scalar>(d: &DecoherenceMap<S>, t: &Matrix<S>) -> Result<bool> {
    let Some(p) = d.induced_permutation(t)? else {
        return Err(Error::Contract("map does not permute the classical states, so it is not a lift".into()));
    };
    match (d.lift)(&p)? {
        Some(m) if m.approx_eq(t) => {}
        _ => return Err(Error::Contract(format!("map is not the lift of {p:?}"))),
    }
    Ok(d.map.matmul(t)?.approx_eq(&t.matmul(&d.map)?))
}

// ---------------------------------------------------------------- instances

fn basis_projectors(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|k| {
            let mut m = CMatrix::<Q>::zeros(n);
            m.set(k, k, crate::numeric::Complex::one());
            quantum::density_coords(&m)
        })
        .collect()
}

fn dephasing_matrix(n: usize) -> Matrix<Q> {
    Matrix::from_fn(n * n, n * n, |i, j| if i == j && i < n { Q::from_i64(1) } else { Q::from_i64(0) })
}

fn qt_system(qubits: usize) -> Result<GptSystem<Q>> {
    if qubits == 0 {
        return Err(Error::Unsupported("a register needs at least one wire".into()));
    }
    theories::qt_register(qubits)
}

/// Dephasing in the computational basis of a `qubits`-wire register. Every
/// basis permutation lifts to the adjoint action of its unitary.
pub fn qt_dephasing(qubits: usize) -> Result<DecoherenceMap<Q>> {
    let sys = qt_system(qubits)?;
    let n = 1usize << qubits;
    let lift: LiftProvider<Q> = Arc::new(move |p: &[usize]| {
        let u: CMatrix<Q> = CMatrix::permutation(p);
        Ok(Some(quantum::adjoint_action(&u)))
    });
    DecoherenceMap::new(format!("dephasing on qt({n})"), sys, dephasing_matrix(n), basis_projectors(n), lift)
}

/// As [`qt_dephasing`] with lifts restricted to Clifford unitaries, the
/// reversible maps of the stabilizer subtheory.
pub fn stabilizer_dephasing(qubits: usize) -> Result<DecoherenceMap<Q>> {
    let mut d = qt_dephasing(qubits)?;
    d.name = format!("dephasing on stab({})", 1usize << qubits);
    d.lift = Arc::new(move |p: &[usize]| {
        let u: CMatrix<Q> = CMatrix::permutation(p);
        Ok(quantum::is_clifford(&u, qubits)?.then(|| quantum::adjoint_action(&u)))
    });
    Ok(d)
}

/// The classical theory decoheres to itself.
pub fn cpt_identity_decoherence(d: usize) -> Result<DecoherenceMap<Q>> {
    let sys = theories::cpt(d)?;
    let frame = sys.extreme_states();
    let lift: LiftProvider<Q> = Arc::new(|p: &[usize]| Ok(Some(Matrix::permutation(p))));
    DecoherenceMap::new(format!("identity on cpt({d})"), sys, Matrix::identity(d), frame, lift)
}

/// Composite of classical systems, with identity decoherence and
/// permutation lifts on the product labels.
fn cpt_total(c: &CompositeSystem<Q>) -> Result<DecoherenceMap<Q>> {
    let dim = c.system.dim();
    let lift: LiftProvider<Q> = Arc::new(|p: &[usize]| Ok(Some(Matrix::permutation(p))));
    let frame = index_tuples(c.factors[0].dim(), c.factors.len())
        .iter()
        .map(|t| {
            let locals: Vec<Vec<Q>> = t.iter().zip(&c.factors).map(|(&i, f)| f.extreme_states()[i].clone()).collect();
            c.product_state(&locals)
        })
        .collect::<Result<Vec<_>>>()?;
    DecoherenceMap::new(format!("identity on {}", c.system.name()), c.system.clone(), Matrix::identity(dim), frame, lift)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoheringTheory {
    Cpt,
    Qt,
}

/// Decomposition `D₀ν = Σ λ_i ω_i` of one extreme system state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub state: usize,
    pub weights: Vec<String>,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem7Report {
    pub scenario: String,
    pub axioms: DecoherenceReport,
    pub local_axioms: Vec<DecoherenceReport>,
    pub commutation: bool,
    pub decompositions: Vec<Decomposition>,
    pub spreading: CheckReport,
    pub darwinism: CheckReport,
}

impl Theorem7Report {
    pub fn passed(&self) -> bool {
        self.axioms.passed()
            && self.local_axioms.iter().all(|r| r.passed())
            && self.commutation
            && self.decompositions.iter().all(|d| d.valid)
            && self.spreading.passed
            && self.darwinism.passed
    }
}

/// Builds `T_SCI` as the decoherence lift of the fan-out permutation and
/// checks that it spreads classical information and is a Darwinism process.
pub fn demo_theorem7(theory: DecoheringTheory, d: usize, envs: usize) -> Result<Theorem7Report> {
    if envs == 0 {
        return Err(Error::Invalid("at least one environment".into()));
    }
    let (c, locals, total) = match theory {
        DecoheringTheory::Qt => {
            if d != 2 {
                return Err(Error::Unsupported(format!("qubit pointer bases have two outcomes, not {d}")));
            }
            let c = qt_composite(envs + 1)?;
            let locals = (0..=envs).map(|_| qt_dephasing(1)).collect::<Result<Vec<_>>>()?;
            (c, locals, qt_dephasing(envs + 1)?)
        }
        DecoheringTheory::Cpt => {
            let c = cpt_composite(d, envs + 1)?;
            let locals = (0..=envs).map(|_| cpt_identity_decoherence(d)).collect::<Result<Vec<_>>>()?;
            let total = cpt_total(&c)?;
            (c, locals, total)
        }
    };
    let perm = fanout_labels(d, envs);
    let t_sci = (total.lift)(&perm)?.ok_or_else(|| Error::Unsupported("fan-out permutation has no lift".into()))?;
    let axioms = check_composite_decoherence(&total, &c, &locals, std::slice::from_ref(&perm))?;
    let swap: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
    let local_axioms = locals.iter().map(|l| check_decoherence_axioms(l, std::slice::from_ref(&swap))).collect::<Result<Vec<_>>>()?;
    let commutation = check_lemma5_commutation(&total, &t_sci)?;

    let frame = |dm: &DecoherenceMap<Q>| -> Result<FrameWithMeasurement<Q>> {
        let f = dm.system.designated_frames().iter().find(|f| f.states == dm.frame).cloned();
        match f {
            Some(f) => Ok(f),
            None => {
                let m = crate::gpt::Measurement::new(dm.system.unit(), dm.frame.clone())?;
                Ok(FrameWithMeasurement::designated(dm.frame.clone(), m, true))
            }
        }
    };
    let frames = locals.iter().map(frame).collect::<Result<Vec<_>>>()?;
    let id = format!("{}+{envs}env/decoherence", locals[0].system.name());
    let s = DarwinismScenario::new(id.clone(), c, frames[0].clone(), frames[1..].to_vec(), &t_sci)?;

    let sys_e = s.system_frame.distinguishing_effects().to_vec();
    let decompositions = s
        .test_states()
        .iter()
        .enumerate()
        .map(|(i, nu)| {
            let w = locals[0].decompose(nu)?;
            let valid = match &w {
                Some(w) => {
                    let total = w.iter().fold(Q::from_i64(0), |a, x| a.add_r(x));
                    total.approx_eq(&Q::from_i64(1))
                        && w.iter().zip(&sys_e).all(|(l, e)| !l.is_neg() && l.approx_eq(&dot(e, nu)))
                }
                None => false,
            };
            Ok(Decomposition {
                state: i,
                weights: w.unwrap_or_default().iter().map(|x| x.to_text()).collect(),
                valid,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Theorem7Report {
        scenario: id,
        axioms,
        local_axioms,
        commutation,
        decompositions,
        spreading: check_robust_spreading(&s)?,
        darwinism: check_idealized_darwinism(&s)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dephasing_examples() {
        let d = qt_dephasing(1).unwrap();
        let x = theories::qubit_state("x+").unwrap();
        let half = Q::ratio(1, 2);
        assert_eq!(d.apply(&x).unwrap(), vec![half.clone(), half, Q::from_i64(0), Q::from_i64(0)]);
        let r = check_decoherence_axioms(&d, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn non_idempotent_map_fails_item_2() {
        let mut d = qt_dephasing(1).unwrap();
        d.map.set(0, 0, Q::from_i64(2));
        let r = check_decoherence_axioms(&d, &[]).unwrap();
        assert!(!r.item("2").unwrap().passed);
    }

    #[test]
    fn hadamard_is_not_a_lift() {
        let d = qt_dephasing(1).unwrap();
        let h = quantum::adjoint_action(&quantum::hadamard_scaled::<Q>());
        assert!(matches!(check_lemma5_commutation(&d, &h), Err(Error::Contract(_))));
        let x = quantum::adjoint_action(&quantum::pauli_x_on::<Q>(1, 0));
        assert!(check_lemma5_commutation(&d, &x).unwrap());
    }

    #[test]
    fn classical_theorem7() {
        let r = demo_theorem7(DecoheringTheory::Cpt, 2, 2).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
