//! Constructors for the concrete theories: classical simplices, qubit
//! registers, regular polygons and the gbit.

use serde::{Deserialize, Serialize};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::gpt::{ConeModel, FrameWithMeasurement, GptSystem, Measurement, NamedMap, Role};
use crate::numeric::{dot, CMatrix, Complex, Matrix, Scalar};
use crate::quantum;
use crate::Q;

/// Which constructor to call, with its parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TheorySpec {
    Cpt { d: usize },
    Qt { n: usize },
    Ngon { n: usize },
    Gbit,
    Stm { bits: usize },
}

/// A system on either backend.
#[derive(Clone, Debug)]
pub enum AnySystem {
    Rational(GptSystem<Q>),
    Float(GptSystem<f64>),
}

impl AnySystem {
    pub fn name(&self) -> &str {
        match self {
            AnySystem::Rational(s) => s.name(),
            AnySystem::Float(s) => s.name(),
        }
    }
}

impl TheorySpec {
    pub fn build(&self) -> Result<AnySystem> {
        Ok(match *self {
            TheorySpec::Cpt { d } => AnySystem::Rational(cpt(d)?),
            TheorySpec::Qt { n } => AnySystem::Rational(qt(n)?),
            TheorySpec::Ngon { n } => ngon(n)?,
            TheorySpec::Gbit => AnySystem::Rational(gbit()),
            TheorySpec::Stm { bits } => AnySystem::Rational(crate::stm::stm_system(bits)?),
        })
    }
}

fn unit_vec<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out.sort();
    out
}

fn perm_name(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("perm[{}]", parts.join(","))
}

/// Classical probability theory on `d` outcomes.
pub fn cpt(d: usize) -> Result<GptSystem<Q>> {
    if d < 2 {
        return Err(Error::Invalid(format!("cpt needs d >= 2, got {d}")));
    }
    let perms = if d <= 5 {
        permutations(d)
    } else {
        let swap01: Vec<usize> = (0..d).map(|i| if i < 2 { 1 - i } else { i }).collect();
        let cycle: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
        vec![(0..d).collect(), swap01, cycle]
    };
    let maps = perms.iter().map(|p| NamedMap { name: perm_name(p), matrix: Matrix::permutation(p) }).collect();
    GptSystem::new(
        format!("cpt({d})"),
        ConeModel::Polyhedral(Cone::from_extreme_rays(d, (0..d).map(|i| unit_vec(d, i)).collect())?),
        ConeModel::Polyhedral(Cone::from_extreme_rays(d, (0..d).map(|i| unit_vec(d, i)).collect())?),
        vec![Q::from_i64(1); d],
    )?
    .with_transformations(maps)
}

// ---------------------------------------------------------------- qubits

fn single_qubit_stabilizers() -> Vec<CMatrix<Q>> {
    quantum::stabilizer_states::<Q>(1).into_iter().map(|(_, m)| m).collect()
}

fn kron_all(ms: &[&CMatrix<Q>]) -> CMatrix<Q> {
    ms.iter().fold(CMatrix::identity(1), |acc, m| acc.kron(m))
}

fn product_tuples(k: usize, base: usize) -> Vec<Vec<usize>> {
    (0..base.pow(k as u32))
        .map(|mut x| {
            let mut t = vec![0; k];
            for i in (0..k).rev() {
                t[i] = x % base;
                x /= base;
            }
            t
        })
        .collect()
}

/// Designated pure states of a register: all stabilizer states up to three
/// qubits, products of single-qubit stabilizer states beyond.
pub fn register_designated_states(qubits: usize) -> Vec<CMatrix<Q>> {
    if qubits <= 3 {
        return quantum::stabilizer_states::<Q>(qubits).into_iter().map(|(_, m)| m).collect();
    }
    let single = single_qubit_stabilizers();
    product_tuples(qubits, 6)
        .iter()
        .map(|t| kron_all(&t.iter().map(|&i| &single[i]).collect::<Vec<_>>()))
        .collect()
}

/// Product basis: `basis[b]` holds the two single-qubit projectors.
fn product_basis(qubits: usize, pair: [&CMatrix<Q>; 2]) -> Vec<CMatrix<Q>> {
    product_tuples(qubits, 2)
        .iter()
        .map(|t| kron_all(&t.iter().map(|&i| pair[i]).collect::<Vec<_>>()))
        .collect()
}

/// Designated gates of a register, as unitaries.
pub fn register_gates(qubits: usize) -> Vec<(String, CMatrix<Q>)> {
    let mut g: Vec<(String, CMatrix<Q>)> = Vec::new();
    for w in 0..qubits {
        g.push((format!("X{w}"), quantum::pauli_x_on(qubits, w)));
    }
    match qubits {
        1 => {}
        2 => {
            g.push(("CNOT01".into(), quantum::cnot(2, 0, 1)));
            g.push(("CNOT10".into(), quantum::cnot(2, 1, 0)));
            g.push(("SWAP01".into(), quantum::swap(2, 0, 1)));
        }
        3 => {
            g.push(("CNOT01".into(), quantum::cnot(3, 0, 1)));
            g.push(("CNOT02".into(), quantum::cnot(3, 0, 2)));
            g.push(("CNOT12".into(), quantum::cnot(3, 1, 2)));
            g.push(("TOFFOLI012".into(), quantum::toffoli(3, 0, 1, 2)));
        }
        _ => {
            for t in 1..qubits {
                g.push((format!("CNOT0{t}"), quantum::cnot(qubits, 0, t)));
            }
        }
    }
    g
}

/// Qubit register on `qubits` wires, wire 0 the most significant factor.
pub fn qt_register(qubits: usize) -> Result<GptSystem<Q>> {
    if qubits == 0 || qubits > 4 {
        return Err(Error::Unsupported(format!("qubit register of {qubits} wires")));
    }
    let n = 1usize << qubits;
    let pure = register_designated_states(qubits);
    let states: Vec<Vec<Q>> = pure.iter().map(quantum::density_coords).collect();
    let effects: Vec<Vec<Q>> = pure.iter().map(quantum::effect_coords).collect();
    let unit = quantum::effect_coords(&CMatrix::<Q>::identity(n));
    let single = single_qubit_stabilizers();
    // single-qubit order: x+, x-, y+, y-, z+, z-
    let bases = [
        ("Z", product_basis(qubits, [&single[4], &single[5]])),
        ("X", product_basis(qubits, [&single[0], &single[1]])),
        ("Y", product_basis(qubits, [&single[2], &single[3]])),
    ];
    let mut frames = Vec::new();
    let mut measurements = Vec::new();
    for (_, b) in &bases {
        let m = Measurement::new(&unit, b.iter().map(quantum::effect_coords).collect())?;
        measurements.push(m.clone());
        frames.push(FrameWithMeasurement::designated(b.iter().map(quantum::density_coords).collect(), m, true));
    }
    let maps = register_gates(qubits)
        .into_iter()
        .map(|(name, u)| NamedMap { name, matrix: quantum::adjoint_action(&u) })
        .collect();
    GptSystem::new(
        format!("qt({n})"),
        ConeModel::psd(n, Role::State, states)?,
        ConeModel::psd(n, Role::Effect, effects)?,
        unit,
    )?
    .with_transformations(maps)?
    .with_frames(frames)
    .map(|s| s.with_measurements(measurements))
}

/// Quantum theory on `n×n` Hermitian matrices, `n ∈ {2, 4, 8}`.
pub fn qt(n: usize) -> Result<GptSystem<Q>> {
    match n {
        2 => qt_register(1),
        4 => qt_register(2),
        8 => qt_register(3),
        _ => Err(Error::Unsupported(format!("qt({n}): only 2, 4 and 8 are built"))),
    }
}

/// Density coordinates of a single-qubit stabilizer state, by label
/// (`x+ x- y+ y- z+ z-`).
pub fn qubit_state(label: &str) -> Result<Vec<Q>> {
    let i = single_index(label)?;
    Ok(quantum::density_coords(&single_qubit_stabilizers()[i]))
}

pub fn qubit_effect(label: &str) -> Result<Vec<Q>> {
    let i = single_index(label)?;
    Ok(quantum::effect_coords(&single_qubit_stabilizers()[i]))
}

pub(crate) fn single_index(label: &str) -> Result<usize> {
    ["x+", "x-", "y+", "y-", "z+", "z-"]
        .iter()
        .position(|l| *l == label)
        .ok_or_else(|| Error::Parse(format!("unknown single-bit label {label:?}")))
}

// ---------------------------------------------------------------- polygons

/// Vertex coordinates `(x, y)` for rational polygons, in angular order.
fn lattice_vertices(n: usize) -> Option<Vec<(i64, i64)>> {
    match n {
        3 => Some(vec![(1, 0), (0, 1), (-1, -1)]),
        4 => Some(vec![(1, 0), (0, 1), (-1, 0), (0, -1)]),
        6 => Some(vec![(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]),
        _ => None,
    }
}

/// 3×3 map fixing the normalization coordinate and sending vertices
/// `v0 ↦ v_{f(0)}`, `v1 ↦ v_{f(1)}`.
fn vertex_map<S: Scalar>(verts: &[Vec<S>], f: impl Fn(usize) -> usize) -> Matrix<S> {
    let (a, b) = (&verts[0], &verts[1]);
    let (fa, fb) = (&verts[f(0)], &verts[f(1)]);
    // columns of [a b] mapped to [fa fb]: M = F·V⁻¹ on the 2×2 block
    let v = Matrix::from_rows(&[vec![a[0].clone(), b[0].clone()], vec![a[1].clone(), b[1].clone()]]).unwrap();
    let w = Matrix::from_rows(&[vec![fa[0].clone(), fb[0].clone()], vec![fa[1].clone(), fb[1].clone()]]).unwrap();
    let m = w.matmul(&v.inverse().expect("independent vertices")).unwrap();
    Matrix::from_fn(3, 3, |i, j| match (i, j) {
        (2, 2) => S::one(),
        (2, _) | (_, 2) => S::zero(),
        _ => m.get(i, j).clone(),
    })
}

/// Shared polygon construction: effects are the dual cone, each pure effect
/// scaled to maximal value 1 on normalized states.
fn polygon_system<S: Scalar>(name: String, verts: Vec<Vec<S>>) -> Result<GptSystem<S>> {
    let n = verts.len();
    let states = Cone::from_extreme_rays(3, verts.clone())?;
    let dual = states.dual()?;
    let effects: Vec<Vec<S>> = dual
        .generators()
        .iter()
        .map(|e| {
            let top = verts.iter().map(|w| dot(e, w)).fold(S::zero(), |a, b| if b > a { b } else { a });
            e.iter().map(|x| x.div_r(&top)).collect()
        })
        .collect();
    let mut unit = vec![S::zero(); 3];
    unit[2] = S::one();
    let maps = vec![
        NamedMap { name: "rotation".into(), matrix: vertex_map(&verts, |k| (k + 1) % n) },
        NamedMap { name: "reflection".into(), matrix: vertex_map(&verts, |k| (n - k) % n) },
    ];
    GptSystem::new(
        name,
        ConeModel::Polyhedral(states),
        ConeModel::Polyhedral(Cone::from_extreme_rays(3, effects)?),
        unit,
    )?
    .with_transformations(maps)
}

/// Regular `n`-gon with exact lattice coordinates, `n ∈ {3, 4, 6}`.
pub fn ngon_rational(n: usize) -> Result<GptSystem<Q>> {
    let verts = lattice_vertices(n)
        .ok_or_else(|| Error::Unsupported(format!("no rational lattice for the {n}-gon")))?
        .into_iter()
        .map(|(x, y)| vec![Q::from_i64(x), Q::from_i64(y), Q::from_i64(1)])
        .collect();
    polygon_system(format!("ngon({n})"), verts)
}

/// Regular `n`-gon with vertices `(cos 2πk/n, sin 2πk/n, 1)`.
pub fn ngon_float(n: usize) -> Result<GptSystem<f64>> {
    if n < 3 {
        return Err(Error::Invalid(format!("ngon needs n >= 3, got {n}")));
    }
    let verts = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let (s, c) = t.sin_cos();
            vec![snap(c), snap(s), 1.0]
        })
        .collect();
    polygon_system(format!("ngon({n})"), verts)
}

fn snap(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        0.0
    } else {
        x
    }
}

/// Exact for `n ∈ {3, 4, 6}`, floating point otherwise.
pub fn ngon(n: usize) -> Result<AnySystem> {
    if lattice_vertices(n).is_some() {
        Ok(AnySystem::Rational(ngon_rational(n)?))
    } else {
        Ok(AnySystem::Float(ngon_float(n)?))
    }
}

/// The square state space.
pub fn gbit() -> GptSystem<Q> {
    ngon_rational(4).expect("square lattice").rename("gbit")
}

/// Complex unit used by callers assembling gates by hand.
pub fn complex(re: i64, im: i64) -> Complex<Q> {
    Complex::new(Q::from_i64(re), Q::from_i64(im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::canonical_ray;

    #[test]
    fn cpt_basics() {
        let c = cpt(3).unwrap();
        assert_eq!(c.transformations().len(), 6);
        assert!(c.check_invariants().unwrap().ok());
        assert_eq!(cpt(6).unwrap().transformations().len(), 3);
        assert!(cpt(1).is_err());
    }

    #[test]
    fn polygons_pass_invariants() {
        for n in [3, 4, 6] {
            let s = ngon_rational(n).unwrap();
            assert!(s.check_invariants().unwrap().ok(), "{n}");
            assert_eq!(s.pure_effect_rays().len(), n);
            for t in s.transformations() {
                assert!(s.validate_transformation(&t.matrix).unwrap().reversible, "{n} {}", t.name);
            }
        }
        for n in [5, 7, 8] {
            let s = ngon_float(n).unwrap();
            assert!(s.check_invariants().unwrap().ok(), "{n}");
            assert_eq!(s.pure_effect_rays().len(), n);
        }
    }

    #[test]
    fn odd_polygons_are_self_dual() {
        for n in [5, 7, 9] {
            let s = ngon_float(n).unwrap();
            let mut effect_dirs: Vec<Vec<f64>> =
                s.pure_effect_rays().iter().map(|e| canonical_ray(&[e[0], e[1]])).collect();
            // rotation by π/n followed by inversion lands each vertex direction on an effect ray
            let mut rotated: Vec<Vec<f64>> = s
                .extreme_states()
                .iter()
                .map(|w| {
                    let t = std::f64::consts::PI / n as f64 + std::f64::consts::PI;
                    let (sn, c) = t.sin_cos();
                    canonical_ray(&[c * w[0] - sn * w[1], sn * w[0] + c * w[1]])
                })
                .collect();
            effect_dirs.sort_by(|a, b| crate::numeric::cmp_lex(a, b));
            rotated.sort_by(|a, b| crate::numeric::cmp_lex(a, b));
            assert_eq!(effect_dirs.len(), rotated.len());
            for (a, b) in effect_dirs.iter().zip(&rotated) {
                assert!(crate::numeric::approx_eq_vec(a, b), "{n}: {a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn qubit_designations() {
        let q = qt(2).unwrap();
        assert_eq!(q.states().generators().len(), 6);
        assert_eq!(qubit_state("x+").unwrap(), vec![Q::ratio(1, 2), Q::ratio(1, 2), Q::ratio(1, 2), Q::ratio(0, 1)]);
        for w in q.states().generators() {
            assert_eq!(q.normalization(w).unwrap(), Q::from_i64(1));
        }
        let q4 = qt(4).unwrap();
        assert_eq!(q4.states().generators().len(), 60);
        for t in q4.transformations() {
            let v = q4.validate_transformation(&t.matrix).unwrap();
            assert!(v.preserves_states && v.preserves_effects && v.reversible, "{}", t.name);
        }
    }
}
