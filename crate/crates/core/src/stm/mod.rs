//! Spekkens' toy model as a GPT.
//!
//! Ontic states of `n` elementary systems are indexed `0..4ⁿ` in base 4 with
//! system 0 the most significant digit; digit `d` is the ontic label `d+1`.
//! A digit carries two bits `a = d & 1`, `b = d >> 1`, and a toy observable
//! with symplectic letter `(x, z)` takes the value `(−1)^{x·a + z·b}`.

mod search;
mod symmetry;

pub use search::{
    enumerate_group, load_or_enumerate_group, search_classical_implementation, Constraints, FrontierEntry, SearchOutcome,
    SearchReport, SearchStats, DEFAULT_BUDGET, GROUP_CACHE_ENV, GROUP_FORMAT_VERSION,
};
pub use symmetry::{
    all_frames, check_strong_symmetry, closure, ontic_state_action, state_action, StrongSymmetryReport, SymmetryLevel,
};

use std::collections::HashMap;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::gpt::{ConeModel, FrameWithMeasurement, GptSystem, Measurement, NamedMap};
use crate::numeric::{Matrix, Scalar};
use crate::quantum::{self, Pauli};
use crate::Q;

pub const MAX_BITS: usize = 3;

/// A permutation of ontic states: `perm[o]` is the image of `o`.
pub type OnticPerm = Vec<usize>;

pub fn ontic_count(bits: usize) -> usize {
    1 << (2 * bits)
}

fn digit(bits: usize, o: usize, k: usize) -> usize {
    (o >> (2 * (bits - 1 - k))) & 3
}

/// Ontic label such as `"13"`.
pub fn ontic_label(bits: usize, o: usize) -> String {
    (0..bits).map(|k| char::from(b'1' + digit(bits, o, k) as u8)).collect()
}

pub fn parse_ontic_label(bits: usize, s: &str) -> Result<usize> {
    let ds: Vec<u8> = s.bytes().collect();
    if ds.len() != bits || ds.iter().any(|c| !(b'1'..=b'4').contains(c)) {
        return Err(Error::Parse(format!("bad ontic label {s:?}")));
    }
    Ok(ds.iter().fold(0, |acc, c| acc * 4 + (c - b'1') as usize))
}

/// Symplectic bit vector of an ontic state, laid out like
/// [`quantum::word_to_bits`]: `a_k` at bit `2k`, `b_k` at bit `2k+1`.
pub fn ontic_bits(bits: usize, o: usize) -> u32 {
    let mut v = 0;
    for k in 0..bits {
        let d = digit(bits, o, k) as u32;
        v |= (d & 1) << (2 * k) | (d >> 1) << (2 * k + 1);
    }
    v
}

fn ontic_from_bits(bits: usize, v: u32) -> usize {
    (0..bits).fold(0, |acc, k| {
        let d = (v >> (2 * k) & 1) | (v >> (2 * k + 1) & 1) << 1;
        acc * 4 + d as usize
    })
}

/// Signed toy observable, a diagonal `±1` matrix on ontic states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ToyObservable {
    pub word: Vec<Pauli>,
    pub negative: bool,
}

impl ToyObservable {
    pub fn new(word: Vec<Pauli>, negative: bool) -> Self {
        ToyObservable { word, negative }
    }

    pub fn value(&self, o: usize) -> i8 {
        let bits = self.word.len();
        let w = quantum::word_to_bits(&self.word);
        let parity = (w & ontic_bits(bits, o)).count_ones() & 1;
        let v = if parity == 1 { -1 } else { 1 };
        if self.negative {
            -v
        } else {
            v
        }
    }

    pub fn diagonal(&self) -> Vec<i8> {
        (0..ontic_count(self.word.len())).map(|o| self.value(o)).collect()
    }

    /// Group product, letterwise with `XZ = ZX = Y` and no phases.
    pub fn mul(&self, o: &ToyObservable) -> ToyObservable {
        let n = self.word.len();
        let w = quantum::word_to_bits(&self.word) ^ quantum::word_to_bits(&o.word);
        ToyObservable { word: quantum::bits_to_word(n, w), negative: self.negative ^ o.negative }
    }
}

/// A pure epistemic state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpistemicState {
    pub label: String,
    pub generators: Vec<ToyObservable>,
    /// Bitmask over ontic states.
    pub support: u64,
}

impl EpistemicState {
    pub fn support_list(&self) -> Vec<usize> {
        (0..64).filter(|&o| self.support >> o & 1 == 1).collect()
    }

    /// Uniform distribution on the support.
    pub fn vector<S: Scalar>(&self, bits: usize) -> Vec<S> {
        let k = self.support.count_ones() as i64;
        let w = S::ratio(1, k);
        (0..ontic_count(bits)).map(|o| if self.support >> o & 1 == 1 { w.clone() } else { S::zero() }).collect()
    }
}

fn support_of(bits: usize, gens: &[ToyObservable]) -> u64 {
    (0..ontic_count(bits)).filter(|&o| gens.iter().all(|g| g.value(o) == 1)).fold(0u64, |m, o| m | 1 << o)
}

fn label_for(bits: usize, gens: &[ToyObservable]) -> String {
    if bits == 1 {
        let g = &gens[0];
        let l = g.word[0].symbol().to_ascii_lowercase();
        return format!("{l}{}", if g.negative { '-' } else { '+' });
    }
    gens.iter()
        .map(|g| format!("{}{}", if g.negative { '-' } else { '+' }, quantum::word_string(&g.word)))
        .collect::<Vec<_>>()
        .join(",")
}

/// Every pure epistemic state: one per (isotropic subgroup of maximal size,
/// sign choice on its generators).
///
/// For one system the order is `x+, x−, y+, y−, z+, z−`.
pub fn pure_states(bits: usize) -> Result<Vec<EpistemicState>> {
    if bits == 0 || bits > MAX_BITS {
        return Err(Error::Unsupported(format!("toy model with {bits} systems")));
    }
    let mut out = Vec::new();
    for basis in quantum::lagrangian_subspaces(bits) {
        for signs in 0..1u32 << bits {
            let gens: Vec<ToyObservable> = basis
                .iter()
                .enumerate()
                .map(|(k, &b)| ToyObservable::new(quantum::bits_to_word(bits, b), signs >> (bits - 1 - k) & 1 == 1))
                .collect();
            let support = support_of(bits, &gens);
            out.push(EpistemicState { label: label_for(bits, &gens), generators: gens, support });
        }
    }
    Ok(out)
}

/// Lookup from support mask to pure-state index.
pub fn support_index(states: &[EpistemicState]) -> HashMap<u64, usize> {
    states.iter().enumerate().map(|(i, s)| (s.support, i)).collect()
}

pub fn permute_mask(perm: &[usize], mask: u64) -> u64 {
    perm.iter().enumerate().filter(|(o, _)| mask >> o & 1 == 1).fold(0, |m, (_, &p)| m | 1 << p)
}

/// Validity of an ontic permutation: every pure support maps to a pure support.
pub fn is_valid_permutation(bits: usize, perm: &[usize]) -> Result<bool> {
    let states = pure_states(bits)?;
    let idx = support_index(&states);
    Ok(states.iter().all(|s| idx.contains_key(&permute_mask(perm, s.support))))
}

/// Permutation matrix of an ontic permutation plus its validity flag.
#[derive(Clone, Debug)]
pub struct OnticMap {
    pub perm: OnticPerm,
    pub matrix: Matrix<Q>,
    pub valid: bool,
}

pub fn ontic_permutation_to_map(bits: usize, perm: &[usize]) -> Result<OnticMap> {
    check_perm(bits, perm)?;
    Ok(OnticMap { perm: perm.to_vec(), matrix: Matrix::permutation(perm), valid: is_valid_permutation(bits, perm)? })
}

fn check_perm(bits: usize, perm: &[usize]) -> Result<()> {
    let n = ontic_count(bits);
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::Invalid(format!("not a permutation of {n} ontic states")));
    }
    Ok(())
}

/// `(p ∘ q)(o) = p(q(o))`
pub fn compose(p: &[usize], q: &[usize]) -> OnticPerm {
    q.iter().map(|&x| p[x]).collect()
}

pub fn invert(p: &[usize]) -> OnticPerm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Ontic permutation whose lift sends each observable `O_v` to `O_{C v}`,
/// where `images[j]` is `C` applied to the `j`-th symplectic basis vector.
///
/// With `o ↦ M o` the requirement `O_{Cv}(M o) = O_v(o)` gives `M = C^{−T}`.
pub fn perm_from_symplectic(bits: usize, images: &[u32]) -> Result<OnticPerm> {
    let m = 2 * bits;
    if images.len() != m {
        return Err(Error::Invalid("need one image per symplectic basis vector".into()));
    }
    // columns of C are images; rows of Cᵀ likewise
    let ct: Vec<u32> = images.to_vec();
    let inv = f2_inverse(&ct, m).ok_or_else(|| Error::Invalid("symplectic map is singular".into()))?;
    // inv = (Cᵀ)⁻¹ as rows; M o has bit i = row_i · o
    Ok((0..ontic_count(bits))
        .map(|o| {
            let v = ontic_bits(bits, o);
            let out = (0..m).fold(0u32, |acc, i| acc | ((inv[i] & v).count_ones() & 1) << i);
            ontic_from_bits(bits, out)
        })
        .collect())
}

fn f2_inverse(rows: &[u32], m: usize) -> Option<Vec<u32>> {
    let mut a = rows.to_vec();
    let mut inv: Vec<u32> = (0..m).map(|i| 1 << i).collect();
    for c in 0..m {
        let p = (c..m).find(|&r| a[r] >> c & 1 == 1)?;
        a.swap(c, p);
        inv.swap(c, p);
        for r in 0..m {
            if r != c && a[r] >> c & 1 == 1 {
                a[r] ^= a[c];
                inv[r] ^= inv[c];
            }
        }
    }
    Some(inv)
}

/// Toy CNOT: `X_c ↦ X_c X_t`, `Z_t ↦ Z_c Z_t`, other generators fixed.
pub fn toy_cnot(bits: usize, control: usize, target: usize) -> Result<OnticPerm> {
    if control == target || control >= bits || target >= bits {
        return Err(Error::Invalid(format!("toy CNOT {control}->{target} on {bits} systems")));
    }
    let mut images: Vec<u32> = (0..2 * bits).map(|i| 1 << i).collect();
    images[2 * control] |= 1 << (2 * target);
    images[2 * target + 1] |= 1 << (2 * control + 1);
    let perm = perm_from_symplectic(bits, &images)?;
    verify_stabilizer_action(bits, &perm, &images)?;
    Ok(perm)
}

/// Pairwise toy CNOTs from system 0 onto each of `envs` environments.
pub fn toy_fan(envs: usize) -> Result<OnticPerm> {
    let bits = envs + 1;
    if envs == 0 || bits > MAX_BITS {
        return Err(Error::Unsupported(format!("toy fan-out onto {envs} environments")));
    }
    let mut p: OnticPerm = (0..ontic_count(bits)).collect();
    for e in 1..=envs {
        p = compose(&toy_cnot(bits, 0, e)?, &p);
    }
    Ok(p)
}

/// The lift conjugates every generator as prescribed, checked on every pure
/// state: a state stabilized by `±O_v` maps to one stabilized by `±O_{Cv}`.
fn verify_stabilizer_action(bits: usize, perm: &[usize], images: &[u32]) -> Result<()> {
    let states = pure_states(bits)?;
    let idx = support_index(&states);
    let map_word = |w: u32| -> u32 {
        (0..2 * bits).filter(|&j| w >> j & 1 == 1).fold(0, |acc, j| acc ^ images[j])
    };
    for s in &states {
        let img = permute_mask(perm, s.support);
        let Some(&t) = idx.get(&img) else {
            return Err(Error::Certificate(format!("state {} maps outside the pure states", s.label)));
        };
        for g in &s.generators {
            let w = map_word(quantum::word_to_bits(&g.word));
            let og = ToyObservable::new(quantum::bits_to_word(bits, w), g.negative);
            if support_of(bits, &[og]) & states[t].support != states[t].support {
                return Err(Error::Certificate(format!("stabilizer action fails on {}", s.label)));
            }
        }
    }
    Ok(())
}

/// Pure states by single-system labels, e.g. `["x+", "z+"]`.
pub fn product_support(labels: &[&str]) -> Result<u64> {
    let one = pure_states(1)?;
    let bits = labels.len();
    let locals: Vec<u64> =
        labels.iter().map(|l| crate::theories::single_index(l).map(|i| one[i].support)).collect::<Result<_>>()?;
    Ok((0..ontic_count(bits))
        .filter(|&o| (0..bits).all(|k| locals[k] >> digit(bits, o, k) & 1 == 1))
        .fold(0, |m, o| m | 1 << o))
}

pub fn mask_vector<S: Scalar>(bits: usize, mask: u64) -> Vec<S> {
    let w = S::ratio(1, mask.count_ones() as i64);
    (0..ontic_count(bits)).map(|o| if mask >> o & 1 == 1 { w.clone() } else { S::zero() }).collect()
}

/// Ontic support of a state vector (its nonzero coordinates).
pub fn vector_support<S: Scalar>(v: &[S]) -> u64 {
    v.iter().enumerate().filter(|(_, x)| !x.is_negligible()).fold(0, |m, (o, _)| m | 1 << o)
}

pub fn mask_labels(bits: usize, mask: u64) -> Vec<String> {
    (0..ontic_count(bits)).filter(|&o| mask >> o & 1 == 1).map(|o| ontic_label(bits, o)).collect()
}

/// Z-product frame element `f` (bit `k` of `f`, most significant first, is
/// the sign of system `k`).
pub fn z_frame_support(bits: usize, f: usize) -> u64 {
    (0..ontic_count(bits))
        .filter(|&o| (0..bits).all(|k| digit(bits, o, k) >> 1 == (f >> (bits - 1 - k)) & 1))
        .fold(0, |m, o| m | 1 << o)
}

fn local_generators(bits: usize) -> Vec<(String, OnticPerm)> {
    // S4 on one system is generated by a transposition and a 4-cycle
    let t = [1usize, 0, 2, 3];
    let c = [1usize, 2, 3, 0];
    let mut out = Vec::new();
    for k in 0..bits {
        for (name, p) in [("swap12", &t), ("cycle1234", &c)] {
            let perm = (0..ontic_count(bits))
                .map(|o| {
                    let shift = 2 * (bits - 1 - k);
                    let d = (o >> shift) & 3;
                    (o & !(3 << shift)) | p[d] << shift
                })
                .collect();
            out.push((format!("{name}@{k}"), perm));
        }
    }
    out
}

fn system_swap(bits: usize, a: usize, b: usize) -> OnticPerm {
    (0..ontic_count(bits))
        .map(|o| {
            let (da, db) = (digit(bits, o, a), digit(bits, o, b));
            let (sa, sb) = (2 * (bits - 1 - a), 2 * (bits - 1 - b));
            (o & !(3 << sa) & !(3 << sb)) | da << sb | db << sa
        })
        .collect()
}

/// Designated transformations: all 24 permutations for one system;
/// local generators, system swaps and toy CNOTs otherwise.
pub fn designated_transformations(bits: usize) -> Result<Vec<(String, OnticPerm)>> {
    if bits == 1 {
        let mut all = Vec::new();
        let mut p = vec![0usize, 1, 2, 3];
        permute_all(&mut p, 0, &mut all);
        all.sort();
        return Ok(all
            .into_iter()
            .map(|p| (p.iter().map(|d| char::from(b'1' + *d as u8)).collect::<String>(), p))
            .collect());
    }
    let mut out = local_generators(bits);
    for a in 0..bits {
        for b in a + 1..bits {
            out.push((format!("swap{a}{b}"), system_swap(bits, a, b)));
        }
    }
    for c in 0..bits {
        for t in 0..bits {
            if c != t {
                out.push((format!("cnot{c}{t}"), toy_cnot(bits, c, t)?));
            }
        }
    }
    Ok(out)
}

fn permute_all(p: &mut Vec<usize>, k: usize, out: &mut Vec<OnticPerm>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute_all(p, k + 1, out);
        p.swap(k, i);
    }
}

/// The toy model on `bits` systems.
///
/// Effects are the images `2ⁿ ρ` of the pure states under the self-dualizing
/// inner product; the unit effect is the all-ones vector.
pub fn stm_system(bits: usize) -> Result<GptSystem<Q>> {
    let states = pure_states(bits)?;
    let dim = ontic_count(bits);
    let scale = Q::from_i64(1 << bits);
    let svecs: Vec<Vec<Q>> = states.iter().map(|s| s.vector(bits)).collect();
    let evecs: Vec<Vec<Q>> = svecs.iter().map(|v| v.iter().map(|x| x * &scale).collect()).collect();
    let unit = vec![Q::from_i64(1); dim];
    let maps = designated_transformations(bits)?
        .into_iter()
        .map(|(name, p)| NamedMap { name, matrix: Matrix::permutation(&p) })
        .collect();
    let frame_states: Vec<Vec<Q>> = (0..1usize << bits).map(|f| mask_vector(bits, z_frame_support(bits, f))).collect();
    let frame_effects: Vec<Vec<Q>> =
        frame_states.iter().map(|v| v.iter().map(|x| x * &scale).collect()).collect();
    let z_meas = Measurement::new(&unit, frame_effects)?;
    GptSystem::new(
        format!("stm({bits})"),
        ConeModel::Polyhedral(Cone::from_extreme_rays(dim, svecs)?),
        ConeModel::Polyhedral(Cone::from_extreme_rays(dim, evecs)?),
        unit,
    )?
    .with_transformations(maps)?
    .with_frames(vec![FrameWithMeasurement::designated(frame_states, z_meas, true)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observables_match_the_diagonals() {
        let d = |p| ToyObservable::new(vec![p], false).diagonal();
        assert_eq!(d(Pauli::X), vec![1, -1, 1, -1]);
        assert_eq!(d(Pauli::Y), vec![1, -1, -1, 1]);
        assert_eq!(d(Pauli::Z), vec![1, 1, -1, -1]);
        assert_eq!(d(Pauli::I), vec![1, 1, 1, 1]);
        let x = ToyObservable::new(vec![Pauli::X], false);
        let z = ToyObservable::new(vec![Pauli::Z], false);
        assert_eq!(x.mul(&z), ToyObservable::new(vec![Pauli::Y], false));
        assert_eq!(x.mul(&z), z.mul(&x));
    }

    #[test]
    fn single_system_states() {
        let s = pure_states(1).unwrap();
        let labels: Vec<&str> = s.iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, vec!["x+", "x-", "y+", "y-", "z+", "z-"]);
        assert_eq!(mask_labels(1, s[0].support), vec!["1", "3"]);
        assert_eq!(mask_labels(1, s[4].support), vec!["1", "2"]);
    }

    #[test]
    fn toy_cnot_entangles_x_plus_z_plus() {
        let p = toy_cnot(2, 0, 1).unwrap();
        let img = permute_mask(&p, product_support(&["x+", "z+"]).unwrap());
        assert_eq!(mask_labels(2, img), vec!["11", "22", "33", "44"]);
        assert_eq!(mask_labels(2, product_support(&["z+", "x+"]).unwrap()), vec!["11", "13", "21", "23"]);
    }

    #[test]
    fn validity_of_permutations() {
        for (_, p) in designated_transformations(1).unwrap() {
            assert!(is_valid_permutation(1, &p).unwrap());
        }
        let mut p: OnticPerm = (0..16).collect();
        p.swap(0, 1);
        assert!(!ontic_permutation_to_map(2, &p).unwrap().valid);
        assert_eq!(toy_fan(2).unwrap(), compose(&toy_cnot(3, 0, 1).unwrap(), &toy_cnot(3, 0, 2).unwrap()));
    }
}
