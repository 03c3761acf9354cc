//! Hermitian matrices in real coordinates, exact PSD tests, Pauli words and
//! stabilizer states.
//!
//! An `n×n` Hermitian matrix is stored as `n²` reals: the diagonal, then
//! `Re ρ_kl` for `k < l` in lexicographic order, then `Im ρ_kl` in the same
//! order. Effects are stored as functionals in the dual coordinates, so that
//! `f·r = tr(E ρ)`; off-diagonal functional entries carry a factor of 2.

use crate::error::{check_dim, Error, Result};
use crate::numeric::{CMatrix, Complex, Matrix, Scalar};

pub fn hermitian_dim(n: usize) -> usize {
    n * n
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn pair_index(n: usize, k: usize, l: usize) -> usize {
    debug_assert!(k < l);
    // pairs (0,1),(0,2),...,(0,n-1),(1,2),...
    k * n - k * (k + 1) / 2 + (l - k - 1)
}

/// Order `n` of a Hermitian matrix with `dim` real coordinates.
pub fn order_from_dim(dim: usize) -> Result<usize> {
    let n = (dim as f64).sqrt().round() as usize;
    if n * n != dim {
        return Err(Error::Invalid(format!("{dim} is not a square dimension")));
    }
    Ok(n)
}

pub fn density_coords<S: Scalar>(m: &CMatrix<S>) -> Vec<S> {
    let n = m.n();
    let p = pair_count(n);
    let mut v = vec![S::zero(); n * n];
    for k in 0..n {
        v[k] = m.re.get(k, k).clone();
        for l in k + 1..n {
            let i = pair_index(n, k, l);
            v[n + i] = m.re.get(k, l).clone();
            v[n + p + i] = m.im.get(k, l).clone();
        }
    }
    v
}

pub fn density_matrix<S: Scalar>(n: usize, v: &[S]) -> Result<CMatrix<S>> {
    check_dim(n * n, v.len())?;
    let p = pair_count(n);
    let mut m = CMatrix::zeros(n);
    for k in 0..n {
        m.set(k, k, Complex::new(v[k].clone(), S::zero()));
        for l in k + 1..n {
            let i = pair_index(n, k, l);
            let z = Complex::new(v[n + i].clone(), v[n + p + i].clone());
            m.set(l, k, z.conj());
            m.set(k, l, z);
        }
    }
    Ok(m)
}

pub fn effect_coords<S: Scalar>(m: &CMatrix<S>) -> Vec<S> {
    let n = m.n();
    let two = S::from_i64(2);
    let mut v = density_coords(m);
    for x in v[n..].iter_mut() {
        *x = x.mul_r(&two);
    }
    v
}

pub fn effect_matrix<S: Scalar>(n: usize, f: &[S]) -> Result<CMatrix<S>> {
    check_dim(n * n, f.len())?;
    let half = S::half();
    let v: Vec<S> = f
        .iter()
        .enumerate()
        .map(|(i, x)| if i < n { x.clone() } else { x.mul_r(&half) })
        .collect();
    density_matrix(n, &v)
}

/// Real-coordinate matrix of `ρ ↦ U ρ U†`.
pub fn adjoint_action<S: Scalar>(u: &CMatrix<S>) -> Matrix<S> {
    let n = u.n();
    let p = pair_count(n);
    let cols: Vec<Vec<CMatrixEntry<S>>> = (0..n).map(|k| column(u, k)).collect();
    let mut t = Matrix::zeros(n * n, n * n);
    let mut put = |j: usize, m: &CMatrix<S>| {
        for (i, x) in density_coords(m).into_iter().enumerate() {
            t.set(i, j, x);
        }
    };
    for k in 0..n {
        put(k, &outer(&cols[k], &cols[k]));
        for l in k + 1..n {
            let i = pair_index(n, k, l);
            let a = outer(&cols[k], &cols[l]);
            let b = outer(&cols[l], &cols[k]);
            // E_kl + E_lk  and  i(E_kl - E_lk)
            put(n + i, &a.add(&b));
            let diff = a.add(&b.scale(&Complex::new(-S::one(), S::zero())));
            put(n + p + i, &diff.scale(&Complex::i()));
        }
    }
    t
}

type CMatrixEntry<S> = Complex<S>;

fn column<S: Scalar>(u: &CMatrix<S>, k: usize) -> Vec<Complex<S>> {
    (0..u.n()).map(|i| u.get(i, k)).collect()
}

/// `a b†`
fn outer<S: Scalar>(a: &[Complex<S>], b: &[Complex<S>]) -> CMatrix<S> {
    let n = a.len();
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n {
            m.set(i, j, a[i].mul(&b[j].conj()));
        }
    }
    m
}

/// Transpose on the second tensor factor of an `(n_a·n_b)`-square matrix.
pub fn partial_transpose<S: Scalar>(m: &CMatrix<S>, n_a: usize, n_b: usize) -> Result<CMatrix<S>> {
    check_dim(n_a * n_b, m.n())?;
    let mut out = CMatrix::zeros(m.n());
    for ia in 0..n_a {
        for ib in 0..n_b {
            for ja in 0..n_a {
                for jb in 0..n_b {
                    out.set(ia * n_b + jb, ja * n_b + ib, m.get(ia * n_b + ib, ja * n_b + jb));
                }
            }
        }
    }
    Ok(out)
}

/// Projector `|v><v|` for a (not necessarily normalized) vector.
pub fn projector<S: Scalar>(v: &[Complex<S>]) -> CMatrix<S> {
    outer(v, v)
}

#[derive(Clone, Debug, PartialEq)]
pub enum PsdVerdict<S> {
    /// `P M P† = diag(pivots)` with nonnegative pivots.
    Psd { congruence: CMatrix<S>, pivots: Vec<S> },
    /// `v† M v < 0`.
    NotPsd { vector: Vec<Complex<S>> },
}

impl<S: Scalar> PsdVerdict<S> {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdVerdict::Psd { .. })
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            PsdVerdict::Psd { pivots, .. } => Some(pivots.iter().filter(|p| p.is_pos()).count()),
            _ => None,
        }
    }

    pub fn verify(&self, m: &CMatrix<S>) -> bool {
        match self {
            PsdVerdict::Psd { congruence, pivots } => {
                if pivots.iter().any(|p| p.is_neg()) {
                    return false;
                }
                let Ok(d) = congruence.conjugate(m) else { return false };
                let mut want = CMatrix::zeros(m.n());
                for (i, p) in pivots.iter().enumerate() {
                    want.set(i, i, Complex::new(p.clone(), S::zero()));
                }
                d.approx_eq(&want)
                    && (0..m.n()).all(|i| congruence.get(i, i).approx_eq(&Complex::one()))
            }
            PsdVerdict::NotPsd { vector } => quadratic_form(m, vector).is_neg(),
        }
    }
}

/// `v† M v` (real for Hermitian `M`).
pub fn quadratic_form<S: Scalar>(m: &CMatrix<S>, v: &[Complex<S>]) -> S {
    let n = m.n();
    let mut acc = Complex::zero();
    for i in 0..n {
        if v[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if v[j].is_zero() {
                continue;
            }
            acc = acc.add(&v[i].conj().mul(&m.get(i, j)).mul(&v[j]));
        }
    }
    acc.re
}

/// Exact congruence (pivoted LDL) test for positive semidefiniteness.
pub fn psd_check<S: Scalar>(m: &CMatrix<S>) -> Result<PsdVerdict<S>> {
    if !m.is_hermitian() {
        return Err(Error::Invalid("PSD test on a non-Hermitian matrix".into()));
    }
    let n = m.n();
    let mut s = m.clone();
    let mut p = CMatrix::identity(n);
    let row = |p: &CMatrix<S>, k: usize| -> Vec<Complex<S>> { (0..n).map(|j| p.get(k, j)).collect() };
    for k in 0..n {
        let d = s.re.get(k, k).clone();
        if d.is_neg() {
            let v = row(&p, k).iter().map(|z| z.conj()).collect();
            return Ok(PsdVerdict::NotPsd { vector: v });
        }
        if d.is_negligible() {
            if let Some(j) = (k + 1..n).find(|&j| !s.get(k, j).is_zero()) {
                let skj = s.get(k, j);
                let sjj = s.re.get(j, j).abs();
                let c = sjj.add_r(&S::one()).div_r(&skj.norm_sqr());
                let a = skj.conj().scale(&-c);
                let pk = row(&p, k);
                let pj = row(&p, j);
                let r: Vec<Complex<S>> = pk.iter().zip(&pj).map(|(x, y)| a.mul(x).add(y)).collect();
                return Ok(PsdVerdict::NotPsd { vector: r.iter().map(|z| z.conj()).collect() });
            }
            continue;
        }
        for j in k + 1..n {
            let sjk = s.get(j, k);
            if sjk.is_zero() {
                continue;
            }
            let f = sjk.scale(&S::one().div_r(&d));
            for c in 0..n {
                let v = s.get(j, c).sub(&f.mul(&s.get(k, c)));
                s.set(j, c, v);
            }
            let fc = f.conj();
            for r in 0..n {
                let v = s.get(r, j).sub(&fc.mul(&s.get(r, k)));
                s.set(r, j, v);
            }
            for c in 0..n {
                let v = p.get(j, c).sub(&f.mul(&p.get(k, c)));
                p.set(j, c, v);
            }
        }
    }
    let pivots = (0..n).map(|i| s.re.get(i, i).clone()).collect();
    Ok(PsdVerdict::Psd { congruence: p, pivots })
}

// ---------------------------------------------------------------- Paulis

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn matrix<S: Scalar>(self) -> CMatrix<S> {
        let o = S::one;
        let z = S::zero;
        let r = |a: [[S; 2]; 2]| Matrix::from_rows(&[a[0].to_vec(), a[1].to_vec()]).unwrap();
        match self {
            Pauli::I => CMatrix::identity(2),
            Pauli::X => CMatrix::real(r([[z(), o()], [o(), z()]])),
            Pauli::Z => CMatrix::real(r([[o(), z()], [z(), -o()]])),
            Pauli::Y => CMatrix::from_parts(Matrix::zeros(2, 2), r([[z(), -o()], [o(), z()]])).unwrap(),
        }
    }
}

pub fn word_string(word: &[Pauli]) -> String {
    word.iter().map(|p| p.symbol()).collect()
}

pub fn parse_word(s: &str) -> Result<Vec<Pauli>> {
    s.chars()
        .map(|c| match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::Parse(format!("bad Pauli letter {c:?} in {s:?}"))),
        })
        .collect()
}

pub fn pauli_word_matrix<S: Scalar>(word: &[Pauli]) -> CMatrix<S> {
    word.iter()
        .fold(CMatrix::identity(1), |acc, p| acc.kron(&p.matrix()))
}

/// All Pauli words of length `n`, lexicographic in `I < X < Y < Z`.
pub fn all_words(n: usize) -> Vec<Vec<Pauli>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                Pauli::ALL.iter().map(move |&p| {
                    let mut w = w.clone();
                    w.push(p);
                    w
                })
            })
            .collect();
    }
    out
}

/// `M = c·P` for a single Pauli word `P`, if so.
pub fn as_scaled_pauli<S: Scalar>(m: &CMatrix<S>, n_qubits: usize) -> Option<(Complex<S>, Vec<Pauli>)> {
    let dim = m.n();
    let inv = S::one().div_r(&S::from_i64(dim as i64));
    let mut found = None;
    for w in all_words(n_qubits) {
        let c = pauli_word_matrix::<S>(&w).mul(m).ok()?.trace().scale(&inv);
        if c.is_zero() {
            continue;
        }
        if found.is_some() {
            return None;
        }
        found = Some((c, w));
    }
    let (c, w) = found?;
    pauli_word_matrix::<S>(&w).scale(&c).approx_eq(m).then_some((c, w))
}

#[derive(Clone, Debug)]
pub struct Conjugate<S> {
    pub wire: usize,
    pub generator: Pauli,
    pub image: CMatrix<S>,
    /// Phase and word when the image is in the Pauli group.
    pub pauli: Option<(Complex<S>, Vec<Pauli>)>,
}

#[derive(Clone, Debug)]
pub struct CliffordReport<S> {
    pub is_clifford: bool,
    pub conjugates: Vec<Conjugate<S>>,
}

impl<S: Scalar> CliffordReport<S> {
    pub fn first_non_pauli(&self) -> Option<&Conjugate<S>> {
        self.conjugates.iter().find(|c| c.pauli.is_none())
    }
}

fn is_unit_phase<S: Scalar>(c: &Complex<S>) -> bool {
    let one = Complex::one();
    let i = Complex::i();
    [one.clone(), one.neg(), i.clone(), i.neg()].iter().any(|p| p.approx_eq(c))
}

fn single_wire(n: usize, wire: usize, p: Pauli) -> Vec<Pauli> {
    (0..n).map(|k| if k == wire { p } else { Pauli::I }).collect()
}

/// Conjugates every single-qubit `X` and `Z` on every wire by `U`; wire 0 is
/// the most significant tensor factor.
pub fn clifford_report<S: Scalar>(u: &CMatrix<S>, n_qubits: usize) -> Result<CliffordReport<S>> {
    if n_qubits > 3 {
        return Err(Error::Unsupported(format!("Clifford test on {n_qubits} qubits")));
    }
    check_dim(1 << n_qubits, u.n())?;
    if !u.is_unitary()? {
        return Err(Error::Invalid("matrix is not unitary".into()));
    }
    let mut conjugates = Vec::new();
    for wire in 0..n_qubits {
        for g in [Pauli::X, Pauli::Z] {
            let p = pauli_word_matrix::<S>(&single_wire(n_qubits, wire, g));
            let image = u.conjugate(&p)?;
            let pauli = as_scaled_pauli(&image, n_qubits).filter(|(c, _)| is_unit_phase(c));
            conjugates.push(Conjugate { wire, generator: g, image, pauli });
        }
    }
    let is_clifford = conjugates.iter().all(|c| c.pauli.is_some());
    Ok(CliffordReport { is_clifford, conjugates })
}

pub fn is_clifford<S: Scalar>(u: &CMatrix<S>, n_qubits: usize) -> Result<bool> {
    Ok(clifford_report(u, n_qubits)?.is_clifford)
}

// ---------------------------------------------------------------- gates

/// Basis permutation unitary from a map on computational basis labels.
pub fn basis_permutation<S: Scalar>(n_qubits: usize, f: impl Fn(usize) -> usize) -> CMatrix<S> {
    let perm: Vec<usize> = (0..1usize << n_qubits).map(f).collect();
    CMatrix::permutation(&perm)
}

fn bit(x: usize, n: usize, wire: usize) -> usize {
    (x >> (n - 1 - wire)) & 1
}

pub fn cnot<S: Scalar>(n_qubits: usize, control: usize, target: usize) -> CMatrix<S> {
    basis_permutation(n_qubits, |x| x ^ (bit(x, n_qubits, control) << (n_qubits - 1 - target)))
}

pub fn swap<S: Scalar>(n_qubits: usize, a: usize, b: usize) -> CMatrix<S> {
    basis_permutation(n_qubits, |x| {
        let (ba, bb) = (bit(x, n_qubits, a), bit(x, n_qubits, b));
        let mut y = x & !(1 << (n_qubits - 1 - a)) & !(1 << (n_qubits - 1 - b));
        y |= bb << (n_qubits - 1 - a);
        y |= ba << (n_qubits - 1 - b);
        y
    })
}

pub fn toffoli<S: Scalar>(n_qubits: usize, c1: usize, c2: usize, target: usize) -> CMatrix<S> {
    basis_permutation(n_qubits, |x| {
        x ^ ((bit(x, n_qubits, c1) & bit(x, n_qubits, c2)) << (n_qubits - 1 - target))
    })
}

pub fn pauli_x_on<S: Scalar>(n_qubits: usize, wire: usize) -> CMatrix<S> {
    basis_permutation(n_qubits, |x| x ^ (1 << (n_qubits - 1 - wire)))
}

/// Hadamard on one wire; entries are `±1/√2`, so only the float backend can
/// represent it exactly enough. The unnormalized `√2·H` is returned for exact
/// backends via [`hadamard_scaled`].
pub fn hadamard_scaled<S: Scalar>() -> CMatrix<S> {
    let o = S::one;
    CMatrix::real(Matrix::from_rows(&[vec![o(), o()], vec![o(), -o()]]).unwrap())
}

// ---------------------------------------------------------------- stabilizer states

/// Symplectic vector of a Pauli word: bit `2k` is the X part of wire `k`,
/// bit `2k+1` the Z part.
pub fn word_to_bits(word: &[Pauli]) -> u32 {
    let mut v = 0;
    for (k, p) in word.iter().enumerate() {
        let (x, z) = p.bits();
        v |= (x as u32) << (2 * k) | (z as u32) << (2 * k + 1);
    }
    v
}

pub fn bits_to_word(n: usize, v: u32) -> Vec<Pauli> {
    (0..n).map(|k| Pauli::from_bits(v >> (2 * k) & 1 == 1, v >> (2 * k + 1) & 1 == 1)).collect()
}

/// Symplectic form: 1 iff the Pauli words anticommute.
pub fn symplectic(n: usize, a: u32, b: u32) -> u32 {
    let mut s = 0;
    for k in 0..n {
        let (ax, az) = (a >> (2 * k) & 1, a >> (2 * k + 1) & 1);
        let (bx, bz) = (b >> (2 * k) & 1, b >> (2 * k + 1) & 1);
        s ^= ax & bz ^ az & bx;
    }
    s
}

/// Every Lagrangian subspace of `F₂^{2n}`, each given by a reduced basis.
///
/// Order: subspaces sorted by their sorted list of nonzero elements, with
/// elements compared as Pauli words (`I < X < Y < Z`, wire 0 first).
pub fn lagrangian_subspaces(n: usize) -> Vec<Vec<u32>> {
    let total = 2 * n;
    let mut spaces: Vec<Vec<u32>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let elems: Vec<u32> = (1..1u32 << total).collect();
    // independent isotropic bases in nondecreasing order, closed off at size n
    fn span(basis: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32];
        for &b in basis {
            let ext: Vec<u32> = out.iter().map(|x| x ^ b).collect();
            out.extend(ext);
        }
        out
    }
    fn rec(
        n: usize,
        elems: &[u32],
        start: usize,
        basis: &mut Vec<u32>,
        spaces: &mut Vec<Vec<u32>>,
        seen: &mut std::collections::HashSet<Vec<u32>>,
    ) {
        if basis.len() == n {
            let mut s = span(basis);
            s.sort_unstable();
            if seen.insert(s) {
                spaces.push(basis.clone());
            }
            return;
        }
        let cur = span(basis);
        for (i, &e) in elems.iter().enumerate().skip(start) {
            if cur.contains(&e) || basis.iter().any(|&b| symplectic(n, b, e) == 1) {
                continue;
            }
            // canonical: the basis element must be the least element outside
            // the current span of the final space; enforced by dedup above
            basis.push(e);
            rec(n, elems, i + 1, basis, spaces, seen);
            basis.pop();
        }
    }
    rec(n, &elems, 0, &mut Vec::new(), &mut spaces, &mut seen);
    let word_key = |v: u32| -> Vec<Pauli> { bits_to_word(n, v) };
    let mut keyed: Vec<(Vec<Vec<Pauli>>, Vec<u32>)> = spaces
        .into_iter()
        .map(|b| {
            let mut els: Vec<Vec<Pauli>> = span(&b).into_iter().filter(|&x| x != 0).map(word_key).collect();
            els.sort();
            let mut basis = b;
            basis.sort_by_key(|&x| word_key(x));
            (els, basis)
        })
        .collect();
    keyed.sort();
    keyed.into_iter().map(|(_, b)| b).collect()
}

/// Stabilizer generators with signs (`true` = −1 eigenvalue).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerLabel {
    pub generators: Vec<(bool, Vec<Pauli>)>,
}

impl std::fmt::Display for StabilizerLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .generators
            .iter()
            .map(|(neg, w)| format!("{}{}", if *neg { '-' } else { '+' }, word_string(w)))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Every `n`-qubit stabilizer state as `(label, density matrix)`.
pub fn stabilizer_states<S: Scalar>(n: usize) -> Vec<(StabilizerLabel, CMatrix<S>)> {
    let dim = 1usize << n;
    let half = S::half();
    let mut out = Vec::new();
    for basis in lagrangian_subspaces(n) {
        for signs in 0..1u32 << n {
            let mut rho = CMatrix::identity(dim);
            let mut gens = Vec::new();
            for (k, &b) in basis.iter().enumerate() {
                let neg = signs >> (n - 1 - k) & 1 == 1;
                let w = bits_to_word(n, b);
                let mut p = pauli_word_matrix::<S>(&w);
                if neg {
                    p = p.scale(&Complex::new(-S::one(), S::zero()));
                }
                let proj = CMatrix::identity(dim).add(&p).scale(&Complex::new(half.clone(), S::zero()));
                rho = rho.mul(&proj).expect("square");
                gens.push((neg, w));
            }
            out.push((StabilizerLabel { generators: gens }, rho));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    #[test]
    fn x_plus_coordinates() {
        let plus = vec![Complex::new(q(1, 1), q(0, 1)), Complex::new(q(1, 1), q(0, 1))];
        let rho = projector(&plus).scale(&Complex::new(q(1, 2), q(0, 1)));
        assert_eq!(density_coords(&rho), vec![q(1, 2), q(1, 2), q(1, 2), q(0, 1)]);
        let e = effect_coords(&rho);
        assert_eq!(e, vec![q(1, 2), q(1, 2), q(1, 1), q(0, 1)]);
        assert_eq!(crate::numeric::dot(&e, &density_coords(&rho)), q(1, 1));
        assert_eq!(density_matrix(2, &density_coords(&rho)).unwrap(), rho);
        assert_eq!(effect_matrix(2, &e).unwrap(), rho);
    }

    #[test]
    fn psd_examples() {
        let y_plus = vec![Complex::new(q(1, 1), q(0, 1)), Complex::new(q(0, 1), q(1, 1))];
        let rho = projector(&y_plus);
        let v = psd_check(&rho).unwrap();
        assert!(v.is_psd() && v.verify(&rho));
        assert_eq!(v.rank(), Some(1));
        let z = Pauli::Z.matrix::<Q>();
        let v = psd_check(&z).unwrap();
        assert!(!v.is_psd() && v.verify(&z));
        // zero pivot with nonzero off-diagonal
        let m = CMatrix::real(Matrix::from_rows(&[vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap());
        let v = psd_check(&m).unwrap();
        assert!(!v.is_psd() && v.verify(&m));
    }

    #[test]
    fn clifford_examples() {
        assert!(is_clifford(&cnot::<Q>(2, 0, 1), 2).unwrap());
        assert!(is_clifford(&swap::<Q>(2, 0, 1), 2).unwrap());
        let r = clifford_report(&toffoli::<Q>(3, 0, 1, 2), 3).unwrap();
        assert!(!r.is_clifford);
        assert!(r.first_non_pauli().is_some());
        let not_unitary = CMatrix::real(Matrix::from_rows(&[vec![q(1, 1), q(1, 1)], vec![q(0, 1), q(1, 1)]]).unwrap());
        assert!(is_clifford(&not_unitary, 1).is_err());
    }

    #[test]
    fn stabilizer_counts() {
        assert_eq!(lagrangian_subspaces(1).len(), 3);
        assert_eq!(lagrangian_subspaces(2).len(), 15);
        assert_eq!(stabilizer_states::<Q>(1).len(), 6);
        let labels: Vec<String> = stabilizer_states::<Q>(1).iter().map(|(l, _)| l.to_string()).collect();
        assert_eq!(labels, vec!["+X", "-X", "+Y", "-Y", "+Z", "-Z"]);
    }

    #[test]
    fn adjoint_action_matches_conjugation() {
        let u = cnot::<Q>(2, 0, 1);
        let t = adjoint_action(&u);
        for (_, rho) in stabilizer_states::<Q>(2) {
            let direct = density_coords(&u.conjugate(&rho).unwrap());
            assert_eq!(t.mul_vec(&density_coords(&rho)).unwrap(), direct);
        }
    }
}
