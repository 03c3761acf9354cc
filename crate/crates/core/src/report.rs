//! JSON reports and self-contained certificates.
//!
//! Certificates carry every number needed to re-check them. The checker in
//! this module works on the serialized strings and shares no code with the
//! routines that produced them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Backend, Scalar};
use crate::Q;

pub const REPORT_SCHEMA: &str = "gptdarwin-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    BudgetExhausted,
}

impl Outcome {
    pub fn from_pass(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 2,
            Outcome::BudgetExhausted => 4,
        }
    }
}

pub fn texts<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(|x| x.to_text()).collect()
}

pub fn text_rows<S: Scalar>(vs: &[Vec<S>]) -> Vec<Vec<String>> {
    vs.iter().map(|v| texts(v)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `witness · g ≥ 0` for every generator and `witness · point < 0`.
    Witness {
        claim: String,
        backend: Backend,
        generators: Vec<Vec<String>>,
        point: Vec<String>,
        witness: Vec<String>,
    },
    /// `point = Σ weight · generators[index]` with nonnegative weights.
    Combination {
        claim: String,
        backend: Backend,
        generators: Vec<Vec<String>>,
        point: Vec<String>,
        weights: Vec<(usize, String)>,
    },
    /// Conjugating the Pauli word by the basis-permutation unitary does not
    /// give a phase times a Pauli word.
    NonPauliConjugate { claim: String, qubits: usize, permutation: Vec<usize>, word: String },
}

impl Certificate {
    pub fn claim(&self) -> &str {
        match self {
            Certificate::Witness { claim, .. }
            | Certificate::Combination { claim, .. }
            | Certificate::NonPauliConjugate { claim, .. } => claim,
        }
    }

    pub fn witness<S: Scalar>(claim: impl Into<String>, generators: &[Vec<S>], point: &[S], witness: &[S]) -> Self {
        Certificate::Witness {
            claim: claim.into(),
            backend: S::BACKEND,
            generators: text_rows(generators),
            point: texts(point),
            witness: texts(witness),
        }
    }

    pub fn combination<S: Scalar>(
        claim: impl Into<String>,
        generators: &[Vec<S>],
        point: &[S],
        weights: &[(usize, S)],
    ) -> Self {
        Certificate::Combination {
            claim: claim.into(),
            backend: S::BACKEND,
            generators: text_rows(generators),
            point: texts(point),
            weights: weights.iter().map(|(i, w)| (*i, w.to_text())).collect(),
        }
    }
}

fn parse_all<S: Scalar>(v: &[String]) -> Result<Vec<S>> {
    v.iter().map(|s| S::parse_text(s)).collect()
}

fn inner<S: Scalar>(a: &[S], b: &[S]) -> Result<S> {
    if a.len() != b.len() {
        return Err(Error::Dimension { expected: a.len(), got: b.len() });
    }
    Ok(a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone()))
}

fn check_witness<S: Scalar>(gens: &[Vec<String>], point: &[String], w: &[String]) -> Result<bool> {
    let w: Vec<S> = parse_all(w)?;
    if !inner(&w, &parse_all::<S>(point)?)?.is_neg() {
        return Ok(false);
    }
    for g in gens {
        if inner(&w, &parse_all::<S>(g)?)?.is_neg() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_combination<S: Scalar>(gens: &[Vec<String>], point: &[String], weights: &[(usize, String)]) -> Result<bool> {
    let p: Vec<S> = parse_all(point)?;
    let mut acc = vec![S::zero(); p.len()];
    for (i, w) in weights {
        let w = S::parse_text(w)?;
        let Some(g) = gens.get(*i) else { return Ok(false) };
        let g: Vec<S> = parse_all(g)?;
        if w.is_neg() || g.len() != p.len() {
            return Ok(false);
        }
        for (a, x) in acc.iter_mut().zip(&g) {
            *a = a.clone() + w.clone() * x.clone();
        }
    }
    Ok(acc.iter().zip(&p).all(|(a, b)| a.approx_eq(b)))
}

/// For `U|x⟩ = |π(x)⟩` and `P|x⟩ = φ(x)|x ⊕ f⟩`, the conjugate sends
/// `|r⟩` to `φ(π⁻¹r)|π(π⁻¹r ⊕ f)⟩`. It is a phase times a Pauli word iff
/// `π(π⁻¹r ⊕ f) = r ⊕ m` for a fixed `m` and `φ(π⁻¹r)/φ(π⁻¹0) = (−1)^{z·r}`
/// for a fixed `z`.
fn check_non_pauli(qubits: usize, perm: &[usize], word: &str) -> Result<bool> {
    let n = 1usize << qubits;
    let mut inv = vec![usize::MAX; n];
    for (x, &p) in perm.iter().enumerate() {
        if p >= n || inv[p] != usize::MAX {
            return Err(Error::Invalid("certificate permutation is not a bijection".into()));
        }
        inv[p] = x;
    }
    if perm.len() != n {
        return Err(Error::Invalid("certificate permutation has the wrong length".into()));
    }
    let chars: Vec<char> = word.chars().collect();
    if chars.len() != qubits {
        return Err(Error::Invalid(format!("word {word:?} for {qubits} qubits")));
    }
    // X and Y flip a wire, Z and Y contribute (−1)^bit; wire 0 is most significant
    let (mut flip, mut sign) = (0usize, 0usize);
    for (k, c) in chars.iter().enumerate() {
        let bit = 1 << (qubits - 1 - k);
        match c {
            'X' => flip |= bit,
            'Y' => {
                flip |= bit;
                sign |= bit;
            }
            'Z' => sign |= bit,
            'I' => {}
            _ => return Err(Error::Parse(format!("Pauli word {word:?}"))),
        }
    }
    let m = perm[inv[0] ^ flip];
    if (0..n).any(|r| perm[inv[r] ^ flip] != r ^ m) {
        return Ok(true);
    }
    let parity = |x: usize| x.count_ones() % 2 == 1;
    let sigma: Vec<bool> = (0..n).map(|r| parity(inv[r] & sign) ^ parity(inv[0] & sign)).collect();
    Ok(!(0..n).any(|z| (0..n).all(|r| sigma[r] == parity(z & r))))
}

/// Independent re-check of a serialized certificate.
pub fn verify_certificate(c: &Certificate) -> Result<bool> {
    match c {
        Certificate::Witness { backend, generators, point, witness, .. } => match backend {
            Backend::Rational => check_witness::<Q>(generators, point, witness),
            Backend::Float => check_witness::<f64>(generators, point, witness),
        },
        Certificate::Combination { backend, generators, point, weights, .. } => match backend {
            Backend::Rational => check_combination::<Q>(generators, point, weights),
            Backend::Float => check_combination::<f64>(generators, point, weights),
        },
        Certificate::NonPauliConjugate { qubits, permutation, word, .. } => check_non_pauli(*qubits, permutation, word),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub claim: String,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub subject: String,
    /// Echo of the input that produced the report.
    pub input: serde_json::Value,
    pub outcome: Outcome,
    pub summary: Vec<String>,
    pub data: serde_json::Value,
    pub certificates: Vec<Certificate>,
    /// Filled by [`Report::self_test`].
    pub self_test: Option<Vec<CertificateCheck>>,
    /// Wall-clock milliseconds; the only field that varies between runs.
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(subject: impl Into<String>, input: serde_json::Value) -> Self {
        Report {
            schema: REPORT_SCHEMA.into(),
            tool_version: TOOL_VERSION.into(),
            subject: subject.into(),
            input,
            outcome: Outcome::Pass,
            summary: Vec::new(),
            data: serde_json::Value::Null,
            certificates: Vec::new(),
            self_test: None,
            elapsed_ms: None,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    /// Re-verifies every certificate; a failed one turns the outcome into a failure.
    pub fn self_test(&mut self) -> Result<bool> {
        let checks = self
            .certificates
            .iter()
            .map(|c| Ok(CertificateCheck { claim: c.claim().to_string(), verified: verify_certificate(c)? }))
            .collect::<Result<Vec<_>>>()?;
        let ok = checks.iter().all(|c| c.verified);
        if !ok {
            self.outcome = Outcome::Fail;
        }
        self.self_test = Some(checks);
        Ok(ok)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// JSON with the timing field cleared, for reproducibility comparisons.
    pub fn to_json_untimed(&self) -> Result<String> {
        let mut r = self.clone();
        r.elapsed_ms = None;
        r.to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn witness_round_trip() {
        let gens = vec![vec![Q::one(), Q::zero()], vec![Q::zero(), Q::one()]];
        let p = vec![Q::from_i64(-1), Q::one()];
        let c = Certificate::witness("outside the orthant", &gens, &p, &[Q::one(), Q::zero()]);
        assert!(verify_certificate(&c).unwrap());
        let bad = Certificate::witness("bogus", &gens, &p, &[Q::zero(), Q::one()]);
        assert!(!verify_certificate(&bad).unwrap());
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<Certificate>(&json).unwrap(), c);
    }

    #[test]
    fn non_pauli_conjugate() {
        let toffoli: Vec<usize> = (0..8).map(|x| if x & 6 == 6 { x ^ 1 } else { x }).collect();
        let cnot: Vec<usize> = (0..8).map(|x| if x & 4 == 4 { x ^ 2 } else { x }).collect();
        for w in ["XII", "IXI", "IIX", "ZII", "IZI", "IIZ", "YYZ"] {
            assert!(!check_non_pauli(3, &cnot, w).unwrap(), "{w}");
        }
        assert!(check_non_pauli(3, &toffoli, "IIZ").unwrap());
        assert!(check_non_pauli(3, &toffoli, "XII").unwrap());
        assert!(!check_non_pauli(3, &toffoli, "IIX").unwrap());
    }

    #[test]
    fn combination_checks_weights() {
        let gens = vec![vec![Q::one(), Q::zero()], vec![Q::zero(), Q::one()]];
        let p = vec![Q::from_i64(2), Q::one()];
        let good = Certificate::combination("inside", &gens, &p, &[(0, Q::from_i64(2)), (1, Q::one())]);
        assert!(verify_certificate(&good).unwrap());
        let neg = Certificate::combination("inside", &gens, &p, &[(0, Q::from_i64(2)), (1, -Q::one())]);
        assert!(!verify_certificate(&neg).unwrap());
    }
}
