//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use gptdarwin::composition::{compose, corrupted_composite, qt_composite, stm_composite, Method};
use gptdarwin::cone::{membership_lp, Cone};
use gptdarwin::darwinism::{
    check_idealized_darwinism, check_idealized_darwinism_on, check_robust_spreading, ScenarioMap, ScenarioSpec,
    ScenarioTheory,
};
use gptdarwin::decoherence::{check_lemma5_commutation, demo_theorem7, qt_dephasing, DecoheringTheory};
use gptdarwin::demos::{self, DemoOptions};
use gptdarwin::lp::{self, Feasibility};
use gptdarwin::numeric::{approx_eq_vec, dot, CMatrix, Complex, Matrix, Scalar};
use gptdarwin::quantum;
use gptdarwin::report::{verify_certificate, Certificate, Outcome};
use gptdarwin::separability::{
    is_separable_effect_with, is_separable_state_with, separable_effect_generators, separable_state_generators,
    SeparabilityVerdict,
};
use gptdarwin::stm::{self, SearchOutcome};
use gptdarwin::theories;
use gptdarwin::{Result, Q};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const FIG1_LIMIT: Duration = Duration::from_secs(30);
const STM_FAN_LIMIT: Duration = Duration::from_secs(10);
const CLIFFORD_LIMIT: Duration = Duration::from_secs(1);
const ENUMERATION_LIMIT: Duration = Duration::from_secs(300);
const POLYGON_EPS: f64 = 1e-9;
const GOLDEN: f64 = 0.6180339887;
const CSWAP_BUDGET: u64 = 100_000_000;
const CONTROL_BUDGET: u64 = 100_000;
const LP_CASES: usize = 200;
const DUAL_CASES: usize = 100;
const MIXTURES: usize = 10;
const SEED: u64 = 0x5eed_da27;

type Verdict = Result<(bool, String)>;

fn q(n: i64, d: i64) -> Q {
    Q::ratio(n, d)
}

fn spec(theory: ScenarioTheory, d: usize, envs: usize) -> ScenarioSpec {
    ScenarioSpec { theory, d, envs, transformation: ScenarioMap::Fanout, fixed_env: None }
}

fn stm_vector(labels: &[&str]) -> Result<Vec<Q>> {
    Ok(stm::mask_vector(labels.len(), stm::product_support(labels)?))
}

fn witness_verifies(gens: &[Vec<Q>], point: &[Q], v: &SeparabilityVerdict<Q>) -> bool {
    match v.witness() {
        Some(w) => v.verify(gens, point) && verify_certificate(&Certificate::witness("", gens, point, w)).unwrap_or(false),
        None => false,
    }
}

fn bell_by_hand() -> CMatrix<Q> {
    let mut m = CMatrix::<Q>::zeros(4);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m.set(i, j, Complex::new(q(1, 2), q(0, 1)));
    }
    m
}

fn criterion_1() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for envs in 1..=3 {
        let start = Instant::now();
        let s = spec(ScenarioTheory::Qt, 2, envs).build()?;
        let ideal = check_idealized_darwinism(&s)?;
        let robust = check_robust_spreading(&s)?;
        let t = start.elapsed();
        let exact = ideal.passed && robust.passed && ideal.worst_residual == 0.0 && robust.worst_residual == 0.0;
        ok &= exact && (envs < 3 || t < FIG1_LIMIT);
        notes.push(format!("N={envs}: {} rows exact={exact} {:.1}s", ideal.rows.len() + robust.rows.len(), t.as_secs_f64()));
    }
    Ok((ok, notes.join("; ")))
}

fn criterion_2() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for envs in 1..=2 {
        let start = Instant::now();
        let s = spec(ScenarioTheory::Stm, 2, envs).build()?;
        let states = s.test_states().len();
        let ideal = check_idealized_darwinism(&s)?;
        let robust = check_robust_spreading(&s)?;
        let mut flips = 0;
        for mask in 0..1usize << envs {
            let env: Vec<&str> = (0..envs).map(|k| if mask >> k & 1 == 1 { "z-" } else { "z+" }).collect();
            let flipped: Vec<&str> = env.iter().map(|l| if *l == "z+" { "z-" } else { "z+" }).collect();
            let input = stm_vector(&[&["z-"][..], &env].concat())?;
            let want = stm_vector(&[&["z-"][..], &flipped].concat())?;
            let kept = stm_vector(&[&["z+"][..], &env].concat())?;
            if s.transformation.apply(&input)? == want && s.transformation.apply(&kept)? == kept {
                flips += 1;
            }
        }
        let t = start.elapsed();
        let exact = ideal.passed && robust.passed && ideal.worst_residual == 0.0 && robust.worst_residual == 0.0;
        ok &= states == 6 && exact && flips == 1 << envs && t < STM_FAN_LIMIT;
        notes.push(format!("N={envs}: {states} states exact={exact} flips {flips}/{} {:.1}s", 1 << envs, t.as_secs_f64()));
    }
    Ok((ok, notes.join("; ")))
}

fn criterion_3() -> Verdict {
    let s = spec(ScenarioTheory::Stm, 2, 1).build()?;
    let c = &s.composite;
    let out = s.transformation.apply(&stm_vector(&["x+", "z+"])?)?;
    let support = stm::mask_labels(2, stm::vector_support(&out));
    let gens = separable_state_generators(c)?;
    let v = is_separable_state_with(c, &gens, &out)?;
    let stm_ok = !v.is_separable() && witness_verifies(&gens, &out, &v);

    let s = spec(ScenarioTheory::Qt, 2, 1).build()?;
    let c = &s.composite;
    let input = c.product_state(&[theories::qubit_state("x+")?, theories::qubit_state("z+")?])?;
    let out = s.transformation.apply(&input)?;
    let bell = out == quantum::density_coords(&bell_by_hand());
    let gens = separable_state_generators(c)?;
    let v = is_separable_state_with(c, &gens, &out)?;
    let qt_ok = bell && !v.is_separable() && witness_verifies(&gens, &out, &v);
    Ok((stm_ok && qt_ok, format!("stm output {{{}}} entangled={stm_ok}; qt output is Bell={bell} entangled={qt_ok}", support.join(","))))
}

fn criterion_4() -> Verdict {
    let s = spec(ScenarioTheory::Stm, 2, 1).build()?;
    let c = &s.composite;
    let two = q(2, 1);
    let e = |l: &str| -> Result<Vec<Q>> { Ok(stm_vector(&[l])?.iter().map(|x| x * &two).collect()) };
    let pulled = s.transformation.pull_back(&c.product_effect(&[e("x+")?, e("z+")?])?)?;
    let gens = separable_effect_generators(c)?;
    let v = is_separable_effect_with(c, &gens, &pulled)?;
    let stm_ok = !v.is_separable() && witness_verifies(&gens, &pulled, &v);

    let s = spec(ScenarioTheory::Qt, 2, 1).build()?;
    let c = &s.composite;
    let effect = c.product_effect(&[theories::qubit_effect("x+")?, theories::qubit_effect("z+")?])?;
    let pulled = s.transformation.pull_back(&effect)?;
    // U†(|+⟩⟨+| ⊗ |0⟩⟨0|)U with U|x⟩ = |π(x)⟩ has entries E[π(i)][π(j)]
    let pi = |x: usize| if x & 2 == 2 { x ^ 1 } else { x };
    let e_entry = |a: usize, b: usize| if a & 1 == 0 && b & 1 == 0 { q(1, 2) } else { q(0, 1) };
    let mut hand = CMatrix::<Q>::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            hand.set(i, j, Complex::new(e_entry(pi(i), pi(j)), q(0, 1)));
        }
    }
    let got = quantum::effect_matrix(4, &pulled)?;
    let by_hand = got == hand && hand == bell_by_hand();
    let by_paulis = got == demos::bell_projector()?;
    let gens = separable_effect_generators(c)?;
    let v = is_separable_effect_with(c, &gens, &pulled)?;
    let qt_ok = by_hand && by_paulis && !v.is_separable() && witness_verifies(&gens, &pulled, &v);
    Ok((
        stm_ok && qt_ok,
        format!("stm pullback entangled={stm_ok}; qt pullback = hand conjugation {by_hand}, = (II+XX+ZZ-YY)/4 {by_paulis}, entangled={qt_ok}"),
    ))
}

fn criterion_5() -> Verdict {
    let f = demos::pentagon_facts()?;
    let sec = 1.0 / (2.0 * (std::f64::consts::PI / 5.0).cos());
    let gap = f.p_m2 - f.p_m1;
    let want_gap = (f.alpha - 0.5) * 2.0 / 3.0;
    let decomposed: Vec<f64> = (0..f.complement.len()).map(|k| f.alpha * (f.parts[0][k] + f.parts[1][k])).collect();
    let cert = Certificate::combination("", &f.parts, &f.complement, &[(0, f.alpha), (1, f.alpha)]);
    let ok = f.mci_frames == 0
        && !f.complement_is_pure
        && (f.alpha - GOLDEN).abs() < POLYGON_EPS
        && (f.alpha - sec).abs() < POLYGON_EPS
        && decomposed.iter().zip(&f.complement).all(|(a, b)| (a - b).abs() < POLYGON_EPS)
        && verify_certificate(&cert)?
        && gap > 0.0
        && (gap - want_gap).abs() < POLYGON_EPS;
    Ok((ok, format!("MCI-frames {}, ē₀ pure {}, α = {:.10}, gap {:.10} vs {:.10}", f.mci_frames, f.complement_is_pure, f.alpha, gap, want_gap)))
}

fn criterion_6() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, expected) in [(3, true), (4, true), (6, false), (8, false), (10, false)] {
        let v = demos::polygon_verdict(n)?;
        let witnessed = match &v.violation {
            Some((_, x)) => {
                let x = Q::parse_text(x).map(|v| v.to_f64()).or_else(|_| f64::parse_text(x))?;
                x > POLYGON_EPS && x < 1.0 - POLYGON_EPS
            }
            None => false,
        };
        ok &= v.quasi_classical == expected && (expected || witnessed);
        notes.push(format!("{n}:{}", if v.quasi_classical { "qc" } else if witnessed { "violated" } else { "unwitnessed" }));
    }
    Ok((ok, notes.join(" ")))
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let cnot = quantum::is_clifford(&quantum::cnot::<Q>(2, 0, 1), 2)?;
    let swap = quantum::is_clifford(&quantum::swap::<Q>(2, 0, 1), 2)?;
    let rep = quantum::clifford_report(&quantum::toffoli::<Q>(3, 0, 1, 2), 3)?;
    let t = start.elapsed();
    let word = rep
        .first_non_pauli()
        .map(|c| (0..3).map(|k| if k == c.wire { c.generator.symbol() } else { 'I' }).collect::<String>());
    let certified = match &word {
        Some(w) => verify_certificate(&Certificate::NonPauliConjugate {
            claim: String::new(),
            qubits: 3,
            permutation: (0..8).map(|x| if x & 6 == 6 { x ^ 1 } else { x }).collect(),
            word: w.clone(),
        })?,
        None => false,
    };
    let ok = cnot && swap && !rep.is_clifford && certified && t < CLIFFORD_LIMIT;
    Ok((ok, format!("CNOT {cnot}, SWAP {swap}, Toffoli {} (non-Pauli conjugate of {word:?} certified {certified}), {:.3}s", rep.is_clifford, t.as_secs_f64())))
}

/// Independent enumeration of pure toy-model states: maximal commuting
/// subgroups by depth-first search over Pauli words, times sign characters.
/// Word bits: `x_k` at `2k`, `z_k` at `2k+1`; ontic digit `d_k` of system `k`
/// pairs with a word through `x_k·(d_k & 1) + z_k·(d_k >> 1)`.
fn oracle_supports(n: usize) -> HashSet<u64> {
    let words = 1usize << (2 * n);
    let bit = |w: usize, i: usize| w >> i & 1;
    let commute = |a: usize, b: usize| (0..n).map(|k| bit(a, 2 * k) * bit(b, 2 * k + 1) + bit(a, 2 * k + 1) * bit(b, 2 * k)).sum::<usize>() % 2 == 0;
    fn dfs(n: usize, words: usize, commute: &dyn Fn(usize, usize) -> bool, basis: &mut Vec<usize>, span: Vec<usize>, found: &mut HashSet<Vec<usize>>, out: &mut Vec<Vec<usize>>) {
        if basis.len() == n {
            let mut key = span.clone();
            key.sort_unstable();
            if found.insert(key) {
                out.push(basis.clone());
            }
            return;
        }
        let start = basis.last().map_or(1, |&w| w + 1);
        for w in start..words {
            if span.contains(&w) || !basis.iter().all(|&b| commute(b, w)) {
                continue;
            }
            let next: Vec<usize> = span.iter().flat_map(|&s| [s, s ^ w]).collect();
            basis.push(w);
            dfs(n, words, commute, basis, next, found, out);
            basis.pop();
        }
    }
    let mut bases = Vec::new();
    dfs(n, words, &commute, &mut Vec::new(), vec![0], &mut HashSet::new(), &mut bases);
    let pairing = |w: usize, o: usize| {
        (0..n)
            .map(|k| {
                let d = o >> (2 * (n - 1 - k)) & 3;
                bit(w, 2 * k) * (d & 1) + bit(w, 2 * k + 1) * (d >> 1)
            })
            .sum::<usize>()
            % 2
    };
    let mut supports = HashSet::new();
    for basis in &bases {
        for signs in 0..1usize << n {
            let mask = (0..words)
                .filter(|&o| basis.iter().enumerate().all(|(i, &g)| pairing(g, o) == signs >> i & 1))
                .fold(0u64, |m, o| m | 1 << o);
            supports.insert(mask);
        }
    }
    supports
}

fn criterion_8() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, expected) in [(1, 6), (2, 60), (3, 1080)] {
        let start = Instant::now();
        let lib: Vec<u64> = stm::pure_states(n)?.iter().map(|s| s.support).collect();
        let lib_set: HashSet<u64> = lib.iter().copied().collect();
        let oracle = oracle_supports(n);
        let t = start.elapsed();
        let agree = lib.len() == expected && lib_set.len() == expected && oracle == lib_set;
        ok &= agree && t < ENUMERATION_LIMIT;
        notes.push(format!("n={n}: {} / oracle {} {:.2}s", lib.len(), oracle.len(), t.as_secs_f64()));
    }
    Ok((ok, notes.join("; ")))
}

fn criterion_9() -> Verdict {
    let cases = vec![
        compose(vec![theories::cpt(2)?, theories::cpt(2)?], Method::MinTensor)?,
        compose(vec![theories::gbit(), theories::gbit()], Method::MaxTensor)?,
        qt_composite(2)?,
        stm_composite(2)?,
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for c in &cases {
        let r = c.validate_composition()?;
        ok &= r.passed();
        notes.push(format!("{} {}", c.system.name(), if r.passed() { "i-vi" } else { "FAILED" }));
    }
    let bad = corrupted_composite()?.validate_composition()?;
    let item_ii = bad.item("ii").map(|i| i.passed);
    ok &= item_ii == Some(false);
    notes.push(format!("corrupted fails ii: {}", item_ii == Some(false)));
    Ok((ok, notes.join("; ")))
}

fn criterion_10() -> Verdict {
    let c = gptdarwin::composition::boxworld_pair()?;
    let gens = separable_effect_generators(&c)?;
    let effects = c.system.effects().generators();
    let mut certified = 0;
    for e in effects {
        let v = is_separable_effect_with(&c, &gens, e)?;
        if v.is_separable() && v.verify(&gens, e) {
            certified += 1;
        }
    }
    let gbit = theories::gbit();
    let frame = gbit.find_mci_frames()?.into_iter().next();
    let other = match &frame {
        Some(f) => gbit.find_inequivalent_refined_measurement(&f.measurement)?.map(|m| m.differs_from(&f.measurement)),
        None => None,
    };
    let report = demos::run_demo("boxworld-no-darwinism", &DemoOptions::default())?;
    let concluded = report.outcome == Outcome::Pass && report.data["no_idealized_darwinism"] == serde_json::json!(true);
    let ok = certified == effects.len() && other == Some(true) && concluded;
    Ok((ok, format!("{certified}/{} effect generators separable, inequivalent refined measurement {other:?}, report concludes {concluded}", effects.len())))
}

fn criterion_11() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for envs in 1..=2 {
        let r = demo_theorem7(DecoheringTheory::Qt, 2, envs)?;
        let exact = r.passed() && r.spreading.worst_residual == 0.0 && r.darwinism.worst_residual == 0.0;
        ok &= exact && r.commutation;
        notes.push(format!("N={envs}: checks exact={exact}, D·T=T·D {}", r.commutation));
    }
    // every permutation of the two-qubit pointer basis lifts and commutes
    let d = qt_dephasing(2)?;
    let mut lifted = 0;
    for p in permutations(4) {
        if let Some(t) = (d.lift)(&p)? {
            let direct = d.map.matmul(&t)? == t.matmul(&d.map)?;
            if direct && check_lemma5_commutation(&d, &t)? {
                lifted += 1;
            }
        }
    }
    ok &= lifted == 24;
    notes.push(format!("{lifted}/24 two-qubit lifts commute"));
    Ok((ok, notes.join("; ")))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut v = p.clone();
            v.insert(i, n - 1);
            out.push(v);
        }
    }
    out
}

fn criterion_12() -> Verdict {
    let main = stm::search_classical_implementation(3, &demos::cswap_target(), CSWAP_BUDGET)?;
    let control = stm::search_classical_implementation(2, &demos::POSITIVE_CONTROL, CONTROL_BUDGET)?;
    let control_ok = match &control.outcome {
        SearchOutcome::Found(p) => {
            stm::is_valid_permutation(2, p)?
                && (0..4).all(|f| {
                    stm::permute_mask(p, stm::z_frame_support(2, f)) == stm::z_frame_support(2, demos::POSITIVE_CONTROL[f])
                })
        }
        _ => false,
    };
    let main_ok = !matches!(main.outcome, SearchOutcome::Found(_));
    Ok((
        main_ok && control_ok,
        format!(
            "controlled swap {:?} (nodes {}, failures {}, depth {}); control found and verified {control_ok} after {} nodes",
            main.outcome, main.stats.nodes, main.stats.failures, main.stats.max_depth, control.stats.nodes
        ),
    ))
}

fn small(rng: &mut StdRng, lo: i64, hi: i64) -> Q {
    q(rng.gen_range(lo..=hi), 1)
}

fn lp_soundness(rng: &mut StdRng) -> Result<bool> {
    for _ in 0..LP_CASES {
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=6));
        let a = Matrix::from_fn(m, n, |_, _| small(rng, -3, 3));
        let b: Vec<Q> = (0..m).map(|_| small(rng, -3, 3)).collect();
        let sound = match lp::feasible(&a, &b)? {
            Feasibility::Feasible(x) => x.iter().all(|v| !v.is_neg()) && a.mul_vec(&x)? == b,
            Feasibility::Infeasible(y) => lp::verify_farkas(&a, &b, &y),
        };
        let dim = rng.gen_range(1..=4);
        let gens: Vec<Vec<Q>> = (0..rng.gen_range(0..=5)).map(|_| (0..dim).map(|_| small(rng, -2, 2)).collect()).collect();
        let point: Vec<Q> = (0..dim).map(|_| small(rng, -2, 2)).collect();
        let v = membership_lp(dim, &gens, &point)?;
        let cert = match &v {
            gptdarwin::cone::MembershipVerdict::Inside(w) => {
                Certificate::combination("", &gens, &point, &w.iter().cloned().enumerate().collect::<Vec<_>>())
            }
            gptdarwin::cone::MembershipVerdict::Outside(w) => Certificate::witness("", &gens, &point, w),
        };
        if !(sound && v.verify(&gens, &point) && verify_certificate(&cert)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn dual_involution(rng: &mut StdRng) -> Result<usize> {
    let mut checked = 0;
    while checked < DUAL_CASES {
        let dim = rng.gen_range(2..=4);
        let count = rng.gen_range(dim..=dim + 4);
        let gens: Vec<Vec<Q>> = (0..count)
            .map(|_| (0..dim).map(|k| if k == 0 { small(rng, 1, 4) } else { small(rng, -3, 3) }).collect())
            .collect();
        let cone = Cone::new(dim, gens)?;
        if !cone.is_generating() {
            continue;
        }
        if cone.dual()?.dual()?.canonical_extreme_rays() != cone.canonical_extreme_rays() {
            return Ok(checked);
        }
        checked += 1;
    }
    Ok(checked)
}

fn random_mixture(rng: &mut StdRng, states: &[Vec<Q>]) -> Vec<Q> {
    let weights: Vec<i64> = (0..states.len()).map(|_| rng.gen_range(0..=5)).collect();
    let total: i64 = weights.iter().sum::<i64>().max(1);
    let mut nu = vec![q(0, 1); states[0].len()];
    for (w, s) in weights.iter().zip(states) {
        gptdarwin::numeric::axpy(&mut nu, &q(*w, total), s);
    }
    if weights.iter().all(|&w| w == 0) {
        return states[0].clone();
    }
    nu
}

fn affinity(rng: &mut StdRng) -> Result<(bool, usize)> {
    let scenarios = [
        spec(ScenarioTheory::Cpt, 3, 1),
        spec(ScenarioTheory::Cpt, 2, 2),
        spec(ScenarioTheory::Qt, 2, 1),
        spec(ScenarioTheory::Qt, 2, 2),
        spec(ScenarioTheory::Qt, 2, 3),
        spec(ScenarioTheory::Stm, 2, 1),
        spec(ScenarioTheory::Stm, 2, 2),
    ];
    for sc in &scenarios {
        let s = sc.build()?;
        let states = s.test_states();
        let nus: Vec<Vec<Q>> = (0..MIXTURES).map(|_| random_mixture(rng, &states)).collect();
        if !check_idealized_darwinism_on(&s, &nus)?.passed {
            return Ok((false, scenarios.len()));
        }
    }
    Ok((true, scenarios.len()))
}

/// `2ⁿρ` is a valid effect: its values on pure states lie in `[0, 1]` and it
/// is 1 on `ρ`. Dyadic values make the float arithmetic exact.
fn stm_self_duality() -> Result<bool> {
    for n in 1..=3 {
        let states = stm::pure_states(n)?;
        let scale = (1u32 << n) as f64;
        let vs: Vec<Vec<f64>> = states.iter().map(|s| s.vector::<f64>(n)).collect();
        for (i, r) in vs.iter().enumerate() {
            let e: Vec<f64> = r.iter().map(|x| x * scale).collect();
            for (j, r2) in vs.iter().enumerate() {
                let v = dot(&e, r2);
                if !(0.0..=1.0).contains(&v) || (i == j && v != 1.0) {
                    return Ok(false);
                }
            }
        }
        if n <= 2 {
            let sys = stm::stm_system(n)?;
            let two = q(1 << n, 1);
            for s in &states {
                let e: Vec<Q> = s.vector::<Q>(n).iter().map(|x| x * &two).collect();
                if !sys.is_valid_effect(&e)? || !approx_eq_vec(&[dot(&e, &s.vector::<Q>(n))], &[q(1, 1)]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn criterion_13() -> Verdict {
    let mut rng = StdRng::seed_from_u64(SEED);
    let lp_ok = lp_soundness(&mut rng)?;
    let duals = dual_involution(&mut rng)?;
    let (affine, scenarios) = affinity(&mut rng)?;
    let dual_stm = stm_self_duality()?;
    let ok = lp_ok && duals == DUAL_CASES && affine && dual_stm;
    Ok((
        ok,
        format!(
            "LP certificates {lp_ok} ({LP_CASES} cases), dual involution {duals}/{DUAL_CASES}, affinity {affine} ({MIXTURES} mixtures x {scenarios} scenarios), STM self-duality {dual_stm}"
        ),
    ))
}

fn main() {
    let criteria: [(usize, fn() -> Verdict); 13] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
        (13, criterion_13),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        let start = Instant::now();
        let (ok, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        println!("criterion {n:>2}: {} [{:.1}s] {detail}", if ok { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
        if !ok {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 13 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
