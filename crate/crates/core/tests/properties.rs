use gptdarwin::cone::{membership_lp, Cone, MembershipVerdict};
use gptdarwin::darwinism::{check_idealized_darwinism_on, ScenarioMap, ScenarioSpec, ScenarioTheory};
use gptdarwin::lp::{self, Feasibility, LpResult};
use gptdarwin::numeric::{axpy, dot, Matrix, Scalar};
use gptdarwin::report::{verify_certificate, Certificate};
use gptdarwin::stm;
use gptdarwin::Q;
use proptest::prelude::*;

fn q(n: i64) -> Q {
    Q::from_i64(n)
}

fn matrix_and_rhs() -> impl Strategy<Value = (Matrix<Q>, Vec<Q>)> {
    (1usize..=4, 1usize..=6).prop_flat_map(|(m, n)| {
        (prop::collection::vec(-3i64..=3, m * n), prop::collection::vec(-3i64..=3, m))
            .prop_map(move |(a, b)| (Matrix::from_fn(m, n, |i, j| q(a[i * n + j])), b.into_iter().map(q).collect()))
    })
}

fn generators_and_point() -> impl Strategy<Value = (usize, Vec<Vec<Q>>, Vec<Q>)> {
    (1usize..=4).prop_flat_map(|dim| {
        (
            Just(dim),
            prop::collection::vec(prop::collection::vec((-2i64..=2).prop_map(q), dim), 0..=5),
            prop::collection::vec((-2i64..=2).prop_map(q), dim),
        )
    })
}

/// Generators with a positive first coordinate, so the cone is pointed.
fn pointed_cone() -> impl Strategy<Value = (usize, Vec<Vec<Q>>)> {
    (2usize..=4).prop_flat_map(|dim| {
        let ray = (1i64..=4, prop::collection::vec(-3i64..=3, dim - 1))
            .prop_map(|(h, rest)| std::iter::once(q(h)).chain(rest.into_iter().map(q)).collect::<Vec<_>>());
        (Just(dim), prop::collection::vec(ray, dim..=dim + 4))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn feasibility_verdicts_carry_valid_certificates((a, b) in matrix_and_rhs()) {
        match lp::feasible(&a, &b).unwrap() {
            Feasibility::Feasible(x) => {
                prop_assert!(x.iter().all(|v| !v.is_neg()));
                prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
            }
            Feasibility::Infeasible(y) => prop_assert!(lp::verify_farkas(&a, &b, &y)),
        }
    }

    #[test]
    fn optima_are_feasible_and_bounded(
        (a, b) in matrix_and_rhs(),
        c in prop::collection::vec(0i64..=3, 6),
    ) {
        let c: Vec<Q> = c.into_iter().take(a.cols()).map(q).collect();
        match lp::minimize(&c, &a, &b).unwrap() {
            LpResult::Optimal { x, value } => {
                prop_assert!(x.iter().all(|v| !v.is_neg()));
                prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
                prop_assert_eq!(dot(&c, &x), value.clone());
                // c ≥ 0 makes zero a lower bound
                prop_assert!(!value.is_neg());
            }
            LpResult::Infeasible(y) => prop_assert!(lp::verify_farkas(&a, &b, &y)),
            LpResult::Unbounded => prop_assert!(false, "nonnegative objective is bounded below"),
        }
    }

    #[test]
    fn membership_verdicts_reverify((dim, gens, point) in generators_and_point()) {
        let v = membership_lp(dim, &gens, &point).unwrap();
        prop_assert!(v.verify(&gens, &point));
        let cert = match &v {
            MembershipVerdict::Inside(w) => {
                Certificate::combination("", &gens, &point, &w.iter().cloned().enumerate().collect::<Vec<_>>())
            }
            MembershipVerdict::Outside(w) => Certificate::witness("", &gens, &point, w),
        };
        prop_assert!(verify_certificate(&cert).unwrap());
        let json = serde_json::to_string(&cert).unwrap();
        prop_assert!(verify_certificate(&serde_json::from_str(&json).unwrap()).unwrap());
    }

    #[test]
    fn dual_of_dual_is_the_cone((dim, gens) in pointed_cone()) {
        let cone = Cone::new(dim, gens).unwrap();
        prop_assume!(cone.is_generating());
        let dual = cone.dual().unwrap();
        for e in dual.generators() {
            for g in cone.generators() {
                prop_assert!(!dot(e, g).is_neg());
            }
        }
        prop_assert_eq!(dual.dual().unwrap().canonical_extreme_rays(), cone.canonical_extreme_rays());
    }
}

fn mixture(states: &[Vec<Q>], weights: &[i64]) -> Vec<Q> {
    let total: i64 = weights.iter().sum();
    if total == 0 {
        return states[0].clone();
    }
    let mut nu = vec![q(0); states[0].len()];
    for (w, s) in weights.iter().zip(states) {
        axpy(&mut nu, &Q::ratio(*w, total), s);
    }
    nu
}

fn affine_on_mixtures(theory: ScenarioTheory, envs: usize, weights: &[i64]) -> bool {
    let s = ScenarioSpec { theory, d: 2, envs, transformation: ScenarioMap::Fanout, fixed_env: None }.build().unwrap();
    let states = s.test_states();
    let nu = mixture(&states, &weights[..states.len()]);
    check_idealized_darwinism_on(&s, &[nu]).unwrap().passed
}

fn mixture_weights() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..=6, 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn qubit_fanout_is_affine(w in mixture_weights()) {
        prop_assert!(affine_on_mixtures(ScenarioTheory::Qt, 1, &w));
    }

    #[test]
    fn two_environment_qubit_fanout_is_affine(w in mixture_weights()) {
        prop_assert!(affine_on_mixtures(ScenarioTheory::Qt, 2, &w));
    }

    #[test]
    fn toy_fan_is_affine(w in mixture_weights()) {
        prop_assert!(affine_on_mixtures(ScenarioTheory::Stm, 1, &w));
    }

    #[test]
    fn bit_fanout_is_affine(w in mixture_weights()) {
        prop_assert!(affine_on_mixtures(ScenarioTheory::Cpt, 2, &w));
    }
}

#[test]
fn toy_pure_states_scale_to_valid_effects() {
    for n in 1..=2 {
        let sys = stm::stm_system(n).unwrap();
        let states = stm::pure_states(n).unwrap();
        let scale = Q::from_i64(1 << n);
        for s in &states {
            let rho = s.vector::<Q>(n);
            let e: Vec<Q> = rho.iter().map(|x| x * &scale).collect();
            assert!(sys.is_valid_effect(&e).unwrap(), "{}", s.label);
            assert_eq!(dot(&e, &rho), q(1));
            for t in &states {
                let v = dot(&e, &t.vector::<Q>(n));
                assert!(!v.is_neg() && v <= q(1));
            }
        }
    }
}
