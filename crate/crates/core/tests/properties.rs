//! Invariants over generated instances. Values are multiples of 1/8 on grids
//! with h = 1/4 and kernels are dyadic step profiles, so most identities hold
//! exactly in floating point.

use proptest::prelude::*;
use rieszcheck::riesz::{layercake_auto, radial_monotonicity};
use rieszcheck::search::{exhaustive_max, uniqueness_check};
use rieszcheck::*;

fn domain(dim: usize, n: usize) -> Domain64 {
    Domain::new(dim, n as f64 / 8.0, n).unwrap()
}

fn dyadic(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0u8..=16).prop_map(|v| v as f64 / 8.0), n)
}

fn function(dim: usize, n: usize) -> impl Strategy<Value = GridFunction64> {
    let cells = if dim == 1 { n } else { n * n };
    dyadic(cells).prop_map(move |v| GridFunction::new(domain(dim, n), v).unwrap())
}

fn pair_1d() -> impl Strategy<Value = (GridFunction64, GridFunction64)> {
    (3usize..=16).prop_flat_map(|n| (function(1, n), function(1, n)))
}

fn pair_any() -> impl Strategy<Value = (GridFunction64, GridFunction64)> {
    prop_oneof![
        (3usize..=16).prop_flat_map(|n| (function(1, n), function(1, n))),
        (2usize..=6).prop_flat_map(|n| (function(2, n), function(2, n))),
    ]
}

fn step_kernel() -> impl Strategy<Value = Kernel64> {
    (1usize..=4, prop::collection::vec(1u8..=16, 4), prop::collection::vec(1u8..=16, 3)).prop_map(
        |(pieces, mut levels, mut widths)| {
            levels.truncate(pieces);
            levels.sort_unstable_by(|a, b| b.cmp(a));
            widths.truncate(pieces - 1);
            let mut r = 0.0;
            let breaks = widths
                .iter()
                .map(|&w| {
                    r += w as f64 / 4.0;
                    r
                })
                .collect();
            let values = levels.iter().map(|&l| l as f64 / 16.0).collect();
            Kernel::step(breaks, values).unwrap()
        },
    )
}

fn supermodular_psi() -> impl Strategy<Value = Integrand64> {
    prop::sample::select(vec!["product", "powerprod:2:2", "powerprod:1:2", "min"])
        .prop_map(|s| s.parse().unwrap())
}

fn sorted(u: &GridFunction64) -> Vec<f64> {
    let mut v = u.values().to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn dot(u: &GridFunction64, v: &GridFunction64) -> f64 {
    u.values().iter().zip(v.values()).map(|(a, b)| a * b).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rearrangement_is_equimeasurable_and_idempotent((u, _) in pair_any()) {
        let s = schwarz_rearrange(&u);
        prop_assert_eq!(sorted(&s), sorted(&u));
        prop_assert_eq!(s.integral(), u.integral());
        prop_assert!(is_schwarz_symmetric(&s));
        prop_assert_eq!(schwarz_rearrange(&s), s);
    }

    #[test]
    fn superlevel_sets_commute_with_rearrangement((u, _) in pair_any(), t in 1u8..=16) {
        let t = t as f64 / 8.0;
        prop_assert_eq!(schwarz_rearrange(&u).superlevel(t), set_rearrange(&u.superlevel(t)));
    }

    #[test]
    fn hardy_littlewood((u, v) in pair_any()) {
        prop_assert!(dot(&u, &v) <= dot(&schwarz_rearrange(&u), &schwarz_rearrange(&v)));
    }

    #[test]
    fn polarization_increases_the_functional(
        (u, v) in pair_1d(),
        k in 1usize..8,
        psi in supermodular_psi(),
        kernel in step_kernel(),
    ) {
        let sigma = Reflection::new(0, k as f64 * 0.125).unwrap();
        let (pu, pv) = (polarize(&u, &sigma).unwrap(), polarize(&v, &sigma).unwrap());
        prop_assert_eq!(sorted(&pu), sorted(&u));
        prop_assert_eq!(polarize(&pu, &sigma).unwrap(), pu.clone());
        let before = riesz_eval(&u, &v, &psi, &kernel).unwrap();
        let after = riesz_eval(&pu, &pv, &psi, &kernel).unwrap();
        prop_assert!(after >= before, "{} < {}", after, before);
    }

    #[test]
    fn integral_is_linear((u, v) in pair_any(), a in 0u8..8, b in 0u8..8) {
        let (a, b) = (a as f64 / 4.0, b as f64 / 4.0);
        let values = u.values().iter().zip(v.values()).map(|(x, y)| a * x + b * y).collect();
        let w = GridFunction::new(*u.domain(), values).unwrap();
        prop_assert_eq!(integral(&w), a * integral(&u) + b * integral(&v));
    }

    #[test]
    fn symmetric_integrands_give_symmetric_values(
        (f, g) in pair_any(),
        psi in prop::sample::select(vec!["product", "powerprod:2:2", "min"]),
        kernel in step_kernel(),
    ) {
        let psi: Integrand64 = psi.parse().unwrap();
        prop_assert_eq!(
            riesz_eval(&f, &g, &psi, &kernel).unwrap(),
            riesz_eval(&g, &f, &psi, &kernel).unwrap()
        );
    }

    #[test]
    fn truncation_is_monotone_and_exact_above_the_data(
        (f, g) in pair_any(),
        psi in supermodular_psi(),
        kernel in step_kernel(),
    ) {
        let full = riesz_eval(&f, &g, &psi, &kernel).unwrap();
        let mut last = 0.0;
        for l in 1..=5 {
            let level = l as f64 * 0.5;
            let v = riesz_eval(&f, &g, &truncate(&psi, level).unwrap(), &kernel).unwrap();
            prop_assert!(v >= last && v <= full);
            last = v;
        }
        let top = f.max_value().max(g.max_value()).max(0.125);
        prop_assert_eq!(riesz_eval(&f, &g, &truncate(&psi, top).unwrap(), &kernel).unwrap(), full);
    }

    #[test]
    fn common_translation_preserves_the_functional(
        (f, g) in pair_any(),
        shift in (-3isize..=3, -3isize..=3),
        psi in supermodular_psi(),
        kernel in step_kernel(),
    ) {
        let s = if f.domain().dim() == 1 { [shift.0, 0] } else { [shift.0, shift.1] };
        let moved = f.shifted(s).zip(g.shifted(s));
        prop_assume!(moved.is_some());
        let (sf, sg) = moved.unwrap();
        prop_assert_eq!(
            riesz_eval(&sf, &sg, &psi, &kernel).unwrap(),
            riesz_eval(&f, &g, &psi, &kernel).unwrap()
        );
    }

    #[test]
    fn evaluation_paths_agree(
        (f, g) in pair_any(),
        psi in prop::sample::select(vec![
            "product", "powerprod:2:2", "powerprod:3:1.5", "min", "cappedprod", "threshold:0.5:1",
        ]),
        kernel in prop::sample::select(vec!["exp", "algebraic:2", "cutoff:1"]),
    ) {
        let psi: Integrand64 = psi.parse().unwrap();
        let kernel: Kernel64 = kernel.parse().unwrap();
        let naive = riesz_eval(&f, &g, &psi, &kernel).unwrap();
        let cake = layercake_auto(&f, &g, &psi, &kernel).unwrap();
        prop_assert!((naive - cake).abs() <= 1e-10 * (1.0 + naive.abs()), "{} vs {}", naive, cake);
    }

    #[test]
    fn potential_of_symmetric_function_is_radially_nonincreasing_1d(
        (u, _) in pair_1d(),
        kernel in step_kernel(),
    ) {
        let nu = potential(&schwarz_rearrange(&u), &kernel).unwrap();
        prop_assert_eq!(radial_monotonicity(&nu).violations, 0);
    }

    #[test]
    fn ball_indicator_has_exact_mass(n in 4usize..=16, m in 1usize..=4, k in 1u8..=4) {
        let d = domain(1, n);
        let m = m.min(n);
        let k = k as f64 / 2.0;
        let c = ConstraintSpec::new(k, k * m as f64 * 0.25).unwrap();
        let b = ball_indicator(&d, &c).unwrap();
        prop_assert_eq!(b.integral(), c.mass);
        prop_assert_eq!(b.max_value(), k);
        prop_assert!(is_schwarz_symmetric(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn balls_win_small_binary_searches(
        n in 5usize..=9,
        m1 in 1usize..=3,
        m2 in 1usize..=3,
        psi in prop::sample::select(vec!["powerprod:2:2", "powerprod:3:2"]),
        kernel in prop::sample::select(vec!["exp", "algebraic:2"]),
    ) {
        let d = Domain::new(1, n as f64 / 2.0, n).unwrap();
        let c1 = ConstraintSpec::new(1.0, m1 as f64).unwrap();
        let c2 = ConstraintSpec::new(1.0, m2 as f64).unwrap();
        let psi: Integrand64 = psi.parse().unwrap();
        let kernel: Kernel64 = kernel.parse().unwrap();
        let space = SearchSpace::binary(d, (m1, m2)).unwrap();
        let cert = exhaustive_max(&space, &c1, &c2, &psi, &kernel).unwrap();
        prop_assert!(cert.ball_value <= cert.best_value * (1.0 + 1e-12));
        prop_assert!(cert.ball_is_max);
        // with budgets of different parity the mirrored pair is a second, non-translate maximizer
        if m1 % 2 == m2 % 2 {
            prop_assert!(uniqueness_check(&cert, &d).unique_up_to_translation);
        }
    }
}
