use cvtele::gaussian::generic_symplectic_spectrum;
use cvtele::gaussian::partially_transposed;
use cvtele::*;
use proptest::prelude::*;

/// Double-double arithmetic, enough to evaluate the textbook
/// `½(n + m − √((n−m)² + 4c²))` without cancellation.
#[derive(Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn from(x: f64) -> Self {
        Dd(x, 0.0)
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.0, o.0);
        let t = Dd::two_sum(self.1, o.1);
        let hi = Dd::two_sum(s.0, s.1 + t.0);
        Dd::two_sum(hi.0, hi.1 + t.1)
    }

    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        Dd::two_sum(p, e + (self.0 * o.1 + self.1 * o.0))
    }

    fn scale(self, k: f64) -> Dd {
        self.mul(Dd::from(k))
    }

    fn sqrt(self) -> Dd {
        let x = self.0.sqrt();
        // One Newton step: x + (a − x²)/(2x).
        let r = self.add(Dd::from(x).mul(Dd::from(x)).neg());
        Dd::from(x).add(Dd::from(r.0 / (2.0 * x)))
    }

    fn value(self) -> f64 {
        self.0 + self.1
    }
}

fn textbook_nu(s: &BalancedCovariance) -> f64 {
    let (n, m, c) = (Dd::from(s.n()), Dd::from(s.m()), Dd::from(s.c()));
    let diff = n.add(m.neg());
    let root = diff.mul(diff).add(c.mul(c).scale(4.0)).sqrt();
    n.add(m).add(root.neg()).scale(0.5).value()
}

fn lossy() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.0..3.0f64, 0.0..=1.0f64, 0.0..=1.0f64)
}

fn correlated() -> impl Strategy<Value = BalancedCovariance> {
    (0.05..3.0f64, 0.01..=1.0f64, 0.01..=1.0f64).prop_map(|(r, a, b)| lossy_state(r, a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn nu_matches_extended_precision((r, a, b) in lossy()) {
        let s = lossy_state(r, a, b).unwrap();
        let reference = textbook_nu(&s);
        let got = nu(&s);
        prop_assert!((got - reference).abs() <= 1e-12 * reference.abs().max(1e-300),
            "nu {got} vs {reference}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn lossy_states_are_physical((r, a, b) in lossy()) {
        let s = lossy_state(r, a, b).unwrap();
        prop_assert!(is_physical(&s));
        prop_assert!(BalancedCovariance::new(s.n(), s.m(), s.c()).is_ok());
    }

    #[test]
    fn tmss_is_pure(r in 0.0..5.0f64) {
        let s = tmss_state(r).unwrap();
        let p = symplectic_eigenvalues(&s, false).unwrap();
        prop_assert!((p.minus - 1.0).abs() <= 1e-9 && (p.plus - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn spectrum_matches_generic_eigensolver((r, a, b) in (0.0..2.0f64, 0.0..=1.0f64, 0.0..=1.0f64)) {
        let s = lossy_state(r, a, b).unwrap();
        let sigma = s.covariance_matrix();
        for (pt, matrix) in [(false, sigma), (true, partially_transposed(&sigma))] {
            let closed = symplectic_eigenvalues(&s, pt).unwrap();
            let (lo, hi) = generic_symplectic_spectrum(&matrix);
            let scale = s.n().max(s.m());
            prop_assert!((closed.minus - lo).abs() <= 1e-10 * scale * scale);
            prop_assert!((closed.plus - hi).abs() <= 1e-10 * scale * scale);
        }
    }

    #[test]
    fn swap_mirrors_everything(s in correlated()) {
        let t = swap_parties(&s);
        prop_assert_eq!(nu(&s), nu(&t));
        prop_assert_eq!(duan_parameter(&s), duan_parameter(&t));
        let (a, b) = (classify(&s).unwrap(), classify(&t).unwrap());
        prop_assert_eq!(a.e_ba, b.e_ab);
        prop_assert_eq!(a.g_sym_ba, b.g_sym_ab);
        prop_assert_eq!(a.two_way, b.two_way);
        prop_assert_eq!(swap_parties(&t), s);
    }

    #[test]
    fn g_sym_is_reciprocal(s in correlated()) {
        let ba = g_sym(&s, Direction::BgivenA).unwrap();
        let ab = g_sym(&s, Direction::AgivenB).unwrap();
        prop_assert!((ba * ab - 1.0).abs() <= 4.0 * f64::EPSILON);
        prop_assert!(ba.max(ab) >= 1.0);
    }

    #[test]
    fn unit_gain_identities(s in correlated(), g in 0.001..0.999f64) {
        let bk = bk_fidelity(&s);
        prop_assert_eq!(qat_fidelity(&s, 1.0), bk);
        prop_assert_eq!(lsatt_fidelity(&s, 1.0).unwrap(), bk);
        prop_assert_eq!(esa_fidelity(&s, g).unwrap(), lsatt_fidelity(&swap_parties(&s), g).unwrap());
    }

    #[test]
    fn entanglement_bound_holds(s in correlated()) {
        let rep = classify(&s).unwrap();
        prop_assert!(rep.nu >= result1_bound(rep.g_sym).unwrap() - 1e-12);
        if rep.cert_one_third {
            prop_assert!(rep.cert_two_way);
        }
        if rep.cert_two_way {
            prop_assert!(rep.two_way);
        }
        if rep.two_way {
            prop_assert!(rep.g_sym < std::f64::consts::SQRT_2 + 1e-12);
        }
    }

    #[test]
    fn best_fidelity_properties(s in correlated()) {
        let best = best_of_three(&s);
        prop_assert!(best.fidelity > 0.0 && best.fidelity <= 1.0);
        prop_assert!(best.fidelity >= bk_fidelity(&s));
        prop_assert_eq!(best.secure, best.fidelity > 2.0 / 3.0 + WITNESS_TOL);
        if best.secure {
            prop_assert!(best.qt);
            prop_assert!(classify(&s).unwrap().two_way);
        }
        let v = nu(&s);
        if v < 1.0 {
            let (lo, hi) = mv_bounds(v).unwrap();
            prop_assert!(best.fidelity >= lo - 1e-12 && best.fidelity <= hi + 1e-12);
        }
        if v < 1.0 / 3.0 {
            prop_assert!(best.secure);
        }
    }

    #[test]
    fn optimal_lsatt_dominates(s in correlated(), g in 1e-6..=1.0f64) {
        if let Ok(opt) = lsatt_optimal(&s) {
            if opt.valid {
                prop_assert!(opt.fidelity >= lsatt_fidelity(&s, g).unwrap() - 1e-15);
            }
        }
    }

    #[test]
    fn amplifier_cap_holds(s in correlated(), g in 1.0..5.0f64) {
        prop_assert!(qat_fidelity(&s, g) <= amplifier_cap(g).unwrap() + 1e-12);
    }

    #[test]
    fn qt_iff_entanglement_at_matched_gain(s in correlated(), g in 1.0..5.0f64) {
        let ent = ent_parameter(&s, g, Direction::BgivenA);
        let f = qat_fidelity(&s, g);
        let bench = qt_benchmark(g).unwrap();
        // Skip the sliver where either side is within rounding of its threshold.
        prop_assume!((ent - 1.0).abs() > 1e-12 && (f - bench).abs() > 1e-12);
        prop_assert_eq!(ent < 1.0, f > bench);
    }

    #[test]
    fn qt_gain_limit_is_boundary(s in correlated()) {
        if let Some(g) = qt_gain_limit(&s) {
            if g >= 1.0 {
                prop_assert!((relative_fidelity(&s, g).unwrap() - 0.5).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn minimizer_finds_shifted_quartic(center in 0.01..9.99f64, scale in 0.1..10.0f64, tol in 1e-12..1e-6f64) {
        let f = |x: f64| scale * ((x - center).powi(2) + 0.1 * (x - center).powi(4)) + 1.0;
        let o = minimize_scalar(f, 0.0, 10.0, tol).unwrap();
        prop_assert!((o.x_star - center).abs() <= tol.max(1e-7));
        prop_assert!(o.bracket.0 <= o.x_star && o.x_star <= o.bracket.1);
    }
}
