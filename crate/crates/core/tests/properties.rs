mod common;

use dirichlet_spaces::algebra::{bohr_lift, DirichletPolynomial, ExactPolynomial};
use dirichlet_spaces::norms::{
    h2_norm, hp_norm_exact_even, mixed_norm, InnerNorm, QuadratureSpec, SpaceParams,
};
use dirichlet_spaces::regions::{inclusion_decide, random_bergman_decide};
use dirichlet_spaces::superposition::{
    apply_superposition, prop_nn_check, superposition_decide, ScalarPolynomial,
};
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use common::rel_diff;

fn exact_poly(max_index: u64) -> impl Strategy<Value = ExactPolynomial> {
    prop::collection::vec((1..=max_index, -5i64..=5), 1..6)
        .prop_map(|terms| ExactPolynomial::from_integers(terms).unwrap())
}

fn float_poly(max_index: u64) -> impl Strategy<Value = DirichletPolynomial<Complex64>> {
    prop::collection::vec((1..=max_index, -1.0f64..1.0, -1.0f64..1.0), 1..8).prop_map(|terms| {
        DirichletPolynomial::from_terms(
            terms
                .into_iter()
                .map(|(n, re, im)| (n, Complex64::new(re, im))),
        )
        .unwrap()
    })
}

fn quarter(range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = BigRational> {
    range.prop_map(|k| BigRational::new(k.into(), 4.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(f in exact_poly(30), g in exact_poly(30), h in exact_poly(30)) {
        prop_assert_eq!(f.multiply(&g).unwrap(), g.multiply(&f).unwrap());
        prop_assert_eq!(
            f.multiply(&g).unwrap().multiply(&h).unwrap(),
            f.multiply(&g.multiply(&h).unwrap()).unwrap()
        );
        prop_assert_eq!(
            f.multiply(&(&g + &h)).unwrap(),
            &f.multiply(&g).unwrap() + &f.multiply(&h).unwrap()
        );
        prop_assert_eq!(f.multiply(&ExactPolynomial::one()).unwrap(), f.clone());
    }

    #[test]
    fn lift_is_a_homomorphism(f in exact_poly(40), g in exact_poly(40)) {
        let lifted = bohr_lift(&f).unwrap().multiply(&bohr_lift(&g).unwrap());
        prop_assert_eq!(lifted.to_dirichlet().unwrap(), f.multiply(&g).unwrap());
        prop_assert_eq!(bohr_lift(&f).unwrap().to_dirichlet().unwrap(), f);
    }

    #[test]
    fn power_matches_repeated_product(f in exact_poly(12), k in 0u32..4) {
        let mut want = ExactPolynomial::one();
        for _ in 0..k {
            want = want.multiply(&f).unwrap();
        }
        prop_assert_eq!(f.power(k).unwrap(), want);
    }

    #[test]
    fn abschnitt_keeps_smooth_support(f in float_poly(200), d in 1usize..5) {
        let a = f.abschnitt(d).unwrap();
        prop_assert_eq!(a.abschnitt(d).unwrap(), a.clone());
        let primes = [2u64, 3, 5, 7];
        for n in f.indices() {
            let mut m = n;
            for &p in &primes[..d] {
                while m % p == 0 {
                    m /= p;
                }
            }
            prop_assert_eq!(a.get(n).is_some(), m == 1);
        }
    }

    #[test]
    fn translation_is_monotone_and_contractive(
        f in float_poly(50),
        s in 0.0f64..2.0,
        t in 0.0f64..2.0,
        q in prop::sample::select(vec![1.0, 2.0, 4.0]),
        alpha in prop::sample::select(vec![-0.5, 0.0, 1.0]),
    ) {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        let spec = QuadratureSpec::default();
        for space in [SpaceParams::hardy(4.0).unwrap(), SpaceParams::mixed(2.0, q, alpha).unwrap()] {
            let norm = |g: &DirichletPolynomial<Complex64>| {
                mixed_norm(g, &space, &spec, InnerNorm::ExactEven).unwrap().value
            };
            let (n0, n_lo, n_hi) = (norm(&f), norm(&f.translate(lo)), norm(&f.translate(hi)));
            prop_assert!(n_hi <= n_lo * (1.0 + 1e-9));
            prop_assert!(n_lo <= n0 * (1.0 + 1e-9));
        }
    }

    #[test]
    fn hardy_dominates_mixed(
        f in float_poly(50),
        k in 1u32..3,
        q in prop::sample::select(vec![0.5, 1.0, 3.0]),
        alpha in prop::sample::select(vec![0.0, 2.0]),
    ) {
        let p = 2.0 * k as f64;
        let mixed = mixed_norm(
            &f,
            &SpaceParams::mixed(p, q, alpha).unwrap(),
            &QuadratureSpec::default(),
            InnerNorm::ExactEven,
        )
        .unwrap()
        .value;
        prop_assert!(mixed <= hp_norm_exact_even(&f, k).unwrap() * (1.0 + 1e-9));
    }

    #[test]
    fn hardy_norms_increase_with_p(f in float_poly(30)) {
        let h2 = h2_norm(&f);
        let h4 = hp_norm_exact_even(&f, 2).unwrap();
        let h6 = hp_norm_exact_even(&f, 3).unwrap();
        prop_assert!(rel_diff(h2, hp_norm_exact_even(&f, 1).unwrap()) < 1e-12);
        prop_assert!(h2 <= h4 * (1.0 + 1e-12) && h4 <= h6 * (1.0 + 1e-12));
    }

    #[test]
    fn power_identity(f in float_poly(10), n in 1u32..4, k in 1u32..3) {
        prop_assert!(prop_nn_check(&f, n, k).unwrap().deviation <= 1e-10);
    }

    #[test]
    fn superposition_of_product(
        f in float_poly(12),
        a in prop::collection::vec(-2.0f64..2.0, 1..4),
        b in prop::collection::vec(-2.0f64..2.0, 1..4),
    ) {
        let (phi, psi) = (ScalarPolynomial::from_real(&a), ScalarPolynomial::from_real(&b));
        let lhs = apply_superposition(&phi.multiply(&psi), &f).unwrap();
        let rhs = apply_superposition(&phi, &f)
            .unwrap()
            .multiply(&apply_superposition(&psi, &f).unwrap())
            .unwrap();
        let scale = 1.0 + h2_norm(&lhs).max(h2_norm(&rhs));
        prop_assert!(h2_norm(&(&lhs - &rhs)) <= 1e-10 * scale);
    }

    #[test]
    fn inclusion_is_monotone(
        p in quarter(1..=24), q in quarter(1..=24), alpha in quarter(-3..=8),
        u in quarter(1..=24), v in quarter(1..=24), beta in quarter(-3..=8),
        dp in quarter(0..=8), dq in quarter(0..=8), da in quarter(0..=3),
        du in quarter(0..=3), dv in quarter(0..=3), db in quarter(0..=8),
    ) {
        let base = inclusion_decide(p.clone(), q.clone(), alpha.clone(), u.clone(), v.clone(), beta.clone()).unwrap();
        if base.included {
            // enlarge the source, shrink the target
            let shrink = |x: BigRational, d: BigRational| {
                let y = x.clone() - d;
                if y > BigRational::from_integer(0.into()) { y } else { x }
            };
            let alpha2 = {
                let y = alpha.clone() - da;
                if y > BigRational::new((-1).into(), 1.into()) { y } else { alpha.clone() }
            };
            let moved = inclusion_decide(
                p + dp,
                q + dq,
                alpha2,
                shrink(u, du),
                shrink(v, dv),
                beta + db,
            )
            .unwrap();
            prop_assert!(moved.included);
        }
    }

    #[test]
    fn degree_admissibility_is_downward_closed(
        p in quarter(1..=24), q in quarter(1..=24), alpha in quarter(-3..=8),
        u in quarter(1..=12), v in quarter(1..=12), beta in quarter(-3..=8),
        n in 1u32..8,
    ) {
        let admitted = |m: u32| {
            superposition_decide(m, p.clone(), q.clone(), alpha.clone(), u.clone(), v.clone(), beta.clone())
                .unwrap()
                .included
        };
        if admitted(n) {
            for m in 0..n {
                prop_assert!(admitted(m));
            }
        }
    }

    #[test]
    fn random_bergman_needs_p_at_least_two(
        p in quarter(1..=7), alpha in quarter(-3..=8), q in quarter(1..=24), beta in quarter(-3..=8),
    ) {
        prop_assert!(!random_bergman_decide(p, alpha, q, beta).unwrap().included);
    }
}

#[test]
fn float_and_exact_deciders_agree() {
    let grid = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0];
    let weights = [-0.5, 0.0, 1.0, 2.0];
    let r = |x: f64| BigRational::from_float(x).unwrap();
    for &p in &grid {
        for &q in &grid {
            for &a in &weights {
                for &b in &weights {
                    let f = inclusion_decide(p, q, a, 2.0, 3.0, b).unwrap();
                    let e = inclusion_decide(r(p), r(q), r(a), r(2.0), r(3.0), r(b)).unwrap();
                    assert_eq!(f, e, "{p} {q} {a} {b}");
                }
            }
        }
    }
}
