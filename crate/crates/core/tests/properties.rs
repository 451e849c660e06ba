use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use so4sym::cyclo::{CycloField, CycloNumber, Rational};
use so4sym::dynamics::{cubic_field_real, equivariance_residual, group_matrices, mat_vec, Coupling, CubicCoefficients};
use so4sym::group::FiniteRotationGroup;
use so4sym::invariants::{chi_d, chi_d_from_powers, InvariantPolynomial};
use so4sym::linalg::{Subspace, Vec4};
use so4sym::series::{Family, FamilySpec};

const ORDERS: [u32; 4] = [4, 8, 12, 24];

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn cyclo(order: u32) -> impl Strategy<Value = CycloNumber> {
    prop::collection::vec((0..order as i64, -6i64..=6, 1i64..=4), 0..5).prop_map(move |terms| {
        let f = CycloField::get(order).unwrap();
        let t: Vec<(i64, Rational)> = terms.into_iter().map(|(k, n, d)| (k, q(n, d))).collect();
        CycloNumber::from_terms(&f, &t)
    })
}

fn triple() -> impl Strategy<Value = (CycloNumber, CycloNumber, CycloNumber)> {
    prop::sample::select(ORDERS.to_vec()).prop_flat_map(|n| (cyclo(n), cyclo(n), cyclo(n)))
}

fn close(a: num_complex::Complex64, b: num_complex::Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverse_is_two_sided((a, _, _) in triple()) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        prop_assert!((&a * &inv).is_one());
        prop_assert_eq!(a.checked_div(&a).unwrap(), CycloNumber::one(a.field()));
    }

    #[test]
    fn representation_is_canonical((a, b, _) in triple()) {
        // rewriting each term through zeta^k = -zeta^(k + N/2) gives the same value
        let n = a.order() as i64;
        let f = a.field().clone();
        let shifted: Vec<(i64, Rational)> = a.terms().into_iter().map(|(k, c)| (k as i64 + n / 2, -c)).collect();
        let a2 = CycloNumber::from_terms(&f, &shifted);
        prop_assert_eq!(&a2, &a);
        prop_assert_eq!(a == b, (&a - &b).is_zero());
        prop_assert_eq!(a.coeffs().len(), a.field().degree());
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism((a, b, _) in triple()) {
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
        prop_assert_eq!((&a + &b).conjugate(), &a.conjugate() + &b.conjugate());
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert!((&a * &a.conjugate()).is_real());
    }

    #[test]
    fn galois_maps_are_automorphisms((a, b, _) in triple(), k in prop::sample::select(vec![1i64, 5, 7, 11, 13, 17, 19, 23])) {
        let n = a.order() as i64;
        prop_assume!(num_integer::gcd(k, n) == 1);
        prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
        prop_assert_eq!(a.galois(n - 1), a.conjugate());
    }

    #[test]
    fn numerics_follow_arithmetic((a, b, _) in triple()) {
        prop_assert!(close((&a * &b).to_complex(), a.to_complex() * b.to_complex()));
        prop_assert!(close((&a + &b).to_complex(), a.to_complex() + b.to_complex()));
        let ball = a.numeric_eval(128);
        let z = a.to_complex();
        prop_assert!(ball.re.contains_f64(z.re) || (ball.re.mid() - z.re).abs() < 1e-15);
    }

    #[test]
    fn sign_agrees_with_float((a, _, _) in triple()) {
        let r = a.real_part();
        let x = r.to_f64();
        if x.abs() > 1e-9 {
            prop_assert_eq!(r.sign(), Some(x.partial_cmp(&0.0).unwrap()));
        }
    }

    #[test]
    fn embedding_is_a_homomorphism((a, b, _) in triple()) {
        let n = a.order() * 3;
        prop_assert_eq!((&a * &b).embed(n).unwrap(), &a.embed(n).unwrap() * &b.embed(n).unwrap());
    }

    #[test]
    fn json_round_trip((a, _, _) in triple()) {
        let s = serde_json::to_string(&a).unwrap();
        let back: CycloNumber = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }
}

fn field8() -> Arc<CycloField> {
    CycloField::get(8).unwrap()
}

fn vec4() -> impl Strategy<Value = Vec4> {
    prop::array::uniform4(-3i64..=3).prop_map(|v| {
        let f = field8();
        std::array::from_fn(|i| CycloNumber::from_integer(&f, v[i]))
    })
}

fn subspace() -> impl Strategy<Value = Subspace> {
    prop::collection::vec(vec4(), 0..4).prop_map(|vs| Subspace::rref(&field8(), &vs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rref_is_idempotent(u in subspace()) {
        prop_assert_eq!(Subspace::rref(&field8(), u.basis()), u.clone());
        prop_assert!(u.basis().iter().all(|v| u.contains(v)));
    }

    #[test]
    fn intersection_laws(u in subspace(), v in subspace(), w in subspace()) {
        prop_assert_eq!(u.intersect(&v), v.intersect(&u));
        prop_assert_eq!(u.intersect(&v).intersect(&w), u.intersect(&v.intersect(&w)));
        prop_assert_eq!(u.sum(&v).dim() + u.intersect(&v).dim(), u.dim() + v.dim());
        prop_assert!(u.contains_subspace(&u.intersect(&v)));
        prop_assert_eq!(u.complement().dim(), 4 - u.dim());
    }
}

fn g1_3() -> &'static FiniteRotationGroup {
    static G: OnceLock<FiniteRotationGroup> = OnceLock::new();
    G.get_or_init(|| FamilySpec::new(Family::G1, 3).unwrap().build().unwrap())
}

fn coefficients(coupling: Coupling) -> impl Strategy<Value = CubicCoefficients> {
    (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0)
        .prop_map(move |(lambda, c1, c2, c3)| CubicCoefficients { lambda, c1, c2, c3, coupling })
}

fn point() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.5f64..1.5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symmetric_power_characters(idx in 0usize..48, d in 1usize..7) {
        let g = g1_3();
        let x = g.element(idx);
        let mut p = vec![];
        let mut y = x.clone();
        for _ in 0..d {
            p.push(y.trace_char());
            y = y.compose(x);
        }
        prop_assert_eq!(chi_d(x, d), chi_d_from_powers(&p, d));
        prop_assert!(chi_d(x, d).is_real());
    }

    #[test]
    fn quadratic_and_quartic_invariants(x in point(), idx in 0usize..48) {
        let m = &group_matrices(g1_3())[idx];
        let y = mat_vec(m, &x);
        for p in [InvariantPolynomial::I2, InvariantPolynomial::I41, InvariantPolynomial::I6] {
            prop_assert!((p.eval_f64(&y) - p.eval_f64(&x)).abs() < 1e-9);
        }
    }

    #[test]
    fn field_is_g1_equivariant(c in coefficients(Coupling::Hamiltonian)) {
        let r = equivariance_residual(&c, g1_3(), 4);
        prop_assert!(r.group_residual < 1e-12 && r.s1_residual < 1e-12);
    }

    #[test]
    fn gradient_field_is_phase_equivariant(c in coefficients(Coupling::Gradient)) {
        let r = equivariance_residual(&c, &FiniteRotationGroup::trivial(&field8()), 4);
        prop_assert!(r.s1_residual < 1e-12);
    }

    #[test]
    fn cubic_part_is_homogeneous(c in coefficients(Coupling::Hamiltonian), x in point(), t in -2.0f64..2.0) {
        let tx = x.map(|v| t * v);
        let fx = cubic_field_real(&c, &x);
        let ftx = cubic_field_real(&c, &tx);
        for k in 0..4 {
            let expected = c.lambda * tx[k] + t.powi(3) * (fx[k] - c.lambda * x[k]);
            prop_assert!((ftx[k] - expected).abs() < 1e-9);
        }
    }
}
