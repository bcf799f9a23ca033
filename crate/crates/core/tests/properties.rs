use proptest::prelude::*;

use su11_core::algebra::{check_casimir, check_commutators, CheckSpec};
use su11_core::reduction::{check_k_form, verify_reduction, ModelParams};
use su11_core::reps::{mp_realization, saf_realization};
use su11_core::{
    commutator, hermitian_eigensystem, interior_projector, tensor, unitary_exp, Basis, Complex64, Operator, Sign,
};

fn max_diff(a: &Operator, b: &Operator) -> f64 {
    a.minus(b).unwrap().maxabs()
}

fn fock_op(dim: usize, values: &[(f64, f64)]) -> Operator {
    let basis = Basis::fock(dim).unwrap();
    let entries = nalgebra::DMatrix::from_fn(dim, dim, |r, c| {
        let (re, im) = values[r * dim + c];
        Complex64::new(re, im)
    });
    Operator::from_entries(basis, entries).unwrap()
}

fn arb_op(dim: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), dim * dim).prop_map(move |v| fock_op(dim, &v))
}

fn arb_hermitian(dim: usize) -> impl Strategy<Value = Operator> {
    arb_op(dim).prop_map(|a| a.plus(&a.adjoint()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exponential_pair_is_identity(h in (2usize..9).prop_flat_map(arb_hermitian)) {
        let up = unitary_exp(&h, Sign::Plus).unwrap();
        let down = unitary_exp(&h, Sign::Minus).unwrap();
        let id = Operator::identity(h.basis());
        prop_assert!(max_diff(&up.matmul(&down).unwrap(), &id) <= 1e-9);
        prop_assert!(max_diff(&up.matmul(&up.adjoint()).unwrap(), &id) <= 1e-9);
    }

    #[test]
    fn commutator_is_antisymmetric((a, b) in (2usize..7).prop_flat_map(|d| (arb_op(d), arb_op(d)))) {
        let ab = commutator(&a, &b).unwrap();
        let ba = commutator(&b, &a).unwrap();
        prop_assert_eq!(ab.plus(&ba).unwrap().maxabs(), 0.0);
    }

    #[test]
    fn spectrum_is_permutation_invariant(
        (h, perm) in (2usize..9).prop_flat_map(|d| (arb_hermitian(d), Just((0..d).collect::<Vec<_>>()).prop_shuffle()))
    ) {
        let d = perm.len();
        let p = Operator::from_entries(
            h.basis().clone(),
            nalgebra::DMatrix::from_fn(d, d, |r, c| Complex64::new(if perm[r] == c { 1.0 } else { 0.0 }, 0.0)),
        ).unwrap();
        let conj = p.matmul(&h).unwrap().matmul(&p.adjoint()).unwrap();
        let e1 = hermitian_eigensystem(&h).unwrap().values;
        let e2 = hermitian_eigensystem(&conj).unwrap().values;
        for (x, y) in e1.iter().zip(&e2) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn tensor_mixed_product(
        (a, c, b, d) in (2usize..4, 2usize..4).prop_flat_map(|(m, n)| (arb_op(m), arb_op(m), arb_op(n), arb_op(n)))
    ) {
        let lhs = tensor(&a, &b).unwrap().matmul(&tensor(&c, &d).unwrap()).unwrap();
        let rhs = tensor(&a.matmul(&c).unwrap(), &b.matmul(&d).unwrap()).unwrap();
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn interior_projector_is_idempotent_and_hermitian(count in 1usize..20, da in 1usize..7, db in 1usize..7, margin in 0usize..5) {
        let bases = [Basis::circle(-3.5, count).unwrap(), Basis::fock2(da, db).unwrap()];
        for basis in &bases {
            if let Ok(p) = interior_projector(basis, margin) {
                prop_assert_eq!(p.matmul(&p).unwrap(), p.clone());
                prop_assert_eq!(p.adjoint(), p.clone());
            }
        }
    }

    #[test]
    fn matmul_matches_dense_product(
        (a, b, zeros) in (2usize..8).prop_flat_map(|d| (arb_op(d), arb_op(d), prop::collection::vec(any::<bool>(), d * d)))
    ) {
        // Knock out entries so the zero-skipping path is exercised.
        let d = a.dim();
        let sparse = nalgebra::DMatrix::from_fn(d, d, |r, c| if zeros[r * d + c] { Complex64::new(0.0, 0.0) } else { b.get(r, c) });
        let b = Operator::from_entries(a.basis().clone(), sparse).unwrap();
        let dense = a.entries() * b.entries();
        let got = a.matmul(&b).unwrap();
        prop_assert!((got.entries() - dense).iter().all(|z| z.norm() <= 1e-12));
    }

    #[test]
    fn sandwich_matches_explicit_products(
        (a, q, mask) in (2usize..8).prop_flat_map(|d| (arb_op(d), arb_op(d), prop::collection::vec(any::<bool>(), d)))
    ) {
        let basis = a.basis().clone();
        let diag = su11_core::mask_projector(&basis, &mask).unwrap();
        for p in [diag, q] {
            let explicit = p.matmul(&a).unwrap().matmul(&p).unwrap();
            prop_assert!(max_diff(&a.sandwich(&p).unwrap(), &explicit) <= 1e-12);
        }
    }

    #[test]
    fn saf_commutators_hold_for_any_p0(re in -3.0..3.0f64, im in -3.0..3.0f64, p_min in -20.0..5.0f64) {
        let basis = Basis::circle(p_min, 24).unwrap();
        let t = saf_realization(Complex64::new(re, im), &basis).unwrap();
        let r = check_commutators(&t, &CheckSpec::new(2, 1e-10).unwrap()).unwrap();
        prop_assert!(r.overall_passed(), "{:?}", r);
    }

    #[test]
    fn saf_casimir_depends_only_on_imaginary_part(re1 in -2.0..2.0f64, re2 in -2.0..2.0f64, im in -2.0..2.0f64) {
        let basis = Basis::circle(-8.0, 20).unwrap();
        let spec = CheckSpec::default();
        let r1 = check_casimir(&saf_realization(Complex64::new(re1, im), &basis).unwrap(), &spec).unwrap();
        let r2 = check_casimir(&saf_realization(Complex64::new(re2, im), &basis).unwrap(), &spec).unwrap();
        prop_assert!(r1.overall_passed() && r2.overall_passed());
        prop_assert!((r1.max_residual() - r2.max_residual()).abs() <= 1e-12);
    }

    #[test]
    fn mp_casimir_is_k_times_k_minus_one(k in 0.05..4.0f64) {
        let t = mp_realization(k, 32).unwrap();
        let spec = CheckSpec::default();
        prop_assert!(check_casimir(&t, &spec).unwrap().overall_passed());
        prop_assert!(check_commutators(&t, &CheckSpec::new(1, 1e-10).unwrap()).unwrap().overall_passed());
    }

    #[test]
    fn reduction_holds_off_the_singular_line(e in -1.0..1.0f64, f1 in -1.0..1.0f64, f2 in -1.0..1.0f64) {
        prop_assume!((2.0 * f1 + f2).abs() >= 0.05);
        let m = ModelParams::new(e, f1, f2).unwrap();
        prop_assert!(check_k_form(&m, 6, 6, &CheckSpec::default()).unwrap().overall_passed());
        let r = verify_reduction(&m, 10, 1e-9).unwrap();
        prop_assert!(r.passed, "{:?}", r);
        if m.has_condensate() {
            prop_assert!(r.predicted_spectrum.iter().all(|&x| x >= r.h0));
        }
    }
}
