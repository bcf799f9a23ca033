//! Independent constructions the library results are checked against.

use su11_core::algebra::{check_commutators, CheckSpec};
use su11_core::reduction::{
    build_direct_hamiltonian, free_params, pair_energy_closed_form, pair_momentum, verify_reduction, ModelParams,
};
use su11_core::reps::{hp_spin, quadratures, villain_spin};
use su11_core::{hermitian_eigensystem, Basis, Complex64, Fidelity, Spin, Triple};

/// Normalized Hermite function `ψ_n(x)` by its three-term recurrence.
fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = (-x * x / 2.0).exp() / std::f64::consts::PI.powf(0.25);
    for k in 0..n {
        let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Roots of the physicists' Hermite polynomial `H_n` by sign scan + bisection.
fn hermite_roots(n: usize) -> Vec<f64> {
    // Rescaled by e^{x²/2} so the far nodes do not underflow to zero.
    let f = |x: f64| hermite_function(n, x) * (x * x / 2.0).exp();
    let bound = (2.0 * n as f64 + 1.0).sqrt() + 0.5;
    let step = 1e-3;
    let mut roots = Vec::new();
    let mut x = -bound;
    let mut fx = f(x);
    while x < bound {
        let y = x + step;
        let fy = f(y);
        if fx == 0.0 {
            roots.push(x);
        } else if fx.signum() != fy.signum() {
            let (mut lo, mut hi) = (x, y);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if f(mid).signum() == f(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x = y;
        fx = fy;
    }
    roots
}

#[test]
fn quadrature_spectrum_matches_gauss_hermite_nodes() {
    let dim = 64;
    let (q, _) = quadratures::<f64>(dim).unwrap();
    let eig = hermitian_eigensystem(&q).unwrap();
    let nodes = hermite_roots(dim);
    assert_eq!(nodes.len(), dim);
    for (j, (got, want)) in eig.values.iter().zip(&nodes).enumerate().skip(8).take(dim - 16) {
        assert!((got - want).abs() < 1e-6, "node {j}: {got} vs {want}");
    }
}

/// Spin-`S` matrices from the textbook ladder formula, indexed by `m + S`.
fn ladder_spin(spin: Spin) -> (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let s = spin.twice() as f64 / 2.0;
    let dim = spin.multiplicity();
    let m = |j: usize| j as f64 - s;
    let sz = (0..dim).map(m).collect();
    let mut plus = vec![vec![0.0; dim]; dim];
    let mut minus = vec![vec![0.0; dim]; dim];
    for j in 0..dim {
        if j + 1 < dim {
            plus[j + 1][j] = (s * (s + 1.0) - m(j) * (m(j) + 1.0)).sqrt();
        }
        if j > 0 {
            minus[j - 1][j] = (s * (s + 1.0) - m(j) * (m(j) - 1.0)).sqrt();
        }
    }
    (sz, plus, minus)
}

fn assert_matches_ladder(t: &Triple, spin: Spin, offset: usize) {
    let (sz, plus, minus) = ladder_spin(spin);
    let dim = sz.len();
    let d = t.k0.dim();
    for r in 0..d {
        for c in 0..d {
            let inside = |i: usize| i >= offset && i < offset + dim;
            if !(inside(r) && inside(c)) {
                continue;
            }
            let (i, j) = (r - offset, c - offset);
            let (ez, ep, em) = (if i == j { sz[i] } else { 0.0 }, plus[i][j], minus[i][j]);
            assert!((t.k0.get(r, c) - Complex64::new(ez, 0.0)).norm() < 1e-12);
            assert!(
                (t.kplus.get(r, c) - Complex64::new(ep, 0.0)).norm() < 1e-12,
                "S+[{r},{c}]"
            );
            assert!(
                (t.kminus.get(r, c) - Complex64::new(em, 0.0)).norm() < 1e-12,
                "S-[{r},{c}]"
            );
        }
    }
}

#[test]
fn corrected_spin_realizations_match_ladder_formula() {
    for twice in 1..=6 {
        let spin = Spin::from_twice(twice).unwrap();
        let s = twice as f64 / 2.0;
        assert_matches_ladder(&hp_spin::<f64>(spin, Fidelity::Corrected).unwrap(), spin, 0);
        let exact = Basis::circle(-s, spin.multiplicity()).unwrap();
        assert_matches_ladder(&villain_spin(spin, &exact, Fidelity::Corrected).unwrap(), spin, 0);
        // On a wider grid the spin block sits at offset 3 and is decoupled.
        let wide = Basis::circle(-s - 3.0, spin.multiplicity() + 6).unwrap();
        let t = villain_spin(spin, &wide, Fidelity::Corrected).unwrap();
        assert_matches_ladder(&t, spin, 3);
        assert!(check_commutators(&t, &CheckSpec::default()).unwrap().overall_passed());
    }
}

#[test]
fn villain_as_printed_is_a_shifted_spin_block() {
    // S_z = P is off by one against the block it acts on: [S+,S-] = 2(P - 1).
    let spin = Spin::new(1.5).unwrap();
    let basis = Basis::circle(-4.5, 12).unwrap();
    let t = villain_spin(spin, &basis, Fidelity::AsPrinted).unwrap();
    let comm = su11_core::commutator(&t.kplus, &t.kminus).unwrap();
    let momenta = basis.momenta().unwrap();
    for (j, p) in momenta.iter().enumerate() {
        if (-0.5..=2.5).contains(p) {
            assert!((comm.get(j, j).re - 2.0 * (p - 1.0)).abs() < 1e-12, "p = {p}");
        }
    }
}

#[test]
fn pair_spectrum_three_routes() {
    let cases = [(1.0, 0.1, 0.3), (0.2, -0.4, 1.3), (-0.7, 0.9, -0.2), (1.0, -0.3, 0.2)];
    for (e, f1, f2) in cases {
        let m = ModelParams::<f64>::new(e, f1, f2).unwrap();
        let n_pairs = 12;
        let dim = n_pairs + 2;
        let h = build_direct_hamiltonian(&m, dim, dim).unwrap();
        let free = free_params(&m);
        for n in 0..n_pairs {
            let idx = n * dim + n;
            let direct = h.get(idx, idx).re;
            let closed = pair_energy_closed_form(&m, n);
            let particle = free.energy(pair_momentum(&m, n));
            assert!((direct - closed).abs() < 1e-9, "{e},{f1},{f2} n={n}");
            assert!((closed - particle).abs() < 1e-9, "{e},{f1},{f2} n={n}");
        }
        let r = verify_reduction(&m, n_pairs, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
