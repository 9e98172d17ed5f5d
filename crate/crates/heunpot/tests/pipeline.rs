use heunpot::catalog::PotentialSpec;
use heunpot::solution::{build_wavefunction, wronskian, Scheme, Sign, Wavefunction};
use heunpot::triad::{Triad, CLASSES};
use heunpot::verifier::{integrate_schrodinger, schrodinger_residual};
use heunpot::C64;

fn spec(d: [i8; 3]) -> PotentialSpec {
    PotentialSpec::new(Triad::from_doubled(d).unwrap(), [0.0, 1.3, -1.1], [0.4, -0.3, 0.2, 0.1, -0.05], 0.8)
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Integrates from the first grid point with the wavefunction's own data and
/// compares along the grid.
fn ode_mismatch(w: &Wavefunction, grid: &[f64]) -> f64 {
    let (p0, d0) = w.psi_and_derivative(grid[0]).unwrap();
    let last = *grid.last().unwrap();
    let ode =
        integrate_schrodinger(|x| w.potential(x), w.coupling(), w.energy, grid[0], last, p0, d0, grid, 1e-12).unwrap();
    let psi = w.evaluate(grid).unwrap();
    let diff: Vec<C64> = psi.iter().zip(&ode.psi).map(|(a, b)| a - b).collect();
    max_norm(&diff) / max_norm(&psi)
}

#[test]
fn every_class_agrees_with_the_ode_oracle() {
    for d in CLASSES {
        let w = build_wavefunction(&spec(d), 0.9, [Sign::Plus; 3], Scheme::Frobenius).unwrap();
        let grid = w.default_grid(60).unwrap();
        let err = ode_mismatch(&w, &grid);
        assert!(err < 1e-8, "class {d:?}: {err:e}");
    }
}

#[test]
fn residual_is_small_for_both_sign_choices_at_a1() {
    for d in [[2, 2, 2], [2, 1, -1], [1, 1, 0]] {
        for s1 in [Sign::Plus, Sign::Minus] {
            let w = build_wavefunction(&spec(d), -0.6, [s1, Sign::Plus, Sign::Plus], Scheme::Frobenius).unwrap();
            let r = schrodinger_residual(&w, &w.default_grid(40).unwrap()).unwrap();
            assert!(r.max_rel_residual < 1e-7, "{d:?} {s1}: {:e}", r.max_rel_residual);
        }
    }
}

#[test]
fn wronskian_of_the_two_local_solutions_is_constant() {
    let s = spec([2, 2, 0]);
    let w1 = build_wavefunction(&s, 0.5, [Sign::Plus; 3], Scheme::Frobenius).unwrap();
    let w2 = build_wavefunction(&s, 0.5, [Sign::Minus, Sign::Plus, Sign::Plus], Scheme::Frobenius).unwrap();
    let grid = w1.default_grid(10).unwrap();
    let ws: Vec<C64> = grid.iter().map(|&x| wronskian(&w1, &w2, x).unwrap()).collect();
    assert!(ws[0].norm() > 1e-6);
    for w in &ws {
        assert!((w - ws[0]).norm() < 1e-9 * ws[0].norm(), "{w} vs {}", ws[0]);
    }
}

#[test]
fn grid_evaluation_matches_pointwise() {
    let w = build_wavefunction(&spec([2, 1, 0]), 1.2, [Sign::Plus; 3], Scheme::Frobenius).unwrap();
    let grid = w.default_grid(100).unwrap();
    let all = w.evaluate(&grid).unwrap();
    for (x, p) in grid.iter().zip(all) {
        assert_eq!(w.psi(*x).unwrap(), p);
    }
}
