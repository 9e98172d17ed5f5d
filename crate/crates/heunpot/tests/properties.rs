use heunpot::catalog::{CoordinateMap, PotentialSpec};
use heunpot::heun::{frobenius_termination, to_canonical, HeunParams, MuChoice};
use heunpot::solution::{exponent_set, heun_params, Sign};
use heunpot::special::{gauss_2f1, HypergeometricArgs};
use heunpot::triad::{canonical_class, enumerate_triads, is_permissible, Triad, CLASSES};
use heunpot::C64;
use proptest::prelude::*;

fn spread(a: &[f64; 3]) -> bool {
    (a[0] - a[1]).abs() > 0.5 && (a[0] - a[2]).abs() > 0.5 && (a[1] - a[2]).abs() > 0.5
}

fn specs() -> impl Strategy<Value = PotentialSpec> {
    let triads = enumerate_triads();
    (
        0..triads.len(),
        prop::array::uniform3(-2.0..3.0f64).prop_filter("separated points", spread),
        prop::array::uniform5(-2.0..2.0f64),
        0.6..1.4f64,
        any::<bool>(),
    )
        .prop_map(move |(i, a, v, s, neg)| PotentialSpec::new(triads[i], a, v, if neg { -s } else { s }))
}

fn signs() -> impl Strategy<Value = [Sign; 3]> {
    (0..8usize).prop_map(|i| Sign::all()[i])
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn permissibility_is_the_two_bounds(d in prop::array::uniform3(-3i8..=3)) {
        let s: i32 = d.iter().map(|&x| x as i32).sum();
        let want = d.iter().all(|x| x.abs() <= 2) && (2..=6).contains(&s);
        prop_assert_eq!(is_permissible(d), want);
        prop_assert_eq!(Triad::from_doubled(d).is_ok(), want);
    }

    #[test]
    fn class_is_permutation_invariant(i in 0..35usize, p in 0..6usize) {
        let t = enumerate_triads()[i];
        let d = t.doubled();
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let q = Triad::from_doubled(perms[p].map(|k| d[k])).unwrap();
        prop_assert_eq!(canonical_class(q), canonical_class(t));
        prop_assert!(CLASSES.contains(&canonical_class(t).doubled()));
    }

    #[test]
    fn exponents_solve_their_quadratics(spec in specs(), e in -2.0..2.0f64, s in signs()) {
        let exps = exponent_set(&spec, e, s).unwrap();
        for r in exps.residuals(&spec, e) {
            prop_assert!(r < 1e-12, "residual {r:e}");
        }
    }

    #[test]
    fn heun_parameters_satisfy_fuchs(spec in specs(), e in -2.0..2.0f64, s in signs()) {
        let exps = exponent_set(&spec, e, s).unwrap();
        let p = heun_params(&spec, e, &exps).unwrap();
        let size = 1.0 + p.alpha.norm() + p.beta.norm() + p.gamma.norm() + p.delta.norm() + p.epsilon.norm();
        prop_assert!(p.fuchs_defect().norm() < 1e-12 * size);
        let (canon, map) = to_canonical(&p).unwrap();
        prop_assert!(canon.is_canonical());
        prop_assert!(canon.fuchs_defect().norm() < 1e-12 * size);
        prop_assert!((map.invert(canon.a3) - p.a3).norm() < 1e-12 * (1.0 + p.a3.norm()));
    }

    #[test]
    fn map_round_trip(spec in specs(), f in 0.05..0.95f64, off in 0.05..3.0f64) {
        let map = CoordinateMap::for_branch(&spec).unwrap();
        let (lo, hi) = map.interval();
        let z = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => lo + f * (hi - lo),
            (true, false) => lo + off,
            (false, true) => hi - off,
            (false, false) => off,
        };
        let x = map.x_of_z(z).unwrap();
        let back = map.z_of_x(x).unwrap();
        let rho = map.rho(z).abs();
        // z(x) is only as sharp as x carries digits through dz/dx.
        let tol = 1e-10 * (1.0 + z.abs()) + 1e-13 * rho * (1.0 + x.abs());
        prop_assert!((back - z).abs() < tol, "z = {z}, back = {back}");
    }

    #[test]
    fn euler_transformation(
        a in -2.0..2.0f64,
        b in -2.0..2.0f64,
        g in 0.2..3.0f64,
        z in -0.9..0.6f64,
    ) {
        let f = |a: f64, b: f64| gauss_2f1(&HypergeometricArgs::new(c(a), c(b), c(g), c(z)), 1e-15).unwrap();
        let lhs = f(a, b);
        let rhs = f(g - a, g - b) * (1.0 - z).powf(g - a - b);
        prop_assert!((lhs - rhs).norm() < 1e-11 * (1.0 + lhs.norm()), "{lhs} vs {rhs}");
    }

    #[test]
    fn frobenius_termination_roots_terminate(
        n in 0..4usize,
        a in prop_oneof![-3.0..-0.3f64, 1.5..4.0f64],
        beta in -1.0..2.0f64,
        gamma in 0.3..2.5f64,
        delta in 0.3..2.5f64,
    ) {
        let p = HeunParams::canonical(c(a), c(0.0), c(-(n as f64)), c(beta), c(gamma), c(delta));
        let roots = frobenius_termination(&p, MuChoice::Zero, n, 1e-12).unwrap();
        prop_assert_eq!(roots.len(), n + 1);
        for r in roots {
            prop_assert_eq!(r.coeffs.len(), n + 1);
            prop_assert!(r.extension_ratio() < 1e-8, "ratio {:e}", r.extension_ratio());
        }
    }

    #[test]
    fn parallel_map_preserves_order(xs in prop::collection::vec(-1e3..1e3f64, 0..300)) {
        let f = |x: &f64| x.sin() * x;
        prop_assert_eq!(heunpot::par::map_seq(&xs, f), heunpot::par::map_par(&xs, f));
    }
}
