//! Property tests for the structural invariants that hold on every input,
//! not just the fixtures: Hahn–Jordan exactness, TV geometry under mixing,
//! density round trips, and nonnegativity of the Gram quadratic form.

use charkern::nalgebra::DMatrix;
use charkern::{mix, Density, DiscreteSpace, KernelSpec, SignedMeasure};
use proptest::prelude::*;

fn mass_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, n..=n)
}

fn weight_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05..5.0f64, n..=n)
}

fn space_and_mass() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..8).prop_flat_map(|n| (weight_vec(n), mass_vec(n)))
}

fn build_space(nu: &[f64]) -> DiscreteSpace {
    let points: Vec<String> = (0..nu.len()).map(|i| format!("x{i}")).collect();
    DiscreteSpace::new(points, nu.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hahn_jordan_is_an_exact_disjoint_split((nu, mass) in space_and_mass()) {
        let mu = SignedMeasure::new(build_space(&nu), mass).unwrap();
        let (pos, neg) = mu.hahn_jordan();
        // Exact reassembly and disjoint supports.
        prop_assert_eq!((&(&pos - &neg) - &mu).tv_norm(), 0.0);
        for (p, n) in pos.mass().iter().zip(neg.mass()) {
            prop_assert!(*p >= 0.0 && *n >= 0.0);
            prop_assert!(p * n == 0.0);
        }
        // Same value up to summation order.
        let split_total = pos.total_mass() + neg.total_mass();
        prop_assert!((mu.tv_norm() - split_total).abs() <= 1e-14 * (1.0 + split_total));
    }

    #[test]
    fn mixing_is_affine_in_tv((nu, mass) in space_and_mass(), alpha in 0.0..1.0f64) {
        let space = build_space(&nu);
        let n = space.len();
        let p = SignedMeasure::new(space.clone(), vec![1.0 / n as f64; n]).unwrap();
        let q_raw: Vec<f64> = mass.iter().map(|m| m.abs() + 0.01).collect();
        let total: f64 = q_raw.iter().sum();
        let q = SignedMeasure::new(space, q_raw.into_iter().map(|v| v / total).collect()).unwrap();
        let mixed = mix(alpha, &p, &q).unwrap();
        prop_assert!(mixed.is_probability());
        let lhs = (&mixed - &p).tv_norm();
        let rhs = alpha * (&q - &p).tv_norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn density_measure_round_trip((nu, mass) in space_and_mass()) {
        let space = build_space(&nu);
        let raw: Vec<f64> = mass.iter().map(|m| m.abs() + 1e-3).collect();
        let integral: f64 = raw.iter().zip(space.nu()).map(|(h, w)| h * w).sum();
        let h = Density::new(space, raw.into_iter().map(|v| v / integral).collect()).unwrap();
        let back = h.to_measure().to_density().unwrap();
        for (a, b) in h.values().iter().zip(back.values()) {
            prop_assert!((a - b).abs() <= 1e-14 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn gram_quadratic_form_is_nonnegative(
        (nu, mass) in space_and_mass(),
        seed in prop::collection::vec(-1.0..1.0f64, 64),
    ) {
        let space = build_space(&nu);
        let n = space.len();
        let a = DMatrix::from_fn(n, n, |i, j| seed[(i * n + j) % seed.len()]);
        let kernel = KernelSpec::new(space.clone(), a.transpose() * &a).unwrap();
        let mu = SignedMeasure::new(space, mass).unwrap();
        prop_assert!(kernel.mmd_sq(&mu).unwrap() >= 0.0);
    }

    #[test]
    fn plus_one_never_changes_zero_mass_distances(
        (nu, mass) in space_and_mass(),
        seed in prop::collection::vec(-1.0..1.0f64, 64),
    ) {
        let space = build_space(&nu);
        let n = space.len();
        let a = DMatrix::from_fn(n, n, |i, j| seed[(i * n + j) % seed.len()]);
        let kernel = KernelSpec::new(space.clone(), a.transpose() * &a).unwrap();
        let mut centered = mass;
        let shift: f64 = centered.iter().sum::<f64>() / n as f64;
        for v in &mut centered {
            *v -= shift;
        }
        let mu = SignedMeasure::new(space, centered).unwrap();
        prop_assert!(mu.is_zero_mass());
        let plain = kernel.mmd_sq(&mu).unwrap();
        let shifted = kernel.plus_one().mmd_sq(&mu).unwrap();
        prop_assert!((plain - shifted).abs() <= 1e-11 * (1.0 + plain));
    }
}
