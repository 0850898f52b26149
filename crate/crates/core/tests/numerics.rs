use symtest::hypothesis::{sample_complexity, scaling_fit};
use symtest::integrals::{performance_operator_exact, performance_operator_mc, GroupSpec, RngStream};
use symtest::rep::{sum_dim_squared_general, weyl_dimension, SubgroupKind};

#[test]
fn monte_carlo_matches_exact_at_three_queries() {
    for group in [GroupSpec::UnitaryFull(2), GroupSpec::Torus(2), GroupSpec::Orthogonal2] {
        let exact = performance_operator_exact(group, 3).unwrap();
        let mc = performance_operator_mc(group, 3, 50_000, RngStream::new(5, 3)).unwrap();
        let diff = exact.op.matrix().sub(mc.op.matrix()).unwrap().max_abs();
        // Max over 4096 entries of roughly Gaussian errors.
        assert!(diff <= 5.0 * mc.stderr.unwrap(), "{group:?}: {diff}");
    }
}

#[test]
fn growth_exponent_for_qutrits_is_near_eight() {
    // Σ d_λ² for U(3) grows like n^{d²-1}.
    let f = |n: u32| (sum_dim_squared_general(n, 3).to_string().parse::<f64>().unwrap()).ln();
    let slope = (f(400) - f(200)) / (400f64.ln() - 200f64.ln());
    assert!((7.5..8.0).contains(&slope), "{slope}");
    assert_eq!(weyl_dimension(&[2, 1, 0], 3).unwrap(), 8u32.into());
}

#[test]
fn sample_complexity_is_monotone_in_delta() {
    for kind in [SubgroupKind::trivial(), SubgroupKind::torus(), SubgroupKind::orthogonal()] {
        let mut last = 0;
        for k in 1..40 {
            let n = sample_complexity(kind, 0.9f64.powi(k)).unwrap().n_star;
            assert!(n >= last);
            last = n;
        }
        assert!(scaling_fit(kind, &[1e-3, 1e-4, 1e-5, 1e-6]).unwrap() > 0.0);
    }
}
