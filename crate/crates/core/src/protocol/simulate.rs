use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::build::ParallelProtocol;
use crate::error::{Error, Result};
use crate::integrals::{haar_sample, map_chunks, reflection, rotation, GroupSpec, RngStream};
use crate::matrix::{ComplexMatrix, C64};
use crate::rep::SubgroupFamily;

#[derive(Clone, Debug, Serialize)]
pub struct SimulationReport {
    /// Largest `1 - acceptance` over sampled and fixed `g ∈ G0`.
    pub type_i_worst: f64,
    /// Sample variance of the acceptance over `G0`.
    pub null_acceptance_variance: f64,
    pub type_ii_mean: f64,
    pub type_ii_stderr: f64,
    pub target_beta: f64,
    pub shots_null: usize,
    pub shots_alt: usize,
    pub seed: u64,
    pub stream: u64,
}

/// Absolute slack added to statistical bounds, for estimators whose sample
/// variance is zero up to rounding.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

impl SimulationReport {
    /// `|type_ii_mean - target_beta| ≤ sigmas · stderr`, up to [`ROUNDOFF_FLOOR`].
    pub fn type_ii_consistent(&self, sigmas: f64) -> bool {
        (self.type_ii_mean - self.target_beta).abs() <= sigmas * self.type_ii_stderr + ROUNDOFF_FLOOR
    }
}

/// `(g^{⊗n} ⊗ I) ψ`, one qubit at a time.
pub fn apply_local(g: &ComplexMatrix, state: &[C64], n: u32, reference_dim: usize) -> Vec<C64> {
    let mut out = state.to_vec();
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    for q in 0..n {
        let stride = (1usize << (n - 1 - q)) * reference_dim;
        let block = stride * 2;
        for base in (0..out.len()).step_by(block) {
            for off in base..base + stride {
                let x0 = out[off];
                let x1 = out[off + stride];
                out[off] = a * x0 + b * x1;
                out[off + stride] = c * x0 + d * x1;
            }
        }
    }
    out
}

/// Streaming count, mean, centered second moment and worst defect; merged
/// with the pairwise update so that chunk order fixes the result.
#[derive(Clone, Copy, Debug)]
struct Stats {
    count: f64,
    mean: f64,
    m2: f64,
    worst_defect: f64,
}

impl Stats {
    fn new() -> Self {
        Self {
            count: 0.0,
            mean: 0.0,
            m2: 0.0,
            worst_defect: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (x - self.mean);
        self.worst_defect = self.worst_defect.max(1.0 - x);
    }

    fn merge(&mut self, other: &Stats) {
        if other.count == 0.0 {
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count / total;
        self.m2 += other.m2 + delta * delta * self.count * other.count / total;
        self.count = total;
        self.worst_defect = self.worst_defect.max(other.worst_defect);
    }

    fn variance(&self) -> f64 {
        if self.count > 1.0 {
            self.m2 / (self.count - 1.0)
        } else {
            0.0
        }
    }
}

/// `g = e` and eight fixed angles `kπ/4`, plus reflections for `O(2)`.
fn fixed_null_elements(family: SubgroupFamily) -> Vec<ComplexMatrix> {
    let mut out = vec![ComplexMatrix::identity(2)];
    for k in 0..8 {
        let theta = k as f64 * PI / 4.0;
        match family {
            SubgroupFamily::Trivial => {}
            SubgroupFamily::Torus => {
                let z = Complex64::from_polar(1.0, theta);
                out.push(ComplexMatrix::diagonal(&[z, z.conj()]));
                out.push(ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), z]));
            }
            SubgroupFamily::Orthogonal => {
                out.push(rotation(theta));
                out.push(reflection().matmul(&rotation(theta)).expect("2x2"));
            }
        }
    }
    out
}

fn run(protocol: &ParallelProtocol, group: GroupSpec, shots: usize, rng: RngStream) -> Result<Stats> {
    let psi = protocol.input_state.amplitudes();
    let parts = map_chunks(shots, rng, |g, range| -> Result<Stats> {
        let mut s = Stats::new();
        for _ in range {
            let u = haar_sample(group, g);
            let moved = apply_local(&u, psi, protocol.n, protocol.reference_dim);
            s.push(protocol.tester.acceptance(&moved)?);
        }
        Ok(s)
    });
    let mut acc = Stats::new();
    for p in parts {
        acc.merge(&p?);
    }
    Ok(acc)
}

/// Type-I error over `G0` and type-II error over Haar `U(2)`.
///
/// Null draws use `rng.substream(0)`, alternative draws `rng.substream(1)`.
pub fn simulate(protocol: &ParallelProtocol, shots_null: usize, shots_alt: usize, rng: RngStream) -> Result<SimulationReport> {
    if shots_null < 100 || shots_alt < 100 {
        return Err(Error::InvalidArgument(format!(
            "shots must be at least 100 (got {shots_null} null, {shots_alt} alternative)"
        )));
    }
    let null_group = GroupSpec::subgroup(protocol.subgroup)?;
    let mut null = run(protocol, null_group, shots_null, rng.substream(0))?;
    let psi = protocol.input_state.amplitudes();
    let mut fixed = Stats::new();
    for g in fixed_null_elements(protocol.subgroup.family) {
        let moved = apply_local(&g, psi, protocol.n, protocol.reference_dim);
        fixed.push(protocol.tester.acceptance(&moved)?);
    }
    let sampled_variance = null.variance();
    null.merge(&fixed);

    let alt = run(protocol, GroupSpec::UnitaryFull(2), shots_alt, rng.substream(1))?;
    Ok(SimulationReport {
        type_i_worst: null.worst_defect.max(0.0),
        null_acceptance_variance: sampled_variance,
        type_ii_mean: alt.mean,
        type_ii_stderr: (alt.variance() / alt.count).sqrt(),
        target_beta: protocol.target_beta.to_f64().unwrap_or(f64::NAN),
        shots_null,
        shots_alt,
        seed: rng.seed,
        stream: rng.stream,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{kron, tensor_power};
    use crate::protocol::build_optimal_protocol;
    use crate::rep::SubgroupKind;

    #[test]
    fn local_application_matches_kron() {
        let mut rng = RngStream::new(1, 1).generator();
        let u = haar_sample(GroupSpec::UnitaryFull(2), &mut rng);
        let n = 3;
        let r = 4;
        let state: Vec<C64> = (0..(8 * r)).map(|i| C64::new(i as f64, -(i as f64) / 3.0)).collect();
        let full = kron(&tensor_power(&u, n).unwrap(), &ComplexMatrix::identity(r)).unwrap();
        let expected = full.apply(&state).unwrap();
        let got = apply_local(&u, &state, n, r);
        assert!(expected.iter().zip(&got).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn stats_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..100).map(|i| ((i * 37) % 11) as f64 / 7.0).collect();
        let mut whole = Stats::new();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Stats::new();
        let mut b = Stats::new();
        xs[..40].iter().for_each(|&x| a.push(x));
        xs[40..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert!((a.mean - whole.mean).abs() < 1e-14);
        assert!((a.variance() - whole.variance()).abs() < 1e-13);
    }

    #[test]
    fn torus_two_queries() {
        let p = build_optimal_protocol(SubgroupKind::torus(), 2).unwrap();
        let r = simulate(&p, 10_000, 100_000, RngStream::new(7, 0)).unwrap();
        assert!(r.type_i_worst <= 1e-9);
        assert!(r.null_acceptance_variance <= 1e-18);
        assert!((r.type_ii_mean - 0.25).abs() <= 4.0 * r.type_ii_stderr, "{r:?}");
    }

    #[test]
    fn identity_two_queries() {
        let p = build_optimal_protocol(SubgroupKind::trivial(), 2).unwrap();
        let r = simulate(&p, 10_000, 100_000, RngStream::new(8, 0)).unwrap();
        assert!(r.type_i_worst <= 1e-9);
        assert!((r.type_ii_mean - 0.1).abs() <= 4.0 * r.type_ii_stderr, "{r:?}");
    }

    #[test]
    fn accept_all_tester() {
        for n in 1..=3 {
            let p = build_optimal_protocol(SubgroupKind::orthogonal(), n).unwrap().with_accept_all();
            let r = simulate(&p, 100, 100, RngStream::new(9, 0)).unwrap();
            assert!(r.type_i_worst <= 1e-12);
            assert!((r.type_ii_mean - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_one_query_accepts_everything() {
        let p = build_optimal_protocol(SubgroupKind::orthogonal(), 1).unwrap();
        let r = simulate(&p, 1000, 1000, RngStream::new(10, 0)).unwrap();
        assert!((r.type_ii_mean - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_tiny_shot_counts() {
        let p = build_optimal_protocol(SubgroupKind::torus(), 1).unwrap();
        assert!(simulate(&p, 10, 1000, RngStream::new(0, 0)).is_err());
    }
}
