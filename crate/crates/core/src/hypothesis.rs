//! Optimal type-II error, sample complexity and numeric cross-checks.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrals::{
    choi_of_power, haar_sample, map_chunks, performance_operator_exact_with, performance_operator_mc,
    subgroup_operator, ExactOptions, GroupSpec, RngStream,
};
use crate::matrix::{dmax_witness, inner, DEFAULT_RTOL};
use crate::numfmt::{format_rational, parse_rational};
use crate::rep::{branching_table, closed_form_beta0, theorem2_value, SubgroupKind};

/// Largest operator side for the numeric path: `4^n ≤ 4096`.
pub const NUMERIC_SIDE_LIMIT: usize = 4096;

/// Upper end of the sample-complexity search.
pub const SAMPLE_SEARCH_MAX_N: u32 = 1_000_000;

/// Exact-mode agreement tolerance.
pub const EXACT_TOLERANCE: f64 = 1e-8;

pub const MIN_VALIDATION_SHOTS: usize = 10_000;

/// Discrepancy allowed in Monte Carlo mode, in standard errors.
pub const MC_SIGMAS: f64 = 4.0;

/// Type-I tolerance `ε ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorBudget {
    epsilon: BigRational,
}

impl ErrorBudget {
    pub fn new(epsilon: BigRational) -> Result<Self> {
        if epsilon < BigRational::zero() || epsilon > BigRational::one() {
            return Err(Error::InvalidArgument(format!("epsilon = {epsilon} is outside [0, 1]")));
        }
        Ok(Self { epsilon })
    }

    pub fn zero() -> Self {
        Self {
            epsilon: BigRational::zero(),
        }
    }

    /// Exact binary value of `eps`.
    pub fn from_f64(eps: f64) -> Result<Self> {
        let value = BigRational::from_float(eps)
            .ok_or_else(|| Error::InvalidArgument(format!("epsilon = {eps} is not finite")))?;
        Self::new(value)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    /// `1 - ε`.
    pub fn complement(&self) -> BigRational {
        BigRational::one() - &self.epsilon
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaMethod {
    Analytic,
    Numeric,
}

/// `β(ε)`: exact for the analytic path, floating point for the numeric one.
#[derive(Clone, Debug, PartialEq)]
pub enum Beta {
    Exact(BigRational),
    Approx(f64),
}

impl Beta {
    pub fn to_f64(&self) -> f64 {
        match self {
            Beta::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Beta::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Beta::Exact(q) => Some(q),
            Beta::Approx(_) => None,
        }
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Exact(q) => write!(f, "{q} = {}", format_rational(q)),
            Beta::Approx(x) => write!(f, "{}", crate::numfmt::format_f64(*x)),
        }
    }
}

/// `e^{Dmax(ρ_G0 ‖ ρ_G)}` from the branching tables.
pub fn dmax_analytic(subgroup: SubgroupKind, n: u32) -> Result<BigRational> {
    Ok(theorem2_value(&branching_table(subgroup, n)?).exp_dmax)
}

fn numeric_guard(subgroup: SubgroupKind, n: u32) -> Result<()> {
    let side = (subgroup.d as usize)
        .checked_pow(2 * n)
        .unwrap_or(usize::MAX);
    if side > NUMERIC_SIDE_LIMIT {
        return Err(Error::SizeGuard {
            side,
            limit: NUMERIC_SIDE_LIMIT,
        });
    }
    Ok(())
}

/// `exp(-Dmax)` between exactly integrated operators of `G0` and `U(d)`.
pub fn beta_numeric(subgroup: SubgroupKind, n: u32) -> Result<f64> {
    numeric_guard(subgroup, n)?;
    let options = ExactOptions {
        allow_large_weingarten: true,
    };
    let rho0 = subgroup_operator(subgroup, n)?;
    let rho = performance_operator_exact_with(GroupSpec::UnitaryFull(subgroup.d), n, options)?;
    let (d, _) = dmax_witness(&rho0.op, &rho.op, DEFAULT_RTOL)?;
    Ok((-d).exp())
}

/// Optimal type-II error at type-I tolerance `eps`.
///
/// ```
/// use num_rational::BigRational;
/// use symtest::hypothesis::{beta_optimal, BetaMethod, ErrorBudget};
/// use symtest::rep::SubgroupKind;
///
/// let b = beta_optimal(SubgroupKind::torus(), 4, &ErrorBudget::zero(), BetaMethod::Analytic).unwrap();
/// assert_eq!(b.exact(), Some(&BigRational::new(1.into(), 9.into())));
/// ```
pub fn beta_optimal(subgroup: SubgroupKind, n: u32, eps: &ErrorBudget, method: BetaMethod) -> Result<Beta> {
    match method {
        BetaMethod::Analytic => {
            let beta0 = theorem2_value(&branching_table(subgroup, n)?).beta0;
            Ok(Beta::Exact(eps.complement() * beta0))
        }
        BetaMethod::Numeric => {
            let scale = eps.complement().to_f64().unwrap_or(f64::NAN);
            Ok(Beta::Approx(scale * beta_numeric(subgroup, n)?))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleComplexityResult {
    #[serde(serialize_with = "serialize_rational")]
    pub delta: BigRational,
    pub n_star: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub beta_at_n_star: BigRational,
}

fn serialize_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn delta_rational(delta: f64) -> Result<BigRational> {
    BigRational::from_float(delta).ok_or_else(|| Error::InvalidArgument(format!("delta = {delta} is not finite")))
}

fn check_delta(delta: &BigRational) -> Result<()> {
    if *delta <= BigRational::zero() || *delta > BigRational::one() {
        return Err(Error::InvalidArgument(format!("delta = {delta} is outside (0, 1]")));
    }
    Ok(())
}

/// [`sample_complexity_exact`] at the exact binary value of `delta`.
pub fn sample_complexity(subgroup: SubgroupKind, delta: f64) -> Result<SampleComplexityResult> {
    sample_complexity_exact(subgroup, &delta_rational(delta)?)
}

/// Smallest `n` with `β(n) ≤ δ`, by bisection on the closed form.
///
/// `β` is non-increasing in `n` for all three subgroups.
pub fn sample_complexity_exact(subgroup: SubgroupKind, delta: &BigRational) -> Result<SampleComplexityResult> {
    check_delta(delta)?;
    let target = delta.clone();
    let beta = |n: u32| closed_form_beta0(subgroup, n);
    if beta(SAMPLE_SEARCH_MAX_N)? > target {
        return Err(Error::OutOfRange(format!(
            "delta = {delta} needs more than {SAMPLE_SEARCH_MAX_N} queries"
        )));
    }
    let (mut lo, mut hi) = (0u32, SAMPLE_SEARCH_MAX_N);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if beta(mid)? <= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(SampleComplexityResult {
        delta: target,
        n_star: lo,
        beta_at_n_star: beta(lo)?,
    })
}

/// [`sample_complexity`] by a linear scan over branching tables up to `max_n`.
pub fn sample_complexity_tabulated(
    subgroup: SubgroupKind,
    delta: &BigRational,
    max_n: u32,
) -> Result<SampleComplexityResult> {
    check_delta(delta)?;
    let target = delta.clone();
    for n in 0..=max_n {
        let beta = theorem2_value(&branching_table(subgroup, n)?).beta0;
        if beta <= target {
            return Ok(SampleComplexityResult {
                delta: target,
                n_star: n,
                beta_at_n_star: beta,
            });
        }
    }
    Err(Error::OutOfRange(format!("delta = {delta} needs more than {max_n} queries")))
}

/// `10^{-2}, 10^{-2.5}, …, 10^{-8}`.
pub fn half_decade_grid() -> Vec<f64> {
    (0..13).map(|k| 10f64.powf(-2.0 - k as f64 / 2.0)).collect()
}

/// Least-squares slope of `ln n*(δ)` against `ln(1/δ)`.
pub fn scaling_fit(subgroup: SubgroupKind, grid: &[f64]) -> Result<f64> {
    if grid.len() < 4 {
        return Err(Error::InvalidArgument(format!("grid has {} points, need 4", grid.len())));
    }
    if grid.iter().any(|&d| !(d > 0.0 && d <= 1e-2)) {
        return Err(Error::InvalidArgument("grid values must lie in (0, 1e-2]".into()));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("grid must be strictly decreasing".into()));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &delta in grid {
        let n = sample_complexity(subgroup, delta)?.n_star;
        points.push(((1.0 / delta).ln(), (n as f64).ln()));
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

#[derive(Clone, Copy, Debug)]
pub enum ValidationMode {
    Exact,
    MonteCarlo { shots: usize, rng: RngStream },
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub subgroup: String,
    pub n: u32,
    pub eps: f64,
    /// Exact `β` as a fraction.
    pub analytic: String,
    pub analytic_decimal: f64,
    pub numeric: f64,
    pub discrepancy: f64,
    pub tolerance: f64,
    pub method: &'static str,
    pub stderr: Option<f64>,
    pub shots: Option<usize>,
    pub seed: Option<u64>,
    pub stream: Option<u64>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `exp(-Dmax)` with `ρ_G` estimated from Haar samples, and its standard
/// error by linearizing the generalized eigenvalue in the sample mean.
fn beta_monte_carlo(subgroup: SubgroupKind, n: u32, shots: usize, rng: RngStream) -> Result<(f64, f64)> {
    let group = GroupSpec::UnitaryFull(subgroup.d);
    let rho0 = subgroup_operator(subgroup, n)?;
    let rho = performance_operator_mc(group, n, shots, rng)?;
    let (d, y) = dmax_witness(&rho0.op, &rho.op, DEFAULT_RTOL)?;
    let y = y.ok_or(Error::Embedding { leakage: f64::INFINITY })?;
    let beta = (-d).exp();
    let parts = map_chunks(shots, rng, |g, range| {
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in range {
            let z = inner(&y, &choi_of_power(&haar_sample(group, g), n)).norm_sqr();
            sum += z;
            sum_sq += z * z;
        }
        (sum, sum_sq)
    });
    let (sum, sum_sq) = parts.into_iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let count = shots as f64;
    let mean = sum / count;
    let var = (sum_sq - count * mean * mean).max(0.0) / (count - 1.0);
    Ok((beta, beta * (var / count).sqrt()))
}

/// Exact `β` from branching tables against `exp(-Dmax)` over independently built operators.
pub fn cross_validate(subgroup: SubgroupKind, n: u32, mode: ValidationMode) -> Result<ValidationReport> {
    numeric_guard(subgroup, n)?;
    let analytic = theorem2_value(&branching_table(subgroup, n)?).beta0;
    let analytic_decimal = analytic.to_f64().unwrap_or(f64::NAN);
    let (numeric, stderr, tolerance, method, shots, rng) = match mode {
        ValidationMode::Exact => (beta_numeric(subgroup, n)?, None, EXACT_TOLERANCE, "exact", None, None),
        ValidationMode::MonteCarlo { shots, rng } => {
            if shots < MIN_VALIDATION_SHOTS {
                return Err(Error::InvalidArgument(format!(
                    "shots = {shots} is below {MIN_VALIDATION_SHOTS}"
                )));
            }
            let (beta, sigma) = beta_monte_carlo(subgroup, n, shots, rng)?;
            (beta, Some(sigma), MC_SIGMAS * sigma, "monte_carlo", Some(shots), Some(rng))
        }
    };
    let discrepancy = (numeric - analytic_decimal).abs();
    Ok(ValidationReport {
        subgroup: subgroup.family.cli_name().to_string(),
        n,
        eps: 0.0,
        analytic: analytic.to_string(),
        analytic_decimal,
        numeric,
        discrepancy,
        tolerance,
        method,
        stderr,
        shots,
        seed: rng.map(|r| r.seed),
        stream: rng.map(|r| r.stream),
        pass: discrepancy <= tolerance,
    })
}

/// `p / q` as a rational.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}
