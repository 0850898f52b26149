use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::haar::GroupSpec;
use super::weingarten::{compose, inverse, permutations, weingarten_matrix};
use crate::error::{Error, Result};
use crate::matrix::{tensor_power, ComplexMatrix, HermitianOperator, C64};
use crate::protocol::schur_basis;
use crate::rep::SubgroupKind;

/// Largest operator side for exact integration.
pub const EXACT_SIDE_LIMIT: usize = 16384;
/// Largest operator side on the Weingarten path.
pub const WEINGARTEN_SIDE_LIMIT: usize = 4096;
/// Largest `n` on the Weingarten path unless explicitly allowed.
pub const WEINGARTEN_DEFAULT_MAX_N: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactTorus,
    ExactO2,
    Weingarten,
    MonteCarlo,
    AnalyticBlocks,
    /// `|I⟩⟩⟨⟨I|`, the performance operator of the trivial group.
    PointMass,
}

/// `ρ = E |f(U)⟩⟩⟨⟨f(U)|` for `f(U) = U^{⊗n}`, side `d^{2n}`.
#[derive(Clone, Debug)]
pub struct PerformanceOperator {
    pub op: HermitianOperator,
    pub method: Method,
    pub stderr: Option<f64>,
    pub n: u32,
    pub d: u32,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ExactOptions {
    /// Permit the Weingarten path for `n = 5, 6`.
    pub allow_large_weingarten: bool,
}

/// `(d^n, d^{2n})`, guarded by `limit` on the second.
pub(crate) fn sides(d: u32, n: u32, limit: usize) -> Result<(usize, usize)> {
    let too_big = || Error::SizeGuard {
        side: usize::MAX,
        limit,
    };
    let dn = (d as usize).checked_pow(n).ok_or_else(too_big)?;
    let side = dn.checked_mul(dn).ok_or_else(too_big)?;
    if side > limit {
        return Err(Error::SizeGuard { side, limit });
    }
    Ok((dn, side))
}

/// `Σ_v |v⟩⟨v|` for `vectors`, skipping zero amplitudes.
fn sum_of_projectors(side: usize, vectors: impl IntoIterator<Item = Vec<C64>>) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(side, side);
    for v in vectors {
        let support: Vec<(usize, C64)> = v
            .iter()
            .enumerate()
            .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
            .map(|(i, z)| (i, *z))
            .collect();
        for &(i, a) in &support {
            for &(j, b) in &support {
                m[(i, j)] += a * b.conj();
            }
        }
    }
    m
}

fn digits(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for q in (0..n).rev() {
        out[q] = index % d;
        index /= d;
    }
    out
}

fn wrap(op: ComplexMatrix, method: Method, n: u32, d: u32) -> Result<PerformanceOperator> {
    Ok(PerformanceOperator {
        op: HermitianOperator::new(op)?,
        method,
        stderr: None,
        n,
        d,
    })
}

/// Torus: `E[z^{wt(i)} z̄^{wt(k)}] = δ_{wt(i), wt(k)}`, so `ρ` is the sum of
/// projectors onto `Σ_{wt(i) = w} |i i⟩` over weights `w`.
fn torus(d: u32, n: u32) -> Result<PerformanceOperator> {
    let (dn, side) = sides(d, n, EXACT_SIDE_LIMIT)?;
    let mut classes: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for i in 0..dn {
        let mut w = vec![0u32; d as usize];
        for q in digits(i, d as usize, n as usize) {
            w[q] += 1;
        }
        classes.entry(w).or_default().push(i);
    }
    let mut m = ComplexMatrix::zeros(side, side);
    for members in classes.values() {
        for &i in members {
            for &k in members {
                m[(i * dn + i, k * dn + k)] = C64::new(1.0, 0.0);
            }
        }
    }
    wrap(m, Method::ExactTorus, n, d)
}

/// The eigenbasis `e_j = (|0⟩ + (-1)^j i|1⟩)/√2` of real rotations,
/// `R(θ) e_j = e^{∓iθ} e_j`, as columns.
pub(crate) fn o2_eigenbasis() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::new(
        2,
        2,
        vec![C64::new(s, 0.0), C64::new(s, 0.0), C64::new(0.0, s), C64::new(0.0, -s)],
    )
    .expect("2x2")
}

/// `O(2)`: with `W = V^{⊗n}` and `μ(s) = #e_0 - #e_1`, rotations contribute
/// `vec(W Π_μ W†)` and reflections `vec(W X^{⊗n} Π_μ W†)` for each `μ`, each
/// half with weight 1/2.
fn orthogonal2(n: u32) -> Result<PerformanceOperator> {
    let (dn, side) = sides(2, n, EXACT_SIDE_LIMIT)?;
    let w = tensor_power(&o2_eigenbasis(), n)?;
    let flip = dn - 1;
    let mu = |s: usize| s.count_ones();
    let mut vectors = Vec::new();
    for ones in 0..=n {
        let members: Vec<usize> = (0..dn).filter(|&s| mu(s) == ones).collect();
        let build = |reflect: bool| {
            let mut v = vec![C64::new(0.0, 0.0); side];
            for &s in &members {
                let left = if reflect { s ^ flip } else { s };
                for a in 0..dn {
                    let wa = w[(a, left)];
                    for b in 0..dn {
                        v[a * dn + b] += wa * w[(b, s)].conj();
                    }
                }
            }
            v
        };
        vectors.push(build(false));
        vectors.push(build(true));
    }
    let m = sum_of_projectors(side, vectors).scale(C64::new(0.5, 0.0));
    wrap(m, Method::ExactO2, n, 2)
}

/// `ρ[(i,j),(k,l)] = Σ_{σ,τ} δ_{k∘σ = i} δ_{l∘τ = j} Wg(στ^{-1})`.
fn weingarten(d: u32, n: u32, options: ExactOptions) -> Result<PerformanceOperator> {
    if n > WEINGARTEN_DEFAULT_MAX_N && !options.allow_large_weingarten {
        return Err(Error::SizeGuard {
            side: (d as usize).pow(2 * n.min(8)),
            limit: (d as usize).pow(2 * WEINGARTEN_DEFAULT_MAX_N),
        });
    }
    let (dn, side) = sides(d, n, WEINGARTEN_SIDE_LIMIT)?;
    let table = weingarten_matrix(n, d)?;
    let perms = permutations(n as usize);
    // permuted[σ][i] = k with k_{σ(q)} = i_q.
    let place: Vec<usize> = (0..n as usize).map(|q| (d as usize).pow(n - 1 - q as u32)).collect();
    let permuted: Vec<Vec<usize>> = perms
        .iter()
        .map(|s| {
            (0..dn)
                .map(|i| {
                    digits(i, d as usize, n as usize)
                        .iter()
                        .enumerate()
                        .map(|(q, &iq)| iq * place[s[q]])
                        .sum()
                })
                .collect()
        })
        .collect();
    let mut m = ComplexMatrix::zeros(side, side);
    for (si, s) in perms.iter().enumerate() {
        for (ti, t) in perms.iter().enumerate() {
            let wg = table.value(&compose(s, &inverse(t))).to_f64().expect("finite");
            let wg = C64::new(wg, 0.0);
            for i in 0..dn {
                let k = permuted[si][i];
                for j in 0..dn {
                    let l = permuted[ti][j];
                    m[(i * dn + j, k * dn + l)] += wg;
                }
            }
        }
    }
    wrap(m, Method::Weingarten, n, d)
}

/// `ρ_{U(2)} = Σ_λ d_λ^{-1} Σ_{m,m'} |w_{λ m' m}⟩⟨w_{λ m' m}|` with
/// `w_{λ m' m} = Σ_c |λ c m'⟩ ⊗ |λ c m⟩` in the Schur basis.
pub fn analytic_blocks(n: u32) -> Result<PerformanceOperator> {
    if n == 0 {
        return wrap(ComplexMatrix::identity(1), Method::AnalyticBlocks, 0, 2);
    }
    let (dn, side) = sides(2, n, EXACT_SIDE_LIMIT)?;
    let basis = schur_basis(n)?;
    let mut m = ComplexMatrix::zeros(side, side);
    for label in basis.labels() {
        let copies = basis.copies(&label);
        let dim = label.dim() as usize;
        let mut vectors = Vec::with_capacity(dim * dim);
        for mp in 0..dim {
            for mm in 0..dim {
                let mut v = vec![C64::new(0.0, 0.0); side];
                for c in &copies {
                    for (a, x) in c.vectors[mp].iter().enumerate() {
                        if *x == 0.0 {
                            continue;
                        }
                        for (b, y) in c.vectors[mm].iter().enumerate() {
                            v[a * dn + b] += C64::new(x * y, 0.0);
                        }
                    }
                }
                vectors.push(v);
            }
        }
        let block = sum_of_projectors(side, vectors).scale(C64::new(1.0 / dim as f64, 0.0));
        m = m.add(&block)?;
    }
    let op = HermitianOperator::symmetrized(m)?;
    Ok(PerformanceOperator {
        op,
        method: Method::AnalyticBlocks,
        stderr: None,
        n,
        d: 2,
    })
}

fn point_mass(d: u32, n: u32) -> Result<PerformanceOperator> {
    let (dn, side) = sides(d, n, EXACT_SIDE_LIMIT)?;
    let mut m = ComplexMatrix::zeros(side, side);
    for i in 0..dn {
        for k in 0..dn {
            m[(i * dn + i, k * dn + k)] = C64::new(1.0, 0.0);
        }
    }
    wrap(m, Method::PointMass, n, d)
}

pub fn performance_operator_exact(group: GroupSpec, n: u32) -> Result<PerformanceOperator> {
    performance_operator_exact_with(group, n, ExactOptions::default())
}

pub fn performance_operator_exact_with(group: GroupSpec, n: u32, options: ExactOptions) -> Result<PerformanceOperator> {
    group.validate()?;
    match group {
        GroupSpec::UnitaryFull(d) => weingarten(d, n, options),
        GroupSpec::Torus(d) => torus(d, n),
        GroupSpec::Orthogonal2 => orthogonal2(n),
        GroupSpec::Trivial(d) => point_mass(d, n),
    }
}

/// Exact performance operator of the subgroup `G0`.
pub fn subgroup_operator(kind: SubgroupKind, n: u32) -> Result<PerformanceOperator> {
    performance_operator_exact(GroupSpec::subgroup(kind)?, n)
}
