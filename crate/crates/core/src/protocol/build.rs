use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::schur::{schur_basis, SchurBasis, SchurBlock};
use crate::error::{Error, Result};
use crate::integrals::o2_eigenbasis;
use crate::matrix::{inner, norm, tensor_power, ComplexMatrix, HermitianOperator, PureState, C64};
use crate::rep::{
    branching_table, reference_free_condition, theorem2_value, BranchingTable, IrrepLabel, Parity, SubgroupIrrep,
    SubgroupKind,
};

pub const MAX_PROTOCOL_N: u32 = 5;

/// How the multiplicity pairing is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Reference-free whenever the branching table allows it.
    Auto,
    /// Always pair with a `2^n`-dimensional reference.
    Reference,
}

/// The decision operator `T0`.
#[derive(Clone, Debug)]
pub enum Tester {
    /// `T0 = Σ_k |Φ_k⟩⟨Φ_k|` for an orthonormal frame.
    Projector { frame: Vec<Vec<C64>> },
    Dense(HermitianOperator),
}

impl Tester {
    pub fn acceptance(&self, state: &[C64]) -> Result<f64> {
        match self {
            Tester::Projector { frame } => Ok(frame.iter().map(|f| inner(f, state).norm_sqr()).sum()),
            Tester::Dense(t) => t.expectation(state),
        }
    }

    pub fn operator(&self, side: usize) -> HermitianOperator {
        match self {
            Tester::Projector { frame } => {
                let mut m = ComplexMatrix::zeros(side, side);
                for f in frame {
                    for (i, a) in f.iter().enumerate() {
                        if a.re == 0.0 && a.im == 0.0 {
                            continue;
                        }
                        for (j, b) in f.iter().enumerate() {
                            m[(i, j)] += a * b.conj();
                        }
                    }
                }
                HermitianOperator::symmetrized(m).expect("square")
            }
            Tester::Dense(t) => t.clone(),
        }
    }
}

/// Input state on system ⊗ reference (index `system · reference_dim + ref`)
/// and tester attaining the optimal type-II error.
#[derive(Clone, Debug)]
pub struct ParallelProtocol {
    pub n: u32,
    pub subgroup: SubgroupKind,
    pub eta: SubgroupIrrep,
    pub input_state: PureState,
    pub reference_dim: usize,
    pub tester: Tester,
    pub reference_free: bool,
    pub target_beta: BigRational,
}

impl ParallelProtocol {
    pub fn system_dim(&self) -> usize {
        1 << self.n
    }

    pub fn total_dim(&self) -> usize {
        self.system_dim() * self.reference_dim
    }

    pub fn tester_operator(&self) -> HermitianOperator {
        self.tester.operator(self.total_dim())
    }

    /// The same input with the accept-all tester `T0 = I`.
    pub fn with_accept_all(&self) -> Self {
        Self {
            tester: Tester::Dense(HermitianOperator::identity(self.total_dim())),
            ..self.clone()
        }
    }
}

/// `b[r][i]`: component `i` of the `r`-th copy of `η` inside one Schur block,
/// transforming identically for every block.
fn equivariant_vectors(block: &SchurBlock, eta: &SubgroupIrrep, n: u32, w: &ComplexMatrix) -> Result<Vec<Vec<Vec<C64>>>> {
    let two_j = block.two_j() as i64;
    let fn_diag = |v: &[C64]| -> Vec<C64> {
        v.iter()
            .enumerate()
            .map(|(i, z)| if i.count_ones() % 2 == 0 { *z } else { -*z })
            .collect()
    };
    Ok(match eta {
        SubgroupIrrep::Trivial => (0..block.vectors.len()).map(|k| vec![block.vector(k)]).collect(),
        SubgroupIrrep::TorusWeight { weight } => {
            let two_m = 2 * weight[0] as i64 - n as i64;
            match block.index_of_two_m(two_m) {
                Some(k) => vec![vec![block.vector(k)]],
                None => Vec::new(),
            }
        }
        SubgroupIrrep::O2TwoDim { w: wt } => match block.index_of_two_m(*wt as i64) {
            Some(k) => {
                let b0 = w.apply(&block.vector(k))?;
                let b1 = fn_diag(&b0);
                vec![vec![b0, b1]]
            }
            None => Vec::new(),
        },
        SubgroupIrrep::O2OneDim { parity } => {
            if two_j % 2 != 0 {
                return Ok(Vec::new());
            }
            let k = block.index_of_two_m(0).expect("even spin has m = 0");
            let b = w.apply(&block.vector(k))?;
            let sign = inner(&b, &fn_diag(&b)).re;
            let found = if sign > 0.5 {
                Parity::Plus
            } else if sign < -0.5 {
                Parity::Minus
            } else {
                return Err(Error::Embedding { leakage: 1.0 - sign.abs() });
            };
            if found == *parity {
                vec![vec![b]]
            } else {
                Vec::new()
            }
        }
    })
}

struct Pieces {
    /// Per λ with `n_{η,λ} > 0`: `(p_λ, n_{η,λ}, copies[c][r][i])`.
    parts: Vec<(f64, usize, Vec<Vec<Vec<Vec<C64>>>>)>,
}

fn collect(basis: &SchurBasis, table: &BranchingTable, eta: &SubgroupIrrep, n: u32) -> Result<Pieces> {
    let w = tensor_power(&o2_eigenbasis(), n)?;
    let weights: Vec<(IrrepLabel, u64)> = table
        .lambdas
        .iter()
        .map(|l| (l.label, l.dim as u64 * table.multiplicity(eta, &l.label) as u64))
        .filter(|(_, s)| *s > 0)
        .collect();
    let total: u64 = weights.iter().map(|(_, s)| s).sum();
    let mut parts = Vec::new();
    for (label, s) in weights {
        let expected = table.multiplicity(eta, &label) as usize;
        let copies: Vec<Vec<Vec<Vec<C64>>>> = basis
            .copies(&label)
            .into_iter()
            .map(|b| equivariant_vectors(b, eta, n, &w))
            .collect::<Result<_>>()?;
        if copies.iter().any(|c| c.len() != expected) {
            return Err(Error::Embedding { leakage: 1.0 });
        }
        parts.push((s as f64 / total as f64, expected, copies));
    }
    Ok(Pieces { parts })
}

fn check_frame(frame: &[Vec<C64>]) -> Result<()> {
    for (a, fa) in frame.iter().enumerate() {
        for (b, fb) in frame.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            let dev = (inner(fa, fb) - target).norm();
            if dev > 1e-10 {
                return Err(Error::Embedding { leakage: dev });
            }
        }
    }
    Ok(())
}

/// `ψ = Σ_λ √(p_λ/n_{η,λ}) Σ_r b_{λ,c=r,r,0}` and
/// `Φ_j = Σ_λ √(p_λ/n_{η,λ}) Σ_r b_{λ,c=r,r,j}`: copy `r` of `η` sits in
/// multiplicity copy `r` of `λ`, which needs `n_{η,λ} ≤ n_λ`.
fn reference_free(pieces: &Pieces, dim: usize, d_eta: usize) -> Result<(Vec<C64>, Vec<Vec<C64>>)> {
    let mut psi = vec![C64::new(0.0, 0.0); dim];
    let mut frame = vec![vec![C64::new(0.0, 0.0); dim]; d_eta];
    for (p, n_eta, copies) in &pieces.parts {
        if *n_eta > copies.len() {
            return Err(Error::Embedding { leakage: 1.0 });
        }
        let amp = (p / *n_eta as f64).sqrt();
        for r in 0..*n_eta {
            let b = &copies[r][r];
            for (x, y) in psi.iter_mut().zip(&b[0]) {
                *x += y * amp;
            }
            for (j, f) in frame.iter_mut().enumerate() {
                for (x, y) in f.iter_mut().zip(&b[j]) {
                    *x += y * amp;
                }
            }
        }
    }
    Ok((psi, frame))
}

/// `ψ = Σ_λ √(p_λ/(d_η n_{η,λ})) Σ_{r,i} b_{λ,0,r,i} ⊗ e_{r d_η + i}` and
/// `Φ_{j,i} = Σ_λ √(p_λ/n_{η,λ}) Σ_r b_{λ,0,r,j} ⊗ e_{r d_η + i}`.
fn with_reference(pieces: &Pieces, sys: usize, refd: usize, d_eta: usize) -> Result<(Vec<C64>, Vec<Vec<C64>>)> {
    let total = sys * refd;
    let mut psi = vec![C64::new(0.0, 0.0); total];
    let mut frame = vec![vec![C64::new(0.0, 0.0); total]; d_eta * d_eta];
    for (p, n_eta, copies) in &pieces.parts {
        if n_eta * d_eta > refd {
            return Err(Error::Embedding { leakage: 1.0 });
        }
        let amp_psi = (p / (d_eta * n_eta) as f64).sqrt();
        let amp_frame = (p / *n_eta as f64).sqrt();
        for r in 0..*n_eta {
            let b = &copies[0][r];
            for i in 0..d_eta {
                let e = r * d_eta + i;
                for (s, y) in b[i].iter().enumerate() {
                    psi[s * refd + e] += y * amp_psi;
                }
                for j in 0..d_eta {
                    for (s, y) in b[j].iter().enumerate() {
                        frame[j * d_eta + i][s * refd + e] += y * amp_frame;
                    }
                }
            }
        }
    }
    Ok((psi, frame))
}

pub fn build_optimal_protocol(subgroup: SubgroupKind, n: u32) -> Result<ParallelProtocol> {
    build_protocol(subgroup, n, Construction::Auto)
}

pub fn build_protocol(subgroup: SubgroupKind, n: u32, construction: Construction) -> Result<ParallelProtocol> {
    if !(1..=MAX_PROTOCOL_N).contains(&n) {
        return Err(Error::OutOfRange(format!("protocol needs 1 <= n <= {MAX_PROTOCOL_N}, got {n}")));
    }
    let table = branching_table(subgroup, n)?;
    let result = theorem2_value(&table);
    let eta = result.argmax_eta.clone();
    let basis = schur_basis(n)?;
    let pieces = collect(&basis, &table, &eta, n)?;
    let d_eta = eta.dim() as usize;
    let sys = basis.dim();

    let free = reference_free_condition(&table, &eta)?;
    let use_free = free && construction == Construction::Auto;
    let (reference_dim, (psi, frame)) = if use_free {
        (1, reference_free(&pieces, sys, d_eta)?)
    } else {
        (sys, with_reference(&pieces, sys, sys, d_eta)?)
    };
    check_frame(&frame)?;
    let drift = (norm(&psi) - 1.0).abs();
    if drift > 1e-10 {
        return Err(Error::Embedding { leakage: drift });
    }
    Ok(ParallelProtocol {
        n,
        subgroup,
        eta,
        input_state: PureState::normalized(psi)?,
        reference_dim,
        tester: Tester::Projector { frame },
        reference_free: use_free,
        target_beta: result.beta0,
    })
}

#[derive(Serialize)]
struct ProtocolJson<'a> {
    n: u32,
    subgroup: &'static str,
    eta: &'a SubgroupIrrep,
    reference_free: bool,
    system_dim: usize,
    reference_dim: usize,
    target_beta: String,
    target_beta_decimal: f64,
    input_state: Vec<[f64; 2]>,
    tester: TesterJson,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum TesterJson {
    Projector { frame: Vec<Vec<[f64; 2]>> },
    Dense { rows: Vec<Vec<[f64; 2]>> },
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

impl ParallelProtocol {
    /// JSON export; complex numbers are `[re, im]` pairs.
    pub fn to_json(&self) -> String {
        let tester = match &self.tester {
            Tester::Projector { frame } => TesterJson::Projector {
                frame: frame.iter().map(|f| pairs(f)).collect(),
            },
            Tester::Dense(t) => {
                let m = t.matrix();
                TesterJson::Dense {
                    rows: (0..m.rows()).map(|r| pairs(&m.data()[r * m.cols()..(r + 1) * m.cols()])).collect(),
                }
            }
        };
        let out = ProtocolJson {
            n: self.n,
            subgroup: self.subgroup.family.name(),
            eta: &self.eta,
            reference_free: self.reference_free,
            system_dim: self.system_dim(),
            reference_dim: self.reference_dim,
            target_beta: self.target_beta.to_string(),
            target_beta_decimal: self.target_beta.to_f64().unwrap_or(f64::NAN),
            input_state: pairs(self.input_state.amplitudes()),
            tester,
        };
        serde_json::to_string(&out).expect("protocol serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::{haar_sample, GroupSpec, RngStream};
    use crate::matrix::{hermitian_eig, kron};
    use crate::rep::SubgroupFamily;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn torus_two_queries() {
        let p = build_optimal_protocol(SubgroupKind::torus(), 2).unwrap();
        assert!(p.reference_free);
        assert_eq!(p.reference_dim, 1);
        assert_eq!(p.target_beta, q(1, 4));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // (1/2)(|01⟩ - |10⟩)/√2 + (√3/2)(|01⟩ + |10⟩)/√2.
        let a = 0.5 * s;
        let b = 3f64.sqrt() / 2.0 * s;
        let expected = [0.0, a + b, b - a, 0.0];
        for (z, e) in p.input_state.amplitudes().iter().zip(expected) {
            assert!((z.re - e).abs() < 1e-14 && z.im.abs() < 1e-14);
        }
    }

    #[test]
    fn identity_one_query_is_bell_pair() {
        let p = build_optimal_protocol(SubgroupKind::trivial(), 1).unwrap();
        assert!(!p.reference_free);
        assert_eq!(p.target_beta, q(1, 4));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [s, 0.0, 0.0, s];
        for (z, e) in p.input_state.amplitudes().iter().zip(bell) {
            assert!((z.re - e).abs() < 1e-15 && z.im == 0.0);
        }
        let t = p.tester_operator();
        let bell_c: Vec<C64> = bell.iter().map(|&x| C64::new(x, 0.0)).collect();
        let proj = ComplexMatrix::outer(&bell_c, &bell_c);
        assert!(t.matrix().sub(&proj).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn orthogonal_one_query_cannot_detect() {
        let p = build_optimal_protocol(SubgroupKind::orthogonal(), 1).unwrap();
        assert_eq!(p.target_beta, q(1, 1));
        assert!(p.reference_free);
    }

    #[test]
    fn reference_free_verdicts() {
        for n in 1..=MAX_PROTOCOL_N {
            assert!(!build_optimal_protocol(SubgroupKind::trivial(), n).unwrap().reference_free);
            assert!(build_optimal_protocol(SubgroupKind::torus(), n).unwrap().reference_free);
            assert!(build_optimal_protocol(SubgroupKind::orthogonal(), n).unwrap().reference_free);
        }
    }

    fn lift(g: &ComplexMatrix, p: &ParallelProtocol) -> ComplexMatrix {
        kron(&tensor_power(g, p.n).unwrap(), &ComplexMatrix::identity(p.reference_dim)).unwrap()
    }

    #[test]
    fn testers_are_feasible_and_invariant() {
        let mut rng = RngStream::new(21, 0).generator();
        for family in SubgroupFamily::ALL {
            for n in 1..=3 {
                for construction in [Construction::Auto, Construction::Reference] {
                    let p = build_protocol(SubgroupKind::qubit(family), n, construction).unwrap();
                    let t = p.tester_operator();
                    let e = hermitian_eig(&t).unwrap();
                    assert!(e.values[0] >= -1e-10 && *e.values.last().unwrap() <= 1.0 + 1e-10);
                    let group = GroupSpec::subgroup(p.subgroup).unwrap();
                    for _ in 0..50 {
                        let g = lift(&haar_sample(group, &mut rng), &p);
                        let moved = g.matmul(t.matrix()).unwrap().matmul(&g.adjoint()).unwrap();
                        assert!(moved.sub(t.matrix()).unwrap().max_abs() <= 1e-8, "{family} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn range_guard() {
        assert!(matches!(build_optimal_protocol(SubgroupKind::torus(), 0), Err(Error::OutOfRange(_))));
        assert!(matches!(build_optimal_protocol(SubgroupKind::torus(), 6), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn json_export() {
        let p = build_optimal_protocol(SubgroupKind::torus(), 1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(v["subgroup"], "torus");
        assert_eq!(v["target_beta"], "1/2");
        assert_eq!(v["input_state"].as_array().unwrap().len(), 2);
        assert_eq!(v["tester"]["kind"], "projector");
        assert_eq!(v["eta"]["kind"], "torus_weight");
    }
}
