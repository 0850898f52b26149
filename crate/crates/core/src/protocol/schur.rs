//! Qubit Schur basis from iterated spin coupling `j ⊗ 1/2 → j ± 1/2`.
//!
//! `|0⟩` is spin up. Qubit `q` of an `n`-qubit index is bit `n - 1 - q`, so
//! the qubit coupled last is the least significant bit.

use crate::error::{Error, Result};
use crate::matrix::{inner, norm, ComplexMatrix, C64};
use crate::rep::IrrepLabel;

pub const MAX_SCHUR_N: u32 = 6;

/// One copy of a `U(2)` irrep inside `(C^2)^{⊗n}`.
#[derive(Clone, Debug)]
pub struct SchurBlock {
    pub label: IrrepLabel,
    /// Position among the copies of `label`, in coupling-path order.
    pub copy: usize,
    /// `two_j` after coupling each qubit in turn.
    pub path: Vec<u32>,
    /// `vectors[k]` has `two_m = two_j - 2k`.
    pub vectors: Vec<Vec<f64>>,
}

impl SchurBlock {
    pub fn two_j(&self) -> u32 {
        self.label.two_j()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors[k].iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    /// Index `k` of the vector with the given `two_m`, if present.
    pub fn index_of_two_m(&self, two_m: i64) -> Option<usize> {
        let tj = self.two_j() as i64;
        if two_m.abs() > tj || (tj - two_m) % 2 != 0 {
            return None;
        }
        Some(((tj - two_m) / 2) as usize)
    }
}

#[derive(Clone, Debug)]
pub struct SchurBasis {
    pub n: u32,
    /// Sorted by label, then by copy.
    pub blocks: Vec<SchurBlock>,
}

struct Partial {
    path: Vec<u32>,
    two_j: u32,
    vectors: Vec<Vec<f64>>,
}

fn couple(p: &Partial, up: bool) -> Option<Partial> {
    let t = p.two_j as i64;
    let target = if up { t + 1 } else { t - 1 };
    if target < 0 {
        return None;
    }
    let dim_in = p.vectors[0].len();
    let mut vectors = Vec::with_capacity(target as usize + 1);
    for k in 0..=target {
        let u = target - 2 * k;
        let mut v = vec![0.0; dim_in * 2];
        let denom = (2 * (t + 1)) as f64;
        let (c_up, c_down) = if up {
            (((t + u + 1) as f64 / denom).sqrt(), ((t - u + 1) as f64 / denom).sqrt())
        } else {
            (-((t - u + 1) as f64 / denom).sqrt(), ((t + u + 1) as f64 / denom).sqrt())
        };
        // Previous vector with two_m = u - 1, new qubit up.
        if (u - 1).abs() <= t {
            let prev = &p.vectors[((t - (u - 1)) / 2) as usize];
            for (i, x) in prev.iter().enumerate() {
                v[2 * i] += c_up * x;
            }
        }
        // Previous vector with two_m = u + 1, new qubit down.
        if (u + 1).abs() <= t {
            let prev = &p.vectors[((t - (u + 1)) / 2) as usize];
            for (i, x) in prev.iter().enumerate() {
                v[2 * i + 1] += c_down * x;
            }
        }
        vectors.push(v);
    }
    let mut path = p.path.clone();
    path.push(target as u32);
    Some(Partial {
        path,
        two_j: target as u32,
        vectors,
    })
}

pub fn schur_basis(n: u32) -> Result<SchurBasis> {
    if !(1..=MAX_SCHUR_N).contains(&n) {
        return Err(Error::OutOfRange(format!("Schur basis needs 1 <= n <= {MAX_SCHUR_N}, got {n}")));
    }
    let mut level = vec![Partial {
        path: Vec::new(),
        two_j: 0,
        vectors: vec![vec![1.0]],
    }];
    for _ in 0..n {
        level = level
            .iter()
            .flat_map(|p| [couple(p, true), couple(p, false)])
            .flatten()
            .collect();
    }
    let mut parts: Vec<(IrrepLabel, Partial)> = level
        .into_iter()
        .map(|p| (IrrepLabel::from_two_j(n, p.two_j).expect("coupling stays in range"), p))
        .collect();
    parts.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.path.cmp(&b.1.path)));

    let mut blocks: Vec<SchurBlock> = Vec::with_capacity(parts.len());
    for (label, p) in parts {
        let copy = blocks.iter().filter(|b| b.label == label).count();
        blocks.push(SchurBlock {
            label,
            copy,
            path: p.path,
            vectors: p.vectors,
        });
    }
    Ok(SchurBasis { n, blocks })
}

impl SchurBasis {
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn copies(&self, label: &IrrepLabel) -> Vec<&SchurBlock> {
        self.blocks.iter().filter(|b| b.label == *label).collect()
    }

    pub fn labels(&self) -> Vec<IrrepLabel> {
        let mut out: Vec<IrrepLabel> = self.blocks.iter().map(|b| b.label).collect();
        out.dedup();
        out
    }

    /// All vectors, block by block.
    pub fn vectors(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.blocks.iter().flat_map(|b| b.vectors.iter())
    }

    /// `‖B^T B - I‖_max` over all basis vectors.
    pub fn gram_deviation(&self) -> f64 {
        let all: Vec<&Vec<f64>> = self.vectors().collect();
        let mut dev: f64 = 0.0;
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let dot: f64 = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((dot - target).abs());
            }
        }
        dev
    }

    /// Largest norm of the component of `g^{⊗n} v` outside the block of `v`,
    /// over all block vectors `v`.
    pub fn leakage(&self, g_power: &ComplexMatrix) -> Result<f64> {
        if g_power.rows() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "operator side {} on {} qubits",
                g_power.rows(),
                self.n
            )));
        }
        let mut worst: f64 = 0.0;
        for b in &self.blocks {
            let basis: Vec<Vec<C64>> = (0..b.vectors.len()).map(|k| b.vector(k)).collect();
            for v in &basis {
                let mut w = g_power.apply(v)?;
                for e in &basis {
                    let c = inner(e, &w);
                    for (x, y) in w.iter_mut().zip(e) {
                        *x -= c * y;
                    }
                }
                worst = worst.max(norm(&w));
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::{haar_sample, GroupSpec, RngStream};
    use crate::matrix::tensor_power;
    use crate::rep::u2_irrep_decomposition;
    use num_traits::ToPrimitive;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-14)
    }

    #[test]
    fn one_qubit_is_computational_basis() {
        let b = schur_basis(1).unwrap();
        assert_eq!(b.blocks.len(), 1);
        assert_eq!(b.blocks[0].two_j(), 1);
        assert_eq!(b.blocks[0].vectors, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn two_qubits_singlet_and_triplet() {
        let b = schur_basis(2).unwrap();
        let singlet = &b.copies(&IrrepLabel::from_two_j(2, 0).unwrap())[0];
        assert!(close(&singlet.vectors[0], &[0.0, S, -S, 0.0]));
        let triplet = &b.copies(&IrrepLabel::from_two_j(2, 2).unwrap())[0];
        assert!(close(&triplet.vectors[0], &[1.0, 0.0, 0.0, 0.0]));
        assert!(close(&triplet.vectors[1], &[0.0, S, S, 0.0]));
        assert!(close(&triplet.vectors[2], &[0.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn three_qubits_block_structure() {
        let b = schur_basis(3).unwrap();
        let half = IrrepLabel::from_two_j(3, 1).unwrap();
        let top = IrrepLabel::from_two_j(3, 3).unwrap();
        assert_eq!(b.copies(&half).len(), 2);
        assert_eq!(b.copies(&top).len(), 1);
        assert!(b.copies(&half).iter().all(|c| c.vectors.len() == 2));
        assert_eq!(b.copies(&top)[0].vectors.len(), 4);
        assert_eq!(b.copies(&half)[0].path, vec![1, 0, 1]);
        assert_eq!(b.copies(&half)[1].path, vec![1, 2, 1]);
    }

    #[test]
    fn orthonormal_with_correct_counts() {
        for n in 1..=MAX_SCHUR_N {
            let b = schur_basis(n).unwrap();
            assert_eq!(b.vectors().count(), b.dim());
            assert!(b.gram_deviation() <= 1e-10, "n={n}");
            for e in u2_irrep_decomposition(n) {
                assert_eq!(b.copies(&e.label).len(), e.mult.to_usize().unwrap());
            }
        }
    }

    #[test]
    fn blocks_are_invariant_and_copies_transform_alike() {
        let mut rng = RngStream::new(9, 0).generator();
        for n in 1..=MAX_SCHUR_N {
            let b = schur_basis(n).unwrap();
            for _ in 0..20 {
                let u = haar_sample(GroupSpec::UnitaryFull(2), &mut rng);
                let un = tensor_power(&u, n).unwrap();
                assert!(b.leakage(&un).unwrap() <= 1e-9, "n={n}");
            }
            let u = haar_sample(GroupSpec::UnitaryFull(2), &mut rng);
            let un = tensor_power(&u, n).unwrap();
            for label in b.labels() {
                let copies = b.copies(&label);
                let rep = |c: &SchurBlock, a: usize, k: usize| inner(&c.vector(a), &un.apply(&c.vector(k)).unwrap());
                for c in &copies[1..] {
                    for a in 0..label.dim() as usize {
                        for k in 0..label.dim() as usize {
                            assert!((rep(c, a, k) - rep(copies[0], a, k)).norm() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn range_guard() {
        assert!(schur_basis(0).is_err());
        assert!(schur_basis(7).is_err());
    }
}
