//! Unitary Weingarten function from characters of the symmetric group.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rep::{weyl_dimension, young_diagrams};

pub const MAX_WEINGARTEN_N: u32 = 6;

/// `p[q] = σ(q)`.
pub type Permutation = Vec<usize>;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Permutation> {
    let mut p: Permutation = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// `(a ∘ b)(q) = a(b(q))`.
pub fn compose(a: &[usize], b: &[usize]) -> Permutation {
    b.iter().map(|&q| a[q]).collect()
}

pub fn inverse(p: &[usize]) -> Permutation {
    let mut inv = vec![0; p.len()];
    for (q, &v) in p.iter().enumerate() {
        inv[v] = q;
    }
    inv
}

/// Cycle lengths in descending order.
pub fn cycle_type(p: &[usize]) -> Vec<u32> {
    let mut seen = vec![false; p.len()];
    let mut lengths = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut q = start;
        while !seen[q] {
            seen[q] = true;
            q = p[q];
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    lengths
}

/// `χ^λ(μ)` by the Murnaghan–Nakayama rule on beta-sets.
pub fn sn_character(lambda: &[u32], mu: &[u32]) -> BigInt {
    let rows: Vec<u32> = lambda.iter().copied().filter(|&r| r > 0).collect();
    let len = rows.len() as u32;
    let betas: BTreeSet<u32> = rows.iter().enumerate().map(|(i, &r)| r + len - 1 - i as u32).collect();
    let mut memo = BTreeMap::new();
    mn(&betas, mu, &mut memo)
}

fn mn(betas: &BTreeSet<u32>, mu: &[u32], memo: &mut BTreeMap<(Vec<u32>, usize), BigInt>) -> BigInt {
    let Some((&r, rest)) = mu.split_first() else {
        return BigInt::one();
    };
    let key = (betas.iter().copied().collect::<Vec<_>>(), mu.len());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut total = BigInt::zero();
    for &b in betas {
        if b < r || betas.contains(&(b - r)) {
            continue;
        }
        let between = betas.range(b - r + 1..b).count();
        let mut next = betas.clone();
        next.remove(&b);
        next.insert(b - r);
        let term = mn(&next, rest, memo);
        if between.is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    memo.insert(key, total.clone());
    total
}

/// `Wg(π, d)` for every permutation of `n` points, stored by cycle type.
#[derive(Clone, Debug)]
pub struct WeingartenTable {
    pub n: u32,
    pub d: u32,
    /// Keyed by descending cycle type.
    pub by_class: BTreeMap<Vec<u32>, BigRational>,
}

impl WeingartenTable {
    pub fn value(&self, p: &[usize]) -> &BigRational {
        &self.by_class[&cycle_type(p)]
    }

    /// `(π, Wg(π))` over all of `S_n`.
    pub fn entries(&self) -> Vec<(Permutation, BigRational)> {
        permutations(self.n as usize)
            .into_iter()
            .map(|p| {
                let v = self.value(&p).clone();
                (p, v)
            })
            .collect()
    }
}

/// `Wg(π) = (n!)^{-2} Σ_{λ ⊢ n, ℓ(λ) ≤ d} (χ^λ(1))² χ^λ(π) / s_λ(1^d)`.
///
/// For `d ≥ n` this inverts the Gram matrix `G_{στ} = d^{#cycles(στ^{-1})}`;
/// for `d < n` it is the Moore–Penrose pseudo-inverse.
pub fn weingarten_matrix(n: u32, d: u32) -> Result<WeingartenTable> {
    if n > MAX_WEINGARTEN_N {
        return Err(Error::OutOfRange(format!("Weingarten table needs n <= {MAX_WEINGARTEN_N}, got {n}")));
    }
    if d == 0 {
        return Err(Error::UnsupportedDimension { d, what: "dimension must be positive" });
    }
    let factorial: BigInt = (1..=n as u64).map(BigInt::from).product();
    let identity_class = vec![1u32; n as usize];
    let classes: Vec<Vec<u32>> = young_diagrams(n, n.max(1))
        .into_iter()
        .map(|y| y.into_iter().filter(|&r| r > 0).collect())
        .collect();
    let irreps: Vec<(Vec<u32>, BigInt, BigInt)> = young_diagrams(n, d)
        .into_iter()
        .map(|y| {
            let f = sn_character(&y, &identity_class);
            let s = BigInt::from(weyl_dimension(&y, d).expect("valid diagram"));
            (y, f, s)
        })
        .collect();
    let norm = &factorial * &factorial;
    let mut by_class = BTreeMap::new();
    for mu in classes {
        let mut v = BigRational::zero();
        for (y, f, s) in &irreps {
            let chi = sn_character(y, &mu);
            v += BigRational::new(f * f * chi, s.clone());
        }
        by_class.insert(mu, v / BigRational::from_integer(norm.clone()));
    }
    Ok(WeingartenTable { n, d, by_class })
}

/// `G_{στ} = d^{#cycles(στ^{-1})}` over permutations in lexicographic order.
pub fn gram_matrix(n: u32, d: u32) -> Vec<Vec<BigRational>> {
    let perms = permutations(n as usize);
    perms
        .iter()
        .map(|s| {
            perms
                .iter()
                .map(|t| {
                    let cycles = cycle_type(&compose(s, &inverse(t))).len() as u32;
                    BigRational::from_integer(BigInt::from(d).pow(cycles))
                })
                .collect()
        })
        .collect()
}
