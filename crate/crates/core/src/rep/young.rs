use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};

/// All Young diagrams with `n` boxes and at most `d` rows, padded to length
/// `d`, in descending lexicographic order.
pub fn young_diagrams(n: u32, d: u32) -> Vec<Vec<u32>> {
    fn extend(remaining: u32, max_row: u32, rows_left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rows_left == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        // The remaining rows can hold at most max_row each.
        if remaining as u64 > max_row as u64 * rows_left as u64 {
            return;
        }
        for row in (0..=remaining.min(max_row)).rev() {
            prefix.push(row);
            extend(remaining - row, row, rows_left - 1, prefix, out);
            prefix.pop();
        }
    }

    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    extend(n, n, d, &mut Vec::with_capacity(d as usize), &mut out);
    out
}

/// Dimension of the `U(d)` irrep with highest weight `diagram`:
/// `Π_{i<j} (λ_i - λ_j + j - i) / (j - i)`.
pub fn weyl_dimension(diagram: &[u32], d: u32) -> Result<BigUint> {
    let invalid = || Error::InvalidDiagram {
        diagram: diagram.to_vec(),
        depth: d,
    };
    let nonzero = diagram.iter().rposition(|&r| r > 0).map_or(0, |p| p + 1);
    if nonzero > d as usize || diagram.windows(2).any(|w| w[0] < w[1]) {
        return Err(invalid());
    }
    let rows: Vec<u64> = (0..d as usize)
        .map(|i| diagram.get(i).copied().unwrap_or(0) as u64)
        .collect();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let gap = (j - i) as u64;
            num *= BigUint::from(rows[i] - rows[j] + gap);
            den *= BigUint::from(gap);
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r == BigUint::from(0u32));
    Ok(q)
}

/// `Σ_λ d_λ²` over Young diagrams of `n` boxes and depth `d`: the dimension of
/// the span of `{U^{⊗n} : U ∈ U(d)}`.
pub fn sum_dim_squared_general(n: u32, d: u32) -> BigUint {
    young_diagrams(n, d)
        .iter()
        .map(|y| {
            let dim = weyl_dimension(y, d).expect("enumerated diagrams are valid");
            &dim * &dim
        })
        .sum()
}
