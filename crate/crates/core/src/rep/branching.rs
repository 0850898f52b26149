use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use super::labels::{IrrepLabel, Parity, SubgroupFamily, SubgroupIrrep, SubgroupKind};
use crate::error::Result;

/// An irrep of `U(2)` in `(C^2)^{⊗n}` with its dimension `d_λ` and
/// multiplicity `n_λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrepEntry {
    pub label: IrrepLabel,
    pub dim: u32,
    pub mult: BigUint,
}

/// `C(n, 0), …, C(n, ⌊n/2⌋)`.
fn binomial_row(n: u32) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for k in 1..=n / 2 {
        let next = row[(k - 1) as usize].clone() * BigUint::from(n - k + 1) / BigUint::from(k);
        row.push(next);
    }
    row
}

/// Irreps of the `n`-fold tensor power of the qubit, ascending in spin.
///
/// `n_λ = C(n, k) - C(n, k - 1)` with `k = (n - two_j) / 2`.
pub fn u2_irrep_decomposition(n: u32) -> Vec<IrrepEntry> {
    let row = binomial_row(n);
    (n % 2..=n)
        .step_by(2)
        .map(|two_j| {
            let k = ((n - two_j) / 2) as usize;
            let below = if k == 0 { BigUint::zero() } else { row[k - 1].clone() };
            IrrepEntry {
                label: IrrepLabel::from_two_j(n, two_j).expect("parity matches"),
                dim: two_j + 1,
                mult: &row[k] - below,
            }
        })
        .collect()
}

/// `Σ_λ d_λ²` over the irreps of the `n`-fold tensor power.
pub fn sum_dim_squared(n: u32) -> BigUint {
    u2_irrep_decomposition(n)
        .iter()
        .map(|e| BigUint::from(e.dim) * BigUint::from(e.dim))
        .sum()
}

/// Branching multiplicities `n_{η,λ}` of a subgroup inside every `U(2)` irrep
/// of the `n`-fold tensor power. Pairs that are absent have multiplicity 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingTable {
    pub n: u32,
    pub subgroup: SubgroupKind,
    pub lambdas: Vec<IrrepEntry>,
    entries: BTreeMap<(SubgroupIrrep, IrrepLabel), u32>,
}

impl BranchingTable {
    pub fn multiplicity(&self, eta: &SubgroupIrrep, lambda: &IrrepLabel) -> u32 {
        self.entries
            .get(&(eta.clone(), *lambda))
            .copied()
            .unwrap_or(0)
    }

    /// Distinct subgroup irreps in canonical order.
    pub fn etas(&self) -> Vec<SubgroupIrrep> {
        let mut etas: Vec<SubgroupIrrep> = self.entries.keys().map(|(eta, _)| eta.clone()).collect();
        etas.dedup();
        etas
    }

    pub fn contains_eta(&self, eta: &SubgroupIrrep) -> bool {
        self.entries.keys().any(|(e, _)| e == eta)
    }

    /// Nonzero entries `((η, λ), n_{η,λ})` ordered by `η` then `λ`.
    pub fn entries(&self) -> impl Iterator<Item = (&SubgroupIrrep, &IrrepLabel, u32)> {
        self.entries.iter().map(|((eta, lambda), m)| (eta, lambda, *m))
    }

    pub fn lambda(&self, label: &IrrepLabel) -> Option<&IrrepEntry> {
        self.lambdas.iter().find(|e| e.label == *label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }
}

struct ExactInt<'a>(&'a BigUint);

impl Serialize for ExactInt<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => RawValue::from_string(self.0.to_str_radix(10))
                .map_err(serde::ser::Error::custom)?
                .serialize(s),
        }
    }
}

struct LambdaJson<'a>(&'a IrrepEntry);

impl Serialize for LambdaJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("lambda", 4)?;
        st.serialize_field("row1", &self.0.label.row1)?;
        st.serialize_field("row2", &self.0.label.row2)?;
        st.serialize_field("dim", &self.0.dim)?;
        st.serialize_field("mult", &ExactInt(&self.0.mult))?;
        st.end()
    }
}

struct EntryJson<'a>(&'a SubgroupIrrep, &'a IrrepLabel, u32);

impl Serialize for EntryJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("eta", self.0)?;
        m.serialize_entry("lambda", self.1)?;
        m.serialize_entry("mult", &self.2)?;
        m.end()
    }
}

impl Serialize for BranchingTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let lambdas: Vec<LambdaJson> = self.lambdas.iter().map(LambdaJson).collect();
        let entries: Vec<EntryJson> = self
            .entries()
            .map(|(eta, lambda, m)| EntryJson(eta, lambda, m))
            .collect();
        let mut st = s.serialize_struct("BranchingTable", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("subgroup", self.subgroup.family.name())?;
        st.serialize_field("lambdas", &lambdas)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Parity of the one-dimensional `O(2)` irrep inside the spin-`two_j / 2`
/// irrep of an even tensor power: `λ = det^{row2} ⊗ Sym^{two_j}`, the
/// symmetric power contributes an invariant and the determinant its sign.
pub fn o2_one_dim_parity(n: u32, two_j: u32) -> Parity {
    if ((n - two_j) / 2).is_multiple_of(2) {
        Parity::Plus
    } else {
        Parity::Minus
    }
}

/// Build the branching table of `subgroup` over the irreps of `(C^2)^{⊗n}`.
pub fn branching_table(subgroup: SubgroupKind, n: u32) -> Result<BranchingTable> {
    subgroup.require_qubit("exact branching is implemented for qubits only")?;
    let lambdas = u2_irrep_decomposition(n);
    let mut entries = BTreeMap::new();
    for entry in &lambdas {
        let lambda = entry.label;
        let two_j = lambda.two_j();
        match subgroup.family {
            SubgroupFamily::Trivial => {
                entries.insert((SubgroupIrrep::Trivial, lambda), entry.dim);
            }
            SubgroupFamily::Torus => {
                // Every weight of a qubit irrep occurs once.
                for a in 0..=n {
                    if (2 * a as i64 - n as i64).unsigned_abs() <= two_j as u64 {
                        let eta = SubgroupIrrep::TorusWeight { weight: vec![a, n - a] };
                        entries.insert((eta, lambda), 1);
                    }
                }
            }
            SubgroupFamily::Orthogonal => {
                for w in (two_j % 2..=two_j).step_by(2).filter(|&w| w > 0) {
                    entries.insert((SubgroupIrrep::O2TwoDim { w }, lambda), 1);
                }
                if n.is_multiple_of(2) {
                    let eta = SubgroupIrrep::O2OneDim {
                        parity: o2_one_dim_parity(n, two_j),
                    };
                    entries.insert((eta, lambda), 1);
                }
            }
        }
    }
    Ok(BranchingTable {
        n,
        subgroup,
        lambdas,
        entries,
    })
}
