use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A U(2) irrep occurring in the `n`-fold tensor power of the defining
/// representation, labeled by its two-row Young diagram.
///
/// Spins are carried as `two_j = row1 - row2` so that all arithmetic stays in
/// the integers; `row2` records the power of the determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepLabel {
    pub row1: u32,
    pub row2: u32,
}

impl IrrepLabel {
    pub fn new(row1: u32, row2: u32) -> Result<Self> {
        if row1 < row2 {
            return Err(Error::InvalidLabel { row1, row2 });
        }
        Ok(Self { row1, row2 })
    }

    /// The label of spin `two_j / 2` inside the `n`-fold tensor power.
    pub fn from_two_j(n: u32, two_j: u32) -> Result<Self> {
        if two_j > n || !(n - two_j).is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "two_j = {two_j} does not occur in tensor power {n}"
            )));
        }
        Ok(Self {
            row1: (n + two_j) / 2,
            row2: (n - two_j) / 2,
        })
    }

    pub fn n(&self) -> u32 {
        self.row1 + self.row2
    }

    pub fn two_j(&self) -> u32 {
        self.row1 - self.row2
    }

    pub fn dim(&self) -> u32 {
        self.two_j() + 1
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row1, self.row2)
    }
}

/// Which symmetry is being tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupFamily {
    /// `G0 = {I}`: identity testing.
    Trivial,
    /// `G0 = U(1)^d`, the diagonal unitaries: Z-symmetry testing.
    Torus,
    /// `G0 = O(d)`: T-symmetry testing.
    Orthogonal,
}

impl SubgroupFamily {
    pub const ALL: [SubgroupFamily; 3] = [
        SubgroupFamily::Trivial,
        SubgroupFamily::Torus,
        SubgroupFamily::Orthogonal,
    ];

    /// Name used on the command line.
    pub fn cli_name(&self) -> &'static str {
        match self {
            SubgroupFamily::Trivial => "identity",
            SubgroupFamily::Torus => "z",
            SubgroupFamily::Orthogonal => "t",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SubgroupFamily::Trivial => "trivial",
            SubgroupFamily::Torus => "torus",
            SubgroupFamily::Orthogonal => "orthogonal",
        }
    }
}

impl FromStr for SubgroupFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "identity" | "trivial" => Ok(SubgroupFamily::Trivial),
            "z" | "torus" | "diagonal" => Ok(SubgroupFamily::Torus),
            "t" | "orthogonal" | "real" => Ok(SubgroupFamily::Orthogonal),
            other => Err(Error::InvalidArgument(format!("unknown subgroup '{other}'"))),
        }
    }
}

impl fmt::Display for SubgroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A subgroup of `U(d)` together with the ambient dimension.
///
/// Exact branching is only available for `d = 2`; larger `d` is accepted here
/// so that callers get a clear error from the operations that need `d = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupKind {
    pub family: SubgroupFamily,
    pub d: u32,
}

impl SubgroupKind {
    pub fn new(family: SubgroupFamily, d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedDimension {
                d,
                what: "ambient dimension must be at least 2",
            });
        }
        Ok(Self { family, d })
    }

    pub fn qubit(family: SubgroupFamily) -> Self {
        Self { family, d: 2 }
    }

    pub fn trivial() -> Self {
        Self::qubit(SubgroupFamily::Trivial)
    }

    pub fn torus() -> Self {
        Self::qubit(SubgroupFamily::Torus)
    }

    pub fn orthogonal() -> Self {
        Self::qubit(SubgroupFamily::Orthogonal)
    }

    pub(crate) fn require_qubit(&self, what: &'static str) -> Result<()> {
        if self.d != 2 {
            return Err(Error::UnsupportedDimension { d: self.d, what });
        }
        Ok(())
    }
}

impl fmt::Display for SubgroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(d={})", self.family, self.d)
    }
}

/// Sign of a one-dimensional O(2) irrep: `Plus` is the trivial
/// representation, `Minus` is the determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn sign(&self) -> i8 {
        match self {
            Parity::Plus => 1,
            Parity::Minus => -1,
        }
    }
}

impl From<Parity> for i8 {
    fn from(p: Parity) -> i8 {
        p.sign()
    }
}

impl TryFrom<i8> for Parity {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Parity::Plus),
            -1 => Ok(Parity::Minus),
            other => Err(format!("parity must be +1 or -1, got {other}")),
        }
    }
}

/// An irrep `η` of the subgroup.
///
/// The derived ordering is the canonical tie-break order used when selecting
/// the maximizing irrep: trivial, torus weights (lexicographic), `O(2)`
/// one-dimensional `+1` then `-1`, then two-dimensional by ascending weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupIrrep {
    Trivial,
    /// Character `diag(z_0, z_1, ...) ↦ Π z_k^{weight[k]}`; `weight[k]` counts
    /// tensor factors in basis state `|k⟩`.
    TorusWeight { weight: Vec<u32> },
    O2OneDim { parity: Parity },
    /// Two-dimensional irrep on which rotations act with phases `e^{∓iwθ}`.
    O2TwoDim { w: u32 },
}

impl SubgroupIrrep {
    pub fn dim(&self) -> u32 {
        match self {
            SubgroupIrrep::O2TwoDim { .. } => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for SubgroupIrrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupIrrep::Trivial => f.write_str("trivial"),
            SubgroupIrrep::TorusWeight { weight } => {
                let parts: Vec<String> = weight.iter().map(|w| w.to_string()).collect();
                write!(f, "weight({})", parts.join(","))
            }
            SubgroupIrrep::O2OneDim { parity } => match parity {
                Parity::Plus => f.write_str("o2_one_dim(+1)"),
                Parity::Minus => f.write_str("o2_one_dim(-1)"),
            },
            SubgroupIrrep::O2TwoDim { w } => write!(f, "o2_two_dim({w})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let mut etas = vec![
            SubgroupIrrep::O2TwoDim { w: 4 },
            SubgroupIrrep::O2OneDim { parity: Parity::Minus },
            SubgroupIrrep::TorusWeight { weight: vec![1, 1] },
            SubgroupIrrep::O2TwoDim { w: 2 },
            SubgroupIrrep::Trivial,
            SubgroupIrrep::O2OneDim { parity: Parity::Plus },
            SubgroupIrrep::TorusWeight { weight: vec![0, 2] },
        ];
        etas.sort();
        assert_eq!(
            etas,
            vec![
                SubgroupIrrep::Trivial,
                SubgroupIrrep::TorusWeight { weight: vec![0, 2] },
                SubgroupIrrep::TorusWeight { weight: vec![1, 1] },
                SubgroupIrrep::O2OneDim { parity: Parity::Plus },
                SubgroupIrrep::O2OneDim { parity: Parity::Minus },
                SubgroupIrrep::O2TwoDim { w: 2 },
                SubgroupIrrep::O2TwoDim { w: 4 },
            ]
        );
    }

    #[test]
    fn label_validation() {
        assert!(IrrepLabel::new(1, 2).is_err());
        let l = IrrepLabel::from_two_j(4, 2).unwrap();
        assert_eq!((l.row1, l.row2, l.dim()), (3, 1, 3));
        assert!(IrrepLabel::from_two_j(4, 3).is_err());
        assert!(IrrepLabel::from_two_j(2, 4).is_err());
    }

    #[test]
    fn subgroup_dimension_guard() {
        assert!(SubgroupKind::new(SubgroupFamily::Torus, 1).is_err());
        assert!(SubgroupKind::new(SubgroupFamily::Torus, 3).is_ok());
    }

    #[test]
    fn eta_json_shape() {
        let eta = SubgroupIrrep::O2OneDim { parity: Parity::Minus };
        assert_eq!(
            serde_json::to_string(&eta).unwrap(),
            r#"{"kind":"o2_one_dim","parity":-1}"#
        );
        let back: SubgroupIrrep = serde_json::from_str(r#"{"kind":"torus_weight","weight":[2,0]}"#).unwrap();
        assert_eq!(back, SubgroupIrrep::TorusWeight { weight: vec![2, 0] });
    }

    #[test]
    fn cli_names_parse() {
        for fam in SubgroupFamily::ALL {
            assert_eq!(fam.cli_name().parse::<SubgroupFamily>().unwrap(), fam);
        }
        assert!("x".parse::<SubgroupFamily>().is_err());
    }
}
