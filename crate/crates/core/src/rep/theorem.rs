use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::branching::BranchingTable;
use super::labels::{SubgroupFamily, SubgroupIrrep, SubgroupKind};
use crate::error::{Error, Result};

/// Optimal type-II error at zero type-I tolerance and the irrep attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaResult {
    pub beta0: BigRational,
    /// `e^{Dmax(ρ_G0 ‖ ρ_G)} = 1 / beta0`.
    pub exp_dmax: BigRational,
    pub argmax_eta: SubgroupIrrep,
    /// [`ancilla_free_condition`] evaluated at `argmax_eta`.
    pub ancilla_free: bool,
}

fn int(v: u64) -> BigInt {
    BigInt::from(v)
}

/// `d_η^{-1} Σ_λ d_λ n_{η,λ}` for one subgroup irrep.
pub fn eta_score(table: &BranchingTable, eta: &SubgroupIrrep) -> BigRational {
    let total: u64 = table
        .lambdas
        .iter()
        .map(|l| l.dim as u64 * table.multiplicity(eta, &l.label) as u64)
        .sum();
    BigRational::new(int(total), int(eta.dim() as u64))
}

/// `e^{Dmax} = max_η d_η^{-1} Σ_λ d_λ n_{η,λ}`, exactly.
///
/// Ties are broken towards the canonically smallest `η`.
pub fn theorem2_value(table: &BranchingTable) -> BetaResult {
    let mut best: Option<(SubgroupIrrep, BigRational)> = None;
    for eta in table.etas() {
        let score = eta_score(table, &eta);
        if best.as_ref().is_none_or(|(_, s)| score > *s) {
            best = Some((eta, score));
        }
    }
    let (argmax_eta, exp_dmax) = best.expect("every tensor power contains an irrep");
    let ancilla_free = ancilla_free_condition(table, &argmax_eta).expect("eta is present");
    BetaResult {
        beta0: exp_dmax.recip(),
        exp_dmax,
        argmax_eta,
        ancilla_free,
    }
}

fn check_eta(table: &BranchingTable, eta: &SubgroupIrrep) -> Result<()> {
    if !table.contains_eta(eta) {
        return Err(Error::UnknownEta(eta.to_string()));
    }
    Ok(())
}

/// `d_η n_{η,λ} ≤ n_λ` for every `λ` containing `η`: the maximally entangled
/// construction then fits inside the system without a reference.
pub fn ancilla_free_condition(table: &BranchingTable, eta: &SubgroupIrrep) -> Result<bool> {
    check_eta(table, eta)?;
    Ok(table.lambdas.iter().all(|l| {
        let m = table.multiplicity(eta, &l.label);
        m == 0 || BigUint::from(eta.dim() as u64 * m as u64) <= l.mult
    }))
}

/// `n_{η,λ} ≤ n_λ` for every `λ` containing `η`.
///
/// Weaker than [`ancilla_free_condition`] when `d_η > 1`. It is what the
/// reference-free protocol in [`crate::protocol`] needs: a single vector of
/// `U_η` replaces the maximally entangled pair `|f_η(e)⟩⟩`, and the type-II
/// error is unchanged.
pub fn reference_free_condition(table: &BranchingTable, eta: &SubgroupIrrep) -> Result<bool> {
    check_eta(table, eta)?;
    Ok(table.lambdas.iter().all(|l| {
        let m = table.multiplicity(eta, &l.label);
        m == 0 || BigUint::from(m) <= l.mult
    }))
}

/// Closed-form optimal type-II error for qubit unitaries.
pub fn closed_form_beta0(subgroup: SubgroupKind, n: u32) -> Result<BigRational> {
    subgroup.require_qubit("closed forms are for qubits")?;
    let n = n as u64;
    if n == 0 {
        return Ok(BigRational::one());
    }
    let (num, den) = match (subgroup.family, n.is_multiple_of(2)) {
        (SubgroupFamily::Trivial, _) => (6, (n + 1) * (n + 2) * (n + 3)),
        (SubgroupFamily::Torus, true) => (4, (n + 2) * (n + 2)),
        (SubgroupFamily::Torus, false) => (4, (n + 1) * (n + 3)),
        (SubgroupFamily::Orthogonal, true) => (8, (n + 2) * (n + 4)),
        (SubgroupFamily::Orthogonal, false) => (8, (n + 1) * (n + 3)),
    };
    debug_assert!(!BigRational::new(int(num), int(den)).is_zero());
    Ok(BigRational::new(int(num), int(den)))
}

#[cfg(test)]
mod tests {
    use super::super::branching::branching_table;
    use super::super::labels::Parity;
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn examples() {
        let r = theorem2_value(&branching_table(SubgroupKind::trivial(), 2).unwrap());
        assert_eq!((r.exp_dmax.clone(), r.beta0.clone()), (q(10, 1), q(1, 10)));
        assert_eq!(r.argmax_eta, SubgroupIrrep::Trivial);

        let r = theorem2_value(&branching_table(SubgroupKind::torus(), 2).unwrap());
        assert_eq!(r.exp_dmax, q(4, 1));
        assert_eq!(r.argmax_eta, SubgroupIrrep::TorusWeight { weight: vec![1, 1] });

        let r = theorem2_value(&branching_table(SubgroupKind::orthogonal(), 2).unwrap());
        assert_eq!(r.exp_dmax, q(3, 1));
        assert_eq!(r.argmax_eta, SubgroupIrrep::O2OneDim { parity: Parity::Plus });
    }

    #[test]
    fn zero_queries_distinguish_nothing() {
        for family in SubgroupFamily::ALL {
            let r = theorem2_value(&branching_table(SubgroupKind::qubit(family), 0).unwrap());
            assert_eq!(r.beta0, BigRational::one());
            assert_eq!(closed_form_beta0(SubgroupKind::qubit(family), 0).unwrap(), BigRational::one());
        }
    }

    #[test]
    fn odd_torus_tie_breaks_to_smaller_weight() {
        let r = theorem2_value(&branching_table(SubgroupKind::torus(), 3).unwrap());
        assert_eq!(r.argmax_eta, SubgroupIrrep::TorusWeight { weight: vec![1, 2] });
        assert_eq!(r.exp_dmax, q(6, 1));
    }

    #[test]
    fn ancilla_examples() {
        let t = branching_table(SubgroupKind::torus(), 3).unwrap();
        let eta = SubgroupIrrep::TorusWeight { weight: vec![2, 1] };
        assert!(ancilla_free_condition(&t, &eta).unwrap());

        let t = branching_table(SubgroupKind::trivial(), 2).unwrap();
        assert!(!ancilla_free_condition(&t, &SubgroupIrrep::Trivial).unwrap());

        let t = branching_table(SubgroupKind::orthogonal(), 2).unwrap();
        let eta = SubgroupIrrep::O2OneDim { parity: Parity::Plus };
        assert!(ancilla_free_condition(&t, &eta).unwrap());

        let unknown = SubgroupIrrep::O2TwoDim { w: 7 };
        assert!(matches!(ancilla_free_condition(&t, &unknown), Err(Error::UnknownEta(_))));
    }

    #[test]
    fn odd_orthogonal_needs_a_single_vector_only() {
        // The two-dimensional η sits once in the top irrep, which has n_λ = 1.
        for n in [1u32, 3, 5] {
            let t = branching_table(SubgroupKind::orthogonal(), n).unwrap();
            let r = theorem2_value(&t);
            assert_eq!(r.argmax_eta, SubgroupIrrep::O2TwoDim { w: 1 });
            assert!(!r.ancilla_free);
            assert!(reference_free_condition(&t, &r.argmax_eta).unwrap());
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_beta0(SubgroupKind::trivial(), 3).unwrap(), q(1, 20));
        assert_eq!(closed_form_beta0(SubgroupKind::torus(), 1).unwrap(), q(1, 2));
        assert_eq!(closed_form_beta0(SubgroupKind::orthogonal(), 1).unwrap(), q(1, 1));
        let big = SubgroupKind::new(SubgroupFamily::Torus, 3).unwrap();
        assert!(closed_form_beta0(big, 2).is_err());
    }

    #[test]
    fn theorem_matches_closed_forms() {
        for family in SubgroupFamily::ALL {
            let kind = SubgroupKind::qubit(family);
            for n in 0..=30 {
                let r = theorem2_value(&branching_table(kind, n).unwrap());
                assert_eq!(r.beta0, closed_form_beta0(kind, n).unwrap(), "{family} n={n}");
                assert_eq!(&r.beta0 * &r.exp_dmax, BigRational::one());
            }
        }
    }

    #[test]
    fn ordering_and_monotonicity() {
        let b = |f, n| closed_form_beta0(SubgroupKind::qubit(f), n).unwrap();
        for n in 1..=60 {
            for f in SubgroupFamily::ALL {
                assert!(b(f, n) <= b(f, n - 1));
            }
            if n >= 2 {
                assert!(b(SubgroupFamily::Trivial, n) <= b(SubgroupFamily::Torus, n));
                assert!(b(SubgroupFamily::Torus, n) <= b(SubgroupFamily::Orthogonal, n));
            }
        }
        for k in 1..=14 {
            assert_eq!(b(SubgroupFamily::Orthogonal, 2 * k + 1), b(SubgroupFamily::Orthogonal, 2 * k));
        }
    }
}
