//! Branching multiplicities by numerical character orthogonality,
//! `n_{η,λ} = ∫_{G0} χ_λ(g) conj(χ_η(g)) dg`, evaluated on explicit group
//! elements. Independent of the combinatorial rules in the branching table.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::labels::{IrrepLabel, SubgroupFamily, SubgroupIrrep, SubgroupKind};
use crate::error::{Error, Result};

pub const INTEGER_TOLERANCE: f64 = 1e-8;

type Mat2 = [[Complex64; 2]; 2];

/// Character of the `U(2)` irrep `λ = det^{row2} ⊗ Sym^{two_j}` at `g`,
/// computed from the eigenvalues of `g`.
pub fn u2_character(lambda: &IrrepLabel, g: &Mat2) -> Complex64 {
    let tr = g[0][0] + g[1][1];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let disc = (tr * tr - 4.0 * det).sqrt();
    let z1 = (tr + disc) / 2.0;
    let z2 = (tr - disc) / 2.0;
    let k = lambda.two_j() as i32;
    let h: Complex64 = (0..=k).map(|i| z1.powi(i) * z2.powi(k - i)).sum();
    h * det.powu(lambda.row2)
}

fn diag(a: Complex64, b: Complex64) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    [[a, z], [z, b]]
}

fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

fn reflect(g: Mat2) -> Mat2 {
    // diag(1, -1) · g
    [g[0], [-g[1][0], -g[1][1]]]
}

/// Character of an `O(2)` irrep at a real orthogonal 2×2 matrix.
fn o2_character(eta: &SubgroupIrrep, g: &Mat2) -> Result<Complex64> {
    let det = (g[0][0] * g[1][1] - g[0][1] * g[1][0]).re;
    let rotation_angle = g[1][0].re.atan2(g[0][0].re);
    Ok(match eta {
        SubgroupIrrep::O2OneDim { parity } => {
            if det > 0.0 || parity.sign() > 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        }
        SubgroupIrrep::O2TwoDim { w } => {
            if det > 0.0 {
                Complex64::new(2.0 * (*w as f64 * rotation_angle).cos(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        other => return Err(Error::InvalidArgument(format!("{other} is not an O(2) irrep"))),
    })
}

/// Multiplicity of `eta` in the restriction of `lambda` by quadrature over
/// `quadrature_points` nodes per angle.
///
/// The torus uses a `q × q` phase grid; `O(2)` averages a `θ` grid over
/// rotations and one over reflections with weight 1/2 each. Both rules are
/// exact for the trigonometric polynomials involved once `q > 2n`.
pub fn branching_oracle(
    subgroup: SubgroupKind,
    eta: &SubgroupIrrep,
    lambda: &IrrepLabel,
    n: u32,
    quadrature_points: usize,
) -> Result<f64> {
    subgroup.require_qubit("character oracle is implemented for qubits")?;
    if lambda.n() != n {
        return Err(Error::InvalidArgument(format!("{lambda} does not occur in tensor power {n}")));
    }
    let q = quadrature_points;
    let needs_grid = subgroup.family != SubgroupFamily::Trivial;
    if q == 0 || (needs_grid && q < 4 * (n as usize + 1)) {
        return Err(Error::InvalidArgument(format!(
            "quadrature_points = {q} is too small for n = {n}"
        )));
    }
    let node = |k: usize| 2.0 * PI * k as f64 / q as f64;

    let value = match subgroup.family {
        SubgroupFamily::Trivial => {
            if *eta != SubgroupIrrep::Trivial {
                return Err(Error::InvalidArgument(format!("{eta} is not an irrep of the trivial group")));
            }
            let one = Complex64::new(1.0, 0.0);
            u2_character(lambda, &diag(one, one))
        }
        SubgroupFamily::Torus => {
            let weight = match eta {
                SubgroupIrrep::TorusWeight { weight } if weight.len() == 2 => weight,
                other => return Err(Error::InvalidArgument(format!("{other} is not a qubit torus weight"))),
            };
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..q {
                for b in 0..q {
                    let z1 = Complex64::from_polar(1.0, node(a));
                    let z2 = Complex64::from_polar(1.0, node(b));
                    let chi_eta = z1.powu(weight[0]) * z2.powu(weight[1]);
                    acc += u2_character(lambda, &diag(z1, z2)) * chi_eta.conj();
                }
            }
            acc / (q * q) as f64
        }
        SubgroupFamily::Orthogonal => {
            let mut rot = Complex64::new(0.0, 0.0);
            let mut refl = Complex64::new(0.0, 0.0);
            for k in 0..q {
                let r = rotation(node(k));
                rot += u2_character(lambda, &r) * o2_character(eta, &r)?.conj();
                let f = reflect(r);
                refl += u2_character(lambda, &f) * o2_character(eta, &f)?.conj();
            }
            (rot + refl) / (2 * q) as f64
        }
    };

    let rounded = value.re.round();
    if (value.re - rounded).abs() > INTEGER_TOLERANCE || value.im.abs() > INTEGER_TOLERANCE {
        return Err(Error::NonIntegerMultiplicity {
            value: value.re,
            tol: INTEGER_TOLERANCE,
        });
    }
    Ok(value.re)
}
