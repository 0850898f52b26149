use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::rep::{SubgroupFamily, SubgroupKind};

/// A compact group of `d × d` unitaries with its Haar measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupSpec {
    UnitaryFull(u32),
    /// Diagonal unitaries `U(1)^d`.
    Torus(u32),
    /// Real 2×2 rotations and reflections.
    Orthogonal2,
    /// The trivial group `{I_d}`.
    Trivial(u32),
}

impl GroupSpec {
    pub fn d(&self) -> u32 {
        match self {
            GroupSpec::UnitaryFull(d) | GroupSpec::Torus(d) | GroupSpec::Trivial(d) => *d,
            GroupSpec::Orthogonal2 => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::UnitaryFull(d) if *d < 2 => Err(Error::UnsupportedDimension {
                d: *d,
                what: "U(d) needs d >= 2",
            }),
            GroupSpec::Torus(0) | GroupSpec::Trivial(0) => Err(Error::UnsupportedDimension {
                d: 0,
                what: "dimension must be positive",
            }),
            _ => Ok(()),
        }
    }

    /// The subgroup `G0` for a subgroup choice.
    pub fn subgroup(kind: SubgroupKind) -> Result<Self> {
        Ok(match kind.family {
            SubgroupFamily::Trivial => GroupSpec::Trivial(kind.d),
            SubgroupFamily::Torus => GroupSpec::Torus(kind.d),
            SubgroupFamily::Orthogonal => {
                kind.require_qubit("O(d) is only realized for d = 2")?;
                GroupSpec::Orthogonal2
            }
        })
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Real rotation by `theta`.
pub fn rotation(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_real(2, 2, &[c, -s, s, c]).expect("2x2")
}

/// The reflection `diag(1, -1)`.
pub fn reflection() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
}

/// Haar-random element of `group`.
pub fn haar_sample<R: Rng + ?Sized>(group: GroupSpec, rng: &mut R) -> ComplexMatrix {
    match group {
        GroupSpec::UnitaryFull(d) => {
            let d = d as usize;
            let z = ComplexMatrix::from_fn(d, d, |_, _| gaussian(rng));
            let qr = z.to_nalgebra().qr();
            let (q, r) = qr.unpack();
            let phases: Vec<C64> = (0..d)
                .map(|i| {
                    let rii = r[(i, i)];
                    if rii.norm() == 0.0 {
                        C64::new(1.0, 0.0)
                    } else {
                        rii / rii.norm()
                    }
                })
                .collect();
            let q = ComplexMatrix::from_nalgebra(&q);
            q.matmul(&ComplexMatrix::diagonal(&phases)).expect("square")
        }
        GroupSpec::Torus(d) => {
            let phases: Vec<C64> = (0..d)
                .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI)))
                .collect();
            ComplexMatrix::diagonal(&phases)
        }
        GroupSpec::Orthogonal2 => {
            let r = rotation(rng.random_range(0.0..2.0 * PI));
            if rng.random_bool(0.5) {
                reflection().matmul(&r).expect("2x2")
            } else {
                r
            }
        }
        GroupSpec::Trivial(d) => ComplexMatrix::identity(d as usize),
    }
}
