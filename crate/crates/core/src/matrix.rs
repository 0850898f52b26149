//! Dense complex linear algebra for operators on `(C^d)^{⊗n} ⊗ (C^d)^{⊗n}`.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest side accepted by [`kron`] and [`tensor_power`].
pub const MAX_SIDE: usize = 1 << 14;

pub const DEFAULT_RTOL: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-12;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(side: usize) -> Self {
        let mut m = Self::zeros(side, side);
        for i in 0..side {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |r, c| a[r] * b[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for (k, a) in row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!("{}x{} applied to length {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `max |a_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }

    /// Column `c` as a vector.
    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.adjoint().matmul(self).expect("adjoint shapes agree");
        g.sub(&Self::identity(self.cols)).expect("square").max_abs()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    if rows.max(cols) > MAX_SIDE {
        return Err(Error::SizeGuard {
            side: rows.max(cols),
            limit: MAX_SIDE,
        });
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    }))
}

/// `U^{⊗n}`, with `U^{⊗0}` the 1×1 identity.
pub fn tensor_power(u: &ComplexMatrix, n: u32) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::identity(1);
    for _ in 0..n {
        out = kron(&out, u)?;
    }
    Ok(out)
}

/// `|U⟩⟩ = Σ u_{k,k'} |k, k'⟩`, component `u_{k,k'}` at index `k·m + k'`.
pub fn choi_vec(u: &ComplexMatrix) -> Result<Vec<C64>> {
    if !u.is_square() {
        return Err(Error::NonSquare {
            rows: u.rows,
            cols: u.cols,
        });
    }
    Ok(u.data.clone())
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A Hermitian matrix, checked at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NonSquare {
                rows: matrix.rows,
                cols: matrix.cols,
            });
        }
        let deviation = matrix.sub(&matrix.adjoint())?.max_abs();
        if deviation > HERMITIAN_TOL * matrix.max_abs() {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix })
    }

    /// `(A + A†)/2`, for operators that are Hermitian only up to sampling or
    /// rounding noise.
    pub fn symmetrized(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NonSquare {
                rows: matrix.rows,
                cols: matrix.cols,
            });
        }
        let sym = matrix.add(&matrix.adjoint())?.scale(C64::new(0.5, 0.0));
        Ok(Self { matrix: sym })
    }

    pub fn identity(side: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(side),
        }
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &[C64]) -> Self {
        Self {
            matrix: ComplexMatrix::outer(v, v),
        }
    }

    pub fn side(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale(C64::new(s, 0.0)),
        }
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `⟨v|A|v⟩`.
    pub fn expectation(&self, v: &[C64]) -> Result<f64> {
        Ok(inner(v, &self.matrix.apply(v)?).re)
    }
}

/// A unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = norm(&amplitudes);
        if amplitudes.is_empty() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        for z in &mut amplitudes {
            *z /= n;
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eig(a: &HermitianOperator) -> Result<Eigen> {
    let side = a.side();
    let m = a.matrix.to_nalgebra();
    let eig = nalgebra::SymmetricEigen::try_new(m, f64::EPSILON, 0).ok_or(Error::EigenConvergence {
        residual: f64::INFINITY,
    })?;
    let mut order: Vec<usize> = (0..side).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(side, side, |r, c| eig.eigenvectors[(r, order[c])]);

    let av = a.matrix.matmul(&vectors)?;
    let mut residual: f64 = 0.0;
    for r in 0..side {
        for c in 0..side {
            residual = residual.max((av[(r, c)] - vectors[(r, c)] * values[c]).norm());
        }
    }
    let scale = a.matrix.max_abs();
    if residual > 1e-9 * side as f64 * scale {
        return Err(Error::EigenConvergence { residual });
    }
    Ok(Eigen { values, vectors })
}

fn check_psd(eig: &Eigen, rtol: f64) -> Result<f64> {
    let max = eig.values.last().copied().unwrap_or(0.0);
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -rtol * max.abs().max(min.abs()) {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(max)
}

fn support_columns(eig: &Eigen, rtol: f64) -> Vec<usize> {
    let max = eig.values.last().copied().unwrap_or(0.0);
    (0..eig.values.len())
        .filter(|&i| max > 0.0 && eig.values[i] > rtol * max)
        .collect()
}

fn projector_onto(vectors: &ComplexMatrix, cols: &[usize]) -> ComplexMatrix {
    let side = vectors.rows;
    ComplexMatrix::from_fn(side, side, |r, c| {
        cols.iter().map(|&k| vectors[(r, k)] * vectors[(c, k)].conj()).sum()
    })
}

/// Projector onto the eigenspaces of `a` with eigenvalue above
/// `rtol · λ_max`.
pub fn support_projector(a: &HermitianOperator, rtol: f64) -> Result<HermitianOperator> {
    let eig = hermitian_eig(a)?;
    check_psd(&eig, rtol)?;
    let cols = support_columns(&eig, rtol);
    Ok(HermitianOperator {
        matrix: projector_onto(&eig.vectors, &cols),
    })
}

/// `Dmax(P ‖ Q) = min { t : e^t Q ⪰ P }`.
///
/// Returns `+∞` when the support of `P` leaves the support of `Q`, and `-∞`
/// for `P = 0`.
pub fn dmax_numeric(p: &HermitianOperator, q: &HermitianOperator, rtol: f64) -> Result<f64> {
    Ok(dmax_witness(p, q, rtol)?.0)
}

/// [`dmax_numeric`] together with the generalized eigenvector `y` attaining
/// it: `P y = e^{Dmax} Q y` with `y† Q y = 1`. `y` is `None` when the value
/// is infinite.
pub fn dmax_witness(p: &HermitianOperator, q: &HermitianOperator, rtol: f64) -> Result<(f64, Option<Vec<C64>>)> {
    if p.side() != q.side() {
        return Err(Error::ShapeMismatch(format!("sides {} and {}", p.side(), q.side())));
    }
    let side = p.side();
    let p_eig = hermitian_eig(p)?;
    check_psd(&p_eig, rtol)?;
    let q_eig = hermitian_eig(q)?;
    check_psd(&q_eig, rtol)?;

    let p_scale = p.matrix.max_abs();
    if p_scale == 0.0 {
        return Ok((f64::NEG_INFINITY, None));
    }
    let cols = support_columns(&q_eig, rtol);
    if cols.is_empty() {
        return Ok((f64::INFINITY, None));
    }
    let pi = projector_onto(&q_eig.vectors, &cols);
    let outside = ComplexMatrix::identity(side).sub(&pi)?;
    let leak = outside.matmul(&p.matrix)?.matmul(&outside)?.max_abs();
    if leak > rtol * p_scale {
        return Ok((f64::INFINITY, None));
    }

    // W = V₊ diag(λ₊^{-1/2}); the answer is ln λ_max(W† P W).
    let w = ComplexMatrix::from_fn(side, cols.len(), |r, c| {
        let k = cols[c];
        q_eig.vectors[(r, k)] / q_eig.values[k].sqrt()
    });
    let reduced = w.adjoint().matmul(&p.matrix)?.matmul(&w)?;
    let reduced = HermitianOperator::symmetrized(reduced)?;
    let eig = hermitian_eig(&reduced)?;
    let top = eig.values.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Ok((f64::NEG_INFINITY, None));
    }
    let x = eig.vectors.column(cols.len() - 1);
    Ok((top.ln(), Some(w.apply(&x)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn real(rows: usize, cols: usize, v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(rows, cols, v).unwrap()
    }

    fn herm(m: ComplexMatrix) -> HermitianOperator {
        HermitianOperator::new(m).unwrap()
    }

    fn random_psd(side: usize, rank: usize, seed: u64) -> HermitianOperator {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let b = ComplexMatrix::from_fn(side, rank, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        HermitianOperator::symmetrized(b.matmul(&b.adjoint()).unwrap()).unwrap()
    }

    #[test]
    fn choi_examples() {
        assert_eq!(choi_vec(&real(1, 1, &[1.0])).unwrap(), vec![c(1.0)]);
        let i2 = ComplexMatrix::identity(2);
        let v = choi_vec(&i2).unwrap();
        assert_eq!(v, vec![c(1.0), c(0.0), c(0.0), c(1.0)]);
        assert!((norm(&v).powi(2) - 2.0).abs() < 1e-15);
        let x = real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(choi_vec(&x).unwrap(), vec![c(0.0), c(1.0), c(1.0), c(0.0)]);
        assert!(matches!(choi_vec(&real(1, 2, &[1.0, 0.0])), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
        let z = real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let zz = tensor_power(&z, 2).unwrap();
        assert_eq!(zz, ComplexMatrix::diagonal(&[c(1.0), c(-1.0), c(-1.0), c(1.0)]));
        assert_eq!(tensor_power(&z, 0).unwrap(), ComplexMatrix::identity(1));

        let x = real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let bell: Vec<C64> = [1.0, 0.0, 0.0, 1.0].iter().map(|&v| c(v / 2f64.sqrt())).collect();
        let out = kron(&x, &x).unwrap().apply(&bell).unwrap();
        assert!(out.iter().zip(&bell).all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn size_guard() {
        let big = ComplexMatrix::identity(1 << 7);
        assert!(kron(&big, &big).is_ok());
        let bigger = ComplexMatrix::identity(1 << 8);
        assert!(matches!(kron(&bigger, &big), Err(Error::SizeGuard { .. })));
        assert!(matches!(tensor_power(&ComplexMatrix::identity(2), 15), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn hermitian_and_state_checks() {
        let m = ComplexMatrix::new(2, 2, vec![c(1.0), C64::new(0.0, 1.0), C64::new(0.0, 1.0), c(1.0)]).unwrap();
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
        assert!(PureState::new(vec![c(1.0), c(1.0)]).is_err());
        let s = PureState::normalized(vec![c(1.0), c(1.0)]).unwrap();
        assert!((norm(s.amplitudes()) - 1.0).abs() < 1e-15);
        assert!(ComplexMatrix::new(1, 1, vec![C64::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn eig_examples() {
        let e = hermitian_eig(&herm(real(2, 2, &[3.0, 0.0, 0.0, 1.0]))).unwrap();
        assert_eq!(e.values, vec![1.0, 3.0]);
        let e = hermitian_eig(&herm(real(2, 2, &[0.0, 1.0, 1.0, 0.0]))).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        let half = HermitianOperator::identity(4).scale(0.5);
        let e = hermitian_eig(&half).unwrap();
        assert!(e.values.iter().all(|v| (v - 0.5).abs() < 1e-15));
    }

    #[test]
    fn eig_reconstructs() {
        let a = random_psd(24, 24, 3);
        let e = hermitian_eig(&a).unwrap();
        let d = ComplexMatrix::diagonal(&e.values.iter().map(|&v| c(v)).collect::<Vec<_>>());
        let back = e.vectors.matmul(&d).unwrap().matmul(&e.vectors.adjoint()).unwrap();
        assert!(back.sub(a.matrix()).unwrap().max_abs() < 1e-12);
        assert!(e.vectors.unitarity_defect() < 1e-12);
    }

    #[test]
    fn support_examples() {
        let p = support_projector(&herm(real(2, 2, &[1.0, 0.0, 0.0, 0.0])), DEFAULT_RTOL).unwrap();
        assert!(p.matrix().sub(&real(2, 2, &[1.0, 0.0, 0.0, 0.0])).unwrap().max_abs() < 1e-15);
        let p = support_projector(&HermitianOperator::identity(4).scale(0.5), DEFAULT_RTOL).unwrap();
        assert!(p.matrix().sub(&ComplexMatrix::identity(4)).unwrap().max_abs() < 1e-14);
        let i = choi_vec(&ComplexMatrix::identity(2)).unwrap();
        let p = support_projector(&HermitianOperator::projector(&i), DEFAULT_RTOL).unwrap();
        let bell: Vec<C64> = i.iter().map(|z| z / 2f64.sqrt()).collect();
        assert!(p.matrix().sub(&ComplexMatrix::outer(&bell, &bell)).unwrap().max_abs() < 1e-14);
        let sq = p.matrix().matmul(p.matrix()).unwrap();
        assert!(sq.sub(p.matrix()).unwrap().max_abs() < 1e-9);
        assert!(matches!(
            support_projector(&herm(real(2, 2, &[1.0, 0.0, 0.0, -0.5])), DEFAULT_RTOL),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn dmax_examples() {
        let half2 = HermitianOperator::identity(2).scale(0.5);
        assert!(dmax_numeric(&half2, &half2, DEFAULT_RTOL).unwrap().abs() < 1e-14);
        let p = herm(real(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        assert!((dmax_numeric(&p, &half2, DEFAULT_RTOL).unwrap() - 2f64.ln()).abs() < 1e-14);
        let i = choi_vec(&ComplexMatrix::identity(2)).unwrap();
        let p = HermitianOperator::projector(&i);
        let q = HermitianOperator::identity(4).scale(0.5);
        assert!((dmax_numeric(&p, &q, DEFAULT_RTOL).unwrap() - 4f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn witness_solves_generalized_problem() {
        let p = random_psd(6, 2, 1);
        let q = random_psd(6, 6, 2);
        let (d, y) = dmax_witness(&p, &q, DEFAULT_RTOL).unwrap();
        let y = y.unwrap();
        assert!((q.expectation(&y).unwrap() - 1.0).abs() < 1e-9);
        assert!((p.expectation(&y).unwrap() - d.exp()).abs() < 1e-9 * d.exp());
    }

    #[test]
    fn dmax_support_violation_is_infinite() {
        let p = herm(real(2, 2, &[0.0, 0.0, 0.0, 1.0]));
        let q = herm(real(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(dmax_numeric(&p, &q, DEFAULT_RTOL).unwrap(), f64::INFINITY);
        let zero = herm(ComplexMatrix::zeros(2, 2));
        assert_eq!(dmax_numeric(&zero, &q, DEFAULT_RTOL).unwrap(), f64::NEG_INFINITY);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn dmax_of_self_is_zero(side in 1usize..=64, rank_frac in 0.1f64..=1.0, seed in any::<u64>()) {
            let rank = ((side as f64 * rank_frac).ceil() as usize).max(1);
            let p = random_psd(side, rank, seed);
            let d = dmax_numeric(&p, &p, DEFAULT_RTOL).unwrap();
            prop_assert!(d.abs() <= 1e-8, "{d}");
        }

        #[test]
        fn dmax_scales_by_log(side in 1usize..=16, seed in any::<u64>()) {
            let p = random_psd(side, side, seed);
            let q = random_psd(side, side, seed ^ 0x5555);
            let base = dmax_numeric(&p, &q, DEFAULT_RTOL).unwrap();
            for k in [0.5, 2.0] {
                let scaled = dmax_numeric(&p.scale(k), &q, DEFAULT_RTOL).unwrap();
                prop_assert!((scaled - base - f64::ln(k)).abs() <= 1e-8);
            }
        }

        #[test]
        fn dmax_monotone_in_q(side in 1usize..=16, eps in 1e-3f64..1.0, seed in any::<u64>()) {
            let p = random_psd(side, side, seed);
            let q = random_psd(side, side, seed.wrapping_add(1));
            let bigger = HermitianOperator::new(q.matrix().add(&ComplexMatrix::identity(side).scale(c(eps))).unwrap()).unwrap();
            let d = dmax_numeric(&p, &q, DEFAULT_RTOL).unwrap();
            let d2 = dmax_numeric(&p, &bigger, DEFAULT_RTOL).unwrap();
            prop_assert!(d2 <= d + 1e-8);
        }
    }
}
