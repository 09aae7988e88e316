//! Complex state vectors and square matrices.
//!
//! States are row vectors: applying a gate `M` to a state `v` produces
//! `v · M`, so a sequence of gates composes left to right in the order the
//! steps are written.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A probability amplitude.
pub type Amplitude = Complex64;

/// Largest entry-wise deviation of `M · M†` from the identity accepted for a gate.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Largest deviation of a simulated state's squared norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A row vector of amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<Amplitude>);

impl StateVector {
    pub fn new(entries: Vec<Amplitude>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Malformed("state vector must have at least one amplitude".into()));
        }
        if entries.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Malformed("state vector has a non-finite amplitude".into()));
        }
        Ok(StateVector(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The basis state with amplitude 1 at `index` (0-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut entries = vec![ZERO; dim];
        entries[index] = ONE;
        StateVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Amplitude> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Entry-wise comparison.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| (a - b).norm() <= tol)
    }

    /// `self · m`.
    pub fn apply(&self, m: &SquareMatrix) -> Result<StateVector> {
        if m.dim() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: m.dim(),
            });
        }
        let mut out = vec![ZERO; m.dim()];
        for (i, a) in self.0.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (o, entry) in out.iter_mut().zip(m.row(i)) {
                *o += a * entry;
            }
        }
        Ok(StateVector(out))
    }
}

impl Index<usize> for StateVector {
    type Output = Amplitude;

    fn index(&self, index: usize) -> &Amplitude {
        &self.0[index]
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if a.im == 0.0 {
                write!(f, "{:.6}", a.re)?;
            } else {
                write!(f, "{:.6}{:+.6}i", a.re, a.im)?;
            }
        }
        write!(f, ")")
    }
}

/// A dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<Amplitude>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        SquareMatrix {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    pub fn diagonal(diag: &[Amplitude]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, *d);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Malformed("matrix has a non-finite entry".into()));
        }
        Ok(SquareMatrix { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Amplitude>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::from_entries(dim, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Identity on `dim` amplitudes except for the 2×2 block `block` acting on
    /// positions `p` and `q` (0-based), in that order.
    pub fn two_level(dim: usize, p: usize, q: usize, block: [[f64; 2]; 2]) -> Self {
        assert!(p < dim && q < dim && p != q, "invalid two-level positions");
        let mut m = Self::identity(dim);
        m.set(p, p, Complex64::new(block[0][0], 0.0));
        m.set(p, q, Complex64::new(block[0][1], 0.0));
        m.set(q, p, Complex64::new(block[1][0], 0.0));
        m.set(q, q, Complex64::new(block[1][1], 0.0));
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Amplitude) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Amplitude] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Amplitude]> {
        self.entries.chunks(self.dim)
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn mul(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> SquareMatrix {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.get(i, j).conj();
            }
        }
        out
    }

    /// Max-abs entry of `M · M† − I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: Complex64 = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b.conj()).sum();
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn approx_eq(&self, other: &SquareMatrix, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Embeds `self` at the top-left of an identity matrix of size `dim`.
    pub fn extend_identity(&self, dim: usize) -> SquareMatrix {
        assert!(dim >= self.dim);
        let mut out = Self::identity(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }
}

/// True iff the max-abs entry of `M · M† − I` is at most `tol`.
pub fn is_unitary(m: &SquareMatrix, tol: f64) -> bool {
    m.is_unitary(tol)
}

/// Row-vector product `state · m`.
pub fn apply(state: &StateVector, m: &SquareMatrix) -> Result<StateVector> {
    state.apply(m)
}

pub fn adjoint(m: &SquareMatrix) -> SquareMatrix {
    m.adjoint()
}

/// Block-diagonal matrix with `blocks` along the diagonal, in order.
pub fn block_diag(blocks: &[&SquareMatrix]) -> Result<SquareMatrix> {
    if blocks.is_empty() {
        return Err(Error::Malformed("block_diag needs at least one block".into()));
    }
    let dim = blocks.iter().map(|b| b.dim()).sum();
    let mut out = SquareMatrix::zeros(dim);
    let mut offset = 0;
    for b in blocks {
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                out.set(offset + i, offset + j, b.get(i, j));
            }
        }
        offset += b.dim();
    }
    Ok(out)
}

/// A bijection on `{0, …, n−1}`. `targets()[k]` is the image of `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(targets: Vec<usize>) -> Result<Self> {
        let n = targets.len();
        let mut seen = vec![false; n];
        for &t in &targets {
            if t >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {} out of range for {n} elements",
                    t + 1
                )));
            }
            if std::mem::replace(&mut seen[t], true) {
                return Err(Error::InvalidPermutation(format!("image {} repeated", t + 1)));
            }
        }
        Ok(Permutation(targets))
    }

    /// Parses a 1-based image list such as `[2, 1, 3]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let targets = images
            .iter()
            .map(|&k| {
                k.checked_sub(1)
                    .ok_or_else(|| Error::InvalidPermutation("images are 1-based".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(targets)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn targets(&self) -> &[usize] {
        &self.0
    }

    pub fn image(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (k, &t) in self.0.iter().enumerate() {
            inv[t] = k;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &t)| k == t)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|t| t + 1).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_one_based().iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The gate that moves the amplitude at position `k` to position `sigma(k)`:
/// entry `(k, sigma(k))` is 1 and every other entry is 0.
pub fn permutation_matrix(sigma: &Permutation) -> SquareMatrix {
    let mut m = SquareMatrix::zeros(sigma.len().max(1));
    for (k, &t) in sigma.targets().iter().enumerate() {
        m.set(k, t, ONE);
    }
    m
}

/// Row-compressed copy of a matrix used on the simulation hot path.
#[derive(Debug, Clone)]
pub(crate) struct SparseRows {
    dim: usize,
    rows: Vec<Vec<(usize, Amplitude)>>,
}

impl SparseRows {
    pub(crate) fn new(m: &SquareMatrix) -> Self {
        let rows = m
            .rows()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, a)| **a != ZERO)
                    .map(|(j, a)| (j, *a))
                    .collect()
            })
            .collect();
        SparseRows { dim: m.dim(), rows }
    }

    pub(crate) fn apply(&self, state: &[Amplitude], out: &mut Vec<Amplitude>) {
        debug_assert_eq!(state.len(), self.dim);
        out.clear();
        out.resize(self.dim, ZERO);
        for (a, row) in state.iter().zip(&self.rows) {
            if *a == ZERO {
                continue;
            }
            for &(j, entry) in row {
                out[j] += a * entry;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_is_unitary() {
        assert!(is_unitary(&SquareMatrix::identity(4), 1e-10));
    }

    #[test]
    fn rank_deficient_is_not_unitary() {
        let m =
            SquareMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]]).unwrap();
        assert!(!is_unitary(&m, 1e-10));
    }

    #[test]
    fn apply_is_row_times_matrix() {
        // Non-symmetric so that row/column confusion shows up.
        let m = SquareMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let r =
            SquareMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]]).unwrap();
        let v = StateVector::from_real(&[1.0, 0.0]).unwrap();
        assert!(v
            .apply(&m)
            .unwrap()
            .approx_eq(&StateVector::from_real(&[0.0, 1.0]).unwrap(), 1e-12));
        let out = v.apply(&r).unwrap();
        assert!(out.approx_eq(
            &StateVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn apply_identity_keeps_state() {
        let v = StateVector::new(vec![c(0.5), Complex64::new(0.0, 0.5), c(-0.5), c(0.5)]).unwrap();
        assert_eq!(v.apply(&SquareMatrix::identity(4)).unwrap(), v);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let v = StateVector::basis(3, 0);
        assert!(matches!(
            v.apply(&SquareMatrix::identity(4)),
            Err(Error::DimensionMismatch { expected: 3, found: 4 })
        ));
    }

    #[test]
    fn adjoint_of_scalar_conjugates() {
        let m = SquareMatrix::from_entries(1, vec![Complex64::new(0.0, 1.0)]).unwrap();
        assert_eq!(m.adjoint().get(0, 0), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn adjoint_of_real_orthogonal_is_transpose() {
        let m = SquareMatrix::from_real_rows(&[&[0.6, 0.8], &[-0.8, 0.6]]).unwrap();
        let t = SquareMatrix::from_real_rows(&[&[0.6, -0.8], &[0.8, 0.6]]).unwrap();
        assert_eq!(m.adjoint(), t);
        assert_eq!(m.adjoint().adjoint(), m);
        assert!(m
            .adjoint()
            .mul(&m)
            .unwrap()
            .approx_eq(&SquareMatrix::identity(2), 1e-12));
    }

    #[test]
    fn block_diag_layout() {
        let i2 = SquareMatrix::identity(2);
        assert_eq!(block_diag(&[&i2, &i2]).unwrap(), SquareMatrix::identity(4));

        let a = SquareMatrix::two_level(
            4,
            1,
            2,
            [[FRAC_1_SQRT_2, -FRAC_1_SQRT_2], [FRAC_1_SQRT_2, FRAC_1_SQRT_2]],
        );
        let b = permutation_matrix(&Permutation::new(vec![3, 2, 1, 0]).unwrap());
        let i8 = SquareMatrix::identity(8);
        let m = block_diag(&[&a, &b, &i8]).unwrap();
        assert_eq!(m.dim(), 16);
        assert!(m.is_unitary(UNITARY_TOLERANCE));
        for i in 0..16 {
            for j in 0..16 {
                let block = |k: usize| {
                    if k < 4 {
                        0
                    } else if k < 8 {
                        1
                    } else {
                        2
                    }
                };
                if block(i) != block(j) {
                    assert_eq!(m.get(i, j), ZERO);
                }
            }
        }
        assert_eq!(m.get(5, 6), c(1.0));
        assert!(block_diag(&[]).is_err());
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert_eq!(permutation_matrix(&Permutation::identity(5)), SquareMatrix::identity(5));
    }

    #[test]
    fn permutation_then_inverse_is_identity() {
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let prod = permutation_matrix(&p).mul(&permutation_matrix(&p.inverse())).unwrap();
        assert_eq!(prod, SquareMatrix::identity(4));
    }

    #[test]
    fn permutation_moves_amplitudes() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let v = StateVector::from_real(&[1.0, 2.0, 3.0]).unwrap();
        let out = v.apply(&permutation_matrix(&p)).unwrap();
        assert_eq!(out, StateVector::from_real(&[2.0, 3.0, 1.0]).unwrap());
    }

    #[test]
    fn sparse_rows_agree_with_dense() {
        let m = SquareMatrix::from_real_rows(&[
            &[0.5, 0.5, 0.5, 0.5],
            &[FRAC_1_SQRT_2, 0.0, 0.0, -FRAC_1_SQRT_2],
            &[0.0, -FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0],
            &[0.5, -0.5, -0.5, 0.5],
        ])
        .unwrap();
        let v = StateVector::from_real(&[0.5, FRAC_1_SQRT_2, 0.0, 0.5]).unwrap();
        let mut out = Vec::new();
        SparseRows::new(&m).apply(v.entries(), &mut out);
        assert!(StateVector::new(out).unwrap().approx_eq(&v.apply(&m).unwrap(), 1e-15));
    }
}
