//! Dense complex matrices with explicit tensor-factor bookkeeping.
//!
//! Every operator in the library is a [`ComplexMatrix`]: a dense matrix of
//! `Complex<f64>` entries plus ordered lists of tensor-factor dimensions for
//! the row and column spaces. Square operators carry identical factor lists
//! on both sides; kets are `n x 1` matrices with an empty column factor list.
//! Factor entries are always >= 2 — a trivial (one-dimensional) side is
//! represented by an empty list.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex<f64>;

pub(crate) type CMat = DMatrix<C64>;

/// Absolute epsilon for Frobenius-norm comparisons. Matrix sides in this
/// library stay at desk scale (<= a few hundred), so a single absolute
/// tolerance is enough; no relative scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_eps: f64,
}

impl Tolerance {
    pub fn new(abs_eps: f64) -> Result<Self> {
        if abs_eps <= 0.0 || !abs_eps.is_finite() {
            return Err(Error::InvalidParam(format!(
                "tolerance must be a positive finite number, got {abs_eps}"
            )));
        }
        Ok(Self { abs_eps })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs_eps: 1e-9 }
    }
}

fn factor_product(dims: &[usize]) -> usize {
    dims.iter().product()
}

fn validate_factors(dims: &[usize], side: usize) -> Result<()> {
    if dims.iter().any(|&d| d < 2) {
        return Err(Error::ShapeMismatch(format!(
            "factor dimensions must be >= 2, got {dims:?}"
        )));
    }
    if factor_product(dims) != side {
        return Err(Error::ShapeMismatch(format!(
            "factor dimensions {dims:?} do not multiply to side length {side}"
        )));
    }
    Ok(())
}

fn default_factors(side: usize) -> Vec<usize> {
    if side <= 1 {
        Vec::new()
    } else {
        vec![side]
    }
}

/// Dense complex matrix with tensor-factor dimension metadata.
#[derive(Debug, Clone)]
pub struct ComplexMatrix {
    pub(crate) mat: CMat,
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
}

impl ComplexMatrix {
    /// Wrap a raw matrix; each nontrivial side becomes a single factor.
    pub fn from_raw(mat: CMat) -> Self {
        let row_dims = default_factors(mat.nrows());
        let col_dims = default_factors(mat.ncols());
        Self {
            mat,
            row_dims,
            col_dims,
        }
    }

    pub fn from_fn(nrows: usize, ncols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self::from_raw(CMat::from_fn(nrows, ncols, f))
    }

    /// Row-major list of rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(nrows, ncols, |i, j| rows[i][j])
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::from_raw(CMat::zeros(nrows, ncols))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_raw(CMat::identity(n, n))
    }

    /// Identity with an explicit tensor-factor structure.
    pub fn identity_with_factors(dims: &[usize]) -> Self {
        let n = factor_product(dims);
        Self::identity(n)
            .with_factors(dims, dims)
            .expect("identity factors consistent")
    }

    /// Reinterpret the tensor-factor structure without touching entries.
    pub fn with_factors(mut self, row_dims: &[usize], col_dims: &[usize]) -> Result<Self> {
        validate_factors(row_dims, self.mat.nrows())?;
        validate_factors(col_dims, self.mat.ncols())?;
        self.row_dims = row_dims.to_vec();
        self.col_dims = col_dims.to_vec();
        Ok(self)
    }

    pub fn nrows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    /// Factor dimensions of a square operator (row and column structure agree).
    pub fn dims(&self) -> &[usize] {
        debug_assert_eq!(self.row_dims, self.col_dims);
        &self.row_dims
    }

    pub fn is_square(&self) -> bool {
        self.mat.nrows() == self.mat.ncols()
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.mat[(i, j)] = value;
    }

    pub fn trace(&self) -> C64 {
        self.mat.diagonal().sum()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
            row_dims: self.col_dims.clone(),
            col_dims: self.row_dims.clone(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            mat: self.mat.transpose(),
            row_dims: self.col_dims.clone(),
            col_dims: self.row_dims.clone(),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            mat: self.mat.map(|z| z.conj()),
            row_dims: self.row_dims.clone(),
            col_dims: self.col_dims.clone(),
        }
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            mat: self.mat.map(|z| z * factor),
            row_dims: self.row_dims.clone(),
            col_dims: self.col_dims.clone(),
        }
    }

    pub fn scaled_re(&self, factor: f64) -> Self {
        self.scaled(C64::new(factor, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.nrows(), self.ncols()),
            (other.nrows(), other.ncols()),
            "frobenius_distance shape mismatch"
        );
        let mut acc = 0.0;
        for (a, b) in self.mat.iter().zip(other.mat.iter()) {
            acc += (a - b).norm_sqr();
        }
        acc.sqrt()
    }

    pub fn approx_eq(&self, other: &Self, abs_eps: f64) -> bool {
        self.frobenius_distance(other) <= abs_eps
    }

    pub fn is_hermitian(&self, abs_eps: f64) -> bool {
        self.is_square() && self.frobenius_distance(&self.adjoint()) <= abs_eps
    }

    pub fn is_unitary(&self, abs_eps: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let gram = &self.adjoint() * self;
        gram.frobenius_distance(&Self::identity(self.ncols())) <= abs_eps
    }

    /// Deviation from unitarity, `|| U†U - 1 ||_F`.
    pub fn unitarity_deviation(&self) -> f64 {
        let gram = &self.adjoint() * self;
        gram.frobenius_distance(&Self::identity(self.ncols()))
    }

    /// Kronecker product; factor lists concatenate on both sides.
    pub fn tensor(&self, other: &Self) -> Self {
        let mat = self.mat.kronecker(&other.mat);
        let mut row_dims = self.row_dims.clone();
        row_dims.extend_from_slice(&other.row_dims);
        let mut col_dims = self.col_dims.clone();
        col_dims.extend_from_slice(&other.col_dims);
        Self {
            mat,
            row_dims,
            col_dims,
        }
    }

    /// Trace out every tensor factor not listed in `keep`. Kept factors stay
    /// in their original order; the total trace is preserved.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if self.row_dims != self.col_dims {
            return Err(Error::ShapeMismatch(
                "partial_trace requires matching row/column factors".into(),
            ));
        }
        let dims = &self.row_dims;
        if dims.len() < 2 {
            return Err(Error::ShapeMismatch(format!(
                "partial_trace needs >= 2 factors, got {}",
                dims.len()
            )));
        }
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        for &k in &keep_sorted {
            if k >= dims.len() {
                return Err(Error::FactorOutOfRange {
                    index: k,
                    nfactors: dims.len(),
                });
            }
        }
        if keep_sorted.is_empty() || keep_sorted.len() == dims.len() {
            return Err(Error::InvalidParam(
                "keep must be a nonempty proper subset of the factors".into(),
            ));
        }

        let strides = strides_of(dims);
        let traced: Vec<usize> = (0..dims.len())
            .filter(|i| !keep_sorted.contains(i))
            .collect();
        let kept_dims: Vec<usize> = keep_sorted.iter().map(|&i| dims[i]).collect();
        let kept_offsets = factor_offsets(&kept_dims, &keep_sorted, &strides);
        let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
        let traced_offsets = factor_offsets(&traced_dims, &traced, &strides);

        let out_side = factor_product(&kept_dims);
        let mut out = CMat::zeros(out_side, out_side);
        for (r, &ro) in kept_offsets.iter().enumerate() {
            for (c, &co) in kept_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &to in &traced_offsets {
                    acc += self.mat[(ro + to, co + to)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(Self {
            mat: out,
            row_dims: kept_dims.clone(),
            col_dims: kept_dims,
        })
    }

    /// Reorder tensor factors of a square operator. `order[p]` names the
    /// current factor that ends up at position `p`.
    pub fn permute_factors(&self, order: &[usize]) -> Result<Self> {
        if self.row_dims != self.col_dims {
            return Err(Error::ShapeMismatch(
                "permute_factors requires matching row/column factors".into(),
            ));
        }
        let dims = &self.row_dims;
        let n = dims.len();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::InvalidParam(format!(
                "permutation length {} does not match factor count {}",
                order.len(),
                n
            )));
        }
        for &p in order {
            if p >= n {
                return Err(Error::FactorOutOfRange {
                    index: p,
                    nfactors: n,
                });
            }
            if seen[p] {
                return Err(Error::InvalidParam(format!("duplicate factor {p} in permutation")));
            }
            seen[p] = true;
        }

        let strides = strides_of(dims);
        let new_dims: Vec<usize> = order.iter().map(|&p| dims[p]).collect();
        let side = factor_product(dims);
        // map[i_new] = i_old
        let mut map = vec![0usize; side];
        let mut multi = vec![0usize; n];
        for (i_new, slot) in map.iter_mut().enumerate() {
            decode_multi_index(i_new, &new_dims, &mut multi);
            *slot = multi
                .iter()
                .zip(order.iter())
                .map(|(&idx, &p)| idx * strides[p])
                .sum();
        }
        let out = CMat::from_fn(side, side, |i, j| self.mat[(map[i], map[j])]);
        Ok(Self {
            mat: out,
            row_dims: new_dims.clone(),
            col_dims: new_dims,
        })
    }
}

fn strides_of(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    strides
}

fn decode_multi_index(mut flat: usize, dims: &[usize], out: &mut [usize]) {
    for i in (0..dims.len()).rev() {
        out[i] = flat % dims[i];
        flat /= dims[i];
    }
}

/// Flat offsets contributed by a factor subset: entry `k` is the full-space
/// offset of the `k`-th multi-index over `sub_dims` placed at `positions`.
fn factor_offsets(sub_dims: &[usize], positions: &[usize], strides: &[usize]) -> Vec<usize> {
    let size = factor_product(sub_dims);
    let mut offsets = vec![0usize; size];
    let mut multi = vec![0usize; sub_dims.len()];
    for (flat, slot) in offsets.iter_mut().enumerate() {
        decode_multi_index(flat, sub_dims, &mut multi);
        *slot = multi
            .iter()
            .zip(positions.iter())
            .map(|(&idx, &pos)| idx * strides[pos])
            .sum();
    }
    offsets
}

/// Place an operator on the listed factors of a larger space, identity on the
/// rest. `targets` must be strictly increasing and match `op`'s factor count.
pub fn embed_on_factors(
    op: &ComplexMatrix,
    full_dims: &[usize],
    targets: &[usize],
) -> Result<ComplexMatrix> {
    if op.row_dims() != op.col_dims() {
        return Err(Error::ShapeMismatch(
            "embed_on_factors requires a square-factored operator".into(),
        ));
    }
    if targets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParam(
            "targets must be strictly increasing".into(),
        ));
    }
    if targets.len() != op.row_dims().len() {
        return Err(Error::ShapeMismatch(format!(
            "operator has {} factors but {} targets were given",
            op.row_dims().len(),
            targets.len()
        )));
    }
    for (&t, &d) in targets.iter().zip(op.row_dims().iter()) {
        if t >= full_dims.len() {
            return Err(Error::FactorOutOfRange {
                index: t,
                nfactors: full_dims.len(),
            });
        }
        if full_dims[t] != d {
            return Err(Error::ShapeMismatch(format!(
                "factor {t} has dimension {} but operator expects {d}",
                full_dims[t]
            )));
        }
    }

    let rest: Vec<usize> = (0..full_dims.len())
        .filter(|i| !targets.contains(i))
        .collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&i| full_dims[i]).collect();
    let big = if rest_dims.is_empty() {
        op.clone()
    } else {
        op.tensor(&ComplexMatrix::identity_with_factors(&rest_dims))
    };
    // Current factor order is targets ++ rest; permute back to natural order.
    let concat: Vec<usize> = targets.iter().chain(rest.iter()).copied().collect();
    let mut order = vec![0usize; concat.len()];
    for (natural, slot) in order.iter_mut().enumerate() {
        *slot = concat
            .iter()
            .position(|&c| c == natural)
            .expect("concat covers all factors");
    }
    big.permute_factors(&order)
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.ncols(),
            rhs.nrows(),
            "matrix product inner dimension mismatch"
        );
        ComplexMatrix {
            mat: &self.mat * &rhs.mat,
            row_dims: self.row_dims.clone(),
            col_dims: rhs.col_dims.clone(),
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.nrows(), self.ncols()),
            (rhs.nrows(), rhs.ncols()),
            "matrix sum shape mismatch"
        );
        ComplexMatrix {
            mat: &self.mat + &rhs.mat,
            row_dims: self.row_dims.clone(),
            col_dims: self.col_dims.clone(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.nrows(), self.ncols()),
            (rhs.nrows(), rhs.ncols()),
            "matrix difference shape mismatch"
        );
        ComplexMatrix {
            mat: &self.mat - &rhs.mat,
            row_dims: self.row_dims.clone(),
            col_dims: self.col_dims.clone(),
        }
    }
}

/// Computational basis ket `|index>` as a d x 1 matrix.
pub fn basis_ket(d: usize, index: usize) -> ComplexMatrix {
    assert!(index < d, "basis index out of range");
    ComplexMatrix::from_fn(d, 1, |i, _| {
        if i == index {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Uniform superposition over the computational basis.
pub fn uniform_ket(d: usize) -> ComplexMatrix {
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    ComplexMatrix::from_fn(d, 1, |_, _| amp)
}

/// Rank-one projector `|ket><ket|`.
pub fn projector(ket: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(ket.ncols(), 1, "projector expects a column vector");
    ket * &ket.adjoint()
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    ])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        vec![C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
    ])
}

pub fn hadamard() -> ComplexMatrix {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    ComplexMatrix::from_rows(&[vec![s, s], vec![s, -s]])
}

/// Matrix of iid standard complex Gaussians, deterministic per seed.
pub fn random_gaussian_matrix(nrows: usize, ncols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    ComplexMatrix::from_raw(CMat::from_fn(nrows, ncols, |_, _| {
        let re: f64 = normal.sample(&mut rng);
        let im: f64 = normal.sample(&mut rng);
        C64::new(re, im)
    }))
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the R
/// diagonal phase-fixed. Deterministic per seed.
pub fn haar_random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    assert!(n >= 1, "unitary side must be >= 1");
    let g = random_gaussian_matrix(n, n, seed);
    let qr = g.mat.qr();
    let r_diag = qr.r().diagonal();
    let q = qr.q();
    let mut u = CMat::zeros(n, n);
    for j in 0..n {
        let d = r_diag[j];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            u[(i, j)] = q[(i, j)] * phase;
        }
    }
    ComplexMatrix::from_raw(u)
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues (ascending) and
/// the corresponding unitary of column eigenvectors.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("eigendecomposition needs a square matrix".into()));
    }
    let eig = m.mat.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, ComplexMatrix::from_raw(vectors)))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|(vals, _)| vals)
}

/// Inverse square root of a Hermitian positive-definite matrix. Eigenvalues
/// below `tol.abs_eps` are an error rather than being clamped: a near-singular
/// input signals a degenerate upstream sample that must be redrawn.
pub fn psd_inverse_sqrt(m: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    if !m.is_hermitian(tol.abs_eps) {
        return Err(Error::InvalidParam(
            "psd_inverse_sqrt expects a Hermitian matrix".into(),
        ));
    }
    let (values, vectors) = hermitian_eigen(m)?;
    let min_eig = values[0];
    if min_eig < tol.abs_eps {
        return Err(Error::Singular { min_eig });
    }
    let n = m.nrows();
    let scaled = CMat::from_fn(n, n, |i, j| {
        vectors.mat[(i, j)] * C64::new(1.0 / values[j].sqrt(), 0.0)
    });
    let root = &scaled * vectors.mat.adjoint();
    // Symmetrize away float asymmetry.
    let root = ComplexMatrix::from_raw((&root + root.adjoint()).scale(0.5));
    root.with_factors(m.row_dims(), m.col_dims())
}
