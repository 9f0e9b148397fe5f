//! Generalized Pauli (clock/shift) operator frame and the twirl over it.
//!
//! For dimension `d` the frame consists of the d² products `Z^m X^n` of the
//! clock operator `Z = Σ_k ω^k |k><k|` (ω = e^{2πi/d}) and the shift operator
//! `X = Σ_k |(k+1) mod d><k|`. Conjugating any matrix by every frame element
//! and summing projects it onto the identity times its trace — the algebraic
//! engine behind channel transparency.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::matrix::{sigma_x, sigma_y, sigma_z, C64, ComplexMatrix};

/// The d² frame operators for one dimension, with the clock and shift
/// generators and the primitive root of unity.
///
/// The decomposition basis is ordered (1, σ_x, σ_y, σ_z) for qubits — σ_y is
/// stored directly rather than as a phased Z·X product, so coefficients feed
/// the correction constructions without phase-convention leaks — and
/// lexicographically by (m, n) for d >= 3.
#[derive(Debug, Clone)]
pub struct WeylFrame {
    d: usize,
    omega: C64,
    z: ComplexMatrix,
    x: ComplexMatrix,
    basis: Vec<ComplexMatrix>,
}

impl WeylFrame {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParam(format!(
                "frame dimension must be >= 2, got {d}"
            )));
        }
        let omega = C64::from_polar(1.0, TAU / d as f64);
        let z = ComplexMatrix::from_fn(d, d, |i, j| {
            if i == j {
                omega.powu(i as u32)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let x = ComplexMatrix::from_fn(d, d, |i, j| {
            if i == (j + 1) % d {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let basis = if d == 2 {
            vec![ComplexMatrix::identity(2), sigma_x(), sigma_y(), sigma_z()]
        } else {
            let mut ops = Vec::with_capacity(d * d);
            for m in 0..d {
                for n in 0..d {
                    ops.push(clock_shift_product(&z, &x, m, n));
                }
            }
            ops
        };
        Ok(Self {
            d,
            omega,
            z,
            x,
            basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn omega(&self) -> C64 {
        self.omega
    }

    pub fn clock(&self) -> &ComplexMatrix {
        &self.z
    }

    pub fn shift(&self) -> &ComplexMatrix {
        &self.x
    }

    /// The literal product `Z^m X^n`, for 0 <= m, n < d.
    pub fn element(&self, m: usize, n: usize) -> Result<ComplexMatrix> {
        if m >= self.d || n >= self.d {
            return Err(Error::FactorOutOfRange {
                index: m.max(n),
                nfactors: self.d,
            });
        }
        Ok(clock_shift_product(&self.z, &self.x, m, n))
    }

    /// The orthogonal decomposition basis (see type docs for ordering).
    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Coefficients c_i = tr(G_i† f) / d with respect to the frame basis.
    pub fn decompose(&self, f: &ComplexMatrix) -> Result<PauliCoefficients> {
        self.check_dim(f)?;
        let coeffs = self
            .basis
            .iter()
            .map(|g| (&g.adjoint() * f).trace() / C64::new(self.d as f64, 0.0))
            .collect();
        Ok(PauliCoefficients {
            d: self.d,
            coeffs,
        })
    }

    /// Rebuild Σ_i c_i G_i from frame coefficients.
    pub fn reconstruct(&self, coeffs: &PauliCoefficients) -> Result<ComplexMatrix> {
        if coeffs.d != self.d || coeffs.coeffs.len() != self.basis.len() {
            return Err(Error::ShapeMismatch(format!(
                "coefficients for dimension {} do not fit frame of dimension {}",
                coeffs.d, self.d
            )));
        }
        let mut acc = ComplexMatrix::zeros(self.d, self.d);
        for (c, g) in coeffs.coeffs.iter().zip(self.basis.iter()) {
            acc = &acc + &g.scaled(*c);
        }
        Ok(acc)
    }

    /// Σ_G G f G† over the full frame; equals d·tr(f)·1 exactly.
    pub fn twirl(&self, f: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(f)?;
        let mut acc = ComplexMatrix::zeros(self.d, self.d);
        for g in &self.basis {
            acc = &acc + &(&(g * f) * &g.adjoint());
        }
        Ok(acc)
    }

    fn check_dim(&self, f: &ComplexMatrix) -> Result<()> {
        if f.nrows() != self.d || f.ncols() != self.d {
            return Err(Error::ShapeMismatch(format!(
                "expected a {0}x{0} matrix, got {1}x{2}",
                self.d,
                f.nrows(),
                f.ncols()
            )));
        }
        Ok(())
    }
}

fn clock_shift_product(z: &ComplexMatrix, x: &ComplexMatrix, m: usize, n: usize) -> ComplexMatrix {
    let d = z.nrows();
    let mut acc = ComplexMatrix::identity(d);
    for _ in 0..m {
        acc = &acc * z;
    }
    for _ in 0..n {
        acc = &acc * x;
    }
    acc
}

/// Complex coefficients of a matrix in one frame's decomposition basis.
#[derive(Debug, Clone)]
pub struct PauliCoefficients {
    d: usize,
    coeffs: Vec<C64>,
}

impl PauliCoefficients {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{basis_ket, projector, random_gaussian_matrix};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn qubit_element_is_pauli_z() {
        let frame = WeylFrame::new(2).unwrap();
        assert!(frame.element(1, 0).unwrap().approx_eq(&sigma_z(), 1e-15));
    }

    #[test]
    fn qubit_clock_shift_product_is_phased_sigma_y() {
        let frame = WeylFrame::new(2).unwrap();
        let zx = frame.element(1, 1).unwrap();
        let expected = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(-1.0, 0.0), c(0.0, 0.0)],
        ]);
        assert!(zx.approx_eq(&expected, 1e-15));
        assert!(zx.approx_eq(&sigma_y().scaled(c(0.0, 1.0)), 1e-15));
    }

    #[test]
    fn qutrit_shift_is_cyclic_permutation() {
        let frame = WeylFrame::new(3).unwrap();
        let x = frame.element(0, 1).unwrap();
        for k in 0..3 {
            let moved = &x * &basis_ket(3, k);
            assert!(moved.approx_eq(&basis_ket(3, (k + 1) % 3), 1e-15));
        }
    }

    #[test]
    fn qutrit_clock_shift_kronecker_entry() {
        // hand expansion: entry (4, 3) of Z ⊗ X decomposes into row (1, 1),
        // column (1, 0): Z[1,1] · X[1,0] = ω
        let frame = WeylFrame::new(3).unwrap();
        let kron = frame.clock().tensor(frame.shift());
        assert!((kron.at(4, 3) - frame.omega()).norm() <= 1e-15);
    }

    #[test]
    fn element_rejects_out_of_range_indices() {
        let frame = WeylFrame::new(3).unwrap();
        assert!(frame.element(3, 0).is_err());
        assert!(frame.element(0, 7).is_err());
    }

    #[test]
    fn clock_shift_commutation_and_periodicity() {
        for d in 2..=5 {
            let frame = WeylFrame::new(d).unwrap();
            let zx = &(frame.clock() * frame.shift());
            let xz = &(frame.shift() * frame.clock());
            assert!(
                zx.approx_eq(&xz.scaled(frame.omega()), 1e-12),
                "ZX = omega XZ failed at d={d}"
            );
            let id = ComplexMatrix::identity(d);
            assert!(frame.element(0, 0).unwrap().approx_eq(&id, 1e-12));
            let zd = clock_shift_product(frame.clock(), frame.shift(), d - 1, 0);
            assert!((frame.clock() * &zd).approx_eq(&id, 1e-12), "Z^d != 1 at d={d}");
            let xd = clock_shift_product(frame.clock(), frame.shift(), 0, d - 1);
            assert!((frame.shift() * &xd).approx_eq(&id, 1e-12), "X^d != 1 at d={d}");
        }
    }

    #[test]
    fn frame_orthogonality() {
        for d in 2..=4 {
            let frame = WeylFrame::new(d).unwrap();
            let basis = frame.basis();
            for (a, ga) in basis.iter().enumerate() {
                for (b, gb) in basis.iter().enumerate() {
                    let overlap = (&ga.adjoint() * gb).trace();
                    let expected = if a == b { d as f64 } else { 0.0 };
                    assert!(
                        (overlap - c(expected, 0.0)).norm() <= 1e-12,
                        "d={d} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn decompose_sigma_x() {
        let frame = WeylFrame::new(2).unwrap();
        let coeffs = frame.decompose(&sigma_x()).unwrap();
        let expected = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        for (got, want) in coeffs.coeffs().iter().zip(expected.iter()) {
            assert!((got - want).norm() <= 1e-12);
        }
    }

    #[test]
    fn decompose_ground_state_projector() {
        let frame = WeylFrame::new(2).unwrap();
        let p0 = projector(&basis_ket(2, 0));
        let coeffs = frame.decompose(&p0).unwrap();
        let expected = [c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)];
        for (got, want) in coeffs.coeffs().iter().zip(expected.iter()) {
            assert!((got - want).norm() <= 1e-12);
        }
    }

    #[test]
    fn decompose_reconstruct_roundtrip_random() {
        for d in [2usize, 3] {
            let frame = WeylFrame::new(d).unwrap();
            for seed in 0..5 {
                let f = random_gaussian_matrix(d, d, 300 + seed);
                let coeffs = frame.decompose(&f).unwrap();
                let back = frame.reconstruct(&coeffs).unwrap();
                assert!(back.approx_eq(&f, 1e-9), "roundtrip failed d={d} seed={seed}");
            }
        }
    }

    #[test]
    fn twirl_of_identity_and_traceless_input() {
        let frame = WeylFrame::new(2).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!(frame.twirl(&id).unwrap().approx_eq(&id.scaled_re(4.0), 1e-12));
        let twirled_x = frame.twirl(&sigma_x()).unwrap();
        assert!(twirled_x.frobenius_norm() <= 1e-12);
    }

    #[test]
    fn twirl_of_ground_state_projector() {
        // sum over the four Pauli conjugations of |0><0| is twice the identity
        let frame = WeylFrame::new(2).unwrap();
        let p0 = projector(&basis_ket(2, 0));
        let twirled = frame.twirl(&p0).unwrap();
        assert!(twirled.approx_eq(&ComplexMatrix::identity(2).scaled_re(2.0), 1e-12));
    }

    #[test]
    fn twirl_projects_onto_trace_times_identity() {
        for d in 2..=5 {
            let frame = WeylFrame::new(d).unwrap();
            for seed in 0..8 {
                let f = random_gaussian_matrix(d, d, 1000 * d as u64 + seed);
                let twirled = frame.twirl(&f).unwrap();
                let expected = ComplexMatrix::identity(d).scaled(f.trace() * c(d as f64, 0.0));
                assert!(
                    twirled.approx_eq(&expected, 1e-9),
                    "twirl identity failed at d={d} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let frame = WeylFrame::new(2).unwrap();
        let f = random_gaussian_matrix(3, 3, 0);
        assert!(frame.decompose(&f).is_err());
        assert!(frame.twirl(&f).is_err());
    }
}
