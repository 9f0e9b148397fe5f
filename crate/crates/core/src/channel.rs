//! Quantum channels as Kraus sets, with Choi conversion, CPTP validation,
//! composition, fidelity metrics, a standard-noise library, and random CPTP
//! sampling.
//!
//! Channel equality lives at the Choi level only: Kraus representations are
//! gauge-dependent and are never pruned or canonicalized here. The Choi
//! convention is fixed throughout the crate as unnormalized with the output
//! factor first, `J(Λ) = Σ_{ij} Λ(|i><j|) ⊗ |i><j|`, so `tr J = d_in`.

use crate::error::{Error, Result};
use crate::matrix::{
    haar_random_unitary, hermitian_eigen, hermitian_eigenvalues, projector, sigma_x, sigma_y,
    sigma_z, C64, ComplexMatrix, Tolerance,
};

/// A quantum channel represented by its Kraus operators, all `d_out x d_in`.
///
/// Construction only enforces shape consistency; trace preservation is a
/// separate check (`validate_cptp`) so that deliberately broken operator sets
/// can still be inspected.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
    label: String,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParam("a channel needs at least one Kraus operator".into()))?;
        let (d_out, d_in) = (first.nrows(), first.ncols());
        for (idx, k) in kraus.iter().enumerate() {
            if k.nrows() != d_out || k.ncols() != d_in {
                return Err(Error::ShapeMismatch(format!(
                    "Kraus operator {idx} is {}x{}, expected {}x{}",
                    k.nrows(),
                    k.ncols(),
                    d_out,
                    d_in
                )));
            }
        }
        Ok(Self {
            kraus,
            d_in,
            d_out,
            label: label.into(),
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(d)], "identity").expect("identity channel")
    }

    /// Channel conjugating by a single unitary (or isometry).
    pub fn from_unitary(u: ComplexMatrix, label: impl Into<String>) -> Self {
        Self::new(vec![u], label).expect("single-operator channel")
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Trace-preservation check: deviation is `|| Σ F†F - 1 ||_F`.
    pub fn validate_cptp(&self, tol: Tolerance) -> CptpReport {
        let mut acc = ComplexMatrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            acc = &acc + &(&k.adjoint() * k);
        }
        let deviation = acc.frobenius_distance(&ComplexMatrix::identity(self.d_in));
        CptpReport {
            deviation,
            pass: deviation <= tol.abs_eps,
        }
    }

    /// Linear action Σ F m F† on an arbitrary matrix (no state validation).
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.nrows() != self.d_in || m.ncols() != self.d_in {
            return Err(Error::ShapeMismatch(format!(
                "channel expects a {0}x{0} input, got {1}x{2}",
                self.d_in,
                m.nrows(),
                m.ncols()
            )));
        }
        let mut acc = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            acc = &acc + &(&(k * m) * &k.adjoint());
        }
        Ok(acc)
    }

    /// Apply to a density state; preserves trace and positivity.
    pub fn apply(&self, rho: &DensityState) -> Result<DensityState> {
        let out = self.apply_matrix(rho.matrix())?;
        Ok(DensityState { matrix: out })
    }

    /// Product channel with Kraus set `{A_i ⊗ B_j}`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a.tensor(b));
            }
        }
        Self {
            kraus,
            d_in: self.d_in * other.d_in,
            d_out: self.d_out * other.d_out,
            label: format!("{} ⊗ {}", self.label, other.label),
        }
    }

    /// Sequential composition `after ∘ before` with Kraus set `{A_i B_j}`.
    pub fn compose(after: &Self, before: &Self) -> Result<Self> {
        if after.d_in != before.d_out {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose: inner dimensions {} and {} differ",
                after.d_in, before.d_out
            )));
        }
        let mut kraus = Vec::with_capacity(after.kraus.len() * before.kraus.len());
        for a in &after.kraus {
            for b in &before.kraus {
                kraus.push(a * b);
            }
        }
        Ok(Self {
            kraus,
            d_in: before.d_in,
            d_out: after.d_out,
            label: format!("{} ∘ {}", after.label, before.label),
        })
    }

    /// Choi matrix under the fixed convention: `J = Σ_m vec(F_m) vec(F_m)†`
    /// with row-major vec, i.e. output factor first.
    pub fn choi(&self) -> ChoiMatrix {
        let side = self.d_out * self.d_in;
        let mut acc = ComplexMatrix::zeros(side, side);
        for k in &self.kraus {
            let w: Vec<C64> = (0..side)
                .map(|idx| k.at(idx / self.d_in, idx % self.d_in))
                .collect();
            acc = &acc
                + &ComplexMatrix::from_fn(side, side, |i, j| w[i] * w[j].conj());
        }
        let matrix = acc
            .with_factors(&[self.d_out, self.d_in], &[self.d_out, self.d_in])
            .expect("choi factor structure");
        ChoiMatrix {
            matrix,
            d_in: self.d_in,
            d_out: self.d_out,
        }
    }

    /// Overlap of the channel's normalized Choi state with the maximally
    /// entangled state: `Σ_m |tr F_m|² / d²`. Equals 1 iff the channel is the
    /// identity.
    pub fn entanglement_fidelity(&self) -> Result<f64> {
        if self.d_in != self.d_out {
            return Err(Error::ShapeMismatch(
                "entanglement fidelity needs d_in = d_out".into(),
            ));
        }
        let d2 = (self.d_in * self.d_in) as f64;
        Ok(self
            .kraus
            .iter()
            .map(|k| k.trace().norm_sqr())
            .sum::<f64>()
            / d2)
    }
}

/// Result of a trace-preservation check.
#[derive(Debug, Clone, Copy)]
pub struct CptpReport {
    pub deviation: f64,
    pub pass: bool,
}

/// Unnormalized Choi matrix of a channel on (output ⊗ input) factors.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    matrix: ComplexMatrix,
    d_in: usize,
    d_out: usize,
}

impl ChoiMatrix {
    pub fn from_matrix(matrix: ComplexMatrix, d_out: usize, d_in: usize) -> Result<Self> {
        if matrix.nrows() != d_out * d_in || !matrix.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "Choi matrix side {} does not match d_out*d_in = {}",
                matrix.nrows(),
                d_out * d_in
            )));
        }
        Ok(Self {
            matrix,
            d_in,
            d_out,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// Hermiticity / positivity / trace report (eigendecomposition on demand).
    pub fn validate(&self, tol: Tolerance) -> Result<ChoiReport> {
        let herm_deviation = self.matrix.frobenius_distance(&self.matrix.adjoint());
        let symmetrized = (&self.matrix + &self.matrix.adjoint()).scaled_re(0.5);
        let eigs = hermitian_eigenvalues(&symmetrized)?;
        let min_eigenvalue = eigs[0];
        let trace_deviation = (self.matrix.trace() - C64::new(self.d_in as f64, 0.0)).norm();
        Ok(ChoiReport {
            pass: herm_deviation <= tol.abs_eps
                && min_eigenvalue >= -tol.abs_eps
                && trace_deviation <= tol.abs_eps,
            herm_deviation,
            min_eigenvalue,
            trace_deviation,
        })
    }

    pub fn frobenius_distance(&self, other: &ChoiMatrix) -> f64 {
        self.matrix.frobenius_distance(&other.matrix)
    }

    /// Distance to the identity channel's Choi matrix (d_in = d_out required).
    pub fn distance_to_identity(&self) -> Result<f64> {
        if self.d_in != self.d_out {
            return Err(Error::ShapeMismatch(
                "identity comparison needs d_in = d_out".into(),
            ));
        }
        Ok(self.frobenius_distance(&identity_choi(self.d_in)))
    }

    /// Entanglement fidelity read off the Choi matrix, `<Ω| J |Ω> / d²`.
    pub fn entanglement_fidelity(&self) -> Result<f64> {
        if self.d_in != self.d_out {
            return Err(Error::ShapeMismatch(
                "entanglement fidelity needs d_in = d_out".into(),
            ));
        }
        let d = self.d_in;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.matrix.at(i * d + i, j * d + j);
            }
        }
        Ok(acc.re / (d * d) as f64)
    }
}

/// Detailed Choi validation result.
#[derive(Debug, Clone, Copy)]
pub struct ChoiReport {
    pub pass: bool,
    pub herm_deviation: f64,
    pub min_eigenvalue: f64,
    pub trace_deviation: f64,
}

/// Choi matrix of the identity channel on dimension d (rank one, trace d).
pub fn identity_choi(d: usize) -> ChoiMatrix {
    KrausChannel::identity(d).choi()
}

/// Recover a Kraus representation from a Choi matrix by eigendecomposition.
/// Eigenvalues below `-tol.abs_eps` are an error; small negatives are dropped.
pub fn kraus_from_choi(choi: &ChoiMatrix, tol: Tolerance) -> Result<KrausChannel> {
    let symmetrized = (choi.matrix() + &choi.matrix().adjoint()).scaled_re(0.5);
    let (values, vectors) = hermitian_eigen(&symmetrized)?;
    if values[0] < -tol.abs_eps {
        return Err(Error::InvalidState(format!(
            "Choi matrix is not positive semidefinite: min eigenvalue {:.3e}",
            values[0]
        )));
    }
    let (d_out, d_in) = (choi.d_out(), choi.d_in());
    let mut kraus = Vec::new();
    for (idx, &lambda) in values.iter().enumerate() {
        if lambda <= tol.abs_eps {
            continue;
        }
        let scale = C64::new(lambda.sqrt(), 0.0);
        kraus.push(ComplexMatrix::from_fn(d_out, d_in, |a, i| {
            vectors.at(a * d_in + i, idx) * scale
        }));
    }
    if kraus.is_empty() {
        return Err(Error::InvalidState("Choi matrix is numerically zero".into()));
    }
    KrausChannel::new(kraus, "from-choi")
}

/// A density operator together with its tensor-factor structure.
#[derive(Debug, Clone)]
pub struct DensityState {
    matrix: ComplexMatrix,
}

impl DensityState {
    /// Validates Hermiticity, positivity, and unit trace within tolerance.
    pub fn new(matrix: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState("density matrix must be square".into()));
        }
        if !matrix.is_hermitian(tol.abs_eps) {
            return Err(Error::InvalidState("density matrix must be Hermitian".into()));
        }
        let trace_dev = (matrix.trace() - C64::new(1.0, 0.0)).norm();
        if trace_dev > tol.abs_eps {
            return Err(Error::InvalidState(format!(
                "density matrix trace deviates from 1 by {trace_dev:.3e}"
            )));
        }
        let eigs = hermitian_eigenvalues(&matrix)?;
        if eigs[0] < -tol.abs_eps {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {:.3e}",
                eigs[0]
            )));
        }
        Ok(Self { matrix })
    }

    /// `|ket><ket|` for a normalized column vector.
    pub fn pure(ket: &ComplexMatrix) -> Result<Self> {
        if ket.ncols() != 1 {
            return Err(Error::InvalidState("pure state needs a column vector".into()));
        }
        let norm = ket.frobenius_norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "state vector norm {norm} is not 1"
            )));
        }
        Ok(Self {
            matrix: projector(ket),
        })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scaled_re(1.0 / d as f64),
        }
    }

    /// Two-qudit maximally entangled state (1/√d) Σ_k |kk>.
    pub fn maximally_entangled(d: usize) -> Self {
        let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        let mut ket = ComplexMatrix::zeros(d * d, 1);
        for k in 0..d {
            ket.set(k * d + k, 0, amp);
        }
        let matrix = projector(&ket)
            .with_factors(&[d, d], &[d, d])
            .expect("two-factor state");
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn with_factors(mut self, dims: &[usize]) -> Result<Self> {
        self.matrix = self.matrix.with_factors(dims, dims)?;
        Ok(self)
    }
}

/// Sum of |negative eigenvalues| of the partial transpose over the second of
/// exactly two tensor factors.
pub fn negativity(rho: &DensityState) -> Result<f64> {
    let dims = rho.matrix().row_dims();
    if dims.len() != 2 {
        return Err(Error::ShapeMismatch(format!(
            "negativity needs a two-factor state, got factors {dims:?}"
        )));
    }
    let (da, db) = (dims[0], dims[1]);
    let m = rho.matrix();
    let pt = ComplexMatrix::from_fn(da * db, da * db, |row, col| {
        let (a, b) = (row / db, row % db);
        let (ap, bp) = (col / db, col % db);
        // transpose the second factor
        m.at(a * db + bp, ap * db + b)
    });
    let eigs = hermitian_eigenvalues(&pt)?;
    Ok(eigs.iter().filter(|&&v| v < 0.0).map(|v| -v).sum())
}

/// Random CPTP channel via Stinespring dilation: the first `d` columns of a
/// Haar unitary on `d * rank`, sliced into `rank` blocks. Deterministic per
/// seed; `rank = 1` collapses to a Haar-random unitary channel.
pub fn random_cptp(d: usize, rank: usize, seed: u64) -> Result<KrausChannel> {
    if d < 1 || rank < 1 {
        return Err(Error::InvalidParam(format!(
            "random_cptp needs d >= 1 and rank >= 1, got d={d} rank={rank}"
        )));
    }
    let big = haar_random_unitary(d * rank, seed);
    let kraus = (0..rank)
        .map(|k| ComplexMatrix::from_fn(d, d, |a, i| big.at(a * rank + k, i)))
        .collect();
    KrausChannel::new(kraus, format!("random(d={d},rank={rank},seed={seed})"))
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidParam(format!(
            "{name} must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Depolarizing qubit channel, `ρ -> (1-p)ρ + p·1/2`. Zero-weight Kraus
/// operators are dropped, so `p = 0` is exactly the identity channel.
pub fn depolarizing(p: f64) -> Result<KrausChannel> {
    check_probability("depolarizing strength", p)?;
    let mut kraus = Vec::new();
    let w0 = (1.0 - 0.75 * p).sqrt();
    if w0 > 0.0 {
        kraus.push(ComplexMatrix::identity(2).scaled_re(w0));
    }
    let w = (p / 4.0).sqrt();
    if w > 0.0 {
        kraus.push(sigma_x().scaled_re(w));
        kraus.push(sigma_y().scaled_re(w));
        kraus.push(sigma_z().scaled_re(w));
    }
    KrausChannel::new(kraus, format!("depolarizing(p={p})"))
}

/// Amplitude damping channel with decay probability gamma.
pub fn amplitude_damping(gamma: f64) -> Result<KrausChannel> {
    check_probability("damping rate", gamma)?;
    let z = C64::new(0.0, 0.0);
    let k0 = ComplexMatrix::from_rows(&[
        vec![C64::new(1.0, 0.0), z],
        vec![z, C64::new((1.0 - gamma).sqrt(), 0.0)],
    ]);
    let k1 = ComplexMatrix::from_rows(&[
        vec![z, C64::new(gamma.sqrt(), 0.0)],
        vec![z, z],
    ]);
    KrausChannel::new(vec![k0, k1], format!("amplitude_damping(gamma={gamma})"))
}

/// Phase damping channel with dephasing probability lambda.
pub fn phase_damping(lambda: f64) -> Result<KrausChannel> {
    check_probability("dephasing rate", lambda)?;
    let z = C64::new(0.0, 0.0);
    let k0 = ComplexMatrix::from_rows(&[
        vec![C64::new(1.0, 0.0), z],
        vec![z, C64::new((1.0 - lambda).sqrt(), 0.0)],
    ]);
    let k1 = ComplexMatrix::from_rows(&[
        vec![z, z],
        vec![z, C64::new(lambda.sqrt(), 0.0)],
    ]);
    KrausChannel::new(vec![k0, k1], format!("phase_damping(lambda={lambda})"))
}

/// Bit flip channel: applies X with probability p.
pub fn bit_flip(p: f64) -> Result<KrausChannel> {
    check_probability("flip probability", p)?;
    let k0 = ComplexMatrix::identity(2).scaled_re((1.0 - p).sqrt());
    let k1 = sigma_x().scaled_re(p.sqrt());
    KrausChannel::new(vec![k0, k1], format!("bit_flip(p={p})"))
}

/// Textbook qubit channels by name: `identity`, `depolarizing`,
/// `amplitude_damping`, `phase_damping`, `bit_flip`.
pub fn named_channel(name: &str, params: &[f64]) -> Result<KrausChannel> {
    let one_param = |what: &str| -> Result<f64> {
        params.first().copied().ok_or_else(|| {
            Error::InvalidParam(format!("channel '{name}' needs a {what} parameter"))
        })
    };
    match name {
        "identity" => Ok(KrausChannel::identity(2)),
        "depolarizing" => depolarizing(one_param("strength")?),
        "amplitude_damping" => amplitude_damping(one_param("rate")?),
        "phase_damping" => phase_damping(one_param("rate")?),
        "bit_flip" => bit_flip(one_param("probability")?),
        other => Err(Error::InvalidParam(format!("unknown channel '{other}'"))),
    }
}
