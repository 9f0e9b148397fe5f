//! The transparency pipeline: ancilla preparation, entangling unitary, noise
//! exposure, inverse, and correction, assembled as a single channel from the
//! system into ancilla ⊗ ancilla ⊗ system.
//!
//! Register order is A ⊗ B ⊗ S throughout. The entangling unitary is the
//! product of a B-controlled clock and an A-controlled shift on the system;
//! with the ancillas prepared in the uniform superposition, each system-frame
//! component of the noise gets flagged by an orthogonal ancilla state, and the
//! correction undoes it branch by branch. Tracing out the ancillas then leaves
//! the identity channel on the system — for arbitrary system noise, and for
//! ancilla noise whose Kraus operators lie in a specific operator span (see
//! [`ancilla_noise_generators`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::{identity_choi, ChoiMatrix, KrausChannel};
use crate::error::{Error, Result};
use crate::matrix::{
    haar_random_unitary, hadamard, projector, psd_inverse_sqrt, sigma_x, sigma_y, sigma_z,
    uniform_ket, C64, ComplexMatrix, Tolerance,
};
use crate::weyl::WeylFrame;

/// How the correction step after the inverse entangler is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrectionVariant {
    /// Unitary projector sum: ancilla branch projectors paired with the
    /// inverse frame operation on the system.
    DirectUnitary,
    /// The entangler conjugated by Hadamards on all three registers
    /// (qubits only). Differs from the direct form by per-block phases.
    HadamardConjugated,
    /// The same projector/correction terms as a Kraus set instead of a
    /// unitary; trace-preserving because the projectors resolve the identity.
    ProjectiveKraus,
}

impl CorrectionVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::DirectUnitary => "direct",
            Self::HadamardConjugated => "hadamard",
            Self::ProjectiveKraus => "projective",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Self::DirectUnitary),
            "hadamard" => Ok(Self::HadamardConjugated),
            "projective" => Ok(Self::ProjectiveKraus),
            other => Err(Error::InvalidParam(format!(
                "unknown correction variant '{other}' (expected direct|hadamard|projective)"
            ))),
        }
    }
}

/// Which ancilla register carries which branch-projector family in the
/// correction. Both orders are constructible; sweeps record which one closes
/// the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AncillaOrder {
    AB,
    BA,
}

impl AncillaOrder {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::AB => "AB",
            Self::BA => "BA",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AB" => Ok(Self::AB),
            "BA" => Ok(Self::BA),
            other => Err(Error::InvalidParam(format!(
                "unknown ancilla order '{other}' (expected AB|BA)"
            ))),
        }
    }
}

/// The correction step: a unitary or a trace-preserving Kraus set.
#[derive(Debug, Clone)]
pub enum CorrectionOp {
    Unitary(ComplexMatrix),
    Channel(KrausChannel),
}

impl CorrectionOp {
    pub fn kraus_operators(&self) -> Vec<ComplexMatrix> {
        match self {
            Self::Unitary(u) => vec![u.clone()],
            Self::Channel(ch) => ch.kraus().to_vec(),
        }
    }
}

fn operator_powers(base: &ComplexMatrix, count: usize) -> Vec<ComplexMatrix> {
    let mut powers = Vec::with_capacity(count);
    powers.push(ComplexMatrix::identity(base.nrows()));
    for k in 1..count {
        powers.push(&powers[k - 1] * base);
    }
    powers
}

fn basis_projectors(d: usize) -> Vec<ComplexMatrix> {
    (0..d)
        .map(|k| projector(&crate::matrix::basis_ket(d, k)))
        .collect()
}

/// The entangling unitary on A ⊗ B ⊗ S: the B-controlled clock on the system
/// followed by the A-controlled shift,
/// `U = (Σ_a |a><a| ⊗ 1 ⊗ X^a) (Σ_b 1 ⊗ |b><b| ⊗ Z^b)`.
///
/// For qubits this is exactly the block form with corrections
/// (1, σ_z, σ_x, -iσ_y) on the four ancilla basis projectors.
pub fn entangling_unitary(d: usize) -> Result<ComplexMatrix> {
    let frame = WeylFrame::new(d)?;
    let projs = basis_projectors(d);
    let z_pow = operator_powers(frame.clock(), d);
    let x_pow = operator_powers(frame.shift(), d);
    let id = ComplexMatrix::identity(d);

    let mut cz = ComplexMatrix::zeros(d * d * d, d * d * d);
    let mut cx = ComplexMatrix::zeros(d * d * d, d * d * d);
    for k in 0..d {
        cz = &cz + &id.tensor(&projs[k]).tensor(&z_pow[k]);
        cx = &cx + &projs[k].tensor(&id).tensor(&x_pow[k]);
    }
    (&cx * &cz).with_factors(&[d, d, d], &[d, d, d])
}

/// Branch terms of the correction: one ancilla-A projector, one ancilla-B
/// projector, and the system operation that closes that branch.
fn correction_terms(
    d: usize,
    order: AncillaOrder,
) -> Result<Vec<(ComplexMatrix, ComplexMatrix, ComplexMatrix)>> {
    let mut terms = Vec::with_capacity(d * d);
    if d == 2 {
        let plus = uniform_ket(2);
        let amp = std::f64::consts::FRAC_1_SQRT_2;
        let mut minus = ComplexMatrix::zeros(2, 1);
        minus.set(0, 0, C64::new(amp, 0.0));
        minus.set(1, 0, C64::new(-amp, 0.0));
        let p_plus = projector(&plus);
        let p_minus = projector(&minus);
        let table: [(&ComplexMatrix, &ComplexMatrix, ComplexMatrix); 4] = [
            (&p_plus, &p_plus, ComplexMatrix::identity(2)),
            (&p_plus, &p_minus, sigma_x()),
            (&p_minus, &p_minus, sigma_y()),
            (&p_minus, &p_plus, sigma_z()),
        ];
        for (first, second, op) in table {
            let (pa, pb) = match order {
                AncillaOrder::AB => (first.clone(), second.clone()),
                AncillaOrder::BA => (second.clone(), first.clone()),
            };
            terms.push((pa, pb, op));
        }
    } else {
        let frame = WeylFrame::new(d)?;
        let z_pow = operator_powers(frame.clock(), d);
        let psi0 = uniform_ket(d);
        for m in 0..d {
            for n in 0..d {
                let ket_first = &z_pow[m] * &psi0;
                let ket_second = &z_pow[(n * (d - 1)) % d] * &psi0;
                let op = frame.element(m, n)?.adjoint();
                let (pa, pb) = match order {
                    AncillaOrder::AB => (projector(&ket_first), projector(&ket_second)),
                    AncillaOrder::BA => (projector(&ket_second), projector(&ket_first)),
                };
                terms.push((pa, pb, op));
            }
        }
    }
    Ok(terms)
}

/// The correction operation applied after the inverse entangler.
pub fn correction_operation(
    d: usize,
    variant: CorrectionVariant,
    order: AncillaOrder,
) -> Result<CorrectionOp> {
    if d < 2 {
        return Err(Error::InvalidParam(format!("dimension must be >= 2, got {d}")));
    }
    match variant {
        CorrectionVariant::DirectUnitary => {
            let mut v = ComplexMatrix::zeros(d * d * d, d * d * d);
            for (pa, pb, op) in correction_terms(d, order)? {
                v = &v + &pa.tensor(&pb).tensor(&op);
            }
            Ok(CorrectionOp::Unitary(
                v.with_factors(&[d, d, d], &[d, d, d])?,
            ))
        }
        CorrectionVariant::HadamardConjugated => {
            if d != 2 {
                return Err(Error::UnsupportedVariant(format!(
                    "hadamard-conjugated correction is defined for qubits only, got d={d}"
                )));
            }
            let u = entangling_unitary(2)?;
            let h3 = hadamard().tensor(&hadamard()).tensor(&hadamard());
            Ok(CorrectionOp::Unitary(
                (&(&h3 * &u) * &h3).with_factors(&[2, 2, 2], &[2, 2, 2])?,
            ))
        }
        CorrectionVariant::ProjectiveKraus => {
            let kraus: Vec<ComplexMatrix> = correction_terms(d, order)?
                .into_iter()
                .map(|(pa, pb, op)| pa.tensor(&pb).tensor(&op))
                .collect();
            Ok(CorrectionOp::Channel(KrausChannel::new(
                kraus,
                format!("projective-correction(d={d})"),
            )?))
        }
    }
}

/// Kinds of ancilla noise the sampler can draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AncillaNoiseKind {
    /// No noise: single identity Kraus operator.
    Identity,
    /// Random probabilistic mixture of the span generators.
    MixedUnitary,
    /// A single random unitary lying in the span.
    Unitary,
    /// Random in-span Kraus combinations, CPTP-completed by right-normalizing
    /// with the inverse square root of Σ E†E.
    General,
    /// Deliberately outside the tolerated span; expected-fail control.
    OutOfClassControl,
}

impl AncillaNoiseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::MixedUnitary => "mixed_unitary",
            Self::Unitary => "unitary",
            Self::General => "general",
            Self::OutOfClassControl => "out_of_class",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Self::Identity),
            "mixed_unitary" => Ok(Self::MixedUnitary),
            "unitary" => Ok(Self::Unitary),
            "general" => Ok(Self::General),
            "out_of_class" => Ok(Self::OutOfClassControl),
            other => Err(Error::InvalidParam(format!(
                "unknown ancilla noise kind '{other}'"
            ))),
        }
    }

    pub fn is_control(&self) -> bool {
        matches!(self, Self::OutOfClassControl)
    }
}

/// Specification of one sampled ancilla-noise channel.
#[derive(Debug, Clone, Copy)]
pub struct AncillaNoiseSpec {
    pub kind: AncillaNoiseKind,
    pub d: usize,
    pub seed: u64,
}

/// Generators of the tolerated ancilla-noise span on A ⊗ B, ordered to match
/// the system frame basis. For qubits these are
/// `{1⊗1, σ_x⊗1, σ_y⊗σ_x, σ_z⊗σ_x}`; for d >= 3 the operators
/// `Z^i X^j ⊗ X^{d-i}` in lexicographic (i, j) order.
///
/// The span is closed under products and adjoints up to phase, so the
/// CPTP-completion used for general in-class sampling stays inside it.
pub fn ancilla_noise_generators(d: usize) -> Result<Vec<ComplexMatrix>> {
    if d == 2 {
        let id = ComplexMatrix::identity(2);
        Ok(vec![
            id.tensor(&id),
            sigma_x().tensor(&id),
            sigma_y().tensor(&sigma_x()),
            sigma_z().tensor(&sigma_x()),
        ])
    } else {
        let frame = WeylFrame::new(d)?;
        let x_pow = operator_powers(frame.shift(), d);
        let mut gens = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let a_part = frame.element(i, j)?;
                let b_part = &x_pow[(d - i) % d];
                gens.push(a_part.tensor(b_part));
            }
        }
        Ok(gens)
    }
}

/// Relative Frobenius residual of `op` outside the span of `generators`
/// (which must be pairwise orthogonal, as the tolerated-span generators are).
pub fn span_projection_residual(op: &ComplexMatrix, generators: &[ComplexMatrix]) -> f64 {
    let norm = op.frobenius_norm();
    if norm == 0.0 {
        return 0.0;
    }
    let mut projection = ComplexMatrix::zeros(op.nrows(), op.ncols());
    for g in generators {
        let overlap = (&g.adjoint() * op).trace();
        let gram = g.frobenius_norm().powi(2);
        projection = &projection + &g.scaled(overlap / C64::new(gram, 0.0));
    }
    (op - &projection).frobenius_norm() / norm
}

fn complex_gaussian_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    let normal = StandardNormal;
    (0..n)
        .map(|_| {
            let re: f64 = normal.sample(rng);
            let im: f64 = normal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

fn span_combination(generators: &[ComplexMatrix], coeffs: &[C64]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(generators[0].nrows(), generators[0].ncols());
    for (g, &c) in generators.iter().zip(coeffs.iter()) {
        acc = &acc + &g.scaled(c);
    }
    acc
}

/// Draw an ancilla-noise channel on A ⊗ B according to the spec. In-class
/// kinds are checked to lie in the tolerated span; the out-of-class control
/// deliberately contains a component far outside it.
pub fn sample_ancilla_noise(spec: &AncillaNoiseSpec) -> Result<KrausChannel> {
    let d = spec.d;
    if d < 2 {
        return Err(Error::InvalidParam(format!("dimension must be >= 2, got {d}")));
    }
    let generators = ancilla_noise_generators(d)?;
    let label = format!("ancilla-{}(d={d},seed={})", spec.kind.as_str(), spec.seed);

    let channel = match spec.kind {
        AncillaNoiseKind::Identity => KrausChannel::identity(d * d),
        AncillaNoiseKind::MixedUnitary => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let raw: Vec<f64> = (0..generators.len())
                .map(|_| rng.random_range(1e-3..1.0))
                .collect();
            let total: f64 = raw.iter().sum();
            let kraus = generators
                .iter()
                .zip(raw.iter())
                .map(|(g, &w)| g.scaled_re((w / total).sqrt()))
                .collect();
            KrausChannel::new(kraus, label.clone())?
        }
        AncillaNoiseKind::Unitary => {
            let u = haar_random_unitary(d, spec.seed);
            let coeffs = WeylFrame::new(d)?.decompose(&u)?;
            let e = span_combination(&generators, coeffs.coeffs());
            KrausChannel::new(vec![e], label.clone())?
        }
        AncillaNoiseKind::General => {
            sample_general_in_class(d, spec.seed, &generators, &label)?
        }
        AncillaNoiseKind::OutOfClassControl => {
            let frame = WeylFrame::new(d)?;
            let amp = std::f64::consts::FRAC_1_SQRT_2;
            let k0 = ComplexMatrix::identity(d * d).scaled_re(amp);
            let k1 = ComplexMatrix::identity(d)
                .tensor(frame.clock())
                .scaled_re(amp);
            KrausChannel::new(vec![k0, k1], label.clone())?
        }
    };

    if !spec.kind.is_control() {
        for (idx, k) in channel.kraus().iter().enumerate() {
            let residual = span_projection_residual(k, &generators);
            if residual > 1e-9 {
                return Err(Error::InvalidState(format!(
                    "in-class sample left the tolerated span: Kraus {idx} residual {residual:.3e}"
                )));
            }
        }
    }

    let mut out_kraus = Vec::with_capacity(channel.kraus().len());
    for k in channel.kraus() {
        out_kraus.push(k.clone().with_factors(&[d, d], &[d, d])?);
    }
    KrausChannel::new(out_kraus, channel.label())
}

fn sample_general_in_class(
    d: usize,
    seed: u64,
    generators: &[ComplexMatrix],
    label: &str,
) -> Result<KrausChannel> {
    const KRAUS_COUNT: usize = 3;
    const MAX_ATTEMPTS: usize = 8;
    let tol = Tolerance::default();
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9));
        let raw: Vec<ComplexMatrix> = (0..KRAUS_COUNT)
            .map(|_| {
                let coeffs = complex_gaussian_coeffs(&mut rng, generators.len());
                span_combination(generators, &coeffs)
            })
            .collect();
        let mut gram = ComplexMatrix::zeros(d * d, d * d);
        for e in &raw {
            gram = &gram + &(&e.adjoint() * e);
        }
        match psd_inverse_sqrt(&gram, tol) {
            Ok(normalizer) => {
                let kraus = raw.iter().map(|e| e * &normalizer).collect();
                return KrausChannel::new(kraus, label);
            }
            Err(Error::Singular { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ResamplingExhausted {
        attempts: MAX_ATTEMPTS,
        reason: "singular normalization matrix for every redraw".into(),
    })
}

/// The assembled pipeline: a channel from S into A ⊗ B ⊗ S with the ancilla
/// preparation absorbed as an isometry.
#[derive(Debug, Clone)]
pub struct ProtocolAssembly {
    d: usize,
    variant: CorrectionVariant,
    order: AncillaOrder,
    entangler: ComplexMatrix,
    correction: CorrectionOp,
    ancilla_ket: ComplexMatrix,
    channel: KrausChannel,
}

/// Build the full pipeline
/// `ρ ↦ (correction ∘ U† ∘ (ancilla_noise ⊗ system_noise) ∘ U)(|ψ₀ψ₀><ψ₀ψ₀| ⊗ ρ)`
/// as a channel from S (dimension d) to A ⊗ B ⊗ S.
pub fn assemble(
    system_noise: &KrausChannel,
    ancilla_noise: &KrausChannel,
    d: usize,
    variant: CorrectionVariant,
    order: AncillaOrder,
) -> Result<ProtocolAssembly> {
    if d < 2 {
        return Err(Error::InvalidParam(format!("dimension must be >= 2, got {d}")));
    }
    if system_noise.d_in() != d || system_noise.d_out() != d {
        return Err(Error::ShapeMismatch(format!(
            "system noise acts on dimension {}, protocol needs {d}",
            system_noise.d_in()
        )));
    }
    if ancilla_noise.d_in() != d * d || ancilla_noise.d_out() != d * d {
        return Err(Error::ShapeMismatch(format!(
            "ancilla noise acts on dimension {}, protocol needs {}",
            ancilla_noise.d_in(),
            d * d
        )));
    }

    let entangler = entangling_unitary(d)?;
    let correction = correction_operation(d, variant, order)?;
    let ancilla_ket = uniform_ket(d).tensor(&uniform_ket(d));
    let prep = ancilla_ket.tensor(&ComplexMatrix::identity(d));
    let into_noise = &entangler * &prep;
    let undo = entangler.adjoint();
    let correction_kraus = correction.kraus_operators();

    let mut kraus = Vec::with_capacity(
        correction_kraus.len() * ancilla_noise.kraus().len() * system_noise.kraus().len(),
    );
    for e in ancilla_noise.kraus() {
        for f in system_noise.kraus() {
            let exposed = &e.tensor(f) * &into_noise;
            let undone = &undo * &exposed;
            for v in &correction_kraus {
                kraus.push((v * &undone).with_factors(&[d, d, d], &[d])?);
            }
        }
    }
    let channel = KrausChannel::new(
        kraus,
        format!(
            "pipeline[{} | {} | {}-{}]",
            system_noise.label(),
            ancilla_noise.label(),
            variant.as_str(),
            order.as_str()
        ),
    )?;
    Ok(ProtocolAssembly {
        d,
        variant,
        order,
        entangler,
        correction,
        ancilla_ket,
        channel,
    })
}

impl ProtocolAssembly {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn variant(&self) -> CorrectionVariant {
        self.variant
    }

    pub fn order(&self) -> AncillaOrder {
        self.order
    }

    pub fn entangler(&self) -> &ComplexMatrix {
        &self.entangler
    }

    pub fn correction(&self) -> &CorrectionOp {
        &self.correction
    }

    /// The prepared ancilla state |ψ₀>|ψ₀> as a ket on A ⊗ B.
    pub fn ancilla_ket(&self) -> &ComplexMatrix {
        &self.ancilla_ket
    }

    /// The assembled channel from S to A ⊗ B ⊗ S.
    pub fn channel(&self) -> &KrausChannel {
        &self.channel
    }

    /// Choi matrix of the effective S → S map after tracing out the ancillas.
    /// Accumulated per ancilla-indexed Kraus block, so no d⁴-sided
    /// intermediate is formed.
    pub fn effective_system_choi(&self) -> ChoiMatrix {
        let d = self.d;
        let side = d * d;
        let mut acc = ComplexMatrix::zeros(side, side);
        for k in self.channel.kraus() {
            for ab in 0..d * d {
                let w: Vec<C64> = (0..side)
                    .map(|idx| k.at(ab * d + idx / d, idx % d))
                    .collect();
                acc = &acc + &ComplexMatrix::from_fn(side, side, |i, j| w[i] * w[j].conj());
            }
        }
        let matrix = acc
            .with_factors(&[d, d], &[d, d])
            .expect("effective Choi factors");
        ChoiMatrix::from_matrix(matrix, d, d).expect("effective Choi shape")
    }

    /// Choi matrix of the full S → A ⊗ B ⊗ S channel, with factor structure
    /// (A, B, S_out, S_in).
    pub fn full_choi(&self) -> ChoiMatrix {
        let d = self.d;
        let side = d * d * d * d;
        let mut acc = ComplexMatrix::zeros(side, side);
        for k in self.channel.kraus() {
            let w: Vec<C64> = (0..side).map(|idx| k.at(idx / d, idx % d)).collect();
            acc = &acc + &ComplexMatrix::from_fn(side, side, |i, j| w[i] * w[j].conj());
        }
        let matrix = acc
            .with_factors(&[d, d, d, d], &[d, d, d, d])
            .expect("full Choi factors");
        ChoiMatrix::from_matrix(matrix, d * d * d, d).expect("full Choi shape")
    }

    /// The state left on the ancillas: the A ⊗ B marginal of the full Choi
    /// divided by d. Equals the Choi matrix of the induced
    /// (input-independent) ancilla preparation whenever the channel
    /// factorizes.
    pub fn ancilla_output(&self) -> ComplexMatrix {
        let d = self.d;
        let side = d * d;
        let mut acc = ComplexMatrix::zeros(side, side);
        for k in self.channel.kraus() {
            acc = &acc
                + &ComplexMatrix::from_fn(side, side, |ab, ab2| {
                    let mut sum = C64::new(0.0, 0.0);
                    for s in 0..d {
                        for i in 0..d {
                            sum += k.at(ab * d + s, i) * k.at(ab2 * d + s, i).conj();
                        }
                    }
                    sum
                });
        }
        acc.scaled_re(1.0 / d as f64)
            .with_factors(&[d, d], &[d, d])
            .expect("ancilla output factors")
    }

    /// Certify the product structure of the assembled channel: the full Choi
    /// should equal (ancilla output) ⊗ (identity-channel Choi on S). The
    /// joint-Choi comparison is capped at d = 3; above that only the system
    /// marginal is checked and the residual is reported as skipped.
    pub fn factorization_report(&self) -> Result<FactorizationReport> {
        let system_fidelity = self.effective_system_choi().entanglement_fidelity()?;
        let ancilla_output = self.ancilla_output();
        let factorization_residual = if self.d <= 3 {
            let full = self.full_choi();
            let expected = ancilla_output.tensor(identity_choi(self.d).matrix());
            Some(full.matrix().frobenius_distance(&expected))
        } else {
            None
        };
        Ok(FactorizationReport {
            system_fidelity,
            factorization_residual,
            ancilla_output,
        })
    }
}

/// Product-structure certificate for one assembled pipeline. The ancilla
/// output has no closed form; it is reported, never asserted against an
/// external oracle.
#[derive(Debug, Clone)]
pub struct FactorizationReport {
    pub system_fidelity: f64,
    /// `None` when the joint-Choi check is skipped for dimension.
    pub factorization_residual: Option<f64>,
    pub ancilla_output: ComplexMatrix,
}
