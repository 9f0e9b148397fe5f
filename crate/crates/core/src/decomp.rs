//! Idealized optical and atom-cavity gate models, and numeric certificates
//! that the proposed element trains reproduce the protocol unitaries as exact
//! matrix identities.
//!
//! Optical register layout: polarization = ancilla A, path = ancilla B, and
//! orbital angular momentum (restricted to the {|+1>, |-1>} subspace) = the
//! system S. All elements act on idealized two-level subspaces with no mode
//! leakage.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::channel::KrausChannel;
use crate::error::{Error, Result};
use crate::matrix::{
    basis_ket, embed_on_factors, hadamard, projector, sigma_x, sigma_z, C64, ComplexMatrix,
};
use crate::protocol::{
    assemble, entangling_unitary, AncillaOrder, CorrectionOp, CorrectionVariant,
    correction_operation,
};

/// Degrees of freedom an optical element acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpticalFactor {
    Polarization,
    Path,
    Oam,
}

/// Linear optical elements used by the communication scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpticalElement {
    /// Dove prism rotated by `angle`, acting on the OAM pair {|+l>, |-l>}.
    DovePrism { angle: f64, ell: i32 },
    /// Polarization-selective Dove prism: identity for |h>, OAM swap for |v>.
    Psdp,
    /// Half-wave plate with fast axis at `angle`.
    HalfWavePlate { angle: f64 },
    /// Balanced beam splitter mixing the two paths.
    BeamSplitter,
    /// Cylindrical-lens mode converter acting as a Hadamard on OAM.
    PiConverter,
    /// Global phase plate.
    PhasePlate { phase: f64 },
}

impl OpticalElement {
    pub fn matrix(&self) -> ComplexMatrix {
        match *self {
            Self::DovePrism { angle, ell } => dove_prism(angle, ell),
            Self::Psdp => polarization_selective_dove(),
            Self::HalfWavePlate { angle } => half_wave_plate(angle),
            Self::BeamSplitter => hadamard(),
            Self::PiConverter => hadamard(),
            Self::PhasePlate { phase } => phase_plate(phase),
        }
    }

    pub fn acts_on(&self) -> &'static [OpticalFactor] {
        match self {
            Self::DovePrism { .. } | Self::PiConverter => &[OpticalFactor::Oam],
            Self::Psdp => &[OpticalFactor::Polarization, OpticalFactor::Oam],
            Self::HalfWavePlate { .. } => &[OpticalFactor::Polarization],
            Self::BeamSplitter => &[OpticalFactor::Path],
            Self::PhasePlate { .. } => &[OpticalFactor::Oam],
        }
    }
}

/// Dove prism rotated by `angle`: |l> -> e^{2il·angle} |-l> on the OAM basis
/// {|+l>, |-l>}.
pub fn dove_prism(angle: f64, ell: i32) -> ComplexMatrix {
    let phase = 2.0 * ell as f64 * angle;
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(1, 0, C64::from_polar(1.0, phase));
    m.set(0, 1, C64::from_polar(1.0, -phase));
    m
}

/// Global phase e^{i·phase} on a two-level mode.
pub fn phase_plate(phase: f64) -> ComplexMatrix {
    ComplexMatrix::identity(2).scaled(C64::from_polar(1.0, phase))
}

/// Half-wave plate with fast axis at `angle` (Jones rotation-reflection).
pub fn half_wave_plate(angle: f64) -> ComplexMatrix {
    let (s, c) = (2.0 * angle).sin_cos();
    ComplexMatrix::from_rows(&[
        vec![C64::new(c, 0.0), C64::new(s, 0.0)],
        vec![C64::new(s, 0.0), C64::new(-c, 0.0)],
    ])
}

/// The π/8 half-wave plate realizing a polarization Hadamard.
pub fn polarization_hadamard() -> ComplexMatrix {
    half_wave_plate(PI / 8.0)
}

/// Polarization-selective Dove prism on polarization ⊗ OAM: identity for
/// |h>, OAM swap for |v> — a controlled-NOT with polarization control.
pub fn polarization_selective_dove() -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let swap = sigma_x();
    let p_h = projector(&basis_ket(2, 0));
    let p_v = projector(&basis_ket(2, 1));
    &p_h.tensor(&id) + &p_v.tensor(&swap)
}

/// Certificate for the two-Dove-prism realization of the system phase flip.
#[derive(Debug, Clone)]
pub struct TwoDoveCheck {
    /// Residual of plate · DP(0) · DP(π/4) against σ_z (exact identity).
    pub with_plate_residual: f64,
    /// Residual of the bare two-prism product against i·σ_z.
    pub bare_residual: f64,
    /// |tr(product† σ_z)| / 2 — phase-insensitive overlap of the bare product.
    pub phase_insensitive_overlap: f64,
    pub pass: bool,
}

/// Two Dove prisms in series, first at π/4 and second at 0, equal i·σ_z on
/// the OAM pair; a compensating -i phase plate makes it exactly σ_z.
pub fn two_dove_sigma_z_check() -> TwoDoveCheck {
    let first = dove_prism(PI / 4.0, 1);
    let second = dove_prism(0.0, 1);
    let product = &second * &first;
    let bare_residual =
        product.frobenius_distance(&sigma_z().scaled(C64::new(0.0, 1.0)));
    let compensated = &phase_plate(-FRAC_PI_2) * &product;
    let with_plate_residual = compensated.frobenius_distance(&sigma_z());
    let overlap = (&product.adjoint() * &sigma_z()).trace().norm() / 2.0;
    TwoDoveCheck {
        with_plate_residual,
        bare_residual,
        phase_insensitive_overlap: overlap,
        pass: with_plate_residual <= 1e-12
            && bare_residual <= 1e-12
            && (overlap - 1.0).abs() <= 1e-12,
    }
}

/// The two-prism σ_z stage including the compensating phase plate.
fn dove_sigma_z_stage() -> ComplexMatrix {
    let train = [
        OpticalElement::DovePrism {
            angle: PI / 4.0,
            ell: 1,
        },
        OpticalElement::DovePrism { angle: 0.0, ell: 1 },
        OpticalElement::PhasePlate { phase: -FRAC_PI_2 },
    ];
    let mut acc = ComplexMatrix::identity(2);
    for element in train {
        acc = &element.matrix() * &acc;
    }
    acc
}

/// Certificate that the optical element train reproduces the entangling
/// unitary on (polarization, path, OAM) = (A, B, S).
#[derive(Debug, Clone)]
pub struct OpticalEntanglerCheck {
    /// Residual after dividing out the fitted global phase.
    pub residual_up_to_phase: f64,
    /// The fitted global phase (unity when the identity is exact).
    pub global_phase: C64,
    /// |tr(expected† assembled)| / 8 — the phase-insensitive overlap.
    pub normalized_overlap: f64,
    pub unitarity_deviation: f64,
    /// Residual of the deliberately mis-wired train (path and polarization
    /// roles exchanged); large by construction.
    pub miswired_residual: f64,
    pub pass: bool,
}

/// Assemble the optical train for the entangler: a PSDP in path a, and two
/// Dove prisms (with the compensating plate) followed by a PSDP in path b.
pub fn optical_entangler_check() -> Result<OpticalEntanglerCheck> {
    let dims = [2usize, 2, 2];
    let psdp_full = embed_on_factors(&polarization_selective_dove(), &dims, &[0, 2])?;
    let sz_full = embed_on_factors(&dove_sigma_z_stage(), &dims, &[2])?;
    let path_a = embed_on_factors(&projector(&basis_ket(2, 0)), &dims, &[1])?;
    let path_b = embed_on_factors(&projector(&basis_ket(2, 1)), &dims, &[1])?;

    let assembled = &(&psdp_full * &path_a) + &(&(&psdp_full * &sz_full) * &path_b);
    let expected = entangling_unitary(2)?;

    let overlap = (&expected.adjoint() * &assembled).trace();
    let normalized_overlap = overlap.norm() / 8.0;
    let global_phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let residual_up_to_phase =
        assembled.frobenius_distance(&expected.scaled(global_phase));
    let unitarity_deviation = assembled.unitarity_deviation();

    // negative control: exchange the polarization and path roles
    let miswired = assembled.permute_factors(&[1, 0, 2])?;
    let miswired_residual = miswired.frobenius_distance(&expected);

    Ok(OpticalEntanglerCheck {
        residual_up_to_phase,
        global_phase,
        normalized_overlap,
        unitarity_deviation,
        miswired_residual,
        pass: residual_up_to_phase <= 1e-9
            && unitarity_deviation <= 1e-12
            && miswired_residual > 0.1,
    })
}

/// Certificate comparing the Hadamard-conjugated correction against the
/// direct projector-sum form.
#[derive(Debug, Clone)]
pub struct HadamardConjugationCheck {
    /// Entrywise distance between the two candidate corrections; nonzero
    /// because one branch picks up an i phase under conjugation.
    pub exact_residual: f64,
    /// Frobenius distance of the Choi matrices of the two induced
    /// conjugation channels (block phases are physical at this level).
    pub conjugation_choi_distance: f64,
    /// Effective system fidelity through the full pipeline, direct form.
    pub fidelity_direct: f64,
    /// Effective system fidelity through the full pipeline, conjugated form.
    pub fidelity_conjugated: f64,
    pub pass: bool,
}

/// Both correction candidates close the protocol even though they differ as
/// matrices; system-level equivalence is delegated to the pipeline itself.
pub fn hadamard_conjugation_check() -> Result<HadamardConjugationCheck> {
    let direct = match correction_operation(2, CorrectionVariant::DirectUnitary, AncillaOrder::AB)?
    {
        CorrectionOp::Unitary(v) => v,
        _ => unreachable!("direct correction is unitary"),
    };
    let conjugated =
        match correction_operation(2, CorrectionVariant::HadamardConjugated, AncillaOrder::AB)? {
            CorrectionOp::Unitary(v) => v,
            _ => unreachable!("hadamard correction is unitary"),
        };
    let exact_residual = direct.frobenius_distance(&conjugated);
    let choi_direct = KrausChannel::from_unitary(direct, "direct").choi();
    let choi_conjugated = KrausChannel::from_unitary(conjugated, "conjugated").choi();
    let conjugation_choi_distance = choi_direct.frobenius_distance(&choi_conjugated);

    let noise = crate::channel::amplitude_damping(0.3)?;
    let ancilla = KrausChannel::identity(4);
    let fidelity_of = |variant: CorrectionVariant| -> Result<f64> {
        let assembly = assemble(&noise, &ancilla, 2, variant, AncillaOrder::AB)?;
        assembly.effective_system_choi().entanglement_fidelity()
    };
    let fidelity_direct = fidelity_of(CorrectionVariant::DirectUnitary)?;
    let fidelity_conjugated = fidelity_of(CorrectionVariant::HadamardConjugated)?;

    Ok(HadamardConjugationCheck {
        exact_residual,
        conjugation_choi_distance,
        fidelity_direct,
        fidelity_conjugated,
        pass: exact_residual > 1e-9
            && fidelity_direct >= 1.0 - 1e-9
            && fidelity_conjugated >= 1.0 - 1e-9,
    })
}

/// Certificate for the two-controlled-gate product form of the entangler.
#[derive(Debug, Clone)]
pub struct AtomicEntanglerCheck {
    /// Entrywise residual of (1_B ⊗ C_x^{AS})(1_A ⊗ C_z^{BS}) against the
    /// entangling unitary; zero because σ_x σ_z = -iσ_y exactly.
    pub exact_residual: f64,
    /// Per-block phase tr(expected_block† actual_block)/2 for the four
    /// ancilla basis blocks.
    pub block_phases: Vec<C64>,
    pub unitarity_deviation: f64,
    pub pass: bool,
}

/// Build the entangler from literal controlled-NOT and controlled-phase
/// gates, as the atom-cavity scheme does, and compare exactly.
pub fn atomic_entangler_check() -> Result<AtomicEntanglerCheck> {
    let dims = [2usize, 2, 2];
    let p0 = projector(&basis_ket(2, 0));
    let p1 = projector(&basis_ket(2, 1));
    let id = ComplexMatrix::identity(2);
    let c_x = &p0.tensor(&id) + &p1.tensor(&sigma_x());
    let c_z = &p0.tensor(&id) + &p1.tensor(&sigma_z());
    let c_x_full = embed_on_factors(&c_x, &dims, &[0, 2])?;
    let c_z_full = embed_on_factors(&c_z, &dims, &[1, 2])?;
    let assembled = &c_x_full * &c_z_full;

    let expected = entangling_unitary(2)?;
    let exact_residual = assembled.frobenius_distance(&expected);
    let unitarity_deviation = assembled.unitarity_deviation();

    let mut block_phases = Vec::with_capacity(4);
    for ab in 0..4 {
        let mut overlap = C64::new(0.0, 0.0);
        for s in 0..2 {
            for sp in 0..2 {
                overlap += expected.at(ab * 2 + s, ab * 2 + sp).conj()
                    * assembled.at(ab * 2 + s, ab * 2 + sp);
            }
        }
        block_phases.push(overlap / C64::new(2.0, 0.0));
    }

    let pass = exact_residual <= 1e-12
        && unitarity_deviation <= 1e-12
        && block_phases
            .iter()
            .all(|p| (p - C64::new(1.0, 0.0)).norm() <= 1e-12);
    Ok(AtomicEntanglerCheck {
        exact_residual,
        block_phases,
        unitarity_deviation,
        pass,
    })
}

/// Rates of the atom-cavity system: cavity decay κ, coupling g, atomic decay γ.
#[derive(Debug, Clone, Copy)]
pub struct CavityParams {
    pub kappa: f64,
    pub g: f64,
    pub gamma: f64,
}

impl CavityParams {
    pub fn new(kappa: f64, g: f64, gamma: f64) -> Result<Self> {
        if kappa <= 0.0 || !kappa.is_finite() {
            return Err(Error::InvalidParam(format!("kappa must be positive, got {kappa}")));
        }
        if gamma <= 0.0 || !gamma.is_finite() {
            return Err(Error::InvalidParam(format!("gamma must be positive, got {gamma}")));
        }
        if g < 0.0 || !g.is_finite() {
            return Err(Error::InvalidParam(format!("g must be non-negative, got {g}")));
        }
        Ok(Self { kappa, g, gamma })
    }

    /// 4g² / (κγ); the reflection coefficient approaches +1 as this grows.
    pub fn cooperativity(&self) -> f64 {
        4.0 * self.g * self.g / (self.kappa * self.gamma)
    }

    /// Regime flag: strong coupling in the sense g² ≫ κγ.
    pub fn is_strong_coupling(&self, min_cooperativity: f64) -> bool {
        self.cooperativity() >= min_cooperativity
    }

    /// Regime flag: the rate hierarchy κ ≫ g ≫ γ by at least `factor`.
    pub fn satisfies_rate_hierarchy(&self, factor: f64) -> bool {
        self.kappa >= factor * self.g && self.g >= factor * self.gamma
    }
}

/// Steady-state reflection coefficient of the resonant atom-cavity system:
/// `(-κγ + 4g²) / (κγ + 4g²)`. Limits: -1 at g = 0, +1 as g²/κγ → ∞.
pub fn cavity_reflection(params: &CavityParams) -> f64 {
    let kg = params.kappa * params.gamma;
    let g2 = 4.0 * params.g * params.g;
    (-kg + g2) / (kg + g2)
}

/// Joint photon-atom reflection map in the idealized strong-coupling limit,
/// on polarization ⊗ atom with basis order (L,+1), (L,-1), (R,+1), (R,-1):
/// left-circular light picks up a π phase regardless of the atom, while
/// right-circular light is reflected with a sign set by the atomic state.
pub fn atom_photon_cz() -> ComplexMatrix {
    let entries = [-1.0, -1.0, 1.0, -1.0];
    ComplexMatrix::from_fn(4, 4, |i, j| {
        if i == j {
            C64::new(entries[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Certificate for the reflection map: equality with -C_z under the logical
/// identification photon |1> = |R>, atom |1> = |+1>, and conversion to -C_x
/// under Hadamard conjugation of either factor.
#[derive(Debug, Clone)]
pub struct AtomPhotonCzCheck {
    pub residual_to_minus_cz: f64,
    pub involution_residual: f64,
    pub hadamard_on_atom_residual: f64,
    pub hadamard_on_photon_residual: f64,
    pub pass: bool,
}

pub fn atom_photon_cz_check() -> Result<AtomPhotonCzCheck> {
    let m = atom_photon_cz();
    // C_z in the physical basis under the stated identification: the only +1
    // logical-phase-flip entry is (R, +1).
    let c_z = ComplexMatrix::from_fn(4, 4, |i, j| {
        if i != j {
            C64::new(0.0, 0.0)
        } else if i == 2 {
            C64::new(-1.0, 0.0)
        } else {
            C64::new(1.0, 0.0)
        }
    });
    let residual_to_minus_cz = m.frobenius_distance(&c_z.scaled_re(-1.0));
    let involution_residual = (&m * &m).frobenius_distance(&ComplexMatrix::identity(4));

    let m = m.with_factors(&[2, 2], &[2, 2])?;
    // The atom's logical basis is (|-1>, |+1>), reversed from the physical
    // ordering, so its Hadamard is σ_x H σ_x in physical coordinates. The
    // photon ordering (L, R) already matches the logical one.
    let h_logical = &(&sigma_x() * &hadamard()) * &sigma_x();
    let h_atom = ComplexMatrix::identity(2).tensor(&h_logical);
    let h_photon = hadamard().tensor(&ComplexMatrix::identity(2));

    // -C_x with photon control: flip the atom when the photon is |R>
    let p_l = projector(&basis_ket(2, 0));
    let p_r = projector(&basis_ket(2, 1));
    let id = ComplexMatrix::identity(2);
    let minus_cx_atom_target =
        (&p_l.tensor(&id) + &p_r.tensor(&sigma_x())).scaled_re(-1.0);
    // -C_x with atom control: flip the photon when the atom is |+1>
    let p_plus1 = projector(&basis_ket(2, 0));
    let p_minus1 = projector(&basis_ket(2, 1));
    let minus_cx_photon_target =
        (&sigma_x().tensor(&p_plus1) + &id.tensor(&p_minus1)).scaled_re(-1.0);

    let conj_atom = &(&h_atom * &m) * &h_atom;
    let conj_photon = &(&h_photon * &m) * &h_photon;
    let hadamard_on_atom_residual = conj_atom.frobenius_distance(&minus_cx_atom_target);
    let hadamard_on_photon_residual = conj_photon.frobenius_distance(&minus_cx_photon_target);

    Ok(AtomPhotonCzCheck {
        residual_to_minus_cz,
        involution_residual,
        hadamard_on_atom_residual,
        hadamard_on_photon_residual,
        pass: residual_to_minus_cz <= 1e-12
            && involution_residual <= 1e-12
            && hadamard_on_atom_residual <= 1e-12
            && hadamard_on_photon_residual <= 1e-12,
    })
}
