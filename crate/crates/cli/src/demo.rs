//! Entanglement-protection demo: a Bell pair whose halves each traverse an
//! independent transparency pipeline under local depolarizing noise.

use qct_core::channel::{depolarizing, kraus_from_choi, negativity, DensityState, KrausChannel};
use qct_core::protocol::{assemble, AncillaOrder, CorrectionVariant};
use qct_core::{Result, Tolerance};

use crate::report::fmt_sig12;

/// One demo row: a noise strength with or without protection.
#[derive(Debug, Clone)]
pub struct DemoRow {
    pub p: f64,
    pub protected: bool,
    pub negativity_in: f64,
    pub negativity_out: f64,
    /// For protected rows: output negativity stays maximal within tolerance.
    /// Baseline rows are reference only and always pass.
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct DemoReport {
    pub seed: u64,
    pub tolerance: f64,
    pub rows: Vec<DemoRow>,
}

impl DemoReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"seed\": {},\n", self.seed));
        out.push_str(&format!(
            "  \"tolerance\": {},\n  \"rows\": [\n",
            fmt_sig12(self.tolerance)
        ));
        for (idx, row) in self.rows.iter().enumerate() {
            out.push_str(&format!(
                "    {{\"p\": {}, \"protected\": {}, \"negativity_in\": {}, \
                 \"negativity_out\": {}, \"pass\": {}}}{}\n",
                fmt_sig12(row.p),
                row.protected,
                fmt_sig12(row.negativity_in),
                fmt_sig12(row.negativity_out),
                row.pass,
                if idx + 1 < self.rows.len() { "," } else { "" }
            ));
        }
        out.push_str("  ]\n}\n");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,protected,negativity_in,negativity_out,pass\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_sig12(row.p),
                row.protected,
                fmt_sig12(row.negativity_in),
                fmt_sig12(row.negativity_out),
                row.pass
            ));
        }
        out
    }
}

/// The effective channel one Bell half sees behind its pipeline.
fn protected_half_channel(p: f64, tol: Tolerance) -> Result<KrausChannel> {
    let noise = depolarizing(p)?;
    let ancilla = KrausChannel::identity(4);
    let assembly = assemble(
        &noise,
        &ancilla,
        2,
        CorrectionVariant::DirectUnitary,
        AncillaOrder::AB,
    )?;
    kraus_from_choi(&assembly.effective_system_choi(), tol)
}

/// For each depolarizing strength: a bare-channel baseline row and a
/// protected row. Protected halves keep the Bell pair at maximal negativity.
pub fn run_entanglement_demo(ps: &[f64], seed: u64, tolerance: f64) -> Result<DemoReport> {
    let tol = Tolerance::new(tolerance)?;
    let bell = DensityState::maximally_entangled(2);
    let negativity_in = negativity(&bell)?;
    let mut rows = Vec::new();
    for &p in ps {
        let bare = depolarizing(p)?;
        let bare_joint = bare.tensor(&bare);
        let bare_out = bare_joint.apply(&bell)?.with_factors(&[2, 2])?;
        rows.push(DemoRow {
            p,
            protected: false,
            negativity_in,
            negativity_out: negativity(&bare_out)?,
            pass: true,
        });

        // each half runs through its own pipeline
        let left = protected_half_channel(p, tol)?;
        let right = protected_half_channel(p, tol)?;
        let protected_joint = left.tensor(&right);
        let protected_out = protected_joint.apply(&bell)?.with_factors(&[2, 2])?;
        let negativity_out = negativity(&protected_out)?;
        rows.push(DemoRow {
            p,
            protected: true,
            negativity_in,
            negativity_out,
            pass: (negativity_out - 0.5).abs() <= tolerance,
        });
    }
    Ok(DemoReport {
        seed,
        tolerance,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn protection_keeps_negativity_maximal() {
        let report = run_entanglement_demo(&[0.25, 0.5, 1.0], 0, 1e-9).unwrap();
        assert!(report.all_pass());
        for row in report.rows.iter().filter(|r| r.protected) {
            assert!((row.negativity_out - 0.5).abs() <= 1e-9, "p={}", row.p);
        }
    }

    #[test]
    fn bare_full_depolarizing_destroys_entanglement() {
        let report = run_entanglement_demo(&[1.0], 0, 1e-9).unwrap();
        let baseline = report
            .rows
            .iter()
            .find(|r| !r.protected)
            .expect("baseline row");
        assert!(baseline.negativity_out <= 1e-12);
    }

    #[test]
    fn zero_noise_baseline_keeps_bell_negativity() {
        let report = run_entanglement_demo(&[0.0], 0, 1e-9).unwrap();
        let baseline = report.rows.iter().find(|r| !r.protected).unwrap();
        assert!((baseline.negativity_out - 0.5).abs() <= 1e-12);
        assert!((baseline.negativity_in - 0.5).abs() <= 1e-12);
    }
}
