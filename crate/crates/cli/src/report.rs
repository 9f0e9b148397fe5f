//! Machine-readable sweep reports.
//!
//! Every floating-point field is rendered through one formatter at 12
//! significant digits, so the JSON and CSV emissions of a sweep carry
//! identical numeric text. Tolerances live in the config, never here.

use crate::config::SweepConfig;

/// Render a float with 12 significant digits (valid as a JSON number).
pub fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Outcome of one sweep cell.
#[derive(Debug, Clone)]
pub struct ReportRecord {
    pub case_id: String,
    pub d: usize,
    pub seed: u64,
    pub system_noise: String,
    pub ancilla_noise: String,
    pub v_variant: String,
    pub ab_order: String,
    pub system_fidelity: f64,
    /// `None` when the joint-Choi check is skipped for dimension.
    pub factorization_residual: Option<f64>,
    /// Expected-fail control cell; excluded from the exit-status contract.
    pub control: bool,
    pub pass: bool,
    pub wall_time_ms: f64,
}

impl ReportRecord {
    fn residual_text(&self) -> String {
        match self.factorization_residual {
            Some(r) => fmt_sig12(r),
            None => "skipped:dim".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepSummary {
    pub pass_count: usize,
    pub fail_count: usize,
    pub control_count: usize,
}

/// A completed sweep: config echo, one record per cell, and the summary.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub records: Vec<ReportRecord>,
    pub summary: SweepSummary,
}

impl SweepReport {
    pub fn new(config: SweepConfig, records: Vec<ReportRecord>) -> Self {
        let mut summary = SweepSummary {
            pass_count: 0,
            fail_count: 0,
            control_count: 0,
        };
        for record in &records {
            if record.control {
                summary.control_count += 1;
            } else if record.pass {
                summary.pass_count += 1;
            } else {
                summary.fail_count += 1;
            }
        }
        Self {
            config,
            records,
            summary,
        }
    }

    /// Exit-status contract: success iff every non-control cell passes.
    pub fn all_non_control_pass(&self) -> bool {
        self.summary.fail_count == 0
    }

    fn timing_of(&self, record: &ReportRecord) -> f64 {
        if self.config.omit_timing {
            0.0
        } else {
            record.wall_time_ms
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n  \"config\": {\n");
        let c = &self.config;
        out.push_str(&format!(
            "    \"d_list\": [{}],\n",
            c.d_list
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!(
            "    \"seeds_per_case\": {},\n",
            c.seeds_per_case
        ));
        out.push_str(&format!(
            "    \"system_noise_kinds\": [{}],\n",
            c.system_noise_kinds
                .iter()
                .map(|k| format!("\"{}\"", k.as_str()))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!(
            "    \"ancilla_noise_kinds\": [{}],\n",
            c.ancilla_noise_kinds
                .iter()
                .map(|k| format!("\"{}\"", k.as_str()))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!(
            "    \"v_variants\": [{}],\n",
            c.v_variants
                .iter()
                .map(|v| format!("\"{}\"", v.as_str()))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!(
            "    \"ab_orders\": [{}],\n",
            c.ab_orders
                .iter()
                .map(|o| format!("\"{}\"", o.as_str()))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!("    \"tolerance\": {},\n", fmt_sig12(c.tolerance)));
        out.push_str(&format!(
            "    \"output_format\": \"{}\"\n",
            c.output_format.as_str()
        ));
        out.push_str("  },\n  \"records\": [\n");
        for (idx, record) in self.records.iter().enumerate() {
            let residual = match record.factorization_residual {
                Some(r) => fmt_sig12(r),
                None => "\"skipped:dim\"".into(),
            };
            out.push_str(&format!(
                "    {{\"case_id\": \"{}\", \"d\": {}, \"seed\": {}, \"system_noise\": \"{}\", \
                 \"ancilla_noise\": \"{}\", \"v_variant\": \"{}\", \"ab_order\": \"{}\", \
                 \"system_fidelity\": {}, \"factorization_residual\": {}, \"control\": {}, \
                 \"pass\": {}, \"wall_time_ms\": {}}}{}\n",
                record.case_id,
                record.d,
                record.seed,
                record.system_noise,
                record.ancilla_noise,
                record.v_variant,
                record.ab_order,
                fmt_sig12(record.system_fidelity),
                residual,
                record.control,
                record.pass,
                fmt_sig12(self.timing_of(record)),
                if idx + 1 < self.records.len() { "," } else { "" }
            ));
        }
        out.push_str("  ],\n");
        out.push_str(&format!(
            "  \"summary\": {{\"pass_count\": {}, \"fail_count\": {}, \"control_count\": {}}}\n}}\n",
            self.summary.pass_count, self.summary.fail_count, self.summary.control_count
        ));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "case_id,d,seed,system_noise,ancilla_noise,v_variant,ab_order,system_fidelity,\
             factorization_residual,control,pass,wall_time_ms\n",
        );
        for record in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                record.case_id,
                record.d,
                record.seed,
                record.system_noise,
                record.ancilla_noise,
                record.v_variant,
                record.ab_order,
                fmt_sig12(record.system_fidelity),
                record.residual_text(),
                record.control,
                record.pass,
                fmt_sig12(self.timing_of(record)),
            ));
        }
        out
    }

    pub fn render(&self) -> String {
        match self.config.output_format {
            crate::config::OutputFormat::Json => self.to_json(),
            crate::config::OutputFormat::Csv => self.to_csv(),
        }
    }
}
