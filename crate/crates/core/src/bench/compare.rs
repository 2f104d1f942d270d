use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed::WORD_BITS;
use crate::hw::{CycleLedger, PipelineConfig};

/// Programming payload quoted for the reference hardware, in bits.
pub const REFERENCE_PAYLOAD_BITS: u32 = 345;
/// The Walsh Generator settles within one clock cycle.
pub const FPGA_WALSH_CALC_CYCLES: f64 = 1.0;

/// Microcontroller baseline, in its own clock cycles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// Cycles to precompute one waveform sample.
    pub per_sample_precompile: f64,
    /// Samples in the demonstrated waveform.
    pub demo_samples: u64,
    /// Extra cycles spent on a parameter change besides precompilation.
    pub recompute_on_change: f64,
    /// Cycles from trigger to the first output sample.
    pub trigger_to_output: f64,
    /// Slowdown of a software Walsh evaluation relative to the FPGA.
    pub walsh_calc_slowdown: f64,
}

impl Default for CostModel {
    /// Calibrated so the demonstrated waveform costs 1.3 M cycles to precompile.
    fn default() -> Self {
        CostModel {
            per_sample_precompile: 1_300_000.0 / 1024.0,
            demo_samples: 1024,
            recompute_on_change: 0.0,
            trigger_to_output: 125.0,
            walsh_calc_slowdown: 8000.0,
        }
    }
}

impl CostModel {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("bench.per_sample_precompile", self.per_sample_precompile),
            ("bench.recompute_on_change", self.recompute_on_change),
            ("bench.trigger_to_output", self.trigger_to_output),
            ("bench.walsh_calc_slowdown", self.walsh_calc_slowdown),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!("{name} = {v} must be finite and non-negative")));
            }
        }
        Ok(())
    }

    pub fn precompile_cycles(&self) -> f64 {
        self.per_sample_precompile * self.demo_samples as f64 + self.recompute_on_change
    }
}

/// Compared operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    TriggerToOutput,
    VariableChange,
    WalshCalc,
    Reset,
}

impl Scenario {
    pub const ALL: [Scenario; 4] =
        [Scenario::TriggerToOutput, Scenario::VariableChange, Scenario::WalshCalc, Scenario::Reset];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::TriggerToOutput => "trigger-to-output",
            Scenario::VariableChange => "variable-change",
            Scenario::WalshCalc => "walsh-calc",
            Scenario::Reset => "reset",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL.into_iter().find(|sc| sc.name() == s).ok_or_else(|| Error::UnknownScenario(s.to_owned()))
    }
}

/// Baseline cycles for a scenario. A reset reloads the waveform like a change.
pub fn baseline_estimate(scenario: Scenario, model: &CostModel) -> f64 {
    match scenario {
        Scenario::TriggerToOutput => model.trigger_to_output,
        Scenario::VariableChange | Scenario::Reset => model.precompile_cycles(),
        Scenario::WalshCalc => model.walsh_calc_slowdown * FPGA_WALSH_CALC_CYCLES,
    }
}

fn fpga_cycles(scenario: Scenario, ledger: &CycleLedger) -> Result<f64> {
    let missing = |what: &str| Error::Config(format!("ledger has no {what} measurement"));
    match scenario {
        Scenario::TriggerToOutput => ledger.total_cycles().ok_or_else(|| missing("trigger-to-output")),
        Scenario::VariableChange => ledger.variable_change_cycles().ok_or_else(|| missing("variable-change")),
        Scenario::Reset => ledger.reset_cycles().ok_or_else(|| missing("reset")),
        Scenario::WalshCalc => Ok(FPGA_WALSH_CALC_CYCLES),
    }
}

/// One documented programming field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PayloadField {
    pub name: String,
    pub bits: u32,
}

/// Field-by-field payload next to the quoted figure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PayloadReport {
    pub fields: Vec<PayloadField>,
    pub computed_bits: u32,
    pub reference_bits: u32,
}

/// Sum of the documented field widths for `n` weights.
pub fn payload_bits(channels: u16) -> PayloadReport {
    let field = |name: &str, bits| PayloadField { name: name.to_owned(), bits };
    let fields = vec![
        field("timing.order", 8),
        field("timing.t1", 8),
        field("timing.repeat", 4),
        field("modulation.t2", 4),
        field("synth.mode", 2),
        field("synth.weights", WORD_BITS * u32::from(channels)),
    ];
    let computed_bits = fields.iter().map(|f| f.bits).sum();
    PayloadReport { fields, computed_bits, reference_bits: REFERENCE_PAYLOAD_BITS }
}

/// One line of the comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRow {
    pub scenario: Scenario,
    pub fpga_cycles: f64,
    pub baseline_cycles: f64,
    pub ratio: f64,
}

/// Baseline versus modelled FPGA cycles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// Always true: baseline figures come from [`CostModel`].
    pub model_based: bool,
    pub cost_model: CostModel,
    pub scenarios: Vec<ScenarioRow>,
    pub payload: PayloadReport,
}

impl ComparisonReport {
    pub fn row(&self, scenario: Scenario) -> Option<&ScenarioRow> {
        self.scenarios.iter().find(|r| r.scenario == scenario)
    }

    /// Plain-text table.
    pub fn to_table(&self) -> String {
        let mut out = String::from("scenario            fpga_cycles  baseline_cycles        ratio\n");
        for r in &self.scenarios {
            out.push_str(&format!(
                "{:<18} {:>12.1} {:>16.1} {:>12.2}\n",
                r.scenario.name(),
                r.fpga_cycles,
                r.baseline_cycles,
                r.ratio
            ));
        }
        out.push_str(&format!(
            "payload bits: {} computed ({}), {} quoted\n",
            self.payload.computed_bits,
            self.payload.fields.iter().map(|f| format!("{}={}", f.name, f.bits)).collect::<Vec<_>>().join(" + "),
            self.payload.reference_bits
        ));
        out.push_str("baseline cycles are cost-model estimates, not measurements\n");
        out
    }
}

/// Ratios for every scenario from a measured ledger.
pub fn compare_report(ledger: &CycleLedger, config: &PipelineConfig, model: &CostModel) -> Result<ComparisonReport> {
    model.validate()?;
    let scenarios = Scenario::ALL
        .into_iter()
        .map(|scenario| {
            let fpga_cycles = fpga_cycles(scenario, ledger)?;
            let baseline_cycles = baseline_estimate(scenario, model);
            Ok(ScenarioRow { scenario, fpga_cycles, baseline_cycles, ratio: baseline_cycles / fpga_cycles })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport {
        model_based: true,
        cost_model: *model,
        scenarios,
        payload: payload_bits(config.modulation.channels),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_baselines() {
        let m = CostModel::default();
        assert_eq!(baseline_estimate(Scenario::VariableChange, &m), 1.3e6);
        assert_eq!(baseline_estimate(Scenario::TriggerToOutput, &m), 125.0);
        assert_eq!(baseline_estimate(Scenario::WalshCalc, &m), 8000.0);
    }

    #[test]
    fn scenario_names() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
        assert_eq!("warp".parse::<Scenario>(), Err(Error::UnknownScenario("warp".into())));
    }

    #[test]
    fn payload_for_sixteen_weights() {
        let p = payload_bits(16);
        assert_eq!(p.computed_bits, 250);
        assert_eq!(p.reference_bits, 345);
    }

    #[test]
    fn negative_costs_rejected() {
        let m = CostModel { trigger_to_output: -1.0, ..CostModel::default() };
        assert!(m.validate().is_err());
    }
}
