//! Attribution reports: a fixed-schema JSON document and a plain-text table.

use std::fmt::Write as _;

use obshap::shapley::SAMPLING_ALGORITHM;
use obshap::{Attribution64, AxiomReport, Method};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MethodDocument {
    Exact,
    Sampled {
        algorithm: String,
        num_permutations: u64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensorReport {
    pub name: String,
    pub standalone: f64,
    pub shapley: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub share_of_total: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyDocument {
    pub shapley_sum: f64,
    pub grand_value: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryDocument {
    pub first: String,
    pub second: String,
    pub difference: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DummyDocument {
    pub sensor: String,
    pub shapley: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomDocument {
    pub efficiency: EfficiencyDocument,
    pub symmetric_pairs: Vec<SymmetryDocument>,
    pub dummies: Vec<DummyDocument>,
    pub exhaustive: bool,
    pub all_passed: bool,
}

impl AxiomDocument {
    pub fn new(report: &AxiomReport<f64>, names: &[String]) -> Self {
        Self {
            efficiency: EfficiencyDocument {
                shapley_sum: report.efficiency.shapley_sum,
                grand_value: report.efficiency.grand_value,
                residual: report.efficiency.residual,
                tolerance: report.efficiency.tolerance,
                passed: report.efficiency.passed,
            },
            symmetric_pairs: report
                .symmetric_pairs
                .iter()
                .map(|c| SymmetryDocument {
                    first: names[c.first].clone(),
                    second: names[c.second].clone(),
                    difference: c.difference,
                    passed: c.passed,
                })
                .collect(),
            dummies: report
                .dummies
                .iter()
                .map(|c| DummyDocument {
                    sensor: names[c.sensor].clone(),
                    shapley: c.shapley,
                    passed: c.passed,
                })
                .collect(),
            exhaustive: report.exhaustive,
            all_passed: report.all_passed(),
        }
    }
}

/// Everything `analyze` prints. Key order and nesting are part of the
/// output contract.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub model_name: String,
    pub metric: String,
    pub horizon_samples: usize,
    pub method: MethodDocument,
    pub per_sensor: Vec<SensorReport>,
    pub grand_value: f64,
    pub efficiency_residual: f64,
    pub observable: bool,
    pub axiom_report: Option<AxiomDocument>,
}

impl ReportDocument {
    pub fn new(model_name: &str, result: &Attribution64, observable: bool, axioms: Option<&AxiomReport<f64>>) -> Self {
        let shares = result.shares();
        let names: Vec<String> = result.sensors.iter().map(|s| s.name.clone()).collect();
        Self {
            model_name: model_name.to_owned(),
            metric: result.metric.name().to_owned(),
            horizon_samples: result.horizon_samples,
            method: match result.method {
                Method::Exact => MethodDocument::Exact,
                Method::Sampled { num_permutations, seed } => MethodDocument::Sampled {
                    algorithm: SAMPLING_ALGORITHM.to_owned(),
                    num_permutations,
                    seed,
                },
            },
            per_sensor: result
                .sensors
                .iter()
                .enumerate()
                .map(|(i, s)| SensorReport {
                    name: s.name.clone(),
                    standalone: s.standalone,
                    shapley: s.shapley,
                    share_of_total: shares.as_ref().map(|v| v[i]),
                    standard_error: s.standard_error,
                })
                .collect(),
            grand_value: result.grand_value,
            efficiency_residual: result.efficiency_residual,
            observable,
            axiom_report: axioms.map(|a| AxiomDocument::new(a, &names)),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// Sensor | Value Function | Standalone Value | Shapley Value | Share.
    pub fn to_table(&self, metric_label: &str) -> String {
        let mut out = String::new();
        let method = match &self.method {
            MethodDocument::Exact => "exact".to_owned(),
            MethodDocument::Sampled {
                num_permutations, seed, ..
            } => format!("sampled ({num_permutations} permutations, seed {seed})"),
        };
        let _ = writeln!(
            out,
            "model: {}  horizon_samples: {}  metric: {}  method: {}",
            self.model_name, self.horizon_samples, self.metric, method
        );
        let _ = writeln!(out);
        let name_w = self.per_sensor.iter().map(|s| s.name.len()).max().unwrap_or(0).max(6);
        let _ = writeln!(
            out,
            "{:<name_w$}  {:<16}  {:>16}  {:>16}  {:>8}",
            "Sensor", "Value Function", "Standalone Value", "Shapley Value", "Share"
        );
        for s in &self.per_sensor {
            let share = s
                .share_of_total
                .map_or_else(|| "-".to_owned(), |x| format!("{:.2}%", 100.0 * x));
            let _ = writeln!(
                out,
                "{:<name_w$}  {:<16}  {:>16.4}  {:>16.4}  {:>8}",
                s.name, metric_label, s.standalone, s.shapley, share
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "grand value v(N):     {:.4}", self.grand_value);
        let _ = writeln!(out, "efficiency residual:  {:.3e}", self.efficiency_residual);
        let _ = writeln!(out, "fully observable:     {}", yes_no(self.observable));
        if let Some(a) = &self.axiom_report {
            let pairs: Vec<String> = a
                .symmetric_pairs
                .iter()
                .map(|p| format!("{}~{} {}", p.first, p.second, ok(p.passed)))
                .collect();
            let dummies: Vec<String> = a.dummies.iter().map(|d| format!("{} {}", d.sensor, ok(d.passed))).collect();
            let _ = writeln!(
                out,
                "axioms:               efficiency {}; symmetric pairs: {}; dummies: {}",
                ok(a.efficiency.passed),
                list_or_none(&pairs),
                list_or_none(&dummies)
            );
        }
        out
    }
}

pub(crate) fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn list_or_none(v: &[String]) -> String {
    if v.is_empty() {
        "none".to_owned()
    } else {
        v.join(", ")
    }
}
