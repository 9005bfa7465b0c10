//! Report types and emission. JSON reports serialize with full float
//! precision so that parse(emit(report)) round-trips exactly; CSV tables
//! and the human summary print floats with 12 significant digits.

use crate::config::{Command, VerifyLevel};
use charwalk_core::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Formats a float with 12 significant digits (scientific, locale-free).
pub fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: String,
    pub pass: bool,
    pub measured: f64,
    pub threshold: f64,
}

impl Verdict {
    pub fn line(&self) -> String {
        format!(
            "{} {} measured={} threshold={}",
            self.criterion,
            if self.pass { "PASS" } else { "FAIL" },
            fmt_sig12(self.measured),
            fmt_sig12(self.threshold)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec_version: String,
    pub inputs: Command,
    pub outputs: CommandOutput,
    pub verdicts: Vec<Verdict>,
    pub wall_time_seconds: f64,
}

impl ExperimentReport {
    pub fn new(inputs: Command, outputs: CommandOutput, verdicts: Vec<Verdict>) -> Self {
        ExperimentReport {
            spec_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            outputs,
            verdicts,
            wall_time_seconds: 0.0,
        }
    }

    pub fn all_verdicts_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// JSON with the wall time zeroed: the determinism contract compares
    /// payloads net of timing.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        clone.wall_time_seconds = 0.0;
        serde_json::to_string_pretty(&clone).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_json(&self, path: &std::path::Path) -> Result<()> {
        let mut file = std::fs::File::create(path)
            .map_err(|e| Error::invalid(format!("cannot create {}: {e}", path.display())))?;
        file.write_all(self.to_json().as_bytes())
            .and_then(|_| file.write_all(b"\n"))
            .map_err(|e| Error::invalid(format!("write failed: {e}")))
    }

    /// Command-specific flat table, RFC-4180 style: header row, comma
    /// separators, decimal dots, no wall time.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        self.outputs.write_csv(&mut writer);
        String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv is utf8")
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_csv())
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawRow {
    pub a: u64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharDistRow {
    pub a: u64,
    pub count: u64,
    pub frequency: f64,
    pub deviation_from_uniform: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub pattern: String,
    pub count: u64,
    pub expected: f64,
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeWalkRow {
    pub a: u64,
    pub count: u64,
    pub frequency: f64,
    pub model_probability: f64,
    pub abs_discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternFractionRow {
    pub pattern: String,
    pub count: u64,
    pub fraction: f64,
    /// fraction·2^k − 1.
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: String,
    pub description: String,
    pub pass: bool,
    pub measured: f64,
    pub threshold: f64,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {} {} measured={} threshold={} ({:.2}s)",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.description,
            fmt_sig12(self.measured),
            fmt_sig12(self.threshold),
            self.seconds
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CommandOutput {
    WalkExact {
        m: u64,
        k: u64,
        rows: Vec<LawRow>,
    },
    WalkMc {
        estimate: f64,
        standard_error: f64,
        trials: u64,
        exact: f64,
        abs_difference: f64,
    },
    CharDist {
        p: u64,
        m: u64,
        rows: Vec<CharDistRow>,
        variance_from_uniform: f64,
        max_abs_deviation: f64,
    },
    BlockCensus {
        p: u64,
        block_len: u32,
        rows: Vec<CensusRow>,
        blocks_total: u64,
        excluded_blocks: u64,
        model_prediction: f64,
        max_abs_relative_deviation: f64,
        within_advisory_regime: bool,
    },
    PrimeWalk {
        limit: u64,
        k: usize,
        m: u64,
        rows: Vec<PrimeWalkRow>,
        included_prime_count: u64,
        excluded_prime_count: u64,
        prime_count_to_limit: u64,
        max_abs_discrepancy: f64,
        k_advisory_cap: Option<f64>,
        within_k_advisory: Option<bool>,
        pattern_rows: Option<Vec<PatternFractionRow>>,
    },
    WeilSingle {
        p: u64,
        degree_sum: u32,
        interval_start: u64,
        interval_length: u64,
        value_re: f64,
        value_im: f64,
        modulus_of_sum: f64,
        bound: f64,
        margin: f64,
        complete: bool,
    },
    WeilSweep {
        max_p: u64,
        checks: u64,
        min_margin: f64,
        min_margin_case: String,
        all_nonnegative: bool,
    },
    Verify {
        level: VerifyLevel,
        criteria: Vec<CriterionResult>,
    },
}

impl CommandOutput {
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) {
        match self {
            CommandOutput::WalkExact { rows, .. } => {
                w.write_record(["a", "probability"]).unwrap();
                for row in rows {
                    w.write_record(&[row.a.to_string(), fmt_sig12(row.probability)])
                        .unwrap();
                }
            }
            CommandOutput::WalkMc {
                estimate,
                standard_error,
                trials,
                exact,
                abs_difference,
            } => {
                w.write_record([
                    "estimate",
                    "standard_error",
                    "trials",
                    "exact",
                    "abs_difference",
                ])
                .unwrap();
                w.write_record(&[
                    fmt_sig12(*estimate),
                    fmt_sig12(*standard_error),
                    trials.to_string(),
                    fmt_sig12(*exact),
                    fmt_sig12(*abs_difference),
                ])
                .unwrap();
            }
            CommandOutput::CharDist { rows, .. } => {
                w.write_record(["a", "count", "frequency", "deviation_from_uniform"])
                    .unwrap();
                for row in rows {
                    w.write_record(&[
                        row.a.to_string(),
                        row.count.to_string(),
                        fmt_sig12(row.frequency),
                        fmt_sig12(row.deviation_from_uniform),
                    ])
                    .unwrap();
                }
            }
            CommandOutput::BlockCensus { rows, .. } => {
                w.write_record(["pattern", "count", "expected", "relative_deviation"])
                    .unwrap();
                for row in rows {
                    w.write_record(&[
                        row.pattern.clone(),
                        row.count.to_string(),
                        fmt_sig12(row.expected),
                        fmt_sig12(row.relative_deviation),
                    ])
                    .unwrap();
                }
            }
            CommandOutput::PrimeWalk {
                rows, pattern_rows, ..
            } => {
                // with --patterns the census table is the requested output
                if let Some(patterns) = pattern_rows {
                    w.write_record(["pattern", "count", "fraction", "relative_deviation"])
                        .unwrap();
                    for row in patterns {
                        w.write_record(&[
                            row.pattern.clone(),
                            row.count.to_string(),
                            fmt_sig12(row.fraction),
                            fmt_sig12(row.relative_deviation),
                        ])
                        .unwrap();
                    }
                } else {
                    w.write_record([
                        "a",
                        "count",
                        "frequency",
                        "model_probability",
                        "abs_discrepancy",
                    ])
                    .unwrap();
                    for row in rows {
                        w.write_record(&[
                            row.a.to_string(),
                            row.count.to_string(),
                            fmt_sig12(row.frequency),
                            fmt_sig12(row.model_probability),
                            fmt_sig12(row.abs_discrepancy),
                        ])
                        .unwrap();
                    }
                }
            }
            CommandOutput::WeilSingle {
                value_re,
                value_im,
                modulus_of_sum,
                bound,
                margin,
                complete,
                ..
            } => {
                w.write_record([
                    "value_re",
                    "value_im",
                    "modulus_of_sum",
                    "bound",
                    "margin",
                    "complete",
                ])
                .unwrap();
                w.write_record(&[
                    fmt_sig12(*value_re),
                    fmt_sig12(*value_im),
                    fmt_sig12(*modulus_of_sum),
                    fmt_sig12(*bound),
                    fmt_sig12(*margin),
                    complete.to_string(),
                ])
                .unwrap();
            }
            CommandOutput::WeilSweep {
                max_p,
                checks,
                min_margin,
                min_margin_case,
                all_nonnegative,
            } => {
                w.write_record([
                    "max_p",
                    "checks",
                    "min_margin",
                    "min_margin_case",
                    "all_nonnegative",
                ])
                .unwrap();
                w.write_record(&[
                    max_p.to_string(),
                    checks.to_string(),
                    fmt_sig12(*min_margin),
                    min_margin_case.clone(),
                    all_nonnegative.to_string(),
                ])
                .unwrap();
            }
            CommandOutput::Verify { criteria, .. } => {
                w.write_record(["criterion", "pass", "measured", "threshold", "seconds"])
                    .unwrap();
                for c in criteria {
                    w.write_record(&[
                        c.id.clone(),
                        c.pass.to_string(),
                        fmt_sig12(c.measured),
                        fmt_sig12(c.threshold),
                        format!("{:.3}", c.seconds),
                    ])
                    .unwrap();
                }
            }
        }
    }

    /// Human-readable summary lines.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        match self {
            CommandOutput::WalkExact { m, k, rows } => {
                out.push_str(&format!("exact {k}-step law mod {m}\n"));
                for row in rows {
                    out.push_str(&format!("  a={} p={}\n", row.a, fmt_sig12(row.probability)));
                }
            }
            CommandOutput::WalkMc {
                estimate,
                standard_error,
                trials,
                exact,
                abs_difference,
            } => {
                out.push_str(&format!(
                    "monte carlo over {trials} trials: {} +/- {}\n",
                    fmt_sig12(*estimate),
                    fmt_sig12(*standard_error)
                ));
                out.push_str(&format!(
                    "closed form: {} (|diff| = {})\n",
                    fmt_sig12(*exact),
                    fmt_sig12(*abs_difference)
                ));
            }
            CommandOutput::CharDist {
                p,
                m,
                rows,
                variance_from_uniform,
                max_abs_deviation,
            } => {
                out.push_str(&format!("residue distribution mod {m} over p = {p}\n"));
                for row in rows {
                    out.push_str(&format!(
                        "  a={} count={} freq={}\n",
                        row.a,
                        row.count,
                        fmt_sig12(row.frequency)
                    ));
                }
                out.push_str(&format!(
                    "variance from uniform: {}\nmax |deviation|: {}\n",
                    fmt_sig12(*variance_from_uniform),
                    fmt_sig12(*max_abs_deviation)
                ));
            }
            CommandOutput::BlockCensus {
                p,
                block_len,
                rows,
                blocks_total,
                excluded_blocks,
                model_prediction,
                max_abs_relative_deviation,
                within_advisory_regime,
            } => {
                out.push_str(&format!(
                    "pattern census p={p} L={block_len}: {blocks_total} blocks, {excluded_blocks} excluded\n"
                ));
                out.push_str(&format!(
                    "model prediction per pattern: {}\n",
                    fmt_sig12(*model_prediction)
                ));
                for row in rows {
                    out.push_str(&format!(
                        "  {} count={} rel_dev={}\n",
                        row.pattern,
                        row.count,
                        fmt_sig12(row.relative_deviation)
                    ));
                }
                out.push_str(&format!(
                    "max |relative deviation|: {}\nadvisory block-length regime: {}\n",
                    fmt_sig12(*max_abs_relative_deviation),
                    within_advisory_regime
                ));
            }
            CommandOutput::PrimeWalk {
                limit,
                k,
                m,
                rows,
                included_prime_count,
                excluded_prime_count,
                max_abs_discrepancy,
                k_advisory_cap,
                pattern_rows,
                ..
            } => {
                out.push_str(&format!(
                    "walk of length {k} mod {m} over primes <= {limit} ({included_prime_count} used, {excluded_prime_count} excluded)\n"
                ));
                for row in rows {
                    out.push_str(&format!(
                        "  a={} freq={} model={}\n",
                        row.a,
                        fmt_sig12(row.frequency),
                        fmt_sig12(row.model_probability)
                    ));
                }
                out.push_str(&format!(
                    "max |frequency - model|: {}\n",
                    fmt_sig12(*max_abs_discrepancy)
                ));
                if let Some(cap) = k_advisory_cap {
                    out.push_str(&format!("advisory length cap: {}\n", fmt_sig12(*cap)));
                }
                if let Some(patterns) = pattern_rows {
                    out.push_str(&format!("pattern fractions ({} patterns)\n", patterns.len()));
                    for row in patterns {
                        out.push_str(&format!(
                            "  {} fraction={} rel_dev={}\n",
                            row.pattern,
                            fmt_sig12(row.fraction),
                            fmt_sig12(row.relative_deviation)
                        ));
                    }
                }
            }
            CommandOutput::WeilSingle {
                p,
                degree_sum,
                interval_start,
                interval_length,
                value_re,
                value_im,
                modulus_of_sum,
                bound,
                margin,
                complete,
            } => {
                out.push_str(&format!(
                    "twisted sum p={p} D={degree_sum} I=[{interval_start}, {interval_start}+{interval_length})\n"
                ));
                out.push_str(&format!(
                    "S = {} + {}i, |S| = {}\n",
                    fmt_sig12(*value_re),
                    fmt_sig12(*value_im),
                    fmt_sig12(*modulus_of_sum)
                ));
                out.push_str(&format!(
                    "{} bound = {}, margin = {}\n",
                    if *complete { "complete" } else { "incomplete" },
                    fmt_sig12(*bound),
                    fmt_sig12(*margin)
                ));
            }
            CommandOutput::WeilSweep {
                max_p,
                checks,
                min_margin,
                min_margin_case,
                all_nonnegative,
            } => {
                out.push_str(&format!(
                    "sweep p <= {max_p}: {checks} checks, min margin {} ({})\n",
                    fmt_sig12(*min_margin),
                    min_margin_case
                ));
                out.push_str(&format!("all margins nonnegative: {all_nonnegative}\n"));
            }
            CommandOutput::Verify { criteria, .. } => {
                for c in criteria {
                    out.push_str(&c.line());
                    out.push('\n');
                }
                let passed = criteria.iter().filter(|c| c.pass).count();
                out.push_str(&format!("{passed}/{} criteria passed\n", criteria.len()));
            }
        }
        out
    }
}
