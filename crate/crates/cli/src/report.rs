//! Outcome of a solving command, rendered as text or JSON.

use std::collections::BTreeSet;
use std::time::Duration;

use gnt_core::gnt::GntStats;
use gnt_core::{Atom, PartialInterpretation};
use serde::Serialize;

pub const EXIT_FOUND: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NONE: u8 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    ModelsFound,
    NoModels,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ModelJson {
    Total(Vec<String>),
    Partial {
        #[serde(rename = "true")]
        true_atoms: Vec<String>,
        undefined: Vec<String>,
        #[serde(rename = "false")]
        false_atoms: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StatsJson {
    pub candidates: u64,
    pub tests: u64,
    pub early_tests: u64,
    pub early_prunes: u64,
    pub choices: u64,
    pub conflicts: u64,
    pub expansions: u64,
}

impl From<GntStats> for StatsJson {
    fn from(s: GntStats) -> Self {
        StatsJson {
            candidates: s.candidates_covered,
            tests: s.minimal_tests,
            early_tests: s.early_tests,
            early_prunes: s.early_prunes,
            choices: s.choices,
            conflicts: s.conflicts,
            expansions: s.expansions,
        }
    }
}

/// Invariant: `outcome == ModelsFound` iff `models` is nonempty.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub outcome: Outcome,
    pub models: Vec<ModelJson>,
    /// Text lines in model order.
    #[serde(skip)]
    pub lines: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn names<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> Vec<String> {
    atoms.into_iter().map(|a| a.to_string()).collect()
}

pub fn render_total(m: &BTreeSet<Atom>) -> String {
    names(m).join(" ")
}

pub fn render_partial(m: &PartialInterpretation) -> String {
    format!(
        "T={{{}}} U={{{}}}",
        names(m.true_set()).join(" "),
        names(&m.undefined_set()).join(" ")
    )
}

impl RunReport {
    fn new(models: Vec<ModelJson>, lines: Vec<String>, stats: GntStats) -> Self {
        let outcome = if models.is_empty() {
            Outcome::NoModels
        } else {
            Outcome::ModelsFound
        };
        RunReport {
            outcome,
            models,
            lines,
            stats: Some(stats.into()),
            elapsed_ms: None,
            error: None,
        }
    }

    pub fn total<'a>(
        models: impl IntoIterator<Item = &'a BTreeSet<Atom>>,
        stats: GntStats,
    ) -> Self {
        let models: Vec<&BTreeSet<Atom>> = models.into_iter().collect();
        RunReport::new(
            models.iter().map(|m| ModelJson::Total(names(*m))).collect(),
            models.iter().map(|m| render_total(m)).collect(),
            stats,
        )
    }

    pub fn partial<'a>(
        models: impl IntoIterator<Item = &'a PartialInterpretation>,
        stats: GntStats,
    ) -> Self {
        let models: Vec<&PartialInterpretation> = models.into_iter().collect();
        RunReport::new(
            models
                .iter()
                .map(|m| ModelJson::Partial {
                    true_atoms: names(m.true_set()),
                    undefined: names(&m.undefined_set()),
                    false_atoms: names(m.false_set()),
                })
                .collect(),
            models.iter().map(|m| render_partial(m)).collect(),
            stats,
        )
    }

    pub fn error(message: String) -> Self {
        RunReport {
            outcome: Outcome::Error,
            models: Vec::new(),
            lines: Vec::new(),
            stats: None,
            elapsed_ms: None,
            error: Some(message),
        }
    }

    pub fn with_elapsed(mut self, elapsed: Option<Duration>) -> Self {
        self.elapsed_ms = elapsed.map(|d| d.as_millis());
        self
    }

    pub fn exit_code(&self) -> u8 {
        match self.outcome {
            Outcome::ModelsFound => EXIT_FOUND,
            Outcome::NoModels => EXIT_NONE,
            Outcome::Error => EXIT_ERROR,
        }
    }

    /// `none` is printed when there is no model.
    pub fn text(&self, none: &str, stats: bool) -> String {
        let mut out = String::new();
        if self.lines.is_empty() {
            out.push_str(none);
            out.push('\n');
        }
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        if let (true, Some(s)) = (stats, &self.stats) {
            for (k, v) in [
                ("candidates", s.candidates),
                ("tests", s.tests),
                ("early_tests", s.early_tests),
                ("early_prunes", s.early_prunes),
                ("choices", s.choices),
                ("conflicts", s.conflicts),
                ("expansions", s.expansions),
            ] {
                out.push_str(&format!("{k}={v}\n"));
            }
        }
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("elapsed_ms={ms}\n"));
        }
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("report serializes") + "\n"
    }
}
