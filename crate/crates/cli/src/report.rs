use std::fmt;

use obfol_core::foliation::{Counts, FoliationComplex, OtDiscReport};
use obfol_core::veering::ChainReport;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const NOT_A_PROOF: &str = "no witness was found among arcs up to this length; this is not a proof that the monodromy is right-veering";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    ConditionsFailed(Vec<String>),
    NoWitness { bound: usize },
    WitnessFound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified => f.write_str("overtwisted-disc-verified"),
            Verdict::ConditionsFailed(list) => write!(f, "conditions-failed: {}", list.join(",")),
            Verdict::NoWitness { .. } => f.write_str("no-witness-up-to-bound"),
            Verdict::WitnessFound => f.write_str("witness-found"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsTable {
    pub e_plus: usize,
    pub e_minus: usize,
    pub h_plus: usize,
    pub h_minus: usize,
    pub euler: i64,
}

impl From<Counts> for CountsTable {
    fn from(c: Counts) -> Self {
        CountsTable { e_plus: c.e_plus, e_minus: c.e_minus, h_plus: c.h_plus, h_minus: c.h_minus, euler: c.euler() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<CountsTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stated_counts: Option<CountsTable>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disclaimer: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    format!("{:x}", h.finalize())
}

impl RunReport {
    pub fn new(command: impl Into<String>, inputs_digest: String) -> Self {
        RunReport {
            command: command.into(),
            inputs_digest,
            checks: Vec::new(),
            counts: None,
            stated_counts: None,
            verdict: String::new(),
            bound: None,
            disclaimer: None,
            notes: Vec::new(),
        }
    }

    pub fn set_verdict(&mut self, v: Verdict) {
        if let Verdict::NoWitness { bound } = v {
            self.bound = Some(bound);
            self.disclaimer = Some(NOT_A_PROOF.into());
        }
        self.verdict = v.to_string();
    }

    pub fn add_chain(&mut self, r: &ChainReport) {
        for c in &r.conditions {
            let detail = match c.failed_at {
                Some(i) => format!("fails at {i}: {}", c.detail),
                None => c.detail.clone(),
            };
            self.checks.push(Check::new(&format!("chain {}", c.condition), c.passed, detail));
        }
    }

    /// Records the disc checks and sets the verdict from them.
    pub fn add_disc(&mut self, f: &FoliationComplex, r: &OtDiscReport) {
        self.checks.push(Check::new("(1) G-- is a tree", r.cond1.passed, r.cond1.detail.clone()));
        self.checks.push(Check::new("(2) G++ is a circle", r.cond2.passed, r.cond2.detail.clone()));
        self.checks.push(Check::new("(3) no c-circles", r.cond3.passed, r.cond3.detail.clone()));
        self.checks.push(Check::new("disc", r.is_disc, r.topology.clone()));
        self.counts = Some(f.counts().into());
        self.notes.extend(f.notes.iter().cloned());
        let mut failed: Vec<String> = r.failed().iter().map(|s| s.to_string()).collect();
        if !r.is_disc {
            failed.push("disc".into());
        }
        self.set_verdict(if failed.is_empty() { Verdict::Verified } else { Verdict::ConditionsFailed(failed) });
        debug_assert_eq!(self.verdict, r.verdict());
    }

    /// Overrides the verdict when one of the named checks failed.
    pub fn fail_extra(&mut self, names: &[&str]) {
        let failed: Vec<String> =
            self.checks.iter().filter(|c| !c.passed && names.contains(&c.name.as_str())).map(|c| c.name.clone()).collect();
        if !failed.is_empty() {
            self.set_verdict(Verdict::ConditionsFailed(failed));
        }
    }

    pub fn human(&self) -> String {
        let mut out = format!("{}\n", self.command);
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                out.push_str(&format!("  {mark} {}\n", c.name));
            } else {
                out.push_str(&format!("  {mark} {}: {}\n", c.name, c.detail));
            }
        }
        if let Some(c) = self.counts {
            out.push_str(&format!("  counts e+={} e-={} h+={} h-={} euler={}\n", c.e_plus, c.e_minus, c.h_plus, c.h_minus, c.euler));
        }
        if let Some(c) = self.stated_counts {
            out.push_str(&format!("  stated e+={} e-={} h+={} h-={} euler={}\n", c.e_plus, c.e_minus, c.h_plus, c.h_minus, c.euler));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out.push_str(&format!("  verdict: {}", self.verdict));
        if let Some(b) = self.bound {
            out.push_str(&format!(" (bound {b})"));
        }
        out.push('\n');
        if let Some(d) = &self.disclaimer {
            out.push_str(&format!("  {d}\n"));
        }
        out
    }
}
