//! JSON reports: `{system, method, probes, versions}`.

use serde::Serialize;

use ctrslab_core::harness::{CheckReport, CorpusReport, DerivationStep, ProbeReport, Verdict, Witness};
use ctrslab_core::EngineCaps;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CapsJson {
    pub max_steps: usize,
    pub max_nodes: usize,
    pub max_level: usize,
    pub max_term_size: usize,
}

impl From<EngineCaps> for CapsJson {
    fn from(c: EngineCaps) -> Self {
        CapsJson {
            max_steps: c.max_steps,
            max_nodes: c.max_nodes,
            max_level: c.max_level,
            max_term_size: c.max_term_size,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EdgeJson {
    pub from: String,
    /// 1-based argument indices from the root.
    pub position: Vec<usize>,
    pub rule: String,
    pub to: String,
}

impl From<&DerivationStep> for EdgeJson {
    fn from(s: &DerivationStep) -> Self {
        EdgeJson {
            from: s.from.to_string(),
            position: s.position.path().iter().map(|i| i + 1).collect(),
            rule: s.rule.to_string(),
            to: s.to.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessJson {
    pub seed: String,
    pub target: String,
    pub image: String,
    pub target_derivation: Vec<EdgeJson>,
    pub source_derivation: Vec<EdgeJson>,
}

impl From<&Witness> for WitnessJson {
    fn from(w: &Witness) -> Self {
        WitnessJson {
            seed: w.seed.to_string(),
            target: w.target.to_string(),
            image: w.image.to_string(),
            target_derivation: w.target_derivation.iter().map(EdgeJson::from).collect(),
            source_derivation: w.source_derivation.iter().map(EdgeJson::from).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ProbeJson {
    pub name: String,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<WitnessJson>,
    pub caps: CapsJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub target_nodes: usize,
    pub source_nodes: usize,
    pub phi_violations: usize,
}

impl ProbeJson {
    fn from_probe(p: &ProbeReport, caps: EngineCaps, prefix: &str) -> Self {
        ProbeJson {
            name: format!("{prefix}{}", p.name),
            verdict: p.verdict.as_str(),
            witness: p.witnesses.iter().map(WitnessJson::from).collect(),
            caps: caps.into(),
            note: p.note.clone(),
            skipped: None,
            target_nodes: p.stats.target_nodes,
            source_nodes: p.stats.source_nodes,
            phi_violations: p.stats.phi_violations,
        }
    }

    fn skipped(name: String, reason: &str, caps: EngineCaps) -> Self {
        ProbeJson {
            name,
            verdict: "skipped",
            witness: Vec::new(),
            caps: caps.into(),
            note: None,
            skipped: Some(reason.to_string()),
            target_nodes: 0,
            source_nodes: 0,
            phi_violations: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Versions {
    pub ctrslab: &'static str,
    pub ctrslab_core: &'static str,
    pub schema: u32,
}

impl Default for Versions {
    fn default() -> Self {
        Versions {
            ctrslab: env!("CARGO_PKG_VERSION"),
            ctrslab_core: ctrslab_core::VERSION,
            schema: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ReportJson {
    pub system: String,
    pub method: String,
    pub probes: Vec<ProbeJson>,
    pub versions: Versions,
}

impl ReportJson {
    pub fn new(system: &str, method: &str) -> Self {
        ReportJson {
            system: system.to_string(),
            method: method.to_string(),
            probes: Vec::new(),
            versions: Versions::default(),
        }
    }

    pub fn push_check(&mut self, report: &CheckReport, prefix: &str) {
        for p in &report.probes {
            self.probes.push(ProbeJson::from_probe(p, report.caps, prefix));
        }
        for (name, reason) in &report.skipped {
            self.probes
                .push(ProbeJson::skipped(format!("{prefix}{name}"), reason, report.caps));
        }
    }

    pub fn from_check(report: &CheckReport) -> Self {
        let mut out = ReportJson::new(&report.system, &report.method);
        out.push_check(report, "");
        out
    }

    pub fn from_corpus(name: &str, corpus: &CorpusReport) -> Self {
        let mut out = ReportJson::new(name, "all");
        for r in &corpus.reports {
            out.push_check(r, &format!("{}: ", r.system));
        }
        out
    }

    /// Weakest verdict over the non-skipped probes.
    pub fn verdict(&self) -> Verdict {
        self.probes
            .iter()
            .filter_map(|p| match p.verdict {
                "refuted" => Some(Verdict::Refuted),
                "unverified-caps" => Some(Verdict::UnverifiedCaps),
                _ => None,
            })
            .fold(Verdict::Verified, Verdict::combine)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Process exit code for a verdict.
pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Verified => 0,
        Verdict::Refuted => 1,
        Verdict::UnverifiedCaps => 2,
    }
}
