//! Executable soundness and completeness checks over bounded searches.
//!
//! Verdicts never claim more than the searches show: a target term whose
//! back-translation is missing from a truncated source search is
//! `UnverifiedCaps`, and only an exhaustive source search yields `Refuted`.
//! Soundness is checked on every explored target term; when the target
//! search is truncated the probe says so in its note.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{determinism_violation, is_ultra_wll, is_wll_system};
use crate::engine::{trs_search, ConditionalEngine, DerivationGraph, EngineCaps, StepProof};
use crate::error::{EngineError, TransformError};
use crate::phi::{phi, DEFAULT_PHI_CAP};
use crate::system::{Condition, RewriteSystem, Rule};
use crate::term::{match_term, Position, Symbol, Term, Var};
use crate::transform::{linearize, sr_transform, sr_unchecked, unravel, TransformContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Verified,
    UnverifiedCaps,
    Refuted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::UnverifiedCaps => "unverified-caps",
            Verdict::Refuted => "refuted",
        }
    }

    /// The weaker of two verdicts.
    pub fn combine(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiInit {
    Identity,
    GuardBar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiBack {
    PartialIdentity,
    Hat,
}

/// A source system, its transformation and the initialization and
/// back-translation mappings relating them.
#[derive(Clone, Debug)]
pub struct SimulationPair {
    pub name: String,
    pub source: RewriteSystem,
    /// `U(R)`, `SR(R)` or `SR(T(R))`.
    pub ctx: TransformContext,
    pub phi_init: PhiInit,
    pub psi_back: PsiBack,
}

impl SimulationPair {
    pub fn unraveling(source: &RewriteSystem) -> Result<Self, TransformError> {
        Ok(SimulationPair {
            name: "u".into(),
            source: source.clone(),
            ctx: unravel(source)?,
            phi_init: PhiInit::Identity,
            psi_back: PsiBack::PartialIdentity,
        })
    }

    pub fn sr(source: &RewriteSystem) -> Result<Self, TransformError> {
        Ok(SimulationPair {
            name: "sr".into(),
            source: source.clone(),
            ctx: sr_transform(source)?,
            phi_init: PhiInit::GuardBar,
            psi_back: PsiBack::Hat,
        })
    }

    /// `SR(T(R))` for a WLL system `R`.
    pub fn sr_linearized(source: &RewriteSystem) -> Result<Self, TransformError> {
        let t = linearize(source)?;
        Ok(SimulationPair {
            name: "sr∘t".into(),
            source: source.clone(),
            ctx: sr_transform(&t.target)?,
            phi_init: PhiInit::GuardBar,
            psi_back: PsiBack::Hat,
        })
    }

    pub fn target(&self) -> &RewriteSystem {
        &self.ctx.target
    }

    pub fn init(&self, s: &Term) -> Term {
        match self.phi_init {
            PhiInit::Identity => s.clone(),
            PhiInit::GuardBar => self.ctx.init(s),
        }
    }

    /// `ψ(t)`, defined only on terms that translate back into the source
    /// signature.
    pub fn back(&self, t: &Term) -> Option<Term> {
        let image = match self.psi_back {
            PsiBack::PartialIdentity => t.clone(),
            PsiBack::Hat => self.ctx.hat(t)?,
        };
        self.source.signature().covers(&image).then_some(image)
    }

    /// True iff soundness is known to hold for the source class.
    pub fn soundness_in_class(&self) -> bool {
        is_wll_system(&self.source)
    }
}

/// One rewrite step of a recorded derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub from: Term,
    pub position: Position,
    pub rule: Arc<str>,
    pub to: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub seed: Term,
    /// The target-side term (`t` for soundness, `φ(t)` for completeness).
    pub target: Term,
    /// The source-side term (`ψ(t)` or `t`).
    pub image: Term,
    pub target_derivation: Vec<DerivationStep>,
    pub source_derivation: Vec<DerivationStep>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProbeStats {
    pub target_nodes: usize,
    pub source_nodes: usize,
    pub target_truncated: bool,
    pub source_truncated: bool,
    /// Completeness: source steps simulated constructively / by search.
    pub simulated: usize,
    pub searched: usize,
    /// SR pairs: terms `t` with `hat(t) ∉ Φ(t)` among all harness terms.
    pub phi_violations: usize,
    pub phi_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub name: String,
    pub seed: Term,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub note: Option<String>,
    pub stats: ProbeStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub system: String,
    pub method: String,
    pub caps: EngineCaps,
    pub probes: Vec<ProbeReport>,
    /// Probes not run, with the reason.
    pub skipped: Vec<(String, String)>,
}

impl CheckReport {
    pub fn new(system: &str, method: &str, caps: EngineCaps) -> Self {
        CheckReport {
            system: system.to_string(),
            method: method.to_string(),
            caps,
            probes: Vec::new(),
            skipped: Vec::new(),
        }
    }

    /// The weakest verdict over all probes; `Verified` when there are none.
    pub fn verdict(&self) -> Verdict {
        self.probes
            .iter()
            .fold(Verdict::Verified, |v, p| v.combine(p.verdict))
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.probes.extend(other.probes);
        self.skipped.extend(other.skipped);
    }
}

const MAX_WITNESSES: usize = 8;

fn path(graph: &DerivationGraph, t: &Term) -> Vec<DerivationStep> {
    graph
        .path_to(t)
        .unwrap_or_default()
        .into_iter()
        .map(|e| DerivationStep {
            from: graph.node(e.from).clone(),
            position: e.position.clone(),
            rule: e.rule.clone(),
            to: graph.node(e.to).clone(),
        })
        .collect()
}

/// Counts `hat(t) ∉ Φ(t)` over `terms`; returns (checked, violations).
fn hat_in_phi(pair: &SimulationPair, terms: impl IntoIterator<Item = Term>) -> (usize, usize) {
    if pair.psi_back != PsiBack::Hat || pair.ctx.unraveling.is_none() {
        return (0, 0);
    }
    let mut checked = 0;
    let mut violations = 0;
    for t in terms {
        let Some(h) = pair.ctx.hat(&t) else {
            violations += 1;
            continue;
        };
        match phi(&t, &pair.ctx, DEFAULT_PHI_CAP) {
            Ok(res) if res.terms.contains(&h) => checked += 1,
            Ok(res) if res.truncated => {}
            _ => {
                checked += 1;
                violations += 1;
            }
        }
    }
    (checked, violations)
}

/// `φ(s) →* t` implies `s →* ψ(t)`, for every explored `t`.
pub fn check_soundness(
    pair: &SimulationPair,
    seeds: &[Term],
    caps: EngineCaps,
) -> Result<CheckReport, EngineError> {
    let mut report = CheckReport::new(&pair.source.to_string(), &pair.name, caps);
    let mut engine = ConditionalEngine::new(&pair.source, caps)?;
    for seed in seeds {
        let start = pair.init(seed);
        let target = trs_search(pair.target(), &start, caps, |_| false)?;
        let source = engine.reachable(seed);
        let mut images: Vec<(Term, Term)> = Vec::new();
        let mut seen = BTreeSet::new();
        for t in target.nodes() {
            if let Some(img) = pair.back(t) {
                if seen.insert(img.clone()) {
                    images.push((t.clone(), img));
                }
            }
        }
        let mut verdict = Verdict::Verified;
        let mut witnesses = Vec::new();
        for (t, img) in &images {
            let found = source.contains(img);
            let v = if found {
                Verdict::Verified
            } else if source.is_complete() {
                Verdict::Refuted
            } else {
                Verdict::UnverifiedCaps
            };
            verdict = verdict.combine(v);
            let interesting = match v {
                Verdict::Verified => source.is_normal_form(source.node_id(img).unwrap()),
                _ => true,
            };
            if interesting && witnesses.len() < MAX_WITNESSES {
                witnesses.push(Witness {
                    seed: seed.clone(),
                    target: t.clone(),
                    image: img.clone(),
                    target_derivation: path(&target, t),
                    source_derivation: if found { path(&source, img) } else { Vec::new() },
                });
            }
        }
        let (phi_checked, phi_violations) = hat_in_phi(pair, target.nodes().iter().cloned());
        let mut notes = Vec::new();
        if !target.is_complete() {
            notes.push(format!(
                "target search truncated at {} terms; verdict covers the explored terms",
                target.len()
            ));
        }
        if !pair.soundness_in_class() {
            notes.push("out-of-class observation: source system is not WLL".to_string());
        }
        report.probes.push(ProbeReport {
            name: format!("soundness {seed}"),
            seed: seed.clone(),
            verdict,
            witnesses,
            note: (!notes.is_empty()).then(|| notes.join("; ")),
            stats: ProbeStats {
                target_nodes: target.len(),
                source_nodes: source.len(),
                target_truncated: !target.is_complete(),
                source_truncated: !source.is_complete(),
                phi_checked,
                phi_violations,
                ..ProbeStats::default()
            },
        });
    }
    Ok(report)
}

/// Every explored source step `u → v` is simulated by `φ(u) →* φ(v)`.
pub fn check_completeness(
    pair: &SimulationPair,
    seeds: &[Term],
    caps: EngineCaps,
) -> Result<CheckReport, EngineError> {
    let mut report = CheckReport::new(&pair.source.to_string(), &pair.name, caps);
    let mut engine = ConditionalEngine::new(&pair.source, caps)?;
    for seed in seeds {
        let source = engine.reachable(seed);
        let mut stats = ProbeStats {
            source_nodes: source.len(),
            source_truncated: !source.is_complete(),
            ..ProbeStats::default()
        };
        let mut verdict = Verdict::Verified;
        let mut simulations: Vec<Option<Vec<DerivationStep>>> = Vec::new();
        let mut harness_terms = BTreeSet::new();
        let mut failures = Vec::new();
        for e in source.edges() {
            let (u, v) = (source.node(e.from), source.node(e.to));
            let simulated = engine
                .prove(u, &e.position, &e.rule, v, caps.max_level)
                .and_then(|proof| simulate(pair, &proof));
            match simulated {
                Some(steps) => {
                    stats.simulated += 1;
                    harness_terms.extend(steps.iter().map(|s| s.to.clone()));
                    simulations.push(Some(steps));
                }
                None => {
                    stats.searched += 1;
                    let goal = pair.init(v);
                    let g = trs_search(pair.target(), &pair.init(u), caps, |t| *t == goal)?;
                    stats.target_nodes += g.len();
                    if g.contains(&goal) {
                        simulations.push(Some(path(&g, &goal)));
                    } else {
                        verdict = verdict.combine(if g.is_complete() {
                            Verdict::Refuted
                        } else {
                            Verdict::UnverifiedCaps
                        });
                        failures.push(DerivationStep {
                            from: u.clone(),
                            position: e.position.clone(),
                            rule: e.rule.clone(),
                            to: v.clone(),
                        });
                        simulations.push(None);
                    }
                }
            }
        }
        let mut witnesses = Vec::new();
        for (id, t) in source.nodes().iter().enumerate() {
            if witnesses.len() >= MAX_WITNESSES || !source.is_normal_form(id) {
                continue;
            }
            let src = path(&source, t);
            let mut tgt = Vec::new();
            for e in source.path_to(t).unwrap_or_default() {
                let idx = source
                    .edges()
                    .iter()
                    .position(|x| core::ptr::eq(x, e))
                    .expect("edge of this graph");
                if let Some(steps) = &simulations[idx] {
                    tgt.extend(steps.iter().cloned());
                }
            }
            witnesses.push(Witness {
                seed: seed.clone(),
                target: pair.init(t),
                image: t.clone(),
                target_derivation: tgt,
                source_derivation: src,
            });
        }
        // A step that could not be simulated: the source side is the step
        // itself, the target side is empty.
        for step in failures.into_iter().take(MAX_WITNESSES) {
            witnesses.push(Witness {
                seed: seed.clone(),
                target: pair.init(&step.to),
                image: step.to.clone(),
                target_derivation: Vec::new(),
                source_derivation: alloc::vec![step],
            });
        }
        let (phi_checked, phi_violations) = hat_in_phi(pair, harness_terms);
        stats.phi_checked = phi_checked;
        stats.phi_violations = phi_violations;
        report.probes.push(ProbeReport {
            name: format!("completeness {seed}"),
            seed: seed.clone(),
            verdict,
            witnesses,
            note: (!source.is_complete()).then(|| {
                format!(
                    "source search truncated at {} terms; verdict covers the explored steps",
                    source.len()
                )
            }),
            stats,
        });
    }
    Ok(report)
}

/// Builds the target derivation `φ(u) →* φ(v)` for one proven source step
/// and replays it, validating every step. `None` if any step fails to
/// apply or the end term differs.
pub fn simulate(pair: &SimulationPair, proof: &StepProof) -> Option<Vec<DerivationStep>> {
    let mut plan = Vec::new();
    match pair.phi_init {
        PhiInit::Identity => plan_u(&pair.ctx, proof, &Position::root(), &mut plan)?,
        PhiInit::GuardBar => plan_sr(&pair.ctx, proof, &Position::root(), &mut plan)?,
    }
    let steps = replay(pair.target(), &pair.init(&proof.from), &plan)?;
    let end = steps.last().map_or_else(|| pair.init(&proof.from), |s| s.to.clone());
    (end == pair.init(&proof.to)).then_some(steps)
}

fn concat(base: &Position, p: &Position) -> Position {
    let mut path = base.path().to_vec();
    path.extend_from_slice(p.path());
    Position::new(path)
}

fn chain_label(rule: &str, j: usize) -> Arc<str> {
    Arc::from(format!("{rule}.{j}").as_str())
}

fn plan_u(
    ctx: &TransformContext,
    proof: &StepProof,
    base: &Position,
    plan: &mut Vec<(Position, Arc<str>)>,
) -> Option<()> {
    let p = concat(base, &proof.position);
    let k = ctx.source.rule(&proof.rule)?.conditions.len();
    if k == 0 {
        plan.push((p, proof.rule.clone()));
        return Some(());
    }
    plan.push((p.clone(), chain_label(&proof.rule, 1)));
    for j in 1..=k {
        for step in proof.conditions.get(j - 1).map_or(&[][..], |d| d.as_slice()) {
            plan_u(ctx, step, &p.child(0), plan)?;
        }
        plan.push((p.clone(), chain_label(&proof.rule, j + 1)));
    }
    Some(())
}

/// `base` is the position of the guard around `bar(proof.from)`.
fn plan_sr(
    ctx: &TransformContext,
    proof: &StepProof,
    base: &Position,
    plan: &mut Vec<(Position, Arc<str>)>,
) -> Option<()> {
    let ext = ctx.ext_sig();
    let inner = base.child(0);
    let p = concat(&inner, &proof.position);
    let rule = ctx.source.rule(&proof.rule)?;
    let k = rule.conditions.len();
    if k == 0 {
        plan.push((p, proof.rule.clone()));
    } else {
        let barred = ext.barred.get(rule.root().name())?;
        let slot = barred.conditional.iter().position(|l| **l == *rule.label())?;
        plan.push((p.clone(), chain_label(&proof.rule, 1)));
        let eval_guard = p.child(barred.n() + slot).child(0);
        for j in 1..=k {
            for step in proof.conditions.get(j - 1).map_or(&[][..], |d| d.as_slice()) {
                plan_sr(ctx, step, &eval_guard, plan)?;
            }
            plan.push((p.clone(), chain_label(&proof.rule, j + 1)));
        }
    }
    // Hoist the guard produced at `p` up to `base` and flatten it there.
    let path = proof.position.path();
    for d in (0..path.len()).rev() {
        let ancestor = proof.from.subterm_at(&Position::new(path[..d].to_vec()))?;
        let name = ancestor.root()?.name();
        plan.push((
            concat(&inner, &Position::new(path[..d].to_vec())),
            Arc::from(format!("aux.{}.{}", name, path[d] + 1).as_str()),
        ));
    }
    plan.push((base.clone(), Arc::from("aux.flatten")));
    Some(())
}

/// Applies the planned steps one by one; fails if a rule does not match.
pub fn replay(
    system: &RewriteSystem,
    start: &Term,
    plan: &[(Position, Arc<str>)],
) -> Option<Vec<DerivationStep>> {
    let mut current = start.clone();
    let mut steps = Vec::with_capacity(plan.len());
    for (p, label) in plan {
        let rule = system.rule(label)?;
        let redex = current.subterm_at(p)?;
        let sigma = match_term(&rule.lhs, redex)?;
        let next = current.replace_at(p, rule.rhs.apply_subst(&sigma)).ok()?;
        steps.push(DerivationStep {
            from: current,
            position: p.clone(),
            rule: rule.label_arc(),
            to: next.clone(),
        });
        current = next;
    }
    Some(steps)
}

fn restrict(graph: &DerivationGraph, system: &RewriteSystem) -> BTreeSet<Term> {
    graph
        .nodes()
        .iter()
        .filter(|t| system.signature().covers(t))
        .cloned()
        .collect()
}

/// Bounded source-signature reachable sets under `R` and `T(R)` coincide.
pub fn check_t_equivalence(
    system: &RewriteSystem,
    seeds: &[Term],
    caps: EngineCaps,
) -> Result<CheckReport, TransformError> {
    let t = linearize(system)?;
    let mut report = CheckReport::new(&system.to_string(), "t", caps);
    let mut original = ConditionalEngine::new(system, caps)?;
    let mut linear = ConditionalEngine::new(&t.target, caps)?;
    for seed in seeds {
        let g_r = original.reachable(seed);
        let g_t = linear.reachable(seed);
        let (a, b) = (restrict(&g_r, system), restrict(&g_t, system));
        let mut verdict = Verdict::Verified;
        let mut witnesses = Vec::new();
        for (missing_from, other, graph, complete) in [
            (&b, &a, &g_r, g_t.is_complete()),
            (&a, &b, &g_t, g_r.is_complete()),
        ] {
            for x in other.difference(missing_from) {
                verdict = verdict.combine(if complete {
                    Verdict::Refuted
                } else {
                    Verdict::UnverifiedCaps
                });
                if witnesses.len() < MAX_WITNESSES {
                    witnesses.push(Witness {
                        seed: seed.clone(),
                        target: x.clone(),
                        image: x.clone(),
                        target_derivation: Vec::new(),
                        source_derivation: path(graph, x),
                    });
                }
            }
        }
        report.probes.push(ProbeReport {
            name: format!("t-equivalence {seed}"),
            seed: seed.clone(),
            verdict,
            witnesses,
            note: None,
            stats: ProbeStats {
                source_nodes: g_r.len(),
                target_nodes: g_t.len(),
                source_truncated: !g_r.is_complete(),
                target_truncated: !g_t.is_complete(),
                ..ProbeStats::default()
            },
        });
    }
    Ok(report)
}

/// `R` is ultra-WLL iff the SR construction of `R` is WLL.
pub fn check_sr_wll_iff(system: &RewriteSystem) -> Result<bool, TransformError> {
    let sr = sr_unchecked(system)?;
    Ok(is_ultra_wll(system) == is_wll_system(&sr.target))
}

/// [`check_sr_wll_iff`] as a probe; a construction error refutes.
pub fn iff_probe(name: &str, system: &RewriteSystem) -> ProbeReport {
    let iff = check_sr_wll_iff(system);
    ProbeReport {
        name: name.to_string(),
        seed: Term::var("_"),
        verdict: match iff {
            Ok(true) => Verdict::Verified,
            _ => Verdict::Refuted,
        },
        witnesses: Vec::new(),
        note: iff.err().map(|e| e.to_string()),
        stats: ProbeStats::default(),
    }
}

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub caps: EngineCaps,
    /// Random ground seeds per system in addition to the given ones.
    pub random_seeds: usize,
    pub rng_seed: u64,
    pub max_seed_depth: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            caps: EngineCaps::default().with_nodes(4000),
            random_seeds: 4,
            rng_seed: 0,
            max_seed_depth: 3,
        }
    }
}

/// A named system with explicit seed terms.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub system: RewriteSystem,
    pub seeds: Vec<Term>,
}

#[derive(Clone, Debug, Default)]
pub struct CorpusReport {
    pub reports: Vec<CheckReport>,
}

impl CorpusReport {
    pub fn verdict(&self) -> Verdict {
        self.reports
            .iter()
            .fold(Verdict::Verified, |v, r| v.combine(r.verdict()))
    }
}

/// Runs every applicable check on every system.
pub fn run_corpus(entries: &[CorpusEntry], config: &CorpusConfig) -> CorpusReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut out = CorpusReport::default();
    for entry in entries {
        let s = &entry.system;
        let mut seeds = entry.seeds.clone();
        seeds.extend(random_ground_terms(
            s,
            config.random_seeds,
            config.max_seed_depth,
            &mut rng,
        ));
        let mut report = CheckReport::new(&entry.name, "all", config.caps);
        report.probes.push(iff_probe("iff", s));
        if let Ok(t) = linearize(s) {
            report.probes.push(iff_probe("t iff", &t.target));
        }
        let deterministic = s.rules().iter().all(|r| determinism_violation(r).is_none());
        let wll = is_wll_system(s);
        let uwll = is_ultra_wll(s);
        let mut skip = |name: &str, reason: &str| {
            report.skipped.push((name.to_string(), reason.to_string()));
        };
        let mut runs: Vec<Result<CheckReport, String>> = Vec::new();
        if !deterministic {
            skip("u", "not deterministic");
            skip("sr", "not deterministic");
            skip("t", "not deterministic");
        } else {
            let u = SimulationPair::unraveling(s).map_err(|e| e.to_string());
            match &u {
                Ok(pair) if wll => runs.push(
                    check_soundness(pair, &seeds, config.caps).map_err(|e| e.to_string()),
                ),
                Ok(_) => skip("u soundness", "soundness of U is proven for WLL systems only"),
                Err(e) => skip("u", e),
            }
            if let Ok(pair) = &u {
                runs.push(check_completeness(pair, &seeds, config.caps).map_err(|e| e.to_string()));
            }
            if uwll {
                match SimulationPair::sr(s) {
                    Ok(pair) => {
                        if wll {
                            runs.push(
                                check_soundness(&pair, &seeds, config.caps)
                                    .map_err(|e| e.to_string()),
                            );
                        } else {
                            skip("sr soundness", "soundness of SR is proven for WLL and ultra-WLL systems only");
                        }
                        runs.push(
                            check_completeness(&pair, &seeds, config.caps)
                                .map_err(|e| e.to_string()),
                        );
                    }
                    Err(e) => skip("sr", &e.to_string()),
                }
            } else {
                skip("sr", "not ultra-WLL");
            }
            if wll {
                runs.push(check_t_equivalence(s, &seeds, config.caps).map_err(|e| e.to_string()));
                match SimulationPair::sr_linearized(s) {
                    Ok(pair) => {
                        runs.push(check_soundness(&pair, &seeds, config.caps).map_err(|e| e.to_string()));
                        runs.push(
                            check_completeness(&pair, &seeds, config.caps).map_err(|e| e.to_string()),
                        );
                    }
                    Err(e) => skip("sr∘t", &e.to_string()),
                }
            } else {
                skip("t", "not WLL");
                skip("sr∘t", "not WLL");
            }
        }
        for run in runs {
            match run {
                Ok(r) => {
                    let method = r.method.clone();
                    for mut p in r.probes {
                        p.name = format!("{method} {}", p.name);
                        report.probes.push(p);
                    }
                    report.skipped.extend(r.skipped);
                }
                Err(e) => report.skipped.push(("error".into(), e)),
            }
        }
        out.reports.push(report);
    }
    out
}

/// Random ground terms over the signature of `system`; constants are
/// preferred as the depth budget runs out.
pub fn random_ground_terms(
    system: &RewriteSystem,
    count: usize,
    max_depth: usize,
    rng: &mut impl Rng,
) -> Vec<Term> {
    random_terms(system, &[], count, max_depth, rng)
}

/// Like [`random_ground_terms`], with `vars` among the leaves. Empty when
/// there are no leaves at all.
pub fn random_terms(
    system: &RewriteSystem,
    vars: &[Var],
    count: usize,
    max_depth: usize,
    rng: &mut impl Rng,
) -> Vec<Term> {
    let symbols: Vec<Symbol> = system.signature().iter().map(|(s, _)| s).collect();
    let constants: Vec<&Symbol> = symbols.iter().filter(|s| s.arity() == 0).collect();
    if constants.is_empty() && vars.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|_| random_term(&symbols, &constants, vars, max_depth, rng))
        .collect()
}

fn random_term(
    symbols: &[Symbol],
    leaves: &[&Symbol],
    vars: &[Var],
    depth: usize,
    rng: &mut impl Rng,
) -> Term {
    let leaf_count = leaves.len() + vars.len();
    if depth == 0 || rng.gen_range(0..3) == 0 || symbols.is_empty() {
        let i = rng.gen_range(0..leaf_count);
        return match leaves.get(i) {
            Some(c) => Term::apply((*c).clone(), Vec::new()),
            None => Term::Var(vars[i - leaves.len()].clone()),
        };
    }
    let f = &symbols[rng.gen_range(0..symbols.len())];
    let args = (0..f.arity())
        .map(|_| random_term(symbols, leaves, vars, depth - 1, rng))
        .collect();
    Term::apply(f.clone(), args)
}

/// Shape limits of random systems.
#[derive(Clone, Copy, Debug)]
pub struct SystemShape {
    pub max_rules: usize,
    pub max_conditions: usize,
    pub max_depth: usize,
}

impl Default for SystemShape {
    fn default() -> Self {
        SystemShape {
            max_rules: 6,
            max_conditions: 2,
            max_depth: 2,
        }
    }
}

/// A random deterministic type-3 CTRS over 8 symbols (constructors
/// `a, b, s/1, p/2`, defined `f/1, g/2, h/1, k/0`). Condition targets and
/// left-hand sides may repeat variables, so the output covers WLL and
/// non-WLL, ultra-WLL and non-ultra-WLL systems.
pub fn random_dctrs(rng: &mut impl Rng, shape: SystemShape) -> RewriteSystem {
    let cons = [
        Symbol::new("a", 0),
        Symbol::new("b", 0),
        Symbol::new("s", 1),
        Symbol::new("p", 2),
    ];
    let defined = [
        Symbol::new("f", 1),
        Symbol::new("g", 2),
        Symbol::new("h", 1),
        Symbol::new("k", 0),
    ];
    let all: Vec<Symbol> = cons.iter().chain(defined.iter()).cloned().collect();
    let leaves: Vec<&Symbol> = cons.iter().filter(|c| c.arity() == 0).collect();
    let pool: Vec<Var> = ["x", "y", "z", "w"].iter().map(|v| Var::new(v)).collect();
    let rule_count = rng.gen_range(1..=shape.max_rules);
    let mut rules = Vec::new();
    for i in 0..rule_count {
        let f = defined[rng.gen_range(0..defined.len())].clone();
        let args: Vec<Term> = (0..f.arity())
            .map(|_| random_term(&cons, &leaves, &pool[..2], shape.max_depth - 1, rng))
            .collect();
        let lhs = Term::apply(f, args);
        let mut bound: Vec<Var> = lhs.vars();
        let mut conditions = Vec::new();
        for c in 0..rng.gen_range(0..=shape.max_conditions) {
            let source = random_term(&all, &leaves, &bound, shape.max_depth, rng);
            let fresh = Var::new(&format!("v{}", c + 1));
            let mut target_vars = bound.clone();
            target_vars.push(fresh);
            let target = random_term(&cons, &leaves, &target_vars, shape.max_depth, rng);
            for v in target.vars() {
                if !bound.contains(&v) {
                    bound.push(v);
                }
            }
            conditions.push(Condition::new(source, target));
        }
        let rhs = random_term(&all, &leaves, &bound, shape.max_depth, rng);
        let rule = Rule::new(&format!("r{}", i + 1), lhs, rhs, conditions)
            .expect("lhs is an application");
        rules.push(rule);
    }
    RewriteSystem::new(rules).expect("fixed arities")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{system, term, R1, R4, WLL_NOT_UWLL};

    fn caps() -> EngineCaps {
        EngineCaps::default().with_nodes(3000)
    }

    #[test]
    fn sr_soundness_r4() {
        let pair = SimulationPair::sr(&system(R4)).unwrap();
        let rep = check_soundness(&pair, &[term("h(f(a), f(f(b)))")], caps()).unwrap();
        let p = &rep.probes[0];
        assert_eq!(p.verdict, Verdict::Verified, "{p:?}");
        assert_eq!(p.stats.phi_violations, 0);
        assert!(p.witnesses.iter().any(|w| w.image == term("d")));
    }

    #[test]
    fn u_completeness_r1() {
        let pair = SimulationPair::unraveling(&system(R1)).unwrap();
        let rep = check_completeness(&pair, &[term("qsort(cons(s(0), cons(0, nil)))")], caps())
            .unwrap();
        let p = &rep.probes[0];
        assert_eq!(p.verdict, Verdict::Verified);
        assert_eq!(p.stats.searched, 0);
    }

    #[test]
    fn sr_completeness_r1() {
        let pair = SimulationPair::sr(&system(R1)).unwrap();
        let rep = check_completeness(&pair, &[term("qsort(cons(s(0), cons(0, nil)))")], caps())
            .unwrap();
        let p = &rep.probes[0];
        assert_eq!(p.verdict, Verdict::Verified);
        assert_eq!(p.stats.searched, 0, "{p:?}");
        assert_eq!(p.stats.phi_violations, 0);
        let w = p
            .witnesses
            .iter()
            .find(|w| w.image == term("cons(0, cons(s(0), nil))"))
            .unwrap();
        assert_eq!(w.target_derivation.last().unwrap().to, w.target);
    }

    #[test]
    fn sr_linearized_completeness() {
        let s = system(&format!("{WLL_NOT_UWLL}\na -> c\nb -> c"));
        let pair = SimulationPair::sr_linearized(&s).unwrap();
        let rep = check_completeness(&pair, &[term("f(c)"), term("f(a)")], caps()).unwrap();
        for p in &rep.probes {
            assert_eq!(p.verdict, Verdict::Verified);
            assert_eq!(p.stats.searched, 0);
        }
    }

    #[test]
    fn t_equivalence_example() {
        let s = system(&format!("{WLL_NOT_UWLL}\na -> c\nb -> c"));
        let rep = check_t_equivalence(&s, &[term("f(c)"), term("x")], caps().with_steps(4)).unwrap();
        assert_eq!(rep.verdict(), Verdict::Verified);
        assert_eq!(rep.probes[0].stats.source_nodes, 2);
    }

    #[test]
    fn iff_examples() {
        for src in [R1, R4, WLL_NOT_UWLL, ""] {
            assert!(check_sr_wll_iff(&system(src)).unwrap());
        }
    }

    #[test]
    fn corpus_runs() {
        let entries = [CorpusEntry {
            name: "r4".into(),
            system: system(R4),
            seeds: alloc::vec![term("g(f(a))")],
        }];
        let rep = run_corpus(&entries, &CorpusConfig::default());
        assert_eq!(rep.verdict(), Verdict::Verified, "{:?}", rep.reports[0].probes);
        assert!(run_corpus(&[], &CorpusConfig::default()).reports.is_empty());
    }

    #[test]
    fn random_systems_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = random_dctrs(&mut rng, SystemShape::default());
            assert!(s.rules().iter().all(|r| determinism_violation(r).is_none()));
            assert!(check_sr_wll_iff(&s).unwrap());
        }
    }
}
