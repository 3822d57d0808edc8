use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ctrslab_core::harness::{
    check_completeness, check_soundness, check_t_equivalence, iff_probe, random_ground_terms,
    run_corpus, CheckReport, CorpusConfig, CorpusEntry, SimulationPair,
};
use ctrslab_core::{
    classify_system, ctrs_reachable, linearize, sr_transform, trs_reachable, unravel,
    DerivationGraph, EngineCaps, SystemReport, Term,
};

use crate::caps::{default_caps, parse_caps};
use crate::format::{parse_system, render_context, SourceDocument};
use crate::report::{exit_code, ReportJson};

#[derive(Parser, Debug)]
#[command(name = "ctrslab", version, about = "Conditional term rewriting toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a system, or test a single property.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        prop: Option<Prop>,
    },
    /// Transform a system and print the result.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Explore the derivations of a term.
    Rewrite {
        file: PathBuf,
        #[arg(long)]
        term: String,
        /// Use the level-bounded conditional engine.
        #[arg(long)]
        conditional: bool,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        max_level: Option<usize>,
        #[arg(long)]
        max_nodes: Option<usize>,
    },
    /// Run one oracle check and print a JSON report.
    Oracle {
        file: PathBuf,
        #[arg(long, value_enum)]
        check: CheckArg,
        #[arg(long, value_enum, default_value = "sr")]
        method: OracleMethod,
        /// File with one seed term per line.
        #[arg(long)]
        seeds: Option<PathBuf>,
        /// Number of random ground seeds.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `key=value,...` over the default caps.
        #[arg(long)]
        caps: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run every applicable check on each `*.trs` file of a directory.
    Corpus {
        dir: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        caps: Option<String>,
        #[arg(long, default_value_t = 4)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Prop {
    Wll,
    Uwll,
    Ll,
    Rl,
    Ne,
    Det,
    Type,
    Normal,
    Consys,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    U,
    T,
    Sr,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OracleMethod {
    U,
    Sr,
    /// SR after linearization.
    Srt,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CheckArg {
    Soundness,
    Completeness,
    TEquiv,
    Iff,
}

/// Runs a command, writing its normal output to `out`. Errors are input
/// errors (exit code 3).
pub fn run(cli: Cli, out: &mut String) -> Result<i32> {
    match cli.command {
        Command::Check { file, prop } => check(&load(&file)?, prop, out),
        Command::Transform { file, method, out: dest } => {
            let doc = load(&file)?;
            let ctx = match method {
                MethodArg::U => unravel(&doc.system),
                MethodArg::T => linearize(&doc.system),
                MethodArg::Sr => sr_transform(&doc.system),
            }?;
            let text = render_context(&ctx);
            match dest {
                Some(path) => fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => out.push_str(&text),
            }
            Ok(0)
        }
        Command::Rewrite {
            file,
            term,
            conditional,
            max_steps,
            max_level,
            max_nodes,
        } => {
            let doc = load(&file)?;
            let t = doc.parse_term(&term).context("parsing --term")?;
            let mut caps = default_caps(EngineCaps::default())?;
            caps.max_steps = max_steps.unwrap_or(caps.max_steps);
            caps.max_level = max_level.unwrap_or(caps.max_level);
            caps.max_nodes = max_nodes.unwrap_or(caps.max_nodes);
            let graph = if conditional {
                ctrs_reachable(&doc.system, &t, caps)?
            } else {
                trs_reachable(&doc.system, &t, caps)
                    .context("the system has conditional rules; use --conditional")?
            };
            print_graph(&graph, out);
            Ok(0)
        }
        Command::Oracle {
            file,
            check,
            method,
            seeds,
            random,
            seed,
            caps,
            report,
        } => {
            let doc = load(&file)?;
            let caps = harness_caps(caps.as_deref())?;
            let name = file.display().to_string();
            let json = match check {
                CheckArg::Iff => {
                    let mut rep = CheckReport::new(&name, "iff", caps);
                    rep.probes.push(iff_probe("iff", &doc.system));
                    ReportJson::from_check(&rep)
                }
                _ => {
                    let seeds = collect_seeds(&doc, seeds.as_deref(), random, seed)?;
                    let mut rep = match check {
                        CheckArg::TEquiv => check_t_equivalence(&doc.system, &seeds, caps)?,
                        _ => {
                            let pair = match method {
                                OracleMethod::U => SimulationPair::unraveling(&doc.system),
                                OracleMethod::Sr => SimulationPair::sr(&doc.system),
                                OracleMethod::Srt => SimulationPair::sr_linearized(&doc.system),
                            }?;
                            if matches!(check, CheckArg::Soundness) {
                                check_soundness(&pair, &seeds, caps)?
                            } else {
                                check_completeness(&pair, &seeds, caps)?
                            }
                        }
                    };
                    rep.system = name;
                    ReportJson::from_check(&rep)
                }
            };
            emit(&json, report.as_deref(), out)?;
            Ok(exit_code(json.verdict()))
        }
        Command::Corpus {
            dir,
            report,
            caps,
            random,
            seed,
        } => {
            let entries = load_corpus(&dir)?;
            let config = CorpusConfig {
                caps: harness_caps(caps.as_deref())?,
                random_seeds: random,
                rng_seed: seed,
                ..CorpusConfig::default()
            };
            let json = ReportJson::from_corpus(&dir.display().to_string(), &run_corpus(&entries, &config));
            emit(&json, report.as_deref(), out)?;
            Ok(exit_code(json.verdict()))
        }
    }
}

fn harness_caps(spec: Option<&str>) -> Result<EngineCaps> {
    let base = default_caps(CorpusConfig::default().caps)?;
    Ok(match spec {
        Some(s) => parse_caps(s, base)?,
        None => base,
    })
}

pub fn load(path: &Path) -> Result<SourceDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_system(&text).with_context(|| format!("parsing {}", path.display()))
}

/// One term per line; blank lines and lines starting with `;` are ignored.
pub fn parse_seeds(doc: &SourceDocument, text: &str) -> Result<Vec<Term>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with(';'))
        .map(|(i, l)| {
            doc.parse_term(l.trim())
                .with_context(|| format!("seed on line {}", i + 1))
        })
        .collect()
}

fn collect_seeds(
    doc: &SourceDocument,
    file: Option<&Path>,
    random: Option<usize>,
    seed: u64,
) -> Result<Vec<Term>> {
    let mut seeds = match file {
        Some(path) => parse_seeds(
            doc,
            &fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        )?,
        None => Vec::new(),
    };
    if let Some(n) = random {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        seeds.extend(random_ground_terms(&doc.system, n, 3, &mut rng));
    }
    if seeds.is_empty() {
        bail!("no seeds: pass --seeds <file> or --random N");
    }
    Ok(seeds)
}

/// `*.trs` files in name order, each with seeds from a sibling `*.seeds`
/// file when present.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "trs"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let doc = load(p)?;
            let seeds_path = p.with_extension("seeds");
            let seeds = if seeds_path.exists() {
                parse_seeds(&doc, &fs::read_to_string(&seeds_path)?)
                    .with_context(|| format!("in {}", seeds_path.display()))?
            } else {
                Vec::new()
            };
            Ok(CorpusEntry {
                name: p.file_stem().unwrap_or_default().to_string_lossy().into_owned(),
                system: doc.system,
                seeds,
            })
        })
        .collect()
}

fn emit(json: &ReportJson, dest: Option<&Path>, out: &mut String) -> Result<()> {
    let text = json.to_json();
    match dest {
        Some(path) => {
            fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
            let _ = writeln!(out, "{}: {}", path.display(), json.verdict().as_str());
        }
        None => {
            out.push_str(&text);
            out.push('\n');
        }
    }
    Ok(())
}

fn check(doc: &SourceDocument, prop: Option<Prop>, out: &mut String) -> Result<i32> {
    let rep = classify_system(&doc.system);
    let Some(prop) = prop else {
        print_report(doc, &rep, out);
        return Ok(0);
    };
    let holds = match prop {
        Prop::Wll => rep.wll,
        Prop::Uwll => rep.ultra_wll,
        Prop::Ll => rep.ll,
        Prop::Rl => rep.rl,
        Prop::Ne => rep.ne,
        Prop::Det => rep.dctrs,
        Prop::Normal => rep.normal,
        Prop::Consys => rep.constructor_system,
        Prop::Type => {
            let _ = writeln!(out, "{}", rep.max_type.number());
            return Ok(0);
        }
    };
    let _ = writeln!(out, "{holds}");
    Ok(if holds { 0 } else { 1 })
}

fn print_report(doc: &SourceDocument, rep: &SystemReport, out: &mut String) {
    let names = |set: &std::collections::BTreeSet<ctrslab_core::Symbol>| {
        set.iter()
            .map(|s| format!("{}/{}", s.name(), s.arity()))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let flags = [
        ("trs", rep.trs),
        ("ll", rep.ll),
        ("rl", rep.rl),
        ("ne", rep.ne),
        ("wll", rep.wll),
        ("uwll", rep.ultra_wll),
        ("det", rep.dctrs),
        ("type3", rep.type3),
        ("normal", rep.normal),
        ("consys", rep.constructor_system),
    ];
    for (k, v) in flags {
        let _ = writeln!(out, "{k}: {v}");
    }
    let _ = writeln!(out, "type: {}", rep.max_type.number());
    let _ = writeln!(out, "defined: {}", names(&rep.defined));
    let _ = writeln!(out, "constructors: {}", names(&rep.constructors));
    for ((rule, r), span) in doc.system.rules().iter().zip(&rep.rules).zip(&doc.rule_spans) {
        let _ = writeln!(
            out,
            "{} (line {}): ll={} rl={} ne={} wll={} det={} type={}",
            rule.label(),
            span.line,
            r.ll,
            r.rl,
            r.ne,
            r.wll,
            r.deterministic,
            r.rule_type.number()
        );
    }
}

fn print_graph(graph: &DerivationGraph, out: &mut String) {
    for (id, t) in graph.nodes().iter().enumerate() {
        let nf = if graph.is_normal_form(id) { "  [normal form]" } else { "" };
        let _ = writeln!(out, "{}\t{t}{nf}", graph.depth_of(id));
    }
    let _ = writeln!(
        out,
        "; {} terms, {}",
        graph.len(),
        if graph.is_complete() { "complete" } else { "truncated by caps" }
    );
}
