//! The unraveling `U`, the linearization `T` and the SR transformation,
//! together with the term mappings `ext`, reset, bar and hat.
//!
//! Introduced symbols are named `u<N>` (U-symbols), `sq<N>` (condition
//! evaluation tuples), `tuple<j>` (linearization tuples), `sq` (the guard)
//! and `bot`. Defined symbols with at least one conditional rule get a `^`
//! suffix in the SR signature; every other symbol keeps its name. Names that
//! clash with the source system are primed.
//!
//! Target rule labels: the `j`-th rule generated from conditional rule `ρ`
//! is `ρ.j` (1-based, `k+1` rules), unconditional rules keep their label and
//! auxiliary rules are labelled `aux.*`. Corresponding rules of `U(R)` and
//! `SR(R)` therefore share labels.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::classify::{
    determinism_violation, is_left_linear, is_non_erasing, is_right_linear, is_wll,
    ultra_wll_violation, wll_violation, RuleProperty,
};
use crate::error::{PlacementError, SystemError, TransformError};
use crate::system::{Condition, RewriteSystem, Role, Rule, Signature};
use crate::term::{count_var_occurrences, vars_of, FreshVars, Symbol, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Unravel,
    Linearize,
    Sr,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Unravel => "u",
            Method::Linearize => "t",
            Method::Sr => "sr",
        }
    }
}

/// Per conditional rule `ρ` and condition index `j` (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondMeta {
    pub rule: Arc<str>,
    pub j: usize,
    /// `X_j = Var(l, t1, ..., t(j-1))`, first-occurrence order.
    pub x: Vec<Var>,
    /// `V_j = Var(t1, ..., t(j-1))`, first-occurrence order.
    pub v: Vec<Var>,
    /// `U^ρ_j`, arity `1 + |X_j|`.
    pub u_symbol: Symbol,
    /// `[ ]^ρ_j`, arity `1 + |V_j|`; only set by the SR transformation.
    pub eval_symbol: Option<Symbol>,
}

/// Image of a source defined symbol `f/n` in the SR signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Barred {
    pub source: Symbol,
    /// `f̄/(n+m)`.
    pub target: Symbol,
    /// Labels of the conditional `f`-rules in rank order; slot `i` of the
    /// extended arguments belongs to `conditional[i]`.
    pub conditional: Vec<Arc<str>>,
}

impl Barred {
    pub fn n(&self) -> usize {
        self.source.arity()
    }

    pub fn m(&self) -> usize {
        self.conditional.len()
    }
}

/// The extended signature used by the SR transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedSignature {
    pub guard: Symbol,
    pub bottom: Symbol,
    /// Keyed by source symbol name.
    pub barred: BTreeMap<Arc<str>, Barred>,
    /// Target name of a barred symbol to its source name.
    pub barred_by_target: BTreeMap<Arc<str>, Arc<str>>,
    /// Source constructors (kept verbatim).
    pub constructors: BTreeSet<Symbol>,
    /// Evaluation tuple name to `(ρ, j)`.
    pub eval: BTreeMap<Arc<str>, (Arc<str>, usize)>,
}

impl ExtendedSignature {
    pub fn barred_of_target(&self, name: &str) -> Option<&Barred> {
        self.barred_by_target
            .get(name)
            .and_then(|s| self.barred.get(s))
    }

    pub fn is_guard(&self, s: &Symbol) -> bool {
        *s == self.guard
    }

    pub fn is_bottom(&self, s: &Symbol) -> bool {
        *s == self.bottom
    }

    pub fn guard(&self, t: Term) -> Term {
        Term::apply(self.guard.clone(), alloc::vec![t])
    }

    pub fn bot(&self) -> Term {
        Term::apply(self.bottom.clone(), Vec::new())
    }
}

/// Where a target rule came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleOrigin {
    /// Copied or converted from an unconditional source rule.
    Unconditional { source: Arc<str> },
    /// The `j`-th rule (1-based) generated from a conditional source rule.
    Chain { source: Arc<str>, j: usize },
    /// Linearized version of a source rule.
    Linearized { source: Arc<str> },
    Auxiliary,
}

/// Result of one of the three transformations.
#[derive(Clone, Debug)]
pub struct TransformContext {
    pub method: Method,
    pub source: RewriteSystem,
    pub target: RewriteSystem,
    /// Source symbol to its image in the target signature.
    pub symbol_table: BTreeMap<Symbol, Symbol>,
    /// Parallel to `target.rules()`.
    pub origins: Vec<RuleOrigin>,
    /// Keyed by `(ρ, j)`.
    pub cond_meta: BTreeMap<(Arc<str>, usize), CondMeta>,
    /// SR only: the unraveling of the same source system.
    pub unraveling: Option<Box<TransformContext>>,
    /// SR only.
    pub extended: Option<ExtendedSignature>,
}

impl TransformContext {
    pub fn origin_of(&self, label: &str) -> Option<&RuleOrigin> {
        self.target
            .rules()
            .iter()
            .position(|r| r.label() == label)
            .map(|i| &self.origins[i])
    }

    pub fn cond(&self, rule: &str, j: usize) -> Option<&CondMeta> {
        self.cond_meta.get(&(Arc::from(rule), j))
    }

    /// SR only: pairs of corresponding (SR rule, U rule) labels. Auxiliary
    /// rules have no counterpart.
    pub fn rule_correspondence(&self) -> Vec<(Arc<str>, Arc<str>)> {
        let Some(u) = &self.unraveling else {
            return Vec::new();
        };
        self.target
            .rules()
            .iter()
            .zip(&self.origins)
            .filter(|(_, o)| !matches!(o, RuleOrigin::Auxiliary))
            .filter_map(|(r, _)| {
                u.target
                    .rule(r.label())
                    .map(|ur| (r.label_arc(), ur.label_arc()))
            })
            .collect()
    }

    pub fn ext_sig(&self) -> &ExtendedSignature {
        self.extended
            .as_ref()
            .expect("not an SR transformation context")
    }

    /// `U^ρ_j` resolved through the embedded (or own) unraveling.
    pub fn u_symbol(&self, rule: &str, j: usize) -> Option<&Symbol> {
        self.cond(rule, j).map(|c| &c.u_symbol)
    }

    pub fn ext(&self, t: &Term) -> Term {
        let mut fresh = FreshVars::new();
        fresh.avoid_term(t);
        ext_with(self.ext_sig(), t, &mut fresh)
    }

    pub fn bar(&self, t: &Term) -> Term {
        bar_with(self.ext_sig(), t)
    }

    pub fn reset(&self, t: &Term) -> Result<Term, PlacementError> {
        reset_with(self.ext_sig(), &self.target, t)
    }

    pub fn hat(&self, t: &Term) -> Option<Term> {
        hat_with(self.ext_sig(), t)
    }

    /// `φ` for SR: `⟨bar(t)⟩`.
    pub fn init(&self, t: &Term) -> Term {
        let ext = self.ext_sig();
        ext.guard(bar_with(ext, t))
    }
}

/// Supplies symbol names that avoid a set of taken names.
struct NameSupply {
    taken: BTreeSet<String>,
    counters: BTreeMap<String, usize>,
}

impl NameSupply {
    fn new(taken: BTreeSet<String>) -> Self {
        NameSupply {
            taken,
            counters: BTreeMap::new(),
        }
    }

    /// `base<N>` with the next unused `N` for this base.
    fn numbered(&mut self, base: &str) -> String {
        let c = self.counters.entry(base.to_string()).or_insert(0);
        loop {
            *c += 1;
            let name = format!("{base}{c}");
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }

    /// `name` itself, primed until unused.
    fn exact(&mut self, name: &str) -> String {
        let mut name = name.to_string();
        while !self.taken.insert(name.clone()) {
            name.push('\'');
        }
        name
    }
}

fn check_deterministic(system: &RewriteSystem) -> Result<(), TransformError> {
    for r in system.rules() {
        if let Some(i) = determinism_violation(r) {
            return Err(TransformError::NotDeterministic {
                rule: r.label().to_string(),
                condition: i,
            });
        }
    }
    Ok(())
}

/// `U(R)`. Rejects non-deterministic systems.
pub fn unravel(system: &RewriteSystem) -> Result<TransformContext, TransformError> {
    check_deterministic(system)?;
    unravel_unchecked(system)
}

/// `U(R)` without the determinism gate; the result may have extra
/// variables in right-hand sides.
pub fn unravel_unchecked(system: &RewriteSystem) -> Result<TransformContext, TransformError> {
    let mut names = NameSupply::new(system.used_names());
    let mut signature = system.signature().clone();
    let mut rules = Vec::new();
    let mut origins = Vec::new();
    let mut cond_meta = BTreeMap::new();
    for rho in system.rules() {
        if !rho.is_conditional() {
            rules.push(rho.clone());
            origins.push(RuleOrigin::Unconditional {
                source: rho.label_arc(),
            });
            continue;
        }
        let k = rho.conditions.len();
        let metas: Vec<CondMeta> = (1..=k)
            .map(|j| {
                let x = vars_of(&rho.lhs_and_targets(j - 1));
                let v = vars_of(&rho.targets_before(j - 1));
                let name = names.numbered("u");
                let u_symbol = signature.declare(&name, 1 + x.len(), Role::USymbol)?;
                Ok(CondMeta {
                    rule: rho.label_arc(),
                    j,
                    x,
                    v,
                    u_symbol,
                    eval_symbol: None,
                })
            })
            .collect::<Result<_, SystemError>>()?;
        let u_term = |meta: &CondMeta, head: Term| {
            let mut args = alloc::vec![head];
            args.extend(meta.x.iter().cloned().map(Term::Var));
            Term::apply(meta.u_symbol.clone(), args)
        };
        for j in 1..=k + 1 {
            let lhs = if j == 1 {
                rho.lhs.clone()
            } else {
                u_term(&metas[j - 2], rho.conditions[j - 2].target.clone())
            };
            let rhs = if j <= k {
                u_term(&metas[j - 1], rho.conditions[j - 1].source.clone())
            } else {
                rho.rhs.clone()
            };
            rules.push(Rule::unconditional(&format!("{}.{}", rho.label(), j), lhs, rhs)?);
            origins.push(RuleOrigin::Chain {
                source: rho.label_arc(),
                j,
            });
        }
        for m in metas {
            cond_meta.insert((m.rule.clone(), m.j), m);
        }
    }
    let symbol_table = system.signature().iter().map(|(s, _)| (s.clone(), s)).collect();
    Ok(TransformContext {
        method: Method::Unravel,
        source: system.clone(),
        target: RewriteSystem::with_signature(signature, rules)?,
        symbol_table,
        origins,
        cond_meta,
        unraveling: None,
        extended: None,
    })
}

/// `T(R)`: linearizes the variables occurring more than once in
/// `l, t1, ..., tk` of each conditional rule and appends the tuple
/// condition. Rejects non-WLL and non-deterministic systems.
pub fn linearize(system: &RewriteSystem) -> Result<TransformContext, TransformError> {
    check_deterministic(system)?;
    for r in system.rules() {
        if let Some(x) = wll_violation(r) {
            return Err(TransformError::NotWll {
                rule: r.label().to_string(),
                variable: x.name().to_string(),
            });
        }
    }
    let mut names = NameSupply::new(system.used_names());
    let mut tuples: BTreeMap<usize, Symbol> = BTreeMap::new();
    let mut signature = system.signature().clone();
    let mut rules = Vec::new();
    let mut origins = Vec::new();
    for rho in system.rules() {
        let k = rho.conditions.len();
        let pattern = rho.lhs_and_targets(k);
        let repeated: Vec<Var> = vars_of(&pattern)
            .into_iter()
            .filter(|x| count_var_occurrences(&pattern, x) > 1)
            .collect();
        if k == 0 || repeated.is_empty() {
            rules.push(rho.clone());
            origins.push(RuleOrigin::Linearized {
                source: rho.label_arc(),
            });
            continue;
        }
        let mut fresh = FreshVars::avoiding(rho.vars().iter().map(|v| v.name()));
        let mut introduced: Vec<(Var, Var)> = Vec::new();
        let mut counters: BTreeMap<Var, usize> = BTreeMap::new();
        let mut lin = |t: &Term, introduced: &mut Vec<(Var, Var)>| {
            linearize_term(t, &repeated, &mut |x| {
                let n = counters.entry(x.clone()).or_insert(0);
                *n += 1;
                let y = fresh.fresh_indexed(x.name(), *n);
                introduced.push((y.clone(), x.clone()));
                y
            })
        };
        let lhs = lin(&rho.lhs, &mut introduced);
        let mut conditions: Vec<Condition> = rho
            .conditions
            .iter()
            .map(|c| Condition::new(c.source.clone(), lin(&c.target, &mut introduced)))
            .collect();
        let j = introduced.len();
        let tuple = match tuples.get(&j) {
            Some(s) => s.clone(),
            None => {
                let name = names.exact(&format!("tuple{j}"));
                let s = signature.declare(&name, j, Role::TupleLin)?;
                tuples.insert(j, s.clone());
                s
            }
        };
        conditions.push(Condition::new(
            Term::apply(
                tuple.clone(),
                introduced.iter().map(|(y, _)| Term::Var(y.clone())).collect(),
            ),
            Term::apply(
                tuple,
                introduced.iter().map(|(_, x)| Term::Var(x.clone())).collect(),
            ),
        ));
        rules.push(Rule::new(rho.label(), lhs, rho.rhs.clone(), conditions)?);
        origins.push(RuleOrigin::Linearized {
            source: rho.label_arc(),
        });
    }
    let symbol_table = system.signature().iter().map(|(s, _)| (s.clone(), s)).collect();
    Ok(TransformContext {
        method: Method::Linearize,
        source: system.clone(),
        target: RewriteSystem::with_signature(signature, rules)?,
        symbol_table,
        origins,
        cond_meta: BTreeMap::new(),
        unraveling: None,
        extended: None,
    })
}

fn linearize_term(t: &Term, repeated: &[Var], rename: &mut impl FnMut(&Var) -> Var) -> Term {
    match t {
        Term::Var(x) if repeated.contains(x) => Term::Var(rename(x)),
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::apply(
            f.clone(),
            args.iter().map(|a| linearize_term(a, repeated, rename)).collect(),
        ),
    }
}

/// `SR(R)`. Rejects systems that are not deterministic or not ultra-WLL.
pub fn sr_transform(system: &RewriteSystem) -> Result<TransformContext, TransformError> {
    check_deterministic(system)?;
    for r in system.rules() {
        if let Some(clause) = ultra_wll_violation(r) {
            return Err(TransformError::NotUltraWll {
                rule: r.label().to_string(),
                clause,
            });
        }
    }
    sr_unchecked(system)
}

/// The SR construction without class checks. The embedded unraveling is
/// only present for deterministic input.
pub fn sr_unchecked(system: &RewriteSystem) -> Result<TransformContext, TransformError> {
    let unraveling = unravel(system).ok();
    let mut names = NameSupply::new(system.used_names());
    let guard_name = names.exact("sq");
    let bottom_name = names.exact("bot");
    let mut signature = Signature::new();
    let guard = signature.declare(&guard_name, 1, Role::Guard)?;
    let bottom = signature.declare(&bottom_name, 0, Role::Bottom)?;
    let mut symbol_table = BTreeMap::new();
    let mut barred = BTreeMap::new();
    let mut barred_by_target = BTreeMap::new();
    let constructors = system.constructors();
    for c in &constructors {
        signature.declare(c.name(), c.arity(), Role::Constructor)?;
        symbol_table.insert(c.clone(), c.clone());
    }
    for f in system.defined_symbols() {
        let conditional: Vec<Arc<str>> = system
            .conditional_rules_of(f.name())
            .into_iter()
            .map(|i| system.rules()[i].label_arc())
            .collect();
        let name = if conditional.is_empty() {
            f.name().to_string()
        } else {
            names.exact(&format!("{}^", f.name()))
        };
        let target = signature.declare(&name, f.arity() + conditional.len(), Role::BarredDefined)?;
        symbol_table.insert(f.clone(), target.clone());
        barred_by_target.insert(Arc::from(name.as_str()), Arc::from(f.name()));
        barred.insert(
            Arc::from(f.name()),
            Barred {
                source: f.clone(),
                target,
                conditional,
            },
        );
    }
    let mut ext_sig = ExtendedSignature {
        guard,
        bottom,
        barred,
        barred_by_target,
        constructors,
        eval: BTreeMap::new(),
    };

    let mut cond_meta = BTreeMap::new();
    for rho in system.rules().iter().filter(|r| r.is_conditional()) {
        for j in 1..=rho.conditions.len() {
            let x = vars_of(&rho.lhs_and_targets(j - 1));
            let v = vars_of(&rho.targets_before(j - 1));
            let name = names.numbered("sq");
            let eval = signature.declare(&name, 1 + v.len(), Role::TupleEval)?;
            ext_sig
                .eval
                .insert(Arc::from(name.as_str()), (rho.label_arc(), j));
            let u_symbol = match &unraveling {
                Some(u) => u.cond_meta[&(rho.label_arc(), j)].u_symbol.clone(),
                // Placeholder for non-deterministic input: no U(R) exists.
                None => Symbol::new(&format!("u?{}.{}", rho.label(), j), 1 + x.len()),
            };
            cond_meta.insert(
                (rho.label_arc(), j),
                CondMeta {
                    rule: rho.label_arc(),
                    j,
                    x,
                    v,
                    u_symbol,
                    eval_symbol: Some(eval),
                },
            );
        }
    }

    let mut rules = Vec::new();
    let mut origins = Vec::new();
    for rho in system.rules() {
        let mut fresh = FreshVars::avoiding(rho.vars().iter().map(|v| v.name()));
        let f = &ext_sig.barred[rho.root().name()];
        let m = f.m();
        let zs: Vec<Term> = (1..=m)
            .map(|i| Term::Var(fresh.fresh_indexed("z", i)))
            .collect();
        let w: Vec<Term> = rho
            .lhs
            .args()
            .iter()
            .map(|a| ext_with(&ext_sig, a, &mut fresh))
            .collect();
        let rhs_final = ext_sig.guard(bar_with(&ext_sig, &rho.rhs));
        if !rho.is_conditional() {
            let mut args = w;
            args.extend(zs);
            rules.push(Rule::unconditional(
                rho.label(),
                Term::apply(f.target.clone(), args),
                rhs_final,
            )?);
            origins.push(RuleOrigin::Unconditional {
                source: rho.label_arc(),
            });
            continue;
        }
        let slot = f
            .conditional
            .iter()
            .position(|l| **l == *rho.label())
            .expect("conditional rule is ranked");
        let with_slot = |u: Term| {
            let mut args = w.clone();
            args.extend(zs.iter().cloned());
            args[f.n() + slot] = u;
            Term::apply(f.target.clone(), args)
        };
        let eval_term = |j: usize, head: Term| {
            let meta = &cond_meta[&(rho.label_arc(), j)];
            let mut args = alloc::vec![ext_sig.guard(head)];
            args.extend(meta.v.iter().cloned().map(Term::Var));
            Term::apply(meta.eval_symbol.clone().unwrap(), args)
        };
        let k = rho.conditions.len();
        for j in 1..=k + 1 {
            let lhs = if j == 1 {
                with_slot(ext_sig.bot())
            } else {
                let t = ext_with(&ext_sig, &rho.conditions[j - 2].target, &mut fresh);
                with_slot(eval_term(j - 1, t))
            };
            let rhs = if j <= k {
                with_slot(eval_term(
                    j,
                    bar_with(&ext_sig, &rho.conditions[j - 1].source),
                ))
            } else {
                rhs_final.clone()
            };
            rules.push(Rule::unconditional(&format!("{}.{}", rho.label(), j), lhs, rhs)?);
            origins.push(RuleOrigin::Chain {
                source: rho.label_arc(),
                j,
            });
        }
    }

    for r in auxiliary_rules(&ext_sig)? {
        rules.push(r);
        origins.push(RuleOrigin::Auxiliary);
    }

    Ok(TransformContext {
        method: Method::Sr,
        source: system.clone(),
        target: RewriteSystem::with_signature(signature, rules)?,
        symbol_table,
        origins,
        cond_meta,
        unraveling: unraveling.map(Box::new),
        extended: Some(ext_sig),
    })
}

fn auxiliary_rules(ext: &ExtendedSignature) -> Result<Vec<Rule>, SystemError> {
    let x = Term::var("x");
    let mut rules = alloc::vec![Rule::unconditional(
        "aux.flatten",
        ext.guard(ext.guard(x.clone())),
        ext.guard(x),
    )?];
    let xs = |n: usize| -> Vec<Term> {
        (1..=n).map(|i| Term::var(&format!("x{i}"))).collect()
    };
    let hoisted = |args: &[Term], i: usize| -> Vec<Term> {
        let mut a = args.to_vec();
        a[i] = ext.guard(a[i].clone());
        a
    };
    for c in &ext.constructors {
        let args = xs(c.arity());
        for i in 0..c.arity() {
            rules.push(Rule::unconditional(
                &format!("aux.{}.{}", c.name(), i + 1),
                Term::apply(c.clone(), hoisted(&args, i)),
                ext.guard(Term::apply(c.clone(), args.clone())),
            )?);
        }
    }
    for f in ext.barred.values() {
        let args = xs(f.n());
        let zs: Vec<Term> = (1..=f.m()).map(|i| Term::var(&format!("z{i}"))).collect();
        let bots: Vec<Term> = (0..f.m()).map(|_| ext.bot()).collect();
        for i in 0..f.n() {
            let mut lhs_args = hoisted(&args, i);
            lhs_args.extend(zs.iter().cloned());
            let mut rhs_args = args.clone();
            rhs_args.extend(bots.iter().cloned());
            rules.push(Rule::unconditional(
                &format!("aux.{}.{}", f.source.name(), i + 1),
                Term::apply(f.target.clone(), lhs_args),
                ext.guard(Term::apply(f.target.clone(), rhs_args)),
            )?);
        }
    }
    Ok(rules)
}

/// `ext`: extends defined symbols with fresh variables in the extended
/// arguments.
pub fn ext_with(ext: &ExtendedSignature, t: &Term, fresh: &mut FreshVars) -> Term {
    extend(ext, t, &mut |_| Term::Var(fresh.fresh("z")))
}

/// `bar(t) = ⌊ext(t)⌋`: defined symbols get `⊥` in every extended argument.
pub fn bar_with(ext: &ExtendedSignature, t: &Term) -> Term {
    extend(ext, t, &mut |e| e.bot())
}

fn extend(
    ext: &ExtendedSignature,
    t: &Term,
    filler: &mut impl FnMut(&ExtendedSignature) -> Term,
) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => {
            let mut new: Vec<Term> = args.iter().map(|a| extend(ext, a, filler)).collect();
            match ext.barred.get(f.name()) {
                Some(b) => {
                    new.extend((0..b.m()).map(|_| filler(ext)));
                    Term::apply(b.target.clone(), new)
                }
                None => Term::apply(f.clone(), new),
            }
        }
    }
}

/// `⌊t⌋`: every extended argument becomes `⊥`; an evaluation tuple at the
/// root becomes `⊥`. Rejects terms that are not well-placed below the root.
pub fn reset_with(
    ext: &ExtendedSignature,
    target: &RewriteSystem,
    t: &Term,
) -> Result<Term, PlacementError> {
    if let Term::App(s, args) = t {
        if ext.is_bottom(s) || ext.eval.contains_key(s.name()) {
            for a in args.iter() {
                crate::phi::check_placement(ext, target.signature(), a)?;
            }
            return Ok(ext.bot());
        }
    }
    crate::phi::check_placement(ext, target.signature(), t)?;
    Ok(reset_placed(ext, t))
}

fn reset_placed(ext: &ExtendedSignature, t: &Term) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(s, args) => match ext.barred_of_target(s.name()) {
            Some(b) => {
                let mut new: Vec<Term> = args[..b.n()].iter().map(|a| reset_placed(ext, a)).collect();
                new.extend((0..b.m()).map(|_| ext.bot()));
                Term::apply(s.clone(), new)
            }
            None => Term::apply(
                s.clone(),
                args.iter().map(|a| reset_placed(ext, a)).collect(),
            ),
        },
    }
}

/// Partial inverse of bar: drops guards and extended arguments. Undefined
/// on `⊥`, evaluation tuples and symbols outside the extended signature.
pub fn hat_with(ext: &ExtendedSignature, t: &Term) -> Option<Term> {
    match t {
        Term::Var(_) => Some(t.clone()),
        Term::App(s, args) => {
            if ext.is_guard(s) {
                hat_with(ext, &args[0])
            } else if let Some(b) = ext.barred_of_target(s.name()) {
                let new = args[..b.n()]
                    .iter()
                    .map(|a| hat_with(ext, a))
                    .collect::<Option<Vec<_>>>()?;
                Some(Term::apply(b.source.clone(), new))
            } else if ext.constructors.contains(s) {
                let new = args
                    .iter()
                    .map(|a| hat_with(ext, a))
                    .collect::<Option<Vec<_>>>()?;
                Some(Term::apply(s.clone(), new))
            } else {
                None
            }
        }
    }
}

/// `U-P` for a rule property `P`: every rule of `U(R)` satisfies `P`.
pub fn ultra_check(system: &RewriteSystem, property: RuleProperty) -> Result<bool, TransformError> {
    let u = unravel_unchecked(system)?;
    let holds: fn(&Rule) -> bool = match property {
        RuleProperty::Ll => is_left_linear,
        RuleProperty::Rl => is_right_linear,
        RuleProperty::Wll => is_wll,
        RuleProperty::Ne => is_non_erasing,
    };
    Ok(u.target.rules().iter().all(holds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_system, is_ultra_wll, is_wll_system};
    use crate::testing::{system, term, R1, R4, UWLL_NOT_WLL, WLL_NOT_UWLL};
    use alloc::vec;

    fn same_rules(actual: &RewriteSystem, expected: &RewriteSystem) {
        let mut a: Vec<Vec<Term>> = actual.rules().iter().map(Rule::canonical).collect();
        let mut e: Vec<Vec<Term>> = expected.rules().iter().map(Rule::canonical).collect();
        a.sort();
        e.sort();
        assert_eq!(a, e);
    }

    #[test]
    fn unravel_quicksort() {
        let u = unravel(&system(R1)).unwrap();
        let expected = system(
            "
            split(x, nil) -> pair(nil, nil)
            split(x, cons(y, ys)) -> u1(split(x, ys), x, y, ys)
            u1(pair(xs, zs), x, y, ys) -> u2(leq(x, y), x, y, ys, xs, zs)
            u2(true, x, y, ys, xs, zs) -> pair(xs, cons(y, zs))
            split(x, cons(y, ys)) -> u3(split(x, ys), x, y, ys)
            u3(pair(xs, zs), x, y, ys) -> u4(leq(x, y), x, y, ys, xs, zs)
            u4(false, x, y, ys, xs, zs) -> pair(cons(y, xs), zs)
            qsort(nil) -> nil
            qsort(cons(x, xs)) -> u5(split(x, xs), x, xs)
            u5(pair(ys, zs), x, xs) -> append(qsort(ys), cons(x, qsort(zs)))
            leq(0, y) -> true
            leq(s(x), 0) -> false
            leq(s(x), s(y)) -> leq(x, y)
            append(nil, ys) -> ys
            append(cons(x, xs), ys) -> cons(x, append(xs, ys))
            ",
        );
        same_rules(&u.target, &expected);
        assert!(u.target.is_trs());
        assert_eq!(u.target.signature().role("u3"), Some(Role::USymbol));
        let m = u.cond("r2", 2).unwrap();
        assert_eq!(m.x.len(), 5);
        assert_eq!(m.v.len(), 2);
    }

    #[test]
    fn unravel_r4() {
        let u = unravel(&system(R4)).unwrap();
        let r: Vec<String> = u.target.rules()[..2].iter().map(|r| r.to_string()).collect();
        assert_eq!(r, vec!["f(x) -> u1(x, x)", "u1(c, x) -> c"]);
    }

    #[test]
    fn unravel_rejects_nondeterministic() {
        let s = system("f(x) -> x | g(y) == x");
        assert_eq!(
            unravel(&s).unwrap_err(),
            TransformError::NotDeterministic {
                rule: "r1".into(),
                condition: 1
            }
        );
    }

    #[test]
    fn u_names_avoid_source() {
        let s = system("u1(x) -> x | x == c");
        let u = unravel(&s).unwrap();
        assert!(u.target.signature().role("u2") == Some(Role::USymbol));
    }

    #[test]
    fn linearize_example() {
        let t = linearize(&system(WLL_NOT_UWLL)).unwrap();
        assert_eq!(
            t.target.rules()[0].to_string(),
            "f(x) -> x | a == y1, b == y2, x == c, tuple2(y1, y2) == tuple2(y, y)"
        );
        assert!(is_wll_system(&t.target));
        assert!(is_ultra_wll(&t.target));
        assert_eq!(t.target.signature().role("tuple2"), Some(Role::TupleLin));
    }

    #[test]
    fn linearize_identity_on_quicksort() {
        let r1 = system(R1);
        assert_eq!(linearize(&r1).unwrap().target, r1);
    }

    #[test]
    fn linearize_rejects_non_wll() {
        let err = linearize(&system("f(x) -> x | g(x) == x")).unwrap_err();
        assert!(matches!(err, TransformError::NotWll { .. }));
    }

    #[test]
    fn sr_quicksort_shapes() {
        let sr = sr_transform(&system(R1)).unwrap();
        let rules: Vec<String> = sr.target.rules()[..4].iter().map(|r| r.to_string()).collect();
        assert_eq!(
            rules,
            vec![
                "split^(x, nil, z1, z2) -> sq(pair(nil, nil))",
                "split^(x, cons(y, ys), bot, z2) -> split^(x, cons(y, ys), sq1(sq(split^(x, ys, bot, bot))), z2)",
                "split^(x, cons(y, ys), sq1(sq(pair(xs, zs))), z2) -> split^(x, cons(y, ys), sq2(sq(leq(x, y)), xs, zs), z2)",
                "split^(x, cons(y, ys), sq2(sq(true), xs, zs), z2) -> sq(pair(xs, cons(y, zs)))",
            ]
        );
        assert_eq!(sr.target.signature().get("sq5").unwrap().arity, 1);
        assert_eq!(sr.target.signature().get("qsort^").unwrap().arity, 2);
        assert!(!classify_system(&sr.target).constructor_system);
        // flatten, s, cons, pair, split, qsort, leq, append
        let aux = 1 + 1 + 2 + 2 + 2 + 1 + 2 + 2;
        assert_eq!(sr.target.rules().len(), 15 + aux);
        assert_eq!(sr.rule_correspondence().len(), 15);
    }

    #[test]
    fn sr_rejects_non_ultra_wll() {
        let err = sr_transform(&system(WLL_NOT_UWLL)).unwrap_err();
        assert!(matches!(err, TransformError::NotUltraWll { .. }));
    }

    #[test]
    fn ext_bar_hat() {
        let sr = sr_transform(&system(R4)).unwrap();
        assert_eq!(sr.ext(&term("f(x)")), term("f^(x, z1, z2)"));
        assert_eq!(sr.ext(&term("c")), term("c"));
        assert_eq!(sr.ext(&term("x")), term("x"));
        let s = term("h(f(a), f(f(b)))");
        let b = sr.bar(&s);
        assert_eq!(b, term("h(f^(a, bot, bot), f^(f^(b, bot, bot), bot, bot))"));
        assert_eq!(sr.hat(&b), Some(s));
        assert_eq!(sr.hat(&term("sq(sq(d))")), Some(term("d")));
        assert_eq!(sr.hat(&term("bot")), None);
        assert_eq!(sr.hat(&term("f^(a, sq1(sq(c)), bot)")), Some(term("f(a)")));
    }

    #[test]
    fn reset_examples() {
        let sr = sr_transform(&system(R4)).unwrap();
        assert_eq!(
            sr.reset(&term("f^(a, sq1(sq(c)), bot)")),
            Ok(term("f^(a, bot, bot)"))
        );
        assert_eq!(sr.reset(&term("sq(d)")), Ok(term("sq(d)")));
        assert_eq!(sr.reset(&term("x")), Ok(term("x")));
        assert_eq!(sr.reset(&term("sq1(sq(c))")), Ok(term("bot")));
        assert!(sr.reset(&term("g(bot)")).is_err());
    }

    #[test]
    fn iff_on_examples() {
        for src in [R1, R4, WLL_NOT_UWLL, UWLL_NOT_WLL, "f(x, x) -> x", ""] {
            let s = system(src);
            let sr = sr_unchecked(&s).unwrap();
            assert_eq!(is_ultra_wll(&s), is_wll_system(&sr.target), "{src}");
        }
    }

    #[test]
    fn ultra_properties() {
        assert!(ultra_check(&system(R1), RuleProperty::Ll).unwrap());
        assert!(!ultra_check(&system(WLL_NOT_UWLL), RuleProperty::Wll).unwrap());
        assert!(ultra_check(&RewriteSystem::empty(), RuleProperty::Rl).unwrap());
    }
}
