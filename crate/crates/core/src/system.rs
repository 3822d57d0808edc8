//! Conditional rewrite rules, signatures and rewrite systems.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::SystemError;
use crate::term::{vars_of, Symbol, Term, Var};

/// The role a symbol plays in a system. Fixed once per system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Constructor,
    Defined,
    /// `U^ρ_i` introduced by unraveling.
    USymbol,
    /// `f̄`, a defined symbol with extended arguments.
    BarredDefined,
    /// The guard `⟨·⟩`.
    Guard,
    /// The reset constant `⊥`.
    Bottom,
    /// `[ ]^ρ_j`, the condition-evaluation tuples of the SR transformation.
    TupleEval,
    /// `tuple_j`, the constructors appended by linearization.
    TupleLin,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Constructor => "constructor",
            Role::Defined => "defined",
            Role::USymbol => "u-symbol",
            Role::BarredDefined => "barred-defined",
            Role::Guard => "guard",
            Role::Bottom => "bottom",
            Role::TupleEval => "tuple-eval",
            Role::TupleLin => "tuple-lin",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolInfo {
    pub arity: usize,
    pub role: Role,
}

/// Symbols with arities and roles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    entries: BTreeMap<Arc<str>, SymbolInfo>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a symbol; re-adding with the same arity updates the role.
    pub fn declare(&mut self, name: &str, arity: usize, role: Role) -> Result<Symbol, SystemError> {
        if let Some(info) = self.entries.get_mut(name) {
            if info.arity != arity {
                return Err(SystemError::ArityConflict {
                    symbol: name.to_string(),
                    expected: info.arity,
                    found: arity,
                });
            }
            info.role = role;
        } else {
            self.entries
                .insert(Arc::from(name), SymbolInfo { arity, role });
        }
        Ok(Symbol::new(name, arity))
    }

    pub fn get(&self, name: &str) -> Option<&SymbolInfo> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn role(&self, name: &str) -> Option<Role> {
        self.entries.get(name).map(|i| i.role)
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.entries.get(name).map(|i| Symbol::new(name, i.arity))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, Role)> + '_ {
        self.entries
            .iter()
            .map(|(n, i)| (Symbol::new(n, i.arity), i.role))
    }

    pub fn symbols_with_role(&self, role: Role) -> Vec<Symbol> {
        self.iter()
            .filter(|(_, r)| *r == role)
            .map(|(s, _)| s)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks that every symbol of `t` is declared with the same arity.
    pub fn check_term(&self, t: &Term) -> Result<(), SystemError> {
        for s in t.symbols() {
            match self.entries.get(s.name()) {
                None => {
                    return Err(SystemError::UnknownSymbol {
                        symbol: s.name().to_string(),
                    })
                }
                Some(info) if info.arity != s.arity() => {
                    return Err(SystemError::ArityConflict {
                        symbol: s.name().to_string(),
                        expected: info.arity,
                        found: s.arity(),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// True iff every symbol of `t` is in this signature with matching arity.
    pub fn covers(&self, t: &Term) -> bool {
        self.check_term(t).is_ok()
    }
}

/// An oriented condition `source ↠ target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    pub source: Term,
    pub target: Term,
}

impl Condition {
    pub fn new(source: Term, target: Term) -> Self {
        Condition { source, target }
    }
}

/// `label: lhs → rhs ⇐ s1 ↠ t1, ..., sk ↠ tk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    label: Arc<str>,
    pub lhs: Term,
    pub rhs: Term,
    pub conditions: Vec<Condition>,
}

impl Rule {
    pub fn new(
        label: &str,
        lhs: Term,
        rhs: Term,
        conditions: Vec<Condition>,
    ) -> Result<Rule, SystemError> {
        if lhs.is_var() {
            return Err(SystemError::VariableLhs {
                label: label.to_string(),
            });
        }
        Ok(Rule {
            label: Arc::from(label),
            lhs,
            rhs,
            conditions,
        })
    }

    pub fn unconditional(label: &str, lhs: Term, rhs: Term) -> Result<Rule, SystemError> {
        Rule::new(label, lhs, rhs, Vec::new())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn label_arc(&self) -> Arc<str> {
        self.label.clone()
    }

    pub fn is_conditional(&self) -> bool {
        !self.conditions.is_empty()
    }

    pub fn root(&self) -> &Symbol {
        self.lhs.root().expect("rule lhs is never a variable")
    }

    /// `t1, ..., t(j)` for `j` conditions (0-based exclusive bound).
    pub fn targets_before(&self, j: usize) -> Vec<Term> {
        self.conditions[..j].iter().map(|c| c.target.clone()).collect()
    }

    /// `l, t1, ..., t(j)` (the first `j` condition targets).
    pub fn lhs_and_targets(&self, j: usize) -> Vec<Term> {
        let mut seq = Vec::with_capacity(j + 1);
        seq.push(self.lhs.clone());
        seq.extend(self.targets_before(j));
        seq
    }

    /// All terms of the rule: `l, r, s1, t1, ..., sk, tk`.
    pub fn all_terms(&self) -> Vec<Term> {
        let mut seq = Vec::with_capacity(2 + 2 * self.conditions.len());
        seq.push(self.lhs.clone());
        seq.push(self.rhs.clone());
        for c in &self.conditions {
            seq.push(c.source.clone());
            seq.push(c.target.clone());
        }
        seq
    }

    pub fn vars(&self) -> Vec<Var> {
        vars_of(&self.all_terms())
    }

    /// Same rule under a new label.
    pub fn relabel(&self, label: &str) -> Rule {
        Rule {
            label: Arc::from(label),
            ..self.clone()
        }
    }

    /// True iff both rules are equal up to a bijective renaming of variables
    /// (labels are ignored).
    pub fn is_variant_of(&self, other: &Rule) -> bool {
        self.canonical() == other.canonical()
    }

    /// The rule's terms with variables renamed to `x1, x2, ...` in
    /// first-occurrence order of `l, r, s1, t1, ...`.
    pub fn canonical(&self) -> Vec<Term> {
        let terms = self.all_terms();
        let map = crate::term::canonical_renaming(&terms);
        terms.iter().map(|t| t.rename(&map)).collect()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)?;
        for (i, c) in self.conditions.iter().enumerate() {
            f.write_str(if i == 0 { " | " } else { ", " })?;
            write!(f, "{} == {}", c.source, c.target)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemKind {
    Ctrs,
    Trs,
}

/// A signature together with an ordered list of rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    signature: Signature,
    rules: Vec<Rule>,
    kind: SystemKind,
}

impl RewriteSystem {
    /// Infers the signature from the rules: roots of left-hand sides are
    /// defined symbols, every other symbol is a constructor.
    pub fn new(rules: Vec<Rule>) -> Result<Self, SystemError> {
        Self::with_extra_symbols(rules, core::iter::empty())
    }

    /// Like [`new`](Self::new), additionally declaring `extra` symbols that
    /// may not occur in any rule (they become constructors unless defined).
    pub fn with_extra_symbols(
        rules: Vec<Rule>,
        extra: impl IntoIterator<Item = Symbol>,
    ) -> Result<Self, SystemError> {
        let mut signature = Signature::new();
        let defined: BTreeSet<Symbol> = rules.iter().map(|r| r.root().clone()).collect();
        let mut all: Vec<Symbol> = Vec::new();
        for r in &rules {
            for t in r.all_terms() {
                all.extend(t.symbols());
            }
        }
        all.extend(extra);
        for s in all {
            let role = if defined.contains(&s) {
                Role::Defined
            } else {
                Role::Constructor
            };
            if let Some(info) = signature.get(s.name()) {
                if info.arity != s.arity() {
                    return Err(SystemError::ArityConflict {
                        symbol: s.name().to_string(),
                        expected: info.arity,
                        found: s.arity(),
                    });
                }
                continue;
            }
            signature.declare(s.name(), s.arity(), role)?;
        }
        Self::with_signature(signature, rules)
    }

    /// Uses an explicit signature; every rule symbol must be declared in it.
    pub fn with_signature(signature: Signature, rules: Vec<Rule>) -> Result<Self, SystemError> {
        let mut labels = BTreeSet::new();
        for r in &rules {
            if !labels.insert(r.label_arc()) {
                return Err(SystemError::DuplicateLabel(r.label().to_string()));
            }
            for t in r.all_terms() {
                signature.check_term(&t)?;
            }
        }
        let kind = if rules.iter().all(|r| {
            !r.is_conditional() && r.rhs.var_set().is_subset(&r.lhs.var_set())
        }) {
            SystemKind::Trs
        } else {
            SystemKind::Ctrs
        };
        Ok(RewriteSystem {
            signature,
            rules,
            kind,
        })
    }

    pub fn empty() -> Self {
        RewriteSystem {
            signature: Signature::new(),
            rules: Vec::new(),
            kind: SystemKind::Trs,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, label: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.label() == label)
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn is_trs(&self) -> bool {
        self.kind == SystemKind::Trs
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// `D_R`: root symbols of left-hand sides.
    pub fn defined_symbols(&self) -> BTreeSet<Symbol> {
        self.rules.iter().map(|r| r.root().clone()).collect()
    }

    /// `C_R = F \ D_R`.
    pub fn constructors(&self) -> BTreeSet<Symbol> {
        let defined = self.defined_symbols();
        self.signature
            .iter()
            .map(|(s, _)| s)
            .filter(|s| !defined.contains(s))
            .collect()
    }

    pub fn is_defined(&self, name: &str) -> bool {
        self.rules.iter().any(|r| r.root().name() == name)
    }

    /// True iff `t` contains no defined symbol of this system.
    pub fn is_constructor_term(&self, t: &Term) -> bool {
        let defined = self.defined_symbols();
        t.symbols().iter().all(|s| !defined.contains(s))
    }

    /// Indices of the conditional rules for `f`, in rank order.
    pub fn conditional_rules_of(&self, name: &str) -> Vec<usize> {
        self.rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_conditional() && r.root().name() == name)
            .map(|(i, _)| i)
            .collect()
    }

    /// Number of conditional rules of `f` (the `m` of the SR transformation).
    pub fn conditional_count(&self, name: &str) -> usize {
        self.conditional_rules_of(name).len()
    }

    /// 0-based rank of a conditional rule among the conditional rules of its
    /// root symbol (textual order of appearance).
    pub fn conditional_rank(&self, rule_index: usize) -> Option<usize> {
        let rule = self.rules.get(rule_index)?;
        if !rule.is_conditional() {
            return None;
        }
        self.conditional_rules_of(rule.root().name())
            .iter()
            .position(|&i| i == rule_index)
    }

    /// `R_u`: the underlying unconditional system.
    pub fn underlying_unconditional(&self) -> Vec<Rule> {
        self.rules
            .iter()
            .map(|r| Rule {
                conditions: Vec::new(),
                ..r.clone()
            })
            .collect()
    }

    /// True iff some rule of `R_u` has a left-hand side matching a subterm
    /// of `t`.
    pub fn is_reducible_unconditionally(&self, t: &Term) -> bool {
        let mut reducible = false;
        t.visit(&mut |s| {
            if !reducible && !s.is_var() {
                reducible = self
                    .rules
                    .iter()
                    .any(|r| crate::term::match_term(&r.lhs, s).is_some());
            }
        });
        reducible
    }

    /// Variable names and symbol names used anywhere in the system.
    pub fn used_names(&self) -> BTreeSet<String> {
        let mut names: BTreeSet<String> = self
            .signature
            .iter()
            .map(|(s, _)| s.name().to_string())
            .collect();
        for r in &self.rules {
            for v in r.vars() {
                names.insert(v.name().to_string());
            }
        }
        names
    }
}

impl fmt::Display for RewriteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{}: {}", r.label(), r)?;
        }
        Ok(())
    }
}
