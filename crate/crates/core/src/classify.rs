//! Syntactic rule classification and the ultra-WLL characterization.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::UltraWllClause;
use crate::system::{RewriteSystem, Rule};
use crate::term::{count_var_occurrences, is_linear, vars_of, Symbol, Term, Var};

/// Variable-distribution type of a conditional rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleType {
    One = 1,
    Two = 2,
    Three = 3,
    Four = 4,
}

impl RuleType {
    pub fn number(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleReport {
    pub ll: bool,
    pub rl: bool,
    pub ne: bool,
    pub ground_conditional: bool,
    pub wll: bool,
    pub deterministic: bool,
    /// Every condition target is a constructor term or a ground `R_u`-normal
    /// form. Strong determinism is not decided.
    pub syntactically_deterministic_rhs: bool,
    pub rule_type: RuleType,
}

impl RuleReport {
    pub const NOTE: &'static str =
        "strong determinism is undecidable in general; only syntactic determinism is reported";
}

pub fn is_left_linear(rule: &Rule) -> bool {
    is_linear(core::slice::from_ref(&rule.lhs))
}

pub fn is_right_linear(rule: &Rule) -> bool {
    is_linear(core::slice::from_ref(&rule.rhs))
}

pub fn is_non_erasing(rule: &Rule) -> bool {
    rule.lhs.var_set().is_subset(&rule.rhs.var_set())
}

pub fn is_ground_conditional(rule: &Rule) -> bool {
    rule.conditions
        .iter()
        .all(|c| c.source.is_ground() && c.target.is_ground())
}

/// Every `x ∈ Var(r, s1, ..., sk)` occurs exactly once in `l, t1, ..., tk`.
pub fn is_wll(rule: &Rule) -> bool {
    wll_violation(rule).is_none()
}

/// The first variable breaking weak left-linearity, if any.
pub fn wll_violation(rule: &Rule) -> Option<Var> {
    let pattern = rule.lhs_and_targets(rule.conditions.len());
    let mut checked = Vec::with_capacity(1 + rule.conditions.len());
    checked.push(rule.rhs.clone());
    checked.extend(rule.conditions.iter().map(|c| c.source.clone()));
    vars_of(&checked)
        .into_iter()
        .find(|x| count_var_occurrences(&pattern, x) != 1)
}

/// `Var(s_i) ⊆ Var(l, t1, ..., t(i-1))` for all `i`; returns the first
/// offending 1-based condition index.
pub fn determinism_violation(rule: &Rule) -> Option<usize> {
    rule.conditions.iter().enumerate().find_map(|(i, c)| {
        let bound: BTreeSet<Var> = vars_of(&rule.lhs_and_targets(i)).into_iter().collect();
        (!c.source.var_set().is_subset(&bound)).then_some(i + 1)
    })
}

pub fn is_deterministic(rule: &Rule) -> bool {
    determinism_violation(rule).is_none()
}

pub fn rule_type(rule: &Rule) -> RuleType {
    let lhs = rule.lhs.var_set();
    let rhs = rule.rhs.var_set();
    let all: BTreeSet<Var> = vars_of(&rule.all_terms()).into_iter().collect();
    if all.is_subset(&lhs) {
        RuleType::One
    } else if rhs.is_subset(&lhs) {
        RuleType::Two
    } else {
        let mut ext = lhs;
        for c in &rule.conditions {
            ext.extend(c.source.vars());
            ext.extend(c.target.vars());
        }
        if rhs.is_subset(&ext) {
            RuleType::Three
        } else {
            RuleType::Four
        }
    }
}

/// `t` is a ground term irreducible w.r.t. `R_u`. Decided by matching every
/// left-hand side against every subterm.
pub fn is_ground_normal_form(t: &Term, system: &RewriteSystem) -> bool {
    t.is_ground() && !system.is_reducible_unconditionally(t)
}

pub fn classify_rule(rule: &Rule, system: &RewriteSystem) -> RuleReport {
    RuleReport {
        ll: is_left_linear(rule),
        rl: is_right_linear(rule),
        ne: is_non_erasing(rule),
        ground_conditional: is_ground_conditional(rule),
        wll: is_wll(rule),
        deterministic: is_deterministic(rule),
        syntactically_deterministic_rhs: rule.conditions.iter().all(|c| {
            system.is_constructor_term(&c.target) || is_ground_normal_form(&c.target, system)
        }),
        rule_type: rule_type(rule),
    }
}

/// Aggregate properties of a system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemReport {
    pub rules: Vec<RuleReport>,
    pub trs: bool,
    pub ll: bool,
    pub rl: bool,
    pub ne: bool,
    pub wll: bool,
    pub ground_conditional: bool,
    pub dctrs: bool,
    /// All rules are of type 3 or lower.
    pub type3: bool,
    pub max_type: RuleType,
    pub syntactically_deterministic: bool,
    /// Deterministic and every condition target is a ground `R_u`-normal form.
    pub normal: bool,
    pub constructor_system: bool,
    pub ultra_wll: bool,
    pub defined: BTreeSet<Symbol>,
    pub constructors: BTreeSet<Symbol>,
}

pub fn classify_system(system: &RewriteSystem) -> SystemReport {
    let rules: Vec<RuleReport> = system
        .rules()
        .iter()
        .map(|r| classify_rule(r, system))
        .collect();
    let all = |f: fn(&RuleReport) -> bool| rules.iter().all(f);
    let dctrs = all(|r| r.deterministic);
    let normal = dctrs
        && system.rules().iter().all(|r| {
            r.conditions
                .iter()
                .all(|c| is_ground_normal_form(&c.target, system))
        });
    let defined = system.defined_symbols();
    let constructor_system = system.rules().iter().all(|r| {
        r.lhs
            .args()
            .iter()
            .all(|a| a.symbols().iter().all(|s| !defined.contains(s)))
    });
    SystemReport {
        trs: system.is_trs(),
        ll: all(|r| r.ll),
        rl: all(|r| r.rl),
        ne: all(|r| r.ne),
        wll: all(|r| r.wll),
        ground_conditional: all(|r| r.ground_conditional),
        dctrs,
        type3: all(|r| r.rule_type <= RuleType::Three),
        max_type: rules
            .iter()
            .map(|r| r.rule_type)
            .max()
            .unwrap_or(RuleType::One),
        syntactically_deterministic: all(|r| r.syntactically_deterministic_rhs),
        normal,
        constructor_system,
        ultra_wll: is_ultra_wll(system),
        constructors: system.constructors(),
        defined,
        rules,
    }
}

pub fn is_wll_system(system: &RewriteSystem) -> bool {
    system.rules().iter().all(is_wll)
}

/// The clause of the ultra-WLL characterization that `rule` violates.
pub fn ultra_wll_violation(rule: &Rule) -> Option<UltraWllClause> {
    let k = rule.conditions.len();
    if k == 0 {
        return (!is_wll(rule)).then_some(UltraWllClause::Unconditional);
    }
    if !is_linear(&rule.lhs_and_targets(k - 1)) {
        return Some(UltraWllClause::LinearPrefix);
    }
    let pattern = rule.lhs_and_targets(k);
    if rule
        .rhs
        .vars()
        .iter()
        .any(|x| count_var_occurrences(&pattern, x) > 1)
    {
        return Some(UltraWllClause::RhsOccurrences);
    }
    None
}

/// Syntactic characterization of "the unraveled system is WLL".
pub fn is_ultra_wll(system: &RewriteSystem) -> bool {
    system
        .rules()
        .iter()
        .all(|r| ultra_wll_violation(r).is_none())
}

/// Rule properties that can be lifted to ultra-properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleProperty {
    Ll,
    Rl,
    Wll,
    Ne,
}

impl RuleProperty {
    pub fn holds(self, rule: &Rule) -> bool {
        match self {
            RuleProperty::Ll => is_left_linear(rule),
            RuleProperty::Rl => is_right_linear(rule),
            RuleProperty::Wll => is_wll(rule),
            RuleProperty::Ne => is_non_erasing(rule),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{rule, system, R1, R4, UWLL_NOT_WLL, WLL_NOT_UWLL};

    #[test]
    fn ll_but_not_wll() {
        let s = system("f(x) -> x | g(x) == x");
        let rep = classify_rule(&s.rules()[0], &s);
        assert!(rep.ll);
        assert!(!rep.wll);
    }

    #[test]
    fn split_rule_of_quicksort() {
        let r1 = system(R1);
        let rep = classify_rule(&r1.rules()[1], &r1);
        assert!(rep.deterministic);
        assert!(rep.wll);
        assert_eq!(rep.rule_type, RuleType::Three);
        assert!(rep.syntactically_deterministic_rhs);
    }

    #[test]
    fn ground_rule() {
        let s = system("a -> c");
        let rep = classify_rule(&s.rules()[0], &s);
        assert!(rep.ll && rep.rl);
        // Var(l) = ∅
        assert!(rep.ne);
        assert_eq!(rep.rule_type, RuleType::One);
    }

    #[test]
    fn erasing_rule() {
        let s = system("f(x) -> c");
        assert!(!classify_rule(&s.rules()[0], &s).ne);
    }

    #[test]
    fn quicksort_system_report() {
        let rep = classify_system(&system(R1));
        assert!(rep.dctrs);
        assert!(rep.type3);
        assert_eq!(rep.max_type, RuleType::Three);
        assert!(rep.wll);
        assert!(!rep.normal);
        assert!(rep.constructor_system);
        assert!(rep.ultra_wll);
    }

    #[test]
    fn r4_is_normal_wll() {
        let rep = classify_system(&system(R4));
        assert!(rep.normal);
        assert!(rep.wll);
        assert!(rep.ultra_wll);
        assert!(!rep.constructor_system); // h(x, f(x))
    }

    #[test]
    fn empty_system_vacuous() {
        let rep = classify_system(&RewriteSystem::empty());
        assert!(rep.trs && rep.ll && rep.rl && rep.ne && rep.wll && rep.dctrs);
        assert!(rep.normal && rep.constructor_system && rep.ultra_wll);
    }

    #[test]
    fn ultra_wll_counterexamples() {
        let s = system(WLL_NOT_UWLL);
        assert!(is_wll_system(&s));
        assert!(!is_ultra_wll(&s));
        assert_eq!(
            ultra_wll_violation(&s.rules()[0]),
            Some(UltraWllClause::LinearPrefix)
        );
        let s = system(UWLL_NOT_WLL);
        assert!(!is_wll_system(&s));
        assert!(is_ultra_wll(&s));
    }

    #[test]
    fn clause_b() {
        let r = rule("r", "f(x) -> y | a == y, b == y");
        assert_eq!(ultra_wll_violation(&r), Some(UltraWllClause::RhsOccurrences));
    }

    #[test]
    fn types() {
        assert_eq!(rule_type(&rule("r", "f(x) -> x | g(x) == c")), RuleType::One);
        assert_eq!(rule_type(&rule("r", "f(x) -> x | g(x) == y")), RuleType::Two);
        assert_eq!(rule_type(&rule("r", "f(x) -> y | g(x) == y")), RuleType::Three);
        assert_eq!(rule_type(&rule("r", "f(x) -> y | g(x) == c")), RuleType::Four);
    }

    #[test]
    fn determinism() {
        assert_eq!(determinism_violation(&rule("r", "f(x) -> x | g(y) == x")), Some(1));
        assert_eq!(
            determinism_violation(&rule("r", "f(x) -> z | g(x) == y, h(y) == z")),
            None
        );
    }
}
