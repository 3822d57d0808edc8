//! Bounded rewriting: one-step and breadth-first reachability for TRSs, and
//! level-indexed conditional rewriting for deterministic CTRSs.
//!
//! All searches are bounded by [`EngineCaps`]. When a cap fires the result
//! is flagged as truncated; a truncated search never claims
//! non-reachability.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::rc::Rc;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::classify::{determinism_violation, rule_type, RuleType};
use crate::error::EngineError;
use crate::system::{RewriteSystem, Rule};
use crate::term::{match_into, match_term, Position, Substitution, Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineCaps {
    /// Maximum derivation length explored from the root (BFS depth).
    pub max_steps: usize,
    /// Maximum number of distinct terms in one search.
    pub max_nodes: usize,
    /// Maximum level of conditional rewriting.
    pub max_level: usize,
    /// Terms larger than this are not explored.
    pub max_term_size: usize,
}

impl Default for EngineCaps {
    fn default() -> Self {
        EngineCaps {
            max_steps: 32,
            max_nodes: 20_000,
            max_level: 4,
            max_term_size: 200,
        }
    }
}

impl EngineCaps {
    pub fn with_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn with_nodes(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn with_level(mut self, max_level: usize) -> Self {
        self.max_level = max_level;
        self
    }

    pub fn with_term_size(mut self, max_term_size: usize) -> Self {
        self.max_term_size = max_term_size;
        self
    }

    /// Caps for condition searches one level below: same depth, half the
    /// node budget.
    fn for_conditions(self) -> Self {
        EngineCaps {
            max_nodes: (self.max_nodes / 2).max(16),
            ..self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    /// Every successor of every explored term was recorded.
    Complete,
    /// Some cap fired; the graph is an under-approximation.
    Truncated,
}

/// A single rewrite step `t →_{p, rule} u`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Step {
    pub position: Position,
    pub rule: Arc<str>,
    pub term: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub position: Position,
    pub rule: Arc<str>,
}

/// Bounded reachability graph rooted at one term.
#[derive(Clone, Debug)]
pub struct DerivationGraph {
    nodes: Vec<Term>,
    index: BTreeMap<Term, usize>,
    depth: Vec<usize>,
    /// The edge through which each node was first discovered.
    parent: Vec<Option<usize>>,
    /// Per node: whether all of its successors were recorded.
    expanded: Vec<bool>,
    out_degree: Vec<usize>,
    edges: Vec<Edge>,
    status: SearchStatus,
}

impl DerivationGraph {
    fn new(root: Term) -> Self {
        let mut index = BTreeMap::new();
        index.insert(root.clone(), 0);
        DerivationGraph {
            nodes: alloc::vec![root],
            index,
            depth: alloc::vec![0],
            parent: alloc::vec![None],
            expanded: alloc::vec![false],
            out_degree: alloc::vec![0],
            edges: Vec::new(),
            status: SearchStatus::Complete,
        }
    }

    pub fn root(&self) -> &Term {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[Term] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn status(&self) -> SearchStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == SearchStatus::Complete
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.index.contains_key(t)
    }

    pub fn node_id(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn node(&self, id: usize) -> &Term {
        &self.nodes[id]
    }

    pub fn depth_of(&self, id: usize) -> usize {
        self.depth[id]
    }

    /// True iff the node was expanded and has no outgoing edge.
    pub fn is_normal_form(&self, id: usize) -> bool {
        self.expanded[id] && self.out_degree[id] == 0
    }

    pub fn successors(&self, id: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == id)
    }

    /// Shortest derivation from the root to `t`, as edges.
    pub fn path_to(&self, t: &Term) -> Option<Vec<&Edge>> {
        let mut id = self.node_id(t)?;
        let mut path = Vec::new();
        while let Some(e) = self.parent[id] {
            let edge = &self.edges[e];
            path.push(edge);
            id = edge.from;
        }
        path.reverse();
        Some(path)
    }

    fn add_node(&mut self, t: Term, depth: usize) -> (usize, bool) {
        if let Some(&id) = self.index.get(&t) {
            return (id, false);
        }
        let id = self.nodes.len();
        self.index.insert(t.clone(), id);
        self.nodes.push(t);
        self.depth.push(depth);
        self.parent.push(None);
        self.expanded.push(false);
        self.out_degree.push(0);
        (id, true)
    }
}

/// Breadth-first closure under `successors`, stopping early once `goal`
/// holds for a discovered term. The successor function reports whether its
/// own result was truncated.
pub fn explore<F, G>(root: Term, caps: EngineCaps, mut successors: F, goal: G) -> DerivationGraph
where
    F: FnMut(&Term) -> (Vec<Step>, bool),
    G: Fn(&Term) -> bool,
{
    let mut graph = DerivationGraph::new(root);
    if goal(graph.root()) {
        return graph;
    }
    let mut queue = VecDeque::from([0usize]);
    'bfs: while let Some(id) = queue.pop_front() {
        let depth = graph.depth[id];
        let term = graph.nodes[id].clone();
        let (steps, truncated) = successors(&term);
        if truncated {
            graph.status = SearchStatus::Truncated;
        }
        if steps.is_empty() {
            graph.expanded[id] = !truncated;
            continue;
        }
        if depth >= caps.max_steps {
            graph.status = SearchStatus::Truncated;
            continue;
        }
        graph.expanded[id] = !truncated;
        for step in steps {
            if step.term.size() > caps.max_term_size {
                graph.status = SearchStatus::Truncated;
                graph.expanded[id] = false;
                continue;
            }
            if !graph.contains(&step.term) && graph.len() >= caps.max_nodes {
                graph.status = SearchStatus::Truncated;
                graph.expanded[id] = false;
                continue;
            }
            let found = goal(&step.term);
            let (to, fresh) = graph.add_node(step.term, depth + 1);
            let edge = graph.edges.len();
            graph.out_degree[id] += 1;
            graph.edges.push(Edge {
                from: id,
                to,
                position: step.position,
                rule: step.rule,
            });
            if fresh {
                graph.parent[to] = Some(edge);
                queue.push_back(to);
            }
            if found {
                // Stopped early; whatever is left in the queue is unexplored.
                if !queue.is_empty() {
                    graph.status = SearchStatus::Truncated;
                }
                break 'bfs;
            }
        }
    }
    graph
}

fn ensure_trs(system: &RewriteSystem) -> Result<(), EngineError> {
    match system.rules().iter().find(|r| {
        r.is_conditional() || !r.rhs.var_set().is_subset(&r.lhs.var_set())
    }) {
        Some(r) => Err(EngineError::NotTrs {
            rule: r.label().to_string(),
        }),
        None => Ok(()),
    }
}

/// Rules grouped by the root symbol of their left-hand side.
pub(crate) struct RuleIndex<'a> {
    by_root: BTreeMap<&'a Symbol, Vec<&'a Rule>>,
}

impl<'a> RuleIndex<'a> {
    pub(crate) fn new(rules: &'a [Rule]) -> Self {
        let mut by_root: BTreeMap<&Symbol, Vec<&Rule>> = BTreeMap::new();
        for r in rules {
            by_root.entry(r.root()).or_default().push(r);
        }
        RuleIndex { by_root }
    }

    pub(crate) fn candidates(&self, t: &Term) -> &[&'a Rule] {
        t.root()
            .and_then(|f| self.by_root.get(f))
            .map_or(&[], |v| v.as_slice())
    }
}

fn unconditional_successors(index: &RuleIndex<'_>, t: &Term) -> Vec<Step> {
    let mut out = BTreeSet::new();
    for p in t.positions() {
        let sub = t.subterm_at(&p).expect("position from t");
        for r in index.candidates(sub) {
            if let Some(sigma) = match_term(&r.lhs, sub) {
                let u = t
                    .replace_at(&p, r.rhs.apply_subst(&sigma))
                    .expect("position from t");
                out.insert(Step {
                    position: p.clone(),
                    rule: r.label_arc(),
                    term: u,
                });
            }
        }
    }
    out.into_iter().collect()
}

/// All one-step contractions of `t` at every position with every rule.
pub fn trs_successors(system: &RewriteSystem, t: &Term) -> Result<Vec<Step>, EngineError> {
    ensure_trs(system)?;
    Ok(unconditional_successors(&RuleIndex::new(system.rules()), t))
}

/// Breadth-first reachability graph of `t` within `caps`.
pub fn trs_reachable(
    system: &RewriteSystem,
    t: &Term,
    caps: EngineCaps,
) -> Result<DerivationGraph, EngineError> {
    trs_search(system, t, caps, |_| false)
}

/// Like [`trs_reachable`], stopping as soon as `goal` holds for a term.
pub fn trs_search(
    system: &RewriteSystem,
    t: &Term,
    caps: EngineCaps,
    goal: impl Fn(&Term) -> bool,
) -> Result<DerivationGraph, EngineError> {
    ensure_trs(system)?;
    let index = RuleIndex::new(system.rules());
    Ok(explore(
        t.clone(),
        caps,
        |u| (unconditional_successors(&index, u), false),
        goal,
    ))
}

/// Checks that `edge` is a genuine unconditional rewrite step in `graph`.
pub fn validate_trs_edge(system: &RewriteSystem, graph: &DerivationGraph, edge: &Edge) -> bool {
    let Some(rule) = system.rule(&edge.rule) else {
        return false;
    };
    let from = graph.node(edge.from);
    let Some(redex) = from.subterm_at(&edge.position) else {
        return false;
    };
    let Some(sigma) = match_term(&rule.lhs, redex) else {
        return false;
    };
    from.replace_at(&edge.position, rule.rhs.apply_subst(&sigma))
        .map(|u| &u == graph.node(edge.to))
        .unwrap_or(false)
}

fn ensure_three_dctrs(system: &RewriteSystem) -> Result<(), EngineError> {
    match system
        .rules()
        .iter()
        .find(|r| determinism_violation(r).is_some() || rule_type(r) == RuleType::Four)
    {
        Some(r) => Err(EngineError::NotThreeDctrs {
            rule: r.label().to_string(),
        }),
        None => Ok(()),
    }
}

/// Successors of one term at a given level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Successors {
    pub steps: Vec<Step>,
    /// Some condition search hit a cap, so steps may be missing.
    pub truncated: bool,
}

impl Successors {
    pub fn terms(&self) -> BTreeSet<Term> {
        self.steps.iter().map(|s| s.term.clone()).collect()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.steps.iter().any(|s| &s.term == t)
    }
}

/// A conditional rewrite step together with derivations for its conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepProof {
    pub position: Position,
    pub rule: Arc<str>,
    pub from: Term,
    pub to: Term,
    /// One derivation per condition, `s_i σ →* t_i σ`, in order.
    pub conditions: Vec<Vec<StepProof>>,
}

/// Level-indexed rewriting for a 3-DCTRS, memoized per engine instance.
///
/// A step at level `n` evaluates conditions with reachability at level
/// `n - 1`; level 0 has no steps. Condition searches inherit the caps with
/// the node budget halved per level.
pub struct ConditionalEngine<'a> {
    system: &'a RewriteSystem,
    index: RuleIndex<'a>,
    caps: EngineCaps,
    steps: BTreeMap<(usize, Term), Rc<Successors>>,
    reach: BTreeMap<(usize, Term), Rc<DerivationGraph>>,
}

impl<'a> ConditionalEngine<'a> {
    pub fn new(system: &'a RewriteSystem, caps: EngineCaps) -> Result<Self, EngineError> {
        ensure_three_dctrs(system)?;
        Ok(ConditionalEngine {
            system,
            index: RuleIndex::new(system.rules()),
            caps,
            steps: BTreeMap::new(),
            reach: BTreeMap::new(),
        })
    }

    pub fn caps(&self) -> EngineCaps {
        self.caps
    }

    fn caps_at(&self, level: usize) -> EngineCaps {
        let mut caps = self.caps;
        for _ in level..self.caps.max_level {
            caps = caps.for_conditions();
        }
        caps
    }

    /// `{u | t →_(level) u}`, up to caps.
    pub fn step(&mut self, t: &Term, level: usize) -> Rc<Successors> {
        let key = (level, t.clone());
        if let Some(hit) = self.steps.get(&key) {
            return hit.clone();
        }
        if level == 0 {
            // No steps at level 0, but a redex means a higher level might
            // rewrite here: the level cap, not the system, stops the search.
            let redex = t.positions().iter().any(|p| {
                let sub = t.subterm_at(p).expect("position from t");
                self.index
                    .candidates(sub)
                    .iter()
                    .any(|r| match_term(&r.lhs, sub).is_some())
            });
            let result = Rc::new(Successors {
                steps: Vec::new(),
                truncated: redex,
            });
            self.steps.insert(key, result.clone());
            return result;
        }
        let mut out = BTreeSet::new();
        let mut truncated = false;
        for p in t.positions() {
            let sub = t.subterm_at(&p).expect("position from t");
            let candidates: Vec<&'a Rule> = self.index.candidates(sub).to_vec();
            for rule in candidates {
                let Some(sigma) = match_term(&rule.lhs, sub) else {
                    continue;
                };
                let (sigmas, cut) = self.satisfy(rule, sigma, level - 1);
                truncated |= cut;
                for sigma in sigmas {
                    let u = t
                        .replace_at(&p, rule.rhs.apply_subst(&sigma))
                        .expect("position from t");
                    out.insert(Step {
                        position: p.clone(),
                        rule: rule.label_arc(),
                        term: u,
                    });
                }
            }
        }
        let result = Rc::new(Successors {
            steps: out.into_iter().collect(),
            truncated,
        });
        self.steps.insert(key, result.clone());
        result
    }

    /// Extends `sigma` through the conditions of `rule`, evaluating each
    /// `s_i σ →* t_i σ` at `level`.
    fn satisfy(
        &mut self,
        rule: &Rule,
        sigma: Substitution,
        level: usize,
    ) -> (Vec<Substitution>, bool) {
        let mut current = alloc::vec![sigma];
        let mut truncated = false;
        for cond in &rule.conditions {
            let mut next = Vec::new();
            for sigma in &current {
                let source = cond.source.apply_subst(sigma);
                let reach = self.reachable_at(&source, level);
                truncated |= !reach.is_complete();
                for u in reach.nodes() {
                    let mut extended = sigma.clone();
                    if match_into(&cond.target, u, &mut extended) {
                        next.push(extended);
                    }
                }
            }
            next.sort();
            next.dedup();
            current = next;
            if current.is_empty() {
                break;
            }
        }
        (current, truncated)
    }

    fn reachable_at(&mut self, t: &Term, level: usize) -> Rc<DerivationGraph> {
        let key = (level, t.clone());
        if let Some(hit) = self.reach.get(&key) {
            return hit.clone();
        }
        let caps = self.caps_at(level);
        let graph = Rc::new(explore(
            t.clone(),
            caps,
            |u| {
                let s = self.step(u, level);
                (s.steps.clone(), s.truncated)
            },
            |_| false,
        ));
        self.reach.insert(key, graph.clone());
        graph
    }

    /// Reachability graph using steps at the top level `caps.max_level`.
    pub fn reachable(&mut self, t: &Term) -> DerivationGraph {
        self.search(t, |_| false)
    }

    pub fn search(&mut self, t: &Term, goal: impl Fn(&Term) -> bool) -> DerivationGraph {
        let level = self.caps.max_level;
        let caps = self.caps;
        explore(
            t.clone(),
            caps,
            |u| {
                let s = self.step(u, level);
                (s.steps.clone(), s.truncated)
            },
            goal,
        )
    }

    /// Reconstructs condition derivations for a step `from → to` at
    /// `level` by `rule` at `position`.
    pub fn prove(
        &mut self,
        from: &Term,
        position: &Position,
        rule: &str,
        to: &Term,
        level: usize,
    ) -> Option<StepProof> {
        if level == 0 {
            return None;
        }
        let rule = self.system.rule(rule)?;
        let sub = from.subterm_at(position)?;
        let sigma = match_term(&rule.lhs, sub)?;
        let chosen = self.choose(rule, sigma, 0, level - 1, position, from, to)?;
        let mut conditions = Vec::with_capacity(chosen.len());
        for (source, target) in chosen {
            let graph = self.reachable_at(&source, level - 1);
            let mut derivation = Vec::new();
            for e in graph.path_to(&target)? {
                let (a, b) = (graph.node(e.from).clone(), graph.node(e.to).clone());
                derivation.push(self.prove(&a, &e.position, &e.rule, &b, level - 1)?);
            }
            conditions.push(derivation);
        }
        Some(StepProof {
            position: position.clone(),
            rule: rule.label_arc(),
            from: from.clone(),
            to: to.clone(),
            conditions,
        })
    }

    /// Depth-first choice of one reachable instance per condition such that
    /// the contractum is `to`. Returns `(s_i σ, t_i σ)` pairs.
    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        rule: &Rule,
        sigma: Substitution,
        i: usize,
        level: usize,
        position: &Position,
        from: &Term,
        to: &Term,
    ) -> Option<Vec<(Term, Term)>> {
        let Some(cond) = rule.conditions.get(i) else {
            let result = from.replace_at(position, rule.rhs.apply_subst(&sigma)).ok()?;
            return (&result == to).then(Vec::new);
        };
        let source = cond.source.apply_subst(&sigma);
        let reach = self.reachable_at(&source, level);
        for u in reach.nodes() {
            let mut extended = sigma.clone();
            if match_into(&cond.target, u, &mut extended) {
                if let Some(mut rest) = self.choose(rule, extended, i + 1, level, position, from, to) {
                    rest.insert(0, (source.clone(), u.clone()));
                    return Some(rest);
                }
            }
        }
        None
    }
}

/// `{u | t →_(level) u}` for a 3-DCTRS, up to caps.
pub fn ctrs_step(
    system: &RewriteSystem,
    t: &Term,
    level: usize,
    caps: EngineCaps,
) -> Result<Successors, EngineError> {
    let mut engine = ConditionalEngine::new(system, caps.with_level(caps.max_level.max(level)))?;
    Ok((*engine.step(t, level)).clone())
}

/// Bounded under-approximation of `{u | t →*_R u}`.
pub fn ctrs_reachable(
    system: &RewriteSystem,
    t: &Term,
    caps: EngineCaps,
) -> Result<DerivationGraph, EngineError> {
    Ok(ConditionalEngine::new(system, caps)?.reachable(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{system, term, R1, R4};

    fn caps() -> EngineCaps {
        EngineCaps::default()
    }

    #[test]
    fn trs_step_and_normal_forms() {
        let s = system("a -> c\na -> d\ng(x) -> h(x, x)");
        let steps = trs_successors(&s, &term("g(a)")).unwrap();
        let terms: Vec<_> = steps.iter().map(|s| s.term.clone()).collect();
        assert!(terms.contains(&term("h(a, a)")));
        assert!(terms.contains(&term("g(c)")));
        assert!(terms.contains(&term("g(d)")));
        assert_eq!(steps.len(), 3);
        assert!(trs_successors(&s, &term("d")).unwrap().is_empty());
    }

    #[test]
    fn trs_rejects_conditional_system() {
        assert!(trs_successors(&system(R4), &term("a")).is_err());
    }

    #[test]
    fn trs_reachable_small() {
        let s = system("a -> c\na -> d");
        let g = trs_reachable(&s, &term("a"), caps()).unwrap();
        assert!(g.is_complete());
        let nodes: BTreeSet<_> = g.nodes().iter().cloned().collect();
        assert_eq!(nodes, [term("a"), term("c"), term("d")].into_iter().collect());
        for e in g.edges() {
            assert!(validate_trs_edge(&s, &g, e));
        }
        assert!(g.is_normal_form(g.node_id(&term("c")).unwrap()));
    }

    #[test]
    fn zero_step_budget() {
        let s = system("a -> c");
        let g = trs_reachable(&s, &term("a"), caps().with_steps(0)).unwrap();
        assert_eq!(g.len(), 1);
        assert!(!g.is_complete());
        let g = trs_reachable(&s, &term("c"), caps().with_steps(0)).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.is_complete());
    }

    #[test]
    fn node_cap_truncates() {
        let s = system("f(x) -> f(s(x))");
        let g = trs_reachable(&s, &term("f(0)"), caps().with_nodes(5)).unwrap();
        assert_eq!(g.len(), 5);
        assert!(!g.is_complete());
    }

    #[test]
    fn split_at_level_two() {
        let r1 = system(R1);
        let succ = ctrs_step(&r1, &term("split(0, cons(s(0), nil))"), 2, caps()).unwrap();
        assert!(succ.contains(&term("pair(nil, cons(s(0), nil))")));
        // level 1 cannot evaluate split(0, nil) ->* pair(nil, nil) in zero steps
        let succ = ctrs_step(&r1, &term("split(0, cons(s(0), nil))"), 1, caps()).unwrap();
        assert!(succ.steps.is_empty());
        assert!(succ.truncated, "the level cap cut the condition search");
    }

    #[test]
    fn level_cut_is_not_completeness() {
        let r1 = system(R1);
        let g = ctrs_reachable(&r1, &term("split(0, cons(s(0), nil))"), caps().with_level(1)).unwrap();
        assert_eq!(g.len(), 1);
        assert!(!g.is_complete());
        // a normal form stays complete at any level
        let g = ctrs_reachable(&r1, &term("pair(nil, nil)"), caps().with_level(1)).unwrap();
        assert!(g.is_complete());
    }

    #[test]
    fn r4_conditional_f() {
        let r4 = system(R4);
        let succ = ctrs_step(&r4, &term("f(a)"), 2, caps()).unwrap();
        assert!(succ.contains(&term("c")));
        assert!(succ.contains(&term("d")));
        assert!(ctrs_step(&r4, &term("c"), 3, caps()).unwrap().steps.is_empty());
        assert!(ctrs_step(&r4, &term("f(a)"), 0, caps()).unwrap().steps.is_empty());
    }

    #[test]
    fn r4_reachability() {
        let r4 = system(R4);
        let g = ctrs_reachable(&r4, &term("h(f(a), f(f(b)))"), caps().with_level(3)).unwrap();
        assert!(g.contains(&term("d")));
        assert!(g.is_complete());
        let g = ctrs_reachable(&r4, &term("g(f(a))"), caps().with_level(3)).unwrap();
        assert!(g.contains(&term("c")));
    }

    #[test]
    fn quicksort_two_elements() {
        let r1 = system(R1);
        let g = ctrs_reachable(&r1, &term("qsort(cons(s(0), cons(0, nil)))"), caps()).unwrap();
        let sorted = term("cons(0, cons(s(0), nil))");
        assert!(g.contains(&sorted));
        assert!(g.is_normal_form(g.node_id(&sorted).unwrap()));
    }

    #[test]
    fn level_monotonicity() {
        let r4 = system(R4);
        let t = term("h(f(a), f(b))");
        let mut engine = ConditionalEngine::new(&r4, caps()).unwrap();
        for n in 0..3 {
            let lower = engine.step(&t, n).terms();
            let upper = engine.step(&t, n + 1).terms();
            assert!(lower.is_subset(&upper));
        }
    }

    #[test]
    fn rejects_non_deterministic() {
        let s = system("f(x) -> x | g(y) == x");
        assert!(matches!(
            ctrs_reachable(&s, &term("f(a)"), caps()),
            Err(EngineError::NotThreeDctrs { .. })
        ));
    }
}
