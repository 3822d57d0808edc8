//! First-order terms, positions, substitutions and syntactic matching.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::TermError;

/// A variable, identified by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A function symbol together with its arity.
///
/// Roles (constructor, defined, introduced by a transformation, ...) are not
/// part of the symbol itself; they live in the [`Signature`](crate::Signature)
/// of the system the symbol belongs to.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: Arc<str>,
    arity: usize,
}

impl Symbol {
    pub fn new(name: &str, arity: usize) -> Self {
        Symbol {
            name: Arc::from(name),
            arity,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A first-order term. Arguments are shared so that rewriting below the root
/// only copies the spine.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    App(Symbol, Arc<[Term]>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::App(Symbol::new(name, 0), Arc::from(Vec::new()))
    }

    /// Builds `name(args...)`; the arity is taken from `args`.
    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(Symbol::new(name, args.len()), Arc::from(args))
    }

    /// Builds an application of an existing symbol.
    ///
    /// Panics if `args.len()` differs from the symbol's arity.
    pub fn apply(symbol: Symbol, args: Vec<Term>) -> Term {
        assert_eq!(
            symbol.arity(),
            args.len(),
            "arity mismatch for {}",
            symbol.name()
        );
        Term::App(symbol, Arc::from(args))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn root(&self) -> Option<&Symbol> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Variables in order of first occurrence (left to right, depth first).
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        collect_vars(core::slice::from_ref(self), &mut out);
        out
    }

    pub fn var_set(&self) -> BTreeSet<Var> {
        self.vars().into_iter().collect()
    }

    pub fn contains_var(&self, x: &Var) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(x)),
        }
    }

    /// Every symbol occurring in the term, in first-occurrence order.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        self.visit(&mut |t| {
            if let Term::App(f, _) = t {
                if !out.contains(f) {
                    out.push(f.clone());
                }
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for a in self.args() {
            a.visit(f);
        }
    }

    /// All positions in pre-order; the root comes first.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        collect_positions(self, &mut path, &mut out);
        out
    }

    pub fn subterm_at(&self, p: &Position) -> Option<&Term> {
        let mut t = self;
        for &i in p.path() {
            t = t.args().get(i)?;
        }
        Some(t)
    }

    /// Replaces the subterm at `p` by `u`.
    pub fn replace_at(&self, p: &Position, u: Term) -> Result<Term, TermError> {
        replace_rec(self, p.path(), u).ok_or_else(|| TermError::InvalidPosition(p.clone()))
    }

    /// Applies `sigma`, leaving unbound variables in place.
    pub fn apply_subst(&self, sigma: &Substitution) -> Term {
        match self {
            Term::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => {
                if args.is_empty() {
                    return self.clone();
                }
                Term::App(
                    f.clone(),
                    args.iter().map(|a| a.apply_subst(sigma)).collect(),
                )
            }
        }
    }

    /// Renames variables through `map`; unmapped variables are kept.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.rename(map)).collect())
            }
        }
    }
}

fn collect_vars(terms: &[Term], out: &mut Vec<Var>) {
    for t in terms {
        match t {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => collect_vars(args, out),
        }
    }
}

fn collect_positions(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Position>) {
    out.push(Position(path.clone()));
    for (i, a) in t.args().iter().enumerate() {
        path.push(i);
        collect_positions(a, path, out);
        path.pop();
    }
}

fn replace_rec(t: &Term, path: &[usize], u: Term) -> Option<Term> {
    match path.split_first() {
        None => Some(u),
        Some((&i, rest)) => match t {
            Term::Var(_) => None,
            Term::App(f, args) => {
                let child = replace_rec(args.get(i)?, rest, u)?;
                let mut new_args: Vec<Term> = args.to_vec();
                new_args[i] = child;
                Some(Term::App(f.clone(), Arc::from(new_args)))
            }
        },
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v),
            Term::App(s, args) => {
                f.write_str(s.name())?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{}", a)?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// A position: the path of 0-indexed child indices from the root.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn new(path: Vec<usize>) -> Self {
        Position(path)
    }

    pub fn path(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// `self` is a (non-strict) prefix of `other`, i.e. `other >= self`.
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}", n)?;
        }
        Ok(())
    }
}

/// A finite mapping from variables to terms.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution(BTreeMap<Var, Term>);

impl Substitution {
    pub fn new() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn get(&self, x: &Var) -> Option<&Term> {
        self.0.get(x)
    }

    pub fn insert(&mut self, x: Var, t: Term) -> Option<Term> {
        self.0.insert(x, t)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    /// `σ|_X`.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution(
            self.0
                .iter()
                .filter(|(k, _)| vars.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        )
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} ↦ {}", k, v)?;
        }
        f.write_str("}")
    }
}

/// Syntactic matching: the minimal `σ` with `pattern·σ = subject`, if any.
///
/// Variables of `subject` are treated as constants. Non-linear patterns
/// require all occurrences of a variable to match identical subterms.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    match_into(pattern, subject, &mut sigma).then_some(sigma)
}

/// Extends `sigma` so that `pattern·sigma = subject`. Bindings already in
/// `sigma` must agree. On failure `sigma` may hold partial bindings.
pub fn match_into(pattern: &Term, subject: &Term, sigma: &mut Substitution) -> bool {
    match pattern {
        Term::Var(x) => match sigma.get(x) {
            Some(bound) => bound == subject,
            None => {
                sigma.insert(x.clone(), subject.clone());
                true
            }
        },
        Term::App(f, pargs) => match subject {
            Term::App(g, sargs) if f == g => pargs
                .iter()
                .zip(sargs.iter())
                .all(|(p, s)| match_into(p, s, sigma)),
            _ => false,
        },
    }
}

/// Total number of occurrences of `x` across `terms`.
pub fn count_var_occurrences(terms: &[Term], x: &Var) -> usize {
    terms
        .iter()
        .map(|t| match t {
            Term::Var(v) => usize::from(v == x),
            Term::App(_, args) => count_var_occurrences(args, x),
        })
        .sum()
}

/// True iff no variable occurs more than once across the whole sequence.
pub fn is_linear(terms: &[Term]) -> bool {
    let mut seen = BTreeSet::new();
    let mut ok = true;
    for t in terms {
        t.visit(&mut |s| {
            if let Term::Var(v) = s {
                if !seen.insert(v.clone()) {
                    ok = false;
                }
            }
        });
    }
    ok
}

/// Variables of a term sequence in first-occurrence order.
pub fn vars_of(terms: &[Term]) -> Vec<Var> {
    let mut out = Vec::new();
    collect_vars(terms, &mut out);
    out
}

/// Generates fresh variable names `base1`, `base2`, ... avoiding a given set.
#[derive(Clone, Debug, Default)]
pub struct FreshVars {
    avoid: BTreeSet<String>,
    counter: usize,
}

impl FreshVars {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn avoiding<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        FreshVars {
            avoid: names.into_iter().map(String::from).collect(),
            counter: 0,
        }
    }

    pub fn avoid(&mut self, name: &str) {
        self.avoid.insert(String::from(name));
    }

    pub fn avoid_term(&mut self, t: &Term) {
        for v in t.vars() {
            self.avoid(v.name());
        }
    }

    /// Next name `base<N>` not in the avoid set; it is added to the set.
    pub fn fresh(&mut self, base: &str) -> Var {
        loop {
            self.counter += 1;
            let candidate = alloc::format!("{}{}", base, self.counter);
            if self.avoid.insert(candidate.clone()) {
                return Var::new(&candidate);
            }
        }
    }

    /// Like [`fresh`](Self::fresh) but with an explicit suffix, falling back
    /// to primes when `base<suffix>` is taken.
    pub fn fresh_indexed(&mut self, base: &str, suffix: usize) -> Var {
        let mut candidate = alloc::format!("{}{}", base, suffix);
        while !self.avoid.insert(candidate.clone()) {
            candidate.push('\'');
        }
        Var::new(&candidate)
    }
}

/// Renames the variables of a term sequence to `x1, x2, ...` in
/// first-occurrence order. Two sequences are variants of each other iff
/// their canonical forms are equal.
pub fn canonical_renaming(terms: &[Term]) -> BTreeMap<Var, Var> {
    vars_of(terms)
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, Var::new(&alloc::format!("x{}", i + 1))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::term;
    use alloc::vec;

    #[test]
    fn counts_occurrences() {
        let ts = vec![term("f(x)"), term("y"), term("y"), term("c")];
        assert_eq!(count_var_occurrences(&ts, &Var::new("y")), 2);
        assert_eq!(count_var_occurrences(&[term("x")], &Var::new("x")), 1);
        assert_eq!(count_var_occurrences(&[term("c")], &Var::new("x")), 0);
    }

    #[test]
    fn linearity() {
        assert!(!is_linear(&[term("f(x)"), term("y"), term("y")]));
        assert!(is_linear(&[term("pair(xs, zs)")]));
        assert!(is_linear(&[]));
        assert!(!is_linear(&[term("h(x, f(x))")]));
    }

    #[test]
    fn matching_examples() {
        let sigma = match_term(&term("h(x, f(x))"), &term("h(d, f(d))")).unwrap();
        assert_eq!(sigma.len(), 1);
        assert_eq!(sigma.get(&Var::new("x")), Some(&term("d")));

        let sigma = match_term(&term("x"), &term("g(y)")).unwrap();
        assert_eq!(sigma.get(&Var::new("x")), Some(&term("g(y)")));

        assert!(match_term(&term("h(x, f(x))"), &term("h(c, f(d))")).is_none());
    }

    #[test]
    fn matching_treats_subject_vars_as_constants() {
        assert!(match_term(&term("f(c)"), &term("f(x)")).is_none());
        let sigma = match_term(&term("f(y, y)"), &term("f(x, x)")).unwrap();
        assert_eq!(sigma.get(&Var::new("y")), Some(&term("x")));
        assert!(match_term(&term("f(y, y)"), &term("f(x, z)")).is_none());
    }

    #[test]
    fn substitution_application() {
        let sigma: Substitution = [(Var::new("x"), term("a"))].into_iter().collect();
        assert_eq!(term("f(x)").apply_subst(&sigma), term("f(a)"));
        assert_eq!(term("x").apply_subst(&Substitution::new()), term("x"));
        let sigma: Substitution = [
            (Var::new("xs"), term("nil")),
            (Var::new("y"), term("s(0)")),
            (Var::new("zs"), term("nil")),
        ]
        .into_iter()
        .collect();
        assert_eq!(
            term("pair(xs, cons(y, zs))").apply_subst(&sigma),
            term("pair(nil, cons(s(0), nil))")
        );
    }

    #[test]
    fn replacement() {
        let p = Position::new(vec![1]);
        assert_eq!(term("h(a, b)").replace_at(&p, term("c")).unwrap(), term("h(a, c)"));
        assert_eq!(term("a").replace_at(&Position::root(), term("b")).unwrap(), term("b"));
        let p = Position::new(vec![0, 0]);
        assert_eq!(term("g(f(a))").replace_at(&p, term("d")).unwrap(), term("g(f(d))"));
        let bad = Position::new(vec![2]);
        assert_eq!(
            term("h(a, b)").replace_at(&bad, term("c")),
            Err(TermError::InvalidPosition(bad.clone()))
        );
        assert!(term("x").replace_at(&Position::new(vec![0]), term("c")).is_err());
    }

    #[test]
    fn positions_and_vars() {
        let t = term("h(x, f(y, x))");
        assert_eq!(t.positions().len(), 5);
        assert_eq!(t.vars(), vec![Var::new("x"), Var::new("y")]);
        assert!(Position::new(vec![1]).is_prefix_of(&Position::new(vec![1, 0])));
        assert!(!Position::new(vec![0]).is_prefix_of(&Position::new(vec![1, 0])));
    }

    #[test]
    fn fresh_names_avoid_taken() {
        let mut fresh = FreshVars::avoiding(["y1", "y3"]);
        assert_eq!(fresh.fresh("y"), Var::new("y2"));
        assert_eq!(fresh.fresh("y"), Var::new("y4"));
        assert_eq!(fresh.fresh_indexed("z", 1), Var::new("z1"));
        assert_eq!(fresh.fresh_indexed("z", 1), Var::new("z1'"));
    }
}
