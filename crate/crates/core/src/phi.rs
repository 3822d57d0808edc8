//! The mapping `Φ` from SR terms to the finite sets of unraveled terms they
//! represent, with well-placement and evaluation-state predicates.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::PlacementError;
use crate::system::Signature;
use crate::term::{match_into, FreshVars, Substitution, Term};
use crate::transform::{ext_with, Barred, ExtendedSignature, TransformContext};

pub const DEFAULT_PHI_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiResult {
    pub terms: BTreeSet<Term>,
    /// Some set was cut at the cap; `terms` is then a subset of `Φ(t)`.
    pub truncated: bool,
    /// `|Φ(t)|`, computed arithmetically (saturating).
    pub cardinality: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvaluationState {
    NoEvaluation,
    HasEvaluation,
    Stuck,
}

/// Checks that `⊥` and evaluation tuples only occur in extended arguments,
/// each tuple in the slot of its own rule, and that every symbol belongs to
/// the SR signature.
pub(crate) fn check_placement(
    ext: &ExtendedSignature,
    sig: &Signature,
    t: &Term,
) -> Result<(), PlacementError> {
    if placed(ext, sig, t, None) {
        Ok(())
    } else {
        Err(PlacementError::IllPlaced(t.to_string()))
    }
}

fn placed(ext: &ExtendedSignature, sig: &Signature, t: &Term, slot: Option<(&Barred, usize)>) -> bool {
    let Term::App(s, args) = t else {
        return true;
    };
    if sig.get(s.name()).map(|i| i.arity) != Some(s.arity()) {
        return false;
    }
    let is_bot = ext.is_bottom(s);
    let eval = ext.eval.get(s.name());
    match slot {
        Some((b, i)) => {
            if is_bot {
                return true;
            }
            match eval {
                Some((rho, _)) if *rho == b.conditional[i] => {
                    args.iter().all(|a| placed(ext, sig, a, None))
                }
                _ => false,
            }
        }
        None if is_bot || eval.is_some() => false,
        None => match ext.barred_of_target(s.name()) {
            Some(b) => args.iter().enumerate().all(|(k, a)| {
                let slot = (k >= b.n()).then(|| (b, k - b.n()));
                placed(ext, sig, a, slot)
            }),
            None => args.iter().all(|a| placed(ext, sig, a, None)),
        },
    }
}

pub fn is_well_placed(t: &Term, ctx: &TransformContext) -> bool {
    check_placement(ctx.ext_sig(), ctx.target.signature(), t).is_ok()
}

/// `Φ(t)` with at most `cap` members per intermediate set.
pub fn phi(t: &Term, ctx: &TransformContext, cap: usize) -> Result<PhiResult, PlacementError> {
    check_placement(ctx.ext_sig(), ctx.target.signature(), t)?;
    let mut m = Mapper {
        ctx,
        cap: cap.max(1),
        truncated: false,
    };
    let terms = m.phi(t);
    Ok(PhiResult {
        cardinality: m.count(t),
        terms,
        truncated: m.truncated,
    })
}

/// `Φ(σ)`: every combination of `Φ(xσ)` over the domain of `σ`.
pub fn phi_subst(
    sigma: &Substitution,
    ctx: &TransformContext,
    cap: usize,
) -> Result<(Vec<Substitution>, bool), PlacementError> {
    let mut m = Mapper {
        ctx,
        cap: cap.max(1),
        truncated: false,
    };
    let mut domain = Vec::new();
    let mut sets = Vec::new();
    for (x, t) in sigma.iter() {
        check_placement(ctx.ext_sig(), ctx.target.signature(), t)?;
        domain.push(x.clone());
        sets.push(m.phi(t).into_iter().collect::<Vec<_>>());
    }
    let subs = m
        .product(&sets)
        .into_iter()
        .map(|combo| domain.iter().cloned().zip(combo).collect())
        .collect();
    Ok((subs, m.truncated))
}

struct Mapper<'a> {
    ctx: &'a TransformContext,
    cap: usize,
    truncated: bool,
}

impl<'a> Mapper<'a> {
    fn ext(&self) -> &'a ExtendedSignature {
        self.ctx.ext_sig()
    }

    fn phi(&mut self, t: &Term) -> BTreeSet<Term> {
        let ext = self.ext();
        match t {
            Term::Var(_) => BTreeSet::from([t.clone()]),
            Term::App(s, args) => {
                if ext.is_guard(s) {
                    self.phi(&args[0])
                } else if ext.constructors.contains(s) {
                    self.apply_all(s, args)
                } else if let Some(b) = ext.barred_of_target(s.name()) {
                    let b = b.clone();
                    let mut out = self.apply_all(&b.source, &args[..b.n()]);
                    for i in 0..b.m() {
                        let u = &args[b.n() + i];
                        if u.root().is_some_and(|r| ext.is_bottom(r)) {
                            continue;
                        }
                        for x in self.psi_eval(&b, &args[..b.n()], i, u) {
                            if out.len() >= self.cap {
                                self.truncated = true;
                                break;
                            }
                            out.insert(x);
                        }
                    }
                    out
                } else {
                    BTreeSet::new()
                }
            }
        }
    }

    fn apply_all(&mut self, s: &crate::term::Symbol, args: &[Term]) -> BTreeSet<Term> {
        let sets: Vec<Vec<Term>> = args.iter().map(|a| self.phi(a).into_iter().collect()).collect();
        self.product(&sets)
            .into_iter()
            .map(|combo| Term::apply(s.clone(), combo))
            .collect()
    }

    /// The substitution of the evaluation clause and the guarded term of
    /// the tuple, or `None` when the clause does not apply.
    fn eval_binding(&self, b: &Barred, orig: &[Term], i: usize, u: &Term) -> Option<(Substitution, Term, (alloc::sync::Arc<str>, usize))> {
        let ext = self.ext();
        let Term::App(e, eargs) = u else {
            return None;
        };
        let (rho_label, j) = ext.eval.get(e.name())?.clone();
        if rho_label != b.conditional[i] {
            return None;
        }
        let head = match &eargs[0] {
            Term::App(g, inner) if ext.is_guard(g) => inner[0].clone(),
            _ => return None,
        };
        let rho = self.ctx.source.rule(&rho_label)?;
        let meta = self.ctx.cond(&rho_label, j)?;
        let mut fresh = FreshVars::avoiding(rho.vars().iter().map(|v| v.name()));
        let mut sigma = Substitution::new();
        for (w, s) in rho.lhs.args().iter().zip(orig) {
            if !match_into(&ext_with(ext, w, &mut fresh), s, &mut sigma) {
                return None;
            }
        }
        for (v, t) in meta.v.iter().zip(&eargs[1..]) {
            match sigma.get(v) {
                Some(bound) if bound != t => return None,
                _ => {
                    sigma.insert(v.clone(), t.clone());
                }
            }
        }
        Some((sigma, head, (rho_label, j)))
    }

    fn psi_eval(&mut self, b: &Barred, orig: &[Term], i: usize, u: &Term) -> BTreeSet<Term> {
        let Some((sigma, head, (rho, j))) = self.eval_binding(b, orig, i, u) else {
            return BTreeSet::new();
        };
        let meta = self.ctx.cond(&rho, j).expect("evaluation tuple has metadata").clone();
        let mut sets = alloc::vec![self.phi(&head).into_iter().collect::<Vec<_>>()];
        for x in &meta.x {
            let bound = sigma.get(x).cloned().unwrap_or_else(|| Term::Var(x.clone()));
            sets.push(self.phi(&bound).into_iter().collect());
        }
        self.product(&sets)
            .into_iter()
            .map(|combo| Term::apply(meta.u_symbol.clone(), combo))
            .collect()
    }

    fn product(&mut self, sets: &[Vec<Term>]) -> Vec<Vec<Term>> {
        let mut acc: Vec<Vec<Term>> = alloc::vec![Vec::new()];
        for set in sets {
            let mut next = Vec::new();
            'outer: for prefix in &acc {
                for t in set {
                    if next.len() >= self.cap {
                        self.truncated = true;
                        break 'outer;
                    }
                    let mut p = prefix.clone();
                    p.push(t.clone());
                    next.push(p);
                }
            }
            acc = next;
        }
        acc
    }

    /// `|Φ(t)|`. The union in the defined-symbol clause is disjoint because
    /// its parts have pairwise different root symbols.
    fn count(&self, t: &Term) -> u64 {
        let ext = self.ext();
        match t {
            Term::Var(_) => 1,
            Term::App(s, args) => {
                if ext.is_guard(s) {
                    self.count(&args[0])
                } else if ext.constructors.contains(s) {
                    args.iter().fold(1u64, |n, a| n.saturating_mul(self.count(a)))
                } else if let Some(b) = ext.barred_of_target(s.name()) {
                    let orig = &args[..b.n()];
                    let mut n = orig.iter().fold(1u64, |n, a| n.saturating_mul(self.count(a)));
                    for i in 0..b.m() {
                        if let Some((sigma, head, (rho, j))) = self.eval_binding(b, orig, i, &args[b.n() + i]) {
                            let meta = self.ctx.cond(&rho, j).expect("evaluation tuple has metadata");
                            let k = meta.x.iter().fold(self.count(&head), |k, x| {
                                k.saturating_mul(sigma.get(x).map_or(1, |s| self.count(s)))
                            });
                            n = n.saturating_add(k);
                        }
                    }
                    n
                } else {
                    0
                }
            }
        }
    }
}

/// Classifies a well-placed term by its condition evaluations.
pub fn evaluation_state(t: &Term, ctx: &TransformContext) -> EvaluationState {
    let ext = ctx.ext_sig();
    let mut has_eval = false;
    let mut can_continue = false;
    t.visit(&mut |s| {
        let Term::App(f, args) = s else { return };
        let Some(b) = ext.barred_of_target(f.name()) else {
            return;
        };
        if args[b.n()..]
            .iter()
            .any(|u| u.root().is_some_and(|r| ext.eval.contains_key(r.name())))
        {
            has_eval = true;
        }
        if !can_continue {
            can_continue = b.conditional.iter().any(|label| {
                let rho = ctx.source.rule(label).expect("ranked rule exists");
                let mut fresh = FreshVars::avoiding(rho.vars().iter().map(|v| v.name()));
                let pattern = ext_with(ext, &rho.lhs, &mut fresh);
                crate::term::match_term(&pattern, s).is_some()
            });
        }
    });
    if !has_eval {
        EvaluationState::NoEvaluation
    } else if !can_continue {
        EvaluationState::Stuck
    } else {
        EvaluationState::HasEvaluation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{system, term, R1, R4};
    use crate::transform::sr_transform;

    fn r4() -> TransformContext {
        sr_transform(&system(R4)).unwrap()
    }

    #[test]
    fn point_check() {
        let ctx = r4();
        let res = phi(&term("f^(a, sq1(sq(c)), bot)"), &ctx, DEFAULT_PHI_CAP).unwrap();
        assert_eq!(res.terms, BTreeSet::from([term("f(a)"), term("u1(c, a)")]));
        assert_eq!(res.cardinality, 2);
        assert!(!res.truncated);
    }

    #[test]
    fn product_of_two_evaluations() {
        let ctx = r4();
        let t = term("sq(h(f^(a, sq1(sq(c)), bot), f^(a, sq1(sq(c)), bot)))");
        let res = phi(&t, &ctx, DEFAULT_PHI_CAP).unwrap();
        let expected = BTreeSet::from([
            term("h(f(a), f(a))"),
            term("h(f(a), u1(c, a))"),
            term("h(u1(c, a), f(a))"),
            term("h(u1(c, a), u1(c, a))"),
        ]);
        assert_eq!(res.terms, expected);
        assert_eq!(res.cardinality, 4);
    }

    #[test]
    fn bar_is_singleton() {
        let ctx = sr_transform(&system(R1)).unwrap();
        let s = term("qsort(cons(s(0), split(x, nil)))");
        let res = phi(&ctx.init(&s), &ctx, DEFAULT_PHI_CAP).unwrap();
        assert_eq!(res.terms, BTreeSet::from([s]));
    }

    #[test]
    fn cap_truncates() {
        let ctx = r4();
        let t = term("h(f^(a, sq1(sq(c)), bot), f^(a, sq1(sq(c)), bot))");
        let res = phi(&t, &ctx, 3).unwrap();
        assert!(res.truncated);
        assert_eq!(res.terms.len(), 3);
        assert_eq!(res.cardinality, 4);
    }

    #[test]
    fn placement() {
        let ctx = r4();
        assert!(is_well_placed(&term("f^(a, sq1(sq(c)), bot)"), &ctx));
        assert!(!is_well_placed(&term("f^(a, bot, sq1(sq(c)))"), &ctx));
        assert!(!is_well_placed(&term("g(bot)"), &ctx));
        assert!(!is_well_placed(&term("bot"), &ctx));
        assert!(!is_well_placed(&term("f(a)"), &ctx));
        assert!(is_well_placed(&ctx.bar(&term("h(f(a), f(f(b)))")), &ctx));
        assert!(phi(&term("g(bot)"), &ctx, 10).is_err());
    }

    #[test]
    fn states() {
        let ctx = r4();
        assert_eq!(
            evaluation_state(&ctx.bar(&term("h(f(a), f(f(b)))")), &ctx),
            EvaluationState::NoEvaluation
        );
        assert_eq!(
            evaluation_state(&term("f^(a, sq1(sq(c)), bot)"), &ctx),
            EvaluationState::HasEvaluation
        );
        assert_eq!(evaluation_state(&term("g(c)"), &ctx), EvaluationState::NoEvaluation);
        let q = sr_transform(&system(R1)).unwrap();
        let stuck = term("qsort^(sq(nil), sq5(sq(pair(nil, nil))))");
        assert_eq!(evaluation_state(&stuck, &q), EvaluationState::Stuck);
        assert_eq!(phi(&stuck, &q, 10).unwrap().cardinality, 1);
    }

    #[test]
    fn substitutions() {
        let ctx = r4();
        let sigma: Substitution = [
            (crate::term::Var::new("x"), term("f^(a, sq1(sq(c)), bot)")),
            (crate::term::Var::new("y"), term("c")),
        ]
        .into_iter()
        .collect();
        let (subs, truncated) = phi_subst(&sigma, &ctx, 100).unwrap();
        assert_eq!(subs.len(), 2);
        assert!(!truncated);
    }
}
