mod common;

use common::{fixture, FIXTURES};
use ctrslab::format::{ParseErrorKind, Span};
use ctrslab::{parse_system, render_context, render_system};
use ctrslab_core::{classify_system, linearize, sr_transform, unravel, RewriteSystem};

fn same_rules(a: &RewriteSystem, b: &RewriteSystem) -> bool {
    a.rules().len() == b.rules().len()
        && a.rules().iter().zip(b.rules()).all(|(x, y)| x.is_variant_of(y))
}

#[test]
fn fixtures_parse() {
    for name in FIXTURES {
        let doc = fixture(name);
        assert_eq!(doc.rule_spans.len(), doc.system.rules().len());
    }
    let r1 = fixture("r1");
    assert_eq!(r1.system.rules().len(), 10);
    assert!(r1.comment);
    assert_eq!(r1.rule_spans[1], Span { line: 6, col: 3 });
    let rep = classify_system(&r1.system);
    assert!(rep.wll && rep.dctrs && rep.type3 && rep.constructor_system && rep.ultra_wll);
}

#[test]
fn convention_without_var_block() {
    let doc = parse_system("(RULES f(x) -> x | g(x) == x)").unwrap();
    assert!(doc.vars.is_none());
    let rep = classify_system(&doc.system);
    assert!(rep.ll && !rep.wll);
    assert!(doc.system.rules()[0].rhs.is_var());
}

#[test]
fn var_block_overrides_convention() {
    let doc = parse_system("(VAR n)(RULES f(n, x) -> n)").unwrap();
    let lhs = &doc.system.rules()[0].lhs;
    assert!(lhs.args()[0].is_var());
    assert!(!lhs.args()[1].is_var(), "x is a constant once VAR is declared");
}

#[test]
fn empty_rules_block() {
    let doc = parse_system("(CONDITIONTYPE ORIENTED)\n(VAR)\n(RULES\n)").unwrap();
    assert!(doc.system.is_empty());
    let text = render_system(&doc.system);
    assert!(text.contains("(RULES\n)"));
    assert!(parse_system(&text).unwrap().system.is_empty());
}

#[test]
fn comments_may_nest_parentheses() {
    let doc = parse_system("(COMMENT see (the) notes: f(x) -> y)\n(RULES a -> b)").unwrap();
    assert_eq!(doc.system.rules().len(), 1);
}

#[test]
fn render_parse_round_trip() {
    for name in FIXTURES {
        let sys = fixture(name).system;
        let text = render_system(&sys);
        let back = parse_system(&text).unwrap().system;
        assert!(same_rules(&sys, &back), "{name}");
        assert_eq!(render_system(&back), text, "{name}: not a fixed point");
    }
}

#[test]
fn transformed_systems_round_trip() {
    for name in FIXTURES {
        let sys = fixture(name).system;
        let ctxs = [unravel(&sys), linearize(&sys), sr_transform(&sys)];
        for ctx in ctxs.into_iter().flatten() {
            let text = render_context(&ctx);
            let back = parse_system(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
            assert!(same_rules(&ctx.target, &back.system), "{name} {:?}", ctx.method);
        }
    }
}

#[test]
fn variables_clashing_with_symbols_are_renamed() {
    // `x` is a constant in the second rule, a variable in the first.
    let sys = RewriteSystem::new(vec![
        ctrslab_core::Rule::unconditional(
            "r1",
            ctrslab_core::Term::app("f", vec![ctrslab_core::Term::var("x")]),
            ctrslab_core::Term::var("x"),
        )
        .unwrap(),
        ctrslab_core::Rule::unconditional(
            "r2",
            ctrslab_core::Term::constant("x"),
            ctrslab_core::Term::constant("a"),
        )
        .unwrap(),
    ])
    .unwrap();
    let back = parse_system(&render_system(&sys)).unwrap().system;
    assert!(same_rules(&sys, &back));
}

#[test]
fn seed_terms_are_checked_against_the_signature() {
    let doc = fixture("r4");
    assert!(doc.parse_term("h(f(a), f(f(b)))").is_ok());
    assert!(matches!(
        doc.parse_term("k(a)").unwrap_err().kind,
        ParseErrorKind::UnknownSymbol(_)
    ));
    let err = doc.parse_term("h(a)").unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::ArityConflict { .. }));
    assert_eq!(err.span, Span { line: 1, col: 1 });
    assert!(doc.parse_term("h(a, b) c").is_err());
}

const MALFORMED: &[(&str, (usize, usize))] = &[
    ("(RULES f(x) -> )", (1, 16)),
    ("(RULES f(x) x)", (1, 13)),
    ("(RULES f(x -> x)", (1, 12)),
    ("(RULES f() -> a)", (1, 10)),
    ("(RULES f(x) -> x | g(x) = x)", (1, 25)),
    ("(RULES f(x) -> x | g(x))", (1, 24)),
    ("(CONDITIONTYPE JOIN)\n(RULES)", (1, 16)),
    ("(CONDITIONTYPE SEMI_EQUATIONAL)\n(RULES)", (1, 16)),
    ("(STRATEGY INNERMOST)\n(RULES)", (1, 2)),
    ("(VAR x)\n(RULES x(a) -> a)", (2, 8)),
    ("(RULES f(a) -> f(a, b))", (1, 16)),
    ("(VAR x)\n(RULES\n  x -> a)", (3, 3)),
    ("(VAR x)", (1, 8)),
    ("(RULES a -> b)\n(RULES b -> a)", (2, 2)),
    ("(COMMENT unterminated (", (1, 9)),
    ("(RULES f(x) -> x", (1, 17)),
    ("RULES a -> b", (1, 1)),
    ("(RULES a -> b) extra", (1, 16)),
    ("(RULES f(x) -> x | a == b,)", (1, 27)),
    ("(RULES a -> b € )", (1, 15)),
    ("(VAR x y (RULES a -> b))", (1, 10)),
    ("(CONDITIONTYPE ORIENTED)(CONDITIONTYPE ORIENTED)(RULES)", (1, 26)),
    ("(RULES f(a, b) -> a | g(a) == a, g(a, b) == b)", (1, 34)),
];

#[test]
fn malformed_inputs_are_rejected_with_positions() {
    assert!(MALFORMED.len() >= 20);
    for (text, (line, col)) in MALFORMED {
        let err = parse_system(text).expect_err(text);
        assert_eq!(
            (err.span.line, err.span.col),
            (*line, *col),
            "{text:?}: {err}"
        );
        assert!(err.to_string().starts_with(&format!("{line}:{col}: ")));
    }
}

#[test]
fn unsupported_condition_types_name_the_restriction() {
    let err = parse_system("(CONDITIONTYPE JOIN)(RULES)").unwrap_err();
    assert!(err.to_string().contains("only ORIENTED"));
}
