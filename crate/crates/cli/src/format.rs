//! COPS-style text format for oriented CTRSs.
//!
//! ```text
//! (CONDITIONTYPE ORIENTED)
//! (VAR x y)
//! (RULES
//!   f(x) -> x | g(x) == x
//! )
//! ```
//!
//! Without a VAR block, bare identifiers starting with `w`, `x`, `y` or `z`
//! are variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use ctrslab_core::{Condition, RewriteSystem, Rule, SystemError, Term, TransformContext, Var};

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown block {0}")]
    UnknownBlock(String),
    #[error("condition type {0} is not supported; only ORIENTED conditions are accepted")]
    UnsupportedConditionType(String),
    #[error("duplicate {0} block")]
    DuplicateBlock(String),
    #[error("unterminated COMMENT block")]
    UnterminatedComment,
    #[error("symbol {name} used with arity {found}, previously {expected}")]
    ArityConflict {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("variable {0} used as a function symbol")]
    VariableAsFunction(String),
    #[error("left-hand side of a rule is a variable")]
    VariableLhs,
    #[error("missing RULES block")]
    MissingRules,
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub span: Span,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(span: Span, kind: ParseErrorKind) -> Self {
        ParseError { span, kind }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Comma,
    Arrow,
    Pipe,
    EqEq,
    Ident(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Open => f.write_str("'('"),
            Tok::Close => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::Pipe => f.write_str("'|'"),
            Tok::EqEq => f.write_str("'=='"),
            Tok::Ident(s) => write!(f, "identifier {s}"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '^')
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    span: Span,
    peeked: Option<(Tok, Span)>,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            span: Span { line: 1, col: 1 },
            peeked: None,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.span.line += 1;
            self.span.col = 1;
        } else {
            self.span.col += 1;
        }
        Some(c)
    }

    fn lex(&mut self) -> Result<(Tok, Span), ParseError> {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
        let start = self.span;
        let Some(c) = self.bump() else {
            return Ok((Tok::Eof, start));
        };
        let tok = match c {
            '(' => Tok::Open,
            ')' => Tok::Close,
            ',' => Tok::Comma,
            '|' => Tok::Pipe,
            '-' if self.chars.peek() == Some(&'>') => {
                self.bump();
                Tok::Arrow
            }
            '=' if self.chars.peek() == Some(&'=') => {
                self.bump();
                Tok::EqEq
            }
            c if is_ident_char(c) => {
                let mut s = String::from(c);
                while let Some(&c) = self.chars.peek().filter(|c| is_ident_char(**c)) {
                    s.push(c);
                    self.bump();
                }
                Tok::Ident(s)
            }
            c => return Err(ParseError::new(start, ParseErrorKind::UnexpectedChar(c))),
        };
        Ok((tok, start))
    }

    fn peek(&mut self) -> Result<&(Tok, Span), ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex()?);
        }
        Ok(self.peeked.as_ref().unwrap())
    }

    fn next(&mut self) -> Result<(Tok, Span), ParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lex(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<Span, ParseError> {
        let (tok, span) = self.next()?;
        if tok == want {
            Ok(span)
        } else {
            Err(unexpected(span, &want.to_string(), &tok))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), ParseError> {
        match self.next()? {
            (Tok::Ident(s), span) => Ok((s, span)),
            (tok, span) => Err(unexpected(span, what, &tok)),
        }
    }

    /// Skips raw text up to the parenthesis closing the current block.
    fn skip_block(&mut self) -> Result<(), ParseError> {
        debug_assert!(self.peeked.is_none());
        let start = self.span;
        let mut depth = 1;
        while let Some(c) = self.bump() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                _ => {}
            }
        }
        Err(ParseError::new(start, ParseErrorKind::UnterminatedComment))
    }
}

fn unexpected(span: Span, expected: &str, found: &Tok) -> ParseError {
    ParseError::new(
        span,
        ParseErrorKind::Unexpected {
            expected: expected.to_string(),
            found: found.to_string(),
        },
    )
}

/// A term before variables and symbols are told apart.
#[derive(Clone, Debug)]
struct RawTerm {
    name: String,
    span: Span,
    args: Option<Vec<RawTerm>>,
}

struct RawRule {
    span: Span,
    lhs: RawTerm,
    rhs: RawTerm,
    conditions: Vec<(RawTerm, RawTerm)>,
}

fn raw_term(lx: &mut Lexer) -> Result<RawTerm, ParseError> {
    let (name, span) = lx.ident("a term")?;
    if lx.peek()?.0 != Tok::Open {
        return Ok(RawTerm {
            name,
            span,
            args: None,
        });
    }
    lx.next()?;
    let mut args = vec![raw_term(lx)?];
    loop {
        match lx.next()? {
            (Tok::Comma, _) => args.push(raw_term(lx)?),
            (Tok::Close, _) => break,
            (tok, span) => return Err(unexpected(span, "',' or ')'", &tok)),
        }
    }
    Ok(RawTerm {
        name,
        span,
        args: Some(args),
    })
}

fn raw_rule(lx: &mut Lexer) -> Result<RawRule, ParseError> {
    let lhs = raw_term(lx)?;
    lx.expect(Tok::Arrow)?;
    let rhs = raw_term(lx)?;
    let mut conditions = Vec::new();
    if lx.peek()?.0 == Tok::Pipe {
        lx.next()?;
        loop {
            let s = raw_term(lx)?;
            lx.expect(Tok::EqEq)?;
            let t = raw_term(lx)?;
            conditions.push((s, t));
            if lx.peek()?.0 != Tok::Comma {
                break;
            }
            lx.next()?;
        }
    }
    Ok(RawRule {
        span: lhs.span,
        lhs,
        rhs,
        conditions,
    })
}

/// A parsed file: the system plus what the text declared.
#[derive(Clone, Debug)]
pub struct SourceDocument {
    pub system: RewriteSystem,
    /// `None` when the file has no VAR block.
    pub vars: Option<BTreeSet<String>>,
    /// Start of each rule, parallel to `system.rules()`.
    pub rule_spans: Vec<Span>,
    pub comment: bool,
}

impl SourceDocument {
    /// Parses a term over this document's variables and signature.
    pub fn parse_term(&self, text: &str) -> Result<Term, ParseError> {
        let (raw, t) = parse_raw_term(text, self.vars.as_ref())?;
        let sig = self.system.signature();
        for s in t.symbols() {
            match sig.symbol(s.name()) {
                Some(known) if known.arity() == s.arity() => {}
                Some(known) => {
                    return Err(ParseError::new(
                        find_span(&raw, s.name()).unwrap_or(raw.span),
                        ParseErrorKind::ArityConflict {
                            name: s.name().to_string(),
                            expected: known.arity(),
                            found: s.arity(),
                        },
                    ))
                }
                None => {
                    return Err(ParseError::new(
                        find_span(&raw, s.name()).unwrap_or(raw.span),
                        ParseErrorKind::UnknownSymbol(s.name().to_string()),
                    ))
                }
            }
        }
        Ok(t)
    }
}

fn parse_raw_term(text: &str, vars: Option<&BTreeSet<String>>) -> Result<(RawTerm, Term), ParseError> {
    let mut lx = Lexer::new(text);
    let raw = raw_term(&mut lx)?;
    let (tok, span) = lx.next()?;
    if tok != Tok::Eof {
        return Err(unexpected(span, "end of input", &tok));
    }
    let t = resolve(&raw, vars, &mut BTreeMap::new())?;
    Ok((raw, t))
}

/// Parses a standalone term. `vars` plays the role of a VAR block; with
/// `None` the naming convention applies.
pub fn parse_term(text: &str, vars: Option<&BTreeSet<String>>) -> Result<Term, ParseError> {
    parse_raw_term(text, vars).map(|(_, t)| t)
}

fn find_span(raw: &RawTerm, name: &str) -> Option<Span> {
    if raw.name == name {
        return Some(raw.span);
    }
    raw.args.iter().flatten().find_map(|a| find_span(a, name))
}

fn is_conventional_var(name: &str) -> bool {
    name.starts_with(['w', 'x', 'y', 'z'])
}

fn resolve(
    raw: &RawTerm,
    vars: Option<&BTreeSet<String>>,
    arities: &mut BTreeMap<String, usize>,
) -> Result<Term, ParseError> {
    let declared = match vars {
        Some(v) => v.contains(&raw.name),
        None => is_conventional_var(&raw.name),
    };
    match &raw.args {
        None if declared => return Ok(Term::var(&raw.name)),
        Some(_) if vars.is_some_and(|v| v.contains(&raw.name)) => {
            return Err(ParseError::new(
                raw.span,
                ParseErrorKind::VariableAsFunction(raw.name.clone()),
            ))
        }
        _ => {}
    }
    let args = raw
        .args
        .iter()
        .flatten()
        .map(|a| resolve(a, vars, arities))
        .collect::<Result<Vec<_>, _>>()?;
    let arity = *arities.entry(raw.name.clone()).or_insert(args.len());
    if arity != args.len() {
        return Err(ParseError::new(
            raw.span,
            ParseErrorKind::ArityConflict {
                name: raw.name.clone(),
                expected: arity,
                found: args.len(),
            },
        ));
    }
    Ok(Term::app(&raw.name, args))
}

/// Parses a system; rules are labelled `r1, r2, ...` in file order.
pub fn parse_system(text: &str) -> Result<SourceDocument, ParseError> {
    let mut lx = Lexer::new(text);
    let mut vars: Option<BTreeSet<String>> = None;
    let mut rules: Option<Vec<RawRule>> = None;
    let mut condition_type = false;
    let mut comment = false;
    loop {
        let (tok, span) = lx.next()?;
        match tok {
            Tok::Eof => break,
            Tok::Open => {}
            tok => return Err(unexpected(span, "'('", &tok)),
        }
        let (block, span) = lx.ident("a block name")?;
        match block.as_str() {
            "CONDITIONTYPE" => {
                if std::mem::replace(&mut condition_type, true) {
                    return Err(ParseError::new(span, ParseErrorKind::DuplicateBlock(block)));
                }
                let (kind, kspan) = lx.ident("a condition type")?;
                if kind != "ORIENTED" {
                    return Err(ParseError::new(
                        kspan,
                        ParseErrorKind::UnsupportedConditionType(kind),
                    ));
                }
                lx.expect(Tok::Close)?;
            }
            "VAR" => {
                let set = vars.get_or_insert_with(BTreeSet::new);
                loop {
                    match lx.next()? {
                        (Tok::Ident(v), _) => {
                            set.insert(v);
                        }
                        (Tok::Close, _) => break,
                        (tok, span) => return Err(unexpected(span, "a variable or ')'", &tok)),
                    }
                }
            }
            "RULES" => {
                if rules.is_some() {
                    return Err(ParseError::new(span, ParseErrorKind::DuplicateBlock(block)));
                }
                let mut list = Vec::new();
                while lx.peek()?.0 != Tok::Close {
                    list.push(raw_rule(&mut lx)?);
                }
                lx.next()?;
                rules = Some(list);
            }
            "COMMENT" => {
                comment = true;
                lx.skip_block()?;
            }
            _ => return Err(ParseError::new(span, ParseErrorKind::UnknownBlock(block))),
        }
    }
    let Some(raw_rules) = rules else {
        return Err(ParseError::new(lx.span, ParseErrorKind::MissingRules));
    };
    let mut arities = BTreeMap::new();
    let mut out = Vec::with_capacity(raw_rules.len());
    let mut rule_spans = Vec::with_capacity(raw_rules.len());
    for (i, r) in raw_rules.iter().enumerate() {
        let mut term = |t: &RawTerm| resolve(t, vars.as_ref(), &mut arities);
        let lhs = term(&r.lhs)?;
        let rhs = term(&r.rhs)?;
        let conditions = r
            .conditions
            .iter()
            .map(|(s, t)| Ok(Condition::new(term(s)?, term(t)?)))
            .collect::<Result<Vec<_>, ParseError>>()?;
        if lhs.is_var() {
            return Err(ParseError::new(r.span, ParseErrorKind::VariableLhs));
        }
        let rule = Rule::new(&format!("r{}", i + 1), lhs, rhs, conditions)
            .map_err(|e| ParseError::new(r.span, e.into()))?;
        out.push(rule);
        rule_spans.push(r.span);
    }
    let system = RewriteSystem::new(out).map_err(|e| ParseError::new(Span { line: 1, col: 1 }, e.into()))?;
    Ok(SourceDocument {
        system,
        vars,
        rule_spans,
        comment,
    })
}

fn write_term(out: &mut String, t: &Term, rename: &BTreeMap<Var, String>) {
    match t {
        Term::Var(v) => out.push_str(rename.get(v).map_or(v.name(), |s| s.as_str())),
        _ => {
            let f = t.root().expect("application");
            out.push_str(f.name());
            if !t.args().is_empty() {
                out.push('(');
                for (i, a) in t.args().iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_term(out, a, rename);
                }
                out.push(')');
            }
        }
    }
}

/// Renders a system in rule order with a VAR block, so that parsing the
/// output gives back the same rules up to labels.
pub fn render_system(system: &RewriteSystem) -> String {
    let symbols: BTreeSet<String> = system
        .signature()
        .iter()
        .map(|(s, _)| s.name().to_string())
        .collect();
    // A variable named like a function symbol would be read back as the symbol.
    let mut vars = BTreeSet::new();
    for r in system.rules() {
        vars.extend(r.vars());
    }
    let mut rename = BTreeMap::new();
    let mut taken: BTreeSet<String> = vars.iter().map(|v| v.name().to_string()).collect();
    taken.extend(symbols.iter().cloned());
    for v in &vars {
        if symbols.contains(v.name()) {
            let mut name = format!("{}'", v.name());
            while taken.contains(&name) {
                name.push('\'');
            }
            taken.insert(name.clone());
            rename.insert(v.clone(), name);
        }
    }
    let mut out = String::from("(CONDITIONTYPE ORIENTED)\n(VAR");
    for v in &vars {
        out.push(' ');
        out.push_str(rename.get(v).map_or(v.name(), |s| s.as_str()));
    }
    out.push_str(")\n(RULES\n");
    for r in system.rules() {
        out.push_str("  ");
        write_term(&mut out, &r.lhs, &rename);
        out.push_str(" -> ");
        write_term(&mut out, &r.rhs, &rename);
        for (i, c) in r.conditions.iter().enumerate() {
            out.push_str(if i == 0 { " | " } else { ", " });
            write_term(&mut out, &c.source, &rename);
            out.push_str(" == ");
            write_term(&mut out, &c.target, &rename);
        }
        out.push('\n');
    }
    out.push_str(")\n");
    out
}

/// Renders the target system of a transformation, headed by a comment
/// naming the method and the rule labels.
pub fn render_context(ctx: &TransformContext) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(COMMENT method {};", ctx.method.as_str());
    let labels: Vec<&str> = ctx.target.rules().iter().map(|r| r.label()).collect();
    let _ = writeln!(out, "  rules {})", labels.join(" "));
    out.push_str(&render_system(&ctx.target));
    out
}
