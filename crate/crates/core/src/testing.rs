//! Compact term syntax for tests: identifiers starting with `w`, `x`, `y` or
//! `z` and written without parentheses are variables, everything else is a
//! function symbol.

use alloc::string::String;
use alloc::vec::Vec;

use crate::system::{Condition, RewriteSystem, Rule};
use crate::term::Term;

pub fn term(src: &str) -> Term {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let t = p.term();
    p.skip_ws();
    assert_eq!(p.pos, p.src.len(), "trailing input in {src:?}");
    t
}

/// `l -> r` or `l -> r | s1 == t1, s2 == t2`.
pub fn rule(label: &str, src: &str) -> Rule {
    let (main, conds) = match src.split_once('|') {
        Some((m, c)) => (m, Some(c)),
        None => (src, None),
    };
    let (l, r) = main.split_once("->").expect("rule needs ->");
    let conditions = conds
        .map(|c| {
            split_top(c)
                .into_iter()
                .map(|cond| {
                    let (s, t) = cond.split_once("==").expect("condition needs ==");
                    Condition::new(term(s.trim()), term(t.trim()))
                })
                .collect()
        })
        .unwrap_or_default();
    Rule::new(label, term(l.trim()), term(r.trim()), conditions).unwrap()
}

/// One rule per line, labelled `r1`, `r2`, ... in order.
pub fn system(src: &str) -> RewriteSystem {
    let rules = src
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| rule(&alloc::format!("r{}", i + 1), l))
        .collect();
    RewriteSystem::new(rules).unwrap()
}

pub const R1: &str = "
    split(x, nil) -> pair(nil, nil)
    split(x, cons(y, ys)) -> pair(xs, cons(y, zs)) | split(x, ys) == pair(xs, zs), leq(x, y) == true
    split(x, cons(y, ys)) -> pair(cons(y, xs), zs) | split(x, ys) == pair(xs, zs), leq(x, y) == false
    qsort(nil) -> nil
    qsort(cons(x, xs)) -> append(qsort(ys), cons(x, qsort(zs))) | split(x, xs) == pair(ys, zs)
    leq(0, y) -> true
    leq(s(x), 0) -> false
    leq(s(x), s(y)) -> leq(x, y)
    append(nil, ys) -> ys
    append(cons(x, xs), ys) -> cons(x, append(xs, ys))
";

pub const R4: &str = "
    f(x) -> c | x == c
    f(x) -> d | x == d
    a -> c
    a -> d
    b -> c
    b -> d
    g(x) -> h(x, x)
    h(c, d) -> c
    h(x, f(x)) -> d
";

pub const WLL_NOT_UWLL: &str = "f(x) -> x | a == y, b == y, x == c";
pub const UWLL_NOT_WLL: &str = "f(x) -> x | a == y, y == b, c == y";

fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(core::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Term {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric()
                || matches!(self.src[self.pos], b'_' | b'\'' | b'^'))
        {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        assert!(!name.is_empty(), "expected identifier at {}", start);
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'(') {
            self.pos += 1;
            let mut args = Vec::new();
            loop {
                args.push(self.term());
                self.skip_ws();
                match self.src.get(self.pos) {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => panic!("bad term syntax at {}", self.pos),
                }
            }
            Term::app(name, args)
        } else if name.starts_with(['w', 'x', 'y', 'z']) {
            Term::var(name)
        } else {
            Term::constant(name)
        }
    }
}
