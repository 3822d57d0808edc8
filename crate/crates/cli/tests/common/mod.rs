#![allow(dead_code)]

use std::path::PathBuf;

use ctrslab::{parse_system, parse_term, SourceDocument};
use ctrslab_core::Term;

pub const FIXTURES: &[&str] = &[
    "r1",
    "r2",
    "r4",
    "ll_not_wll",
    "wll_not_uwll",
    "uwll_not_wll",
    "wll_ext",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.trs"))
}

pub fn fixture(name: &str) -> SourceDocument {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_system(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Parses a term over the fixture's declared variables; symbols outside
/// its signature are allowed.
pub fn term(doc: &SourceDocument, src: &str) -> Term {
    parse_term(src, doc.vars.as_ref()).unwrap_or_else(|e| panic!("{src}: {e}"))
}

/// The terms of the fixture's sibling `.seeds` file.
pub fn seeds(name: &str) -> Vec<Term> {
    let doc = fixture(name);
    let text = std::fs::read_to_string(fixture_path(name).with_extension("seeds")).unwrap();
    text.lines()
        .map(|l| l.split(';').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(|l| term(&doc, l))
        .collect()
}
