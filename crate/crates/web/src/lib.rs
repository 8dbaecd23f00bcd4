//! Browser bindings. Every function takes plain numbers and returns a JSON
//! string; failures come back as `{"error": "..."}`.

use serde::Serialize;
use wasm_bindgen::prelude::*;
use zgu_core::chartab::{build_char_table, test_character};
use zgu_core::error::Error;
use zgu_core::report::to_canonical_json;
use zgu_core::twogroups::two_subgroup_verdict;
use zgu_core::units::{help_enumerate_with, HelpOptions};

/// The browser gets a smaller search budget than the CLI.
const WEB_CAP: u64 = 2_000_000;

#[derive(Serialize)]
struct TableView {
    q: u64,
    epsilon: i64,
    group_order: u64,
    classes: Vec<ClassView>,
    rows: Vec<RowView>,
    test_character: Option<String>,
    note: Option<String>,
}

#[derive(Serialize)]
struct ClassView {
    label: String,
    order: u64,
    size: u64,
}

#[derive(Serialize)]
struct RowView {
    label: String,
    degree: u64,
    values: Vec<String>,
}

#[derive(Serialize)]
struct HelpView {
    q: u64,
    order: u64,
    modular: bool,
    candidates_examined: u64,
    solutions: Vec<SolutionView>,
}

#[derive(Serialize)]
struct SolutionView {
    trivial: bool,
    partial_augmentations: Vec<(String, i64)>,
}

fn respond<T: Serialize>(r: Result<T, Error>) -> String {
    let out = r.and_then(|v| to_canonical_json(&v));
    out.unwrap_or_else(|e| serde_json::json!({ "error": e.to_string() }).to_string())
}

/// Character table with values rendered as strings.
#[wasm_bindgen]
pub fn char_table(q: u32) -> String {
    respond((|| {
        let t = build_char_table(q as u64)?;
        let (test, note) = match test_character(&t) {
            Ok((label, _)) => (Some(label.to_string()), None),
            Err(e @ Error::QIsFive) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        };
        Ok(TableView {
            q: t.q(),
            epsilon: t.epsilon(),
            group_order: t.group_order(),
            classes: t
                .classes()
                .classes()
                .iter()
                .map(|c| ClassView { label: c.label.to_string(), order: c.order, size: c.size })
                .collect(),
            rows: t
                .rows()
                .iter()
                .map(|r| RowView {
                    label: r.label.to_string(),
                    degree: r.degree,
                    values: r.values.iter().map(ToString::to_string).collect(),
                })
                .collect(),
            test_character: test,
            note,
        })
    })())
}

/// Which finite 2-groups can occur among the units, with the obstructions.
#[wasm_bindgen]
pub fn two_subgroups(q: u32) -> String {
    respond(two_subgroup_verdict(q as u64))
}

/// Partial augmentations of units of order `order` allowed by HeLP.
#[wasm_bindgen]
pub fn help(q: u32, order: u32, modular: bool) -> String {
    respond((|| {
        let t = build_char_table(q as u64)?;
        let opts = HelpOptions { cap: WEB_CAP, modular, ..HelpOptions::default() };
        let res = help_enumerate_with(&t, order as u64, &opts)?;
        Ok(HelpView {
            q: res.q,
            order: res.n,
            modular: res.modular,
            candidates_examined: res.candidates_examined,
            solutions: res
                .solutions
                .iter()
                .map(|s| SolutionView {
                    trivial: s.trivial,
                    partial_augmentations: s.chain.pa[&res.n]
                        .eps
                        .iter()
                        .map(|(c, e)| (c.to_string(), *e))
                        .collect(),
                })
                .collect(),
        })
    })())
}
