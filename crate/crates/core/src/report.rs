//! End-to-end verification for one `q` and the deterministic JSON used by
//! every report.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::arith::prime_divisors;
use crate::chartab::{
    build_char_table, fs_indicator, test_character, verify_columns_brute_force, verify_orthogonality,
    ClassSummary, OrthogonalityReport,
};
use crate::error::{Error, Result};
use crate::exact::to_i64;
use crate::psl2::{check_q, conjugacy_classes, group_order, BruteForceClasses};
use crate::screen::{screen, standard_candidates, ScreenReport, ScreenVerdict};
use crate::twogroups::{two_subgroup_verdict, TwoSubgroupReport, Verdict};
use crate::units::{help_enumerate_with, HelpOptions};

/// Serializes through `serde_json::Value`, whose maps are sorted, so equal
/// inputs give byte-identical output.
pub fn to_canonical_json<T: Serialize>(x: &T) -> Result<String> {
    let v = serde_json::to_value(x).map_err(|e| Error::Inconsistent(e.to_string()))?;
    serde_json::to_string_pretty(&v).map_err(|e| Error::Inconsistent(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// Some HeLP sweep left a nontrivial partial augmentation.
    NontrivialHelp,
    /// An invariant failed.
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCharSummary {
    pub label: String,
    pub degree: u64,
    pub value_at_involution: i64,
    pub fs_indicator: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HelpSummary {
    pub r: u64,
    pub modular: bool,
    pub candidates_examined: u64,
    pub solutions: usize,
    pub nontrivial: usize,
    /// False when the search hit its candidate cap.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub q: u64,
    pub p: u64,
    pub f: u32,
    pub epsilon: Option<i64>,
    pub group_order: u64,
    pub classes: Vec<ClassSummary>,
    pub degrees: Option<Vec<u64>>,
    pub orthogonality: Option<OrthogonalityReport>,
    /// Second orthogonality against brute-force centralizers.
    pub columns: Option<OrthogonalityReport>,
    pub test_character: Option<TestCharSummary>,
    pub two_subgroups: TwoSubgroupReport,
    pub help: Vec<HelpSummary>,
    pub screens: Vec<ScreenReport>,
    pub notes: Vec<String>,
    pub inconsistencies: Vec<String>,
    pub status: Status,
}

impl VerifyReport {
    /// Process exit code for the CLI: 0 ok, 1 inconsistent, 3 nontrivial HeLP.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Inconsistent => 1,
            Status::NontrivialHelp => 3,
        }
    }
}

/// Builds everything for `q` and cross-checks it. Brute-force steps run only
/// for `q <= brute_bound`.
pub fn verify_all(q: u64, brute_bound: u64) -> Result<VerifyReport> {
    let (p, f) = check_q(q)?;
    let order = group_order(q)?;
    let mut notes = Vec::new();
    let mut bad = Vec::new();

    let classes = match conjugacy_classes(q, brute_bound) {
        Ok(c) => Some(c),
        Err(Error::Inconsistent(e)) => {
            bad.push(e);
            None
        }
        Err(e @ Error::BoundExceeded { .. }) => {
            notes.push(format!("class table skipped: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let class_summary = classes
        .as_ref()
        .map(|c| {
            c.classes()
                .iter()
                .map(|ci| ClassSummary { label: ci.label, size: ci.size, order: ci.order })
                .collect()
        })
        .unwrap_or_default();

    let mut degrees = None;
    let mut orthogonality = None;
    let mut columns = None;
    let mut test_char = None;
    let mut help = Vec::new();

    if p != 2 {
        let table = build_char_table(q)?;
        degrees = Some(table.degrees());
        let orth = verify_orthogonality(&table, table.classes());
        if !orth.passed() {
            bad.push(format!("first orthogonality fails: {:?}", orth.row_failures));
        }
        orthogonality = Some(orth);
        if q <= brute_bound {
            let bf = BruteForceClasses::new(q, brute_bound)?;
            let cols = verify_columns_brute_force(&table, &bf);
            if !cols.passed() {
                bad.push(format!("second orthogonality fails: {:?}", cols.column_failures));
            }
            columns = Some(cols);
        }
        match test_character(&table) {
            Ok((label, row)) => {
                let s = table.classes().involution_class().expect("odd q");
                let at_s = table.value(label, s).and_then(|v| v.as_rational()).and_then(|r| to_i64(&r));
                let ind = fs_indicator(&table, table.classes(), label)?;
                if ind != 1 {
                    bad.push(format!("Frobenius-Schur indicator of {label} is {ind}"));
                }
                test_char = Some(TestCharSummary {
                    label: label.to_string(),
                    degree: row.degree,
                    value_at_involution: at_s.unwrap_or_default(),
                    fs_indicator: ind,
                });
            }
            Err(Error::QIsFive) => notes.push(format!("{}; the rest of the table is unaffected", Error::QIsFive)),
            Err(Error::Inconsistent(e)) => bad.push(e),
            Err(e) => return Err(e),
        }
        let opts = HelpOptions { modular: true, ..HelpOptions::default() };
        for r in prime_divisors(order) {
            match help_enumerate_with(&table, r, &opts) {
                Ok(res) => help.push(HelpSummary {
                    r,
                    modular: res.modular,
                    candidates_examined: res.candidates_examined,
                    solutions: res.solutions.len(),
                    nontrivial: res.nontrivial_count(),
                    complete: true,
                }),
                Err(e @ Error::CandidateCapExceeded { cap }) => {
                    notes.push(format!("HeLP order {r}: {e}"));
                    help.push(HelpSummary {
                        r,
                        modular: opts.modular,
                        candidates_examined: cap,
                        solutions: 0,
                        nontrivial: 0,
                        complete: false,
                    });
                }
                Err(e) => return Err(e),
            }
        }
    } else {
        notes.push("character table and HeLP sweep need odd q".into());
    }

    let two_subgroups = two_subgroup_verdict(q)?;
    if two_subgroups.obstructions.iter().any(|o| o.verdict == Verdict::Pass) {
        bad.push("an obstruction did not fire".into());
    }

    let mut screens = Vec::new();
    for c in standard_candidates(q)? {
        match screen(c, q) {
            Ok(r) => screens.push(r),
            Err(Error::UnknownFact { candidate, key }) => {
                notes.push(format!("{candidate}: no fact for {key}"))
            }
            Err(e) => return Err(e),
        }
    }

    let nontrivial = help.iter().any(|h| h.nontrivial > 0);
    let status = if !bad.is_empty() {
        Status::Inconsistent
    } else if nontrivial {
        Status::NontrivialHelp
    } else {
        Status::Ok
    };
    Ok(VerifyReport {
        q,
        p,
        f,
        epsilon: classes.as_ref().and_then(|c| c.epsilon()),
        group_order: order,
        classes: class_summary,
        degrees,
        orthogonality,
        columns,
        test_character: test_char,
        two_subgroups,
        help,
        screens,
        notes,
        inconsistencies: bad,
        status,
    })
}

/// One-line verdict for a screen result.
pub fn screen_line(s: &ScreenReport) -> String {
    match &s.verdict {
        ScreenVerdict::Admissible { embeds_as } => format!("{}: admissible ({embeds_as})", s.candidate),
        ScreenVerdict::Excluded { first, failures } => {
            format!("{}: excluded, {} test(s) failed; first: {}", s.candidate, failures.len(), first.witness)
        }
        ScreenVerdict::Unresolved { reason } => format!("{}: unresolved ({reason})", s.candidate),
    }
}

/// Plain-text rendering of a verification report.
pub fn render_text(r: &VerifyReport) -> String {
    let mut out = String::new();
    let eps = r.epsilon.map_or("n/a".to_string(), |e| format!("{e:+}"));
    let _ = writeln!(out, "PSL(2,{}): p = {}, f = {}, |G| = {}, eps = {eps}", r.q, r.p, r.f, r.group_order);
    if !r.classes.is_empty() {
        let _ = writeln!(out, "classes ({}):", r.classes.len());
        for c in &r.classes {
            let _ = writeln!(out, "  {:<6} order {:<4} size {}", c.label.to_string(), c.order, c.size);
        }
    }
    if let Some(d) = &r.degrees {
        let _ = writeln!(out, "degrees: {d:?}");
    }
    if let Some(o) = &r.orthogonality {
        let _ = writeln!(out, "row orthogonality: {} ({} pairs)", pass(o.passed()), o.row_pairs_checked);
    }
    if let Some(o) = &r.columns {
        let _ = writeln!(out, "column orthogonality: {} ({} pairs)", pass(o.passed()), o.column_pairs_checked);
    }
    if let Some(t) = &r.test_character {
        let _ = writeln!(
            out,
            "test character {}: degree {}, value {} at the involution, indicator {}",
            t.label, t.degree, t.value_at_involution, t.fs_indicator
        );
    }
    let _ = writeln!(out, "2-subgroups: {}", r.two_subgroups.conclusion);
    for o in &r.two_subgroups.obstructions {
        let _ = writeln!(out, "  {} -> {}: {}", o.test, o.verdict, o.witness);
    }
    for h in &r.help {
        let _ = writeln!(
            out,
            "HeLP order {}: {} solution(s), {} nontrivial, {} candidates{}{}",
            h.r,
            h.solutions,
            h.nontrivial,
            h.candidates_examined,
            if h.modular { ", with modular constraints" } else { "" },
            if h.complete { "" } else { ", INCOMPLETE (cap reached)" }
        );
    }
    for s in &r.screens {
        let _ = writeln!(out, "screen {}", screen_line(s));
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    for b in &r.inconsistencies {
        let _ = writeln!(out, "INCONSISTENT: {b}");
    }
    let _ = writeln!(out, "status: {}", serde_json::to_value(r.status).unwrap().as_str().unwrap_or("?"));
    out
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_is_clean() {
        let r = verify_all(7, 13).unwrap();
        assert_eq!(r.status, Status::Ok, "{:?}", r.inconsistencies);
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.classes.len(), 6);
        let e8 = &r.two_subgroups.obstructions[0];
        assert!(e8.witness.contains("q+3ε = 4"), "{}", e8.witness);
        let text = render_text(&r);
        assert!(text.contains("q+3ε = 4"));
        assert!(text.contains("status: ok"));
    }

    #[test]
    fn json_is_deterministic_and_round_trips() {
        let r = verify_all(9, 13).unwrap();
        let a = to_canonical_json(&r).unwrap();
        let b = to_canonical_json(&verify_all(9, 13).unwrap()).unwrap();
        assert_eq!(a, b);
        let back: VerifyReport = serde_json::from_str(&a).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn text_agrees_with_json_verdicts() {
        let r = verify_all(9, 13).unwrap();
        let text = render_text(&r);
        for o in &r.two_subgroups.obstructions {
            assert!(text.contains(&format!("{} -> {}", o.test, o.verdict)));
        }
        for s in &r.screens {
            assert!(text.contains(&screen_line(s)));
        }
    }

    #[test]
    fn five_and_even() {
        let r = verify_all(5, 13).unwrap();
        assert!(r.test_character.is_none());
        assert!(r.notes.iter().any(|n| n.contains("q = 5")));
        let r = verify_all(8, 13).unwrap();
        assert_eq!(r.status, Status::Ok);
        assert_eq!(r.two_subgroups.conclusion, "elementary abelian");
        assert!(r.degrees.is_none());
    }
}
