use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use zgu_core::chartab::{build_char_table, test_character, CharTable};
use zgu_core::error::Error;
use zgu_core::psl2::{brute_bound_from_env, conjugacy_classes, ClassTable};
use zgu_core::report::{render_text, screen_line, to_canonical_json, verify_all};
use zgu_core::screen::{minimal_simple_report, screen, Candidate, MinimalReport};
use zgu_core::twogroups::{two_subgroup_verdict, TwoSubgroupReport};
use zgu_core::units::{help_enumerate_with, HelpOptions, HelpResult, DEFAULT_BOX, DEFAULT_CANDIDATE_CAP};

/// Character tables of PSL(2,q) and checks on torsion units of its integral
/// group ring.
#[derive(Parser)]
#[command(name = "zgu", version, disable_help_subcommand = true)]
struct Cli {
    /// Emit deterministic JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the ordinary character table.
    Table {
        #[arg(long)]
        q: u64,
    },
    /// Decide which 2-groups can be finite subgroups of units.
    TwoSubgroups {
        #[arg(long)]
        q: u64,
    },
    /// Enumerate partial augmentations of units of the given order.
    Help {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        order: u64,
        /// Bound on |partial augmentation|.
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        box_bound: i64,
        /// Abort after this many candidates.
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_CAP)]
        cap: u64,
        /// Also use Brauer characters in the defining characteristic.
        #[arg(long)]
        modular: bool,
    },
    /// Screen a simple group as a composition factor.
    Screen {
        #[arg(long)]
        q: u64,
        /// psl2:r,m | a5 | a7 | j1 | ree:n | sz:n | psl33
        #[arg(long)]
        candidate: String,
    },
    /// Order arithmetic for proper subgroups of units of a minimal simple group.
    Minimal {
        /// psl2:q | psl2:r,m | psl33 | sz:p
        #[arg(long)]
        g: String,
    },
    /// List the conjugacy classes.
    Classes {
        #[arg(long)]
        q: u64,
    },
    /// List the real and non-real classes.
    Real {
        #[arg(long)]
        q: u64,
    },
    /// Run every check for one q.
    VerifyAll {
        #[arg(long)]
        q: u64,
    },
}

/// Output plus exit code of one subcommand.
struct Outcome {
    text: String,
    json: String,
    code: u8,
}

fn emit<T: Serialize>(value: &T, text: String, code: u8) -> Result<Outcome, Error> {
    Ok(Outcome { text, json: to_canonical_json(value)?, code })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("zgu: {e}");
            ExitCode::from(match e {
                Error::Inconsistent(_) => 1,
                _ => 2,
            })
        }
    }
}

fn run(cmd: Cmd) -> Result<Outcome, Error> {
    let bound = brute_bound_from_env();
    match cmd {
        Cmd::Table { q } => {
            let table = build_char_table(q)?;
            let mut text = table_text(&table);
            match test_character(&table) {
                Ok((label, _)) => {
                    let _ = writeln!(text, "test character: {label}");
                }
                Err(e @ Error::QIsFive) => {
                    let _ = writeln!(text, "note: {e}");
                }
                Err(e) => return Err(e),
            }
            emit(&table.to_report(), text, 0)
        }
        Cmd::TwoSubgroups { q } => {
            let rep = two_subgroup_verdict(q)?;
            emit(&rep, two_subgroup_text(&rep), 0)
        }
        Cmd::Help { q, order, box_bound, cap, modular } => {
            let table = build_char_table(q)?;
            let res = help_enumerate_with(&table, order, &HelpOptions { box_bound, cap, modular })?;
            let code = if res.only_trivial() { 0 } else { 3 };
            emit(&res, help_text(&res), code)
        }
        Cmd::Screen { q, candidate } => {
            let c: Candidate = candidate.parse()?;
            let rep = screen(c, q)?;
            let mut text = format!("{}\n", screen_line(&rep));
            for s in &rep.stages {
                let p = s.prime.map(|r| format!(" r={r}")).unwrap_or_default();
                let _ = writeln!(text, "  {:?}{p}: {:?}: {}", s.stage, s.outcome, s.witness);
            }
            emit(&rep, text, 0)
        }
        Cmd::Minimal { g } => {
            let rep = minimal_simple_report(&g)?;
            emit(&rep, minimal_text(&rep), 0)
        }
        Cmd::Classes { q } => {
            let classes = conjugacy_classes(q, bound)?;
            let rows: Vec<_> = class_rows(&classes);
            let mut text = format!("PSL(2,{q}) has {} classes\n", rows.len());
            for r in &rows {
                let _ = writeln!(text, "  {:<6} order {:<4} size {:<8} centralizer {}", r.label, r.order, r.size, r.centralizer);
            }
            emit(&rows, text, 0)
        }
        Cmd::Real { q } => {
            let classes = conjugacy_classes(q, bound)?;
            let real = classes.real_classes();
            let (yes, no): (Vec<_>, Vec<_>) = classes.labels().into_iter().partition(|l| real.contains(l));
            let text = format!(
                "real: {}\nnon-real: {}\n",
                yes.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                no.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
            );
            let json = serde_json::json!({ "q": q, "real": yes, "non_real": no });
            emit(&json, text, 0)
        }
        Cmd::VerifyAll { q } => {
            let rep = verify_all(q, bound)?;
            emit(&rep, render_text(&rep), rep.exit_code() as u8)
        }
    }
}

#[derive(Serialize)]
struct ClassRow {
    label: String,
    order: u64,
    size: u64,
    centralizer: u64,
}

fn class_rows(classes: &ClassTable) -> Vec<ClassRow> {
    classes
        .classes()
        .iter()
        .map(|c| ClassRow {
            label: c.label.to_string(),
            order: c.order,
            size: c.size,
            centralizer: classes.group_order() / c.size,
        })
        .collect()
}

fn table_text(table: &CharTable) -> String {
    let mut out = format!("PSL(2,{}), |G| = {}, eps = {:+}\n", table.q(), table.group_order(), table.epsilon());
    let classes = table.classes().classes();
    let _ = writeln!(
        out,
        "classes: {}",
        classes
            .iter()
            .map(|c| format!("{} (order {}, size {})", c.label, c.order, c.size))
            .collect::<Vec<_>>()
            .join(", ")
    );
    for row in table.rows() {
        let _ = writeln!(out, "{} (degree {}):", row.label, row.degree);
        for (c, v) in classes.iter().zip(&row.values) {
            let _ = writeln!(out, "  {:<6} {}", c.label.to_string(), v);
        }
    }
    out
}

fn two_subgroup_text(r: &TwoSubgroupReport) -> String {
    let mut out = format!("PSL(2,{}): finite 2-subgroups of units are {}\n", r.q, r.conclusion);
    if let Some(p) = &r.precondition {
        let _ = writeln!(out, "q - eps = {}; 8 divides it: {}", p.q_minus_epsilon, p.proceed);
    }
    for o in &r.obstructions {
        let _ = writeln!(out, "{} -> {}: {}", o.test, o.verdict, o.witness);
    }
    for s in &r.reductions {
        let _ = writeln!(out, "  {s}");
    }
    out
}

fn help_text(r: &HelpResult) -> String {
    let mut out = format!(
        "units of order {} in V(Z PSL(2,{})): {} admissible, {} nontrivial, {} candidates examined (box {}{})\n",
        r.n,
        r.q,
        r.solutions.len(),
        r.nontrivial_count(),
        r.candidates_examined,
        r.box_bound,
        if r.modular { ", modular" } else { "" }
    );
    for s in &r.solutions {
        let top = &s.chain.pa[&r.n];
        let pa = top.eps.iter().map(|(c, e)| format!("{c}:{e}")).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "  [{}] {pa}", if s.trivial { "trivial" } else { "NONTRIVIAL" });
    }
    out
}

fn minimal_text(r: &MinimalReport) -> String {
    let mut out = format!("|G| = {}\n", r.group_order);
    for n in &r.notes {
        let _ = writeln!(out, "  {n}");
    }
    for s in &r.suzuki {
        let _ = writeln!(out, "  Sz(2^{}): {}", s.n, s.witness);
    }
    let _ = writeln!(out, "all smaller simple candidates excluded: {}", r.all_proper_excluded);
    out
}
