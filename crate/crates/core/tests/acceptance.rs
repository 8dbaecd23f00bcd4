//! Acceptance run: one PASS/FAIL line per criterion, with the tolerance or
//! time budget it was held to. Runs as a plain binary so the lines always
//! show up in `cargo test` output.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use zgu_core::arith::{gcd, prime_divisors};
use zgu_core::chartab::{
    build_char_table, fs_indicator_with, restrict_multiplicities, test_character, verify_columns_brute_force,
    verify_orthogonality, CharTable,
};
use zgu_core::cyclo::Cyclo;
use zgu_core::error::Error;
use zgu_core::exact::{rat, Rational};
use zgu_core::psl2::{
    check_q, count_classes_of_order_r, find_subgroup, group_order, BruteForceClasses, ClassLabel, SubgroupShape,
};
use zgu_core::screen::{
    divides_power_minus_one, screen, screen_with, standard_candidates, suzuki_exclusion, Candidate, FactBase,
    Outcome, ScreenVerdict, Stage, SuzukiVerdict,
};
use zgu_core::twogroups::{obstruction_c4xc2, obstruction_e8, obstruction_q8, Quantity};
use zgu_core::units::{help_enumerate_with, HelpOptions};

const BOUND: u64 = 27;

struct Line {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn timed(f: impl FnOnce() -> Result<String, String>) -> (Result<String, String>, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn run(id: u32, title: &'static str, budget: Option<Duration>, f: impl FnOnce() -> Result<String, String>) -> Line {
    let (r, dt) = timed(f);
    let (mut pass, mut detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    match budget {
        Some(b) => {
            detail.push_str(&format!("; {:.2}s (budget {}s)", dt.as_secs_f64(), b.as_secs()));
            if dt > b {
                pass = false;
            }
        }
        None => detail.push_str(&format!("; {:.2}s", dt.as_secs_f64())),
    }
    Line { id, title, pass, detail }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn c1() -> Result<String, String> {
    let qs = [7u64, 9, 11, 13, 17, 19, 23, 25, 27];
    let mut rows = 0;
    let mut cols = 0;
    for q in qs {
        let t = build_char_table(q).map_err(e)?;
        let o = verify_orthogonality(&t, t.classes());
        ensure(o.row_failures.is_empty(), || format!("q={q}: row failures {:?}", o.row_failures))?;
        rows += o.row_pairs_checked;
        if q <= 13 {
            let bf = BruteForceClasses::new(q, BOUND).map_err(e)?;
            let c = verify_columns_brute_force(&t, &bf);
            ensure(c.passed(), || format!("q={q}: column failures {:?}", c.column_failures))?;
            cols += c.column_pairs_checked;
        }
    }
    Ok(format!("exact; {rows} row pairs over q in {qs:?}, {cols} column pairs vs brute-force centralizers for q <= 13"))
}

fn c2() -> Result<String, String> {
    let t = build_char_table(7).map_err(e)?;
    let d = t.degrees();
    ensure(d == vec![1, 7, 8, 6, 3, 3], || format!("q=7 degrees {d:?}"))?;
    let s: u64 = d.iter().map(|x| x * x).sum();
    ensure(s == 168, || format!("sum of squares {s}"))?;
    let qs = [7u64, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31];
    for q in qs {
        let t = build_char_table(q).map_err(e)?;
        let eps = t.epsilon();
        let (label, row) = test_character(&t).map_err(e)?;
        ensure(row.degree as i64 == q as i64 + eps, || format!("q={q}: xi(1) = {}", row.degree))?;
        let inv = t.classes().involution_class().ok_or("no involution class")?;
        let v = t.value(label, inv).ok_or("missing value")?;
        ensure(*v == Cyclo::from_int(-2 * eps), || format!("q={q}: xi(s) = {v}"))?;
    }
    Ok(format!("zero tolerance; degrees (1,7,8,6,3,3), sum 168; xi(1) = q+eps, xi(s) = -2eps for q in {qs:?}"))
}

fn c3() -> Result<String, String> {
    let qs = [7u64, 9, 17, 23, 25, 31, 41, 47, 49];
    for q in qs {
        let t = build_char_table(q).map_err(e)?;
        let eps = t.epsilon();
        let s = q as i64 + 3 * eps;
        let o = obstruction_e8(&t).map_err(e)?;
        let want = rat(s, 8);
        match &o.scalar_product {
            Quantity::Exact { value } => {
                ensure(value.0 == want && !value.0.is_integer(), || format!("q={q}: E8 gave {value}"))?
            }
            other => return Err(format!("q={q}: E8 gave {other}")),
        }
        ensure(o.witness.contains("q+3ε"), || format!("q={q}: E8 witness {}", o.witness))?;
        let o = obstruction_c4xc2(&t).map_err(e)?;
        match &o.raw_sum {
            Quantity::Residue { residue, modulus: 8 } => ensure(
                *residue == s.rem_euclid(8) && *residue != 0,
                || format!("q={q}: C4xC2 residue {residue}"),
            )?,
            other => return Err(format!("q={q}: C4xC2 gave {other}")),
        }
        let o = obstruction_q8(&t).map_err(e)?;
        match &o.scalar_product {
            Quantity::Exact { value } => ensure(
                value.0 == rat(s, 4) && value.0.is_integer() && s / 4 % 2 != 0,
                || format!("q={q}: Q8 gave {value}"),
            )?,
            other => return Err(format!("q={q}: Q8 gave {other}")),
        }
        ensure(o.witness.contains("2(q−ε)+8ε"), || format!("q={q}: Q8 witness {}", o.witness))?;
    }
    Ok(format!("exact; (q+3ε)/8 non-integer, q+3ε mod 8 != 0, (q+3ε)/4 odd for q in {qs:?}"))
}

fn c4() -> Result<String, String> {
    let qs = [7u64, 9, 11, 13];
    for q in qs {
        let t = build_char_table(q).map_err(e)?;
        let (xi, _) = test_character(&t).map_err(e)?;
        let bf = BruteForceClasses::new(q, BOUND).map_err(e)?;
        let squares = bf.power_map(2);
        let ind = fs_indicator_with(&t, &squares, xi).map_err(e)?;
        ensure(ind == 1, || format!("q={q}: indicator {ind}"))?;
    }
    Ok(format!("exact; indicator of xi is 1 with brute-force squaring maps for q in {qs:?}"))
}

fn c5() -> Result<String, String> {
    let mut out = Vec::new();
    for (q, shape) in [(7u64, SubgroupShape::Dihedral(8)), (9, SubgroupShape::FourGroup)] {
        let t = build_char_table(q).map_err(e)?;
        let (xi, row) = test_character(&t).map_err(e)?;
        let h = find_subgroup(q, shape, BOUND).map_err(e)?.ok_or(format!("no {shape} in PSL(2,{q})"))?;
        let res = restrict_multiplicities(&t.value_map(xi).unwrap(), &h, t.classes()).map_err(e)?;
        ensure(res.all_nonnegative_integers(), || format!("q={q}: {res:?}"))?;
        let w = res.weighted_degree();
        ensure(w == Rational::from_integer((row.degree as i64).into()), || format!("q={q}: weighted degree {w}"))?;
        out.push(format!("{shape} in PSL(2,{q}): sum = {w}"));
    }
    Ok(format!("exact; {}", out.join(", ")))
}

/// Independent Brauer values: tensor products of Frobenius twists of
/// `Sym^(2k)` on the split and nonsplit tori, written out per class.
fn oracle_brauer(t: &CharTable) -> Vec<BTreeMap<ClassLabel, Cyclo>> {
    let q = t.q();
    let (p, f) = check_q(q).unwrap();
    let mut out = Vec::new();
    let kmax = (p - 1) / 2;
    let count = (kmax + 1).pow(f);
    for code in 1..count {
        let ks: Vec<u64> = (0..f).map(|i| code / (kmax + 1).pow(i) % (kmax + 1)).collect();
        let torus = |n: u64, e: u64| -> Cyclo {
            let mut acc = Cyclo::one();
            for (i, &k) in ks.iter().enumerate() {
                let twist = e * p.pow(i as u32) % n;
                let mut s = Cyclo::one();
                for t in 1..=k {
                    s = &s + &Cyclo::root_pair_sum(n, (t * twist) as i64);
                }
                acc = &acc * &s;
            }
            acc
        };
        let mut m = BTreeMap::new();
        for c in t.classes().labels() {
            let v = match c {
                ClassLabel::One => Cyclo::from_int(ks.iter().map(|&k| 2 * k as i64 + 1).product()),
                ClassLabel::A(l) => torus((q - 1) / 2, l),
                ClassLabel::B(l) => torus(q.div_ceil(2), l),
                _ => continue,
            };
            m.insert(c, v);
        }
        out.push(m);
    }
    out
}

/// Galois automorphism `zeta_r -> zeta_r^j`, applied to an element of
/// `Q(zeta_N)` for `N` a multiple of `r`.
fn sigma(x: &Cyclo, j: u64, r: u64) -> Cyclo {
    let n = x.conductor().max(1);
    let mut k = j;
    while gcd(k, n) != 1 {
        k += r;
    }
    x.galois(k as i64)
}

/// `mu_l = (1/r)(chi(1) + Tr(chi(u) zeta_r^-l))` for a unit of prime order `r`.
fn oracle_mu(chi: &BTreeMap<ClassLabel, Cyclo>, eps: &BTreeMap<ClassLabel, i64>, r: u64, l: u64) -> Rational {
    let mut val = Cyclo::zero();
    for (c, &k) in eps {
        val = &val + &chi[c].scale(&Rational::from_integer(k.into()));
    }
    let twisted = &val * &Cyclo::root_of_unity(r, -(l as i64));
    let mut tr = Cyclo::zero();
    for j in 1..r {
        tr = &tr + &sigma(&twisted, j, r);
    }
    let total = &tr + &chi[&ClassLabel::One];
    total.scale(&rat(1, r as i64)).as_rational().expect("trace is rational")
}

/// Exhaustive box scan for units of prime order `r`.
fn oracle_scan(t: &CharTable, r: u64, b: i64, modular: bool) -> BTreeSet<Vec<(ClassLabel, i64)>> {
    let support: Vec<ClassLabel> =
        t.classes().classes().iter().filter(|c| c.order == r).map(|c| c.label).collect();
    let mut chars: Vec<BTreeMap<ClassLabel, Cyclo>> = t.rows().iter().map(|row| t.value_map(row.label).unwrap()).collect();
    if modular {
        chars.extend(oracle_brauer(t));
    }
    let mut found = BTreeSet::new();
    let k = support.len();
    if k == 0 {
        return found;
    }
    let width = (2 * b + 1) as u64;
    for code in 0..width.pow(k as u32 - 1) {
        let mut eps = BTreeMap::new();
        let mut sum = 0;
        for (i, c) in support[..k - 1].iter().enumerate() {
            let v = (code / width.pow(i as u32) % width) as i64 - b;
            sum += v;
            eps.insert(*c, v);
        }
        let last = 1 - sum;
        if last.abs() > b {
            continue;
        }
        eps.insert(support[k - 1], last);
        let ok = chars.iter().all(|chi| {
            (0..r).all(|l| {
                let mu = oracle_mu(chi, &eps, r, l);
                mu.is_integer() && mu >= Rational::zero()
            })
        });
        if ok {
            found.insert(eps.into_iter().filter(|&(_, v)| v != 0).collect());
        }
    }
    found
}

fn c6() -> Result<String, String> {
    let mut ordinary_nontrivial = Vec::new();
    let mut cases = 0;
    for q in [7u64, 9, 11, 13] {
        let t = build_char_table(q).map_err(e)?;
        let (p, _) = check_q(q).unwrap();
        for r in prime_divisors(group_order(q).unwrap()).into_iter().filter(|&r| r != p) {
            cases += 1;
            let opts = HelpOptions { modular: true, ..HelpOptions::default() };
            let res = help_enumerate_with(&t, r, &opts).map_err(e)?;
            ensure(res.modular, || format!("q={q} r={r}: modular constraints not applied"))?;
            ensure(res.only_trivial(), || format!("q={q} r={r}: {} nontrivial", res.nontrivial_count()))?;
            let engine: BTreeSet<Vec<(ClassLabel, i64)>> = res
                .solutions
                .iter()
                .map(|s| s.chain.pa[&r].eps.iter().map(|(c, v)| (*c, *v)).collect())
                .collect();
            let oracle = oracle_scan(&t, r, res.box_bound, true);
            ensure(engine == oracle, || format!("q={q} r={r}: engine {engine:?} vs oracle {oracle:?}"))?;
            ensure(oracle.iter().all(|v| v.len() == 1 && v[0].1 == 1), || format!("q={q} r={r}: oracle {oracle:?}"))?;
            let plain = help_enumerate_with(&t, r, &HelpOptions::default()).map_err(e)?;
            let plain_oracle = oracle_scan(&t, r, res.box_bound, false);
            ensure(plain.solutions.len() == plain_oracle.len(), || {
                format!("q={q} r={r}: ordinary engine {} vs oracle {}", plain.solutions.len(), plain_oracle.len())
            })?;
            if plain.nontrivial_count() > 0 {
                ordinary_nontrivial.push(format!("q={q} r={r}: {}", plain.nontrivial_count()));
            }
        }
    }
    Ok(format!(
        "exact, box 10; {cases} (q, r) pairs trivial-only with modular constraints and equal to the Galois-trace oracle; ordinary characters alone leave nontrivial: [{}]",
        ordinary_nontrivial.join(", ")
    ))
}

fn c7() -> Result<String, String> {
    let mut checked = 0;
    for q in [4u64, 5, 7, 8, 9, 11, 13] {
        let bf = BruteForceClasses::new(q, BOUND).map_err(e)?;
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for x in bf.elements() {
            let l = bf.label_of(x);
            if seen.insert(l) {
                *counts.entry(bf.element_order(x)).or_default() += 1;
            }
        }
        for r in prime_divisors(group_order(q).unwrap()).into_iter().filter(|&r| r != 2) {
            let want = counts.get(&r).copied().unwrap_or(0);
            let got = count_classes_of_order_r(q, r).map_err(e)?;
            ensure(got == want, || format!("q={q} r={r}: formula {got}, brute force {want}"))?;
            checked += 1;
        }
    }
    Ok(format!("exact; {checked} (q, r) pairs for q <= 13"))
}

fn c8() -> Result<String, String> {
    let bf = BruteForceClasses::new(7, BOUND).map_err(e)?;
    let g = bf.group().clone();
    let mut real = BTreeSet::new();
    let mut nonreal = BTreeSet::new();
    for x in bf.elements() {
        let l = bf.label_of(x);
        if bf.label_of(&g.inv(x)) == l {
            real.insert(l);
        } else {
            nonreal.insert(l);
        }
    }
    let order7: BTreeSet<ClassLabel> = [ClassLabel::C, ClassLabel::D].into();
    ensure(nonreal == order7, || format!("non-real classes {nonreal:?}"))?;
    let t = build_char_table(7).map_err(e)?;
    let structured = t.classes().real_classes();
    ensure(structured == real, || format!("structured real classes {structured:?} vs {real:?}"))?;
    Ok(format!("exact; q=7 non-real: c, d (order 7); real: {} classes", real.len()))
}

fn c9() -> Result<String, String> {
    let mut n_checked = 0;
    for a in 2u64..=5 {
        for n in 1u32..=12 {
            for m in 1u32..=12 {
                let big = BigUint::from(a);
                let d = big.pow(n) - BigUint::one();
                let direct = ((big.pow(m) - BigUint::one()) % d).is_zero();
                ensure(divides_power_minus_one(a, n as u64, m as u64) == direct, || format!("a={a} n={n} m={m}"))?;
                n_checked += 1;
            }
        }
    }
    Ok(format!("exhaustive; {n_checked} triples a <= 5, n, m <= 12"))
}

fn c10() -> Result<String, String> {
    let rep = screen(Candidate::A7, 9).map_err(e)?;
    let ScreenVerdict::Excluded { failures, .. } = &rep.verdict else {
        return Err(format!("A7 at q=9: {:?}", rep.verdict));
    };
    ensure(
        failures.iter().any(|s| s.stage == Stage::CclBound && s.prime == Some(5) && s.witness.contains("1 < 2")),
        || format!("A7 at q=9: no class-count witness at r=5 in {failures:?}"),
    )?;
    ensure(
        matches!("psl2:3,1".parse::<Candidate>(), Err(Error::NotSimple(_))),
        || "PSL(2,3) accepted at intake".into(),
    )?;
    for m in 2..=4u32 {
        for f in 2..=4u32 {
            let r = screen(Candidate::Psl2 { r: 3, m }, 3u64.pow(f)).map_err(e)?;
            ensure(r.is_admissible() == (f % m == 0), || format!("PSL(2,3^{m}) in PSL(2,3^{f}): {:?}", r.verdict))?;
        }
    }
    let s = suzuki_exclusion(3, 3).map_err(e)?;
    ensure(s.verdict == SuzukiVerdict::OrderEqual, || format!("n = p: {s:?}"))?;
    for n in (5..=61).step_by(2) {
        let s = suzuki_exclusion(3, n).map_err(e)?;
        ensure(s.verdict == SuzukiVerdict::Excluded, || format!("n={n}: {s:?}"))?;
    }
    Ok("exact; A7 excluded at q=9 with 1 < 2 at r=5; PSL(2,3^m) admissible in PSL(2,3^f) iff m | f (m, f in 2..4, m = 1 not simple); Sz(2^n), odd 5 <= n <= 61, excluded for p = 3".into())
}

fn c11() -> Result<String, String> {
    let full = FactBase::standard();
    let mut runs = 0;
    for q in [4u64, 7, 8, 9, 11, 16, 25, 27, 32, 49, 64, 81, 125] {
        for c in standard_candidates(q).map_err(e)? {
            let base = screen_with(c, q, &full).map_err(e)?;
            for fact in full.facts() {
                runs += 1;
                match screen_with(c, q, &full.without(fact.id)) {
                    Ok(r) if base.is_excluded() => {
                        ensure(r.is_excluded(), || format!("{c} q={q} without {}: {:?}", fact.id, r.verdict))?
                    }
                    Ok(r) => ensure(r.verdict == base.verdict, || format!("{c} q={q} without {}", fact.id))?,
                    Err(Error::UnknownFact { .. }) => {}
                    Err(err) => return Err(format!("{c} q={q} without {}: {err}", fact.id)),
                }
                if !base.is_admissible() {
                    continue;
                }
                // an admissible verdict must not rest on an unknown stage
                ensure(base.stages.iter().all(|s| s.outcome == Outcome::Pass), || format!("{c} q={q}"))?;
            }
        }
    }
    Ok(format!(
        "universal statements are not desk-checkable; covered by criteria 1-10 plus fact ablation: {runs} screens with one fact removed, none turned Excluded into Admissible"
    ))
}

fn main() -> ExitCode {
    let lines = vec![
        run(1, "character tables, both orthogonality relations", Some(Duration::from_secs(30)), c1),
        run(2, "degrees at q=7, xi(1) and xi(s)", None, c2),
        run(3, "2-subgroup obstructions E8, C4xC2, Q8", Some(Duration::from_secs(5)), c3),
        run(4, "Frobenius-Schur indicator of xi", None, c4),
        run(5, "restriction of xi to D8 (q=7) and V4 (q=9)", None, c5),
        run(6, "HeLP triviality for r != p", Some(Duration::from_secs(120)), c6),
        run(7, "class counts of order r", None, c7),
        run(8, "real classes at q=7", None, c8),
        run(9, "a^n-1 | a^m-1 iff n | m", None, c9),
        run(10, "composition factor screen and Suzuki arithmetic", Some(Duration::from_secs(5)), c10),
        run(11, "fact-ablation monotonicity", None, c11),
    ];
    let mut failed = 0;
    for l in &lines {
        let tag = if l.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {:>2}: {}: {}", l.id, l.title, l.detail);
        if !l.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
