//! Partial augmentations of hypothetical torsion units and the
//! Luthar-Passi (HeLP) enumeration.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd};
use crate::chartab::{build_char_table, CharTable};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::exact::{int, rat, Rational};
use crate::psl2::{ClassLabel, ClassTable};

pub const DEFAULT_BOX: i64 = 10;
pub const DEFAULT_CANDIDATE_CAP: u64 = 10_000_000;

/// Partial augmentations `eps_C(u)` of a unit of order `unit_order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PAVector {
    pub unit_order: u64,
    pub eps: BTreeMap<ClassLabel, i64>,
}

impl PAVector {
    pub fn new(unit_order: u64, eps: impl IntoIterator<Item = (ClassLabel, i64)>) -> PAVector {
        let eps = eps.into_iter().filter(|(_, v)| *v != 0).collect();
        PAVector { unit_order, eps }
    }

    /// The group element class `C` viewed as a unit: `eps = delta_C`.
    pub fn standard(unit_order: u64, class: ClassLabel) -> PAVector {
        PAVector::new(unit_order, [(class, 1)])
    }

    pub fn get(&self, c: ClassLabel) -> i64 {
        self.eps.get(&c).copied().unwrap_or(0)
    }

    /// Checks augmentation 1, vanishing at the identity for `n > 1`, and
    /// support on classes whose order divides `n`.
    pub fn check(&self, classes: &ClassTable) -> Result<()> {
        let total: i64 = self.eps.values().sum();
        if total != 1 {
            return Err(Error::Inconsistent(format!("augmentation {total} != 1")));
        }
        if self.unit_order > 1 && self.get(ClassLabel::One) != 0 {
            return Err(Error::Inconsistent("nonzero coefficient at the identity".into()));
        }
        for (&c, &v) in &self.eps {
            let info = classes
                .get(c)
                .ok_or_else(|| Error::Inconsistent(format!("unknown class {c}")))?;
            if v != 0 && !self.unit_order.is_multiple_of(info.order) {
                return Err(Error::Inconsistent(format!(
                    "support at {c} of order {} for a unit of order {}",
                    info.order, self.unit_order
                )));
            }
        }
        Ok(())
    }

    /// Partial augmentations of `u^k` for `k` coprime to the unit order.
    pub fn power(&self, classes: &ClassTable, k: i64) -> PAVector {
        let mut out: BTreeMap<ClassLabel, i64> = BTreeMap::new();
        for (&c, &v) in &self.eps {
            *out.entry(classes.power_label(c, k)).or_insert(0) += v;
        }
        PAVector::new(self.unit_order, out)
    }

    /// `Some(C)` when this is `delta_C` with `C` of order exactly `unit_order`.
    pub fn standard_class(&self, classes: &ClassTable) -> Option<ClassLabel> {
        let mut nz = self.eps.iter().filter(|(_, v)| **v != 0);
        match (nz.next(), nz.next()) {
            (Some((&c, &1)), None) if classes.get(c).map(|i| i.order) == Some(self.unit_order) => Some(c),
            _ => None,
        }
    }
}

/// `chi(u) = sum_C eps_C(u) chi(C)`.
pub fn extended_value(chi_values: &BTreeMap<ClassLabel, Cyclo>, pa: &PAVector) -> Cyclo {
    pa.eps
        .iter()
        .map(|(c, &v)| {
            chi_values
                .get(c)
                .map(|x| x.scale(&int(v)))
                .unwrap_or_else(Cyclo::zero)
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClVerdict {
    pub pass: bool,
    pub witness: String,
}

/// The order-4 instance of the Cohn-Livingstone congruence: for a unit of
/// order 4, the partial augmentation at every involution class is even.
pub fn cl_divisibility_check(pa: &PAVector, p2: u64, classes: &ClassTable) -> Result<ClVerdict> {
    if p2 != 2 || pa.unit_order != 4 {
        return Err(Error::UnsupportedInstance(format!(
            "congruence only encoded for units of order 4 at the prime 2 (got order {}, prime {p2})",
            pa.unit_order
        )));
    }
    for c in classes.classes().iter().filter(|c| c.order == 2) {
        let v = pa.get(c.label);
        if v.rem_euclid(2) != 0 {
            return Ok(ClVerdict {
                pass: false,
                witness: format!("eps_{}(u) = {v} is odd", c.label),
            });
        }
    }
    let parts: Vec<String> = classes
        .classes()
        .iter()
        .filter(|c| c.order == 2)
        .map(|c| format!("eps_{}(u) = {} = 0 mod 2", c.label, pa.get(c.label)))
        .collect();
    Ok(ClVerdict { pass: true, witness: parts.join(", ") })
}

/// Partial augmentations of every power `u^(n/e)`, `e | n`, `e > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitChain {
    pub n: u64,
    pub pa: BTreeMap<u64, PAVector>,
}

impl UnitChain {
    pub fn new(n: u64, pas: impl IntoIterator<Item = PAVector>) -> UnitChain {
        UnitChain { n, pa: pas.into_iter().map(|p| (p.unit_order, p)).collect() }
    }

    /// Partial augmentations of `u^j` (`j` taken mod `n`).
    pub fn power_pa(&self, classes: &ClassTable, j: i64) -> Result<PAVector> {
        let n = self.n as i64;
        let j = j.rem_euclid(n);
        if j == 0 {
            return Ok(PAVector::standard(1, ClassLabel::One));
        }
        let d = gcd(j as u64, self.n);
        let e = self.n / d;
        let base = self
            .pa
            .get(&e)
            .ok_or_else(|| Error::Inconsistent(format!("chain lacks the order-{e} power")))?;
        Ok(base.power(classes, j / d as i64))
    }

    /// Rationally conjugate to a group element: every power is `delta_C` at
    /// the expected power of a single class of order `n`.
    pub fn is_trivial(&self, classes: &ClassTable) -> bool {
        let Some(top) = self.pa.get(&self.n).and_then(|p| p.standard_class(classes)) else {
            return false;
        };
        self.pa.iter().all(|(&e, p)| {
            let expect = classes.power_label(top, (self.n / e) as i64);
            p.standard_class(classes) == Some(expect)
        })
    }
}

/// `mu_l = (1/n) sum_j chi(u^j) zeta_n^(-jl)`.
pub fn lp_multiplicity(
    chain: &UnitChain,
    chi_values: &BTreeMap<ClassLabel, Cyclo>,
    l: i64,
    classes: &ClassTable,
) -> Result<Rational> {
    let n = chain.n;
    let mut sum = Cyclo::zero();
    for j in 0..n as i64 {
        let v = extended_value(chi_values, &chain.power_pa(classes, j)?);
        sum = &sum + &(&v * &Cyclo::root_of_unity(n, -j * l));
    }
    sum.scale(&rat(1, n as i64)).expect_rational()
}

/// `mu` tables at one level: constraint label to `[mu_0, ..., mu_{e-1}]`.
pub type MuTable = BTreeMap<String, Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleChain {
    pub chain: UnitChain,
    pub trivial: bool,
    /// Multiplicity tables keyed by the order of the power.
    pub mu: BTreeMap<u64, MuTable>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HelpResult {
    pub q: u64,
    pub n: u64,
    pub box_bound: i64,
    /// Whether p-modular constraints were used (only for `p` not dividing `n`).
    pub modular: bool,
    pub candidates_examined: u64,
    pub solutions: Vec<AdmissibleChain>,
}

impl HelpResult {
    pub fn only_trivial(&self) -> bool {
        self.solutions.iter().all(|s| s.trivial)
    }

    pub fn nontrivial_count(&self) -> usize {
        self.solutions.iter().filter(|s| !s.trivial).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HelpOptions {
    pub box_bound: i64,
    pub cap: u64,
    /// Add the defining-characteristic Brauer characters when `p` does not
    /// divide the unit order.
    pub modular: bool,
}

impl Default for HelpOptions {
    fn default() -> HelpOptions {
        HelpOptions { box_bound: DEFAULT_BOX, cap: DEFAULT_CANDIDATE_CAP, modular: false }
    }
}

/// A class function whose eigenvalue multiplicities at a unit must be
/// nonnegative integers.
#[derive(Clone, Debug)]
pub struct ConstraintChar {
    pub label: String,
    pub degree: u64,
    pub values: BTreeMap<ClassLabel, Cyclo>,
}

/// The ordinary irreducible characters.
pub fn ordinary_constraints(table: &CharTable) -> Vec<ConstraintChar> {
    table
        .rows()
        .iter()
        .map(|r| ConstraintChar {
            label: r.label.to_string(),
            degree: r.degree,
            values: table.value_map(r.label).expect("row present"),
        })
        .collect()
}

/// Brauer characters of the tensor products of Frobenius twists of the
/// even symmetric powers `Sym^(2k)`, `2k < p`, of the natural module, on the
/// p-regular classes. An element with eigenvalues `lambda^(+-1)` contributes
/// `sum_{|t| <= k} lambda^(2t)` per factor.
pub fn brauer_constraints(table: &CharTable) -> Vec<ConstraintChar> {
    let classes = table.classes();
    let g = classes.group();
    let (p, f, q) = (g.p(), g.field().f(), table.q());
    let kmax = (p - 1) / 2;
    let mut tuples: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..f {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..=kmax).map(move |k| {
                    let mut v = t.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    let factor = |n: u64, e: u64, ks: &[u64]| -> Cyclo {
        let mut acc = Cyclo::one();
        let mut frob = 1u64;
        for &k in ks {
            let s: Cyclo = (-(k as i64)..=k as i64)
                .map(|t| Cyclo::root_of_unity(n, t * (e * frob % n) as i64))
                .sum();
            acc = &acc * &s;
            frob = frob * p % n;
        }
        acc.minimal()
    };
    tuples
        .into_iter()
        .filter(|ks| ks.iter().any(|&k| k > 0))
        .map(|ks| {
            let degree: u64 = ks.iter().map(|k| 2 * k + 1).product();
            let values = classes
                .labels()
                .into_iter()
                .filter_map(|c| {
                    let v = match c {
                        ClassLabel::One => Cyclo::from_int(degree as i64),
                        ClassLabel::A(l) => factor((q - 1) / 2, l, &ks),
                        ClassLabel::B(m) => factor(q.div_ceil(2), m, &ks),
                        ClassLabel::C | ClassLabel::D => return None,
                    };
                    Some((c, v))
                })
                .collect();
            let label = format!(
                "sym[{}]",
                ks.iter().map(|k| (2 * k).to_string()).collect::<Vec<_>>().join(",")
            );
            ConstraintChar { label, degree, values }
        })
        .collect()
}

/// All chains with entries in `[-box, box]` satisfying the augmentation,
/// support, order-4 Cohn-Livingstone and Luthar-Passi constraints for the
/// ordinary characters.
pub fn help_enumerate(q: u64, n: u64, box_bound: i64) -> Result<HelpResult> {
    let opts = HelpOptions { box_bound, ..HelpOptions::default() };
    help_enumerate_with(&build_char_table(q)?, n, &opts)
}

pub fn help_enumerate_with(table: &CharTable, n: u64, opts: &HelpOptions) -> Result<HelpResult> {
    if n < 2 {
        return Err(Error::PreconditionFailed("unit order must be at least 2".into()));
    }
    let classes = table.classes();
    let modular = opts.modular && !n.is_multiple_of(classes.group().p());
    let mut chars = ordinary_constraints(table);
    if modular {
        chars.extend(brauer_constraints(table));
    }
    let values: Vec<BTreeMap<ClassLabel, Cyclo>> = chars.iter().map(|c| c.values.clone()).collect();
    let levels: Vec<Level> = divisors(n)
        .into_iter()
        .filter(|&e| e > 1)
        .map(|e| build_level(table, &values, e))
        .collect();
    let mut state = Search {
        table,
        chars: &values,
        levels: &levels,
        box_bound: opts.box_bound,
        cap: opts.cap,
        examined: 0,
        assigned: Vec::new(),
        solutions: Vec::new(),
    };
    state.descend()?;
    let mut solutions = Vec::new();
    for pas in state.solutions {
        let chain = UnitChain::new(n, pas);
        let mut mu = BTreeMap::new();
        for e in chain.pa.keys().copied().collect::<Vec<_>>() {
            let sub = sub_chain(&chain, e);
            let mut tab = MuTable::new();
            for ch in &chars {
                let mus = (0..e as i64)
                    .map(|l| {
                        let m = lp_multiplicity(&sub, &ch.values, l, classes)?;
                        m.to_integer().to_i64().filter(|_| m.is_integer()).ok_or_else(|| {
                            Error::Inconsistent(format!("mu not integral for {}", ch.label))
                        })
                    })
                    .collect::<Result<Vec<i64>>>()?;
                if mus.iter().any(|&m| m < 0) {
                    return Err(Error::Inconsistent("negative mu in an accepted chain".into()));
                }
                tab.insert(ch.label.clone(), mus);
            }
            mu.insert(e, tab);
        }
        let trivial = chain.is_trivial(classes);
        solutions.push(AdmissibleChain { chain, trivial, mu });
    }
    Ok(HelpResult {
        q: table.q(),
        n,
        box_bound: opts.box_bound,
        modular,
        candidates_examined: state.examined,
        solutions,
    })
}

/// The chain of `u^(n/e)`, of order `e`.
fn sub_chain(chain: &UnitChain, e: u64) -> UnitChain {
    UnitChain::new(
        e,
        chain.pa.iter().filter(|(&d, _)| e.is_multiple_of(d)).map(|(_, p)| p.clone()),
    )
}

/// Affine data for one level `e`: `mu = base + sum_C x_C * coef_C` per
/// (character, l) row.
struct Level {
    e: u64,
    vars: Vec<ClassLabel>,
    coef: Vec<Vec<Rational>>,
    cl_vars: Vec<usize>,
}

fn build_level(table: &CharTable, chars: &[BTreeMap<ClassLabel, Cyclo>], e: u64) -> Level {
    let classes = table.classes();
    let vars: Vec<ClassLabel> = classes
        .classes()
        .iter()
        .filter(|c| c.order > 1 && e.is_multiple_of(c.order))
        .map(|c| c.label)
        .collect();
    let cl_vars = if e == 4 {
        vars.iter()
            .enumerate()
            .filter(|(_, c)| classes.get(**c).map(|i| i.order) == Some(2))
            .map(|(i, _)| i)
            .collect()
    } else {
        Vec::new()
    };
    // contribution of x_C from the powers u^j with j coprime to e
    let mut coef = Vec::new();
    for vals in chars {
        for l in 0..e as i64 {
            let row = vars
                .iter()
                .map(|&c| {
                    let s: Cyclo = (1..e as i64)
                        .filter(|&j| gcd(j as u64, e) == 1)
                        .map(|j| &vals[&classes.power_label(c, j)] * &Cyclo::root_of_unity(e, -j * l))
                        .sum();
                    s.scale(&rat(1, e as i64))
                        .expect_rational()
                        .expect("Galois orbit sums are rational")
                })
                .collect();
            coef.push(row);
        }
    }
    Level { e, vars, coef, cl_vars }
}

struct Search<'a> {
    table: &'a CharTable,
    chars: &'a [BTreeMap<ClassLabel, Cyclo>],
    levels: &'a [Level],
    box_bound: i64,
    cap: u64,
    examined: u64,
    assigned: Vec<PAVector>,
    solutions: Vec<Vec<PAVector>>,
}

impl Search<'_> {
    fn descend(&mut self) -> Result<()> {
        let depth = self.assigned.len();
        if depth == self.levels.len() {
            self.solutions.push(self.assigned.clone());
            return Ok(());
        }
        let level = &self.levels[depth];
        let base = self.constant_part(level)?;
        // common denominator for integer evaluation
        let mut den = BigInt::one();
        for r in base.iter().chain(level.coef.iter().flatten()) {
            den = den.lcm(r.denom());
        }
        let to_int = |r: &Rational| -> Result<i64> {
            (r * Rational::from_integer(den.clone()))
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Inconsistent("coefficient overflow".into()))
        };
        let den_i = den.to_i64().ok_or_else(|| Error::Inconsistent("denominator overflow".into()))?;
        let base_i: Vec<i64> = base.iter().map(to_int).collect::<Result<_>>()?;
        let coef_i: Vec<Vec<i64>> = level
            .coef
            .iter()
            .map(|row| row.iter().map(to_int).collect::<Result<_>>())
            .collect::<Result<_>>()?;

        let k = level.vars.len();
        if k == 0 {
            return Ok(());
        }
        let b = self.box_bound;
        let mut x = vec![-b; k - 1];
        let mut accepted = Vec::new();
        loop {
            self.examined += 1;
            if self.examined > self.cap {
                return Err(Error::CandidateCapExceeded { cap: self.cap });
            }
            let last = 1 - x.iter().sum::<i64>();
            if (-b..=b).contains(&last) {
                let mut full = x.clone();
                full.push(last);
                let cl_ok = level.cl_vars.iter().all(|&i| full[i].rem_euclid(2) == 0);
                if cl_ok
                    && base_i.iter().zip(&coef_i).all(|(c0, row)| {
                        let v: i64 = c0 + row.iter().zip(&full).map(|(a, b)| a * b).sum::<i64>();
                        v >= 0 && v % den_i == 0
                    })
                {
                    accepted.push(full);
                }
            }
            // odometer over the free coordinates
            let mut i = 0;
            loop {
                if i == x.len() {
                    break;
                }
                if x[i] < b {
                    x[i] += 1;
                    break;
                }
                x[i] = -b;
                i += 1;
            }
            if i == x.len() {
                break;
            }
        }
        for full in accepted {
            let pa = PAVector::new(level.e, level.vars.iter().copied().zip(full));
            self.assigned.push(pa);
            self.descend()?;
            self.assigned.pop();
        }
        Ok(())
    }

    /// Rows of `mu` contributed by `chi(1)` and the powers of lower order.
    fn constant_part(&self, level: &Level) -> Result<Vec<Rational>> {
        let e = level.e;
        let classes = self.table.classes();
        let lower = UnitChain::new(e, self.assigned.iter().filter(|p| e.is_multiple_of(p.unit_order)).cloned());
        let mut out = Vec::new();
        for vals in self.chars {
            let degree = &vals[&ClassLabel::One];
            let mut by_j = Vec::with_capacity(e as usize);
            by_j.push(degree.clone());
            for j in 1..e as i64 {
                if gcd(j as u64, e) == 1 {
                    by_j.push(Cyclo::zero());
                } else {
                    by_j.push(extended_value(vals, &lower.power_pa(classes, j)?));
                }
            }
            for l in 0..e as i64 {
                let s: Cyclo = by_j
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * &Cyclo::root_of_unity(e, -(j as i64) * l))
                    .sum();
                out.push(s.scale(&rat(1, e as i64)).expect_rational()?);
            }
        }
        Ok(out)
    }
}
