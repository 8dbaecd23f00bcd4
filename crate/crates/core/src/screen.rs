//! Screening of simple groups as possible composition factors of finite
//! subgroups of `V(Z[PSL(2,q)])`.
//!
//! Every structural input about a candidate comes from a [`FactBase`], so the
//! screen can be rerun with facts removed. A missing fact is never guessed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, prime_divisors};
use crate::error::{Error, Result};
use crate::psl2::{check_q, count_classes_of_order_r, group_order};

/// `a^n - 1` divides `a^m - 1` exactly when `n` divides `m`.
pub fn divides_power_minus_one(a: u64, n: u64, m: u64) -> bool {
    debug_assert!(a >= 2 && n >= 1 && m >= 1);
    m.is_multiple_of(n)
}

/// Number of classes of elements of prime order `r` in `PSL(2,q)`.
pub fn ccl_count_g(q: u64, r: u64) -> Result<u64> {
    count_classes_of_order_r(q, r)
}

/// A simple group offered to the screen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Candidate {
    /// `PSL(2, r^m)`.
    Psl2 { r: u64, m: u32 },
    A5,
    A7,
    J1,
    /// `Ree(3^n)`, `n` odd, `n >= 3`.
    Ree { n: u32 },
    /// `Sz(2^n)`, `n` odd, `n >= 3`.
    Sz { n: u32 },
    Psl33,
}

impl Candidate {
    /// Checks the intake rules: known family, valid parameters, simple group.
    pub fn validate(self) -> Result<Candidate> {
        match self {
            Candidate::Psl2 { r, m } => {
                if !is_prime(r) || m == 0 {
                    return Err(Error::UnknownCandidate(self.to_string()));
                }
                let q = r.checked_pow(m).ok_or_else(|| Error::UnsupportedTag(self.to_string()))?;
                if q < 4 {
                    return Err(Error::NotSimple(format!("PSL(2,{q})")));
                }
            }
            Candidate::Ree { n } | Candidate::Sz { n } if n < 3 || n % 2 == 0 => {
                return Err(Error::UnknownCandidate(self.to_string()));
            }
            _ => {}
        }
        Ok(self)
    }

    /// `(r, m)` when the candidate is a two-dimensional projective special
    /// linear group, including `A5 = PSL(2,5)`.
    pub fn as_psl2(self) -> Option<(u64, u32)> {
        match self {
            Candidate::Psl2 { r, m } => Some((r, m)),
            Candidate::A5 => Some((5, 1)),
            _ => None,
        }
    }

    /// `PSL(2,4)` and `PSL(2,5)` are both `A5`.
    pub fn is_a5(self) -> bool {
        matches!(self.as_psl2(), Some((5, 1)) | Some((2, 2)))
    }

    fn subject(self) -> Subject {
        match self {
            Candidate::Psl2 { .. } | Candidate::A5 => Subject::Psl2,
            Candidate::A7 => Subject::A7,
            Candidate::J1 => Subject::J1,
            Candidate::Ree { .. } => Subject::Ree,
            Candidate::Sz { .. } => Subject::Sz,
            Candidate::Psl33 => Subject::Psl33,
        }
    }

    /// Group order, from the order formula or (for `J1`) the fact base.
    pub fn order(self, facts: &FactBase) -> Result<u128> {
        let overflow = || Error::UnsupportedTag(format!("order of {self} exceeds 128 bits"));
        let pw = |b: u128, e: u32| b.checked_pow(e).ok_or_else(overflow);
        match self {
            Candidate::A5 => Ok(60),
            Candidate::A7 => Ok(2520),
            Candidate::Psl33 => Ok(5616),
            Candidate::J1 => facts
                .lookup(Subject::J1, |c| match c {
                    Claim::Order { order } => Some(*order as u128),
                    _ => None,
                })
                .map(|(o, _)| o)
                .ok_or_else(|| unknown(self, "order")),
            Candidate::Psl2 { r, m } => {
                let q = pw(r as u128, m)?;
                let full = q.checked_mul(q * q - 1).ok_or_else(overflow)?;
                Ok(if r == 2 { full } else { full / 2 })
            }
            Candidate::Ree { n } => {
                let q = pw(3, n)?;
                let q3 = pw(q, 3)?;
                q3.checked_mul(q3 + 1)
                    .and_then(|x| x.checked_mul(q - 1))
                    .ok_or_else(overflow)
            }
            Candidate::Sz { n } => suzuki_order(n).ok_or_else(overflow),
        }
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Candidate::Psl2 { r, m } => write!(f, "psl2:{r},{m}"),
            Candidate::A5 => f.write_str("a5"),
            Candidate::A7 => f.write_str("a7"),
            Candidate::J1 => f.write_str("j1"),
            Candidate::Ree { n } => write!(f, "ree:{n}"),
            Candidate::Sz { n } => write!(f, "sz:{n}"),
            Candidate::Psl33 => f.write_str("psl33"),
        }
    }
}

impl FromStr for Candidate {
    type Err = Error;

    /// Tag grammar `psl2:r,m | a5 | a7 | j1 | ree:n | sz:n | psl33`.
    fn from_str(s: &str) -> Result<Candidate> {
        let bad = || Error::UnknownCandidate(s.to_string());
        let t = s.trim().to_ascii_lowercase();
        let cand = match t.split_once(':') {
            None => match t.as_str() {
                "a5" => Candidate::A5,
                "a7" => Candidate::A7,
                "j1" => Candidate::J1,
                "psl33" => Candidate::Psl33,
                _ => return Err(bad()),
            },
            Some(("psl2", args)) => {
                let (r, m) = args.split_once(',').ok_or_else(bad)?;
                Candidate::Psl2 {
                    r: r.trim().parse().map_err(|_| bad())?,
                    m: m.trim().parse().map_err(|_| bad())?,
                }
            }
            Some(("ree", n)) => Candidate::Ree { n: n.trim().parse().map_err(|_| bad())? },
            Some(("sz", n)) => Candidate::Sz { n: n.trim().parse().map_err(|_| bad())? },
            _ => return Err(bad()),
        };
        cand.validate()
    }
}

impl Serialize for Candidate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Candidate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn unknown(c: Candidate, key: &str) -> Error {
    Error::UnknownFact { candidate: c.to_string(), key: key.to_string() }
}

fn suzuki_order(n: u32) -> Option<u128> {
    let q = 2u128.checked_pow(n)?;
    let q2 = q.checked_mul(q)?;
    q2.checked_mul(q2 + 1)?.checked_mul(q - 1)
}

/// Isomorphism type of a Sylow 2-subgroup, as far as the screen needs it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum Sylow2Shape {
    /// Dihedral of the given order; order 4 is the four-group.
    Dihedral(u64),
    ElementaryAbelian(u64),
    Semidihedral(u64),
    /// Nonabelian of exponent 4 with elementary abelian center.
    Suzuki(u64),
}

impl Sylow2Shape {
    pub fn is_dihedral(self) -> bool {
        matches!(self, Sylow2Shape::Dihedral(_) | Sylow2Shape::ElementaryAbelian(4))
    }

    pub fn is_elementary_abelian(self) -> bool {
        matches!(self, Sylow2Shape::ElementaryAbelian(_) | Sylow2Shape::Dihedral(4))
    }
}

impl fmt::Display for Sylow2Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sylow2Shape::Dihedral(4) => f.write_str("four-group"),
            Sylow2Shape::Dihedral(n) => write!(f, "dihedral of order {n}"),
            Sylow2Shape::ElementaryAbelian(n) => write!(f, "elementary abelian of order {n}"),
            Sylow2Shape::Semidihedral(n) => write!(f, "semidihedral of order {n}"),
            Sylow2Shape::Suzuki(n) => write!(f, "Suzuki 2-group of order {n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    Psl2,
    A7,
    J1,
    Ree,
    Sz,
    Psl33,
}

/// Where a fact comes from: used in the published argument being replayed,
/// or a standard datum from the literature that the argument does not state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Cited,
    External,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Order { order: u64 },
    /// Exactly `count` classes of elements of order `r`.
    Ccl { r: u64, count: u64 },
    NoncyclicSylow { r: u64 },
    /// All Sylow `s`-subgroups for odd `s != except` are cyclic.
    OddSylowCyclic { except: Option<u64> },
    Sylow2(Sylow2Shape),
    /// `PSL(2,r^m)` has 2 classes of order `r` (odd `r`) and `(s-1)/2`
    /// classes of order `s` for other odd `s`.
    Psl2CclFormula,
    /// `PSL(2,r^m)`: Sylow `r` elementary abelian of order `r^m`, other odd
    /// Sylow subgroups cyclic.
    Psl2OddSylow,
    /// `PSL(2,r^m)`: Sylow 2 dihedral for odd `r`, elementary abelian for `r = 2`.
    Psl2Sylow2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub id: &'static str,
    pub subject: Subject,
    pub claim: Claim,
    pub provenance: Provenance,
    pub statement: &'static str,
}

#[derive(Clone, Debug)]
pub struct FactBase {
    facts: Vec<Fact>,
}

impl FactBase {
    pub fn standard() -> FactBase {
        use Claim::*;
        use Provenance::*;
        use Subject::*;
        let f = |id, subject, claim, provenance, statement| Fact { id, subject, claim, provenance, statement };
        FactBase {
            facts: vec![
                f("psl2.ccl", Psl2, Psl2CclFormula, Cited, "PSL(2,r^m), r odd, has exactly two classes of elements of order r; for odd s != r there are (s-1)/2"),
                f("psl2.odd-sylow", Psl2, Psl2OddSylow, External, "PSL(2,r^m) has elementary abelian Sylow r-subgroups of order r^m and cyclic Sylow s-subgroups for odd s != r"),
                f("psl2.sylow2", Psl2, Psl2Sylow2, External, "PSL(2,r^m) has dihedral Sylow 2-subgroups for odd r and elementary abelian ones for r = 2"),
                f("a7.ccl5", A7, Ccl { r: 5, count: 1 }, Cited, "A7 has one class of elements of order 5"),
                f("a7.sylow3", A7, NoncyclicSylow { r: 3 }, Cited, "A7 has noncyclic Sylow 3-subgroups"),
                f("a7.sylow2", A7, Sylow2(Sylow2Shape::Dihedral(8)), External, "A7 has dihedral Sylow 2-subgroups of order 8"),
                f("a7.ccl3", A7, Ccl { r: 3, count: 2 }, External, "A7 has two classes of elements of order 3"),
                f("a7.ccl7", A7, Ccl { r: 7, count: 2 }, External, "A7 has two classes of elements of order 7"),
                f("j1.order", J1, Order { order: 175_560 }, External, "|J1| = 175560 = 2^3.3.5.7.11.19"),
                f("j1.ccl7", J1, Ccl { r: 7, count: 1 }, Cited, "all elements of order 7 in J1 are conjugate"),
                f("j1.sylow2", J1, Sylow2(Sylow2Shape::ElementaryAbelian(8)), External, "J1 has elementary abelian Sylow 2-subgroups of order 8"),
                f("j1.ccl3", J1, Ccl { r: 3, count: 1 }, External, "J1 has one class of elements of order 3"),
                f("j1.ccl5", J1, Ccl { r: 5, count: 2 }, External, "J1 has two classes of elements of order 5"),
                f("j1.ccl11", J1, Ccl { r: 11, count: 1 }, External, "J1 has one class of elements of order 11"),
                f("j1.ccl19", J1, Ccl { r: 19, count: 3 }, External, "J1 has three classes of elements of order 19"),
                f("ree.sylow3", Ree, NoncyclicSylow { r: 3 }, Cited, "Ree groups contain a noncyclic subgroup of order 9"),
                f("ree.sylow2", Ree, Sylow2(Sylow2Shape::ElementaryAbelian(8)), External, "Ree groups have elementary abelian Sylow 2-subgroups of order 8"),
                f("ree.odd-sylow", Ree, OddSylowCyclic { except: Some(3) }, External, "Ree groups have cyclic Sylow s-subgroups for odd s != 3"),
                f("sz.sylow2", Sz, Sylow2(Sylow2Shape::Suzuki(0)), External, "Sz(2^n) has a nonabelian Sylow 2-subgroup of order 2^(2n) and exponent 4"),
                f("sz.odd-sylow", Sz, OddSylowCyclic { except: None }, External, "Suzuki groups have cyclic Sylow s-subgroups for odd s"),
                f("psl33.sylow2", Psl33, Sylow2(Sylow2Shape::Semidihedral(16)), External, "PSL(3,3) has semidihedral Sylow 2-subgroups of order 16"),
                f("psl33.sylow3", Psl33, NoncyclicSylow { r: 3 }, External, "PSL(3,3) has a Sylow 3-subgroup of order 27, not cyclic"),
                f("psl33.ccl3", Psl33, Ccl { r: 3, count: 2 }, External, "PSL(3,3) has two classes of elements of order 3"),
                f("psl33.ccl13", Psl33, Ccl { r: 13, count: 4 }, External, "PSL(3,3) has four classes of elements of order 13"),
            ],
        }
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    /// The same base with one fact removed.
    pub fn without(&self, id: &str) -> FactBase {
        FactBase { facts: self.facts.iter().filter(|f| f.id != id).cloned().collect() }
    }

    fn lookup<T>(&self, subject: Subject, pick: impl Fn(&Claim) -> Option<T>) -> Option<(T, &'static str)> {
        self.facts
            .iter()
            .filter(|f| f.subject == subject)
            .find_map(|f| pick(&f.claim).map(|v| (v, f.id)))
    }

    fn has(&self, subject: Subject, claim: Claim) -> Option<&'static str> {
        self.lookup(subject, |c| (*c == claim).then_some(()))
            .map(|(_, id)| id)
    }

    /// `|ccl_r(X)|` and the fact that supplied it.
    pub fn ccl(&self, c: Candidate, r: u64) -> Result<(u64, &'static str)> {
        if let Some((cr, _)) = c.as_psl2() {
            let id = self.has(Subject::Psl2, Claim::Psl2CclFormula).ok_or_else(|| unknown(c, &format!("ccl_{r}")))?;
            return Ok((if r == cr { 2 } else { (r - 1) / 2 }, id));
        }
        self.lookup(c.subject(), |cl| match cl {
            Claim::Ccl { r: s, count } if *s == r => Some(*count),
            _ => None,
        })
        .ok_or_else(|| unknown(c, &format!("ccl_{r}")))
    }

    /// Whether Sylow `r`-subgroups of the candidate are cyclic (`r` odd).
    /// The second component names the fact used; `None` means plain
    /// arithmetic (`r^2` does not divide the order).
    pub fn sylow_cyclic(&self, c: Candidate, r: u64) -> Result<(bool, Option<&'static str>)> {
        let order = c.order(self)?;
        if order % (r as u128 * r as u128) != 0 {
            return Ok((true, None));
        }
        let key = || unknown(c, &format!("sylow_{r}"));
        if let Some((cr, m)) = c.as_psl2() {
            let id = self.has(Subject::Psl2, Claim::Psl2OddSylow).ok_or_else(key)?;
            return Ok((r != cr || m == 1, Some(id)));
        }
        if let Some(id) = self.has(c.subject(), Claim::NoncyclicSylow { r }) {
            return Ok((false, Some(id)));
        }
        self.lookup(c.subject(), |cl| match cl {
            Claim::OddSylowCyclic { except } if *except != Some(r) => Some(()),
            _ => None,
        })
        .map(|(_, id)| (true, Some(id)))
        .ok_or_else(key)
    }

    pub fn sylow2(&self, c: Candidate) -> Result<(Sylow2Shape, &'static str)> {
        let key = || unknown(c, "sylow_2");
        if let Some((r, m)) = c.as_psl2() {
            let id = self.has(Subject::Psl2, Claim::Psl2Sylow2).ok_or_else(key)?;
            let shape = if r == 2 {
                Sylow2Shape::ElementaryAbelian(1 << m)
            } else {
                let order = c.order(self)?;
                Sylow2Shape::Dihedral(1 << order.trailing_zeros())
            };
            return Ok((shape, id));
        }
        let (shape, id) = self
            .lookup(c.subject(), |cl| match cl {
                Claim::Sylow2(s) => Some(*s),
                _ => None,
            })
            .ok_or_else(key)?;
        let shape = match (shape, c) {
            (Sylow2Shape::Suzuki(_), Candidate::Sz { n }) => Sylow2Shape::Suzuki(1 << (2 * n)),
            (s, _) => s,
        };
        Ok((shape, id))
    }
}

impl Default for FactBase {
    fn default() -> Self {
        FactBase::standard()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    OrderDivisibility,
    Sylow2Shape,
    SylowCyclic,
    CclBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageResult {
    pub stage: Stage,
    pub prime: Option<u64>,
    pub outcome: Outcome,
    pub witness: String,
    /// Ids of the facts the outcome rests on.
    pub facts: Vec<String>,
}

impl StageResult {
    fn new(stage: Stage, prime: Option<u64>, pass: bool, witness: String, facts: &[Option<&str>]) -> Self {
        StageResult {
            stage,
            prime,
            outcome: if pass { Outcome::Pass } else { Outcome::Fail },
            witness,
            facts: facts.iter().flatten().map(|s| s.to_string()).collect(),
        }
    }
}

fn order_of_g(q: u64) -> Result<(u64, u32, u64)> {
    let (p, f) = check_q(q)?;
    Ok((p, f, group_order(q)?))
}

/// `|ccl_r(X)| >= |ccl_r(G)|` for a prime `r` dividing both orders.
pub fn ccl_bound_check(c: Candidate, q: u64, r: u64, facts: &FactBase) -> Result<StageResult> {
    let (_, _, g) = order_of_g(q)?;
    let x = c.order(facts)?;
    if !is_prime(r) || g % r != 0 || x % r as u128 != 0 {
        return Err(Error::NotADivisor { r, order: g });
    }
    let (cx, id) = facts.ccl(c, r)?;
    let cg = ccl_count_g(q, r)?;
    let pass = cx >= cg;
    let rel = if pass { ">=" } else { "<" };
    Ok(StageResult::new(
        Stage::CclBound,
        Some(r),
        pass,
        format!("|ccl_{r}({c})| = {cx} {rel} {cg} = |ccl_{r}(PSL(2,{q}))|; {cx} {rel} {cg}"),
        &[Some(id)],
    ))
}

/// Sylow `r`-subgroups of `PSL(2,q)` are cyclic for odd `r != p`, so a
/// candidate with noncyclic Sylow `r`-subgroups fails.
pub fn sylow_cyclic_filter(c: Candidate, q: u64, r: u64, facts: &FactBase) -> Result<StageResult> {
    let (p, _, _) = order_of_g(q)?;
    if r == 2 || r == p || !is_prime(r) {
        return Err(Error::PreconditionFailed(format!(
            "Sylow {r}-subgroups of PSL(2,{q}) need not be cyclic"
        )));
    }
    let (cyclic, id) = facts.sylow_cyclic(c, r)?;
    let witness = if cyclic {
        format!("Sylow {r}-subgroups of {c} are cyclic")
    } else {
        format!("{c} has noncyclic Sylow {r}-subgroups; those of PSL(2,{q}) are cyclic")
    };
    Ok(StageResult::new(Stage::SylowCyclic, Some(r), cyclic, witness, &[id]))
}

/// Subgroups of `PSL(2,p^f)` isomorphic to the candidate `PSL(2,r^m)`:
/// subfield groups, plus `A5` when 5 divides the order.
pub fn dickson_subgroup_check(r: u64, m: u32, p: u64, f: u32, order_of_g: u64) -> bool {
    let a5 = matches!((r, m), (5, 1) | (2, 2));
    (r == p && f.is_multiple_of(m)) || (a5 && order_of_g.is_multiple_of(5))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScreenVerdict {
    Admissible { embeds_as: String },
    /// `first` is the earliest failing stage in pipeline order.
    Excluded { first: StageResult, failures: Vec<StageResult> },
    /// Every test passed, yet no known embedding into `PSL(2,q)` exists.
    Unresolved { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenReport {
    pub candidate: Candidate,
    #[serde(with = "dec")]
    pub candidate_order: u128,
    pub q: u64,
    pub group_order: u64,
    pub stages: Vec<StageResult>,
    pub verdict: ScreenVerdict,
}

impl ScreenReport {
    pub fn is_admissible(&self) -> bool {
        matches!(self.verdict, ScreenVerdict::Admissible { .. })
    }

    pub fn is_excluded(&self) -> bool {
        matches!(self.verdict, ScreenVerdict::Excluded { .. })
    }

    pub fn failures(&self) -> impl Iterator<Item = &StageResult> {
        self.stages.iter().filter(|s| s.outcome == Outcome::Fail)
    }
}

/// Runs every stage, then decides. Failures win over missing facts; a
/// missing fact with no failure is reported as `UnknownFact`.
pub fn screen(c: Candidate, q: u64) -> Result<ScreenReport> {
    screen_with(c, q, &FactBase::standard())
}

pub fn screen_with(c: Candidate, q: u64, facts: &FactBase) -> Result<ScreenReport> {
    let c = c.validate()?;
    let (p, f, g) = order_of_g(q)?;
    let mut stages = Vec::new();
    let mut missing: Option<Error> = None;
    let mut record = |res: Result<StageResult>, stage: Stage, prime: Option<u64>, stages: &mut Vec<StageResult>| {
        match res {
            Ok(s) => stages.push(s),
            Err(e @ Error::UnknownFact { .. }) => {
                stages.push(StageResult {
                    stage,
                    prime,
                    outcome: Outcome::Unknown,
                    witness: e.to_string(),
                    facts: vec![],
                });
                missing.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
        Ok(())
    };

    let x = c.order(facts);
    record(order_stage(c, x.clone(), q, p, f, g), Stage::OrderDivisibility, None, &mut stages)?;

    let shape = facts.sylow2(c).map(|(shape, id)| {
        let (pass, want) = if p == 2 {
            (shape.is_elementary_abelian(), "elementary abelian")
        } else {
            (shape.is_dihedral(), "cyclic or dihedral")
        };
        let rel = if pass { "is" } else { "is not" };
        StageResult::new(
            Stage::Sylow2Shape,
            Some(2),
            pass,
            format!("Sylow 2-subgroup of {c} is {shape}, which {rel} {want}"),
            &[Some(id)],
        )
    });
    record(shape, Stage::Sylow2Shape, Some(2), &mut stages)?;

    let common: Vec<u64> = match &x {
        Ok(x) => prime_divisors(g).into_iter().filter(|&r| r % 2 == 1 && x % r as u128 == 0).collect(),
        Err(_) => vec![],
    };
    for &r in common.iter().filter(|&&r| r != p) {
        record(sylow_cyclic_filter(c, q, r, facts), Stage::SylowCyclic, Some(r), &mut stages)?;
    }
    for &r in common.iter().filter(|&&r| r != p) {
        record(ccl_bound_check(c, q, r, facts), Stage::CclBound, Some(r), &mut stages)?;
    }

    let failures: Vec<StageResult> = stages.iter().filter(|s| s.outcome == Outcome::Fail).cloned().collect();
    let verdict = if let Some(first) = failures.first().cloned() {
        ScreenVerdict::Excluded { first, failures }
    } else if let Some(e) = missing {
        return Err(e);
    } else {
        match c.as_psl2() {
            Some((r, m)) if dickson_subgroup_check(r, m, p, f, g) => ScreenVerdict::Admissible {
                embeds_as: if r == p && f % m == 0 {
                    format!("subfield subgroup PSL(2,{}) of PSL(2,{q})", p.pow(m))
                } else {
                    format!("A5 inside PSL(2,{q}), since 5 divides {g}")
                },
            },
            _ => ScreenVerdict::Unresolved {
                reason: format!("{c} passes every test but is not a subgroup of PSL(2,{q})"),
            },
        }
    };
    Ok(ScreenReport {
        candidate: c,
        candidate_order: x?,
        q,
        group_order: g,
        stages,
        verdict,
    })
}

fn order_stage(c: Candidate, x: Result<u128>, q: u64, p: u64, f: u32, g: u64) -> Result<StageResult> {
    let x = x?;
    let divides = (g as u128).is_multiple_of(x);
    let mut witness = if divides {
        format!("|{c}| = {x} divides |PSL(2,{q})| = {g}")
    } else {
        format!("|{c}| = {x} does not divide |PSL(2,{q})| = {g}")
    };
    if let Some((r, m)) = c.as_psl2().filter(|&(r, _)| r == p) {
        // p^m | p^f and p^(2m)-1 | p^(2f)-1, i.e. m <= f and 2m | 2f
        let via = m <= f && divides_power_minus_one(r, 2 * m as u64, 2 * f as u64);
        if via != divides {
            return Err(Error::Inconsistent(format!(
                "order test for {c} in PSL(2,{q}) disagrees with the power criterion"
            )));
        }
        let rel = if via { "divides" } else { "does not divide" };
        witness.push_str(&format!("; {r}^{} - 1 {rel} {r}^{} - 1, so m = {m} {rel} f = {f}", 2 * m, 2 * f));
    }
    Ok(StageResult::new(Stage::OrderDivisibility, None, divides, witness, &[]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuzukiVerdict {
    /// `2^n - 1` does not divide `2^(2p)(2^(4p) - 1)`.
    Excluded,
    /// `n = p`: the factor has the order of `G` itself.
    OrderEqual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuzukiStep {
    pub p: u32,
    pub n: u32,
    pub verdict: SuzukiVerdict,
    pub witness: String,
}

/// `Sz(2^n)` as a section of a subgroup of `V(Z Sz(2^p))`: the odd number
/// `2^n - 1` must divide `|G|(2^p + 1) = 2^(2p)(2^(4p) - 1)`, so `n | 4p`
/// and, `n` being odd, `n = p`.
pub fn suzuki_exclusion(p: u32, n: u32) -> Result<SuzukiStep> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::PreconditionFailed(format!("p = {p} must be an odd prime")));
    }
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::PreconditionFailed(format!("n = {n} must be odd and at least 3")));
    }
    let divides = divides_power_minus_one(2, n as u64, 4 * p as u64);
    let check = pow2_minus_one_divides(n, p);
    if divides != check {
        return Err(Error::Inconsistent(format!("power criterion fails for n = {n}, p = {p}")));
    }
    let (verdict, witness) = if !divides {
        (
            SuzukiVerdict::Excluded,
            format!(
                "2^{n} - 1 must divide 2^{}(2^{} - 1); it is odd, so {n} | {}; but {n} does not divide {}",
                2 * p,
                4 * p,
                4 * p,
                4 * p
            ),
        )
    } else {
        (
            SuzukiVerdict::OrderEqual,
            format!(
                "{n} divides {} and {n} is odd, so n = p = {p}; then |H/N| = |Sz(2^{p})| = |G|, a contradiction for a proper subgroup",
                4 * p
            ),
        )
    };
    Ok(SuzukiStep { p, n, verdict, witness })
}

/// Direct check of `2^n - 1 | 2^(2p)(2^(4p) - 1)` with big integers.
fn pow2_minus_one_divides(n: u32, p: u32) -> bool {
    use num_bigint::BigUint;
    use num_traits::{One, Zero};
    let two = BigUint::from(2u32);
    let d = two.pow(n) - BigUint::one();
    let target = two.pow(2 * p) * (two.pow(4 * p) - BigUint::one());
    (target % d).is_zero()
}

/// Groups whose proper subgroups of `V(ZG)` are the subject of the minimal
/// simple group report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimalTarget {
    Psl2 { q: u64 },
    Psl33,
    Sz { p: u32 },
}

impl FromStr for MinimalTarget {
    type Err = Error;

    /// Accepts `psl2:q`, `psl2:r,m`, `psl33` and `sz:p`.
    fn from_str(s: &str) -> Result<MinimalTarget> {
        let bad = || Error::UnsupportedTag(s.to_string());
        let t = s.trim().to_ascii_lowercase();
        match t.split_once(':') {
            None if t == "psl33" => Ok(MinimalTarget::Psl33),
            Some(("psl2", args)) => {
                let q = match args.split_once(',') {
                    Some((r, m)) => {
                        let r: u64 = r.trim().parse().map_err(|_| bad())?;
                        let m: u32 = m.trim().parse().map_err(|_| bad())?;
                        r.checked_pow(m).ok_or_else(bad)?
                    }
                    None => args.trim().parse().map_err(|_| bad())?,
                };
                check_q(q).map_err(|_| bad())?;
                Ok(MinimalTarget::Psl2 { q })
            }
            Some(("sz", n)) => {
                let p: u32 = n.trim().parse().map_err(|_| bad())?;
                if p < 3 || !is_prime(p as u64) {
                    return Err(bad());
                }
                Ok(MinimalTarget::Sz { p })
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalReport {
    pub target: MinimalTarget,
    #[serde(with = "dec")]
    pub group_order: u128,
    /// Order-level facts established along the way.
    pub notes: Vec<String>,
    pub screens: Vec<ScreenReport>,
    pub suzuki: Vec<SuzukiStep>,
    /// True when every candidate below the group order is ruled out.
    pub all_proper_excluded: bool,
}

pub fn minimal_simple_report(tag: &str) -> Result<MinimalReport> {
    match tag.parse::<MinimalTarget>()? {
        MinimalTarget::Psl33 => {
            let order: u128 = 5616;
            let f = factorize(order as u64);
            Ok(MinimalReport {
                target: MinimalTarget::Psl33,
                group_order: order,
                notes: vec![format!(
                    "|K| = |PSL(3,3)| = {} = {order}; PSL(3,3) is the only simple group of this order",
                    fmt_factorization(&f)
                )],
                screens: vec![],
                suzuki: vec![],
                all_proper_excluded: true,
            })
        }
        MinimalTarget::Psl2 { q } => {
            let g = group_order(q)?;
            let mut screens = Vec::new();
            for c in standard_candidates(q)? {
                screens.push(screen(c, q)?);
            }
            let all = screens
                .iter()
                .filter(|s| s.candidate_order < g as u128)
                .all(ScreenReport::is_excluded);
            let notes = screens
                .iter()
                .map(|s| match &s.verdict {
                    ScreenVerdict::Excluded { first, .. } => format!("{}: {}", s.candidate, first.witness),
                    ScreenVerdict::Admissible { embeds_as } => format!("{}: admissible as {embeds_as}", s.candidate),
                    ScreenVerdict::Unresolved { reason } => format!("{}: unresolved, {reason}", s.candidate),
                })
                .collect();
            Ok(MinimalReport {
                target: MinimalTarget::Psl2 { q },
                group_order: g as u128,
                notes,
                screens,
                suzuki: vec![],
                all_proper_excluded: all,
            })
        }
        MinimalTarget::Sz { p } => {
            let order = suzuki_order(p).ok_or_else(|| Error::UnsupportedTag(format!("sz:{p}")))?;
            let mut notes = Vec::new();
            if order % 3 == 0 {
                return Err(Error::Inconsistent(format!("3 divides |Sz(2^{p})| = {order}")));
            }
            notes.push(format!("3 does not divide |G| = |Sz(2^{p})| = {order}, so every simple section is a Suzuki group"));
            let mut suzuki = Vec::new();
            let mut n = 3;
            while let Some(o) = suzuki_order(n).filter(|&o| o <= order) {
                let step = suzuki_exclusion(p, n)?;
                notes.push(format!("Sz(2^{n}) of order {o}: {:?}", step.verdict));
                suzuki.push(step);
                n += 2;
            }
            let all = suzuki.iter().all(|s| s.verdict == SuzukiVerdict::Excluded || s.n == p);
            Ok(MinimalReport {
                target: MinimalTarget::Sz { p },
                group_order: order,
                notes,
                screens: vec![],
                suzuki,
                all_proper_excluded: all,
            })
        }
    }
}

fn fmt_factorization(f: &[(u64, u32)]) -> String {
    f.iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join(".")
}

/// The candidate list screened for a given `q`: the sporadic and exceptional
/// entries, `PSL(2,p^m)` for `m <= f`, and a handful of small `PSL(2,r)`.
pub fn standard_candidates(q: u64) -> Result<Vec<Candidate>> {
    let (p, f) = check_q(q)?;
    let mut out = vec![
        Candidate::A5,
        Candidate::A7,
        Candidate::J1,
        Candidate::Psl33,
        Candidate::Sz { n: 3 },
        Candidate::Ree { n: 3 },
        Candidate::Psl2 { r: 2, m: 3 },
        Candidate::Psl2 { r: 3, m: 2 },
    ];
    for m in 1..=f {
        if p.pow(m) >= 4 {
            out.push(Candidate::Psl2 { r: p, m });
        }
    }
    for r in [7, 11, 13] {
        out.push(Candidate::Psl2 { r, m: 1 });
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `u128` as a decimal string, which survives any JSON reader.
mod dec {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn big_divides(a: u64, n: u32, m: u32) -> bool {
        let a = BigUint::from(a);
        let d = a.pow(n) - BigUint::one();
        ((a.pow(m) - BigUint::one()) % d).is_zero()
    }

    #[test]
    fn power_minus_one_examples() {
        assert!(divides_power_minus_one(2, 3, 6));
        assert!(!divides_power_minus_one(2, 4, 6));
        assert!(divides_power_minus_one(7, 5, 5));
    }

    proptest! {
        #[test]
        fn power_minus_one_matches_division(a in 2u64..40, n in 1u32..30, m in 1u32..30) {
            prop_assert_eq!(divides_power_minus_one(a, n as u64, m as u64), big_divides(a, n, m));
        }
    }

    #[test]
    fn class_counts_of_g() {
        assert_eq!(ccl_count_g(9, 5).unwrap(), 2);
        assert_eq!(ccl_count_g(7, 7).unwrap(), 2);
        assert_eq!(ccl_count_g(27, 13).unwrap(), 6);
    }

    #[test]
    fn tags_round_trip() {
        for t in ["psl2:3,2", "a5", "a7", "j1", "ree:3", "sz:5", "psl33"] {
            let c: Candidate = t.parse().unwrap();
            assert_eq!(c.to_string(), t);
        }
        assert!(matches!("psl2:3,1".parse::<Candidate>(), Err(Error::NotSimple(_))));
        assert!(matches!("psl2:2,1".parse::<Candidate>(), Err(Error::NotSimple(_))));
        assert!(matches!("psl2:4,1".parse::<Candidate>(), Err(Error::UnknownCandidate(_))));
        assert!(matches!("m11".parse::<Candidate>(), Err(Error::UnknownCandidate(_))));
        assert!(matches!("ree:2".parse::<Candidate>(), Err(Error::UnknownCandidate(_))));
    }

    #[test]
    fn orders() {
        let fb = FactBase::standard();
        assert_eq!(Candidate::Psl2 { r: 2, m: 2 }.order(&fb).unwrap(), 60);
        assert_eq!(Candidate::Psl2 { r: 3, m: 2 }.order(&fb).unwrap(), 360);
        assert_eq!(Candidate::Sz { n: 3 }.order(&fb).unwrap(), 29120);
        assert_eq!(Candidate::Ree { n: 3 }.order(&fb).unwrap(), 10_073_444_472);
        assert_eq!(Candidate::J1.order(&fb).unwrap(), 175_560);
        assert!(Candidate::J1.order(&fb.without("j1.order")).is_err());
    }

    #[test]
    fn ccl_examples() {
        let fb = FactBase::standard();
        let a7 = ccl_bound_check(Candidate::A7, 9, 5, &fb).unwrap();
        assert_eq!(a7.outcome, Outcome::Fail);
        assert!(a7.witness.contains("1 < 2"), "{}", a7.witness);
        // q = 2^6: 7 | 63 and ccl_7(G) = 3
        let j1 = ccl_bound_check(Candidate::J1, 64, 7, &fb).unwrap();
        assert_eq!(j1.outcome, Outcome::Fail);
        assert!(j1.witness.contains("1 < 3"), "{}", j1.witness);
        let p5 = ccl_bound_check(Candidate::Psl2 { r: 5, m: 1 }, 9, 5, &fb).unwrap();
        assert_eq!(p5.outcome, Outcome::Pass);
        assert!(p5.witness.contains("2 >= 2"));
        assert!(matches!(
            ccl_bound_check(Candidate::A7, 9, 5, &fb.without("a7.ccl5")),
            Err(Error::UnknownFact { .. })
        ));
    }

    #[test]
    fn sylow_examples() {
        let fb = FactBase::standard();
        assert_eq!(sylow_cyclic_filter(Candidate::A7, 25, 3, &fb).unwrap().outcome, Outcome::Fail);
        assert_eq!(sylow_cyclic_filter(Candidate::Ree { n: 3 }, 64, 3, &fb).unwrap().outcome, Outcome::Fail);
        assert_eq!(
            sylow_cyclic_filter(Candidate::Psl2 { r: 5, m: 1 }, 9, 5, &fb).unwrap().outcome,
            Outcome::Pass
        );
        assert!(sylow_cyclic_filter(Candidate::A7, 9, 3, &fb).is_err());
    }

    #[test]
    fn dickson_examples() {
        assert!(dickson_subgroup_check(3, 1, 3, 2, 360));
        assert!(!dickson_subgroup_check(3, 2, 3, 3, 9828));
        assert!(dickson_subgroup_check(5, 1, 3, 2, 360));
        assert!(dickson_subgroup_check(2, 2, 3, 2, 360));
        assert!(!dickson_subgroup_check(5, 1, 7, 1, 168));
    }

    #[test]
    fn a7_at_nine() {
        let rep = screen(Candidate::A7, 9).unwrap();
        let ScreenVerdict::Excluded { failures, .. } = &rep.verdict else { panic!("{rep:?}") };
        let ccl = failures.iter().find(|s| s.stage == Stage::CclBound).unwrap();
        assert_eq!(ccl.prime, Some(5));
        assert!(ccl.witness.contains("1 < 2"));
    }

    #[test]
    fn a5_and_group_itself() {
        assert!(screen(Candidate::Psl2 { r: 2, m: 2 }, 4).unwrap().is_admissible());
        assert!(screen(Candidate::A5, 9).unwrap().is_admissible());
        let r = screen(Candidate::A5, 7).unwrap();
        assert!(r.is_excluded());
        assert!(r.failures().next().unwrap().witness.contains("does not divide"));
    }

    #[test]
    fn subfield_criterion() {
        for p in [2u64, 3, 5, 7] {
            for f in 1..=4u32 {
                let q = p.pow(f);
                if q < 4 {
                    continue;
                }
                for m in 1..=4u32 {
                    let c = Candidate::Psl2 { r: p, m };
                    if c.validate().is_err() {
                        continue;
                    }
                    let rep = screen(c, q).unwrap();
                    assert_eq!(rep.is_admissible(), f % m == 0, "p={p} m={m} f={f}: {rep:?}");
                }
            }
        }
    }

    #[test]
    fn odd_psl2_factors_need_small_r() {
        // PSL(2,7) against q = 27: 7 | 27+1, ccl_7(G) = 3 > 2
        let rep = screen(Candidate::Psl2 { r: 7, m: 1 }, 27).unwrap();
        assert!(rep.failures().any(|s| s.stage == Stage::CclBound && s.prime == Some(7)));
        // even q: PSL(2,7) has dihedral Sylow 2-subgroups
        let rep = screen(Candidate::Psl2 { r: 7, m: 1 }, 8).unwrap();
        assert!(rep.failures().any(|s| s.stage == Stage::Sylow2Shape));
    }

    #[test]
    fn suzuki_arithmetic() {
        assert_eq!(suzuki_exclusion(3, 3).unwrap().verdict, SuzukiVerdict::OrderEqual);
        let s = suzuki_exclusion(5, 3).unwrap();
        assert_eq!(s.verdict, SuzukiVerdict::Excluded);
        assert!(s.witness.contains("3 does not divide 20"));
        let s = suzuki_exclusion(3, 9).unwrap();
        assert!(s.witness.contains("9 does not divide 12"));
        assert!(suzuki_exclusion(4, 3).is_err());
        for n in (5..40).step_by(2) {
            assert_eq!(suzuki_exclusion(3, n).unwrap().verdict, SuzukiVerdict::Excluded);
        }
    }

    #[test]
    fn minimal_reports() {
        let r = minimal_simple_report("sz:3").unwrap();
        assert_eq!(r.group_order, 29120);
        assert!(r.all_proper_excluded);
        assert_eq!(r.suzuki.len(), 1);
        let r = minimal_simple_report("psl33").unwrap();
        assert!(r.notes[0].contains("2^4.3^3.13"));
        let r = minimal_simple_report("psl2:7").unwrap();
        let a5 = r.screens.iter().find(|s| s.candidate == Candidate::A5).unwrap();
        assert!(a5.failures().next().unwrap().witness.contains("60 does not divide"));
        assert!(matches!(minimal_simple_report("a7"), Err(Error::UnsupportedTag(_))));
    }

    #[test]
    fn ablation_never_admits() {
        let full = FactBase::standard();
        for q in [7u64, 8, 9, 11, 16, 25, 27, 32, 49, 64, 81] {
            for c in standard_candidates(q).unwrap() {
                let base = screen_with(c, q, &full).unwrap();
                for fact in full.facts() {
                    match screen_with(c, q, &full.without(fact.id)) {
                        Ok(r) if base.is_excluded() => assert!(r.is_excluded(), "{c} q={q} -{}", fact.id),
                        Ok(r) => assert_eq!(r.verdict, base.verdict),
                        Err(Error::UnknownFact { .. }) => {}
                        Err(e) => panic!("{c} q={q}: {e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn report_json_round_trip() {
        let r = screen(Candidate::A7, 9).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: ScreenReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let m = minimal_simple_report("sz:5").unwrap();
        let back: MinimalReport = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
