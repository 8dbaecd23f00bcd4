//! Scalar-product obstructions showing that a finite 2-subgroup of the
//! normalized unit group of Z[PSL(2,q)] is cyclic or dihedral.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chartab::{build_char_table, fs_indicator, test_character, CharTable};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, to_i64, Exact};
use crate::psl2::check_q;
use crate::smallgroup::{SmallChar, SmallGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Contradiction,
    Vacuous,
    Pass,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Contradiction => "Contradiction",
            Verdict::Vacuous => "Vacuous",
            Verdict::Pass => "Pass",
        })
    }
}

/// An exact value, or a value known only modulo something.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quantity {
    Exact { value: Exact },
    /// `value = residue (mod modulus)`.
    Residue { residue: i64, modulus: i64 },
    /// `value * scale = residue (mod modulus)`.
    ScaledResidue { residue: i64, modulus: i64, scale: i64 },
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Exact { value } => write!(f, "{value}"),
            Quantity::Residue { residue, modulus } => write!(f, "{residue} mod {modulus}"),
            Quantity::ScaledResidue { residue, modulus, scale } => {
                write!(f, "{scale}*x = {residue} mod {modulus}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub test: String,
    pub q: u64,
    pub epsilon: i64,
    pub raw_sum: Quantity,
    pub scalar_product: Quantity,
    pub verdict: Verdict,
    pub witness: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precondition {
    pub q: u64,
    pub epsilon: i64,
    pub q_minus_epsilon: u64,
    /// `8 | q - eps`; otherwise no subgroup of order 8 exists and the claim is vacuous.
    pub proceed: bool,
}

/// `eps` with `q = eps (mod 4)` and whether `8 | q - eps`.
pub fn precondition_8_divides(q: u64) -> Result<Precondition> {
    let (p, _) = check_q(q)?;
    if p == 2 || q < 7 {
        return Err(Error::UnsupportedQ(q));
    }
    let epsilon = if q % 4 == 1 { 1 } else { -1 };
    let q_minus_epsilon = (q as i64 - epsilon) as u64;
    Ok(Precondition { q, epsilon, q_minus_epsilon, proceed: q_minus_epsilon.is_multiple_of(8) })
}

fn require_proceed(table: &CharTable) -> Result<Precondition> {
    let pre = precondition_8_divides(table.q())?;
    if !pre.proceed {
        return Err(Error::PreconditionFailed(format!(
            "8 does not divide q-eps = {} for q = {}",
            pre.q_minus_epsilon, pre.q
        )));
    }
    Ok(pre)
}

/// `xi(1)` and `xi(s)` read off the table (asserted `q+eps` and `-2eps`).
fn xi_data(table: &CharTable) -> Result<(Cyclo, Cyclo)> {
    let (label, row) = test_character(table)?;
    let s = table.classes().involution_class().expect("checked by test_character");
    Ok((Cyclo::from_int(row.degree as i64), table.value(label, s).expect("present").clone()))
}

fn pick(h: &SmallGroup, want: impl Fn(&SmallChar) -> bool) -> Result<(SmallChar, &SmallGroup)> {
    h.self_test()?;
    let lam = h
        .irreducibles()
        .into_iter()
        .find(|c| want(c))
        .ok_or_else(|| Error::Inconsistent(format!("no suitable character of {}", h.name())))?;
    Ok((lam, h))
}

/// `H` elementary abelian of order 8, `lambda` a nontrivial linear character.
pub fn obstruction_e8(table: &CharTable) -> Result<ObstructionReport> {
    let pre = require_proceed(table)?;
    let eps = pre.epsilon;
    let (xi1, xis) = xi_data(table)?;
    let group = SmallGroup::abelian(&[2, 2, 2]);
    let (lam, h) = pick(&group, |c| c.values.iter().any(|v| *v != Cyclo::one()))?;
    let id = h.identity();
    // every nonidentity element is an involution, so xi_H is pinned to xi(s) there
    let raw: Cyclo = h
        .elements()
        .iter()
        .zip(&lam.values)
        .map(|(x, l)| if *x == id { l * &xi1 } else { l * &xis })
        .sum();
    let raw = raw.expect_rational()?;
    let expected = int(q_i(table) + 3 * eps);
    if raw != expected {
        return Err(Error::Inconsistent(format!("E8 sum {raw} differs from q+3eps")));
    }
    let sp = &raw / int(8);
    let verdict = if sp.is_integer() { Verdict::Pass } else { Verdict::Contradiction };
    Ok(ObstructionReport {
        test: "E8".into(),
        q: table.q(),
        epsilon: eps,
        raw_sum: Quantity::Exact { value: Exact(raw.clone()) },
        scalar_product: Quantity::Exact { value: Exact(sp.clone()) },
        verdict,
        witness: format!(
            "sum over H of lambda(x) xi(x^-1) = (q+ε) - 2ε(3-4) = q+3ε = {}; <lambda, xi_H> = (q+3ε)/8 = {} is not an integer",
            fmt_rational(&raw),
            fmt_rational(&sp)
        ),
    })
}

/// `H = C4 x C2`, `lambda` principal; the values at the four elements of
/// order 4 are unknown multiples of 4 coming in inverse pairs.
pub fn obstruction_c4xc2(table: &CharTable) -> Result<ObstructionReport> {
    let pre = require_proceed(table)?;
    let eps = pre.epsilon;
    let (xi1, xis) = xi_data(table)?;
    let group = SmallGroup::abelian(&[4, 2]);
    let (lam, h) = pick(&group, |c| c.values.iter().all(|v| *v == Cyclo::one()))?;
    let mut known = Cyclo::zero();
    let mut pair_moduli = Vec::new();
    let mut seen = Vec::new();
    // xi(u) = eps_s(u) xi(s) with eps_s(u) even: xi(u) lies in 2 xi(s) Z
    let unknown_step = 2 * to_i64(&xis.expect_rational()?).expect("integer").abs();
    for (x, l) in h.elements().iter().zip(&lam.values) {
        match h.element_order(x) {
            1 => known = &known + &(l * &xi1),
            2 => known = &known + &(l * &xis),
            4 => {
                if seen.contains(x) {
                    continue;
                }
                let xi = h.inv(x);
                seen.push(x.clone());
                seen.push(xi.clone());
                let l_inv = &lam.values[h.index_of(&xi)];
                if l != l_inv {
                    return Err(Error::Inconsistent("lambda must agree on u and u^-1".into()));
                }
                // lambda(u) xi(u^-1) + lambda(u^-1) xi(u) = 2 lambda(u) xi(u)
                let lv = to_i64(&l.expect_rational()?).expect("integer");
                pair_moduli.push((2 * lv * unknown_step).abs());
            }
            o => return Err(Error::Inconsistent(format!("unexpected element order {o}"))),
        }
    }
    let modulus = pair_moduli.into_iter().fold(0, crate::arith::gcd_i64);
    let known = to_i64(&known.expect_rational()?).expect("integer");
    let residue = known.rem_euclid(modulus);
    let expect = (q_i(table) + 3 * eps).rem_euclid(modulus);
    if modulus != 8 || residue != expect {
        return Err(Error::Inconsistent(format!(
            "C4xC2 bookkeeping gave {residue} mod {modulus}, expected q+3ε mod 8"
        )));
    }
    let verdict = if residue == 0 { Verdict::Pass } else { Verdict::Contradiction };
    Ok(ObstructionReport {
        test: "C4xC2".into(),
        q: table.q(),
        epsilon: eps,
        raw_sum: Quantity::Residue { residue, modulus },
        scalar_product: Quantity::ScaledResidue { residue, modulus, scale: 8 },
        verdict,
        witness: format!(
            "sum = (q+ε)+3(-2ε)+2ξ(u)+2ξ(v) with ξ(u), ξ(v) = 0 mod 4, so sum = q+3ε = {residue} mod 8; 8<lambda, xi_H> must be 0 mod 8"
        ),
    })
}

/// `H = Q8`, `lambda` the faithful character of degree 2.
pub fn obstruction_q8(table: &CharTable) -> Result<ObstructionReport> {
    let pre = require_proceed(table)?;
    let eps = pre.epsilon;
    let (label, _) = test_character(table)?;
    let ind = fs_indicator(table, table.classes(), label)?;
    if ind != 1 {
        return Err(Error::IndicatorNotOne(ind));
    }
    let (xi1, xis) = xi_data(table)?;
    let group = SmallGroup::quaternion8();
    let (lam, h) = pick(&group, |c| c.degree == 2)?;
    let mut raw = Cyclo::zero();
    for (x, l) in h.elements().iter().zip(&lam.values) {
        let term = match h.element_order(x) {
            1 => l * &xi1,
            2 => l * &xis,
            // the value of xi there is not needed: lambda vanishes
            _ if l.is_zero() => Cyclo::zero(),
            o => return Err(Error::Inconsistent(format!("lambda nonzero at order {o}"))),
        };
        raw = &raw + &term;
    }
    let raw = raw.expect_rational()?;
    let q = q_i(table);
    if raw != int(2 * (q - eps) + 8 * eps) {
        return Err(Error::Inconsistent(format!("Q8 sum {raw} differs from 2(q-ε)+8ε")));
    }
    let sp = &raw / int(8);
    let odd = sp.is_integer() && to_i64(&sp).is_some_and(|k| k % 2 != 0);
    let verdict = if odd { Verdict::Contradiction } else { Verdict::Pass };
    Ok(ObstructionReport {
        test: "Q8".into(),
        q: table.q(),
        epsilon: eps,
        raw_sum: Quantity::Exact { value: Exact(raw.clone()) },
        scalar_product: Quantity::Exact { value: Exact(sp.clone()) },
        verdict,
        witness: format!(
            "sum = 2(q+ε)+(-2)(-2ε) = 2(q−ε)+8ε = {}; <lambda, xi_H> = (q+3ε)/4 = {} is odd, but xi has indicator 1, so lambda occurs with even multiplicity",
            fmt_rational(&raw),
            fmt_rational(&sp)
        ),
    })
}

fn q_i(table: &CharTable) -> i64 {
    table.q() as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoSubgroupCase {
    /// q odd, at least 7.
    Odd,
    /// q = 5: PSL(2,5) is A5, for which the statement is known.
    KnownA5,
    /// q even: exponent 2 Sylow subgroups.
    EvenCharacteristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoSubgroupReport {
    pub q: u64,
    pub epsilon: Option<i64>,
    pub case: TwoSubgroupCase,
    pub precondition: Option<Precondition>,
    pub obstructions: Vec<ObstructionReport>,
    pub reductions: Vec<String>,
    pub conclusion: String,
}

impl TwoSubgroupReport {
    /// Every obstruction that ran ended in a contradiction.
    pub fn confirmed(&self) -> bool {
        self.obstructions.iter().all(|o| o.verdict == Verdict::Contradiction)
    }
}

pub fn two_subgroup_verdict(q: u64) -> Result<TwoSubgroupReport> {
    let (p, f) = check_q(q)?;
    if p == 2 {
        return Ok(TwoSubgroupReport {
            q,
            epsilon: None,
            case: TwoSubgroupCase::EvenCharacteristic,
            precondition: None,
            obstructions: vec![],
            reductions: vec![format!(
                "Sylow 2-subgroups of PSL(2,{q}) are elementary abelian of order 2^{f}; exponent 2 passes to every finite 2-subgroup of units"
            )],
            conclusion: "elementary abelian".into(),
        });
    }
    if q == 5 {
        return Ok(TwoSubgroupReport {
            q,
            epsilon: Some(1),
            case: TwoSubgroupCase::KnownA5,
            precondition: None,
            obstructions: vec![],
            reductions: vec!["PSL(2,5) is isomorphic to A5; the statement is known for A5".into()],
            conclusion: "cyclic or dihedral (known for A5)".into(),
        });
    }
    let pre = precondition_8_divides(q)?;
    if !pre.proceed {
        return Ok(TwoSubgroupReport {
            q,
            epsilon: Some(pre.epsilon),
            case: TwoSubgroupCase::Odd,
            precondition: Some(pre),
            obstructions: vec![],
            reductions: vec![format!(
                "8 does not divide q-ε = {}: no 2-subgroup of order 8 exists, so finite 2-subgroups have order at most 4",
                pre.q_minus_epsilon
            )],
            conclusion: "cyclic or dihedral (vacuous: |H| <= 4)".into(),
        });
    }
    let table = build_char_table(q)?;
    let obstructions = vec![obstruction_e8(&table)?, obstruction_c4xc2(&table)?, obstruction_q8(&table)?];
    let reductions = vec![
        "maximal abelian subgroups of H are cyclic or four-groups (E8 and C4xC2 excluded)".into(),
        "a semidihedral group contains C4xC2, hence is excluded".into(),
        "a generalized quaternion group contains Q8, hence is excluded".into(),
    ];
    let confirmed = obstructions.iter().all(|o| o.verdict == Verdict::Contradiction);
    if !confirmed {
        return Err(Error::Inconsistent(format!("an obstruction did not fire at q = {q}")));
    }
    Ok(TwoSubgroupReport {
        q,
        epsilon: Some(pre.epsilon),
        case: TwoSubgroupCase::Odd,
        precondition: Some(pre),
        obstructions,
        reductions,
        conclusion: "cyclic or dihedral".into(),
    })
}

/// `(q+3eps)/4` for `q = eps (mod 8)`; always an odd integer.
pub fn q8_scalar(q: u64) -> Option<i64> {
    let eps = if q % 4 == 1 { 1 } else { -1 };
    let num = q as i64 + 3 * eps;
    (num % 4 == 0).then_some(num / 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    const PROCEED: [u64; 7] = [7, 9, 17, 23, 25, 31, 41];

    #[test]
    fn preconditions() {
        let p7 = precondition_8_divides(7).unwrap();
        assert_eq!((p7.epsilon, p7.proceed), (-1, true));
        let p11 = precondition_8_divides(11).unwrap();
        assert_eq!((p11.epsilon, p11.proceed), (-1, false));
        let p9 = precondition_8_divides(9).unwrap();
        assert_eq!((p9.epsilon, p9.proceed), (1, true));
        assert_eq!(precondition_8_divides(8), Err(Error::UnsupportedQ(8)));
        assert_eq!(precondition_8_divides(5), Err(Error::UnsupportedQ(5)));
    }

    #[test]
    fn e8_values() {
        for (q, sum, sp) in [(7u64, 4, rat(1, 2)), (9, 12, rat(3, 2)), (17, 20, rat(5, 2))] {
            let r = obstruction_e8(&build_char_table(q).unwrap()).unwrap();
            assert_eq!(r.raw_sum, Quantity::Exact { value: Exact::int(sum) });
            assert_eq!(r.scalar_product, Quantity::Exact { value: Exact(sp) });
            assert_eq!(r.verdict, Verdict::Contradiction);
            assert!(r.witness.contains("q+3ε"));
        }
    }

    #[test]
    fn c4xc2_residues() {
        for q in [7u64, 25, 23] {
            let r = obstruction_c4xc2(&build_char_table(q).unwrap()).unwrap();
            assert_eq!(r.raw_sum, Quantity::Residue { residue: 4, modulus: 8 });
            assert_eq!(r.verdict, Verdict::Contradiction);
        }
    }

    #[test]
    fn q8_values() {
        for (q, sp) in [(7u64, 1), (9, 3), (17, 5)] {
            let r = obstruction_q8(&build_char_table(q).unwrap()).unwrap();
            assert_eq!(r.scalar_product, Quantity::Exact { value: Exact::int(sp) });
            assert_eq!(r.verdict, Verdict::Contradiction);
            assert!(r.witness.contains("2(q−ε)+8ε"));
        }
    }

    #[test]
    fn vacuous_and_precondition_errors() {
        let t11 = build_char_table(11).unwrap();
        assert!(matches!(obstruction_e8(&t11), Err(Error::PreconditionFailed(_))));
        let r = two_subgroup_verdict(11).unwrap();
        assert!(r.obstructions.is_empty());
        assert!(r.conclusion.contains("vacuous"));
    }

    #[test]
    fn verdicts_over_range() {
        for q in PROCEED {
            let r = two_subgroup_verdict(q).unwrap();
            assert_eq!(r.obstructions.len(), 3, "q={q}");
            assert!(r.confirmed());
            assert_eq!(r.conclusion, "cyclic or dihedral");
        }
        assert_eq!(two_subgroup_verdict(5).unwrap().case, TwoSubgroupCase::KnownA5);
        assert_eq!(two_subgroup_verdict(8).unwrap().conclusion, "elementary abelian");
    }

    #[test]
    fn q8_scalar_is_odd_arithmetic() {
        for q in (7u64..2000).filter(|&q| crate::arith::prime_power(q).is_some_and(|(p, _)| p != 2)) {
            let eps = if q % 4 == 1 { 1 } else { -1 };
            if (q as i64 - eps) % 8 == 0 {
                let k = q8_scalar(q).unwrap();
                assert!(k % 2 != 0, "q={q}");
            }
        }
    }

    #[test]
    fn report_json_round_trip() {
        let r = two_subgroup_verdict(7).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<TwoSubgroupReport>(&s).unwrap(), r);
    }
}
