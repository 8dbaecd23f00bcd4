//! Ordinary character table of PSL(2,q), q odd, with orthogonality checks,
//! Frobenius-Schur indicators and restriction to small subgroups.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclo::{sqrt_eps_q, Cyclo};
use crate::error::{Error, Result};
use crate::exact::{int, rat, to_i64, Exact, Rational};
use crate::psl2::{BruteForceClasses, ClassLabel, ClassTable, Psl2, Psl2Elem};
use crate::smallgroup::{abelian_types, SmallGroup, SmallKind, MAX_SMALL_ORDER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharLabel {
    Trivial,
    Psi,
    Chi(u64),
    Theta(u64),
    Eta1,
    Eta2,
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharLabel::Trivial => f.write_str("1"),
            CharLabel::Psi => f.write_str("psi"),
            CharLabel::Chi(i) => write!(f, "chi_{i}"),
            CharLabel::Theta(j) => write!(f, "theta_{j}"),
            CharLabel::Eta1 => f.write_str("eta_1"),
            CharLabel::Eta2 => f.write_str("eta_2"),
        }
    }
}

impl FromStr for CharLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<CharLabel> {
        let bad = || Error::Inconsistent(format!("bad character label {s:?}"));
        Ok(match s {
            "1" => CharLabel::Trivial,
            "psi" => CharLabel::Psi,
            "eta_1" => CharLabel::Eta1,
            "eta_2" => CharLabel::Eta2,
            _ => {
                let (head, idx) = s.split_once('_').ok_or_else(bad)?;
                let k: u64 = idx.parse().map_err(|_| bad())?;
                match head {
                    "chi" => CharLabel::Chi(k),
                    "theta" => CharLabel::Theta(k),
                    _ => return Err(bad()),
                }
            }
        })
    }
}

impl Serialize for CharLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CharLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<CharLabel, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
pub struct CharRow {
    pub label: CharLabel,
    pub degree: u64,
    /// Aligned with the classes of the table.
    pub values: Vec<Cyclo>,
}

#[derive(Clone, Debug)]
pub struct CharTable {
    classes: ClassTable,
    rows: Vec<CharRow>,
}

/// Builds the table from the structured class data.
pub fn build_char_table(q: u64) -> Result<CharTable> {
    let classes = ClassTable::structured(q)?;
    let g = classes.group().clone();
    let eps = g.epsilon().ok_or(Error::UnsupportedQ(q))?;
    let p = g.p();
    let f = g.field().f();
    let na = (q - 1) / 2;
    let nb = q.div_ceil(2);
    let (i_max, j_max) = if eps == 1 { ((q - 5) / 4, (q - 1) / 4) } else { ((q - 3) / 4, (q - 3) / 4) };
    let root = sqrt_eps_q(p, f)?.minimal();
    let half = rat(1, 2);
    let eta_c = (&Cyclo::from_int(eps) + &root).scale(&half);
    let eta_d = (&Cyclo::from_int(eps) - &root).scale(&half);

    let labels = classes.labels();
    let row = |label: CharLabel, degree: u64, f: &dyn Fn(ClassLabel) -> Cyclo| CharRow {
        label,
        degree,
        values: labels.iter().map(|&c| f(c).minimal()).collect(),
    };
    let z = Cyclo::from_int;
    let sgn = |k: u64| if k.is_multiple_of(2) { 1 } else { -1 };

    let mut rows = vec![row(CharLabel::Trivial, 1, &|_| z(1))];
    rows.push(row(CharLabel::Psi, q, &|c| match c {
        ClassLabel::One => z(q as i64),
        ClassLabel::C | ClassLabel::D => z(0),
        ClassLabel::A(_) => z(1),
        ClassLabel::B(_) => z(-1),
    }));
    for i in 1..=i_max {
        rows.push(row(CharLabel::Chi(i), q + 1, &|c| match c {
            ClassLabel::One => z(q as i64 + 1),
            ClassLabel::C | ClassLabel::D => z(1),
            ClassLabel::A(l) => Cyclo::root_pair_sum(na, (i * l) as i64),
            ClassLabel::B(_) => z(0),
        }));
    }
    for j in 1..=j_max {
        rows.push(row(CharLabel::Theta(j), q - 1, &|c| match c {
            ClassLabel::One => z(q as i64 - 1),
            ClassLabel::C | ClassLabel::D => z(-1),
            ClassLabel::A(_) => z(0),
            ClassLabel::B(m) => -Cyclo::root_pair_sum(nb, (j * m) as i64),
        }));
    }
    let eta_deg = ((q as i64 + eps) / 2) as u64;
    for (label, on_c, on_d) in [
        (CharLabel::Eta1, &eta_c, &eta_d),
        (CharLabel::Eta2, &eta_d, &eta_c),
    ] {
        rows.push(row(label, eta_deg, &|c| match c {
            ClassLabel::One => z(eta_deg as i64),
            ClassLabel::C => on_c.clone(),
            ClassLabel::D => on_d.clone(),
            ClassLabel::A(l) => z(if eps == 1 { sgn(l) } else { 0 }),
            ClassLabel::B(m) => z(if eps == -1 { sgn(m + 1) } else { 0 }),
        }));
    }

    let table = CharTable { classes, rows };
    if table.rows.len() != table.classes.classes().len() {
        return Err(Error::Inconsistent(format!(
            "{} characters for {} classes",
            table.rows.len(),
            table.classes.classes().len()
        )));
    }
    let deg2: u64 = table.rows.iter().map(|r| r.degree * r.degree).sum();
    if deg2 != table.group_order() {
        return Err(Error::Inconsistent(format!("sum of squared degrees {deg2}")));
    }
    Ok(table)
}

impl CharTable {
    pub fn q(&self) -> u64 {
        self.classes.q()
    }

    pub fn epsilon(&self) -> i64 {
        self.classes.epsilon().expect("odd q")
    }

    pub fn group_order(&self) -> u64 {
        self.classes.group_order()
    }

    pub fn classes(&self) -> &ClassTable {
        &self.classes
    }

    pub fn rows(&self) -> &[CharRow] {
        &self.rows
    }

    pub fn row(&self, label: CharLabel) -> Option<&CharRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.degree).collect()
    }

    /// `chi(C)` for a class label.
    pub fn value(&self, chi: CharLabel, class: ClassLabel) -> Option<&Cyclo> {
        let pos = self.classes.position(class)?;
        self.row(chi).map(|r| &r.values[pos])
    }

    /// The row as a map keyed by class label.
    pub fn value_map(&self, chi: CharLabel) -> Option<BTreeMap<ClassLabel, Cyclo>> {
        let row = self.row(chi)?;
        Some(self.classes.labels().into_iter().zip(row.values.iter().cloned()).collect())
    }

    pub fn to_report(&self) -> CharTableReport {
        CharTableReport {
            q: self.q(),
            epsilon: self.epsilon(),
            classes: self
                .classes
                .classes()
                .iter()
                .map(|c| ClassSummary { label: c.label, size: c.size, order: c.order })
                .collect(),
            rows: self
                .rows
                .iter()
                .map(|r| RowReport {
                    label: r.label,
                    degree: r.degree,
                    values: self.classes.labels().into_iter().zip(r.values.iter().cloned()).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub label: ClassLabel,
    pub size: u64,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowReport {
    pub label: CharLabel,
    pub degree: u64,
    pub values: BTreeMap<ClassLabel, Cyclo>,
}

/// Plain-data form of a character table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharTableReport {
    pub q: u64,
    pub epsilon: i64,
    pub classes: Vec<ClassSummary>,
    pub rows: Vec<RowReport>,
}

/// The distinguished character `xi`: `chi_1` when `eps = 1`, `theta_1` when
/// `eps = -1`. Checks `xi(1) = q + eps` and `xi(s) = -2 eps` on the
/// involution class.
pub fn test_character(table: &CharTable) -> Result<(CharLabel, &CharRow)> {
    let q = table.q();
    if q == 5 {
        return Err(Error::QIsFive);
    }
    let eps = table.epsilon();
    let label = if eps == 1 { CharLabel::Chi(1) } else { CharLabel::Theta(1) };
    let row = table
        .row(label)
        .ok_or_else(|| Error::Inconsistent(format!("missing {label}")))?;
    if row.degree as i64 != q as i64 + eps {
        return Err(Error::Inconsistent(format!("{label}(1) = {} != q+eps", row.degree)));
    }
    let s = table
        .classes
        .involution_class()
        .ok_or_else(|| Error::Inconsistent("no unique involution class".into()))?;
    let at_s = table.value(label, s).expect("class present");
    if *at_s != Cyclo::from_int(-2 * eps) {
        return Err(Error::Inconsistent(format!("{label}(s) = {at_s}, expected -2eps")));
    }
    Ok((label, row))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub q: u64,
    pub row_pairs_checked: usize,
    pub column_pairs_checked: usize,
    /// Pairs of characters whose inner product is wrong.
    pub row_failures: Vec<(String, String)>,
    /// Pairs of classes whose column product is wrong.
    pub column_failures: Vec<(String, String)>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.row_failures.is_empty() && self.column_failures.is_empty()
    }
}

/// Inner product of two rows, weighted by the class sizes in `classes`.
fn row_inner(table: &CharTable, classes: &ClassTable, a: &CharRow, b: &CharRow) -> Cyclo {
    let sum: Cyclo = classes
        .classes()
        .iter()
        .map(|c| {
            let pos = table.classes.position(c.label).expect("matching layouts");
            (&a.values[pos] * &b.values[pos].conj()).scale(&int(c.size as i64))
        })
        .sum();
    sum.scale(&rat(1, classes.group_order() as i64))
}

/// Column products `sum_chi chi(g) conj(chi(h))` for every pair of classes.
fn column_products(table: &CharTable) -> Vec<Vec<Cyclo>> {
    let n = table.classes.classes().len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| table.rows.iter().map(|r| &r.values[i] * &r.values[j].conj()).sum())
                .collect()
        })
        .collect()
}

/// First orthogonality of the rows and second orthogonality of the columns
/// against the centralizer orders of `classes`.
pub fn verify_orthogonality(table: &CharTable, classes: &ClassTable) -> OrthogonalityReport {
    let mut report = OrthogonalityReport { q: table.q(), ..Default::default() };
    let same_layout = classes.q() == table.q() && classes.labels() == table.classes.labels();
    if !same_layout {
        report.row_failures.push(("class layout".into(), format!("q={} vs q={}", table.q(), classes.q())));
        return report;
    }
    for (i, a) in table.rows.iter().enumerate() {
        for b in &table.rows[i..] {
            report.row_pairs_checked += 1;
            let want = if a.label == b.label { 1 } else { 0 };
            if row_inner(table, classes, a, b) != Cyclo::from_int(want) {
                report.row_failures.push((a.label.to_string(), b.label.to_string()));
            }
        }
    }
    let cols = column_products(table);
    for (i, ci) in classes.classes().iter().enumerate() {
        for (j, cj) in classes.classes().iter().enumerate() {
            report.column_pairs_checked += 1;
            let want = if i == j { classes.centralizer_order(ci.label) as i64 } else { 0 };
            if cols[i][j] != Cyclo::from_int(want) {
                report.column_failures.push((ci.label.to_string(), cj.label.to_string()));
            }
        }
    }
    report
}

/// Second orthogonality against centralizer orders counted element by element.
pub fn verify_columns_brute_force(table: &CharTable, bf: &BruteForceClasses) -> OrthogonalityReport {
    let mut report = OrthogonalityReport { q: table.q(), ..Default::default() };
    let cols = column_products(table);
    let labels = table.classes.labels();
    for (i, &li) in labels.iter().enumerate() {
        let rep = bf.representative(li);
        let cent = rep.map(|x| bf.centralizer_order(&x)).unwrap_or(0) as i64;
        for (j, &lj) in labels.iter().enumerate() {
            report.column_pairs_checked += 1;
            let want = if i == j { cent } else { 0 };
            if cols[i][j] != Cyclo::from_int(want) {
                report.column_failures.push((li.to_string(), lj.to_string()));
            }
        }
    }
    report
}

/// Frobenius-Schur indicator `(1/|G|) sum_g chi(g^2)` from a squaring map on classes.
pub fn fs_indicator_with(
    table: &CharTable,
    squares: &BTreeMap<ClassLabel, ClassLabel>,
    chi: CharLabel,
) -> Result<i64> {
    let row = table
        .row(chi)
        .ok_or_else(|| Error::Inconsistent(format!("no character {chi}")))?;
    let mut sum = Cyclo::zero();
    for c in table.classes.classes() {
        let sq = squares
            .get(&c.label)
            .ok_or_else(|| Error::Inconsistent(format!("power map misses {}", c.label)))?;
        let pos = table.classes.position(*sq).expect("image class present");
        sum = &sum + &row.values[pos].scale(&int(c.size as i64));
    }
    let v = sum.scale(&rat(1, table.group_order() as i64));
    match v.as_rational().as_ref().and_then(to_i64) {
        Some(k) if (-1..=1).contains(&k) => Ok(k),
        _ => Err(Error::NonIntegralIndicator(v.to_string())),
    }
}

/// Indicator using the power map of the given class table.
pub fn fs_indicator(table: &CharTable, classes: &ClassTable, chi: CharLabel) -> Result<i64> {
    fs_indicator_with(table, &classes.power_map(2), chi)
}

/// One irreducible constituent of a restriction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constituent {
    pub label: String,
    pub degree: u64,
    pub multiplicity: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Restriction {
    pub shape: String,
    pub order: u64,
    pub constituents: Vec<Constituent>,
}

impl Restriction {
    pub fn all_nonnegative_integers(&self) -> bool {
        self.constituents
            .iter()
            .all(|c| c.multiplicity.0.is_integer() && c.multiplicity.0 >= Rational::zero())
    }

    /// `sum lambda(1) * mult`.
    pub fn weighted_degree(&self) -> Rational {
        self.constituents
            .iter()
            .map(|c| &c.multiplicity.0 * int(c.degree as i64))
            .sum()
    }
}

/// Recognises a subgroup of PSL(2,q) as one of the built-in small groups and
/// returns it with the image of each abstract element.
pub fn identify_subgroup(g: &Psl2, h: &[Psl2Elem]) -> Result<(SmallGroup, Vec<Psl2Elem>)> {
    let set: HashSet<Psl2Elem> = h.iter().copied().collect();
    if set.len() != h.len() || !set.contains(&g.identity()) {
        return Err(Error::NotASubgroup("repeated elements or missing identity".into()));
    }
    if h.len() as u64 > MAX_SMALL_ORDER {
        return Err(Error::UnsupportedShape(format!("order {} exceeds {MAX_SMALL_ORDER}", h.len())));
    }
    for x in h {
        for y in h {
            if !set.contains(&g.mul(x, y)) {
                return Err(Error::NotASubgroup("not closed under multiplication".into()));
            }
        }
    }
    let n = h.len() as u64;
    let order_of = |x: &Psl2Elem| g.order(x);
    let abelian = h.iter().all(|x| h.iter().all(|y| g.mul(x, y) == g.mul(y, x)));
    if abelian {
        let mut stats = BTreeMap::new();
        for x in h {
            *stats.entry(order_of(x)).or_insert(0usize) += 1;
        }
        let stats: Vec<(u64, usize)> = stats.into_iter().collect();
        for ty in abelian_types(n) {
            let model = SmallGroup::abelian(&ty);
            if model.order_statistics() != stats {
                continue;
            }
            let factors = match model.kind() {
                SmallKind::Abelian(f) => f.clone(),
                _ => unreachable!(),
            };
            let gens = abelian_basis(g, h, &factors)
                .ok_or_else(|| Error::Inconsistent("abelian basis search failed".into()))?;
            let images = model
                .elements()
                .iter()
                .map(|w| {
                    w.iter()
                        .zip(&gens)
                        .fold(g.identity(), |acc, (&e, x)| g.mul(&acc, &g.pow(x, e)))
                })
                .collect();
            return Ok((model, images));
        }
        return Err(Error::Inconsistent("abelian subgroup with no matching type".into()));
    }
    // nonabelian: needs a cyclic subgroup of index 2
    let half = n / 2;
    if n.is_multiple_of(2) {
        if let Some(x) = h.iter().find(|x| order_of(x) == half) {
            let cyc: HashSet<Psl2Elem> = (0..half).map(|k| g.pow(x, k)).collect();
            let xi = g.inv(x);
            if let Some(y) = h.iter().find(|y| !cyc.contains(y) && g.conjugate(x, y) == xi) {
                let y2 = g.mul(y, y);
                let model = if y2 == g.identity() {
                    Some(SmallGroup::dihedral(half))
                } else if half == 4 && y2 == g.pow(x, 2) {
                    Some(SmallGroup::quaternion8())
                } else {
                    None
                };
                if let Some(model) = model {
                    let images = model
                        .elements()
                        .iter()
                        .map(|w| g.mul(&g.pow(x, w[0]), &g.pow(y, w[1])))
                        .collect();
                    return Ok((model, images));
                }
            }
        }
    }
    Err(Error::UnsupportedShape(format!("nonabelian subgroup of order {n}")))
}

/// Generators `g_i` of orders `factors[i]` with `<g_1,...,g_k>` of full order.
fn abelian_basis(g: &Psl2, h: &[Psl2Elem], factors: &[u64]) -> Option<Vec<Psl2Elem>> {
    fn span(g: &Psl2, gens: &[Psl2Elem]) -> usize {
        crate::psl2::closure(g, gens).len()
    }
    fn go(g: &Psl2, h: &[Psl2Elem], factors: &[u64], acc: &mut Vec<Psl2Elem>) -> bool {
        let k = acc.len();
        if k == factors.len() {
            return true;
        }
        let target: u64 = factors[..=k].iter().product();
        for x in h {
            if g.order(x) != factors[k] {
                continue;
            }
            acc.push(*x);
            if span(g, acc) as u64 == target && go(g, h, factors, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::new();
    go(g, h, factors, &mut acc).then_some(acc)
}

/// Multiplicities `<lambda, xi_H>` of every irreducible `lambda` of `H` in the
/// restriction of the class function `xi_values` to `H`.
pub fn restrict_multiplicities(
    xi_values: &BTreeMap<ClassLabel, Cyclo>,
    subgroup: &[Psl2Elem],
    classes: &ClassTable,
) -> Result<Restriction> {
    let g = classes.group();
    let (model, images) = identify_subgroup(g, subgroup)?;
    let xi_inv: Vec<Cyclo> = images
        .iter()
        .map(|x| {
            let label = classes.class_of(&g.inv(x));
            xi_values
                .get(&label)
                .cloned()
                .ok_or_else(|| Error::Inconsistent(format!("no value at class {label}")))
        })
        .collect::<Result<_>>()?;
    let order = model.order() as i64;
    let constituents = model
        .irreducibles()
        .into_iter()
        .map(|lam| {
            let s: Cyclo = lam.values.iter().zip(&xi_inv).map(|(a, b)| a * b).sum();
            let m = s.scale(&rat(1, order)).expect_rational()?;
            Ok(Constituent { label: lam.label, degree: lam.degree, multiplicity: Exact(m) })
        })
        .collect::<Result<_>>()?;
    Ok(Restriction { shape: model.name(), order: model.order(), constituents })
}

/// `true` when the value is the rational integer `k`.
pub fn is_int(v: &Cyclo, k: i64) -> bool {
    v.as_rational().is_some_and(|r| r == int(k))
}
