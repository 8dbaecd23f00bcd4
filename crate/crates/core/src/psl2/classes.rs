//! Conjugacy classes with labels `1, c, d, a^l, b^m`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{check_q, group_order, Psl2, Psl2Elem};
use crate::arith::{gcd, is_prime};
use crate::error::{Error, Result};
use crate::field::FqElem;

/// Class label. `A(l)` is the class of `a^l` (split torus), `B(m)` of `b^m`
/// (nonsplit torus); `C`/`D` are the unipotent classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    One,
    C,
    D,
    A(u64),
    B(u64),
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::One => f.write_str("1"),
            ClassLabel::C => f.write_str("c"),
            ClassLabel::D => f.write_str("d"),
            ClassLabel::A(l) => write!(f, "a^{l}"),
            ClassLabel::B(m) => write!(f, "b^{m}"),
        }
    }
}

impl FromStr for ClassLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<ClassLabel> {
        let bad = || Error::Inconsistent(format!("bad class label {s:?}"));
        match s {
            "1" => Ok(ClassLabel::One),
            "c" => Ok(ClassLabel::C),
            "d" => Ok(ClassLabel::D),
            _ => {
                let (head, exp) = s.split_once('^').ok_or_else(bad)?;
                let e: u64 = exp.parse().map_err(|_| bad())?;
                match head {
                    "a" => Ok(ClassLabel::A(e)),
                    "b" => Ok(ClassLabel::B(e)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClassLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<ClassLabel, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassInfo {
    pub label: ClassLabel,
    pub rep: Psl2Elem,
    pub size: u64,
    pub order: u64,
}

/// Class labels, sizes and element orders for odd `q`, from the torus and
/// unipotent structure alone.
pub fn class_layout(q: u64) -> Result<Vec<(ClassLabel, u64, u64)>> {
    let (p, _) = check_q(q)?;
    if p == 2 {
        return Err(Error::UnsupportedQ(q));
    }
    let eps = if q % 4 == 1 { 1 } else { -1 };
    let (l_max, m_max) = if eps == 1 {
        ((q - 1) / 4, (q - 1) / 4)
    } else {
        ((q - 3) / 4, (q + 1) / 4)
    };
    let na = (q - 1) / 2;
    let nb = q.div_ceil(2);
    let mut out = vec![
        (ClassLabel::One, 1, 1),
        (ClassLabel::C, (q * q - 1) / 2, p),
        (ClassLabel::D, (q * q - 1) / 2, p),
    ];
    for l in 1..=l_max {
        let ord = na / gcd(l, na);
        let size = if ord == 2 { q * (q + 1) / 2 } else { q * (q + 1) };
        out.push((ClassLabel::A(l), size, ord));
    }
    for m in 1..=m_max {
        let ord = nb / gcd(m, nb);
        let size = if ord == 2 { q * (q - 1) / 2 } else { q * (q - 1) };
        out.push((ClassLabel::B(m), size, ord));
    }
    Ok(out)
}

/// Conjugacy classes of PSL(2,q) with representatives.
#[derive(Clone, Debug)]
pub struct ClassTable {
    group: Arc<Psl2>,
    classes: Vec<ClassInfo>,
    index: HashMap<ClassLabel, usize>,
    trace_keys: HashMap<FqElem, ClassLabel>,
}

fn structured_rep(g: &Psl2, label: ClassLabel) -> Psl2Elem {
    match label {
        ClassLabel::One => g.identity(),
        ClassLabel::C => g.upper_unipotent(FqElem::ONE),
        ClassLabel::D => g.upper_unipotent(g.first_nonsquare().expect("odd q")),
        ClassLabel::A(l) => g.pow(&g.split_generator(), l),
        ClassLabel::B(m) => g.pow(&g.nonsplit_generator(), m),
    }
}

impl ClassTable {
    fn from_classes(group: Arc<Psl2>, classes: Vec<ClassInfo>) -> Result<ClassTable> {
        let index = classes.iter().enumerate().map(|(i, c)| (c.label, i)).collect();
        let mut trace_keys = HashMap::new();
        for c in &classes {
            if matches!(c.label, ClassLabel::A(_) | ClassLabel::B(_)) {
                let key = trace_key(&group, &c.rep);
                if trace_keys.insert(key, c.label).is_some() {
                    return Err(Error::Inconsistent(format!(
                        "two semisimple classes share trace key at {}",
                        c.label
                    )));
                }
            }
        }
        let table = ClassTable { group, classes, index, trace_keys };
        let total: u64 = table.classes.iter().map(|c| c.size).sum();
        if total != table.group_order() {
            return Err(Error::Inconsistent(format!(
                "class sizes sum to {total}, expected {}",
                table.group_order()
            )));
        }
        Ok(table)
    }

    /// Structured table for odd q (no element enumeration).
    pub fn structured(q: u64) -> Result<ClassTable> {
        let layout = class_layout(q)?;
        let g = Psl2::new(q)?;
        let classes = layout
            .into_iter()
            .map(|(label, size, order)| ClassInfo { label, rep: structured_rep(&g, label), size, order })
            .collect();
        ClassTable::from_classes(g, classes)
    }

    /// Table read off the brute-force orbit partition.
    pub fn brute_force(q: u64, bound: u64) -> Result<ClassTable> {
        let bf = BruteForceClasses::new(q, bound)?;
        let classes = bf
            .orbits
            .iter()
            .zip(&bf.labels)
            .map(|(orbit, &label)| ClassInfo {
                label,
                rep: bf.elements[orbit[0]],
                size: orbit.len() as u64,
                order: bf.orders[orbit[0]],
            })
            .collect::<Vec<_>>();
        let mut classes = classes;
        classes.sort_by_key(|c| c.label);
        ClassTable::from_classes(bf.group, classes)
    }

    pub fn group(&self) -> &Arc<Psl2> {
        &self.group
    }

    pub fn q(&self) -> u64 {
        self.group.q()
    }

    pub fn epsilon(&self) -> Option<i64> {
        self.group.epsilon()
    }

    pub fn group_order(&self) -> u64 {
        self.group.order_of_group()
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn labels(&self) -> Vec<ClassLabel> {
        self.classes.iter().map(|c| c.label).collect()
    }

    pub fn get(&self, label: ClassLabel) -> Option<&ClassInfo> {
        self.index.get(&label).map(|&i| &self.classes[i])
    }

    pub fn position(&self, label: ClassLabel) -> Option<usize> {
        self.index.get(&label).copied()
    }

    /// The unique class of involutions (odd q).
    pub fn involution_class(&self) -> Option<ClassLabel> {
        let mut it = self.classes.iter().filter(|c| c.order == 2);
        match (it.next(), it.next()) {
            (Some(c), None) => Some(c.label),
            _ => None,
        }
    }

    /// Class of `x` from its trace, and for unipotent elements from the
    /// square class of the off-diagonal invariant.
    pub fn class_of(&self, x: &Psl2Elem) -> ClassLabel {
        let g = &self.group;
        let k = g.field();
        if *x == g.identity() {
            return ClassLabel::One;
        }
        let two = k.from_int(2);
        let t = g.trace(x);
        if t == two || t == k.neg(two) {
            if g.p() == 2 {
                return ClassLabel::C;
            }
            let m = if t == two { x.entries() } else { x.entries().map(|e| k.neg(e)) };
            let invariant = if !m[1].is_zero() { m[1] } else { k.neg(m[2]) };
            return if k.is_square(invariant).expect("odd q") {
                ClassLabel::C
            } else {
                ClassLabel::D
            };
        }
        *self
            .trace_keys
            .get(&trace_key(g, x))
            .expect("every semisimple trace belongs to a torus class")
    }

    /// Image of each class under `x -> x^k`.
    pub fn power_map(&self, k: i64) -> BTreeMap<ClassLabel, ClassLabel> {
        self.classes
            .iter()
            .map(|c| (c.label, self.power_label(c.label, k)))
            .collect()
    }

    pub fn power_label(&self, label: ClassLabel, k: i64) -> ClassLabel {
        let c = self.get(label).expect("label from this table");
        let e = k.rem_euclid(c.order as i64) as u64;
        self.class_of(&self.group.pow(&c.rep, e))
    }

    /// Classes whose elements are conjugate to their inverses.
    pub fn real_classes(&self) -> BTreeSet<ClassLabel> {
        self.classes
            .iter()
            .filter(|c| self.class_of(&self.group.inv(&c.rep)) == c.label)
            .map(|c| c.label)
            .collect()
    }

    pub fn centralizer_order(&self, label: ClassLabel) -> u64 {
        self.group_order() / self.get(label).expect("label from this table").size
    }

    /// Number of classes of elements of order exactly `r`.
    pub fn count_with_order(&self, r: u64) -> u64 {
        self.classes.iter().filter(|c| c.order == r).count() as u64
    }

    /// Compares against the brute-force orbit partition: sizes, element
    /// orders, and that `class_of` is constant on every orbit.
    pub fn cross_check(&self, bound: u64) -> Result<()> {
        let bf = BruteForceClasses::new(self.q(), bound)?;
        if bf.orbits.len() != self.classes.len() {
            return Err(Error::Inconsistent(format!(
                "{} orbits vs {} classes",
                bf.orbits.len(),
                self.classes.len()
            )));
        }
        for (orbit, &label) in bf.orbits.iter().zip(&bf.labels) {
            let info = self.get(label).ok_or_else(|| {
                Error::Inconsistent(format!("orbit label {label} missing from table"))
            })?;
            if info.size != orbit.len() as u64 || info.order != bf.orders[orbit[0]] {
                return Err(Error::Inconsistent(format!("class {label} size/order mismatch")));
            }
            if let Some(&bad) = orbit.iter().find(|&&i| self.class_of(&bf.elements[i]) != label) {
                return Err(Error::Inconsistent(format!(
                    "class_of disagrees with orbit {label} at {:?}",
                    bf.elements[bad]
                )));
            }
        }
        Ok(())
    }
}

fn trace_key(g: &Psl2, x: &Psl2Elem) -> FqElem {
    let k = g.field();
    let t = g.trace(x);
    t.min(k.neg(t))
}

/// Conjugacy classes for any supported q: structured for odd q (checked
/// against the orbit partition when `q <= bound`), brute force for even q.
pub fn conjugacy_classes(q: u64, bound: u64) -> Result<ClassTable> {
    let (p, _) = check_q(q)?;
    if p == 2 {
        return ClassTable::brute_force(q, bound);
    }
    let table = ClassTable::structured(q)?;
    if q <= bound {
        table.cross_check(bound)?;
    }
    Ok(table)
}

/// Number of classes of elements of odd prime order `r`: 2 if `r = p`,
/// else `(r-1)/2`.
pub fn count_classes_of_order_r(q: u64, r: u64) -> Result<u64> {
    let (p, _) = check_q(q)?;
    let order = group_order(q)?;
    if r == 2 || !is_prime(r) || order % r != 0 {
        return Err(Error::NotADivisor { r, order });
    }
    Ok(if r == p { 2 } else { (r - 1) / 2 })
}

/// Orbit partition of the enumerated group under conjugation.
#[derive(Debug)]
pub struct BruteForceClasses {
    group: Arc<Psl2>,
    elements: Vec<Psl2Elem>,
    orders: Vec<u64>,
    lookup: Vec<u32>,
    orbit_of: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    labels: Vec<ClassLabel>,
}

impl BruteForceClasses {
    pub fn new(q: u64, bound: u64) -> Result<BruteForceClasses> {
        let g = Psl2::new(q)?;
        let elements = g.enumerate(bound)?;
        let mut lookup = vec![u32::MAX; (q as usize).pow(4)];
        for (i, e) in elements.iter().enumerate() {
            lookup[g.packed_index(e)] = i as u32;
        }
        let orders: Vec<u64> = elements.iter().map(|e| g.order(e)).collect();
        let gens = g.generators();
        let mut orbit_of = vec![usize::MAX; elements.len()];
        let mut orbits = Vec::new();
        for start in 0..elements.len() {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut orbit = vec![start];
            orbit_of[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for s in &gens {
                    let y = g.conjugate(&elements[i], s);
                    let j = lookup[g.packed_index(&y)] as usize;
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = id;
                        orbit.push(j);
                        queue.push_back(j);
                    }
                }
            }
            orbits.push(orbit);
        }
        // label each orbit by the structured representative it contains
        let mut labels = vec![None; orbits.len()];
        let mut assign = |label: ClassLabel, rep: Psl2Elem| -> Result<()> {
            let idx = lookup[g.packed_index(&rep)] as usize;
            let o = orbit_of[idx];
            if labels[o].is_none() {
                labels[o] = Some(label);
                Ok(())
            } else {
                Err(Error::Inconsistent(format!("{label} lands in an already labelled orbit")))
            }
        };
        assign(ClassLabel::One, g.identity())?;
        assign(ClassLabel::C, g.upper_unipotent(FqElem::ONE))?;
        if let Some(nu) = g.first_nonsquare() {
            assign(ClassLabel::D, g.upper_unipotent(nu))?;
        }
        let (na, nb, l_max, m_max) = torus_ranges(q);
        let _ = (na, nb);
        for l in 1..=l_max {
            assign(ClassLabel::A(l), g.pow(&g.split_generator(), l))?;
        }
        for m in 1..=m_max {
            assign(ClassLabel::B(m), g.pow(&g.nonsplit_generator(), m))?;
        }
        let labels = labels
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Inconsistent("unlabelled conjugacy orbit".into()))?;
        Ok(BruteForceClasses { group: g, elements, orders, lookup, orbit_of, orbits, labels })
    }

    pub fn group(&self) -> &Arc<Psl2> {
        &self.group
    }

    pub fn elements(&self) -> &[Psl2Elem] {
        &self.elements
    }

    pub fn element_order(&self, x: &Psl2Elem) -> u64 {
        self.orders[self.lookup[self.group.packed_index(x)] as usize]
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    /// Label of the orbit containing `x`.
    pub fn label_of(&self, x: &Psl2Elem) -> ClassLabel {
        let i = self.lookup[self.group.packed_index(x)] as usize;
        self.labels[self.orbit_of[i]]
    }

    pub fn orbit_size(&self, label: ClassLabel) -> Option<u64> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|o| self.orbits[o].len() as u64)
    }

    /// Power map computed on orbit members directly.
    pub fn power_map(&self, k: u64) -> BTreeMap<ClassLabel, ClassLabel> {
        self.orbits
            .iter()
            .zip(&self.labels)
            .map(|(orbit, &l)| (l, self.label_of(&self.group.pow(&self.elements[orbit[0]], k))))
            .collect()
    }

    /// `|C_G(x)|` by counting commuting elements.
    pub fn centralizer_order(&self, x: &Psl2Elem) -> u64 {
        let g = &self.group;
        self.elements
            .iter()
            .filter(|y| g.mul(x, y) == g.mul(y, x))
            .count() as u64
    }

    /// Representative of the orbit with the given label.
    pub fn representative(&self, label: ClassLabel) -> Option<Psl2Elem> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|o| self.elements[self.orbits[o][0]])
    }
}

/// (order of a, order of b, number of a-classes, number of b-classes).
fn torus_ranges(q: u64) -> (u64, u64, u64, u64) {
    if q.is_multiple_of(2) {
        (q - 1, q + 1, (q - 2) / 2, q / 2)
    } else if q % 4 == 1 {
        ((q - 1) / 2, q.div_ceil(2), (q - 1) / 4, (q - 1) / 4)
    } else {
        ((q - 1) / 2, q.div_ceil(2), (q - 3) / 4, (q + 1) / 4)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psl2::DEFAULT_BRUTE_BOUND;

    const ODD_SMALL: [u64; 6] = [5, 7, 9, 11, 13, 25];

    #[test]
    fn psl27_classes() {
        let t = conjugacy_classes(7, DEFAULT_BRUTE_BOUND).unwrap();
        let orders: Vec<u64> = t.classes().iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![1, 7, 7, 3, 4, 2]);
        assert_eq!(t.classes().iter().map(|c| c.size).sum::<u64>(), 168);
        let mut sorted = orders.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3, 4, 7, 7]);
    }

    #[test]
    fn class_counts_from_orbits() {
        assert_eq!(BruteForceClasses::new(5, 27).unwrap().orbit_count(), 5);
        assert_eq!(BruteForceClasses::new(9, 27).unwrap().orbit_count(), 7);
        assert_eq!(ClassTable::structured(9).unwrap().classes().len(), 7);
        assert_eq!(BruteForceClasses::new(4, 27).unwrap().orbit_count(), 5);
    }

    #[test]
    fn structured_agrees_with_brute_force() {
        for q in ODD_SMALL.into_iter().chain([17, 19, 23, 27]) {
            let t = ClassTable::structured(q).unwrap();
            t.cross_check(DEFAULT_BRUTE_BOUND).unwrap();
            assert!(t.involution_class().is_some(), "q={q}");
        }
    }

    #[test]
    fn even_q_brute_force_tables() {
        for q in [4u64, 8, 16] {
            let t = conjugacy_classes(q, DEFAULT_BRUTE_BOUND).unwrap();
            assert_eq!(t.classes().len() as u64, q + 1);
            assert_eq!(t.classes().iter().map(|c| c.size).sum::<u64>(), t.group_order());
            assert_eq!(t.epsilon(), None);
        }
        assert!(matches!(conjugacy_classes(32, 27), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn class_of_examples() {
        let t = ClassTable::structured(7).unwrap();
        let g = t.group().clone();
        assert_eq!(t.class_of(&g.identity()), ClassLabel::One);
        assert_eq!(t.class_of(&g.upper_unipotent(FqElem::ONE)), ClassLabel::C);
        let t13 = ClassTable::structured(13).unwrap();
        let g13 = t13.group().clone();
        assert_eq!(t13.class_of(&g13.pow(&g13.split_generator(), 2)), ClassLabel::A(2));
    }

    #[test]
    fn power_maps_q7() {
        let t = ClassTable::structured(7).unwrap();
        let id = t.power_map(1);
        assert!(id.iter().all(|(a, b)| a == b));
        let sq = t.power_map(2);
        let four = t.classes().iter().find(|c| c.order == 4).unwrap().label;
        assert_eq!(t.get(sq[&four]).unwrap().order, 2);
        let seventh = t.power_map(7);
        assert_eq!(seventh[&ClassLabel::C], ClassLabel::One);
        assert_eq!(seventh[&ClassLabel::D], ClassLabel::One);
    }

    #[test]
    fn power_map_composition_brute_force() {
        for q in [5u64, 7, 9, 11, 13] {
            let bf = BruteForceClasses::new(q, DEFAULT_BRUTE_BOUND).unwrap();
            let t = ClassTable::structured(q).unwrap();
            let exponent = t.classes().iter().fold(1, |acc, c| crate::arith::lcm(acc, c.order));
            for j in 1..=6u64 {
                let pj = bf.power_map(j);
                assert_eq!(pj, t.power_map(j as i64), "q={q} j={j}");
                for k in 1..=6u64 {
                    let pk = bf.power_map(k);
                    let pkj = bf.power_map((k * j) % exponent);
                    for (l, img) in &pj {
                        assert_eq!(pk[img], pkj[l], "q={q} j={j} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn real_classes_q7() {
        let t = ClassTable::structured(7).unwrap();
        let real = t.real_classes();
        assert!(!real.contains(&ClassLabel::C));
        assert!(!real.contains(&ClassLabel::D));
        assert!(real.contains(&ClassLabel::One));
        assert!(real.contains(&t.involution_class().unwrap()));
        assert_eq!(real.len(), 4);
    }

    #[test]
    fn counts_of_order_r() {
        assert_eq!(count_classes_of_order_r(7, 7), Ok(2));
        assert_eq!(count_classes_of_order_r(7, 3), Ok(1));
        assert_eq!(count_classes_of_order_r(9, 5), Ok(2));
        assert_eq!(count_classes_of_order_r(27, 13), Ok(6));
        assert!(matches!(count_classes_of_order_r(7, 5), Err(Error::NotADivisor { .. })));
    }

    #[test]
    fn centralizers_q7() {
        let t = ClassTable::structured(7).unwrap();
        let bf = BruteForceClasses::new(7, DEFAULT_BRUTE_BOUND).unwrap();
        assert_eq!(t.centralizer_order(ClassLabel::One), 168);
        let s = t.involution_class().unwrap();
        assert_eq!(t.centralizer_order(s), 8);
        assert_eq!(bf.centralizer_order(&t.get(s).unwrap().rep), 8);
        assert_eq!(t.centralizer_order(ClassLabel::C), 7);
        assert_eq!(bf.centralizer_order(&t.get(ClassLabel::C).unwrap().rep), 7);
    }

    #[test]
    fn label_text_round_trip() {
        for l in [ClassLabel::One, ClassLabel::C, ClassLabel::D, ClassLabel::A(3), ClassLabel::B(12)] {
            assert_eq!(l.to_string().parse::<ClassLabel>().unwrap(), l);
        }
        assert!("e^2".parse::<ClassLabel>().is_err());
    }
}
