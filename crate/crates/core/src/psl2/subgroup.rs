//! Brute-force search for small subgroups of a given isomorphism type.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BruteForceClasses, Psl2, Psl2Elem};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubgroupShape {
    Cyclic(u64),
    /// Dihedral group of the given order (at least 6).
    Dihedral(u64),
    FourGroup,
    ElementaryAbelian8,
    C4xC2,
    Quaternion8,
}

impl SubgroupShape {
    pub fn order(&self) -> u64 {
        match *self {
            SubgroupShape::Cyclic(n) | SubgroupShape::Dihedral(n) => n,
            SubgroupShape::FourGroup => 4,
            _ => 8,
        }
    }
}

impl fmt::Display for SubgroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupShape::Cyclic(n) => write!(f, "C{n}"),
            SubgroupShape::Dihedral(n) => write!(f, "D{n}"),
            SubgroupShape::FourGroup => f.write_str("C2xC2"),
            SubgroupShape::ElementaryAbelian8 => f.write_str("C2xC2xC2"),
            SubgroupShape::C4xC2 => f.write_str("C4xC2"),
            SubgroupShape::Quaternion8 => f.write_str("Q8"),
        }
    }
}

/// Subgroup generated by `gens`.
pub fn closure(g: &Psl2, gens: &[Psl2Elem]) -> Vec<Psl2Elem> {
    let mut seen: HashSet<Psl2Elem> = HashSet::from([g.identity()]);
    let mut out = vec![g.identity()];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        for s in gens {
            let y = g.mul(&x, s);
            if seen.insert(y) {
                out.push(y);
            }
        }
        i += 1;
    }
    out
}

/// Finds a subgroup of PSL(2,q) isomorphic to `shape`, returning its elements.
/// `Ok(None)` means an exhaustive search found none.
pub fn find_subgroup(q: u64, shape: SubgroupShape, bound: u64) -> Result<Option<Vec<Psl2Elem>>> {
    let bf = BruteForceClasses::new(q, bound)?;
    let g = bf.group().clone();
    let elems = bf.elements();
    let commute = |x: &Psl2Elem, y: &Psl2Elem| g.mul(x, y) == g.mul(y, x);
    // first generators only need to range over class representatives
    let reps_of_order = |n: u64| -> Vec<Psl2Elem> {
        let mut seen = HashSet::new();
        elems
            .iter()
            .filter(|x| bf.element_order(x) == n && seen.insert(bf.label_of(x)))
            .copied()
            .collect()
    };
    let bf_ref = &bf;
    let of_order = |n: u64| elems.iter().filter(move |x| bf_ref.element_order(x) == n);
    let found = |gens: &[Psl2Elem]| {
        let h = closure(&g, gens);
        (h.len() as u64 == shape.order()).then_some(h)
    };
    match shape {
        SubgroupShape::Cyclic(n) => Ok(reps_of_order(n).first().map(|x| closure(&g, &[*x]))),
        SubgroupShape::Dihedral(n) => {
            if n < 6 || n % 2 == 1 {
                return Ok(None);
            }
            for x in reps_of_order(n / 2) {
                let xi = g.inv(&x);
                for y in of_order(2) {
                    if g.conjugate(&x, y) == xi {
                        if let Some(h) = found(&[x, *y]) {
                            return Ok(Some(h));
                        }
                    }
                }
            }
            Ok(None)
        }
        SubgroupShape::FourGroup => {
            for x in reps_of_order(2) {
                for y in of_order(2) {
                    if *y != x && commute(&x, y) {
                        return Ok(found(&[x, *y]));
                    }
                }
            }
            Ok(None)
        }
        SubgroupShape::ElementaryAbelian8 => {
            for x in reps_of_order(2) {
                let cent: Vec<Psl2Elem> =
                    of_order(2).filter(|y| **y != x && commute(&x, y)).copied().collect();
                for (i, y) in cent.iter().enumerate() {
                    let xy = g.mul(&x, y);
                    for z in &cent[i + 1..] {
                        if *z != xy && commute(y, z) {
                            if let Some(h) = found(&[x, *y, *z]) {
                                return Ok(Some(h));
                            }
                        }
                    }
                }
            }
            Ok(None)
        }
        SubgroupShape::C4xC2 => {
            for x in reps_of_order(4) {
                let x2 = g.mul(&x, &x);
                for y in of_order(2) {
                    if *y != x2 && commute(&x, y) {
                        if let Some(h) = found(&[x, *y]) {
                            return Ok(Some(h));
                        }
                    }
                }
            }
            Ok(None)
        }
        SubgroupShape::Quaternion8 => {
            for x in reps_of_order(4) {
                let x2 = g.mul(&x, &x);
                let xi = g.inv(&x);
                for y in of_order(4) {
                    if g.mul(y, y) == x2 && g.conjugate(&x, y) == xi {
                        if let Some(h) = found(&[x, *y]) {
                            return Ok(Some(h));
                        }
                    }
                }
            }
            Ok(None)
        }
    }
}
