//! The groups PSL(2,q) as explicit 2x2 matrices modulo +-1.

mod classes;
mod subgroup;

pub use classes::{
    class_layout, conjugacy_classes, count_classes_of_order_r, BruteForceClasses, ClassInfo,
    ClassLabel, ClassTable,
};
pub use subgroup::{closure, find_subgroup, SubgroupShape};

use std::sync::Arc;

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, FqElem};

/// Default largest q for which element lists are materialised (|G| = 9828 at 27).
pub const DEFAULT_BRUTE_BOUND: u64 = 27;

/// Environment override for the brute-force bound.
pub const BRUTE_BOUND_ENV: &str = "ZGU_BRUTE_BOUND";

pub fn brute_bound_from_env() -> u64 {
    std::env::var(BRUTE_BOUND_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BRUTE_BOUND)
}

/// Splits a supported q into (p, f).
pub fn check_q(q: u64) -> Result<(u64, u32)> {
    match prime_power(q) {
        Some((p, f)) if q >= 4 => Ok((p, f)),
        _ => Err(Error::UnsupportedQ(q)),
    }
}

/// `|PSL(2,q)| = q(q^2-1)/gcd(2,q-1)`.
pub fn group_order(q: u64) -> Result<u64> {
    let (p, _) = check_q(q)?;
    let full = (q - 1) * q * (q + 1);
    Ok(if p == 2 { full } else { full / 2 })
}

/// A matrix `(a, b; c, d)` of determinant 1, stored as the canonical member
/// of `{M, -M}`: the first nonzero entry in scan order lies in the first half
/// of the field enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Psl2Elem {
    m: [FqElem; 4],
}

impl Psl2Elem {
    pub fn entries(&self) -> [FqElem; 4] {
        self.m
    }
}

/// PSL(2,q) together with the fixed torus and unipotent generators.
#[derive(Debug)]
pub struct Psl2 {
    q: u64,
    p: u64,
    field: FieldSpec,
    identity: Psl2Elem,
    split: Psl2Elem,
    nonsplit: Psl2Elem,
    nonsquare: Option<FqElem>,
}

impl Psl2 {
    pub fn new(q: u64) -> Result<Arc<Psl2>> {
        let (p, f) = check_q(q)?;
        let field = FieldSpec::build(p, f)?;
        let one = FqElem::ONE;
        let zero = FqElem::ZERO;
        let mut g = Psl2 {
            q,
            p,
            identity: Psl2Elem { m: [one, zero, zero, one] },
            split: Psl2Elem { m: [one, zero, zero, one] },
            nonsplit: Psl2Elem { m: [one, zero, zero, one] },
            nonsquare: None,
            field,
        };
        g.identity = g.canonical([one, zero, zero, one]);
        let alpha = g.field.primitive_element();
        let alpha_inv = g.field.inv(alpha)?;
        g.split = g.canonical([alpha, zero, zero, alpha_inv]);
        g.nonsquare = if p == 2 {
            None
        } else {
            g.field.elements().find(|&x| !g.field.is_square(x).unwrap_or(true))
        };
        g.nonsplit = g.find_nonsplit_generator()?;
        Ok(Arc::new(g))
    }

    fn find_nonsplit_generator(&self) -> Result<Psl2Elem> {
        let k = &self.field;
        let target = if self.p == 2 { self.q + 1 } else { self.q.div_ceil(2) };
        for t in k.elements() {
            // x^2 - t x + 1 irreducible iff it has no root
            let has_root = k.elements().any(|x| {
                let v = k.add(k.sub(k.mul(x, x), k.mul(t, x)), FqElem::ONE);
                v.is_zero()
            });
            if has_root {
                continue;
            }
            let m = self.canonical([FqElem::ZERO, k.neg(FqElem::ONE), FqElem::ONE, t]);
            if self.order(&m) == target {
                return Ok(m);
            }
        }
        Err(Error::Inconsistent(format!("no nonsplit torus generator for q={}", self.q)))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn order_of_group(&self) -> u64 {
        group_order(self.q).expect("validated at construction")
    }

    /// `q = eps (mod 4)` for odd q.
    pub fn epsilon(&self) -> Option<i64> {
        match self.q % 4 {
            1 => Some(1),
            3 => Some(-1),
            _ => None,
        }
    }

    pub fn identity(&self) -> Psl2Elem {
        self.identity
    }

    /// `diag(alpha, alpha^-1)` for the primitive element alpha.
    pub fn split_generator(&self) -> Psl2Elem {
        self.split
    }

    /// Companion matrix `(0, -1; 1, t)` generating a nonsplit torus.
    pub fn nonsplit_generator(&self) -> Psl2Elem {
        self.nonsplit
    }

    /// The first non-square of the field (odd q only).
    pub fn first_nonsquare(&self) -> Option<FqElem> {
        self.nonsquare
    }

    /// `(1, x; 0, 1)`.
    pub fn upper_unipotent(&self, x: FqElem) -> Psl2Elem {
        self.canonical([FqElem::ONE, x, FqElem::ZERO, FqElem::ONE])
    }

    pub fn lower_unipotent(&self, x: FqElem) -> Psl2Elem {
        self.canonical([FqElem::ONE, FqElem::ZERO, x, FqElem::ONE])
    }

    /// Canonical representative of `+-M`; `M` must have determinant 1.
    pub fn canonical(&self, m: [FqElem; 4]) -> Psl2Elem {
        let k = &self.field;
        if self.p != 2 {
            if let Some(&lead) = m.iter().find(|x| !x.is_zero()) {
                if !k.in_first_half(lead) {
                    return Psl2Elem { m: m.map(|x| k.neg(x)) };
                }
            }
        }
        Psl2Elem { m }
    }

    /// Validating constructor from raw entries.
    pub fn from_entries(&self, m: [FqElem; 4]) -> Result<Psl2Elem> {
        let k = &self.field;
        let det = k.sub(k.mul(m[0], m[3]), k.mul(m[1], m[2]));
        if det != FqElem::ONE {
            return Err(Error::Inconsistent("matrix determinant is not 1".into()));
        }
        Ok(self.canonical(m))
    }

    pub fn mul(&self, x: &Psl2Elem, y: &Psl2Elem) -> Psl2Elem {
        let k = &self.field;
        let [a, b, c, d] = x.m;
        let [e, f, g, h] = y.m;
        self.canonical([
            k.add(k.mul(a, e), k.mul(b, g)),
            k.add(k.mul(a, f), k.mul(b, h)),
            k.add(k.mul(c, e), k.mul(d, g)),
            k.add(k.mul(c, f), k.mul(d, h)),
        ])
    }

    pub fn inv(&self, x: &Psl2Elem) -> Psl2Elem {
        let k = &self.field;
        let [a, b, c, d] = x.m;
        self.canonical([d, k.neg(b), k.neg(c), a])
    }

    pub fn pow(&self, x: &Psl2Elem, mut e: u64) -> Psl2Elem {
        let mut acc = self.identity;
        let mut base = *x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `g x g^-1`.
    pub fn conjugate(&self, x: &Psl2Elem, g: &Psl2Elem) -> Psl2Elem {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    /// Element order by repeated multiplication.
    pub fn order(&self, x: &Psl2Elem) -> u64 {
        let mut y = *x;
        let mut n = 1;
        while y != self.identity {
            y = self.mul(&y, x);
            n += 1;
        }
        n
    }

    pub fn trace(&self, x: &Psl2Elem) -> FqElem {
        self.field.add(x.m[0], x.m[3])
    }

    /// Dense index used for lookup tables (`< q^4`).
    pub fn packed_index(&self, x: &Psl2Elem) -> usize {
        let q = self.q as usize;
        x.m.iter()
            .rev()
            .fold(0usize, |acc, e| acc * q + e.index() as usize)
    }

    /// Unipotent generators of SL(2,q) over an additive basis of the field.
    pub fn generators(&self) -> Vec<Psl2Elem> {
        let k = &self.field;
        let f = k.f() as usize;
        (0..f)
            .flat_map(|i| {
                let mut coeffs = vec![0u32; f];
                coeffs[i] = 1;
                let x = k.from_coeffs(&coeffs);
                [self.upper_unipotent(x), self.lower_unipotent(x)]
            })
            .collect()
    }

    /// Every element of the group, in canonical form.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<Psl2Elem>> {
        if self.q > bound {
            return Err(Error::BoundExceeded { q: self.q, bound });
        }
        let k = &self.field;
        let mut seen = vec![false; (self.q as usize).pow(4)];
        let mut out = Vec::with_capacity(self.order_of_group() as usize);
        let mut push = |m: [FqElem; 4], out: &mut Vec<Psl2Elem>| {
            let e = self.canonical(m);
            let idx = self.packed_index(&e);
            if !seen[idx] {
                seen[idx] = true;
                out.push(e);
            }
        };
        for a in k.elements() {
            for b in k.elements() {
                for c in k.elements() {
                    if a.is_zero() {
                        // bc = -1
                        if b.is_zero() || k.mul(b, c) != k.neg(FqElem::ONE) {
                            continue;
                        }
                        for d in k.elements() {
                            push([a, b, c, d], &mut out);
                        }
                    } else {
                        let d = k.mul(k.add(FqElem::ONE, k.mul(b, c)), k.inv(a)?);
                        push([a, b, c, d], &mut out);
                    }
                }
            }
        }
        if out.len() as u64 != self.order_of_group() {
            return Err(Error::Inconsistent(format!(
                "enumerated {} elements, expected {}",
                out.len(),
                self.order_of_group()
            )));
        }
        Ok(out)
    }
}
