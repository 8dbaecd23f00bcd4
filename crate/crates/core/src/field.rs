//! Finite fields GF(p^f) with a deterministic choice of modulus.
//!
//! An element is stored as its packed coefficient index
//! `c_0 + c_1 p + ... + c_{f-1} p^{f-1}` over the power basis of the
//! modulus. The packing is a bijection onto `0..q`, so index order is the
//! element enumeration order (constant term fastest-varying) and equality
//! of indices is coefficient-wise equality.

use crate::arith::{is_prime, prime_divisors};
use crate::error::{Error, Result};

/// Largest field order served by table-driven multiplication.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    f: u32,
    q: u32,
    /// Monic modulus, constant term first, length `f + 1`.
    modulus: Vec<u32>,
    primitive: FqElem,
    exp: Vec<u32>,
    log: Vec<u32>,
}

// Polynomials over Z/p, constant term first.

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = crate::arith::pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin-style test: a monic `g` of degree `f` is irreducible iff it shares
/// no factor with `x^(p^k) - x` for `1 <= k <= f/2`.
pub(crate) fn is_irreducible(g: &[u64], p: u64) -> bool {
    let f = g.len() - 1;
    if f == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut xpk = x.clone();
    for _ in 1..=f / 2 {
        xpk = poly_powmod(&xpk, p, g, p);
        let mut diff = xpk.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        if poly_gcd(g, &diff, p).len() > 1 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible of degree `f`, comparing
/// coefficient tuples `(c_0, c_1, ..., c_{f-1})` with `c_0` most significant.
fn smallest_irreducible(p: u64, f: u32) -> Vec<u64> {
    let f = f as usize;
    let mut coeffs = vec![0u64; f];
    loop {
        let mut g = coeffs.clone();
        g.push(1);
        if is_irreducible(&g, p) {
            return g;
        }
        // Increment with c_{f-1} fastest so that c_0 is most significant.
        let mut i = f;
        loop {
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            assert!(i > 0, "an irreducible polynomial always exists");
        }
    }
}

impl FieldSpec {
    /// Builds GF(p^f) with the lexicographically smallest monic irreducible
    /// modulus (for `f = 1` this is `x`).
    pub fn build(p: u64, f: u32) -> Result<FieldSpec> {
        if p < 2 || f < 1 {
            return Err(Error::InvalidField { p, f });
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = p
            .checked_pow(f)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(Error::FieldTooLarge(p.saturating_pow(f)))?;
        let modulus = smallest_irreducible(p, f);
        let mut field = FieldSpec {
            p: p as u32,
            f,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            primitive: FqElem::ONE,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.primitive = field.search_primitive();
        field.build_tables();
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn to_poly(&self, x: FqElem) -> Vec<u64> {
        let mut v = self.coeffs(x).into_iter().map(u64::from).collect();
        trim(&mut v);
        v
    }

    fn pack_poly(&self, v: &[u64]) -> FqElem {
        let mut idx = 0u64;
        for &c in v.iter().rev() {
            idx = idx * self.p as u64 + c;
        }
        FqElem(idx as u32)
    }

    fn modulus_poly(&self) -> Vec<u64> {
        self.modulus.iter().map(|&c| c as u64).collect()
    }

    fn poly_mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let m = self.modulus_poly();
        let r = poly_mulmod(&self.to_poly(a), &self.to_poly(b), &m, self.p as u64);
        self.pack_poly(&r)
    }

    fn poly_pow(&self, a: FqElem, e: u64) -> FqElem {
        let m = self.modulus_poly();
        let r = poly_powmod(&self.to_poly(a), e, &m, self.p as u64);
        self.pack_poly(&r)
    }

    fn search_primitive(&self) -> FqElem {
        let n = self.q as u64 - 1;
        let primes = prime_divisors(n);
        (1..self.q)
            .map(FqElem)
            .find(|&x| primes.iter().all(|&r| self.poly_pow(x, n / r) != FqElem::ONE))
            .expect("the multiplicative group is cyclic")
    }

    fn build_tables(&mut self) {
        let n = self.q as usize - 1;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![0u32; self.q as usize];
        let mut x = FqElem::ONE;
        for i in 0..n {
            exp.push(x.0);
            log[x.0 as usize] = i as u32;
            x = self.poly_mul(x, self.primitive);
        }
        self.exp = exp;
        self.log = log;
    }

    /// Coefficients of `x` over the power basis, constant term first.
    pub fn coeffs(&self, x: FqElem) -> Vec<u32> {
        let mut idx = x.0;
        (0..self.f)
            .map(|_| {
                let c = idx % self.p;
                idx /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FqElem {
        let v: Vec<u64> = coeffs.iter().map(|&c| (c % self.p) as u64).collect();
        self.pack_poly(&v)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elem(&self, index: u32) -> FqElem {
        assert!(index < self.q, "index out of range");
        FqElem(index)
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.f == 1 {
            return FqElem((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.f {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FqElem(out)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        if self.f == 1 {
            return FqElem((self.p - a.0) % self.p);
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.f {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FqElem(out)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() || b.is_zero() {
            return FqElem::ZERO;
        }
        let n = self.q - 1;
        let e = (self.log[a.0 as usize] + self.log[b.0 as usize]) % n;
        FqElem(self.exp[e as usize])
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        let e = (n - self.log[a.0 as usize]) % n;
        Ok(FqElem(self.exp[e as usize]))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem::ONE;
        }
        if a.is_zero() {
            return FqElem::ZERO;
        }
        let n = (self.q - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        FqElem(self.exp[k as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FqElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Ok(n / crate::arith::gcd(n, l))
    }

    /// The first element in enumeration order generating the multiplicative group.
    pub fn primitive_element(&self) -> FqElem {
        self.primitive
    }

    /// Whether `x` is a square; zero counts as a square.
    pub fn is_square(&self, x: FqElem) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::OddFieldRequired);
        }
        if x.is_zero() {
            return Ok(true);
        }
        Ok(self.pow(x, (self.q as u64 - 1) / 2) == FqElem::ONE)
    }

    /// Whether `x` sits in the first half of the enumeration relative to `-x`.
    /// Exactly one of `x`, `-x` does when `q` is odd and `x != 0`.
    pub fn in_first_half(&self, x: FqElem) -> bool {
        x.0 < self.neg(x).0
    }

    /// Polynomial-route product, independent of the log tables.
    #[cfg(test)]
    pub(crate) fn slow_mul(&self, a: FqElem, b: FqElem) -> FqElem {
        self.poly_mul(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn has_root(g: &[u64], p: u64) -> bool {
        (0..p).any(|x| g.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0)
    }

    // Brute-force irreducibility: no monic factor of degree 1..=f/2.
    fn brute_irreducible(g: &[u64], p: u64) -> bool {
        let f = g.len() - 1;
        for d in 1..=f / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut h: Vec<u64> = (0..d).map(|i| idx / p.pow(i as u32) % p).collect();
                h.push(1);
                if poly_rem(g, &h, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn prime_field_seven() {
        let k = FieldSpec::build(7, 1).unwrap();
        assert_eq!(k.order(), 7);
        assert_eq!(k.modulus(), &[0, 1]);
        assert_eq!(k.mul(k.elem(3), k.elem(5)), FqElem::ONE);
        assert_eq!(k.primitive_element(), k.elem(3));
    }

    #[test]
    fn gf9_modulus_and_square_of_x() {
        let k = FieldSpec::build(3, 2).unwrap();
        assert_eq!(k.modulus(), &[1, 0, 1]);
        for c in 0..3u64 {
            assert!((c * c + 1) % 3 != 0);
        }
        let x = k.from_coeffs(&[0, 1]);
        assert_eq!(k.mul(x, x), k.from_int(-1));
        assert_eq!(k.mul(x, x), k.elem(2));
    }

    #[test]
    fn composite_rejected() {
        assert_eq!(FieldSpec::build(4, 1), Err(Error::NotPrime(4)));
        assert!(matches!(FieldSpec::build(3, 0), Err(Error::InvalidField { .. })));
    }

    #[test]
    fn modulus_is_lexicographically_smallest() {
        for (p, f) in [(2u64, 2u32), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (3, 4)] {
            let k = FieldSpec::build(p, f).unwrap();
            let m: Vec<u64> = k.modulus().iter().map(|&c| c as u64).collect();
            assert!(brute_irreducible(&m, p));
            // every lexicographically smaller monic candidate is reducible
            let total = p.pow(f);
            let key = |v: &[u64]| -> Vec<u64> { v[..f as usize].to_vec() };
            for idx in 0..total {
                let mut g: Vec<u64> = (0..f).map(|i| idx / p.pow(i) % p).collect();
                g.push(1);
                if key(&g) < key(&m) {
                    assert!(!brute_irreducible(&g, p), "{g:?} < {m:?} is irreducible");
                }
            }
            if f <= 3 {
                assert!(!has_root(&m, p));
            }
        }
        assert_eq!(FieldSpec::build(5, 2).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn primitive_elements() {
        assert_eq!(FieldSpec::build(5, 1).unwrap().primitive_element().index(), 2);
        assert_eq!(FieldSpec::build(2, 1).unwrap().primitive_element(), FqElem::ONE);
    }

    #[test]
    fn squares_mod_7() {
        let k = FieldSpec::build(7, 1).unwrap();
        assert!(k.is_square(k.elem(2)).unwrap());
        assert!(!k.is_square(k.elem(3)).unwrap());
        assert!(k.is_square(FqElem::ONE).unwrap());
        assert!(k.is_square(FqElem::ZERO).unwrap());
        let k2 = FieldSpec::build(2, 3).unwrap();
        assert_eq!(k2.is_square(FqElem::ONE), Err(Error::OddFieldRequired));
    }

    #[test]
    fn inverse_of_zero_fails() {
        let k = FieldSpec::build(3, 2).unwrap();
        assert_eq!(k.inv(FqElem::ZERO), Err(Error::DivisionByZero));
        assert_eq!(k.inv(FqElem::ONE), Ok(FqElem::ONE));
    }

    #[test]
    fn multiplicative_group_cyclic_up_to_81() {
        for (p, f) in [(2u64, 2u32), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (3, 4),
            (5, 1), (5, 2), (7, 1), (7, 2), (11, 1), (13, 1), (17, 1), (19, 1), (23, 1), (29, 1),
            (31, 1), (37, 1), (41, 1), (43, 1), (47, 1), (53, 1), (59, 1), (61, 1), (67, 1),
            (71, 1), (73, 1), (79, 1)]
        {
            let k = FieldSpec::build(p, f).unwrap();
            let q = k.order();
            // brute force: repeated slow multiplication by the generator
            let g = k.primitive_element();
            let mut x = g;
            let mut ord = 1;
            while x != FqElem::ONE {
                x = k.slow_mul(x, g);
                ord += 1;
            }
            assert_eq!(ord, q - 1, "GF({p}^{f})");
            // no earlier element has full order
            for y in (1..g.index()).map(|i| k.elem(i)) {
                assert!(k.mult_order(y).unwrap() < q - 1);
            }
            assert_eq!(FieldSpec::build(p, f).unwrap(), k);
        }
    }

    #[test]
    fn euler_criterion_matches_square_set() {
        for (p, f) in [(3u64, 2u32), (5, 2), (7, 1), (13, 1), (3, 3)] {
            let k = FieldSpec::build(p, f).unwrap();
            let squares: std::collections::BTreeSet<_> =
                k.elements().map(|y| k.slow_mul(y, y)).collect();
            for x in k.elements() {
                assert_eq!(k.is_square(x).unwrap(), squares.contains(&x));
            }
        }
    }

    proptest! {
        #[test]
        fn field_axioms(a in 0u32..27, b in 0u32..27, c in 0u32..27) {
            let k = FieldSpec::build(3, 3).unwrap();
            let (a, b, c) = (k.elem(a), k.elem(b), k.elem(c));
            prop_assert_eq!(k.mul(a, b), k.slow_mul(a, b));
            prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
            prop_assert_eq!(k.add(a, k.neg(a)), FqElem::ZERO);
            if !a.is_zero() {
                prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), FqElem::ONE);
            }
        }
    }
}
