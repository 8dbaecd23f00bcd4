//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! Elements are coefficient vectors over the power basis
//! `1, zeta_N, ..., zeta_N^(phi(N)-1)` reduced modulo the N-th cyclotomic
//! polynomial, so each element has exactly one representation per conductor.
//! Operands with different conductors are lifted to the lcm first.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, euler_phi, gcd, is_prime, lcm, legendre};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, serde_rational_vec, Rational};

/// Integer polynomial `Phi_n`, constant term first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    let mut memo: HashMap<u64, Vec<i128>> = HashMap::new();
    phi_poly(n, &mut memo).into_iter().map(|c| c as i64).collect()
}

fn phi_poly(n: u64, memo: &mut HashMap<u64, Vec<i128>>) -> Vec<i128> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    // x^n - 1 divided exactly by every Phi_d, d | n, d < n
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        let den = phi_poly(d, memo);
        num = exact_div_monic(&num, &den);
    }
    memo.insert(n, num.clone());
    num
}

fn exact_div_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, &di) in den.iter().enumerate() {
            rem[k + i] -= c * di;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "division must be exact");
    quot
}

/// Per-conductor data: the degree and the reduced form of every power of zeta.
#[derive(Debug)]
struct Basis {
    phi: usize,
    powers: Vec<Vec<i64>>,
}

impl Basis {
    fn new(n: u64) -> Basis {
        let phi = euler_phi(n) as usize;
        let poly = cyclotomic_polynomial(n);
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by zeta: shift, then fold x^phi = -sum poly_i x^i
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..phi - 1]);
            if top != 0 {
                for i in 0..phi {
                    next[i] = next[i]
                        .checked_sub(top.checked_mul(poly[i]).expect("power table overflow"))
                        .expect("power table overflow");
                }
            }
            cur = next;
        }
        Basis { phi, powers }
    }
}

fn basis(n: u64) -> Arc<Basis> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Basis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("basis cache poisoned").get(&n) {
        return Arc::clone(b);
    }
    let b = Arc::new(Basis::new(n));
    cache
        .lock()
        .expect("basis cache poisoned")
        .entry(n)
        .or_insert(b)
        .clone()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cyclo {
    #[serde(rename = "N")]
    n: u64,
    #[serde(with = "serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl Cyclo {
    pub fn from_rational(r: Rational) -> Cyclo {
        Cyclo { n: 1, coeffs: vec![r] }
    }

    pub fn from_int(k: i64) -> Cyclo {
        Cyclo::from_rational(int(k))
    }

    pub fn zero() -> Cyclo {
        Cyclo::from_int(0)
    }

    pub fn one() -> Cyclo {
        Cyclo::from_int(1)
    }

    /// Builds an element from explicit power-basis coordinates.
    pub fn from_coeffs(n: u64, coeffs: Vec<Rational>) -> Result<Cyclo> {
        if n == 0 || coeffs.len() != euler_phi(n) as usize {
            return Err(Error::Inconsistent(format!(
                "Q(zeta_{n}) needs {} coordinates, got {}",
                euler_phi(n.max(1)),
                coeffs.len()
            )));
        }
        Ok(Cyclo { n, coeffs })
    }

    /// `zeta_n^k` for any integer `k`.
    pub fn root_of_unity(n: u64, k: i64) -> Cyclo {
        assert!(n >= 1, "conductor must be positive");
        let b = basis(n);
        let idx = k.rem_euclid(n as i64) as usize;
        Cyclo {
            n,
            coeffs: b.powers[idx].iter().map(|&c| int(c)).collect(),
        }
    }

    /// `zeta_n^k + zeta_n^-k`.
    pub fn root_pair_sum(n: u64, k: i64) -> Cyclo {
        &Cyclo::root_of_unity(n, k) + &Cyclo::root_of_unity(n, -k)
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Re-expresses `self` inside Q(zeta_m); `m` must be a multiple of the conductor.
    pub fn lift(&self, m: u64) -> Cyclo {
        assert!(m.is_multiple_of(self.n), "cannot lift conductor {} to {m}", self.n);
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let b = basis(m);
        let mut out = vec![Rational::zero(); b.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &w) in out.iter_mut().zip(&b.powers[(j * step) % m as usize]) {
                if w != 0 {
                    *o += c * int(w);
                }
            }
        }
        Cyclo { n: m, coeffs: out }
    }

    fn aligned(&self, other: &Cyclo) -> (Cyclo, Cyclo) {
        if self.n == other.n {
            return (self.clone(), other.clone());
        }
        let m = lcm(self.n, other.n);
        (self.lift(m), other.lift(m))
    }

    pub fn scale(&self, r: &Rational) -> Cyclo {
        Cyclo {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Applies `zeta_N -> zeta_N^k`; `k` must be coprime to the conductor.
    pub fn galois(&self, k: i64) -> Cyclo {
        let n = self.n;
        let kk = k.rem_euclid(n as i64) as u64;
        assert!(gcd(kk, n) == 1 || n == 1, "k={k} not a unit mod {n}");
        let b = basis(n);
        let mut out = vec![Rational::zero(); b.phi];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = ((j as u64 * kk) % n) as usize;
            for (o, &w) in out.iter_mut().zip(&b.powers[idx]) {
                if w != 0 {
                    *o += c * int(w);
                }
            }
        }
        Cyclo { n, coeffs: out }
    }

    /// Complex conjugation, `zeta_N -> zeta_N^-1`.
    pub fn conj(&self) -> Cyclo {
        self.galois(-1)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// `as_rational` with a `NotRational` error carrying the value.
    pub fn expect_rational(&self) -> Result<Rational> {
        self.as_rational()
            .ok_or_else(|| Error::NotRational(self.to_string()))
    }

    /// The same element expressed in Q(zeta_m) for `m | N`, if it lies there.
    pub fn descend(&self, m: u64) -> Option<Cyclo> {
        assert!(m >= 1 && self.n.is_multiple_of(m), "{m} must divide {}", self.n);
        if m == self.n {
            return Some(self.clone());
        }
        if let Some(r) = self.as_rational() {
            return Some(Cyclo::from_rational(r).lift(m));
        }
        let phi_m = euler_phi(m) as usize;
        let cols: Vec<Cyclo> = (0..phi_m)
            .map(|j| Cyclo::root_of_unity(m, j as i64).lift(self.n))
            .collect();
        let solution = solve_columns(&cols, &self.coeffs)?;
        Some(Cyclo { n: m, coeffs: solution })
    }

    /// Representation with the smallest conductor containing the element.
    pub fn minimal(&self) -> Cyclo {
        for m in divisors(self.n) {
            if let Some(c) = self.descend(m) {
                return c;
            }
        }
        self.clone()
    }

    /// Floating-point value, for display only.
    pub fn approx(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = rational_to_f64(c);
            let t = 2.0 * std::f64::consts::PI * j as f64 / self.n as f64;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }

    pub fn approx_string(&self) -> String {
        let (re, im) = self.approx();
        if im.abs() < 1e-9 {
            format!("{re:.6}")
        } else {
            format!("{re:.6}{:+.6}i", im)
        }
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Solves `sum_j x_j cols[j] = target` over Q, or `None` if inconsistent.
fn solve_columns(cols: &[Cyclo], target: &[Rational]) -> Option<Vec<Rational>> {
    let rows = target.len();
    let ncols = cols.len();
    let mut a: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c.coeffs[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][ncols].clone();
    }
    Some(x)
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Cyclo) -> bool {
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclo {}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        if rhs.n == 1 {
            let mut out = self.clone();
            out.coeffs[0] += &rhs.coeffs[0];
            return out;
        }
        if self.n == 1 {
            return rhs + self;
        }
        let (a, b) = self.aligned(rhs);
        Cyclo {
            n: a.n,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        self + &(-rhs)
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        if rhs.n == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        if self.n == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        let (a, b) = self.aligned(rhs);
        let n = a.n;
        let bs = basis(n);
        let phi = bs.phi;
        let mut prod = vec![Rational::zero(); 2 * phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<Rational> = prod[..phi].to_vec();
        for (k, c) in prod.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (o, &w) in out.iter_mut().zip(&bs.powers[k % n as usize]) {
                if w != 0 {
                    *o += c * int(w);
                }
            }
        }
        Cyclo { n, coeffs: out }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &Cyclo) -> Cyclo {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

impl std::iter::Sum for Cyclo {
    fn sum<I: Iterator<Item = Cyclo>>(iter: I) -> Cyclo {
        iter.fold(Cyclo::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for Cyclo {
    /// Symbolic sum such as `-1/2 + 1/2*z7^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = fmt_rational(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match j {
                0 => mag,
                _ => {
                    let root = if j == 1 {
                        format!("z{}", self.n)
                    } else {
                        format!("z{}^{j}", self.n)
                    };
                    if c.abs().is_one() {
                        root
                    } else {
                        format!("{mag}*{root}")
                    }
                }
            };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (sign, body)) in terms.iter().enumerate() {
            match (i, *sign) {
                (0, "-") => write!(f, "-{body}")?,
                (0, _) => write!(f, "{body}")?,
                (_, s) => write!(f, " {s} {body}")?,
            }
        }
        Ok(())
    }
}

/// A square root of `eps * q` for `q = p^f`, `p` odd, `q = eps (mod 4)`.
///
/// For even `f` this is the rational `p^(f/2)`; for odd `f` it is
/// `p^((f-1)/2)` times the quadratic Gauss sum `sum_t (t/p) zeta_p^t`.
pub fn sqrt_eps_q(p: u64, f: u32) -> Result<Cyclo> {
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f == 0 {
        return Err(Error::InvalidField { p, f });
    }
    if f.is_multiple_of(2) {
        return Ok(Cyclo::from_rational(Rational::from_integer(
            BigInt::from(p).pow(f / 2),
        )));
    }
    let gauss: Cyclo = (1..p)
        .map(|t| Cyclo::root_of_unity(p, t as i64).scale(&int(legendre(t as i64, p))))
        .sum();
    Ok(gauss.scale(&Rational::from_integer(BigInt::from(p).pow((f - 1) / 2))))
}
