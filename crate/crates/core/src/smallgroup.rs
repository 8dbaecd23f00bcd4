//! Abstract small groups (abelian, dihedral, quaternion) with their
//! irreducible characters written down from the presentation.

use crate::arith::lcm;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::exact::Rational;
use num_traits::{One, Zero};

/// Largest subgroup order handled by restriction.
pub const MAX_SMALL_ORDER: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmallKind {
    /// `C_{n_1} x ... x C_{n_k}`.
    Abelian(Vec<u64>),
    /// `<x, y | x^n, y^2, y x y^-1 = x^-1>`, order `2n`.
    Dihedral(u64),
    /// `<x, y | x^4, y^2 = x^2, y x y^-1 = x^-1>`.
    Quaternion8,
}

/// Element word: exponent vector for abelian groups, `(a, b)` for `x^a y^b`
/// otherwise.
pub type Word = Vec<u64>;

#[derive(Clone, Debug)]
pub struct SmallChar {
    pub label: String,
    pub degree: u64,
    /// Values indexed like `SmallGroup::elements`.
    pub values: Vec<Cyclo>,
}

#[derive(Clone, Debug)]
pub struct SmallGroup {
    kind: SmallKind,
    elements: Vec<Word>,
}

impl SmallGroup {
    pub fn abelian(factors: &[u64]) -> SmallGroup {
        let factors: Vec<u64> = factors.iter().copied().filter(|&n| n > 1).collect();
        let mut elements = vec![vec![]];
        for &n in &factors {
            elements = elements
                .into_iter()
                .flat_map(|w: Word| {
                    (0..n).map(move |e| {
                        let mut v = w.clone();
                        v.push(e);
                        v
                    })
                })
                .collect();
        }
        SmallGroup { kind: SmallKind::Abelian(factors), elements }
    }

    pub fn dihedral(n: u64) -> SmallGroup {
        assert!(n >= 2, "dihedral needs n >= 2");
        SmallGroup { kind: SmallKind::Dihedral(n), elements: metacyclic_words(n) }
    }

    pub fn quaternion8() -> SmallGroup {
        SmallGroup { kind: SmallKind::Quaternion8, elements: metacyclic_words(4) }
    }

    pub fn kind(&self) -> &SmallKind {
        &self.kind
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    pub fn name(&self) -> String {
        match &self.kind {
            SmallKind::Abelian(f) if f.is_empty() => "1".into(),
            SmallKind::Abelian(f) => f.iter().map(|n| format!("C{n}")).collect::<Vec<_>>().join("x"),
            SmallKind::Dihedral(n) => format!("D{}", 2 * n),
            SmallKind::Quaternion8 => "Q8".into(),
        }
    }

    pub fn index_of(&self, w: &[u64]) -> usize {
        self.elements.iter().position(|e| e == w).expect("reduced word")
    }

    /// `(n, z)` with `y^2 = x^z` for the metacyclic kinds.
    fn meta(&self) -> Option<(u64, u64)> {
        match self.kind {
            SmallKind::Dihedral(n) => Some((n, 0)),
            SmallKind::Quaternion8 => Some((4, 2)),
            SmallKind::Abelian(_) => None,
        }
    }

    pub fn mul(&self, u: &[u64], v: &[u64]) -> Word {
        match (&self.kind, self.meta()) {
            (SmallKind::Abelian(f), _) => {
                u.iter().zip(v).zip(f).map(|((a, b), n)| (a + b) % n).collect()
            }
            (_, Some((n, z))) => {
                let (a, b, c, d) = (u[0], u[1], v[0], v[1]);
                let c_tw = if b == 1 { (n - c) % n } else { c };
                let mut e = (a + c_tw) % n;
                if b + d == 2 {
                    e = (e + z) % n;
                }
                vec![e, (b + d) % 2]
            }
            _ => unreachable!(),
        }
    }

    pub fn inv(&self, u: &[u64]) -> Word {
        self.elements
            .iter()
            .find(|v| self.mul(u, v) == self.identity())
            .cloned()
            .expect("finite group")
    }

    pub fn identity(&self) -> Word {
        match self.kind {
            SmallKind::Abelian(ref f) => vec![0; f.len()],
            _ => vec![0, 0],
        }
    }

    pub fn element_order(&self, u: &[u64]) -> u64 {
        let id = self.identity();
        let mut y = u.to_vec();
        let mut k = 1;
        while y != id {
            y = self.mul(&y, u);
            k += 1;
        }
        k
    }

    /// All irreducible characters.
    pub fn irreducibles(&self) -> Vec<SmallChar> {
        match &self.kind {
            SmallKind::Abelian(f) => {
                let big = f.iter().copied().fold(1, lcm);
                self.elements
                    .iter()
                    .map(|k| {
                        let values = self
                            .elements
                            .iter()
                            .map(|e| {
                                let t: u64 = k
                                    .iter()
                                    .zip(e)
                                    .zip(f)
                                    .map(|((ki, ei), n)| ki * ei * (big / n))
                                    .sum();
                                Cyclo::root_of_unity(big, (t % big) as i64).minimal()
                            })
                            .collect();
                        let label = if f.is_empty() {
                            "lambda[]".to_string()
                        } else {
                            format!(
                                "lambda[{}]",
                                k.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                            )
                        };
                        SmallChar { label, degree: 1, values }
                    })
                    .collect()
            }
            _ => {
                let (n, _) = self.meta().expect("metacyclic");
                let mut out = Vec::new();
                let signs: &[(i64, i64)] =
                    if n % 2 == 0 { &[(1, 1), (1, -1), (-1, 1), (-1, -1)] } else { &[(1, 1), (1, -1)] };
                for &(s, t) in signs {
                    let values = self
                        .elements
                        .iter()
                        .map(|w| Cyclo::from_int(s.pow(w[0] as u32) * t.pow(w[1] as u32)))
                        .collect();
                    out.push(SmallChar { label: format!("lin[{s:+},{t:+}]"), degree: 1, values });
                }
                for k in 1..n.div_ceil(2) {
                    let values = self
                        .elements
                        .iter()
                        .map(|w| {
                            if w[1] == 1 {
                                Cyclo::zero()
                            } else {
                                Cyclo::root_pair_sum(n, (k * w[0]) as i64).minimal()
                            }
                        })
                        .collect();
                    out.push(SmallChar { label: format!("rho{k}"), degree: 2, values });
                }
                out
            }
        }
    }

    /// `(1/|H|) sum_h a(h) conj(b(h))` for functions on the elements.
    pub fn inner(&self, a: &[Cyclo], b: &[Cyclo]) -> Cyclo {
        let s: Cyclo = a.iter().zip(b).map(|(x, y)| x * &y.conj()).sum();
        s.scale(&Rational::new(1.into(), (self.order() as i64).into()))
    }

    /// Orthogonality of the irreducibles, returning the failing label pairs.
    pub fn orthogonality_failures(&self) -> Vec<(String, String)> {
        let irr = self.irreducibles();
        let mut bad = Vec::new();
        for (i, a) in irr.iter().enumerate() {
            for b in &irr[i..] {
                let want = if a.label == b.label { Rational::one() } else { Rational::zero() };
                if self.inner(&a.values, &b.values).as_rational() != Some(want) {
                    bad.push((a.label.clone(), b.label.clone()));
                }
            }
        }
        let deg2: u64 = irr.iter().map(|c| c.degree * c.degree).sum();
        if deg2 != self.order() {
            bad.push(("sum of squared degrees".into(), deg2.to_string()));
        }
        bad
    }

    /// Fails with `Inconsistent` if the built-in characters are wrong.
    pub fn self_test(&self) -> Result<()> {
        let bad = self.orthogonality_failures();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Inconsistent(format!("{} character table: {bad:?}", self.name())))
        }
    }

    /// Number of elements of each order, as a sorted list.
    pub fn order_statistics(&self) -> Vec<(u64, usize)> {
        let mut m = std::collections::BTreeMap::new();
        for e in &self.elements {
            *m.entry(self.element_order(e)).or_insert(0) += 1;
        }
        m.into_iter().collect()
    }
}

fn metacyclic_words(n: u64) -> Vec<Word> {
    (0..2).flat_map(|b| (0..n).map(move |a| vec![a, b])).collect()
}

/// Invariant-factor decompositions `n_1 | n_2 | ...` of all abelian groups of order `n`.
pub fn abelian_types(n: u64) -> Vec<Vec<u64>> {
    fn go(n: u64, max_first: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        // build from the largest factor down; each next factor divides the previous
        if n == 1 {
            let mut v = acc.clone();
            v.reverse();
            out.push(v);
            return;
        }
        for d in (2..=n.min(max_first)).rev() {
            if n.is_multiple_of(d) && max_first.is_multiple_of(d) {
                acc.push(d);
                go(n / d, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n == 1 {
        return vec![vec![]];
    }
    for d in (2..=n).rev() {
        if n.is_multiple_of(d) {
            let mut acc = vec![d];
            go(n / d, d, &mut acc, &mut out);
        }
    }
    out
}
