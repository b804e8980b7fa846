use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector with its cached standard total degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    deg: u32,
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { deg: 0, exps: SmallVec::from_elem(0, nvars) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial { deg: exps.iter().map(|&e| e as u32).sum(), exps: SmallVec::from_slice(exps) }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            deg: self.deg + other.deg,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            deg: other.deg - self.deg,
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; 8]> =
            self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        Monomial { deg: exps.iter().map(|&e| e as u32).sum(), exps }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; 8]> =
            self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect();
        Monomial { deg: exps.iter().map(|&e| e as u32).sum(), exps }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// All monomials of total degree `d` in `nvars` variables, in descending
    /// lex order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            let n = cur.len();
            if i + 1 == n {
                cur[i] = left as u16;
                out.push(Monomial::from_exponents(cur));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e as u16;
                rec(i + 1, left - e, cur, out);
            }
        }
        if nvars == 0 {
            return if d == 0 { vec![Monomial::one(0)] } else { Vec::new() };
        }
        let mut out = Vec::new();
        let mut cur = vec![0u16; nvars];
        rec(0, d, &mut cur, &mut out);
        out
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

/// Monomial order on the ring variables. Variable 0 is the largest.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermOrder {
    #[default]
    Grevlex,
    Lex,
    GradedLex,
}

impl TermOrder {
    pub fn is_graded(self) -> bool {
        !matches!(self, TermOrder::Lex)
    }

    #[inline]
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::Lex => a.exps.cmp(&b.exps),
            TermOrder::GradedLex => a.deg.cmp(&b.deg).then_with(|| a.exps.cmp(&b.exps)),
            TermOrder::Grevlex => a.deg.cmp(&b.deg).then_with(|| {
                for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// Checked comparison of two monomials under `order`.
pub fn monomial_cmp(a: &Monomial, b: &Monomial, order: TermOrder) -> Result<Ordering> {
    if a.nvars() != b.nvars() {
        return Err(Error::IncompatibleOperands(format!(
            "monomials in {} and {} variables",
            a.nvars(),
            b.nvars()
        )));
    }
    Ok(order.cmp(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn grevlex_examples() {
        // x^2 vs xy in (x,y,z)
        assert_eq!(monomial_cmp(&m(&[2, 0, 0]), &m(&[1, 1, 0]), TermOrder::Grevlex).unwrap(), Ordering::Greater);
        // yz vs xz
        assert_eq!(monomial_cmp(&m(&[0, 1, 1]), &m(&[1, 0, 1]), TermOrder::Grevlex).unwrap(), Ordering::Less);
        let a = m(&[3, 1, 4]);
        for o in [TermOrder::Grevlex, TermOrder::Lex, TermOrder::GradedLex] {
            assert_eq!(monomial_cmp(&a, &a, o).unwrap(), Ordering::Equal);
        }
        assert!(monomial_cmp(&m(&[1]), &m(&[1, 0]), TermOrder::Lex).is_err());
    }

    #[test]
    fn grevlex_differs_from_deglex() {
        // x z^2 vs y^3? same degree 3: deglex x z^2 > y^3, grevlex: last var z: 2 vs 0 -> y^3 bigger
        let a = m(&[1, 0, 2]);
        let b = m(&[0, 3, 0]);
        assert_eq!(TermOrder::GradedLex.cmp(&a, &b), Ordering::Greater);
        assert_eq!(TermOrder::Grevlex.cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn degree_enumeration() {
        assert_eq!(Monomial::all_of_degree(4, 2).len(), 10);
        assert_eq!(Monomial::all_of_degree(3, 0).len(), 1);
        assert!(Monomial::all_of_degree(3, 5).iter().all(|x| x.degree() == 5));
    }

    fn mono3() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u16..4, 3).prop_map(|v| Monomial::from_exponents(&v))
    }

    fn order() -> impl Strategy<Value = TermOrder> {
        prop_oneof![Just(TermOrder::Grevlex), Just(TermOrder::Lex), Just(TermOrder::GradedLex)]
    }

    proptest! {
        #[test]
        fn total_and_multiplicative(a in mono3(), b in mono3(), c in mono3(), o in order()) {
            let ab = o.cmp(&a, &b);
            prop_assert_eq!(ab, o.cmp(&b, &a).reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            prop_assert_eq!(o.cmp(&a.mul(&c), &b.mul(&c)), ab);
            if o.is_graded() && a.degree() != b.degree() {
                prop_assert_eq!(ab, a.degree().cmp(&b.degree()));
            }
        }

        #[test]
        fn transitive(a in mono3(), b in mono3(), c in mono3(), o in order()) {
            if o.cmp(&a, &b) == Ordering::Less && o.cmp(&b, &c) == Ordering::Less {
                prop_assert_eq!(o.cmp(&a, &c), Ordering::Less);
            }
        }

        #[test]
        fn degree_is_exponent_sum(a in mono3(), b in mono3()) {
            prop_assert_eq!(a.degree(), a.exponents().iter().map(|&e| e as u32).sum::<u32>());
            prop_assert_eq!(a.mul(&b).degree(), a.degree() + b.degree());
            prop_assert!(a.divides(&a.lcm(&b)));
            prop_assert!(a.gcd(&b).divides(&b));
        }
    }
}
