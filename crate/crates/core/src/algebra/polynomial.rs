use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::field::Field;
use super::monomial::{Monomial, TermOrder};
use crate::error::{Error, Result};

/// Multivariate polynomial in canonical form: nonzero coefficients only,
/// distinct monomials, terms sorted descending in grevlex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial<K> {
    nvars: usize,
    terms: Vec<(Monomial, K)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Sub,
    Mul,
}

/// Degree report for [`Polynomial::homogeneous_degree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial is homogeneous of every degree.
    Any,
    Degree(u32),
    Inhomogeneous(BTreeSet<u32>),
}

const CANONICAL: TermOrder = TermOrder::Grevlex;

impl<K: Field> Polynomial<K> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, K::one())
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), K::one())
    }

    pub fn term(m: Monomial, c: K) -> Self {
        let nvars = m.nvars();
        if c.is_zero() {
            Polynomial { nvars, terms: Vec::new() }
        } else {
            Polynomial { nvars, terms: vec![(m, c)] }
        }
    }

    /// Build from arbitrary terms; duplicates are merged and zeros dropped.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, K)>) -> Self {
        let mut v: Vec<(Monomial, K)> = terms.into_iter().collect();
        v.sort_by(|a, b| CANONICAL.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, K)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.clone() + c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { nvars, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, K)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, K)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant term coefficient (zero if absent).
    pub fn constant_coeff(&self) -> K {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => K::zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self, order: TermOrder) -> Option<(&Monomial, &K)> {
        if order == CANONICAL {
            return self.terms.first().map(|(m, c)| (m, c));
        }
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0)).map(|(m, c)| (m, c))
    }

    pub fn homogeneous_degree(&self) -> Homogeneity {
        let degs: BTreeSet<u32> = self.terms.iter().map(|(m, _)| m.degree()).collect();
        match degs.len() {
            0 => Homogeneity::Any,
            1 => Homogeneity::Degree(*degs.iter().next().unwrap()),
            _ => Homogeneity::Inhomogeneous(degs),
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn degree_if_homogeneous(&self) -> Option<u32> {
        match self.homogeneous_degree() {
            Homogeneity::Degree(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        !matches!(self.homogeneous_degree(), Homogeneity::Inhomogeneous(_))
    }

    /// Largest total degree among the terms.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match CANONICAL.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        a[i].1.clone() - b[j].1.clone()
                    } else {
                        a[i].1.clone() + b[j].1.clone()
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -t.1.clone() } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Polynomial { nvars: self.nvars, terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        // multiplication by a monomial preserves any monomial order
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.clone() * c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (small, big) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut acc = Self::zero(self.nvars);
        for (m, c) in &small.terms {
            acc = acc.add(&big.mul_term(m, c));
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divide every coefficient by the leading (grevlex) coefficient.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_repr();
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&m.fmt_with(names));
            } else {
                let cs = abs.to_string();
                if cs.contains('/') {
                    s.push_str(&format!("({cs})*{}", m.fmt_with(names)));
                } else {
                    s.push_str(&format!("{cs}*{}", m.fmt_with(names)));
                }
            }
        }
        s
    }
}

/// Checked sum, difference or product of two polynomials.
pub fn poly_combine<K: Field>(p: &Polynomial<K>, q: &Polynomial<K>, op: CombineOp) -> Result<Polynomial<K>> {
    if p.nvars() != q.nvars() {
        return Err(Error::IncompatibleOperands(format!(
            "polynomials in {} and {} variables",
            p.nvars(),
            q.nvars()
        )));
    }
    Ok(match op {
        CombineOp::Add => p.add(q),
        CombineOp::Sub => p.sub(q),
        CombineOp::Mul => p.mul(q),
    })
}

/// Default variable names `x0, x1, ...`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{F32003, Rational};
    use proptest::prelude::*;

    type P = Polynomial<F32003>;

    fn x(n: usize, i: usize) -> P {
        P::var(n, i)
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (x(2, 0), x(2, 1));
        let p = poly_combine(&a.add(&b), &a.sub(&b), CombineOp::Mul).unwrap();
        let expect = a.mul(&a).sub(&b.mul(&b));
        assert_eq!(p, expect);
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(p.fmt_with(&names), "x^2 - y^2");
    }

    #[test]
    fn identity_and_plain_product() {
        let p = x(4, 0).add(&x(4, 2).scale(&F32003::new(3)));
        assert_eq!(poly_combine(&p, &P::zero(4), CombineOp::Add).unwrap(), p);
        // (y)*(x) in four variables is xy; no quotient reduction happens here
        let prod = x(4, 1).mul(&x(4, 0));
        assert_eq!(prod.terms().len(), 1);
        assert_eq!(prod.terms()[0].0.exponents(), &[1, 1, 0, 0]);
        assert!(poly_combine(&x(3, 0), &x(4, 0), CombineOp::Add).is_err());
    }

    #[test]
    fn homogeneity_reports() {
        // xw - yz in (x,y,w,z)
        let p = x(4, 0).mul(&x(4, 2)).sub(&x(4, 1).mul(&x(4, 3)));
        assert_eq!(p.homogeneous_degree(), Homogeneity::Degree(2));
        assert_eq!(P::zero(4).homogeneous_degree(), Homogeneity::Any);
        let q = x(1, 0).add(&x(1, 0).mul(&x(1, 0)));
        assert_eq!(q.homogeneous_degree(), Homogeneity::Inhomogeneous([1, 2].into_iter().collect()));
    }

    #[test]
    fn rational_display() {
        let p: Polynomial<Rational> =
            Polynomial::var(2, 0).scale(&Rational::new(1, 2)).sub(&Polynomial::one(2));
        assert_eq!(p.fmt_with(&default_names(2)), "(1/2)*x0 - 1");
    }

    fn hpoly(deg: u32) -> impl Strategy<Value = P> {
        let monos = Monomial::all_of_degree(3, deg);
        proptest::collection::vec((0..monos.len(), -5i64..5), 0..5).prop_map(move |ts| {
            P::from_terms(3, ts.into_iter().map(|(i, c)| (monos[i].clone(), F32003::new(c))))
        })
    }

    proptest! {
        #[test]
        fn degree_additive(p in hpoly(2), q in hpoly(3)) {
            let pq = p.mul(&q);
            if !pq.is_zero() {
                prop_assert_eq!(pq.degree_if_homogeneous(), Some(5));
            }
            prop_assert_eq!(p.mul(&q), q.mul(&p));
            prop_assert_eq!(p.add(&q).sub(&q), p.clone());
            prop_assert!(pq.terms().iter().all(|(_, c)| !c.is_zero()));
        }
    }
}
