use std::cmp::Ordering;

use super::order::ModuleOrder;
use crate::algebra::{Field, Monomial, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<K> {
    pub pos: usize,
    pub mono: Monomial,
    pub coeff: K,
}

/// Element of a free module, terms sorted descending under some [`ModuleOrder`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector<K> {
    pub terms: Vec<Term<K>>,
}

impl<K: Field> Vector<K> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term<K>> {
        self.terms.first()
    }

    pub fn from_components(components: &[Polynomial<K>], order: &ModuleOrder) -> Self {
        Self::from_components_offset(components, 0, order)
    }

    /// Components placed at positions `offset..`.
    pub fn from_components_offset(components: &[Polynomial<K>], offset: usize, order: &ModuleOrder) -> Self {
        let mut terms: Vec<Term<K>> = components
            .iter()
            .enumerate()
            .flat_map(|(i, p)| {
                p.terms().iter().map(move |(m, c)| Term { pos: i + offset, mono: m.clone(), coeff: c.clone() })
            })
            .collect();
        terms.sort_by(|a, b| order.cmp(b.pos, &b.mono, a.pos, &a.mono));
        Vector { terms }
    }

    pub fn to_components(&self, rank: usize, nvars: usize) -> Vec<Polynomial<K>> {
        self.to_components_range(0, rank, nvars)
    }

    /// Components for positions `start..start+len`; other positions are dropped.
    pub fn to_components_range(&self, start: usize, len: usize, nvars: usize) -> Vec<Polynomial<K>> {
        let mut buckets: Vec<Vec<(Monomial, K)>> = vec![Vec::new(); len];
        for t in &self.terms {
            if t.pos >= start && t.pos < start + len {
                buckets[t.pos - start].push((t.mono.clone(), t.coeff.clone()));
            }
        }
        buckets.into_iter().map(|b| Polynomial::from_terms(nvars, b)).collect()
    }

    /// Shifted degree of the leading term (all terms agree for homogeneous input).
    pub fn degree(&self, order: &ModuleOrder) -> Option<i32> {
        self.lead().map(|t| order.degree(t.pos, &t.mono))
    }

    pub fn scale(&mut self, c: &K) {
        for t in &mut self.terms {
            t.coeff = t.coeff.clone() * c.clone();
        }
    }

    pub fn make_monic(&mut self) {
        if let Some(c) = self.lead().map(|t| t.coeff.clone()) {
            if !c.is_one() {
                self.scale(&c.inv().expect("nonzero lead"));
            }
        }
    }

    /// `self[from..] - c * m * other`, merged under `order`.
    pub fn sub_mul_from(&self, from: usize, c: &K, m: &Monomial, other: &Vector<K>, order: &ModuleOrder) -> Vector<K> {
        let a = &self.terms[from..];
        let b = &other.terms;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut bj: Option<Term<K>> = None;
        loop {
            if bj.is_none() && j < b.len() {
                let t = &b[j];
                bj = Some(Term { pos: t.pos, mono: t.mono.mul(m), coeff: -(t.coeff.clone() * c.clone()) });
            }
            match (a.get(i), bj.as_ref()) {
                (None, None) => break,
                (Some(x), None) => {
                    out.push(x.clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    out.push(bj.take().unwrap());
                    j += 1;
                }
                (Some(x), Some(y)) => match order.cmp(x.pos, &x.mono, y.pos, &y.mono) {
                    Ordering::Greater => {
                        out.push(x.clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push(bj.take().unwrap());
                        j += 1;
                    }
                    Ordering::Equal => {
                        let s = x.coeff.clone() + y.coeff.clone();
                        if !s.is_zero() {
                            out.push(Term { pos: x.pos, mono: x.mono.clone(), coeff: s });
                        }
                        bj = None;
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
        Vector { terms: out }
    }
}
