//! Homogeneous Buchberger algorithm, processed degree by degree.
//!
//! Within one degree the order is: fixed relations, S-pairs, candidate
//! generators. A candidate whose normal form is nonzero at that point is not
//! in the span of everything before it, so those candidates form a minimal
//! generating set modulo the fixed relations.

use std::collections::BTreeMap;

use super::order::ModuleOrder;
use super::vector::{Term, Vector};
use crate::algebra::{Field, Monomial};
use crate::error::{Error, Result};

/// Upper bound on basis size before giving up.
pub const MAX_BASIS: usize = 40_000;

#[derive(Clone, Debug)]
pub struct Reducers<K> {
    pub elements: Vec<Vector<K>>,
    by_pos: Vec<Vec<usize>>,
}

impl<K: Field> Reducers<K> {
    pub fn new(rank: usize) -> Self {
        Reducers { elements: Vec::new(), by_pos: vec![Vec::new(); rank] }
    }

    pub fn push(&mut self, v: Vector<K>) -> usize {
        let pos = v.lead().expect("nonzero basis element").pos;
        let idx = self.elements.len();
        self.elements.push(v);
        self.by_pos[pos].push(idx);
        idx
    }

    fn find(&self, t: &Term<K>) -> Option<usize> {
        self.by_pos[t.pos]
            .iter()
            .copied()
            .find(|&g| self.elements[g].terms[0].mono.divides(&t.mono))
    }

    /// Leading monomials at each position.
    pub fn leads_at(&self, pos: usize) -> impl Iterator<Item = &Monomial> + '_ {
        self.by_pos[pos].iter().map(move |&g| &self.elements[g].terms[0].mono)
    }

    /// Fully reduced remainder of `v`.
    pub fn normal_form(&self, v: Vector<K>, order: &ModuleOrder) -> Vector<K> {
        let mut rest = v;
        let mut done: Vec<Term<K>> = Vec::new();
        let mut idx = 0;
        while idx < rest.terms.len() {
            let t = &rest.terms[idx];
            match self.find(t) {
                Some(g) => {
                    let lead = &self.elements[g].terms[0];
                    let q = lead.mono.quotient_of(&t.mono).expect("divides");
                    let c = t.coeff.div(&lead.coeff).expect("nonzero lead");
                    rest = rest.sub_mul_from(idx, &c, &q, &self.elements[g], order);
                    idx = 0;
                }
                None => {
                    // irreducible terms before `idx` are dropped by the next `sub_mul_from`
                    done.push(t.clone());
                    idx += 1;
                }
            }
        }
        Vector { terms: done }
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    pos: usize,
    deg: i32,
}

pub struct GbOutput<K> {
    pub basis: Reducers<K>,
    /// Indices into the candidate list that turned out to be minimal generators.
    pub minimal: Vec<usize>,
}

pub struct Buchberger<'a, K> {
    pub order: &'a ModuleOrder,
    pub fixed: Vec<Vector<K>>,
    pub gens: Vec<Vector<K>>,
    pub degree_bound: Option<i32>,
    /// Use the coprime-leads criterion (valid only in rank one).
    pub product_criterion: bool,
}

impl<'a, K: Field> Buchberger<'a, K> {
    pub fn run(self) -> Result<GbOutput<K>> {
        let order = self.order;
        let mut basis = Reducers::new(order.rank());
        let mut pending: Vec<Pair> = Vec::new();
        let mut minimal = Vec::new();

        let mut fixed_by_deg: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (k, v) in self.fixed.iter().enumerate() {
            if let Some(d) = v.degree(order) {
                fixed_by_deg.entry(d).or_default().push(k);
            }
        }
        let mut gens_by_deg: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (k, v) in self.gens.iter().enumerate() {
            if let Some(d) = v.degree(order) {
                gens_by_deg.entry(d).or_default().push(k);
            }
        }

        loop {
            let next = [
                pending.iter().map(|p| p.deg).min(),
                fixed_by_deg.keys().next().copied(),
                gens_by_deg.keys().next().copied(),
            ]
            .into_iter()
            .flatten()
            .min();
            let Some(d) = next else { break };
            if self.degree_bound.is_some_and(|b| d > b) {
                break;
            }

            let add = |v: Vector<K>, basis: &mut Reducers<K>, pending: &mut Vec<Pair>| -> Result<bool> {
                let mut v = basis.normal_form(v, order);
                if v.is_zero() {
                    return Ok(false);
                }
                v.make_monic();
                let h = basis.push(v);
                if basis.elements.len() > MAX_BASIS {
                    return Err(Error::Guardrail(format!("Gröbner basis exceeded {MAX_BASIS} elements")));
                }
                update(basis, pending, h, order, self.product_criterion);
                Ok(true)
            };

            for k in fixed_by_deg.remove(&d).unwrap_or_default() {
                add(self.fixed[k].clone(), &mut basis, &mut pending)?;
            }

            let (mut now, later): (Vec<Pair>, Vec<Pair>) = pending.drain(..).partition(|p| p.deg == d);
            pending = later;
            now.sort_by(|a, b| {
                order.cmp(a.pos, &a.lcm, b.pos, &b.lcm).then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            });
            for p in now {
                let s = spoly(&basis, &p, order);
                add(s, &mut basis, &mut pending)?;
            }

            for k in gens_by_deg.remove(&d).unwrap_or_default() {
                if add(self.gens[k].clone(), &mut basis, &mut pending)? {
                    minimal.push(k);
                }
            }
        }
        Ok(GbOutput { basis, minimal })
    }
}

fn spoly<K: Field>(basis: &Reducers<K>, p: &Pair, order: &ModuleOrder) -> Vector<K> {
    let gi = &basis.elements[p.i];
    let gj = &basis.elements[p.j];
    let qi = gi.terms[0].mono.quotient_of(&p.lcm).expect("lcm");
    let qj = gj.terms[0].mono.quotient_of(&p.lcm).expect("lcm");
    let a = Vector {
        terms: gi.terms.iter().map(|t| Term { pos: t.pos, mono: t.mono.mul(&qi), coeff: t.coeff.clone() }).collect(),
    };
    // both are monic
    a.sub_mul_from(0, &K::one(), &qj, gj, order)
}

/// Gebauer–Möller update after adding element `h`.
fn update<K: Field>(basis: &Reducers<K>, pending: &mut Vec<Pair>, h: usize, order: &ModuleOrder, product: bool) {
    let hl = &basis.elements[h].terms[0];
    let mut c: Vec<(Pair, bool)> = basis.by_pos[hl.pos]
        .iter()
        .copied()
        .filter(|&g| g != h)
        .map(|g| {
            let gm = &basis.elements[g].terms[0].mono;
            let lcm = gm.lcm(&hl.mono);
            let coprime = product && gm.is_coprime(&hl.mono);
            (Pair { i: g, j: h, deg: order.degree(hl.pos, &lcm), lcm, pos: hl.pos }, coprime)
        })
        .collect();
    c.reverse();
    let mut d: Vec<(Pair, bool)> = Vec::new();
    while let Some((p, coprime)) = c.pop() {
        let dominated = c.iter().chain(d.iter()).any(|(q, _)| q.lcm.divides(&p.lcm));
        if coprime || !dominated {
            d.push((p, coprime));
        }
    }
    pending.retain(|p| {
        !(p.pos == hl.pos
            && hl.mono.divides(&p.lcm)
            && basis.elements[p.i].terms[0].mono.lcm(&hl.mono) != p.lcm
            && basis.elements[p.j].terms[0].mono.lcm(&hl.mono) != p.lcm)
    });
    pending.extend(d.into_iter().filter(|(_, coprime)| !coprime).map(|(p, _)| p));
}

/// Reduce every tail and make all elements monic; leads are already minimal.
pub fn interreduce<K: Field>(basis: &mut Reducers<K>, order: &ModuleOrder) {
    for i in 0..basis.elements.len() {
        let v = basis.elements[i].clone();
        let lead = v.terms[0].clone();
        let tail = Vector { terms: v.terms[1..].to_vec() };
        let mut reduced = basis.normal_form(tail, order);
        reduced.terms.insert(0, lead);
        reduced.make_monic();
        basis.elements[i] = reduced;
    }
}
