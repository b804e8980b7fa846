//! Schreyer frames: a free resolution over `S` read off from a single
//! Gröbner basis, pruned afterwards to the minimal one.
//!
//! The S-pair syzygies of a Gröbner basis form a Gröbner basis of the
//! syzygy module for the induced order, so every level past the first only
//! needs pair reductions, never a completion.

use std::cmp::Ordering;

use super::{groebner_basis, Ambient};
use crate::algebra::{Field, Matrix, Monomial, Polynomial, TermOrder};
use crate::error::{Error, Result};

/// Total number of frame elements before giving up.
pub const MAX_FRAME: usize = 60_000;

/// Where a basis element's lead lands in `F_0`, plus the index path that
/// breaks ties level by level.
#[derive(Clone, Debug)]
struct Key {
    deg: i32,
    total: Monomial,
    pos0: usize,
    chain: Vec<u32>,
}

#[derive(Clone, Debug)]
struct STerm<K> {
    pos: usize,
    mono: Monomial,
    /// `mono` times the key's total monomial.
    full: Monomial,
    coeff: K,
}

fn cmp_terms<K>(keys: &[Key], order: TermOrder, a: &STerm<K>, b: &STerm<K>) -> Ordering {
    let (ka, kb) = (&keys[a.pos], &keys[b.pos]);
    (a.mono.degree() as i32 + ka.deg)
        .cmp(&(b.mono.degree() as i32 + kb.deg))
        .then_with(|| order.cmp(&a.full, &b.full))
        .then_with(|| kb.pos0.cmp(&ka.pos0))
        .then_with(|| ka.chain.cmp(&kb.chain))
}

/// `a - c·t·b`, assuming the leads cancel.
fn sub_mul<K: Field>(keys: &[Key], order: TermOrder, a: &[STerm<K>], c: &K, t: &Monomial, b: &[STerm<K>]) -> Vec<STerm<K>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (1, 1);
    let scaled = |s: &STerm<K>| STerm {
        pos: s.pos,
        mono: s.mono.mul(t),
        full: s.full.mul(t),
        coeff: -(s.coeff.clone() * c.clone()),
    };
    while i < a.len() || j < b.len() {
        if j >= b.len() {
            out.extend_from_slice(&a[i..]);
            break;
        }
        let y = scaled(&b[j]);
        if i >= a.len() {
            out.push(y);
            j += 1;
            continue;
        }
        match cmp_terms(keys, order, &a[i], &y) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(y);
                j += 1;
            }
            Ordering::Equal => {
                let s = a[i].coeff.clone() + y.coeff;
                if !s.is_zero() {
                    out.push(STerm { coeff: s, ..a[i].clone() });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

struct Level<K> {
    keys: Vec<Key>,
    /// Elements as vectors in the level below, monic, sorted descending.
    elems: Vec<Vec<STerm<K>>>,
}

impl<K: Field> Level<K> {
    fn by_lead_pos(&self, rank: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); rank];
        for (i, e) in self.elems.iter().enumerate() {
            out[e[0].pos].push(i);
        }
        out
    }
}

/// The next frame level: one syzygy per minimal pair quotient.
fn next_level<K: Field>(lower: &[Key], cur: &Level<K>, order: TermOrder, budget: &mut usize) -> Result<Level<K>> {
    let by_pos = cur.by_lead_pos(lower.len());
    let mut keys = Vec::new();
    let mut elems = Vec::new();
    for (i, fi) in cur.elems.iter().enumerate() {
        let (p, mi) = (fi[0].pos, &fi[0].mono);
        let mut cands: Vec<(Monomial, usize)> = by_pos[p]
            .iter()
            .take_while(|&&j| j < i)
            .map(|&j| (mi.quotient_of(&mi.lcm(&cur.elems[j][0].mono)).expect("lcm"), j))
            .collect();
        cands.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(a.1.cmp(&b.1)));
        let mut kept: Vec<(Monomial, usize)> = Vec::new();
        for (q, j) in cands {
            if !kept.iter().any(|(k, _)| k.divides(&q)) {
                kept.push((q, j));
            }
        }
        for (q, j) in kept {
            if *budget == 0 {
                return Err(Error::Guardrail(format!("Schreyer frame exceeds {MAX_FRAME} elements")));
            }
            *budget -= 1;
            let fj = &cur.elems[j];
            let qj = fj[0].mono.quotient_of(&mi.mul(&q)).expect("lcm");
            let lift = |s: &STerm<K>, t: &Monomial, c: K| STerm { pos: s.pos, mono: s.mono.mul(t), full: s.full.mul(t), coeff: c };
            let mut v: Vec<STerm<K>> = fi.iter().map(|s| lift(s, &q, s.coeff.clone())).collect();
            v = sub_mul(lower, order, &v, &K::one(), &qj, fj);
            let mut rec: Vec<(usize, Monomial, K)> = vec![(i, q.clone(), K::one()), (j, qj, -K::one())];
            while let Some(lt) = v.first() {
                let Some(&l) = by_pos[lt.pos].iter().find(|&&l| cur.elems[l][0].mono.divides(&lt.mono)) else {
                    return Err(Error::Guardrail("Schreyer pair did not reduce to zero".into()));
                };
                let t = cur.elems[l][0].mono.quotient_of(&lt.mono).expect("divides");
                let c = lt.coeff.clone();
                v = sub_mul(lower, order, &v, &c, &t, &cur.elems[l]);
                rec.push((l, t, -c));
            }
            let idx = keys.len() as u32;
            let base = &cur.keys[i];
            let mut chain = base.chain.clone();
            chain.push(idx);
            keys.push(Key { deg: base.deg + q.degree() as i32, total: base.total.mul(&q), pos0: base.pos0, chain });
            elems.push(rec);
        }
    }
    let elems = elems
        .into_iter()
        .map(|rec| {
            let mut terms: Vec<STerm<K>> = rec
                .into_iter()
                .map(|(pos, mono, coeff)| STerm { pos, full: mono.mul(&cur.keys[pos].total), mono, coeff })
                .collect();
            terms.sort_by(|a, b| cmp_terms(&cur.keys, order, b, a));
            terms
        })
        .collect();
    Ok(Level { keys, elems })
}

fn to_matrix<K: Field>(nvars: usize, lower: &[Key], level: &Level<K>) -> Matrix<K> {
    let cols = level
        .elems
        .iter()
        .map(|e| {
            let mut buckets: Vec<Vec<(Monomial, K)>> = vec![Vec::new(); lower.len()];
            for t in e {
                buckets[t.pos].push((t.mono.clone(), t.coeff.clone()));
            }
            buckets.into_iter().map(|b| Polynomial::from_terms(nvars, b)).collect()
        })
        .collect();
    Matrix::from_columns_unchecked(
        nvars,
        lower.iter().map(|k| k.deg).collect(),
        level.keys.iter().map(|k| k.deg).collect(),
        cols,
    )
}

/// Non-minimal free resolution of `coker a` over the polynomial ring.
pub fn schreyer_frame<K: Field>(a: &Matrix<K>, amb: &Ambient<K>) -> Result<Vec<Matrix<K>>> {
    if !amb.ideal.is_empty() {
        return Err(Error::IncompatibleOperands("Schreyer frames are computed over the polynomial ring".into()));
    }
    let n = amb.nvars;
    let gb = groebner_basis(a, amb, true)?;
    let shifts = a.row_degrees();
    let base: Vec<Key> = shifts
        .iter()
        .enumerate()
        .map(|(p, &d)| Key { deg: d, total: Monomial::one(n), pos0: p, chain: Vec::new() })
        .collect();
    let mut keys = Vec::new();
    let mut elems = Vec::new();
    for (idx, v) in gb.reducers.elements.iter().enumerate() {
        let lead = &v.terms[0];
        keys.push(Key {
            deg: shifts[lead.pos] + lead.mono.degree() as i32,
            total: lead.mono.clone(),
            pos0: lead.pos,
            chain: vec![idx as u32],
        });
        let inv = lead.coeff.inv().expect("nonzero lead");
        elems.push(
            v.terms
                .iter()
                .map(|t| STerm { pos: t.pos, mono: t.mono.clone(), full: t.mono.clone(), coeff: t.coeff.clone() * inv.clone() })
                .collect(),
        );
    }
    let mut level = Level { keys, elems };
    let mut lower = base;
    let mut out = Vec::new();
    let mut budget = MAX_FRAME;
    while !level.elems.is_empty() {
        out.push(to_matrix(n, &lower, &level));
        let next = next_level(&lower, &level, amb.order, &mut budget)?;
        lower = std::mem::take(&mut level.keys);
        level = next;
    }
    Ok(out)
}

/// Split off trivial pieces `S(-d) --unit--> S(-d)` until no differential
/// has a constant entry.
pub fn prune<K: Field>(f0: &[i32], ds: Vec<Matrix<K>>) -> (Vec<i32>, Vec<Matrix<K>>) {
    let nvars = ds.first().map_or(0, |d| d.nvars());
    let mut degs: Vec<Vec<i32>> = vec![f0.to_vec()];
    degs.extend(ds.iter().map(|d| d.col_degrees().to_vec()));
    let mut alive: Vec<Vec<bool>> = degs.iter().map(|d| vec![true; d.len()]).collect();
    let mut cols: Vec<Vec<Vec<Polynomial<K>>>> = ds.iter().map(|d| d.columns().to_vec()).collect();
    for k in 0..cols.len() {
        while let Some((r, c)) = find_unit(&cols[k], &degs[k], &degs[k + 1], &alive[k], &alive[k + 1]) {
            let u_inv = cols[k][c][r].constant_coeff().inv().expect("unit");
            let pivot = cols[k][c].clone();
            for j in 0..cols[k].len() {
                if j == c || !alive[k + 1][j] || cols[k][j][r].is_zero() {
                    continue;
                }
                let f = cols[k][j][r].scale(&u_inv);
                for (i, p) in pivot.iter().enumerate() {
                    if alive[k][i] && !p.is_zero() {
                        cols[k][j][i] = cols[k][j][i].sub(&p.mul(&f));
                    }
                }
            }
            alive[k][r] = false;
            alive[k + 1][c] = false;
        }
    }
    let keep = |k: usize| -> Vec<usize> { (0..alive[k].len()).filter(|&i| alive[k][i]).collect() };
    let mut out = Vec::new();
    for (k, cs) in cols.into_iter().enumerate() {
        let (rows, kept) = (keep(k), keep(k + 1));
        let columns: Vec<Vec<Polynomial<K>>> =
            kept.iter().map(|&j| rows.iter().map(|&i| cs[j][i].clone()).collect()).collect();
        out.push(Matrix::from_columns_unchecked(
            nvars,
            rows.iter().map(|&i| degs[k][i]).collect(),
            kept.iter().map(|&j| degs[k + 1][j]).collect(),
            columns,
        ));
    }
    while out.last().is_some_and(|d| d.ncols() == 0) {
        out.pop();
    }
    let f0 = keep(0).into_iter().map(|i| degs[0][i]).collect();
    (f0, out)
}

fn find_unit<K: Field>(
    cols: &[Vec<Polynomial<K>>],
    row_degs: &[i32],
    col_degs: &[i32],
    rows_alive: &[bool],
    cols_alive: &[bool],
) -> Option<(usize, usize)> {
    for (c, col) in cols.iter().enumerate() {
        if !cols_alive[c] {
            continue;
        }
        for (r, p) in col.iter().enumerate() {
            if rows_alive[r] && row_degs[r] == col_degs[c] && !p.is_zero() {
                return Some((r, c));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::F32003;

    fn var(n: usize, i: usize) -> Polynomial<F32003> {
        Polynomial::var(n, i)
    }

    #[test]
    fn koszul_frame_of_the_maximal_ideal() {
        let amb = Ambient::polynomial_ring(3, TermOrder::Grevlex);
        let a = Matrix::from_rows(3, vec![0], vec![vec![var(3, 0), var(3, 1), var(3, 2)]]).unwrap();
        let frame = schreyer_frame(&a, &amb).unwrap();
        let (f0, ds) = prune(&[0], frame);
        assert_eq!(f0, vec![0]);
        let ranks: Vec<usize> = ds.iter().map(|d| d.ncols()).collect();
        assert_eq!(ranks, vec![3, 3, 1]);
        for w in ds.windows(2) {
            assert!(w[0].mul(&w[1]).unwrap().is_zero());
        }
    }

    #[test]
    fn pruning_removes_redundant_generators() {
        // (x, y, x+y) needs a unit cancellation between F_1 and F_2
        let n = 2;
        let amb = Ambient::polynomial_ring(n, TermOrder::Grevlex);
        let a = Matrix::from_rows(n, vec![0], vec![vec![var(n, 0), var(n, 1), var(n, 0).add(&var(n, 1))]]).unwrap();
        let frame = schreyer_frame(&a, &amb).unwrap();
        let (_, ds) = prune(&[0], frame);
        let ranks: Vec<usize> = ds.iter().map(|d| d.ncols()).collect();
        assert_eq!(ranks, vec![2, 1]);
    }

    #[test]
    fn agrees_with_graph_module_syzygies() {
        // rational normal curve in P^3: 2x2 minors of [[x,y,z],[y,z,w]]
        let n = 4;
        let amb = Ambient::polynomial_ring(n, TermOrder::Grevlex);
        let (x, y, z, w) = (var(n, 0), var(n, 1), var(n, 2), var(n, 3));
        let minors = vec![x.mul(&z).sub(&y.mul(&y)), x.mul(&w).sub(&y.mul(&z)), y.mul(&w).sub(&z.mul(&z))];
        let a = Matrix::from_rows(n, vec![0], vec![minors]).unwrap();
        let (_, ds) = prune(&[0], schreyer_frame(&a, &amb).unwrap());
        let mut expected = Vec::new();
        let mut cur = a;
        while cur.ncols() > 0 {
            expected.push(cur.col_degrees().to_vec());
            cur = super::super::syzygies(&cur, &amb).unwrap();
        }
        let got: Vec<Vec<i32>> = ds.iter().map(|d| {
            let mut v = d.col_degrees().to_vec();
            v.sort();
            v
        }).collect();
        assert_eq!(got, expected);
        assert_eq!(got, vec![vec![2, 2, 2], vec![3, 3]]);
    }
}
