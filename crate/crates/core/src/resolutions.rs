//! Minimal graded free resolutions, Betti tables, complexity estimates and
//! periodicity detection.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{Field, Matrix, Polynomial};
use crate::error::{Error, Result};
use crate::fmodules::ModulePresentation;
use crate::groebner::{prune, schreyer_frame, syzygies, Ambient};
use crate::rings::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Over {
    /// The quotient ring `R` the module is declared over.
    Quotient,
    /// The ambient polynomial ring `S`.
    Ambient,
}

/// `⋯ → F_2 --d_2--> F_1 --d_1--> F_0`, with `d_i` stored at index `i - 1`.
#[derive(Clone, Debug)]
pub struct FreeResolution<K> {
    ring: Ring<K>,
    over: Over,
    f0: Vec<i32>,
    differentials: Vec<Matrix<K>>,
    bound: usize,
    terminated: bool,
    minimal: bool,
}

/// Default truncation bound `2·dim R + 2c + 4`.
pub fn default_steps<K: Field>(ring: &Ring<K>) -> usize {
    2 * ring.dim() + 2 * ring.codim() + 4
}

/// Minimal free resolution of `M` through `steps` differentials (over `S`
/// the bound is ignored: a pruned Schreyer frame runs to completion).
pub fn resolve<K: Field>(m: &ModulePresentation<K>, over: Over, steps: usize) -> Result<FreeResolution<K>> {
    if steps == 0 {
        return Err(Error::InsufficientWindow("at least one resolution step is required".into()));
    }
    let (ring, module) = match over {
        Over::Quotient => (m.ring().clone(), m.clone()),
        Over::Ambient => {
            let s = m.over_ambient();
            (s.ring().clone(), s)
        }
    };
    let amb = ring.ambient().clone();
    let minimal = module.minimalize();
    let d1 = minimal.relations().clone();
    if over == Over::Ambient {
        let frame = schreyer_frame(&d1, &amb)?;
        let (f0, differentials) = prune(d1.row_degrees(), frame);
        let bound = ring.nvars() + 1;
        return Ok(FreeResolution { ring, over, f0, differentials, bound, terminated: true, minimal: true });
    }
    let f0 = d1.row_degrees().to_vec();
    let limit = steps;
    let mut differentials = Vec::new();
    let mut terminated = false;
    let mut current = d1;
    for _ in 0..limit {
        if current.ncols() == 0 {
            terminated = true;
            break;
        }
        let next = syzygies(&current, &amb)?;
        differentials.push(current);
        current = next;
    }
    if !terminated && current.ncols() == 0 {
        terminated = true;
    }
    Ok(FreeResolution { ring, over, f0, differentials, bound: limit, terminated, minimal: true })
}

impl<K: Field> FreeResolution<K> {
    /// Wrap externally supplied differentials; minimality is recomputed.
    pub fn from_differentials(ring: &Ring<K>, over: Over, f0: Vec<i32>, differentials: Vec<Matrix<K>>) -> Result<Self> {
        let mut prev = f0.clone();
        for d in &differentials {
            if d.row_degrees() != prev.as_slice() {
                return Err(Error::IncompatibleOperands("consecutive differentials do not compose".into()));
            }
            prev = d.col_degrees().to_vec();
        }
        let minimal = differentials.iter().all(no_constant_entries);
        let bound = differentials.len();
        let terminated = differentials.last().is_some_and(|d| d.ncols() == 0);
        Ok(FreeResolution { ring: ring.clone(), over, f0, differentials, bound, terminated, minimal })
    }

    pub fn ring(&self) -> &Ring<K> {
        &self.ring
    }

    pub fn over(&self) -> Over {
        self.over
    }

    pub fn differentials(&self) -> &[Matrix<K>] {
        &self.differentials
    }

    /// `d_i` for `i ≥ 1`; a zero map past the end of a terminated resolution.
    pub fn differential(&self, i: usize) -> Option<Matrix<K>> {
        assert!(i >= 1);
        if let Some(d) = self.differentials.get(i - 1) {
            return Some(d.clone());
        }
        if self.terminated {
            let rows = self.shifts(i - 1)?;
            return Some(Matrix::empty(self.ring.nvars(), rows));
        }
        None
    }

    /// Shifts of `F_i`, if computed.
    pub fn shifts(&self, i: usize) -> Option<Vec<i32>> {
        if i == 0 {
            return Some(self.f0.clone());
        }
        match self.differentials.get(i - 1) {
            Some(d) => Some(d.col_degrees().to_vec()),
            None if self.terminated => Some(Vec::new()),
            None => None,
        }
    }

    /// Number of computed differentials.
    pub fn len(&self) -> usize {
        self.differentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.differentials.is_empty()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn terminated(&self) -> bool {
        self.terminated
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// Projective dimension when the resolution terminated.
    pub fn projective_dimension(&self) -> Option<usize> {
        if !self.terminated {
            return None;
        }
        Some(self.differentials.iter().filter(|d| d.ncols() > 0).count())
    }

    /// `d_i ∘ d_{i+1} = 0` over the ring, for every computed pair.
    pub fn check_complex(&self) -> bool {
        let amb: &Ambient<K> = self.ring.ambient();
        self.differentials.windows(2).all(|w| match w[0].mul(&w[1]) {
            Ok(p) => amb.reduce_matrix(&p).is_zero(),
            Err(_) => false,
        })
    }

    pub fn check_minimal(&self) -> bool {
        self.differentials.iter().all(no_constant_entries)
    }
}

fn no_constant_entries<K: Field>(d: &Matrix<K>) -> bool {
    d.columns().iter().all(|c| c.iter().all(|e| e.is_zero() || !e.is_constant()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    /// `β_0, β_1, …` through the computed window.
    pub betti: Vec<usize>,
    /// `graded[i]` maps internal degree `j` to `β_{i,j}`.
    pub graded: Vec<BTreeMap<i32, usize>>,
    pub bound: usize,
    pub terminated: bool,
}

pub fn betti_table<K: Field>(res: &FreeResolution<K>) -> Result<BettiTable> {
    if !res.is_minimal() {
        return Err(Error::MinimalityRequired);
    }
    let mut betti = vec![res.f0.len()];
    let mut graded = vec![histogram(&res.f0)];
    for d in &res.differentials {
        betti.push(d.ncols());
        graded.push(histogram(d.col_degrees()));
    }
    Ok(BettiTable { betti, graded, bound: res.bound, terminated: res.terminated })
}

fn histogram(shifts: &[i32]) -> BTreeMap<i32, usize> {
    let mut h = BTreeMap::new();
    for &s in shifts {
        *h.entry(s).or_insert(0) += 1;
    }
    h
}

impl BettiTable {
    /// Projective dimension if the window shows a zero Betti number.
    pub fn projective_dimension(&self) -> Option<usize> {
        let first_zero = self.betti.iter().position(|&b| b == 0)?;
        Some(first_zero.saturating_sub(1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityEstimate {
    pub value: usize,
    /// Betti numbers inspected.
    pub window: usize,
    /// First index of the tail whose differences settled.
    pub onset: usize,
    /// The heuristic wanted a value above the codimension and was clamped.
    pub conflict: bool,
    /// Rows of step-2 differences of the tail, starting with the tail itself.
    pub differences: Vec<Vec<i64>>,
    pub label: &'static str,
}

/// Step-2 forward difference `x_{i+2} - x_i`; period-two oscillation cancels.
fn step2(v: &[i64]) -> Vec<i64> {
    v.windows(3).map(|w| w[2] - w[0]).collect()
}

/// Estimate the polynomial growth order of the Betti numbers from a finite
/// window: the least `s` such that the `s`-fold step-2 difference of some
/// tail vanishes. Never exceeds `codim`.
pub fn complexity_estimate(b: &BettiTable, codim: usize) -> Result<ComplexityEstimate> {
    let window = b.betti.len();
    if b.betti.contains(&0) {
        return Ok(ComplexityEstimate {
            value: 0,
            window,
            onset: b.betti.iter().position(|&x| x == 0).unwrap_or(0),
            conflict: false,
            differences: Vec::new(),
            label: "estimate from window",
        });
    }
    if window < 5 {
        return Err(Error::InsufficientWindow(format!("{window} Betti numbers; at least 5 are needed")));
    }
    let seq: Vec<i64> = b.betti.iter().map(|&x| x as i64).collect();
    let max_onset = (window / 2).max(1);
    let mut best: Option<(usize, usize, Vec<Vec<i64>>)> = None;
    for s in 1..=codim.max(1) {
        for onset in 1..=max_onset {
            let tail = &seq[onset..];
            if tail.len() < (2 * s + 2).max(4) {
                break;
            }
            let mut rows = vec![tail.to_vec()];
            for _ in 0..s {
                let next = step2(rows.last().expect("nonempty"));
                rows.push(next);
            }
            if rows.last().is_some_and(|r| !r.is_empty() && r.iter().all(|&x| x == 0)) {
                best = Some((s, onset, rows));
                break;
            }
        }
        if best.is_some() {
            break;
        }
    }
    Ok(match best {
        Some((s, onset, differences)) if s <= codim => ComplexityEstimate {
            value: s,
            window,
            onset,
            conflict: false,
            differences,
            label: "estimate from window",
        },
        other => ComplexityEstimate {
            value: codim,
            window,
            onset: other.as_ref().map_or(1, |b| b.1),
            conflict: true,
            differences: other.map(|b| b.2).unwrap_or_else(|| vec![seq[1..].to_vec()]),
            label: "estimate from window",
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Periodicity {
    pub periodic: bool,
    pub period: Option<usize>,
    pub onset: Option<usize>,
}

/// Look for `d_i ≅ d_{i+p}` (up to row/column permutation and column scaling
/// by units) for all computed `i ≥ onset`.
pub fn detect_periodicity<K: Field>(res: &FreeResolution<K>) -> Result<Periodicity> {
    let none = Periodicity { periodic: false, period: None, onset: None };
    if res.terminated() {
        return Ok(none);
    }
    let n = res.differentials.len();
    if n < 6 {
        return Err(Error::InsufficientWindow(format!("{n} differentials; periodicity needs at least 6")));
    }
    for p in 1..=n / 3 {
        for onset in 1..=n.saturating_sub(2 * p) {
            let ok = (onset..=n - p).all(|i| equivalent(&res.differentials[i - 1], &res.differentials[i + p - 1]));
            if ok {
                return Ok(Periodicity { periodic: true, period: Some(p), onset: Some(onset) });
            }
        }
    }
    Ok(none)
}

fn monic_entry<K: Field>(p: &Polynomial<K>) -> Polynomial<K> {
    p.monic()
}

/// `b` equals `a` after permuting rows and columns and scaling columns.
fn equivalent<K: Field>(a: &Matrix<K>, b: &Matrix<K>) -> bool {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return false;
    }
    let (r, c) = (a.nrows(), a.ncols());
    // row signatures: multiset of monic entries, invariant under the allowed moves
    let sig = |m: &Matrix<K>, i: usize| {
        let mut v: Vec<String> = (0..c).map(|j| format!("{:?}", monic_entry(m.get(i, j)))).collect();
        v.sort();
        v
    };
    let sa: Vec<Vec<String>> = (0..r).map(|i| sig(a, i)).collect();
    let sb: Vec<Vec<String>> = (0..r).map(|i| sig(b, i)).collect();
    let mut perm = vec![usize::MAX; r];
    let mut used = vec![false; r];
    let mut budget = 200_000usize;
    search(a, b, &sa, &sb, 0, &mut perm, &mut used, &mut budget)
}

#[allow(clippy::too_many_arguments)]
fn search<K: Field>(
    a: &Matrix<K>,
    b: &Matrix<K>,
    sa: &[Vec<String>],
    sb: &[Vec<String>],
    i: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    budget: &mut usize,
) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let r = a.nrows();
    if i == r {
        return columns_match(a, b, perm);
    }
    for k in 0..r {
        if !used[k] && sa[i] == sb[k] {
            used[k] = true;
            perm[i] = k;
            if search(a, b, sa, sb, i + 1, perm, used, budget) {
                return true;
            }
            used[k] = false;
        }
    }
    false
}

fn columns_match<K: Field>(a: &Matrix<K>, b: &Matrix<K>, perm: &[usize]) -> bool {
    let normalize = |col: Vec<Polynomial<K>>| -> Vec<Polynomial<K>> {
        let lead = col.iter().find(|p| !p.is_zero()).map(|p| p.terms()[0].1.clone());
        match lead.and_then(|c| c.inv()) {
            Some(inv) => col.iter().map(|p| p.scale(&inv)).collect(),
            None => col,
        }
    };
    let mut ca: Vec<String> = (0..a.ncols())
        .map(|j| format!("{:?}", normalize((0..a.nrows()).map(|i| a.get(i, j).clone()).collect())))
        .collect();
    let mut cb: Vec<String> = (0..b.ncols())
        .map(|j| format!("{:?}", normalize((0..a.nrows()).map(|i| b.get(perm[i], j).clone()).collect())))
        .collect();
    ca.sort();
    cb.sort();
    ca == cb
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, F32003};
    use crate::rings::make_quotient_ring;

    fn ring(vars: &[&str], ideal: &[&str]) -> Ring<F32003> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let gens = ideal.iter().map(|s| parse_polynomial(s, &names).unwrap()).collect();
        make_quotient_ring(names, vec![1; vars.len()], gens).unwrap()
    }

    fn table(b: &[usize]) -> BettiTable {
        BettiTable { betti: b.to_vec(), graded: Vec::new(), bound: b.len() - 1, terminated: false }
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(complexity_estimate(&table(&[1, 2, 3, 4, 5, 6, 7]), 2).unwrap().value, 2);
        assert_eq!(complexity_estimate(&table(&[1; 9]), 2).unwrap().value, 1);
        assert_eq!(complexity_estimate(&table(&[4, 1, 0, 0, 0, 0]), 1).unwrap().value, 0);
        // period-two oscillation is bounded
        assert_eq!(complexity_estimate(&table(&[1, 2, 3, 2, 3, 2, 3, 2]), 2).unwrap().value, 1);
        let clamped = complexity_estimate(&table(&[1, 2, 4, 8, 16, 32, 64, 128]), 2).unwrap();
        assert!(clamped.conflict);
        assert_eq!(clamped.value, 2);
        assert!(complexity_estimate(&table(&[1, 2, 3]), 2).is_err());
    }

    #[test]
    fn example_resolutions() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let names = r.variable_names().to_vec();
        let p = |s: &str| parse_polynomial::<F32003>(s, &names).unwrap();
        let m = ModulePresentation::cyclic(&r, vec![p("y"), p("u")]).unwrap();
        let res = resolve(&m, Over::Quotient, 6).unwrap();
        assert!(res.check_complex() && res.check_minimal());
        assert_eq!(betti_table(&res).unwrap().betti, vec![1, 2, 3, 4, 5, 6, 7]);
        assert!(!detect_periodicity(&res).unwrap().periodic);

        let mx = ModulePresentation::cyclic(&r, vec![p("x")]).unwrap();
        let res = resolve(&mx, Over::Quotient, 8).unwrap();
        assert_eq!(betti_table(&res).unwrap().betti, vec![1; 9]);
        let per = detect_periodicity(&res).unwrap();
        assert_eq!((per.periodic, per.period, per.onset), (true, Some(2), Some(1)));

        let s = resolve(&m, Over::Ambient, 1).unwrap();
        assert!(s.terminated());
        // (xy, zu) ⊆ (y, u), so over S this is a complete intersection quotient
        assert_eq!(s.projective_dimension(), Some(2));
    }

    #[test]
    fn hypersurface_module_has_pd_one() {
        let r = ring(&["x", "y", "w", "z"], &["x*w - y*z"]);
        let names = r.variable_names().to_vec();
        let p = |s: &str| parse_polynomial::<F32003>(s, &names).unwrap();
        let m = ModulePresentation::from_rows(&r, vec![0; 4], vec![vec![p("w")], vec![p("y")], vec![p("x")], vec![p("z")]]).unwrap();
        let res = resolve(&m, Over::Quotient, 5).unwrap();
        let b = betti_table(&res).unwrap();
        assert_eq!(&b.betti[..2], &[4, 1]);
        assert!(res.terminated());
        assert_eq!(res.projective_dimension(), Some(1));
        assert!(!detect_periodicity(&res).unwrap().periodic);
    }
}
