//! Gröbner bases of graded submodules of free modules over `S` and over
//! quotients `R = S/I`, plus normal forms, syzygies and kernels.
//!
//! Work over `R` appends the relations `g·e_t` (for `g` in the reduced basis
//! of `I`) to every computation in `S` and projects them away afterwards.

mod buchberger;
mod order;
mod schreyer;
mod vector;

pub use order::{ModuleOrder, PositionRule};
pub use schreyer::{prune, schreyer_frame};

use buchberger::{interreduce, Buchberger, Reducers};
use vector::{Term, Vector};

use crate::algebra::{Field, Matrix, Monomial, Polynomial, TermOrder};
use crate::error::{Error, Result};

/// The polynomial ring with a term order and a (possibly empty) reduced
/// Gröbner basis of the quotient ideal under that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambient<K> {
    pub nvars: usize,
    pub order: TermOrder,
    pub ideal: Vec<Polynomial<K>>,
}

impl<K: Field> Ambient<K> {
    /// The ambient polynomial ring itself (no quotient).
    pub fn polynomial_ring(nvars: usize, order: TermOrder) -> Self {
        Ambient { nvars, order, ideal: Vec::new() }
    }

    pub fn without_quotient(&self) -> Self {
        Ambient { nvars: self.nvars, order: self.order, ideal: Vec::new() }
    }

    fn ideal_relations(&self, positions: std::ops::Range<usize>, order: &ModuleOrder) -> Vec<Vector<K>> {
        let mut out = Vec::new();
        for t in positions {
            for g in &self.ideal {
                out.push(single(g, t, order));
            }
        }
        out
    }

    /// Reducers for `I·F` on a free module with the given shifts.
    fn ideal_reducers(&self, order: &ModuleOrder) -> Reducers<K> {
        let mut r = Reducers::new(order.rank());
        for v in self.ideal_relations(0..order.rank(), order) {
            r.push(v);
        }
        r
    }

    /// Reduce a polynomial modulo `I`.
    pub fn reduce(&self, p: &Polynomial<K>) -> Polynomial<K> {
        let order = ModuleOrder::top(self.order, vec![0]);
        let r = self.ideal_reducers(&order);
        let v = r.normal_form(Vector::from_components(std::slice::from_ref(p), &order), &order);
        v.to_components(1, self.nvars).pop().expect("one component")
    }

    /// Reduce every entry of a matrix modulo `I`.
    pub fn reduce_matrix(&self, m: &Matrix<K>) -> Matrix<K> {
        if self.ideal.is_empty() {
            return m.clone();
        }
        m.map_entries(|p| self.reduce(p))
    }
}

fn single<K: Field>(p: &Polynomial<K>, pos: usize, order: &ModuleOrder) -> Vector<K> {
    let mut terms: Vec<Term<K>> =
        p.terms().iter().map(|(m, c)| Term { pos, mono: m.clone(), coeff: c.clone() }).collect();
    terms.sort_by(|a, b| order.cmp(b.pos, &b.mono, a.pos, &a.mono));
    Vector { terms }
}

/// Gröbner basis of a graded submodule `U ⊆ ⊕ S(-shifts[i])`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<K> {
    nvars: usize,
    order: ModuleOrder,
    reducers: Reducers<K>,
    reduced: bool,
    minimal: Vec<usize>,
}

impl<K: Field> GroebnerBasis<K> {
    pub fn len(&self) -> usize {
        self.reducers.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reducers.elements.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.order.rank()
    }

    /// Basis elements as component vectors.
    pub fn elements(&self) -> Vec<Vec<Polynomial<K>>> {
        self.reducers.elements.iter().map(|v| v.to_components(self.rank(), self.nvars)).collect()
    }

    /// Indices of the input generators that form a minimal generating set
    /// modulo the quotient relations.
    pub fn minimal_generators(&self) -> &[usize] {
        &self.minimal
    }

    pub fn normal_form(&self, e: &[Polynomial<K>]) -> Result<Vec<Polynomial<K>>> {
        if e.len() != self.rank() || e.iter().any(|p| p.nvars() != self.nvars) {
            return Err(Error::IncompatibleOperands("element does not live in the basis' free module".into()));
        }
        let v = self.reducers.normal_form(Vector::from_components(e, &self.order), &self.order);
        Ok(v.to_components(self.rank(), self.nvars))
    }

    pub fn contains(&self, e: &[Polynomial<K>]) -> Result<bool> {
        Ok(self.normal_form(e)?.iter().all(|p| p.is_zero()))
    }

    pub fn leading_monomials(&self, pos: usize) -> Vec<Monomial> {
        self.reducers.leads_at(pos).cloned().collect()
    }

    /// Buchberger's criterion, checked over every pair with equal lead position.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let els = &self.reducers.elements;
        for i in 0..els.len() {
            for j in i + 1..els.len() {
                let (a, b) = (&els[i].terms[0], &els[j].terms[0]);
                if a.pos != b.pos {
                    continue;
                }
                let lcm = a.mono.lcm(&b.mono);
                let qa = a.mono.quotient_of(&lcm).expect("lcm");
                let qb = b.mono.quotient_of(&lcm).expect("lcm");
                let ca = a.coeff.inv().expect("nonzero");
                let cb = b.coeff.inv().expect("nonzero");
                let left = Vector {
                    terms: els[i]
                        .terms
                        .iter()
                        .map(|t| Term { pos: t.pos, mono: t.mono.mul(&qa), coeff: t.coeff.clone() * ca.clone() })
                        .collect(),
                };
                let left = left.sub_mul_from(0, &cb, &qb, &els[j], &self.order);
                if !self.reducers.normal_form(left, &self.order).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Number of standard monomials `m·e_i` of shifted degree `t`,
    /// i.e. `dim_k (F/U)_t`.
    pub fn hilbert_function(&self, t: i32) -> u64 {
        (0..self.rank())
            .map(|i| {
                let d = t - self.order.shifts[i];
                if d < 0 {
                    return 0;
                }
                let leads = self.leading_monomials(i);
                count_standard(&leads, self.nvars, d as u32)
            })
            .sum()
    }

    /// Krull dimension of `F/U` (`None` for the zero module).
    pub fn krull_dimension(&self) -> Option<usize> {
        (0..self.rank()).filter_map(|i| monomial_quotient_dimension(&self.leading_monomials(i), self.nvars)).max()
    }

    /// Total number of standard monomials when `F/U` has finite length.
    pub fn standard_monomial_count(&self) -> Option<u64> {
        match self.krull_dimension() {
            None => Some(0),
            Some(0) => {
                // standard monomials form an order ideal: the first empty degree ends it
                let mut total = 0;
                for i in 0..self.rank() {
                    let leads = self.leading_monomials(i);
                    let mut d = 0;
                    loop {
                        let h = count_standard(&leads, self.nvars, d);
                        if h == 0 {
                            break;
                        }
                        total += h;
                        d += 1;
                    }
                }
                Some(total)
            }
            Some(_) => None,
        }
    }
}

/// Monomials of degree `d` not divisible by any of `leads`.
pub fn count_standard(leads: &[Monomial], nvars: usize, d: u32) -> u64 {
    if leads.iter().any(|m| m.is_one()) {
        return 0;
    }
    if nvars == 0 {
        return (d == 0) as u64;
    }
    if leads.is_empty() {
        return binomial(d as u64 + nvars as u64 - 1, nvars as u64 - 1);
    }
    Monomial::all_of_degree(nvars, d).iter().filter(|m| !leads.iter().any(|l| l.divides(m))).count() as u64
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Dimension of `S/J` for a monomial ideal `J`: the largest set of variables
/// containing the support of no generator. `None` if `J` is the unit ideal.
pub fn monomial_quotient_dimension(leads: &[Monomial], nvars: usize) -> Option<usize> {
    if leads.iter().any(|m| m.is_one()) {
        return None;
    }
    let supports: Vec<u64> = leads.iter().map(|m| m.support().fold(0u64, |acc, v| acc | (1 << v))).collect();
    let mut best = 0;
    for set in 0u64..(1u64 << nvars) {
        let size = set.count_ones() as usize;
        if size > best && supports.iter().all(|s| s & !set != 0) {
            best = size;
        }
    }
    Some(best)
}

fn check_matrix<K: Field>(a: &Matrix<K>, amb: &Ambient<K>) -> Result<()> {
    if a.nvars() != amb.nvars {
        return Err(Error::IncompatibleOperands("matrix over a different variable set".into()));
    }
    Ok(())
}

/// Gröbner basis of `im(gens) + I·F` in the target free module of `gens`.
pub fn groebner_basis<K: Field>(gens: &Matrix<K>, amb: &Ambient<K>, reduced: bool) -> Result<GroebnerBasis<K>> {
    check_matrix(gens, amb)?;
    gens.check_homogeneous()?;
    let order = ModuleOrder::top(amb.order, gens.row_degrees().to_vec());
    let candidates: Vec<Vector<K>> = gens.columns().iter().map(|c| Vector::from_components(c, &order)).collect();
    let out = Buchberger {
        order: &order,
        fixed: amb.ideal_relations(0..order.rank(), &order),
        gens: candidates,
        degree_bound: None,
        product_criterion: order.rank() == 1,
    }
    .run()?;
    let mut basis = out.basis;
    if reduced {
        interreduce(&mut basis, &order);
    }
    Ok(GroebnerBasis { nvars: amb.nvars, order, reducers: basis, reduced, minimal: out.minimal })
}

/// Reduced Gröbner basis of a homogeneous ideal of `S`, sorted by ascending
/// leading monomial.
pub fn ideal_basis<K: Field>(gens: &[Polynomial<K>], nvars: usize, order: TermOrder) -> Result<Vec<Polynomial<K>>> {
    for g in gens {
        if g.nvars() != nvars {
            return Err(Error::IncompatibleOperands("generator over a different variable set".into()));
        }
        if !g.is_homogeneous() {
            return Err(Error::GradedViolation(format!("inhomogeneous ideal generator {:?}", g.homogeneous_degree())));
        }
    }
    let rows = vec![gens.iter().filter(|g| !g.is_zero()).cloned().collect::<Vec<_>>()];
    let m = Matrix::from_rows(nvars, vec![0], rows)?;
    let gb = groebner_basis(&m, &Ambient::polynomial_ring(nvars, order), true)?;
    let mut polys: Vec<(Monomial, Polynomial<K>)> = gb
        .reducers
        .elements
        .iter()
        .map(|v| (v.terms[0].mono.clone(), v.to_components(1, nvars).pop().expect("rank one")))
        .collect();
    polys.sort_by(|a, b| order.cmp(&a.0, &b.0));
    Ok(polys.into_iter().map(|(_, p)| p).collect())
}

/// Minimal generators of `im(a)` modulo `I·F`, each reduced modulo `I`.
pub fn minimal_columns<K: Field>(a: &Matrix<K>, amb: &Ambient<K>) -> Result<Matrix<K>> {
    check_matrix(a, amb)?;
    let order = ModuleOrder::top(amb.order, a.row_degrees().to_vec());
    let candidates: Vec<Vector<K>> = a.columns().iter().map(|c| Vector::from_components(c, &order)).collect();
    minimal_from_vectors(candidates, &order, amb)
}

fn minimal_from_vectors<K: Field>(candidates: Vec<Vector<K>>, order: &ModuleOrder, amb: &Ambient<K>) -> Result<Matrix<K>> {
    let rank = order.rank();
    // minimality in degree d only sees the basis through degree d
    let top = candidates.iter().filter_map(|v| v.degree(order)).max();
    let out = Buchberger {
        order,
        fixed: amb.ideal_relations(0..rank, order),
        gens: candidates.clone(),
        degree_bound: Some(top.unwrap_or(i32::MIN)),
        product_criterion: rank == 1,
    }
    .run()?;
    let reducers = amb.ideal_reducers(order);
    let mut cols = Vec::new();
    let mut degs = Vec::new();
    for k in out.minimal {
        let v = reducers.normal_form(candidates[k].clone(), order);
        degs.push(v.degree(order).expect("minimal generator is nonzero"));
        cols.push(v.to_components(rank, amb.nvars));
    }
    Ok(Matrix::from_columns_unchecked(amb.nvars, order.shifts.clone(), degs, cols))
}

/// Minimal generators of the kernel of `a` over `R = S/I`, as the columns of
/// a matrix whose target is the source of `a`.
pub fn syzygies<K: Field>(a: &Matrix<K>, amb: &Ambient<K>) -> Result<Matrix<K>> {
    check_matrix(a, amb)?;
    a.check_homogeneous()?;
    let (r, n) = (a.nrows(), a.ncols());
    if n == 0 {
        return Ok(Matrix::empty(amb.nvars, Vec::new()));
    }
    let top = ModuleOrder::top(amb.order, a.row_degrees().to_vec());
    let top_reducers = amb.ideal_reducers(&top);
    let reduced: Vec<Vector<K>> = a
        .columns()
        .iter()
        .map(|c| top_reducers.normal_form(Vector::from_components(c, &top), &top))
        .collect();
    let schreyer = if reduced.iter().all(|v| !v.is_zero()) {
        Some(reduced.iter().map(|v| (v.terms[0].pos, v.terms[0].mono.clone())).collect())
    } else {
        None
    };
    let mut shifts = a.row_degrees().to_vec();
    shifts.extend_from_slice(a.col_degrees());
    let order = ModuleOrder {
        mono: amb.order,
        rule: PositionRule::TermOverPosition,
        shifts,
        split: Some(r),
        schreyer,
    };
    let gens: Vec<Vector<K>> = reduced
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let mut terms: Vec<Term<K>> = v.terms.clone();
            terms.push(Term { pos: r + j, mono: Monomial::one(amb.nvars), coeff: K::one() });
            terms.sort_by(|x, y| order.cmp(y.pos, &y.mono, x.pos, &x.mono));
            Vector { terms }
        })
        .collect();
    let out = Buchberger {
        order: &order,
        fixed: amb.ideal_relations(0..r + n, &order),
        gens,
        degree_bound: None,
        product_criterion: false,
    }
    .run()?;
    let bottom = ModuleOrder::top(amb.order, a.col_degrees().to_vec());
    let kernel: Vec<Vector<K>> = out
        .basis
        .elements
        .iter()
        .filter(|v| v.terms[0].pos >= r)
        .map(|v| {
            let comps = v.to_components_range(r, n, amb.nvars);
            Vector::from_components(&comps, &bottom)
        })
        .collect();
    minimal_from_vectors(kernel, &bottom, amb)
}

/// Presentation of `(im K + im L) / im L` on the columns of `K`: the returned
/// matrix has target shifts `K.col_degrees()`.
pub fn subquotient<K: Field>(k: &Matrix<K>, l: &Matrix<K>, amb: &Ambient<K>) -> Result<Matrix<K>> {
    let p = k.ncols();
    if p == 0 {
        return Ok(Matrix::empty(amb.nvars, Vec::new()));
    }
    let s = syzygies(&k.hconcat(l)?, amb)?;
    Ok(s.take_rows(p))
}

/// Kernel of a map `coker(source_rel) → coker(target_rel)` given on generators
/// by `psi`. Returns `(generators, relations)`: the generators are columns in
/// the source free module and the relations present the kernel on them.
pub fn kernel_of_map<K: Field>(
    psi: &Matrix<K>,
    source_rel: &Matrix<K>,
    target_rel: &Matrix<K>,
    amb: &Ambient<K>,
) -> Result<(Matrix<K>, Matrix<K>)> {
    if psi.row_degrees() != target_rel.row_degrees() || psi.col_degrees() != source_rel.row_degrees() {
        return Err(Error::IncompatibleOperands("map does not match the presentations".into()));
    }
    let p = psi.ncols();
    let gens = syzygies(&psi.hconcat(target_rel)?, amb)?.take_rows(p);
    let gens = minimal_columns(&gens, amb)?;
    let rel = subquotient(&gens, source_rel, amb)?;
    Ok((gens, rel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, F32003};

    type P = Polynomial<F32003>;

    fn names() -> Vec<String> {
        ["x", "y", "z", "u"].iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str) -> P {
        parse_polynomial(s, &names()).unwrap()
    }

    fn ring() -> Ambient<F32003> {
        Ambient { nvars: 4, order: TermOrder::Grevlex, ideal: ideal_basis(&[p("x*y"), p("z*u")], 4, TermOrder::Grevlex).unwrap() }
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let gb = ideal_basis(&[p("x*y"), p("z*u")], 4, TermOrder::Grevlex).unwrap();
        assert_eq!(gb.len(), 2);
        let gb = ideal_basis(&[p("x*u - y*z")], 4, TermOrder::Grevlex).unwrap();
        assert_eq!(gb.len(), 1);
    }

    #[test]
    fn normal_forms() {
        let amb = ring();
        assert!(amb.reduce(&p("x*y")).is_zero());
        assert_eq!(amb.reduce(&p("x^2")), p("x^2"));
        assert!(amb.reduce(&p("y*x*z")).is_zero());
    }

    #[test]
    fn twisted_cubic_basis() {
        // 2x2 minors of [[x,y,z],[y,z,u]]
        let gens = [p("x*z - y^2"), p("x*u - y*z"), p("y*u - z^2")];
        let gb = ideal_basis(&gens, 4, TermOrder::Grevlex).unwrap();
        assert_eq!(gb.len(), 3);
        let lex = ideal_basis(&gens, 4, TermOrder::Lex).unwrap();
        assert!(lex.len() >= 3);
        let m = Matrix::from_rows(4, vec![0], vec![gens.to_vec()]).unwrap();
        let g = groebner_basis(&m, &Ambient::polynomial_ring(4, TermOrder::Lex), false).unwrap();
        assert!(g.satisfies_buchberger_criterion());
    }

    #[test]
    fn syzygies_of_y_u() {
        let amb = ring();
        let a = Matrix::from_rows(4, vec![0], vec![vec![p("y"), p("u")]]).unwrap();
        let s = syzygies(&a, &amb).unwrap();
        assert_eq!(s.ncols(), 3);
        assert!(amb.reduce_matrix(&a.mul(&s).unwrap()).is_zero());
        let shown = Matrix::from_rows(4, vec![1, 1], vec![vec![p("0"), p("-u"), p("x")], vec![p("z"), p("y"), p("0")]]).unwrap();
        let gs = groebner_basis(&s, &amb, true).unwrap();
        let gd = groebner_basis(&shown, &amb, true).unwrap();
        for c in shown.columns() {
            assert!(gs.contains(c).unwrap());
        }
        for c in s.columns() {
            assert!(gd.contains(c).unwrap());
        }
    }

    #[test]
    fn syzygies_trivial_cases() {
        let amb = ring();
        let id = Matrix::<F32003>::identity(4, vec![0, 1]);
        assert_eq!(syzygies(&id, &amb).unwrap().ncols(), 0);
        let names2: Vec<String> = vec!["x".into(), "y".into()];
        let q = |s: &str| -> P { parse_polynomial(s, &names2).unwrap() };
        let amb2 = Ambient { nvars: 2, order: TermOrder::Grevlex, ideal: vec![q("x*y")] };
        let s = syzygies(&Matrix::from_rows(2, vec![0], vec![vec![q("x")]]).unwrap(), &amb2).unwrap();
        assert_eq!(s.ncols(), 1);
        assert_eq!(s.get(0, 0), &q("y"));
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        let names2: Vec<String> = vec!["x".into(), "y".into()];
        let q = |s: &str| -> P { parse_polynomial(s, &names2).unwrap() };
        let amb = Ambient { nvars: 2, order: TermOrder::Grevlex, ideal: vec![q("x*y")] };
        let rel = Matrix::from_rows(2, vec![0], vec![vec![q("y")]]).unwrap();
        let id = Matrix::identity(2, vec![0]);
        let (g, r) = kernel_of_map(&id, &rel, &rel, &amb).unwrap();
        let gb = groebner_basis(&r, &amb, false).unwrap();
        assert!(g.ncols() == 0 || (0..4).all(|t| gb.hilbert_function(t) == 0));
        // multiplication by x on R/(y)
        let x = Matrix::from_rows(2, vec![-1], vec![vec![q("x")]]).unwrap();
        let rel_shift = rel.twist(-1);
        let (_, r) = kernel_of_map(&x, &rel, &rel_shift, &amb).unwrap();
        let gb = groebner_basis(&r, &amb, false).unwrap();
        assert!((0..7).all(|t| gb.hilbert_function(t) == 0));
    }

    #[test]
    fn dimensions_from_leads() {
        let amb = ring();
        let m = Matrix::<F32003>::empty(4, vec![0]);
        let gb = groebner_basis(&m, &amb, false).unwrap();
        assert_eq!(gb.krull_dimension(), Some(2));
        assert_eq!(gb.hilbert_function(0), 1);
        assert_eq!(gb.hilbert_function(1), 4);
        // monomials of degree 2 in 4 vars = 10, minus xy and zu
        assert_eq!(gb.hilbert_function(2), 8);
    }
}
