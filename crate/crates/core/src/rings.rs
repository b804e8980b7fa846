//! Graded quotient rings `R = S/(f_1..f_c)` of a standard-graded polynomial
//! ring `S`, with regular-sequence certificates and minimal primes.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Field, FieldTag, Matrix, Monomial, Polynomial, TermOrder};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, ideal_basis, monomial_quotient_dimension, Ambient};

pub type Ring<K> = Arc<RingPresentation<K>>;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Per-prefix dimensions `dim S/(f_1..f_k)`, `k = 0..=c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularSequenceCertificate {
    pub ok: bool,
    pub dims: Vec<usize>,
    /// First `k` (1-based) whose dimension did not drop by one.
    pub failed_at: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PrimeStatus {
    /// Read off a monomial quotient ideal (exact).
    Computed,
    /// User supplied; containment checked, primality sampled.
    SpotChecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdeal<K> {
    pub generators: Vec<Polynomial<K>>,
    pub status: PrimeStatus,
}

#[derive(Debug)]
pub struct RingPresentation<K> {
    id: u64,
    names: Vec<String>,
    quotient_gens: Vec<Polynomial<K>>,
    ambient: Ambient<K>,
    certificate: RegularSequenceCertificate,
    minimal_primes: Option<Vec<PrimeIdeal<K>>>,
    warnings: Vec<String>,
    polynomial_ring: OnceLock<Ring<K>>,
}

impl<K: Field> RingPresentation<K> {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn field_tag(&self) -> FieldTag {
        K::tag()
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn variable_names(&self) -> &[String] {
        &self.names
    }

    pub fn quotient_generators(&self) -> &[Polynomial<K>] {
        &self.quotient_gens
    }

    /// Number of quotient generators `c`.
    pub fn codim(&self) -> usize {
        self.quotient_gens.len()
    }

    pub fn ambient(&self) -> &Ambient<K> {
        &self.ambient
    }

    pub fn ideal_basis(&self) -> &[Polynomial<K>] {
        &self.ambient.ideal
    }

    pub fn certificate(&self) -> &RegularSequenceCertificate {
        &self.certificate
    }

    pub fn is_complete_intersection(&self) -> bool {
        self.certificate.ok
    }

    pub fn minimal_primes(&self) -> Option<&[PrimeIdeal<K>]> {
        self.minimal_primes.as_deref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// `dim R`.
    pub fn dim(&self) -> usize {
        *self.certificate.dims.last().expect("at least dim S")
    }

    pub fn ambient_dim(&self) -> usize {
        self.nvars()
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.quotient_gens.is_empty()
    }

    /// The ambient `S` as a ring in its own right.
    pub fn polynomial_ring(self: &Arc<Self>) -> Ring<K> {
        if self.is_polynomial_ring() {
            return self.clone();
        }
        self.polynomial_ring
            .get_or_init(|| make_quotient_ring(self.names.clone(), vec![1; self.nvars()], Vec::new()).expect("S is valid"))
            .clone()
    }

    pub fn same_ring(&self, other: &RingPresentation<K>) -> bool {
        self.id == other.id
    }

    pub fn fmt_poly(&self, p: &Polynomial<K>) -> String {
        p.fmt_with(&self.names)
    }

    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.quotient_gens.iter().map(|f| self.fmt_poly(f)).collect();
        format!("{}[{}]/({})", K::tag(), self.names.join(","), gens.join(", "))
    }
}

/// Build `S/(f_1..f_c)` over `K`. Only standard grading is supported.
pub fn make_quotient_ring<K: Field>(
    names: Vec<String>,
    degrees: Vec<u32>,
    quotient_gens: Vec<Polynomial<K>>,
) -> Result<Ring<K>> {
    if degrees.len() != names.len() {
        return Err(Error::IncompatibleOperands("one degree per variable is required".into()));
    }
    if let Some(d) = degrees.iter().find(|&&d| d != 1) {
        return Err(Error::GradedViolation(format!("variable weight {d}: only standard grading is supported")));
    }
    for (i, a) in names.iter().enumerate() {
        if names[..i].contains(a) {
            return Err(Error::IncompatibleOperands(format!("duplicate variable `{a}`")));
        }
    }
    if names.len() > 16 {
        return Err(Error::Guardrail("at most 16 variables".into()));
    }
    let n = names.len();
    let mut warnings = Vec::new();
    for f in &quotient_gens {
        if f.nvars() != n {
            return Err(Error::IncompatibleOperands("quotient generator over a different variable set".into()));
        }
        match f.degree_if_homogeneous() {
            Some(1) => warnings.push(format!("quotient generator {} has degree 1", f.fmt_with(&names))),
            Some(_) => {}
            None if f.is_zero() => {
                return Err(Error::GradedViolation("zero quotient generator".into()));
            }
            None => {
                return Err(Error::GradedViolation(format!(
                    "quotient generator {} is not homogeneous",
                    f.fmt_with(&names)
                )))
            }
        }
        if f.is_constant() {
            return Err(Error::GradedViolation("constant quotient generator".into()));
        }
    }
    let order = TermOrder::Grevlex;
    let ideal = ideal_basis(&quotient_gens, n, order)?;
    let ambient = Ambient { nvars: n, order, ideal };
    let certificate = regular_sequence_certificate(&quotient_gens, n, order)?;
    let minimal_primes = monomial_minimal_primes(&ambient);
    Ok(Arc::new(RingPresentation {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        names,
        quotient_gens,
        ambient,
        certificate,
        minimal_primes,
        warnings,
        polynomial_ring: OnceLock::new(),
    }))
}

fn ideal_dimension<K: Field>(gens: &[Polynomial<K>], n: usize, order: TermOrder) -> Result<usize> {
    let gb = ideal_basis(gens, n, order)?;
    let leads: Vec<Monomial> = gb.iter().filter_map(|g| g.leading_term(order).map(|(m, _)| m.clone())).collect();
    // the unit ideal cannot occur for homogeneous non-constant generators
    Ok(monomial_quotient_dimension(&leads, n).unwrap_or(0))
}

fn regular_sequence_certificate<K: Field>(
    gens: &[Polynomial<K>],
    n: usize,
    order: TermOrder,
) -> Result<RegularSequenceCertificate> {
    let mut dims = vec![n];
    let mut failed_at = None;
    for k in 1..=gens.len() {
        let d = ideal_dimension(&gens[..k], n, order)?;
        if failed_at.is_none() && d + 1 != dims[k - 1] {
            failed_at = Some(k);
        }
        dims.push(d);
    }
    Ok(RegularSequenceCertificate { ok: failed_at.is_none(), dims, failed_at })
}

/// Verdict on whether the quotient generators form a regular sequence.
pub fn verify_regular_sequence<K: Field>(r: &RingPresentation<K>) -> RegularSequenceCertificate {
    r.certificate.clone()
}

pub fn ring_dimension<K: Field>(r: &RingPresentation<K>) -> usize {
    r.dim()
}

/// Minimal primes of a monomial ideal: minimal vertex covers of the supports.
fn monomial_minimal_primes<K: Field>(amb: &Ambient<K>) -> Option<Vec<PrimeIdeal<K>>> {
    let n = amb.nvars;
    let mut supports = Vec::new();
    for g in &amb.ideal {
        if g.len() != 1 {
            return None;
        }
        supports.push(g.terms()[0].0.support().fold(0u64, |acc, v| acc | (1 << v)));
    }
    let mut covers: Vec<u64> = Vec::new();
    let mut sets: Vec<u64> = (0u64..(1u64 << n)).collect();
    sets.sort_by_key(|s| (s.count_ones(), *s));
    for s in sets {
        if supports.iter().all(|g| g & s != 0) && !covers.iter().any(|c| c & s == *c) {
            covers.push(s);
        }
    }
    Some(
        covers
            .into_iter()
            .map(|c| PrimeIdeal {
                generators: (0..n).filter(|v| c & (1 << v) != 0).map(|v| Polynomial::var(n, v)).collect(),
                status: PrimeStatus::Computed,
            })
            .collect(),
    )
}

/// Attach user-declared minimal primes of `R`, after checking that each
/// contains `I`, that none contains another, and that random products of
/// non-members stay outside (a primality sample, not a proof).
pub fn declare_minimal_primes<K: Field>(r: &Ring<K>, primes: Vec<Vec<Polynomial<K>>>) -> Result<Ring<K>> {
    let n = r.nvars();
    let amb = Ambient::polynomial_ring(n, r.ambient.order);
    let mut bases = Vec::new();
    for q in &primes {
        let mut gens = q.clone();
        gens.extend(r.quotient_gens.iter().cloned());
        let gb = ideal_basis(&gens, n, r.ambient.order)?;
        if gb.iter().any(|g| g.is_constant()) {
            return Err(Error::HypothesisMissing { what: "declared prime is the unit ideal".into(), witness: None });
        }
        // I ⊆ q
        let qm = Matrix::from_rows(n, vec![0], vec![q.iter().filter(|p| !p.is_zero()).cloned().collect()])?;
        let qgb = groebner_basis(&qm, &amb, false)?;
        for f in &r.quotient_gens {
            if !qgb.contains(std::slice::from_ref(f))? {
                return Err(Error::HypothesisMissing {
                    what: "declared prime does not contain the quotient ideal".into(),
                    witness: Some(r.fmt_poly(f)),
                });
            }
        }
        bases.push(qgb);
    }
    for i in 0..bases.len() {
        for j in 0..bases.len() {
            if i != j && primes[i].iter().all(|p| bases[j].contains(std::slice::from_ref(p)).unwrap_or(false)) {
                return Err(Error::HypothesisMissing {
                    what: "declared primes are not pairwise incomparable".into(),
                    witness: None,
                });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (k, gb) in bases.iter().enumerate() {
        for _ in 0..40 {
            let a = random_form::<K>(n, rng.gen_range(1..=2), &mut rng);
            let b = random_form::<K>(n, rng.gen_range(1..=2), &mut rng);
            let inside = |p: &Polynomial<K>| gb.contains(std::slice::from_ref(p)).unwrap_or(true);
            if !inside(&a) && !inside(&b) && inside(&a.mul(&b)) {
                return Err(Error::HypothesisMissing {
                    what: format!("declared prime #{k} failed the primality sample"),
                    witness: Some(format!("({}) * ({})", r.fmt_poly(&a), r.fmt_poly(&b))),
                });
            }
        }
    }
    Ok(Arc::new(RingPresentation {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        names: r.names.clone(),
        quotient_gens: r.quotient_gens.clone(),
        ambient: r.ambient.clone(),
        certificate: r.certificate.clone(),
        minimal_primes: Some(
            primes.into_iter().map(|g| PrimeIdeal { generators: g, status: PrimeStatus::SpotChecked }).collect(),
        ),
        warnings: r.warnings.clone(),
        polynomial_ring: OnceLock::new(),
    }))
}

/// A random homogeneous form of degree `d` with small support.
pub fn random_form<K: Field>(n: usize, d: u32, rng: &mut impl Rng) -> Polynomial<K> {
    let monos = Monomial::all_of_degree(n, d);
    let k = rng.gen_range(1..=3.min(monos.len()));
    let terms = (0..k).map(|_| (monos[rng.gen_range(0..monos.len())].clone(), K::sample_nonzero(rng)));
    Polynomial::from_terms(n, terms)
}

/// `S' = S/(f_j : j ≠ split)` and the designated `f = f_split`.
pub fn split_ring<K: Field>(r: &RingPresentation<K>, split: usize) -> Result<(Ring<K>, Polynomial<K>)> {
    if split >= r.codim() {
        return Err(Error::InvalidSplit(format!("index {split} but the ring has {} quotient generators", r.codim())));
    }
    let others: Vec<Polynomial<K>> =
        r.quotient_gens.iter().enumerate().filter(|(i, _)| *i != split).map(|(_, f)| f.clone()).collect();
    let sp = make_quotient_ring(r.names.clone(), vec![1; r.nvars()], others)?;
    if !sp.is_complete_intersection() {
        return Err(Error::InvalidSplit("the remaining generators are not a regular sequence".into()));
    }
    Ok((sp, r.quotient_gens[split].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, F32003};

    fn ring(vars: &[&str], ideal: &[&str]) -> Ring<F32003> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let gens = ideal.iter().map(|s| parse_polynomial(s, &names).unwrap()).collect();
        make_quotient_ring(names, vec![1; vars.len()], gens).unwrap()
    }

    #[test]
    fn catalog_rings() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        assert_eq!(r.codim(), 2);
        assert_eq!(verify_regular_sequence(&r).dims, vec![4, 3, 2]);
        assert_eq!(ring_dimension(&r), 2);
        assert_eq!(r.minimal_primes().unwrap().len(), 4);
        let swapped = ring(&["x", "y", "z", "u"], &["z*u", "x*y"]);
        assert_eq!(swapped.certificate().ok, r.certificate().ok);

        let h = ring(&["x", "y", "w", "z"], &["x*w - y*z"]);
        assert_eq!(verify_regular_sequence(&h).dims, vec![4, 3]);
        assert!(h.minimal_primes().is_none());

        let s = ring(&["x", "y"], &[]);
        assert_eq!(s.codim(), 0);
        assert_eq!(ring_dimension(&s), 2);
        assert_eq!(s.minimal_primes().unwrap()[0].generators.len(), 0);
    }

    #[test]
    fn repeated_element_is_not_regular() {
        let r = ring(&["x", "y"], &["x^2", "x^2"]);
        let c = verify_regular_sequence(&r);
        assert!(!c.ok);
        assert_eq!(c.failed_at, Some(2));
        assert_eq!(c.dims, vec![2, 1, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        let names: Vec<String> = vec!["x".into(), "y".into()];
        let p: Polynomial<F32003> = parse_polynomial("x + y^2", &names).unwrap();
        assert!(matches!(make_quotient_ring(names.clone(), vec![1, 1], vec![p]), Err(Error::GradedViolation(_))));
        assert!(make_quotient_ring::<F32003>(names, vec![1, 2], vec![]).is_err());
        let w = ring(&["x", "y"], &["x"]);
        assert_eq!(w.warnings().len(), 1);
    }

    #[test]
    fn declared_primes_are_checked() {
        let h = ring(&["x", "y", "w", "z"], &["x*w - y*z"]);
        let names = h.variable_names().to_vec();
        let f = parse_polynomial("x*w - y*z", &names).unwrap();
        let h2 = declare_minimal_primes(&h, vec![vec![f]]).unwrap();
        assert_eq!(h2.minimal_primes().unwrap()[0].status, PrimeStatus::SpotChecked);
        let bad = parse_polynomial("x", &names).unwrap();
        assert!(declare_minimal_primes(&h, vec![vec![bad]]).is_err());
        let r = ring(&["x", "y"], &["x*y"]);
        let xy = parse_polynomial("x*y", r.variable_names()).unwrap();
        assert!(declare_minimal_primes(&r, vec![vec![xy]]).is_err());
    }
}
