//! Finitely presented graded modules `M = coker(A: G → F)` over a ring
//! `R = S/I`, with `F = ⊕ R(-a_i)` recorded by its shifts.

mod predicates;

pub use predicates::{
    ambient_projective_dimension, bidual_data, bidual_kernel, biduality_report, depth, fitting_ideal,
    is_maximal_cohen_macaulay, module_profile, nonfree_locus_codim, rank_profile, serre_condition, BidualData,
    BidualityReport, ModuleProfile, RankProfile, SerreReport,
};

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Serialize, Serializer};

use crate::algebra::{Field, Matrix, Polynomial};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, minimal_columns, subquotient, syzygies, Ambient, GroebnerBasis};
use crate::rings::Ring;

/// A natural number or infinity (depth of the zero module, codimension of an
/// empty locus, length of a module of positive dimension).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedNat {
    Finite(usize),
    Infinity,
}

impl ExtendedNat {
    pub fn finite(self) -> Option<usize> {
        match self {
            ExtendedNat::Finite(n) => Some(n),
            ExtendedNat::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == ExtendedNat::Infinity
    }
}

impl fmt::Display for ExtendedNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedNat::Finite(n) => write!(f, "{n}"),
            ExtendedNat::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtendedNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedNat::Finite(n) => s.serialize_u64(*n as u64),
            ExtendedNat::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModulePresentation<K> {
    ring: Ring<K>,
    relations: Matrix<K>,
    gb: OnceLock<Arc<GroebnerBasis<K>>>,
    minimal: OnceLock<Matrix<K>>,
}

impl<K: Field> ModulePresentation<K> {
    /// `coker(relations)`; rows of `relations` are the generators.
    pub fn coker(ring: &Ring<K>, relations: Matrix<K>) -> Result<Self> {
        if relations.nvars() != ring.nvars() {
            return Err(Error::RingMismatch("matrix over a different variable set".into()));
        }
        relations.check_homogeneous()?;
        Ok(ModulePresentation { ring: ring.clone(), relations, gb: OnceLock::new(), minimal: OnceLock::new() })
    }

    /// Build from row-major entries with explicit generator shifts.
    pub fn from_rows(ring: &Ring<K>, shifts: Vec<i32>, rows: Vec<Vec<Polynomial<K>>>) -> Result<Self> {
        if rows.is_empty() && !shifts.is_empty() {
            return Self::free(ring, shifts);
        }
        let m = Matrix::from_rows(ring.nvars(), shifts, rows)?;
        Self::coker(ring, m)
    }

    pub fn free(ring: &Ring<K>, shifts: Vec<i32>) -> Result<Self> {
        Self::coker(ring, Matrix::empty(ring.nvars(), shifts))
    }

    pub fn zero(ring: &Ring<K>) -> Self {
        Self::free(ring, Vec::new()).expect("empty presentation")
    }

    /// `R/(gens)` generated in degree 0.
    pub fn cyclic(ring: &Ring<K>, gens: Vec<Polynomial<K>>) -> Result<Self> {
        Self::from_rows(ring, vec![0], vec![gens])
    }

    pub fn ring(&self) -> &Ring<K> {
        &self.ring
    }

    pub fn ambient(&self) -> &Ambient<K> {
        self.ring.ambient()
    }

    pub fn relations(&self) -> &Matrix<K> {
        &self.relations
    }

    pub fn shifts(&self) -> &[i32] {
        self.relations.row_degrees()
    }

    pub fn num_generators(&self) -> usize {
        self.relations.nrows()
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring)
    }

    pub(crate) fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch("modules live over different rings".into()))
        }
    }

    /// Gröbner basis of `im(A) + I·F`.
    pub fn gb(&self) -> &GroebnerBasis<K> {
        self.gb.get_or_init(|| {
            Arc::new(groebner_basis(&self.relations, self.ambient(), false).expect("homogeneous presentation"))
        })
    }

    pub fn hilbert_function(&self, t: i32) -> u64 {
        self.gb().hilbert_function(t)
    }

    /// Hilbert values at degrees `lo..=hi`.
    pub fn hilbert_values(&self, lo: i32, hi: i32) -> Vec<u64> {
        (lo..=hi).map(|t| self.hilbert_function(t)).collect()
    }

    pub fn is_zero(&self) -> bool {
        let gb = self.gb();
        (0..self.num_generators()).all(|i| gb.leading_monomials(i).iter().any(|m| m.is_one()))
    }

    /// Krull dimension (`None` for the zero module).
    pub fn krull_dim(&self) -> Option<usize> {
        self.gb().krull_dimension()
    }

    /// `dim_k M` when finite.
    pub fn length(&self) -> ExtendedNat {
        match self.gb().standard_monomial_count() {
            Some(n) => ExtendedNat::Finite(n as usize),
            None => ExtendedNat::Infinity,
        }
    }

    /// Relations of a minimal presentation (no constant entries).
    pub fn minimal_relations(&self) -> &Matrix<K> {
        self.minimal.get_or_init(|| minimal_presentation(&self.relations, self.ambient()).expect("homogeneous"))
    }

    pub fn minimalize(&self) -> Self {
        let m = self.minimal_relations().clone();
        let out = ModulePresentation { ring: self.ring.clone(), relations: m.clone(), gb: OnceLock::new(), minimal: OnceLock::new() };
        let _ = out.minimal.set(m);
        out
    }

    /// Number of minimal generators.
    pub fn betti0(&self) -> usize {
        self.minimal_relations().nrows()
    }

    /// Presentation over the ambient `S`: the relations with `f_k e_t` appended.
    pub fn ambient_relations(&self) -> Matrix<K> {
        let n = self.ring.nvars();
        let shifts = self.shifts().to_vec();
        let mut extra_cols = Vec::new();
        let mut extra_degs = Vec::new();
        for (t, &a) in shifts.iter().enumerate() {
            for f in self.ring.quotient_generators() {
                let mut col = vec![Polynomial::zero(n); shifts.len()];
                col[t] = f.clone();
                extra_cols.push(col);
                extra_degs.push(a + f.degree_if_homogeneous().expect("homogeneous") as i32);
            }
        }
        let extra = Matrix::from_columns_unchecked(n, shifts, extra_degs, extra_cols);
        self.relations.hconcat(&extra).expect("same target")
    }

    /// The same module regarded over the ambient polynomial ring.
    pub fn over_ambient(&self) -> Self {
        let s = self.ring.polynomial_ring();
        ModulePresentation::coker(&s, self.ambient_relations()).expect("homogeneous")
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        Self::coker(&self.ring, self.relations.direct_sum(&other.relations))
    }

    /// Shift the grading: `M(-s)`.
    pub fn twist(&self, s: i32) -> Self {
        Self::coker(&self.ring, self.relations.twist(s)).expect("homogeneous")
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        tensor(self, other)
    }

    pub fn dual(&self) -> Self {
        dual(self)
    }

    pub fn fmt_relations(&self) -> String {
        self.relations.fmt_with(self.ring.variable_names())
    }
}

/// Eliminate unit entries, then keep minimal generators of the relations.
fn minimal_presentation<K: Field>(rel: &Matrix<K>, amb: &Ambient<K>) -> Result<Matrix<K>> {
    let mut a = amb.reduce_matrix(rel);
    loop {
        let mut pivot = None;
        'search: for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                let e = a.get(i, j);
                if !e.is_zero() && e.is_constant() {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = pivot else { break };
        a = eliminate_unit(&a, i, j);
        a = amb.reduce_matrix(&a);
    }
    minimal_columns(&a, amb)
}

/// Use the unit at `(i, j)` to drop generator `i` and relation `j`.
fn eliminate_unit<K: Field>(a: &Matrix<K>, i: usize, j: usize) -> Matrix<K> {
    let c = a.get(i, j).constant_coeff();
    let cinv = c.inv().expect("unit");
    let pivot_col = a.column(j).to_vec();
    let keep_rows: Vec<usize> = (0..a.nrows()).filter(|&r| r != i).collect();
    let mut cols = Vec::new();
    let mut degs = Vec::new();
    for k in 0..a.ncols() {
        if k == j {
            continue;
        }
        let factor = a.get(i, k).scale(&cinv);
        let col: Vec<Polynomial<K>> = keep_rows
            .iter()
            .map(|&r| {
                let e = a.get(r, k);
                if factor.is_zero() {
                    e.clone()
                } else {
                    e.sub(&factor.mul(&pivot_col[r]))
                }
            })
            .collect();
        cols.push(col);
        degs.push(a.col_degrees()[k]);
    }
    let rows: Vec<i32> = keep_rows.iter().map(|&r| a.row_degrees()[r]).collect();
    Matrix::from_columns_unchecked(a.nvars(), rows, degs, cols)
}

/// `M ⊗_R N`, presented by `[A ⊗ 1 | 1 ⊗ B]` on `F_M ⊗ F_N`.
pub fn tensor<K: Field>(m: &ModulePresentation<K>, n: &ModulePresentation<K>) -> Result<ModulePresentation<K>> {
    m.check_same_ring(n)?;
    let left = m.relations.kron_identity(n.shifts());
    let right = n.relations.identity_kron(m.shifts());
    ModulePresentation::coker(&m.ring, left.hconcat(&right)?)
}

/// Generators of `M* = ker(Aᵀ)` as columns in `F*` (shifts negated).
pub(crate) fn dual_generators<K: Field>(m: &ModulePresentation<K>) -> Result<Matrix<K>> {
    let at = m.relations.transpose();
    syzygies(&at, m.ambient())
}

/// `M* = Hom_R(M, R)`.
pub fn dual<K: Field>(m: &ModulePresentation<K>) -> ModulePresentation<K> {
    let k = dual_generators(m).expect("homogeneous");
    let rel = syzygies(&k, m.ambient()).expect("homogeneous");
    let rel = if k.ncols() == 0 { Matrix::empty(m.ring.nvars(), Vec::new()) } else { rel };
    ModulePresentation::coker(&m.ring, rel).expect("homogeneous")
}

/// Homology at the middle of `A --alpha--> B --beta--> C` where
/// `B = coker(b_rel)` and `C = coker(c_rel)`; `alpha`'s rows and `beta`'s
/// columns index the generators of `B`.
pub fn homology<K: Field>(
    ring: &Ring<K>,
    alpha: &Matrix<K>,
    beta: &Matrix<K>,
    b_rel: &Matrix<K>,
    c_rel: &Matrix<K>,
) -> Result<ModulePresentation<K>> {
    let amb = ring.ambient();
    let p = b_rel.nrows();
    if beta.ncols() != p || alpha.nrows() != p {
        return Err(Error::IncompatibleOperands("complex maps do not compose".into()));
    }
    let k = if beta.nrows() == 0 {
        Matrix::identity(ring.nvars(), b_rel.row_degrees().to_vec())
    } else {
        minimal_columns(&syzygies(&beta.hconcat(c_rel)?, amb)?.take_rows(p), amb)?
    };
    let l = alpha.hconcat(b_rel)?;
    let rel = subquotient(&k, &l, amb)?;
    let rel = if k.ncols() == 0 { Matrix::empty(ring.nvars(), Vec::new()) } else { rel };
    Ok(ModulePresentation::coker(ring, rel)?.minimalize())
}

/// Kernel of a map `M → N` given by `psi` on generators, as a module.
pub fn kernel_module<K: Field>(
    psi: &Matrix<K>,
    source: &ModulePresentation<K>,
    target: &ModulePresentation<K>,
) -> Result<ModulePresentation<K>> {
    source.check_same_ring(target)?;
    if psi.col_degrees() != source.shifts() || psi.row_degrees() != target.shifts() {
        return Err(Error::IncompatibleOperands("map does not match the presentations".into()));
    }
    let incoming = Matrix::empty(source.ring.nvars(), source.shifts().to_vec());
    homology(&source.ring, &incoming, psi, source.relations(), target.relations())
}

/// Cokernel of a map `M → N` given by `psi` on generators.
pub fn cokernel_module<K: Field>(
    psi: &Matrix<K>,
    target: &ModulePresentation<K>,
) -> Result<ModulePresentation<K>> {
    ModulePresentation::coker(&target.ring, psi.hconcat(target.relations())?)
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

    fn p(r: &Ring<F32003>, s: &str) -> Polynomial<F32003> {
        parse_polynomial(s, r.variable_names()).unwrap()
    }

    #[test]
    fn minimalize_examples() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let unit = ModulePresentation::from_rows(&r, vec![0], vec![vec![p(&r, "1")]]).unwrap();
        assert_eq!(unit.minimalize().num_generators(), 0);
        assert!(unit.is_zero());
        let m = ModulePresentation::cyclic(&r, vec![p(&r, "y"), p(&r, "u")]).unwrap();
        let mm = m.minimalize();
        assert_eq!(mm.relations().ncols(), 2);
        // R ⊕ coker[y u] hidden behind a unit row
        let big = ModulePresentation::from_rows(
            &r,
            vec![0, 1, 0],
            vec![
                vec![p(&r, "y"), p(&r, "u"), p(&r, "x")],
                vec![p(&r, "0"), p(&r, "0"), p(&r, "1")],
                vec![p(&r, "0"), p(&r, "0"), p(&r, "0")],
            ],
        )
        .unwrap();
        let bm = big.minimalize();
        assert_eq!(bm.num_generators(), 2);
        for t in 0..8 {
            assert_eq!(bm.hilbert_function(t), big.hilbert_function(t));
        }
    }

    #[test]
    fn tensor_and_dual_basics() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let free = ModulePresentation::free(&r, vec![0]).unwrap();
        let m = ModulePresentation::cyclic(&r, vec![p(&r, "x")]).unwrap();
        let n = ModulePresentation::cyclic(&r, vec![p(&r, "x*z")]).unwrap();
        let t = tensor(&free, &n).unwrap();
        for d in 0..8 {
            assert_eq!(t.hilbert_function(d), n.hilbert_function(d));
        }
        let mn = tensor(&m, &n).unwrap();
        for d in 0..8 {
            assert_eq!(mn.hilbert_function(d), m.hilbert_function(d));
        }
        let d = ModulePresentation::free(&r, vec![3]).unwrap().dual();
        assert_eq!(d.minimalize().shifts(), &[-3]);
        assert!(ModulePresentation::zero(&r).dual().is_zero());
    }

    #[test]
    fn dual_of_hypersurface_module_is_nonzero() {
        let r = ring(&["x", "y", "w", "z"], &["x*w - y*z"]);
        let m = ModulePresentation::from_rows(
            &r,
            vec![0, 0, 0, 0],
            vec![vec![p(&r, "w")], vec![p(&r, "y")], vec![p(&r, "x")], vec![p(&r, "z")]],
        )
        .unwrap();
        assert!(!m.dual().is_zero());
        assert_eq!(m.krull_dim(), Some(3));
    }
}
