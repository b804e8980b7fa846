//! Degree-truncated dense linear algebra.
//!
//! Every graded piece `R_e` of `R = S/I` is a coordinate space obtained by
//! echelonizing the spanning set `{μ·f}` of `I_e`; free modules, maps and
//! homology are then finite matrices degree by degree. Resolutions are built
//! by degree-wise kernels. Nothing on this path touches Gröbner bases, so it
//! serves as an independent check of the main pipeline.

use std::collections::HashMap;

use crate::algebra::{Field, Matrix, Monomial, Polynomial};
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 6;
pub const MAX_DEGREE_BOUND: i32 = 8;
const MAX_PIECE_DEGREE: i32 = 16;
const MAX_PIECE_MONOMIALS: usize = 5_000;

/// Row-echelon accumulator with pivot-first normalisation.
#[derive(Clone, Debug)]
struct Echelon<K> {
    rows: Vec<Vec<K>>,
    pivots: Vec<usize>,
}

impl<K: Field> Echelon<K> {
    fn new() -> Self {
        Echelon { rows: Vec::new(), pivots: Vec::new() }
    }

    fn reduce(&self, v: &mut [K]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
    }

    fn insert(&mut self, mut v: Vec<K>) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero");
        for x in v.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn rank_of<K: Field>(vectors: impl IntoIterator<Item = Vec<K>>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Basis of `{x : Σ x_l·col_l = 0}`.
fn nullspace<K: Field>(cols: &[Vec<K>], width: usize) -> Vec<Vec<K>> {
    let n = cols.len();
    // row-major copy, reduced to RREF
    let mut a: Vec<Vec<K>> = (0..width).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..width).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero");
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..width {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == width {
            break;
        }
    }
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![K::zero(); n];
        v[free] = K::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        out.push(v);
    }
    out
}

#[derive(Clone, Debug)]
struct Piece<K> {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    ideal: Echelon<K>,
    /// Monomial indices that are not pivots: a basis of `R_e`.
    basis: Vec<usize>,
}

/// Graded pieces `R_0, …, R_top` of `S/I` as coordinate spaces.
#[derive(Clone, Debug)]
pub struct DenseRing<K> {
    nvars: usize,
    pieces: Vec<Piece<K>>,
}

impl<K: Field> DenseRing<K> {
    pub fn new(nvars: usize, ideal: &[Polynomial<K>], top: i32) -> Result<Self> {
        if nvars > MAX_VARS {
            return Err(Error::OracleTooLarge(format!("{nvars} variables (limit {MAX_VARS})")));
        }
        if top > MAX_PIECE_DEGREE {
            return Err(Error::OracleTooLarge(format!("graded piece of degree {top} (limit {MAX_PIECE_DEGREE})")));
        }
        let mut pieces = Vec::new();
        for e in 0..=top.max(0) as u32 {
            let monomials = Monomial::all_of_degree(nvars, e);
            if monomials.len() > MAX_PIECE_MONOMIALS {
                return Err(Error::OracleTooLarge(format!("{} monomials in degree {e}", monomials.len())));
            }
            let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let mut ech = Echelon::new();
            for f in ideal {
                let Some(df) = f.degree_if_homogeneous() else { continue };
                if df > e {
                    continue;
                }
                for mu in Monomial::all_of_degree(nvars, e - df) {
                    let mut v = vec![K::zero(); monomials.len()];
                    for (m, c) in f.terms() {
                        v[index[&m.mul(&mu)]] = c.clone();
                    }
                    ech.insert(v);
                }
            }
            let basis = (0..monomials.len()).filter(|i| !ech.pivots.contains(i)).collect();
            pieces.push(Piece { monomials, index, ideal: ech, basis });
        }
        Ok(DenseRing { nvars, pieces })
    }

    fn piece(&self, e: i32) -> Option<&Piece<K>> {
        if e < 0 {
            return None;
        }
        let p = self.pieces.get(e as usize);
        assert!(p.is_some(), "dense ring built only through degree {}", self.pieces.len() as i32 - 1);
        p
    }

    /// `dim_k R_e`.
    pub fn dim(&self, e: i32) -> usize {
        self.piece(e).map_or(0, |p| p.basis.len())
    }

    pub fn basis_monomials(&self, e: i32) -> Vec<Monomial> {
        self.piece(e).map_or_else(Vec::new, |p| p.basis.iter().map(|&i| p.monomials[i].clone()).collect())
    }

    /// Coordinates of a degree-`e` form in the basis of `R_e`.
    pub fn coords(&self, f: &Polynomial<K>, e: i32) -> Vec<K> {
        let Some(p) = self.piece(e) else {
            return Vec::new();
        };
        let mut v = vec![K::zero(); p.monomials.len()];
        for (m, c) in f.terms() {
            let i = p.index[m];
            v[i] = v[i].clone() + c.clone();
        }
        p.ideal.reduce(&mut v);
        p.basis.iter().map(|&i| v[i].clone()).collect()
    }

    fn form(&self, coords: &[K], e: i32) -> Polynomial<K> {
        let Some(p) = self.piece(e) else {
            return Polynomial::zero(self.nvars);
        };
        Polynomial::from_terms(
            self.nvars,
            p.basis.iter().zip(coords).filter(|(_, c)| !c.is_zero()).map(|(&i, c)| (p.monomials[i].clone(), c.clone())),
        )
    }

    fn free_dim(&self, shifts: &[i32], t: i32) -> usize {
        shifts.iter().map(|&a| self.dim(t - a)).sum()
    }

    /// Coordinates in `(⊕ R(-a_j))_t` of a vector of forms.
    fn free_coords(&self, shifts: &[i32], v: &[Polynomial<K>], t: i32) -> Vec<K> {
        let mut out = Vec::with_capacity(self.free_dim(shifts, t));
        for (p, &a) in v.iter().zip(shifts) {
            out.extend(self.coords(p, t - a));
        }
        out
    }

    /// The degree-`t` component of `a` as images of a basis of the source.
    fn map_at(&self, a: &Matrix<K>, t: i32) -> Vec<Vec<K>> {
        let mut out = Vec::new();
        for (col, &c) in a.columns().iter().zip(a.col_degrees()) {
            for nu in self.basis_monomials(t - c) {
                let v: Vec<Polynomial<K>> = col.iter().map(|p| p.mul_term(&nu, &K::one())).collect();
                out.push(self.free_coords(a.row_degrees(), &v, t));
            }
        }
        out
    }

    /// `dim_k` of the degree-`t` homology at `B` of `A --alpha--> B --beta--> C`
    /// with `B = coker(b_rel)`, `C = coker(c_rel)`.
    pub fn homology_dim(&self, alpha: &Matrix<K>, beta: &Matrix<K>, b_rel: &Matrix<K>, c_rel: &Matrix<K>, t: i32) -> usize {
        let b_dim = self.free_dim(b_rel.row_degrees(), t);
        let wc = self.map_at(c_rel, t);
        let wc_rank = rank_of(wc.iter().cloned());
        let image_in_c = if beta.nrows() == 0 {
            0
        } else {
            rank_of(self.map_at(beta, t).into_iter().chain(wc)) - wc_rank
        };
        let cycles = b_dim - image_in_c;
        let boundaries = rank_of(self.map_at(alpha, t).into_iter().chain(self.map_at(b_rel, t)));
        cycles - boundaries
    }

    /// Resolution `d_1 = relations, d_2, …, d_length` computed by degree-wise
    /// kernels, with generators through degree `top`. Not necessarily minimal.
    pub fn resolution(&self, relations: &Matrix<K>, length: usize, top: i32) -> Vec<Matrix<K>> {
        let mut out = vec![relations.clone()];
        while out.len() < length {
            let d = out.last().expect("nonempty");
            let src = d.col_degrees().to_vec();
            let mut gens: Vec<Vec<Polynomial<K>>> = Vec::new();
            let mut degs: Vec<i32> = Vec::new();
            let start = src.iter().copied().min().unwrap_or(top + 1);
            for t in start..=top {
                let cols = self.map_at(d, t);
                let width = self.free_dim(d.row_degrees(), t);
                let kernel = nullspace(&cols, width);
                if kernel.is_empty() {
                    continue;
                }
                let mut ech = Echelon::new();
                let partial = Matrix::new(self.nvars, src.clone(), degs.clone(), gens.clone()).expect("homogeneous");
                for v in self.map_at(&partial, t) {
                    ech.insert(v);
                }
                for v in kernel {
                    if ech.insert(v.clone()) {
                        let mut col = Vec::with_capacity(src.len());
                        let mut off = 0;
                        for &a in &src {
                            let n = self.dim(t - a);
                            col.push(self.form(&v[off..off + n], t - a));
                            off += n;
                        }
                        gens.push(col);
                        degs.push(t);
                    }
                }
            }
            out.push(Matrix::new(self.nvars, src, degs, gens).expect("homogeneous"));
        }
        out
    }
}

fn check_bound(hi: i32) -> Result<()> {
    if hi > MAX_DEGREE_BOUND {
        return Err(Error::OracleTooLarge(format!("degree bound {hi} (limit {MAX_DEGREE_BOUND})")));
    }
    Ok(())
}

fn min_shift(v: &[i32]) -> i32 {
    v.iter().copied().min().unwrap_or(0)
}

/// Graded Hilbert values of `coker(relations)` over `S/(ideal)` for degrees
/// `lo..=hi`.
pub fn hilbert_oracle<K: Field>(ideal: &[Polynomial<K>], relations: &Matrix<K>, lo: i32, hi: i32) -> Result<Vec<usize>> {
    check_bound(hi)?;
    let r = DenseRing::new(relations.nvars(), ideal, hi - min_shift(relations.row_degrees()))?;
    let nv = relations.nvars();
    let incoming = relations.clone();
    let outgoing = Matrix::zero(nv, Vec::new(), relations.row_degrees().to_vec());
    let none = Matrix::empty(nv, Vec::new());
    let free_rel = Matrix::empty(nv, relations.row_degrees().to_vec());
    Ok((lo..=hi).map(|t| r.homology_dim(&incoming, &outgoing, &free_rel, &none, t)).collect())
}

/// Graded Hilbert values of `ker(psi: coker(source) → coker(target))`.
pub fn kernel_oracle<K: Field>(
    ideal: &[Polynomial<K>],
    psi: &Matrix<K>,
    source: &Matrix<K>,
    target: &Matrix<K>,
    lo: i32,
    hi: i32,
) -> Result<Vec<usize>> {
    check_bound(hi)?;
    let low = min_shift(source.row_degrees()).min(min_shift(target.row_degrees()));
    let r = DenseRing::new(psi.nvars(), ideal, hi - low)?;
    let incoming = Matrix::empty(psi.nvars(), source.row_degrees().to_vec());
    Ok((lo..=hi).map(|t| r.homology_dim(&incoming, psi, source, target, t)).collect())
}

/// Graded Hilbert values of `Tor_i(coker(m), coker(n))` for degrees `lo..=hi`.
pub fn tor_oracle<K: Field>(
    ideal: &[Polynomial<K>],
    m: &Matrix<K>,
    n: &Matrix<K>,
    i: usize,
    lo: i32,
    hi: i32,
) -> Result<Vec<usize>> {
    check_bound(hi)?;
    let nv = m.nvars();
    let top = hi - min_shift(n.row_degrees());
    let r = DenseRing::new(nv, ideal, top - min_shift(m.row_degrees()))?;
    let res = r.resolution(m, i + 1, top);
    let shifts = |k: usize| if k == 0 { m.row_degrees().to_vec() } else { res[k - 1].col_degrees().to_vec() };
    let b = n.row_degrees();
    let alpha = res[i].kron_identity(b);
    let b_rel = n.identity_kron(&shifts(i));
    let (beta, c_rel) = if i == 0 {
        (Matrix::zero(nv, Vec::new(), b_rel.row_degrees().to_vec()), Matrix::empty(nv, Vec::new()))
    } else {
        (res[i - 1].kron_identity(b), n.identity_kron(&shifts(i - 1)))
    };
    Ok((lo..=hi).map(|t| r.homology_dim(&alpha, &beta, &b_rel, &c_rel, t)).collect())
}

/// Graded Hilbert values of `Ext^i(coker(m), coker(n))` for degrees `lo..=hi`.
///
/// The resolution of `coker(m)` is only known through generator degree
/// `generator_cap`; the values are exact when steps `i` and `i+1` have no
/// generators above it.
pub fn ext_oracle<K: Field>(
    ideal: &[Polynomial<K>],
    m: &Matrix<K>,
    n: &Matrix<K>,
    i: usize,
    lo: i32,
    hi: i32,
    generator_cap: i32,
) -> Result<Vec<usize>> {
    check_bound(hi)?;
    let nv = m.nvars();
    let base = min_shift(m.row_degrees());
    let top = (generator_cap - base).max(hi + generator_cap - min_shift(n.row_degrees()));
    let r = DenseRing::new(nv, ideal, top)?;
    let res = r.resolution(m, i + 1, generator_cap);
    let neg = |v: &[i32]| v.iter().map(|d| -d).collect::<Vec<_>>();
    let shifts = |k: usize| if k == 0 { m.row_degrees().to_vec() } else { res[k - 1].col_degrees().to_vec() };
    let b = n.row_degrees();
    let beta = res[i].transpose().kron_identity(b);
    let b_rel = n.identity_kron(&neg(&shifts(i)));
    let c_rel = n.identity_kron(&neg(&shifts(i + 1)));
    let alpha = if i == 0 {
        Matrix::empty(nv, b_rel.row_degrees().to_vec())
    } else {
        res[i - 1].transpose().kron_identity(b)
    };
    Ok((lo..=hi).map(|t| r.homology_dim(&alpha, &beta, &b_rel, &c_rel, t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, F32003};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn polys(n: &[String], s: &[&str]) -> Vec<Polynomial<F32003>> {
        s.iter().map(|x| parse_polynomial(x, n).unwrap()).collect()
    }

    #[test]
    fn pieces_of_hypersurface() {
        let n = names(&["x", "y"]);
        let r = DenseRing::new(2, &polys(&n, &["x*y"]), 6).unwrap();
        assert_eq!((0..=6).map(|e| r.dim(e)).collect::<Vec<_>>(), vec![1, 2, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn tor_of_two_cyclic_modules() {
        let n = names(&["x", "y", "z", "u"]);
        let ideal = polys(&n, &["x*y", "z*u"]);
        let m = Matrix::from_rows(4, vec![0], vec![polys(&n, &["x"])]).unwrap();
        let nn = Matrix::from_rows(4, vec![0], vec![polys(&n, &["x*z"])]).unwrap();
        let t1 = tor_oracle(&ideal, &m, &nn, 1, 0, 6).unwrap();
        assert_eq!(t1, vec![0, 0, 1, 1, 1, 1, 1]);
        assert!(tor_oracle(&ideal, &m, &nn, 2, 0, 6).unwrap().iter().all(|&v| v == 0));
    }

    #[test]
    fn ext_of_residue_field() {
        let n = names(&["x", "y"]);
        let k = Matrix::from_rows(2, vec![0], vec![polys(&n, &["x", "y"])]).unwrap();
        let s = Matrix::empty(2, vec![0]);
        assert_eq!(ext_oracle(&[], &k, &s, 2, -3, 0, 4).unwrap(), vec![0, 1, 0, 0]);
        assert_eq!(ext_oracle(&[], &k, &s, 1, -3, 0, 4).unwrap(), vec![0; 4]);
    }

    #[test]
    fn guardrail() {
        let m = Matrix::<F32003>::empty(7, vec![0]);
        assert!(matches!(hilbert_oracle(&[], &m, 0, 2), Err(Error::OracleTooLarge(_))));
        let m = Matrix::<F32003>::empty(2, vec![0]);
        assert!(matches!(hilbert_oracle(&[], &m, 0, 9), Err(Error::OracleTooLarge(_))));
    }
}
