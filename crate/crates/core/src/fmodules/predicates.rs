use serde::Serialize;

use super::{dual_generators, ExtendedNat, ModulePresentation};
use crate::algebra::{Field, Matrix, Polynomial};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, kernel_of_map, subquotient, syzygies, Ambient};
use crate::homology::ext_module;
use crate::resolutions::{resolve, Over};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleProfile {
    /// Krull dimension; `None` for the zero module.
    pub dim: Option<usize>,
    pub depth: ExtendedNat,
    pub length: ExtendedNat,
    pub betti0: usize,
}

/// Depth via Auslander–Buchsbaum over the ambient ring: `dim S − pd_S M`.
pub fn depth<K: Field>(m: &ModulePresentation<K>) -> Result<ExtendedNat> {
    if m.is_zero() {
        return Ok(ExtendedNat::Infinity);
    }
    let pd = ambient_projective_dimension(m)?;
    Ok(ExtendedNat::Finite(m.ring().nvars() - pd))
}

pub fn ambient_projective_dimension<K: Field>(m: &ModulePresentation<K>) -> Result<usize> {
    let res = resolve(m, Over::Ambient, 1)?;
    res.projective_dimension().ok_or_else(|| Error::Guardrail("ambient resolution did not terminate".into()))
}

pub fn module_profile<K: Field>(m: &ModulePresentation<K>) -> Result<ModuleProfile> {
    Ok(ModuleProfile { dim: m.krull_dim(), depth: depth(m)?, length: m.length(), betti0: m.betti0() })
}

/// Maximal Cohen–Macaulay: nonzero with `depth M = dim R`.
pub fn is_maximal_cohen_macaulay<K: Field>(m: &ModulePresentation<K>) -> Result<bool> {
    Ok(!m.is_zero() && depth(m)? == ExtendedNat::Finite(m.ring().dim()))
}

fn require_complete_intersection<K: Field>(m: &ModulePresentation<K>, what: &str) -> Result<()> {
    if m.ring().is_complete_intersection() {
        Ok(())
    } else {
        Err(Error::hypothesis(format!("{what} needs a certified complete intersection ring")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SerreReport {
    pub n: usize,
    pub holds: bool,
    /// `(j, dim Ext^j_S(M,S))` for each inspected `j ≥ c+1`; `None` = zero.
    pub ext_dims: Vec<(usize, Option<usize>)>,
    /// First failing `j` with the offending dimension.
    pub witness: Option<(usize, usize)>,
}

/// `(S_n)` via `dim Ext^j_S(M,S) ≤ dim S − j − n` for all `j ≥ c+1`.
pub fn serre_condition<K: Field>(m: &ModulePresentation<K>, n: usize) -> Result<SerreReport> {
    require_complete_intersection(m, "the Serre condition")?;
    let mut report = SerreReport { n, holds: true, ext_dims: Vec::new(), witness: None };
    if m.is_zero() {
        return Ok(report);
    }
    let ring = m.ring();
    let (c, ds) = (ring.codim(), ring.nvars());
    let res = resolve(m, Over::Ambient, 1)?;
    let pd = res.projective_dimension().unwrap_or(ds);
    let s = ring.polynomial_ring();
    let unit = ModulePresentation::free(&s, vec![0])?;
    for j in c + 1..=pd {
        let e = ext_module(&res, &unit, j)?;
        let d = e.krull_dim();
        report.ext_dims.push((j, d));
        if let Some(d) = d {
            if (d + j + n) as i64 > ds as i64 && report.witness.is_none() {
                report.holds = false;
                report.witness = Some((j, d));
            }
        }
    }
    Ok(report)
}

/// Codimension of the locus where `M` is not free, from the support of
/// `Ext^1_R(M, syz^1 M)`; infinite when that module vanishes.
pub fn nonfree_locus_codim<K: Field>(m: &ModulePresentation<K>) -> Result<ExtendedNat> {
    let mm = m.minimalize();
    if mm.relations().ncols() == 0 {
        return Ok(ExtendedNat::Infinity);
    }
    let res = resolve(&mm, Over::Quotient, 2)?;
    let d2 = res.differential(2).expect("two steps computed");
    let syz1 = ModulePresentation::coker(mm.ring(), d2)?;
    let e = ext_module(&res, &syz1, 1)?;
    Ok(match e.krull_dim() {
        None => ExtendedNat::Infinity,
        Some(d) => ExtendedNat::Finite(m.ring().dim().saturating_sub(d)),
    })
}

/// Data of the natural map `M → M**`: generators `Φ` of `M*` (columns in
/// `F*`), `U = Φᵀ` so that `M → R^m`, and the relations among the `Φ`.
#[derive(Clone, Debug)]
pub struct BidualData<K> {
    pub phi: Matrix<K>,
    pub u: Matrix<K>,
    pub dual_relations: Matrix<K>,
}

pub fn bidual_data<K: Field>(m: &ModulePresentation<K>) -> Result<BidualData<K>> {
    let phi = dual_generators(m)?;
    let dual_relations = if phi.ncols() == 0 {
        Matrix::empty(m.ring().nvars(), Vec::new())
    } else {
        syzygies(&phi, m.ambient())?
    };
    let u = phi.transpose();
    Ok(BidualData { phi, u, dual_relations })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BidualityReport {
    pub kernel_zero: bool,
    pub cokernel_zero: bool,
    pub s1: bool,
    pub torsion_free: bool,
    pub reflexive: bool,
    /// A nonzero torsion element, if any.
    pub torsion_witness: Option<String>,
}

/// Kernel of `M → M**` as (generators in `F`, relations on them).
pub fn bidual_kernel<K: Field>(m: &ModulePresentation<K>, data: &BidualData<K>) -> Result<(Matrix<K>, Matrix<K>)> {
    let target = Matrix::empty(m.ring().nvars(), data.u.row_degrees().to_vec());
    kernel_of_map(&data.u, m.relations(), &target, m.ambient())
}

pub fn biduality_report<K: Field>(m: &ModulePresentation<K>) -> Result<BidualityReport> {
    require_complete_intersection(m, "biduality")?;
    let data = bidual_data(m)?;
    let amb: &Ambient<K> = m.ambient();
    let (kgens, krel) = bidual_kernel(m, &data)?;
    let kernel = if kgens.ncols() == 0 {
        ModulePresentation::zero(m.ring())
    } else {
        ModulePresentation::coker(m.ring(), krel)?
    };
    let kernel_zero = kernel.is_zero();
    let torsion_witness = if kernel_zero {
        None
    } else {
        // first generator of the kernel that survives in M
        let gb = m.gb();
        kgens
            .columns()
            .iter()
            .find(|c| !gb.contains(c).unwrap_or(true))
            .map(|c| c.iter().map(|p| m.ring().fmt_poly(p)).collect::<Vec<_>>().join(", "))
            .map(|s| format!("({s})"))
    };
    // M** = ker(Relᵀ) ⊆ R^m; cokernel of M → M** is ker(Relᵀ)/im(U)
    let cokernel_zero = if data.phi.ncols() == 0 {
        true
    } else {
        let rel_t = data.dual_relations.transpose();
        let bidual_gens = if rel_t.nrows() == 0 {
            Matrix::identity(m.ring().nvars(), data.u.row_degrees().to_vec())
        } else {
            syzygies(&rel_t, amb)?
        };
        let q = subquotient(&bidual_gens, &data.u, amb)?;
        let q = if bidual_gens.ncols() == 0 { Matrix::empty(m.ring().nvars(), Vec::new()) } else { q };
        ModulePresentation::coker(m.ring(), q)?.is_zero()
    };
    let s1 = serre_condition(m, 1)?.holds;
    Ok(BidualityReport {
        kernel_zero,
        cokernel_zero,
        s1,
        torsion_free: kernel_zero && s1,
        reflexive: kernel_zero && cokernel_zero,
        torsion_witness,
    })
}

const MAX_MINORS: usize = 20_000;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn determinant<K: Field>(a: &Matrix<K>, rows: &[usize], cols: &[usize]) -> Polynomial<K> {
    if rows.len() == 1 {
        return a.get(rows[0], cols[0]).clone();
    }
    let mut acc = Polynomial::zero(a.nvars());
    let sub_rows = &rows[1..];
    for (k, &c) in cols.iter().enumerate() {
        let e = a.get(rows[0], c);
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = e.mul(&determinant(a, sub_rows, &rest));
        acc = if k % 2 == 0 { acc.add(&minor) } else { acc.sub(&minor) };
    }
    acc
}

/// Generators of `Fitt_j(M)`: the `(r−j)`-minors of a minimal presentation
/// with `r` generators, reduced modulo `I` (empty list = zero ideal).
pub fn fitting_ideal<K: Field>(m: &ModulePresentation<K>, j: usize) -> Result<Vec<Polynomial<K>>> {
    let a = m.minimal_relations();
    let r = a.nrows();
    let nv = m.ring().nvars();
    if j >= r {
        return Ok(vec![Polynomial::one(nv)]);
    }
    let k = r - j;
    if k > a.ncols() {
        return Ok(Vec::new());
    }
    if binomial(r, k).saturating_mul(binomial(a.ncols(), k)) > MAX_MINORS || k > 8 {
        return Err(Error::Guardrail(format!("too many {k}-minors for a Fitting ideal")));
    }
    let amb = m.ambient();
    let mut out = Vec::new();
    for rows in combinations(r, k) {
        for cols in combinations(a.ncols(), k) {
            let d = amb.reduce(&determinant(a, &rows, &cols));
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    /// Rank at each minimal prime, in declaration order.
    pub ranks: Vec<usize>,
    /// `Fitt_{r-1}(M) ⊆ q` at each prime.
    pub locally_free: Vec<bool>,
    pub constant_rank: bool,
}

/// Ranks at the minimal primes: the least `r` with `Fitt_r(M) ⊄ q`.
pub fn rank_profile<K: Field>(m: &ModulePresentation<K>) -> Result<RankProfile> {
    let ring = m.ring();
    let primes = ring.minimal_primes().ok_or_else(|| Error::NeedsMinimalPrimes("rank profile".into()))?;
    let nv = ring.nvars();
    let s = Ambient::polynomial_ring(nv, ring.ambient().order);
    let r = m.betti0();
    let fitts: Vec<Vec<Polynomial<K>>> = (0..=r).map(|j| fitting_ideal(m, j)).collect::<Result<_>>()?;
    let mut ranks = Vec::new();
    let mut locally_free = Vec::new();
    for q in primes {
        let mut gens: Vec<Polynomial<K>> = q.generators.clone();
        gens.extend(ring.quotient_generators().iter().cloned());
        let qm = Matrix::from_rows(nv, vec![0], vec![gens])?;
        let gb = groebner_basis(&qm, &s, false)?;
        let inside = |ideal: &[Polynomial<K>]| -> Result<bool> {
            for f in ideal {
                if !gb.contains(std::slice::from_ref(f))? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let mut rank = r;
        for (j, f) in fitts.iter().enumerate() {
            if !inside(f)? {
                rank = j;
                break;
            }
        }
        let free = rank == 0 || inside(&fitts[rank - 1])?;
        ranks.push(rank);
        locally_free.push(free);
    }
    let constant_rank = ranks.windows(2).all(|w| w[0] == w[1]) && locally_free.iter().all(|&b| b);
    Ok(RankProfile { ranks, locally_free, constant_rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, F32003};
    use crate::rings::{declare_minimal_primes, make_quotient_ring, Ring};

    fn ring(vars: &[&str], ideal: &[&str]) -> Ring<F32003> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let gens = ideal.iter().map(|s| parse_polynomial(s, &names).unwrap()).collect();
        make_quotient_ring(names, vec![1; vars.len()], gens).unwrap()
    }

    fn p(r: &Ring<F32003>, s: &str) -> Polynomial<F32003> {
        parse_polynomial(s, r.variable_names()).unwrap()
    }

    fn hypersurface_module() -> ModulePresentation<F32003> {
        let r = ring(&["x", "y", "w", "z"], &["x*w - y*z"]);
        let f = p(&r, "x*w - y*z");
        let r = declare_minimal_primes(&r, vec![vec![f]]).unwrap();
        ModulePresentation::from_rows(
            &r,
            vec![0; 4],
            vec![vec![p(&r, "w")], vec![p(&r, "y")], vec![p(&r, "x")], vec![p(&r, "z")]],
        )
        .unwrap()
    }

    #[test]
    fn profiles() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let m = ModulePresentation::cyclic(&r, vec![p(&r, "y"), p(&r, "u")]).unwrap();
        let pr = module_profile(&m).unwrap();
        assert_eq!(pr.depth, ExtendedNat::Finite(2));
        assert_eq!(pr.dim, Some(2));
        let k = ModulePresentation::cyclic(&r, ["x", "y", "z", "u"].iter().map(|v| p(&r, v)).collect()).unwrap();
        let pk = module_profile(&k).unwrap();
        assert_eq!((pk.depth, pk.dim, pk.length), (ExtendedNat::Finite(0), Some(0), ExtendedNat::Finite(1)));
        let h = module_profile(&hypersurface_module()).unwrap();
        assert_eq!((h.depth, h.dim), (ExtendedNat::Finite(2), Some(3)));
        let z = module_profile(&ModulePresentation::zero(&r)).unwrap();
        assert_eq!((z.depth, z.dim), (ExtendedNat::Infinity, None));
    }

    #[test]
    fn serre_and_biduality() {
        let m = hypersurface_module();
        assert!(serre_condition(&m, 1).unwrap().holds);
        let s2 = serre_condition(&m, 2).unwrap().holds;
        let b = biduality_report(&m).unwrap();
        assert!(b.torsion_free);
        assert_eq!(b.reflexive, s2);
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let m = ModulePresentation::cyclic(&r, vec![p(&r, "y"), p(&r, "u")]).unwrap();
        let b = biduality_report(&m).unwrap();
        assert!(b.reflexive);
        let free = ModulePresentation::free(&r, vec![0, 1]).unwrap();
        assert!(biduality_report(&free).unwrap().reflexive);
        assert!(serre_condition(&free, 3).unwrap().holds);
    }

    #[test]
    fn nonfree_loci() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let m = ModulePresentation::cyclic(&r, vec![p(&r, "y"), p(&r, "u")]).unwrap();
        assert_eq!(nonfree_locus_codim(&m).unwrap(), ExtendedNat::Finite(1));
        let free = ModulePresentation::free(&r, vec![0]).unwrap();
        assert_eq!(nonfree_locus_codim(&free).unwrap(), ExtendedNat::Infinity);
        assert_eq!(nonfree_locus_codim(&hypersurface_module()).unwrap(), ExtendedNat::Finite(3));
    }

    #[test]
    fn ranks() {
        let m = hypersurface_module();
        assert!(fitting_ideal(&m, 2).unwrap().is_empty());
        assert_eq!(fitting_ideal(&m, 3).unwrap().len(), 4);
        let rp = rank_profile(&m).unwrap();
        assert_eq!(rp.ranks, vec![3]);
        assert!(rp.constant_rank);

        let r = ring(&["x", "y"], &["x*y"]);
        let m = ModulePresentation::cyclic(&r, vec![p(&r, "x")]).unwrap();
        let rp = rank_profile(&m).unwrap();
        assert_eq!(rp.ranks, vec![1, 0]);
        assert!(!rp.constant_rank);
        let f = ModulePresentation::free(&r, vec![0, 0]).unwrap();
        let rp = rank_profile(&f).unwrap();
        assert_eq!(rp.ranks, vec![2, 2]);
        assert!(rp.constant_rank);

        let h = ring(&["x", "y", "w", "z"], &["x*w - y*z"]);
        let m = ModulePresentation::cyclic(&h, vec![p(&h, "x")]).unwrap();
        assert!(matches!(rank_profile(&m), Err(Error::NeedsMinimalPrimes(_))));
    }
}
