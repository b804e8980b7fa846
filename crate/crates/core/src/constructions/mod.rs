//! Pushforward and quasi-lifting of torsion-free modules, the theorem
//! harness and the open-question search.

mod harness;
mod search;

pub use harness::{check_theorem, theorem_ids, Basis, ChecklistItem, LineStatus, TheoremInstance, TheoremReport, Verdict};
pub use search::{counterexample_search, random_module, Finding, Question, SearchConfig, SearchLog};

use serde::Serialize;

use crate::algebra::{Field, Matrix, Polynomial};
use crate::error::{Error, Result};
use crate::fmodules::{bidual_data, bidual_kernel, biduality_report, depth, ExtendedNat, ModulePresentation};
use crate::groebner::{minimal_columns, syzygies};
use crate::rings::{split_ring, Ring};

/// Degrees checked by the Hilbert-function exactness certificates.
pub const CERTIFICATE_WINDOW: i32 = 10;

/// Certificate for `0 → M --u--> R^m → M₁ → 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushforwardCertificate {
    /// `ker u = 0`, computed as a kernel of a map of presentations.
    pub injective: bool,
    /// `m = β₀(M*)`.
    pub rank_is_dual_betti0: bool,
    /// `HF(M) − HF(R^m) + HF(M₁) = 0` on the window starting at `hilbert_from`.
    pub hilbert_balanced: bool,
    pub hilbert_from: i32,
}

impl PushforwardCertificate {
    pub fn exact(&self) -> bool {
        self.injective && self.rank_is_dual_betti0 && self.hilbert_balanced
    }
}

#[derive(Clone, Debug)]
pub struct PushforwardResult<K: Field> {
    pub source: ModulePresentation<K>,
    /// `M₁ = coker(u)`.
    pub m1: ModulePresentation<K>,
    /// `u: F → R^m`, the transpose of the minimal generators of `M*`.
    pub u: Matrix<K>,
    pub m: usize,
    pub certificate: PushforwardCertificate,
}

fn window_start(shifts: &[&[i32]]) -> i32 {
    shifts.iter().flat_map(|s| s.iter().copied()).min().unwrap_or(0)
}

/// `Σ ± HF` over a short sequence of modules vanishes on the window.
fn alternating_zero<K: Field>(terms: &[(&ModulePresentation<K>, i64)], lo: i32) -> bool {
    (lo..lo + CERTIFICATE_WINDOW).all(|t| terms.iter().map(|(m, s)| s * m.hilbert_function(t) as i64).sum::<i64>() == 0)
}

fn torsion_error<K: Field>(m: &ModulePresentation<K>) -> Result<()> {
    let b = biduality_report(m)?;
    if b.torsion_free {
        return Ok(());
    }
    let witness = b.torsion_witness.or_else(|| (!b.s1).then(|| "(S1) fails".to_string()));
    Err(Error::HypothesisMissing { what: "the module is not torsion-free".into(), witness })
}

/// Pushforward `0 → M → R^m → M₁ → 0` of a torsion-free module over a
/// complete intersection, built from the minimal generators of `M*`.
pub fn pushforward<K: Field>(m: &ModulePresentation<K>) -> Result<PushforwardResult<K>> {
    let ring = m.ring().clone();
    if !ring.is_complete_intersection() {
        return Err(Error::hypothesis("pushforward needs a certified complete intersection ring"));
    }
    let m = m.minimalize();
    torsion_error(&m)?;
    let data = bidual_data(&m)?;
    let count = data.phi.ncols();
    let (kgens, krel) = bidual_kernel(&m, &data)?;
    let injective = kgens.ncols() == 0 || ModulePresentation::coker(&ring, krel)?.is_zero();
    let target = ModulePresentation::free(&ring, data.u.row_degrees().to_vec())?;
    let m1 = ModulePresentation::coker(&ring, data.u.clone())?.minimalize();
    let lo = window_start(&[m.shifts(), target.shifts(), m1.shifts()]);
    let hilbert_balanced = alternating_zero(&[(&m, 1), (&target, -1), (&m1, 1)], lo);
    let certificate = PushforwardCertificate {
        injective,
        rank_is_dual_betti0: m.dual().betti0() == count,
        hilbert_balanced,
        hilbert_from: lo,
    };
    Ok(PushforwardResult { source: m, m1, u: data.u, m: count, certificate })
}

#[derive(Clone, Debug)]
pub struct ChainReport<K: Field> {
    /// `M₀ = M, M₁, …` as far as the chain got.
    pub modules: Vec<ModulePresentation<K>>,
    pub steps: Vec<PushforwardResult<K>>,
    /// `(step, witness)` if some `M_i` had torsion.
    pub stopped: Option<(usize, String)>,
}

/// Iterated pushforwards `0 → M_{i−1} → G_i → M_i → 0` for `i = 1..=k`.
pub fn pushforward_chain<K: Field>(m: &ModulePresentation<K>, k: usize) -> Result<ChainReport<K>> {
    let mut report = ChainReport { modules: vec![m.clone()], steps: Vec::new(), stopped: None };
    for i in 0..k {
        let current = report.modules.last().expect("nonempty").clone();
        match pushforward(&current) {
            Ok(step) => {
                report.modules.push(step.m1.clone());
                report.steps.push(step);
            }
            Err(Error::HypothesisMissing { what, witness }) => {
                let w = witness.map(|w| format!("{what}: {w}")).unwrap_or(what);
                report.stopped = Some((i, w));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiLiftingCertificate {
    /// `0 → E → S'^m → M₁ → 0` balances on the window.
    pub lifting_sequence: bool,
    /// `0 → M₁ → E/fE → M → 0` balances on the window.
    pub reduction_sequence: bool,
    pub depth_e: ExtendedNat,
    pub depth_m1: ExtendedNat,
    /// `depth_{S'} E = depth_R M₁ + 1` (vacuous when `M₁ = 0`).
    pub depth_relation: bool,
    pub hilbert_from: i32,
}

impl QuasiLiftingCertificate {
    pub fn exact(&self) -> bool {
        self.lifting_sequence && self.reduction_sequence && self.depth_relation
    }
}

#[derive(Clone, Debug)]
pub struct QuasiLiftingResult<K: Field> {
    pub pushforward: PushforwardResult<K>,
    /// The intermediate ring `S'` with `R = S'/(f)`.
    pub lifted_ring: Ring<K>,
    pub f: Polynomial<K>,
    /// `E ⊆ S'^m` over `S'`.
    pub e: ModulePresentation<K>,
    /// Generators of `E` inside `S'^m`.
    pub e_generators: Matrix<K>,
    /// `E/fE` over `R`.
    pub e_mod_f: ModulePresentation<K>,
    pub certificate: QuasiLiftingCertificate,
}

/// Quasi-lifting of `M` with respect to `R = S'/(f)`, where `f` is quotient
/// generator number `split`.
pub fn quasi_lifting<K: Field>(m: &ModulePresentation<K>, split: usize) -> Result<QuasiLiftingResult<K>> {
    let ring = m.ring().clone();
    let (sp, f) = split_ring(&ring, split)?;
    let pf = pushforward(m)?;
    let nv = ring.nvars();
    let g = pf.u.row_degrees().to_vec();
    let fdeg = f.degree_if_homogeneous().expect("homogeneous quotient generator") as i32;
    // E = im[u | f·1] in S'^m: the kernel of S'^m → M₁
    let mut f_id = Matrix::zero(nv, g.clone(), g.iter().map(|d| d + fdeg).collect());
    let cols: Vec<Vec<Polynomial<K>>> = (0..g.len())
        .map(|j| (0..g.len()).map(|i| if i == j { f.clone() } else { Polynomial::zero(nv) }).collect())
        .collect();
    if !g.is_empty() {
        f_id = Matrix::new(nv, g.clone(), f_id.col_degrees().to_vec(), cols)?;
    }
    let amb = sp.ambient();
    let e_generators =
        if g.is_empty() { Matrix::empty(nv, Vec::new()) } else { minimal_columns(&pf.u.hconcat(&f_id)?, amb)? };
    let e_rel = if e_generators.ncols() == 0 {
        Matrix::empty(nv, Vec::new())
    } else {
        syzygies(&e_generators, amb)?
    };
    let e = ModulePresentation::coker(&sp, e_rel.clone())?.minimalize();
    let e_mod_f = ModulePresentation::coker(&ring, e_rel)?;

    let free = ModulePresentation::free(&sp, g)?;
    let m1_lifted = ModulePresentation::coker(&sp, pf.u.hconcat(&f_id)?)?;
    let lo = window_start(&[e.shifts(), free.shifts(), pf.m1.shifts(), pf.source.shifts(), e_mod_f.shifts()]);
    let lifting_sequence = alternating_zero(&[(&e, 1), (&free, -1), (&m1_lifted, 1)], lo);
    // M₁ → E/fE is induced by multiplication by f, so M₁ enters shifted by deg f
    let m1_shifted = pf.m1.twist(fdeg);
    let lo = lo.min(window_start(&[m1_shifted.shifts()]));
    let reduction_sequence = alternating_zero(&[(&m1_shifted, 1), (&e_mod_f, -1), (&pf.source, 1)], lo);
    let depth_e = depth(&e)?;
    let depth_m1 = depth(&pf.m1)?;
    let depth_relation = pf.m1.is_zero()
        || matches!((depth_e, depth_m1), (ExtendedNat::Finite(a), ExtendedNat::Finite(b)) if a == b + 1);
    let certificate =
        QuasiLiftingCertificate { lifting_sequence, reduction_sequence, depth_e, depth_m1, depth_relation, hilbert_from: lo };
    Ok(QuasiLiftingResult { pushforward: pf, lifted_ring: sp, f, e, e_generators, e_mod_f, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, F32003};
    use crate::fmodules::{is_maximal_cohen_macaulay, nonfree_locus_codim};
    use crate::homology::oracle::{hilbert_oracle, kernel_oracle};
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
    fn free_module_pushes_to_zero() {
        let r = ring(&["x", "y"], &["x*y"]);
        let pf = pushforward(&ModulePresentation::free(&r, vec![0]).unwrap()).unwrap();
        assert_eq!(pf.m, 1);
        assert!(pf.m1.is_zero());
        assert!(pf.certificate.exact());
    }

    #[test]
    fn cyclic_over_node() {
        let r = ring(&["x", "y"], &["x*y"]);
        let m = ModulePresentation::cyclic(&r, vec![p(&r, "x")]).unwrap();
        let pf = pushforward(&m).unwrap();
        assert_eq!(pf.m, 1);
        assert!(pf.certificate.exact());
        // u is multiplication by y, M₁ ≅ R/(y) up to shift
        assert_eq!(pf.u.get(0, 0).fmt_with(r.variable_names()), "y");
        let ideal = r.quotient_generators().to_vec();
        let lo = pf.m1.shifts()[0];
        let dense = hilbert_oracle(&ideal, &pf.m1.relations().clone(), lo, 6).unwrap();
        let ours: Vec<usize> = (lo..=6).map(|t| pf.m1.hilbert_function(t) as usize).collect();
        assert_eq!(dense, ours);
        assert!(dense.iter().all(|&v| v == 1));
        let kernel = kernel_oracle(&ideal, &pf.u, m.relations(), &Matrix::empty(2, pf.u.row_degrees().to_vec()), 0, 6)
            .unwrap();
        assert!(kernel.iter().all(|&v| v == 0));
    }

    #[test]
    fn torsion_is_rejected() {
        let r = ring(&["x", "y"], &["x*y"]);
        let k = ModulePresentation::cyclic(&r, vec![p(&r, "x"), p(&r, "y")]).unwrap();
        assert!(matches!(pushforward(&k), Err(Error::HypothesisMissing { .. })));
        let chain = pushforward_chain(&k, 2).unwrap();
        assert_eq!(chain.stopped.as_ref().map(|s| s.0), Some(0));
        assert!(chain.steps.is_empty());
    }

    #[test]
    fn chain_preserves_mcm() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let m = ModulePresentation::cyclic(&r, vec![p(&r, "y"), p(&r, "u")]).unwrap();
        let chain = pushforward_chain(&m, 2).unwrap();
        assert!(chain.stopped.is_none());
        assert_eq!(chain.steps.len(), 2);
        for step in &chain.steps {
            assert!(step.certificate.exact());
            assert!(step.m1.is_zero() || is_maximal_cohen_macaulay(&step.m1).unwrap());
        }
        let free = ModulePresentation::free(&r, vec![0]).unwrap();
        let chain = pushforward_chain(&free, 2).unwrap();
        assert!(chain.modules[1].is_zero() && chain.modules[2].is_zero());
        assert_eq!(nonfree_locus_codim(&chain.modules[1]).unwrap(), ExtendedNat::Infinity);
    }

    #[test]
    fn quasi_lifting_over_node() {
        let r = ring(&["x", "y"], &["x*y"]);
        let m = ModulePresentation::cyclic(&r, vec![p(&r, "x")]).unwrap();
        let ql = quasi_lifting(&m, 0).unwrap();
        assert!(ql.lifted_ring.is_polynomial_ring());
        assert!(ql.certificate.exact(), "{:?}", ql.certificate);
        // E is a principal ideal of k[x,y], hence free of rank one
        assert_eq!(ql.e.betti0(), 1);
        assert_eq!(ql.e.relations().ncols(), 0);
        assert_eq!(ql.certificate.depth_e, ExtendedNat::Finite(2));
        assert_eq!(ql.certificate.depth_m1, ExtendedNat::Finite(1));
        assert!(matches!(quasi_lifting(&m, 1), Err(Error::InvalidSplit(_))));
    }

    #[test]
    fn quasi_lifting_of_free_module() {
        let r = ring(&["x", "y"], &["x*y"]);
        let ql = quasi_lifting(&ModulePresentation::free(&r, vec![0]).unwrap(), 0).unwrap();
        assert!(ql.pushforward.m1.is_zero());
        assert_eq!(ql.e.relations().ncols(), 0);
        assert_eq!(ql.e.betti0(), 1);
        assert!(ql.certificate.exact());
    }
}
