//! Tor and Ext over `R` from minimal resolutions, their profiles, and the
//! depth-formula check.

pub mod oracle;

use serde::Serialize;

use crate::algebra::{Field, Matrix};
use crate::error::{Error, Result};
use crate::fmodules::{homology, module_profile, ExtendedNat, ModulePresentation};
use crate::resolutions::{detect_periodicity, resolve, FreeResolution, Over};

/// Number of graded Hilbert values recorded per homology module.
pub const HILBERT_WINDOW: usize = 8;

fn missing(i: usize) -> Error {
    Error::InsufficientWindow(format!("resolution does not reach step {i}"))
}

fn negated(v: &[i32]) -> Vec<i32> {
    v.iter().map(|d| -d).collect()
}

/// `Tor_i(M, N) = H_i(F ⊗ N)` where `F` resolves `M`.
pub fn tor_module<K: Field>(res: &FreeResolution<K>, n: &ModulePresentation<K>, i: usize) -> Result<ModulePresentation<K>> {
    let ring = n.ring();
    let nv = ring.nvars();
    let fi = res.shifts(i).ok_or_else(|| missing(i))?;
    let alpha = res.differential(i + 1).ok_or_else(|| missing(i + 1))?.kron_identity(n.shifts());
    let b_rel = n.relations().identity_kron(&fi);
    let (beta, c_rel) = if i == 0 {
        (Matrix::zero(nv, Vec::new(), b_rel.row_degrees().to_vec()), Matrix::empty(nv, Vec::new()))
    } else {
        let prev = res.shifts(i - 1).ok_or_else(|| missing(i - 1))?;
        let d = res.differential(i).ok_or_else(|| missing(i))?;
        (d.kron_identity(n.shifts()), n.relations().identity_kron(&prev))
    };
    homology(ring, &alpha, &beta, &b_rel, &c_rel)
}

/// `Ext^i(M, N) = H^i(Hom(F, N))` where `F` resolves `M`.
pub fn ext_module<K: Field>(res: &FreeResolution<K>, n: &ModulePresentation<K>, i: usize) -> Result<ModulePresentation<K>> {
    let ring = n.ring();
    let nv = ring.nvars();
    let fi = negated(&res.shifts(i).ok_or_else(|| missing(i))?);
    let next = negated(&res.shifts(i + 1).ok_or_else(|| missing(i + 1))?);
    let beta = res.differential(i + 1).ok_or_else(|| missing(i + 1))?.transpose().kron_identity(n.shifts());
    let b_rel = n.relations().identity_kron(&fi);
    let c_rel = n.relations().identity_kron(&next);
    let alpha = if i == 0 {
        Matrix::empty(nv, b_rel.row_degrees().to_vec())
    } else {
        res.differential(i).ok_or_else(|| missing(i))?.transpose().kron_identity(n.shifts())
    };
    homology(ring, &alpha, &beta, &b_rel, &c_rel)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HomologyKind {
    Tor,
    Ext,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyEntry<K: Field> {
    pub index: usize,
    pub vanishing: bool,
    pub betti0: usize,
    pub depth: ExtendedNat,
    pub dim: Option<usize>,
    pub finite_length: bool,
    /// Degree of the first recorded Hilbert value (lowest generator degree).
    pub hilbert_from: i32,
    pub hilbert: Vec<u64>,
    #[serde(skip)]
    pub module: ModulePresentation<K>,
}

impl<K: Field> HomologyEntry<K> {
    fn new(index: usize, module: ModulePresentation<K>) -> Result<Self> {
        let profile = module_profile(&module)?;
        let vanishing = module.num_generators() == 0;
        let hilbert_from = module.shifts().iter().copied().min().unwrap_or(0);
        let hilbert = if vanishing {
            vec![0; HILBERT_WINDOW]
        } else {
            module.hilbert_values(hilbert_from, hilbert_from + HILBERT_WINDOW as i32 - 1)
        };
        Ok(HomologyEntry {
            index,
            vanishing,
            betti0: profile.betti0,
            depth: profile.depth,
            dim: profile.dim,
            finite_length: profile.length != ExtendedNat::Infinity,
            hilbert_from,
            hilbert,
            module,
        })
    }

    /// Same graded data: the computable stand-in for an isomorphism.
    pub fn same_graded_data(&self, other: &Self) -> bool {
        self.vanishing == other.vanishing
            && self.betti0 == other.betti0
            && (self.vanishing || (self.hilbert_from == other.hilbert_from && self.hilbert == other.hilbert))
    }

    /// As [`same_graded_data`](Self::same_graded_data), up to an internal degree shift.
    pub fn same_graded_data_up_to_shift(&self, other: &Self) -> bool {
        self.vanishing == other.vanishing && self.betti0 == other.betti0 && self.hilbert == other.hilbert
    }
}

/// Tor or Ext over an index window `0..=bound`.
#[derive(Clone, Debug, Serialize)]
pub struct TorProfile<K: Field> {
    pub kind: HomologyKind,
    pub bound: usize,
    /// Whether the resolution used terminated (finite projective dimension).
    pub resolution_terminated: bool,
    pub projective_dimension: Option<usize>,
    pub entries: Vec<HomologyEntry<K>>,
    /// `(i, equal graded data for i and i+2 up to shift)` for `i ≥ 1`.
    pub distance_two: Vec<(usize, bool)>,
}

pub type ExtProfile<K> = TorProfile<K>;

impl<K: Field> TorProfile<K> {
    pub fn entry(&self, i: usize) -> Option<&HomologyEntry<K>> {
        self.entries.get(i)
    }

    pub fn vanishing(&self, i: usize) -> Option<bool> {
        self.entry(i).map(|e| e.vanishing)
    }

    /// First `i ≥ 1` in the window with nonzero homology.
    pub fn first_nonvanishing(&self) -> Option<usize> {
        self.entries.iter().skip(1).find(|e| !e.vanishing).map(|e| e.index)
    }
}

fn profile<K: Field>(
    kind: HomologyKind,
    res: &FreeResolution<K>,
    n: &ModulePresentation<K>,
    bound: usize,
) -> Result<TorProfile<K>> {
    let mut entries = Vec::with_capacity(bound + 1);
    for i in 0..=bound {
        let module = match kind {
            HomologyKind::Tor => tor_module(res, n, i)?,
            HomologyKind::Ext => ext_module(res, n, i)?,
        };
        entries.push(HomologyEntry::new(i, module)?);
    }
    let distance_two = (1..entries.len().saturating_sub(2))
        .map(|i| (i, entries[i].same_graded_data_up_to_shift(&entries[i + 2])))
        .collect();
    Ok(TorProfile {
        kind,
        bound,
        resolution_terminated: res.terminated(),
        projective_dimension: res.projective_dimension(),
        entries,
        distance_two,
    })
}

/// `Tor_i(M, N)` for `0 ≤ i ≤ bound`, resolving `M`.
pub fn tor<K: Field>(m: &ModulePresentation<K>, n: &ModulePresentation<K>, bound: usize) -> Result<TorProfile<K>> {
    m.check_same_ring(n)?;
    let res = resolve(m, Over::Quotient, bound + 1)?;
    profile(HomologyKind::Tor, &res, n, bound)
}

/// `Tor_i(M, N)` for `0 ≤ i ≤ bound` from an existing resolution of `M`
/// (which must reach step `bound + 1` or have terminated).
pub fn tor_from_resolution<K: Field>(
    res: &FreeResolution<K>,
    n: &ModulePresentation<K>,
    bound: usize,
) -> Result<TorProfile<K>> {
    if !res.ring().same_ring(n.ring()) {
        return Err(Error::RingMismatch("resolution and module live over different rings".into()));
    }
    profile(HomologyKind::Tor, res, n, bound)
}

/// The same Tor window computed by resolving `N` instead.
pub fn tor_by_second<K: Field>(
    m: &ModulePresentation<K>,
    n: &ModulePresentation<K>,
    bound: usize,
) -> Result<TorProfile<K>> {
    tor(n, m, bound)
}

/// `Ext^i(M, N)` for `0 ≤ i ≤ bound`.
pub fn ext<K: Field>(m: &ModulePresentation<K>, n: &ModulePresentation<K>, bound: usize) -> Result<ExtProfile<K>> {
    m.check_same_ring(n)?;
    let res = resolve(m, Over::Quotient, bound + 1)?;
    profile(HomologyKind::Ext, &res, n, bound)
}

/// How a "vanishes for all `i ≥ 1`" claim was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceTier {
    /// A resolution terminated inside the window.
    ProjectiveDimensionFinite,
    /// Window vanishing with a periodic resolution covering the tail.
    WindowPeriodicity,
    /// `c+1` consecutive zeros over a complete intersection.
    Rigidity,
    /// Only the computed window vanishes.
    WindowOnly,
}

impl EvidenceTier {
    pub fn certified(self) -> bool {
        self != EvidenceTier::WindowOnly
    }
}

/// Certify `Tor_i(M,N) = 0` for all `i ≥ 1` from a window of vanishing.
/// Returns `None` if some `Tor_i` in the window is nonzero.
pub fn vanishing_evidence<K: Field>(
    m: &ModulePresentation<K>,
    n: &ModulePresentation<K>,
    profile: &TorProfile<K>,
) -> Result<Option<EvidenceTier>> {
    if profile.first_nonvanishing().is_some() {
        return Ok(None);
    }
    let bound = profile.bound;
    for x in [m, n] {
        let res = resolve(x, Over::Quotient, bound.max(1))?;
        if res.projective_dimension().is_some_and(|pd| pd <= bound) {
            return Ok(Some(EvidenceTier::ProjectiveDimensionFinite));
        }
    }
    if bound + 1 >= 6 {
        for x in [m, n] {
            let res = resolve(x, Over::Quotient, bound + 1)?;
            let p = detect_periodicity(&res)?;
            if let (true, Some(period), Some(onset)) = (p.periodic, p.period, p.onset) {
                if onset.max(1) + period <= bound + 1 {
                    return Ok(Some(EvidenceTier::WindowPeriodicity));
                }
            }
        }
    }
    let ring = m.ring();
    if ring.is_complete_intersection() && bound > ring.codim() {
        return Ok(Some(EvidenceTier::Rigidity));
    }
    Ok(Some(EvidenceTier::WindowOnly))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthFormulaReport {
    pub depth_m: ExtendedNat,
    pub depth_n: ExtendedNat,
    pub depth_r: ExtendedNat,
    pub depth_tensor: ExtendedNat,
    pub lhs: Option<usize>,
    pub rhs: Option<usize>,
    /// `depth M + depth N = depth R + depth(M ⊗ N)`.
    pub holds: bool,
    /// Window over which Tor was computed.
    pub bound: usize,
    pub first_nonvanishing_tor: Option<usize>,
    pub evidence: Option<EvidenceTier>,
    /// The formula is only asserted when the Tor vanishing is certified.
    pub asserted: bool,
}

fn add(a: ExtendedNat, b: ExtendedNat) -> Option<usize> {
    Some(a.finite()? + b.finite()?)
}

pub fn depth_formula_check<K: Field>(
    m: &ModulePresentation<K>,
    n: &ModulePresentation<K>,
    bound: usize,
) -> Result<DepthFormulaReport> {
    let profile = tor(m, n, bound)?;
    let free = ModulePresentation::free(m.ring(), vec![0])?;
    let depth_m = module_profile(m)?.depth;
    let depth_n = module_profile(n)?.depth;
    let depth_r = module_profile(&free)?.depth;
    let depth_tensor = profile.entries[0].depth;
    let lhs = add(depth_m, depth_n);
    let rhs = add(depth_r, depth_tensor);
    let evidence = vanishing_evidence(m, n, &profile)?;
    let holds = match (lhs, rhs) {
        (Some(a), Some(b)) => a == b,
        _ => depth_m.is_infinite() || depth_n.is_infinite() || depth_tensor.is_infinite(),
    };
    Ok(DepthFormulaReport {
        depth_m,
        depth_n,
        depth_r,
        depth_tensor,
        lhs,
        rhs,
        holds,
        bound,
        first_nonvanishing_tor: profile.first_nonvanishing(),
        evidence,
        asserted: evidence.is_some_and(EvidenceTier::certified),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, Polynomial, F32003};
    use crate::rings::{make_quotient_ring, Ring};

    fn ring(vars: &[&str], ideal: &[&str]) -> Ring<F32003> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let gens = ideal.iter().map(|s| parse_polynomial(s, &names).unwrap()).collect();
        make_quotient_ring(names, vec![1; vars.len()], gens).unwrap()
    }

    fn cyclic(r: &Ring<F32003>, gens: &[&str]) -> ModulePresentation<F32003> {
        let g: Vec<Polynomial<F32003>> = gens.iter().map(|s| parse_polynomial(s, r.variable_names()).unwrap()).collect();
        ModulePresentation::cyclic(r, g).unwrap()
    }

    #[test]
    fn odd_even_pattern() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let m = cyclic(&r, &["y", "u"]);
        let p = |s: &str| parse_polynomial(s, r.variable_names()).unwrap();
        let n = ModulePresentation::from_rows(
            &r,
            vec![0; 3],
            vec![vec![p("0"), p("u")], vec![p("-z"), p("x")], vec![p("y"), p("0")]],
        )
        .unwrap();
        let t = tor(&m, &n, 5).unwrap();
        let v: Vec<bool> = (1..=5).map(|i| t.vanishing(i).unwrap()).collect();
        assert_eq!(v, vec![true, true, false, true, false]);
        let s = tor_by_second(&m, &n, 5).unwrap();
        for i in 0..=5 {
            assert!(t.entries[i].same_graded_data(&s.entries[i]), "index {i}");
        }
    }

    #[test]
    fn hypersurface_tor() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let m = cyclic(&r, &["x"]);
        let n = cyclic(&r, &["x*z"]);
        let t = tor(&m, &n, 4).unwrap();
        let t1 = t.entry(1).unwrap();
        assert!(!t1.vanishing);
        assert_eq!(t1.hilbert_from, 2);
        assert_eq!(t1.hilbert, vec![1; HILBERT_WINDOW]);
        assert_eq!(t1.depth, ExtendedNat::Finite(1));
        assert!(t.vanishing(2).unwrap());
        assert!(!t.vanishing(3).unwrap());
        assert!(t.distance_two.iter().all(|&(_, eq)| eq));
        let d = depth_formula_check(&m, &n, 4).unwrap();
        assert!(!d.asserted);
        assert_eq!(d.first_nonvanishing_tor, Some(1));
    }

    #[test]
    fn depth_formula_finite_pd() {
        let r = ring(&["x", "y", "w", "z"], &["x*w - y*z"]);
        let p = |s: &str| parse_polynomial(s, r.variable_names()).unwrap();
        let m = ModulePresentation::from_rows(&r, vec![0; 4], vec![vec![p("w")], vec![p("y")], vec![p("x")], vec![p("z")]])
            .unwrap();
        let d = depth_formula_check(&m, &m, 4).unwrap();
        assert_eq!((d.lhs, d.rhs), (Some(4), Some(4)));
        assert_eq!(d.depth_tensor, ExtendedNat::Finite(1));
        assert!(d.holds && d.asserted);
        assert_eq!(d.evidence, Some(EvidenceTier::ProjectiveDimensionFinite));
        let free = ModulePresentation::free(&r, vec![0]).unwrap();
        assert!(depth_formula_check(&free, &free, 3).unwrap().holds);
    }

    #[test]
    fn ext_basics() {
        let s = ring(&["x", "y", "z"], &[]);
        let k = cyclic(&s, &["x", "y", "z"]);
        let free = ModulePresentation::free(&s, vec![0]).unwrap();
        let e = ext(&k, &free, 3).unwrap();
        let v: Vec<bool> = (0..=3).map(|i| e.vanishing(i).unwrap()).collect();
        assert_eq!(v, vec![true, true, true, false]);
        assert_eq!(e.entry(3).unwrap().hilbert_from, -3);
        let e = ext(&free, &k, 2).unwrap();
        assert!(!e.vanishing(0).unwrap() && e.vanishing(1).unwrap());
    }
}
