//! Instance checks for the rigidity and depth statements: every hypothesis
//! is evaluated by the engine's predicates, and a conclusion is only
//! asserted when no hypothesis line failed or stayed undetermined.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::fmodules::{
    biduality_report, depth, is_maximal_cohen_macaulay, nonfree_locus_codim, rank_profile, serre_condition,
    BidualityReport, ExtendedNat, ModulePresentation,
};
use crate::homology::{depth_formula_check, tor_from_resolution, vanishing_evidence, EvidenceTier, TorProfile};
use crate::resolutions::{betti_table, complexity_estimate, detect_periodicity, resolve, FreeResolution, Over};
use crate::rings::Ring;

/// Objects a statement is checked on.
#[derive(Clone, Debug)]
pub struct TheoremInstance<K: Field> {
    pub m: ModulePresentation<K>,
    /// Second module; statements about `M` alone ignore it.
    pub n: Option<ModulePresentation<K>>,
    /// Tor window `0..=bound`.
    pub bound: usize,
    /// Resolution steps used for complexity estimates.
    pub steps: usize,
    /// Explicit starting index for "for some n" hypotheses.
    pub index: Option<i64>,
    /// Offset `w` for the finite-length shift hypothesis.
    pub offset: Option<usize>,
}

impl<K: Field> TheoremInstance<K> {
    pub fn new(m: ModulePresentation<K>, n: Option<ModulePresentation<K>>, bound: usize) -> Self {
        let steps = (bound + 1).max(10);
        TheoremInstance { m, n, bound, steps, index: None, offset: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineStatus {
    Satisfied,
    Failed,
    /// Could not be decided (window too short, primes not declared, ...).
    Undetermined,
    /// Holds for the graded polynomial model by construction.
    ModelLevel,
}

/// Where a checklist line's evidence comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    Exact,
    /// Exact inside the computed Tor window only.
    Window,
    /// Uses a complexity estimate.
    Estimate,
    /// A sufficient surrogate for a condition over infinitely many primes.
    Surrogate,
    Model,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChecklistItem {
    pub label: String,
    pub status: LineStatus,
    pub basis: Basis,
    pub evidence: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HypothesesUnmet,
    Undetermined,
    Holds,
    /// All hypotheses hold but the conclusion fails in the window: flag for audit.
    Contradicted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HypothesesUnmet => "hypotheses unmet",
            Verdict::Undetermined => "hypotheses undetermined",
            Verdict::Holds => "conclusion holds",
            Verdict::Contradicted => "conclusion contradicted",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub id: String,
    pub statement: String,
    pub instance: String,
    pub checklist: Vec<ChecklistItem>,
    pub verdict: Verdict,
    pub conclusion: String,
    /// Evaluation of the conclusion; `None` when nothing was asserted.
    pub conclusion_holds: Option<bool>,
    pub conclusion_detail: Option<String>,
    pub tier: Option<EvidenceTier>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl TheoremReport {
    pub fn asserted(&self) -> bool {
        self.conclusion_holds.is_some()
    }

    /// Nothing is asserted unless every line is satisfied or model-level.
    pub fn is_sound(&self) -> bool {
        !self.asserted()
            || self.checklist.iter().all(|l| matches!(l.status, LineStatus::Satisfied | LineStatus::ModelLevel))
    }
}

fn cached<T>(cell: &OnceCell<T>, f: impl FnOnce() -> Result<T>) -> Result<&T> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = f()?;
    Ok(cell.get_or_init(|| v))
}

/// Lazily computed invariants of a pair `(M, N)`.
struct Facts<K: Field> {
    ring: Ring<K>,
    m: ModulePresentation<K>,
    n: ModulePresentation<K>,
    bound: usize,
    steps: usize,
    res_m: OnceCell<FreeResolution<K>>,
    res_n: OnceCell<FreeResolution<K>>,
    tor: OnceCell<TorProfile<K>>,
    cx: OnceCell<(usize, usize, usize)>,
    depths: OnceCell<(ExtendedNat, ExtendedNat, ExtendedNat)>,
    nonfree_m: OnceCell<ExtendedNat>,
    bidual: [OnceCell<BidualityReport>; 3],
    serre: std::cell::RefCell<BTreeMap<(usize, usize), bool>>,
    ranks: [OnceCell<Option<bool>>; 2],
}

#[derive(Clone, Copy)]
enum Which {
    M,
    N,
    Tensor,
}

impl Which {
    fn name(self) -> &'static str {
        match self {
            Which::M => "M",
            Which::N => "N",
            Which::Tensor => "M⊗N",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl<K: Field> Facts<K> {
    fn new(m: ModulePresentation<K>, n: ModulePresentation<K>, bound: usize, steps: usize) -> Self {
        Facts {
            ring: m.ring().clone(),
            m,
            n,
            bound,
            steps: steps.max(bound + 1),
            res_m: OnceCell::new(),
            res_n: OnceCell::new(),
            tor: OnceCell::new(),
            cx: OnceCell::new(),
            depths: OnceCell::new(),
            nonfree_m: OnceCell::new(),
            bidual: Default::default(),
            serre: Default::default(),
            ranks: Default::default(),
        }
    }

    fn c(&self) -> usize {
        self.ring.codim()
    }

    fn d(&self) -> usize {
        self.ring.dim()
    }

    fn res_m(&self) -> Result<&FreeResolution<K>> {
        cached(&self.res_m, || resolve(&self.m, Over::Quotient, self.steps))
    }

    fn res_n(&self) -> Result<&FreeResolution<K>> {
        cached(&self.res_n, || resolve(&self.n, Over::Quotient, self.steps))
    }

    fn tor(&self) -> Result<&TorProfile<K>> {
        cached(&self.tor, || tor_from_resolution(self.res_m()?, &self.n, self.bound))
    }

    fn module(&self, w: Which) -> Result<&ModulePresentation<K>> {
        Ok(match w {
            Which::M => &self.m,
            Which::N => &self.n,
            Which::Tensor => &self.tor()?.entries[0].module,
        })
    }

    /// `(cx M, cx N, window)` estimates.
    fn cx(&self) -> Result<(usize, usize, usize)> {
        cached(&self.cx, || {
            let a = complexity_estimate(&betti_table(self.res_m()?)?, self.c())?;
            let b = complexity_estimate(&betti_table(self.res_n()?)?, self.c())?;
            Ok((a.value, b.value, a.window.min(b.window)))
        })
        .copied()
    }

    fn depths(&self) -> Result<(ExtendedNat, ExtendedNat, ExtendedNat)> {
        cached(&self.depths, || Ok((depth(&self.m)?, depth(&self.n)?, self.tor()?.entries[0].depth))).copied()
    }

    fn depth_of(&self, w: Which) -> Result<ExtendedNat> {
        let (a, b, t) = self.depths()?;
        Ok(match w {
            Which::M => a,
            Which::N => b,
            Which::Tensor => t,
        })
    }

    /// `max{depth M, depth N}` capped at `d`.
    fn b(&self) -> Result<usize> {
        let (a, b, _) = self.depths()?;
        let cap = |x: ExtendedNat| x.finite().unwrap_or(self.d()).min(self.d());
        Ok(cap(a).max(cap(b)))
    }

    fn zero(&self, i: usize) -> Result<Option<bool>> {
        Ok(self.tor()?.vanishing(i))
    }

    /// `Tor_lo = … = Tor_hi = 0`: `Some(false)` if a nonzero one is seen,
    /// `None` if the range leaves the window.
    fn range_zero(&self, lo: usize, hi: usize) -> Result<Option<bool>> {
        if lo > hi {
            return Ok(Some(true));
        }
        let t = self.tor()?;
        for i in lo.max(1)..=hi.min(self.bound) {
            if !t.entries[i].vanishing {
                return Ok(Some(false));
            }
        }
        Ok(if hi > self.bound { None } else { Some(true) })
    }

    /// Least `n ≥ from` (with the given parity, if any) such that
    /// `Tor_n..Tor_{n+len-1}` vanish inside the window.
    fn ladder(&self, len: usize, from: usize, parity: Option<usize>) -> Result<Option<usize>> {
        let from = from.max(1);
        for n in from..=self.bound {
            if parity.is_some_and(|p| n % 2 != p) {
                continue;
            }
            if len == 0 || (n + len - 1 <= self.bound && self.range_zero(n, n + len - 1)? == Some(true)) {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// `Tor_i = 0` for `from ≤ i ≤ bound`, with the strongest available tier.
    fn tail_zero(&self, from: usize) -> Result<(bool, Option<EvidenceTier>)> {
        let from = from.max(1);
        if self.range_zero(from, self.bound)? != Some(true) {
            return Ok((false, None));
        }
        if from == 1 {
            let tier = vanishing_evidence(&self.m, &self.n, self.tor()?)?;
            return Ok((true, tier));
        }
        for res in [self.res_m()?, self.res_n()?] {
            if res.projective_dimension().is_some_and(|pd| pd < from) {
                return Ok((true, Some(EvidenceTier::ProjectiveDimensionFinite)));
            }
        }
        if self.ring.is_complete_intersection() && self.bound + 1 > from + self.c() {
            return Ok((true, Some(EvidenceTier::Rigidity)));
        }
        for res in [self.res_m()?, self.res_n()?] {
            if res.len() >= 6 {
                let p = detect_periodicity(res)?;
                if let (true, Some(period), Some(onset)) = (p.periodic, p.period, p.onset) {
                    if onset.max(from) + period <= self.bound + 1 {
                        return Ok((true, Some(EvidenceTier::WindowPeriodicity)));
                    }
                }
            }
        }
        Ok((true, Some(EvidenceTier::WindowOnly)))
    }

    fn nonfree_m(&self) -> Result<ExtendedNat> {
        cached(&self.nonfree_m, || nonfree_locus_codim(&self.m)).copied()
    }

    fn bidual(&self, w: Which) -> Result<&BidualityReport> {
        cached(&self.bidual[w.slot()], || biduality_report(self.module(w)?))
    }

    fn serre(&self, w: Which, k: i64) -> Result<bool> {
        if k <= 0 {
            return Ok(true);
        }
        let key = (w.slot(), k as usize);
        if let Some(&v) = self.serre.borrow().get(&key) {
            return Ok(v);
        }
        let v = serre_condition(self.module(w)?, k as usize)?.holds;
        self.serre.borrow_mut().insert(key, v);
        Ok(v)
    }

    /// Constant rank at the minimal primes; `None` if they are not known.
    fn constant_rank(&self, w: Which) -> Result<Option<bool>> {
        cached(&self.ranks[w.slot()], || match rank_profile(self.module(w)?) {
            Ok(p) => Ok(Some(p.constant_rank)),
            Err(Error::NeedsMinimalPrimes(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .copied()
    }

    fn cohen_macaulay(&self, w: Which) -> Result<bool> {
        let x = self.module(w)?;
        if x.is_zero() {
            return Ok(true);
        }
        Ok(self.depth_of(w)?.finite() == x.krull_dim())
    }

    fn mcm(&self, w: Which) -> Result<bool> {
        is_maximal_cohen_macaulay(self.module(w)?)
    }

    fn dim(&self, w: Which) -> Result<Option<usize>> {
        Ok(self.module(w)?.krull_dim())
    }

    fn is_free(&self) -> bool {
        self.m.minimalize().relations().ncols() == 0
    }
}

struct Sheet {
    items: Vec<ChecklistItem>,
}

impl Sheet {
    fn line(&mut self, label: impl Into<String>, status: LineStatus, basis: Basis, evidence: impl Into<String>) {
        self.items.push(ChecklistItem { label: label.into(), status, basis, evidence: evidence.into() });
    }

    fn check(&mut self, label: impl Into<String>, ok: bool, basis: Basis, evidence: impl Into<String>) {
        let status = if ok { LineStatus::Satisfied } else { LineStatus::Failed };
        self.line(label, status, basis, evidence);
    }

    /// A tri-state check: `None` means undetermined.
    fn maybe(&mut self, label: impl Into<String>, ok: Option<bool>, basis: Basis, evidence: impl Into<String>) {
        let status = match ok {
            Some(true) => LineStatus::Satisfied,
            Some(false) => LineStatus::Failed,
            None => LineStatus::Undetermined,
        };
        self.line(label, status, basis, evidence);
    }

    fn model(&mut self, label: impl Into<String>, evidence: impl Into<String>) {
        self.line(label, LineStatus::ModelLevel, Basis::Model, evidence);
    }

    fn blocked(&self) -> bool {
        self.items.iter().any(|l| matches!(l.status, LineStatus::Failed | LineStatus::Undetermined))
    }

    fn failed(&self) -> bool {
        self.items.iter().any(|l| l.status == LineStatus::Failed)
    }
}

struct Conclusion {
    holds: bool,
    tier: Option<EvidenceTier>,
    detail: String,
}

fn fmt_tier(t: Option<EvidenceTier>) -> String {
    t.map_or("window check".to_string(), |t| format!("{t:?}"))
}

/// The statement ids the harness knows.
pub fn theorem_ids() -> &'static [&'static str] {
    &[
        "2.1", "2.2", "2.3", "2.4", "2.6", "2.7", "2.8", "3.3", "3.4", "3.5", "3.7", "3.8", "3.9", "3.12", "3.15",
        "3.16", "4.1", "4.3", "4.6", "4.7", "4.8", "4.9", "4.11", "4.12", "4.13", "4.14", "4.15", "4.17", "4.20",
        "4.21", "4.22",
    ]
}

/// Split `"3.12(2)"` into `("3.12", 2)`; a missing part defaults to 1.
fn parse_id(id: &str) -> Result<(&'static str, usize)> {
    let trimmed = id.trim().trim_start_matches(|c: char| c.is_ascii_alphabetic()).trim();
    let (base, part) = match trimmed.find('(') {
        Some(p) => {
            let inner = trimmed[p + 1..].strip_suffix(')').ok_or_else(|| Error::UnknownTheorem(id.into()))?;
            let part: usize = inner.trim().parse().map_err(|_| Error::UnknownTheorem(id.into()))?;
            (&trimmed[..p], part)
        }
        None => (trimmed, 1),
    };
    let base = theorem_ids().iter().find(|&&b| b == base).ok_or_else(|| Error::UnknownTheorem(id.into()))?;
    let parts = if matches!(*base, "3.9" | "3.12") { 2 } else { 1 };
    if part == 0 || part > parts {
        return Err(Error::UnknownTheorem(id.into()));
    }
    Ok((base, part))
}

fn describe<K: Field>(m: &ModulePresentation<K>) -> String {
    format!("coker{} on shifts {:?}", m.fmt_relations(), m.shifts())
}

/// Evaluate a statement on an instance.
pub fn check_theorem<K: Field>(id: &str, inst: &TheoremInstance<K>) -> Result<TheoremReport> {
    let start = Instant::now();
    let (base, part) = parse_id(id)?;
    let ring = inst.m.ring().clone();
    let n = match base {
        "3.5" | "4.3" => inst.m.clone(),
        "4.17" => inst.m.dual(),
        _ => match &inst.n {
            Some(n) => {
                if !n.same_ring(&inst.m) {
                    return Err(Error::RingMismatch("instance modules live over different rings".into()));
                }
                n.clone()
            }
            None => return Err(Error::IncompatibleOperands(format!("statement {base} needs two modules"))),
        },
    };
    let f = Facts::new(inst.m.minimalize(), n.minimalize(), inst.bound, inst.steps);
    let mut sheet = Sheet { items: Vec::new() };
    let ci = ring.is_complete_intersection();
    sheet.check(
        "ring is a complete intersection",
        ci,
        Basis::Exact,
        format!("prefix dimensions {:?}", ring.certificate().dims),
    );
    sheet.model("local statement read in the graded setting", "homogeneous maximal ideal plays the local role");
    let (statement, conclusion) = if ci {
        evaluate(base, part, inst, &f, &mut sheet)?
    } else {
        ("ring hypothesis".to_string(), None)
    };
    let instance = match base {
        "3.5" | "4.3" | "4.17" => format!("{} over {}; M = {}", base, ring.describe(), describe(&inst.m)),
        _ => format!("{} over {}; M = {}; N = {}", base, ring.describe(), describe(&inst.m), describe(&f.n)),
    };
    let conclusion_text = conclusion_text(base, part);
    let (verdict, holds, detail, tier) = if sheet.failed() {
        (Verdict::HypothesesUnmet, None, None, None)
    } else if sheet.blocked() {
        (Verdict::Undetermined, None, None, None)
    } else {
        let c = match conclusion {
            Some(c) => c,
            None => unreachable!("conclusions are evaluated whenever the ring hypothesis holds"),
        };
        let v = if c.holds { Verdict::Holds } else { Verdict::Contradicted };
        (v, Some(c.holds), Some(format!("{} [{}]", c.detail, fmt_tier(c.tier))), c.tier)
    };
    Ok(TheoremReport {
        id: if matches!(base, "3.9" | "3.12") { format!("{base}({part})") } else { base.to_string() },
        statement,
        instance,
        checklist: sheet.items,
        verdict,
        conclusion: conclusion_text.to_string(),
        conclusion_holds: holds,
        conclusion_detail: detail,
        tier,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn conclusion_text(base: &str, part: usize) -> &'static str {
    match (base, part) {
        ("2.1" | "2.2" | "2.3" | "4.8" | "4.21", _) => "Tor_i(M,N) = 0 for all i ≥ n",
        ("2.4", _) => "Tor_i(M,N) = 0 for all i ≥ d − b + 1",
        ("2.6", _) => "Tor_i(M,N) ≅ Tor_{i+2}(M,N) for all i ≥ d − b + 1",
        ("2.7", _) => "depth M + depth N = depth R + depth(M⊗N)",
        ("3.4", _) => "cx M = cx N = c, or Tor_i(M,N) = 0 for all i ≥ 1",
        ("3.5", _) => "cx M = c, or pd M < ∞",
        ("3.7", _) => "Tor_{n+2i}(M,N) = 0 (r odd) or Tor_{n+2i+1}(M,N) = 0 (r even) for all i ≥ 0",
        ("3.9" | "3.12", 2) => "Tor_i(M,N) = 0 for even i ≥ 2; one odd zero forces all to vanish",
        ("3.16", _) => "cx M = cx N = c and Tor_1(M,N) ≠ 0, or Tor_i(M,N) = 0 for all i ≥ 1",
        ("4.3" | "4.17", _) => "M is free",
        ("4.6", _) => "depth M + depth N = depth S, and Tor_i(M,N) ≠ 0 iff i is even and positive",
        ("4.7", _) => "Tor_i(M,N) ≠ 0 iff i is even and nonnegative",
        ("4.9", _) => "Tor_i(M,N) = 0 for all i ≥ 1, and the depth formula holds",
        ("4.11", _) => "Tor_i(M,N) = 0 for all i ≥ d − b + 1, or depth Tor_{n−1}(M,N) = 0",
        _ => "Tor_i(M,N) = 0 for all i ≥ 1",
    }
}

fn ext(x: ExtendedNat) -> String {
    x.to_string()
}

/// Shared line: the Tor window `Tor_lo..Tor_hi` vanishes.
fn ladder_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>, lo: usize, hi: usize) -> Result<()> {
    if lo > hi {
        sheet.check(format!("Tor_{lo}..Tor_{hi} vanish"), true, Basis::Exact, "empty range");
        return Ok(());
    }
    let z = f.range_zero(lo, hi)?;
    let ev = match z {
        None => format!("window ends at {}", f.bound),
        Some(_) => format!("pattern {}", pattern(f)?),
    };
    sheet.maybe(format!("Tor_{lo}..Tor_{hi} vanish"), z, Basis::Window, ev);
    Ok(())
}

/// `0`/`+` string of the Tor window.
fn pattern<K: Field>(f: &Facts<K>) -> Result<String> {
    Ok(f.tor()?.entries.iter().map(|e| if e.vanishing { '0' } else { '+' }).collect())
}

/// "For some n ≥ from, Tor_n..Tor_{n+len−1} vanish"; returns the chosen n.
fn some_ladder<K: Field>(
    sheet: &mut Sheet,
    f: &Facts<K>,
    inst: &TheoremInstance<K>,
    len: usize,
    from: usize,
    parity: Option<usize>,
) -> Result<Option<usize>> {
    let label = format!("Tor vanishes on {len} consecutive indices from some n ≥ {}", from.max(1));
    if let Some(n) = inst.index {
        let ok_index = n >= from.max(1) as i64 && parity.is_none_or(|p| n as usize % 2 == p);
        if !ok_index {
            sheet.check(label, false, Basis::Exact, format!("requested n = {n} is not admissible"));
            return Ok(None);
        }
        let n = n as usize;
        let z = if len == 0 { Some(true) } else { f.range_zero(n, n + len - 1)? };
        sheet.maybe(label, z, Basis::Window, format!("n = {n}, pattern {}", pattern(f)?));
        return Ok(Some(n));
    }
    let found = f.ladder(len, from, parity)?;
    match found {
        Some(n) => sheet.check(label, true, Basis::Window, format!("n = {n}, pattern {}", pattern(f)?)),
        None => sheet.maybe(label, None, Basis::Window, format!("no such n inside the window, pattern {}", pattern(f)?)),
    }
    Ok(found)
}

fn serre_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>, w: Which, k: i64) -> Result<()> {
    let ok = f.serre(w, k)?;
    let ev = if k <= 0 { "vacuous".to_string() } else { format!("Ext-dimension test for (S{k})") };
    sheet.check(format!("{} satisfies (S{})", w.name(), k.max(0)), ok, Basis::Exact, ev);
    Ok(())
}

/// "M is free on X^k(R)": the non-free locus has codimension ≥ k+1.
fn free_on_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>, k: i64, basis: Basis) -> Result<()> {
    if k < 0 {
        sheet.check(format!("M is free on X^{k}"), true, basis, "vacuous");
        return Ok(());
    }
    let codim = f.nonfree_m()?;
    let ok = codim >= ExtendedNat::Finite(k as usize + 1);
    sheet.check(format!("M is free on X^{k}"), ok, basis, format!("non-free locus codim {} (need ≥ {})", codim, k + 1));
    Ok(())
}

fn mcm_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>, w: Which) -> Result<()> {
    let ok = f.mcm(w)?;
    sheet.check(
        format!("{} is maximal Cohen–Macaulay", w.name()),
        ok,
        Basis::Exact,
        format!("depth {} vs dim R {}", f.depth_of(w)?, f.d()),
    );
    Ok(())
}

fn cm_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>, w: Which) -> Result<()> {
    let ok = f.cohen_macaulay(w)?;
    let dim = f.dim(w)?.map_or("-".into(), |d| d.to_string());
    sheet.check(
        format!("{} is Cohen–Macaulay", w.name()),
        ok,
        Basis::Exact,
        format!("depth {} vs dim {}", f.depth_of(w)?, dim),
    );
    Ok(())
}

fn nonzero_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>) -> Result<()> {
    let ok = !f.m.is_zero() && !f.n.is_zero();
    sheet.check("M and N are nonzero", ok, Basis::Exact, "");
    Ok(())
}

fn torsion_free_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>, w: Which) -> Result<()> {
    let b = f.bidual(w)?;
    let ev = b.torsion_witness.clone().map_or("M → M** injective and (S1)".into(), |t| format!("torsion element {t}"));
    sheet.check(format!("{} is torsion-free", w.name()), b.torsion_free, Basis::Exact, ev);
    Ok(())
}

fn reflexive_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>, w: Which) -> Result<()> {
    let b = f.bidual(w)?;
    sheet.check(
        format!("{} is reflexive", w.name()),
        b.reflexive,
        Basis::Exact,
        format!("kernel zero {}, cokernel zero {}", b.kernel_zero, b.cokernel_zero),
    );
    Ok(())
}

fn finite_length_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>, w: Which) -> Result<()> {
    let x = f.module(w)?;
    let len = x.length();
    sheet.check(format!("{} has finite length", w.name()), !len.is_infinite(), Basis::Exact, format!("length {len}"));
    Ok(())
}

fn rank_text(r: Option<bool>) -> &'static str {
    match r {
        Some(true) => "constant",
        Some(false) => "not constant",
        None => "minimal primes not declared",
    }
}

fn constant_rank_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>, w: Which) -> Result<()> {
    let r = f.constant_rank(w)?;
    sheet.maybe(format!("{} has constant rank", w.name()), r, Basis::Exact, rank_text(r));
    Ok(())
}

fn either_constant_rank_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>) -> Result<()> {
    let a = f.constant_rank(Which::M)?;
    let b = f.constant_rank(Which::N)?;
    let ok = match (a, b) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    };
    sheet.maybe(
        "M or N has constant rank",
        ok,
        Basis::Exact,
        format!("M: {}; N: {}", rank_text(a), rank_text(b)),
    );
    Ok(())
}

/// Surrogate for "Tor_i(M,N)_q = 0 for all i ≥ 1 and q ∈ X^v(R)":
/// every nonzero Tor_i in the window has support of codimension ≥ v+1.
fn local_vanishing_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>, v: usize) -> Result<()> {
    let t = f.tor()?;
    let d = f.d();
    let mut worst: Option<(usize, usize)> = None;
    for e in t.entries.iter().skip(1) {
        if let Some(dim) = e.dim {
            let codim = d.saturating_sub(dim);
            if codim < v + 1 && worst.is_none() {
                worst = Some((e.index, codim));
            }
        }
    }
    let ev = match worst {
        None => format!("codim Supp Tor_i ≥ {} for 1 ≤ i ≤ {}", v + 1, f.bound),
        Some((i, c)) => format!("Tor_{i} has support of codim {c}"),
    };
    sheet.check(format!("Tor_i(M,N) vanishes on X^{v} (surrogate)"), worst.is_none(), Basis::Surrogate, ev);
    Ok(())
}

fn complexity_line<K: Field>(sheet: &mut Sheet, f: &Facts<K>) -> Result<(usize, usize)> {
    let (a, b, w) = f.cx()?;
    sheet.check("complexity estimates available", true, Basis::Estimate, format!("cx M = {a}, cx N = {b} (window {w})"));
    Ok((a, b))
}

fn model_unramified(sheet: &mut Sheet) {
    sheet.model("ambient regular ring is unramified / admissible", "polynomial ring over a field");
}

fn all_vanish<K: Field>(f: &Facts<K>, from: usize) -> Result<Conclusion> {
    let (holds, tier) = f.tail_zero(from)?;
    Ok(Conclusion { holds, tier, detail: format!("Tor pattern {} from i = {}", pattern(f)?, from.max(1)) })
}

fn evens_and_odd_forcing<K: Field>(f: &Facts<K>) -> Result<Conclusion> {
    let t = f.tor()?;
    let evens = (2..=f.bound).step_by(2).all(|i| t.entries[i].vanishing);
    let odd_zero = (1..=f.bound).step_by(2).any(|i| t.entries[i].vanishing);
    let (all, tier) = f.tail_zero(1)?;
    let holds = evens && (!odd_zero || all);
    Ok(Conclusion { holds, tier: if odd_zero { tier } else { None }, detail: format!("Tor pattern {}", pattern(f)?) })
}

type Evaluated = (String, Option<Conclusion>);

fn evaluate<K: Field>(
    base: &str,
    part: usize,
    inst: &TheoremInstance<K>,
    f: &Facts<K>,
    sheet: &mut Sheet,
) -> Result<Evaluated> {
    let c = f.c();
    let d = f.d();
    let (statement, conclusion): (&str, Conclusion) = match base {
        "2.1" => {
            sheet.check("ring is regular", c == 0, Basis::Exact, format!("codim {c}"));
            let n = some_ladder(sheet, f, inst, 1, 1, None)?.unwrap_or(1);
            ("single vanishing Tor forces all later Tor to vanish over a regular ring", all_vanish(f, n)?)
        }
        "2.2" => {
            let n = some_ladder(sheet, f, inst, c + 1, 1, None)?.unwrap_or(1);
            ("c+1 consecutive vanishing Tor force all later Tor to vanish", all_vanish(f, n)?)
        }
        "2.3" => {
            sheet.check("codimension c ≥ 1", c >= 1, Basis::Exact, format!("c = {c}"));
            finite_length_line(sheet, f, Which::Tensor)?;
            let (dm, dn) = (f.dim(Which::M)?.unwrap_or(0), f.dim(Which::N)?.unwrap_or(0));
            sheet.check("dim M + dim N < d + c", dm + dn < d + c, Basis::Exact, format!("{dm} + {dn} vs {}", d + c));
            let n = some_ladder(sheet, f, inst, c, 1, None)?.unwrap_or(1);
            sheet.model("n > d or the ambient ring is unramified", "polynomial ring over a field");
            ("c consecutive vanishing Tor force vanishing under a dimension bound", all_vanish(f, n)?)
        }
        "2.4" => {
            let (a, b) = complexity_line(sheet, f)?;
            let r = a.min(b);
            let start = (d + 1).saturating_sub(f.b()?).max(1);
            some_ladder(sheet, f, inst, r + 1, start, None)?;
            ("r+1 consecutive vanishing Tor past d−b force vanishing", all_vanish(f, start)?)
        }
        "2.6" => {
            let (a, b) = complexity_line(sheet, f)?;
            sheet.check("M or N has complexity one", a == 1 || b == 1, Basis::Estimate, format!("cx {a}, {b}"));
            let start = (d + 1).saturating_sub(f.b()?).max(1);
            let t = f.tor()?;
            let bad: Vec<usize> = t.distance_two.iter().filter(|(i, ok)| *i >= start && !ok).map(|(i, _)| *i).collect();
            let holds = bad.is_empty();
            (
                "complexity one makes Tor periodic of period two",
                Conclusion { holds, tier: None, detail: format!("distance-two mismatches at {bad:?} from i = {start}") },
            )
        }
        "2.7" => {
            let (all, tier) = f.tail_zero(1)?;
            let ok = if !all {
                Some(false)
            } else if tier.is_some_and(|t| t.certified()) {
                Some(true)
            } else {
                None
            };
            sheet.maybe("Tor_i(M,N) = 0 for all i ≥ 1", ok, Basis::Window, format!("pattern {}, {}", pattern(f)?, fmt_tier(tier)));
            let r = depth_formula_check(&f.m, &f.n, f.bound)?;
            let detail = format!(
                "{} + {} vs {} + {}",
                ext(r.depth_m),
                ext(r.depth_n),
                ext(r.depth_r),
                ext(r.depth_tensor)
            );
            ("total Tor vanishing implies the depth formula", Conclusion { holds: r.holds, tier, detail })
        }
        "2.8" => {
            model_unramified(sheet);
            sheet.check("codimension c ≥ 1", c >= 1, Basis::Exact, format!("c = {c}"));
            ladder_line(sheet, f, 1, c)?;
            let (_, dn, dt) = f.depths()?;
            sheet.check("depth N > 0", dn > ExtendedNat::Finite(0), Basis::Exact, format!("depth N = {dn}"));
            sheet.check("depth M⊗N > 0", dt > ExtendedNat::Finite(0), Basis::Exact, format!("depth M⊗N = {dt}"));
            let t = f.tor()?;
            let half = (f.bound / 2).max(1);
            let ok = t.entries[half..].iter().all(|e| e.finite_length);
            sheet.check("Tor_i(M,N) has finite length for i ≫ 0", ok, Basis::Window, format!("checked {half} ≤ i ≤ {}", f.bound));
            ("rigidity under positive depth and eventually finite-length Tor", all_vanish(f, 1)?)
        }
        "3.3" => {
            model_unramified(sheet);
            free_on_line(sheet, f, c as i64, Basis::Exact)?;
            serre_line(sheet, f, Which::M, c as i64)?;
            serre_line(sheet, f, Which::N, c as i64)?;
            serre_line(sheet, f, Which::Tensor, c as i64 + 1)?;
            ("Serre conditions and freeness in codimension c force vanishing", all_vanish(f, 1)?)
        }
        "3.4" => {
            model_unramified(sheet);
            let k = c as i64 - 1;
            serre_line(sheet, f, Which::M, k)?;
            serre_line(sheet, f, Which::N, k)?;
            serre_line(sheet, f, Which::Tensor, c as i64)?;
            if c >= 2 {
                local_vanishing_line(sheet, f, c - 1)?;
            }
            let (a, b) = complexity_line(sheet, f)?;
            let max_cx = a == c && b == c;
            let v = all_vanish(f, 1)?;
            let detail = format!("cx {a}, {b}; {}", v.detail);
            (
                "either both complexities are maximal or Tor vanishes",
                Conclusion { holds: max_cx || v.holds, tier: if max_cx { None } else { v.tier }, detail },
            )
        }
        "3.5" => {
            model_unramified(sheet);
            serre_line(sheet, f, Which::M, c as i64 - 1)?;
            free_on_line(sheet, f, c as i64 - 1, Basis::Exact)?;
            serre_line(sheet, f, Which::Tensor, c as i64)?;
            let (a, _) = complexity_line(sheet, f)?;
            let pd = f.res_m()?.projective_dimension();
            (
                "self-tensor Serre condition forces maximal complexity or finite projective dimension",
                Conclusion {
                    holds: a == c || pd.is_some(),
                    tier: pd.map(|_| EvidenceTier::ProjectiveDimensionFinite),
                    detail: format!("cx M = {a}, pd M = {}", pd.map_or("∞".into(), |p| p.to_string())),
                },
            )
        }
        "3.7" => {
            let (a, b) = complexity_line(sheet, f)?;
            let r = a.min(b);
            sheet.check("r = min cx ≥ 1", r >= 1, Basis::Estimate, format!("r = {r}"));
            let start = (d + 1).saturating_sub(f.b()?).max(1);
            let n = some_ladder(sheet, f, inst, r, start, None)?.unwrap_or(start);
            let t = f.tor()?;
            let first = if r % 2 == 1 { n } else { n + 1 };
            let bad: Vec<usize> = (first..=f.bound).step_by(2).filter(|&i| !t.entries[i].vanishing).collect();
            (
                "a short vanishing run propagates along one parity",
                Conclusion {
                    holds: bad.is_empty(),
                    tier: None,
                    detail: format!("n = {n}, r = {r}, pattern {}, nonzero at {bad:?}", pattern(f)?),
                },
            )
        }
        "3.8" => {
            nonzero_line(sheet, f)?;
            mcm_line(sheet, f, Which::M)?;
            let pd = f.res_n()?.projective_dimension();
            sheet.check(
                "N has finite projective dimension",
                pd.is_some(),
                Basis::Exact,
                pd.map_or(format!("no termination in {} steps", f.steps), |p| format!("pd N = {p}")),
            );
            ("MCM against finite projective dimension has no higher Tor", all_vanish(f, 1)?)
        }
        "3.9" | "3.12" => {
            if base == "3.12" {
                mcm_line(sheet, f, Which::M)?;
                mcm_line(sheet, f, Which::N)?;
                mcm_line(sheet, f, Which::Tensor)?;
            } else {
                mcm_line(sheet, f, Which::M)?;
            }
            let (a, b) = complexity_line(sheet, f)?;
            let r = a.min(b) as i64;
            let k = if part == 1 { r } else { r - 1 };
            free_on_line(sheet, f, k, Basis::Estimate)?;
            if base == "3.9" {
                serre_line(sheet, f, Which::N, k)?;
                serre_line(sheet, f, Which::Tensor, k + 1)?;
            }
            let c = if part == 1 { all_vanish(f, 1)? } else { evens_and_odd_forcing(f)? };
            ("freeness on a low-codimension locus gives rigidity", c)
        }
        "3.15" => {
            model_unramified(sheet);
            let n = inst.index.unwrap_or(1);
            sheet.check("n ≠ c when n is positive", n <= 0 || n != c as i64, Basis::Exact, format!("n = {n}, c = {c}"));
            let k = c as i64 - n;
            serre_line(sheet, f, Which::M, k)?;
            serre_line(sheet, f, Which::N, k)?;
            free_on_line(sheet, f, k, Basis::Exact)?;
            serre_line(sheet, f, Which::Tensor, k + 1)?;
            ladder_line(sheet, f, 1, n.max(0) as usize)?;
            ("trading Serre conditions for initial Tor vanishing", all_vanish(f, 1)?)
        }
        "3.16" => {
            model_unramified(sheet);
            sheet.check("codimension c ≠ 1", c != 1, Basis::Exact, format!("c = {c}"));
            let k = c as i64 - 1;
            serre_line(sheet, f, Which::M, k)?;
            serre_line(sheet, f, Which::N, k)?;
            free_on_line(sheet, f, k, Basis::Exact)?;
            serre_line(sheet, f, Which::Tensor, c as i64)?;
            let (a, b) = complexity_line(sheet, f)?;
            let first = f.zero(1)? == Some(false);
            let v = all_vanish(f, 1)?;
            let alt = a == c && b == c && first;
            (
                "either maximal complexity with Tor_1 ≠ 0, or Tor vanishes",
                Conclusion { holds: alt || v.holds, tier: if alt { None } else { v.tier }, detail: format!("cx {a}, {b}; {}", v.detail) },
            )
        }
        "4.1" => {
            model_unramified(sheet);
            sheet.check("ring is a hypersurface", c == 1, Basis::Exact, format!("c = {c}"));
            cm_line(sheet, f, Which::M)?;
            cm_line(sheet, f, Which::N)?;
            cm_line(sheet, f, Which::Tensor)?;
            let (dm, dn) = (f.dim(Which::M)?.unwrap_or(0), f.dim(Which::N)?.unwrap_or(0));
            sheet.check("dim M + dim N ≤ d", dm + dn <= d, Basis::Exact, format!("{dm} + {dn} vs {d}"));
            ladder_line(sheet, f, 1, 1)?;
            ("Cohen–Macaulay modules of complementary dimension over a hypersurface are rigid", all_vanish(f, 1)?)
        }
        "4.3" => {
            let (all, tier) = f.tail_zero(1)?;
            let ok = if !all { Some(false) } else if tier.is_some_and(|t| t.certified()) { Some(true) } else { None };
            sheet.maybe("Tor_i(M,M) = 0 for all i ≥ 1", ok, Basis::Window, format!("pattern {}, {}", pattern(f)?, fmt_tier(tier)));
            let cm = f.cohen_macaulay(Which::M)? || f.cohen_macaulay(Which::Tensor)?;
            sheet.check("M or M⊗M is Cohen–Macaulay", cm, Basis::Exact, "");
            let free = f.is_free();
            ("self-Tor vanishing with a Cohen–Macaulay condition forces freeness", Conclusion {
                holds: free,
                tier: None,
                detail: format!("minimal relations: {}", f.m.minimalize().relations().ncols()),
            })
        }
        "4.6" => {
            sheet.check("codimension ≥ 1", c >= 1, Basis::Exact, format!("c = {c}"));
            nonzero_line(sheet, f)?;
            let pd_s = crate::fmodules::ambient_projective_dimension(&f.m)?;
            sheet.check("pd_S M < ∞", true, Basis::Exact, format!("pd_S M = {pd_s}"));
            finite_length_line(sheet, f, Which::Tensor)?;
            let (dm, dn, _) = f.depths()?;
            let sum = dm.finite().unwrap_or(0) + dn.finite().unwrap_or(0);
            let ds = f.ring.nvars();
            sheet.check("depth M + depth N ≥ depth S", sum >= ds, Basis::Exact, format!("{sum} vs {ds}"));
            let t = f.tor()?;
            let parity = (1..=f.bound).all(|i| t.entries[i].vanishing == (i % 2 == 1));
            (
                "finite length tensor product: depth equality and even-only Tor",
                Conclusion { holds: parity && sum == ds, tier: None, detail: format!("depth sum {sum}, pattern {}", pattern(f)?) },
            )
        }
        "4.7" => {
            sheet.check("codimension equals dimension, not a field", c == d && f.ring.nvars() > 0, Basis::Exact, format!("c = {c}, d = {d}"));
            mcm_line(sheet, f, Which::M)?;
            mcm_line(sheet, f, Which::N)?;
            finite_length_line(sheet, f, Which::Tensor)?;
            let t = f.tor()?;
            let holds = (0..=f.bound).all(|i| t.entries[i].vanishing == (i % 2 == 1));
            ("Tor of MCM modules with finite-length tensor lives in even degrees", Conclusion {
                holds,
                tier: None,
                detail: format!("pattern {}", pattern(f)?),
            })
        }
        "4.8" => {
            model_unramified(sheet);
            sheet.check("codimension c ≥ 1", c >= 1, Basis::Exact, format!("c = {c}"));
            nonzero_line(sheet, f)?;
            cm_line(sheet, f, Which::M)?;
            cm_line(sheet, f, Which::N)?;
            finite_length_line(sheet, f, Which::Tensor)?;
            let parity = (c == 1).then_some(0);
            let n = some_ladder(sheet, f, inst, c, 1, parity)?.unwrap_or(1);
            ("c consecutive zeros with finite-length tensor propagate", all_vanish(f, n)?)
        }
        "4.9" => {
            model_unramified(sheet);
            ladder_line(sheet, f, 1, c)?;
            cm_line(sheet, f, Which::M)?;
            cm_line(sheet, f, Which::N)?;
            cm_line(sheet, f, Which::Tensor)?;
            if c == 1 {
                let (dm, dn) = (f.dim(Which::M)?.unwrap_or(0), f.dim(Which::N)?.unwrap_or(0));
                sheet.check("dim M + dim N ≤ d", dm + dn <= d, Basis::Exact, format!("{dm} + {dn} vs {d}"));
            }
            let v = all_vanish(f, 1)?;
            let r = depth_formula_check(&f.m, &f.n, f.bound)?;
            ("initial Tor vanishing for Cohen–Macaulay modules gives the depth formula", Conclusion {
                holds: v.holds && r.holds,
                tier: v.tier,
                detail: format!("{}; depth formula {}", v.detail, r.holds),
            })
        }
        "4.11" => {
            let (a, b) = complexity_line(sheet, f)?;
            let r = a.min(b);
            let start = (d + 1).saturating_sub(f.b()?).max(1);
            let n = some_ladder(sheet, f, inst, r, start, None)?.unwrap_or(start);
            let w = inst.offset.unwrap_or(0);
            let hi = n + 2 * w + r;
            let t = f.tor()?;
            let ok = if hi > f.bound {
                None
            } else {
                Some((n + 2 * w + 1..=hi).all(|i| t.entries[i].finite_length))
            };
            sheet.maybe(
                format!("Tor_{}..Tor_{} have finite length", n + 2 * w + 1, hi),
                ok,
                Basis::Window,
                format!("w = {w}"),
            );
            let (all, tier) = f.tail_zero(start)?;
            let depth_zero = n >= 1 && t.entries[n - 1].depth == ExtendedNat::Finite(0);
            ("a vanishing run with finite-length tail: vanishing or a depth-zero Tor", Conclusion {
                holds: all || depth_zero,
                tier: if all { tier } else { None },
                detail: format!("pattern {}, depth Tor_{} = {}", pattern(f)?, n.saturating_sub(1), t.entries[n.saturating_sub(1)].depth),
            })
        }
        "4.12" => {
            mcm_line(sheet, f, Which::M)?;
            let dt = f.depth_of(Which::Tensor)?;
            sheet.check("depth M⊗N > 0", dt > ExtendedNat::Finite(0), Basis::Exact, format!("depth {dt}"));
            let (a, b) = complexity_line(sheet, f)?;
            ladder_line(sheet, f, 1, a.min(b))?;
            let t = f.tor()?;
            let ok = t.entries[1..].iter().all(|e| e.finite_length);
            sheet.check("Tor_i(M,N) has finite length for all i ≥ 1", ok, Basis::Window, format!("1 ≤ i ≤ {}", f.bound));
            ("finite-length Tor against an MCM module is rigid", all_vanish(f, 1)?)
        }
        "4.13" => {
            let (a, b) = complexity_line(sheet, f)?;
            ladder_line(sheet, f, 1, a.min(b).saturating_sub(1))?;
            mcm_line(sheet, f, Which::M)?;
            reflexive_line(sheet, f, Which::Tensor)?;
            torsion_free_line(sheet, f, Which::N)?;
            local_vanishing_line(sheet, f, 1)?;
            ("reflexive tensor product with MCM module is rigid", all_vanish(f, 1)?)
        }
        "4.14" => {
            sheet.check("ring has dimension one", d == 1, Basis::Exact, format!("d = {d}"));
            either_constant_rank_line(sheet, f)?;
            let (a, b) = complexity_line(sheet, f)?;
            ladder_line(sheet, f, 1, a.max(b).saturating_sub(1))?;
            torsion_free_line(sheet, f, Which::M)?;
            torsion_free_line(sheet, f, Which::Tensor)?;
            ("torsion-free tensor products in dimension one are rigid", all_vanish(f, 1)?)
        }
        "4.15" => {
            either_constant_rank_line(sheet, f)?;
            let (a, b) = complexity_line(sheet, f)?;
            ladder_line(sheet, f, 1, a.max(b).saturating_sub(1))?;
            mcm_line(sheet, f, Which::M)?;
            reflexive_line(sheet, f, Which::Tensor)?;
            torsion_free_line(sheet, f, Which::N)?;
            ("reflexive tensor product with an MCM module of constant rank is rigid", all_vanish(f, 1)?)
        }
        "4.17" => {
            torsion_free_line(sheet, f, Which::M)?;
            reflexive_line(sheet, f, Which::Tensor)?;
            let t = f.tor()?;
            let local_zero = |i: usize| t.entries[i].dim.is_none_or(|dim| d.saturating_sub(dim) >= 2);
            let even = (2..=f.bound).step_by(2).find(|&i| local_zero(i));
            let odd = (1..=f.bound).step_by(2).find(|&i| local_zero(i));
            let first = even.is_some() && odd.is_some();
            let (a, _, _) = f.cx()?;
            let rank = f.constant_rank(Which::M)?;
            let second = a <= 1 && rank == Some(true);
            sheet.check(
                "on X^1, an even and an odd Tor(M,M*) vanish, or M has constant rank and bounded Betti numbers",
                first || second,
                Basis::Surrogate,
                format!("even {even:?}, odd {odd:?}; cx M = {a}, rank {}", rank_text(rank)),
            );
            let free = f.is_free();
            ("reflexive M⊗M* with local Tor vanishing forces freeness", Conclusion {
                holds: free,
                tier: None,
                detail: format!("minimal relations: {}", f.m.minimalize().relations().ncols()),
            })
        }
        "4.20" => {
            either_constant_rank_line(sheet, f)?;
            ladder_line(sheet, f, 1, c.saturating_sub(1))?;
            reflexive_line(sheet, f, Which::Tensor)?;
            if c >= 2 {
                torsion_free_line(sheet, f, Which::M)?;
                torsion_free_line(sheet, f, Which::N)?;
            }
            ("c−1 initial zeros and a reflexive tensor product force vanishing", all_vanish(f, 1)?)
        }
        "4.21" => {
            sheet.check("ring has dimension two", d == 2, Basis::Exact, format!("d = {d}"));
            sheet.check("codimension c ≥ 1", c >= 1, Basis::Exact, format!("c = {c}"));
            let n = some_ladder(sheet, f, inst, c, 1, None)?.unwrap_or(1);
            torsion_free_line(sheet, f, Which::M)?;
            torsion_free_line(sheet, f, Which::N)?;
            constant_rank_line(sheet, f, Which::N)?;
            free_on_line(sheet, f, 1, Basis::Exact)?;
            constant_rank_line(sheet, f, Which::M)?;
            ("c consecutive zeros in dimension two for a module free in codimension one", all_vanish(f, n)?)
        }
        "4.22" => {
            ladder_line(sheet, f, 1, c.saturating_sub(2))?;
            serre_line(sheet, f, Which::Tensor, 3)?;
            reflexive_line(sheet, f, Which::M)?;
            reflexive_line(sheet, f, Which::N)?;
            constant_rank_line(sheet, f, Which::N)?;
            free_on_line(sheet, f, 1, Basis::Exact)?;
            constant_rank_line(sheet, f, Which::M)?;
            ("(S3) tensor product of reflexive modules is rigid", all_vanish(f, 1)?)
        }
        _ => return Err(Error::UnknownTheorem(base.into())),
    };
    Ok((statement.to_string(), Some(conclusion)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, Polynomial, F32003};
    use crate::rings::make_quotient_ring;

    fn ring(vars: &[&str], ideal: &[&str]) -> Ring<F32003> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let gens = ideal.iter().map(|s| parse_polynomial(s, &names).unwrap()).collect();
        make_quotient_ring(names, vec![1; vars.len()], gens).unwrap()
    }

    fn p(r: &Ring<F32003>, s: &str) -> Polynomial<F32003> {
        parse_polynomial(s, r.variable_names()).unwrap()
    }

    fn odd_even_pair() -> (ModulePresentation<F32003>, ModulePresentation<F32003>) {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let m = ModulePresentation::cyclic(&r, vec![p(&r, "y"), p(&r, "u")]).unwrap();
        let rows = vec![vec![p(&r, "0"), p(&r, "u")], vec![p(&r, "-z"), p(&r, "x")], vec![p(&r, "y"), p(&r, "0")]];
        let n = ModulePresentation::from_rows(&r, vec![0, 0, 0], rows).unwrap();
        (m, n)
    }

    #[test]
    fn ids() {
        assert_eq!(parse_id("3.12(2)").unwrap(), ("3.12", 2));
        assert_eq!(parse_id("cor4.7").unwrap(), ("4.7", 1));
        assert!(matches!(parse_id("9.9"), Err(Error::UnknownTheorem(_))));
        assert!(matches!(parse_id("2.2(2)"), Err(Error::UnknownTheorem(_))));
    }

    #[test]
    fn freeness_hypothesis_fails_on_odd_even_pair() {
        let (m, n) = odd_even_pair();
        let inst = TheoremInstance::new(m, Some(n), 5);
        for id in ["3.12(1)", "3.12(2)"] {
            let rep = check_theorem(id, &inst).unwrap();
            assert_eq!(rep.verdict, Verdict::HypothesesUnmet, "{rep:#?}");
            assert!(!rep.asserted() && rep.is_sound());
            let line = rep.checklist.iter().find(|l| l.label.starts_with("M is free on")).unwrap();
            assert_eq!(line.status, LineStatus::Failed);
            assert!(line.evidence.contains("codim 1"));
            let mcm: Vec<_> = rep.checklist.iter().filter(|l| l.label.contains("maximal Cohen")).map(|l| l.status).collect();
            // M and N are MCM; M⊗N has depth 0, so it is not Cohen–Macaulay
            assert_eq!(mcm, [LineStatus::Satisfied, LineStatus::Satisfied, LineStatus::Failed]);
        }
    }

    #[test]
    fn even_tor_over_node() {
        let r = ring(&["x", "y"], &["x*y"]);
        let m = ModulePresentation::cyclic(&r, vec![p(&r, "x")]).unwrap();
        let n = ModulePresentation::cyclic(&r, vec![p(&r, "y")]).unwrap();
        let rep = check_theorem("4.7", &TheoremInstance::new(m.clone(), Some(n.clone()), 6)).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds, "{rep:#?}");
        let rep = check_theorem("4.6", &TheoremInstance::new(m.clone(), Some(n), 6)).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds, "{rep:#?}");
        // Tor_1(R/(x), R/(x)) ≠ 0, so total vanishing is not available
        let rep = check_theorem("2.7", &TheoremInstance::new(m.clone(), Some(m), 4)).unwrap();
        assert_eq!(rep.verdict, Verdict::HypothesesUnmet);
    }

    #[test]
    fn depth_formula_on_projective_dimension_one_module() {
        let r = ring(&["x", "y", "w", "z"], &["x*w - y*z"]);
        let rows = vec![vec![p(&r, "w")], vec![p(&r, "y")], vec![p(&r, "x")], vec![p(&r, "z")]];
        let m = ModulePresentation::from_rows(&r, vec![0; 4], rows).unwrap();
        let rep = check_theorem("2.7", &TheoremInstance::new(m.clone(), Some(m.clone()), 3)).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds, "{rep:#?}");
        assert_eq!(rep.tier, Some(EvidenceTier::ProjectiveDimensionFinite));
        // M is not free although Tor(M,M) vanishes: M and M⊗M are not Cohen–Macaulay
        let rep = check_theorem("4.3", &TheoremInstance::new(m, None, 3)).unwrap();
        assert_eq!(rep.verdict, Verdict::HypothesesUnmet, "{rep:#?}");
    }

    #[test]
    fn rigidity_replay() {
        let (m, n) = odd_even_pair();
        let rep = check_theorem("2.2", &TheoremInstance::new(m, Some(n), 5)).unwrap();
        // Tor_1 = Tor_2 = 0 is only two zeros; c+1 = 3 are needed and Tor_3 ≠ 0
        assert_ne!(rep.verdict, Verdict::Contradicted);
        assert!(rep.is_sound());
        assert!(check_theorem("7.7", &TheoremInstance::new(odd_even_pair().0, None, 2)).is_err());
    }
}
