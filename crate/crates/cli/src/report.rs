//! Result records and their text / JSON rendering.

use std::fmt::Write as _;

use citor_core::constructions::{SearchLog, TheoremReport};
use citor_core::fmodules::{ExtendedNat, RankProfile};
use citor_core::homology::{EvidenceTier, TorProfile};
use citor_core::algebra::Field;
use citor_core::resolutions::{BettiTable, ComplexityEstimate, Periodicity};
use serde::Serialize;

use crate::catalog::ExampleOutcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (text or json)")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    pub steps: Option<usize>,
    pub tor_bound: usize,
    pub degree_bound: i32,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleInfo {
    pub name: String,
    pub shifts: Vec<i32>,
    pub relations: String,
}

/// One Tor / Ext index.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyRow {
    pub i: usize,
    pub vanishes: bool,
    pub betti0: usize,
    pub depth: ExtendedNat,
    pub dim: Option<usize>,
    pub finite_length: bool,
    pub hilbert_from: i32,
    pub hilbert: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyTable {
    pub kind: &'static str,
    pub bound: usize,
    pub projective_dimension: Option<usize>,
    pub rows: Vec<HomologyRow>,
    pub distance_two: Vec<(usize, bool)>,
    /// Certification of "vanishes for all i ≥ 1", when the window vanishes.
    pub evidence: Option<EvidenceTier>,
}

impl HomologyTable {
    pub fn from_profile<K: Field>(kind: &'static str, p: &TorProfile<K>, evidence: Option<EvidenceTier>) -> Self {
        let rows = p
            .entries
            .iter()
            .map(|e| HomologyRow {
                i: e.index,
                vanishes: e.vanishing,
                betti0: e.betti0,
                depth: e.depth,
                dim: e.dim,
                finite_length: e.finite_length,
                hilbert_from: e.hilbert_from,
                hilbert: e.hilbert.clone(),
            })
            .collect();
        HomologyTable {
            kind,
            bound: p.bound,
            projective_dimension: p.projective_dimension,
            rows,
            distance_two: p.distance_two.clone(),
            evidence,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleSummary {
    pub dim: Option<usize>,
    pub depth: ExtendedNat,
    pub length: ExtendedNat,
    pub betti0: usize,
    pub ambient_projective_dimension: usize,
    pub maximal_cohen_macaulay: bool,
    pub torsion_free: bool,
    pub reflexive: bool,
    pub nonfree_locus_codim: ExtendedNat,
    /// `(n, holds)` for the Serre conditions checked; empty off complete intersections.
    pub serre: Vec<(usize, bool)>,
    pub ranks: Option<RankProfile>,
    pub hilbert_from: i32,
    pub hilbert: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PushStep {
    pub step: usize,
    pub target_rank: usize,
    pub cokernel: ModuleInfo,
    pub exact: bool,
    pub injective: bool,
    pub rank_is_dual_betti0: bool,
    pub hilbert_balanced: bool,
    pub cokernel_mcm: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiLiftSummary {
    pub lifted_ring: String,
    pub f: String,
    pub e: ModuleInfo,
    pub e_free: bool,
    pub pushforward: ModuleInfo,
    pub lifting_sequence: bool,
    pub reduction_sequence: bool,
    pub depth_e: ExtendedNat,
    pub depth_m1: ExtendedNat,
    pub depth_relation: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Resolution {
        ring: String,
        module: ModuleInfo,
        betti: BettiTable,
        differentials: Vec<String>,
        complex: bool,
        minimal: bool,
    },
    Betti {
        ring: String,
        module: ModuleInfo,
        betti: BettiTable,
        complexity: Option<ComplexityEstimate>,
        periodicity: Option<Periodicity>,
    },
    Homology {
        ring: String,
        module: ModuleInfo,
        second: ModuleInfo,
        tor_profile: HomologyTable,
    },
    Profile {
        ring: String,
        module: ModuleInfo,
        profile: ModuleSummary,
    },
    Pushforward {
        ring: String,
        module: ModuleInfo,
        steps: Vec<PushStep>,
        stopped: Option<(usize, String)>,
    },
    QuasiLifting {
        ring: String,
        module: ModuleInfo,
        quasi_lifting: QuasiLiftSummary,
    },
    Theorem {
        ring: String,
        theorem_reports: Vec<TheoremReport>,
        #[serde(skip_serializing_if = "Option::is_none")]
        timings_ms: Option<u128>,
    },
    Search {
        ring: String,
        search: SearchLog,
    },
    Example {
        example: ExampleOutcome,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Document {
    pub tool_version: &'static str,
    pub field_tag: String,
    pub bounds: Bounds,
    pub results: Vec<Record>,
}

impl Document {
    pub fn new(field_tag: String, bounds: Bounds) -> Self {
        Document { tool_version: env!("CARGO_PKG_VERSION"), field_tag, bounds, results: Vec::new() }
    }
}

/// Render a document; output is a pure function of the results.
pub fn emit_report(doc: &Document, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => text(doc),
    }
}

fn seq<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or("-".to_string(), |v| v.to_string())
}

fn module_line(out: &mut String, label: &str, m: &ModuleInfo) {
    let _ = writeln!(out, "  {label} {} = coker {} on shifts [{}]", m.name, m.relations, seq(&m.shifts));
}

fn betti_lines(out: &mut String, b: &BettiTable) {
    let _ = writeln!(out, "  betti: ({}){}", seq(&b.betti), if b.terminated { " terminated" } else { "" });
    for (i, g) in b.graded.iter().enumerate() {
        let parts: Vec<String> = g.iter().map(|(d, n)| format!("{n}@{d}")).collect();
        let _ = writeln!(out, "    F{i}: {}", parts.join(" "));
    }
}

fn text(doc: &Document) -> String {
    let mut out = String::new();
    let b = &doc.bounds;
    let _ = writeln!(
        out,
        "citor {} | field {} | steps {} | tor bound {} | degree bound {} | seed {}",
        doc.tool_version,
        doc.field_tag,
        opt(&b.steps),
        b.tor_bound,
        b.degree_bound,
        b.seed
    );
    for r in &doc.results {
        out.push('\n');
        record_text(&mut out, r);
    }
    out
}

fn record_text(out: &mut String, r: &Record) {
    match r {
        Record::Resolution { ring, module, betti, differentials, complex, minimal } => {
            let _ = writeln!(out, "resolution over {ring}");
            module_line(out, "module", module);
            betti_lines(out, betti);
            for (i, d) in differentials.iter().enumerate() {
                let _ = writeln!(out, "    d{} = {d}", i + 1);
            }
            let _ = writeln!(out, "  d∘d = 0: {complex}, minimal: {minimal}");
        }
        Record::Betti { ring, module, betti, complexity, periodicity } => {
            let _ = writeln!(out, "betti table over {ring}");
            module_line(out, "module", module);
            betti_lines(out, betti);
            if let Some(c) = complexity {
                let _ = writeln!(
                    out,
                    "  complexity ≈ {} ({}; window {}, onset {}{})",
                    c.value,
                    c.label,
                    c.window,
                    c.onset,
                    if c.conflict { ", conflicting evidence" } else { "" }
                );
            }
            if let Some(p) = periodicity {
                let _ = writeln!(out, "  periodic: {} (period {}, onset {})", p.periodic, opt(&p.period), opt(&p.onset));
            }
        }
        Record::Homology { ring, module, second, tor_profile: t } => {
            let _ = writeln!(out, "{} profile over {ring}, window 0..={}", t.kind, t.bound);
            module_line(out, "first ", module);
            module_line(out, "second", second);
            for row in &t.rows {
                let _ = writeln!(
                    out,
                    "  i={}, vanishes={}, depth={}, HF=({}) from degree {}, dim={}, length={}",
                    row.i,
                    row.vanishes,
                    row.depth,
                    seq(&row.hilbert),
                    row.hilbert_from,
                    opt(&row.dim),
                    if row.finite_length { "finite" } else { "infinite" },
                );
            }
            let bad: Vec<usize> = t.distance_two.iter().filter(|(_, ok)| !ok).map(|(i, _)| *i).collect();
            let _ = writeln!(out, "  distance-two mismatches: [{}]", seq(&bad));
            if let Some(e) = t.evidence {
                let _ = writeln!(out, "  vanishing for all i ≥ 1: {e:?}");
            }
        }
        Record::Profile { ring, module, profile: p } => {
            let _ = writeln!(out, "module profile over {ring}");
            module_line(out, "module", module);
            let _ = writeln!(
                out,
                "  dim {}, depth {}, length {}, minimal generators {}, pd_S {}",
                opt(&p.dim),
                p.depth,
                p.length,
                p.betti0,
                p.ambient_projective_dimension
            );
            let _ = writeln!(
                out,
                "  MCM {}, torsion-free {}, reflexive {}, non-free locus codim {}",
                p.maximal_cohen_macaulay, p.torsion_free, p.reflexive, p.nonfree_locus_codim
            );
            let serre: Vec<String> = p.serre.iter().map(|(n, ok)| format!("S{n}={ok}")).collect();
            let _ = writeln!(out, "  serre: {}", if serre.is_empty() { "-".into() } else { serre.join(" ") });
            match &p.ranks {
                Some(r) => {
                    let _ = writeln!(out, "  ranks at minimal primes: ({}), constant {}", seq(&r.ranks), r.constant_rank);
                }
                None => {
                    let _ = writeln!(out, "  ranks: minimal primes not declared");
                }
            }
            let _ = writeln!(out, "  HF=({}) from degree {}", seq(&p.hilbert), p.hilbert_from);
        }
        Record::Pushforward { ring, module, steps, stopped } => {
            let _ = writeln!(out, "pushforward chain over {ring}");
            module_line(out, "module", module);
            for s in steps {
                let _ = writeln!(
                    out,
                    "  step {}: 0 → M{} → R^{} → M{} → 0, exact {} (injective {}, rank {}, HF {}), MCM {}",
                    s.step,
                    s.step - 1,
                    s.target_rank,
                    s.step,
                    s.exact,
                    s.injective,
                    s.rank_is_dual_betti0,
                    s.hilbert_balanced,
                    opt(&s.cokernel_mcm)
                );
                module_line(out, "   ", &s.cokernel);
            }
            if let Some((i, why)) = stopped {
                let _ = writeln!(out, "  stopped at step {i}: {why}");
            }
        }
        Record::QuasiLifting { ring, module, quasi_lifting: q } => {
            let _ = writeln!(out, "quasi-lifting over {ring} from {} with f = {}", q.lifted_ring, q.f);
            module_line(out, "module", module);
            module_line(out, "pushforward", &q.pushforward);
            module_line(out, "lift", &q.e);
            let _ = writeln!(
                out,
                "  E free {}, 0 → E → S'^m → M1 → 0 {}, 0 → M1 → E/fE → M → 0 {}",
                q.e_free, q.lifting_sequence, q.reduction_sequence
            );
            let _ = writeln!(out, "  depth E {} vs depth M1 {} + 1: {}", q.depth_e, q.depth_m1, q.depth_relation);
        }
        Record::Theorem { ring, theorem_reports, timings_ms } => {
            for t in theorem_reports {
                let _ = writeln!(out, "check {} over {ring}: {}", t.id, t.verdict);
                let _ = writeln!(out, "  {}", t.statement);
                for l in &t.checklist {
                    let mark = match l.status {
                        citor_core::constructions::LineStatus::Satisfied => "ok  ",
                        citor_core::constructions::LineStatus::Failed => "FAIL",
                        citor_core::constructions::LineStatus::Undetermined => "??  ",
                        citor_core::constructions::LineStatus::ModelLevel => "mdl ",
                    };
                    let _ = writeln!(out, "  [{mark}] {} ({:?}) {}", l.label, l.basis, l.evidence);
                }
                match (&t.conclusion_holds, &t.conclusion_detail) {
                    (Some(h), Some(d)) => {
                        let _ = writeln!(out, "  conclusion: {} → {} ({d})", t.conclusion, h);
                    }
                    _ => {
                        let _ = writeln!(out, "  conclusion not asserted: {}", t.conclusion);
                    }
                }
            }
            if let Some(ms) = timings_ms {
                let _ = writeln!(out, "  time {ms} ms");
            }
        }
        Record::Search { ring, search: s } => {
            let _ = writeln!(
                out,
                "search {} over {ring}: seed {}, {} samples, {} evaluated, {} skipped",
                s.question,
                s.seed,
                s.samples,
                s.evaluated,
                s.skipped.len()
            );
            let _ = writeln!(out, "  candidates: {}", s.candidates.len());
            for f in &s.candidates {
                let _ = writeln!(out, "    #{} Tor {} {}\n      M = {}\n      N = {}", f.index, f.tor_pattern, f.note, f.m, f.n);
            }
            let _ = writeln!(out, "  near misses: {}", s.near_misses.len());
            for f in &s.near_misses {
                let _ = writeln!(out, "    #{} Tor {} fails: {}", f.index, f.tor_pattern, f.failed_hypotheses.join("; "));
            }
            for (i, why) in &s.skipped {
                let _ = writeln!(out, "    skipped #{i}: {why}");
            }
        }
        Record::Example { example: e } => {
            let _ = writeln!(out, "example {}: {} — {}", e.id, e.title, if e.pass { "PASS" } else { "FAIL" });
            for c in &e.checks {
                let _ = writeln!(
                    out,
                    "  [{}] {} ({:?}): expected {}, observed {}",
                    if c.pass { "ok  " } else { "FAIL" },
                    c.label,
                    c.provenance,
                    c.expected,
                    c.observed
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_header_only() {
        let doc = Document::new("F32003".into(), Bounds { steps: None, tor_bound: 5, degree_bound: 6, seed: 1 });
        let t = emit_report(&doc, Format::Text);
        assert_eq!(t.lines().count(), 1);
        let j: serde_json::Value = serde_json::from_str(&emit_report(&doc, Format::Json)).unwrap();
        assert_eq!(j["results"].as_array().unwrap().len(), 0);
        for key in ["tool_version", "field_tag", "bounds"] {
            assert!(j.get(key).is_some(), "{key}");
        }
    }
}
