//! Randomized search for instances bearing on the open questions.
//!
//! Every sample is drawn sequentially from one seeded stream, evaluated in
//! parallel, and merged back in sample order, so a seed replays exactly.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Field, Matrix, Polynomial};
use crate::error::{Error, Result};
use crate::fmodules::{biduality_report, nonfree_locus_codim, ExtendedNat, ModulePresentation};
use crate::homology::tor;
use crate::rings::{random_form, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Question {
    /// Hypersurface, `M` free on `X^0`, `M⊗N` torsion-free, `Tor_1 = 0`:
    /// does all higher Tor vanish?
    Q3_17,
    /// One-dimensional Gorenstein domain, `M` and `M⊗M*` torsion-free: is `M` free?
    Q4_16,
    /// As above over a complete intersection, plus some `Tor_i(M,M*) = 0`.
    Q4_18,
    /// Codimension ≥ 2, `M⊗N` of finite length, a run of ≥ 2 zeros followed by a nonzero Tor.
    R4_10,
}

impl Question {
    pub fn id(self) -> &'static str {
        match self {
            Question::Q3_17 => "Q3.17",
            Question::Q4_16 => "Q4.16",
            Question::Q4_18 => "Q4.18",
            Question::R4_10 => "R4.10",
        }
    }

    fn self_dual(self) -> bool {
        matches!(self, Question::Q4_16 | Question::Q4_18)
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Question {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
        let key = key.trim_start_matches("question").trim_start_matches("remark");
        match key.trim_start_matches(['q', 'r']) {
            "3.17" => Ok(Question::Q3_17),
            "4.16" => Ok(Question::Q4_16),
            "4.18" => Ok(Question::Q4_18),
            "4.10" => Ok(Question::R4_10),
            _ => Err(Error::UnknownTheorem(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchConfig {
    pub question: Question,
    pub samples: usize,
    pub seed: u64,
    /// Generators of each random module (at most 4).
    pub max_generators: usize,
    /// Entry degree bound (at most 2).
    pub max_degree: u32,
    /// Tor window.
    pub bound: usize,
}

impl SearchConfig {
    pub fn new(question: Question, samples: usize, seed: u64) -> Self {
        SearchConfig { question, samples, seed, max_generators: 3, max_degree: 2, bound: 4 }
    }

    fn validate(&self) -> Result<()> {
        if self.max_generators == 0 || self.max_generators > 4 || self.max_degree == 0 || self.max_degree > 2 {
            return Err(Error::Guardrail(format!(
                "random presentations need 1..=4 generators and entry degree 1..=2 (got {}, {})",
                self.max_generators, self.max_degree
            )));
        }
        if self.bound < 2 {
            return Err(Error::Guardrail("search window must reach Tor_2".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    /// Sample index; extra instances are numbered after the random ones.
    pub index: usize,
    pub m: String,
    pub n: String,
    /// `0`/`+` per Tor index `0..=bound`.
    pub tor_pattern: String,
    pub failed_hypotheses: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchLog {
    pub question: Question,
    pub seed: u64,
    pub samples: usize,
    pub evaluated: usize,
    pub skipped: Vec<(usize, String)>,
    /// Hypotheses hold and the questioned conclusion fails in the window.
    pub candidates: Vec<Finding>,
    /// Exactly one hypothesis fails.
    pub near_misses: Vec<Finding>,
}

/// A random graded module: up to `max_generators` generators in degrees
/// 0..=1, relations of degree ≤ `max_degree` over them, minimalized.
pub fn random_module<K: Field>(ring: &Ring<K>, rng: &mut impl Rng, cfg: &SearchConfig) -> Result<ModulePresentation<K>> {
    let nv = ring.nvars();
    let g = rng.gen_range(1..=cfg.max_generators);
    let mut shifts: Vec<i32> = (0..g).map(|_| rng.gen_range(0..=1)).collect();
    shifts.sort_unstable();
    let top = *shifts.last().unwrap_or(&0);
    let k = rng.gen_range(1..=cfg.max_generators);
    let mut columns = Vec::with_capacity(k);
    let mut col_degrees = Vec::with_capacity(k);
    for _ in 0..k {
        let deg = top + rng.gen_range(1..=cfg.max_degree as i32);
        let col: Vec<Polynomial<K>> = shifts
            .iter()
            .map(|&s| {
                let e = (deg - s) as u32;
                if e == 0 || rng.gen_bool(0.25) {
                    Polynomial::zero(nv)
                } else {
                    random_form(nv, e, rng)
                }
            })
            .collect();
        columns.push(col);
        col_degrees.push(deg);
    }
    let relations = Matrix::new(nv, shifts, col_degrees, columns)?;
    Ok(ModulePresentation::coker(ring, relations)?.minimalize())
}

struct Evaluation {
    failed: Vec<String>,
    conclusion_fails: bool,
    pattern: String,
    note: String,
}

fn tor_pattern<K: Field>(m: &ModulePresentation<K>, n: &ModulePresentation<K>, bound: usize) -> Result<(String, Vec<bool>, Vec<bool>)> {
    let t = tor(m, n, bound)?;
    let zeros: Vec<bool> = t.entries.iter().map(|e| e.vanishing).collect();
    let finite: Vec<bool> = t.entries.iter().map(|e| e.finite_length).collect();
    let pat = zeros.iter().map(|&z| if z { '0' } else { '+' }).collect();
    Ok((pat, zeros, finite))
}

fn is_free<K: Field>(m: &ModulePresentation<K>) -> bool {
    m.minimalize().relations().ncols() == 0
}

/// One minimal prime which already lies in the defining ideal.
fn is_domain<K: Field>(ring: &Ring<K>) -> Option<bool> {
    let primes = ring.minimal_primes()?;
    if primes.len() != 1 {
        return Some(false);
    }
    Some(primes[0].generators.iter().all(|g| ring.ambient().reduce(g).is_zero()))
}

fn evaluate<K: Field>(
    q: Question,
    ring: &Ring<K>,
    m: &ModulePresentation<K>,
    n: &ModulePresentation<K>,
    bound: usize,
) -> Result<Evaluation> {
    let mut failed = Vec::new();
    let mut require = |ok: bool, label: &str| {
        if !ok {
            failed.push(label.to_string());
        }
    };
    let (pattern, zeros, finite) = tor_pattern(m, n, bound)?;
    let tensor = m.tensor(n)?;
    let (conclusion_fails, note) = match q {
        Question::Q3_17 => {
            require(ring.codim() == 1, "ring is a hypersurface");
            require(nonfree_locus_codim(m)? >= ExtendedNat::Finite(1), "M free on X^0");
            require(biduality_report(&tensor)?.torsion_free, "M⊗N torsion-free");
            require(zeros[1], "Tor_1 = 0");
            let bad = (2..=bound).find(|&i| !zeros[i]);
            (bad.is_some(), bad.map_or(String::new(), |i| format!("Tor_{i} ≠ 0")))
        }
        Question::Q4_16 | Question::Q4_18 => {
            require(ring.dim() == 1, "ring has dimension one");
            match is_domain(ring) {
                Some(ok) => require(ok, "ring is a domain"),
                None => require(false, "ring is a domain (minimal primes not declared)"),
            }
            require(biduality_report(m)?.torsion_free, "M torsion-free");
            require(biduality_report(&tensor)?.torsion_free, "M⊗M* torsion-free");
            if q == Question::Q4_18 {
                require((1..=bound).any(|i| zeros[i]), "some Tor_i(M,M*) = 0");
            }
            let free = is_free(m);
            (!free, if free { String::new() } else { "M is not free".into() })
        }
        Question::R4_10 => {
            require(ring.codim() >= 2, "codimension ≥ 2");
            require(finite[0], "M⊗N finite length");
            let gap = (1..bound).find_map(|i| {
                let run = (i..=bound).take_while(|&j| zeros[j]).count();
                (run >= 2 && i + run <= bound && (i == 1 || !zeros[i - 1])).then_some((i, run))
            });
            require(gap.is_some(), "a run of ≥ 2 zero Tor followed by a nonzero one");
            // the "conclusion" questioned is the non-existence of such a gap
            (gap.is_some(), gap.map_or(String::new(), |(i, run)| format!("Tor_{i}..Tor_{} = 0, Tor_{} ≠ 0", i + run - 1, i + run)))
        }
    };
    Ok(Evaluation { failed, conclusion_fails, pattern, note })
}

fn fmt_module<K: Field>(m: &ModulePresentation<K>) -> String {
    format!("coker{} shifts {:?}", m.fmt_relations(), m.shifts())
}

/// Sample `cfg.samples` random instances (then `extra`, in order) and log
/// candidates and near-misses for the configured question.
pub fn counterexample_search<K: Field>(
    ring: &Ring<K>,
    cfg: &SearchConfig,
    extra: &[(ModulePresentation<K>, ModulePresentation<K>)],
) -> Result<SearchLog> {
    cfg.validate()?;
    if !ring.is_complete_intersection() {
        return Err(Error::hypothesis("search ring must be a complete intersection"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut instances: Vec<Result<(ModulePresentation<K>, ModulePresentation<K>)>> = (0..cfg.samples)
        .map(|_| {
            let m = random_module(ring, &mut rng, cfg)?;
            let n = if cfg.question.self_dual() { m.dual() } else { random_module(ring, &mut rng, cfg)? };
            Ok((m, n))
        })
        .collect();
    for (m, n) in extra {
        if !m.ring().same_ring(ring) || !n.ring().same_ring(ring) {
            return Err(Error::RingMismatch("extra search instance over another ring".into()));
        }
        let n = if cfg.question.self_dual() { m.dual() } else { n.clone() };
        instances.push(Ok((m.clone(), n)));
    }
    let results: Vec<Result<(ModulePresentation<K>, ModulePresentation<K>, Evaluation)>> = instances
        .into_par_iter()
        .map(|inst| {
            let (m, n) = inst?;
            let e = evaluate(cfg.question, ring, &m, &n, cfg.bound)?;
            Ok((m, n, e))
        })
        .collect();
    let mut log = SearchLog {
        question: cfg.question,
        seed: cfg.seed,
        samples: cfg.samples + extra.len(),
        evaluated: 0,
        skipped: Vec::new(),
        candidates: Vec::new(),
        near_misses: Vec::new(),
    };
    for (index, r) in results.into_iter().enumerate() {
        let (m, n, e) = match r {
            Ok(x) => x,
            Err(err) => {
                log.skipped.push((index, err.to_string()));
                continue;
            }
        };
        log.evaluated += 1;
        let finding = || Finding {
            index,
            m: fmt_module(&m),
            n: fmt_module(&n),
            tor_pattern: e.pattern.clone(),
            failed_hypotheses: e.failed.clone(),
            note: e.note.clone(),
        };
        if e.failed.is_empty() && e.conclusion_fails {
            log.candidates.push(finding());
        } else if e.failed.len() == 1 {
            log.near_misses.push(finding());
        }
    }
    Ok(log)
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

    #[test]
    fn question_ids() {
        assert_eq!("Q3.17".parse::<Question>().unwrap(), Question::Q3_17);
        assert_eq!("remark 4.10".parse::<Question>().unwrap(), Question::R4_10);
        assert!("Q9.1".parse::<Question>().is_err());
    }

    #[test]
    fn hypersurface_search_is_well_formed_and_replays() {
        let r = ring(&["x", "y"], &["x*y"]);
        let cfg = SearchConfig::new(Question::Q3_17, 12, 1);
        let log = counterexample_search(&r, &cfg, &[]).unwrap();
        assert_eq!(log.evaluated + log.skipped.len(), 12);
        assert!(log.candidates.is_empty(), "{:#?}", log.candidates);
        for f in log.near_misses.iter() {
            assert_eq!(f.failed_hypotheses.len(), 1);
            assert_eq!(f.tor_pattern.len(), cfg.bound + 1);
        }
        let again = counterexample_search(&r, &cfg, &[]).unwrap();
        assert_eq!(serde_json::to_string(&log).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn gap_pattern_is_a_near_miss() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let p = |s: &str| parse_polynomial(s, r.variable_names()).unwrap();
        let m = ModulePresentation::cyclic(&r, vec![p("y"), p("u")]).unwrap();
        let rows = vec![vec![p("0"), p("u")], vec![p("-z"), p("x")], vec![p("y"), p("0")]];
        let n = ModulePresentation::from_rows(&r, vec![0, 0, 0], rows).unwrap();
        let mut cfg = SearchConfig::new(Question::R4_10, 0, 7);
        cfg.bound = 4;
        let log = counterexample_search(&r, &cfg, &[(m, n)]).unwrap();
        assert!(log.candidates.is_empty());
        let hit = log.near_misses.iter().find(|f| f.index == 0).expect("extra instance logged");
        assert!(hit.tor_pattern.starts_with("+00+"), "{}", hit.tor_pattern);
        assert_eq!(hit.failed_hypotheses, vec!["M⊗N finite length".to_string()]);
    }
}
