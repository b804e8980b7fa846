//! Executing a parsed session over the chosen coefficient field.

use std::collections::BTreeMap;
use std::time::Instant;

use citor_core::algebra::{parse_polynomial, Field, Polynomial, Rational, F32003};
use citor_core::constructions::{
    check_theorem, counterexample_search, pushforward_chain, quasi_lifting, SearchConfig, TheoremInstance,
    Verdict,
};
use citor_core::fmodules::{
    ambient_projective_dimension, biduality_report, is_maximal_cohen_macaulay, module_profile,
    nonfree_locus_codim, rank_profile, serre_condition, ModulePresentation,
};
use citor_core::homology::{ext, tor, vanishing_evidence};
use citor_core::resolutions::{betti_table, complexity_estimate, default_steps, detect_periodicity, resolve, Over};
use citor_core::rings::{declare_minimal_primes, make_quotient_ring, Ring};
use citor_core::Error;

use crate::catalog;
use crate::report::{
    Bounds, Document, Format, HomologyTable, ModuleInfo, ModuleSummary, PushStep, QuasiLiftSummary, Record,
};
use crate::session::{Command, FieldChoice, ModuleExpr, Session};
use crate::CliError;

#[derive(Clone, Debug)]
pub struct Options {
    pub format: Format,
    /// Field for rings that do not name one.
    pub field: FieldChoice,
    pub steps: Option<usize>,
    pub tor_bound: usize,
    /// Number of Hilbert values shown by `profile`.
    pub degree_bound: i32,
    pub seed: u64,
    /// Include wall-clock timings (breaks byte-stability).
    pub timings: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            format: Format::Text,
            field: FieldChoice::F32003,
            steps: None,
            tor_bound: 5,
            degree_bound: 6,
            seed: 1,
            timings: false,
        }
    }
}

impl Options {
    pub fn bounds(&self) -> Bounds {
        Bounds { steps: self.steps, tor_bound: self.tor_bound, degree_bound: self.degree_bound, seed: self.seed }
    }
}

/// Rings and modules of a session, built over `K`.
pub struct Env<K: Field> {
    pub rings: BTreeMap<String, Ring<K>>,
    pub modules: BTreeMap<String, ModulePresentation<K>>,
}

impl<K: Field> Env<K> {
    pub fn module(&self, name: &str) -> &ModulePresentation<K> {
        &self.modules[name]
    }

    pub fn ring(&self, name: &str) -> &Ring<K> {
        &self.rings[name]
    }
}

fn polys<K: Field>(texts: &[String], vars: &[String]) -> Result<Vec<Polynomial<K>>, CliError> {
    texts
        .iter()
        .map(|t| parse_polynomial::<K>(t, vars).map_err(|e| CliError::Usage(format!("polynomial `{t}`: {}", e.message))))
        .collect()
}

/// Build every declared ring and module, in declaration order.
pub fn build_env<K: Field>(session: &Session) -> Result<Env<K>, CliError> {
    let mut env = Env { rings: BTreeMap::new(), modules: BTreeMap::new() };
    for &(is_ring, i) in &session.order {
        if is_ring {
            let r = &session.rings[i];
            let degrees = r.degrees.clone().unwrap_or_else(|| vec![1; r.vars.len()]);
            let mut ring = make_quotient_ring(r.vars.clone(), degrees, polys::<K>(&r.ideal, &r.vars)?)?;
            if let Some(primes) = &r.primes {
                let primes = primes.iter().map(|p| polys::<K>(p, &r.vars)).collect::<Result<Vec<_>, _>>()?;
                ring = declare_minimal_primes(&ring, primes)?;
            }
            env.rings.insert(r.name.clone(), ring);
            continue;
        }
        let m = &session.modules[i];
        let module = match &m.expr {
            ModuleExpr::Coker { ring, shifts, matrix } => {
                let ring = env.ring(ring).clone();
                let rows = matrix.iter().map(|row| polys::<K>(row, ring.variable_names())).collect::<Result<Vec<_>, _>>()?;
                let shifts = shifts.clone().unwrap_or_else(|| vec![0; rows.len()]);
                ModulePresentation::from_rows(&ring, shifts, rows)?
            }
            ModuleExpr::Free { ring, shifts } => ModulePresentation::free(env.ring(ring), shifts.clone())?,
            ModuleExpr::Dual(a) => env.module(a).dual(),
            ModuleExpr::Tensor(a, b) => env.module(a).tensor(env.module(b))?,
        };
        env.modules.insert(m.name.clone(), module);
    }
    Ok(env)
}

/// The single field a session runs over.
pub fn session_field(session: &Session, opts: &Options) -> Result<FieldChoice, CliError> {
    let mut chosen: Option<FieldChoice> = None;
    for r in &session.rings {
        let f = r.field.unwrap_or(opts.field);
        match chosen {
            Some(c) if c != f => {
                return Err(CliError::Usage(format!("ring `{}` uses {} but another ring uses {}", r.name, f.keyword(), c.keyword())))
            }
            _ => chosen = Some(f),
        }
    }
    Ok(chosen.unwrap_or(opts.field))
}

/// Execute all commands and collect their records.
pub fn run_session(session: &Session, opts: &Options) -> Result<Document, CliError> {
    match session_field(session, opts)? {
        FieldChoice::F32003 => run_typed::<F32003>(session, opts),
        FieldChoice::Rational => run_typed::<Rational>(session, opts),
    }
}

pub fn module_info<K: Field>(name: &str, m: &ModulePresentation<K>) -> ModuleInfo {
    ModuleInfo { name: name.to_string(), shifts: m.shifts().to_vec(), relations: m.fmt_relations() }
}

fn run_typed<K: Field>(session: &Session, opts: &Options) -> Result<Document, CliError> {
    let env = build_env::<K>(session)?;
    let mut doc = Document::new(K::tag().to_string(), opts.bounds());
    for cmd in &session.commands {
        doc.results.push(command::<K>(session, &env, cmd, opts)?);
    }
    Ok(doc)
}

fn ring_label<K: Field>(session: &Session, module: &str, env: &Env<K>) -> String {
    let name = session.ring_of(module).unwrap_or("?");
    format!("{name} = {}", env.ring(name).describe())
}

fn command<K: Field>(session: &Session, env: &Env<K>, cmd: &Command, opts: &Options) -> Result<Record, CliError> {
    Ok(match cmd {
        Command::Resolve { module, steps } | Command::Betti { module, steps } => {
            let m = env.module(module);
            let steps = steps.or(opts.steps).unwrap_or_else(|| default_steps(m.ring()));
            let res = resolve(m, Over::Quotient, steps)?;
            let betti = betti_table(&res)?;
            let ring = ring_label(session, module, env);
            let info = module_info(module, m);
            if matches!(cmd, Command::Resolve { .. }) {
                let names = m.ring().variable_names();
                let differentials = res.differentials().iter().map(|d| d.fmt_with(names)).collect();
                Record::Resolution {
                    ring,
                    module: info,
                    betti,
                    differentials,
                    complex: res.check_complex(),
                    minimal: res.check_minimal(),
                }
            } else {
                let complexity = complexity_estimate(&betti, m.ring().codim()).ok();
                let periodicity = detect_periodicity(&res).ok();
                Record::Betti { ring, module: info, betti, complexity, periodicity }
            }
        }
        Command::Tor { m, n, bound } | Command::Ext { m, n, bound } => {
            let bound = bound.unwrap_or(opts.tor_bound);
            let (a, b) = (env.module(m), env.module(n));
            let table = if matches!(cmd, Command::Tor { .. }) {
                let p = tor(a, b, bound)?;
                let ev = vanishing_evidence(a, b, &p)?;
                HomologyTable::from_profile("tor", &p, ev)
            } else {
                HomologyTable::from_profile("ext", &ext(a, b, bound)?, None)
            };
            Record::Homology {
                ring: ring_label(session, m, env),
                module: module_info(m, a),
                second: module_info(n, b),
                tor_profile: table,
            }
        }
        Command::Profile { module } => {
            let m = env.module(module);
            Record::Profile { ring: ring_label(session, module, env), module: module_info(module, m), profile: summary(m, opts)? }
        }
        Command::Pushforward { module, chain } => {
            let m = env.module(module);
            let report = pushforward_chain(m, chain.unwrap_or(1))?;
            let steps = report
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let mcm = if s.m1.is_zero() { None } else { Some(is_maximal_cohen_macaulay(&s.m1)?) };
                    Ok(PushStep {
                        step: i + 1,
                        target_rank: s.m,
                        cokernel: module_info(&format!("{module}_{}", i + 1), &s.m1),
                        exact: s.certificate.exact(),
                        injective: s.certificate.injective,
                        rank_is_dual_betti0: s.certificate.rank_is_dual_betti0,
                        hilbert_balanced: s.certificate.hilbert_balanced,
                        cokernel_mcm: mcm,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Record::Pushforward {
                ring: ring_label(session, module, env),
                module: module_info(module, m),
                steps,
                stopped: report.stopped,
            }
        }
        Command::Quasilift { module, split } => {
            let m = env.module(module);
            let q = quasi_lifting(m, *split)?;
            let c = &q.certificate;
            let summary = QuasiLiftSummary {
                lifted_ring: q.lifted_ring.describe(),
                f: q.lifted_ring.fmt_poly(&q.f),
                e: module_info("E", &q.e),
                e_free: q.e.relations().ncols() == 0,
                pushforward: module_info(&format!("{module}_1"), &q.pushforward.m1),
                lifting_sequence: c.lifting_sequence,
                reduction_sequence: c.reduction_sequence,
                depth_e: c.depth_e,
                depth_m1: c.depth_m1,
                depth_relation: c.depth_relation,
            };
            Record::QuasiLifting { ring: ring_label(session, module, env), module: module_info(module, m), quasi_lifting: summary }
        }
        Command::Check { id, modules, args } => {
            let m = env.module(&modules[0]).clone();
            let n = modules.get(1).map(|n| env.module(n).clone());
            let mut inst = TheoremInstance::new(m, n, args.bound.unwrap_or(opts.tor_bound));
            if let Some(s) = args.steps.or(opts.steps) {
                inst.steps = s;
            }
            inst.index = args.index;
            inst.offset = args.w;
            let start = Instant::now();
            let report = check_theorem(id, &inst)?;
            Record::Theorem {
                ring: ring_label(session, &modules[0], env),
                theorem_reports: vec![report],
                timings_ms: opts.timings.then(|| start.elapsed().as_millis()),
            }
        }
        Command::Search { question, args } => {
            let q = question.parse()?;
            let mut cfg = SearchConfig::new(q, args.samples.unwrap_or(20), args.seed.unwrap_or(opts.seed));
            if let Some(g) = args.generators {
                cfg.max_generators = g;
            }
            if let Some(d) = args.degree {
                cfg.max_degree = d;
            }
            if let Some(b) = args.bound {
                cfg.bound = b;
            }
            let extra: Vec<_> = args.pairs.iter().map(|(a, b)| (env.module(a).clone(), env.module(b).clone())).collect();
            let ring = env.ring(&args.ring);
            let log = counterexample_search(ring, &cfg, &extra)?;
            Record::Search { ring: format!("{} = {}", args.ring, ring.describe()), search: log }
        }
        Command::Example { id } => Record::Example { example: catalog::run_example_typed::<K>(id)? },
    })
}

fn summary<K: Field>(m: &ModulePresentation<K>, opts: &Options) -> Result<ModuleSummary, CliError> {
    let p = module_profile(m)?;
    let b = biduality_report(m)?;
    let ring = m.ring();
    let serre = if ring.is_complete_intersection() {
        (1..=ring.dim().clamp(1, 3)).map(|n| Ok((n, serre_condition(m, n)?.holds))).collect::<Result<Vec<_>, Error>>()?
    } else {
        Vec::new()
    };
    let ranks = match rank_profile(m) {
        Ok(r) => Some(r),
        Err(Error::NeedsMinimalPrimes(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let from = m.shifts().iter().copied().min().unwrap_or(0);
    Ok(ModuleSummary {
        dim: p.dim,
        depth: p.depth,
        length: p.length,
        betti0: p.betti0,
        ambient_projective_dimension: ambient_projective_dimension(m)?,
        maximal_cohen_macaulay: is_maximal_cohen_macaulay(m)?,
        torsion_free: b.torsion_free,
        reflexive: b.reflexive,
        nonfree_locus_codim: nonfree_locus_codim(m)?,
        serre,
        ranks,
        hilbert_from: from,
        hilbert: m.hilbert_values(from, from + opts.degree_bound.max(0)),
    })
}

/// Exit status for a completed run: 1 if an example failed or a checked
/// conclusion was contradicted, 0 otherwise.
pub fn document_status(doc: &Document) -> i32 {
    let bad = doc.results.iter().any(|r| match r {
        Record::Example { example } => !example.pass,
        Record::Theorem { theorem_reports, .. } => theorem_reports.iter().any(|t| t.verdict == Verdict::Contradicted),
        _ => false,
    });
    i32::from(bad)
}
