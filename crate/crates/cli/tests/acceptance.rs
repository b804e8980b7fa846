//! Acceptance suite: one line per criterion, with its runtime and budget.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use citor_cli::catalog::{entry, CATALOG};
use citor_cli::run::{build_env, Env};
use citor_cli::{parse_session, run_example};
use citor_core::algebra::{Matrix, Polynomial, TermOrder, F32003};
use citor_core::constructions::{check_theorem, random_module, LineStatus, Question, SearchConfig, TheoremInstance, Verdict};
use citor_core::fmodules::{ambient_projective_dimension, ModulePresentation};
use citor_core::groebner::{groebner_basis, Ambient, GroebnerBasis};
use citor_core::homology::oracle::tor_oracle;
use citor_core::homology::{depth_formula_check, ext, tor, tor_by_second, EvidenceTier};
use citor_core::resolutions::{betti_table, complexity_estimate, resolve, Over};
use citor_core::rings::{random_form, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type K = F32003;
type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn env(id: &str) -> Env<K> {
    let session = parse_session(entry(id).unwrap().script).unwrap();
    build_env::<K>(&session).unwrap()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn pattern(m: &ModulePresentation<K>, n: &ModulePresentation<K>, bound: usize) -> Result<String, String> {
    let p = tor(m, n, bound).map_err(err)?;
    Ok(p.entries.iter().map(|e| if e.vanishing { '0' } else { '+' }).collect())
}

fn linear_betti_growth() -> Outcome {
    let e = env("3.13");
    let m = e.module("M");
    let res = resolve(m, Over::Quotient, 6).map_err(err)?;
    let b = betti_table(&res).map_err(err)?;
    ensure!(b.betti == vec![1, 2, 3, 4, 5, 6, 7], "betti {:?}", b.betti);
    let t = tor(m, m, 2).map_err(err)?;
    ensure!(!t.entries[2].vanishing, "Tor_2(M,M) vanished");
    Ok(format!("betti {:?}, Tor_2 ≠ 0", b.betti))
}

fn tor_gap() -> Outcome {
    let e = env("3.11");
    let (m, n) = (e.module("M"), e.module("N"));
    let pat = pattern(m, n, 5)?;
    ensure!(&pat[1..] == "00+0+", "Tor pattern {pat}");
    let mut cx = Vec::new();
    for x in [m, n] {
        let b = betti_table(&resolve(x, Over::Quotient, 12).map_err(err)?).map_err(err)?;
        let est = complexity_estimate(&b, 2).map_err(err)?;
        ensure!(est.value == 2 && est.window >= 10, "cx {} on window {}", est.value, est.window);
        cx.push(est.value);
    }
    Ok(format!("Tor_1..5 {}, cx {:?}", &pat[1..], cx))
}

fn periodic_tor() -> Outcome {
    let e = env("3.14");
    let (m, n) = (e.module("M"), e.module("N"));
    let b = betti_table(&resolve(m, Over::Quotient, 10).map_err(err)?).map_err(err)?;
    ensure!(b.betti == vec![1; 11], "betti {:?}", b.betti);
    let p = tor(m, n, 8).map_err(err)?;
    let t1 = &p.entries[1];
    let from = t1.module.shifts().iter().copied().min().unwrap();
    let hf = t1.module.hilbert_values(from, from + 4);
    ensure!(hf == vec![1; 5], "HF Tor_1 {hf:?}");
    ensure!(t1.depth.to_string() == "1", "depth Tor_1 {}", t1.depth);
    ensure!(p.entries[2].vanishing, "Tor_2 ≠ 0");
    let window: Vec<usize> = p.distance_two.iter().filter(|(i, eq)| *eq && (1..=6).contains(i)).map(|(i, _)| *i).collect();
    ensure!(window == vec![1, 2, 3, 4, 5, 6], "distance-two evidence {:?}", p.distance_two);
    let text = citor_cli::emit_report(
        &citor_cli::run_session(
            &parse_session(&format!("{}tor(M, N, bound=3)\n", entry("3.14").unwrap().script)).unwrap(),
            &Default::default(),
        )
        .map_err(err)?,
        citor_cli::Format::Text,
    );
    ensure!(text.contains("i=1, vanishes=false, depth=1, HF=(1,1,1,1"), "table row missing:\n{text}");
    Ok(format!("HF Tor_1 {hf:?}, distance-two on 1..=6"))
}

fn depth_formula() -> Outcome {
    let e = env("4.5");
    let m = e.module("M");
    let res = resolve(m, Over::Quotient, 4).map_err(err)?;
    ensure!(res.projective_dimension() == Some(1), "pd {:?}", res.projective_dimension());
    let r = depth_formula_check(m, m, 10).map_err(err)?;
    ensure!(r.first_nonvanishing_tor.is_none(), "Tor_{:?} ≠ 0", r.first_nonvanishing_tor);
    ensure!(r.evidence == Some(EvidenceTier::ProjectiveDimensionFinite), "evidence {:?}", r.evidence);
    let depths = [r.depth_m, r.depth_n, r.depth_r, r.depth_tensor].map(|d| d.to_string());
    ensure!(depths == ["2", "2", "3", "1"], "depths {depths:?}");
    ensure!(r.holds && r.asserted && r.lhs == Some(4) && r.rhs == Some(4), "report {r:?}");
    Ok("2+2 = 3+1, tier pd".into())
}

fn pd_one_tor() -> Outcome {
    let e = env("4.4");
    let m = e.module("M");
    let res = resolve(m, Over::Quotient, 4).map_err(err)?;
    ensure!(res.projective_dimension() == Some(1), "pd {:?}", res.projective_dimension());
    let pat = pattern(m, m, 1)?;
    ensure!(pat == "++", "Tor pattern {pat}");
    Ok("pd 1, Tor_1 ≠ 0".into())
}

fn even_tor() -> Outcome {
    let e = env("cor4.7");
    let (m, n) = (e.module("M"), e.module("N"));
    let p = tor(m, n, 10).map_err(err)?;
    for t in &p.entries[1..] {
        ensure!(t.vanishing == (t.index % 2 == 1), "Tor_{} vanishing {}", t.index, t.vanishing);
    }
    ensure!(p.entries[0].module.length().to_string() == "1", "length Tor_0 {}", p.entries[0].module.length());
    let ideal = m.ring().quotient_generators();
    for i in 0..=4 {
        let oracle = tor_oracle(ideal, m.relations(), n.relations(), i, 0, 6).map_err(err)?;
        let engine: Vec<usize> = p.entries[i].module.hilbert_values(0, 6).into_iter().map(|v| v as usize).collect();
        ensure!(oracle == engine, "Tor_{i}: oracle {oracle:?} engine {engine:?}");
    }
    Ok("Tor odd = 0, even ≠ 0 through 10, Tor_0 = k".into())
}

fn odd_tor() -> Outcome {
    let e = env("pre-3.4");
    let m = e.module("M");
    let pat = pattern(m, m, 10)?;
    ensure!(pat == "++0+0+0+0+0", "Tor pattern {pat}");
    Ok(format!("pattern {pat}"))
}

fn catalog_rings() -> Vec<Ring<K>> {
    ["3.11", "4.4", "4.5"].iter().map(|id| env(id).ring("R").clone()).collect()
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cfg = SearchConfig::new(Question::R4_10, 1, 8);
    cfg.max_generators = 4;
    let mut compared = 0;
    for ring in catalog_rings() {
        let ideal = ring.quotient_generators().to_vec();
        for _ in 0..7 {
            let m = random_module(&ring, &mut rng, &cfg).map_err(err)?;
            let n = random_module(&ring, &mut rng, &cfg).map_err(err)?;
            let p = tor(&m, &n, 4).map_err(err)?;
            for (i, t) in p.entries.iter().enumerate() {
                let oracle = tor_oracle(&ideal, m.relations(), n.relations(), i, 0, 6).map_err(err)?;
                let engine: Vec<usize> = t.module.hilbert_values(0, 6).into_iter().map(|v| v as usize).collect();
                ensure!(oracle == engine, "{}: Tor_{i} oracle {oracle:?} engine {engine:?}", ring.describe());
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} random pairs, Tor_0..4 in degrees 0..6"))
}

/// Depth from the first nonvanishing Ext^i_R(k, M), independent of pd_S.
fn ext_depth(m: &ModulePresentation<K>) -> Result<usize, String> {
    let ring = m.ring();
    let vars: Vec<Polynomial<K>> = (0..ring.nvars()).map(|i| Polynomial::var(ring.nvars(), i)).collect();
    let k = ModulePresentation::cyclic(ring, vars).map_err(err)?;
    let p = ext(&k, m, ring.dim()).map_err(err)?;
    p.entries.iter().find(|e| !e.vanishing).map(|e| e.index).ok_or_else(|| "no nonzero Ext(k, M)".into())
}

fn random_ideal(rng: &mut ChaCha8Rng, n: usize) -> Vec<Polynomial<K>> {
    let count = rng.gen_range(2..=4);
    (0..count).map(|_| random_form::<K>(n, rng.gen_range(1..=3), rng)).filter(|f| !f.is_zero()).collect()
}

fn ideal_matrix(n: usize, gens: &[Polynomial<K>]) -> Matrix<K> {
    let cols: Vec<i32> = gens.iter().map(|g| g.degree_if_homogeneous().unwrap() as i32).collect();
    Matrix::new(n, vec![0], cols, gens.iter().map(|g| vec![g.clone()]).collect()).unwrap()
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfg = SearchConfig::new(Question::R4_10, 1, 9);
    let rings = catalog_rings();
    let mut resolutions = 0;
    for j in 0..50 {
        let ring = &rings[j % rings.len()];
        let m = random_module(ring, &mut rng, &cfg).map_err(err)?;
        let res = resolve(&m, Over::Quotient, 5).map_err(err)?;
        ensure!(res.check_complex() && res.check_minimal(), "resolution {j} not a minimal complex");
        resolutions += 1;
        if m.is_zero() {
            continue;
        }
        let pd = ambient_projective_dimension(&m).map_err(err)?;
        let depth = ext_depth(&m)?;
        ensure!(depth + pd == ring.nvars(), "module {j}: depth {depth} + pd_S {pd} ≠ {}", ring.nvars());
    }
    let mut pairs = 0;
    for e in CATALOG {
        let env = env(e.id);
        for (a, b) in e.pairs {
            let (m, n) = (env.module(a), env.module(b));
            let p = tor(m, n, 5).map_err(err)?;
            let q = tor_by_second(m, n, 5).map_err(err)?;
            for (x, y) in p.entries.iter().zip(&q.entries) {
                ensure!(x.vanishing == y.vanishing && x.hilbert == y.hilbert, "{} ({a},{b}): Tor_{} differs", e.id, x.index);
            }
            for x in [m, n] {
                let res = resolve(x, Over::Quotient, 6).map_err(err)?;
                ensure!(res.check_complex() && res.check_minimal(), "{}: resolution of {a} not a minimal complex", e.id);
                resolutions += 1;
            }
            pairs += 1;
        }
    }
    let mut ideals = 0;
    for n in [2usize, 3, 4].iter().cycle().take(50) {
        let gens = random_ideal(&mut rng, *n);
        if gens.is_empty() {
            continue;
        }
        let amb = Ambient::polynomial_ring(*n, TermOrder::Grevlex);
        let gb = groebner_basis(&ideal_matrix(*n, &gens), &amb, true).map_err(err)?;
        ensure!(gb.satisfies_buchberger_criterion() && gb.is_reduced(), "ideal {ideals} fails the S-pair criterion");
        // The reduced basis does not depend on the generating set.
        let mut shuffled = gens.clone();
        shuffled.reverse();
        shuffled.push(gens[0].mul(&Polynomial::var(*n, 0)));
        let again = groebner_basis(&ideal_matrix(*n, &shuffled), &amb, true).map_err(err)?;
        ensure!(sorted_basis(&gb) == sorted_basis(&again), "ideal {ideals}: reduced basis depends on generators");
        ideals += 1;
    }
    Ok(format!("{resolutions} resolutions, 50 Auslander–Buchsbaum, {pairs} symmetric pairs, {ideals} ideals"))
}

fn harness_soundness() -> Outcome {
    let e = env("3.11");
    let (m, n) = (e.module("M").clone(), e.module("N").clone());
    for id in ["3.12(1)", "3.12(2)"] {
        let r = check_theorem(id, &TheoremInstance::new(m.clone(), Some(n.clone()), 6)).map_err(err)?;
        ensure!(r.verdict == Verdict::HypothesesUnmet && !r.asserted(), "{id}: verdict {}", r.verdict);
        let free = r.checklist.iter().find(|l| l.label.contains("free on")).ok_or("no freeness line")?;
        ensure!(free.status == LineStatus::Failed && free.evidence.contains("codim 1"), "{id}: {free:?}");
    }
    let mut replays = 0;
    for c in CATALOG {
        let env = env(c.id);
        for (a, b) in c.pairs {
            let inst = TheoremInstance::new(env.module(a).clone(), Some(env.module(b).clone()), 6);
            let r = check_theorem("2.2", &inst).map_err(err)?;
            ensure!(r.verdict != Verdict::Contradicted && r.is_sound(), "{} ({a},{b}): {}", c.id, r.verdict);
            replays += 1;
        }
        let outcome = run_example(c.id, citor_cli::FieldChoice::F32003).map_err(err)?;
        ensure!(outcome.pass, "catalog {} fails", c.id);
    }
    Ok(format!("freeness hypothesis fails at codim 1; {replays} rigidity replays sound"))
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 10] = [
        ("linear Betti growth (3.13)", linear_betti_growth, 10),
        ("Tor gap and complexity two (3.11)", tor_gap, 30),
        ("periodic Tor of depth one (3.14)", periodic_tor, 10),
        ("depth formula at pd one (4.5)", depth_formula, 30),
        ("pd one with Tor_1 ≠ 0 (4.4)", pd_one_tor, 5),
        ("even Tor over the node (cor4.7)", even_tor, 5),
        ("odd Tor over the node (pre-3.4)", odd_tor, 5),
        ("Gröbner Tor equals the dense oracle", oracle_equivalence, 120),
        ("property suites", property_suites, 180),
        ("harness soundness", harness_soundness, 30),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(note) if elapsed > Duration::from_secs(*budget) => Err(format!("{note}; over budget")),
            r => r,
        };
        let (tag, note) = match &result {
            Ok(n) => ("PASS", n.clone()),
            Err(e) => {
                failed += 1;
                ("FAIL", e.clone())
            }
        };
        println!("[{tag}] criterion {:>2}: {name} — {:.2}s (budget {budget}s) — {note}", i + 1, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

/// A reduced basis is unique as a set; list order is an artefact of pair order.
fn sorted_basis(gb: &GroebnerBasis<F32003>) -> Vec<Polynomial<F32003>> {
    let mut polys: Vec<Polynomial<F32003>> = gb.elements().into_iter().map(|mut c| c.remove(0)).collect();
    polys.sort_by(|a, b| {
        let (la, lb) = (a.leading_term(TermOrder::Grevlex), b.leading_term(TermOrder::Grevlex));
        TermOrder::Grevlex.cmp(la.unwrap().0, lb.unwrap().0)
    });
    polys
}
