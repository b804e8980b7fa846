//! Parsed scripts: declarations and commands, with a canonical printer.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldChoice {
    F32003,
    Rational,
}

impl FieldChoice {
    pub fn keyword(self) -> &'static str {
        match self {
            FieldChoice::F32003 => "F32003",
            FieldChoice::Rational => "QQ",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f32003" | "gf32003" | "zz/32003" => Some(FieldChoice::F32003),
            "qq" | "q" | "rational" | "rationals" => Some(FieldChoice::Rational),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingDecl {
    pub name: String,
    pub field: Option<FieldChoice>,
    pub vars: Vec<String>,
    pub degrees: Option<Vec<u32>>,
    /// Quotient generators as written.
    pub ideal: Vec<String>,
    /// Declared minimal primes, one generator list each.
    pub primes: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleExpr {
    /// `coker(R, shifts=[..], matrix=[[row], ..])`; rows index generators.
    Coker { ring: String, shifts: Option<Vec<i32>>, matrix: Vec<Vec<String>> },
    Free { ring: String, shifts: Vec<i32> },
    Dual(String),
    Tensor(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: String,
    pub expr: ModuleExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CheckArgs {
    pub bound: Option<usize>,
    pub steps: Option<usize>,
    pub index: Option<i64>,
    pub w: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchArgs {
    pub ring: String,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub generators: Option<usize>,
    pub degree: Option<u32>,
    pub bound: Option<usize>,
    /// Extra `(M, N)` instances evaluated after the random samples.
    pub pairs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Resolve { module: String, steps: Option<usize> },
    Betti { module: String, steps: Option<usize> },
    Tor { m: String, n: String, bound: Option<usize> },
    Ext { m: String, n: String, bound: Option<usize> },
    Profile { module: String },
    Pushforward { module: String, chain: Option<usize> },
    Quasilift { module: String, split: usize },
    Check { id: String, modules: Vec<String>, args: CheckArgs },
    Search { question: String, args: SearchArgs },
    Example { id: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Session {
    pub rings: Vec<RingDecl>,
    pub modules: Vec<ModuleDecl>,
    pub commands: Vec<Command>,
    /// Declaration order, so printing reproduces it: `(is_ring, index)`.
    pub order: Vec<(bool, usize)>,
}

impl Session {
    pub fn ring(&self, name: &str) -> Option<&RingDecl> {
        self.rings.iter().find(|r| r.name == name)
    }

    pub fn module(&self, name: &str) -> Option<&ModuleDecl> {
        self.modules.iter().find(|m| m.name == name)
    }

    /// The ring a module lives over, following dual/tensor references.
    pub fn ring_of(&self, module: &str) -> Option<&str> {
        let decl = self.module(module)?;
        match &decl.expr {
            ModuleExpr::Coker { ring, .. } | ModuleExpr::Free { ring, .. } => Some(ring),
            ModuleExpr::Dual(m) | ModuleExpr::Tensor(m, _) => self.ring_of(m),
        }
    }

    /// Canonical script text; parsing it gives back an equal session.
    pub fn to_script(&self) -> String {
        let mut out = String::new();
        for &(is_ring, i) in &self.order {
            if is_ring {
                write_ring(&mut out, &self.rings[i]);
            } else {
                write_module(&mut out, &self.modules[i]);
            }
        }
        for c in &self.commands {
            write_command(&mut out, c);
        }
        out
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    format!("[{}]", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn nested(rows: &[Vec<String>]) -> String {
    format!("[{}]", rows.iter().map(|r| list(r)).collect::<Vec<_>>().join(", "))
}

fn write_ring(out: &mut String, r: &RingDecl) {
    let mut args = Vec::new();
    if let Some(f) = r.field {
        args.push(format!("field={}", f.keyword()));
    }
    args.push(format!("vars={}", list(&r.vars)));
    if let Some(d) = &r.degrees {
        args.push(format!("degrees={}", list(d)));
    }
    args.push(format!("ideal={}", list(&r.ideal)));
    if let Some(p) = &r.primes {
        args.push(format!("primes={}", nested(p)));
    }
    let _ = writeln!(out, "ring {} = quotient({})", r.name, args.join(", "));
}

fn write_module(out: &mut String, m: &ModuleDecl) {
    let expr = match &m.expr {
        ModuleExpr::Coker { ring, shifts, matrix } => {
            let mut s = format!("coker({ring}");
            if let Some(sh) = shifts {
                let _ = write!(s, ", shifts={}", list(sh));
            }
            let _ = write!(s, ", matrix={})", nested(matrix));
            s
        }
        ModuleExpr::Free { ring, shifts } => format!("free({ring}, shifts={})", list(shifts)),
        ModuleExpr::Dual(a) => format!("dual({a})"),
        ModuleExpr::Tensor(a, b) => format!("tensor({a}, {b})"),
    };
    let _ = writeln!(out, "module {} = {}", m.name, expr);
}

fn opt<T: ToString>(args: &mut Vec<String>, key: &str, v: &Option<T>) {
    if let Some(v) = v {
        args.push(format!("{key}={}", v.to_string()));
    }
}

fn write_command(out: &mut String, c: &Command) {
    let line = match c {
        Command::Resolve { module, steps } | Command::Betti { module, steps } => {
            let name = if matches!(c, Command::Resolve { .. }) { "resolve" } else { "betti" };
            let mut a = vec![module.clone()];
            opt(&mut a, "steps", steps);
            format!("{name}({})", a.join(", "))
        }
        Command::Tor { m, n, bound } | Command::Ext { m, n, bound } => {
            let name = if matches!(c, Command::Tor { .. }) { "tor" } else { "ext" };
            let mut a = vec![m.clone(), n.clone()];
            opt(&mut a, "bound", bound);
            format!("{name}({})", a.join(", "))
        }
        Command::Profile { module } => format!("profile({module})"),
        Command::Pushforward { module, chain } => {
            let mut a = vec![module.clone()];
            opt(&mut a, "chain", chain);
            format!("pushforward({})", a.join(", "))
        }
        Command::Quasilift { module, split } => format!("quasilift({module}, split={split})"),
        Command::Check { id, modules, args } => {
            let mut a = modules.clone();
            opt(&mut a, "bound", &args.bound);
            opt(&mut a, "steps", &args.steps);
            opt(&mut a, "index", &args.index);
            opt(&mut a, "w", &args.w);
            format!("check {id} on ({})", a.join(", "))
        }
        Command::Search { question, args } => {
            let mut a = vec![format!("ring={}", args.ring)];
            opt(&mut a, "samples", &args.samples);
            opt(&mut a, "seed", &args.seed);
            opt(&mut a, "generators", &args.generators);
            opt(&mut a, "degree", &args.degree);
            opt(&mut a, "bound", &args.bound);
            if !args.pairs.is_empty() {
                let pairs: Vec<String> = args.pairs.iter().map(|(m, n)| format!("[{m}, {n}]")).collect();
                a.push(format!("pairs=[{}]", pairs.join(", ")));
            }
            format!("search {question} with ({})", a.join(", "))
        }
        Command::Example { id } => format!("example {id}"),
    };
    out.push_str(&line);
    out.push('\n');
}
