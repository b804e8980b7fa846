//! Script parser. One statement per line; brackets and parentheses may
//! span lines; `#` starts a comment.
//!
//! ```text
//! ring R = quotient(field=F32003, vars=[x,y,z,u], ideal=[x*y, z*u])
//! module M = coker(R, shifts=[0], matrix=[[y, u]])
//! tor(M, M, bound=5)
//! check 3.12(2) on (M, N, bound=5)
//! search Q3.17 with (ring=R, samples=100, seed=1)
//! example 3.14
//! ```

use std::fmt;

use citor_core::algebra::{parse_polynomial, F32003};

use crate::session::{
    CheckArgs, Command, FieldChoice, ModuleDecl, ModuleExpr, RingDecl, SearchArgs, Session,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ident,
    UInt,
    Int,
    Idents,
    UInts,
    Ints,
    Polys,
    PolyRows,
    Pairs,
}

#[derive(Clone, Debug)]
enum Value {
    Ident(String),
    UInt(u64),
    Int(i64),
    Idents(Vec<String>),
    UInts(Vec<u64>),
    Ints(Vec<i64>),
    /// Polynomial text with its byte offset in the source.
    Polys(Vec<(String, usize)>),
    PolyRows(Vec<Vec<(String, usize)>>),
    Pairs(Vec<(String, String)>),
}

struct Args {
    positional: Vec<(String, usize)>,
    named: Vec<(String, Value, usize)>,
}

impl Args {
    fn take(&mut self, key: &str) -> Option<(Value, usize)> {
        let i = self.named.iter().position(|(k, _, _)| k == key)?;
        let (_, v, p) = self.named.remove(i);
        Some((v, p))
    }

    fn uint(&mut self, key: &str) -> Option<u64> {
        match self.take(key) {
            Some((Value::UInt(n), _)) => Some(n),
            _ => None,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    session: Session,
}

/// Parse a whole script, stopping at the first error.
pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    let mut p = Parser { src: text, pos: 0, session: Session::default() };
    loop {
        p.skip_ws();
        if p.at_end() {
            break;
        }
        p.statement()?;
        p.end_of_statement()?;
    }
    Ok(p.session)
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn location(&self, offset: usize) -> (usize, usize) {
        let before = &self.src[..offset.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }

    fn error_at<T>(&self, offset: usize, message: impl Into<String>) -> PResult<T> {
        let (line, col) = self.location(offset);
        Err(ParseError { line, col, message: message.into() })
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        self.error_at(self.pos, message)
    }

    fn skip_comment(&mut self) {
        if self.peek() == Some('#') {
            while let Some(c) = self.peek() {
                if c == '\n' {
                    break;
                }
                self.bump();
            }
        }
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => self.skip_comment(),
                _ => break,
            }
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        while matches!(self.peek(), Some(' ' | '\t' | '\r' | ';')) {
            self.bump();
        }
        self.skip_comment();
        match self.peek() {
            None | Some('\n') => Ok(()),
            Some(c) => self.error(format!("unexpected `{c}` after statement")),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(d) => self.error(format!("expected `{c}`, found `{d}`")),
                None => self.error(format!("expected `{c}`, found end of input")),
            }
        }
    }

    fn ident(&mut self) -> PResult<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            Some(c) => return self.error(format!("expected a name, found `{c}`")),
            None => return self.error("expected a name, found end of input"),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        Ok((self.src[start..self.pos].to_string(), start))
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        let (w, at) = self.ident()?;
        if w != kw {
            return self.error_at(at, format!("expected `{kw}`, found `{w}`"));
        }
        Ok(())
    }

    /// A whitespace-free word such as `3.12(2)` or `Q3.17`.
    fn word(&mut self) -> PResult<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if !c.is_whitespace() && c != '#') {
            self.bump();
        }
        if start == self.pos {
            return self.error("expected an identifier");
        }
        Ok((self.src[start..self.pos].to_string(), start))
    }

    fn int(&mut self) -> PResult<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        let text = &self.src[start..self.pos];
        text.parse().or_else(|_| self.error_at(start, "expected an integer"))
    }

    fn uint(&mut self) -> PResult<u64> {
        self.skip_ws();
        let at = self.pos;
        let n = self.int()?;
        u64::try_from(n).or_else(|_| self.error_at(at, "expected a nonnegative integer"))
    }

    /// Raw polynomial text up to the next top-level `,`, `]` or `)`.
    fn poly(&mut self) -> PResult<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            match c {
                '(' => depth += 1,
                ')' if depth > 0 => depth -= 1,
                ',' | ']' | ')' if depth == 0 => break,
                '\n' | '#' => break,
                _ => {}
            }
            self.bump();
        }
        let text = self.src[start..self.pos].trim_end();
        if text.is_empty() {
            return self.error_at(start, "expected a polynomial");
        }
        Ok((text.to_string(), start))
    }

    /// `[item, item, ...]`; a trailing comma is an error at the comma.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            self.skip_ws();
            let comma = self.pos;
            if self.eat(',') {
                if self.eat(']') {
                    return self.error_at(comma, "trailing comma in list");
                }
                continue;
            }
            self.expect(']')?;
            return Ok(out);
        }
    }

    fn value(&mut self, kind: Kind) -> PResult<Value> {
        Ok(match kind {
            Kind::Ident => Value::Ident(self.ident()?.0),
            Kind::UInt => Value::UInt(self.uint()?),
            Kind::Int => Value::Int(self.int()?),
            Kind::Idents => Value::Idents(self.list(|p| Ok(p.ident()?.0))?),
            Kind::UInts => Value::UInts(self.list(|p| p.uint())?),
            Kind::Ints => Value::Ints(self.list(|p| p.int())?),
            Kind::Polys => Value::Polys(self.list(|p| p.poly())?),
            Kind::PolyRows => Value::PolyRows(self.list(|p| p.list(|q| q.poly()))?),
            Kind::Pairs => Value::Pairs(self.list(|p| {
                let at = p.pos;
                let names = p.list(|q| Ok(q.ident()?.0))?;
                match <[String; 2]>::try_from(names) {
                    Ok([a, b]) => Ok((a, b)),
                    Err(_) => p.error_at(at, "expected a pair [M, N]"),
                }
            })?),
        })
    }

    /// `(pos, pos, key=value, ...)` with `kinds` mapping keys to value kinds.
    fn args(&mut self, kinds: &dyn Fn(&str) -> Option<Kind>) -> PResult<Args> {
        self.expect('(')?;
        let mut args = Args { positional: Vec::new(), named: Vec::new() };
        if self.eat(')') {
            return Ok(args);
        }
        loop {
            let (name, at) = self.ident()?;
            if self.eat('=') {
                let Some(kind) = kinds(&name) else {
                    return self.error_at(at, format!("unknown argument `{name}`"));
                };
                if args.named.iter().any(|(k, _, _)| *k == name) {
                    return self.error_at(at, format!("argument `{name}` given twice"));
                }
                self.skip_ws();
                let vat = self.pos;
                let v = self.value(kind)?;
                args.named.push((name, v, vat));
            } else {
                if !args.named.is_empty() {
                    return self.error_at(at, "positional argument after named ones");
                }
                args.positional.push((name, at));
            }
            self.skip_ws();
            let comma = self.pos;
            if self.eat(',') {
                if self.eat(')') {
                    return self.error_at(comma, "trailing comma in argument list");
                }
                continue;
            }
            self.expect(')')?;
            return Ok(args);
        }
    }

    fn positional(&self, args: &Args, n: std::ops::RangeInclusive<usize>, what: &str, at: usize) -> PResult<()> {
        if !n.contains(&args.positional.len()) {
            let want = if n.start() == n.end() { n.start().to_string() } else { format!("{}..{}", n.start(), n.end()) };
            return self.error_at(at, format!("{what} takes {want} positional argument(s)"));
        }
        Ok(())
    }

    fn check_polys(&self, polys: &[(String, usize)], vars: &[String]) -> PResult<Vec<String>> {
        polys
            .iter()
            .map(|(text, at)| match parse_polynomial::<F32003>(text, vars) {
                Ok(_) => Ok(text.clone()),
                Err(e) => self.error_at(at + e.offset, format!("bad polynomial `{text}`: {}", e.message)),
            })
            .collect()
    }

    fn fresh_name(&self, name: &str, at: usize) -> PResult<()> {
        if self.session.ring(name).is_some() || self.session.module(name).is_some() {
            return self.error_at(at, format!("`{name}` is already declared"));
        }
        Ok(())
    }

    fn ring_ref(&self, name: &str, at: usize) -> PResult<&RingDecl> {
        match self.session.ring(name) {
            Some(r) => Ok(r),
            None => self.error_at(at, format!("undeclared ring `{name}`")),
        }
    }

    fn module_ref(&self, name: &str, at: usize) -> PResult<()> {
        if self.session.module(name).is_none() {
            return self.error_at(at, format!("undeclared module `{name}`"));
        }
        Ok(())
    }

    fn same_ring(&self, a: &str, b: &str, at: usize) -> PResult<()> {
        if self.session.ring_of(a) != self.session.ring_of(b) {
            return self.error_at(at, format!("`{a}` and `{b}` live over different rings"));
        }
        Ok(())
    }

    fn statement(&mut self) -> PResult<()> {
        let (head, at) = self.ident()?;
        match head.as_str() {
            "ring" => self.ring_decl(),
            "module" => self.module_decl(),
            "check" => self.check(),
            "search" => self.search(),
            "example" => {
                let (id, _) = self.word()?;
                self.session.commands.push(Command::Example { id });
                Ok(())
            }
            "resolve" | "betti" | "tor" | "ext" | "profile" | "pushforward" | "quasilift" => self.call(&head, at),
            _ => self.error_at(at, format!("unknown statement `{head}`")),
        }
    }

    fn ring_decl(&mut self) -> PResult<()> {
        let (name, at) = self.ident()?;
        self.fresh_name(&name, at)?;
        self.expect('=')?;
        self.keyword("quotient")?;
        let start = self.pos;
        let mut args = self.args(&|k| match k {
            "field" => Some(Kind::Ident),
            "vars" => Some(Kind::Idents),
            "degrees" => Some(Kind::UInts),
            "ideal" => Some(Kind::Polys),
            "primes" => Some(Kind::PolyRows),
            _ => None,
        })?;
        self.positional(&args, 0..=0, "quotient", start)?;
        let field = match args.take("field") {
            Some((Value::Ident(f), p)) => match FieldChoice::parse(&f) {
                Some(f) => Some(f),
                None => return self.error_at(p, format!("unknown field `{f}` (use F32003 or QQ)")),
            },
            _ => None,
        };
        let Some((Value::Idents(vars), vat)) = args.take("vars") else {
            return self.error_at(start, "quotient needs `vars=[...]`");
        };
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return self.error_at(vat, format!("variable `{v}` listed twice"));
            }
        }
        let degrees = match args.take("degrees") {
            Some((Value::UInts(d), p)) => {
                if d.len() != vars.len() {
                    return self.error_at(p, "one degree per variable is required");
                }
                Some(d.into_iter().map(|x| x as u32).collect())
            }
            _ => None,
        };
        let ideal = match args.take("ideal") {
            Some((Value::Polys(ps), _)) => self.check_polys(&ps, &vars)?,
            _ => Vec::new(),
        };
        let primes = match args.take("primes") {
            Some((Value::PolyRows(rows), _)) => {
                Some(rows.iter().map(|r| self.check_polys(r, &vars)).collect::<PResult<Vec<_>>>()?)
            }
            _ => None,
        };
        self.session.order.push((true, self.session.rings.len()));
        self.session.rings.push(RingDecl { name, field, vars, degrees, ideal, primes });
        Ok(())
    }

    fn module_decl(&mut self) -> PResult<()> {
        let (name, at) = self.ident()?;
        self.fresh_name(&name, at)?;
        self.expect('=')?;
        let (head, hat) = self.ident()?;
        let start = self.pos;
        let expr = match head.as_str() {
            "coker" | "free" => {
                let mut args = self.args(&|k| match k {
                    "shifts" => Some(Kind::Ints),
                    "matrix" => Some(Kind::PolyRows),
                    _ => None,
                })?;
                self.positional(&args, 1..=1, &head, start)?;
                let (ring, rat) = args.positional[0].clone();
                let vars = self.ring_ref(&ring, rat)?.vars.clone();
                let shifts = match args.take("shifts") {
                    Some((Value::Ints(s), _)) => Some(s.into_iter().map(|x| x as i32).collect::<Vec<_>>()),
                    _ => None,
                };
                if head == "free" {
                    if args.take("matrix").is_some() {
                        return self.error_at(start, "free modules take no matrix");
                    }
                    let Some(shifts) = shifts else {
                        return self.error_at(start, "free needs `shifts=[...]`");
                    };
                    ModuleExpr::Free { ring, shifts }
                } else {
                    let Some((Value::PolyRows(rows), mat)) = args.take("matrix") else {
                        return self.error_at(start, "coker needs `matrix=[[...], ...]`");
                    };
                    let width = rows.first().map_or(0, |r| r.len());
                    if rows.iter().any(|r| r.len() != width) {
                        return self.error_at(mat, "matrix rows have different lengths");
                    }
                    if let Some(s) = &shifts {
                        if s.len() != rows.len() && !rows.is_empty() {
                            return self.error_at(mat, format!("{} shifts for {} matrix rows", s.len(), rows.len()));
                        }
                    } else if rows.is_empty() {
                        return self.error_at(mat, "an empty matrix needs `shifts=[...]`");
                    }
                    let matrix = rows.iter().map(|r| self.check_polys(r, &vars)).collect::<PResult<Vec<_>>>()?;
                    ModuleExpr::Coker { ring, shifts, matrix }
                }
            }
            "dual" | "tensor" => {
                let args = self.args(&|_| None)?;
                let n = if head == "dual" { 1 } else { 2 };
                self.positional(&args, n..=n, &head, start)?;
                for (m, p) in &args.positional {
                    self.module_ref(m, *p)?;
                }
                if head == "dual" {
                    ModuleExpr::Dual(args.positional[0].0.clone())
                } else {
                    let (a, b) = (&args.positional[0].0, &args.positional[1].0);
                    self.same_ring(a, b, start)?;
                    ModuleExpr::Tensor(a.clone(), b.clone())
                }
            }
            _ => return self.error_at(hat, format!("unknown module constructor `{head}`")),
        };
        self.session.order.push((false, self.session.modules.len()));
        self.session.modules.push(ModuleDecl { name, expr });
        Ok(())
    }

    fn call(&mut self, head: &str, at: usize) -> PResult<()> {
        let mut args = self.args(&|k| match (head, k) {
            ("resolve" | "betti", "steps") => Some(Kind::UInt),
            ("tor" | "ext", "bound") => Some(Kind::UInt),
            ("pushforward", "chain") => Some(Kind::UInt),
            ("quasilift", "split") => Some(Kind::UInt),
            _ => None,
        })?;
        let arity = if matches!(head, "tor" | "ext") { 2 } else { 1 };
        self.positional(&args, arity..=arity, head, at)?;
        for (m, p) in &args.positional {
            self.module_ref(m, *p)?;
        }
        let m = args.positional[0].0.clone();
        let cmd = match head {
            "resolve" => Command::Resolve { module: m, steps: args.uint("steps").map(|x| x as usize) },
            "betti" => Command::Betti { module: m, steps: args.uint("steps").map(|x| x as usize) },
            "tor" | "ext" => {
                let n = args.positional[1].0.clone();
                self.same_ring(&m, &n, at)?;
                let bound = args.uint("bound").map(|x| x as usize);
                if head == "tor" {
                    Command::Tor { m, n, bound }
                } else {
                    Command::Ext { m, n, bound }
                }
            }
            "profile" => Command::Profile { module: m },
            "pushforward" => Command::Pushforward { module: m, chain: args.uint("chain").map(|x| x as usize) },
            _ => Command::Quasilift { module: m, split: args.uint("split").unwrap_or(0) as usize },
        };
        self.session.commands.push(cmd);
        Ok(())
    }

    fn check(&mut self) -> PResult<()> {
        let (id, _) = self.word()?;
        self.keyword("on")?;
        let start = self.pos;
        let mut args = self.args(&|k| match k {
            "bound" | "steps" | "w" => Some(Kind::UInt),
            "index" => Some(Kind::Int),
            _ => None,
        })?;
        self.positional(&args, 1..=2, "check", start)?;
        for (m, p) in &args.positional {
            self.module_ref(m, *p)?;
        }
        if let [(a, _), (b, _)] = args.positional.as_slice() {
            self.same_ring(a, b, start)?;
        }
        let index = match args.take("index") {
            Some((Value::Int(i), _)) => Some(i),
            _ => None,
        };
        let check = CheckArgs {
            bound: args.uint("bound").map(|x| x as usize),
            steps: args.uint("steps").map(|x| x as usize),
            index,
            w: args.uint("w").map(|x| x as usize),
        };
        let modules = args.positional.into_iter().map(|(m, _)| m).collect();
        self.session.commands.push(Command::Check { id, modules, args: check });
        Ok(())
    }

    fn search(&mut self) -> PResult<()> {
        let (question, _) = self.word()?;
        self.keyword("with")?;
        let start = self.pos;
        let mut args = self.args(&|k| match k {
            "ring" => Some(Kind::Ident),
            "samples" | "seed" | "generators" | "degree" | "bound" => Some(Kind::UInt),
            "pairs" => Some(Kind::Pairs),
            _ => None,
        })?;
        self.positional(&args, 0..=0, "search", start)?;
        let Some((Value::Ident(ring), rat)) = args.take("ring") else {
            return self.error_at(start, "search needs `ring=NAME`");
        };
        self.ring_ref(&ring, rat)?;
        let pairs = match args.take("pairs") {
            Some((Value::Pairs(ps), p)) => {
                for (a, b) in &ps {
                    self.module_ref(a, p)?;
                    self.module_ref(b, p)?;
                    if self.session.ring_of(a) != Some(ring.as_str()) || self.session.ring_of(b) != Some(ring.as_str()) {
                        return self.error_at(p, format!("pair ({a}, {b}) is not over `{ring}`"));
                    }
                }
                ps
            }
            _ => Vec::new(),
        };
        let search = SearchArgs {
            ring,
            samples: args.uint("samples").map(|x| x as usize),
            seed: args.uint("seed"),
            generators: args.uint("generators").map(|x| x as usize),
            degree: args.uint("degree").map(|x| x as u32),
            bound: args.uint("bound").map(|x| x as usize),
            pairs,
        };
        self.session.commands.push(Command::Search { question, args: search });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ODD_EVEN: &str = "ring R = quotient(vars=[x,y,z,u], ideal=[x*y, z*u])\n\
                            module M = coker(R, matrix=[[y, u]])\n";

    #[test]
    fn two_line_script() {
        let s = parse_session(ODD_EVEN).unwrap();
        assert_eq!(s.rings.len(), 1);
        assert_eq!(s.modules.len(), 1);
        assert!(s.commands.is_empty());
    }

    #[test]
    fn example_command() {
        let s = parse_session("example 3.14").unwrap();
        assert_eq!(s.commands, vec![Command::Example { id: "3.14".into() }]);
    }

    #[test]
    fn dangling_comma() {
        let text = "ring R = quotient(vars=[x,y], ideal=[x*y])\nmodule M = coker(R, matrix=[[y,]])";
        let e = parse_session(text).unwrap_err();
        assert_eq!((e.line, e.col), (2, 31), "{e}");
        assert!(e.message.contains("trailing comma"));
    }

    #[test]
    fn undeclared_names() {
        let e = parse_session("module M = coker(S, matrix=[[x]])").unwrap_err();
        assert!(e.message.contains("undeclared ring `S`"));
        let e = parse_session(&format!("{ODD_EVEN}tor(M, N)")).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("undeclared module `N`"));
    }

    #[test]
    fn bad_polynomial_points_into_it() {
        let e = parse_session("ring R = quotient(vars=[x,y], ideal=[x*q])").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.col >= 38, "{e}");
    }

    #[test]
    fn commands_round_trip() {
        let text = format!(
            "{ODD_EVEN}module N = coker(R, shifts=[0,0,0], matrix=[[0,u],[-z,x],[y,0]])\n\
             # comments are ignored\n\
             module D = dual(M)\n\
             tor(M, N, bound=5)\next(M, N)\nbetti(M, steps=6)\nresolve(M)\nprofile(N)\n\
             pushforward(M, chain=2)\nquasilift(M, split=1)\n\
             check 3.12(2) on (M, N, bound=5, index=1)\n\
             search R4.10 with (ring=R, samples=3, seed=7, pairs=[[M, N]])\nexample pre-3.4\n"
        );
        let s = parse_session(&text).unwrap();
        assert_eq!(s.commands.len(), 10);
        let again = parse_session(&s.to_script()).unwrap();
        assert_eq!(s, again);
        assert_eq!(s.to_script(), again.to_script());
    }

    #[test]
    fn statement_boundaries() {
        let e = parse_session("example 3.14 example 4.5").unwrap_err();
        assert_eq!((e.line, e.col), (1, 14));
        let e = parse_session("ring R = quotient(vars=[x], ideal=[x^2]) extra").unwrap_err();
        assert!(e.message.contains("after statement"));
        let e = parse_session("frobnicate(M)").unwrap_err();
        assert!(e.message.contains("unknown statement"));
    }
}
