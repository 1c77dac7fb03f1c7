//! Line-oriented session language.
//!
//! One statement per line; `;` separates statements on a line and `#` starts a
//! comment. Statements either bind a name (`f = x^2 + y`), configure state
//! (`ring`, `use`, `table`), run a command that prints one line, or check a command
//! against an expected rendering with `assert[label] command == expected`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;

use crate::divisor::{divisor_of, parse_divisor_with, pullback_along, PrimeTable, QDivisor};
use crate::error::Error;
use crate::extension::{ExtensionPres, Monogenic, Presented, TraceImage};
use crate::frobenius::{cartier_apply, decompose_q, fedder_test, frob_root};
use crate::groebner::Ideal;
use crate::parse::parse_poly_with;
use crate::pmap::{commute_check, comparison_element, delta_of_key, iterate_map, key_of_delta, transpose_key, PMapKey, TraceLike};
use crate::poly::{MonomialOrder, Poly, PolyRing};
use crate::testideal::{
    fpt_estimate, fpt_nu, is_sharply_f_pure, is_strongly_f_regular, skoda_check, tau, tau_fractional, tau_hypersurface, Ambient,
    FractionalIdeal, Triple, DEFAULT_MAX_E,
};
use crate::unipoly::{is_irreducible, univariate_factor};
use crate::verify::{surjectivity_certificate, verify_containment_extension, verify_intersection, verify_transformation};

/// Session-wide settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub max_e: u32,
    /// Declares a ring `R` before the script runs when both are set.
    pub p: Option<u64>,
    pub vars: Option<Vec<String>>,
    pub order: MonomialOrder,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_e: DEFAULT_MAX_E, p: None, vars: None, order: MonomialOrder::Grevlex }
    }
}

/// How a failed statement maps onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Compute,
    Resource,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Compute => 1,
            ErrorKind::Parse => 2,
            ErrorKind::Resource => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ErrorKind::Parse => "parse",
            ErrorKind::Compute => "compute",
            ErrorKind::Resource => "resource",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionError {
    pub line: usize,
    pub kind: ErrorKind,
    pub message: String,
}

impl fmt::Display for SessionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: line {}: {}", self.line, self.message)
    }
}

/// One printed line of a transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Output { line: usize, statement: String, text: String },
    Check { line: usize, label: String, statement: String, expected: String, actual: String, pass: bool },
}

impl Entry {
    pub fn render_text(&self) -> String {
        match self {
            Entry::Output { text, .. } => text.clone(),
            Entry::Check { label, statement, expected, actual, pass: true, .. } => {
                let _ = (expected, actual);
                format!("PASS [{label}] {statement}")
            }
            Entry::Check { label, statement, expected, actual, pass: false, .. } => {
                format!("FAIL [{label}] {statement}: expected `{expected}`, got `{actual}`")
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Entry::Output { line, statement, text } => serde_json::json!({ "line": line, "statement": statement, "output": text }),
            Entry::Check { line, label, statement, expected, actual, pass } => serde_json::json!({
                "line": line, "statement": statement, "label": label, "expected": expected, "actual": actual, "pass": pass,
            }),
        }
    }
}

/// The result of running a script: everything printed before the first error.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub entries: Vec<Entry>,
    pub error: Option<SessionError>,
}

impl Transcript {
    pub fn checks(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| matches!(e, Entry::Check { .. }))
    }

    pub fn failed_checks(&self) -> usize {
        self.checks().filter(|e| matches!(e, Entry::Check { pass: false, .. })).count()
    }

    /// 0 on success, otherwise the code of the error; failed checks count as
    /// computational errors.
    pub fn exit_code(&self) -> i32 {
        match &self.error {
            Some(e) => e.kind.exit_code(),
            None if self.failed_checks() > 0 => 1,
            None => 0,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.render_text());
            out.push('\n');
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.to_json().to_string());
            out.push('\n');
        }
        if let Some(err) = &self.error {
            let v = serde_json::json!({ "line": err.line, "error": err.message, "kind": err.kind.name() });
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }
}

/// Failure inside one statement.
#[derive(Debug)]
enum Fail {
    Parse(String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Fail>;

fn syntax<T>(msg: impl Into<String>) -> Res<T> {
    Err(Fail::Parse(msg.into()))
}

#[derive(Debug, Clone)]
struct TraceBinding {
    ext: String,
    map: TraceLike,
}

#[derive(Debug, Clone)]
enum Value {
    Poly(Poly),
    Ideal(Ideal),
    Fractional(FractionalIdeal),
    Divisor(QDivisor),
    Key(PMapKey),
    Ext(Arc<ExtensionPres>),
    Trace(Arc<TraceBinding>),
    Text(String),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Poly(_) => "polynomial",
            Value::Ideal(_) => "ideal",
            Value::Fractional(_) => "fractional ideal",
            Value::Divisor(_) => "divisor",
            Value::Key(_) => "map key",
            Value::Ext(_) => "extension",
            Value::Trace(_) => "trace-like map",
            Value::Text(_) => "report",
        }
    }

    fn render(&self) -> Res<String> {
        Ok(match self {
            Value::Poly(p) => p.to_string(),
            Value::Ideal(i) => i.canonical_string()?,
            Value::Fractional(f) => render_fractional(f)?,
            Value::Divisor(d) => d.to_string(),
            Value::Key(k) => render_key(k),
            Value::Ext(e) => format!("{} extension", e.kind()),
            Value::Trace(t) => format!("trace-like map on {} with key {}", t.ext, t.map.key()),
            Value::Text(s) => s.clone(),
        })
    }
}

fn render_key(k: &PMapKey) -> String {
    format!("{} (e = {})", k.key(), k.e())
}

fn render_fractional(f: &FractionalIdeal) -> Res<String> {
    let num = f.numerator.canonical_string()?;
    if f.is_integral() {
        Ok(num)
    } else {
        Ok(format!("(1/({}))·{}", f.denominator, num))
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Splits on `sep` outside brackets.
fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out
}

/// Splits a line into statements; an `assert` runs to the end of the line, so its
/// expected text may contain `;`.
fn statements(code: &str) -> Vec<String> {
    let parts = split_top(code, ';');
    match parts.iter().position(|p| p.trim_start().starts_with("assert")) {
        Some(i) => {
            let mut out = parts[..i].to_vec();
            out.push(parts[i..].join(";"));
            out
        }
        None => parts,
    }
}

/// Whitespace-separated words at bracket depth zero; words joined by a binary
/// operator on either side are merged, so `x + y` stays one argument.
fn words(s: &str) -> Vec<String> {
    let mut raw: Vec<String> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        if c.is_whitespace() && depth == 0 {
            if !cur.is_empty() {
                raw.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        raw.push(cur);
    }
    const JOIN_END: &[char] = &['+', '-', '*', '/', '^', ','];
    const JOIN_START: &[char] = &['+', '-', '*', '/', '^', ',', ')'];
    let mut out: Vec<String> = Vec::new();
    for w in raw {
        let glue = match out.last() {
            Some(prev) => (prev.ends_with(JOIN_END) && !prev.ends_with("->")) || w.starts_with(JOIN_START),
            None => false,
        };
        if glue {
            let prev = out.last_mut().expect("nonempty");
            prev.push(' ');
            prev.push_str(&w);
        } else {
            out.push(w);
        }
    }
    out
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// `name = rest` when the statement is a binding.
fn split_binding(stmt: &str) -> Option<(&str, &str)> {
    let eq = stmt.find('=')?;
    let (lhs, rest) = stmt.split_at(eq);
    let rhs = &rest[1..];
    if rhs.starts_with('=') || !is_ident(lhs.trim()) {
        return None;
    }
    Some((lhs.trim(), rhs.trim()))
}

/// `left == right` split at the last top-level `==`.
fn split_check(s: &str) -> Option<(String, String)> {
    let chars: Vec<char> = s.chars().collect();
    let mut depth = 0i32;
    let mut at = None;
    for i in 0..chars.len() {
        match chars[i] {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            '=' if depth == 0 && i + 1 < chars.len() && chars[i + 1] == '=' => at = Some(i),
            _ => {}
        }
    }
    let i = at?;
    let left: String = chars[..i].iter().collect();
    let right: String = chars[i + 2..].iter().collect();
    Some((left.trim().to_string(), right.trim().to_string()))
}

/// Positional arguments plus `key=value` options.
struct Args {
    pos: Vec<String>,
    opts: BTreeMap<String, String>,
}

impl Args {
    fn parse(s: &str) -> Res<Args> {
        let mut pos = Vec::new();
        let mut opts = BTreeMap::new();
        for w in words(s) {
            match w.find('=') {
                Some(i) if is_ident(&w[..i]) && !w[i + 1..].starts_with('=') => {
                    if opts.insert(w[..i].to_string(), w[i + 1..].to_string()).is_some() {
                        return syntax(format!("option `{}` given twice", &w[..i]));
                    }
                }
                _ => pos.push(w),
            }
        }
        Ok(Args { pos, opts })
    }

    fn take_opt(&mut self, key: &str) -> Option<String> {
        self.opts.remove(key)
    }

    fn take_u32(&mut self, key: &str, default: Option<u32>) -> Res<u32> {
        match self.opts.remove(key) {
            Some(v) => v.parse().or_else(|_| syntax(format!("`{key}` expects a nonnegative integer, got `{v}`"))),
            None => default.map_or_else(|| syntax(format!("missing `{key}=`")), Ok),
        }
    }

    fn positional(&self, i: usize, what: &str) -> Res<&str> {
        match self.pos.get(i) {
            Some(s) => Ok(s),
            None => syntax(format!("missing {what}")),
        }
    }

    fn finish(&self, max_pos: usize) -> Res<()> {
        if let Some(k) = self.opts.keys().next() {
            return syntax(format!("unknown option `{k}`"));
        }
        if self.pos.len() > max_pos {
            return syntax(format!("unexpected argument `{}`", self.pos[max_pos]));
        }
        Ok(())
    }
}

fn parse_ratio(s: &str) -> Res<Rational64> {
    let s = s.trim();
    let bad = || Fail::Parse(format!("expected a rational number, got `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(Fail::Lib(Error::DivisionByZero));
            }
            Ok(Rational64::new(n, d))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Interpreter state.
pub struct Session {
    options: Options,
    rings: BTreeMap<String, Arc<PolyRing>>,
    current: Option<String>,
    tables: Vec<Arc<PrimeTable>>,
    bindings: BTreeMap<String, Value>,
}

const COMMANDS: &[&str] = &[
    "apply", "bracket", "cartier", "certificate", "cmp", "colon", "commute", "comparison", "containment", "decompose", "deltabar",
    "delta", "dadd", "dscale", "dsub", "div", "effective", "eliminate", "equal", "factor", "fedder", "fpt", "frobroot", "gb",
    "ceil", "floor", "intersect", "intersection", "irreducible", "iterate", "keyof", "member", "nf", "norm", "nu", "power",
    "print", "product", "pullback", "ram", "sfp", "sfr", "skoda", "subset", "sum", "surjective", "tame", "tau", "trace",
    "traceimage", "tracekey", "transform", "transpose", "transposes",
];

impl Session {
    pub fn new(options: Options) -> Session {
        Session { options, rings: BTreeMap::new(), current: None, tables: Vec::new(), bindings: BTreeMap::new() }
    }

    /// Runs a whole script, stopping at the first failing statement.
    pub fn run(&mut self, script: &str) -> Transcript {
        let mut t = Transcript::default();
        if let (Some(p), Some(vars)) = (self.options.p, self.options.vars.clone()) {
            let names: Vec<&str> = vars.iter().map(String::as_str).collect();
            match PolyRing::new(p, &names, self.options.order) {
                Ok(r) => self.declare_ring("R", r),
                Err(e) => {
                    t.error = Some(self.classify(0, Fail::Lib(e)));
                    return t;
                }
            }
        }
        for (idx, raw) in script.lines().enumerate() {
            let line = idx + 1;
            let code = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            };
            for stmt in statements(code) {
                let stmt = stmt.trim();
                if stmt.is_empty() {
                    continue;
                }
                match self.statement(line, stmt) {
                    Ok(Some(entry)) => t.entries.push(entry),
                    Ok(None) => {}
                    Err(f) => {
                        t.error = Some(self.classify(line, f));
                        return t;
                    }
                }
            }
        }
        t
    }

    fn classify(&self, line: usize, f: Fail) -> SessionError {
        let (kind, message) = match f {
            Fail::Parse(m) => (ErrorKind::Parse, m),
            Fail::Lib(e) if e.is_parse() => (ErrorKind::Parse, e.to_string()),
            Fail::Lib(e @ Error::ResourceExceeded(_)) => (ErrorKind::Resource, e.to_string()),
            Fail::Lib(e) => (ErrorKind::Compute, e.to_string()),
        };
        SessionError { line, kind, message }
    }

    fn statement(&mut self, line: usize, stmt: &str) -> Res<Option<Entry>> {
        if let Some(rest) = stmt.strip_prefix("assert") {
            let rest = rest.trim_start();
            let (label, body) = match rest.strip_prefix('[') {
                Some(r) => match r.split_once(']') {
                    Some((l, b)) => (l.trim().to_string(), b.trim()),
                    None => return syntax("unclosed `[` in assert label"),
                },
                None => (String::from("check"), rest),
            };
            let Some((cmd, expected)) = split_check(body) else {
                return syntax("assert needs `command == expected`");
            };
            let actual = self.command(&cmd)?.render()?;
            let pass = actual == expected;
            return Ok(Some(Entry::Check { line, label, statement: cmd, expected, actual, pass }));
        }
        let head = stmt.split_whitespace().next().unwrap_or("");
        match head {
            "ring" => {
                self.ring_stmt(stmt[4..].trim())?;
                return Ok(None);
            }
            "use" => {
                let name = stmt[3..].trim();
                if !self.rings.contains_key(name) {
                    return syntax(format!("unknown ring `{name}`"));
                }
                self.current = Some(name.to_string());
                return Ok(None);
            }
            "table" => {
                self.table_stmt(stmt[5..].trim())?;
                return Ok(None);
            }
            "ext" => {
                let v = self.ext_value(stmt[3..].trim())?;
                self.bindings.insert("ext".into(), v);
                return Ok(None);
            }
            _ => {}
        }
        if let Some((name, rhs)) = split_binding(stmt) {
            if COMMANDS.contains(&name) || ["ring", "use", "table", "ext", "assert"].contains(&name) {
                return syntax(format!("`{name}` is reserved"));
            }
            let v = self.rhs_value(rhs)?;
            if let Value::Text(_) = v {
                return syntax("this command does not produce a value that can be bound");
            }
            self.bindings.insert(name.to_string(), v);
            return Ok(None);
        }
        let text = self.command(stmt)?.render()?;
        Ok(Some(Entry::Output { line, statement: stmt.to_string(), text }))
    }

    fn declare_ring(&mut self, name: &str, ring: Arc<PolyRing>) {
        self.rings.insert(name.to_string(), ring);
        self.current = Some(name.to_string());
    }

    fn ring_stmt(&mut self, rest: &str) -> Res<()> {
        let mut a = Args::parse(rest)?;
        let name = match a.pos.first() {
            Some(n) if is_ident(n) => n.clone(),
            Some(n) => return syntax(format!("bad ring name `{n}`")),
            None => "R".to_string(),
        };
        let p: u64 = match a.take_opt("p") {
            Some(v) => v.parse().or_else(|_| syntax(format!("bad characteristic `{v}`")))?,
            None => return syntax("missing `p=`"),
        };
        let vars = match a.take_opt("vars") {
            Some(v) => v,
            None => return syntax("missing `vars=`"),
        };
        let names: Vec<&str> = vars.split(',').map(str::trim).collect();
        if let Some(bad) = names.iter().find(|n| !is_ident(n)) {
            return syntax(format!("bad variable name `{bad}`"));
        }
        let order = match a.take_opt("order") {
            Some(o) => MonomialOrder::parse(&o)?,
            None => self.options.order,
        };
        a.finish(1)?;
        let ring = PolyRing::new(p, &names, order)?;
        self.declare_ring(&name, ring);
        Ok(())
    }

    fn ring(&self) -> Res<Arc<PolyRing>> {
        match &self.current {
            Some(n) => Ok(self.rings[n].clone()),
            None => syntax("no ring declared"),
        }
    }

    fn named_ring(&self, name: &str) -> Res<Arc<PolyRing>> {
        match self.rings.get(name) {
            Some(r) => Ok(r.clone()),
            None => syntax(format!("unknown ring `{name}`")),
        }
    }

    fn table_for(&self, ring: &Arc<PolyRing>) -> Arc<PrimeTable> {
        self.tables.iter().find(|t| t.ring().as_ref() == ring.as_ref()).cloned().unwrap_or_else(|| PrimeTable::empty(ring))
    }

    /// Keeps the longest table seen per ring; divisor tables only grow by appending.
    fn note_table(&mut self, table: &Arc<PrimeTable>) {
        match self.tables.iter_mut().find(|t| t.ring().as_ref() == table.ring().as_ref()) {
            Some(t) if t.len() < table.len() => *t = table.clone(),
            Some(_) => {}
            None => self.tables.push(table.clone()),
        }
    }

    fn table_stmt(&mut self, rest: &str) -> Res<()> {
        let ring = self.ring()?;
        let primes = split_top(rest, ',').iter().map(|s| self.poly_in(&ring, s)).collect::<Res<Vec<_>>>()?;
        let t = self.table_for(&ring).extended(primes)?;
        self.note_table(&t);
        Ok(())
    }

    fn lookup(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name.trim())
    }

    fn poly_in(&self, ring: &Arc<PolyRing>, text: &str) -> Res<Poly> {
        let text = text.trim();
        if let Some(Value::Poly(p)) = self.lookup(text) {
            if p.ring().as_ref() == ring.as_ref() {
                return Ok(p.clone());
            }
        }
        let resolve = |n: &str| match self.bindings.get(n) {
            Some(Value::Poly(p)) if p.ring().as_ref() == ring.as_ref() => Some(p.clone()),
            _ => None,
        };
        Ok(parse_poly_with(ring, text, &resolve)?)
    }

    fn ideal_in(&self, ring: &Arc<PolyRing>, text: &str) -> Res<Ideal> {
        let text = text.trim();
        if let Some(Value::Ideal(i)) = self.lookup(text) {
            if i.ring().as_ref() != ring.as_ref() {
                return Err(Fail::Lib(Error::RingMismatch));
            }
            return Ok(i.clone());
        }
        if let Some(inner) = text.strip_prefix("ideal(").and_then(|r| r.strip_suffix(')')) {
            let gens = if inner.trim().is_empty() {
                Vec::new()
            } else {
                split_top(inner, ',').iter().map(|g| self.poly_in(ring, g)).collect::<Res<Vec<_>>>()?
            };
            return Ok(Ideal::new(ring, gens)?);
        }
        Ok(Ideal::principal(&self.poly_in(ring, text)?))
    }

    /// An ideal argument in whichever ring it names, defaulting to the current ring.
    fn ideal_arg(&self, text: &str) -> Res<Ideal> {
        if let Some(Value::Ideal(i)) = self.lookup(text) {
            return Ok(i.clone());
        }
        self.ideal_in(&self.ring()?, text)
    }

    fn divisor_in(&mut self, ring: &Arc<PolyRing>, text: &str) -> Res<QDivisor> {
        let text = text.trim();
        let table = self.table_for(ring);
        if let Some(Value::Divisor(d)) = self.lookup(text) {
            if d.table().ring().as_ref() != ring.as_ref() {
                return Err(Fail::Lib(Error::RingMismatch));
            }
            return Ok(d.clone());
        }
        let resolve = |n: &str| match self.bindings.get(n) {
            Some(Value::Poly(p)) if p.ring().as_ref() == ring.as_ref() => Some(p.clone()),
            _ => None,
        };
        let d = parse_divisor_with(text, &table, &resolve)?;
        self.note_table(d.table());
        Ok(d)
    }

    fn divisor_arg(&mut self, text: &str) -> Res<QDivisor> {
        if let Some(Value::Divisor(d)) = self.lookup(text) {
            return Ok(d.clone());
        }
        let ring = self.ring()?;
        self.divisor_in(&ring, text)
    }

    fn key_arg(&self, text: &str) -> Res<PMapKey> {
        match self.lookup(text) {
            Some(Value::Key(k)) => Ok(k.clone()),
            Some(v) => syntax(format!("`{}` is a {}, not a map key", text.trim(), v.kind())),
            None => syntax(format!("unknown map key `{}`", text.trim())),
        }
    }

    fn ext_arg(&self, text: &str) -> Res<Arc<ExtensionPres>> {
        match self.lookup(text) {
            Some(Value::Ext(e)) => Ok(e.clone()),
            Some(v) => syntax(format!("`{}` is a {}, not an extension", text.trim(), v.kind())),
            None => syntax(format!("unknown extension `{}`", text.trim())),
        }
    }

    fn trace_arg(&self, ext_name: &str, m: &Monogenic, via: Option<String>) -> Res<TraceLike> {
        match via {
            None => Ok(TraceLike::trace(m)?),
            Some(name) => match self.lookup(&name) {
                Some(Value::Trace(t)) if t.ext == ext_name => Ok(t.map.clone()),
                Some(Value::Trace(t)) => syntax(format!("`{name}` belongs to extension `{}`", t.ext)),
                _ => syntax(format!("unknown trace-like map `{name}`")),
            },
        }
    }

    /// The ring holding elements of the total space of a monogenic extension.
    fn total_ring(m: &Monogenic) -> Arc<PolyRing> {
        m.total().cloned().unwrap_or_else(|_| m.gring().clone())
    }

    fn rhs_value(&mut self, rhs: &str) -> Res<Value> {
        let head = rhs.split_whitespace().next().unwrap_or("");
        let rest = rhs[head.len()..].trim();
        match head {
            "divisor" => Ok(Value::Divisor(self.divisor_arg(rest)?)),
            "key" => {
                let mut a = Args::parse(rest)?;
                let e = a.take_u32("e", Some(1))?;
                let ring = match a.take_opt("in") {
                    Some(r) => self.named_ring(&r)?,
                    None => self.ring()?,
                };
                a.finish(1)?;
                let u = self.poly_in(&ring, a.positional(0, "key polynomial")?)?;
                Ok(Value::Key(PMapKey::new(u, e)?))
            }
            "ext" => self.ext_value(rest),
            "tracelike" => self.tracelike_value(rest),
            _ if rhs.starts_with("ideal(") => Ok(Value::Ideal(self.ideal_in(&self.ring()?, rhs)?)),
            _ if COMMANDS.contains(&head) => self.command(rhs),
            _ => {
                if let Some(v) = self.lookup(rhs) {
                    return Ok(v.clone());
                }
                Ok(Value::Poly(self.poly_in(&self.ring()?, rhs)?))
            }
        }
    }

    fn ext_value(&mut self, rest: &str) -> Res<Value> {
        let mut a = Args::parse(rest)?;
        let kind = a.positional(0, "extension kind (`monogenic` or `presented`)")?.to_string();
        match kind.as_str() {
            "monogenic" => {
                let base = self.named_ring(&a.take_opt("base").map_or_else(|| syntax("missing `base=`"), Ok)?)?;
                let g = a.take_opt("g").map_or_else(|| syntax("missing `g=`"), Ok)?;
                let tvar = a.take_opt("var").unwrap_or_else(|| "T".to_string());
                let total = a.take_opt("total");
                let mut images: BTreeMap<String, String> = BTreeMap::new();
                let mut rest_pos = a.pos[1..].iter();
                match rest_pos.next().map(String::as_str) {
                    None => {}
                    Some("map") => {
                        for m in rest_pos {
                            let Some((from, to)) = m.split_once("->") else {
                                return syntax(format!("expected `var->image`, got `{m}`"));
                            };
                            images.insert(from.trim().to_string(), to.trim().to_string());
                        }
                    }
                    Some(other) => return syntax(format!("unexpected `{other}`")),
                }
                a.finish(usize::MAX)?;
                let mut m = Monogenic::new(&base, &tvar, &g)?;
                if let Some(total) = total {
                    let total = self.named_ring(&total)?;
                    let t_img = match images.remove(&tvar) {
                        Some(s) => self.poly_in(&total, &s)?,
                        None => return syntax(format!("map must send `{tvar}` somewhere")),
                    };
                    let mut base_imgs = Vec::new();
                    for v in base.vars() {
                        match images.remove(v) {
                            Some(s) => base_imgs.push(self.poly_in(&total, &s)?),
                            None => return syntax(format!("map must send `{v}` somewhere")),
                        }
                    }
                    if let Some(extra) = images.keys().next() {
                        return syntax(format!("`{extra}` is not a variable of the base ring or `{tvar}`"));
                    }
                    m = m.with_identification(&total, t_img, base_imgs)?;
                } else if !images.is_empty() {
                    return syntax("`map` needs `total=`");
                }
                Ok(Value::Ext(Arc::new(ExtensionPres::Monogenic(m))))
            }
            "presented" => {
                let amb = self.named_ring(&a.take_opt("ambient").map_or_else(|| syntax("missing `ambient=`"), Ok)?)?;
                let rel = a.take_opt("relations").map_or_else(|| syntax("missing `relations=`"), Ok)?;
                let basis = a.take_opt("basis").map_or_else(|| syntax("missing `basis=`"), Ok)?;
                let bv = a.take_opt("basevars").map_or_else(|| syntax("missing `basevars=`"), Ok)?;
                a.finish(1)?;
                let rel = self.ideal_in(&amb, &rel)?;
                let basis = split_top(&basis, ',').iter().map(|b| self.poly_in(&amb, b)).collect::<Res<Vec<_>>>()?;
                let bv: Vec<&str> = bv.split(',').map(str::trim).collect();
                let p = Presented::new(&amb, &rel, &basis, &bv)?;
                Ok(Value::Ext(Arc::new(ExtensionPres::Presented(p))))
            }
            other => syntax(format!("unknown extension kind `{other}`")),
        }
    }

    fn tracelike_value(&mut self, rest: &str) -> Res<Value> {
        let mut a = Args::parse(rest)?;
        let name = a.positional(0, "extension")?.to_string();
        let ext = self.ext_arg(&name)?;
        let m = ext.monogenic()?;
        let values = a.take_opt("values");
        let key = a.take_opt("key");
        a.finish(1)?;
        let map = match (values, key) {
            (None, None) => TraceLike::trace(m)?,
            (Some(v), None) => {
                let vals = split_top(&v, ',').iter().map(|s| self.poly_in(m.base(), s)).collect::<Res<Vec<_>>>()?;
                TraceLike::from_values(m, &vals)?
            }
            (None, Some(k)) => TraceLike::from_key(m, self.poly_in(&Self::total_ring(m), &k)?)?,
            (Some(_), Some(_)) => return syntax("give either `values=` or `key=`"),
        };
        Ok(Value::Trace(Arc::new(TraceBinding { ext: name, map })))
    }

    fn triple_opts(&mut self, a: &mut Args, delta: QDivisor) -> Res<Triple> {
        let ring = delta.table().ring().clone();
        let ideal = match a.take_opt("ideal") {
            Some(s) => self.ideal_in(&ring, &s)?,
            None => Ideal::unit(&ring),
        };
        let t = match a.take_opt("t") {
            Some(s) => parse_ratio(&s)?,
            None if ideal.is_unit()? => Rational64::zero(),
            None => Rational64::from_integer(1),
        };
        Ok(Triple::new(Ambient::Regular(ring), delta, ideal, t)?)
    }

    fn optional_divisor(&mut self, a: &Args, i: usize, ring: &Arc<PolyRing>) -> Res<QDivisor> {
        match a.pos.get(i) {
            Some(s) => {
                let s = s.clone();
                self.divisor_in(ring, &s)
            }
            None => Ok(QDivisor::zero(&self.table_for(ring))),
        }
    }

    fn command(&mut self, stmt: &str) -> Res<Value> {
        let head = stmt.split_whitespace().next().unwrap_or("");
        let rest = stmt[head.len()..].trim();
        let max_e = self.options.max_e;
        let mut a = Args::parse(rest)?;
        let v = match head {
            "print" => {
                a.finish(1)?;
                let s = a.positional(0, "value")?;
                match self.lookup(s) {
                    Some(v) => v.clone(),
                    None => self.rhs_value(s)?,
                }
            }
            "gb" => {
                a.finish(1)?;
                Value::Ideal(self.ideal_arg(a.positional(0, "ideal")?)?)
            }
            "nf" | "member" => {
                a.finish(2)?;
                let i = self.ideal_arg(a.positional(1, "ideal")?)?;
                let f = self.poly_in(&i.ring().clone(), a.positional(0, "polynomial")?)?;
                if head == "nf" {
                    Value::Poly(i.normal_form(&f)?)
                } else {
                    Value::Text(yes(i.contains(&f)?).into())
                }
            }
            "subset" | "equal" | "sum" | "product" | "intersect" | "colon" => {
                a.finish(2)?;
                let i = self.ideal_arg(a.positional(0, "ideal")?)?;
                let j = self.ideal_in(&i.ring().clone(), a.positional(1, "ideal")?)?;
                match head {
                    "subset" => Value::Text(yes(j.contains_ideal(&i)?).into()),
                    "equal" => Value::Text(yes(i.equals(&j)?).into()),
                    "sum" => Value::Ideal(i.sum(&j)?),
                    "product" => Value::Ideal(i.product(&j)?),
                    "intersect" => Value::Ideal(i.intersect(&j)?),
                    _ => Value::Ideal(i.colon_ideal(&j)?),
                }
            }
            "power" => {
                let n = a.take_u32("n", None)?;
                a.finish(1)?;
                Value::Ideal(self.ideal_arg(a.positional(0, "ideal")?)?.power(n as u64)?)
            }
            "bracket" => {
                let e = a.take_u32("e", Some(1))?;
                a.finish(1)?;
                Value::Ideal(self.ideal_arg(a.positional(0, "ideal")?)?.bracket_power(e)?)
            }
            "eliminate" => {
                let vars = a.take_opt("vars").map_or_else(|| syntax("missing `vars=`"), Ok)?;
                a.finish(1)?;
                let i = self.ideal_arg(a.positional(0, "ideal")?)?;
                let ring = i.ring().clone();
                let mut idx = Vec::new();
                for v in vars.split(',').map(str::trim) {
                    match ring.var_index(v) {
                        Some(k) => idx.push(k),
                        None => return syntax(format!("unknown variable `{v}`")),
                    }
                }
                Value::Ideal(Ideal::new(&ring, i.eliminate(&idx)?)?)
            }
            "frobroot" => {
                let e = a.take_u32("e", Some(1))?;
                a.finish(1)?;
                Value::Ideal(frob_root(&self.ideal_arg(a.positional(0, "ideal")?)?, e)?)
            }
            "cartier" => {
                let e = a.take_u32("e", Some(1))?;
                a.finish(2)?;
                let i = self.ideal_arg(a.positional(1, "ideal")?)?;
                let u = self.poly_in(&i.ring().clone(), a.positional(0, "key polynomial")?)?;
                Value::Ideal(cartier_apply(&u, e, &i)?)
            }
            "decompose" => {
                let e = a.take_u32("e", Some(1))?;
                a.finish(1)?;
                let f = self.poly_in(&self.ring()?, a.positional(0, "polynomial")?)?;
                let q = f.field().q(e)?;
                let parts: Vec<String> =
                    decompose_q(&f, q).iter().map(|(b, part)| format!("{}: {}", f.ring().monomial(b.clone(), 1), part)).collect();
                Value::Text(if parts.is_empty() { "0".into() } else { parts.join("; ") })
            }
            "fedder" => {
                let at = a.take_opt("at");
                a.finish(1)?;
                let h = self.poly_in(&self.ring()?, a.positional(0, "polynomial")?)?;
                let m = match at {
                    Some(s) => self.ideal_in(h.ring(), &s)?,
                    None => Ideal::coordinate_maximal(h.ring()),
                };
                Value::Text(format!("F-pure: {}", yes(fedder_test(&h, &m)?)))
            }
            "factor" => {
                a.finish(1)?;
                let f = self.poly_in(&self.ring()?, a.positional(0, "polynomial")?)?;
                let parts: Vec<String> = univariate_factor(&f)?
                    .iter()
                    .map(|(g, m)| if *m == 1 { format!("({g})") } else { format!("({g})^{m}") })
                    .collect();
                Value::Text(if parts.is_empty() { "1".into() } else { parts.join("·") })
            }
            "irreducible" => {
                a.finish(1)?;
                let f = self.poly_in(&self.ring()?, a.positional(0, "polynomial")?)?;
                Value::Text(yes(is_irreducible(&f)?).into())
            }
            "div" => {
                a.finish(1)?;
                let ring = self.ring()?;
                let f = self.poly_in(&ring, a.positional(0, "polynomial")?)?;
                let d = divisor_of(&f, &self.table_for(&ring))?;
                self.note_table(d.table());
                Value::Divisor(d)
            }
            "ceil" | "floor" => {
                a.finish(1)?;
                let d = self.divisor_arg(a.positional(0, "divisor")?)?;
                Value::Divisor(if head == "ceil" { d.ceil() } else { d.floor() })
            }
            "effective" => {
                a.finish(1)?;
                Value::Text(yes(self.divisor_arg(a.positional(0, "divisor")?)?.is_effective()).into())
            }
            "cmp" | "dadd" | "dsub" => {
                a.finish(2)?;
                let d1 = self.divisor_arg(a.positional(0, "divisor")?)?;
                let ring = d1.table().ring().clone();
                let d2 = self.divisor_in(&ring, a.positional(1, "divisor")?)?;
                let out = match head {
                    "cmp" => Value::Text(d1.compare(&d2)?.to_string()),
                    "dadd" => Value::Divisor(d1.add(&d2)?),
                    _ => Value::Divisor(d1.sub(&d2)?),
                };
                if let Value::Divisor(d) = &out {
                    self.note_table(d.table());
                }
                out
            }
            "dscale" => {
                a.finish(2)?;
                let d = self.divisor_arg(a.positional(0, "divisor")?)?;
                Value::Divisor(d.scale(parse_ratio(a.positional(1, "factor")?)?))
            }
            "apply" => {
                a.finish(2)?;
                let k = self.key_arg(a.positional(0, "map key")?)?;
                let g = self.poly_in(&k.ring().clone(), a.positional(1, "polynomial")?)?;
                Value::Poly(k.apply(&g))
            }
            "delta" => {
                a.finish(1)?;
                let k = self.key_arg(a.positional(0, "map key")?)?;
                let d = delta_of_key(&k, &self.table_for(k.ring()))?;
                self.note_table(d.table());
                Value::Divisor(d)
            }
            "keyof" => {
                let e = a.take_u32("e", Some(1))?;
                a.finish(1)?;
                Value::Key(key_of_delta(&self.divisor_arg(a.positional(0, "divisor")?)?, e)?)
            }
            "iterate" => {
                let n = a.take_u32("n", None)?;
                a.finish(1)?;
                Value::Key(iterate_map(&self.key_arg(a.positional(0, "map key")?)?, n)?)
            }
            "trace" | "norm" => {
                a.finish(2)?;
                let ext = self.ext_arg(a.positional(0, "extension")?)?;
                let src = a.positional(1, "element")?;
                match ext.as_ref() {
                    ExtensionPres::Monogenic(m) => {
                        let f = self.poly_in(&Self::total_ring(m), src)?;
                        let identified = m.identification().is_some();
                        Value::Poly(match (head, identified) {
                            ("trace", true) => m.trace_total(&f)?,
                            ("trace", false) => m.trace(&f)?,
                            (_, true) => m.norm_total(&f)?,
                            _ => m.norm(&f)?,
                        })
                    }
                    ExtensionPres::Presented(p) if head == "trace" => Value::Poly(p.trace(&self.poly_in(p.ambient(), src)?)?),
                    ExtensionPres::Presented(_) => return Err(Fail::Lib(Error::NonMonogenic)),
                }
            }
            "tracekey" => {
                a.finish(1)?;
                let ext = self.ext_arg(a.positional(0, "extension")?)?;
                let m = ext.monogenic()?;
                Value::Poly(if m.identification().is_some() { m.trace_key_total()? } else { m.trace_key()? })
            }
            "comparison" => {
                let e = a.take_u32("e", Some(1))?;
                a.finish(1)?;
                let ext = self.ext_arg(a.positional(0, "extension")?)?;
                let m = ext.monogenic()?;
                Value::Poly(comparison_element(m, m.base().field().q(e)?)?)
            }
            "ram" => {
                a.finish(1)?;
                let ext = self.ext_arg(a.positional(0, "extension")?)?;
                let m = ext.monogenic()?;
                let d = m.ramification_divisor(&self.table_for(&Self::total_ring(m)))?;
                self.note_table(d.table());
                Value::Divisor(d)
            }
            "tame" => {
                a.finish(1)?;
                let ext = self.ext_arg(a.positional(0, "extension")?)?;
                let m = ext.monogenic()?;
                let entries = m.tame_report(&self.table_for(m.base()))?;
                let parts: Vec<String> = entries
                    .iter()
                    .map(|r| format!("[{}] over [{}]: index {}, {}", r.total_prime, r.base_prime, r.index, r.kind))
                    .collect();
                Value::Text(if parts.is_empty() { "unramified".into() } else { parts.join("; ") })
            }
            "pullback" => {
                a.finish(2)?;
                let ext = self.ext_arg(a.positional(0, "extension")?)?;
                let m = ext.monogenic()?;
                let d = self.divisor_in(&m.base().clone(), a.positional(1, "divisor")?)?;
                let total = m.total()?.clone();
                let out = match m.identification() {
                    Some(id) => pullback_along(id.base_map(), &d, &self.table_for(&total))?,
                    None => return Err(Fail::Lib(Error::Precondition("pullback needs an identified total ring".into()))),
                };
                self.note_table(out.table());
                Value::Divisor(out)
            }
            "traceimage" => {
                a.finish(1)?;
                let ext = self.ext_arg(a.positional(0, "extension")?)?;
                let TraceImage { ideal, conclusive } = ext.trace_image()?;
                let s = ideal.canonical_string()?;
                Value::Text(if conclusive { s } else { format!("{s} (degree sweep, inconclusive)") })
            }
            "surjective" => {
                a.finish(1)?;
                let ext = self.ext_arg(a.positional(0, "extension")?)?;
                Value::Text(yes(ext.is_trace_surjective()?).into())
            }
            "transpose" | "transposes" | "deltabar" => {
                let via = a.take_opt("via");
                a.finish(2)?;
                let ext_name = a.positional(0, "extension")?.to_string();
                let ext = self.ext_arg(&ext_name)?;
                let m = ext.monogenic()?;
                let phi = self.key_arg(a.positional(1, "map key")?)?;
                let tr = self.trace_arg(&ext_name, m, via)?;
                let res = transpose_key(m, &phi, &tr, &self.table_for(m.total()?))?;
                self.note_table(res.delta.table());
                match head {
                    "transposes" => Value::Text(yes(res.exists).into()),
                    "deltabar" => Value::Divisor(res.delta),
                    _ => match res.key(phi.e())? {
                        Some(k) => Value::Key(k),
                        None => Value::Text(format!("no transpose: key would be ({})/({})", res.key_numer, res.key_denom)),
                    },
                }
            }
            "commute" => {
                let via = a.take_opt("via");
                a.finish(3)?;
                let ext_name = a.positional(0, "extension")?.to_string();
                let ext = self.ext_arg(&ext_name)?;
                let m = ext.monogenic()?;
                let phi = self.key_arg(a.positional(1, "base map key")?)?;
                let phibar = self.key_arg(a.positional(2, "total map key")?)?;
                let tr = self.trace_arg(&ext_name, m, via)?;
                let rep = commute_check(m, &phi, &phibar, &tr)?;
                Value::Text(match rep.witness {
                    None => "commutes: true".into(),
                    Some((z, l, r)) => format!("commutes: false (at {z}: {l} vs {r})"),
                })
            }
            "tau" => {
                if let Some(h) = a.take_opt("hyp") {
                    let c = a.take_opt("c");
                    a.finish(0)?;
                    let ring = self.ring()?;
                    let h = self.poly_in(&ring, &h)?;
                    let c = c.map(|c| self.poly_in(&ring, &c)).transpose()?;
                    Value::Ideal(tau_hypersurface(&h, c.as_ref())?)
                } else {
                    let ring = self.ring()?;
                    let d = self.optional_divisor(&a, 0, &ring)?;
                    let tr = self.triple_opts(&mut a, d)?;
                    a.finish(1)?;
                    if tr.delta().is_effective() {
                        let r = tau(&tr, max_e)?;
                        if r.exact {
                            Value::Ideal(r.ideal)
                        } else {
                            Value::Text(format!("{} (stable at e = {})", r.ideal.canonical_string()?, r.level))
                        }
                    } else {
                        Value::Fractional(tau_fractional(&tr, max_e)?)
                    }
                }
            }
            "sfr" => {
                if let Some(h) = a.take_opt("hyp") {
                    a.finish(0)?;
                    let h = self.poly_in(&self.ring()?, &h)?;
                    Value::Text(format!("strongly F-regular: {}", yes(tau_hypersurface(&h, None)?.is_unit()?)))
                } else {
                    let ring = self.ring()?;
                    let d = self.optional_divisor(&a, 0, &ring)?;
                    let tr = self.triple_opts(&mut a, d)?;
                    a.finish(1)?;
                    Value::Text(format!("strongly F-regular: {}", yes(is_strongly_f_regular(&tr, max_e)?)))
                }
            }
            "sfp" => {
                let cap = a.take_u32("ecap", Some(max_e))?;
                let ring = self.ring()?;
                let d = self.optional_divisor(&a, 0, &ring)?;
                let tr = self.triple_opts(&mut a, d)?;
                a.finish(1)?;
                Value::Text(format!("sharply F-pure at the origin: {}", is_sharply_f_pure(&tr, cap)?))
            }
            "nu" => {
                let e = a.take_u32("e", Some(1))?;
                a.finish(1)?;
                let f = self.poly_in(&self.ring()?, a.positional(0, "polynomial")?)?;
                Value::Text(fpt_nu(&f, e)?.to_string())
            }
            "fpt" => {
                let e = a.take_u32("e", Some(max_e))?;
                a.finish(1)?;
                let f = self.poly_in(&self.ring()?, a.positional(0, "polynomial")?)?;
                let est = fpt_estimate(&f, e)?;
                Value::Text(format!("({}, {}]", est.lower, est.upper))
            }
            "skoda" => {
                let ring = self.ring()?;
                let d = self.divisor_in(&ring, a.positional(0, "divisor")?)?;
                let f = self.poly_in(&ring, a.positional(1, "polynomial")?)?;
                let tr = self.triple_opts(&mut a, d)?;
                a.finish(2)?;
                let rep = skoda_check(&tr, &f, max_e)?;
                Value::Text(format!(
                    "pass: {}; shifted: {}; scaled: {}",
                    yes(rep.pass),
                    render_fractional(&rep.shifted)?,
                    render_fractional(&rep.scaled)?
                ))
            }
            "transform" | "intersection" | "containment" => {
                let via = a.take_opt("via");
                let ext_name = a.positional(0, "extension")?.to_string();
                let ext = self.ext_arg(&ext_name)?;
                let m = ext.monogenic()?;
                let d = self.optional_divisor(&a, 1, &m.base().clone())?;
                let tr3 = self.triple_opts(&mut a, d.clone())?;
                a.finish(2)?;
                let total_table = self.table_for(m.total()?);
                match head {
                    "transform" => {
                        let tr = self.trace_arg(&ext_name, m, via)?;
                        let rep = verify_transformation(m, &tr, &d, tr3.a(), tr3.t(), &total_table, max_e)?;
                        Value::Text(format!(
                            "pass: {}; lhs: {}; rhs: {}; Δ_Y: {}",
                            yes(rep.pass),
                            render_fractional(&rep.lhs)?,
                            render_fractional(&rep.rhs)?,
                            rep.delta_y
                        ))
                    }
                    "intersection" => {
                        if via.is_some() {
                            return syntax("`intersection` always uses the trace");
                        }
                        let rep = verify_intersection(m, &d, tr3.a(), tr3.t(), &total_table, max_e)?;
                        Value::Text(format!(
                            "pass: {}; lhs: {}; rhs: {}; Δ_Y: {}",
                            yes(rep.pass),
                            render_fractional(&rep.lhs)?,
                            render_fractional(&rep.rhs)?,
                            rep.delta_y
                        ))
                    }
                    _ => {
                        if via.is_some() {
                            return syntax("`containment` always uses the trace");
                        }
                        let rep = verify_containment_extension(m, &d, tr3.a(), tr3.t(), &total_table, max_e)?;
                        Value::Text(format!(
                            "contained: {}; strict: {}; extended: {}; τ_Y: {}",
                            yes(rep.contained),
                            yes(rep.strict),
                            rep.extended.canonical_string()?,
                            rep.tau_y.canonical_string()?
                        ))
                    }
                }
            }
            "certificate" => {
                a.finish(2)?;
                let ext = self.ext_arg(a.positional(0, "extension")?)?;
                let base = ext.base_ring().clone();
                let d = self.optional_divisor(&a, 1, &base)?;
                let c = surjectivity_certificate(&ext, &d, max_e)?;
                let opt = |b: Option<bool>| b.map_or("unknown", yes);
                Value::Text(format!(
                    "certified: {}; boundary effective: {}; strongly F-regular: {}; trace surjective: {}",
                    yes(c.certified),
                    opt(c.boundary_effective),
                    yes(c.strongly_f_regular),
                    opt(c.direct_surjective)
                ))
            }
            "" => return syntax("empty command"),
            other => return syntax(format!("unknown command `{other}`")),
        };
        Ok(v)
    }
}

/// Runs `script` in a fresh session.
pub fn run_session(script: &str, options: &Options) -> Transcript {
    Session::new(options.clone()).run(script)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &str) -> Transcript {
        run_session(s, &Options::default())
    }

    fn out(s: &str) -> String {
        let t = run(s);
        assert!(t.error.is_none(), "{:?}", t.error);
        t.render_text()
    }

    #[test]
    fn word_merging() {
        assert_eq!(words("x + y  z"), vec!["x + y", "z"]);
        assert_eq!(words("ideal(x, y) e=2"), vec!["ideal(x, y)", "e=2"]);
        assert_eq!(words("map T->x t->x^2 + x^5"), vec!["map", "T->x", "t->x^2 + x^5"]);
        assert_eq!(words("2[x] - 1/2[y]"), vec!["2[x] - 1/2[y]"]);
    }

    #[test]
    fn small_sessions() {
        assert_eq!(out("ring p=2 vars=x,y,z; h = z^2+x*y*z+x*y^2+x^2*y; fedder h"), "F-pure: true\n");
        assert_eq!(out("ring p=2 vars=x; frobroot ideal(x^2) e=1"), "⟨x⟩\n");
        assert_eq!(out(""), "");
        assert_eq!(run("").exit_code(), 0);
        assert_eq!(out("ring p=3 vars=x\nf = x^2 + 1  # comment\nprint f^2"), "x^4 + 2*x^2 + 1\n");
    }

    #[test]
    fn exit_codes() {
        let t = run("ring p=2 vars=x\nfrobroot ideal(x^2");
        assert_eq!(t.error.as_ref().map(|e| (e.line, e.kind)), Some((2, ErrorKind::Parse)));
        assert_eq!(t.exit_code(), 2);
        let t = run("ring p=4 vars=x");
        assert_eq!(t.exit_code(), 1);
        let t = run("ring p=2 vars=x\nbogus x");
        assert_eq!(t.exit_code(), 2);
        let t = run("ring p=2 vars=x\nassert[t] frobroot x^2 == ⟨1⟩");
        assert_eq!(t.exit_code(), 1);
        assert_eq!(t.render_text(), "FAIL [t] frobroot x^2: expected `⟨1⟩`, got `⟨x⟩`\n");
        assert_eq!(run("ring p=2 vars=x\nprint y").exit_code(), 2);
    }

    #[test]
    fn extension_commands() {
        let s = "ring X p=3 vars=y\nring Y p=3 vars=x\nE = ext monogenic base=X g=T^2-y total=Y map T->x y->x^2\n\
                 ram E\ntracekey E\ntame E\nuse X\nphi = key y e=1\ntransposes E phi\nchi = key 1\ntransposes E chi";
        assert_eq!(out(s), "1[x]\n2*x\n[x] over [y]: index 2, tame\ntrue\nfalse\n");
    }

    #[test]
    fn json_mirrors_text() {
        let t = run("ring p=2 vars=x\nfrobroot ideal(x^3) e=1\nassert[k] frobroot x == ⟨1⟩");
        let j = t.render_json();
        assert_eq!(j.lines().count(), t.render_text().lines().count());
        assert!(j.contains("\"pass\":true"));
    }

    #[test]
    fn options_declare_a_ring() {
        let o = Options { p: Some(5), vars: Some(vec!["a".into(), "b".into()]), ..Options::default() };
        let t = run_session("gb ideal(a^2, a*b)", &o);
        assert_eq!(t.render_text(), "⟨a*b, a^2⟩\n");
    }
}
