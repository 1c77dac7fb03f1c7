//! Q-divisors over a declared table of prime polynomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};
use crate::unipoly::{is_irreducible, univariate_factor};

/// An ordered list of monic prime polynomials of one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    ring: Arc<PolyRing>,
    primes: Vec<Poly>,
    /// True when irreducibility was checked (univariate); false when user-asserted.
    verified: Vec<bool>,
}

impl PrimeTable {
    pub fn empty(ring: &Arc<PolyRing>) -> Arc<PrimeTable> {
        Arc::new(PrimeTable { ring: ring.clone(), primes: Vec::new(), verified: Vec::new() })
    }

    /// Builds a table; univariate entries must be irreducible, others are taken on trust.
    pub fn new(ring: &Arc<PolyRing>, primes: impl IntoIterator<Item = Poly>) -> Result<Arc<PrimeTable>> {
        let mut t = PrimeTable { ring: ring.clone(), primes: Vec::new(), verified: Vec::new() };
        for p in primes {
            t.push(p)?;
        }
        Ok(Arc::new(t))
    }

    fn push(&mut self, p: Poly) -> Result<usize> {
        if p.ring().as_ref() != self.ring.as_ref() {
            return Err(Error::RingMismatch);
        }
        if p.is_zero() || p.is_constant() {
            return Err(Error::NotIrreducible(format!("{p} is not a prime element")));
        }
        let p = p.monic();
        if let Some(i) = self.index_of(&p) {
            return Ok(i);
        }
        let verified = match p.univariate_var() {
            Ok(Some(_)) => {
                if !is_irreducible(&p)? {
                    return Err(Error::NotIrreducible(format!("{p} is reducible")));
                }
                true
            }
            _ => false,
        };
        self.primes.push(p);
        self.verified.push(verified);
        Ok(self.primes.len() - 1)
    }

    /// A table extended by further primes; existing indices are preserved.
    pub fn extended(&self, extra: impl IntoIterator<Item = Poly>) -> Result<Arc<PrimeTable>> {
        let mut t = self.clone();
        for p in extra {
            t.push(p)?;
        }
        Ok(Arc::new(t))
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn primes(&self) -> &[Poly] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn is_verified(&self, i: usize) -> bool {
        self.verified[i]
    }

    pub fn index_of(&self, p: &Poly) -> Option<usize> {
        let m = p.monic();
        self.primes.iter().position(|q| *q == m)
    }

    fn is_prefix_of(&self, other: &PrimeTable) -> bool {
        self.ring == other.ring && self.primes.len() <= other.primes.len() && other.primes[..self.primes.len()] == self.primes[..]
    }
}

/// Componentwise comparison outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivCmp {
    Equal,
    Geq,
    Leq,
    Incomparable,
}

impl fmt::Display for DivCmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DivCmp::Equal => "equal",
            DivCmp::Geq => "geq",
            DivCmp::Leq => "leq",
            DivCmp::Incomparable => "incomparable",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Ceil,
    Floor,
}

/// A formal sum `Σ a_i [P_i]` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QDivisor {
    table: Arc<PrimeTable>,
    coeffs: BTreeMap<usize, Rational64>,
}

impl QDivisor {
    pub fn zero(table: &Arc<PrimeTable>) -> QDivisor {
        QDivisor { table: table.clone(), coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(table: &Arc<PrimeTable>, coeffs: impl IntoIterator<Item = (usize, Rational64)>) -> QDivisor {
        let mut d = QDivisor::zero(table);
        for (i, c) in coeffs {
            assert!(i < table.len(), "prime index out of range");
            d.add_at(i, c);
        }
        d
    }

    /// `c·[P]` for a table prime `P`.
    pub fn prime(table: &Arc<PrimeTable>, p: &Poly, c: Rational64) -> Result<QDivisor> {
        let i = table.index_of(p).ok_or_else(|| Error::UncoveredFactor { residual: p.to_string() })?;
        Ok(QDivisor::from_coeffs(table, [(i, c)]))
    }

    fn add_at(&mut self, i: usize, c: Rational64) {
        let v = self.coeffs.get(&i).copied().unwrap_or_else(Rational64::zero) + c;
        if v.is_zero() {
            self.coeffs.remove(&i);
        } else {
            self.coeffs.insert(i, v);
        }
    }

    pub fn table(&self) -> &Arc<PrimeTable> {
        &self.table
    }

    pub fn coeff(&self, i: usize) -> Rational64 {
        self.coeffs.get(&i).copied().unwrap_or_else(Rational64::zero)
    }

    /// Coefficient at a prime given as a polynomial (zero if absent from the table).
    pub fn coeff_of(&self, p: &Poly) -> Rational64 {
        self.table.index_of(p).map(|i| self.coeff(i)).unwrap_or_else(Rational64::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Poly, Rational64)> + '_ {
        self.coeffs.iter().map(|(i, c)| (&self.table.primes[*i], *c))
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Re-expresses the divisor over a table that extends its own.
    pub fn lift(&self, table: &Arc<PrimeTable>) -> Result<QDivisor> {
        if !self.table.is_prefix_of(table) {
            return Err(Error::TableMismatch);
        }
        Ok(QDivisor { table: table.clone(), coeffs: self.coeffs.clone() })
    }

    /// Brings two divisors to a common table when one table extends the other.
    pub fn align(a: &QDivisor, b: &QDivisor) -> Result<(QDivisor, QDivisor)> {
        if a.table == b.table {
            Ok((a.clone(), b.clone()))
        } else if a.table.is_prefix_of(&b.table) {
            Ok((a.lift(&b.table)?, b.clone()))
        } else if b.table.is_prefix_of(&a.table) {
            Ok((a.clone(), b.lift(&a.table)?))
        } else {
            Err(Error::TableMismatch)
        }
    }

    pub fn add(&self, other: &QDivisor) -> Result<QDivisor> {
        let (mut a, b) = QDivisor::align(self, other)?;
        for (i, c) in b.coeffs {
            a.add_at(i, c);
        }
        Ok(a)
    }

    pub fn sub(&self, other: &QDivisor) -> Result<QDivisor> {
        self.add(&other.scale(-Rational64::one()))
    }

    pub fn scale(&self, k: Rational64) -> QDivisor {
        let mut d = QDivisor::zero(&self.table);
        for (i, c) in &self.coeffs {
            d.add_at(*i, *c * k);
        }
        d
    }

    pub fn round(&self, mode: Rounding) -> QDivisor {
        let mut d = QDivisor::zero(&self.table);
        for (i, c) in &self.coeffs {
            d.add_at(*i, if mode == Rounding::Ceil { c.ceil() } else { c.floor() });
        }
        d
    }

    pub fn ceil(&self) -> QDivisor {
        self.round(Rounding::Ceil)
    }

    pub fn floor(&self) -> QDivisor {
        self.round(Rounding::Floor)
    }

    pub fn compare(&self, other: &QDivisor) -> Result<DivCmp> {
        let (a, b) = QDivisor::align(self, other)?;
        let mut ge = true;
        let mut le = true;
        for i in 0..a.table.len() {
            match a.coeff(i).cmp(&b.coeff(i)) {
                Ordering::Greater => le = false,
                Ordering::Less => ge = false,
                Ordering::Equal => {}
            }
        }
        Ok(match (ge, le) {
            (true, true) => DivCmp::Equal,
            (true, false) => DivCmp::Geq,
            (false, true) => DivCmp::Leq,
            (false, false) => DivCmp::Incomparable,
        })
    }

    /// `self ≥ other` componentwise.
    pub fn geq(&self, other: &QDivisor) -> Result<bool> {
        Ok(matches!(self.compare(other)?, DivCmp::Geq | DivCmp::Equal))
    }

    /// `Π P^{a_P}` for an effective integral divisor.
    pub fn to_poly(&self) -> Result<Poly> {
        let mut acc = self.table.ring.one();
        for (i, c) in &self.coeffs {
            if !c.is_integer() || c.is_negative() {
                return Err(Error::NonIntegral { min_e: None });
            }
            acc = &acc * &self.table.primes[*i].pow(c.to_integer() as u64);
        }
        Ok(acc)
    }

    /// The positive and negative parts `(D⁺, D⁻)` with `D = D⁺ − D⁻`.
    pub fn split_signs(&self) -> (QDivisor, QDivisor) {
        let mut pos = QDivisor::zero(&self.table);
        let mut neg = QDivisor::zero(&self.table);
        for (i, c) in &self.coeffs {
            if c.is_negative() {
                neg.add_at(*i, -*c);
            } else {
                pos.add_at(*i, *c);
            }
        }
        (pos, neg)
    }
}

pub fn divisor_cmp(a: &QDivisor, b: &QDivisor) -> Result<DivCmp> {
    a.compare(b)
}

pub fn is_effective(d: &QDivisor) -> bool {
    d.is_effective()
}

pub fn round(d: &QDivisor, mode: Rounding) -> QDivisor {
    d.round(mode)
}

pub fn fmt_ratio(c: Rational64) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (i, c)) in self.coeffs.iter().enumerate() {
            let prime = &self.table.primes[*i];
            match (k, c.is_negative()) {
                (0, false) => write!(f, "{}[{}]", fmt_ratio(*c), prime)?,
                (0, true) => write!(f, "-{}[{}]", fmt_ratio(-*c), prime)?,
                (_, false) => write!(f, " + {}[{}]", fmt_ratio(*c), prime)?,
                (_, true) => write!(f, " - {}[{}]", fmt_ratio(-*c), prime)?,
            }
        }
        Ok(())
    }
}

/// Order of vanishing of `f` along the prime `p` (by repeated exact division).
pub fn ord(f: &Poly, p: &Poly) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroArgument("polynomial"));
    }
    let mut k = 0;
    let mut rest = f.clone();
    while let Some(q) = rest.exact_div(p)? {
        rest = q;
        k += 1;
    }
    Ok(k)
}

/// `div(f)` over the table. Univariate residual factors extend the table when
/// `auto_extend` is set; otherwise they raise `UncoveredFactor`.
pub fn divisor_of_with(f: &Poly, table: &Arc<PrimeTable>, auto_extend: bool) -> Result<QDivisor> {
    if f.is_zero() {
        return Err(Error::ZeroArgument("polynomial"));
    }
    if f.ring().as_ref() != table.ring.as_ref() {
        return Err(Error::RingMismatch);
    }
    let mut rest = f.clone();
    let mut coeffs = Vec::new();
    for (i, p) in table.primes.iter().enumerate() {
        let mut k = 0i64;
        while let Some(q) = rest.exact_div(p)? {
            rest = q;
            k += 1;
        }
        if k > 0 {
            coeffs.push((i, Rational64::from_integer(k)));
        }
    }
    if rest.is_constant() {
        return Ok(QDivisor::from_coeffs(table, coeffs));
    }
    if auto_extend && rest.univariate_var().is_ok() {
        let factors = univariate_factor(&rest)?;
        let bigger = table.extended(factors.iter().map(|(g, _)| g.clone()))?;
        let mut d = QDivisor::from_coeffs(&bigger, coeffs);
        for (g, m) in factors {
            let i = bigger.index_of(&g).expect("just added");
            d.add_at(i, Rational64::from_integer(m as i64));
        }
        return Ok(d);
    }
    Err(Error::UncoveredFactor { residual: rest.to_string() })
}

/// `div(f)`, auto-extending the table by univariate factors.
pub fn divisor_of(f: &Poly, table: &Arc<PrimeTable>) -> Result<QDivisor> {
    divisor_of_with(f, table, true)
}

fn parse_ratio(s: &str, pos: usize) -> Result<Rational64> {
    let bad = || Error::Syntax { pos, msg: format!("bad coefficient `{s}`") };
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a, b))
        }
        None if s.trim().is_empty() => Ok(Rational64::one()),
        None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Parses `2[x] + 1/2[1+x^3] - [y]`. A bracketed polynomial stands for its divisor,
/// so non-prime entries expand over the table. `resolve` looks up named polynomials.
pub fn parse_divisor_with(
    text: &str,
    table: &Arc<PrimeTable>,
    resolve: &dyn Fn(&str) -> Option<Poly>,
) -> Result<QDivisor> {
    let mut acc = QDivisor::zero(table);
    let chars: Vec<char> = text.chars().collect();
    let trimmed = text.trim();
    if trimmed == "0" || trimmed.is_empty() {
        return Ok(acc);
    }
    let mut i = 0;
    let mut first = true;
    while i < chars.len() {
        while i < chars.len() && chars[i].is_whitespace() {
            i += 1;
        }
        if i == chars.len() {
            break;
        }
        let mut sign = 1i64;
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -1;
            }
            i += 1;
        } else if !first {
            return Err(Error::Syntax { pos: i, msg: "expected `+` or `-` between divisor terms".into() });
        }
        first = false;
        let start = i;
        while i < chars.len() && chars[i] != '[' {
            i += 1;
        }
        if i == chars.len() {
            return Err(Error::Syntax { pos: start, msg: "expected `[prime]`".into() });
        }
        let coef = parse_ratio(&chars[start..i].iter().collect::<String>(), start)? * sign;
        let open = i;
        let mut depth = 0;
        let mut close = None;
        for (k, &c) in chars.iter().enumerate().skip(open) {
            match c {
                '[' => depth += 1,
                ']' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(k);
                        break;
                    }
                }
                _ => {}
            }
        }
        let close = close.ok_or(Error::Syntax { pos: open, msg: "unclosed `[`".into() })?;
        let body: String = chars[open + 1..close].iter().collect();
        let poly = crate::parse::parse_poly_with(&table.ring, &body, resolve).map_err(|e| match e {
            Error::Syntax { pos, msg } => Error::Syntax { pos: pos + open + 1, msg },
            Error::UnknownVariable { name, pos } => Error::UnknownVariable { name, pos: pos + open + 1 },
            other => other,
        })?;
        let d = divisor_of(&poly, acc.table())?;
        acc = acc.add(&d.scale(coef))?;
        i = close + 1;
    }
    Ok(acc)
}

pub fn parse_divisor(text: &str, table: &Arc<PrimeTable>) -> Result<QDivisor> {
    parse_divisor_with(text, table, &|_| None)
}

/// A ring homomorphism given by images of the source variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMap {
    pub source: Arc<PolyRing>,
    pub target: Arc<PolyRing>,
    pub images: Vec<Poly>,
}

impl RingMap {
    pub fn new(source: &Arc<PolyRing>, target: &Arc<PolyRing>, images: Vec<Poly>) -> Result<RingMap> {
        if images.len() != source.nvars() || images.iter().any(|g| g.ring().as_ref() != target.as_ref()) {
            return Err(Error::RingMismatch);
        }
        if source.p() != target.p() {
            return Err(Error::RingMismatch);
        }
        Ok(RingMap { source: source.clone(), target: target.clone(), images })
    }

    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        if f.ring().as_ref() != self.source.as_ref() {
            return Err(Error::RingMismatch);
        }
        f.substitute(&self.target, &self.images)
    }
}

/// `π*D`: the coefficient at a total-ring prime `C` is `Σ_P a_P · ord_C(π(P))`.
pub fn pullback_along(map: &RingMap, d: &QDivisor, total: &Arc<PrimeTable>) -> Result<QDivisor> {
    if d.table.ring.as_ref() != map.source.as_ref() {
        return Err(Error::RingMismatch);
    }
    let mut acc = QDivisor::zero(total);
    for (i, c) in &d.coeffs {
        let img = map.apply(&d.table.primes[*i])?;
        let dv = divisor_of(&img, acc.table())?;
        acc = acc.add(&dv.scale(*c))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(p, vars, MonomialOrder::Lex).unwrap()
    }

    #[test]
    fn divisor_of_polynomials() {
        let rx = ring(2, &["x"]);
        let table = PrimeTable::new(&rx, ["x", "1+x", "1+x+x^2"].map(|s| rx.parse(s).unwrap())).unwrap();
        let d = divisor_of(&rx.parse("x^2*(1+x^3)").unwrap(), &table).unwrap();
        assert_eq!(d.to_string(), "2[x] + 1[x + 1] + 1[x^2 + x + 1]");
        assert!(divisor_of(&rx.one(), &table).unwrap().is_zero());
        let ry = ring(3, &["y"]);
        let ty = PrimeTable::new(&ry, [ry.var(0)]).unwrap();
        assert_eq!(divisor_of(&ry.var(0), &ty).unwrap().to_string(), "1[y]");
    }

    #[test]
    fn uncovered_factor_names_residual() {
        let r2 = ring(2, &["x", "y"]);
        let t = PrimeTable::new(&r2, [r2.var(0)]).unwrap();
        let err = divisor_of(&r2.parse("x*(x+y)").unwrap(), &t).unwrap_err();
        assert_eq!(err, Error::UncoveredFactor { residual: "x + y".into() });
        assert!(PrimeTable::new(&r2, [r2.parse("x^2+x").unwrap()]).is_err());
    }

    #[test]
    fn rounding() {
        let rx = ring(3, &["x"]);
        let t = PrimeTable::new(&rx, [rx.var(0)]).unwrap();
        let d = QDivisor::from_coeffs(&t, [(0, r(3, 2))]);
        assert_eq!(d.ceil().coeff(0), r(2, 1));
        assert_eq!(d.floor().coeff(0), r(1, 1));
        assert!(QDivisor::from_coeffs(&t, [(0, r(-1, 2))]).ceil().is_zero());
    }

    #[test]
    fn comparisons() {
        let rxy = ring(3, &["x", "y"]);
        let t = PrimeTable::new(&rxy, [rxy.var(0), rxy.var(1)]).unwrap();
        let two_x = QDivisor::from_coeffs(&t, [(0, r(2, 1))]);
        let one_x = QDivisor::from_coeffs(&t, [(0, r(1, 1))]);
        let one_y = QDivisor::from_coeffs(&t, [(1, r(1, 1))]);
        assert_eq!(divisor_cmp(&two_x, &one_x).unwrap(), DivCmp::Geq);
        assert_eq!(divisor_cmp(&one_x, &one_y).unwrap(), DivCmp::Incomparable);
        assert!(!two_x.sub(&one_y).unwrap().is_effective());
        let other = PrimeTable::new(&rxy, [rxy.var(1)]).unwrap();
        assert_eq!(one_x.compare(&QDivisor::zero(&other)), Err(Error::TableMismatch));
    }

    #[test]
    fn parsing_and_display() {
        let rx = ring(2, &["x"]);
        let t = PrimeTable::empty(&rx);
        let d = parse_divisor("2[x] + 1/2[1+x^3]", &t).unwrap();
        assert_eq!(d.to_string(), "2[x] + 1/2[x + 1] + 1/2[x^2 + x + 1]");
        let e = parse_divisor("-[x]", &t).unwrap();
        assert_eq!(e.to_string(), "-1[x]");
        assert!(parse_divisor("2[x", &t).is_err());
        assert!(parse_divisor("2[x] 3[x]", &t).is_err());
    }

    #[test]
    fn pullbacks() {
        let ry = ring(3, &["y"]);
        let rx = ring(3, &["x"]);
        let map = RingMap::new(&ry, &rx, vec![rx.parse("x^2").unwrap()]).unwrap();
        let d = parse_divisor("1[y]", &PrimeTable::empty(&ry)).unwrap();
        assert_eq!(pullback_along(&map, &d, &PrimeTable::empty(&rx)).unwrap().to_string(), "2[x]");

        let rt = ring(2, &["t"]);
        let rx2 = ring(2, &["x"]);
        let map = RingMap::new(&rt, &rx2, vec![rx2.parse("x^2+x^5").unwrap()]).unwrap();
        let d = parse_divisor("1[t]", &PrimeTable::empty(&rt)).unwrap();
        let pb = pullback_along(&map, &d, &PrimeTable::empty(&rx2)).unwrap();
        assert_eq!(pb.to_string(), "2[x] + 1[x + 1] + 1[x^2 + x + 1]");
        let z = QDivisor::zero(&PrimeTable::empty(&rt));
        assert!(pullback_along(&map, &z, &PrimeTable::empty(&rx2)).unwrap().is_zero());
    }
}
