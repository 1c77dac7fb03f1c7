//! Multivariate polynomials over F_p with sparse, canonically sorted terms.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldCtx;

/// Exponent vector, one entry per ring variable.
pub type Monomial = Vec<u32>;

/// Monomial order tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    Grevlex,
    /// Block order: the first `k` variables form a block compared first (grevlex),
    /// ties broken by grevlex on the remaining variables. Used for elimination.
    Block(usize),
}

impl MonomialOrder {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "grevlex" => Ok(MonomialOrder::Grevlex),
            other => Err(Error::InvalidRing(format!("unknown monomial order `{other}`"))),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::Grevlex => write!(f, "grevlex"),
            MonomialOrder::Block(k) => write!(f, "block({k})"),
        }
    }
}

fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// A polynomial ring F_p[x_1, ..., x_n] with a fixed monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: FieldCtx,
    vars: Vec<String>,
    order: MonomialOrder,
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase() || c.is_ascii_uppercase() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new(p: u64, vars: &[&str], order: MonomialOrder) -> Result<Arc<Self>> {
        Self::with_field(FieldCtx::new(p)?, vars.iter().map(|s| s.to_string()).collect(), order)
    }

    pub fn with_field(field: FieldCtx, vars: Vec<String>, order: MonomialOrder) -> Result<Arc<Self>> {
        if vars.is_empty() {
            return Err(Error::InvalidRing("a ring needs at least one variable".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if !valid_ident(v) {
                return Err(Error::InvalidRing(format!("invalid variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        if let MonomialOrder::Block(k) = order {
            if k > vars.len() {
                return Err(Error::InvalidRing("block larger than variable count".into()));
            }
        }
        Ok(Arc::new(PolyRing { field, vars, order }))
    }

    pub fn field(&self) -> FieldCtx {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn cmp_monomials(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self.order {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => grevlex_cmp(a, b),
            MonomialOrder::Block(k) => match grevlex_cmp(&a[..k], &b[..k]) {
                Ordering::Equal => grevlex_cmp(&a[k..], &b[k..]),
                o => o,
            },
        }
    }

    pub fn zero(self: &Arc<Self>) -> Poly {
        Poly { ring: self.clone(), terms: Vec::new() }
    }

    pub fn one(self: &Arc<Self>) -> Poly {
        self.constant(1)
    }

    pub fn constant(self: &Arc<Self>, c: u32) -> Poly {
        let c = c % self.p();
        let terms = if c == 0 { Vec::new() } else { vec![(vec![0; self.nvars()], c)] };
        Poly { ring: self.clone(), terms }
    }

    pub fn var(self: &Arc<Self>, i: usize) -> Poly {
        let mut m = vec![0; self.nvars()];
        m[i] = 1;
        Poly { ring: self.clone(), terms: vec![(m, 1)] }
    }

    /// The variable with the given name, if it exists.
    pub fn var_named(self: &Arc<Self>, name: &str) -> Option<Poly> {
        self.var_index(name).map(|i| self.var(i))
    }

    pub fn monomial(self: &Arc<Self>, exps: Monomial, c: u32) -> Poly {
        assert_eq!(exps.len(), self.nvars());
        let c = c % self.p();
        let terms = if c == 0 { Vec::new() } else { vec![(exps, c)] };
        Poly { ring: self.clone(), terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(self: &Arc<Self>, terms: impl IntoIterator<Item = (Monomial, u32)>) -> Poly {
        let f = self.field;
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), self.nvars());
            let e = acc.entry(m).or_insert(0);
            *e = f.add(*e, c % f.p());
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| self.cmp_monomials(&b.0, &a.0));
        Poly { ring: self.clone(), terms }
    }

    pub fn parse(self: &Arc<Self>, text: &str) -> Result<Poly> {
        crate::parse::parse_poly(self, text)
    }

    /// The same variables and field with a different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<PolyRing>> {
        PolyRing::with_field(self.field, self.vars.clone(), order)
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}] ({})", self.p(), self.vars.join(","), self.order)
    }
}

/// A polynomial in a [`PolyRing`]. Terms are sorted in descending monomial order
/// and carry nonzero coefficients in `0..p`.
#[derive(Clone)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, u32)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

fn add_exps(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x.checked_add(*y).expect("exponent overflow")).collect()
}

/// True if monomial `a` divides monomial `b`.
pub fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_div(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl Poly {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    /// Wraps terms that are already sorted, reduced and nonzero.
    pub(crate) fn from_sorted_terms(ring: Arc<PolyRing>, terms: Vec<(Monomial, u32)>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| ring.cmp_monomials(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| t.1 != 0 && t.1 < ring.p()));
        Poly { ring, terms }
    }

    pub(crate) fn into_terms(self) -> Vec<(Monomial, u32)> {
        self.terms
    }

    pub fn field(&self) -> FieldCtx {
        self.ring.field
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant value if the polynomial is constant (zero included).
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.iter().all(|e| *e == 0) => Some(*c),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        matches!(self.as_constant(), Some(c) if c != 0)
    }

    pub fn same_ring(&self, other: &Poly) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    fn check_ring(&self, other: &Poly) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, u32)> {
        self.terms.first().map(|(m, c)| (m, *c))
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> u32 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.iter().map(|&e| e as u64).sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m[var]).max()
    }

    /// Coefficient of an exact monomial.
    pub fn coeff(&self, m: &[u32]) -> u32 {
        self.terms.iter().find(|(t, _)| t.as_slice() == m).map(|t| t.1).unwrap_or(0)
    }

    /// Constant term, i.e. the value at the origin.
    pub fn constant_term(&self) -> u32 {
        self.coeff(&vec![0; self.ring.nvars()])
    }

    /// Indices of variables that occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&i| self.terms.iter().any(|(m, _)| m[i] > 0)).collect()
    }

    /// Index of the single variable in use, `Ok(None)` for constants.
    pub fn univariate_var(&self) -> Result<Option<usize>> {
        match self.support_vars().as_slice() {
            [] => Ok(None),
            [v] => Ok(Some(*v)),
            _ => Err(Error::Multivariate),
        }
    }

    pub fn neg(&self) -> Poly {
        let f = self.field();
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(*c))).collect() }
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = self.field();
        let c = c % f.p();
        if c == 0 {
            return self.ring.zero();
        }
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect() }
    }

    /// Scaled to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.lc() == 1 {
            return self.clone();
        }
        self.scale(self.field().inv(self.lc()))
    }

    /// `self + c * x^shift * other`, computed by merging sorted term lists.
    pub fn add_scaled_shifted(&self, c: u32, shift: &[u32], other: &Poly) -> Poly {
        let f = self.field();
        let c = c % f.p();
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted = |k: usize| add_exps(&other.terms[k].0, shift);
        let mut next_other = if other.terms.is_empty() { None } else { Some(shifted(0)) };
        while i < self.terms.len() || next_other.is_some() {
            match (self.terms.get(i), next_other.as_ref()) {
                (Some((ma, ca)), Some(mb)) => match ring.cmp_monomials(ma, mb) {
                    Ordering::Greater => {
                        out.push((ma.clone(), *ca));
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push((mb.clone(), f.mul(c, other.terms[j].1)));
                        j += 1;
                        next_other = (j < other.terms.len()).then(|| shifted(j));
                    }
                    Ordering::Equal => {
                        let s = f.add(*ca, f.mul(c, other.terms[j].1));
                        if s != 0 {
                            out.push((ma.clone(), s));
                        }
                        i += 1;
                        j += 1;
                        next_other = (j < other.terms.len()).then(|| shifted(j));
                    }
                },
                (Some((ma, ca)), None) => {
                    out.push((ma.clone(), *ca));
                    i += 1;
                }
                (None, Some(mb)) => {
                    out.push((mb.clone(), f.mul(c, other.terms[j].1)));
                    j += 1;
                    next_other = (j < other.terms.len()).then(|| shifted(j));
                }
                (None, None) => unreachable!(),
            }
        }
        Poly { ring: ring.clone(), terms: out }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        Ok(self.add_scaled_shifted(1, &vec![0; self.ring.nvars()], other))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        Ok(self.add_scaled_shifted(self.field().p() - 1, &vec![0; self.ring.nvars()], other))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.ring.zero());
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return Ok(self.mul_term(m, *c));
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return Ok(other.mul_term(m, *c));
        }
        let f = self.field();
        let mut acc: HashMap<Monomial, u32> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = acc.entry(add_exps(ma, mb)).or_insert(0);
                *e = f.add(*e, f.mul(*ca, *cb));
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| self.ring.cmp_monomials(&b.0, &a.0));
        Ok(Poly { ring: self.ring.clone(), terms })
    }

    /// Multiplication by the single term `c * x^m`; order is preserved.
    pub fn mul_term(&self, m: &[u32], c: u32) -> Poly {
        let f = self.field();
        let c = c % f.p();
        if c == 0 {
            return self.ring.zero();
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (add_exps(t, m), f.mul(*a, c))).collect(),
        }
    }

    /// Power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The q-th power for q a power of p: exponents scale, coefficients are fixed.
    pub fn frobenius_power(&self, q: u64) -> Result<Poly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut nm = Vec::with_capacity(m.len());
            for &e in m {
                let v = (e as u64).checked_mul(q).filter(|v| *v <= u32::MAX as u64).ok_or(Error::Overflow)?;
                nm.push(v as u32);
            }
            terms.push((nm, *c));
        }
        Ok(Poly { ring: self.ring.clone(), terms })
    }

    /// Division by a single polynomial. Returns `Ok(None)` when `b` does not divide `self`.
    pub fn exact_div(&self, b: &Poly) -> Result<Option<Poly>> {
        self.check_ring(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field();
        let blm = b.lm().clone();
        let binv = f.inv(b.lc());
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading_term() {
            if !mono_divides(&blm, m) {
                return Ok(None);
            }
            let shift = mono_div(m, &blm);
            let k = f.mul(c, binv);
            rem = rem.add_scaled_shifted(f.neg(k), &shift, b);
            quot.push((shift, k));
        }
        Ok(Some(Poly { ring: self.ring.clone(), terms: quot }))
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Poly {
        let f = self.field();
        let terms = self.terms.iter().filter_map(|(m, c)| {
            if m[var] == 0 {
                return None;
            }
            let k = f.mul(*c, f.reduce(m[var] as u64));
            if k == 0 {
                return None;
            }
            let mut nm = m.clone();
            nm[var] -= 1;
            Some((nm, k))
        });
        self.ring.from_terms(terms)
    }

    /// Ring homomorphism sending variable `i` to `images[i]` (all in `target`).
    pub fn substitute(&self, target: &Arc<PolyRing>, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::InvalidRing("substitution needs one image per variable".into()));
        }
        if images.iter().any(|g| g.ring.as_ref() != target.as_ref()) || target.p() != self.ring.p() {
            return Err(Error::RingMismatch);
        }
        let mut cache: Vec<Vec<Poly>> = vec![vec![target.one()]; images.len()];
        let mut out = target.zero();
        for (m, c) in &self.terms {
            let mut t = target.constant(*c);
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Relabels variables into `target`: variable `i` becomes `target` variable `map[i]`.
    pub fn embed(&self, target: &Arc<PolyRing>, map: &[usize]) -> Poly {
        assert_eq!(map.len(), self.ring.nvars());
        let n = target.nvars();
        target.from_terms(self.terms.iter().map(|(m, c)| {
            let mut nm = vec![0; n];
            for (i, &e) in m.iter().enumerate() {
                nm[map[i]] += e;
            }
            (nm, *c)
        }))
    }

    /// Moves the polynomial into a ring with the same variables (possibly different order).
    pub fn reorder(&self, target: &Arc<PolyRing>) -> Poly {
        assert_eq!(target.nvars(), self.ring.nvars());
        target.from_terms(self.terms.iter().cloned())
    }

    /// Canonical total order on polynomials of one ring, used for sorting outputs.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        match (self.total_degree(), other.total_degree()) {
            (a, b) if a != b => return a.cmp(&b),
            _ => {}
        }
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match self.ring.cmp_monomials(&a.0, &b.0) {
                Ordering::Equal => {}
                o => return o,
            }
            match a.1.cmp(&b.1) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.try_add(rhs).expect("ring mismatch in addition")
    }
}

impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.try_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.try_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

/// Arithmetic operation selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
}

/// Checked binary arithmetic on polynomials sharing a ring.
pub fn poly_arith(op: ArithOp, a: &Poly, b: &Poly) -> Result<Poly> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Mul => a.try_mul(b),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_one = m.iter().all(|e| *e == 0);
            if *c != 1 || is_one {
                factors.push(c.to_string());
            }
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(p, vars, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn freshman_dream_small() {
        let r = ring(2, &["x"]);
        let f = r.parse("1+x").unwrap();
        assert_eq!(f.pow(2), r.parse("1+x^2").unwrap());
        let g = r.parse("1+x^3").unwrap();
        assert_eq!(g.pow(2), r.parse("1+x^6").unwrap());
        assert_eq!(&r.var(0) * &r.zero(), r.zero());
    }

    #[test]
    fn exact_division() {
        let r = ring(3, &["x", "y"]);
        let a = r.parse("x^3*y^5").unwrap();
        assert_eq!(a.exact_div(&r.parse("x").unwrap()).unwrap(), Some(r.parse("x^2*y^5").unwrap()));
        assert_eq!(r.parse("y").unwrap().exact_div(&r.parse("x").unwrap()).unwrap(), None);
        assert!(matches!(a.exact_div(&r.zero()), Err(Error::DivisionByZero)));

        let r2 = ring(2, &["x"]);
        let q = r2.parse("x^2+x^5").unwrap().exact_div(&r2.parse("1+x^3").unwrap()).unwrap();
        assert_eq!(q, Some(r2.parse("x^2").unwrap()));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = ring(2, &["x"]).var(0);
        let b = ring(3, &["x"]).var(0);
        assert_eq!(poly_arith(ArithOp::Add, &a, &b), Err(Error::RingMismatch));
    }

    #[test]
    fn orders_are_total_and_multiplicative() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for order in [MonomialOrder::Lex, MonomialOrder::Grevlex, MonomialOrder::Block(1)] {
            let r = PolyRing::new(2, &["a", "b", "c"], order).unwrap();
            for _ in 0..500 {
                let m: Vec<Monomial> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(0..5)).collect()).collect();
                let ab = r.cmp_monomials(&m[0], &m[1]);
                assert_eq!(ab == Ordering::Equal, m[0] == m[1]);
                assert_eq!(ab, r.cmp_monomials(&add_exps(&m[0], &m[2]), &add_exps(&m[1], &m[2])));
                assert_eq!(r.cmp_monomials(&m[1], &m[0]), ab.reverse());
                assert_ne!(r.cmp_monomials(&add_exps(&m[0], &[1, 0, 0]), &m[0]), Ordering::Less);
            }
        }
    }

    #[test]
    fn display_is_canonical() {
        let r = ring(5, &["x", "y"]);
        let f = r.parse("3 + x*y*2 + x^2 - 1").unwrap();
        assert_eq!(f.to_string(), "x^2 + 2*x*y + 2");
        assert_eq!(r.zero().to_string(), "0");
    }
}
