//! Big test ideals of triples `(X, Δ, a^t)`, F-pure thresholds, strong F-regularity
//! and sharp F-purity.

use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;

use crate::divisor::{divisor_of, PrimeTable, QDivisor};
use crate::error::{Error, Result};
use crate::frobenius::frob_root_q;
use crate::groebner::Ideal;
use crate::poly::{Poly, PolyRing};
use crate::unipoly::UniPoly;

/// Default cap on the Frobenius level `e` explored by the chains.
pub const DEFAULT_MAX_E: u32 = 8;

/// Bound on closure iterations at a fixed level.
const MAX_CLOSURE_STEPS: usize = 256;

/// Largest power of a non-principal ideal formed during a sweep.
const MAX_SWEEP_POWER: u64 = 64;

/// The ambient model: a polynomial ring, or a hypersurface `A/(h)`.
#[derive(Debug, Clone)]
pub enum Ambient {
    Regular(Arc<PolyRing>),
    Hypersurface(Poly),
}

impl Ambient {
    pub fn ring(&self) -> &Arc<PolyRing> {
        match self {
            Ambient::Regular(r) => r,
            Ambient::Hypersurface(h) => h.ring(),
        }
    }
}

/// `(X, Δ, a^t)`.
#[derive(Debug, Clone)]
pub struct Triple {
    ambient: Ambient,
    delta: QDivisor,
    a: Ideal,
    t: Rational64,
}

impl Triple {
    pub fn new(ambient: Ambient, delta: QDivisor, a: Ideal, t: Rational64) -> Result<Triple> {
        let ring = ambient.ring();
        if delta.table().ring().as_ref() != ring.as_ref() || a.ring().as_ref() != ring.as_ref() {
            return Err(Error::RingMismatch);
        }
        if a.is_zero() {
            return Err(Error::ZeroArgument("ideal a"));
        }
        if t < Rational64::zero() {
            return Err(Error::Precondition(format!("exponent t = {t} is negative")));
        }
        Ok(Triple { ambient, delta, a, t })
    }

    /// `(X, Δ)` with the trivial ideal.
    pub fn pair(delta: QDivisor) -> Triple {
        let ring = delta.table().ring().clone();
        Triple { a: Ideal::unit(&ring), ambient: Ambient::Regular(ring), delta, t: Rational64::zero() }
    }

    pub fn hypersurface(h: Poly) -> Triple {
        let ring = h.ring().clone();
        Triple {
            delta: QDivisor::zero(&PrimeTable::empty(&ring)),
            a: Ideal::unit(&ring),
            ambient: Ambient::Hypersurface(h),
            t: Rational64::zero(),
        }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.ambient.ring()
    }

    pub fn delta(&self) -> &QDivisor {
        &self.delta
    }

    pub fn a(&self) -> &Ideal {
        &self.a
    }

    pub fn t(&self) -> Rational64 {
        self.t
    }

    pub fn with_delta(&self, delta: QDivisor) -> Result<Triple> {
        Triple::new(self.ambient.clone(), delta, self.a.clone(), self.t)
    }

    fn a_trivial(&self) -> Result<bool> {
        Ok(self.t.is_zero() || self.a.is_unit()?)
    }
}

/// `⌈r·k⌉` in exact arithmetic.
fn ceil_times(r: Rational64, k: u64) -> Result<u64> {
    let v = (r * Rational64::from_integer(i64::try_from(k).map_err(|_| Error::Overflow)?)).ceil().to_integer();
    u64::try_from(v).map_err(|_| Error::Overflow)
}

/// `Π P^{⌈k·a_P⌉}`.
fn rounded_key(delta: &QDivisor, k: u64) -> Result<Poly> {
    delta.scale(Rational64::from_integer(k as i64)).ceil().to_poly()
}

/// Smallest `e ≤ max_e` with `(p^e − 1)·Δ` integral.
pub fn index_level(delta: &QDivisor, max_e: u32) -> Option<u32> {
    let f = delta.table().ring().field();
    (1..=max_e).find(|&e| f.q(e).is_ok_and(|q| delta.scale(Rational64::from_integer(q as i64 - 1)).is_integral()))
}

/// Outcome of a test-ideal computation. `exact` is false when the value came from a
/// stabilized sweep over levels rather than a closure at a level where the data are
/// integral.
#[derive(Debug, Clone)]
pub struct TauResult {
    pub ideal: Ideal,
    pub exact: bool,
    pub level: u32,
}

fn first_generator(a: &Ideal) -> Result<Poly> {
    a.gb()?.first().cloned().ok_or(Error::ZeroArgument("ideal a"))
}

/// Smallest ideal containing `seed` and stable under `J ↦ (u·J)^{[1/q]}`.
fn close_under(seed: Ideal, u: &Poly, q: u64) -> Result<Ideal> {
    let mut j = seed.canonical()?;
    for _ in 0..MAX_CLOSURE_STEPS {
        let next = j.sum(&frob_root_q(&j.scale(u)?, q)?)?.canonical()?;
        if next.equals(&j)? {
            return Ok(j);
        }
        j = next;
    }
    Err(Error::ResourceExceeded(format!("closure did not stabilize; last value {j}")))
}

/// `p`-adic valuation of the denominator of `r`.
fn p_part_of_denominator(r: Rational64, p: i64) -> u32 {
    let mut d = *r.denom();
    let mut k = 0;
    while d % p == 0 {
        d /= p;
        k += 1;
    }
    k
}

/// Exact value when the boundary is a rational combination of principal divisors
/// (`a` trivial or principal): with `D' = p^s·D` of index prime to `p`, `τ(D')` is the
/// smallest ideal containing `Π f_i^{⌈c'_i⌉}` stable under the level-`e0` map of `D'`, and
/// `τ(D) = τ(D')^{[1/p^s]}`.
fn tau_principal(parts: &[(Poly, Rational64)], ring: &Arc<PolyRing>, max_e: u32) -> Result<Option<TauResult>> {
    let field = ring.field();
    let p = field.p() as i64;
    let shift = parts.iter().map(|(_, c)| p_part_of_denominator(*c, p)).max().unwrap_or(0);
    let ps = field.q(shift)?;
    let scaled: Vec<(Poly, Rational64)> = parts.iter().map(|(f, c)| (f.clone(), *c * Rational64::from_integer(ps as i64))).collect();
    let Some(e0) = (1..=max_e).find(|&e| {
        field.q(e).is_ok_and(|q| scaled.iter().all(|(_, c)| (*c * Rational64::from_integer(q as i64 - 1)).is_integer()))
    }) else {
        return Ok(None);
    };
    let q = field.q(e0)?;
    let mut u = ring.one();
    let mut c = ring.one();
    for (f, k) in &scaled {
        u = &u * &f.pow((*k * Rational64::from_integer(q as i64 - 1)).to_integer() as u64);
        c = &c * &f.pow(k.ceil().to_integer() as u64);
    }
    let closed = close_under(Ideal::principal(&c), &u, q)?;
    let ideal = if shift == 0 { closed } else { frob_root_q(&closed, ps)? };
    Ok(Some(TauResult { ideal, exact: true, level: e0 }))
}

/// `τ(X, Δ, a^t)` on a polynomial ring with `Δ ≥ 0`.
pub fn tau_regular(triple: &Triple, max_e: u32) -> Result<TauResult> {
    let Ambient::Regular(ring) = &triple.ambient else {
        return Err(Error::Precondition("tau_regular needs a polynomial ambient".into()));
    };
    let delta = &triple.delta;
    if !delta.is_effective() {
        return Err(Error::Precondition(format!("Δ = {delta} is not effective; use the fractional form")));
    }
    let field = ring.field();
    let trivial = triple.a_trivial()?;
    let g0 = if trivial { ring.one() } else { first_generator(&triple.a)? };
    if trivial || triple.a.gb()?.len() == 1 {
        let mut parts: Vec<(Poly, Rational64)> = delta.terms().map(|(f, c)| (f.clone(), c)).collect();
        if !trivial {
            parts.push((g0.clone(), triple.t));
        }
        if let Some(res) = tau_principal(&parts, ring, max_e)? {
            return Ok(res);
        }
    }

    // a general ideal: ascending sweep over levels
    let c = &rounded_key(delta, 1)? * &g0.pow(triple.t.ceil().to_integer() as u64);
    let mut chain = vec![Ideal::principal(&c).canonical()?];
    for e in 1..=max_e {
        let q = field.q(e)?;
        let m = if trivial { 0 } else { ceil_times(triple.t, q - 1)? };
        if m > MAX_SWEEP_POWER {
            return Err(Error::ResourceExceeded(format!("power a^{m} too large at e = {e}; last value {}", chain.last().expect("seeded"))));
        }
        let f_e = rounded_key(delta, q - 1)?;
        let prev = chain.last().expect("seeded");
        let mut stuff = prev.scale(&f_e)?;
        if m > 0 {
            stuff = stuff.product(&triple.a.power(m)?)?;
        }
        let next = prev.sum(&frob_root_q(&stuff, q)?)?.canonical()?;
        // every chain member lies inside τ
        if next.is_unit()? {
            return Ok(TauResult { ideal: next, exact: true, level: e });
        }
        chain.push(next);
        let k = chain.len();
        if k >= 3 && chain[k - 1].equals(&chain[k - 2])? && chain[k - 2].equals(&chain[k - 3])? {
            return Ok(TauResult { ideal: chain.pop().expect("nonempty"), exact: false, level: e });
        }
    }
    let k = chain.len();
    Err(Error::ResourceExceeded(format!(
        "test ideal chain did not stabilize by e = {max_e}; last values {} and {}",
        chain[k - 2],
        chain[k - 1]
    )))
}

/// A fractional ideal `(1/d)·J`.
#[derive(Debug, Clone)]
pub struct FractionalIdeal {
    pub numerator: Ideal,
    pub denominator: Poly,
}

impl FractionalIdeal {
    pub fn new(numerator: Ideal, denominator: Poly) -> Result<FractionalIdeal> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ring = numerator.ring().clone();
        let inv = ring.field().inv(denominator.lc());
        let mut num = numerator.canonical()?;
        let mut den = denominator.scale(inv);
        // cancel a common factor when the numerator is principal over a univariate ring
        if ring.nvars() == 1 && num.gens().len() == 1 && !den.is_constant() {
            let a = UniPoly::from_poly(&num.gens()[0], 0)?;
            let b = UniPoly::from_poly(&den, 0)?;
            let g = a.gcd(&b);
            if !g.is_one() {
                num = Ideal::principal(&a.exact_div(&g).expect("gcd").to_poly(&ring, 0)).canonical()?;
                den = b.exact_div(&g).expect("gcd").monic().to_poly(&ring, 0);
            }
        }
        Ok(FractionalIdeal { numerator: num, denominator: den })
    }

    pub fn integral(ideal: Ideal) -> Result<FractionalIdeal> {
        let one = ideal.ring().one();
        FractionalIdeal::new(ideal, one)
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_constant()
    }

    /// `J/d = J'/d'` iff `d'·J = d·J'`.
    pub fn equals(&self, other: &FractionalIdeal) -> Result<bool> {
        self.numerator.scale(&other.denominator)?.equals(&other.numerator.scale(&self.denominator)?)
    }

    pub fn contains_ideal(&self, other: &FractionalIdeal) -> Result<bool> {
        self.numerator.scale(&other.denominator)?.contains_ideal(&other.numerator.scale(&self.denominator)?)
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator.canonical_string().map_err(|_| fmt::Error)?;
        if self.denominator.is_constant() {
            f.write_str(&num)
        } else {
            write!(f, "(1/({}))·{num}", self.denominator)
        }
    }
}

/// `(1/f)·τ(Δ + div f)` for a clearing element `f` with `Δ + div f ≥ 0`.
pub fn tau_fractional_with(triple: &Triple, f: &Poly, max_e: u32) -> Result<FractionalIdeal> {
    let cleared = triple.delta.add(&divisor_of(f, triple.delta.table())?)?;
    if !cleared.is_effective() {
        return Err(Error::NoClearing);
    }
    let tau = tau_regular(&triple.with_delta(cleared)?, max_e)?;
    FractionalIdeal::new(tau.ideal, f.clone())
}

/// `τ` for arbitrary `Δ`, cleared by `Π P^{⌈neg part⌉}`.
pub fn tau_fractional(triple: &Triple, max_e: u32) -> Result<FractionalIdeal> {
    let (_, neg) = triple.delta.split_signs();
    let f = neg.ceil().to_poly()?;
    tau_fractional_with(triple, &f, max_e)
}

/// A partial derivative of `h` outside `⟨h⟩`.
pub fn jacobian_test_element(h: &Poly) -> Result<Poly> {
    let hi = Ideal::principal(h);
    for i in 0..h.ring().nvars() {
        let d = h.derivative(i);
        if !d.is_zero() && !hi.contains(&d)? {
            return Ok(d);
        }
    }
    Err(Error::NeedTestElement)
}

/// `τ(A/(h))` as an ideal of `A` containing `h`: the smallest ideal containing `⟨h, c⟩`
/// stable under `J ↦ (h^{p−1}·J)^{[1/p]}`.
pub fn tau_hypersurface(h: &Poly, test_element: Option<&Poly>) -> Result<Ideal> {
    if h.is_zero() || h.is_constant() {
        return Err(Error::Precondition("hypersurface equation must be a nonconstant polynomial".into()));
    }
    if let Ok(Some(v)) = h.univariate_var() {
        let u = UniPoly::from_poly(h, v)?;
        if !u.gcd(&u.derivative()).deg().is_some_and(|d| d == 0) {
            return Err(Error::Precondition(format!("{h} is not reduced")));
        }
    }
    let c = match test_element {
        Some(c) => c.clone(),
        None => jacobian_test_element(h)?,
    };
    let p = h.field().p() as u64;
    let seed = Ideal::new(h.ring(), [h.clone(), c])?;
    close_under(seed, &h.pow(p - 1), p)
}

/// `τ` of a triple in either ambient; hypersurfaces take `Δ = 0` and trivial `a`.
pub fn tau(triple: &Triple, max_e: u32) -> Result<TauResult> {
    match &triple.ambient {
        Ambient::Regular(_) => tau_regular(triple, max_e),
        Ambient::Hypersurface(h) => {
            if !triple.delta.is_zero() || !triple.a_trivial()? {
                return Err(Error::Unsupported("hypersurface test ideals with a boundary or an ideal".into()));
            }
            Ok(TauResult { ideal: tau_hypersurface(h, None)?, exact: true, level: 1 })
        }
    }
}

/// `τ(X, Δ, a^t) = ⟨1⟩`.
pub fn is_strongly_f_regular(triple: &Triple, max_e: u32) -> Result<bool> {
    if !triple.delta.is_effective() {
        return Ok(false);
    }
    tau(triple, max_e)?.ideal.is_unit()
}

/// Verdict of the sharp F-purity search at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfpVerdict {
    True { e: u32 },
    /// Negative at a level where the test is periodic, hence conclusive.
    FalseConclusive { e: u32 },
    FalseUpToCap { cap: u32 },
}

impl fmt::Display for SfpVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SfpVerdict::True { e } => write!(f, "true (e = {e})"),
            SfpVerdict::FalseConclusive { e } => write!(f, "false (conclusive at e = {e})"),
            SfpVerdict::FalseUpToCap { cap } => write!(f, "false up to e = {cap}"),
        }
    }
}

fn truncate(f: &Poly, q: u64) -> Poly {
    f.ring().from_terms(f.terms().iter().filter(|(m, _)| m.iter().all(|&x| (x as u64) < q)).cloned())
}

fn truncated_mul(a: &Poly, b: &Poly, q: u64) -> Poly {
    truncate(&(a * b), q)
}

fn truncated_pow(f: &Poly, mut r: u64, q: u64) -> Poly {
    let mut acc = f.ring().one();
    let mut base = truncate(f, q);
    while r > 0 {
        if r & 1 == 1 {
            acc = truncated_mul(&acc, &base, q);
        }
        r >>= 1;
        if r > 0 {
            base = truncated_mul(&base, &base, q);
        }
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Is `f·a^m ⊄ m^{[q]}` at the origin?
fn escapes_bracket(f: &Poly, a: &Ideal, m: u64, q: u64) -> Result<bool> {
    let mut elems: Vec<Poly> = vec![truncate(f, q)];
    elems.retain(|g| !g.is_zero());
    let gens = a.gb()?.to_vec();
    for _ in 0..m {
        let mut next: Vec<Poly> = Vec::new();
        for e in &elems {
            for g in &gens {
                let h = truncated_mul(e, g, q);
                if !h.is_zero() {
                    let h = h.monic();
                    if !next.contains(&h) {
                        next.push(h);
                    }
                }
            }
        }
        if next.is_empty() {
            return Ok(false);
        }
        if next.len() > 20_000 {
            return Err(Error::ResourceExceeded("too many products in the F-purity test".into()));
        }
        elems = next;
    }
    Ok(!elems.is_empty())
}

/// Sharp F-purity at the origin.
pub fn is_sharply_f_pure(triple: &Triple, e_cap: u32) -> Result<SfpVerdict> {
    let ring = triple.ring().clone();
    let h = match &triple.ambient {
        Ambient::Regular(_) => None,
        Ambient::Hypersurface(h) => {
            if !triple.delta.is_zero() {
                return Err(Error::Unsupported("hypersurface with a boundary divisor".into()));
            }
            Some(h.clone())
        }
    };
    if !triple.delta.is_effective() {
        return Ok(SfpVerdict::FalseConclusive { e: 1 });
    }
    let field = ring.field();
    let witness_at = |e: u32| -> Result<bool> {
        let q = field.q(e)?;
        let mut f = rounded_key(&triple.delta, q - 1)?;
        if let Some(h) = &h {
            f = truncated_mul(&f, &truncated_pow(h, q - 1, q), q);
        }
        let m = if triple.a_trivial()? { 0 } else { ceil_times(triple.t, q - 1)? };
        escapes_bracket(&f, &triple.a, m, q)
    };
    if triple.a_trivial()? {
        if let Some(e0) = index_level(&triple.delta, e_cap) {
            return Ok(if witness_at(e0)? { SfpVerdict::True { e: e0 } } else { SfpVerdict::FalseConclusive { e: e0 } });
        }
    }
    for e in 1..=e_cap {
        if witness_at(e)? {
            return Ok(SfpVerdict::True { e });
        }
    }
    Ok(SfpVerdict::FalseUpToCap { cap: e_cap })
}

/// `ν_f(q) = max{r : f^r ∉ m^{[q]}}`.
pub fn fpt_nu(f: &Poly, e: u32) -> Result<u64> {
    if f.constant_term() != 0 || f.is_zero() {
        return Err(Error::Precondition(format!("{f} is not in the maximal ideal at the origin")));
    }
    let q = f.field().q(e)?;
    let n = f.ring().nvars() as u64;
    let (mut lo, mut hi) = (0u64, n * (q - 1));
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if truncated_pow(f, mid, q).is_zero() {
            hi = mid - 1;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// `ν_f(p^e)/p^e`.
pub fn fpt_truncation(f: &Poly, e: u32) -> Result<Rational64> {
    let q = f.field().q(e)?;
    Ok(Rational64::new(fpt_nu(f, e)? as i64, q as i64))
}

/// The F-pure threshold lies in `(lower, upper]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptEstimate {
    pub nus: Vec<u64>,
    pub lower: Rational64,
    pub upper: Rational64,
}

pub fn fpt_estimate(f: &Poly, e_max: u32) -> Result<FptEstimate> {
    if e_max == 0 {
        return Err(Error::Precondition("need at least one level".into()));
    }
    let mut nus = Vec::new();
    for e in 1..=e_max {
        nus.push(fpt_nu(f, e)?);
    }
    let q = f.field().q(e_max)? as i64;
    let nu = *nus.last().expect("nonempty") as i64;
    Ok(FptEstimate { nus, lower: Rational64::new(nu, q), upper: Rational64::new(nu + 1, q) })
}

/// Outcome of comparing `τ(Δ + div f)` with `f·τ(Δ)`.
#[derive(Debug, Clone)]
pub struct SkodaReport {
    pub shifted: FractionalIdeal,
    pub scaled: FractionalIdeal,
    pub pass: bool,
}

pub fn skoda_check(triple: &Triple, f: &Poly, max_e: u32) -> Result<SkodaReport> {
    let d = triple.delta.add(&divisor_of(f, triple.delta.table())?)?;
    let shifted = tau_fractional(&triple.with_delta(d)?, max_e)?;
    let base = tau_fractional(triple, max_e)?;
    let scaled = FractionalIdeal::new(base.numerator.scale(f)?, base.denominator.clone())?;
    let pass = shifted.equals(&scaled)?;
    Ok(SkodaReport { shifted, scaled, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn uni(p: u64) -> (Arc<PolyRing>, Arc<PrimeTable>) {
        let ring = PolyRing::new(p, &["x"], MonomialOrder::Grevlex).unwrap();
        let table = PrimeTable::new(&ring, [ring.var(0), ring.parse("x+1").unwrap()]).unwrap();
        (ring, table)
    }

    fn tau_str(t: &Triple) -> String {
        tau_regular(t, DEFAULT_MAX_E).unwrap().ideal.canonical_string().unwrap()
    }

    #[test]
    fn regular_examples() {
        let (rx, tx) = uni(3);
        assert_eq!(tau_str(&Triple::pair(QDivisor::zero(&tx))), "⟨1⟩");
        let x = rx.var(0);
        for p in [2, 3, 5] {
            let (_, t) = uni(p);
            assert_eq!(tau_str(&Triple::pair(QDivisor::prime(&t, &t.primes()[0], r(1, 1)).unwrap())), "⟨x⟩");
        }
        let d = QDivisor::prime(&tx, &x, r(3, 2)).unwrap();
        let res = tau_regular(&Triple::pair(d), DEFAULT_MAX_E).unwrap();
        assert!(res.exact);
        assert_eq!(res.ideal.canonical_string().unwrap(), "⟨x⟩");
        let half = QDivisor::prime(&tx, &x, r(1, 2)).unwrap();
        assert_eq!(tau_str(&Triple::pair(half)), "⟨1⟩");
    }

    #[test]
    fn index_divisible_by_p() {
        let (rx, tx) = uni(2);
        let half = QDivisor::prime(&tx, &rx.var(0), r(1, 2)).unwrap();
        let res = tau_regular(&Triple::pair(half), DEFAULT_MAX_E).unwrap();
        assert!(res.exact);
        assert!(res.ideal.is_unit().unwrap());
        let d = QDivisor::prime(&tx, &rx.var(0), r(5, 4)).unwrap();
        let res = tau_regular(&Triple::pair(d), DEFAULT_MAX_E).unwrap();
        assert_eq!(res.ideal.canonical_string().unwrap(), "⟨x⟩");
    }

    #[test]
    fn snc_floor_formula() {
        // τ of an SNC boundary is the round-down
        for p in [2u64, 3, 5] {
            let (rx, tx) = uni(p);
            for (a, b) in [(r(1, 3), r(4, 3)), (r(2, 1), r(1, 2)), (r(7, 4), r(0, 1)), (r(5, 6), r(11, 6))] {
                let d = QDivisor::from_coeffs(&tx, [(0, a), (1, b)]);
                let expect = Ideal::principal(&d.floor().to_poly().unwrap());
                let got = match tau_regular(&Triple::pair(d.clone()), DEFAULT_MAX_E) {
                    Ok(t) => t.ideal,
                    Err(e) => panic!("p={p} {d}: {e}"),
                };
                assert!(got.equals(&expect).unwrap(), "p={p} Δ={d}: {got}");
            }
            let _ = rx;
        }
    }

    #[test]
    fn with_an_ideal() {
        let ring = PolyRing::new(3, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        let table = PrimeTable::empty(&ring);
        let m = Ideal::coordinate_maximal(&ring);
        // τ(m^t) in two variables: m^{⌊t⌋−1} for t ≥ 2, else ⟨1⟩
        let t1 = Triple::new(Ambient::Regular(ring.clone()), QDivisor::zero(&table), m.clone(), r(3, 2)).unwrap();
        assert!(tau_regular(&t1, DEFAULT_MAX_E).unwrap().ideal.is_unit().unwrap());
        let t2 = Triple::new(Ambient::Regular(ring.clone()), QDivisor::zero(&table), m.clone(), r(2, 1)).unwrap();
        assert!(tau_regular(&t2, DEFAULT_MAX_E).unwrap().ideal.equals(&m).unwrap());
        let xy = Ideal::parse(&ring, &["x*y"]).unwrap();
        let t3 = Triple::new(Ambient::Regular(ring.clone()), QDivisor::zero(&table), xy.clone(), r(1, 1)).unwrap();
        let res = tau_regular(&t3, DEFAULT_MAX_E).unwrap();
        assert!(res.exact);
        assert!(res.ideal.equals(&xy).unwrap());
    }

    #[test]
    fn fractional() {
        let (rx, tx) = uni(2);
        let minus = QDivisor::prime(&tx, &rx.var(0), r(-1, 1)).unwrap();
        let f = tau_fractional(&Triple::pair(minus.clone()), DEFAULT_MAX_E).unwrap();
        assert!(f.numerator.is_unit().unwrap());
        assert_eq!(f.denominator, rx.var(0));
        let other = tau_fractional_with(&Triple::pair(minus), &rx.parse("x^2*(x+1)").unwrap(), DEFAULT_MAX_E).unwrap();
        assert!(f.equals(&other).unwrap());
        let mixed = QDivisor::from_coeffs(&tx, [(0, r(1, 1)), (1, r(-1, 1))]);
        let f = tau_fractional(&Triple::pair(mixed), DEFAULT_MAX_E).unwrap();
        assert_eq!(f.to_string(), "(1/(x + 1))·⟨x⟩");
        assert!(matches!(
            tau_fractional_with(&Triple::pair(QDivisor::prime(&tx, &rx.var(0), r(-2, 1)).unwrap()), &rx.var(0), 4),
            Err(Error::NoClearing)
        ));
    }

    #[test]
    fn hypersurfaces() {
        let r3 = PolyRing::new(2, &["x", "y", "z"], MonomialOrder::Grevlex).unwrap();
        let h = r3.parse("z^2 + x*y*z + x*y^2 + x^2*y").unwrap();
        let tau = tau_hypersurface(&h, None).unwrap();
        assert_eq!(tau.canonical_string().unwrap(), "⟨z, y, x⟩");
        let c = jacobian_test_element(&h).unwrap();
        let other = tau_hypersurface(&h, Some(&c.pow(2))).unwrap();
        assert!(tau.equals(&other).unwrap());
        assert!(!is_strongly_f_regular(&Triple::hypersurface(h.clone()), DEFAULT_MAX_E).unwrap());
        assert_eq!(is_sharply_f_pure(&Triple::hypersurface(h), 4).unwrap(), SfpVerdict::True { e: 1 });

        let r2 = PolyRing::new(2, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        assert!(tau_hypersurface(&r2.var(0), None).unwrap().is_unit().unwrap());
        let r5 = PolyRing::new(5, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        let cusp = r5.parse("x^2 + y^3").unwrap();
        let t = tau_hypersurface(&cusp, None).unwrap();
        assert!(t.equals(&Ideal::parse(&r5, &["x", "y"]).unwrap()).unwrap());
        let zero_jac = r2.parse("x^2 + y^2").unwrap();
        assert!(matches!(tau_hypersurface(&zero_jac, None), Err(Error::NeedTestElement)));
    }

    #[test]
    fn thresholds() {
        for p in [2, 3] {
            let r1 = PolyRing::new(p, &["x"], MonomialOrder::Grevlex).unwrap();
            for e in 1..4 {
                let q = r1.field().q(e).unwrap();
                assert_eq!(fpt_nu(&r1.var(0), e).unwrap(), q - 1);
            }
        }
        let r2 = PolyRing::new(2, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        for e in 1..=5 {
            assert_eq!(fpt_nu(&r2.parse("(x+y)^2").unwrap(), e).unwrap(), (1 << (e - 1)) - 1);
        }
        let est = fpt_estimate(&r2.parse("(x+y)^2").unwrap(), 5).unwrap();
        assert!(est.lower < r(1, 2) && r(1, 2) <= est.upper);
        let est = fpt_estimate(&r2.parse("x*y").unwrap(), 4).unwrap();
        assert!(est.lower < r(1, 1) && r(1, 1) <= est.upper);
        assert!(fpt_nu(&r2.parse("x + 1").unwrap(), 1).is_err());
    }

    #[test]
    fn sharp_purity() {
        let (rx, tx) = uni(2);
        let one = QDivisor::prime(&tx, &rx.var(0), r(1, 1)).unwrap();
        assert_eq!(is_sharply_f_pure(&Triple::pair(one), 4).unwrap(), SfpVerdict::True { e: 1 });
        let three_q = QDivisor::prime(&tx, &rx.var(0), r(3, 4)).unwrap();
        assert_eq!(is_sharply_f_pure(&Triple::pair(three_q), 4).unwrap(), SfpVerdict::True { e: 1 });
        let too_big = QDivisor::prime(&tx, &rx.var(0), r(3, 2)).unwrap();
        assert_eq!(is_sharply_f_pure(&Triple::pair(too_big), 4).unwrap(), SfpVerdict::FalseUpToCap { cap: 4 });
        let (ry, ty) = uni(3);
        let two = QDivisor::prime(&ty, &ry.var(0), r(2, 1)).unwrap();
        assert_eq!(is_sharply_f_pure(&Triple::pair(two), 4).unwrap(), SfpVerdict::FalseConclusive { e: 1 });
        let r2 = PolyRing::new(2, &["x", "y"], MonomialOrder::Grevlex).unwrap();
        let cusp = r2.parse("x^2 + y^3").unwrap();
        assert_eq!(is_sharply_f_pure(&Triple::hypersurface(cusp), 3).unwrap(), SfpVerdict::FalseConclusive { e: 1 });
    }

    #[test]
    fn skoda() {
        let (rx, tx) = uni(2);
        let rep = skoda_check(&Triple::pair(QDivisor::zero(&tx)), &rx.var(0), DEFAULT_MAX_E).unwrap();
        assert!(rep.pass);
        let (ry, ty) = uni(3);
        let half = QDivisor::prime(&ty, &ry.var(0), r(1, 2)).unwrap();
        assert!(skoda_check(&Triple::pair(half), &ry.var(0), DEFAULT_MAX_E).unwrap().pass);
    }

    #[test]
    fn strongly_f_regular_pairs() {
        let (rx, tx) = uni(3);
        assert!(is_strongly_f_regular(&Triple::pair(QDivisor::zero(&tx)), DEFAULT_MAX_E).unwrap());
        assert!(is_strongly_f_regular(&Triple::pair(QDivisor::prime(&tx, &rx.var(0), r(1, 2)).unwrap()), DEFAULT_MAX_E).unwrap());
        assert!(!is_strongly_f_regular(&Triple::pair(QDivisor::prime(&tx, &rx.var(0), r(1, 1)).unwrap()), DEFAULT_MAX_E).unwrap());
    }
}
