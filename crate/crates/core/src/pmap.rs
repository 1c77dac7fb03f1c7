//! p^{-e}-linear maps `φ_u = Φ_e(u^{1/q}·)`, their divisors, iteration, and transposes
//! along monogenic extensions.

use std::sync::Arc;

use num_rational::Rational64;

use crate::divisor::{divisor_of, divisor_of_with, PrimeTable, QDivisor};
use crate::error::{Error, Result};
use crate::extension::Monogenic;
use crate::frobenius::{apply_pmap_q, cartier_apply_q, part_at};
use crate::groebner::Ideal;
use crate::poly::{Poly, PolyRing};
use crate::unipoly::{solve_ratfunc, RatFunc, UniPoly};

/// `φ(·) = Φ_e(u^{1/q}·)` with `q = p^e` and `u ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMapKey {
    u: Poly,
    e: u32,
    q: u64,
}

impl PMapKey {
    pub fn new(u: Poly, e: u32) -> Result<PMapKey> {
        if u.is_zero() {
            return Err(Error::ZeroArgument("map key"));
        }
        if e == 0 {
            return Err(Error::Precondition("map level must be at least 1".into()));
        }
        let q = u.field().q(e)?;
        Ok(PMapKey { u, e, q })
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.u.ring()
    }

    pub fn key(&self) -> &Poly {
        &self.u
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `φ(g^{1/q})`.
    pub fn apply(&self, g: &Poly) -> Poly {
        apply_pmap_q(&self.u, self.q, g)
    }

    /// `φ(F_*I)`.
    pub fn apply_ideal(&self, ideal: &Ideal) -> Result<Ideal> {
        cartier_apply_q(&self.u, self.q, ideal)
    }
}

/// `Δ_φ = div(u)/(q−1)`; every factor of `u` must be in the table.
pub fn delta_of_key(phi: &PMapKey, table: &Arc<PrimeTable>) -> Result<QDivisor> {
    let d = divisor_of_with(&phi.u, table, false)?;
    Ok(d.scale(Rational64::new(1, phi.q as i64 - 1)))
}

/// Largest level searched when reporting a valid alternative for `key_of_delta`.
pub const MAX_KEY_LEVEL: u32 = 24;

/// `u = Π P^{(q−1)·a_P}`.
pub fn key_of_delta(delta: &QDivisor, e: u32) -> Result<PMapKey> {
    if !delta.is_effective() {
        return Err(Error::Precondition(format!("divisor {delta} is not effective")));
    }
    let f = delta.table().ring().field();
    let integral_at = |e: u32| -> Result<bool> {
        let q = f.q(e)? as i64;
        Ok(delta.scale(Rational64::from_integer(q - 1)).is_integral())
    };
    if !integral_at(e)? {
        let mut min_e = None;
        for k in 1..=MAX_KEY_LEVEL {
            match integral_at(k) {
                Ok(true) => {
                    min_e = Some(k);
                    break;
                }
                Ok(false) => {}
                Err(_) => break,
            }
        }
        return Err(Error::NonIntegral { min_e });
    }
    let q = f.q(e)? as i64;
    PMapKey::new(delta.scale(Rational64::from_integer(q - 1)).to_poly()?, e)
}

/// `φ^n = φ ∘ F^e_*φ ∘ ⋯`: key `u^{1+q+⋯+q^{n−1}}` at level `ne`.
pub fn iterate_map(phi: &PMapKey, n: u32) -> Result<PMapKey> {
    if n == 0 {
        return Err(Error::Precondition("iteration count must be at least 1".into()));
    }
    let mut exp: u64 = 0;
    for _ in 0..n {
        exp = exp.checked_mul(phi.q).and_then(|x| x.checked_add(1)).ok_or(Error::Overflow)?;
    }
    let deg = phi.u.total_degree().unwrap_or(0);
    if deg.checked_mul(exp).is_none_or(|d| d > u32::MAX as u64) {
        return Err(Error::Overflow);
    }
    let e = phi.e.checked_mul(n).ok_or(Error::Overflow)?;
    PMapKey::new(phi.u.pow(exp), e)
}

/// A map `𝔗 = Ψ(s·)` in `Hom_R(S, R)`, with `s` given in the total ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLike {
    key: Poly,
    is_trace: bool,
}

impl TraceLike {
    /// The field trace.
    pub fn trace(ext: &Monogenic) -> Result<TraceLike> {
        Ok(TraceLike { key: ext.trace_key_total()?, is_trace: true })
    }

    pub fn from_key(ext: &Monogenic, s: Poly) -> Result<TraceLike> {
        if s.ring().as_ref() != ext.total()?.as_ref() {
            return Err(Error::RingMismatch);
        }
        let s = ext.to_total(&ext.from_total(&s)?)?;
        Ok(TraceLike { key: s, is_trace: false })
    }

    /// The map with `𝔗(b_i) = values[i]` on the power basis.
    pub fn from_values(ext: &Monogenic, values: &[Poly]) -> Result<TraceLike> {
        let s = ext.key_from_values(values)?;
        Ok(TraceLike { key: ext.to_total(&s)?, is_trace: false })
    }

    pub fn key(&self) -> &Poly {
        &self.key
    }

    pub fn is_trace(&self) -> bool {
        self.is_trace
    }

    /// `c·𝔗` for a field scalar `c`.
    pub fn scaled(&self, c: u32) -> TraceLike {
        TraceLike { key: self.key.scale(c), is_trace: false }
    }

    pub fn apply(&self, ext: &Monogenic, z: &Poly) -> Result<Poly> {
        ext.psi_total(&(&self.key * z))
    }

    /// `R_𝔗 = div(s)`.
    pub fn divisor(&self, table: &Arc<PrimeTable>) -> Result<QDivisor> {
        if self.key.is_zero() {
            return Err(Error::ZeroTrace);
        }
        divisor_of(&self.key, table)
    }
}

/// Outcome of transposing a base map along `𝔗`.
#[derive(Debug, Clone)]
pub struct TransposeResult {
    pub exists: bool,
    pub key_numer: Poly,
    pub key_denom: Poly,
    /// `π*Δ_φ − R_𝔗`.
    pub delta: QDivisor,
    /// The comparison element `w` with `Ψ∘Φ_S = Φ_R∘Ψ^{1/q}(w^{1/q}·)`.
    pub comparison: Poly,
}

impl TransposeResult {
    pub fn key(&self, e: u32) -> Result<Option<PMapKey>> {
        if !self.exists {
            return Ok(None);
        }
        let k = self.key_numer.exact_div(&self.key_denom)?.ok_or_else(|| Error::Verification("transpose key does not clear".into()))?;
        Ok(Some(PMapKey::new(k, e)?))
    }
}

/// F_*S is free over R on `(x^j·y^c)^{1/q}`, `j < n`, `c < q`; returns the `x^j·y^c`.
fn frobenius_basis(ext: &Monogenic, q: u64) -> Result<Vec<Poly>> {
    let total_basis = ext.total_basis()?;
    let y = ext.base_to_total(&ext.base().var(0))?;
    let mut out = Vec::new();
    for b in &total_basis {
        for c in 0..q {
            out.push(b * &y.pow(c));
        }
    }
    Ok(out)
}

fn require_univariate_base(ext: &Monogenic) -> Result<()> {
    if ext.base().nvars() != 1 {
        return Err(Error::Unsupported("transposes need a univariate base ring".into()));
    }
    Ok(())
}

/// `w ∈ S` with `Ψ(Φ_S(z^{1/q})) = Φ_R(Ψ(w·z)^{1/q})` for all `z`.
pub fn comparison_element(ext: &Monogenic, q: u64) -> Result<Poly> {
    require_univariate_base(ext)?;
    ext.cached_comparison(q, || {
        let total = ext.total()?.clone();
        let basis = frobenius_basis(ext, q)?;
        let top_r = [(q - 1) as u32];
        let m_of = |sigma: &Poly| -> Result<RatFunc> {
            let v = part_at(&ext.psi_total(sigma)?, q, &top_r);
            Ok(RatFunc::from_poly(UniPoly::from_poly(&v, 0)?))
        };
        let one = total.one();
        let mut a = Vec::with_capacity(basis.len());
        let mut b = Vec::with_capacity(basis.len());
        for zl in &basis {
            a.push(basis.iter().map(|zk| m_of(&(zk * zl))).collect::<Result<Vec<_>>>()?);
            let l = ext.psi_total(&apply_pmap_q(&one, q, zl))?;
            b.push(RatFunc::from_poly(UniPoly::from_poly(&l, 0)?));
        }
        let c = solve_ratfunc(a, b)?.ok_or_else(|| Error::Verification("comparison system is singular".into()))?;
        let mut w = total.zero();
        for (ck, zk) in c.iter().zip(&basis) {
            let ck = ck.as_poly().ok_or_else(|| Error::Verification("comparison coefficient is not integral".into()))?;
            let ck = ext.base_to_total(&ck.to_poly(ext.base(), 0))?;
            w = &w + &(&ck.frobenius_power(q)? * zk);
        }
        ext.to_total(&ext.from_total(&w)?)
    })
}

fn lowest_terms(num: &Poly, den: &Poly) -> Result<(Poly, Poly)> {
    let ring = num.ring();
    if let Some(q) = num.exact_div(den)? {
        return Ok((q, ring.one()));
    }
    let (num, den) = match (num.univariate_var(), den.univariate_var()) {
        (Ok(a), Ok(Some(b))) if a.is_none_or(|a| a == b) => {
            let a = b;
            let (un, ud) = (UniPoly::from_poly(num, a)?, UniPoly::from_poly(den, a)?);
            let g = un.gcd(&ud);
            (un.exact_div(&g).expect("gcd").to_poly(ring, a), ud.exact_div(&g).expect("gcd").to_poly(ring, a))
        }
        _ => (num.clone(), den.clone()),
    };
    let lc = den.lc();
    let inv = ring.field().inv(lc);
    Ok((num.scale(inv), den.scale(inv)))
}

/// The map `φ_𝔗` on S with `𝔗∘φ_𝔗 = φ∘𝔗^{1/q}`, when it exists.
pub fn transpose_key(ext: &Monogenic, phi: &PMapKey, tr: &TraceLike, total_table: &Arc<PrimeTable>) -> Result<TransposeResult> {
    require_univariate_base(ext)?;
    if phi.ring().as_ref() != ext.base().as_ref() || tr.key.ring().as_ref() != ext.total()?.as_ref() {
        return Err(Error::RingMismatch);
    }
    if tr.key.is_zero() {
        return Err(Error::ZeroTrace);
    }
    let q = phi.q;
    let w = comparison_element(ext, q)?;
    let num = ext.base_to_total(&phi.u)?;
    let den = &tr.key.pow(q - 1) * &w;
    let (key_numer, key_denom) = lowest_terms(&num, &den)?;
    let exists = key_denom.is_constant();

    let base_table = PrimeTable::empty(ext.base());
    let delta_phi = divisor_of(&phi.u, &base_table)?.scale(Rational64::new(1, q as i64 - 1));
    let pulled = ext.pullback(&delta_phi, total_table)?;
    let delta = pulled.sub(&tr.divisor(pulled.table())?)?;
    if exists != delta.is_effective() {
        return Err(Error::Verification(format!("transpose membership disagrees with the divisor test ({delta})")));
    }
    let result = TransposeResult { exists, key_numer, key_denom, delta, comparison: w };
    if let Some(key) = result.key(phi.e)? {
        for z in frobenius_basis(ext, q)? {
            let lhs = tr.apply(ext, &key.apply(&z))?;
            let rhs = phi.apply(&tr.apply(ext, &z)?);
            if lhs != rhs {
                return Err(Error::Verification(format!("transpose does not commute at {z}")));
            }
        }
        let law = delta_of_key(&key, &PrimeTable::empty(ext.total()?))
            .or_else(|_| divisor_of(key.key(), result.delta.table()).map(|d| d.scale(Rational64::new(1, q as i64 - 1))))?;
        if law.compare(&result.delta)? != crate::divisor::DivCmp::Equal {
            return Err(Error::Verification(format!("transpose divisor {law} differs from {}", result.delta)));
        }
        if tr.is_trace && ext.is_separable() {
            let y = ext.base().var(0);
            for c in 0..q {
                let yc = y.pow(c);
                if key.apply(&ext.base_to_total(&yc)?) != ext.base_to_total(&phi.apply(&yc))? {
                    return Err(Error::Verification("transpose does not extend the base map".into()));
                }
            }
        }
    }
    Ok(result)
}

/// Result of [`commute_check`]: the first failing `z` with both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommuteReport {
    pub commutes: bool,
    pub witness: Option<(Poly, Poly, Poly)>,
}

/// Does `ψ∘φ̄ = φ∘ψ^{1/q}` hold? Checked on the F_*R-basis of F_*S.
pub fn commute_check(ext: &Monogenic, phi: &PMapKey, phibar: &PMapKey, psi: &TraceLike) -> Result<CommuteReport> {
    require_univariate_base(ext)?;
    if phi.e != phibar.e {
        return Err(Error::Precondition("maps have different levels".into()));
    }
    if phi.ring().as_ref() != ext.base().as_ref() || phibar.ring().as_ref() != ext.total()?.as_ref() {
        return Err(Error::RingMismatch);
    }
    for z in frobenius_basis(ext, phi.q)? {
        let lhs = psi.apply(ext, &phibar.apply(&z))?;
        let rhs = phi.apply(&psi.apply(ext, &z)?);
        if lhs != rhs {
            return Ok(CommuteReport { commutes: false, witness: Some((z, lhs, rhs)) });
        }
    }
    Ok(CommuteReport { commutes: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;

    fn ring(p: u64, v: &str) -> Arc<PolyRing> {
        PolyRing::new(p, &[v], MonomialOrder::Lex).unwrap()
    }

    fn mono(base: (u64, &str), g: &str, total_var: &str, y_image: &str) -> Monogenic {
        let b = ring(base.0, base.1);
        let t = ring(base.0, total_var);
        Monogenic::new(&b, "T", g).unwrap().with_identification(&t, t.var(0), vec![t.parse(y_image).unwrap()]).unwrap()
    }

    #[test]
    fn deltas_and_keys() {
        let rt = ring(2, "t");
        let phi = PMapKey::new(rt.parse("t^2").unwrap(), 1).unwrap();
        let table = PrimeTable::new(&rt, [rt.var(0)]).unwrap();
        assert_eq!(delta_of_key(&phi, &table).unwrap().to_string(), "2[t]");
        let ry = ring(3, "y");
        let ty = PrimeTable::new(&ry, [ry.var(0)]).unwrap();
        let d = delta_of_key(&PMapKey::new(ry.var(0), 1).unwrap(), &ty).unwrap();
        assert_eq!(d.to_string(), "1/2[y]");
        assert_eq!(key_of_delta(&d, 1).unwrap().key(), &ry.var(0));
        assert!(delta_of_key(&PMapKey::new(ry.one(), 1).unwrap(), &ty).unwrap().is_zero());
        assert_eq!(key_of_delta(&QDivisor::zero(&ty), 1).unwrap().key(), &ry.one());
        let rx = ring(2, "x");
        let tx = PrimeTable::new(&rx, [rx.var(0)]).unwrap();
        let half = QDivisor::prime(&tx, &rx.var(0), Rational64::new(1, 2)).unwrap();
        assert_eq!(key_of_delta(&half, 1), Err(Error::NonIntegral { min_e: None }));
        let third = QDivisor::prime(&tx, &rx.var(0), Rational64::new(1, 3)).unwrap();
        assert_eq!(key_of_delta(&third, 1), Err(Error::NonIntegral { min_e: Some(2) }));
        assert!(matches!(delta_of_key(&PMapKey::new(rx.parse("x+1").unwrap(), 1).unwrap(), &tx), Err(Error::UncoveredFactor { .. })));
        assert_eq!(PMapKey::new(rx.zero(), 1), Err(Error::ZeroArgument("map key")));
    }

    #[test]
    fn iteration() {
        let rx = ring(2, "x");
        let phi = PMapKey::new(rx.var(0), 1).unwrap();
        assert_eq!(iterate_map(&phi, 1).unwrap(), phi);
        let phi2 = iterate_map(&phi, 2).unwrap();
        assert_eq!(phi2.key(), &rx.parse("x^3").unwrap());
        assert_eq!(phi2.e(), 2);
        for k in 0..12 {
            let g = rx.var(0).pow(k);
            assert_eq!(phi2.apply(&g), phi.apply(&phi.apply(&g)));
        }
    }

    #[test]
    fn comparison_is_a_unit() {
        let e = mono((3, "y"), "T^2 - y", "x", "x^2");
        assert_eq!(comparison_element(&e, 3).unwrap(), e.total().unwrap().one());
        let e = mono((2, "t"), "T^5 + T^2 + t", "x", "x^2+x^5");
        assert!(comparison_element(&e, 2).unwrap().is_unit());
    }

    #[test]
    fn transpose_y_x2() {
        let e = mono((3, "y"), "T^2 - y", "x", "x^2");
        let tr = TraceLike::trace(&e).unwrap();
        let tt = PrimeTable::empty(e.total().unwrap());
        let ry = e.base().clone();
        for (u, expect) in [("y", true), ("y^2 + y", true), ("1", false), ("y + 1", false), ("y^4", true)] {
            let phi = PMapKey::new(ry.parse(u).unwrap(), 1).unwrap();
            let res = transpose_key(&e, &phi, &tr, &tt).unwrap();
            assert_eq!(res.exists, expect, "{u}");
        }
    }

    #[test]
    fn transpose_nottame() {
        let e = mono((2, "t"), "T^5 + T^2 + t", "x", "x^2+x^5");
        let tr = TraceLike::trace(&e).unwrap();
        let tt = PrimeTable::new(e.total().unwrap(), [e.total().unwrap().var(0)]).unwrap();
        let phi = PMapKey::new(e.base().parse("t^2").unwrap(), 1).unwrap();
        let res = transpose_key(&e, &phi, &tr, &tt).unwrap();
        assert!(res.exists);
        let key = res.key(1).unwrap().unwrap();
        let x = e.total().unwrap().var(0);
        assert_eq!(key.apply(&x).to_string(), "x^3 + 1");
        assert_eq!(res.delta.to_string(), "2[x + 1] + 2[x^2 + x + 1]");
    }

    #[test]
    fn nocommute() {
        let e = mono((3, "y"), "T^2 - y", "x", "x^2");
        let total = e.total().unwrap().clone();
        let ry = e.base().clone();
        let tau = TraceLike::from_values(&e, &[ry.one(), ry.parse("y^2").unwrap()]).unwrap();
        assert_eq!(tau.key().to_string(), "x^4 + x");
        let phi = PMapKey::new(ry.parse("y^3 + y^2 + y").unwrap(), 1).unwrap();
        let y = ry.var(0);
        assert_eq!([phi.apply(&ry.one()), phi.apply(&y), phi.apply(&y.pow(2))], [ry.one(), ry.one(), y.clone()]);
        let phibar = PMapKey::new(total.parse("x^4 + x^2 + 1").unwrap(), 1).unwrap();
        let x = total.var(0);
        assert_eq!([phibar.apply(&total.one()), phibar.apply(&x), phibar.apply(&x.pow(2))], [total.one(), x.clone(), total.one()]);
        let rep = commute_check(&e, &phi, &phibar, &tau).unwrap();
        assert!(!rep.commutes);
        let (z, lhs, rhs) = rep.witness.unwrap();
        assert_eq!((z, lhs.to_string(), rhs.to_string()), (x, "y^2".to_string(), "y".to_string()));
    }

    #[test]
    fn trace_transposes_commute() {
        let e = mono((3, "y"), "T^2 - y", "x", "x^2");
        let tr = TraceLike::trace(&e).unwrap();
        let tt = PrimeTable::empty(e.total().unwrap());
        let phi = PMapKey::new(e.base().parse("y^2 + y").unwrap(), 1).unwrap();
        let res = transpose_key(&e, &phi, &tr, &tt).unwrap();
        let key = res.key(1).unwrap().unwrap();
        assert!(commute_check(&e, &phi, &key, &tr).unwrap().commutes);
        assert!(commute_check(&e, &phi, &key, &tr.scaled(2)).unwrap().commutes);
    }

    #[test]
    fn zero_trace_rejected() {
        let e = mono((3, "y"), "T^3 - y", "x", "x^3");
        assert_eq!(TraceLike::trace(&e), Err(Error::ZeroTrace));
    }
}
