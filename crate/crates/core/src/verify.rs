//! Mechanical checks of how test ideals behave under finite maps: the trace
//! transformation rule, intersection with the base, containment of extended ideals, and
//! surjectivity certificates.

use std::sync::Arc;

use num_rational::Rational64;

use crate::divisor::{PrimeTable, QDivisor};
use crate::error::{Error, Result};
use crate::extension::{ExtensionPres, Monogenic};
use crate::groebner::Ideal;
use crate::pmap::TraceLike;
use crate::poly::{MonomialOrder, Poly, PolyRing};
use crate::testideal::{is_strongly_f_regular, tau, tau_fractional, tau_hypersurface, Ambient, FractionalIdeal, Triple};

/// Comparison of two (fractional) ideals of the base ring.
#[derive(Debug, Clone)]
pub struct Report {
    pub lhs: FractionalIdeal,
    pub rhs: FractionalIdeal,
    /// `π*Δ_X − R_𝔗`.
    pub delta_y: QDivisor,
    pub pass: bool,
}

/// Base data `(Δ_X, a, t)` transported to the total ring.
fn total_triple(ext: &Monogenic, tr: &TraceLike, delta_x: &QDivisor, a: &Ideal, t: Rational64, total_table: &Arc<PrimeTable>) -> Result<Triple> {
    let total = ext.total()?.clone();
    let pulled = ext.pullback(delta_x, total_table)?;
    let delta_y = pulled.sub(&tr.divisor(pulled.table())?)?;
    let a_y = Ideal::new(&total, a.gens().iter().map(|g| ext.base_to_total(g)).collect::<Result<Vec<_>>>()?)?;
    Triple::new(Ambient::Regular(total), delta_y, a_y, t)
}

fn base_triple(ext: &Monogenic, delta_x: &QDivisor, a: &Ideal, t: Rational64) -> Result<Triple> {
    Triple::new(Ambient::Regular(ext.base().clone()), delta_x.clone(), a.clone(), t)
}

/// `N(f)/f ∈ S` for nonzero `f` in the total ring.
fn norm_cofactor(ext: &Monogenic, f: &Poly) -> Result<(Poly, Poly)> {
    let n = ext.norm_total(f)?;
    let cof = ext.base_to_total(&n)?.exact_div(f)?.ok_or_else(|| Error::Verification(format!("N({f}) is not divisible by {f}")))?;
    Ok((n, cof))
}

/// `𝔗(τ(Y; π*Δ_X − R_𝔗, (a·O_Y)^t)) = τ(X; Δ_X, a^t)`.
pub fn verify_transformation(
    ext: &Monogenic,
    tr: &TraceLike,
    delta_x: &QDivisor,
    a: &Ideal,
    t: Rational64,
    total_table: &Arc<PrimeTable>,
    max_e: u32,
) -> Result<Report> {
    let ty = total_triple(ext, tr, delta_x, a, t, total_table)?;
    let tau_y = tau_fractional(&ty, max_e)?;
    let (nf, cof) = norm_cofactor(ext, &tau_y.denominator)?;
    let basis = ext.total_basis()?;
    let mut gens = Vec::new();
    for g in tau_y.numerator.gens() {
        let gc = g * &cof;
        for m in &basis {
            gens.push(tr.apply(ext, &(m * &gc))?);
        }
    }
    let lhs = FractionalIdeal::new(Ideal::new(ext.base(), gens)?, nf)?;
    let rhs = tau_fractional(&base_triple(ext, delta_x, a, t)?, max_e)?;
    let pass = lhs.equals(&rhs)?;
    Ok(Report { lhs, rhs, delta_y: ty.delta().clone(), pass })
}

/// `R ∩ J` for an ideal `J` of the total ring, by eliminating the total variables from
/// `J + ⟨y_i − π(y_i)⟩`.
pub fn contract(ext: &Monogenic, j: &Ideal) -> Result<Ideal> {
    let total = ext.total()?.clone();
    let base = ext.base().clone();
    let nt = total.nvars();
    let mut names: Vec<String> = total.vars().to_vec();
    for v in base.vars() {
        let mut name = v.clone();
        while names.contains(&name) {
            name.push('_');
        }
        names.push(name);
    }
    let big = PolyRing::with_field(total.field(), names, MonomialOrder::Grevlex)?;
    let tmap: Vec<usize> = (0..nt).collect();
    let mut gens: Vec<Poly> = j.gens().iter().map(|g| g.embed(&big, &tmap)).collect();
    for i in 0..base.nvars() {
        let img = ext.base_to_total(&base.var(i))?.embed(&big, &tmap);
        gens.push(&big.var(nt + i) - &img);
    }
    let kept = Ideal::new(&big, gens)?.eliminate(&tmap)?;
    let back: Vec<usize> = (0..big.nvars()).map(|k| k.saturating_sub(nt)).collect();
    Ideal::new(&base, kept.iter().map(|g| g.embed(&base, &back)))?.canonical()
}

/// `K(X) ∩ τ(Y; Δ_Y, (a·O_Y)^t) = τ(X; Δ_X, a^t)` with `𝔗` the trace; requires a surjective trace.
pub fn verify_intersection(
    ext: &Monogenic,
    delta_x: &QDivisor,
    a: &Ideal,
    t: Rational64,
    total_table: &Arc<PrimeTable>,
    max_e: u32,
) -> Result<Report> {
    if !ExtensionPres::Monogenic(ext.clone()).is_trace_surjective()? {
        return Err(Error::Precondition("the trace is not surjective".into()));
    }
    let tr = TraceLike::trace(ext)?;
    let ty = total_triple(ext, &tr, delta_x, a, t, total_table)?;
    let tau_y = tau_fractional(&ty, max_e)?;
    // K ∩ (1/f)·J = (1/N(f))·(R ∩ (N(f)/f)·J)
    let (nf, cof) = norm_cofactor(ext, &tau_y.denominator)?;
    let moved = tau_y.numerator.scale(&cof)?;
    let lhs = FractionalIdeal::new(contract(ext, &moved)?, nf)?;
    let rhs = tau_fractional(&base_triple(ext, delta_x, a, t)?, max_e)?;
    let pass = lhs.equals(&rhs)?;
    Ok(Report { lhs, rhs, delta_y: ty.delta().clone(), pass })
}

/// `τ(X; Δ_X, a^t)·O_Y ⊆ τ(Y; Δ_Y, (a·O_Y)^t)` with `𝔗` the trace.
#[derive(Debug, Clone)]
pub struct ContainmentReport {
    pub extended: Ideal,
    pub tau_y: Ideal,
    pub delta_y: QDivisor,
    pub contained: bool,
    pub strict: bool,
}

pub fn verify_containment_extension(
    ext: &Monogenic,
    delta_x: &QDivisor,
    a: &Ideal,
    t: Rational64,
    total_table: &Arc<PrimeTable>,
    max_e: u32,
) -> Result<ContainmentReport> {
    let tr = TraceLike::trace(ext)?;
    let ty = total_triple(ext, &tr, delta_x, a, t, total_table)?;
    if !delta_x.is_effective() || !ty.delta().is_effective() {
        return Err(Error::Precondition(format!("both boundaries must be effective (Δ_Y = {})", ty.delta())));
    }
    let tau_x = tau(&base_triple(ext, delta_x, a, t)?, max_e)?.ideal;
    let tau_y = tau(&ty, max_e)?.ideal.canonical()?;
    let extended = Ideal::new(&ty.ring().clone(), tau_x.gens().iter().map(|g| ext.base_to_total(g)).collect::<Result<Vec<_>>>()?)?.canonical()?;
    let contained = tau_y.contains_ideal(&extended)?;
    let strict = contained && !extended.contains_ideal(&tau_y)?;
    Ok(ContainmentReport { extended, tau_y, delta_y: ty.delta().clone(), contained, strict })
}

/// Outcome of the sufficient criterion for a surjective trace:
/// (i) `π*Δ_X − Ram ≥ 0` and (ii) `(X, Δ_X)` strongly F-regular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub certified: bool,
    pub boundary_effective: Option<bool>,
    pub strongly_f_regular: bool,
    pub direct_surjective: Option<bool>,
    pub reasons: Vec<String>,
}

pub fn surjectivity_certificate(ext: &ExtensionPres, delta_x: &QDivisor, max_e: u32) -> Result<Certificate> {
    let mut reasons = Vec::new();
    let (boundary_effective, sfr) = match ext {
        ExtensionPres::Monogenic(m) => {
            let total_table = PrimeTable::empty(m.total()?);
            let pulled = m.pullback(delta_x, &total_table)?;
            let ram = m.ramification_divisor(pulled.table())?;
            let dy = pulled.sub(&ram)?;
            let eff = dy.is_effective();
            if !eff {
                reasons.push(format!("π*Δ_X − Ram = {dy} is not effective"));
            }
            let sfr = is_strongly_f_regular(&Triple::pair(delta_x.clone()), max_e)?;
            (Some(eff), sfr)
        }
        ExtensionPres::Presented(p) => {
            if !delta_x.is_zero() {
                return Err(Error::Unsupported("boundary divisors on a presented base".into()));
            }
            reasons.push("ramification divisor unavailable for presented extensions".into());
            let gens = p.base_ideal().gens();
            let sfr = match gens {
                [] => true,
                [h] => tau_hypersurface(h, None)?.is_unit()?,
                _ => return Err(Error::Unsupported("base rings cut out by more than one equation".into())),
            };
            (None, sfr)
        }
    };
    if !sfr {
        reasons.push("(X, Δ_X) is not strongly F-regular".into());
    }
    let certified = boundary_effective == Some(true) && sfr;
    let direct_surjective = match ext.is_trace_surjective() {
        Ok(b) => Some(b),
        Err(Error::Inconclusive(_)) => None,
        Err(e) => return Err(e),
    };
    if certified && direct_surjective == Some(false) {
        return Err(Error::Verification("certified extension has a non-surjective trace".into()));
    }
    Ok(Certificate { certified, boundary_effective, strongly_f_regular: sfr, direct_surjective, reasons })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::parse_divisor;
    use crate::extension::Presented;
    use crate::testideal::DEFAULT_MAX_E;

    fn mono(p: u64, bv: &str, g: &str, y_image: &str) -> Monogenic {
        let b = PolyRing::new(p, &[bv], MonomialOrder::Grevlex).unwrap();
        let t = PolyRing::new(p, &["x"], MonomialOrder::Grevlex).unwrap();
        Monogenic::new(&b, "T", g).unwrap().with_identification(&t, t.var(0), vec![t.parse(y_image).unwrap()]).unwrap()
    }

    fn div(ring: &Arc<PolyRing>, s: &str) -> QDivisor {
        parse_divisor(s, &PrimeTable::empty(ring)).unwrap()
    }

    #[test]
    fn nonoptimal_double_cover() {
        let e = mono(3, "y", "T^2 - y", "x^2");
        let tr = TraceLike::trace(&e).unwrap();
        let tt = PrimeTable::empty(e.total().unwrap());
        let unit = Ideal::unit(e.base());
        let dx = div(e.base(), "1[y]");
        let rep = verify_transformation(&e, &tr, &dx, &unit, Rational64::from_integer(0), &tt, DEFAULT_MAX_E).unwrap();
        assert!(rep.pass, "{} vs {}", rep.lhs, rep.rhs);
        assert_eq!(rep.delta_y.to_string(), "1[x]");
        assert_eq!(rep.rhs.to_string(), "⟨y⟩");
        let rep = verify_intersection(&e, &dx, &unit, Rational64::from_integer(0), &tt, DEFAULT_MAX_E).unwrap();
        assert!(rep.pass);
        let c = verify_containment_extension(&e, &dx, &unit, Rational64::from_integer(0), &tt, DEFAULT_MAX_E).unwrap();
        assert!(c.contained && c.strict);
        assert_eq!(c.extended.canonical_string().unwrap(), "⟨x^2⟩");
        assert_eq!(c.tau_y.canonical_string().unwrap(), "⟨x⟩");
    }

    #[test]
    fn nottame_transformation() {
        let e = mono(2, "t", "T^5 + T^2 + t", "x^2 + x^5");
        let tr = TraceLike::trace(&e).unwrap();
        let tt = PrimeTable::empty(e.total().unwrap());
        let unit = Ideal::unit(e.base());
        let dx = div(e.base(), "2[t]");
        let rep = verify_transformation(&e, &tr, &dx, &unit, Rational64::from_integer(0), &tt, DEFAULT_MAX_E).unwrap();
        assert!(rep.pass, "{} vs {}", rep.lhs, rep.rhs);
        assert_eq!(rep.delta_y.to_string(), "2[x + 1] + 2[x^2 + x + 1]");
        let c = verify_containment_extension(&e, &dx, &unit, Rational64::from_integer(0), &tt, DEFAULT_MAX_E).unwrap();
        assert!(c.contained);
    }

    #[test]
    fn negative_boundary_and_ideals() {
        let e = mono(3, "y", "T^2 - y", "x^2");
        let tr = TraceLike::trace(&e).unwrap();
        let tt = PrimeTable::empty(e.total().unwrap());
        let zero = QDivisor::zero(&PrimeTable::empty(e.base()));
        let unit = Ideal::unit(e.base());
        // Δ_Y = −1[x] is not effective
        let rep = verify_transformation(&e, &tr, &zero, &unit, Rational64::from_integer(0), &tt, DEFAULT_MAX_E).unwrap();
        assert!(rep.pass, "{} vs {}", rep.lhs, rep.rhs);
        let a = Ideal::parse(e.base(), &["y"]).unwrap();
        for t in [Rational64::new(1, 2), Rational64::new(3, 2), Rational64::from_integer(2)] {
            let rep = verify_transformation(&e, &tr, &zero, &a, t, &tt, DEFAULT_MAX_E).unwrap();
            assert!(rep.pass, "t={t}: {} vs {}", rep.lhs, rep.rhs);
        }
    }

    #[test]
    fn etale_and_kummer() {
        let e = mono(3, "y", "T^3 - T - y", "x^3 - x");
        let tr = TraceLike::trace(&e).unwrap();
        assert!(tr.key().is_unit());
        let tt = PrimeTable::empty(e.total().unwrap());
        let zero = QDivisor::zero(&PrimeTable::empty(e.base()));
        let unit = Ideal::unit(e.base());
        let rep = verify_transformation(&e, &tr, &zero, &unit, Rational64::from_integer(0), &tt, DEFAULT_MAX_E).unwrap();
        assert!(rep.pass && rep.lhs.numerator.is_unit().unwrap());
        let c = verify_containment_extension(&e, &zero, &unit, Rational64::from_integer(0), &tt, DEFAULT_MAX_E).unwrap();
        assert!(c.contained && !c.strict);
        let cert = surjectivity_certificate(&ExtensionPres::Monogenic(e), &zero, DEFAULT_MAX_E).unwrap();
        assert!(cert.certified);

        let k = mono(2, "y", "T^3 - y", "x^3");
        let dk = div(k.base(), "2/3[y]");
        let cert = surjectivity_certificate(&ExtensionPres::Monogenic(k.clone()), &dk, DEFAULT_MAX_E).unwrap();
        assert!(cert.certified, "{:?}", cert.reasons);
        assert_eq!(cert.direct_surjective, Some(true));
        let tt = PrimeTable::empty(k.total().unwrap());
        let rep = verify_intersection(&k, &dk, &Ideal::unit(k.base()), Rational64::from_integer(0), &tt, DEFAULT_MAX_E).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn certificates() {
        let e = mono(3, "y", "T^2 - y", "x^2");
        let half = div(e.base(), "1/2[y]");
        let cert = surjectivity_certificate(&ExtensionPres::Monogenic(e.clone()), &half, DEFAULT_MAX_E).unwrap();
        assert!(cert.certified);
        let zero = QDivisor::zero(&PrimeTable::empty(e.base()));
        let cert = surjectivity_certificate(&ExtensionPres::Monogenic(e), &zero, DEFAULT_MAX_E).unwrap();
        assert!(!cert.certified);
        assert_eq!(cert.direct_surjective, Some(true));

        let amb = PolyRing::new(2, &["x", "y", "z", "u", "v"], MonomialOrder::Grevlex).unwrap();
        let rel = Ideal::parse(&amb, &["u^2 + x*u + x", "v^2 + y*v + y", "z + x*v + y*u"]).unwrap();
        let p = Presented::new(&amb, &rel, &[amb.one(), amb.parse("u").unwrap()], &["x", "y", "z"]).unwrap();
        let zero = QDivisor::zero(&PrimeTable::empty(p.base_ring()));
        let cert = surjectivity_certificate(&ExtensionPres::Presented(p), &zero, DEFAULT_MAX_E).unwrap();
        assert!(!cert.certified && !cert.strongly_f_regular);
        assert_eq!(cert.direct_surjective, Some(false));
    }

    #[test]
    fn intersection_needs_surjective_trace() {
        let e = mono(3, "y", "T^3 - y", "x^3");
        let tt = PrimeTable::empty(e.total().unwrap());
        let zero = QDivisor::zero(&PrimeTable::empty(e.base()));
        let r = verify_intersection(&e, &zero, &Ideal::unit(e.base()), Rational64::from_integer(0), &tt, DEFAULT_MAX_E);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
