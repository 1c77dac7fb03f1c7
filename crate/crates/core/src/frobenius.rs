//! Decomposition over the basis of q-th roots, Frobenius roots of ideals,
//! Cartier images and Fedder's criterion.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::{Monomial, Poly};

/// `f = Σ_b parts[b]^q · x^b` with every entry of `b` below `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeDecomposition {
    pub e: u32,
    pub q: u64,
    pub parts: BTreeMap<Monomial, Poly>,
}

impl PeDecomposition {
    /// Rebuilds the decomposed polynomial.
    pub fn reconstruct(&self, ring: &std::sync::Arc<crate::poly::PolyRing>) -> Result<Poly> {
        let mut acc = ring.zero();
        for (b, h) in &self.parts {
            acc = &acc + &h.frobenius_power(self.q)?.mul_term(b, 1);
        }
        Ok(acc)
    }

    /// The part at `b`, zero when absent.
    pub fn part(&self, b: &[u32]) -> Option<&Poly> {
        self.parts.get(b)
    }
}

/// Splits `f` by exponent residues modulo `q` (a power of p).
pub fn decompose_q(f: &Poly, q: u64) -> BTreeMap<Monomial, Poly> {
    let ring = f.ring();
    let mut buckets: BTreeMap<Monomial, Vec<(Monomial, u32)>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let b: Monomial = m.iter().map(|&x| (x as u64 % q) as u32).collect();
        let h: Monomial = m.iter().map(|&x| (x as u64 / q) as u32).collect();
        buckets.entry(b).or_default().push((h, *c));
    }
    buckets.into_iter().map(|(b, ts)| (b, ring.from_terms(ts))).collect()
}

/// The part of `f` at basis monomial `b` in its q-th root decomposition.
pub fn part_at(f: &Poly, q: u64, b: &[u32]) -> Poly {
    let ring = f.ring();
    ring.from_terms(f.terms().iter().filter_map(|(m, c)| {
        let ok = m.iter().zip(b).all(|(&x, &bb)| x as u64 % q == bb as u64);
        ok.then(|| (m.iter().map(|&x| (x as u64 / q) as u32).collect(), *c))
    }))
}

pub fn pe_decompose(f: &Poly, e: u32) -> Result<PeDecomposition> {
    if e == 0 {
        return Err(Error::Precondition("decomposition level must be at least 1".into()));
    }
    let q = f.field().q(e)?;
    let d = PeDecomposition { e, q, parts: decompose_q(f, q) };
    debug_assert_eq!(d.reconstruct(f.ring()).ok().as_ref(), Some(f));
    Ok(d)
}

/// `I^{[1/q]}`: generated by all parts of all reduced basis elements.
pub fn frob_root_q(ideal: &Ideal, q: u64) -> Result<Ideal> {
    let mut gens = Vec::new();
    for g in ideal.gb()? {
        gens.extend(decompose_q(g, q).into_values());
    }
    Ideal::new(ideal.ring(), gens)?.canonical()
}

pub fn frob_root(ideal: &Ideal, e: u32) -> Result<Ideal> {
    frob_root_q(ideal, ideal.ring().field().q(e)?)
}

/// `C_{u,e}(I) = (u·I)^{[1/q]}`, the image of I under `Φ_e(u^{1/q} ·)`.
pub fn cartier_apply(u: &Poly, e: u32, ideal: &Ideal) -> Result<Ideal> {
    cartier_apply_q(u, ideal.ring().field().q(e)?, ideal)
}

pub fn cartier_apply_q(u: &Poly, q: u64, ideal: &Ideal) -> Result<Ideal> {
    if u.is_zero() {
        return Err(Error::ZeroArgument("map key"));
    }
    frob_root_q(&ideal.scale(u)?, q)
}

/// `φ_u(g^{1/q}) = Φ_e((u·g)^{1/q})`: the part of `u·g` at `(q-1, …, q-1)`.
pub fn apply_pmap(u: &Poly, e: u32, g: &Poly) -> Result<Poly> {
    let q = u.field().q(e)?;
    Ok(apply_pmap_q(u, q, g))
}

pub fn apply_pmap_q(u: &Poly, q: u64, g: &Poly) -> Poly {
    let top = vec![(q - 1) as u32; u.ring().nvars()];
    part_at(&(u * g), q, &top)
}

/// Translation sending the point of a maximal ideal `⟨x_i - a_i⟩` to the origin.
/// Returns the point coordinates, or `NotMaximal`.
pub fn maximal_point(m: &Ideal) -> Result<Vec<u32>> {
    let ring = m.ring();
    let n = ring.nvars();
    let gb = m.gb()?;
    if gb.len() != n {
        return Err(Error::NotMaximal);
    }
    let mut point = vec![None; n];
    for g in gb {
        let vars = g.support_vars();
        if vars.len() != 1 || g.total_degree() != Some(1) {
            return Err(Error::NotMaximal);
        }
        let v = vars[0];
        point[v] = Some(ring.field().neg(g.constant_term()));
    }
    point.into_iter().map(|a| a.ok_or(Error::NotMaximal)).collect()
}

fn translate_to_origin(f: &Poly, point: &[u32]) -> Result<Poly> {
    if point.iter().all(|a| *a == 0) {
        return Ok(f.clone());
    }
    let ring = f.ring();
    let images: Vec<Poly> = (0..ring.nvars()).map(|i| &ring.var(i) + &ring.constant(point[i])).collect();
    f.substitute(ring, &images)
}

/// Fedder's test for the hypersurface `h` at the maximal ideal `m`:
/// `h^{p-1} ∉ m^{[p]}`.
pub fn fedder_test(h: &Poly, m: &Ideal) -> Result<bool> {
    if h.ring().as_ref() != m.ring().as_ref() {
        return Err(Error::RingMismatch);
    }
    let point = maximal_point(m)?;
    let h0 = translate_to_origin(h, &point)?;
    let p = h.field().p() as u64;
    let hp = h0.pow(p - 1);
    // m^{[p]} is monomial at the origin: membership is exponentwise
    Ok(hp.terms().iter().any(|(mono, _)| mono.iter().all(|&x| (x as u64) < p)))
}

/// General form: `(I^{[p]} : I) ⊄ m^{[p]}`.
pub fn fedder_test_ideal(ideal: &Ideal, m: &Ideal) -> Result<bool> {
    let point = maximal_point(m)?;
    let ring = ideal.ring();
    let moved = Ideal::new(ring, ideal.gens().iter().map(|g| translate_to_origin(g, &point)).collect::<Result<Vec<_>>>()?)?;
    let colon = moved.bracket_power(1)?.colon_ideal(&moved)?;
    let mp = Ideal::coordinate_maximal(ring).bracket_power(1)?;
    Ok(!mp.contains_ideal(&colon)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, PolyRing};
    use std::sync::Arc;

    fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(p, vars, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn decompositions() {
        let r = ring(2, &["x", "y"]);
        let d = pe_decompose(&r.parse("x^3*y^5").unwrap(), 1).unwrap();
        assert_eq!(d.parts.len(), 1);
        assert_eq!(d.part(&[1, 1]).unwrap(), &r.parse("x*y^2").unwrap());
        let rx = ring(2, &["x"]);
        let d = pe_decompose(&rx.parse("x^2").unwrap(), 1).unwrap();
        assert_eq!(d.part(&[0]).unwrap(), &rx.parse("x").unwrap());
        let d = pe_decompose(&rx.parse("x + x^7").unwrap(), 1).unwrap();
        assert_eq!(d.parts.len(), 1);
        assert_eq!(d.part(&[1]).unwrap(), &rx.parse("1 + x^3").unwrap());
    }

    #[test]
    fn roots() {
        let r = ring(2, &["x", "y"]);
        let i = Ideal::parse(&r, &["x^3*y^5"]).unwrap();
        assert_eq!(frob_root(&i, 1).unwrap().canonical_string().unwrap(), "⟨x*y^2⟩");
        let rx = ring(2, &["x"]);
        assert_eq!(frob_root(&Ideal::parse(&rx, &["x^2"]).unwrap(), 1).unwrap().canonical_string().unwrap(), "⟨x⟩");
        assert!(frob_root(&Ideal::unit(&rx), 3).unwrap().is_unit().unwrap());
    }

    #[test]
    fn cartier_images() {
        let r = ring(3, &["x"]);
        let q = 9;
        let i = Ideal::parse(&r, &["x^9"]).unwrap();
        assert_eq!(cartier_apply(&r.one(), 2, &i).unwrap().canonical_string().unwrap(), "⟨x⟩");
        let u = r.var(0).pow(q - 1);
        assert!(cartier_apply(&u, 2, &Ideal::unit(&r)).unwrap().is_unit().unwrap());
        assert!(matches!(cartier_apply(&r.zero(), 1, &i), Err(Error::ZeroArgument(_))));
    }

    #[test]
    fn pmap_values() {
        let ry = ring(3, &["y"]);
        assert_eq!(apply_pmap(&ry.one(), 1, &ry.parse("y^2").unwrap()).unwrap(), ry.one());
        let rx = ring(2, &["x"]);
        let key = rx.parse("(1+x^3)^2").unwrap();
        assert_eq!(apply_pmap(&key, 1, &rx.var(0)).unwrap(), rx.parse("1+x^3").unwrap());
        let rt = ring(2, &["t"]);
        assert_eq!(apply_pmap(&rt.parse("t^2").unwrap(), 1, &rt.var(0)).unwrap(), rt.var(0));
    }

    #[test]
    fn fedder_cases() {
        let r = ring(2, &["x", "y", "z"]);
        let h = r.parse("z^2 + x*y*z + x*y^2 + x^2*y").unwrap();
        let m = Ideal::coordinate_maximal(&r);
        assert!(fedder_test(&h, &m).unwrap());
        assert!(fedder_test_ideal(&Ideal::principal(&h), &m).unwrap());

        let rx = ring(2, &["x"]);
        let mx = Ideal::coordinate_maximal(&rx);
        assert!(!fedder_test(&rx.parse("x^2").unwrap(), &mx).unwrap());
        assert!(!fedder_test_ideal(&Ideal::parse(&rx, &["x^2"]).unwrap(), &mx).unwrap());

        for p in [2, 3, 5] {
            let r = ring(p, &["x", "y"]);
            let m = Ideal::coordinate_maximal(&r);
            let xy = r.parse("x*y").unwrap();
            assert!(fedder_test(&xy, &m).unwrap());
            assert!(fedder_test_ideal(&Ideal::principal(&xy), &m).unwrap());
        }
    }

    #[test]
    fn fedder_at_translated_points() {
        let r = ring(3, &["x", "y"]);
        let m = Ideal::parse(&r, &["x - 1", "y"]).unwrap();
        // the cusp moved to (1, 0)
        let h = r.parse("(x-1)^2 + y^3").unwrap();
        assert!(!fedder_test(&h, &m).unwrap());
        assert!(fedder_test(&h, &Ideal::coordinate_maximal(&r)).unwrap());
        assert_eq!(fedder_test(&h, &Ideal::parse(&r, &["x^2", "y"]).unwrap()), Err(Error::NotMaximal));
    }
}
