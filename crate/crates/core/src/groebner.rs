//! Ideals, reduced Gröbner bases (Buchberger) and ideal arithmetic.

use std::collections::HashSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::poly::{mono_div, mono_divides, mono_lcm, Monomial, MonomialOrder, Poly, PolyRing};

/// Default bound on reduction steps per Gröbner basis computation.
pub const DEFAULT_STEP_CAP: u64 = 1_000_000;

static STEP_CAP: AtomicU64 = AtomicU64::new(DEFAULT_STEP_CAP);

/// Sets the process-wide reduction step cap.
pub fn set_step_cap(cap: u64) {
    STEP_CAP.store(cap.max(1), AtomicOrdering::Relaxed);
}

pub fn step_cap() -> u64 {
    STEP_CAP.load(AtomicOrdering::Relaxed)
}

struct Budget {
    used: u64,
    cap: u64,
}

impl Budget {
    fn new() -> Self {
        Budget { used: 0, cap: step_cap() }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            Err(Error::ResourceExceeded(format!("Gröbner basis computation exceeded {} reduction steps", self.cap)))
        } else {
            Ok(())
        }
    }
}

/// Full reduction of `f` modulo `basis` (leading monomials are searched in order).
fn reduce(f: &Poly, basis: &[Poly], budget: &mut Budget) -> Result<Poly> {
    let ring = f.ring().clone();
    let fld = ring.field();
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, u32)> = Vec::new();
    while let Some((m, c)) = p.leading_term() {
        match basis.iter().find(|g| mono_divides(g.lm(), m)) {
            Some(g) => {
                budget.tick()?;
                let shift = mono_div(m, g.lm());
                let k = fld.mul(c, fld.inv(g.lc()));
                p = p.add_scaled_shifted(fld.neg(k), &shift, g);
            }
            None => {
                let mut terms = p.into_terms();
                let lead = terms.remove(0);
                rem.push(lead);
                p = Poly::from_sorted_terms(ring.clone(), terms);
            }
        }
    }
    Ok(Poly::from_sorted_terms(ring, rem))
}

fn spoly(f: &Poly, g: &Poly) -> Poly {
    let l = mono_lcm(f.lm(), g.lm());
    let fld = f.field();
    let a = f.mul_term(&mono_div(&l, f.lm()), fld.inv(f.lc()));
    a.add_scaled_shifted(fld.neg(fld.inv(g.lc())), &mono_div(&l, g.lm()), g)
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Reduced, monic Gröbner basis sorted by ascending leading monomial.
fn buchberger(ring: &Arc<PolyRing>, gens: &[Poly]) -> Result<Vec<Poly>> {
    let mut budget = Budget::new();
    let mut basis: Vec<Poly> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let add = |h: Poly, basis: &mut Vec<Poly>, pending: &mut HashSet<(usize, usize)>| {
        let k = basis.len();
        basis.push(h.monic());
        for i in 0..k {
            pending.insert((i, k));
        }
    };

    for g in gens {
        let r = reduce(g, &basis, &mut budget)?;
        if r.is_unit() {
            return Ok(vec![ring.one()]);
        }
        if !r.is_zero() {
            add(r, &mut basis, &mut pending);
        }
    }

    while !pending.is_empty() {
        // normal selection: smallest lcm, ties broken by indices for determinism
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = mono_lcm(basis[a.0].lm(), basis[a.1].lm());
                let lb = mono_lcm(basis[b.0].lm(), basis[b.1].lm());
                ring.cmp_monomials(&la, &lb).then(a.cmp(b))
            })
            .expect("nonempty");
        pending.remove(&(i, j));
        let (fi, fj) = (&basis[i], &basis[j]);
        if coprime(fi.lm(), fj.lm()) {
            continue;
        }
        let l = mono_lcm(fi.lm(), fj.lm());
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && mono_divides(basis[k].lm(), &l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = spoly(fi, fj);
        let r = reduce(&s, &basis, &mut budget)?;
        if r.is_unit() {
            return Ok(vec![ring.one()]);
        }
        if !r.is_zero() {
            add(r, &mut basis, &mut pending);
        }
    }

    // minimalize
    let mut keep: Vec<Poly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(k, h)| {
            k != i && mono_divides(h.lm(), g.lm()) && (h.lm() != g.lm() || k < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // interreduce
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Poly> = keep.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, g)| g.clone()).collect();
        out.push(reduce(&keep[i], &others, &mut budget)?.monic());
    }
    out.sort_by(|a, b| ring.cmp_monomials(a.lm(), b.lm()));
    Ok(out)
}

/// An ideal given by generators, with a lazily computed reduced Gröbner basis.
#[derive(Clone)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Poly>,
    gb: OnceLock<Vec<Poly>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({self})")
    }
}

/// Shows the generators as `⟨g1, g2⟩`.
impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "⟨{}⟩", parts.join(", "))
    }
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, gens: impl IntoIterator<Item = Poly>) -> Result<Ideal> {
        let mut v = Vec::new();
        for g in gens {
            if g.ring().as_ref() != ring.as_ref() {
                return Err(Error::RingMismatch);
            }
            if !g.is_zero() && !v.contains(&g) {
                v.push(g);
            }
        }
        Ok(Ideal { ring: ring.clone(), gens: v, gb: OnceLock::new() })
    }

    pub fn principal(f: &Poly) -> Ideal {
        Ideal::new(f.ring(), [f.clone()]).expect("same ring")
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Ideal {
        Ideal::principal(&ring.one())
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Ideal {
        Ideal { ring: ring.clone(), gens: Vec::new(), gb: OnceLock::new() }
    }

    /// The ideal of all variables, i.e. the maximal ideal at the origin.
    pub fn coordinate_maximal(ring: &Arc<PolyRing>) -> Ideal {
        Ideal::new(ring, (0..ring.nvars()).map(|i| ring.var(i))).expect("same ring")
    }

    pub fn parse(ring: &Arc<PolyRing>, gens: &[&str]) -> Result<Ideal> {
        let polys = gens.iter().map(|g| ring.parse(g)).collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, polys)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    fn check_ring(&self, other: &Ideal) -> Result<()> {
        if self.ring.as_ref() == other.ring.as_ref() {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Reduced monic Gröbner basis for the ring's order (cached).
    pub fn gb(&self) -> Result<&[Poly]> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let computed = buchberger(&self.ring, &self.gens)?;
        // a concurrent fill computes the same unique basis, so losing the race is harmless
        let _ = self.gb.set(computed);
        Ok(self.gb.get().expect("just installed"))
    }

    /// The same ideal presented by its reduced Gröbner basis.
    pub fn canonical(&self) -> Result<Ideal> {
        let gb = self.gb()?.to_vec();
        let out = Ideal { ring: self.ring.clone(), gens: gb.clone(), gb: OnceLock::new() };
        let _ = out.gb.set(gb);
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.gb()?.first().is_some_and(|g| g.is_unit()))
    }

    pub fn normal_form(&self, f: &Poly) -> Result<Poly> {
        if f.ring().as_ref() != self.ring.as_ref() {
            return Err(Error::RingMismatch);
        }
        reduce(f, self.gb()?, &mut Budget::new())
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// True if `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(other)?;
        for g in other.gens() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        self.check_ring(other)?;
        Ok(self.gb()? == other.gb()?)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        Ideal::new(&self.ring, self.gens.iter().chain(other.gens.iter()).cloned())
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut out = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                out.push(a * b);
            }
        }
        Ideal::new(&self.ring, out)
    }

    /// `f · I`.
    pub fn scale(&self, f: &Poly) -> Result<Ideal> {
        if f.ring().as_ref() != self.ring.as_ref() {
            return Err(Error::RingMismatch);
        }
        Ideal::new(&self.ring, self.gens.iter().map(|g| g * f))
    }

    /// Ordinary power `I^n`; intermediate results are replaced by Gröbner bases.
    pub fn power(&self, n: u64) -> Result<Ideal> {
        if n == 0 {
            return Ok(Ideal::unit(&self.ring));
        }
        if self.gens.len() == 1 {
            return Ok(Ideal::principal(&self.gens[0].pow(n)));
        }
        let mut acc = Ideal::unit(&self.ring);
        let mut base = self.canonical()?;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.product(&base)?.canonical()?;
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base)?.canonical()?;
            }
        }
        Ok(acc)
    }

    /// Elements of the reduced basis, for an elimination order, free of the given variables.
    /// The result generates `I ∩ F_p[remaining variables]` inside the original ring.
    pub fn eliminate(&self, elim: &[usize]) -> Result<Vec<Poly>> {
        let n = self.ring.nvars();
        let mut perm: Vec<usize> = elim.to_vec();
        perm.extend((0..n).filter(|i| !elim.contains(i)));
        let names: Vec<String> = perm.iter().map(|&i| self.ring.vars()[i].clone()).collect();
        let er = PolyRing::with_field(self.ring.field(), names, MonomialOrder::Block(elim.len()))?;
        // old variable i sits at position inv[i] of the elimination ring
        let mut inv = vec![0; n];
        for (pos, &i) in perm.iter().enumerate() {
            inv[i] = pos;
        }
        let moved = Ideal::new(&er, self.gens.iter().map(|g| g.embed(&er, &inv)))?;
        let kept = moved
            .gb()?
            .iter()
            .filter(|g| g.terms().iter().all(|(m, _)| m[..elim.len()].iter().all(|e| *e == 0)))
            .map(|g| g.embed(&self.ring, &perm))
            .collect();
        Ok(kept)
    }

    /// `I ∩ J` by eliminating an auxiliary variable from `t·I + (1 − t)·J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        let mut aux = String::from("aux_t");
        while self.ring.var_index(&aux).is_some() {
            aux.push('_');
        }
        let mut names = vec![aux];
        names.extend(self.ring.vars().iter().cloned());
        let big = PolyRing::with_field(self.ring.field(), names, MonomialOrder::Block(1))?;
        let n = self.ring.nvars();
        let map: Vec<usize> = (1..=n).collect();
        let t = big.var(0);
        let one_minus_t = &big.one() - &t;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&t * &g.embed(&big, &map));
        }
        for g in &other.gens {
            gens.push(&one_minus_t * &g.embed(&big, &map));
        }
        let joint = Ideal::new(&big, gens)?;
        let back: Vec<usize> = (0..=n).map(|i| i.saturating_sub(1)).collect();
        let kept = joint
            .gb()?
            .iter()
            .filter(|g| g.terms().iter().all(|(m, _)| m[0] == 0))
            .map(|g| g.embed(&self.ring, &back))
            .collect::<Vec<_>>();
        Ideal::new(&self.ring, kept)?.canonical()
    }

    /// `(I : f) = (I ∩ ⟨f⟩) / f`.
    pub fn colon(&self, f: &Poly) -> Result<Ideal> {
        if f.ring().as_ref() != self.ring.as_ref() {
            return Err(Error::RingMismatch);
        }
        if f.is_zero() {
            return Err(Error::ZeroArgument("colon element"));
        }
        let meet = self.intersect(&Ideal::principal(f))?;
        let mut out = Vec::new();
        for g in meet.gens() {
            out.push(g.exact_div(f)?.ok_or_else(|| Error::Verification("colon quotient not exact".into()))?);
        }
        Ideal::new(&self.ring, out)?.canonical()
    }

    /// `(I : J)` as the intersection of the element colons over generators of `J`.
    pub fn colon_ideal(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut acc = Ideal::unit(&self.ring);
        for g in other.gens() {
            acc = acc.intersect(&self.colon(g)?)?;
        }
        Ok(acc)
    }

    /// Frobenius power `I^{[p^e]}`.
    pub fn bracket_power(&self, e: u32) -> Result<Ideal> {
        let q = self.ring.field().q(e)?;
        self.bracket_q(q)
    }

    /// `I^{[q]}` for `q` a power of p.
    pub fn bracket_q(&self, q: u64) -> Result<Ideal> {
        let gens = self.gens.iter().map(|g| g.frobenius_power(q)).collect::<Result<Vec<_>>>()?;
        Ideal::new(&self.ring, gens)
    }

    /// Moves the ideal into a ring with the same variables and another order.
    pub fn reorder(&self, target: &Arc<PolyRing>) -> Result<Ideal> {
        Ideal::new(target, self.gens.iter().map(|g| g.reorder(target)))
    }

    /// Canonical text: the reduced basis as `⟨…⟩`, or `⟨0⟩` for the zero ideal.
    pub fn canonical_string(&self) -> Result<String> {
        let gb = self.gb()?;
        if gb.is_empty() {
            return Ok("⟨0⟩".into());
        }
        let parts: Vec<String> = gb.iter().map(|g| g.to_string()).collect();
        Ok(format!("⟨{}⟩", parts.join(", ")))
    }
}

/// Sum or product selector for [`ideal_combine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Product,
}

pub fn ideal_combine(kind: Combine, a: &Ideal, b: &Ideal) -> Result<Ideal> {
    match kind {
        Combine::Sum => a.sum(b),
        Combine::Product => a.product(b),
    }
}
