//! Finite extensions R ⊆ S: monogenic `S = R[T]/(g)` and presented quotients with
//! a declared basis. Traces, the trace key, ramification and trace images.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex, OnceLock};

use crate::divisor::{divisor_of, PrimeTable, QDivisor, RingMap};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::poly::{mono_div, mono_divides, Monomial, MonomialOrder, Poly, PolyRing};
use crate::unipoly::univariate_factor;

/// Isomorphism of `R[T]/(g)` with a polynomial ring.
#[derive(Debug, Clone)]
pub struct Identification {
    total: Arc<PolyRing>,
    t_image: Poly,
    base_map: RingMap,
    /// Images of the total-ring variables in `R[T]`.
    back: Vec<Poly>,
}

impl Identification {
    pub fn total(&self) -> &Arc<PolyRing> {
        &self.total
    }

    pub fn t_image(&self) -> &Poly {
        &self.t_image
    }

    pub fn base_map(&self) -> &RingMap {
        &self.base_map
    }
}

/// `S = R[T]/(g)` with `g` monic in `T`.
#[derive(Debug, Clone)]
pub struct Monogenic {
    base: Arc<PolyRing>,
    gring: Arc<PolyRing>,
    g: Poly,
    n: usize,
    rel: Ideal,
    ident: Option<Identification>,
    trace_vals: OnceLock<Vec<Poly>>,
    w_cache: Arc<Mutex<BTreeMap<u64, Poly>>>,
}

fn bareiss_det(mut m: Vec<Vec<Poly>>, one: Poly) -> Result<Poly> {
    let n = m.len();
    let mut sign = false;
    let mut prev = one;
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return Ok(prev.ring().zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev)?.ok_or_else(|| Error::Verification("Bareiss step not exact".into()))?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign { d.neg() } else { d })
}

impl Monogenic {
    /// `g` is parsed in `R[T]`, with `T` named `tvar` (it must not be a base variable).
    pub fn new(base: &Arc<PolyRing>, tvar: &str, g: &str) -> Result<Monogenic> {
        if base.var_index(tvar).is_some() {
            return Err(Error::InvalidExtension(format!("`{tvar}` is already a base variable")));
        }
        let mut names = vec![tvar.to_string()];
        names.extend(base.vars().iter().cloned());
        let gring = PolyRing::with_field(base.field(), names, MonomialOrder::Lex)?;
        let g = gring.parse(g)?;
        Monogenic::from_poly(base, &gring, g)
    }

    fn from_poly(base: &Arc<PolyRing>, gring: &Arc<PolyRing>, g: Poly) -> Result<Monogenic> {
        let n = g.degree_in(0).unwrap_or(0) as usize;
        if n == 0 {
            return Err(Error::InvalidExtension("g must have positive degree in T".into()));
        }
        let mut lead = vec![0; gring.nvars()];
        lead[0] = n as u32;
        let top_ok = g.terms().iter().filter(|(m, _)| m[0] as usize == n).count() == 1 && g.coeff(&lead) == 1;
        if !top_ok {
            return Err(Error::InvalidExtension(format!("g = {g} is not monic in {}", gring.vars()[0])));
        }
        let rel = Ideal::principal(&g);
        Ok(Monogenic {
            base: base.clone(),
            gring: gring.clone(),
            g,
            n,
            rel,
            ident: None,
            trace_vals: OnceLock::new(),
            w_cache: Arc::new(Mutex::new(BTreeMap::new())),
        })
    }

    /// Identifies S with `total`: `T ↦ t_image` and base variable `i ↦ base_images[i]`.
    /// `T` must go to a variable of `total`; every other variable of `total` must be the
    /// image of a base variable.
    pub fn with_identification(mut self, total: &Arc<PolyRing>, t_image: Poly, base_images: Vec<Poly>) -> Result<Monogenic> {
        let base_map = RingMap::new(&self.base, total, base_images)?;
        if t_image.ring().as_ref() != total.as_ref() {
            return Err(Error::RingMismatch);
        }
        let mut images = vec![t_image.clone()];
        images.extend(base_map.images.iter().cloned());
        let check = self.g.substitute(total, &images)?;
        if !check.is_zero() {
            return Err(Error::InvalidExtension(format!("g does not vanish under the identification (gives {check})")));
        }
        let mut back = Vec::with_capacity(total.nvars());
        for k in 0..total.nvars() {
            let xk = total.var(k);
            if t_image == xk {
                back.push(self.gring.var(0));
            } else if let Some(i) = base_map.images.iter().position(|im| *im == xk) {
                back.push(self.gring.var(i + 1));
            } else {
                return Err(Error::InvalidExtension(format!(
                    "total variable `{}` is neither the image of T nor of a base variable",
                    total.vars()[k]
                )));
            }
        }
        // the composite R[T]/(g) -> total -> R[T]/(g) must be the identity
        for i in 0..self.base.nvars() {
            let there = base_map.images[i].substitute(&self.gring, &back)?;
            if !self.rel.normal_form(&(&there - &self.gring.var(i + 1)))?.is_zero() {
                return Err(Error::InvalidExtension("identification is not an isomorphism".into()));
            }
        }
        let there = t_image.substitute(&self.gring, &back)?;
        if !self.rel.normal_form(&(&there - &self.gring.var(0)))?.is_zero() {
            return Err(Error::InvalidExtension("identification is not an isomorphism".into()));
        }
        self.ident = Some(Identification { total: total.clone(), t_image, base_map, back });
        Ok(self)
    }

    pub fn base(&self) -> &Arc<PolyRing> {
        &self.base
    }

    pub fn gring(&self) -> &Arc<PolyRing> {
        &self.gring
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn identification(&self) -> Option<&Identification> {
        self.ident.as_ref()
    }

    fn ident_or_err(&self) -> Result<&Identification> {
        self.ident.as_ref().ok_or_else(|| Error::Precondition("extension has no polynomial-ring identification".into()))
    }

    pub fn total(&self) -> Result<&Arc<PolyRing>> {
        Ok(&self.ident_or_err()?.total)
    }

    /// `g′ ≠ 0`.
    pub fn is_separable(&self) -> bool {
        !self.reduce(&self.g.derivative(0)).map(|d| d.is_zero()).unwrap_or(true)
    }

    /// Base element as an element of `R[T]`.
    pub fn embed_base(&self, r: &Poly) -> Poly {
        let map: Vec<usize> = (1..=self.base.nvars()).collect();
        r.embed(&self.gring, &map)
    }

    pub fn t(&self) -> Poly {
        self.gring.var(0)
    }

    pub fn reduce(&self, a: &Poly) -> Result<Poly> {
        self.rel.normal_form(a)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        self.reduce(&(a * b))
    }

    /// Power-basis coordinates `a = Σ c_i T^i`, `c_i ∈ R`.
    pub fn coords(&self, a: &Poly) -> Result<Vec<Poly>> {
        let red = self.reduce(a)?;
        let mut buckets: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); self.n];
        for (m, c) in red.terms() {
            buckets[m[0] as usize].push((m[1..].to_vec(), *c));
        }
        Ok(buckets.into_iter().map(|ts| self.base.from_terms(ts)).collect())
    }

    pub fn from_coords(&self, c: &[Poly]) -> Poly {
        let mut acc = self.gring.zero();
        let t = self.t();
        for (i, ci) in c.iter().enumerate() {
            acc = &acc + &(&self.embed_base(ci) * &t.pow(i as u64));
        }
        acc
    }

    /// The canonical generator `Ψ` of `Hom_R(S, R)`: the `T^{n-1}` coordinate.
    pub fn psi(&self, a: &Poly) -> Result<Poly> {
        Ok(self.coords(a)?.pop().expect("n >= 1"))
    }

    /// Matrix of multiplication by `a` on the power basis (column `i` = coordinates of `a·T^i`).
    pub fn mult_matrix(&self, a: &Poly) -> Result<Vec<Vec<Poly>>> {
        let mut m = vec![vec![self.base.zero(); self.n]; self.n];
        let t = self.t();
        let mut cur = self.reduce(a)?;
        for i in 0..self.n {
            for (r, c) in self.coords(&cur)?.into_iter().enumerate() {
                m[r][i] = c;
            }
            cur = self.mul(&cur, &t)?;
        }
        Ok(m)
    }

    pub fn trace(&self, a: &Poly) -> Result<Poly> {
        let m = self.mult_matrix(a)?;
        let mut acc = self.base.zero();
        for (i, row) in m.iter().enumerate() {
            acc = &acc + &row[i];
        }
        Ok(acc)
    }

    pub fn norm(&self, a: &Poly) -> Result<Poly> {
        bareiss_det(self.mult_matrix(a)?, self.base.one())
    }

    /// `Tr(T^i)` for `i < n`.
    pub fn trace_values(&self) -> Result<&[Poly]> {
        if let Some(v) = self.trace_vals.get() {
            return Ok(v);
        }
        let t = self.t();
        let vals = (0..self.n).map(|i| self.trace(&t.pow(i as u64))).collect::<Result<Vec<_>>>()?;
        let _ = self.trace_vals.set(vals);
        Ok(self.trace_vals.get().expect("installed"))
    }

    /// The unique `s ∈ S` with `Ψ(s·T^i) = values[i]`: the key of the map taking `T^i ↦ values[i]`.
    /// The system is anti-triangular with unit anti-diagonal, hence solvable over R.
    pub fn key_from_values(&self, values: &[Poly]) -> Result<Poly> {
        if values.len() != self.n {
            return Err(Error::Precondition(format!("expected {} values", self.n)));
        }
        let t = self.t();
        // psi_pow[k] = Ψ(T^k) for k < 2n - 1
        let psi_pow = (0..2 * self.n - 1).map(|k| self.psi(&t.pow(k as u64))).collect::<Result<Vec<_>>>()?;
        let mut s = vec![self.base.zero(); self.n];
        for i in 0..self.n {
            let j0 = self.n - 1 - i;
            let mut rhs = values[i].clone();
            for (j, sj) in s.iter().enumerate().skip(j0 + 1) {
                rhs = &rhs - &(sj * &psi_pow[i + j]);
            }
            s[j0] = rhs;
        }
        let key = self.from_coords(&s);
        for (i, v) in values.iter().enumerate() {
            debug_assert_eq!(&self.psi(&(&key * &t.pow(i as u64)))?, v);
        }
        Ok(key)
    }

    /// The trace key `s` with `Tr = Ψ(s·)`; equals `g′(T)`.
    pub fn trace_key(&self) -> Result<Poly> {
        let vals = self.trace_values()?.to_vec();
        if vals.iter().all(|v| v.is_zero()) {
            return Err(Error::ZeroTrace);
        }
        let s = self.key_from_values(&vals)?;
        let gp = self.reduce(&self.g.derivative(0))?;
        if s != gp {
            return Err(Error::Verification(format!("trace key {s} differs from g' = {gp}")));
        }
        Ok(s)
    }

    /// S element to the identified polynomial ring.
    pub fn to_total(&self, a: &Poly) -> Result<Poly> {
        let id = self.ident_or_err()?;
        let mut images = vec![id.t_image.clone()];
        images.extend(id.base_map.images.iter().cloned());
        a.substitute(&id.total, &images)
    }

    /// Identified polynomial-ring element to S (reduced).
    pub fn from_total(&self, f: &Poly) -> Result<Poly> {
        let id = self.ident_or_err()?;
        self.reduce(&f.substitute(&self.gring, &id.back)?)
    }

    /// Base element mapped into the total ring.
    pub fn base_to_total(&self, r: &Poly) -> Result<Poly> {
        self.ident_or_err()?.base_map.apply(r)
    }

    /// Power-basis coordinates of a total-ring element.
    pub fn total_coords(&self, f: &Poly) -> Result<Vec<Poly>> {
        self.coords(&self.from_total(f)?)
    }

    /// `Ψ` on total-ring elements.
    pub fn psi_total(&self, f: &Poly) -> Result<Poly> {
        self.psi(&self.from_total(f)?)
    }

    pub fn trace_total(&self, f: &Poly) -> Result<Poly> {
        self.trace(&self.from_total(f)?)
    }

    pub fn norm_total(&self, f: &Poly) -> Result<Poly> {
        self.norm(&self.from_total(f)?)
    }

    /// Power basis mapped to the total ring.
    pub fn total_basis(&self) -> Result<Vec<Poly>> {
        let t = self.t();
        (0..self.n).map(|i| self.to_total(&t.pow(i as u64))).collect()
    }

    /// Cached per-`q` value; the first installed value wins.
    pub(crate) fn cached_comparison(&self, q: u64, compute: impl FnOnce() -> Result<Poly>) -> Result<Poly> {
        if let Some(w) = self.w_cache.lock().expect("cache lock").get(&q) {
            return Ok(w.clone());
        }
        let w = compute()?;
        Ok(self.w_cache.lock().expect("cache lock").entry(q).or_insert(w).clone())
    }

    /// Gram matrix `Tr(b_i·b_j)` of the power basis.
    pub fn trace_matrix(&self) -> Result<Vec<Vec<Poly>>> {
        let t = self.t();
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.trace(&t.pow((i + j) as u64))).collect())
            .collect()
    }

    pub fn trace_key_total(&self) -> Result<Poly> {
        self.to_total(&self.trace_key()?)
    }

    /// `Ram = div(g′(T))` on the total ring.
    pub fn ramification_divisor(&self, table: &Arc<PrimeTable>) -> Result<QDivisor> {
        if !self.is_separable() {
            return Err(Error::ZeroTrace);
        }
        let gp = self.to_total(&self.reduce(&self.g.derivative(0))?)?;
        divisor_of(&gp, table)
    }

    pub fn pullback(&self, d: &QDivisor, total_table: &Arc<PrimeTable>) -> Result<QDivisor> {
        crate::divisor::pullback_along(&self.ident_or_err()?.base_map, d, total_table)
    }

    /// Per-prime ramification classification. The base primes examined are those of
    /// `base_table` together with the prime factors of the discriminant when the base is
    /// univariate.
    pub fn tame_report(&self, base_table: &Arc<PrimeTable>) -> Result<Vec<RamEntry>> {
        let id = self.ident_or_err()?;
        let mut primes: Vec<Poly> = base_table.primes().to_vec();
        if self.is_separable() {
            let disc = self.norm(&self.reduce(&self.g.derivative(0))?)?;
            if !disc.is_constant() && disc.univariate_var().is_ok() {
                for (f, _) in univariate_factor(&disc)? {
                    if !primes.contains(&f) {
                        primes.push(f);
                    }
                }
            }
        }
        let p = self.base.p();
        let mut out = Vec::new();
        for bp in primes {
            let img = id.base_map.apply(&bp)?;
            let d = divisor_of(&img, &PrimeTable::empty(&id.total))?;
            for (c, k) in d.terms() {
                let index = k.to_integer() as u32;
                let kind = if index == 1 {
                    RamKind::Unramified
                } else if index.is_multiple_of(p) {
                    RamKind::Wild
                } else {
                    RamKind::Tame
                };
                out.push(RamEntry { base_prime: bp.clone(), total_prime: c.clone(), index, kind });
            }
        }
        Ok(out)
    }

    pub fn trace_image(&self) -> Result<TraceImage> {
        let ideal = Ideal::new(&self.base, self.trace_values()?.to_vec())?.canonical()?;
        Ok(TraceImage { ideal, conclusive: true })
    }
}

/// Codimension-one ramification type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RamKind {
    Tame,
    Wild,
    Unramified,
}

impl std::fmt::Display for RamKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RamKind::Tame => "tame",
            RamKind::Wild => "wild",
            RamKind::Unramified => "unramified",
        })
    }
}

/// One (base prime, total prime) pair with ramification index. Residue fields over
/// F_p are perfect, so only the index decides tameness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamEntry {
    pub base_prime: Poly,
    pub total_prime: Poly,
    pub index: u32,
    pub kind: RamKind,
}

/// The ideal `Tr(S) ⊆ R`; `conclusive` is false when it came from a bounded sweep.
#[derive(Debug, Clone)]
pub struct TraceImage {
    pub ideal: Ideal,
    pub conclusive: bool,
}

/// `S = A/I` over the subring generated by declared base variables, with a declared
/// basis of U-monomials over the fraction field of the base.
#[derive(Debug, Clone)]
pub struct Presented {
    ambient: Arc<PolyRing>,
    /// Work ring: extension variables (chosen order) first, then base variables.
    work: Arc<PolyRing>,
    /// ambient variable index -> work variable index
    to_work: Vec<usize>,
    nu: usize,
    rel: Ideal,
    base_ring: Arc<PolyRing>,
    base_ideal: Ideal,
    basis: Vec<Monomial>,
    basis_polys: Vec<Poly>,
    reducers: Vec<(Monomial, BTreeMap<Monomial, Poly>)>,
    box_bounds: Option<Vec<u32>>,
}

fn grevlex_u(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return x.cmp(y).reverse();
            }
        }
        std::cmp::Ordering::Equal
    })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

impl Presented {
    /// `relations` live in `ambient`; `basis` are monomials in the non-base variables;
    /// `base_vars` name the variables generating the base ring.
    pub fn new(ambient: &Arc<PolyRing>, relations: &Ideal, basis: &[Poly], base_vars: &[&str]) -> Result<Presented> {
        if relations.ring().as_ref() != ambient.as_ref() {
            return Err(Error::RingMismatch);
        }
        let mut bidx = Vec::new();
        for v in base_vars {
            bidx.push(ambient.var_index(v).ok_or_else(|| Error::InvalidExtension(format!("unknown base variable `{v}`")))?);
        }
        let uvars: Vec<usize> = (0..ambient.nvars()).filter(|i| !bidx.contains(i)).collect();
        if uvars.is_empty() {
            return Err(Error::InvalidExtension("no extension variables".into()));
        }
        if uvars.len() > 5 {
            return Err(Error::Unsupported("more than five extension variables".into()));
        }
        let mut basis_u: Vec<Monomial> = Vec::new();
        for b in basis {
            match b.terms() {
                [(m, 1)] if bidx.iter().all(|&i| m[i] == 0) => basis_u.push(m.clone()),
                _ => return Err(Error::InvalidExtension(format!("basis element {b} is not a monomial in the extension variables"))),
            }
        }
        let base_names: Vec<String> = bidx.iter().map(|&i| ambient.vars()[i].clone()).collect();
        let base_ring = PolyRing::with_field(ambient.field(), base_names, MonomialOrder::Grevlex)?;
        let mut last_err = None;
        for order in permutations(&uvars) {
            match Presented::try_order(ambient, relations, &basis_u, basis, &bidx, &order, &base_ring) {
                Ok(p) => return Ok(p),
                Err(e @ Error::ResourceExceeded(_)) => return Err(e),
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap_or_else(|| Error::InvalidExtension("declared basis is not a basis".into())))
    }

    fn try_order(
        ambient: &Arc<PolyRing>,
        relations: &Ideal,
        basis_amb: &[Monomial],
        basis_polys: &[Poly],
        bidx: &[usize],
        uorder: &[usize],
        base_ring: &Arc<PolyRing>,
    ) -> Result<Presented> {
        let nu = uorder.len();
        let mut perm: Vec<usize> = uorder.to_vec();
        perm.extend(bidx.iter().copied());
        let names: Vec<String> = perm.iter().map(|&i| ambient.vars()[i].clone()).collect();
        let work = PolyRing::with_field(ambient.field(), names, MonomialOrder::Block(nu))?;
        let mut to_work = vec![0; ambient.nvars()];
        for (pos, &i) in perm.iter().enumerate() {
            to_work[i] = pos;
        }
        let rel = Ideal::new(&work, relations.gens().iter().map(|g| g.embed(&work, &to_work)))?;
        let gb = rel.gb()?.to_vec();
        if gb.first().is_some_and(|g| g.is_unit()) {
            return Err(Error::InvalidExtension("relations generate the unit ideal".into()));
        }
        let base_map: Vec<usize> = (0..work.nvars()).map(|i| i.saturating_sub(nu)).collect();
        let mut base_gens = Vec::new();
        let mut reducers = Vec::new();
        for g in &gb {
            let split = split_u(g, nu, base_ring);
            if split.len() == 1 && split.keys().next().is_some_and(|m| m.iter().all(|e| *e == 0)) {
                base_gens.push(g.embed(base_ring, &base_map[..]));
            } else {
                let lead = split.keys().max_by(|a, b| grevlex_u(a, b)).expect("nonempty").clone();
                reducers.push((lead, split));
            }
        }
        let base_ideal = Ideal::new(base_ring, base_gens)?.canonical()?;
        let basis: Vec<Monomial> = basis_amb.iter().map(|m| uorder.iter().map(|&i| m[i]).collect()).collect();
        // standard monomials by breadth-first search
        let mut standard: BTreeSet<Monomial> = BTreeSet::new();
        let mut frontier = vec![vec![0u32; nu]];
        while let Some(m) = frontier.pop() {
            if standard.contains(&m) || reducers.iter().any(|(l, _)| mono_divides(l, &m)) {
                continue;
            }
            standard.insert(m.clone());
            if standard.len() > 4096 {
                return Err(Error::InvalidExtension("extension is not finite over the base".into()));
            }
            for k in 0..nu {
                let mut next = m.clone();
                next[k] += 1;
                frontier.push(next);
            }
        }
        let declared: BTreeSet<Monomial> = basis.iter().cloned().collect();
        if declared != standard || declared.len() != basis.len() {
            return Err(Error::InvalidExtension(format!(
                "declared basis does not match the {} standard monomials of the relations",
                standard.len()
            )));
        }
        // R-module generation by a box of monomials when each variable has a monic relation
        let mut box_bounds = Some(vec![0u32; nu]);
        for k in 0..nu {
            let bound = gb.iter().chain(rel.gens()).find_map(|g| {
                let split = split_u(g, nu, base_ring);
                let only_k = split.keys().all(|m| m.iter().enumerate().all(|(i, &e)| i == k || e == 0));
                let (lead, c) = split.iter().max_by(|a, b| grevlex_u(a.0, b.0))?;
                (only_k && lead[k] > 0 && c.is_unit()).then_some(lead[k])
            });
            match (bound, box_bounds.as_mut()) {
                (Some(b), Some(v)) => v[k] = b,
                _ => box_bounds = None,
            }
        }
        Ok(Presented {
            ambient: ambient.clone(),
            work,
            to_work,
            nu,
            rel,
            base_ring: base_ring.clone(),
            base_ideal,
            basis,
            basis_polys: basis_polys.to_vec(),
            reducers,
            box_bounds,
        })
    }

    pub fn ambient(&self) -> &Arc<PolyRing> {
        &self.ambient
    }

    pub fn base_ring(&self) -> &Arc<PolyRing> {
        &self.base_ring
    }

    /// Relations among the base variables (the base ring is `base_ring / base_ideal`).
    pub fn base_ideal(&self) -> &Ideal {
        &self.base_ideal
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis_polys
    }

    /// Ambient element to work-ring form.
    fn to_work(&self, f: &Poly) -> Result<Poly> {
        if f.ring().as_ref() != self.ambient.as_ref() {
            return Err(Error::RingMismatch);
        }
        Ok(f.embed(&self.work, &self.to_work))
    }

    /// Base-ring element (in the base polynomial ring) as an ambient element.
    pub fn base_to_ambient(&self, r: &Poly) -> Result<Poly> {
        let bidx: Vec<usize> = self.base_ring.vars().iter().map(|v| self.ambient.var_index(v).expect("base var")).collect();
        Ok(r.embed(&self.ambient, &bidx))
    }

    fn nf_base(&self, r: &Poly) -> Result<Poly> {
        self.base_ideal.normal_form(r)
    }

    /// `D·f ≡ Σ c_b·b (mod I)`; returns `(c, D)` with `c` indexed like the basis.
    pub fn coords(&self, f: &Poly) -> Result<(Vec<Poly>, Poly)> {
        let fw = self.rel.normal_form(&self.to_work(f)?)?;
        let mut cur: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in split_u(&fw, self.nu, &self.base_ring) {
            let c = self.nf_base(&c)?;
            if !c.is_zero() {
                cur.insert(m, c);
            }
        }
        let mut den = self.base_ring.one();
        let mut guard = 0u64;
        loop {
            let target = cur
                .keys()
                .filter(|m| self.reducers.iter().any(|(l, _)| mono_divides(l, m)))
                .max_by(|a, b| grevlex_u(a, b))
                .cloned();
            let Some(m) = target else { break };
            guard += 1;
            if guard > crate::groebner::step_cap() {
                return Err(Error::ResourceExceeded("pseudo-reduction did not terminate".into()));
            }
            let (lead, red) = self.reducers.iter().find(|(l, _)| mono_divides(l, &m)).expect("found above");
            let c = cur.remove(&m).expect("present");
            let lc = red[lead].clone();
            let shift = mono_div(&m, lead);
            let mut next: BTreeMap<Monomial, Poly> = BTreeMap::new();
            for (k, v) in cur {
                next.insert(k, &v * &lc);
            }
            for (k, v) in red {
                if k == lead {
                    continue;
                }
                let km: Monomial = k.iter().zip(&shift).map(|(a, b)| a + b).collect();
                let entry = next.entry(km).or_insert_with(|| self.base_ring.zero());
                *entry = &*entry - &(&c * v);
            }
            cur = BTreeMap::new();
            for (k, v) in next {
                let v = self.nf_base(&v)?;
                if !v.is_zero() {
                    cur.insert(k, v);
                }
            }
            den = self.nf_base(&(&den * &lc))?;
        }
        let mut out = vec![self.base_ring.zero(); self.basis.len()];
        for (m, c) in cur {
            let i = self.basis.iter().position(|b| *b == m).ok_or_else(|| Error::Verification("pseudo-reduction left a non-basis monomial".into()))?;
            out[i] = c;
        }
        Ok((out, den))
    }

    /// `N/D` as an element of the base ring, if it lies there.
    fn fraction_to_base(&self, n: &Poly, d: &Poly) -> Result<Poly> {
        let n = self.nf_base(n)?;
        if n.is_zero() {
            return Ok(n);
        }
        if let Some(q) = n.exact_div(d)? {
            return self.nf_base(&q);
        }
        // solve W·D = N modulo the base relations with D inverted, then read off W − q
        let mut names = vec!["aux_z".to_string(), "aux_w".to_string()];
        names.extend(self.base_ring.vars().iter().cloned());
        let big = PolyRing::with_field(self.base_ring.field(), names, MonomialOrder::Lex)?;
        let shift: Vec<usize> = (2..2 + self.base_ring.nvars()).collect();
        let (z, w) = (big.var(0), big.var(1));
        let dd = d.embed(&big, &shift);
        let mut gens = vec![&(&w * &dd) - &n.embed(&big, &shift), &big.one() - &(&z * &dd)];
        gens.extend(self.base_ideal.gens().iter().map(|g| g.embed(&big, &shift)));
        let sat = Ideal::new(&big, gens)?;
        for g in sat.gb()? {
            let wdeg = g.degree_in(1).unwrap_or(0);
            if g.degree_in(0).unwrap_or(0) == 0 && wdeg == 1 && g.terms()[0].0[1] == 1 && g.terms()[0].0.iter().enumerate().all(|(i, &e)| i == 1 || e == 0) {
                let rest = &w - g;
                let back: Vec<usize> = (0..big.nvars()).map(|i| i.saturating_sub(2)).collect();
                return self.nf_base(&rest.embed(&self.base_ring, &back));
            }
        }
        Err(Error::InvalidExtension(format!("value ({n})/({d}) is not in the base ring")))
    }

    /// Field trace of an ambient element, as a base-ring element in normal form.
    pub fn trace(&self, f: &Poly) -> Result<Poly> {
        let mut num = self.base_ring.zero();
        let mut den = self.base_ring.one();
        for (j, b) in self.basis_polys.iter().enumerate() {
            let (c, d) = self.coords(&(f * b))?;
            if c[j].is_zero() {
                continue;
            }
            if d == den {
                num = &num + &c[j];
            } else {
                num = self.nf_base(&(&(&num * &d) + &(&c[j] * &den)))?;
                den = self.nf_base(&(&den * &d))?;
            }
        }
        self.fraction_to_base(&num, &den)
    }

    /// `Tr(S)` as an ideal of the base polynomial ring containing the base relations.
    pub fn trace_image(&self, max_degree: u32) -> Result<TraceImage> {
        let base_gens = self.base_ideal.gens().to_vec();
        if let Some(bounds) = &self.box_bounds {
            let mut gens = base_gens;
            for m in box_monomials(bounds) {
                gens.push(self.trace(&self.u_monomial(&m))?);
            }
            return Ok(TraceImage { ideal: Ideal::new(&self.base_ring, gens)?.canonical()?, conclusive: true });
        }
        let mut acc = Ideal::new(&self.base_ring, base_gens)?.canonical()?;
        let mut quiet = 0;
        for d in 0..=max_degree {
            let mut gens = acc.gens().to_vec();
            for m in monomials_of_degree(self.nu, d) {
                gens.push(self.trace(&self.u_monomial(&m))?);
            }
            let next = Ideal::new(&self.base_ring, gens)?.canonical()?;
            if next.is_unit()? {
                return Ok(TraceImage { ideal: next, conclusive: true });
            }
            quiet = if next.equals(&acc)? { quiet + 1 } else { 0 };
            acc = next;
            if quiet >= 2 {
                break;
            }
        }
        Ok(TraceImage { ideal: acc, conclusive: false })
    }

    fn u_monomial(&self, m: &[u32]) -> Poly {
        let mut w = vec![0; self.work.nvars()];
        w[..self.nu].copy_from_slice(m);
        let inv: Vec<usize> = (0..self.work.nvars())
            .map(|k| self.to_work.iter().position(|&x| x == k).expect("bijection"))
            .collect();
        self.work.monomial(w, 1).embed(&self.ambient, &inv)
    }
}

fn box_monomials(bounds: &[u32]) -> Vec<Monomial> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        let mut next = Vec::new();
        for m in &out {
            for e in 0..b {
                let mut mm: Monomial = m.clone();
                mm.push(e);
                next.push(mm);
            }
        }
        out = next;
    }
    out
}

fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for e in 0..=d {
        for mut rest in monomials_of_degree(n - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Splits a work-ring polynomial by its monomial in the first `nu` variables;
/// coefficients land in `base`.
fn split_u(f: &Poly, nu: usize, base: &Arc<PolyRing>) -> BTreeMap<Monomial, Poly> {
    let mut buckets: BTreeMap<Monomial, Vec<(Monomial, u32)>> = BTreeMap::new();
    for (m, c) in f.terms() {
        buckets.entry(m[..nu].to_vec()).or_default().push((m[nu..].to_vec(), *c));
    }
    buckets.into_iter().map(|(k, ts)| (k, base.from_terms(ts))).collect()
}

/// A finite extension in one of the two supported shapes.
#[derive(Debug, Clone)]
pub enum ExtensionPres {
    Monogenic(Monogenic),
    Presented(Presented),
}

impl ExtensionPres {
    pub fn monogenic(&self) -> Result<&Monogenic> {
        match self {
            ExtensionPres::Monogenic(m) => Ok(m),
            ExtensionPres::Presented(_) => Err(Error::NonMonogenic),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ExtensionPres::Monogenic(_) => "monogenic",
            ExtensionPres::Presented(_) => "presented",
        }
    }

    /// The base polynomial ring (for presented extensions, modulo [`Presented::base_ideal`]).
    pub fn base_ring(&self) -> &Arc<PolyRing> {
        match self {
            ExtensionPres::Monogenic(m) => m.base(),
            ExtensionPres::Presented(p) => p.base_ring(),
        }
    }

    pub fn trace_image(&self) -> Result<TraceImage> {
        match self {
            ExtensionPres::Monogenic(m) => m.trace_image(),
            ExtensionPres::Presented(p) => p.trace_image(DEFAULT_SWEEP_DEGREE),
        }
    }

    /// `Tr(S) = R`; errors with `Inconclusive` rather than guessing.
    pub fn is_trace_surjective(&self) -> Result<bool> {
        let img = self.trace_image()?;
        if img.ideal.is_unit()? {
            return Ok(true);
        }
        if img.conclusive {
            Ok(false)
        } else {
            Err(Error::Inconclusive(format!("trace image {} did not stabilize within the sweep", img.ideal)))
        }
    }
}

/// Degree bound of the generator sweep used when no monic relations are available.
pub const DEFAULT_SWEEP_DEGREE: u32 = 6;
