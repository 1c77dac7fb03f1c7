//! Dense univariate polynomials over F_p and their factorization
//! (squarefree decomposition, distinct-degree and equal-degree splitting).

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::poly::{Poly, PolyRing};

/// Default seed for the randomized equal-degree splitting.
pub const DEFAULT_SEED: u64 = 0x5eed;

static FACTOR_SEED: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(DEFAULT_SEED);

/// Sets the process-wide seed for random splitting. Factorizations are sorted, so
/// results do not depend on it.
pub fn set_factor_seed(seed: u64) {
    FACTOR_SEED.store(seed, std::sync::atomic::Ordering::Relaxed);
}

/// Dense coefficient vector, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    f: FieldCtx,
    c: Vec<u32>,
}

impl UniPoly {
    pub fn new(f: FieldCtx, mut c: Vec<u32>) -> Self {
        for x in c.iter_mut() {
            *x %= f.p();
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        UniPoly { f, c }
    }

    pub fn zero(f: FieldCtx) -> Self {
        UniPoly { f, c: Vec::new() }
    }

    pub fn one(f: FieldCtx) -> Self {
        UniPoly { f, c: vec![1] }
    }

    pub fn x(f: FieldCtx) -> Self {
        UniPoly { f, c: vec![0, 1] }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree, with `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn degree(&self) -> usize {
        self.deg().expect("degree of zero polynomial")
    }

    pub fn lc(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.f.inv(self.lc());
        self.scale(inv)
    }

    pub fn scale(&self, k: u32) -> Self {
        UniPoly::new(self.f, self.c.iter().map(|&a| self.f.mul(a, k)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| self.f.add(self.c.get(i).copied().unwrap_or(0), o.c.get(i).copied().unwrap_or(0)))
            .collect();
        UniPoly::new(self.f, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(self.f.p() - 1))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.f);
        }
        let p = self.f.p() as u64;
        let mut acc = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        UniPoly::new(self.f, acc.into_iter().map(|v| v as u32).collect())
    }

    /// Quotient and remainder. Panics when dividing by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = self.f;
        let dd = d.degree();
        if self.c.len() <= dd {
            return (UniPoly::zero(f), self.clone());
        }
        let inv = f.inv(d.lc());
        let mut r = self.c.clone();
        let mut q = vec![0u32; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = f.mul(r[k + dd], inv);
            q[k] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                r[k + j] = f.sub(r[k + j], f.mul(coef, b));
            }
        }
        r.truncate(dd);
        (UniPoly::new(f, q), UniPoly::new(f, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient, `None` if `d` does not divide.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(i, &a)| self.f.mul(a, self.f.reduce(i as u64))).collect();
        UniPoly::new(self.f, c)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut acc = UniPoly::one(self.f).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    /// p-th root of a polynomial whose exponents are all multiples of p.
    fn pth_root(&self) -> Self {
        let p = self.f.p() as usize;
        debug_assert!(self.c.iter().enumerate().all(|(i, &a)| a == 0 || i % p == 0));
        UniPoly::new(self.f, self.c.iter().step_by(p).copied().collect())
    }

    pub fn to_poly(&self, ring: &Arc<PolyRing>, var: usize) -> Poly {
        let n = ring.nvars();
        ring.from_terms(self.c.iter().enumerate().filter(|(_, &a)| a != 0).map(|(i, &a)| {
            let mut m = vec![0; n];
            m[var] = i as u32;
            (m, a)
        }))
    }

    /// Dense form of a polynomial that only involves variable `var`.
    pub fn from_poly(p: &Poly, var: usize) -> Result<Self> {
        let mut c: Vec<u32> = Vec::new();
        for (m, a) in p.terms() {
            if m.iter().enumerate().any(|(i, &e)| i != var && e != 0) {
                return Err(Error::Multivariate);
            }
            let d = m[var] as usize;
            if c.len() <= d {
                c.resize(d + 1, 0);
            }
            c[d] = *a;
        }
        Ok(UniPoly::new(p.field(), c))
    }
}

/// Element of F_p(x): numerator over monic denominator, in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc { den: UniPoly::one(num.f), num });
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.exact_div(&g).expect("gcd"), den.exact_div(&g).expect("gcd"));
        let lc = d.lc();
        if lc != 1 {
            let inv = d.f.inv(lc);
            n = n.scale(inv);
            d = d.scale(inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: UniPoly) -> Self {
        let f = p.f;
        RatFunc { num: p, den: UniPoly::one(f) }
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator is one.
    pub fn as_poly(&self) -> Option<&UniPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.scale(self.num.f.p() - 1), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
}

/// Solves the square system `m · x = b` over F_p(x) by Gaussian elimination.
/// Returns `None` when the matrix is singular.
pub fn solve_ratfunc(mut m: Vec<Vec<RatFunc>>, mut b: Vec<RatFunc>) -> Result<Option<Vec<RatFunc>>> {
    let n = b.len();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(None);
        };
        m.swap(col, piv);
        b.swap(col, piv);
        let inv = RatFunc::from_poly(UniPoly::one(m[col][col].num.f)).div(&m[col][col])?;
        for k in col..n {
            m[col][k] = m[col][k].mul(&inv);
        }
        b[col] = b[col].mul(&inv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for k in col..n {
                    let t = factor.mul(&m[col][k]);
                    m[r][k] = m[r][k].sub(&t);
                }
                let t = factor.mul(&b[col]);
                b[r] = b[r].sub(&t);
            }
        }
    }
    Ok(Some(b))
}

/// Squarefree decomposition of a monic polynomial: pairs (squarefree part, multiplicity).
pub fn squarefree_decomposition(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    if f.deg().unwrap_or(0) == 0 {
        return out;
    }
    let p = f.f.p();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y).expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.exact_div(&w).expect("gcd divides");
        i += 1;
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let fld = f.f;
    let p = fld.p() as u64;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = UniPoly::x(fld);
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.degree() >= 2 * d {
        h = h.powmod(p, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.exact_div(&g).expect("gcd divides");
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree() > 0 {
        let dr = rest.degree();
        out.push((rest, dr));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d`.
fn equal_degree(f: &UniPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<UniPoly> {
    let n = f.degree();
    if n == d {
        return vec![f.clone()];
    }
    let fld = f.f;
    let p = fld.p() as u64;
    loop {
        let a = UniPoly::new(fld, (0..n).map(|_| rng.gen_range(0..fld.p())).collect());
        if a.deg().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // a + a^2 + ... + a^(2^(d-1)), the absolute trace to F_2
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
            let mut t = a.clone();
            let mut norm = a.clone();
            for _ in 1..d {
                t = t.powmod(p, f);
                norm = norm.mul(&t).rem(f);
            }
            norm.powmod((p - 1) / 2, f).sub(&UniPoly::one(fld))
        };
        let g = b.gcd(f);
        if let Some(dg) = g.deg() {
            if dg > 0 && dg < n {
                let other = f.exact_div(&g).expect("gcd divides");
                let mut out = equal_degree(&g, d, rng);
                out.extend(equal_degree(&other, d, rng));
                return out;
            }
        }
    }
}

/// Factors a nonzero dense polynomial into monic irreducibles with multiplicities.
/// The leading coefficient is returned separately.
pub fn factor_dense(f: &UniPoly, seed: u64) -> (u32, Vec<(UniPoly, u32)>) {
    assert!(!f.is_zero());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(UniPoly, u32)> = Vec::new();
    for (part, m) in squarefree_decomposition(&f.monic()) {
        for (block, d) in distinct_degree(&part) {
            for g in equal_degree(&block, d, &mut rng) {
                match out.iter_mut().find(|(h, _)| *h == g) {
                    Some(entry) => entry.1 += m,
                    None => out.push((g, m)),
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.c.len().cmp(&b.0.c.len()).then_with(|| a.0.c.iter().rev().cmp(b.0.c.iter().rev())));
    (f.lc(), out)
}

/// Irreducibility test for a dense polynomial of positive degree.
pub fn is_irreducible_dense(f: &UniPoly) -> bool {
    match f.deg() {
        None | Some(0) => false,
        Some(n) => {
            let g = f.monic();
            if !g.gcd(&g.derivative()).is_one() {
                return false;
            }
            matches!(distinct_degree(&g).as_slice(), [(_, d)] if *d == n)
        }
    }
}

/// Factors a nonzero univariate polynomial into monic irreducible factors with
/// multiplicities, sorted canonically. The product of the factors times a scalar
/// is re-checked against the input.
pub fn univariate_factor(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    univariate_factor_seeded(f, FACTOR_SEED.load(std::sync::atomic::Ordering::Relaxed))
}

pub fn univariate_factor_seeded(f: &Poly, seed: u64) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroArgument("polynomial to factor"));
    }
    let var = match f.univariate_var()? {
        None => return Ok(Vec::new()),
        Some(v) => v,
    };
    let dense = UniPoly::from_poly(f, var)?;
    let (lc, factors) = factor_dense(&dense, seed);
    let mut check = UniPoly::new(f.field(), vec![lc]);
    for (g, m) in &factors {
        for _ in 0..*m {
            check = check.mul(g);
        }
    }
    if check != dense {
        return Err(Error::Verification(format!("factorization of {f} does not re-multiply")));
    }
    let ring = f.ring();
    let mut out: Vec<(Poly, u32)> = factors.iter().map(|(g, m)| (g.to_poly(ring, var), *m)).collect();
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(out)
}

/// Irreducibility of a univariate polynomial of positive degree.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    match f.univariate_var()? {
        None => Ok(false),
        Some(v) => Ok(is_irreducible_dense(&UniPoly::from_poly(f, v)?)),
    }
}
