#!/usr/bin/env python3
"""Independent derivation of the oracle-labelled values in the example corpus.

Everything here is plain Python over F_p with dense coefficient lists (index = degree)
and shares no code with the Rust engine:

* traces come from multiplication matrices in the basis 1, x, ..., x^(n-1) of F_p[x]
  over F_p[y], y = phi(x), computed by repeated division by phi;
* the trace key s solves Psi(s * x^j) = Tr(x^j), Psi being the x^(n-1) coordinate;
* an extension of a p^-e-linear map is found by solving a linear system over F_p for
  its key v (bounded degree), instead of the Gram-matrix construction;
* test ideals on F_p[x] use O(-floor(D)), factorizations are by trial division;
* F-pure threshold truncations nu_e come from expanding binomials.

Usage: oracle.py            print `name<TAB>value` lines
       oracle.py --check F  compare against a frozen values file
"""

import itertools
import sys
from fractions import Fraction


# ---- dense univariate polynomials over F_p -------------------------------------------

def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def add(a, b, p):
    n = max(len(a), len(b))
    return trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def scale(a, c, p):
    return trim([(x * c) % p for x in a])


def mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def power(a, k, p):
    out = [1]
    for _ in range(k):
        out = mul(out, a, p)
    return out


def divmod_poly(a, b, p):
    a = trim(a)
    b = trim(b)
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        c = (r[-1] * inv) % p
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] = (r[i + k] - c * y) % p
        r = trim(r)
    return trim(q), r


def monic(a, p):
    return scale(a, pow(a[-1], p - 2, p), p) if a else a


def gcd(a, b, p):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b, p)[1]
    return monic(a, p)


def compose(f, g, p):
    out = []
    for c in reversed(f):
        out = add(mul(out, g, p), [c], p)
    return out


def fmt_poly(a, var):
    if not a:
        return "0"
    terms = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms)


def monic_polys(deg, p):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def is_irreducible(f, p):
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for g in monic_polys(k, p):
            if not divmod_poly(f, g, p)[1]:
                return False
    return True


def factor(f, p):
    """Monic irreducible factors with multiplicity, by trial division."""
    f = monic(trim(f), p)
    out = {}
    k = 1
    while len(f) > 1:
        for g in monic_polys(k, p):
            if not is_irreducible(g, p):
                continue
            while True:
                q, r = divmod_poly(f, g, p)
                if r:
                    break
                out[tuple(g)] = out.get(tuple(g), 0) + 1
                f = q
        k += 1
    return out


def fmt_ratio(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def fmt_divisor(d, var):
    items = sorted(((g, c) for g, c in d.items() if c != 0), key=lambda t: (len(t[0]), t[0][::-1]))
    if not items:
        return "0"
    parts = []
    for i, (g, c) in enumerate(items):
        body = f"{fmt_ratio(abs(c))}[{fmt_poly(list(g), var)}]"
        if i == 0:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def divisor_of(f, p):
    return {g: Fraction(m) for g, m in factor(f, p).items()}


# ---- linear algebra over F_p ---------------------------------------------------------

def solve(rows, rhs, p):
    """All solutions of rows * v = rhs: (particular, nullity) or None when inconsistent."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    piv = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    if any(all(x % p == 0 for x in row[:-1]) and row[-1] % p for row in m):
        return None
    v = [0] * ncols
    for i, c in enumerate(piv):
        v[c] = m[i][-1]
    return v, ncols - len(piv)


# ---- a monogenic cover F_p[y] -> F_p[x], y = phi(x) ----------------------------------

class Cover:
    def __init__(self, p, phi):
        self.p = p
        self.phi = trim(phi)
        self.n = len(self.phi) - 1

    def coords(self, f):
        """f = sum_k c_k(phi) x^k with deg c_k free and k < n; returns [c_k as polys in y]."""
        out = [[] for _ in range(self.n)]
        level = 0
        f = trim(f)
        while f:
            f, r = divmod_poly(f, self.phi, self.p)
            for k, c in enumerate(r):
                if c:
                    out[k] = add(out[k], [0] * level + [c], self.p)
            level += 1
        return out

    def trace(self, s):
        t = []
        for j in range(self.n):
            c = self.coords(mul(s, [0] * j + [1], self.p))
            t = add(t, c[j], self.p)
        return t

    def psi(self, s):
        return self.coords(s)[self.n - 1]

    def mult_matrix(self, s):
        return [self.coords(mul(s, [0] * j + [1], self.p)) for j in range(self.n)]

    def norm(self, s):
        m = self.mult_matrix(s)
        p = self.p
        total = []
        for perm in itertools.permutations(range(self.n)):
            sign = 1
            for i in range(self.n):
                for j in range(i + 1, self.n):
                    if perm[i] > perm[j]:
                        sign = -sign
            term = [1]
            for j in range(self.n):
                term = mul(term, m[j][perm[j]], p)
            total = add(total, scale(term, sign % p, p), p)
        return total

    def trace_key(self, bound=12):
        """s with Psi(s x^j) = Tr(x^j) for j < n, by a linear solve on coefficients of s."""
        p = self.p
        cols = []
        for k in range(bound):
            mono = [0] * k + [1]
            cols.append([self.psi(mul(mono, [0] * j + [1], p)) for j in range(self.n)])
        targets = [self.trace([0] * j + [1]) for j in range(self.n)]
        deg = max(len(c) for col in cols for c in col) + 1
        rows, rhs = [], []
        for j in range(self.n):
            for d in range(deg):
                rows.append([col[j][d] if d < len(col[j]) else 0 for col in cols])
                rhs.append(targets[j][d] if d < len(targets[j]) else 0)
        sol = solve(rows, rhs, p)
        assert sol is not None and sol[1] == 0, "trace key not determined"
        return trim(sol[0])


def cartier(f, q):
    """Phi(f^(1/q)) on F_p[x]: the coefficient of x^(qk + q - 1) moves to x^k."""
    return trim([f[q * k + q - 1] if q * k + q - 1 < len(f) else 0 for k in range(len(f) // q + 1)])


def extension_key(cover, u, q, bound):
    """Key v in F_p[x] of the extension of Phi_R(u . ) to F_p[x], or None if none of
    degree < bound exists. Linear in the coefficients of v."""
    p, phi = cover.p, cover.phi
    rows, rhs = [], []
    for i in range(q):
        lhs_cols = [cartier(mul([0] * k + [1], power(phi, i, p), p), q) for k in range(bound)]
        target = compose(cartier(mul(u, [0] * i + [1], p), q), phi, p)
        deg = max([len(c) for c in lhs_cols] + [len(target)])
        for d in range(deg):
            rows.append([c[d] if d < len(c) else 0 for c in lhs_cols])
            rhs.append(target[d] if d < len(target) else 0)
    sol = solve(rows, rhs, p)
    if sol is None:
        return None
    assert sol[1] == 0, "extension key not unique"
    return trim(sol[0])


def ramification(cover):
    return divisor_of(cover.trace_key(), cover.p)


def pullback(cover, d):
    out = {}
    for g, c in d.items():
        for h, m in factor(compose(list(g), cover.phi, cover.p), cover.p).items():
            out[h] = out.get(h, 0) + c * m
    return out


def sub(a, b):
    out = dict(a)
    for g, c in b.items():
        out[g] = out.get(g, 0) - c
    return {g: c for g, c in out.items() if c != 0}


def tau_univariate(d, p):
    """O(-floor(D)) on F_p[x] as (numerator, denominator)."""
    num, den = [1], [1]
    for g, c in d.items():
        f = c.numerator // c.denominator
        if f > 0:
            num = mul(num, power(list(g), f, p), p)
        elif f < 0:
            den = mul(den, power(list(g), -f, p), p)
    return num, den


def fmt_fractional(num, den, var, p):
    g = gcd(num, den, p)
    num = monic(divmod_poly(num, g, p)[0], p)
    den = monic(divmod_poly(den, g, p)[0], p)
    body = f"⟨{fmt_poly(num, var)}⟩"
    return body if den == [1] else f"(1/({fmt_poly(den, var)}))·{body}"


def transform_line(cover, delta_x, bvar, tvar):
    """`transform` report: Tr(tau(Y; pi^*D - Ram)) against tau(X; D)."""
    p = cover.p
    dy = sub(pullback(cover, delta_x), ramification(cover))
    num, den = tau_univariate(dy, p)
    nd = cover.norm(den)
    cof, r = divmod_poly(compose(nd, cover.phi, p), den, p)
    assert not r
    g = []
    for j in range(cover.n):
        g = gcd(g, cover.trace(mul(mul(num, cof, p), [0] * j + [1], p)), p)
    lhs = fmt_fractional(g, nd, bvar, p)
    rn, rd = tau_univariate(delta_x, p)
    rhs = fmt_fractional(rn, rd, bvar, p)
    return f"pass: {'true' if lhs == rhs else 'false'}; lhs: {lhs}; rhs: {rhs}; Δ_Y: {fmt_divisor(dy, tvar)}"


def nu_binomial_square(p, e):
    """max r with (x + y)^(2r) outside <x^q, y^q>, by expanding the binomial."""
    q = p ** e
    best = 0
    for r in range(1, q + 1):
        n = 2 * r
        c = 1
        hit = False
        for k in range(n + 1):
            if k > 0:
                c = c * (n - k + 1) // k
            if c % p and k < q and n - k < q:
                hit = True
                break
        if hit:
            best = r
    return best


def values():
    out = {}
    x = [0, 1]
    y_x2 = Cover(3, [0, 0, 1])
    out["y-x2.ram"] = fmt_divisor(ramification(y_x2), "x")
    out["y-x2.tracekey"] = fmt_poly(y_x2.trace_key(), "x")
    out["y-x2.tracekey-divisor"] = fmt_divisor(divisor_of(y_x2.trace_key(), 3), "x")
    for name, u in [("y", [0, 1]), ("y^2+y", [0, 1, 1]), ("1", [1]), ("y+1", [1, 1]), ("y^4", [0, 0, 0, 0, 1]), ("y^3", [0, 0, 0, 1])]:
        v = extension_key(y_x2, u, 3, 24)
        out[f"y-x2.extends.{name}"] = "true" if v is not None else "false"

    nottame = Cover(2, [0, 0, 1, 0, 0, 1])
    out["nottame1.ram"] = fmt_divisor(ramification(nottame), "x")
    v = extension_key(nottame, [0, 0, 1], 2, 40)
    assert v is not None
    assert fmt_poly(cartier(mul(v, x, 2), 2), "x") == "x^3 + 1"
    out["nottame1.deltabar"] = fmt_divisor(divisor_of(v, 2), "x")
    expected = sub(pullback(nottame, {(0, 1): Fraction(2)}), ramification(nottame))
    assert fmt_divisor(expected, "x") == out["nottame1.deltabar"]

    for name, c in [("0", Fraction(0)), ("1/2", Fraction(1, 2)), ("1", Fraction(1)), ("3/2", Fraction(3, 2))]:
        d = {(0, 1): c} if c else {}
        out[f"transform.y-x2.{name}"] = transform_line(y_x2, d, "y", "x")
    out["transform.nottame1.2"] = transform_line(nottame, {(0, 1): Fraction(2)}, "t", "x")

    for e in range(1, 6):
        out[f"fpt.(x+y)^2.p2.nu.{e}"] = str(nu_binomial_square(2, e))
    for p in (2, 3, 5):
        for e in range(1, 4):
            # x^r lies outside <x^q> exactly for r < q
            out[f"fpt.x.p{p}.nu.{e}"] = str(max(r for r in range(p ** e + 1) if r < p ** e))
    return out


def main(argv):
    vals = values()
    if len(argv) == 3 and argv[1] == "--check":
        frozen = {}
        with open(argv[2], encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    k, v = line.rstrip("\n").split("\t", 1)
                    frozen[k] = v
        bad = [k for k in vals if frozen.get(k) != vals[k]] + [k for k in frozen if k not in vals]
        for k in bad:
            print(f"mismatch {k}: frozen {frozen.get(k)!r}, oracle {vals.get(k)!r}")
        return 1 if bad else 0
    for k, v in vals.items():
        print(f"{k}\t{v}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
