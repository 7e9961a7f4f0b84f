#!/usr/bin/env python3
"""Regenerates the computed data files shipped in crates/core/data.

  fixtures/dimensions.json  dim M_k(Γ0(N), χ), dim S_k, dim E_k for the curated
                            levels and characters, k = 0..24.
  generators.json           recipes (eta quotients, logarithmic derivatives and
                            products) that complete the Eisenstein span to a
                            basis of M_k(Γ0(N), χ).
  eigenforms.json           q-expansion of the normalized eigenform E14·Δ.

The dimension values are computed independently of the Rust crate:
  * trivial character: the genus formula of Diamond–Shurman (Thm 3.5.1 and
    Fig. 3.4), using elliptic-point and cusp counts obtained by brute force;
  * real characters: Cohen–Oesterlé for the cusp part, and the Eisenstein part
    counted by enumerating every pair (χ, ψ) of Dirichlet characters modulo N,
    complex ones included.
For the trivial character both routes are evaluated and must agree.

Generator selection enumerates holomorphic eta quotients in a box, reads off the
character from the Gordon–Hughes–Newman criterion, and keeps a candidate when
it raises the rank (computed modulo a large prime) of the span built so far.

Usage: python3 tools/gen_data.py [output_dir]
"""

import itertools
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

LEVELS = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25]
CONDUCTOR = {
    "principal": 1,
    "jacobi_top/3": 3,
    "kronecker_-4": 4,
    "jacobi_top/5": 5,
    "jacobi_top/7": 7,
    "jacobi_top/13": 13,
}
# Table 1 and Table 3 rows: (N, kind, k mod m, residue)
TABLE1 = [
    (2, "principal", 2, 0), (3, "principal", 2, 0), (3, "jacobi_top/3", 2, 1),
    (4, "principal", 2, 0), (4, "kronecker_-4", 2, 1), (5, "principal", 4, 0),
    (5, "jacobi_top/5", 4, 2), (6, "principal", 2, 0), (6, "jacobi_top/3", 2, 1),
    (7, "principal", 6, 0), (7, "jacobi_top/7", 6, 3), (8, "principal", 2, 0),
    (8, "kronecker_-4", 2, 1), (9, "principal", 2, 0), (9, "jacobi_top/3", 2, 1),
    (10, "principal", 4, 0), (10, "jacobi_top/5", 2, 0), (12, "principal", 2, 0),
    (12, "jacobi_top/3", 2, 1), (13, "principal", 12, 0), (13, "jacobi_top/13", 12, 6),
    (16, "principal", 2, 0), (16, "kronecker_-4", 2, 1), (18, "principal", 2, 0),
    (18, "jacobi_top/3", 2, 1), (25, "principal", 4, 0),
]
TABLE3 = [
    (2, "principal", 4, 0), (3, "principal", 6, 0), (3, "jacobi_top/3", 6, 3),
    (5, "principal", 4, 0), (5, "jacobi_top/5", 4, 2), (7, "principal", 6, 0),
    (7, "jacobi_top/7", 6, 3), (13, "principal", 12, 0), (13, "jacobi_top/13", 12, 6),
]
PRIME = (1 << 61) - 1


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def factor(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def phi(n):
    r = n
    for p, _ in factor(n):
        r = r // p * (p - 1)
    return r


def index(n):
    r = n
    for p, _ in factor(n):
        r = r // p * (p + 1)
    return r


def kronecker(a, n):
    """Kronecker symbol (a/n) for n > 0."""
    if n == 1:
        return 1
    res = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            res = -res
    # Jacobi symbol for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                res = -res
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            res = -res
        a %= n
    return res if n == 1 else 0


def prim_value(kind, n):
    if kind == "principal":
        return 1
    if kind == "kronecker_-4":
        return {1: 1, 3: -1}.get(n % 4, 0)
    q = CONDUCTOR[kind]
    if n % q == 0:
        return 0
    return 1 if pow(n % q, (q - 1) // 2, q) == 1 else -1


def char_value(kind, N, n):
    return 0 if math.gcd(n, N) != 1 else prim_value(kind, n)


# ---------------------------------------------------------------- characters


def character_group(N):
    """All Dirichlet characters mod N as dicts unit -> angle in [0, 1)."""
    units = [u for u in range(1, N + 1) if math.gcd(u, N) == 1] if N > 1 else [1]
    comps = []  # per prime power: list of functions u -> angle for each character
    for p, e in factor(N):
        q = p ** e
        if p == 2:
            if e == 1:
                comps.append([lambda u: Fraction(0)])
                continue
            chars = []
            for a in range(2):
                for b in range(2 ** (e - 2) if e >= 3 else 1):
                    def f(u, a=a, b=b, q=q, e=e):
                        u %= q
                        s = 0 if u % 4 == 1 else 1
                        v = u if s == 0 else (-u) % q
                        m = 0
                        if e >= 3:
                            x = 1
                            while x != v:
                                x = x * 5 % q
                                m += 1
                        return (Fraction(a * s, 2) + (Fraction(b * m, 2 ** (e - 2)) if e >= 3 else 0)) % 1
                    chars.append(f)
            comps.append(chars)
        else:
            order = phi(q)
            g = next(g for g in range(2, q) if math.gcd(g, p) == 1 and
                     all(pow(g, order // r, q) != 1 for r, _ in factor(order)))
            log = {}
            x = 1
            for m in range(order):
                log[x] = m
                x = x * g % q
            comps.append([lambda u, j=j, q=q, order=order, log=log:
                          Fraction(j * log[u % q], order) % 1 for j in range(order)])
    out = []
    for combo in itertools.product(*comps) if comps else [()]:
        out.append({u: sum((f(u) for f in combo), Fraction(0)) % 1 for u in units})
    return out


def conductor(chi, N):
    for M in divisors(N):
        if all(a == 0 for u, a in chi.items() if u % M == 1 % M):
            return M
    return N


def real_char_angles(kind, N):
    units = [u for u in range(1, N + 1) if math.gcd(u, N) == 1] if N > 1 else [1]
    return {u: Fraction(0) if char_value(kind, N, u) == 1 else Fraction(1, 2) for u in units}


def eisenstein_count(N, kind, k):
    """Number of pairs (χ, ψ) with cond L, R, LR | N, χψ = ε, parity, times #{d | N/LR}."""
    group = character_group(N)
    eps = real_char_angles(kind, N)
    minus = N - 1 if N > 1 else 1
    conds = [conductor(c, N) for c in group]
    total = 0
    for (c1, l), (c2, r) in itertools.product(zip(group, conds), repeat=2):
        if N % (l * r):
            continue
        if any((c1[u] + c2[u] - eps[u]) % 1 for u in eps):
            continue
        par = (c1[minus] + c2[minus]) % 1
        if (par == 0) != (k % 2 == 0):
            continue
        total += len(divisors(N // (l * r)))
    return total


# ---------------------------------------------------------------- dimensions


def count_solutions(N, poly, kind="principal"):
    return sum(char_value(kind, N, x) for x in range(N) if poly(x) % N == 0)


def lam(r, s, p):
    if 2 * s <= r:
        if r % 2 == 0:
            return p ** (r // 2) + p ** (r // 2 - 1)
        return 2 * p ** (r // 2)
    return 2 * p ** (r - s)


def lam_product(N, kind):
    f = CONDUCTOR[kind]
    out = 1
    for p, r in factor(N):
        s = 0
        while f % (p ** (s + 1)) == 0:
            s += 1
        out *= lam(r, s, p)
    return out


def genus_dim(N, k):
    """dim M_k(Γ0(N)) for even k from the genus formula."""
    if k < 0 or k % 2:
        return 0
    if k == 0:
        return 1
    e2 = count_solutions(N, lambda x: x * x + 1)
    e3 = count_solutions(N, lambda x: x * x + x + 1)
    cusps = sum(phi(math.gcd(d, N // d)) for d in divisors(N))
    g = 1 + Fraction(index(N), 12) - Fraction(e2, 4) - Fraction(e3, 3) - Fraction(cusps, 2)
    assert g.denominator == 1
    g = int(g)
    if k == 2:
        return g + cusps - 1
    return (k - 1) * (g - 1) + (k // 4) * e2 + (k // 3) * e3 + (k // 2) * cusps


def co_cusp_dim(N, kind, k):
    """Cohen–Oesterlé dim S_k for k ≥ 2."""
    g4 = {0: Fraction(1, 4), 2: Fraction(-1, 4)}.get(k % 4, 0)
    g3 = {0: Fraction(1, 3), 2: Fraction(-1, 3)}.get(k % 3, 0)
    s4 = count_solutions(N, lambda x: x * x + 1, kind)
    s3 = count_solutions(N, lambda x: x * x + x + 1, kind)
    d = Fraction((k - 1) * index(N), 12) - Fraction(lam_product(N, kind), 2) + g4 * s4 + g3 * s3
    if k == 2 and kind == "principal":
        d += 1
    assert d.denominator == 1, (N, kind, k, d)
    return int(d)


def dims(N, kind, k):
    parity = prim_value(kind, -1)
    if k < 0 or parity != (1 if k % 2 == 0 else -1):
        return 0, 0, 0
    if k == 0:
        return (1, 0, 1) if kind == "principal" else (0, 0, 0)
    count = eisenstein_count(N, kind, k)
    assert count == lam_product(N, kind), (N, kind, k)
    if k == 1:
        # no weight-one cusp forms below level 23
        return count // 2, 0, count // 2
    e = count - 1 if (k == 2 and kind == "principal") else count
    s = co_cusp_dim(N, kind, k)
    if kind == "principal":
        assert s + e == genus_dim(N, k), (N, k)
    return s + e, s, e


# ---------------------------------------------------------------- q-series


def pentagonal(n):
    out = [(0, 1)]
    j = 1
    while True:
        a = j * (3 * j - 1) // 2
        if a >= n:
            break
        s = -1 if j % 2 else 1
        out.append((a, s))
        b = j * (3 * j + 1) // 2
        if b < n:
            out.append((b, s))
        j += 1
    return out


def eta_expansion(exps, prec):
    """Integer q-expansion of Π η(dz)^r, coefficients of q^0..q^(prec-1)."""
    lead24 = sum(d * r for d, r in exps.items())
    assert lead24 % 24 == 0
    lead = lead24 // 24
    n = max(prec - lead, 0)
    c = [0] * n
    if n:
        c[0] = 1
    for d, r in exps.items():
        terms = [(e * d, s) for e, s in pentagonal(-(-n // d)) if e * d < n]
        for _ in range(abs(r)):
            if r > 0:
                for i in range(n - 1, -1, -1):
                    c[i] = sum(s * c[i - e] for e, s in terms if e <= i)
            else:
                for i in range(n):
                    c[i] -= sum(s * c[i - e] for e, s in terms[1:] if e <= i)
    out = [0] * prec
    for i, v in enumerate(c):
        if 0 <= lead + i < prec:
            out[lead + i] = v
    return out


def bernoulli_list(n):
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(math.comb(m + 1, j) * b[j] for j in range(m)) / (m + 1))
    return b


BERN = bernoulli_list(40)


def gen_bernoulli(k, kind):
    f = CONDUCTOR[kind]
    poly = lambda x: sum(math.comb(k, j) * BERN[j] * x ** (k - j) for j in range(k + 1))
    return f ** (k - 1) * sum(prim_value(kind, a) * poly(Fraction(a, f)) for a in range(1, f + 1))


def eisenstein(k, chi, psi, d, prec):
    c = [Fraction(0)] * prec
    if chi == "principal" and prec:
        c[0] = -gen_bernoulli(k, psi) / (2 * k)
    for n in range(1, (prec - 1) // d + 1):
        c[n * d] = Fraction(sum(prim_value(psi, m) * prim_value(chi, n // m) * m ** (k - 1)
                                for m in divisors(n)))
    return c


def eisenstein_basis(N, kind, k):
    out = []
    for chi, psi in itertools.product(CONDUCTOR, repeat=2):
        l, r = CONDUCTOR[chi], CONDUCTOR[psi]
        if N % (l * r):
            continue
        if prim_value(chi, -1) * prim_value(psi, -1) != (1 if k % 2 == 0 else -1):
            continue
        units = [u for u in range(1, N + 1) if math.gcd(u, N) == 1] if N > 1 else [1]
        if any(prim_value(chi, u) * prim_value(psi, u) != char_value(kind, N, u) for u in units):
            continue
        for d in divisors(N // (l * r)):
            out.append((chi, psi, d))
    return out


def dlog_eta(exps, prec):
    """θt/t for a weight-zero eta quotient, from the σ1 closed form."""
    c = [Fraction(0)] * prec
    c[0] = Fraction(sum(d * r for d, r in exps.items()), 24)
    for d, r in exps.items():
        for n in range(1, (prec - 1) // d + 1):
            c[n * d] -= r * d * sum(divisors(n))
    return c


def to_mod(v):
    out = []
    for x in v:
        x = Fraction(x)
        out.append(x.numerator % PRIME * pow(x.denominator % PRIME, PRIME - 2, PRIME) % PRIME)
    return out


class Echelon:
    def __init__(self):
        self.rows = {}  # pivot -> row

    def add(self, v):
        v = list(v)
        for piv in sorted(self.rows):
            if v[piv]:
                row = self.rows[piv]
                f = v[piv]
                v = [(a - f * b) % PRIME for a, b in zip(v, row)]
        nz = next((i for i, x in enumerate(v) if x), None)
        if nz is None:
            return False
        inv = pow(v[nz], PRIME - 2, PRIME)
        v = [x * inv % PRIME for x in v]
        for piv, row in self.rows.items():
            if row[nz]:
                f = row[nz]
                self.rows[piv] = [(a - f * b) % PRIME for a, b in zip(row, v)]
        self.rows[nz] = v
        return True

    @property
    def rank(self):
        return len(self.rows)


# ---------------------------------------------------------------- eta quotients


def ghn_kind(N, exps, k):
    s = (-1) ** k
    for d, r in exps.items():
        if r % 2:
            s *= d
    for kind, f in CONDUCTOR.items():
        if N % f:
            continue
        if all(kronecker(s, n) == char_value(kind, N, n)
               for n in range(1, 8 * N + 1) if math.gcd(n, N) == 1):
            return kind
    return None


def eta_str(exps):
    num = [f"eta({d})" + (f"^{r}" if r != 1 else "") for d, r in sorted(exps.items()) if r > 0]
    den = [f"eta({d})" + (f"^{-r}" if r != -1 else "") for d, r in sorted(exps.items()) if r < 0]
    s = " * ".join(num) if num else "1"
    if len(den) == 1:
        s += " / " + den[0]
    elif den:
        s += " / (" + " * ".join(den) + ")"
    return s


BOX = {1: 2, 2: 40, 3: 26, 4: 14, 5: 9, 6: 7}


def holomorphic_quotients(N, k):
    divs = divisors(N)
    box = BOX[len(divs)]
    mat = np.array([[math.gcd(c, d) ** 2 * (N // d) for d in divs] for c in divs], dtype=np.int64)
    if len(divs) == 1:
        grid = np.array([[2 * k]], dtype=np.int64)
    else:
        ranges = [np.arange(-box, box + 1)] * (len(divs) - 1)
        mesh = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, len(divs) - 1)
        last = 2 * k - mesh.sum(axis=1, keepdims=True)
        grid = np.hstack([mesh, last])
    ok = (grid @ mat.T >= 0).all(axis=1)
    dv = np.array(divs, dtype=np.int64)
    ok &= (grid @ dv) % 24 == 0
    ok &= (grid @ (N // dv)) % 24 == 0
    grid = grid[ok]
    out = []
    for row in grid:
        exps = {d: int(r) for d, r in zip(divs, row) if r}
        out.append(exps)
    out.sort(key=lambda e: (sum(d * r for d, r in e.items()), sum(abs(r) for r in e.values()),
                            sorted(e.items())))
    return out


def sturm(N, k):
    return k * index(N) // 12 + 1


def t_entries():
    return {
        2: {2: 24, 1: -24}, 3: {3: 12, 1: -12}, 4: {1: 8, 4: 16, 2: -24},
        5: {5: 6, 1: -6}, 6: {2: 6, 6: 6, 1: -6, 3: -6}, 7: {7: 4, 1: -4},
        8: {2: 2, 8: 4, 1: -4, 4: -2}, 9: {9: 3, 1: -3}, 10: {5: 2, 10: 2, 1: -2, 2: -2},
        12: {4: 2, 12: 2, 1: -2, 3: -2}, 13: {13: 2, 1: -2}, 16: {2: 1, 16: 2, 1: -2, 8: -1},
        18: {2: 1, 3: 1, 18: 2, 1: -2, 6: -1, 9: -1}, 25: {25: 1, 1: -1},
    }


def kind_product(N, a, b):
    for kind in CONDUCTOR:
        if N % CONDUCTOR[kind] == 0 and all(
                char_value(a, N, n) * char_value(b, N, n) == char_value(kind, N, n)
                for n in range(1, N + 1) if math.gcd(n, N) == 1):
            return kind
    return None


def eisenstein_recipes(N, kind, k):
    """Eisenstein elements that are genuine modular forms: weight-one pairs are
    taken once, and weight-two trivial-character forms come from dlog recipes."""
    out = []
    if k == 2 and kind == "principal":
        return out
    for chi, psi, d in eisenstein_basis(N, kind, k):
        if k == 1 and chi != "principal":
            continue
        out.append(({"eisenstein": {"weight": k, "chi": chi, "psi": psi, "dilation": d}},
                    lambda prec, chi=chi, psi=psi, d=d: eisenstein(k, chi, psi, d, prec)))
    return out


def factor_pool(N, k1, cache):
    """Candidate factors of weight k1: (character, recipe, expansion)."""
    pool = []
    for kind in CONDUCTOR:
        if N % CONDUCTOR[kind]:
            continue
        for rc, f in eisenstein_recipes(N, kind, k1):
            pool.append((kind, rc, f))
    if k1 == 2:
        for d in divisors(N)[1:]:
            exps = {d: 24, 1: -24}
            pool.append(("principal", {"dlog": eta_str(exps)},
                         lambda prec, exps=exps: dlog_eta(exps, prec)))
    key = (N, k1)
    if key not in cache:
        cache[key] = holomorphic_quotients(N, k1)
    for exps in cache[key][:40]:
        kind = ghn_kind(N, exps, k1)
        if kind is not None:
            pool.append((kind, {"eta": eta_str(exps)},
                         lambda prec, exps=exps: eta_expansion(exps, prec)))
    return pool


def generators_for(N, kind, k, cache):
    expected, _, _ = dims(N, kind, k)
    if expected == 0:
        return [], True
    prec = sturm(N, k) + 10
    ech = Echelon()
    recipes = []
    for rc, f in eisenstein_recipes(N, kind, k):
        # the crate enumerates Eisenstein series itself only from weight three up
        if ech.add(to_mod(f(prec))) and k < 3:
            recipes.append(rc)
    if k == 2 and kind == "principal":
        for d in divisors(N)[1:]:
            exps = {d: 24, 1: -24}
            if ech.add(to_mod(dlog_eta(exps, prec))):
                recipes.append({"dlog": eta_str(exps)})
    if ech.rank < expected:
        key = (N, k)
        if key not in cache:
            cache[key] = holomorphic_quotients(N, k)
        for exps in cache[key]:
            if ghn_kind(N, exps, k) != kind:
                continue
            if ech.add(to_mod(eta_expansion(exps, prec))):
                recipes.append({"eta": eta_str(exps)})
                if ech.rank == expected:
                    break
    # products of two lower-weight factors fill whatever is left
    for k1 in range(1, k // 2 + 1):
        if ech.rank == expected:
            break
        left, right = factor_pool(N, k1, cache), factor_pool(N, k - k1, cache)
        for (ka, ra, fa), (kb, rb, fb) in itertools.product(left, right):
            if ech.rank == expected:
                break
            if kind_product(N, ka, kb) != kind:
                continue
            va, vb = to_mod(fa(prec)), to_mod(fb(prec))
            v = [sum(va[i] * vb[n - i] for i in range(n + 1)) % PRIME for n in range(prec)]
            if ech.add(v):
                recipes.append({"product": [ra, rb]})
    return recipes, ech.rank == expected


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "crates", "core", "data")
    os.makedirs(os.path.join(out_dir, "fixtures"), exist_ok=True)

    pairs = sorted({(n, kd) for n, kd, _, _ in TABLE1 + TABLE3} | {(1, "principal")})
    entries = []
    for n, kd in pairs:
        for k in range(0, 25):
            m, s, e = dims(n, kd, k)
            entries.append({"level": n, "character": kd, "weight": k,
                            "dim_M": m, "dim_S": s, "dim_E": e})
    with open(os.path.join(out_dir, "fixtures", "dimensions.json"), "w") as fh:
        json.dump({
            "provenance": "tools/gen_data.py: trivial character from the genus formula; "
                          "real characters from Cohen-Oesterle for S_k plus an Eisenstein count "
                          "over all pairs of Dirichlet characters mod N (complex ones included); "
                          "weight one assumes S_1 = 0, valid below level 23.",
            "entries": entries,
        }, fh, indent=1)
        fh.write("\n")

    rows = {}
    for n, kd, m, r in TABLE1 + TABLE3:
        kmax = 12 if n <= 13 else 4
        for k in range(1, kmax + 1):
            if k % m == r:
                rows[(n, kd, k)] = True
    rows[(1, "principal", 12)] = True
    rows[(1, "principal", 14)] = True
    cache = {}
    gens, missing = [], []
    for (n, kd, k) in sorted(rows):
        recipes, ok = generators_for(n, kd, k, cache)
        if not ok:
            missing.append((n, kd, k))
            continue
        for rc in recipes:
            gens.append({"spec": {"level": n, "character": kd, "weight": k}, "recipe": rc})
    with open(os.path.join(out_dir, "generators.json"), "w") as fh:
        json.dump({
            "provenance": "tools/gen_data.py: greedy selection of holomorphic eta quotients "
                          "(Gordon-Hughes-Newman character) completing the Eisenstein span.",
            "entries": gens,
        }, fh, indent=1)
        fh.write("\n")
    print("spaces without a generator set:", missing, file=sys.stderr)

    prec = 501
    delta = eta_expansion({1: 24}, prec)
    e14 = [1] + [-24 * sum(d ** 13 for d in divisors(n)) for n in range(1, prec)]
    prod = [sum(e14[i] * delta[n - i] for i in range(n + 1)) for n in range(prec)]
    with open(os.path.join(out_dir, "eigenforms.json"), "w") as fh:
        json.dump([{"label": "E14*Delta", "weight": 26, "level": 1,
                    "coeffs": [str(c) for c in prod]}], fh)
        fh.write("\n")


if __name__ == "__main__":
    main()
