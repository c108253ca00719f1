#!/usr/bin/env python3
"""Regenerate the lattice and group catalog under crates/core/catalog/.

Every lattice is built from an explicit construction (generators in an
ambient integer coordinate system with a rational ambient form), reduced to a
basis, LLL-reduced on its Gram matrix with exact fractions, and rescaled so
that the Gram matrix is integral. The resulting JSON files are what the Rust
code loads; this script only documents and reproduces them.
"""
import json
import os
import sys
from fractions import Fraction
from itertools import combinations, product

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "catalog")


def row_basis(gens):
    """Integer row echelon basis of the Z-span of `gens`."""
    rows = [list(g) for g in gens if any(g)]
    ncols = len(gens[0])
    basis = []
    for col in range(ncols):
        active = [r for r in rows if r[col] != 0]
        rows = [r for r in rows if r[col] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                if r2[col] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rows.append(r2)
            active = nxt
        if active:
            basis.append(active[0])
    return basis


def gram_of(basis, form):
    n = len(basis)
    m = len(basis[0])
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        fi = [sum(form[a][b] * basis[i][b] for b in range(m)) for a in range(m)]
        for j in range(n):
            g[i][j] = sum(fi[a] * basis[j][a] for a in range(m))
    return g


def lll_gram(g, delta=Fraction(99, 100)):
    """Exact LLL acting on a Gram matrix; returns the reduced Gram matrix."""
    n = len(g)
    g = [row[:] for row in g]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = g[i][j]
                for k in range(j):
                    s -= mu[j][k] * mu[i][k] * bstar[k]
                mu[i][j] = s / bstar[j]
            s = g[i][i]
            for k in range(i):
                s -= mu[i][k] ** 2 * bstar[k]
            bstar[i] = s
        return mu, bstar

    k = 1
    mu, bstar = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                # update Gram: b_k -> b_k - q b_j
                gkk = g[k][k] - 2 * q * g[k][j] + q * q * g[j][j]
                newrow = [g[k][t] - q * g[j][t] for t in range(n)]
                newrow[k] = gkk
                for t in range(n):
                    g[k][t] = newrow[t]
                    g[t][k] = newrow[t]
                mu, bstar = gso()
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            g[k], g[k - 1] = g[k - 1], g[k]
            for row in g:
                row[k], row[k - 1] = row[k - 1], row[k]
            mu, bstar = gso()
            k = max(k - 1, 1)
    return g


def det(m):
    m = [[Fraction(x) for x in row] for row in m]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for t in range(c, n):
                m[r][t] -= f * m[c][t]
    return d


def to_int(g, scale=Fraction(1)):
    out = []
    for row in g:
        r = []
        for x in row:
            y = x * scale
            assert y.denominator == 1, (x, scale)
            r.append(int(y))
        out.append(r)
    return out


def cartan(n, edges):
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2
    for a, b in edges:
        g[a][b] = g[b][a] = -1
    return g


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def k12():
    # Eisenstein coordinates: each complex entry a + b*w is stored as (a, b).
    # Real form: Re((a+bw) * conj(c+dw)) = ac + bd - (ad+bc)/2.
    form = [[Fraction(0)] * 12 for _ in range(12)]
    for i in range(6):
        a, b = 2 * i, 2 * i + 1
        form[a][a] = form[b][b] = Fraction(1)
        form[a][b] = form[b][a] = Fraction(-1, 2)

    def emul(x, y):
        (a, b), (c, d) = x, y
        # (a+bw)(c+dw) with w^2 = -1 - w
        return (a * c - b * d, a * d + b * c - b * d)

    theta = (1, 2)  # w - w^2 = 1 + 2w = sqrt(-3)
    units = [(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)]
    gens = []
    # theta * (e_i - u e_j)
    for i, j in combinations(range(6), 2):
        for u in units[:3]:
            v = [(0, 0)] * 6
            v[i] = theta
            v[j] = emul(theta, (-u[0], -u[1]))
            gens.append(v)
            v2 = [(0, 0)] * 6
            v2[i] = emul(theta, (0, 1))
            v2[j] = emul(emul(theta, (0, 1)), (-u[0], -u[1]))
            gens.append(v2)
    # (1,...,1) and (1,1,1,w,w,w)-type vectors
    w = (0, 1)
    for pat in product([(1, 0), w, (-1, -1)], repeat=6):
        s = (sum(p[0] for p in pat), sum(p[1] for p in pat))
        # s == 0 mod 3 in Z[w] iff both coordinates divisible by 3
        if s[0] % 3 == 0 and s[1] % 3 == 0:
            gens.append(list(pat))
    flat = [[c for z in v for c in z] for v in gens]
    return flat, form, Fraction(2, 3)


def rm14():
    words = set()
    for coeffs in product([0, 1], repeat=5):
        word = []
        for x in range(16):
            bits = [(x >> k) & 1 for k in range(4)]
            val = coeffs[0]
            for k in range(4):
                val ^= coeffs[k + 1] & bits[k]
            word.append(val)
        words.add(tuple(word))
    return sorted(words)


def bw16():
    gens = [list(c) for c in rm14()]
    for i in range(16):
        for j in range(i + 1, 16):
            v = [0] * 16
            v[i] = 2
            v[j] = 2
            gens.append(v)
            v = [0] * 16
            v[i] = 2
            v[j] = -2
            gens.append(v)
    return gens, identity(16), Fraction(1, 2)


def golay():
    q = sorted({(x * x) % 23 for x in range(1, 23)})
    base = [0] * 23
    for r in [0] + q:
        base[r] = 1
    rows = []
    for s in range(23):
        w = [base[(t - s) % 23] for t in range(23)]
        w.append(sum(w) % 2)
        rows.append(w)
    rows.append([1] * 24)
    # close under xor to get the code, check parameters
    code = {tuple([0] * 24)}
    for r in rows:
        new = set()
        for c in code:
            new.add(tuple(a ^ b for a, b in zip(c, r)))
        code |= new
    weights = sorted({sum(c) for c in code})
    assert len(code) == 4096 and weights == [0, 8, 12, 16, 24], (len(code), weights)
    return code


def leech():
    code = golay()
    gens = []
    for c in code:
        if sum(c) == 8:
            gens.append([2 * x for x in c])
    for i in range(24):
        for j in range(i + 1, 24):
            v = [0] * 24
            v[i] = 4
            v[j] = 4
            gens.append(v)
            v = [0] * 24
            v[i] = 4
            v[j] = -4
            gens.append(v)
    gens.append([-3] + [1] * 23)
    return gens, identity(24), Fraction(1, 8)


def build(gens, form, scale):
    basis = row_basis(gens)
    g = gram_of(basis, form)
    g = lll_gram(g)
    return to_int(g, scale)


def write_lattice(name, file, gram, note, provenance):
    n = len(gram)
    d = det(gram)
    rec = {
        "name": name,
        "n": n,
        "gram": gram,
        "scale_note": note,
        "provenance": provenance,
    }
    with open(os.path.join(OUT, file), "w") as f:
        json.dump(rec, f, indent=1)
        f.write("\n")
    print(f"{name}: n={n} det={d}")


def signed_perm_gens(n):
    gens = []
    for i in range(n - 1):
        m = [[int(r == c) for c in range(n)] for r in range(n)]
        m[i][i] = m[i + 1][i + 1] = 0
        m[i][i + 1] = m[i + 1][i] = 1
        gens.append(m)
    m = [[int(r == c) for c in range(n)] for r in range(n)]
    m[0][0] = -1
    gens.append(m)
    return [[[str(x) for x in row] for row in g] for g in gens]


def write_groups():
    gdir = os.path.join(OUT, "groups")
    os.makedirs(gdir, exist_ok=True)
    for n in (2, 3, 4):
        rec = {
            "name": f"signed permutations of R^{n}",
            "n": n,
            "generators": signed_perm_gens(n),
            "provenance": "adjacent transpositions and one sign change; order 2^n n!",
        }
        with open(os.path.join(gdir, f"signed_perm{n}.json"), "w") as f:
            json.dump(rec, f, indent=1)
            f.write("\n")
    # Aut(D4) = W(F4): signed permutations of R^4 plus the reflection in
    # (1,1,1,1)/2, which maps D4 = {x in Z^4 : sum even} to itself.
    gens = signed_perm_gens(4)
    refl = [["1/2" if r == c else "-1/2" for c in range(4)] for r in range(4)]
    gens.append(refl)
    rec = {
        "name": "Aut(D4) = W(F4)",
        "n": 4,
        "generators": gens,
        "provenance": "W(B4) generators together with the reflection in (1,1,1,1)/2; standard coordinates where D4 = {x in Z^4 : sum(x) even}",
    }
    with open(os.path.join(gdir, "aut_d4.json"), "w") as f:
        json.dump(rec, f, indent=1)
        f.write("\n")
    # W(E6) x {+-1} in root coordinates: simple reflections of the E6 Cartan
    # matrix and -I. Orthogonal for the Gram metric of catalog/e6.json.
    e6 = cartan(6, [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)])
    gens = []
    for i in range(6):
        # s_i(e_j) = e_j - <e_j, a_i> a_i  (roots of norm 2); column j image
        m = [[int(r == c) for c in range(6)] for r in range(6)]
        for j in range(6):
            m[i][j] -= e6[i][j]
        gens.append([[str(x) for x in row] for row in m])
    gens.append([[str(-int(r == c)) for c in range(6)] for r in range(6)])
    rec = {
        "name": "Aut(E6) = W(E6) x {+-1}",
        "n": 6,
        "gram": e6,
        "generators": gens,
        "provenance": "simple reflections of the E6 root system in simple-root coordinates and -I; orthogonal for the Cartan Gram matrix",
    }
    with open(os.path.join(gdir, "aut_e6.json"), "w") as f:
        json.dump(rec, f, indent=1)
        f.write("\n")


def main():
    os.makedirs(OUT, exist_ok=True)
    write_lattice("Z2", "z2.json", [[1, 0], [0, 1]], "standard", "identity Gram matrix")
    write_lattice("Z3", "z3.json", [[int(i == j) for j in range(3)] for i in range(3)], "standard", "identity Gram matrix")
    write_lattice("A2", "a2.json", [[2, 1], [1, 2]], "roots of norm 2", "hexagonal lattice; basis of two roots at 60 degrees")
    write_lattice("D4", "d4.json", cartan(4, [(0, 1), (1, 2), (1, 3)]), "roots of norm 2", "Cartan matrix of D4 (simple roots)")
    write_lattice("E6", "e6.json", cartan(6, [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]), "roots of norm 2", "Cartan matrix of E6, Bourbaki numbering")
    write_lattice("E7", "e7.json", cartan(7, [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 3)]), "roots of norm 2", "Cartan matrix of E7, Bourbaki numbering")
    write_lattice("E8", "e8.json", cartan(8, [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]), "roots of norm 2", "Cartan matrix of E8, Bourbaki numbering")
    gens, form, scale = k12()
    write_lattice("K12", "k12.json", build(gens, form, scale), "minimal norm 4",
                  "Coxeter-Todd lattice: Eisenstein vectors x in Z[w]^6 with all x_i congruent mod sqrt(-3) and sum(x) = 0 mod 3, real form scaled by 2/3, LLL-reduced")
    gens, form, scale = bw16()
    write_lattice("BW16", "bw16.json", build(gens, form, scale), "minimal norm 4",
                  "Barnes-Wall lattice: Z-span of RM(1,4) codewords and 2(e_i +- e_j), norm halved, LLL-reduced")
    gens, form, scale = leech()
    write_lattice("Leech", "leech.json", build(gens, form, scale), "minimal norm 4",
                  "Leech lattice: sqrt(8)-scaled span of 2*(Golay octads), 4(e_i +- e_j) and (-3,1^23), norm divided by 8, LLL-reduced; Golay code = extended quadratic-residue code of length 24")
    write_groups()


if __name__ == "__main__":
    sys.exit(main())
