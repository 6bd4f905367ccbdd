"""Independent oracle: δ_F and section-kernel dimensions via sympy, frozen to JSON.

Builds F symbolically, restricts the quadric cofactors to the rational normal curve by
substitution, forms ψ and δ = ψ∘β from their defining formulas, and computes the nullity of
the induced map on global sections with exact rational rank.
"""
import json
import sys

import sympy as sp

s, t = sp.symbols("s t")


def curve(e, n):
    return [s ** (e - m) * t**m if m <= e else sp.Integer(0) for m in range(n + 1)]


def restrict(expr, e, n, xs):
    return sp.expand(expr.subs(dict(zip(xs, curve(e, n))), simultaneous=True))


def delta(d, e, n, quad, lin):
    xs = sp.symbols(f"x0:{n + 1}")
    cols = []
    for l in range(1, e):
        c = sp.Integer(0)
        for (i, j), coeff in quad.items():
            if i <= l < j:
                c += restrict(coeff(xs), e, n, xs) * s ** (e - j - i + l) * t ** (j + i - l - 2)
        cols.append(sp.expand(c))
    g = [restrict(lin[k](xs), e, n, xs) if k in lin else sp.Integer(0) for k in range(e + 1, n + 1)]
    out = []
    for j in range(e):
        v = sp.Integer(0)
        if j < e - 1:
            v += t * cols[j]
        if j > 0:
            v -= s * cols[j - 1]
        out.append(sp.expand(v))
    return out + g, [e + 1] * e + [e] * (n - e), d * e


def nullity(row, src, tgt, m):
    ncols = sum(max(0, b + m + 1) for b in src)
    nrows = max(0, tgt + m + 1)
    if ncols == 0:
        return 0
    mat = sp.zeros(nrows, ncols)
    c0 = 0
    for f, b in zip(row, src):
        width = max(0, b + m + 1)
        if width and f != 0:
            k = tgt - b
            poly = sp.Poly(f, s, t)
            for q in range(width):
                for (a, bb), c in poly.terms():
                    mat[bb + q, c0 + q] += c
        c0 += width
    return ncols - mat.rank()


def splitting(row, src, tgt):
    parts, prev_n, prev_d = [], 0, 0
    r = len(src) - 1
    m = -max(src)
    nulls = {}
    while True:
        nm = nullity(row, src, tgt, m)
        nulls[m] = nm
        dm = nm - prev_n
        parts += [-m] * (dm - prev_d)
        if dm == r:
            return sorted(parts), nulls
        prev_n, prev_d = nm, dm
        m += 1


def fmt(f):
    return str(sp.expand(f)).replace("**", "^").replace(" ", "")


CASES = {
    "quintic_5_3_3": (5, 3, 3, {(1, 2): lambda x: x[0] ** 3, (2, 3): lambda x: x[3] ** 3}, {}),
    "cubic_3_3_3": (3, 3, 3, {(1, 2): lambda x: x[0], (2, 3): lambda x: x[3]}, {}),
    "cubic_3_3_4": (3, 3, 4, {(1, 2): lambda x: x[0], (2, 3): lambda x: x[3]}, {4: lambda x: x[0] * x[3]}),
    "quartic_4_4_4": (4, 4, 4, {(1, 2): lambda x: x[0] ** 2, (2, 3): lambda x: x[2] ** 2, (3, 4): lambda x: x[4] ** 2}, {}),
    "quartic_4_6_6": (
        4, 6, 6,
        {
            (1, 2): lambda x: x[0] ** 2,
            (2, 3): lambda x: x[0] * x[3],
            (3, 4): lambda x: x[3] ** 2,
            (4, 5): lambda x: x[3] * x[6],
            (5, 6): lambda x: x[6] ** 2,
            (3, 6): lambda x: x[3] ** 2,
        },
        {},
    ),
}

out = {}
for name, (d, e, n, quad, lin) in CASES.items():
    row, src, tgt = delta(d, e, n, quad, lin)
    parts, nulls = splitting(row, src, tgt)
    out[name] = {
        "d": d, "e": e, "n": n,
        "delta": [fmt(f) for f in row],
        "splitting": parts,
        "nullities": {str(k): v for k, v in sorted(nulls.items())},
    }
json.dump(out, sys.stdout, indent=1, sort_keys=True)
print()
