"""Regenerates disk_products.json.

For every p, q, r, s <= 3 the product f_{p,q} * f_{r,s} is first evaluated
in its derivative form on C^2 (metric diag(1, -1), y = |z0|^2 - |z1|^2) and
checked symbolically against the closed combinatorial form. The closed-form
coefficients are then written out, lowest power of nu first, with monic
denominators.

    python3 generate_disk_products.py > disk_products.json
"""

import itertools
import json
import sys

import sympy as sp

nu = sp.Symbol("nu")
z0, z1, w0, w1 = sp.symbols("z0 z1 w0 w1")  # w stands for conj(z)
y = z0 * w0 - z1 * w1
G = (1, -1)
MAX = 3


def poch(k, t):
    """t^{(k)} = (1 - t)(1 - 2t)...(1 - (k-1)t)."""
    return sp.prod([1 - j * t for j in range(1, k)]) if k > 1 else sp.Integer(1)


def f(p, q):
    return (z1 / z0) ** p * (z0 * w1) ** q / y**q


def derivative_form(p, q, r, s):
    a = (z1 / z0) ** p * (z0 * w1) ** q
    b = (z1 / z0) ** r * (z0 * w1) ** s
    zs, ws = (z0, z1), (w0, w1)
    total = 0
    for m in range(q + s + 1):
        acc = 0
        for idx in itertools.product(range(2), repeat=m):
            da, db = a, b
            sign = 1
            for i in idx:
                da = sp.diff(da, ws[i])
                db = sp.diff(db, zs[i])
                sign *= G[i]
            acc += sign * da * db
        pref = (-nu) ** m / sp.factorial(m) * poch(q + s - m, -nu) / (poch(q, -nu) * poch(s, -nu))
        total += pref * y ** (m - q - s) * acc
    return total


def closed_form(p, q, r, s):
    out = []
    for m in range(min(q, r) + 1):
        c = (
            nu**m / sp.factorial(m)
            * poch(q + s - m, -nu) / (poch(q, -nu) * poch(s, -nu))
            * sp.ff(q, m) * sp.ff(r, m)
        )
        out.append((p + r - m, q + s - m, sp.cancel(c)))
    return out


def coeff_list(poly):
    cs = sp.Poly(poly, nu).all_coeffs()[::-1]
    return [str(sp.Rational(c)) for c in cs]


def encode(c):
    num, den = sp.fraction(sp.cancel(c))
    lead = sp.Poly(den, nu).LC()
    return coeff_list(sp.expand(num / lead)), coeff_list(sp.expand(den / lead))


def main():
    cases = []
    for p, q, r, s in itertools.product(range(MAX + 1), repeat=4):
        terms = closed_form(p, q, r, s)
        lhs = derivative_form(p, q, r, s)
        rhs = sum(c * f(pp, qq) for pp, qq, c in terms)
        if sp.simplify(sp.together(lhs - rhs)) != 0:
            sys.exit(f"closed form disagrees at {(p, q, r, s)}")
        enc = []
        for pp, qq, c in terms:
            num, den = encode(c)
            enc.append({"p": pp, "q": qq, "num": num, "den": den})
        cases.append({"left": [p, q], "right": [r, s], "coeffs": enc})
    json.dump({"cases": cases}, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
