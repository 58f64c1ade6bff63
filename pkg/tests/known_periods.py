"""Mirrors of known four-dimensional Fano manifolds, used to build the
fixture period database.  Products use disjoint variables, so their
periods are binomial convolutions of the factors' periods."""

from laurent_inversion.polynomial import classical_period, parse

SURFACES = {
    "P2": "x + y + 1/(x*y)",
    "P1xP1": "x + 1/x + y + 1/y",
    "F1": "x + y + 1/(x*y) + x*y",
    "dP7": "x + x*y + y + 1/x + 1/(x*y)",
    "dP6": "x + y + 1/x + 1/y + x/y + y/x",
}

FOURFOLDS = {
    "P4": "x + y + z + w + 1/(x*y*z*w)",
    "P1xP3": "vars: x,y,z,w; x + 1/x + y + z + w + 1/(y*z*w)",
    "Q4": "(1+x)^2/(x*y*z*w) + y + z + w",
    "cubic fourfold": "(1+x+y)^3/(x*y*z*w) + z + w",
    "P1xQ3": "vars: x,y,z,w; x + 1/x + (1+y)^2/(y*z*w) + z + w",
}


def product_period(a, b):
    from math import comb
    n = min(len(a), len(b))
    return [sum(comb(d, i) * a[i] * b[d - i] for i in range(d + 1)) for d in range(n)]


def known_records(dmax=9):
    out = []
    surf = {k: classical_period(parse(v), dmax) for k, v in SURFACES.items()}
    names = list(SURFACES)
    for i, a in enumerate(names):
        for b in names[i:]:
            out.append((f"{a} x {b}", product_period(surf[a], surf[b])))
    for k, v in FOURFOLDS.items():
        out.append((k, classical_period(parse(v), dmax, prune=True)))
    return out
