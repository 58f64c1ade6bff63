"""Algebraic mutations and the torus charts built from amenable collections.

A mutation with weight w and factor F (supported on w-perp) sends x^g to
x^g * F^<g, w>.  Applied to a Laurent polynomial it multiplies the slice at
height h by F^h; negative heights need exact division, and when that fails
the result is not Laurent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lattice.linalg import Vector, dot
from .polynomial import LaurentPolynomial, NotDivisible, exact_divide, sum_polynomials
from .scaffold import ConvexPartition, _weights_in_basis, default_s_choices
from .toric import GITData


class NotLaurent(ArithmeticError):
    pass


@dataclass(frozen=True)
class MutationData:
    weight: Vector
    factor: LaurentPolynomial

    def __post_init__(self):
        object.__setattr__(self, "weight", tuple(int(x) for x in self.weight))

    def check(self, dim: int | None = None) -> None:
        if not any(self.weight):
            raise ValueError("weight vector must be non-zero")
        if dim is not None and (len(self.weight) != dim or self.factor.dim != dim):
            raise ValueError("weight, factor and polynomial dimensions differ")
        if self.factor.is_zero():
            raise ValueError("factor must be non-zero")
        if any(dot(self.weight, e) for e in self.factor.support()):
            raise ValueError("factor is not supported on the hyperplane orthogonal to the weight")

    def inverse(self) -> "MutationData":
        return MutationData(tuple(-x for x in self.weight), self.factor)

    def to_json(self) -> dict:
        from .polynomial import format_polynomial
        return {"weight": list(self.weight), "factor": format_polynomial(self.factor)}


def mutate(f: LaurentPolynomial, m: MutationData) -> LaurentPolynomial:
    """Pull f back along the mutation; raises NotLaurent if the result is not Laurent.

    Slices are divided in the full Laurent ring: a height-h slice is
    divisible by F^k there exactly when it is inside the hyperplane, since
    F has height zero.
    """
    m.check(f.dim)
    slices: dict[int, dict] = {}
    for e, c in f.items():
        slices.setdefault(dot(m.weight, e), {})[e] = c
    parts = []
    for h in sorted(slices):
        piece = LaurentPolynomial(slices[h], f.dim)
        if h >= 0:
            parts.append(piece * m.factor ** h)
        else:
            try:
                parts.append(exact_divide(piece, m.factor ** (-h)))
            except NotDivisible as exc:
                raise NotLaurent(f"slice at height {h} is not divisible by F^{-h}") from exc
    return sum_polynomials(parts, f.dim)


# ---------------------------------------------------------------------------
# amenable collections


@dataclass(frozen=True)
class AmenableCollection:
    weights: tuple[Vector, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(tuple(int(x) for x in w) for w in self.weights))

    def to_json(self) -> dict:
        return {"weights": [list(w) for w in self.weights]}


def amenable_violations(ac: AmenableCollection, rays: Sequence[Sequence[int]],
                        parts: Sequence[Sequence[int]]) -> list[str]:
    """Human-readable list of the failed conditions (empty when amenable)."""
    if len(ac.weights) != len(parts):
        return [f"{len(ac.weights)} weights for {len(parts)} parts"]
    out = []
    for i, w in enumerate(ac.weights):
        for l, part in enumerate(parts):
            for j in part:
                v = dot(w, rays[j])
                if l == i and v != -1:
                    out.append(f"<w_{i}, rho_{j}> = {v}, expected -1")
                elif l < i and v != 0:
                    out.append(f"<w_{i}, rho_{j}> = {v}, expected 0")
                elif l > i and v < 0:
                    out.append(f"<w_{i}, rho_{j}> = {v}, expected >= 0")
    return out


def amenable_check(ac: AmenableCollection, rays: Sequence[Sequence[int]],
                   parts: Sequence[Sequence[int]]) -> bool:
    return not amenable_violations(ac, rays, parts)


# ---------------------------------------------------------------------------
# torus charts


def partition_rays(g: GITData, cp: ConvexPartition) -> tuple[list[Vector], list[int]]:
    """rho_1..rho_R in N = Z^(R-r), whose standard basis is rho_j for j outside B.

    Returns (rays, others) where ``others`` lists the non-basis columns in
    the order of the N coordinates.
    """
    m = _weights_in_basis(g, cp)
    others = [j for j in range(g.R) if j not in cp.basis]
    rays: list[Vector] = []
    for j in range(g.R):
        if j in cp.basis:
            row = m[cp.basis.index(j)]
            rays.append(tuple(-row[c] for c in others))
        else:
            rays.append(tuple(int(c == j) for c in others))
    return rays, others


def negated_forms(g: GITData, cp: ConvexPartition) -> AmenableCollection:
    """The amenable collection w_i = -u_i (minus the indicator of S_i)."""
    _, others = partition_rays(g, cp)
    return AmenableCollection(tuple(tuple(-int(c in part) for c in others) for part in cp.parts))


def compose_charts(g: GITData, cp: ConvexPartition, s_choices: Sequence[int] | None = None,
                   ac: AmenableCollection | None = None,
                   ) -> tuple[LaurentPolynomial, list[LaurentPolynomial]]:
    """Laurent polynomial chart of the mirror of the complete intersection.

    Starting from W = sum_j x^{rho_j} on N, apply the mutations mu_1..mu_k
    in turn, where mu_i has weight w_i and factor
    (mu_1 ... mu_{i-1})^*(sum_{S_i} x^{rho_j}) / x^{rho_{s_i}}.  After
    them each sum over S_i has become the monomial x^{rho_{s_i}}; restricting
    to the fibre where these equal 1 means dropping the s_i coordinates.
    The constant k is subtracted so the result is the pullback of
    ``W - k``, the same normalisation as the elimination construction.

    Returns (polynomial, factors).  Variables of the polynomial are the
    remaining non-basis columns in ascending order.
    """
    rays, others = partition_rays(g, cp)
    if s_choices is None:
        s_choices = default_s_choices(cp)
    s_choices = tuple(s_choices)
    if len(s_choices) != len(cp.parts) or any(s not in p for s, p in zip(s_choices, cp.parts)):
        raise ValueError("each s_i must belong to S_i")
    if ac is None:
        ac = negated_forms(g, cp)
    bad = amenable_violations(ac, rays, cp.parts)
    if bad:
        raise ValueError("weights are not an amenable collection: " + "; ".join(bad))
    n = len(others)
    mono = {j: LaurentPolynomial.monomial(rays[j]) for j in range(g.R)}
    W = sum_polynomials(mono.values(), n)
    # pullback of each sum over S_i under the composite so far; single
    # monomials need not stay Laurent, these sums do
    sums = [sum_polynomials((mono[j] for j in part), n) for part in cp.parts]
    factors = []
    for i, s in enumerate(s_choices):
        F = exact_divide(sums[i], LaurentPolynomial.monomial(rays[s]))
        m = MutationData(ac.weights[i], F)
        m.check(n)
        factors.append(F)
        W = mutate(W, m)
        sums = [mutate(p, m) if l > i else p for l, p in enumerate(sums)]
    keep = [pos for pos, c in enumerate(others) if c not in s_choices]
    terms: dict[Vector, int] = {}
    for e, c in W.items():
        e2 = tuple(e[p] for p in keep)
        terms[e2] = terms.get(e2, 0) + c
    return LaurentPolynomial(terms, len(keep)) - len(cp.parts), factors
