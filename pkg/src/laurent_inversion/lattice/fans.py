"""Fans: spanning fans of polytopes, restriction to subspaces, secondary fans."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .cones import Cone, LatticePolytope, extreme_rays
from .linalg import (Vector, coordinates, cross, det, dot, integer_kernel, normalize_sign,
                     primitive, rank, solve, transpose)


@dataclass(frozen=True, eq=False)
class Fan:
    """A fan given by primitive rays and maximal cones (sorted tuples of ray indices)."""

    ambient: int
    rays: tuple[Vector, ...]
    cones: tuple[tuple[int, ...], ...]

    @classmethod
    def from_cones(cls, cones: Iterable[Iterable[Sequence[int]]], ambient: int) -> "Fan":
        """Build a fan from cones given by their ray vectors."""
        cones = [sorted({primitive(r) for r in c}) for c in cones]
        rays = sorted({r for c in cones for r in c})
        index = {r: i for i, r in enumerate(rays)}
        idx = sorted({tuple(sorted(index[r] for r in c)) for c in cones})
        return cls(ambient, tuple(rays), tuple(idx))

    def canonical(self) -> frozenset:
        return frozenset(frozenset(self.rays[i] for i in c) for c in self.cones)

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return self.ambient == other.ambient and self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self.ambient, self.canonical()))

    def cone(self, i: int) -> Cone:
        return Cone.from_generators([self.rays[j] for j in self.cones[i]], self.ambient)

    def is_simplicial(self) -> bool:
        return all(rank([self.rays[j] for j in c]) == len(c) for c in self.cones)

    def facet_counts(self) -> Counter:
        """How many maximal cones contain each codimension-one face (as a ray-index set)."""
        counts: Counter = Counter()
        for i, c in enumerate(self.cones):
            cone = self.cone(i)
            for a in cone.hrep.inequalities:
                counts[frozenset(j for j in c if dot(a, self.rays[j]) == 0)] += 1
        return counts

    def is_complete(self) -> bool:
        if not self.cones:
            return self.ambient == 0
        if any(self.cone(i).dim != self.ambient for i in range(len(self.cones))):
            return False
        return all(v == 2 for v in self.facet_counts().values())

    def find_cone(self, v: Sequence) -> int | None:
        for i in range(len(self.cones)):
            if self.cone(i).contains(v):
                return i
        return None

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.cones]}

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        rays = [tuple(r) for r in data["rays"]]
        ambient = len(rays[0]) if rays else int(data.get("ambient", 0))
        return cls.from_cones([[rays[i] for i in c] for c in data["max_cones"]], ambient)


def spanning_fan(polytope: LatticePolytope) -> Fan:
    """Fan of cones over the faces of a polytope with the origin in its interior."""
    n = polytope.ambient
    if not polytope.interior_contains((0,) * n):
        raise ValueError("origin is not in the interior of the polytope")
    cones = [[polytope.vertices[i] for i in on] for _, on in polytope.facets()]
    return Fan.from_cones(cones, n)


def restrict_fan(fan: Fan, equations: Sequence[Sequence[int]],
                 basis: Sequence[Sequence[int]] | None = None) -> Fan:
    """Intersect every cone of ``fan`` with ``{v : u.v == 0 for u in equations}``.

    Cones of the result are written in coordinates with respect to ``basis``
    (vectors spanning the saturated sublattice), by default an integer kernel
    basis of the equations.  Only cones of full dimension in the subspace are
    kept; the others are faces of these.
    """
    equations = [list(u) for u in equations]
    if not equations:
        if basis is None:
            return fan
    if basis is None:
        ker = integer_kernel(equations, fan.ambient)
        basis = transpose(ker) if ker and ker[0] else []
    basis = [list(b) for b in basis]
    sub_dim = len(basis)
    cones = []
    for i in range(len(fan.cones)):
        piece = fan.cone(i).intersect(equations) if equations else fan.cone(i)
        if piece.dim != sub_dim:
            continue
        coords = []
        for r in piece.rays:
            x = coordinates(basis, r)
            if x is None:
                raise ValueError("basis does not span the restricted subspace")
            coords.append(primitive(x))
        cones.append(coords)
    return Fan.from_cones(cones, sub_dim)


def refines(fine: Fan, coarse: Fan) -> bool:
    """True when every maximal cone of ``fine`` sits inside a cone of ``coarse``."""
    coarse_cones = [coarse.cone(i) for i in range(len(coarse.cones))]
    for i in range(len(fine.cones)):
        rays = [fine.rays[j] for j in fine.cones[i]]
        if not any(all(c.contains(r) for r in rays) for c in coarse_cones):
            return False
    return True


# ---------------------------------------------------------------------------
# secondary fans


def _distinct(characters: Sequence[Sequence[int]]) -> list[Vector]:
    return sorted({primitive(d) for d in characters if any(d)})


def wall_normals(characters: Sequence[Sequence[int]]) -> list[Vector]:
    """Normals of the hyperplanes spanned by r-1 independent characters."""
    dirs = _distinct(characters)
    r = len(characters[0])
    out = set()
    for sub in combinations(dirs, r - 1):
        normal = cross(list(sub))
        if any(normal):
            out.add(normalize_sign(primitive(normal)))
    return sorted(out)


def on_wall(characters: Sequence[Sequence[int]], omega: Sequence) -> bool:
    """True when omega lies in a cone spanned by r-1 of the characters."""
    r = len(characters[0])
    if r == 1:
        return all(Fraction(x) == 0 for x in omega)
    for sub in combinations(_distinct(characters), r - 1):
        if rank(list(sub)) < r - 1:
            continue
        x = coordinates(list(sub), omega)
        if x is not None and all(v >= 0 for v in x):
            return True
    return False


def omega_bases(characters: Sequence[Sequence[int]], omega: Sequence) -> list[tuple[int, ...]]:
    """Index sets J, |J| = r, with omega a strictly positive combination of D_J."""
    r = len(characters[0])
    out = []
    for sub in combinations(range(len(characters)), r):
        cols = [characters[j] for j in sub]
        if det(cols) == 0:
            continue
        x = solve(transpose(cols), omega)
        if all(v > 0 for v in x):
            out.append(sub)
    return out


def _split(cell: list[Vector], h: Vector, r: int) -> list[list[Vector]]:
    vals = [dot(h, v) for v in cell]
    if all(x >= 0 for x in vals) or all(x <= 0 for x in vals):
        return [cell]
    zero = [v for v, x in zip(cell, vals) if x == 0]
    pos = [(v, x) for v, x in zip(cell, vals) if x > 0]
    neg = [(v, x) for v, x in zip(cell, vals) if x < 0]
    combos = [tuple(a * qi - b * pi for pi, qi in zip(p, q)) for p, a in pos for q, b in neg]
    plus = extreme_rays([v for v, _ in pos] + zero + combos, r)
    minus = extreme_rays([v for v, _ in neg] + zero + combos, r)
    return [plus, minus]


def secondary_fan_chambers(characters: Sequence[Sequence[int]]) -> list[Cone]:
    """Maximal chambers of the wall-and-chamber decomposition of cone(D).

    The cone is cut by every hyperplane spanned by r-1 characters; the
    resulting cells are then merged according to which simplicial cones
    cone(D_J), |J| = r, contain them.  Chambers come back sorted by their
    sorted ray lists.
    """
    if not characters:
        raise ValueError("no characters")
    r = len(characters[0])
    total = Cone.from_generators(characters, r)
    if not total.is_full_dimensional():
        raise ValueError("characters do not span a full-dimensional cone")
    if not total.is_strictly_convex():
        raise ValueError("characters do not span a strictly convex cone")
    cells = [total.extreme_rays()]
    for h in wall_normals(characters):
        cells = [piece for cell in cells for piece in _split(cell, h, r)]
    groups: dict[tuple, list[Vector]] = {}
    for cell in cells:
        p = tuple(sum(col) for col in zip(*cell))
        key = tuple(omega_bases(characters, p))
        groups.setdefault(key, []).extend(cell)
    chambers = [Cone.from_generators(extreme_rays(rays, r), r) for rays in groups.values()]
    return sorted(chambers, key=lambda c: c.rays)


def chamber_containing(characters: Sequence[Sequence[int]], omega: Sequence) -> Cone | None:
    """The chamber whose interior contains omega, or None if omega is on a wall."""
    if on_wall(characters, omega):
        return None
    for c in secondary_fan_chambers(characters):
        if c.interior_contains(omega):
            return c
    return None
