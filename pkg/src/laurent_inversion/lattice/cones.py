"""Rational polyhedral cones and lattice polytopes, all in exact arithmetic.

Facets are found by brute force: every facet of a d-dimensional cone is
spanned by d-1 linearly independent generators, so we try each such subset
and keep the normals that have all generators on one side.  That is
quadratic-ish in the number of generators and perfectly adequate for the
handful of points in dimension <= 6 that show up here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

from .linalg import Vector, cross, dot, nullspace, primitive, rank


@dataclass(frozen=True)
class HRep:
    """``{x : e.x == 0 for e in equations, a.x >= 0 for a in inequalities}``."""

    ambient: int
    equations: tuple[Vector, ...]
    inequalities: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return self.ambient - len(self.equations)

    def contains(self, v: Sequence) -> bool:
        return (all(dot(e, v) == 0 for e in self.equations)
                and all(dot(a, v) >= 0 for a in self.inequalities))

    def relint_contains(self, v: Sequence) -> bool:
        return (all(dot(e, v) == 0 for e in self.equations)
                and all(dot(a, v) > 0 for a in self.inequalities))


def _directions(gens: Iterable[Sequence]) -> list[Vector]:
    seen: dict[Vector, None] = {}
    for g in gens:
        if any(g):
            seen.setdefault(primitive(g), None)
    return list(seen)


def cone_hrep(gens: Iterable[Sequence], ambient: int) -> HRep:
    dirs = _directions(gens)
    if not dirs:
        unit = tuple(tuple(int(i == j) for j in range(ambient)) for i in range(ambient))
        return HRep(ambient, unit, ())
    eqs = nullspace(dirs, ambient)
    d = ambient - len(eqs)
    facets: dict[Vector, None] = {}
    for subset in combinations(dirs, d - 1):
        normal = cross(list(subset) + list(eqs))
        if not any(normal):
            continue
        vals = [dot(normal, g) for g in dirs]
        if all(x >= 0 for x in vals):
            facets.setdefault(primitive(normal), None)
        elif all(x <= 0 for x in vals):
            facets.setdefault(primitive([-x for x in normal]), None)
    return HRep(ambient, tuple(eqs), tuple(sorted(facets)))


def extreme_rays(gens: Iterable[Sequence], ambient: int, hrep: HRep | None = None) -> list[Vector]:
    """Primitive extreme rays of a pointed cone, sorted."""
    dirs = _directions(gens)
    if hrep is None:
        hrep = cone_hrep(dirs, ambient)
    out = []
    for g in dirs:
        tight = [a for a in hrep.inequalities if dot(a, g) == 0]
        if rank(tight + list(hrep.equations)) == ambient - 1:
            out.append(g)
    return sorted(out)


@dataclass(frozen=True)
class Cone:
    """Cone generated by primitive, pairwise distinct integer rays."""

    rays: tuple[Vector, ...]
    ambient: int

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence], ambient: int | None = None) -> "Cone":
        gens = list(gens)
        if ambient is None:
            if not gens:
                raise ValueError("ambient dimension needed for an empty generator list")
            ambient = len(gens[0])
        return cls(tuple(sorted(_directions(gens))), ambient)

    @cached_property
    def hrep(self) -> HRep:
        return cone_hrep(self.rays, self.ambient)

    @property
    def dim(self) -> int:
        return self.hrep.dim

    def contains(self, v: Sequence) -> bool:
        return self.hrep.contains(v)

    def relint_contains(self, v: Sequence) -> bool:
        return self.hrep.relint_contains(v)

    def interior_contains(self, v: Sequence) -> bool:
        return self.dim == self.ambient and self.hrep.relint_contains(v)

    def is_strictly_convex(self) -> bool:
        return not any(self.contains([-x for x in r]) for r in self.rays)

    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient

    def extreme_rays(self) -> list[Vector]:
        if not self.is_strictly_convex():
            raise ValueError("cone contains a line")
        return extreme_rays(self.rays, self.ambient, self.hrep)

    def interior_point(self) -> Vector:
        """Sum of the rays: a point in the relative interior."""
        return tuple(sum(col) for col in zip(*self.rays)) if self.rays else (0,) * self.ambient

    def intersect(self, equations: Sequence[Sequence[int]]) -> "Cone":
        """Intersection with the subspace cut out by ``equations``."""
        gens = list(self.rays)
        for u in equations:
            vals = [dot(u, g) for g in gens]
            new = [g for g, x in zip(gens, vals) if x == 0]
            pos = [(g, x) for g, x in zip(gens, vals) if x > 0]
            neg = [(g, x) for g, x in zip(gens, vals) if x < 0]
            for (p, a), (q, b) in product(pos, neg):
                new.append(tuple(a * qi - b * pi for pi, qi in zip(p, q)))
            gens = _directions(new)
            if gens:
                gens = extreme_rays(gens, self.ambient)
        return Cone.from_generators(gens, self.ambient)

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays]}


def cone_contains(cone: Cone, v: Sequence) -> bool:
    return cone.contains(v)


def cone_strictly_convex(cone: Cone) -> bool:
    return cone.is_strictly_convex()


class LatticePolytope:
    """Convex hull of finitely many integer points.

    The facet description is kept in homogeneous form: each inequality is a
    tuple ``(b, a1, ..., an)`` meaning ``b + a.x >= 0``, each equation
    ``(c, c1, ..., cn)`` meaning ``c + c.x == 0``.
    """

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = sorted({tuple(int(v) for v in p) for p in points})
        if not pts:
            raise ValueError("convex hull of no points")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise ValueError("points of mixed dimension")
        self.ambient = n
        lifted = [(1,) + p for p in pts]
        hrep = cone_hrep(lifted, n + 1)
        self.inequalities = hrep.inequalities
        self.equations = hrep.equations
        self.vertices = tuple(v[1:] for v in extreme_rays(lifted, n + 1, hrep))
        self._hrep = hrep

    @property
    def dim(self) -> int:
        return self._hrep.dim - 1

    def contains(self, p: Sequence) -> bool:
        return self._hrep.contains((1,) + tuple(p))

    def interior_contains(self, p: Sequence) -> bool:
        return self.dim == self.ambient and self._hrep.relint_contains((1,) + tuple(p))

    def facets(self) -> list[tuple[Vector, tuple[int, ...]]]:
        """Pairs (inequality, indices of the vertices on that facet)."""
        out = []
        for a in self.inequalities:
            on = tuple(i for i, v in enumerate(self.vertices) if dot(a, (1,) + v) == 0)
            out.append((a, on))
        return out

    def bounding_box(self) -> tuple[Vector, Vector]:
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.ambient))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.ambient))
        return lo, hi

    def lattice_points(self) -> list[Vector]:
        lo, hi = self.bounding_box()
        ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
        return [p for p in product(*ranges) if self.contains(p)]

    def dilate(self, k: int) -> "LatticePolytope":
        return LatticePolytope(tuple(k * x for x in v) for v in self.vertices)

    def __eq__(self, other):
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"LatticePolytope({list(self.vertices)})"


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    return LatticePolytope(points)


def as_fractions(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)
