"""GIT data, stacky fans, and positivity of line bundles on toric orbifolds.

Conventions: characters ``D_1..D_R`` are integer vectors in Z^r (coordinates
of the Picard lattice), rays ``rho_1..rho_R`` are integer vectors in Z^n, and
indices are 0-based throughout.  A line bundle is a class in Z^r; where a
divisor is needed we lift it to coefficients ``a`` with ``sum a_i D_i = L``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .lattice import Cone, Fan, on_wall, omega_bases, secondary_fan_chambers
from .lattice.linalg import (Vector, det, dot, integer_inverse, integer_kernel, matmul, matvec,
                             nullspace, primitive, smith_decompose, smith_diagonal, transpose)


class GITError(ValueError):
    """GIT data violating one of the hypotheses needed for a toric orbifold."""


def _frac(x) -> Fraction:
    return Fraction(x) if not isinstance(x, str) else Fraction(x.strip())


def _frac_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GITData:
    characters: tuple[Vector, ...]
    omega: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "characters", tuple(tuple(int(v) for v in d) for d in self.characters))
        object.__setattr__(self, "omega", tuple(_frac(x) for x in self.omega))
        if not self.characters:
            raise GITError("no characters")
        if any(len(d) != self.r for d in self.characters) or len(self.omega) != self.r:
            raise GITError("characters and omega must all have length r")

    @property
    def r(self) -> int:
        return len(self.characters[0])

    @property
    def R(self) -> int:
        return len(self.characters)

    def cone(self) -> Cone:
        return Cone.from_generators(self.characters, self.r)

    def check(self) -> None:
        """Raise GITError unless the characters span a strictly convex
        full-dimensional cone containing omega."""
        c = self.cone()
        if not c.is_full_dimensional():
            raise GITError("characters do not span a full-dimensional cone")
        if not c.is_strictly_convex():
            raise GITError("characters do not span a strictly convex cone")
        if not c.contains(self.omega):
            raise GITError("omega is not in the cone spanned by the characters")

    def anticanonical(self) -> Vector:
        return tuple(sum(col) for col in zip(*self.characters))

    def to_json(self) -> dict:
        return {"r": self.r, "characters": [list(d) for d in self.characters],
                "omega": [_frac_text(x) for x in self.omega]}

    @classmethod
    def from_json(cls, data: dict) -> "GITData":
        g = cls(tuple(tuple(d) for d in data["characters"]), tuple(data["omega"]))
        if "r" in data and int(data["r"]) != g.r:
            raise GITError(f"r = {data['r']} does not match the characters")
        return g


@dataclass(frozen=True)
class StackyFanData:
    """Rays rho_i (index-aligned with the characters) and maximal cones as index sets."""

    rays: tuple[Vector, ...]
    cones: tuple[tuple[int, ...], ...]
    n: int = field(default=-1)

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(v) for v in r) for r in self.rays))
        object.__setattr__(self, "cones", tuple(sorted(tuple(sorted(c)) for c in self.cones)))
        if self.n < 0:
            object.__setattr__(self, "n", len(self.rays[0]) if self.rays else 0)

    @property
    def fan(self) -> Fan:
        return Fan.from_cones([[self.rays[i] for i in c] for c in self.cones], self.n)

    def cone_matrix(self, cone: Sequence[int]) -> list[list[int]]:
        return [list(self.rays[i]) for i in cone]

    def is_simplicial(self) -> bool:
        return all(len(c) == self.n and det(self.cone_matrix(c)) != 0 for c in self.cones)

    @cached_property
    def walls(self) -> list[tuple[int, int, tuple[int, ...]]]:
        """Adjacent pairs of maximal cones with their wall relation.

        Each entry is ``(i, j, b)``: cones i and j share a codimension-one
        face and ``sum_k b_k rho_k == 0`` with b supported on the rays of the
        two cones, positive on the two rays off the shared face.
        """
        if not self.is_simplicial():
            raise GITError("fan is not simplicial")
        faces: dict[tuple[int, ...], list[int]] = {}
        for idx, c in enumerate(self.cones):
            for face in combinations(c, self.n - 1):
                faces.setdefault(face, []).append(idx)
        out = []
        for face, owners in sorted(faces.items()):
            if len(owners) != 2:
                raise GITError("fan is not complete")
            i, j = owners
            p = next(k for k in self.cones[i] if k not in face)
            q = next(k for k in self.cones[j] if k not in face)
            support = list(face) + [p, q]
            cols = transpose([self.rays[k] for k in support])
            (rel,) = nullspace(cols, len(support))
            if rel[-2] < 0:
                rel = tuple(-x for x in rel)
            b = [0] * len(self.rays)
            for k, x in zip(support, rel):
                b[k] = x
            out.append((i, j, tuple(b)))
        return out

    def is_complete(self) -> bool:
        try:
            self.walls
        except GITError:
            return False
        return bool(self.cones) or self.n == 0

    def to_json(self) -> dict:
        return {"rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.cones]}

    @classmethod
    def from_json(cls, data: dict) -> "StackyFanData":
        rays = [tuple(r) for r in data["rays"]]
        return cls(tuple(rays), tuple(tuple(c) for c in data["max_cones"]),
                   len(rays[0]) if rays else int(data.get("n", 0)))


# ---------------------------------------------------------------------------
# covering sets


def covers(characters: Sequence[Sequence[int]], omega: Sequence, subset: Iterable[int]) -> bool:
    """True iff omega is a combination of the chosen characters with all coefficients > 0."""
    subset = list(subset)
    if not subset:
        return False
    r = len(characters[0])
    cone = Cone.from_generators([characters[i] for i in subset], r)
    return cone.relint_contains([_frac(x) for x in omega])


def cover_sets(characters: Sequence[Sequence[int]], omega: Sequence) -> list[tuple[int, ...]]:
    """Every subset of [R] covering omega, by size and then lexicographically."""
    R = len(characters)
    return [s for k in range(1, R + 1) for s in combinations(range(R), k)
            if covers(characters, omega, s)]


# ---------------------------------------------------------------------------
# GIT data <-> fans


def unimodular_basis(characters: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Lexicographically first r-subset B of indices with det(D_B) = +-1."""
    r = len(characters[0])
    for sub in combinations(range(len(characters)), r):
        if abs(det([characters[j] for j in sub])) == 1:
            return sub
    return None


def _rays_from_characters(characters: Sequence[Sequence[int]]) -> list[Vector]:
    r, R = len(characters[0]), len(characters)
    basis = unimodular_basis(characters)
    if basis is None:
        kernel = integer_kernel(transpose(characters), R)
        return [tuple(row) for row in kernel]
    # write D in the basis {D_b}: (I | m); the kernel then has the obvious basis
    dmat = transpose(characters)  # r x R
    to_basis = integer_inverse([[dmat[i][b] for b in basis] for i in range(r)])
    m = matmul(to_basis, dmat)
    others = [j for j in range(R) if j not in basis]
    rays: list[Vector] = [()] * R
    for pos, j in enumerate(others):
        rays[j] = tuple(int(k == pos) for k in range(len(others)))
    for row, b in enumerate(basis):
        rays[b] = tuple(-m[row][j] for j in others)
    return rays


def git_to_fan(g: GITData) -> StackyFanData:
    """Stacky fan of the quotient [V_omega / K].

    The maximal cones are the complements of the r-subsets J for which omega
    is a strictly positive combination of D_J.
    """
    g.check()
    diag = smith_diagonal(transpose(g.characters))
    if len(diag) != g.r or any(x != 1 for x in diag):
        raise GITError("characters do not span the character lattice "
                       "(generic isotropy would be non-trivial)")
    if on_wall(g.characters, g.omega):
        raise GITError("omega lies on a wall of the secondary fan: the quotient is not Deligne-Mumford")
    rays = _rays_from_characters(g.characters)
    everything = set(range(g.R))
    cones = [tuple(sorted(everything - set(J))) for J in omega_bases(g.characters, g.omega)]
    return StackyFanData(tuple(rays), tuple(cones), g.R - g.r)


def characters_from_rays(rays: Sequence[Sequence[int]]) -> list[Vector]:
    """Characters D_i making the divisor sequence exact, normalised so that
    the first unimodular r-subset of them is the standard basis."""
    R = len(rays)
    diag = smith_diagonal(rays)
    n = len(rays[0])
    if len(diag) != n or any(x != 1 for x in diag):
        raise GITError("rays do not generate N: the cokernel has torsion")
    kernel = integer_kernel(transpose(rays), R)  # R x r
    dmat = transpose(kernel)  # r x R
    if not dmat:
        return [() for _ in range(R)]
    chars = [tuple(col) for col in zip(*dmat)]
    basis = unimodular_basis(chars)
    if basis is not None:
        to_basis = integer_inverse([[dmat[i][b] for b in basis] for i in range(len(dmat))])
        dmat = matmul(to_basis, dmat)
    return [tuple(col) for col in zip(*dmat)]


def ample_chamber(characters: Sequence[Sequence[int]], s: StackyFanData) -> Cone:
    """The chamber C = intersection over maximal cones sigma of cone(D_i : i not in sigma)."""
    r = len(characters[0])
    pieces = [Cone.from_generators([characters[i] for i in range(len(characters)) if i not in c], r)
              for c in s.cones]
    for chamber in secondary_fan_chambers(characters):
        p = chamber.interior_point()
        if all(piece.interior_contains(p) for piece in pieces):
            return chamber
    raise GITError("the cone C has empty interior: the coarse moduli space is not projective")


def fan_to_git(s: StackyFanData, omega_hint: Sequence | None = None) -> GITData:
    """GIT data for a complete simplicial stacky fan.

    omega is ``omega_hint`` when that lies in the interior of C, otherwise
    the sum of the primitive rays of C.
    """
    if not s.is_simplicial() or not s.is_complete():
        raise GITError("fan must be complete and simplicial")
    chars = characters_from_rays(s.rays)
    chamber = ample_chamber(chars, s)
    if omega_hint is not None and chamber.interior_contains([_frac(x) for x in omega_hint]):
        omega = tuple(_frac(x) for x in omega_hint)
    else:
        omega = tuple(Fraction(x) for x in chamber.interior_point())
    return GITData(tuple(chars), omega)


def same_up_to_basis(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    """True when some P in GL(r, Z) maps every character a_i to b_i."""
    if len(a) != len(b):
        return False
    r = len(a[0])
    if len(b[0]) != r:
        return False
    sub = next((s for s in combinations(range(len(a)), r) if det([a[j] for j in s]) != 0), None)
    if sub is None:
        return False
    from .lattice.linalg import inverse
    am = transpose([a[j] for j in sub])
    bm = transpose([b[j] for j in sub])
    p = matmul(bm, inverse(am))
    if any(x.denominator != 1 for row in p for x in row):
        return False
    p = [[int(x) for x in row] for row in p]
    if abs(det(p)) != 1:
        return False
    return all(tuple(matvec(p, ai)) == tuple(bi) for ai, bi in zip(a, b))


# ---------------------------------------------------------------------------
# line bundles


@dataclass(frozen=True)
class LineBundleClass:
    cls: Vector
    lift: Vector | None = None

    def check(self, characters: Sequence[Sequence[int]]) -> None:
        if self.lift is not None:
            image = tuple(sum(a * d[i] for a, d in zip(self.lift, characters))
                          for i in range(len(self.cls)))
            if image != tuple(self.cls):
                raise ValueError("lift does not map to the class")


def integral_lift(characters: Sequence[Sequence[int]], cls: Sequence[int]) -> Vector:
    """Divisor coefficients a with sum a_i D_i = cls.

    Prefers a non-negative lift supported on a unimodular basis (first in
    lexicographic order); otherwise any integral lift.
    """
    r, R = len(characters[0]), len(characters)
    for sub in combinations(range(R), r):
        cols = [characters[j] for j in sub]
        if abs(det(cols)) != 1:
            continue
        coeffs = matvec(integer_inverse(transpose(cols)), cls)
        if all(x >= 0 for x in coeffs):
            a = [0] * R
            for j, x in zip(sub, coeffs):
                a[j] = x
            return tuple(a)
    dmat = transpose(characters)
    u, smat, v = smith_decompose(dmat)
    ub = matvec(u, cls)
    y = [0] * R
    for i in range(r):
        d = smat[i][i] if i < R else 0
        if d == 0:
            if ub[i]:
                raise ValueError("class is not in the span of the characters")
            continue
        if ub[i] % d:
            raise ValueError("class is not an integral combination of the characters")
        y[i] = ub[i] // d
    return tuple(matvec(v, y))


def _lift(characters, bundle) -> Vector:
    if isinstance(bundle, LineBundleClass):
        bundle.check(characters)
        return bundle.lift if bundle.lift is not None else integral_lift(characters, bundle.cls)
    return integral_lift(characters, bundle)


def intersection_numbers(s: StackyFanData, characters: Sequence[Sequence[int]], bundle) -> list[int]:
    """Degree of the bundle on each wall curve, up to a positive factor per wall."""
    a = _lift(characters, bundle)
    return [dot(b, a) for _, _, b in s.walls]


def nef_check(s: StackyFanData, characters: Sequence[Sequence[int]], bundle) -> bool:
    return all(x >= 0 for x in intersection_numbers(s, characters, bundle))


def ample_check(s: StackyFanData, characters: Sequence[Sequence[int]], bundle) -> bool:
    return all(x > 0 for x in intersection_numbers(s, characters, bundle))


def local_characters(s: StackyFanData, characters: Sequence[Sequence[int]], bundle,
                     ) -> list[tuple[Fraction, ...]]:
    """For each maximal cone, the m with <m, rho_i> = -a_i on its rays."""
    from .lattice.linalg import solve
    a = _lift(characters, bundle)
    out = []
    for c in s.cones:
        m = solve(s.cone_matrix(c), [-a[i] for i in c])
        out.append(tuple(m))
    return out


def convexity_check(s: StackyFanData, characters: Sequence[Sequence[int]], bundle) -> bool:
    """Nef, and the support function is integral on every maximal cone."""
    if not nef_check(s, characters, bundle):
        return False
    return all(x.denominator == 1 for m in local_characters(s, characters, bundle) for x in m)


def smooth_fixed_point_exists(s: StackyFanData) -> bool:
    return any(abs(det(s.cone_matrix(c))) == 1 for c in s.cones)


def orbifold_check(s: StackyFanData) -> bool:
    diag = smith_diagonal(s.rays)
    return len(diag) == s.n and all(x == 1 for x in diag)


def cone_multiplicities(s: StackyFanData) -> list[int]:
    return [abs(det(s.cone_matrix(c))) for c in s.cones]


def positivity_tier(s: StackyFanData, characters: Sequence[Sequence[int]], bundle) -> str:
    """'ample', 'nef' (nef but not ample) or 'none'."""
    numbers = intersection_numbers(s, characters, bundle)
    if all(x > 0 for x in numbers):
        return "ample"
    if all(x >= 0 for x in numbers):
        return "nef"
    return "none"


def primitive_rays(s: StackyFanData) -> list[Vector]:
    return [primitive(r) for r in s.rays]
