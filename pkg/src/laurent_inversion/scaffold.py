"""Struts and scaffoldings of Laurent polynomials, and the two directions
between them and GIT data.

A scaffolding writes ``f`` (up to an additive constant) as a sum of struts
plus one monomial ``x_u`` for each free basis direction.  Each strut is a
monomial times a product of powers of ``1 + sum_{j in S'_i} x_j``.  Reading
the struts off as rows gives the weight matrix ``(I_r | m)`` whose columns
are the characters of a torus action; going the other way eliminates
variables from ``W = x_1 + ... + x_R`` under the constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .lattice import Cone, LatticePolytope, convex_hull, secondary_fan_chambers
from .lattice.linalg import Vector, det, integer_inverse, matmul, transpose
from .polynomial import LaurentPolynomial, sum_polynomials
from . import toric


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class BasisPartition:
    """Partition S'_1..S'_k, U' of the coordinate indices 0..n-1 of A."""

    parts: tuple[tuple[int, ...], ...]
    free: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(tuple(sorted(int(j) for j in p)) for p in self.parts)
        free = tuple(sorted(int(u) for u in self.free))
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "free", free)
        flat = [j for p in parts for j in p] + list(free)
        if sorted(flat) != list(range(len(flat))):
            raise ValueError(f"{parts} and {free} do not partition 0..{len(flat) - 1}")
        if any(not p for p in parts):
            raise ValueError("parts must be non-empty")

    @classmethod
    def from_parts(cls, parts: Sequence[Sequence[int]], n: int) -> "BasisPartition":
        used = {j for p in parts for j in p}
        return cls(tuple(tuple(p) for p in parts), tuple(u for u in range(n) if u not in used))

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts) + len(self.free)

    @property
    def k(self) -> int:
        return len(self.parts)

    def points(self) -> list[Vector]:
        return [tuple(int(i == u) for i in range(self.n)) for u in self.free]

    def to_json(self) -> dict:
        return {"parts": [list(p) for p in self.parts], "free": list(self.free)}

    @classmethod
    def from_json(cls, data: dict) -> "BasisPartition":
        return cls(tuple(tuple(p) for p in data["parts"]), tuple(data.get("free", ())))


@dataclass(frozen=True, order=True)
class Strut:
    """``x^translation * prod_i (1 + sum_{j in S'_i} x_j)^dilations[i]``."""

    dilations: tuple[int, ...]
    translation: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dilations", tuple(int(l) for l in self.dilations))
        object.__setattr__(self, "translation", tuple(int(t) for t in self.translation))
        if any(l < 0 for l in self.dilations):
            raise ValueError("dilations must be non-negative")

    def vertices(self, partition: BasisPartition) -> list[Vector]:
        """Candidate vertices: every sum of one vertex from each dilated simplex."""
        n = partition.n
        choices = []
        for l, part in zip(self.dilations, partition.parts):
            opts = [(0,) * n]
            if l:
                opts += [tuple(l * int(i == j) for i in range(n)) for j in part]
            choices.append(opts)
        out = set()
        for combo in product(*choices):
            out.add(tuple(t + sum(v[i] for v in combo) for i, t in enumerate(self.translation)))
        return sorted(out)

    def polytope(self, partition: BasisPartition) -> LatticePolytope:
        return convex_hull(self.vertices(partition))

    def polynomial(self, partition: BasisPartition) -> LaurentPolynomial:
        return strut_to_polynomial(self, partition)

    def to_json(self) -> dict:
        return {"dilations": list(self.dilations), "translation": list(self.translation)}


def strut_to_polynomial(strut: Strut, partition: BasisPartition) -> LaurentPolynomial:
    n = partition.n
    if len(strut.dilations) != partition.k or len(strut.translation) != n:
        raise ValueError("strut does not match the partition")
    result = LaurentPolynomial.monomial(strut.translation)
    for l, part in zip(strut.dilations, partition.parts):
        if l:
            simplex = LaurentPolynomial.constant(1, n)
            for j in part:
                simplex = simplex + LaurentPolynomial.variable(j, n)
            result = result * simplex ** l
    return result


def _strut_key(s: Strut):
    return (-sum(s.dilations), s.dilations, s.translation)


@dataclass(frozen=True)
class Scaffolding:
    partition: BasisPartition
    struts: tuple[Strut, ...]
    shift: int = 0

    @property
    def points(self) -> list[Vector]:
        return self.partition.points()

    def polynomial_sum(self) -> LaurentPolynomial:
        """Sum of the struts and the uneliminated monomials."""
        n = self.partition.n
        polys = [s.polynomial(self.partition) for s in self.struts]
        polys += [LaurentPolynomial.monomial(p) for p in self.points]
        return sum_polynomials(polys, n)

    def canonical(self) -> "Scaffolding":
        return Scaffolding(self.partition, tuple(sorted(self.struts, key=_strut_key)), self.shift)

    def to_json(self) -> dict:
        return {"partition": self.partition.to_json(),
                "struts": [s.to_json() for s in self.struts],
                "points": [list(p) for p in self.points],
                "shift": self.shift}

    @classmethod
    def from_json(cls, data: dict) -> "Scaffolding":
        partition = BasisPartition.from_json(data["partition"])
        struts = tuple(Strut(tuple(s["dilations"]), tuple(s["translation"])) for s in data["struts"])
        sc = cls(partition, struts, int(data.get("shift", 0)))
        if "points" in data and sorted(map(tuple, data["points"])) != sorted(sc.points):
            raise ValueError("points must be exactly the free basis vectors")
        return sc


# ---------------------------------------------------------------------------
# enumeration


def validate_scaffolding(f: LaurentPolynomial, sc: Scaffolding) -> tuple[bool, int | None]:
    """(True, c) when struts + points == f + c for a constant c, else (False, None)."""
    if sc.partition.n != f.dim:
        return False, None
    diff = sc.polynomial_sum() - f
    if not diff.is_constant():
        return False, None
    return True, diff.constant_term()


def candidate_struts(polytope: LatticePolytope, partition: BasisPartition,
                     allow_constant: bool = True) -> list[Strut]:
    """All struts for the partition whose Newton polytope lies in ``polytope``."""
    n = partition.n
    out = []
    for t in polytope.lattice_points():
        ranges = []
        for part in partition.parts:
            top = 0
            while all(polytope.contains(tuple(x + (top + 1) * int(i == j) for i, x in enumerate(t)))
                      for j in part):
                top += 1
            ranges.append(range(top + 1))
        for dil in product(*ranges):
            s = Strut(tuple(dil), t)
            if not allow_constant and not any(dil) and not any(t):
                continue
            if all(polytope.contains(v) for v in s.vertices(partition)):
                out.append(s)
    return out


def enumerate_scaffoldings(f: LaurentPolynomial, partition: BasisPartition,
                           allow_shift: bool = False) -> list[Scaffolding]:
    """Every scaffolding of f for the given partition.

    Struts have positive coefficients, so a branch dies as soon as the
    residual acquires a negative coefficient.  With ``allow_shift`` the
    constant term is left free and the constant strut ``1`` is excluded
    (it would give infinitely many trivial variants).
    """
    n = f.dim
    if partition.n != n:
        raise ValueError("partition does not match the number of variables")
    if f.is_zero():
        return []
    origin = (0,) * n
    poly = f.newton_polytope()
    residual = f
    for p in partition.points():
        if not poly.contains(p):
            return []
        residual = residual - LaurentPolynomial.monomial(p)
    candidates = candidate_struts(poly, partition, allow_constant=not allow_shift)
    terms = {s: dict(s.polynomial(partition).items()) for s in candidates}
    by_exponent: dict[Vector, list[Strut]] = {}
    for s in candidates:
        for e in terms[s]:
            by_exponent.setdefault(e, []).append(s)

    def constrained(e):
        return not (allow_shift and e == origin)

    found: dict[tuple, int] = {}
    seen: set[tuple] = set()

    def search(res: dict, chosen: tuple):
        key = tuple(sorted(chosen))
        if key in seen:
            return
        seen.add(key)
        open_terms = [e for e, c in res.items() if constrained(e)]
        if any(res[e] < 0 for e in open_terms):
            return
        if not open_terms:
            found[key] = -res.get(origin, 0)
            return
        e = min(open_terms)
        for s in by_exponent.get(e, ()):
            st = terms[s]
            if any(constrained(x) and res.get(x, 0) < c for x, c in st.items()):
                continue
            nxt = dict(res)
            for x, c in st.items():
                v = nxt.get(x, 0) - c
                if v:
                    nxt[x] = v
                else:
                    nxt.pop(x, None)
            search(nxt, chosen + (s,))

    search(dict(residual.items()), ())
    out = [Scaffolding(partition, struts, shift).canonical() for struts, shift in found.items()]
    return sorted(out, key=lambda sc: (len(sc.struts), [_strut_key(s) for s in sc.struts], sc.shift))


# ---------------------------------------------------------------------------
# weight matrices


@dataclass(frozen=True)
class WeightMatrix:
    """The r x R matrix (I_r | m) read off from a scaffolding.

    Column layout: 0..r-1 is the basis B; then one block per part S_i, in
    which ``s[i]`` is the distinguished column and the others correspond to
    the coordinates of S'_i in order; then the free columns U.
    ``variable_columns[a]`` is the column of coordinate a of A.
    """

    matrix: tuple[tuple[int, ...], ...]
    parts: tuple[tuple[int, ...], ...]
    s: tuple[int, ...]
    free: tuple[int, ...]
    variable_columns: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.matrix)

    @property
    def R(self) -> int:
        return len(self.matrix[0])

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def basis(self) -> tuple[int, ...]:
        return tuple(range(self.r))

    @property
    def characters(self) -> tuple[Vector, ...]:
        return tuple(tuple(col) for col in zip(*self.matrix))

    def dilation(self, b: int, i: int) -> int:
        return sum(self.matrix[b][j] for j in self.parts[i])

    def bundle(self, i: int) -> Vector:
        """Class of L_i = sum_{j in S_i} D_j."""
        return tuple(self.dilation(b, i) for b in range(self.r))

    def convex_partition(self) -> "ConvexPartition":
        return ConvexPartition(self.basis, self.parts, self.free)

    def struts(self) -> tuple[Strut, ...]:
        """Rebuild the struts from the rows."""
        out = []
        for row in self.matrix:
            dil = tuple(sum(row[j] for j in part) for part in self.parts)
            out.append(Strut(dil, tuple(-row[c] for c in self.variable_columns)))
        return tuple(out)

    def partition(self) -> BasisPartition:
        col_to_var = {c: a for a, c in enumerate(self.variable_columns)}
        parts = tuple(tuple(col_to_var[j] for j in part if j != s) for part, s in zip(self.parts, self.s))
        return BasisPartition(parts, tuple(col_to_var[u] for u in self.free))

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "parts": [list(p) for p in self.parts],
                "s": list(self.s), "free": list(self.free),
                "variable_columns": list(self.variable_columns)}


def scaffolding_to_weight_matrix(sc: Scaffolding, s_positions: Sequence[int] | None = None,
                                 free_first: bool = False) -> WeightMatrix:
    """Weight matrix of a scaffolding.

    ``s_positions[i]`` says where the distinguished column s_i sits inside
    the block of part i (0 = first, the default).  With ``free_first`` the
    U columns come straight after the basis instead of at the end.
    """
    part = sc.partition
    r, k, n = len(sc.struts), part.k, part.n
    if r < 1:
        raise ValueError("a weight matrix needs at least one strut")
    if s_positions is None:
        s_positions = [0] * k
    if len(s_positions) != k:
        raise ValueError("one s position per part is required")
    var_col = [0] * n
    parts, s_cols, free_cols = [], [], []
    col = r

    def place_free():
        nonlocal col
        for u in part.free:
            var_col[u] = col
            free_cols.append(col)
            col += 1

    if free_first:
        place_free()
    for p, pos in zip(part.parts, s_positions):
        if not 0 <= pos <= len(p):
            raise ValueError(f"s position {pos} out of range for part {p}")
        block = list(range(col, col + len(p) + 1))
        s_col = block[pos]
        others = [c for c in block if c != s_col]
        for j, c in zip(p, others):
            var_col[j] = c
        parts.append(tuple(block))
        s_cols.append(s_col)
        col += len(p) + 1
    if not free_first:
        place_free()
    R = col
    rows = []
    for a, strut in enumerate(sc.struts):
        if len(strut.dilations) != k or len(strut.translation) != n:
            raise ValueError("strut does not match the partition")
        row = [0] * R
        row[a] = 1
        t = strut.translation
        for i, p in enumerate(part.parts):
            row[s_cols[i]] = strut.dilations[i] + sum(t[j] for j in p)
            for j in p:
                row[var_col[j]] = -t[j]
        for u in part.free:
            row[var_col[u]] = -t[u]
        rows.append(tuple(row))
    return WeightMatrix(tuple(rows), tuple(parts), tuple(s_cols), tuple(free_cols), tuple(var_col))


# ---------------------------------------------------------------------------
# forward construction


@dataclass(frozen=True)
class ConvexPartition:
    """Partition B, S_1..S_k, U of the character indices 0..R-1."""

    basis: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]
    free: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(int(b) for b in self.basis))
        object.__setattr__(self, "parts", tuple(tuple(int(j) for j in p) for p in self.parts))
        object.__setattr__(self, "free", tuple(int(u) for u in self.free))
        flat = list(self.basis) + [j for p in self.parts for j in p] + list(self.free)
        if sorted(flat) != list(range(len(flat))):
            raise ValueError("basis, parts and free indices must partition 0..R-1")

    def to_json(self) -> dict:
        return {"basis": list(self.basis), "parts": [list(p) for p in self.parts],
                "free": list(self.free)}

    @classmethod
    def from_json(cls, data: dict) -> "ConvexPartition":
        return cls(tuple(data["basis"]), tuple(tuple(p) for p in data["parts"]),
                   tuple(data.get("free", ())))


class NotLaurentError(ValueError):
    pass


def _weights_in_basis(g: toric.GITData, cp: ConvexPartition) -> list[list[int]]:
    dmat = transpose(g.characters)
    if len(cp.basis) != g.r or abs(det([g.characters[b] for b in cp.basis])) != 1:
        raise ValueError("the characters indexed by B are not a basis of the character lattice")
    to_basis = integer_inverse([[dmat[i][b] for b in cp.basis] for i in range(g.r)])
    return matmul(to_basis, dmat)


def default_s_choices(cp: ConvexPartition) -> tuple[int, ...]:
    return tuple(min(p) for p in cp.parts)


def default_variables(cp: ConvexPartition, s_choices: Sequence[int]) -> tuple[int, ...]:
    """Columns of the variables of the mirror: U and S_i minus s_i, ascending."""
    cols = set(cp.free) | {j for p in cp.parts for j in p}
    return tuple(sorted(cols - set(s_choices)))


def forward_mirror(g: toric.GITData, cp: ConvexPartition, s_choices: Sequence[int] | None = None,
                   variables: Sequence[int] | None = None) -> LaurentPolynomial:
    """Laurent polynomial mirror of the complete intersection given by (g, cp, s).

    Eliminating x_j (j in S_i) through ``sum_{S_i} x_j = 1`` and x_b through
    the torus constraints turns ``W = x_1 + ... + x_R - k`` into
    ``sum_b f_b + sum_{u in U} x_u``, where f_b is the strut of row b.
    ``variables`` lists the column for each variable of the result.
    """
    if any(not p for p in cp.parts):
        raise ValueError("parts must be non-empty")
    m = _weights_in_basis(g, cp)
    if s_choices is None:
        s_choices = default_s_choices(cp)
    s_choices = tuple(s_choices)
    if len(s_choices) != len(cp.parts) or any(s not in p for s, p in zip(s_choices, cp.parts)):
        raise ValueError("each s_i must belong to S_i")
    if variables is None:
        variables = default_variables(cp, s_choices)
    variables = tuple(variables)
    if sorted(variables) != list(default_variables(cp, s_choices)):
        raise ValueError("variables must list the columns of U and S_i minus s_i")
    n = len(variables)
    pos = {c: a for a, c in enumerate(variables)}
    total = LaurentPolynomial.constant(0, n)
    for row_idx, row in enumerate(m):
        strut = LaurentPolynomial.constant(1, n)
        t = [0] * n
        for part, s in zip(cp.parts, s_choices):
            l = sum(row[j] for j in part)
            if l < 0:
                raise NotLaurentError(
                    f"L_i has a negative coefficient on basis element {cp.basis[row_idx]}: "
                    "elimination does not give a Laurent polynomial")
            simplex = LaurentPolynomial.constant(1, n)
            for j in part:
                if j != s:
                    simplex = simplex + LaurentPolynomial.variable(pos[j], n)
                    t[pos[j]] -= row[j]
            strut = strut * simplex ** l
        for u in cp.free:
            t[pos[u]] -= row[u]
        total = total + strut.shift(t)
    for u in cp.free:
        total = total + LaurentPolynomial.variable(pos[u], n)
    return total


def eliminated_superpotential(g: toric.GITData, cp: ConvexPartition, s_choices: Sequence[int],
                              variables: Sequence[int], point: Sequence) -> Fraction:
    """Evaluate ``W = sum x_j - k`` at the point of the constraint locus with
    the given values of the uneliminated variables; an independent check on
    :func:`forward_mirror`."""
    m = _weights_in_basis(g, cp)
    R = g.R
    x: list[Fraction | None] = [None] * R
    val = {c: Fraction(v) for c, v in zip(variables, point)}
    for u in cp.free:
        x[u] = val[u]
    for part, s in zip(cp.parts, s_choices):
        y = {j: (Fraction(1) if j == s else val[j]) for j in part}
        total = sum(y.values())
        for j in part:
            x[j] = y[j] / total
    for row_idx, b in enumerate(cp.basis):
        v = Fraction(1)
        for j in range(R):
            if j not in cp.basis:
                v *= x[j] ** (-m[row_idx][j])
        x[b] = v
    return sum(x) - len(cp.parts)


def convex_partition_clauses(g: toric.GITData, cp: ConvexPartition,
                             s: toric.StackyFanData | None = None) -> dict[str, bool]:
    """Which of the five conditions on a convex partition with basis hold."""
    out = {}
    try:
        m = _weights_in_basis(g, cp)
        out["i"] = True
    except ValueError:
        m = None
        out["i"] = False
    omega_coords = None
    if m is not None:
        from .lattice.linalg import solve
        omega_coords = solve(transpose([g.characters[b] for b in cp.basis]), g.omega)
    out["ii"] = omega_coords is not None and all(x >= 0 for x in omega_coords)
    out["iii"] = all(len(p) > 0 for p in cp.parts)
    bundles = [tuple(sum(g.characters[j][i] for j in p) for i in range(g.r)) for p in cp.parts]
    if s is not None:
        out["iv"] = all(toric.convexity_check(s, g.characters, L) for L in bundles)
    out["v"] = m is not None and all(sum(row[j] for j in p) >= 0 for row in m for p in cp.parts)
    return out


# ---------------------------------------------------------------------------
# inversion


@dataclass
class ChamberReport:
    rays: tuple[Vector, ...]
    omega: tuple[Fraction, ...]
    fan: toric.StackyFanData
    deligne_mumford: bool
    orbifold: bool
    smooth_fixed_point: bool
    multiplicities: list[int]
    clauses: dict[str, bool]
    bundles: list[dict]
    anticanonical: dict
    fano_tier: str

    def contains(self, omega: Sequence) -> bool:
        return Cone.from_generators(self.rays, len(self.omega)).interior_contains(
            [Fraction(x) for x in omega])

    def to_json(self) -> dict:
        return {
            "rays": [list(r) for r in self.rays],
            "omega": [toric._frac_text(x) for x in self.omega],
            "fan": self.fan.to_json(),
            "deligne_mumford": self.deligne_mumford,
            "orbifold": self.orbifold,
            "smooth_fixed_point": self.smooth_fixed_point,
            "multiplicities": self.multiplicities,
            "clauses": self.clauses,
            "bundles": self.bundles,
            "anticanonical": self.anticanonical,
            "fano_tier": self.fano_tier,
        }


@dataclass
class InversionReport:
    weight_matrix: WeightMatrix
    characters: tuple[Vector, ...]
    shift: int
    strictly_convex: bool
    ok: bool
    reason: str = ""
    chambers: list[ChamberReport] = field(default_factory=list)

    def chamber_containing(self, omega: Sequence) -> ChamberReport | None:
        return next((c for c in self.chambers if c.contains(omega)), None)

    def git_data(self, chamber: int = 0) -> toric.GITData:
        return toric.GITData(self.characters, self.chambers[chamber].omega)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "reason": self.reason,
            "weight_matrix": self.weight_matrix.to_json(),
            "characters": [list(d) for d in self.characters],
            "shift": self.shift,
            "strictly_convex": self.strictly_convex,
            "chambers": [c.to_json() for c in self.chambers],
        }


def _chamber_report(characters, wm: WeightMatrix, chamber: Cone) -> ChamberReport:
    omega = tuple(Fraction(x) for x in chamber.interior_point())
    g = toric.GITData(characters, omega)
    s = toric.git_to_fan(g)
    cp = wm.convex_partition()
    bundles = []
    for i in range(wm.k):
        L = wm.bundle(i)
        bundles.append({"class": list(L), "nef": toric.nef_check(s, characters, L),
                        "convex": toric.convexity_check(s, characters, L)})
    K = g.anticanonical()
    rest = tuple(K[b] - sum(wm.bundle(i)[b] for i in range(wm.k)) for b in range(wm.r))
    return ChamberReport(
        rays=chamber.rays,
        omega=omega,
        fan=s,
        deligne_mumford=True,
        orbifold=toric.orbifold_check(s),
        smooth_fixed_point=toric.smooth_fixed_point_exists(s),
        multiplicities=toric.cone_multiplicities(s),
        clauses=convex_partition_clauses(g, cp, s),
        bundles=bundles,
        anticanonical={"class": list(K), "nef": toric.nef_check(s, characters, K),
                       "ample": toric.ample_check(s, characters, K)},
        fano_tier=toric.positivity_tier(s, characters, rest),
    )


def invert(f: LaurentPolynomial, sc: Scaffolding, s_positions: Sequence[int] | None = None,
           ) -> InversionReport:
    """GIT data and per-chamber diagnostics obtained from a scaffolding of f."""
    valid, shift = validate_scaffolding(f, sc)
    if not valid:
        raise ValueError("the scaffolding does not sum to f up to a constant")
    wm = scaffolding_to_weight_matrix(sc, s_positions)
    chars = wm.characters
    cone = Cone.from_generators(chars, wm.r)
    convex = cone.is_full_dimensional() and cone.is_strictly_convex()
    report = InversionReport(wm, chars, shift, convex, ok=convex)
    if not convex:
        report.reason = "characters do not span a strictly convex full-dimensional cone"
        return report
    report.chambers = [_chamber_report(chars, wm, c) for c in secondary_fan_chambers(chars)]
    return report
