"""Toric degenerations of the complete intersection read off from a weight matrix.

The fan Sigma of the ambient space lives in N = Z^(R-r) with the rays
rho_j (j outside the basis B) as the standard basis.  Slicing Sigma by the
hyperplanes u_i = 0 gives the fan Sigma' of the special fibre; in the
distinguished basis of N' = N cap (u_i = 0) its rays can be compared directly
with the spanning fan of the Newton polytope.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lattice import Fan, LatticePolytope, refines, restrict_fan, spanning_fan
from .lattice.linalg import Vector, dot, is_saturated
from .scaffold import WeightMatrix
from .toric import StackyFanData


def _n_coordinate(wm: WeightMatrix, col: int) -> int:
    return col - wm.r


def nef_partition_forms(wm: WeightMatrix) -> list[Vector]:
    """The covectors u_i: 1 on rho_j for j in S_i, 0 on the other non-basis rays.

    Raises if the identity u_i(rho_a) = -l_{a,i} fails on a basis ray.
    """
    n = wm.R - wm.r
    forms = []
    for i, part in enumerate(wm.parts):
        u = [0] * n
        for j in part:
            u[_n_coordinate(wm, j)] = 1
        forms.append(tuple(u))
        for a in range(wm.r):
            rho_a = tuple(-wm.matrix[a][c] for c in range(wm.r, wm.R))
            if dot(u, rho_a) != -wm.dilation(a, i):
                raise AssertionError("u_i(rho_a) != -l_{a,i}")
    return forms


def basis_rays(wm: WeightMatrix) -> list[Vector]:
    """rho_1..rho_R in N coordinates."""
    n = wm.R - wm.r
    rays = []
    for c in range(wm.R):
        if c < wm.r:
            rays.append(tuple(-wm.matrix[c][j] for j in range(wm.r, wm.R)))
        else:
            rays.append(tuple(int(k == _n_coordinate(wm, c)) for k in range(n)))
    return rays


def distinguished_basis(wm: WeightMatrix, s_choices: Sequence[int] | None = None,
                        ) -> tuple[list[Vector], list[int]]:
    """Basis of N': rho_u for u in U and rho_j - rho_{s_i} for j in S_i, j != s_i.

    Returns (basis, columns): ``columns[a]`` is the column j that basis
    vector a comes from, so basis vector a corresponds to the variable of
    column j.  With the weight matrix's own s the order follows its
    ``variable_columns``; otherwise columns ascend.
    """
    s = tuple(wm.s) if s_choices is None else tuple(s_choices)
    if len(s) != wm.k or any(si not in p for si, p in zip(s, wm.parts)):
        raise ValueError("each s_i must belong to S_i")
    if s == tuple(wm.s):
        columns = list(wm.variable_columns)
    else:
        columns = sorted(set(wm.free) | {j for p in wm.parts for j in p} - set(s))
    owner = {j: i for i, p in enumerate(wm.parts) for j in p}
    n = wm.R - wm.r
    basis = []
    for c in columns:
        v = [0] * n
        v[_n_coordinate(wm, c)] += 1
        if c in owner:
            v[_n_coordinate(wm, s[owner[c]])] -= 1
        basis.append(tuple(v))
    return basis, columns


def binomial_sections(wm: WeightMatrix) -> list[tuple[Vector, Vector]]:
    """For each part i the exponents of prod_a x_a^{l_{a,i}} and prod_{j in S_i} x_j."""
    out = []
    for i, part in enumerate(wm.parts):
        first = [0] * wm.R
        for a in range(wm.r):
            l = wm.dilation(a, i)
            if l < 0:
                raise ValueError(f"negative dilation l_{{{a},{i}}} = {l}")
            first[a] = l
        second = [int(j in part) for j in range(wm.R)]
        out.append((tuple(first), tuple(second)))
    return out


def section_degree(wm: WeightMatrix, exponent: Sequence[int]) -> Vector:
    """Image of an exponent vector under D, in the basis {D_b}."""
    return tuple(sum(row[j] * e for j, e in enumerate(exponent)) for row in wm.matrix)


@dataclass
class DegenerationData:
    forms: list[Vector]
    basis: list[Vector]
    basis_columns: list[int]
    sections: list[tuple[Vector, Vector]]

    @classmethod
    def from_weight_matrix(cls, wm: WeightMatrix, s_choices: Sequence[int] | None = None,
                           ) -> "DegenerationData":
        basis, cols = distinguished_basis(wm, s_choices)
        return cls(nef_partition_forms(wm), basis, cols, binomial_sections(wm))

    def check(self) -> None:
        if self.basis and not is_saturated(self.basis):
            raise AssertionError("distinguished basis is not a basis of a saturated sublattice")
        for u in self.forms:
            if any(dot(u, b) for b in self.basis):
                raise AssertionError("basis vector leaves the sublattice N'")


def degeneration_fan(s: StackyFanData, dd: DegenerationData) -> Fan:
    """Sigma' = Sigma cut by the hyperplanes u_i = 0, in the distinguished basis."""
    return restrict_fan(s.fan, dd.forms, dd.basis)


def is_spanning_fan(sigma_prime: Fan, polytope: LatticePolytope) -> bool:
    return sigma_prime == spanning_fan(polytope)


@dataclass
class DegenerationReport:
    data: DegenerationData
    fan: Fan
    spanning_fan: bool
    refines_spanning_fan: bool
    complete: bool

    def to_json(self) -> dict:
        return {
            "forms": [list(u) for u in self.data.forms],
            "basis": [list(b) for b in self.data.basis],
            "basis_columns": self.data.basis_columns,
            "restricted_fan": self.fan.to_json(),
            "spanning_fan": self.spanning_fan,
            "refines_spanning_fan": self.refines_spanning_fan,
            "complete": self.complete,
            "binomial_sections": [[list(a), list(b)] for a, b in self.data.sections],
        }


def degenerate(wm: WeightMatrix, s: StackyFanData, polytope: LatticePolytope,
               s_choices: Sequence[int] | None = None) -> DegenerationReport:
    dd = DegenerationData.from_weight_matrix(wm, s_choices)
    dd.check()
    fan = degeneration_fan(s, dd)
    span = spanning_fan(polytope)
    return DegenerationReport(dd, fan, fan == span, refines(fan, span), fan.is_complete())
