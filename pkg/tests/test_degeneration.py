import pytest

from laurent_inversion.degeneration import (DegenerationData, basis_rays, binomial_sections,
                                            degenerate, degeneration_fan, distinguished_basis,
                                            is_spanning_fan, nef_partition_forms, section_degree)
from laurent_inversion.lattice import Fan, convex_hull, spanning_fan
from laurent_inversion.lattice.linalg import dot, smith_diagonal
from laurent_inversion.scaffold import (BasisPartition, Scaffolding, Strut, invert,
                                        scaffolding_to_weight_matrix)
from laurent_inversion.toric import GITData, git_to_fan

from worked_examples import EXAMPLES, chamber_of

SQUARE = convex_hull([(1, 0), (0, 1), (-1, 0), (0, -1)])
P1P1 = Fan.from_cones([[(1, 0), (0, 1)], [(0, 1), (-1, 0)], [(-1, 0), (0, -1)],
                       [(0, -1), (1, 0)]], 2)
P2 = Fan.from_cones([[(1, 0), (0, 1)], [(0, 1), (-1, -1)], [(-1, -1), (1, 0)]], 2)


def weight_matrix(name):
    return scaffolding_to_weight_matrix(EXAMPLES[name].scaffolding)


def degeneration(name):
    ex = EXAMPLES[name]
    wm = weight_matrix(name)
    c = chamber_of(ex, invert(ex.f, ex.scaffolding))
    return wm, c, degenerate(wm, c.fan, ex.f.newton_polytope())


# -- forms ------------------------------------------------------------------------


def test_cubic_form():
    wm = weight_matrix("cubic surface")
    assert nef_partition_forms(wm) == [(1, 1, 1)]
    assert dot((1, 1, 1), basis_rays(wm)[0]) == -3


def test_fourfold_form():
    wm = weight_matrix("orbifold fourfold")
    (u,) = nef_partition_forms(wm)
    assert u == (1, 1, 0, 0, 0)
    rays = basis_rays(wm)
    assert [dot(u, rays[a]) for a in range(2)] == [-2, 0]


def test_no_parts_no_forms():
    sc = Scaffolding(BasisPartition((), (0,)), (Strut((), (-1,)),))
    assert nef_partition_forms(scaffolding_to_weight_matrix(sc)) == []


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_forms_are_indicators(name):
    wm = weight_matrix(name)
    rays = basis_rays(wm)
    for i, u in enumerate(nef_partition_forms(wm)):
        for j in range(wm.r, wm.R):
            assert dot(u, rays[j]) == int(j in wm.parts[i])
        for a in range(wm.r):
            assert dot(u, rays[a]) == -wm.dilation(a, i)


# -- distinguished basis -----------------------------------------------------------


def test_cubic_basis():
    wm = scaffolding_to_weight_matrix(EXAMPLES["cubic surface"].scaffolding, [2])
    # s is the last column of the part; the variables are the first two
    basis, cols = distinguished_basis(wm)
    assert cols == [1, 2]
    assert basis == [(1, 0, -1), (0, 1, -1)]


def test_fourfold_basis():
    basis, cols = distinguished_basis(weight_matrix("orbifold fourfold"))
    assert cols == [3, 4, 5, 6]
    assert basis == [(-1, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)]


def test_pure_toric_basis():
    sc = Scaffolding(BasisPartition((), (0,)), (Strut((), (-1,)),))
    basis, cols = distinguished_basis(scaffolding_to_weight_matrix(sc))
    assert basis == [(1,)] and cols == [1]


def test_bad_s_choice():
    with pytest.raises(ValueError):
        distinguished_basis(weight_matrix("cubic surface"), [0])


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_basis_spans_saturated_sublattice(name):
    wm = weight_matrix(name)
    dd = DegenerationData.from_weight_matrix(wm)
    dd.check()
    n = wm.R - wm.r
    assert len(dd.basis) == n - wm.k
    assert smith_diagonal(dd.basis) == [1] * len(dd.basis)


# -- binomial sections -------------------------------------------------------------


def test_cubic_sections():
    assert binomial_sections(weight_matrix("cubic surface")) == [((3, 0, 0, 0), (0, 1, 1, 1))]


def test_squares_sections():
    assert binomial_sections(weight_matrix("hexagon squares")) == [
        ((1, 1, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0)), ((1, 1, 0, 0, 0, 0), (0, 0, 0, 0, 1, 1))]


def test_fourfold_sections():
    assert binomial_sections(weight_matrix("orbifold fourfold")) == [
        ((2, 0, 0, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0, 0))]


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_section_monomials_have_equal_degree(name):
    wm = weight_matrix(name)
    for i, (a, b) in enumerate(binomial_sections(wm)):
        assert section_degree(wm, a) == section_degree(wm, b) == wm.bundle(i)


# -- restricted fans -----------------------------------------------------------------


def test_square_against_fans():
    assert is_spanning_fan(P1P1, SQUARE)
    assert not is_spanning_fan(P2, SQUARE)


def test_cubic_restricted_fan():
    wm, c, rep = degeneration("cubic surface")
    assert set(rep.fan.rays) == {(-1, -1), (2, -1), (-1, 2)}
    assert rep.spanning_fan and rep.complete


def test_triangles_restricted_fan():
    _, _, rep = degeneration("hexagon triangles")
    assert len(rep.fan.rays) == 6 and rep.complete


def test_pure_toric_restriction_is_the_fan():
    sc = Scaffolding(BasisPartition((), (0,)), (Strut((), (-1,)),))
    wm = scaffolding_to_weight_matrix(sc)
    s = git_to_fan(GITData(wm.characters, (1,)))
    fan = degeneration_fan(s, DegenerationData.from_weight_matrix(wm))
    assert fan == s.fan


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_rays_pass_through_strut_vertices(name):
    ex = EXAMPLES[name]
    _, _, rep = degeneration(name)
    part = ex.partition
    marks = set()
    for strut in ex.scaffolding.struts:
        marks.update(strut.vertices(part))
    marks.update(part.points())
    for ray in rep.fan.rays:
        assert any(all(m[i] * ray[j] == m[j] * ray[i] for i in range(len(ray))
                       for j in range(len(ray)))
                   and sum(a * b for a, b in zip(m, ray)) > 0 for m in marks)


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_restricted_fan_is_complete(name):
    _, c, rep = degeneration(name)
    assert c.fan.is_complete()
    assert rep.complete


@pytest.mark.parametrize("name", ["cubic surface", "hexagon triangles", "hexagon squares",
                                  "orbifold fourfold"])
def test_spanning_fan_examples(name):
    _, _, rep = degeneration(name)
    assert rep.spanning_fan and rep.refines_spanning_fan


def test_threefold_restricted_fan_refines():
    # at omega = (3,2,1) the slice adds a ray through (0,1,-1), a boundary point
    # of Newt(f) that is a strut vertex but not a vertex of the polytope
    ex = EXAMPLES["rigid threefold"]
    _, _, rep = degeneration("rigid threefold")
    P = ex.f.newton_polytope()
    extra = set(rep.fan.rays) - set(spanning_fan(P).rays)
    assert extra == {(0, 1, -1)}
    assert P.contains((0, 1, -1)) and (0, 1, -1) not in P.vertices
    assert rep.refines_spanning_fan


def test_report_json_keys():
    _, _, rep = degeneration("orbifold fourfold")
    assert set(rep.to_json()) == {"forms", "basis", "basis_columns", "restricted_fan",
                                  "spanning_fan", "refines_spanning_fan", "complete",
                                  "binomial_sections"}


def test_negative_dilation_sections():
    wm = weight_matrix("cubic surface")
    bad = type(wm)(((1, -1, 0, 0),), wm.parts, wm.s, wm.free, wm.variable_columns)
    with pytest.raises(ValueError):
        binomial_sections(bad)
