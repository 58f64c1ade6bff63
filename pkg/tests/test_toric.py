from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from laurent_inversion.lattice import Cone, on_wall, secondary_fan_chambers
from laurent_inversion.toric import (GITData, GITError, LineBundleClass, StackyFanData,
                                     ample_check, cone_multiplicities, convexity_check, cover_sets,
                                     covers, fan_to_git, git_to_fan, integral_lift,
                                     intersection_numbers, nef_check, orbifold_check,
                                     positivity_tier, same_up_to_basis, smooth_fixed_point_exists)

from worked_examples import EXAMPLES

P3 = GITData(((1,), (1,), (1,), (1,)), (1,))
P1 = GITData(((1,), (1,)), (1,))
P2_FAN = StackyFanData(((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
P1_FAN = StackyFanData(((1,), (-1,)), ((0,), (1,)))
WEIGHTED_LINE = StackyFanData(((2,), (-1,)), ((0,), (1,)))  # P(1,2)
P112 = StackyFanData(((1, 0), (-1, -2), (0, 1)), ((0, 1), (0, 2), (1, 2)))


def same_fan(a, b):
    """Equal cones, with rays related by one unimodular change of basis of N."""
    return a.cones == b.cones and same_up_to_basis(a.rays, b.rays)


def characters(name):
    return tuple(zip(*EXAMPLES[name].matrix))


def example_git(name):
    chars = characters(name)
    omega = EXAMPLES[name].omega or secondary_fan_chambers(chars)[0].interior_point()
    return GITData(chars, omega)


# -- covering sets ----------------------------------------------------------------


def test_all_subsets_cover_for_projective_space():
    assert len(cover_sets(P3.characters, P3.omega)) == 15


def test_empty_set_never_covers():
    assert not covers(P3.characters, P3.omega, [])


def test_one_direction_does_not_cover():
    chars = characters("hexagon squares")
    assert chars[0] == chars[3] == (1, 0)
    assert not covers(chars, (1, 1), [0, 3])
    assert covers(chars, (1, 1), [0, 1])


# -- GIT data to fans -----------------------------------------------------------------


def test_projective_space_fan():
    s = git_to_fan(P3)
    assert len(s.cones) == 4 and s.n == 3
    assert sorted(s.rays) == sorted([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)])


def test_triangles_give_cube_of_lines():
    s = git_to_fan(example_git("hexagon triangles"))
    assert s.n == 3 and len(s.cones) == 8
    assert all(tuple(-x for x in r) in s.rays for r in s.rays)
    assert cone_multiplicities(s) == [1] * 8


def test_projective_line_fan():
    s = git_to_fan(P1)
    assert sorted(s.rays) == [(-1,), (1,)] and len(s.cones) == 2


def test_squares_give_product_of_planes():
    s = git_to_fan(example_git("hexagon squares"))
    assert s.n == 4 and len(s.cones) == 9 and smooth_fixed_point_exists(s)


@pytest.mark.parametrize("fan, chars", [
    (StackyFanData(((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)),
                   ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))), [(1,)] * 4),
    (StackyFanData(((1, 0), (-1, 0), (0, 1), (0, -1)), ((0, 2), (0, 3), (1, 2), (1, 3))),
     [(1, 0), (1, 0), (0, 1), (0, 1)]),
])
def test_fan_to_git_examples(fan, chars):
    g = fan_to_git(fan)
    assert same_up_to_basis(g.characters, chars)
    assert same_fan(git_to_fan(g), fan)


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_roundtrip_on_examples(name):
    g = example_git(name)
    s = git_to_fan(g)
    back = fan_to_git(s, g.omega)
    assert same_up_to_basis(back.characters, g.characters)
    assert back.omega == g.omega
    assert same_fan(git_to_fan(back), s)


def test_omega_on_wall_is_rejected():
    with pytest.raises(GITError, match="Deligne-Mumford"):
        git_to_fan(GITData(((1, 0), (1, 1), (0, 1)), (1, 1)))


def test_torsion_is_rejected():
    with pytest.raises(GITError, match="isotropy"):
        git_to_fan(GITData(((2,), (2,)), (1,)))
    with pytest.raises(GITError, match="torsion"):
        fan_to_git(StackyFanData(((2,), (-2,)), ((0,), (1,))))


def test_not_strictly_convex_is_rejected():
    with pytest.raises(GITError):
        git_to_fan(GITData(((1,), (-1,)), (1,)))


def test_git_json_roundtrip():
    g = example_git("orbifold fourfold")
    assert GITData.from_json(g.to_json()) == g
    assert GITData.from_json({"r": 1, "characters": [[1], [1]], "omega": ["1/2"]}).omega == (
        Fraction(1, 2),)


# -- positivity ------------------------------------------------------------------------


def test_anticanonical_plane_is_ample():
    chars = characters_of(P2_FAN)
    K = tuple(sum(c) for c in zip(*chars))
    assert ample_check(P2_FAN, chars, K)


def characters_of(fan):
    return fan_to_git(fan).characters


def test_negative_degree_on_line_is_not_nef():
    assert not nef_check(P1_FAN, characters_of(P1_FAN), (-1,))
    assert nef_check(P1_FAN, characters_of(P1_FAN), (0,))
    assert not ample_check(P1_FAN, characters_of(P1_FAN), (0,))


def test_threefold_positivity():
    g = example_git("rigid threefold")
    s = git_to_fan(g)
    L1 = (2, 2, 2)
    K = g.anticanonical()
    assert K == (4, 3, 3)
    assert nef_check(s, g.characters, L1)
    assert convexity_check(s, g.characters, L1)
    rest = tuple(a - b for a, b in zip(K, L1))
    assert nef_check(s, g.characters, rest)
    assert not ample_check(s, g.characters, rest)
    assert positivity_tier(s, g.characters, rest) == "nef"


def test_fourfold_bundle_is_convex():
    g = example_git("orbifold fourfold")
    s = git_to_fan(g)
    assert orbifold_check(s) and smooth_fixed_point_exists(s)
    assert sorted(cone_multiplicities(s))[-1] == 2
    L1 = tuple(a + b for a, b in zip(g.characters[2], g.characters[3]))
    assert convexity_check(s, g.characters, L1)


def test_weighted_line_half_integral():
    chars = characters_of(WEIGHTED_LINE)
    assert chars == ((1,), (2,)) or same_up_to_basis(chars, [(1,), (2,)])
    # the class of D_0: nef but its support function is half-integral on the cone over 2
    cls = LineBundleClass(chars[0], tuple(int(i == 0) for i in range(2)))
    assert nef_check(WEIGHTED_LINE, chars, cls)
    assert not convexity_check(WEIGHTED_LINE, chars, cls)
    assert convexity_check(WEIGHTED_LINE, chars, chars[1])


def test_trivial_class_is_convex():
    assert convexity_check(WEIGHTED_LINE, characters_of(WEIGHTED_LINE), (0,))


def test_weighted_plane_singular_cone():
    assert smooth_fixed_point_exists(P112)
    assert sorted(cone_multiplicities(P112)) == [1, 1, 2]
    assert orbifold_check(P112)


def test_projective_space_smooth():
    s = git_to_fan(P3)
    assert orbifold_check(s) and smooth_fixed_point_exists(s)


def test_lift_must_map_to_class():
    with pytest.raises(ValueError):
        nef_check(P1_FAN, characters_of(P1_FAN), LineBundleClass((1,), (1, 1)))


@pytest.mark.parametrize("name", ["cubic surface", "hexagon triangles", "hexagon squares"])
def test_anticanonical_ample_on_surface_examples(name):
    g = example_git(name)
    s = git_to_fan(g)
    assert nef_check(s, g.characters, g.anticanonical())
    assert ample_check(s, g.characters, g.anticanonical())


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_lift_independence(name):
    g = example_git(name)
    s = git_to_fan(g)
    K = g.anticanonical()
    a = integral_lift(g.characters, K)
    base = intersection_numbers(s, g.characters, LineBundleClass(K, a))
    # adding a principal divisor <m, rho_i> does not change the class
    for m in [[int(i == j) for i in range(s.n)] for j in range(s.n)]:
        shifted = tuple(x + sum(p * q for p, q in zip(m, ray)) for x, ray in zip(a, s.rays))
        assert intersection_numbers(s, g.characters, LineBundleClass(K, shifted)) == base
    assert intersection_numbers(s, g.characters, LineBundleClass(K, (1,) * g.R)) == base


# -- random smooth GIT data -------------------------------------------------------------


@st.composite
def git_data(draw):
    r = draw(st.integers(1, 3))
    extra = draw(st.integers(1, 3))
    m = [[draw(st.integers(0, 2)) for _ in range(extra)] for _ in range(r)]
    for i in range(r):
        if not any(m[i]):
            m[i][draw(st.integers(0, extra - 1))] = 1
    for j in range(extra):
        if not any(m[i][j] for i in range(r)):
            m[draw(st.integers(0, r - 1))][j] = 1
    chars = [tuple(int(i == j) for i in range(r)) for j in range(r)]
    chars += [tuple(m[i][j] for i in range(r)) for j in range(extra)]
    omega = tuple(draw(st.integers(1, 9)) for _ in range(r))
    return chars, omega


@settings(max_examples=60, deadline=None)
@given(git_data())
def test_random_roundtrip(data):
    chars, omega = data
    cone = Cone.from_generators(chars, len(omega))
    assume(cone.interior_contains(omega) and not on_wall(chars, omega))
    g = GITData(tuple(chars), omega)
    s = git_to_fan(g)
    assert s.is_simplicial() and s.is_complete()
    back = fan_to_git(s, omega)
    assert same_up_to_basis(back.characters, g.characters) and back.omega == g.omega
    assert same_fan(git_to_fan(back), s)
    if all(m == 1 for m in cone_multiplicities(s)):
        for cls in [g.anticanonical(), chars[-1], tuple(-x for x in chars[0])]:
            assert convexity_check(s, chars, cls) == nef_check(s, chars, cls)
