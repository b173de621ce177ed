from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from helpers import box_mobius_solutions, box_solutions, content, sl2_box, sl2_matrices

from sl2reach.mat2 import IDENTITY, S_MAT, Mat2, Vec2, mat_inverse_sl2, t_power
from sl2reach.solve import (
    INF,
    All,
    Empty,
    Line,
    LinePair,
    ParamFamily,
    Rat,
    TwoParamLine,
    family_to_line,
    mobius,
    solve_flt_equation,
    solve_linear_family,
    solve_scalar_special,
    solve_vector_equation,
)

BOX = sl2_box(12)
coord = st.integers(-8, 8)
vectors = st.builds(Vec2, coord, coord)


def test_rat_parsing():
    assert Rat.parse("2/4") == Rat(1, 2)
    assert Rat.parse("-3/-6") == Rat(1, 2)
    assert Rat.parse("inf") == INF == Rat.of(-5, 0)
    assert Rat.parse(7) == Rat(7, 1)
    assert str(Rat.of(3, -9)) == "-1/3"
    with pytest.raises(ValueError):
        Rat.of(0, 0)


def test_mobius_infinity_conventions():
    assert mobius(S_MAT, INF) == Rat(0, 1)
    assert mobius(IDENTITY, INF) == INF
    assert mobius(S_MAT, Rat(0, 1)) == INF
    assert mobius(Mat2(2, 1, 1, 1), Rat(1, 2)) == Rat(4, 3)


@given(sl2_matrices(), st.integers(-30, 30), st.integers(1, 30))
def test_mobius_matches_fraction(M, p, q):
    got = mobius(M, Rat.of(p, q))
    den = M.c * Fraction(p, q) + M.d
    if den == 0:
        assert got == INF
    else:
        v = (M.a * Fraction(p, q) + M.b) / den
        assert got == Rat(v.numerator, v.denominator)


def test_linear_family_examples():
    fam = solve_linear_family(Vec2(1, 0), Vec2(1, 0))
    assert {fam.member(t) for t in range(-3, 4)} <= {t_power(s) for s in range(-20, 21)}
    assert solve_linear_family(Vec2(2, 0), Vec2(3, 0)) is None
    fam = solve_linear_family(Vec2(2, 1), Vec2(1, 1))
    assert fam.check()
    assert any(fam.member(t) == t_power(-1) for t in range(-20, 21))
    with pytest.raises(ValueError):
        solve_linear_family(Vec2(0, 0), Vec2(1, 0))


def test_family_to_line_examples():
    line = family_to_line(ParamFamily(Mat2(0, 1, 0, 0), IDENTITY))
    assert {line.member(t) for t in range(-4, 5)} == {t_power(t) for t in range(-4, 5)}
    line = solve_vector_equation(Vec2(2, 1), Vec2(1, 1))
    for t in (0, 1):
        assert line.member(t) @ Vec2(2, 1) == Vec2(1, 1)
    line = solve_vector_equation(Vec2(0, 1), Vec2(1, 1))
    assert line.contains(t_power(1))


def test_vector_equation_trivial_cases():
    assert solve_vector_equation(Vec2(0, 0), Vec2(0, 0)) == All()
    assert solve_vector_equation(Vec2(0, 0), Vec2(1, 0)) == Empty()
    assert solve_vector_equation(Vec2(1, 0), Vec2(0, 0)) == Empty()
    assert solve_vector_equation(Vec2(2, 0), Vec2(3, 0)) == Empty()
    line = solve_vector_equation(Vec2(1, 0), Vec2(1, 0))
    assert all(line.contains(t_power(t)) for t in range(-5, 6))


@given(vectors, sl2_matrices(max_letters=12))
def test_line_sound_and_complete_in_box(x, M):
    assume(not x.is_zero())
    y = M @ x
    sol = solve_vector_equation(x, y)
    assert isinstance(sol, Line)
    for t in range(-5, 6):
        assert sol.member(t) @ x == y
    assert sol.contains(M)
    want = box_solutions(BOX, x, y)
    got = {Mat2(*map(int, r)) for r in BOX if sol.contains(Mat2(*map(int, r)))}
    assert got == want


@given(vectors, vectors)
def test_unsolvable_pairs_have_no_box_solutions(x, y):
    sol = solve_vector_equation(x, y)
    if isinstance(sol, Empty):
        assert not box_solutions(BOX, x, y)


@given(vectors, sl2_matrices(max_letters=12))
def test_geometry_of_line(x, M):
    assume(not x.is_zero())
    y = M @ x
    line = solve_vector_equation(x, y)
    u = line.C @ x
    v = mat_inverse_sl2(line.B) @ y
    assert u == v and u.x2 == 0 and abs(u.x1) == content(x)


@st.composite
def rationals(draw):
    if draw(st.integers(0, 10)) == 0:
        return INF
    return Rat.of(draw(st.integers(-20, 20)), draw(st.integers(1, 20)))


@given(rationals(), rationals())
def test_mobius_solution_set(x, y):
    sol = solve_flt_equation(x, y)
    lines = sol.lines if isinstance(sol, LinePair) else (() if isinstance(sol, Empty) else (sol,))
    for line in lines:
        for t in range(-5, 6):
            assert mobius(line.member(t), x) == y
    want = box_mobius_solutions(BOX, x.vector(), y.vector())
    got = {Mat2(*map(int, r)) for r in BOX if sol.contains(Mat2(*map(int, r)))}
    assert got == want


def test_mobius_examples():
    assert solve_flt_equation(Rat(0, 1), Rat(0, 1)).contains(IDENTITY)
    assert solve_flt_equation(Rat(2, 1), Rat(1, 1)).contains(t_power(-1))
    assert solve_flt_equation(INF, Rat(0, 1)).contains(S_MAT)


def test_mobius_both_signs_always_present():
    sol = solve_flt_equation(Rat(1, 2), Rat(3, 5))
    assert isinstance(sol, LinePair) and len(sol.lines) == 2


def test_scalar_examples():
    from sl2reach.mat2 import R_MAT
    assert solve_scalar_special(0, Vec2(1, 0)).contains(R_MAT)
    assert solve_scalar_special(0, Vec2(2, 0)) == Empty()
    sol = solve_scalar_special(1, Vec2(1, 0))
    for s in range(-2, 3):
        for t in range(-2, 3):
            y1, y2 = sol.member(s, t) @ Vec2(1, 0)
            assert y1 + y2 == 1


@given(st.integers(-6, 6), vectors)
def test_scalar_complete_in_box(a, x):
    sol = solve_scalar_special(a, x)
    a_, b, c, d = BOX.T
    y1 = a_ * x[0] + b * x[1]
    y2 = c * x[0] + d * x[1]
    want = {Mat2(*map(int, r)) for r in BOX[a * y1 + y2 == 1]}
    if isinstance(sol, Empty):
        assert not want
        return
    assert isinstance(sol, TwoParamLine)
    got = {Mat2(*map(int, r)) for r in BOX if sol.contains(Mat2(*map(int, r)))}
    assert got == want
    for s in range(-2, 3):
        for t in range(-2, 3):
            M = sol.member(s, t)
            y = M @ x
            assert a * y.x1 + y.x2 == 1 and sol.contains(M)


def test_box_enumeration_matches_loops():
    box = {tuple(map(int, r)) for r in sl2_box(7)}
    rng = range(-7, 8)
    want = {(a, b, c, d) for a in rng for b in rng for c in rng for d in rng if a * d - b * c == 1}
    assert box == want
