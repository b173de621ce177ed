"""Closed-form solution sets of ``M x = y``, ``f_M(x) = y`` and ``[a, 1] M x = 1``.

Every set is returned as one of :class:`Empty`, :class:`All`, :class:`Line`,
:class:`LinePair` or :class:`TwoParamLine`.  Each has a ``contains`` method
that decides membership of a given matrix exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple, Optional, Union

from .integers import Congruence, ext_gcd, solve_congruence_system
from .mat2 import (
    IDENTITY,
    S_MAT,
    Mat2,
    Vec2,
    mat_inverse_sl2,
    smith_normal_form,
    t_power,
)

S_INV = mat_inverse_sl2(S_MAT)


class Rat(NamedTuple):
    """Point of the projective line ``Q u {inf}``; ``inf`` is ``Rat(1, 0)``.

    Construct through :meth:`of` or :meth:`parse` to get lowest terms.
    """

    num: int
    den: int

    @classmethod
    def of(cls, num: int, den: int = 1) -> "Rat":
        num, den = int(num), int(den)
        if den == 0:
            if num == 0:
                raise ValueError("0/0 is not a point of the projective line")
            return INF
        if den < 0:
            num, den = -num, -den
        g = gcd(num, den)
        return cls(num // g, den // g)

    @classmethod
    def parse(cls, text) -> "Rat":
        if isinstance(text, int):
            return cls.of(text)
        s = str(text).strip().lower()
        if s in ("inf", "infinity", "∞", "1/0"):
            return INF
        if "/" in s:
            p, q = s.split("/", 1)
            return cls.of(int(p), int(q))
        return cls.of(int(s))

    @property
    def is_inf(self) -> bool:
        return self.den == 0

    def is_canonical(self) -> bool:
        if self.den == 0:
            return self.num == 1
        return self.den > 0 and gcd(self.num, self.den) == 1

    def vector(self) -> Vec2:
        return Vec2(self.num, self.den)

    def __str__(self):
        return "inf" if self.is_inf else f"{self.num}/{self.den}"


INF = Rat(1, 0)


def mobius(M: Mat2, x: Rat) -> Rat:
    """``f_M(x) = (a x + b) / (c x + d)`` extended to infinity."""
    if x.is_inf:
        return INF if M.c == 0 else Rat.of(M.a, M.c)
    # (a p/q + b) / (c p/q + d) = (a p + b q) / (c p + d q)
    num = M.a * x.num + M.b * x.den
    den = M.c * x.num + M.d * x.den
    if den == 0:
        return INF
    return Rat.of(num, den)


# -- solution sets ---------------------------------------------------------


@dataclass(frozen=True)
class Empty:
    def contains(self, M: Mat2) -> bool:
        return False


@dataclass(frozen=True)
class All:
    def contains(self, M: Mat2) -> bool:
        return M.det() == 1


@dataclass(frozen=True)
class Line:
    """``{B @ T**t @ C : t in Z}``."""

    B: Mat2
    C: Mat2

    def member(self, t: int) -> Mat2:
        return self.B @ t_power(t) @ self.C

    def parameter(self, M: Mat2) -> Optional[int]:
        """The ``t`` with ``M == member(t)``, or None."""
        if M.det() != 1:
            return None
        N = mat_inverse_sl2(self.B) @ M @ mat_inverse_sl2(self.C)
        if N.a == 1 and N.c == 0 and N.d == 1:
            return N.b
        return None

    def contains(self, M: Mat2) -> bool:
        return self.parameter(M) is not None


@dataclass(frozen=True)
class LinePair:
    lines: tuple[Line, ...]

    def contains(self, M: Mat2) -> bool:
        return any(line.contains(M) for line in self.lines)


@dataclass(frozen=True)
class TwoParamLine:
    """``{A @ T**(k*s) @ D @ T**t @ C : s, t in Z}``."""

    A: Mat2
    D: Mat2
    C: Mat2
    k: int

    def member(self, s: int, t: int) -> Mat2:
        return self.A @ t_power(self.k * s) @ self.D @ t_power(t) @ self.C

    def contains(self, M: Mat2) -> bool:
        if M.det() != 1:
            return False
        N = mat_inverse_sl2(self.A) @ M @ mat_inverse_sl2(self.C)
        D = self.D
        if D.c == 0:
            # D = +-T^m commutes with T, so the set is {D T^u : u in Z}
            P = mat_inverse_sl2(D) @ N
            return P.a == 1 and P.c == 0 and P.d == 1
        # T^(ks) D T^t = [[D.a + ks*D.c, *], [D.c, D.c*t + D.d]]
        if N.c != D.c:
            return False
        ks, r1 = divmod(N.a - D.a, D.c)
        t, r2 = divmod(N.d - D.d, D.c)
        if r1 or r2 or ks % self.k:
            return False
        return t_power(ks) @ D @ t_power(t) == N


SolutionSet = Union[Empty, All, Line, LinePair, TwoParamLine]


@dataclass(frozen=True)
class ParamFamily:
    """``{t*A1 + A2 : t in Z}``, every member of which has determinant 1."""

    A1: Mat2
    A2: Mat2

    def member(self, t: int) -> Mat2:
        return self.A1.scale(t) + self.A2

    def check(self) -> bool:
        return not self.A1.is_zero() and all(self.member(t).det() == 1 for t in (0, 1, 2))


# -- vector equation -------------------------------------------------------


def _family_core(x: Vec2, y: Vec2) -> Optional[ParamFamily]:
    # requires x1 != 0 and y1 != 0
    x1, x2 = x
    y1, y2 = y
    sol = solve_congruence_system(
        [
            Congruence(x2, y1, x1),
            Congruence(y2, -x1, y1),
            Congruence(x2 * y2, y1 * y2 - x1 * x2, x1 * y1),
        ]
    )
    if sol is None:
        return None

    def at(b: int) -> Mat2:
        a, ra = divmod(y1 - x2 * b, x1)
        d, rd = divmod(x1 + y2 * b, y1)
        c, rc = divmod(y1 * y2 - x1 * x2 - x2 * y2 * b, x1 * y1)
        assert not (ra or rd or rc), "congruence solution failed to clear denominators"
        return Mat2(a, b, c, d)

    A2 = at(sol.c)
    A1 = at(sol.c + sol.m) - A2
    return ParamFamily(A1, A2)


def solve_linear_family(x: Vec2, y: Vec2) -> Optional[ParamFamily]:
    """All ``M`` in SL(2,Z) with ``M x == y`` as ``{t*A1 + A2}``, or None if none exist.

    When ``x1 == 0`` (or ``y1 == 0``) the equation is rotated by ``S`` into
    one with a nonzero first coordinate and the family is rotated back.
    """
    x, y = Vec2(*x), Vec2(*y)
    if x.is_zero():
        raise ValueError("x must be nonzero")
    if y.is_zero() or x.content() != y.content():
        return None
    left, right = IDENTITY, IDENTITY
    if x.x1 == 0:
        # (M S^-1)(S x) = y
        x = S_MAT @ x
        right = S_MAT
    if y.x1 == 0:
        # (S M) x = S y
        y = S_MAT @ y
        left = S_INV
    fam = _family_core(x, y)
    if fam is None:
        return None
    return ParamFamily(left @ fam.A1 @ right, left @ fam.A2 @ right)


def family_decomposition(fam: ParamFamily) -> tuple[Mat2, int, Mat2]:
    """``(B, k, C)`` with ``t*A1 + A2 == B @ T**(k*t) @ C`` for every ``t``."""
    if fam.A1.is_zero():
        raise ValueError("family direction A1 must be nonzero")
    snf = smith_normal_form(fam.A1)
    if snf.t2 != 0:
        raise ValueError("family is not a determinant-one family (det A1 != 0)")
    F, G, k = snf.B, snf.C, snf.t1
    N = mat_inverse_sl2(F) @ fam.A2 @ mat_inverse_sl2(G)
    # N = [[a, b], [c, 0]] with b*c == -1
    if N.d != 0 or N.b * N.c != -1:
        raise ValueError("family is not a determinant-one family")
    c = N.c
    D = Mat2(0, N.b, c, 0)
    return F, c * k, t_power(c * N.a) @ D @ G


def family_to_line(fam: ParamFamily) -> Line:
    """The family as a step-one line ``{B T^t C}``.

    Families of full solution sets of ``M x = y`` always have step +-1; any
    other step means the family is a proper subset and cannot be a Line.
    """
    B, k, C = family_decomposition(fam)
    if abs(k) != 1:
        raise ValueError(f"family has step {k}; only step +-1 families are lines")
    return Line(B, C)


def solve_vector_equation(x: Vec2, y: Vec2) -> SolutionSet:
    """The set ``{M in SL(2,Z) : M x == y}``."""
    x, y = Vec2(*x), Vec2(*y)
    if x.is_zero():
        return All() if y.is_zero() else Empty()
    fam = solve_linear_family(x, y)
    if fam is None:
        return Empty()
    return family_to_line(fam)


def solve_flt_equation(x: Rat, y: Rat) -> SolutionSet:
    """The set ``{M in SL(2,Z) : f_M(x) == y}`` as the union for ``y`` and ``-y``."""
    xv, yv = Rat.of(*x).vector(), Rat.of(*y).vector()
    lines = []
    for target in (yv, -yv):
        sol = solve_vector_equation(xv, target)
        if isinstance(sol, Line):
            lines.append(sol)
    if not lines:
        return Empty()
    if len(lines) == 1:
        return lines[0]
    return LinePair(tuple(lines))


def to_first_axis(x: Vec2) -> Mat2:
    """Some ``C`` in SL(2,Z) with ``C x == (gcd(x1, x2), 0)``."""
    x1, x2 = x
    g, u, v = ext_gcd(x1, x2)
    if g == 0:
        raise ValueError("x must be nonzero")
    return Mat2(u, v, -x2 // g, x1 // g)


def solve_scalar_special(a: int, x: Vec2) -> SolutionSet:
    """The set ``{M in SL(2,Z) : [a, 1] @ M @ x == 1}``."""
    x = Vec2(*x)
    if x.content() != 1:
        return Empty()
    C = to_first_axis(x)
    # B_y = [[y1, -1], [1 - a*y1, a]] maps (1, 0) onto the point (y1, 1 - a*y1)
    fam = ParamFamily(Mat2(1, 0, -a, 0), Mat2(0, -1, 1, a))
    A, k, D = family_decomposition(fam)
    return TwoParamLine(A, D, C, k)
