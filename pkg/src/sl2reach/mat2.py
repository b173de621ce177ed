"""Exact 2x2 integer matrices and their Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

from .integers import ext_gcd


class Vec2(NamedTuple):
    x1: int
    x2: int

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x1, -self.x2)

    def is_zero(self) -> bool:
        return self.x1 == 0 and self.x2 == 0

    def content(self) -> int:
        return gcd(self.x1, self.x2)


@dataclass(frozen=True, slots=True)
class Mat2:
    """Row-major integer matrix ``[[a, b], [c, d]]`` with unbounded entries."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_rows(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def is_sl2(self) -> bool:
        return self.det() == 1

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def __matmul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        x1, x2 = other
        return Vec2(self.a * x1 + self.b * x2, self.c * x1 + self.d * x2)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def scale(self, k: int) -> "Mat2":
        return Mat2(k * self.a, k * self.b, k * self.c, k * self.d)

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            return mat_inverse_sl2(self) ** (-n)
        result, base = IDENTITY, self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = Mat2(1, 0, 0, 1)
MINUS_IDENTITY = Mat2(-1, 0, 0, -1)
T = Mat2(1, 1, 0, 1)
T_INV = Mat2(1, -1, 0, 1)
S_MAT = Mat2(0, -1, 1, 0)
R_MAT = Mat2(0, -1, 1, 1)


def mat_mul(A: Mat2, B: Mat2) -> Mat2:
    return A @ B


def t_power(t: int) -> Mat2:
    """``T**t`` in closed form."""
    return Mat2(1, t, 0, 1)


def mat_inverse_sl2(M: Mat2) -> Mat2:
    if M.det() != 1:
        raise ValueError(f"matrix {M} is not in SL(2,Z) (det = {M.det()})")
    return Mat2(M.d, -M.b, -M.c, M.a)


def require_sl2(M: Mat2, what: str = "matrix") -> Mat2:
    if M.det() != 1:
        raise ValueError(f"{what} {M} is not in SL(2,Z) (det = {M.det()})")
    return M


@dataclass(frozen=True)
class SnfDecomposition:
    """``A == B @ diag(t1, t2) @ C`` with ``B``, ``C`` in SL(2,Z) and ``t1 | t2``."""

    B: Mat2
    t1: int
    t2: int
    C: Mat2

    def recompose(self) -> Mat2:
        return self.B @ Mat2(self.t1, 0, 0, self.t2) @ self.C


def smith_normal_form(A: Mat2) -> SnfDecomposition:
    """Smith normal form of a nonzero 2x2 integer matrix.

    Works on ``U @ A @ V`` with unimodular row and column transforms: pull
    gcds into the top-left corner until both off-diagonal entries vanish, then
    repair divisibility by adding the second row to the first.
    """
    if A.is_zero():
        raise ValueError("Smith normal form is undefined for the zero matrix")
    M, U, V = A, IDENTITY, IDENTITY
    while True:
        if M.a == 0 and M.c == 0:
            # first column empty: rotate the second column into place
            M, V = M @ S_MAT, V @ S_MAT
        # when the pivot already divides the entry, eliminate directly: a
        # Bezout transform could swap the two and cycle forever
        if M.c != 0:
            if M.a and M.c % M.a == 0:
                row = Mat2(1, 0, -(M.c // M.a), 1)
            else:
                g, u, v = ext_gcd(M.a, M.c)
                row = Mat2(u, v, -M.c // g, M.a // g)
            M, U = row @ M, row @ U
        elif M.b != 0:
            if M.b % M.a == 0:
                col = Mat2(1, -(M.b // M.a), 0, 1)
            else:
                g, p, q = ext_gcd(M.a, M.b)
                col = Mat2(p, -M.b // g, q, M.a // g)
            M, V = M @ col, V @ col
        elif M.d % M.a:
            M, U = T @ M, T @ U
        else:
            break
    return SnfDecomposition(mat_inverse_sl2(U), M.a, M.d, mat_inverse_sl2(V))
