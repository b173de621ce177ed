"""Extended gcd and linear congruences over the integers.

A modulus of 0 means exact equality, so ``Congruence(a, b, 0)`` is the
equation ``a*x == b`` and ``ResidueClass(c, 0)`` is the single integer ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, u, v)`` with ``g = gcd(a, b) >= 0`` and ``g == u*a + v*b``."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    if old_r == 0:
        return 0, 0, 0
    return old_r, old_u, old_v


@dataclass(frozen=True)
class Congruence:
    """``a*x = b (mod n)``; negative moduli are folded to ``|n|``."""

    a: int
    b: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            object.__setattr__(self, "n", -self.n)

    def holds(self, x: int) -> bool:
        lhs = self.a * x - self.b
        return lhs == 0 if self.n == 0 else lhs % self.n == 0


@dataclass(frozen=True)
class ResidueClass:
    """The set ``{c + t*m : t in Z}``, canonicalised so ``0 <= c < m``."""

    c: int
    m: int

    def __post_init__(self):
        m = abs(self.m)
        object.__setattr__(self, "m", m)
        if m:
            object.__setattr__(self, "c", self.c % m)

    def __contains__(self, x: int) -> bool:
        return x == self.c if self.m == 0 else (x - self.c) % self.m == 0

    def at(self, t: int) -> int:
        return self.c + t * self.m


ALL_INTEGERS = ResidueClass(0, 1)


def solve_congruence(cong: Congruence) -> Optional[ResidueClass]:
    """Solve a single linear congruence, or return None when it has no solution."""
    a, b, n = cong.a, cong.b, cong.n
    if n == 0:
        if a == 0:
            return ALL_INTEGERS if b == 0 else None
        if b % a:
            return None
        return ResidueClass(b // a, 0)
    g, u, _ = ext_gcd(a, n)
    if b % g:
        return None
    m = n // g
    return ResidueClass(u * (b // g), m)


def intersect_classes(r1: ResidueClass, r2: ResidueClass) -> Optional[ResidueClass]:
    """Intersection of two residue classes (None if disjoint)."""
    if r1.m == 0:
        return r1 if r1.c in r2 else None
    if r2.m == 0:
        return r2 if r2.c in r1 else None
    g, u, _ = ext_gcd(r1.m, r2.m)
    diff = r2.c - r1.c
    if diff % g:
        return None
    # r1.c + k*r1.m == r2.c (mod r2.m)  with  k = u*diff/g
    k = u * (diff // g)
    lcm = r1.m // g * r2.m
    return ResidueClass(r1.c + k * r1.m, lcm)


def solve_congruence_system(congruences: Iterable[Congruence]) -> Optional[ResidueClass]:
    """Common solutions of all congruences, folded pairwise left to right.

    The empty system yields every integer, ``x = 0 (mod 1)``.
    """
    acc = ALL_INTEGERS
    for cong in congruences:
        sol = solve_congruence(cong)
        if sol is None:
            return None
        acc = intersect_classes(acc, sol)
        if acc is None:
            return None
    return acc
