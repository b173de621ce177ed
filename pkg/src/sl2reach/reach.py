"""Decision procedures for reachability in finitely generated submonoids of SL(2,Z).

Each decider builds an automaton for the set of matrices solving the
equation, an automaton for the available products, and asks whether their
images in SL(2,Z) meet.  Products always include the empty product (the
identity) unless ``strict=True``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .automata import (
    Loops,
    SignedNFA,
    Witness,
    chain_automaton,
    decide_intersection,
    line_to_automaton,
    semigroup_automaton,
    substitute_words,
    t_loops,
    union,
    universal_automaton,
)
from .mat2 import IDENTITY, Mat2, Vec2, mat_inverse_sl2, require_sl2
from .solve import (
    All,
    Empty,
    Line,
    LinePair,
    Rat,
    SolutionSet,
    TwoParamLine,
    mobius,
    solve_flt_equation,
    solve_scalar_special,
    solve_vector_equation,
)
from .words import synthesize

NONNEGATIVE = "nonnegative"
ANY_INTEGER = "any"


class VerificationError(AssertionError):
    """A witness failed its independent re-check (an internal bug)."""


@dataclass
class Verdict:
    problem: str
    reachable: bool
    witness: Optional[Witness] = None
    exponents: Optional[dict] = None
    stats: dict = field(default_factory=dict)


def solution_automaton(sol: SolutionSet, max_length: Optional[int] = None) -> Optional[SignedNFA]:
    """Automaton whose image is exactly ``sol`` (None for the empty set)."""
    if isinstance(sol, Empty):
        return None
    if isinstance(sol, All):
        return universal_automaton()
    if isinstance(sol, Line):
        return line_to_automaton(sol, max_length)
    if isinstance(sol, LinePair):
        return union(*(line_to_automaton(line, max_length) for line in sol.lines))
    if isinstance(sol, TwoParamLine):
        return chain_automaton([
            synthesize(sol.A, max_length),
            t_loops(sol.k),
            synthesize(sol.D, max_length),
            t_loops(1),
            synthesize(sol.C, max_length),
        ])
    raise TypeError(f"unknown solution set {sol!r}")


def product_of(gens: Sequence[Mat2], indices) -> Mat2:
    M = IDENTITY
    for i in indices:
        M = M @ gens[i - 1]
    return M


def _run(problem, sol, source, check, track, gens=None, max_length=None) -> Verdict:
    start = time.perf_counter()
    stats = {"saturation_edges": 0, "product_states": 0}
    target = solution_automaton(sol, max_length)
    witness = None
    if target is not None:
        witness = decide_intersection(target, source, track=track, stats=stats)
    stats["elapsed"] = time.perf_counter() - start
    if witness is None:
        return Verdict(problem, False, stats=stats)
    if not witness.check() or not check(witness.matrix):
        raise VerificationError(f"{problem}: witness {witness} does not solve the instance")
    if gens is not None and witness.factorization is not None:
        if product_of(gens, witness.factorization) != witness.matrix:
            raise VerificationError(f"{problem}: factorization does not multiply out")
    return Verdict(problem, True, witness, stats=stats)


def _gens(gens: Sequence[Mat2]) -> list[Mat2]:
    return [require_sl2(Mat2.from_rows(M) if not isinstance(M, Mat2) else M, "generator")
            for M in gens]


def decide_vector(
    gens: Sequence[Mat2],
    x: Vec2,
    y: Vec2,
    *,
    track: bool = False,
    strict: bool = False,
    max_word_length: Optional[int] = None,
) -> Verdict:
    """Is there a product ``M`` of the generators with ``M x == y``?"""
    gens = _gens(gens)
    x, y = Vec2(*x), Vec2(*y)
    sol = solve_vector_equation(x, y)
    source = semigroup_automaton(gens, strict, max_word_length)
    return _run("vector", sol, source, lambda M: M @ x == y, track, gens, max_word_length)


def decide_flt(
    gens: Sequence[Mat2],
    x: Rat,
    y: Rat,
    *,
    track: bool = False,
    strict: bool = False,
    max_word_length: Optional[int] = None,
) -> Verdict:
    """Is there a product ``M`` of the generators with ``f_M(x) == y``?"""
    gens = _gens(gens)
    x, y = Rat.of(*x), Rat.of(*y)
    sol = solve_flt_equation(x, y)
    source = semigroup_automaton(gens, strict, max_word_length)
    return _run("flt", sol, source, lambda M: mobius(M, x) == y, track, gens, max_word_length)


def decide_constrained(
    gens: Sequence[Mat2],
    constraint: SignedNFA,
    x,
    y,
    *,
    mode: str = "vector",
    track: bool = False,
    max_word_length: Optional[int] = None,
) -> Verdict:
    """Reachability along products ``M_i1 ... M_ik`` with ``i1...ik`` in the constraint language.

    ``mode`` is ``"vector"`` (``x``, ``y`` integer vectors) or ``"flt"``
    (``x``, ``y`` points of the projective line).
    """
    gens = _gens(gens)
    words = [synthesize(M, max_word_length) for M in gens]
    source = substitute_words(constraint, words)
    if mode == "vector":
        x, y = Vec2(*x), Vec2(*y)
        sol = solve_vector_equation(x, y)
        check = lambda M: M @ x == y  # noqa: E731
    elif mode == "flt":
        x, y = Rat.of(*x), Rat.of(*y)
        sol = solve_flt_equation(x, y)
        check = lambda M: mobius(M, x) == y  # noqa: E731
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return _run(f"constrained-{mode}", sol, source, check, track, gens, max_word_length)


def decide_power_equation(
    Ms: Sequence[Mat2],
    Ns: Sequence[Mat2],
    x: Vec2,
    y: Vec2,
    exponents: str = NONNEGATIVE,
    *,
    max_word_length: Optional[int] = None,
) -> Verdict:
    """Solve ``M_1^a_1 ... M_k^a_k x == N_1^b_1 ... N_l^b_l y`` for the exponents.

    Rewritten as ``N_l^-b_l ... N_1^-b_1 M_1^a_1 ... M_k^a_k x == y`` over the
    regular set of such products.  The witness reports ``{"M": [a...], "N": [b...]}``.
    """
    if exponents not in (NONNEGATIVE, ANY_INTEGER):
        raise ValueError(f"exponents must be {NONNEGATIVE!r} or {ANY_INTEGER!r}")
    Ms, Ns = _gens(Ms), _gens(Ns)
    x, y = Vec2(*x), Vec2(*y)
    blocks = [("N", j, mat_inverse_sl2(N)) for j, N in reversed(list(enumerate(Ns)))]
    blocks += [("M", i, M) for i, M in enumerate(Ms)]
    segments = []
    for side, i, P in blocks:
        alts = [(synthesize(P, max_word_length), (side, i, 1))]
        if exponents == ANY_INTEGER:
            alts.append((synthesize(mat_inverse_sl2(P), max_word_length), (side, i, -1)))
        segments.append(Loops(tuple(alts)))
    source = chain_automaton(segments)
    sol = solve_vector_equation(x, y)
    verdict = _run("powers", sol, source, lambda M: M @ x == y, True, None, max_word_length)
    if not verdict.reachable:
        return verdict
    exps = {"M": [0] * len(Ms), "N": [0] * len(Ns)}
    directions: dict = {}
    for side, i, s in verdict.witness.factorization:
        exps[side][i] += s
        directions.setdefault((side, i), set()).add(s)
    # a block whose run used both P and P^-1 loops: only the net exponent is reported
    verdict.stats["mixed_direction_blocks"] = sorted(
        [side, i + 1] for (side, i), ds in directions.items() if len(ds) > 1
    )
    lhs, rhs = IDENTITY, IDENTITY
    for M, e in zip(Ms, exps["M"]):
        lhs = lhs @ M ** e
    for N, e in zip(Ns, exps["N"]):
        rhs = rhs @ N ** e
    if lhs @ x != rhs @ y:
        raise VerificationError(f"exponents {exps} do not solve the power equation")
    verdict.exponents = exps
    return verdict


def decide_scalar_special(
    gens: Sequence[Mat2],
    a: int,
    x: Vec2,
    *,
    track: bool = False,
    strict: bool = False,
    max_word_length: Optional[int] = None,
) -> Verdict:
    """Is there a product ``M`` of the generators with ``[a, 1] M x == 1``?"""
    gens = _gens(gens)
    x = Vec2(*x)
    sol = solve_scalar_special(a, x)
    source = semigroup_automaton(gens, strict, max_word_length)

    def check(M: Mat2) -> bool:
        y1, y2 = M @ x
        return a * y1 + y2 == 1

    return _run("scalar", sol, source, check, track, gens, max_word_length)
