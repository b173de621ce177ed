"""Words over {S, R}: evaluation, sign-tracked reduction and synthesis.

A word is a plain ``str`` over the characters ``'S'`` and ``'R'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .mat2 import IDENTITY, MINUS_IDENTITY, R_MAT, S_MAT, Mat2, require_sl2

ALPHABET = ("S", "R")
LETTER_MATRIX = {"S": S_MAT, "R": R_MAT}

# phi(SSSR) = T and phi(RRRRRS) = T^-1
T_WORD = "SSSR"
T_INV_WORD = "RRRRRS"
MINUS_I_WORD = "SS"


class WordBudgetExceeded(RuntimeError):
    """A synthesized word would exceed the configured length budget."""

    def __init__(self, length: int, budget: int):
        super().__init__(f"synthesized word needs {length} letters, budget is {budget}")
        self.length = length
        self.budget = budget


def check_word(w: str) -> str:
    bad = set(w) - set(ALPHABET)
    if bad:
        raise ValueError(f"word {w!r} has letters outside {{S, R}}: {sorted(bad)}")
    return w


@dataclass(frozen=True)
class SignedWord:
    """``sign * phi(word)``, with ``sign`` in {+1, -1}."""

    word: str
    sign: int = 1

    def matrix(self) -> Mat2:
        m = eval_phi(self.word)
        return m if self.sign > 0 else -m

    @property
    def sign_char(self) -> str:
        return "+" if self.sign > 0 else "-"


def eval_phi(w: str) -> Mat2:
    m = IDENTITY
    for ch in w:
        m = m @ LETTER_MATRIX[ch]
    return m


def reduce(w: str) -> SignedWord:
    """Delete SS and RRR factors, flipping the sign at every deletion.

    Single left-to-right stack pass; the result has no SS and no RRR factor
    and satisfies ``phi(w) == sign * phi(word)``.
    """
    stack: list[str] = []
    sign = 1
    for ch in w:
        if ch == "S":
            if stack and stack[-1] == "S":
                stack.pop()
                sign = -sign
                continue
        elif ch == "R":
            if len(stack) >= 2 and stack[-1] == "R" and stack[-2] == "R":
                del stack[-2:]
                sign = -sign
                continue
        else:
            raise ValueError(f"invalid letter {ch!r}")
        stack.append(ch)
    return SignedWord("".join(stack), sign)


def is_reduced(w: str) -> bool:
    return "SS" not in w and "RRR" not in w


def _euclid_tokens(M: Mat2) -> list[tuple[str, int]]:
    """Factor ``M`` as a product of ``T**q``, ``S`` and ``-I`` tokens."""
    tokens: list[tuple[str, int]] = []
    a, b, c, d = M.a, M.b, M.c, M.d
    while c != 0:
        q = a // c
        tokens.append(("T", q))
        tokens.append(("S", 1))
        # M <- S^-1 T^-q M
        a, b, c, d = c, d, -(a - q * c), -(b - q * d)
    if a == 1:
        tokens.append(("T", b))
    else:
        tokens.append(("-I", 1))
        tokens.append(("T", -b))
    return tokens


def _token_length(kind: str, n: int) -> int:
    if kind == "T":
        return len(T_WORD) * n if n >= 0 else len(T_INV_WORD) * -n
    return len(MINUS_I_WORD) if kind == "-I" else 1


def synthesize(M: Mat2, max_length: Optional[int] = None) -> str:
    """A word ``w`` with ``eval_phi(w) == M`` exactly.

    The word is the reduced representative of ``M`` up to sign, followed by
    ``SS`` when the reduced sign is negative.  ``max_length`` bounds the size
    of the intermediate expansion; :class:`WordBudgetExceeded` is raised
    before any letters are produced if it would be exceeded.
    """
    require_sl2(M)
    tokens = _euclid_tokens(M)
    if max_length is not None:
        total = sum(_token_length(k, n) for k, n in tokens)
        if total > max_length:
            raise WordBudgetExceeded(total, max_length)
    parts = []
    for kind, n in tokens:
        if kind == "T":
            parts.append(T_WORD * n if n >= 0 else T_INV_WORD * -n)
        elif kind == "S":
            parts.append("S")
        else:
            parts.append(MINUS_I_WORD)
    red = reduce("".join(parts))
    return red.word if red.sign > 0 else red.word + MINUS_I_WORD


def reduced_form(M: Mat2) -> SignedWord:
    """The unique reduced word ``r`` and sign ``s`` with ``M == s * phi(r)``."""
    return reduce(synthesize(M))
