"""Shared strategies and brute-force oracles for the test suite.

The oracles here deliberately avoid the library's own algorithms: they
enumerate, multiply and compare.
"""

from __future__ import annotations

import random
from collections import deque
from fractions import Fraction
from math import gcd

import numpy as np
from hypothesis import strategies as st

from sl2reach.mat2 import IDENTITY, R_MAT, S_MAT, Mat2

LETTER = {"S": S_MAT, "R": R_MAT}

words = st.text(alphabet="SR", max_size=60)


def phi(word: str) -> Mat2:
    m = IDENTITY
    for ch in word:
        m = m @ LETTER[ch]
    return m


@st.composite
def sl2_matrices(draw, max_letters=40):
    return phi(draw(st.text(alphabet="SR", max_size=max_letters)))


def random_sl2(rng: random.Random, max_letters=40) -> Mat2:
    return phi("".join(rng.choice("SR") for _ in range(rng.randint(0, max_letters))))


def sl2_box(bound: int) -> np.ndarray:
    """Every SL(2,Z) matrix with all entries in [-bound, bound], as rows (a, b, c, d)."""
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    out = []
    for a in r:
        b, c = np.meshgrid(r, r, indexing="ij")
        b, c = b.ravel(), c.ravel()
        rhs = 1 + b * c  # a*d == 1 + b*c
        if a == 0:
            keep = rhs == 0
            for d in r:
                out.append(np.stack([np.zeros(keep.sum(), np.int64), b[keep], c[keep],
                                     np.full(keep.sum(), d)], axis=1))
            continue
        keep = rhs % a == 0
        d = rhs[keep] // a
        ok = np.abs(d) <= bound
        out.append(np.stack([np.full(ok.sum(), a), b[keep][ok], c[keep][ok], d[ok]], axis=1))
    return np.concatenate(out)


def box_solutions(box: np.ndarray, x, y) -> set[Mat2]:
    a, b, c, d = box.T
    hit = (a * x[0] + b * x[1] == y[0]) & (c * x[0] + d * x[1] == y[1])
    return {Mat2(*map(int, row)) for row in box[hit]}


def box_mobius_solutions(box: np.ndarray, x, y) -> set[Mat2]:
    """Matrices with f_M(x) == y: (M x) parallel to y, with M x never zero."""
    a, b, c, d = box.T
    u = a * x[0] + b * x[1]
    v = c * x[0] + d * x[1]
    hit = u * y[1] - v * y[0] == 0
    return {Mat2(*map(int, row)) for row in box[hit]}


def mobius_fraction(M: Mat2, x):
    """f_M on Q u {None}, None standing for infinity, via Fraction."""
    if x is None:
        return None if M.c == 0 else Fraction(M.a, M.c)
    den = M.c * x + M.d
    if den == 0:
        return None
    return (M.a * x + M.b) / den


def content(v) -> int:
    return gcd(v[0], v[1])


# -- automata oracles ---------------------------------------------------------

EPS = "eps"


def _tables(transitions):
    eps, step = {}, {}
    for a, lab, b in transitions:
        if lab == EPS:
            eps.setdefault(a, set()).add(b)
        else:
            step.setdefault((a, lab), set()).add(b)

    def close(states):
        out, todo = set(states), list(states)
        while todo:
            for b in eps.get(todo.pop(), ()):
                if b not in out:
                    out.add(b)
                    todo.append(b)
        return frozenset(out)

    return step, close


def _classes(states, fplus, fminus) -> set[int]:
    return ({1} if states & fplus else set()) | ({-1} if states & fminus else set())


def acceptor(transitions, initial, fplus, fminus):
    """A function mapping a word to the sign classes it is accepted in."""
    step, close = _tables(transitions)
    start = close(initial)
    fplus, fminus = set(fplus), set(fminus)

    def classes(word) -> set[int]:
        cur = start
        for ch in word:
            cur = close({b for a in cur for b in step.get((a, ch), ())})
        return _classes(cur, fplus, fminus)

    return classes


def simulate(transitions, initial, fplus, fminus, word) -> set[int]:
    """Sign classes in which a signed NFA accepts ``word`` (plain subset simulation)."""
    return acceptor(transitions, initial, fplus, fminus)(word)


def accepted_words(nfa, max_len):
    """All (word, sign class) pairs accepted with ``len(word) <= max_len``.

    Depth-first over the word tree carrying the current state set, so
    prefixes are simulated once and dead branches are cut.
    """
    step, close = _tables(nfa.transitions)
    fplus, fminus = set(nfa.fplus), set(nfa.fminus)
    out = []
    todo = [("", close(nfa.initial))]
    while todo:
        w, cur = todo.pop()
        out.extend((w, s) for s in _classes(cur, fplus, fminus))
        if len(w) < max_len:
            for ch in "RS":
                nxt = close({b for a in cur for b in step.get((a, ch), ())})
                if nxt:
                    todo.append((w + ch, nxt))
    return sorted(out)


def random_signed_nfa(rng: random.Random, max_states=6, eps_weight=1):
    from sl2reach.automata import SignedNFA

    n = rng.randint(1, max_states)
    labels = ["S", "R"] + [EPS] * eps_weight
    transitions = set()
    for _ in range(rng.randint(n, 3 * n)):
        transitions.add((rng.randrange(n), rng.choice(labels), rng.randrange(n)))
    states = tuple(range(n))
    pick = lambda: frozenset(s for s in states if rng.random() < 0.3)  # noqa: E731
    return SignedNFA(states, tuple(sorted(transitions, key=str)), frozenset({0}), pick(), pick())


_STEP_CACHE: dict = {}


def _sat_steps(sat):
    key = id(sat)
    hit = _STEP_CACHE.get(key)
    if hit is not None and hit[0] is sat:
        return hit[1]
    step = {}
    for lab, rows in list(sat.letter.items()) + [(EPS, sat.eps)]:
        for u, row in enumerate(rows):
            v = 0
            while row:
                if row & 1:
                    step.setdefault((u, lab), []).append(v)
                row >>= 1
                v += 1
    _STEP_CACHE.clear()
    _STEP_CACHE[key] = (sat, step)
    return step


def saturated_run(sat, word, sign):
    """A run of the saturated automaton on ``word`` ending in sign class ``sign``.

    Returned as ``(u, label, v)`` steps on layered state numbers.
    """
    step = _sat_steps(sat)
    final = sat.fplus if sign > 0 else sat.fminus
    start = [(0, u) for u in sat.initial]
    parent = {s: None for s in start}
    queue = deque(start)
    while queue:
        node = queue.popleft()
        k, u = node
        if k == len(word) and final >> u & 1:
            steps = []
            while parent[node] is not None:
                prev, lab = parent[node]
                steps.append((prev[1], lab, node[1]))
                node = prev
            return steps[::-1]
        moves = [(EPS, (k, v)) for v in step.get((u, EPS), ())]
        if k < len(word):
            moves += [(word[k], (k + 1, v)) for v in step.get((u, word[k]), ())]
        for lab, nxt in moves:
            if nxt not in parent:
                parent[nxt] = (node, lab)
                queue.append(nxt)
    return None


def saturated_runs(sat, max_len):
    """Every (word, sign class, run) the saturated automaton accepts up to ``max_len``.

    One depth-first pass over the word tree; each reached layered state
    carries one run to it as a linked list of steps.
    """
    step = _sat_steps(sat)

    def close(reached):
        todo = list(reached)
        while todo:
            u = todo.pop()
            for v in step.get((u, EPS), ()):
                if v not in reached:
                    reached[v] = (reached[u], (u, EPS, v))
                    todo.append(v)
        return reached

    def unroll(link):
        steps = []
        while link is not None:
            link, s = link
            steps.append(s)
        return steps[::-1]

    todo = [("", close({u: None for u in sat.initial}))]
    while todo:
        w, reached = todo.pop()
        for sign, final in ((1, sat.fplus), (-1, sat.fminus)):
            hit = next((u for u in sorted(reached) if final >> u & 1), None)
            if hit is not None:
                yield w, sign, unroll(reached[hit])
        if len(w) < max_len:
            for ch in "RS":
                nxt = {}
                for u in sorted(reached):
                    for v in step.get((u, ch), ()):
                        if v not in nxt:
                            nxt[v] = (reached[u], (u, ch, v))
                if nxt:
                    todo.append((w + ch, close(nxt)))
