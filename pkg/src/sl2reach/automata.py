"""Signed automata over {S, R} and intersection emptiness of their images.

A :class:`SignedNFA` denotes the subset ``{phi(w) : w in L+} u {-phi(w) : w in L-}``
of SL(2,Z).  :func:`saturate` builds the sign-layered automaton closed under
``SS -> eps`` and ``RRR -> eps`` (with a sign flip), after which two images
intersect exactly when the saturated languages share a word in the same sign
class.  :func:`decide_intersection` searches the product for the shortest such
word.

Transitions may carry a *tag*; :func:`expand_witness` maps a run of a
saturated automaton back to a run of the original one and reads the tags off
it, which is how generator factorizations are recovered.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping, Optional, Sequence

from .mat2 import Mat2, mat_inverse_sl2, require_sl2
from .solve import Line
from .words import T_INV_WORD, T_WORD, eval_phi, reduce, synthesize

EPS = "eps"
LETTERS = ("S", "R")

Transition = tuple[Hashable, Any, Hashable]


@dataclass(frozen=True, eq=False)
class SignedNFA:
    """Nondeterministic automaton with final states split into F+ and F-.

    Labels are ``'S'``, ``'R'`` or :data:`EPS`; automata over generator
    indices (constraints) use positive ``int`` labels instead.  ``tags``
    maps some transitions to an arbitrary marker.
    """

    states: tuple
    transitions: tuple[Transition, ...]
    initial: frozenset
    fplus: frozenset
    fminus: frozenset = frozenset()
    tags: Mapping[Transition, Hashable] = field(default_factory=dict)

    def __post_init__(self):
        known = set(self.states)
        for p, _, q in self.transitions:
            if p not in known or q not in known:
                raise ValueError(f"transition ({p!r}, {q!r}) uses an unknown state")
        for name in ("initial", "fplus", "fminus"):
            extra = set(getattr(self, name)) - known
            if extra:
                raise ValueError(f"{name} contains unknown states {sorted(map(str, extra))}")

    def labels(self) -> set:
        return {lab for _, lab, _ in self.transitions if lab != EPS}

    def accepted_classes(self, word: Sequence) -> set[int]:
        """Sign classes (+1 / -1) in which ``word`` is accepted."""
        eps: dict = {}
        step: dict = {}
        for p, lab, q in self.transitions:
            if lab == EPS:
                eps.setdefault(p, []).append(q)
            else:
                step.setdefault((p, lab), []).append(q)

        def close(states):
            todo, seen = list(states), set(states)
            while todo:
                for q in eps.get(todo.pop(), ()):
                    if q not in seen:
                        seen.add(q)
                        todo.append(q)
            return seen

        current = close(self.initial)
        for lab in word:
            current = close({q for p in current for q in step.get((p, lab), ())})
        out = set()
        if current & self.fplus:
            out.add(1)
        if current & self.fminus:
            out.add(-1)
        return out


class NFABuilder:
    """Incremental construction of a :class:`SignedNFA` on integer states."""

    def __init__(self):
        self.count = 0
        self.transitions: list[Transition] = []
        self.tags: dict[Transition, Hashable] = {}
        self.initial: set[int] = set()
        self.fplus: set[int] = set()
        self.fminus: set[int] = set()

    def state(self) -> int:
        self.count += 1
        return self.count - 1

    def add(self, p: int, label, q: int, tag: Hashable = None) -> None:
        t = (p, label, q)
        self.transitions.append(t)
        if tag is not None:
            self.tags[t] = tag

    def word_edge(self, p: int, word: str, q: int, tag: Hashable = None) -> None:
        """Spell ``word`` from ``p`` to ``q`` through fresh states.

        A tagged word ends with a private tagged eps-edge so the tag marks
        exactly one transition.
        """
        cur = p
        last = len(word) - 1
        for i, ch in enumerate(word):
            nxt = q if (i == last and tag is None) else self.state()
            self.add(cur, ch, nxt)
            cur = nxt
        if tag is not None or not word:
            self.add(cur, EPS, q, tag)

    def loops(self, p: int, alternatives: Iterable[tuple[str, Hashable]]) -> int:
        """Branch from ``p`` into one star-loop per alternative; return the exit state."""
        exit_ = self.state()
        for word, tag in alternatives:
            hub = self.state()
            self.add(p, EPS, hub)
            if word:
                self.word_edge(hub, word, hub, tag)
            self.add(hub, EPS, exit_)
        return exit_

    def build(self) -> SignedNFA:
        return SignedNFA(
            states=tuple(range(self.count)),
            transitions=tuple(self.transitions),
            initial=frozenset(self.initial),
            fplus=frozenset(self.fplus),
            fminus=frozenset(self.fminus),
            tags=dict(self.tags),
        )


@dataclass(frozen=True)
class Loops:
    """A chain segment: the union of stars of each alternative word."""

    alternatives: tuple[tuple[str, Hashable], ...]


def chain_automaton(segments: Sequence) -> SignedNFA:
    """Concatenation of fixed words (``str``) and :class:`Loops` segments."""
    b = NFABuilder()
    cur = b.state()
    b.initial.add(cur)
    for seg in segments:
        if isinstance(seg, Loops):
            cur = b.loops(cur, seg.alternatives)
        elif seg:
            nxt = b.state()
            b.word_edge(cur, seg, nxt)
            cur = nxt
    b.fplus.add(cur)
    return b.build()


def union(*automata: SignedNFA) -> SignedNFA:
    """Disjoint union; states are renamed to ``(i, state)``."""
    states, transitions, tags = [], [], {}
    initial, fplus, fminus = set(), set(), set()
    for i, a in enumerate(automata):
        states.extend((i, s) for s in a.states)
        for p, lab, q in a.transitions:
            t = ((i, p), lab, (i, q))
            transitions.append(t)
            if (p, lab, q) in a.tags:
                tags[t] = a.tags[(p, lab, q)]
        initial.update((i, s) for s in a.initial)
        fplus.update((i, s) for s in a.fplus)
        fminus.update((i, s) for s in a.fminus)
    return SignedNFA(
        tuple(states), tuple(transitions), frozenset(initial),
        frozenset(fplus), frozenset(fminus), tags,
    )


# -- automata for solution sets and semigroups -----------------------------


def t_loops(step: int = 1) -> Loops:
    """Loops spelling ``T**(step*s)`` for all integers ``s``."""
    step = abs(step)
    return Loops(((T_WORD * step, None), (T_INV_WORD * step, None)))


def line_to_automaton(line: Line, max_length: Optional[int] = None) -> SignedNFA:
    """``u (SSSR)* v + u (RRRRRS)* v`` with ``phi(u) = B`` and ``phi(v) = C``."""
    u = synthesize(line.B, max_length)
    v = synthesize(line.C, max_length)
    return chain_automaton([u, t_loops(), v])


def universal_automaton() -> SignedNFA:
    """``{S, R}*``, whose image is all of SL(2,Z)."""
    return SignedNFA((0,), ((0, "S", 0), (0, "R", 0)), frozenset({0}), frozenset({0}))


def semigroup_automaton(
    gens: Sequence[Mat2], strict: bool = False, max_length: Optional[int] = None
) -> SignedNFA:
    """Flower automaton for ``(w_1 + ... + w_n)*``; the i-th loop is tagged ``i`` (1-based).

    With ``strict`` the empty product (identity) is excluded.
    """
    words = [synthesize(require_sl2(M, "generator"), max_length) for M in gens]
    return _flower(words, strict)


def _flower(words: Sequence[str], strict: bool) -> SignedNFA:
    b = NFABuilder()
    hub = b.state()
    b.fplus.add(hub)
    if strict:
        start = b.state()
        b.initial.add(start)
        for i, w in enumerate(words, 1):
            b.word_edge(start, w, hub, tag=i)
    else:
        b.initial.add(hub)
    for i, w in enumerate(words, 1):
        b.word_edge(hub, w, hub, tag=i)
    return b.build()


def substitute_words(index_nfa: SignedNFA, words: Sequence[str]) -> SignedNFA:
    """Replace every ``i``-labelled edge by a path spelling ``words[i-1]`` (tagged ``i``).

    The constraint's accepting states become F+; a constraint automaton
    carries no sign, so a nonempty F- is rejected.
    """
    n = len(words)
    if index_nfa.fminus:
        raise ValueError("constraint automata must not have F- states")
    for lab in index_nfa.labels():
        if not (isinstance(lab, int) and 1 <= lab <= n):
            raise ValueError(f"constraint label {lab!r} is not a generator index in 1..{n}")
    b = NFABuilder()
    ids = {s: b.state() for s in index_nfa.states}
    for p, lab, q in index_nfa.transitions:
        if lab == EPS:
            b.add(ids[p], EPS, ids[q])
        else:
            b.word_edge(ids[p], words[lab - 1], ids[q], tag=lab)
    b.initial.update(ids[s] for s in index_nfa.initial)
    b.fplus.update(ids[s] for s in index_nfa.fplus)
    return b.build()


def inverse_word(M: Mat2, max_length: Optional[int] = None) -> str:
    return synthesize(mat_inverse_sl2(M), max_length)


# -- saturation -------------------------------------------------------------

_CHUNK = 8


def _compose(A: list[int], B: list[int]) -> list[int]:
    """Relational composition on bitset rows: ``out[p] = OR_{q in A[p]} B[q]``."""
    n = len(B)
    ones = sum(row.bit_count() for row in A)
    if ones * 16 < n * len(A):
        # sparse rows: OR the successor rows directly
        out = []
        for row in A:
            acc = 0
            while row:
                low = row & -row
                acc |= B[low.bit_length() - 1]
                row ^= low
            out.append(acc)
        return out
    # dense rows: method of four Russians on chunks of _CHUNK columns
    tables = []
    for base in range(0, n, _CHUNK):
        chunk = B[base:base + _CHUNK]
        tbl = [0] * (1 << len(chunk))
        for m in range(1, len(tbl)):
            low = m & -m
            tbl[m] = tbl[m ^ low] | chunk[low.bit_length() - 1]
        tables.append(tbl)
    mask = (1 << _CHUNK) - 1
    out = []
    for row in A:
        acc, j = 0, 0
        while row:
            part = row & mask
            if part:
                acc |= tables[j][part]
            row >>= _CHUNK
            j += 1
        out.append(acc)
    return out


def _closure(eps: list[int]) -> list[int]:
    """Reflexive-transitive closure of a bitset relation.

    Strongly connected components are found with an iterative Tarjan pass;
    components come out in reverse topological order, so each one's reach
    is its own members plus the already finished reach of its successors.
    """
    n = len(eps)
    succ = [list(_bits(r)) for r in eps]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp = [-1] * n
    reach: list[int] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = len(reach)
                    members.append(w)
                    if w == v:
                        break
                acc = 0
                for w in members:
                    acc |= 1 << w
                for w in members:
                    for x in succ[w]:
                        if comp[x] != len(reach):
                            acc |= reach[comp[x]]
                reach.append(acc)
    return [reach[comp[v]] for v in range(n)]


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _flip_mask(n: int) -> tuple[int, int]:
    even = int("01" * n, 2) if n else 0
    return even, even << 1


@dataclass
class Saturation:
    """The sign-layered automaton of a :class:`SignedNFA`.

    Layered state ``2*i + s`` is original state ``source.states[i]`` with
    sign ``+`` (``s == 0``) or ``-`` (``s == 1``).  ``origin`` maps every
    eps-edge added by saturation to the run (a tuple of
    ``(u, label, v)`` steps) it short-cuts, when tracking is enabled.
    """

    source: SignedNFA
    size: int
    letter: dict[str, list[int]]
    eps: list[int]
    added: set[tuple[int, int]]
    origin: dict[tuple[int, int], tuple]
    initial: list[int]
    fplus: int
    fminus: int

    @property
    def added_edges(self) -> int:
        return len(self.added)

    def state_name(self, u: int):
        return (self.source.states[u // 2], "+-"[u % 2])

    @property
    def nfa(self) -> SignedNFA:
        """The saturated automaton with states ``(state, '+'/'-')``."""
        names = [self.state_name(u) for u in range(self.size)]
        transitions = []
        for lab, rows in self.letter.items():
            for u, row in enumerate(rows):
                transitions.extend((names[u], lab, names[v]) for v in _bits(row))
        for u, row in enumerate(self.eps):
            transitions.extend((names[u], EPS, names[v]) for v in _bits(row))
        return SignedNFA(
            tuple(names),
            tuple(transitions),
            frozenset(names[u] for u in self.initial),
            frozenset(names[u] for u in _bits(self.fplus)),
            frozenset(names[u] for u in _bits(self.fminus)),
        )

    @property
    def provenance(self) -> dict:
        """Added eps-edges and their underlying runs, keyed by named states."""
        name = self.state_name
        return {
            (name(u), name(v)): tuple((name(a), lab, name(b)) for a, lab, b in run)
            for (u, v), run in self.origin.items()
        }


def saturate(nfa: SignedNFA, track: bool = False) -> Saturation:
    """Close the sign-layered automaton under ``SS -> eps`` and ``RRR -> eps``.

    Whenever a run (eps-edges allowed anywhere) labelled SS or RRR leads
    from ``(q1, s1)`` to ``(q2, s2)``, an eps-edge to ``(q2, -s2)`` is added;
    this repeats until nothing new appears.  With ``track`` each new edge
    records the run it replaces.
    """
    index = {s: i for i, s in enumerate(nfa.states)}
    n = 2 * len(nfa.states)
    letter = {lab: [0] * n for lab in LETTERS}
    eps = [0] * n
    for p, lab, q in nfa.transitions:
        i, j = 2 * index[p], 2 * index[q]
        if lab == EPS:
            rows = eps
        elif lab in letter:
            rows = letter[lab]
        else:
            raise ValueError(f"label {lab!r} is not S, R or eps")
        rows[i] |= 1 << j
        rows[i + 1] |= 1 << (j + 1)
    even, odd = _flip_mask(len(nfa.states))
    added: set[tuple[int, int]] = set()
    origin: dict[tuple[int, int], tuple] = {}
    while True:
        E = _closure(eps)
        pending = {}
        for pattern in ("SS", "RRR"):
            rel = E
            for ch in pattern:
                rel = _compose(_compose(rel, letter[ch]), E)
            for u, row in enumerate(rel):
                flipped = ((row & even) << 1) | ((row & odd) >> 1)
                fresh = flipped & ~eps[u] & ~(1 << u)
                for v in _bits(fresh):
                    pending.setdefault((u, v), pattern)
        if not pending:
            break
        if track:
            origin.update(_find_runs(pending, letter, eps))
        for u, v in pending:
            eps[u] |= 1 << v
            added.add((u, v))
    fplus = fminus = 0
    for s in nfa.fplus:
        i = 2 * index[s]
        fplus |= 1 << i
        fminus |= 1 << (i + 1)
    for s in nfa.fminus:
        i = 2 * index[s]
        fminus |= 1 << i
        fplus |= 1 << (i + 1)
    initial = sorted(2 * index[s] for s in nfa.initial)
    return Saturation(nfa, n, letter, eps, added, origin, initial, fplus, fminus)


def _find_runs(pending, letter, eps):
    """For each new edge ``(u, v)`` find a run ``u -> v^1`` spelling its pattern."""
    eps_adj = {u: list(_bits(r)) for u, r in enumerate(eps) if r}
    letter_adj = {lab: {u: list(_bits(r)) for u, r in enumerate(rows) if r}
                  for lab, rows in letter.items()}
    by_source: dict[tuple[int, str], list[int]] = {}
    for (u, v), pattern in pending.items():
        by_source.setdefault((u, pattern), []).append(v)
    out = {}
    for (src, pattern), targets in by_source.items():
        # BFS over (letters consumed, state)
        start = (0, src)
        parent = {start: None}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            k, u = node
            moves = [(EPS, (k, w)) for w in eps_adj.get(u, ())]
            if k < len(pattern):
                ch = pattern[k]
                moves += [(ch, (k + 1, w)) for w in letter_adj[ch].get(u, ())]
            for lab, nxt in moves:
                if nxt not in parent:
                    parent[nxt] = (node, lab)
                    queue.append(nxt)
        for v in targets:
            node = (len(pattern), v ^ 1)
            steps = []
            while parent[node] is not None:
                prev, lab = parent[node]
                steps.append((prev[1], lab, node[1]))
                node = prev
            out[(src, v)] = tuple(reversed(steps))
    return out


# -- intersection -----------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """A matrix in an intersection: ``matrix == sign * phi(reduced_word)``.

    ``factorization`` lists the tags read along the second automaton's run
    (generator indices for semigroup and constraint automata).
    """

    reduced_word: str
    sign: int
    matrix: Mat2
    factorization: Optional[tuple] = None

    def check(self) -> bool:
        m = eval_phi(self.reduced_word)
        return self.matrix == (m if self.sign > 0 else -m)


def _adjacency(rows: list[int]) -> list[list[int]]:
    return [list(_bits(r)) for r in rows]


def decide_intersection(
    A1: SignedNFA,
    A2: SignedNFA,
    track: bool = False,
    stats: Optional[dict] = None,
) -> Optional[Witness]:
    """A shortest common element of ``phi(L(A1))`` and ``phi(L(A2))``, or None.

    With ``track`` the run through ``A2`` is expanded into a run of the
    original ``A2`` and its tags are reported as the witness factorization.
    """
    sat1 = saturate(A1)
    sat2 = saturate(A2, track=track)
    eps1, eps2 = _adjacency(sat1.eps), _adjacency(sat2.eps)
    let1 = {lab: _adjacency(rows) for lab, rows in sat1.letter.items()}
    let2 = {lab: _adjacency(rows) for lab, rows in sat2.letter.items()}

    def accepting(pair) -> int:
        p1, p2 = pair
        if (sat1.fplus >> p1) & 1 and (sat2.fplus >> p2) & 1:
            return 1
        if (sat1.fminus >> p1) & 1 and (sat2.fminus >> p2) & 1:
            return -1
        return 0

    parent: dict = {}
    layer = []
    for p1 in sat1.initial:
        for p2 in sat2.initial:
            pair = (p1, p2)
            if pair not in parent:
                parent[pair] = None
                layer.append(pair)

    found = None
    while layer and found is None:
        # eps-closure of the layer, breadth first
        queue = deque(layer)
        while queue:
            pair = queue.popleft()
            if accepting(pair):
                found = pair
                break
            p1, p2 = pair
            for w in eps1[p1]:
                nxt = (w, p2)
                if nxt not in parent:
                    parent[nxt] = (pair, ("e1", p1, w))
                    layer.append(nxt)
                    queue.append(nxt)
            for w in eps2[p2]:
                nxt = (p1, w)
                if nxt not in parent:
                    parent[nxt] = (pair, ("e2", p2, w))
                    layer.append(nxt)
                    queue.append(nxt)
        if found is not None:
            break
        nxt_layer = []
        for pair in layer:
            p1, p2 = pair
            for lab in LETTERS:
                for w1 in let1[lab][p1]:
                    for w2 in let2[lab][p2]:
                        nxt = (w1, w2)
                        if nxt not in parent:
                            parent[nxt] = (pair, (lab, p2, w2))
                            nxt_layer.append(nxt)
        layer = nxt_layer

    if stats is not None:
        stats["saturation_edges"] = sat1.added_edges + sat2.added_edges
        stats["product_states"] = len(parent)
    if found is None:
        return None

    cls = accepting(found)
    letters, run2 = [], []
    node = found
    while parent[node] is not None:
        prev, (kind, u, v) = parent[node]
        if kind == "e2":
            run2.append((u, EPS, v))
        elif kind != "e1":
            letters.append(kind)
            run2.append((u, kind, v))
        node = prev
    letters.reverse()
    run2.reverse()
    red = reduce("".join(letters))
    sign = cls * red.sign
    matrix = eval_phi(red.word)
    if sign < 0:
        matrix = -matrix
    factorization = tuple(expand_witness(run2, sat2)) if track else None
    return Witness(red.word, sign, matrix, factorization)


def expand_run(run: Sequence[tuple[int, Any, int]], sat: Saturation) -> list[Transition]:
    """Original transitions underlying a run of the saturated automaton.

    Saturation eps-edges are replaced, recursively, by the runs recorded for
    them; ``sat`` must have been built with ``track=True``.
    """
    states = sat.source.states
    out = []
    stack = list(reversed(run))
    while stack:
        u, lab, v = stack.pop()
        if lab == EPS and (u, v) in sat.added:
            try:
                sub = sat.origin[(u, v)]
            except KeyError:
                raise ValueError("saturation was built without provenance tracking") from None
            stack.extend(reversed(sub))
            continue
        if u % 2 != v % 2:
            raise ValueError(f"step {(u, lab, v)} is not a layered copy of an original transition")
        out.append((states[u // 2], lab, states[v // 2]))
    return out


def expand_witness(run: Sequence[tuple[int, Any, int]], sat: Saturation) -> list:
    """Tags read along the original run underlying ``run``."""
    tags = sat.source.tags
    return [tags[t] for t in expand_run(run, sat) if t in tags]


# -- serialization ----------------------------------------------------------


def _parse_label(lab):
    if lab in ("S", "R"):
        return lab
    if lab in (EPS, "ε", None):
        return EPS
    if isinstance(lab, bool):
        raise ValueError(f"invalid label {lab!r}")
    if isinstance(lab, int) or (isinstance(lab, str) and lab.isdigit()):
        return int(lab)
    raise ValueError(f"invalid label {lab!r}; expected 'S', 'R', 'eps' or a generator index")


def _state_id(s):
    if isinstance(s, (str, int)) and not isinstance(s, bool):
        return s
    raise ValueError(f"state identifiers must be strings or integers, got {s!r}")


def nfa_from_doc(doc: Mapping) -> SignedNFA:
    """Load an automaton document.

    ``{"states": [...], "initial": [...], "fplus": [...], "fminus": [...],
    "transitions": [[from, label, to], ...]}``; ``"final"`` is accepted as an
    alias of ``"fplus"``.  Labels are ``"S"``, ``"R"``, ``"eps"`` or
    generator indices.
    """
    transitions = []
    for item in doc.get("transitions", []):
        if len(item) != 3:
            raise ValueError(f"transition {item!r} is not a [from, label, to] triple")
        p, lab, q = item
        transitions.append((_state_id(p), _parse_label(lab), _state_id(q)))
    states = [_state_id(s) for s in doc.get("states", [])]
    if not states:
        seen = {}
        for p, _, q in transitions:
            seen.setdefault(p, None)
            seen.setdefault(q, None)
        for key in ("initial", "fplus", "fminus", "final"):
            for s in doc.get(key, []):
                seen.setdefault(_state_id(s), None)
        states = list(seen)
    fplus = set(map(_state_id, doc.get("fplus", []))) | set(map(_state_id, doc.get("final", [])))
    return SignedNFA(
        tuple(states),
        tuple(transitions),
        frozenset(map(_state_id, doc.get("initial", []))),
        frozenset(fplus),
        frozenset(map(_state_id, doc.get("fminus", []))),
    )


def nfa_to_doc(nfa: SignedNFA) -> dict:
    def name(s):
        return s if isinstance(s, (str, int)) else str(s)

    order = {s: i for i, s in enumerate(nfa.states)}

    def ordered(xs):
        return [name(s) for s in sorted(xs, key=order.__getitem__)]

    return {
        "states": [name(s) for s in nfa.states],
        "initial": ordered(nfa.initial),
        "fplus": ordered(nfa.fplus),
        "fminus": ordered(nfa.fminus),
        "transitions": [[name(p), lab, name(q)] for p, lab, q in nfa.transitions],
    }
