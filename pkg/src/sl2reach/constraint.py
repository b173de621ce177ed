"""Regular expressions over generator indices, compiled to automata.

Syntax: a digit is a generator index, ``{12}`` is a multi-digit index,
juxtaposition concatenates, ``|`` is union, ``*`` is Kleene star and
parentheses group.  ``()`` denotes the empty word.  Whitespace is ignored.
"""

from __future__ import annotations

from .automata import EPS, NFABuilder, SignedNFA


class _Parser:
    def __init__(self, text: str, builder: NFABuilder):
        self.text = "".join(text.split())
        self.pos = 0
        self.b = builder

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else None

    def error(self, msg):
        raise ValueError(f"constraint expression {self.text!r}, position {self.pos}: {msg}")

    # each rule returns a fragment (entry, exit)
    def union(self):
        frags = [self.concat()]
        while self.peek() == "|":
            self.pos += 1
            frags.append(self.concat())
        if len(frags) == 1:
            return frags[0]
        entry, exit_ = self.b.state(), self.b.state()
        for s, e in frags:
            self.b.add(entry, EPS, s)
            self.b.add(e, EPS, exit_)
        return entry, exit_

    def concat(self):
        entry = cur = self.b.state()
        while self.peek() not in (None, "|", ")"):
            s, e = self.star()
            self.b.add(cur, EPS, s)
            cur = e
        return entry, cur

    def star(self):
        s, e = self.atom()
        while self.peek() == "*":
            self.pos += 1
            hub = self.b.state()
            self.b.add(hub, EPS, s)
            self.b.add(e, EPS, hub)
            s, e = hub, hub
        return s, e

    def atom(self):
        ch = self.peek()
        if ch is None:
            self.error("unexpected end")
        if ch.isdigit():
            self.pos += 1
            return self.symbol(int(ch))
        if ch == "{":
            end = self.text.find("}", self.pos)
            if end < 0 or not self.text[self.pos + 1:end].isdigit():
                self.error("malformed {index}")
            idx = int(self.text[self.pos + 1:end])
            self.pos = end + 1
            return self.symbol(idx)
        if ch == "(":
            self.pos += 1
            frag = self.union()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return frag
        self.error(f"unexpected character {ch!r}")

    def symbol(self, idx: int):
        if idx < 1:
            self.error("generator indices start at 1")
        s, e = self.b.state(), self.b.state()
        self.b.add(s, idx, e)
        return s, e


def compile_constraint(expr: str) -> SignedNFA:
    """Automaton over generator indices accepting the language of ``expr``."""
    b = NFABuilder()
    p = _Parser(expr, b)
    entry, exit_ = p.union()
    if p.pos != len(p.text):
        p.error("trailing input")
    b.initial.add(entry)
    b.fplus.add(exit_)
    return b.build()
