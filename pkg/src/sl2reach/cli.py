"""Command-line front end.

Instances are JSON documents read from a file argument or standard input;
results are JSON documents on standard output.  Exit status is 0 for a
completed run (either answer), 2 for invalid input and 3 when a resource
budget runs out.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from .automata import SignedNFA, nfa_from_doc
from .constraint import compile_constraint
from .mat2 import Mat2, Vec2
from .oracle import SearchBudgetExceeded, SearchConfig, bfs_search
from .reach import (
    ANY_INTEGER,
    NONNEGATIVE,
    Verdict,
    decide_constrained,
    decide_flt,
    decide_power_equation,
    decide_scalar_special,
    decide_vector,
)
from .solve import (
    All,
    Empty,
    Line,
    LinePair,
    Rat,
    TwoParamLine,
    mobius,
    solve_flt_equation,
    solve_scalar_special,
    solve_vector_equation,
)
from .words import WordBudgetExceeded, check_word, eval_phi, reduce, synthesize

DEFAULT_WORD_BUDGET = 10**6
DEFAULT_NODE_BUDGET = 10**6

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3


class InputError(ValueError):
    pass


# -- document parsing -------------------------------------------------------


def _int(v, what="value") -> int:
    if isinstance(v, bool):
        raise InputError(f"{what}: expected an integer, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise InputError(f"{what}: expected an integer, got {v!r}")


def _matrix(v, what="matrix") -> Mat2:
    try:
        (a, b), (c, d) = v
    except (TypeError, ValueError):
        raise InputError(f"{what}: expected [[a, b], [c, d]], got {v!r}") from None
    return Mat2(_int(a, what), _int(b, what), _int(c, what), _int(d, what))


def _sl2(v, what) -> Mat2:
    M = _matrix(v, what)
    if M.det() != 1:
        raise InputError(f"{what} {M} is not in SL(2,Z) (det = {M.det()})")
    return M


def _matrices(doc, key) -> list[Mat2]:
    items = doc.get(key, [])
    if not isinstance(items, list):
        raise InputError(f"{key}: expected a list of matrices")
    return [_sl2(m, f"{key}[{i}]") for i, m in enumerate(items, 1)]


def _vector(doc, key) -> Vec2:
    v = _require(doc, key)
    if not isinstance(v, list) or len(v) != 2:
        raise InputError(f"{key}: expected [x1, x2], got {v!r}")
    return Vec2(_int(v[0], key), _int(v[1], key))


def _rational(doc, key) -> Rat:
    raw = _require(doc, key)
    try:
        if isinstance(raw, list) and len(raw) == 2:
            r = Rat.of(_int(raw[0], key), _int(raw[1], key))
            canonical = Rat(_int(raw[0], key), _int(raw[1], key)).is_canonical()
        else:
            r = Rat.parse(raw)
            text = str(raw).strip().lower()
            canonical = text in ("inf", "infinity", "∞") or text == str(r) or (
                "/" not in text and r.den == 1
            )
    except ValueError as exc:
        raise InputError(f"{key}: {exc}") from None
    if not canonical:
        print(f"note: {key} = {raw!r} normalized to {r}", file=sys.stderr)
    return r


def _require(doc, key):
    if key not in doc:
        raise InputError(f"missing field {key!r}")
    return doc[key]


def _constraint(doc) -> SignedNFA:
    raw = _require(doc, "constraint")
    try:
        if isinstance(raw, str):
            return compile_constraint(raw)
        if isinstance(raw, dict):
            return nfa_from_doc(raw)
    except ValueError as exc:
        raise InputError(f"constraint: {exc}") from None
    raise InputError("constraint: expected an expression string or an automaton document")


def _load(path) -> dict:
    try:
        if path in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        doc = json.loads(text)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("instance document must be a JSON object")
    return doc


# -- output -----------------------------------------------------------------


def _mat_doc(M: Mat2):
    return M.rows()


def _tag_doc(tag):
    if isinstance(tag, tuple):
        side, i, s = tag
        return [side, i + 1, s]
    return tag


def verdict_doc(v: Verdict) -> dict:
    out: dict[str, Any] = {"problem": v.problem, "reachable": v.reachable, "witness": None}
    if v.witness is not None:
        w = v.witness
        out["witness"] = {
            "word": w.reduced_word,
            "sign": "+" if w.sign > 0 else "-",
            "matrix": _mat_doc(w.matrix),
            "factorization": None if w.factorization is None
            else [_tag_doc(t) for t in w.factorization],
        }
    if v.exponents is not None:
        out["exponents"] = v.exponents
        out["mixed_direction_blocks"] = v.stats.get("mixed_direction_blocks", [])
    out["stats"] = {
        "saturation_edges": v.stats.get("saturation_edges", 0),
        "product_states": v.stats.get("product_states", 0),
        "elapsed": round(v.stats.get("elapsed", 0.0), 6),
    }
    return out


def _line_doc(line: Line, budget) -> dict:
    return {
        "B": _mat_doc(line.B),
        "C": _mat_doc(line.C),
        "B_word": synthesize(line.B, budget),
        "C_word": synthesize(line.C, budget),
    }


def solution_doc(sol, budget=None) -> dict:
    if isinstance(sol, Empty):
        return {"solution": "empty"}
    if isinstance(sol, All):
        return {"solution": "all"}
    if isinstance(sol, Line):
        return {"solution": "line", **_line_doc(sol, budget)}
    if isinstance(sol, LinePair):
        return {"solution": "line_pair", "lines": [_line_doc(ln, budget) for ln in sol.lines]}
    if isinstance(sol, TwoParamLine):
        return {
            "solution": "two_param_line",
            "A": _mat_doc(sol.A),
            "D": _mat_doc(sol.D),
            "C": _mat_doc(sol.C),
            "k": sol.k,
            "A_word": synthesize(sol.A, budget),
            "D_word": synthesize(sol.D, budget),
            "C_word": synthesize(sol.C, budget),
        }
    raise TypeError(sol)


# -- commands ---------------------------------------------------------------


def cmd_reach(args) -> dict:
    doc = _load(args.file)
    common = {"max_word_length": args.max_word_length}
    track = not args.no_provenance
    kind = args.kind
    if kind == "powers":
        mode = doc.get("exponents", NONNEGATIVE)
        if mode not in (NONNEGATIVE, ANY_INTEGER):
            raise InputError(f"exponents must be {NONNEGATIVE!r} or {ANY_INTEGER!r}")
        v = decide_power_equation(
            _matrices(doc, "M"), _matrices(doc, "N"), _vector(doc, "x"), _vector(doc, "y"),
            mode, **common,
        )
        return verdict_doc(v)
    gens = _matrices(doc, "generators")
    if kind == "vector":
        v = decide_vector(gens, _vector(doc, "x"), _vector(doc, "y"),
                          track=track, strict=args.strict_semigroup, **common)
    elif kind == "flt":
        v = decide_flt(gens, _rational(doc, "x"), _rational(doc, "y"),
                       track=track, strict=args.strict_semigroup, **common)
    elif kind == "scalar":
        v = decide_scalar_special(gens, _int(_require(doc, "a"), "a"), _vector(doc, "x"),
                                  track=track, strict=args.strict_semigroup, **common)
    else:
        constraint = _constraint(doc)
        mode = doc.get("mode", "vector")
        if mode == "vector":
            x, y = _vector(doc, "x"), _vector(doc, "y")
        elif mode == "flt":
            x, y = _rational(doc, "x"), _rational(doc, "y")
        else:
            raise InputError(f"mode must be 'vector' or 'flt', got {mode!r}")
        try:
            v = decide_constrained(gens, constraint, x, y, mode=mode, track=track, **common)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return verdict_doc(v)


def cmd_solve(args) -> dict:
    doc = _load(args.file)
    if args.kind == "vector":
        sol = solve_vector_equation(_vector(doc, "x"), _vector(doc, "y"))
    elif args.kind == "flt":
        sol = solve_flt_equation(_rational(doc, "x"), _rational(doc, "y"))
    else:
        sol = solve_scalar_special(_int(_require(doc, "a"), "a"), _vector(doc, "x"))
    return solution_doc(sol, args.max_word_length)


def _word_arg(args) -> str:
    if args.arg is not None:
        w = args.arg
    else:
        w = _require(_load("-"), "word")
    try:
        return check_word(str(w).strip())
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_word(args) -> dict:
    if args.kind == "eval":
        w = _word_arg(args)
        return {"word": w, "matrix": _mat_doc(eval_phi(w))}
    if args.kind == "reduce":
        w = _word_arg(args)
        red = reduce(w)
        return {"word": red.word, "sign": "+" if red.sign > 0 else "-"}
    if args.arg is not None:
        try:
            raw = json.loads(args.arg)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed matrix: {exc}") from None
    else:
        raw = _require(_load("-"), "matrix")
    M = _sl2(raw, "matrix")
    w = synthesize(M, args.max_word_length)
    red = reduce(w)
    return {
        "matrix": _mat_doc(M),
        "word": w,
        "reduced_word": red.word,
        "sign": "+" if red.sign > 0 else "-",
    }


def cmd_oracle(args) -> dict:
    doc = _load(args.file)
    gens = _matrices(doc, "generators")
    problem = doc.get("problem", "vector")
    if problem == "vector":
        x, y = _vector(doc, "x"), _vector(doc, "y")
        pred = lambda M: M @ x == y  # noqa: E731
    elif problem == "flt":
        x, y = _rational(doc, "x"), _rational(doc, "y")
        pred = lambda M: mobius(M, x) == y  # noqa: E731
    elif problem == "scalar":
        a, x = _int(_require(doc, "a"), "a"), _vector(doc, "x")

        def pred(M):
            y1, y2 = M @ x
            return a * y1 + y2 == 1
    elif problem == "matrix":
        target = _matrix(_require(doc, "target"), "target")
        pred = lambda M: M == target  # noqa: E731
    else:
        raise InputError(f"unknown oracle problem {problem!r}")
    cfg = SearchConfig(
        max_depth=args.max_depth,
        max_entry_magnitude=args.max_entry,
        dedupe=not args.no_dedupe,
        max_nodes=args.max_nodes,
    )
    w = bfs_search(gens, pred, cfg)
    if w is None:
        return {"found": False, "max_depth": args.max_depth, "witness": None}
    return {
        "found": True,
        "depth": len(w.factorization),
        "witness": {
            "word": w.reduced_word,
            "sign": "+" if w.sign > 0 else "-",
            "matrix": _mat_doc(w.matrix),
            "factorization": list(w.factorization),
        },
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sl2reach",
        description="Reachability questions for finitely generated submonoids of SL(2,Z).",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def budget(sp):
        sp.add_argument(
            "--max-word-length", type=int, default=DEFAULT_WORD_BUDGET, metavar="N",
            help="fail with status 3 if a synthesized word would exceed N letters "
                 f"(default {DEFAULT_WORD_BUDGET})",
        )

    reach = sub.add_parser("reach", help="decide a reachability instance")
    reach.add_argument("kind", choices=["vector", "flt", "scalar", "constrained", "powers"])
    reach.add_argument("file", nargs="?", default="-", help="instance document (default: stdin)")
    reach.add_argument("--strict-semigroup", action="store_true",
                       help="exclude the empty product (identity)")
    reach.add_argument("--no-provenance", action="store_true",
                       help="skip generator factorization of the witness")
    budget(reach)
    reach.set_defaults(func=cmd_reach)

    solve = sub.add_parser("solve", help="print the solution set of a single equation")
    solve.add_argument("kind", choices=["vector", "flt", "scalar"])
    solve.add_argument("file", nargs="?", default="-")
    budget(solve)
    solve.set_defaults(func=cmd_solve)

    word = sub.add_parser("word", help="word tools")
    word.add_argument("kind", choices=["decompose", "reduce", "eval"])
    word.add_argument("arg", nargs="?", default=None,
                      help="word over S/R, or a JSON matrix for decompose (default: stdin document)")
    budget(word)
    word.set_defaults(func=cmd_word)

    oracle = sub.add_parser("oracle", help="bounded brute-force search")
    oracle.add_argument("file", nargs="?", default="-")
    oracle.add_argument("--max-depth", type=int, default=8)
    oracle.add_argument("--max-entry", type=int, default=None,
                        help="prune products with an entry above this magnitude")
    oracle.add_argument("--max-nodes", type=int, default=DEFAULT_NODE_BUDGET,
                        help="fail with status 3 after visiting this many nodes")
    oracle.add_argument("--no-dedupe", action="store_true")
    oracle.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except (WordBudgetExceeded, SearchBudgetExceeded) as exc:
        print(f"error: resource budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
