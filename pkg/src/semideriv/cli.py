"""Command-line front end. Every command prints (or writes) one JSON document.

Exit codes: 0 success, 1 a checked property was refuted, 2 usage or spec error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .derivations import classify, find_leibniz_counterexample, parse_derivation, verify_derivation
from .families import closure_check, parse_family
from .matrix import DEFAULT_BUDGET, Matrix, parse_matrix_literal, pattern
from .report import SemiderivError, SpecError, to_jsonable
from .semiring import NEG_INF, PolyNat, Semiring, check_semiring_axioms, parse_semiring
from .structure import commutant, theorem_suite

EXIT_OK, EXIT_REFUTED, EXIT_USAGE = 0, 1, 2
DEFAULT_ALLOWED = "t3:b,t3:d"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _decode_entry(x, semiring: Semiring):
    name = semiring.name
    if name == "maxplus-int":
        if x is None:
            return NEG_INF
    elif name == "natpoly":
        if isinstance(x, int):
            x = [x]
        if isinstance(x, list) and all(isinstance(c, int) and c >= 0 for c in x):
            return PolyNat(tuple(x))
        raise SpecError(f"natpoly entries are coefficient lists, got {x!r}")
    if not isinstance(x, int) or isinstance(x, bool):
        raise SpecError(f"bad entry {x!r} for {name}")
    if semiring.finite and x not in semiring.elements:
        raise SpecError(f"entry {x} is not in {name}")
    if name == "nat" and x < 0:
        raise SpecError(f"nat entries must be >= 0, got {x}")
    return x


def decode_matrix(doc, semiring: Semiring | None = None) -> Matrix:
    """Matrix from ``{"semiring", "n", "entries"}`` or bare rows.

    ``null`` is -inf in maxplus-int; natpoly entries are coefficient lists.
    """
    if isinstance(doc, dict):
        if "semiring" in doc:
            semiring = parse_semiring(doc["semiring"])
        rows = doc.get("entries")
        if rows is None:
            raise SpecError("matrix object needs 'entries'")
        n = doc.get("n")
    else:
        rows, n = doc, None
    if semiring is None:
        raise SpecError("matrix input needs a semiring (in the document or via --semiring)")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise SpecError("matrix entries must be a non-empty list of rows")
    m = Matrix.from_rows(semiring, [[_decode_entry(x, semiring) for x in r] for r in rows])
    if n is not None and n != m.n:
        raise SpecError(f"declared n={n} but entries are {m.n}x{m.n}")
    return m


def _read_matrix(args, semiring: Semiring | None) -> Matrix:
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"bad JSON matrix: {exc}") from None
    return decode_matrix(doc, semiring)


def _emit(doc, args) -> None:
    text = json.dumps(to_jsonable(doc), sort_keys=True, indent=2) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args, *keys) -> dict:
    return {k: getattr(args, k) for k in keys}


# -- commands --------------------------------------------------------------

def cmd_axioms(args) -> int:
    s = parse_semiring(args.semiring)
    rep = check_semiring_axioms(s, args.mode, args.samples, args.seed, args.max_entry)
    _emit({"config": _config(args, "semiring", "mode", "samples", "seed", "max_entry"), "report": rep.to_json()}, args)
    return EXIT_OK if rep.passed else EXIT_REFUTED


def cmd_closure(args) -> int:
    s = parse_semiring(args.semiring)
    fam = parse_family(args.family, args.n)
    rep = closure_check(fam, s, args.mode, args.budget, args.samples, args.seed, args.max_entry)
    _emit({"config": _config(args, "semiring", "family", "n", "mode", "samples", "seed", "max_entry"),
           "report": rep.to_json()}, args)
    return EXIT_OK if rep.passed else EXIT_REFUTED


def _derivation(args, s: Semiring):
    fam = parse_family(args.family, args.n) if args.family else None
    return parse_derivation(args.derivation, args.n, s, fam)


def cmd_verify(args) -> int:
    s = parse_semiring(args.semiring)
    delta = _derivation(args, s)
    rep = verify_derivation(
        delta, s, mode=args.mode, budget=args.budget, samples=args.samples, seed=args.seed,
        max_entry=args.max_entry, strict=args.strict,
    )
    cfg = _config(args, "semiring", "family", "n", "derivation", "mode", "samples", "seed", "max_entry", "budget")
    _emit({"config": cfg, "report": rep.to_json()}, args)
    return EXIT_OK if rep.passed else EXIT_REFUTED


def cmd_counterexample(args) -> int:
    s = parse_semiring(args.semiring)
    delta = _derivation(args, s)
    found = find_leibniz_counterexample(delta.map, delta.family, s, budget=args.budget, max_entry=args.max_entry)
    cfg = _config(args, "semiring", "family", "n", "derivation", "max_entry", "budget")
    _emit({"config": cfg, "derivation": delta.name, "counterexample": found}, args)
    return EXIT_OK if found is None else EXIT_REFUTED


def cmd_theorem(args) -> int:
    s = parse_semiring(args.semiring)
    allowed = set()
    for tok in filter(None, (t.strip().lower() for t in args.allow_known_refutations.split(","))):
        tid, sep, item = tok.partition(":")
        if not sep:
            raise SpecError(f"bad allowlist entry {tok!r}; expected id:item such as t3:b")
        allowed.add((tid, item))
    rep = theorem_suite(args.id, args.n, s, max_entry=args.max_entry)
    doc = rep.to_json()
    for it in doc["items"]:
        if it["status"] == "refuted" and (rep.theorem, it["item"]) in allowed:
            it["status_note"] = "refuted-known"
    bad = rep.refuted(allow=frozenset(allowed))
    doc["unexpected_refutations"] = bad
    _emit({"config": _config(args, "id", "n", "semiring", "max_entry", "allow_known_refutations"), "report": doc}, args)
    return EXIT_REFUTED if bad else EXIT_OK


def cmd_commutant(args) -> int:
    s = parse_semiring(args.semiring)
    fam = parse_family(args.family, args.n)
    if args.matrix:
        m = parse_matrix_literal(args.matrix, args.n)
    else:
        m = _read_matrix(args, s)
    found = commutant(m, fam, s, budget=args.budget, max_entry=args.max_entry)
    cfg = _config(args, "semiring", "family", "n", "matrix", "max_entry")
    _emit({"config": cfg, "searched": fam.count(s, args.max_entry), "count": len(found), "commutant": found}, args)
    return EXIT_OK


def cmd_classify(args) -> int:
    s = parse_semiring(args.semiring)
    delta = _derivation(args, s)
    c = classify(delta, s, mode=args.mode, budget=args.budget, samples=args.samples, seed=args.seed,
                 max_entry=args.max_entry)
    doc = c.to_json()
    doc["derivation"] = delta.name
    _emit(doc, args)
    return EXIT_OK


def cmd_pattern(args) -> int:
    s = parse_semiring(args.semiring) if args.semiring else None
    m = decode_matrix(json.loads(args.matrix), s) if args.matrix else _read_matrix(args, s)
    _emit(pattern(m), args)
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="semideriv", description="Derivations on structured matrix semirings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, family=False, derivation=False, run=True):
        sp.add_argument("--semiring", default="bool", help="bool, chain:m, maxplus-int, nat, natpoly")
        sp.add_argument("--n", type=int, default=3)
        if family:
            sp.add_argument("--family", default=None, help="e.g. utm, ut-toeplitz, zero-rows:1, tail:2")
        if derivation:
            sp.add_argument("--derivation", required=True, help="e.g. example6, prop4:k=2, hereditary:polyderiv")
        if run:
            sp.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
            sp.add_argument("--samples", type=int, default=500)
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--max-entry", type=int, default=None, help="bound for nat/maxplus-int/natpoly enumeration")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max enumerated objects")
        sp.add_argument("--output", default=None, help="write the JSON report here instead of stdout")

    sp = sub.add_parser("axioms", help="check the semiring laws")
    common(sp)
    sp.set_defaults(func=cmd_axioms, samples=10_000)

    sp = sub.add_parser("closure", help="check a family contains 0 and is closed under + and *")
    common(sp, family=True)
    sp.set_defaults(func=cmd_closure)

    sp = sub.add_parser("verify", help="verify a derivation")
    common(sp, family=True, derivation=True)
    sp.add_argument("--strict", action="store_true", help="fail with exit 2 on unmet preconditions")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("counterexample", help="search for a Leibniz counterexample")
    common(sp, family=True, derivation=True, run=False)
    sp.set_defaults(func=cmd_counterexample)

    sp = sub.add_parser("theorem", help="run a theorem or proposition suite")
    sp.add_argument("--id", required=True, help="t1, t2, t3, p2, p3, p5, p6")
    sp.add_argument("--semiring", default="bool")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--max-entry", type=int, default=None)
    sp.add_argument("--allow-known-refutations", default=DEFAULT_ALLOWED,
                    help=f"comma-separated id:item refutations that do not fail the run (default {DEFAULT_ALLOWED})")
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_theorem)

    sp = sub.add_parser("commutant", help="members of a family commuting with a matrix")
    common(sp, run=False)
    sp.add_argument("--family", default="all")
    sp.add_argument("--matrix", default=None, help="pattern literal (shift-cyclic, E+D^2, JSON rows); else --input/stdin")
    sp.add_argument("--input", default=None)
    sp.set_defaults(func=cmd_commutant)

    sp = sub.add_parser("classify", help="idempotent / nilpotent classification")
    common(sp, family=True, derivation=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("pattern", help="pattern matrix of a JSON matrix")
    sp.add_argument("--semiring", default=None)
    sp.add_argument("--matrix", default=None, help="JSON matrix; else --input/stdin")
    sp.add_argument("--input", default=None)
    sp.add_argument("--output", default=None)
    sp.set_defaults(func=cmd_pattern)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SemiderivError, ValueError, KeyError, OSError) as exc:
        print(f"semideriv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
