"""Matrix derivations: constructions, Leibniz verification, classification."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from .families import Family
from .matrix import DEFAULT_BUDGET, Matrix, embed_pattern, mat_add, mat_mul, parse_matrix_literal
from .report import (
    BudgetExceeded,
    CapabilityError,
    CheckResult,
    NotCentralError,
    SpecError,
    VerificationReport,
)
from .semiring import BOOL, BaseDerivation, Semiring, carrier, parse_base_derivation

MapFn = Callable[[Matrix], Matrix]


@dataclass(frozen=True, eq=False)
class Derivation:
    """A named self-map of a matrix family, with the carrier class it needs."""

    name: str
    family: Family
    map: MapFn
    construction: str
    requires_idempotent: bool = False
    params: dict = field(default_factory=dict)

    def __call__(self, a: Matrix) -> Matrix:
        return apply(self, a)

    def __repr__(self) -> str:
        return f"Derivation({self.name} on {self.family.label}, n={self.family.n})"


def apply(delta: Derivation, a: Matrix) -> Matrix:
    delta.family.require_member(a)
    return delta.map(a)


def _keep(a: Matrix, cells) -> Matrix:
    """Copy of ``a`` with every entry outside ``cells`` set to zero."""
    n, z = a.n, a.semiring.zero
    data = [z] * (n * n)
    for i, j in cells:
        data[i * n + j] = a.data[i * n + j]
    return Matrix(a.semiring, n, data)


def _place(a: Matrix, moves) -> Matrix:
    """Zero matrix with entries of ``a`` copied along (src -> dst) moves."""
    n, z = a.n, a.semiring.zero
    data = [z] * (n * n)
    for (si, sj), (di, dj) in moves:
        data[di * n + dj] = a.data[si * n + sj]
    return Matrix(a.semiring, n, data)


# -- constructions ---------------------------------------------------------

def make_hereditary(base: BaseDerivation, n: int) -> Derivation:
    """Entrywise lift of a scalar derivation to all n x n matrices."""
    f = base.map
    return Derivation(
        name=f"hereditary:{base.name}",
        family=Family("all", n),
        map=lambda a: a.map(f),
        construction="hereditary",
        params={"base": base.name},
    )


def commutation_witness(
    family: Family,
    x: Matrix,
    budget: int = DEFAULT_BUDGET,
    samples: int = 200,
    seed: int | None = 0,
    max_entry: int | None = None,
):
    """First member A of ``family`` with AX != XA, or None.

    Exhaustive over finite carriers (or a ``max_entry`` slice), sampled otherwise.
    """
    s = x.semiring
    if s.finite or max_entry is not None:
        candidates = family.enumerate(s, budget=budget, max_entry=max_entry)
    else:
        rng = random.Random(seed)
        candidates = (family.sample(s, rng) for _ in range(samples))
    for a in candidates:
        ax, xa = mat_mul(a, x), mat_mul(x, a)
        if ax != xa:
            return {"A": a, "AX": ax, "XA": xa}
    return None


def make_inner(
    family: Family,
    x: Matrix,
    check: bool = True,
    budget: int = DEFAULT_BUDGET,
    max_entry: int | None = None,
    name: str | None = None,
) -> Derivation:
    """Inner derivation A -> A X for X central in ``family``."""
    s = x.semiring
    if not s.additively_idempotent:
        raise CapabilityError(f"inner derivations need an additively idempotent carrier, got {s.name!r}")
    if x.n != family.n:
        raise SpecError(f"X has n={x.n}, family has n={family.n}")
    if check:
        if not family.is_member(x):
            raise CapabilityError(f"X is not in family {family.label}", witness={"X": x})
        w = commutation_witness(family, x, budget=budget, max_entry=max_entry)
        if w is not None:
            raise NotCentralError(f"X does not commute with every member of {family.label}", witness=w)
    return Derivation(
        name=name or "inner",
        family=family,
        map=lambda a: mat_mul(a, x),
        construction="inner",
        requires_idempotent=True,
        params={"X": x},
    )


def _inner_by_pattern(family: Family, p: Matrix, name: str, construction: str, params: dict) -> Derivation:
    """Inner derivation by a 0/1 pattern, embedded into each argument's carrier."""
    cache: dict = {}

    def f(a: Matrix) -> Matrix:
        x = cache.get(a.semiring)
        if x is None:
            x = cache[a.semiring] = embed_pattern(p, a.semiring)
        return mat_mul(a, x)

    return Derivation(name, family, f, construction, requires_idempotent=True, params={"P": p, **params})


def example1(n: int) -> Derivation:
    return Derivation("example1", Family("arrow", n), lambda a: _keep(a, [(0, n - 1)]), "example1")


def example2(n: int, rows=(1,)) -> Derivation:
    """Keep entries whose column is a fixed zero row index; rows are 1-based."""
    fam = Family("zero_rows", n, tuple(rows))
    r = {i - 1 for i in rows}
    cells = [(i, j) for i in range(n) for j in range(n) if i not in r and j in r]
    return Derivation("example2", fam, lambda a: _keep(a, cells), "example2", params={"rows": tuple(rows)})


def example3(n: int, cross=(1,), keep=None) -> Derivation:
    """Inner derivation by a diagonal pattern avoiding the crossed indices (1-based)."""
    fam = Family("zero_cross", n, tuple(cross))
    allowed = set(range(1, n + 1)) - set(cross)
    keep = tuple(sorted(allowed if keep is None else keep))
    if not set(keep) <= allowed:
        raise SpecError(f"example3 keep set {keep} must avoid crossed indices {tuple(cross)}")
    p = Matrix(BOOL, n, [1 if i == j and i + 1 in keep else 0 for i in range(n) for j in range(n)])
    return _inner_by_pattern(fam, p, "example3", "example3", {"cross": tuple(cross), "keep": keep})


def example4_strip(n: int) -> Derivation:
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return Derivation("strip-diag", Family("utm", n), lambda a: _keep(a, cells), "example4_strip",
                      requires_idempotent=True)


def example5_delta1(n: int) -> Derivation:
    cells = [(0, j) for j in range(n)]
    return Derivation("example5.delta1", Family("utm", n), lambda a: _keep(a, cells), "example5_delta1",
                      requires_idempotent=True)


def example5_delta2(n: int) -> Derivation:
    cells = [(0, j) for j in range(1, n)]
    return Derivation("example5.delta2", Family("utm", n), lambda a: _keep(a, cells), "example5_delta2")


def example5_phi(n: int, k: int) -> Derivation:
    """Keep row 0 from (1-based) column k on; a derivation only for k <= 2."""
    if not 1 <= k <= n:
        raise SpecError(f"example5.phi needs 1 <= k <= n, got k={k}")
    cells = [(0, j) for j in range(k - 1, n)]
    return Derivation(f"example5.phi:k={k}", Family("utm", n), lambda a: _keep(a, cells), "custom",
                      params={"k": k})


def example6(n: int) -> Derivation:
    return Derivation("example6", Family("corner_equal", n), lambda a: _place(a, [((0, 0), (0, n - 1))]),
                      "example6", requires_idempotent=True)


def example7(n: int) -> Derivation:
    moves = [((0, 0), (0, n - 2)), ((0, 1), (0, n - 1)), ((1, 1), (1, n - 1))]
    return Derivation("example7", Family("block_repeat", n), lambda a: _place(a, moves), "example7",
                      requires_idempotent=True)


def prop4_tail(n: int, k: int) -> Derivation:
    """Drop the a_0 E term of a tail(k) matrix; needs idempotency when n < 2k."""
    fam = Family("tail", n, (k,))
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return Derivation(f"prop4:k={k}", fam, lambda a: _keep(a, cells), "prop4_tail",
                      requires_idempotent=n < 2 * k, params={"k": k})


def toeplitz_strip(n: int) -> Derivation:
    """The map d on upper-triangular Toeplitz matrices: drop the a_0 E term."""
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return Derivation("toeplitz.d", Family("ut_toeplitz", n), lambda a: _keep(a, cells), "example4_strip",
                      requires_idempotent=True)


def toeplitz_corner(n: int) -> Derivation:
    """a_0 E_{0,n-1}: the ``example6`` corner map restricted to upper-triangular Toeplitz matrices."""
    return Derivation("toeplitz.delta", Family("ut_toeplitz", n), lambda a: _place(a, [((0, 0), (0, n - 1))]),
                      "example6", requires_idempotent=True)


def toeplitz_corner_displayed(n: int) -> Derivation:
    """a_{n-1} E_{0,n-1}: the corner map exactly as displayed for n = 4 (not a derivation)."""
    return Derivation("toeplitz.delta-displayed", Family("ut_toeplitz", n), lambda a: _keep(a, [(0, n - 1)]),
                      "custom")


def toeplitz_phi(n: int, start: int = 2) -> Derivation:
    """Keep a_start D^start + ... + a_{n-1} D^{n-1}; not a derivation on the full family."""
    cells = [(i, j) for i in range(n) for j in range(i + start, n)]
    return Derivation(f"toeplitz.phi:from={start}", Family("ut_toeplitz", n), lambda a: _keep(a, cells), "custom",
                      params={"from": start})


# -- spec strings ----------------------------------------------------------

def _kv(arg: str) -> dict[str, str]:
    out = {}
    for part in filter(None, arg.split(":")):
        k, eq, v = part.partition("=")
        if not eq:
            raise SpecError(f"expected key=value, got {part!r}")
        out[k.strip()] = v.strip()
    return out


def _ints(v: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in v.split(","))
    except ValueError:
        raise SpecError(f"bad integer list {v!r}") from None


def parse_derivation(spec: str, n: int, semiring: Semiring, family: Family | None = None) -> Derivation:
    """Build a derivation from a CLI string such as ``prop4:k=2`` or ``inner:E+D^2``.

    Parameters missing from the string (``example2`` rows, ``example3`` cross,
    ``prop4`` k) are taken from ``family`` when it has the matching kind.
    """
    spec = spec.strip()
    head, _, arg = spec.partition(":")
    fam_params = family.params if family is not None else ()

    if head == "hereditary":
        return make_hereditary(parse_base_derivation(arg or "identity", semiring), n)
    if head == "inner":
        if family is None:
            raise SpecError("inner derivations need --family")
        x = embed_pattern(parse_matrix_literal(arg, n), semiring)
        return make_inner(family, x, name=f"inner:{arg}")

    opts = _kv(arg)
    if head == "example1":
        d = example1(n)
    elif head == "example2":
        rows = _ints(opts["rows"]) if "rows" in opts else (fam_params if family and family.kind == "zero_rows" else (1,))
        d = example2(n, rows)
    elif head == "example3":
        cross = _ints(opts["cross"]) if "cross" in opts else (fam_params if family and family.kind == "zero_cross" else (1,))
        keep = _ints(opts["keep"]) if "keep" in opts else None
        d = example3(n, cross, keep)
    elif head in ("example4", "strip-diag"):
        d = example4_strip(n)
    elif head == "example5.delta1":
        d = example5_delta1(n)
    elif head == "example5.delta2":
        d = example5_delta2(n)
    elif head == "example5.phi":
        d = example5_phi(n, int(opts.get("k", 3)))
    elif head == "example6":
        d = example6(n)
    elif head == "example7":
        d = example7(n)
    elif head == "prop4":
        if "k" in opts:
            k = int(opts["k"])
        elif family is not None and family.kind == "tail":
            (k,) = fam_params
        else:
            raise SpecError("prop4 needs k, e.g. prop4:k=2")
        d = prop4_tail(n, k)
    elif head == "toeplitz.d":
        d = toeplitz_strip(n)
    elif head == "toeplitz.delta":
        d = toeplitz_corner(n)
    elif head == "toeplitz.delta-displayed":
        d = toeplitz_corner_displayed(n)
    elif head == "toeplitz.phi":
        d = toeplitz_phi(n, int(opts.get("from", 2)))
    elif head == "example5":
        raise SpecError("example5 defines two maps: use example5.delta1 or example5.delta2")
    else:
        raise SpecError(f"unknown derivation {spec!r}")
    if family is not None and family != d.family:
        raise SpecError(f"derivation {d.name} lives on {d.family.label}, not {family.label}")
    return d


# -- verification ----------------------------------------------------------

def _inputs(delta: Derivation, semiring: Semiring, mode: str, budget: int, samples: int, seed, max_entry):
    """Matrices and scalars to test plus the list of pairs."""
    fam = delta.family
    if mode == "exhaustive":
        members = fam.members(semiring, budget=budget, max_entry=max_entry)
        e = Matrix.identity(semiring, fam.n)
        # identity first: it gives the smallest, most readable witnesses
        if e in members:
            members.remove(e)
            members.insert(0, e)
        if len(members) ** 2 > budget:
            raise BudgetExceeded(f"{len(members)}^2 pairs exceed budget {budget}")
        scalars = carrier(semiring, max_entry)
        return members, scalars, itertools.product(members, repeat=2), len(members) ** 2
    if mode != "sampled":
        raise SpecError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    pairs = [(fam.sample(semiring, rng), fam.sample(semiring, rng)) for _ in range(samples)]
    members = [a for a, _ in pairs]
    scalars = [semiring.sample(rng) for _ in range(min(samples, 64))]
    return members, scalars, iter(pairs), samples


def verify_derivation(
    delta: Derivation,
    semiring: Semiring,
    mode: str = "exhaustive",
    budget: int = DEFAULT_BUDGET,
    samples: int = 500,
    seed: int | None = 0,
    max_entry: int | None = None,
    strict: bool = False,
    max_witnesses: int = 3,
) -> VerificationReport:
    """Check additivity, the Leibniz rule and the scalar law of ``delta``.

    A construction that needs additive idempotency, run over a carrier
    without it, is a precondition violation: ``strict=True`` raises
    :class:`CapabilityError`; otherwise the report records the unmet
    precondition and the checks still run so the failure carries witnesses.
    """
    pre = []
    if delta.requires_idempotent:
        ok = semiring.additively_idempotent
        if strict and not ok:
            raise CapabilityError(f"{delta.name} requires an additively idempotent carrier, got {semiring.name!r}")
        pre.append({"requires": "additively_idempotent", "satisfied": ok})
    f = delta.map
    fam = delta.family
    members, scalars, pairs, total = _inputs(delta, semiring, mode, budget, samples, seed, max_entry)

    closed = CheckResult("maps_into_family")
    for a in members:
        fa = f(a)
        closed.record(fam.is_member(fa), {"A": a, "delta(A)": fa}, max_witnesses)

    additive = CheckResult("additivity")
    leibniz = CheckResult("leibniz")
    for a, b in pairs:
        fa, fb = f(a), f(b)
        lhs, rhs = f(mat_add(a, b)), mat_add(fa, fb)
        additive.record(lhs == rhs, {"A": a, "B": b, "lhs": lhs, "rhs": rhs}, max_witnesses)
        lhs = f(mat_mul(a, b))
        rhs = mat_add(mat_mul(fa, b), mat_mul(a, fb))
        leibniz.record(lhs == rhs, {"A": a, "B": b, "lhs": lhs, "rhs": rhs}, max_witnesses)

    scalar = CheckResult("scalar_law")
    e = Matrix.identity(semiring, fam.n)
    usable = [al for al in scalars if fam.is_member(e.scale(al))]
    if not usable:
        scalar.informational = True
        scalar.note = "skipped: no scalar multiple of E lies in the family"
    for al in usable:
        f_ae = f(e.scale(al))
        for a in members:
            lhs = f(a.scale(al))
            rhs = mat_add(mat_mul(f_ae, a), f(a).scale(al))
            scalar.record(lhs == rhs, {"alpha": al, "A": a, "lhs": lhs, "rhs": rhs}, max_witnesses)

    counts = {"members": len(members), "pairs": total, "scalars": len(usable)}
    if mode == "sampled":
        counts["samples"] = samples
    return VerificationReport(
        check=f"derivation[{delta.name}@{semiring.name},{fam.label},n={fam.n}]",
        mode=mode,
        seed=seed if mode == "sampled" else None,
        results=[closed, additive, leibniz, scalar],
        counts=counts,
        preconditions=pre,
    )


def find_leibniz_counterexample(
    f: Derivation | MapFn,
    family: Family,
    semiring: Semiring,
    budget: int = DEFAULT_BUDGET,
    max_entry: int | None = None,
):
    """First pair (A, B) of members with f(AB) != f(A)B + A f(B), else None."""
    fn = f.map if isinstance(f, Derivation) else f
    members = family.members(semiring, budget=budget, max_entry=max_entry)
    if len(members) ** 2 > budget:
        raise BudgetExceeded(f"{len(members)}^2 pairs exceed budget {budget}")
    images = [fn(a) for a in members]
    for (a, fa), (b, fb) in itertools.product(zip(members, images), repeat=2):
        lhs = fn(mat_mul(a, b))
        rhs = mat_add(mat_mul(fa, b), mat_mul(a, fb))
        if lhs != rhs:
            return {"A": a, "B": b, "lhs": lhs, "rhs": rhs}
    return None


# -- classification --------------------------------------------------------

@dataclass
class Classification:
    kind: str  # idempotent | nilpotent | neither | inconclusive
    index: int | None = None
    idempotent: bool | None = None
    mode: str = "exhaustive"
    checked: int = 0
    evidence: list = field(default_factory=list)

    def to_json(self) -> dict:
        from .report import to_jsonable

        return {
            "kind": self.kind,
            "index": self.index,
            "idempotent": self.idempotent,
            "mode": self.mode,
            "checked": self.checked,
            "evidence": to_jsonable(self.evidence),
        }


def classify(
    delta: Derivation,
    semiring: Semiring,
    mode: str = "exhaustive",
    budget: int = DEFAULT_BUDGET,
    samples: int = 200,
    seed: int | None = 0,
    max_entry: int | None = None,
    power_bound: int | None = None,
) -> Classification:
    """Decide whether ``delta`` is idempotent and/or nilpotent.

    Exhaustively the image chain F, f(F), f(f(F)), ... shrinks until it is
    stable, so nilpotency is decided exactly. Sampled runs compose up to
    ``power_bound`` (default n + 1) and answer ``inconclusive`` when neither
    property shows up.
    """
    f = delta.map
    n = delta.family.n
    if mode == "exhaustive":
        members = delta.family.members(semiring, budget=budget, max_entry=max_entry)
    else:
        rng = random.Random(seed)
        members = [delta.family.sample(semiring, rng) for _ in range(samples)]

    evidence = []
    idem = True
    for a in members:
        fa = f(a)
        if f(fa) != fa:
            idem = False
            evidence.append({"idempotent_fails_at": a, "delta(A)": fa, "delta^2(A)": f(fa)})
            break

    index = None
    if mode == "exhaustive":
        cur = frozenset(members)
        seen = {cur}
        k = 0
        while True:
            if all(m.is_zero() for m in cur):
                index = k
                break
            cur, k = frozenset(f(m) for m in cur), k + 1
            if cur in seen:
                break
            seen.add(cur)
    else:
        bound = power_bound if power_bound is not None else n + 1
        cur = list(members)
        for k in range(bound + 1):
            if all(m.is_zero() for m in cur):
                index = k
                break
            cur = [f(m) for m in cur]

    if index is not None:
        kind = "nilpotent"
    elif idem:
        kind = "idempotent"
    else:
        kind = "neither" if mode == "exhaustive" else "inconclusive"
    return Classification(kind, index, idem, mode, len(members), evidence)
