"""Structured matrix families.

Every family here is described by *slots*: disjoint groups of positions that
share one free coefficient, with all positions outside the slots forced to
zero. Membership, coefficient round-trips and enumeration all derive from
that description.

Coefficient order (0-based):

* ``ut_toeplitz``: ``a_k`` multiplies ``D^k``, k = 0..n-1.
* ``toeplitz``: ``a_0..a_{n-1}`` on the main and upper diagonals, then
  ``a_{-1}..a_{-(n-1)}`` on the lower ones (entry (i, j) holds ``a_{j-i}``).
* ``circulant``: ``c_k`` multiplies ``d^k`` (``a_{k+1}`` in 1-based notation).
* ``tail(k)``: ``a_0`` on ``E`` then ``a_{n-k}..a_{n-1}`` on the powers of D.

Index-set parameters (``zero_rows``, ``zero_cross``) use 1-based
row numbers, so ``zero-rows:1`` zeroes the first row.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .matrix import DEFAULT_BUDGET, Matrix, mat_add, mat_mul
from .report import BudgetExceeded, CheckResult, NotMemberError, SpecError, VerificationReport
from .semiring import Semiring, carrier

KINDS = (
    "all", "diag", "utm", "ut_toeplitz", "toeplitz", "circulant", "arrow",
    "zero_rows", "zero_cross", "corner_equal", "block_repeat", "tail",
)

# families whose pattern/derivation theory assumes an additively idempotent carrier
IDEMPOTENT_THEORY = frozenset({"diag", "ut_toeplitz", "circulant", "zero_cross", "corner_equal", "block_repeat"})


def _merge(groups: list[list[tuple[int, int]]], pairs) -> list[tuple]:
    """Union-find merge of position groups along equality constraints."""
    owner = {p: i for i, g in enumerate(groups) for p in g}
    parent = list(range(len(groups)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, q in pairs:
        a, b = find(owner[p]), find(owner[q])
        if a != b:
            parent[max(a, b)] = min(a, b)
    merged: dict[int, list] = {}
    for i, g in enumerate(groups):
        merged.setdefault(find(i), []).extend(g)
    return [tuple(sorted(g)) for _, g in sorted(merged.items())]


@dataclass(frozen=True)
class Family:
    kind: str
    n: int
    params: tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SpecError(f"unknown family {self.kind!r}")
        if self.n < 1:
            raise SpecError("family dimension must be >= 1")
        if self.kind in ("zero_rows", "zero_cross"):
            idx = self.params
            if not idx or any(not 1 <= i <= self.n for i in idx) or len(set(idx)) >= self.n:
                raise SpecError(f"{self.kind} needs 1..{self.n - 1} distinct indices in 1..{self.n}, got {idx}")
        if self.kind == "tail":
            (k,) = self.params
            if not 1 <= k <= self.n - 1:
                raise SpecError(f"tail(k) needs 1 <= k <= n-1, got k={k}, n={self.n}")
        if self.kind == "block_repeat" and self.n < 3:
            raise SpecError("block_repeat needs n >= 3")
        if self.kind in ("arrow", "corner_equal") and self.n < 2:
            raise SpecError(f"{self.kind} needs n >= 2")

    @property
    def label(self) -> str:
        name = self.kind.replace("_", "-")
        if self.params:
            name += ":" + ",".join(str(p) for p in self.params)
        return name

    @property
    def requires_idempotent(self) -> bool:
        return self.kind in IDEMPOTENT_THEORY

    # -- structure ---------------------------------------------------------

    def slots(self) -> list[tuple[tuple[int, int], ...]]:
        try:
            return self._slots
        except AttributeError:
            pass
        slots = self._build_slots()
        object.__setattr__(self, "_slots", slots)
        return slots

    def _build_slots(self):
        n, kind = self.n, self.kind
        cells = [(i, j) for i in range(n) for j in range(n)]
        upper = [(i, j) for i, j in cells if i <= j]
        if kind == "all":
            return [(c,) for c in cells]
        if kind == "diag":
            return [((i, i),) for i in range(n)]
        if kind == "utm":
            return [(c,) for c in upper]
        if kind == "ut_toeplitz":
            return [tuple((i, i + k) for i in range(n - k)) for k in range(n)]
        if kind == "toeplitz":
            up = [tuple((i, i + k) for i in range(n - k)) for k in range(n)]
            down = [tuple((i + k, i) for i in range(n - k)) for k in range(1, n)]
            return up + down
        if kind == "circulant":
            return [tuple((i, (i + k) % n) for i in range(n)) for k in range(n)]
        if kind == "arrow":
            return [((i, i),) for i in range(n)] + [((0, n - 1),)]
        if kind == "zero_rows":
            zero = {i - 1 for i in self.params}
            return [(c,) for c in cells if c[0] not in zero]
        if kind == "zero_cross":
            zero = {i - 1 for i in self.params}
            return [(c,) for c in cells if c[0] not in zero and c[1] not in zero]
        if kind == "corner_equal":
            return _merge([[c] for c in upper], [((0, 0), (n - 1, n - 1))])
        if kind == "block_repeat":
            eqs = [((0, 0), (n - 2, n - 2)), ((0, 1), (n - 2, n - 1)), ((1, 1), (n - 1, n - 1))]
            return _merge([[c] for c in upper], eqs)
        if kind == "tail":
            (k,) = self.params
            diag = tuple((i, i) for i in range(n))
            return [diag] + [tuple((i, i + p) for i in range(n - p)) for p in range(n - k, n)]
        raise AssertionError(kind)

    @property
    def dim(self) -> int:
        """Number of free coefficients."""
        return len(self.slots())

    # -- membership and coefficients ---------------------------------------

    def _check_n(self, a: Matrix) -> None:
        if a.n != self.n:
            raise SpecError(f"family {self.label} has n={self.n}, matrix has n={a.n}")

    def is_member(self, a: Matrix) -> bool:
        self._check_n(a)
        n, data, s = self.n, a.data, a.semiring
        covered = set()
        for slot in self.slots():
            (i0, j0), rest = slot[0], slot[1:]
            v = data[i0 * n + j0]
            covered.add((i0, j0))
            for i, j in rest:
                covered.add((i, j))
                if not s.eq(data[i * n + j], v):
                    return False
        return all(
            s.is_zero(data[i * n + j]) for i in range(n) for j in range(n) if (i, j) not in covered
        )

    def require_member(self, a: Matrix) -> None:
        if not self.is_member(a):
            raise NotMemberError(f"matrix is not in family {self.label}: {a.rows()}")

    def from_coeffs(self, semiring: Semiring, coeffs: Sequence) -> Matrix:
        slots = self.slots()
        if len(coeffs) != len(slots):
            raise SpecError(f"family {self.label} takes {len(slots)} coefficients, got {len(coeffs)}")
        n = self.n
        data = [semiring.zero] * (n * n)
        for slot, c in zip(slots, coeffs):
            for i, j in slot:
                data[i * n + j] = c
        return Matrix(semiring, n, data)

    def extract_coeffs(self, a: Matrix) -> tuple:
        self.require_member(a)
        return tuple(a[slot[0]] for slot in self.slots())

    # -- enumeration -------------------------------------------------------

    def count(self, semiring: Semiring, max_entry: int | None = None) -> int:
        return len(carrier(semiring, max_entry)) ** self.dim

    def enumerate(
        self, semiring: Semiring, budget: int = DEFAULT_BUDGET, max_entry: int | None = None
    ) -> Iterator[Matrix]:
        elems = carrier(semiring, max_entry)
        total = len(elems) ** self.dim
        if total > budget:
            raise BudgetExceeded(f"family {self.label} has {total} members over budget {budget}")
        return (self.from_coeffs(semiring, cs) for cs in itertools.product(elems, repeat=self.dim))

    def members(self, semiring: Semiring, budget: int = DEFAULT_BUDGET, max_entry: int | None = None) -> list[Matrix]:
        return list(self.enumerate(semiring, budget, max_entry))

    def sample(self, semiring: Semiring, rng: random.Random) -> Matrix:
        return self.from_coeffs(semiring, [semiring.sample(rng) for _ in range(self.dim)])

    def __repr__(self) -> str:
        return f"Family({self.label}, n={self.n})"


def parse_family(spec: str, n: int) -> Family:
    """Parse CLI family strings like ``ut-toeplitz``, ``zero-rows:1,3``, ``tail:2``."""
    spec = spec.strip()
    name, _, arg = spec.partition(":")
    kind = name.replace("-", "_")
    if kind not in KINDS:
        raise SpecError(f"unknown family {spec!r}")
    params: tuple = ()
    if kind in ("zero_rows", "zero_cross", "tail"):
        if not arg:
            raise SpecError(f"family {name} needs a parameter, e.g. {name}:1")
        try:
            params = tuple(int(x) for x in arg.split(","))
        except ValueError:
            raise SpecError(f"bad family parameter in {spec!r}") from None
        if kind == "tail" and len(params) != 1:
            raise SpecError("tail takes a single k")
    elif arg:
        raise SpecError(f"family {name} takes no parameter")
    return Family(kind, n, params)


def closure_check(
    family: Family,
    semiring: Semiring,
    mode: str = "exhaustive",
    budget: int = DEFAULT_BUDGET,
    samples: int = 1000,
    seed: int | None = 0,
    max_entry: int | None = None,
    max_witnesses: int = 3,
) -> VerificationReport:
    """Check that the family contains 0 and is closed under + and *."""
    zero = Matrix.zeros(semiring, family.n)
    has_zero = CheckResult("contains_zero")
    has_zero.record(family.is_member(zero), {"matrix": zero}, max_witnesses)
    add_c = CheckResult("closed_under_add")
    mul_c = CheckResult("closed_under_mul")
    if mode == "exhaustive":
        members = family.members(semiring, budget, max_entry)
        if len(members) ** 2 > budget:
            raise BudgetExceeded(f"{len(members)}^2 pairs exceed budget {budget}")
        pairs = itertools.product(members, repeat=2)
        total = len(members) ** 2
    else:
        rng = random.Random(seed)
        pairs = ((family.sample(semiring, rng), family.sample(semiring, rng)) for _ in range(samples))
        total = samples
    for a, b in pairs:
        s = mat_add(a, b)
        add_c.record(family.is_member(s), {"A": a, "B": b, "A+B": s}, max_witnesses)
        p = mat_mul(a, b)
        mul_c.record(family.is_member(p), {"A": a, "B": b, "AB": p}, max_witnesses)
    counts = {"pairs": total}
    if mode == "sampled":
        counts["samples"] = samples
    return VerificationReport(
        check=f"closure[{family.label}@{semiring.name},n={family.n}]",
        mode=mode,
        seed=seed if mode == "sampled" else None,
        results=[has_zero, add_c, mul_c],
        counts=counts,
    )
