"""Dense square matrices over a semiring, patterns and shift matrices.

Indices are 0-based throughout: ``unit(n, 0, n - 1)`` is the top-right
corner unit, written E_{1n} in 1-based notation.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from . import kernels
from .report import BudgetExceeded, SpecError
from .semiring import BOOL, NEG_INF, Semiring, carrier

DEFAULT_BUDGET = 2**20


class Matrix:
    """Immutable n x n matrix; entries stored as a flat row-major tuple."""

    __slots__ = ("semiring", "n", "data", "_hash")

    def __init__(self, semiring: Semiring, n: int, data: Sequence):
        if n < 1:
            raise SpecError(f"matrix dimension must be >= 1, got {n}")
        data = tuple(data)
        if len(data) != n * n:
            raise SpecError(f"expected {n * n} entries, got {len(data)}")
        self.semiring = semiring
        self.n = n
        self.data = data
        self._hash = None

    @classmethod
    def from_rows(cls, semiring: Semiring, rows: Sequence[Sequence]) -> Matrix:
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise SpecError("matrix must be square")
        return cls(semiring, n, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, semiring: Semiring, n: int) -> Matrix:
        return cls(semiring, n, (semiring.zero,) * (n * n))

    @classmethod
    def identity(cls, semiring: Semiring, n: int) -> Matrix:
        z, o = semiring.zero, semiring.one
        return cls(semiring, n, [o if i == j else z for i in range(n) for j in range(n)])

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.data[i * self.n + j]

    def rows(self) -> list[list]:
        n = self.n
        return [list(self.data[i * n:(i + 1) * n]) for i in range(n)]

    def replace(self, updates: dict[tuple[int, int], object]) -> Matrix:
        data = list(self.data)
        for (i, j), v in updates.items():
            data[i * self.n + j] = v
        return Matrix(self.semiring, self.n, data)

    def map(self, f) -> Matrix:
        return Matrix(self.semiring, self.n, [f(x) for x in self.data])

    def is_zero(self) -> bool:
        z = self.semiring.zero
        return all(x == z for x in self.data)

    def scale(self, alpha) -> Matrix:
        """Left scalar multiple alpha * A."""
        mul = self.semiring.mul
        return Matrix(self.semiring, self.n, [mul(alpha, x) for x in self.data])

    def __add__(self, other: Matrix) -> Matrix:
        return mat_add(self, other)

    def __matmul__(self, other: Matrix) -> Matrix:
        return mat_mul(self, other)

    __mul__ = __matmul__

    def __pow__(self, k: int) -> Matrix:
        return mat_power(self, k)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and self.n == other.n
            and self.semiring == other.semiring
            and self.data == other.data
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.semiring.name, self.n, self.data))
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix[{self.semiring.name}]({self.rows()!r})"

    def to_json(self) -> list:
        from .report import to_jsonable

        return to_jsonable(self.rows())


PatternMatrix = Matrix  # a Matrix over BOOL


def _check_compatible(a: Matrix, b: Matrix) -> None:
    if a.n != b.n:
        raise SpecError(f"dimension mismatch: {a.n} vs {b.n}")
    if a.semiring != b.semiring:
        raise SpecError(f"carrier mismatch: {a.semiring.name} vs {b.semiring.name}")


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    _check_compatible(a, b)
    s = a.semiring
    k = s.kernel
    if k == "maxmin":
        data = kernels.matadd_maxmin(a.data, b.data)
    elif k == "sumprod":
        data = kernels.matadd_sumprod(a.data, b.data)
    elif k == "maxplus":
        data = kernels.matadd_maxplus(a.data, b.data, NEG_INF)
    else:
        data = kernels.matadd_generic(a.data, b.data, s.add)
    return Matrix(s, a.n, data)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    _check_compatible(a, b)
    s, n = a.semiring, a.n
    k = s.kernel
    if k == "maxmin":
        data = kernels.matmul_maxmin(a.data, b.data, n)
    elif k == "sumprod":
        data = kernels.matmul_sumprod(a.data, b.data, n)
    elif k == "maxplus":
        data = kernels.matmul_maxplus(a.data, b.data, n, NEG_INF)
    else:
        data = kernels.matmul_generic(a.data, b.data, n, s.add, s.mul, s.zero)
    return Matrix(s, n, data)


def mat_power(a: Matrix, k: int) -> Matrix:
    if k < 0:
        raise SpecError("negative matrix power")
    result = Matrix.identity(a.semiring, a.n)
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


def unit(n: int, i: int, j: int, semiring: Semiring = BOOL) -> Matrix:
    """Matrix unit with ``one`` at (i, j)."""
    data = [semiring.zero] * (n * n)
    data[i * n + j] = semiring.one
    return Matrix(semiring, n, data)


def shift_nilpotent(n: int, semiring: Semiring = BOOL) -> Matrix:
    """Superdiagonal shift D = E_{0,1} + ... + E_{n-2,n-1}."""
    data = [semiring.zero] * (n * n)
    for i in range(n - 1):
        data[i * n + i + 1] = semiring.one
    return Matrix(semiring, n, data)


def shift_cyclic(n: int, semiring: Semiring = BOOL) -> Matrix:
    """Cyclic shift d = D + E_{n-1,0}."""
    data = [semiring.zero] * (n * n)
    for i in range(n):
        data[i * n + (i + 1) % n] = semiring.one
    return Matrix(semiring, n, data)


def pattern(a: Matrix) -> Matrix:
    """Support of ``a`` as a BOOL matrix: 1 where the entry is nonzero."""
    s = a.semiring
    return Matrix(BOOL, a.n, [0 if s.is_zero(x) else 1 for x in a.data])


def embed_pattern(p: Matrix, semiring: Semiring) -> Matrix:
    """Read a 0/1 pattern as a matrix over ``semiring`` (bit 1 -> ``one``)."""
    z, o = semiring.zero, semiring.one
    return Matrix(semiring, p.n, [o if x else z for x in p.data])


def is_subpattern(p: Matrix, q: Matrix) -> bool:
    """True iff every 1-bit of ``p`` is also set in ``q``."""
    if p.n != q.n:
        raise SpecError(f"dimension mismatch: {p.n} vs {q.n}")
    return all(not x or y for x, y in zip(pattern(p).data, pattern(q).data))


def enumerate_matrices(
    semiring: Semiring,
    n: int,
    family=None,
    budget: int = DEFAULT_BUDGET,
    max_entry: int | None = None,
) -> Iterator[Matrix]:
    """All matrices of ``family`` (default: all n x n) over a finite carrier.

    Order is lexicographic in the family's free coefficients with the
    carrier's element order, so enumeration is deterministic and restartable.
    """
    if family is not None:
        return family.enumerate(semiring, budget=budget, max_entry=max_entry)
    elems = carrier(semiring, max_entry)
    total = len(elems) ** (n * n)
    if total > budget:
        raise BudgetExceeded(f"{total} matrices exceed budget {budget}")
    return (Matrix(semiring, n, data) for data in itertools.product(elems, repeat=n * n))


_NAMED = {
    "identity": "E",
    "zero": "0",
    "shift-nilpotent": "D",
    "shift-cyclic": "d",
}


def parse_matrix_literal(text: str, n: int) -> Matrix:
    """Parse a 0/1 pattern: JSON rows, or a sum of terms.

    Terms: ``0``, ``E``, ``D``, ``D^k``, ``d``, ``d^k`` and the 0-based
    unit ``E[i,j]``; also the names ``identity``, ``zero``,
    ``shift-nilpotent`` and ``shift-cyclic``.
    """
    import json
    import re

    text = text.strip()
    if text.startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"bad pattern literal: {exc}") from None
        p = Matrix.from_rows(BOOL, [[1 if x else 0 for x in r] for r in rows])
        if p.n != n:
            raise SpecError(f"pattern has n={p.n}, expected {n}")
        return p
    text = _NAMED.get(text, text)
    acc = Matrix.zeros(BOOL, n)
    for term in text.replace(" ", "").split("+"):
        m = re.fullmatch(r"(0|E|D|d)(?:\^(\d+))?|E\[(\d+),(\d+)\]", term)
        if m is None:
            raise SpecError(f"bad pattern term {term!r}")
        if m.group(3) is not None:
            i, j = int(m.group(3)), int(m.group(4))
            if not (0 <= i < n and 0 <= j < n):
                raise SpecError(f"unit E[{i},{j}] out of range for n={n}")
            acc = acc + unit(n, i, j)
            continue
        sym, k = m.group(1), int(m.group(2) or 1)
        if sym == "0":
            continue
        if sym == "E":
            acc = acc + mat_power(Matrix.identity(BOOL, n), k)
        elif sym == "D":
            acc = acc + mat_power(shift_nilpotent(n), k)
        else:
            acc = acc + mat_power(shift_cyclic(n), k)
    return acc
