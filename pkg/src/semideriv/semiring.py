"""Semiring descriptors, built-in carriers and scalar derivations."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable

from .report import CapabilityError, CheckResult, SpecError, VerificationReport

Element = Any


class NegInf:
    """The tropical zero of ``maxplus-int``; a singleton."""

    _instance: NegInf | None = None

    def __new__(cls) -> NegInf:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "-inf"

    def __reduce__(self):
        return (NegInf, ())


NEG_INF = NegInf()


@dataclass(frozen=True)
class PolyNat:
    """Polynomial over the naturals, little-endian coefficients."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        c = tuple(int(x) for x in self.coeffs)
        if any(x < 0 for x in c):
            raise ValueError(f"negative coefficient in {c}")
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def of(cls, *coeffs: int) -> PolyNat:
        return cls(tuple(coeffs))

    @classmethod
    def _trusted(cls, coeffs: list) -> PolyNat:
        """Skip validation for coefficients produced by closed operations."""
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        return obj

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def __add__(self, other: PolyNat) -> PolyNat:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] += y
        return PolyNat._trusted(out)

    def __mul__(self, other: PolyNat) -> PolyNat:
        if not self.coeffs or not other.coeffs:
            return _POLY_ZERO
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return PolyNat._trusted(out)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)


_POLY_ZERO = PolyNat()


def poly_derivative(p: PolyNat) -> PolyNat:
    """Formal derivative: coefficient i of the result is (i+1) * p[i+1]."""
    return PolyNat._trusted([(i + 1) * c for i, c in enumerate(p.coeffs[1:])])


@dataclass(frozen=True, eq=False)
class Semiring:
    """A carrier with ``add``/``mul``/``zero``/``one`` and declared capabilities.

    ``kernel`` names the compiled matrix kernel able to handle the carrier
    (``"maxmin"``, ``"sumprod"``, ``"maxplus"``); ``None`` means the generic
    path through ``add``/``mul``.
    """

    name: str
    add: Callable[[Element, Element], Element]
    mul: Callable[[Element, Element], Element]
    zero: Element
    one: Element
    additively_idempotent: bool = False
    commutative: bool = False
    finite: bool = False
    elements: tuple | None = None
    sampler: Callable[[random.Random], Element] | None = field(default=None, repr=False)
    bounded: Callable[[int], tuple] | None = field(default=None, repr=False)
    kernel: str | None = None

    def eq(self, a: Element, b: Element) -> bool:
        return a == b

    def is_zero(self, a: Element) -> bool:
        return self.eq(a, self.zero)

    def sum(self, items: Iterable[Element]) -> Element:
        acc = self.zero
        for x in items:
            acc = self.add(acc, x)
        return acc

    def sample(self, rng: random.Random) -> Element:
        if self.sampler is None:
            if self.elements is None:
                raise CapabilityError(f"semiring {self.name!r} has no sampler")
            return rng.choice(self.elements)
        return self.sampler(rng)

    def __repr__(self) -> str:
        return f"Semiring({self.name})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Semiring) and other.name == self.name

    def __hash__(self) -> int:
        return hash(self.name)


def _maxplus_add(a, b):
    if a is NEG_INF:
        return b
    if b is NEG_INF:
        return a
    return a if a >= b else b


def _maxplus_mul(a, b):
    if a is NEG_INF or b is NEG_INF:
        return NEG_INF
    return a + b


def _sample_maxplus(rng: random.Random):
    if rng.random() < 0.125:
        return NEG_INF
    return rng.randint(-1000, 1000)


def _sample_nat(rng: random.Random) -> int:
    # small values more often so zero/one cases show up
    if rng.random() < 0.25:
        return rng.randint(0, 2)
    return rng.randint(0, 1000)


def _sample_natpoly(rng: random.Random) -> PolyNat:
    deg = rng.randint(-1, 4)
    return PolyNat(tuple(rng.randint(0, 9) for _ in range(deg + 1)))


BOOL = Semiring(
    name="bool",
    add=lambda a, b: a | b,
    mul=lambda a, b: a & b,
    zero=0,
    one=1,
    additively_idempotent=True,
    commutative=True,
    finite=True,
    elements=(0, 1),
    kernel="maxmin",
)

MAXPLUS_INT = Semiring(
    name="maxplus-int",
    add=_maxplus_add,
    mul=_maxplus_mul,
    zero=NEG_INF,
    one=0,
    additively_idempotent=True,
    commutative=True,
    sampler=_sample_maxplus,
    bounded=lambda m: (NEG_INF, *range(-m, m + 1)),
    kernel="maxplus",
)

NAT = Semiring(
    name="nat",
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    zero=0,
    one=1,
    commutative=True,
    sampler=_sample_nat,
    bounded=lambda m: tuple(range(m + 1)),
    kernel="sumprod",
)

NATPOLY = Semiring(
    name="natpoly",
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    zero=PolyNat(),
    one=PolyNat((1,)),
    commutative=True,
    sampler=_sample_natpoly,
    # degree <= 1 with coefficients <= m
    bounded=lambda m: tuple(PolyNat((a, b)) for b in range(m + 1) for a in range(m + 1)),
    kernel="sumprod",
)


def chain(m: int) -> Semiring:
    """The chain {0..m} with max as addition and min as multiplication."""
    if m < 1:
        raise SpecError(f"chain:{m} needs m >= 1")
    return Semiring(
        name=f"chain:{m}",
        add=max,
        mul=min,
        zero=0,
        one=m,
        additively_idempotent=True,
        commutative=True,
        finite=True,
        elements=tuple(range(m + 1)),
        kernel="maxmin",
    )


def parse_semiring(spec: str) -> Semiring:
    spec = spec.strip()
    fixed = {"bool": BOOL, "maxplus-int": MAXPLUS_INT, "nat": NAT, "natpoly": NATPOLY}
    if spec in fixed:
        return fixed[spec]
    if spec.startswith("chain:"):
        try:
            m = int(spec.split(":", 1)[1])
        except ValueError:
            raise SpecError(f"bad chain spec {spec!r}") from None
        return chain(m)
    raise SpecError(f"unknown semiring {spec!r}")


def enumerate_elements(desc: Semiring) -> list:
    """Complete element list of a finite carrier."""
    if not desc.finite or desc.elements is None:
        raise CapabilityError(f"semiring {desc.name!r} is not finite")
    return list(desc.elements)


def carrier(desc: Semiring, max_entry: int | None = None) -> list:
    """Elements used for exhaustive search.

    Finite carriers give everything; infinite ones need ``max_entry`` and
    give a bounded slice (not closed under the operations).
    """
    if desc.finite:
        return enumerate_elements(desc)
    if max_entry is None or desc.bounded is None:
        raise CapabilityError(
            f"exhaustive search over infinite semiring {desc.name!r} needs a max_entry bound"
        )
    return list(desc.bounded(max_entry))


# -- axiom checking --------------------------------------------------------

def _triples(desc: Semiring, mode: str, samples: int, seed: int | None, max_entry):
    if mode == "exhaustive":
        elems = carrier(desc, max_entry)
        return elems, itertools.product(elems, repeat=3), len(elems) ** 3
    rng = random.Random(seed)
    pool = [desc.sample(rng) for _ in range(3 * samples)]
    it = (tuple(pool[3 * i: 3 * i + 3]) for i in range(samples))
    return pool, it, samples


def check_semiring_axioms(
    desc: Semiring,
    mode: str = "exhaustive",
    samples: int = 10_000,
    seed: int | None = 0,
    max_entry: int | None = None,
    max_witnesses: int = 3,
) -> VerificationReport:
    """Check the semiring laws on triples, then compare observed and declared flags.

    A declared flag that disagrees with the observation fails the report
    (``flag:*`` checks); it is never silently corrected.
    """
    if mode not in ("exhaustive", "sampled"):
        raise SpecError(f"unknown mode {mode!r}")
    add, mul, eq, z, one = desc.add, desc.mul, desc.eq, desc.zero, desc.one

    laws: dict[str, Callable] = {
        "add_associative": lambda a, b, c: (add(add(a, b), c), add(a, add(b, c))),
        "add_commutative": lambda a, b, c: (add(a, b), add(b, a)),
        "add_zero": lambda a, b, c: (add(a, z), a),
        "mul_associative": lambda a, b, c: (mul(mul(a, b), c), mul(a, mul(b, c))),
        "mul_one_left": lambda a, b, c: (mul(one, a), a),
        "mul_one_right": lambda a, b, c: (mul(a, one), a),
        "left_distributive": lambda a, b, c: (mul(a, add(b, c)), add(mul(a, b), mul(a, c))),
        "right_distributive": lambda a, b, c: (mul(add(a, b), c), add(mul(a, c), mul(b, c))),
        "zero_annihilates_left": lambda a, b, c: (mul(z, a), z),
        "zero_annihilates_right": lambda a, b, c: (mul(a, z), z),
    }
    results = {name: CheckResult(name) for name in laws}
    elems, triples, total = _triples(desc, mode, samples, seed, max_entry)
    for a, b, c in triples:
        for name, law in laws.items():
            lhs, rhs = law(a, b, c)
            results[name].record(eq(lhs, rhs), {"a": a, "b": b, "c": c, "lhs": lhs, "rhs": rhs}, max_witnesses)

    distinct = list(dict.fromkeys(elems))
    idem = CheckResult("additive_idempotency", informational=True)
    for a in distinct:
        idem.record(eq(add(a, a), a), {"a": a, "lhs": add(a, a), "rhs": a}, max_witnesses)
    comm = CheckResult("mul_commutative", informational=True)
    zsf = CheckResult("zero_sum_free")
    for a, b in itertools.product(distinct[:64], repeat=2):
        comm.record(eq(mul(a, b), mul(b, a)), {"a": a, "b": b, "lhs": mul(a, b), "rhs": mul(b, a)}, max_witnesses)
        zsf.record(not eq(add(a, b), z) or (eq(a, z) and eq(b, z)), {"a": a, "b": b}, max_witnesses)

    checks = [*results.values(), idem, comm]
    for flag, declared, observed in (
        ("additively_idempotent", desc.additively_idempotent, idem.passed),
        ("commutative", desc.commutative, comm.passed),
    ):
        r = CheckResult(f"flag:{flag}")
        r.record(declared == observed, {"declared": declared, "observed": observed}, max_witnesses)
        checks.append(r)
    if desc.additively_idempotent:
        checks.append(zsf)
    counts = {"triples": total, "elements": len(distinct)}
    if mode == "sampled":
        counts["samples"] = samples
    return VerificationReport(
        check=f"semiring_axioms[{desc.name}]",
        mode=mode,
        seed=seed if mode == "sampled" else None,
        results=checks,
        counts=counts,
    )


# -- scalar derivations ----------------------------------------------------

@dataclass(frozen=True)
class BaseDerivation:
    """A self-map of a scalar semiring meant to be a derivation."""

    name: str
    map: Callable[[Element], Element]
    domain: Semiring

    def __call__(self, a: Element) -> Element:
        return self.map(a)


def _leibniz_pairs(desc, mode, samples, seed, max_entry):
    if mode == "exhaustive":
        elems = carrier(desc, max_entry)
        return itertools.product(elems, repeat=2), len(elems) ** 2
    rng = random.Random(seed)
    return ((desc.sample(rng), desc.sample(rng)) for _ in range(samples)), samples


def verify_base_derivation(
    base: BaseDerivation,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int | None = 0,
    max_entry: int | None = None,
    max_witnesses: int = 3,
) -> VerificationReport:
    desc, f = base.domain, base.map
    add, mul, eq = desc.add, desc.mul, desc.eq
    additive = CheckResult("additivity")
    leibniz = CheckResult("leibniz")
    pairs, total = _leibniz_pairs(desc, mode, samples, seed, max_entry)
    for a, b in pairs:
        lhs, rhs = f(add(a, b)), add(f(a), f(b))
        additive.record(eq(lhs, rhs), {"a": a, "b": b, "lhs": lhs, "rhs": rhs}, max_witnesses)
        lhs, rhs = f(mul(a, b)), add(mul(f(a), b), mul(a, f(b)))
        leibniz.record(eq(lhs, rhs), {"a": a, "b": b, "lhs": lhs, "rhs": rhs}, max_witnesses)
    return VerificationReport(
        check=f"base_derivation[{base.name}@{desc.name}]",
        mode=mode,
        seed=seed if mode == "sampled" else None,
        results=[additive, leibniz],
        counts={"pairs": total},
    )


def identity_base_derivation(desc: Semiring) -> BaseDerivation:
    """The identity map, which is a derivation exactly on idempotent carriers."""
    if not desc.additively_idempotent:
        for a in (desc.one, *((desc.elements or ())[:8])):
            lhs, rhs = desc.mul(a, a), desc.add(desc.mul(a, a), desc.mul(a, a))
            if not desc.eq(lhs, rhs):
                raise CapabilityError(
                    f"identity is not a derivation of {desc.name!r}: "
                    f"id({a!r}*{a!r}) = {lhs!r} but id(a)b + a id(b) = {rhs!r}",
                    witness={"a": a, "b": a, "lhs": lhs, "rhs": rhs},
                )
        raise CapabilityError(f"semiring {desc.name!r} is not declared additively idempotent")
    return BaseDerivation("identity", lambda a: a, desc)


def zero_base_derivation(desc: Semiring) -> BaseDerivation:
    return BaseDerivation("zero", lambda a: desc.zero, desc)


POLY_DERIVATIVE = BaseDerivation("polyderiv", poly_derivative, NATPOLY)


def parse_base_derivation(spec: str, desc: Semiring) -> BaseDerivation:
    if spec == "polyderiv":
        if desc != NATPOLY:
            raise SpecError("polyderiv is defined on natpoly only")
        return POLY_DERIVATIVE
    if spec == "identity":
        return identity_base_derivation(desc)
    if spec == "zero":
        return zero_base_derivation(desc)
    raise SpecError(f"unknown base derivation {spec!r}")


def with_flags(desc: Semiring, **flags) -> Semiring:
    """Copy of ``desc`` with different operations or flags.

    Swapping ``add`` or ``mul`` drops the compiled kernel, and the copy gets a
    distinct name unless one is given.
    """
    if ("add" in flags or "mul" in flags) and "kernel" not in flags:
        flags["kernel"] = None
    flags.setdefault("name", desc.name + "*")
    return replace(desc, **flags)
