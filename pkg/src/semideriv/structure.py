"""Finite semiring presentations, pattern and derivation semirings, theorem suites."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .derivations import (
    Derivation,
    classify,
    make_inner,
    toeplitz_corner,
    toeplitz_strip,
    verify_derivation,
)
from .families import Family
from .matrix import (
    DEFAULT_BUDGET,
    Matrix,
    embed_pattern,
    is_subpattern,
    mat_add,
    mat_mul,
    mat_power,
    shift_cyclic,
    shift_nilpotent,
    unit,
)
from .report import BudgetExceeded, CapabilityError, SpecError, to_jsonable
from .semiring import BOOL, Semiring, carrier

PATTERN_FAMILIES = ("diag", "ut_toeplitz", "circulant")


@dataclass
class FiniteSemiring:
    """A finite semiring given by element payloads and index tables."""

    name: str
    elements: list
    labels: list[str]
    add: list[list[int]]
    mul: list[list[int]]
    zero: int
    one: int | None
    extra: dict = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        name: str,
        payloads: Sequence,
        add: Callable,
        mul: Callable,
        zero,
        one=None,
        label: Callable[[Any], str] = repr,
    ) -> FiniteSemiring:
        index = {p: i for i, p in enumerate(payloads)}
        if len(index) != len(payloads):
            raise SpecError(f"{name}: duplicate elements")

        def lookup(x, how):
            try:
                return index[x]
            except KeyError:
                raise SpecError(f"{name} is not closed under {how}: {x!r}") from None

        size = len(payloads)
        add_t = [[lookup(add(payloads[i], payloads[j]), "+") for j in range(size)] for i in range(size)]
        mul_t = [[lookup(mul(payloads[i], payloads[j]), "*") for j in range(size)] for i in range(size)]
        return cls(
            name=name,
            elements=list(payloads),
            labels=[label(p) for p in payloads],
            add=add_t,
            mul=mul_t,
            zero=index[zero],
            one=None if one is None else index[one],
        )

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, payload) -> int:
        return self.elements.index(payload)

    def label_set(self, idx) -> list[str]:
        return [self.labels[i] for i in sorted(idx)]


# -- constructions ---------------------------------------------------------

def _basis_names(kind: str, n: int) -> list[str]:
    if kind == "diag":
        return [f"E{i}{i}" for i in range(n)]
    if kind == "ut_toeplitz":
        return ["E", "D"] + [f"D^{k}" for k in range(2, n)]
    if kind == "circulant":
        return ["E", "d"] + [f"d^{k}" for k in range(2, n)]
    raise SpecError(f"no pattern semiring for family {kind!r}; use one of {PATTERN_FAMILIES}")


def pattern_label(family: Family, p: Matrix) -> str:
    names = _basis_names(family.kind, family.n)
    terms = [nm for nm, c in zip(names, family.extract_coeffs(p)) if c]
    return "+".join(terms) or "0"


def pattern_semiring(kind: str, n: int) -> FiniteSemiring:
    """P(S) for diag, ut_toeplitz or circulant: the 2^n 0/1 members."""
    _basis_names(kind, n)
    fam = Family(kind, n)
    pats = fam.members(BOOL)
    ps = FiniteSemiring.build(
        f"P({kind},n={n})", pats, mat_add, mat_mul,
        zero=Matrix.zeros(BOOL, n), one=Matrix.identity(BOOL, n),
        label=lambda p: pattern_label(fam, p),
    )
    ps.extra["family"] = fam
    return ps


def family_semiring(family: Family, semiring: Semiring, budget: int = 4096) -> FiniteSemiring:
    """All members of a family over a finite carrier, as a finite semiring."""
    members = family.members(semiring, budget=budget)
    e = Matrix.identity(semiring, family.n)
    fs = FiniteSemiring.build(
        f"{family.label}({semiring.name},n={family.n})", members, mat_add, mat_mul,
        zero=Matrix.zeros(semiring, family.n), one=e if family.is_member(e) else None,
        label=lambda m: repr(m.rows()),
    )
    fs.extra["family"] = family
    return fs


def _signature(delta_map, members) -> tuple:
    return tuple(delta_map(a) for a in members)


def derivation_semiring(kind: str, n: int, semiring: Semiring = BOOL) -> FiniteSemiring:
    """D(S): inner derivations A -> A P_X over the patterns P_X of the family.

    Sum and product come from the pattern tables. ``extra["iso"]`` records the
    checks that delta_X -> P_X is bijective and that the table operations agree
    with pointwise sum and composition of the maps on every member over
    ``semiring``.
    """
    if not semiring.additively_idempotent:
        raise CapabilityError(f"D(S) needs an additively idempotent carrier, got {semiring.name!r}")
    ps = pattern_semiring(kind, n)
    fam = ps.extra["family"]
    members = fam.members(semiring)
    derivs = [
        make_inner(fam, embed_pattern(p, semiring), check=False, name=f"delta[{lab}]")
        for p, lab in zip(ps.elements, ps.labels)
    ]
    sigs = [_signature(d.map, members) for d in derivs]
    size = len(ps)
    add_ok = all(
        tuple(mat_add(x, y) for x, y in zip(sigs[i], sigs[j])) == sigs[ps.add[i][j]]
        for i in range(size) for j in range(size)
    )
    mul_ok = all(
        tuple(derivs[i].map(y) for y in sigs[j]) == sigs[ps.mul[i][j]]
        for i in range(size) for j in range(size)
    )
    ds = FiniteSemiring(
        name=f"D({kind},n={n})",
        elements=derivs,
        labels=[f"delta[{lab}]" for lab in ps.labels],
        add=ps.add,
        mul=ps.mul,
        zero=ps.zero,
        one=ps.one,
    )
    ds.extra.update(
        family=fam,
        patterns=ps,
        members=members,
        signatures=sigs,
        iso={"injective": len(set(sigs)) == size, "add_preserved": add_ok, "mul_preserved": mul_ok, "size": size},
    )
    return ds


# -- ideals, units, center -------------------------------------------------

def ideal_closure(s: FiniteSemiring, gens) -> frozenset[int]:
    """Smallest ideal containing ``gens`` (always contains zero)."""
    ideal = {s.zero, *gens}
    work = list(ideal)
    size = len(s)
    while work:
        x = work.pop()
        new = []
        for y in list(ideal):
            new.append(s.add[x][y])
        for r in range(size):
            new.append(s.mul[r][x])
            new.append(s.mul[x][r])
        for z in new:
            if z not in ideal:
                ideal.add(z)
                work.append(z)
    return frozenset(ideal)


def is_ideal(s: FiniteSemiring, ideal) -> bool:
    ideal = set(ideal)
    if not ideal:
        return False
    size = len(s)
    return all(s.add[x][y] in ideal for x in ideal for y in ideal) and all(
        s.mul[r][x] in ideal and s.mul[x][r] in ideal for x in ideal for r in range(size)
    )


def ideals(s: FiniteSemiring, budget: int = 1 << 16) -> list[frozenset[int]]:
    """All ideals, found by growing generated ideals one element at a time."""
    start = ideal_closure(s, ())
    found = {start}
    frontier = [start]
    while frontier:
        cur = frontier.pop()
        for x in range(len(s)):
            if x in cur:
                continue
            nxt = ideal_closure(s, cur | {x})
            if nxt not in found:
                found.add(nxt)
                if len(found) > budget:
                    raise BudgetExceeded(f"more than {budget} ideals")
                frontier.append(nxt)
    return sorted(found, key=lambda i: (len(i), sorted(i)))


def k_closure(s: FiniteSemiring, gens) -> frozenset[int]:
    """Smallest subtractive ideal (a, a + b in I implies b in I) containing ``gens``."""
    cur = ideal_closure(s, gens)
    size = len(s)
    while True:
        extra = {b for b in range(size) if b not in cur and any(s.add[a][b] in cur for a in cur)}
        if not extra:
            return cur
        cur = ideal_closure(s, cur | extra)


def is_subtractive(s: FiniteSemiring, ideal) -> bool:
    ideal = frozenset(ideal)
    return is_ideal(s, ideal) and k_closure(s, ideal) == ideal


def larger_proper_ideal(s: FiniteSemiring, ideal) -> frozenset[int] | None:
    """A proper ideal strictly containing ``ideal``, or None if there is none."""
    ideal = frozenset(ideal)
    whole = frozenset(range(len(s)))
    for x in sorted(whole - ideal):
        j = ideal_closure(s, ideal | {x})
        if j != whole:
            return j
    return None


def is_k_maximal(s: FiniteSemiring, ideal) -> bool:
    """Maximal among proper subtractive ideals."""
    ideal = frozenset(ideal)
    whole = frozenset(range(len(s)))
    if ideal == whole or not is_subtractive(s, ideal):
        return False
    return all(k_closure(s, ideal | {x}) == whole for x in whole - ideal)


def is_maximal(s: FiniteSemiring, ideal) -> bool:
    """Proper ideal such that adding any outside element generates everything."""
    ideal = frozenset(ideal)
    whole = frozenset(range(len(s)))
    if ideal == whole or not is_ideal(s, ideal):
        return False
    return all(ideal_closure(s, ideal | {x}) == whole for x in whole - ideal)


def maximal_ideals(s: FiniteSemiring, all_ideals=None) -> list[frozenset[int]]:
    all_ideals = ideals(s) if all_ideals is None else all_ideals
    whole = frozenset(range(len(s)))
    proper = [i for i in all_ideals if i != whole]
    return [i for i in proper if not any(i < j for j in proper)]


def minimal_nonzero_ideals(s: FiniteSemiring, all_ideals=None) -> list[frozenset[int]]:
    all_ideals = ideals(s) if all_ideals is None else all_ideals
    zero = frozenset({s.zero})
    nonzero = [i for i in all_ideals if i != zero]
    return [i for i in nonzero if not any(j < i for j in nonzero)]


@dataclass
class UnitGroup:
    elements: list[int]
    inverse: dict[int, int]
    table: dict[tuple[int, int], int]
    cyclic: bool
    generators: list[int]

    @property
    def order(self) -> int:
        return len(self.elements)


def units(s: FiniteSemiring) -> UnitGroup:
    if s.one is None:
        return UnitGroup([], {}, {}, False, [])
    size = len(s)
    inv = {}
    for x in range(size):
        for y in range(size):
            if s.mul[x][y] == s.one and s.mul[y][x] == s.one:
                inv[x] = y
                break
    us = sorted(inv)
    table = {(x, y): s.mul[x][y] for x in us for y in us}
    gens = []
    for g in us:
        seen, cur = {s.one}, g
        while cur not in seen:
            seen.add(cur)
            cur = s.mul[cur][g]
        if len(seen) == len(us):
            gens.append(g)
    return UnitGroup(us, inv, table, bool(gens), gens)


def center_elements(s: FiniteSemiring) -> list[int]:
    size = len(s)
    return [x for x in range(size) if all(s.mul[x][y] == s.mul[y][x] for y in range(size))]


def commutant(
    m: Matrix,
    search: Family,
    semiring: Semiring | None = None,
    budget: int = DEFAULT_BUDGET,
    max_entry: int | None = None,
) -> list[Matrix]:
    """Members A of ``search`` with A M = M A, in enumeration order."""
    semiring = semiring or m.semiring
    if m.semiring != semiring:
        m = embed_pattern(m, semiring)
    return [
        a for a in search.enumerate(semiring, budget=budget, max_entry=max_entry)
        if mat_mul(a, m) == mat_mul(m, a)
    ]


# -- derivation catalog ----------------------------------------------------

def _identity(fam: Family) -> Derivation:
    return Derivation("identity", fam, lambda a: a, "custom")


def _zero(fam: Family) -> Derivation:
    return Derivation("zero", fam, lambda a: Matrix.zeros(a.semiring, a.n), "custom")


def additive_bool_maps(fam: Family, limit: int = 4096):
    """All additive self-maps of a family over BOOL, with the Leibniz rule
    checked on basis pairs (enough, since both sides are bi-additive).

    Returns None when there are more than ``limit`` candidates.
    """
    members = fam.members(BOOL)
    dim = fam.dim
    if len(members) ** dim > limit:
        return None
    basis = [fam.from_coeffs(BOOL, [1 if k == s else 0 for k in range(dim)]) for s in range(dim)]
    zero = Matrix.zeros(BOOL, fam.n)
    products = {(i, j): fam.extract_coeffs(mat_mul(basis[i], basis[j])) for i in range(dim) for j in range(dim)}
    found = []
    for images in itertools.product(members, repeat=dim):
        def f(a, images=images):
            acc = zero
            for c, img in zip(fam.extract_coeffs(a), images):
                if c:
                    acc = mat_add(acc, img)
            return acc

        ok = True
        for (i, j), coeffs in products.items():
            lhs = zero
            for c, img in zip(coeffs, images):
                if c:
                    lhs = mat_add(lhs, img)
            rhs = mat_add(mat_mul(images[i], basis[j]), mat_mul(basis[i], images[j]))
            if lhs != rhs:
                ok = False
                break
        if ok:
            found.append(Derivation(f"additive{len(found)}", fam, f, "custom",
                                    params={"images": images}))
    return found


def derivation_catalog(fam: Family, semiring: Semiring, brute_force_limit: int = 4096) -> dict:
    """Every derivation of ``fam`` over ``semiring`` this package can construct.

    Candidates (inner maps by every member, the identity, the zero map and
    the family-specific constructions) are kept only if they verify
    exhaustively. Over BOOL, when the additive maps number at most
    ``brute_force_limit``, every derivation is found by brute force and added.
    """
    cands: list[Derivation] = [_zero(fam), _identity(fam)]
    for x in fam.members(semiring):
        cands.append(make_inner(fam, x, check=False, name=f"inner{list(fam.extract_coeffs(x))}"))
    if fam.kind == "ut_toeplitz":
        cands += [toeplitz_strip(fam.n), toeplitz_corner(fam.n)]
    kept = [d for d in cands if verify_derivation(d, semiring, mode="exhaustive").passed]
    brute = None
    if semiring == BOOL:
        brute = additive_bool_maps(fam, brute_force_limit)
        if brute is not None:
            kept += brute
    return {
        "derivations": kept,
        "candidates": len(cands),
        "constructed": len(kept) - (len(brute) if brute else 0),
        "brute_force": None if brute is None else len(brute),
    }


# -- theorem suites ----------------------------------------------------------

KNOWN_REFUTATIONS = frozenset({("t3", "b"), ("t3", "d")})


@dataclass
class Item:
    item: str
    status: str  # verified | refuted | catalog-scope
    summary: str
    checked: int = 0
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    known: bool = False

    def to_json(self) -> dict:
        out = {
            "item": self.item,
            "status": self.status,
            "summary": self.summary,
            "checked": self.checked,
            "witnesses": to_jsonable(self.witnesses),
        }
        if self.details:
            out["details"] = to_jsonable(self.details)
        if self.known:
            out["known_refutation"] = True
        return out


@dataclass
class TheoremReport:
    theorem: str
    n: int
    semiring: str
    items: list[Item]

    def item(self, name: str) -> Item:
        for it in self.items:
            if it.item == name:
                return it
        raise KeyError(name)

    def refuted(self, allow=KNOWN_REFUTATIONS) -> list[str]:
        """Refuted items not covered by the allowlist."""
        return [it.item for it in self.items if it.status == "refuted" and (self.theorem, it.item) not in allow]

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "n": self.n,
            "semiring": self.semiring,
            "items": [it.to_json() for it in self.items],
        }


def _status(ok: bool) -> str:
    return "verified" if ok else "refuted"


def _require_finite_idempotent(semiring: Semiring) -> None:
    if not (semiring.finite and semiring.additively_idempotent):
        raise CapabilityError(f"theorem suites need a finite additively idempotent carrier, got {semiring.name!r}")


class _DerivationAlgebra:
    """D(S) plus map-level helpers shared by the three theorem suites."""

    def __init__(self, kind: str, n: int, semiring: Semiring):
        self.ds = derivation_semiring(kind, n, semiring)
        self.ps = self.ds.extra["patterns"]
        self.members = self.ds.extra["members"]
        self.sigs = self.ds.extra["signatures"]
        self.zero_sig = tuple(Matrix.zeros(semiring, n) for _ in self.members)
        self.id_sig = tuple(self.members)
        self.size = len(self.ds)

    def compose(self, i: int, j: int) -> tuple:
        """Signature of delta_i after delta_j."""
        f = self.ds.elements[i].map
        return tuple(f(y) for y in self.sigs[j])

    def plus(self, i: int, j: int) -> tuple:
        return tuple(mat_add(x, y) for x, y in zip(self.sigs[i], self.sigs[j]))

    def label(self, i: int) -> str:
        return self.ds.labels[i]

    def item_a(self) -> Item:
        ds = self.ds
        z, o = ds.zero, ds.one
        ok = (
            self.sigs[z] == self.zero_sig
            and self.sigs[o] == self.id_sig
            and all(ds.add[z][x] == x for x in range(self.size))
            and all(ds.mul[o][x] == x == ds.mul[x][o] for x in range(self.size))
        )
        return Item("a", _status(ok), "delta_0 is the zero and delta_E the identity of D(S)",
                    checked=self.size, details={"zero": self.label(z), "one": self.label(o)})

    def item_commute(self, name: str) -> Item:
        bad = []
        for i, j in itertools.combinations(range(self.size), 2):
            if self.compose(i, j) != self.compose(j, i):
                bad.append({"X": self.label(i), "Y": self.label(j)})
        return Item(name, _status(not bad), "inner derivations commute under composition",
                    checked=self.size * (self.size - 1) // 2, witnesses=bad[:3])

    def item_sum_zero(self) -> list[dict]:
        bad = []
        for i, j in itertools.product(range(self.size), repeat=2):
            lhs = self.plus(i, j) == self.zero_sig
            rhs = self.sigs[i] == self.zero_sig and self.sigs[j] == self.zero_sig
            if lhs != rhs:
                bad.append({"X": self.label(i), "Y": self.label(j), "claim": "sum is zero iff both zero"})
        return bad

    def item_product_identity(self) -> list[dict]:
        bad = []
        for i, j in itertools.product(range(self.size), repeat=2):
            lhs = self.compose(i, j) == self.id_sig
            rhs = self.sigs[i] == self.id_sig and self.sigs[j] == self.id_sig
            if lhs != rhs:
                bad.append({"X": self.label(i), "Y": self.label(j), "claim": "product is identity iff both identity"})
        return bad

    def item_sum_identity(self) -> list[dict]:
        bad = []
        for i, j in itertools.product(range(self.size), repeat=2):
            lhs = self.plus(i, j) == self.id_sig
            rhs = self.sigs[i] == self.id_sig and self.sigs[j] == self.id_sig
            if lhs != rhs:
                bad.append({"X": self.label(i), "Y": self.label(j), "claim": "sum is identity iff both identity"})
        return bad

    def idempotent(self, i: int) -> bool:
        return self.compose(i, i) == self.sigs[i]

    def nilpotent(self, i: int) -> bool:
        d = self.ds.elements[i]
        return classify(d, self.members[0].semiring).kind == "nilpotent"


def _iso_item(alg: _DerivationAlgebra) -> dict:
    return dict(alg.ds.extra["iso"])


def _catalog_item(name: str, summary: str, fam: Family, semiring: Semiring, test) -> Item:
    """Run ``test(delta) -> list of witnesses`` over the derivation catalog."""
    cat = derivation_catalog(fam, semiring)
    bad = []
    for d in cat["derivations"]:
        bad += test(d)
    return Item(
        name,
        "catalog-scope" if not bad else "refuted",
        summary,
        checked=len(cat["derivations"]),
        witnesses=bad[:3],
        details={
            "scope": "every derivation in the catalog, not all derivations",
            "catalog_size": len(cat["derivations"]),
            "constructed": cat["constructed"],
            "brute_force_all_derivations": cat["brute_force"],
        },
    )


def theorem1(n: int, semiring: Semiring = BOOL) -> TheoremReport:
    """Inner derivations of diagonal matrices."""
    _require_finite_idempotent(semiring)
    alg = _DerivationAlgebra("diag", n, semiring)
    ds, size = alg.ds, alg.size
    items = [alg.item_a()]

    bad = [{"X": alg.label(i)} for i in range(size) if not alg.idempotent(i)]
    items.append(Item("b", _status(not bad), "every delta_X is idempotent", size, bad[:3]))
    items.append(alg.item_commute("c"))

    units_idx = [ds.index(next(d for d in ds.elements if d.name == f"delta[E{i}{i}]")) for i in range(n)]
    bad = [
        {"i": i, "j": j}
        for i, j in itertools.permutations(range(n), 2)
        if alg.compose(units_idx[i], units_idx[j]) != alg.zero_sig
    ]
    items.append(Item("d", _status(not bad), "delta_{E_ii} delta_{E_jj} = 0 for i != j", n * (n - 1), bad))

    bad = alg.item_sum_zero() + alg.item_product_identity()
    items.append(Item("e", _status(not bad), "sum zero iff both zero; product identity iff both identity",
                      2 * size * size, bad[:3]))

    pats = alg.ps.elements
    i_x = {
        frozenset(j for j in range(size) if is_subpattern(pats[j], pats[i])): i for i in range(size)
    }
    found = ideals(ds)
    exact = set(found) == set(i_x)
    e = Matrix.identity(BOOL, n)
    mins = {frozenset(m) for m in minimal_nonzero_ideals(ds, found)}
    maxs = {frozenset(m) for m in maximal_ideals(ds, found)}
    want_min = {next(k for k, v in i_x.items() if pats[v] == unit(n, i, i)) for i in range(n)}
    e_minus = [Matrix(BOOL, n, [0 if (r == c == i) else e.data[r * n + c] for r in range(n) for c in range(n)])
               for i in range(n)]
    want_max = {next(k for k, v in i_x.items() if pats[v] == m) for m in e_minus}
    ok = exact and mins == want_min and maxs == want_max
    items.append(Item(
        "f", _status(ok), "ideals of D(S) are exactly the I_X; minimal I_{E_ii}, maximal I_{E-E_ii}",
        checked=len(found),
        witnesses=[] if ok else [{"ideals": [ds.label_set(i) for i in found]}],
        details={"ideals": len(found), "minimal": sorted(ds.label_set(m) for m in mins),
                 "maximal": sorted(ds.label_set(m) for m in maxs), "isomorphism": _iso_item(alg)},
    ))

    fam = Family("diag", n)

    def test_g(d: Derivation):
        out = []
        for i in range(n):
            img = d.map(unit(n, i, i, semiring))
            off = [img.data[k] for k in range(n * n) if k != i * n + i]
            if any(not semiring.is_zero(x) for x in off):
                out.append({"derivation": d.name, "i": i, "delta(E_ii)": img})
        return out

    items.append(_catalog_item("g", "delta(E_ii) = alpha_i E_ii", fam, semiring, test_g))
    return TheoremReport("t1", n, semiring.name, items)


def theorem2(n: int, semiring: Semiring = BOOL) -> TheoremReport:
    """Inner derivations of upper-triangular Toeplitz matrices."""
    _require_finite_idempotent(semiring)
    alg = _DerivationAlgebra("ut_toeplitz", n, semiring)
    ds, size = alg.ds, alg.size
    fam = Family("ut_toeplitz", n)
    coeffs = [fam.extract_coeffs(p) for p in alg.ps.elements]
    items = [alg.item_a()]

    # b: E + D^k + ... with 2k > n-1 gives an idempotent delta_X
    covered, bad = [], []
    for i, c in enumerate(coeffs):
        if c[0] != 1:
            continue
        rest = [j for j in range(1, n) if c[j]]
        if rest and 2 * rest[0] > n - 1:
            covered.append(alg.label(i))
            if not alg.idempotent(i):
                bad.append({"X": alg.label(i)})
    converse = []
    for k in range(1, n):
        if 2 * k <= n - 1:
            c = tuple(1 if j in (0, k) else 0 for j in range(n))
            i = coeffs.index(c)
            if not alg.idempotent(i):
                converse.append({"X": alg.label(i), "k": k,
                                 "delta_X^2(E)": alg.compose(i, i)[alg.members.index(Matrix.identity(semiring, n))]})
    items.append(Item("b", _status(not bad), "delta_X^2 = delta_X when P_X = E + D^k + ... with 2k > n-1",
                      len(covered), bad[:3],
                      details={"patterns": covered, "non_idempotent_when_2k_le_n_minus_1": converse}))

    bad = []
    for i, c in enumerate(coeffs):
        if alg.nilpotent(i) != (c[0] == 0):
            bad.append({"X": alg.label(i)})
    items.append(Item("c", _status(not bad), "delta_X nilpotent iff the E coefficient of P_X is 0", size, bad[:3]))
    items.append(alg.item_commute("d"))
    bad = alg.item_sum_zero() + alg.item_product_identity()
    items.append(Item("e", _status(not bad), "sum zero iff both zero; product identity iff both identity",
                      2 * size * size, bad[:3]))

    ut = family_semiring(fam, semiring)
    i_d = frozenset(i for i, m in enumerate(ut.elements) if semiring.is_zero(m[0, 0]))
    ok_ideal, ok_max = is_ideal(ut, i_d), is_maximal(ut, i_d)
    bigger = None if ok_max else larger_proper_ideal(ut, i_d)
    ok_k = is_k_maximal(ut, i_d)
    items.append(Item(
        "f", _status(ok_ideal and ok_max), "I_D (zero E coefficient) is a maximal ideal",
        checked=len(ut),
        witnesses=[] if bigger is None else [{
            "larger_proper_ideal_size": len(bigger),
            "I_D_size": len(i_d),
            "added": [ut.elements[i] for i in sorted(bigger - i_d)][:4],
        }],
        details={
            "ideal": ok_ideal,
            "maximal": ok_max,
            "size": len(i_d),
            "derived": {
                "claim": "I_D is maximal among subtractive ideals",
                "status": _status(ok_k),
            },
            "isomorphism": _iso_item(alg),
        },
    ))

    in_id = [m for m in ut.elements if semiring.is_zero(m[0, 0])]
    d_shift = shift_nilpotent(n, semiring)

    def test_g(d: Derivation):
        out = [{"derivation": d.name, "A": a, "delta(A)": d.map(a)} for a in in_id
               if not semiring.is_zero(d.map(a)[0, 0])]
        if not semiring.is_zero(d.map(d_shift)[0, 0]):
            out.append({"derivation": d.name, "delta(D)": d.map(d_shift)})
        return out

    items.append(_catalog_item("g", "I_D is mapped into itself", fam, semiring, test_g))
    return TheoremReport("t2", n, semiring.name, items)


def _closed_mod(support: set[int], n: int) -> bool:
    return all((a + b) % n in support for a in support for b in support)


def theorem3(n: int, semiring: Semiring = BOOL) -> TheoremReport:
    """Inner derivations of circulant matrices."""
    _require_finite_idempotent(semiring)
    alg = _DerivationAlgebra("circulant", n, semiring)
    ds, ps, size = alg.ds, alg.ps, alg.size
    fam = Family("circulant", n)
    supports = [{k for k, c in enumerate(fam.extract_coeffs(p)) if c} for p in ps.elements]
    items = [alg.item_a()]

    # b, literally: no delta_X is idempotent or nilpotent
    idem = [alg.idempotent(i) for i in range(size)]
    nil = [alg.nilpotent(i) for i in range(size)]
    order = sorted(range(size), key=lambda i: (i not in (ds.one, ds.zero), i != ds.one, i))
    wit = [
        {"X": alg.label(i), "idempotent": idem[i], "nilpotent": nil[i]}
        for i in order if idem[i] or nil[i]
    ]
    derived_bad = [
        {"X": alg.label(i)} for i in range(size)
        if idem[i] != _closed_mod(supports[i], n) or nil[i] != (not supports[i])
    ]
    items.append(Item(
        "b", _status(not wit), "no delta_X is idempotent or nilpotent", size, wit,
        details={
            "derived": {
                "claim": "delta_X idempotent iff supp(X) closed under + mod n; nilpotent iff X = 0",
                "status": _status(not derived_bad),
                "checked": size,
                "witnesses": derived_bad[:3],
            }
        },
        known=bool(wit),
    ))
    items.append(alg.item_commute("c"))

    zero_bad, id_bad = alg.item_sum_zero(), alg.item_sum_identity()
    items.append(Item(
        "d", _status(not zero_bad and not id_bad), "sum zero iff both zero; sum identity iff both identity",
        2 * size * size, (zero_bad + id_bad)[:3],
        details={"sum_zero_part": _status(not zero_bad), "sum_identity_part": _status(not id_bad)},
        known=bool(zero_bad or id_bad),
    ))

    d = shift_cyclic(n)
    want = [ps.index(mat_power(d, k)) for k in range(n)]
    up = units(ps)
    ud = units(ds)
    want_d = [ds.index(next(x for x in ds.elements if x.name == f"delta[{ps.labels[w]}]")) for w in want]
    sig_units = [alg.sigs[i] for i in ud.elements]
    ok = (
        sorted(up.elements) == sorted(want) and up.cyclic and up.order == n
        and sorted(ud.elements) == sorted(want_d) and ud.cyclic and ud.order == n
        and all(s in [alg.sigs[w] for w in want_d] for s in sig_units)
    )
    items.append(Item("e", _status(ok), "units of P and of D form cyclic groups of order n generated by d",
                      checked=size, details={"U_P": ps.label_set(up.elements), "U_D": ds.label_set(ud.elements),
                                             "U_P_cyclic": up.cyclic, "U_D_cyclic": ud.cyclic,
                                             "generators": ps.label_set(up.generators)}))

    i_p = frozenset(range(size)) - frozenset(up.elements)
    i_dd = frozenset(range(size)) - frozenset(ud.elements)
    ok_p = is_ideal(ps, i_p) and is_maximal(ps, i_p)
    ok_d = is_ideal(ds, i_dd) and is_maximal(ds, i_dd)
    items.append(Item("f", _status(ok_p and ok_d), "non-units form a maximal ideal in P and in D",
                      checked=2 * size, details={"I_P_maximal": ok_p, "I_D_maximal": ok_d,
                                                 "isomorphism": _iso_item(alg)}))

    non_units = [ps.elements[i] for i in sorted(i_p)]

    def test_g(dv: Derivation):
        return [{"derivation": dv.name, "X": x, "delta(X)": dv.map(x)} for x in non_units
                if ps.index(dv.map(x)) not in i_p]

    items.append(_catalog_item("g", "I_P is mapped into itself", fam, BOOL, test_g))
    return TheoremReport("t3", n, semiring.name, items)


def _set_equality_items(found: list[Matrix], expected: list[Matrix], searched: int, what: str) -> list[Item]:
    fs, es = set(found), set(expected)
    missing = sorted(es - fs, key=lambda m: repr(m.data))
    extra = sorted(fs - es, key=lambda m: repr(m.data))
    return [
        Item("if", _status(not missing), f"every {what} commutes", len(es), [{"A": m} for m in missing[:3]]),
        Item("only_if", _status(not extra), f"every commuting matrix is a {what}", searched,
             [{"A": m} for m in extra[:3]], details={"commutant_size": len(fs), "expected_size": len(es)}),
    ]


def proposition(pid: str, n: int, semiring: Semiring = BOOL, max_entry: int | None = None) -> TheoremReport:
    """Commutant characterizations of shift-commuting matrices."""
    elems = carrier(semiring, max_entry)
    dn, dc = shift_nilpotent(n, semiring), shift_cyclic(n, semiring)
    ut = Family("ut_toeplitz", n)
    if pid == "p2":
        space = Family("utm", n)
        found, expected, what = commutant(dn, space, semiring, max_entry=max_entry), ut.members(semiring, max_entry=max_entry), "form (1) matrix"
    elif pid == "p3":
        space = Family("toeplitz", n)
        found, expected, what = commutant(dn, space, semiring, max_entry=max_entry), ut.members(semiring, max_entry=max_entry), "form (1) matrix"
    elif pid == "p5":
        space = Family("all", n)
        found, expected, what = commutant(dc, space, semiring, max_entry=max_entry), Family("circulant", n).members(semiring, max_entry=max_entry), "circulant"
    elif pid == "p6":
        space = Family("circulant", n)
        found = commutant(dn, space, semiring, max_entry=max_entry)
        e = Matrix.identity(semiring, n)
        expected = list(dict.fromkeys(e.scale(a) for a in elems))
        what = "scalar multiple of E"
    else:
        raise SpecError(f"unknown proposition {pid!r}")
    searched = space.count(semiring, max_entry)
    return TheoremReport(pid, n, semiring.name, _set_equality_items(found, expected, searched, what))


SUITES = {"t1": theorem1, "t2": theorem2, "t3": theorem3}


def theorem_suite(tid: str, n: int, semiring: Semiring = BOOL, max_entry: int | None = None) -> TheoremReport:
    tid = tid.lower()
    if tid in SUITES:
        return SUITES[tid](n, semiring)
    if tid in ("p2", "p3", "p5", "p6"):
        return proposition(tid, n, semiring, max_entry)
    raise SpecError(f"unknown theorem id {tid!r}")
