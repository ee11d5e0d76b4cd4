import itertools

import pytest

from semideriv.derivations import toeplitz_corner, toeplitz_strip, verify_derivation
from semideriv.families import Family
from semideriv.matrix import Matrix, mat_power, shift_cyclic, shift_nilpotent, unit
from semideriv.report import CapabilityError, SpecError
from semideriv.semiring import BOOL, NAT, chain
from semideriv.structure import (
    FiniteSemiring,
    additive_bool_maps,
    center_elements,
    commutant,
    derivation_semiring,
    family_semiring,
    ideal_closure,
    ideals,
    is_ideal,
    is_k_maximal,
    is_maximal,
    larger_proper_ideal,
    maximal_ideals,
    minimal_nonzero_ideals,
    pattern_semiring,
    theorem_suite,
    units,
)


def brute_ideals(s: FiniteSemiring):
    """Every subset tested directly against the ideal axioms."""
    size = len(s)
    out = []
    for bits in itertools.product((0, 1), repeat=size):
        sub = frozenset(i for i, b in enumerate(bits) if b)
        if sub and all(s.add[x][y] in sub for x in sub for y in sub) and all(
            s.mul[r][x] in sub and s.mul[x][r] in sub for x in sub for r in range(size)
        ):
            out.append(sub)
    return sorted(out, key=lambda i: (len(i), sorted(i)))


@pytest.mark.parametrize("kind, n", [("diag", 2), ("diag", 3), ("ut_toeplitz", 3), ("circulant", 3)])
def test_ideal_search_matches_subset_brute_force(kind, n):
    ps = pattern_semiring(kind, n)
    assert ideals(ps) == brute_ideals(ps)


def test_diag2_derivation_ideals():
    ds = derivation_semiring("diag", 2)
    found = [set(ds.label_set(i)) for i in ideals(ds)]
    assert found == [
        {"delta[0]"},
        {"delta[0]", "delta[E11]"},
        {"delta[0]", "delta[E00]"},
        {"delta[0]", "delta[E00]", "delta[E11]", "delta[E00+E11]"},
    ]
    assert sorted(sorted(ds.label_set(m)) for m in minimal_nonzero_ideals(ds)) == [
        ["delta[0]", "delta[E00]"], ["delta[0]", "delta[E11]"]
    ]
    assert len(maximal_ideals(ds)) == 2


@pytest.mark.parametrize("kind, n", [("diag", 3), ("ut_toeplitz", 4), ("circulant", 4)])
def test_derivation_semiring_isomorphic_to_patterns(kind, n):
    iso = derivation_semiring(kind, n).extra["iso"]
    assert iso == {"injective": True, "add_preserved": True, "mul_preserved": True, "size": 2**n}


def test_derivation_semiring_over_chain():
    assert derivation_semiring("circulant", 3, chain(2)).extra["iso"]["injective"]


def test_derivation_semiring_refuses_nat():
    with pytest.raises(CapabilityError):
        derivation_semiring("diag", 2, NAT)


def test_pattern_semiring_rejects_other_families():
    with pytest.raises(SpecError):
        pattern_semiring("utm", 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_circulant_units_cyclic(n):
    ps = pattern_semiring("circulant", n)
    u = units(ps)
    expected = {ps.index(mat_power(shift_cyclic(n), k)) for k in range(n)}
    assert set(u.elements) == expected and u.order == n and u.cyclic
    assert ps.index(shift_cyclic(n)) in u.generators


def test_ut_toeplitz_only_unit_is_identity():
    ps = pattern_semiring("ut_toeplitz", 4)
    assert units(ps).elements == [ps.one]


def test_center_of_commutative_pattern_semiring():
    ps = pattern_semiring("circulant", 3)
    assert center_elements(ps) == list(range(len(ps)))
    ut = family_semiring(Family("utm", 2), BOOL)
    assert len(center_elements(ut)) < len(ut)


def test_maximality_and_k_maximality():
    ut = family_semiring(Family("ut_toeplitz", 3), BOOL)
    i_d = frozenset(i for i, m in enumerate(ut.elements) if m[0, 0] == 0)
    assert is_ideal(ut, i_d)
    assert not is_maximal(ut, i_d)
    bigger = larger_proper_ideal(ut, i_d)
    assert bigger > i_d and ut.one not in bigger
    assert is_k_maximal(ut, i_d)
    assert is_maximal(ut, frozenset(range(len(ut))) - {ut.one})


def test_ideal_closure_contains_zero():
    ps = pattern_semiring("diag", 2)
    assert ideal_closure(ps, ()) == frozenset({ps.zero})


def test_commutant_counts():
    assert len(commutant(shift_nilpotent(3), Family("utm", 3))) == 8
    assert len(commutant(shift_nilpotent(3), Family("toeplitz", 3))) == 8
    assert len(commutant(shift_cyclic(3), Family("all", 3))) == 8
    assert commutant(shift_nilpotent(3), Family("circulant", 3)) == [Matrix.zeros(BOOL, 3), Matrix.identity(BOOL, 3)]
    assert len(commutant(shift_cyclic(2), Family("all", 2))) == 4


def test_brute_force_maps_include_constructions():
    fam = Family("ut_toeplitz", 3)
    found = additive_bool_maps(fam)
    members = fam.members(BOOL)
    sigs = {tuple(d.map(a) for a in members) for d in found}
    for d in (toeplitz_strip(3), toeplitz_corner(3)):
        assert tuple(d.map(a) for a in members) in sigs
    for d in found:
        assert verify_derivation(d, BOOL).passed
    assert additive_bool_maps(Family("ut_toeplitz", 5)) is None


def test_brute_force_diag2_count():
    # derivations of Diag_2(bool): d(E_ii) must lie under E_ii, so 2 * 2 choices
    assert len(additive_bool_maps(Family("diag", 2))) == 4


def test_t1_all_items():
    rep = theorem_suite("t1", 3)
    assert [it.item for it in rep.items] == list("abcdefg")
    assert all(it.status == "verified" for it in rep.items[:6])
    assert rep.item("g").status == "catalog-scope"
    assert rep.refuted() == []


def test_t2_items():
    rep = theorem_suite("t2", 4)
    b = rep.item("b")
    assert b.status == "verified" and b.checked == 3
    assert b.details["non_idempotent_when_2k_le_n_minus_1"][0]["X"] == "delta[E+D]"
    assert rep.item("c").status == "verified" and rep.item("c").checked == 16
    f = rep.item("f")
    assert f.status == "refuted" and f.details["ideal"] and f.details["derived"]["status"] == "verified"
    assert rep.item("g").status == "catalog-scope"
    assert rep.refuted() == ["f"]


@pytest.mark.parametrize("n", [3, 4])
def test_t3_items(n):
    rep = theorem_suite("t3", n)
    b = rep.item("b")
    assert b.status == "refuted" and b.known
    assert [w["X"] for w in b.witnesses[:2]] == ["delta[E]", "delta[0]"]
    assert b.details["derived"]["status"] == "verified"
    d = rep.item("d")
    assert d.status == "refuted" and d.details["sum_zero_part"] == "verified"
    assert rep.item("e").status == "verified"
    assert rep.item("f").status == "verified"
    assert rep.item("g").status == "catalog-scope"
    assert rep.refuted() == []


@pytest.mark.parametrize("pid", ["p2", "p3", "p5", "p6"])
def test_propositions(pid):
    rep = theorem_suite(pid, 3)
    assert all(it.status == "verified" for it in rep.items)


def test_proposition_over_chain():
    assert all(it.status == "verified" for it in theorem_suite("p5", 3, chain(2)).items)


def test_unknown_theorem():
    with pytest.raises(SpecError):
        theorem_suite("t4", 3)


def test_theorem_refuses_infinite_carrier():
    with pytest.raises(CapabilityError):
        theorem_suite("t1", 2, NAT)


def test_report_json_shape():
    doc = theorem_suite("t1", 2).to_json()
    assert set(doc) == {"theorem", "n", "semiring", "items"}
    assert {"item", "status", "witnesses"} <= set(doc["items"][0])
    assert unit(2, 0, 0).to_json() == [[1, 0], [0, 0]]


@pytest.mark.parametrize("pid", ["p5", "p6"])
def test_propositions_over_bounded_nat(pid):
    rep = theorem_suite(pid, 3, NAT, max_entry=2)
    assert all(it.status == "verified" for it in rep.items)
