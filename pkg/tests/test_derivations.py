import itertools

import pytest

from semideriv.derivations import (
    Derivation,
    classify,
    example2,
    example4_strip,
    example5_delta1,
    example6,
    example7,
    find_leibniz_counterexample,
    make_hereditary,
    make_inner,
    parse_derivation,
    prop4_tail,
    toeplitz_corner_displayed,
    verify_derivation,
)
from semideriv.families import Family
from semideriv.matrix import Matrix, mat_power, shift_cyclic, shift_nilpotent, unit
from semideriv.report import CapabilityError, NotCentralError, SpecError
from semideriv.semiring import (
    BOOL,
    NAT,
    NATPOLY,
    POLY_DERIVATIVE,
    chain,
    identity_base_derivation,
    zero_base_derivation,
)


def leibniz_oracle(f, members):
    """Independent exhaustive check: additivity and Leibniz on every pair."""
    for a, b in itertools.product(members, repeat=2):
        if f(a + b) != f(a) + f(b) or f(a @ b) != f(a) @ b + a @ f(b):
            return (a, b)
    return None


EXAMPLES = [
    ("example1", 3), ("example2", 3), ("example3", 3), ("strip-diag", 3), ("example5.delta1", 3),
    ("example5.delta2", 3), ("example6", 3), ("example7", 4), ("prop4:k=2", 4), ("toeplitz.d", 4),
    ("toeplitz.delta", 4),
]


@pytest.mark.parametrize("spec, n", EXAMPLES)
def test_constructions_pass_over_bool(spec, n):
    d = parse_derivation(spec, n, BOOL)
    rep = verify_derivation(d, BOOL)
    assert rep.passed, rep.to_json()
    assert leibniz_oracle(d.map, d.family.members(BOOL)) is None


@pytest.mark.parametrize("spec, n", [("example1", 3), ("example6", 3), ("strip-diag", 2), ("example3", 3)])
def test_constructions_pass_over_chain(spec, n):
    assert verify_derivation(parse_derivation(spec, n, chain(2)), chain(2)).passed


def test_example2_stronger_identities():
    d = example2(3)
    members = d.family.members(BOOL)
    for a, b in itertools.product(members, repeat=2):
        assert (d(a) @ b).is_zero()
        assert d(a @ b) == a @ d(b)


def test_example2_over_nat_bounded():
    # keeps a column block; needs no idempotency
    assert verify_derivation(example2(3), NAT, max_entry=1).passed


def test_delta1_over_nat_fails_with_identity_witness():
    rep = verify_derivation(example5_delta1(2), NAT, max_entry=2)
    assert not rep.passed
    assert rep.preconditions == [{"requires": "additively_idempotent", "satisfied": False}]
    w = rep.result("leibniz").witnesses[0]
    e = Matrix.identity(NAT, 2)
    assert w["A"] == e and w["B"] == e
    assert w["lhs"].rows() == [[1, 0], [0, 0]] and w["rhs"].rows() == [[2, 0], [0, 0]]


def test_strict_mode_raises():
    with pytest.raises(CapabilityError):
        verify_derivation(example5_delta1(2), NAT, max_entry=1, strict=True)


def test_delta2_over_nat_passes():
    assert verify_derivation(parse_derivation("example5.delta2", 2, NAT), NAT, max_entry=2).passed


def test_prop4_tail():
    assert verify_derivation(prop4_tail(4, 2), NAT, max_entry=2).passed
    rep = verify_derivation(prop4_tail(4, 3), NAT, max_entry=2)
    assert not rep.passed and rep.result("leibniz").witnesses
    assert verify_derivation(prop4_tail(4, 3), BOOL).passed


@pytest.mark.parametrize("spec, n", [("toeplitz.phi:from=2", 4), ("example5.phi:k=3", 3),
                                     ("toeplitz.delta-displayed", 4)])
def test_negative_maps_have_counterexamples(spec, n):
    d = parse_derivation(spec, n, BOOL)
    w = find_leibniz_counterexample(d, d.family, BOOL)
    assert w is not None
    assert d(w["A"] @ w["B"]) != d(w["A"]) @ w["B"] + w["A"] @ d(w["B"])


def test_displayed_corner_map_counterexample_d_d2():
    d = toeplitz_corner_displayed(4)
    dn = shift_nilpotent(4)
    a, b = dn, mat_power(dn, 2)
    assert d(a @ b) == unit(4, 0, 3)
    assert (d(a) @ b + a @ d(b)).is_zero()


def test_example5_phi_k2_is_derivation():
    assert verify_derivation(parse_derivation("example5.phi:k=2", 3, BOOL), BOOL).passed


def test_hereditary_polyderiv_sampled():
    d = make_hereditary(POLY_DERIVATIVE, 2)
    rep = verify_derivation(d, NATPOLY, mode="sampled", samples=200, seed=7)
    assert rep.passed
    assert rep.result("scalar_law").checked > 0
    assert rep.to_json() == verify_derivation(d, NATPOLY, mode="sampled", samples=200, seed=7).to_json()


def test_hereditary_identity_and_scalar_image():
    d = make_hereditary(identity_base_derivation(BOOL), 2)
    assert verify_derivation(d, BOOL).passed
    for s, base in ((BOOL, identity_base_derivation(BOOL)), (NATPOLY, POLY_DERIVATIVE)):
        e = Matrix.identity(s, 2)
        assert make_hereditary(base, 2)(e) == e.scale(base(s.one))


def test_hereditary_zero_over_nat():
    assert verify_derivation(make_hereditary(zero_base_derivation(NAT), 2), NAT, max_entry=2).passed


def test_inner_requires_centrality():
    with pytest.raises(NotCentralError) as exc:
        make_inner(Family("utm", 3), shift_nilpotent(3))
    w = exc.value.witness
    assert w["AX"] != w["XA"]
    assert verify_derivation(make_inner(Family("circulant", 3), shift_cyclic(3)), BOOL).passed


def test_inner_refused_over_nat():
    with pytest.raises(CapabilityError):
        make_inner(Family("diag", 2), Matrix.identity(NAT, 2))


def test_non_additive_map_fails_additivity():
    sq = Derivation("square", Family("diag", 2), lambda a: a @ a, "custom")
    rep = verify_derivation(sq, NAT, max_entry=2)
    assert not rep.result("additivity").passed


def test_map_leaving_family_is_caught():
    out = Derivation("escape", Family("diag", 2), lambda a: a + unit(2, 0, 1, a.semiring), "custom")
    assert not verify_derivation(out, BOOL).result("maps_into_family").passed


@pytest.mark.parametrize(
    "delta, kind, index",
    [
        (example6(3), "nilpotent", 2),
        (example7(4), "nilpotent", 2),
        (example4_strip(3), "idempotent", None),
        (make_inner(Family("circulant", 3), Matrix.identity(BOOL, 3) + shift_cyclic(3)), "neither", None),
    ],
)
def test_classify(delta, kind, index):
    c = classify(delta, BOOL)
    assert (c.kind, c.index) == (kind, index)


def test_classify_sampled_reports_bound():
    c = classify(example6(3), BOOL, mode="sampled", samples=50, seed=1)
    assert c.kind == "nilpotent" and c.index == 2


@pytest.mark.parametrize("spec", ["example5", "inner:E", "prop4", "nonsense", "example2:rows", "example3:keep=1"])
def test_parse_derivation_rejects(spec):
    with pytest.raises(SpecError):
        parse_derivation(spec, 3, BOOL)


def test_parse_derivation_uses_family_params():
    d = parse_derivation("prop4", 4, BOOL, Family("tail", 4, (2,)))
    assert d.params["k"] == 2
    d = parse_derivation("example2", 3, BOOL, Family("zero_rows", 3, (2,)))
    assert d.family.params == (2,)
    with pytest.raises(SpecError):
        parse_derivation("example1", 3, BOOL, Family("diag", 3))


def test_apply_checks_membership():
    from semideriv.report import NotMemberError

    with pytest.raises(NotMemberError):
        example6(3)(Matrix.identity(BOOL, 3) + unit(3, 1, 0))
