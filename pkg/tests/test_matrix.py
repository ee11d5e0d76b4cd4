import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semideriv import _pykernels, kernels
from semideriv.matrix import (
    Matrix,
    embed_pattern,
    enumerate_matrices,
    is_subpattern,
    mat_power,
    parse_matrix_literal,
    pattern,
    shift_cyclic,
    shift_nilpotent,
    unit,
)
from semideriv.report import BudgetExceeded, SpecError
from semideriv.semiring import BOOL, MAXPLUS_INT, NAT, NATPOLY, NEG_INF, PolyNat, chain


def naive_mul(a: Matrix, b: Matrix) -> list:
    """Textbook triple loop with the carrier's own operations."""
    s, n = a.semiring, a.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = s.zero
            for k in range(n):
                acc = s.add(acc, s.mul(a[i, k], b[k, j]))
            row.append(acc)
        out.append(row)
    return out


def _entries(semiring):
    if semiring is MAXPLUS_INT:
        return st.integers(-20, 20) | st.just(NEG_INF)
    if semiring is NAT:
        return st.integers(0, 30)
    if semiring is NATPOLY:
        return st.lists(st.integers(0, 4), max_size=3).map(lambda c: PolyNat(tuple(c)))
    return st.sampled_from(semiring.elements)


def matrices(semiring, n):
    return st.lists(_entries(semiring), min_size=n * n, max_size=n * n).map(lambda d: Matrix(semiring, n, d))


CARRIERS = [BOOL, chain(3), MAXPLUS_INT, NAT, NATPOLY]


@pytest.mark.parametrize("s", CARRIERS, ids=lambda s: s.name)
@settings(max_examples=60, deadline=None)
@given(data=st.data(), n=st.integers(1, 4))
def test_mul_matches_naive(s, data, n):
    a, b = data.draw(matrices(s, n)), data.draw(matrices(s, n))
    assert (a @ b).rows() == naive_mul(a, b)
    assert (a + b).rows() == [[s.add(a[i, j], b[i, j]) for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("s", CARRIERS, ids=lambda s: s.name)
@settings(max_examples=40, deadline=None)
@given(data=st.data(), n=st.integers(1, 4))
def test_generic_kernel_matches_specialized(s, data, n):
    a, b = data.draw(matrices(s, n)), data.draw(matrices(s, n))
    generic = _pykernels.matmul_generic(a.data, b.data, n, s.add, s.mul, s.zero)
    assert generic == (a @ b).data
    assert _pykernels.matadd_generic(a.data, b.data, s.add) == (a + b).data


@pytest.mark.skipif("cython" not in kernels.backends(), reason="compiled kernels not built")
@settings(max_examples=100, deadline=None)
@given(data=st.data(), n=st.integers(1, 6))
def test_backend_parity(data, n):
    c = kernels.backends()["cython"]
    mm = data.draw(st.lists(st.integers(0, 5), min_size=n * n, max_size=n * n).map(tuple))
    mm2 = data.draw(st.lists(st.integers(0, 5), min_size=n * n, max_size=n * n).map(tuple))
    assert c.matmul_maxmin(mm, mm2, n) == _pykernels.matmul_maxmin(mm, mm2, n)
    assert c.matadd_maxmin(mm, mm2) == _pykernels.matadd_maxmin(mm, mm2)
    assert c.matmul_sumprod(mm, mm2, n) == _pykernels.matmul_sumprod(mm, mm2, n)
    assert c.matadd_sumprod(mm, mm2) == _pykernels.matadd_sumprod(mm, mm2)
    mp = tuple(NEG_INF if x == 0 else x - 3 for x in mm)
    mp2 = tuple(NEG_INF if x == 5 else x for x in mm2)
    assert c.matmul_maxplus(mp, mp2, n, NEG_INF) == _pykernels.matmul_maxplus(mp, mp2, n, NEG_INF)
    assert c.matadd_maxplus(mp, mp2, NEG_INF) == _pykernels.matadd_maxplus(mp, mp2, NEG_INF)


def test_sumprod_big_ints_do_not_overflow():
    big = 10**30
    a = Matrix(NAT, 2, [big, big, 0, big])
    assert (a @ a)[0, 1] == 2 * big * big


@pytest.mark.parametrize("n", range(2, 9))
def test_shift_identities(n):
    d_nil, d_cyc = shift_nilpotent(n), shift_cyclic(n)
    assert mat_power(d_nil, n).is_zero()
    assert mat_power(d_nil, n - 1) == unit(n, 0, n - 1)
    assert mat_power(d_cyc, n) == Matrix.identity(BOOL, n)


def test_pattern_and_embed():
    m = Matrix.from_rows(MAXPLUS_INT, [[3, NEG_INF], [NEG_INF, 0]])
    assert pattern(m).rows() == [[1, 0], [0, 1]]
    assert embed_pattern(pattern(m), MAXPLUS_INT) == Matrix.identity(MAXPLUS_INT, 2)
    assert is_subpattern(unit(3, 0, 0), Matrix.identity(BOOL, 3))
    assert not is_subpattern(Matrix.identity(BOOL, 3), unit(3, 0, 0))


@pytest.mark.parametrize("s", [BOOL, chain(2)], ids=lambda s: s.name)
def test_pattern_is_homomorphism_exhaustive(s):
    for a, b in itertools.product(list(enumerate_matrices(s, 2)), repeat=2):
        assert pattern(a + b) == pattern(a) + pattern(b)
        assert pattern(a @ b) == pattern(a) @ pattern(b)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_pattern_homomorphism_sampled_maxplus(data):
    a, b = data.draw(matrices(MAXPLUS_INT, 3)), data.draw(matrices(MAXPLUS_INT, 3))
    assert pattern(a + b) == pattern(a) + pattern(b)
    assert pattern(a @ b) == pattern(a) @ pattern(b)


def test_enumeration_counts_and_budget():
    assert len(list(enumerate_matrices(BOOL, 2))) == 16
    assert len(list(enumerate_matrices(chain(2), 2))) == 81
    with pytest.raises(BudgetExceeded):
        enumerate_matrices(BOOL, 5, budget=1000)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("E", [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        ("D^2", [[0, 0, 1], [0, 0, 0], [0, 0, 0]]),
        ("E+d", [[1, 1, 0], [0, 1, 1], [1, 0, 1]]),
        ("E[0,2]", [[0, 0, 1], [0, 0, 0], [0, 0, 0]]),
        ("shift-nilpotent", [[0, 1, 0], [0, 0, 1], [0, 0, 0]]),
        ("zero", [[0, 0, 0], [0, 0, 0], [0, 0, 0]]),
        ("[[1,0,0],[0,0,0],[0,0,2]]", [[1, 0, 0], [0, 0, 0], [0, 0, 1]]),
    ],
)
def test_parse_matrix_literal(text, expected):
    assert parse_matrix_literal(text, 3).rows() == expected


@pytest.mark.parametrize("text", ["F", "E[3,0]", "D^", "[[1,0],[0,1]]", "[[1,"])
def test_parse_matrix_literal_rejects(text):
    with pytest.raises(SpecError):
        parse_matrix_literal(text, 3)


def test_mismatch_errors():
    with pytest.raises(SpecError):
        Matrix.identity(BOOL, 2) + Matrix.identity(BOOL, 3)
    with pytest.raises(SpecError):
        Matrix.identity(BOOL, 2) @ Matrix.identity(NAT, 2)
    with pytest.raises(SpecError):
        Matrix(BOOL, 2, [0, 1, 0])


def test_hash_and_json():
    a = Matrix.from_rows(MAXPLUS_INT, [[1, NEG_INF], [NEG_INF, 2]])
    assert a == Matrix.from_rows(MAXPLUS_INT, [[1, NEG_INF], [NEG_INF, 2]])
    assert len({a, Matrix.from_rows(MAXPLUS_INT, [[1, NEG_INF], [NEG_INF, 2]])}) == 1
    assert a.to_json() == [[1, None], [None, 2]]
    assert Matrix.zeros(NATPOLY, 1).to_json() == [[[]]]


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys

    code = "from semideriv import kernels, matrix, semiring; " \
           "m = matrix.shift_cyclic(3); print(kernels.BACKEND, (m @ m @ m) == matrix.Matrix.identity(semiring.BOOL, 3))"
    env = dict(os.environ, SEMIDERIV_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "True"]
