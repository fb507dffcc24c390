from fractions import Fraction
from itertools import permutations
from math import comb, factorial

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from carries import linalg
from carries.carries_chain import holte_matrix
from carries.combinatorics import CapExceededError, Permutation
from carries.idempotents import (
    GroupAlgebraElement,
    convolve,
    idempotency_check,
    idempotent_element,
    idempotent_values,
    right_eig_holte,
    right_eig_simple,
    right_eig_stirling,
    right_eigen_matrix,
    right_eigen_triple_check,
    symmetric_group,
    vu_duality,
)
from oracles import convolve_by_dict


def test_first_two_eigenvectors():
    for n in range(1, 9):
        assert all(right_eig_holte(n, 0, i) == 1 for i in range(n))
    for n in range(2, 9):
        assert all(right_eig_holte(n, 1, i) == n * (n - 1 - i) - comb(n, 2) for i in range(n))
    assert [right_eig_holte(3, 1, i) for i in range(3)] == [3, 0, -3]
    assert [right_eig_holte(2, 1, i) for i in range(2)] == [1, -1]


def test_simple_form_n2():
    assert [right_eig_simple(2, 1, i) for i in range(2)] == [1, -1]


@pytest.mark.parametrize("n", range(1, 9))
def test_three_right_eigenvector_formulas(n):
    for j in range(n):
        for i in range(n):
            ref = right_eig_holte(n, j, i)
            assert right_eig_stirling(n, j, i) == ref
            assert right_eig_simple(n, j, i) == ref
    assert right_eigen_triple_check(n)


def test_last_eigenvector_against_nullspace():
    n, b = 3, 2
    m = sympy.Matrix(holte_matrix(n, b).rows())
    kernel = (m - sympy.Rational(1, b ** (n - 1)) * sympy.eye(n)).nullspace()
    assert len(kernel) == 1
    ours = [right_eig_simple(n, n - 1, i) for i in range(n)]
    ratio = Fraction(str(kernel[0][0])) / ours[0]
    assert [Fraction(str(x)) for x in kernel[0]] == [ratio * u for u in ours]
    # package nullspace agrees as well
    mine = linalg.nullspace([[x - (Fraction(1, 4) if i == j else 0) for j, x in enumerate(row)]
                             for i, row in enumerate(holte_matrix(n, b).rows())])
    assert len(mine) == 1
    assert [x * ours[-1] / mine[0][-1] for x in mine[0]] == ours


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("b", [2, 3, 10])
def test_right_eigenvectors(n, b):
    u = right_eigen_matrix(n)
    mu = linalg.matmul(holte_matrix(n, b).rows(), u)
    assert mu == linalg.matmul(u, linalg.diag([Fraction(1, b ** j) for j in range(n)]))


@pytest.mark.parametrize("n", range(3, 9))
def test_eigenvectors_are_polynomials_of_degree_j(n):
    for j in range(n - 1):
        col = [right_eig_holte(n, j, i) for i in range(n)]
        for _ in range(j + 1):
            col = [y - x for x, y in zip(col, col[1:])]
        assert all(c == 0 for c in col)


def test_idempotent_values_n2():
    e = idempotent_values(2)
    assert (e(1, 0), e(1, 1), e(2, 0), e(2, 1)) == (Fraction(1, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2))


@pytest.mark.parametrize("n", range(1, 9))
def test_idempotent_values_sum_and_bridge(n):
    e = idempotent_values(n)
    for d in range(n):
        assert sum(e(k, d) for k in range(1, n + 1)) == int(d == 0)
    for j in range(n):
        for i in range(n):
            assert factorial(n) * e(n - j, i) == right_eig_holte(n, j, i)


def test_e22_is_symmetriser():
    swap = Permutation((2, 1))
    assert idempotent_element(2, 2) == GroupAlgebraElement.from_dict(
        2, {Permutation.identity(2): Fraction(1, 2), swap: Fraction(1, 2)})
    assert idempotent_element(2, 1).to_dict() == {"12": "1/2", "21": "-1/2"}


@pytest.mark.parametrize("n", range(1, 7))
def test_descent_class_constancy(n):
    for k in range(1, n + 1):
        e = idempotent_element(n, k)
        assert len(e.coeffs) == factorial(n)
        by_class = {}
        for d, c in zip(symmetric_group(n).descents, e.coeffs):
            by_class.setdefault(int(d), set()).add(c)
        assert all(len(v) == 1 for v in by_class.values()) and len(by_class) == n


def test_e4_idempotent():
    for k in range(1, 5):
        e = idempotent_element(4, k)
        assert convolve(e, e) == e


def test_e31_e32_orthogonal():
    assert convolve(idempotent_element(3, 1), idempotent_element(3, 2)).is_zero()


@pytest.mark.parametrize("n", range(1, 7))
def test_idempotents_orthogonal_and_complete(n):
    assert idempotency_check(n)
    assert idempotency_check(n, sign_twisted=True)


@pytest.mark.slow
def test_idempotents_s7():
    assert idempotency_check(7)


def test_unit_is_neutral():
    a = idempotent_element(4, 2) + GroupAlgebraElement.from_dict(4, {"2413": 3})
    unit = GroupAlgebraElement.unit(4)
    assert unit * a == a == a * unit


def test_cap():
    with pytest.raises(CapExceededError, match="n <= 7"):
        idempotent_element(8, 1)
    with pytest.raises(CapExceededError):
        idempotent_element(5, 1, cap=4)


def test_mismatched_sizes():
    with pytest.raises(ValueError):
        convolve(GroupAlgebraElement.unit(3), GroupAlgebraElement.unit(4))


def _element(n, data):
    return GroupAlgebraElement.from_dict(n, {p: c for p, c in data.items()})


def _coeff_dict(n):
    keys = st.permutations(list(range(1, n + 1))).map(tuple)
    return st.dictionaries(keys, st.fractions(max_denominator=50, min_value=-20, max_value=20), max_size=12)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4]).flatmap(lambda n: st.tuples(st.just(n), _coeff_dict(n), _coeff_dict(n))))
def test_convolution_against_dictionary_oracle(case):
    n, a, b = case
    got = convolve(_element(n, a), _element(n, b))
    assert got == _element(n, convolve_by_dict(a, b))


@settings(max_examples=25, deadline=None)
@given(st.tuples(_coeff_dict(3), _coeff_dict(3), _coeff_dict(3)))
def test_convolution_associative(abc):
    a, b, c = (_element(3, x) for x in abc)
    assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))


def test_convolution_big_integers_take_exact_path():
    huge = 10 ** 30 + 7
    a = {(1, 2, 3): Fraction(huge, 3), (2, 3, 1): Fraction(-huge, 7)}
    b = {(3, 1, 2): huge, (2, 1, 3): Fraction(1, huge)}
    assert convolve(_element(3, a), _element(3, b)) == _element(3, convolve_by_dict(a, b))


def test_convolution_definition_via_inverse():
    # (a*b)(w) = sum_u a(u) b(u^-1 w)
    a = {p: Fraction(i + 1) for i, p in enumerate(permutations((1, 2, 3)))}
    b = {p: Fraction(1, i + 2) for i, p in enumerate(permutations((1, 2, 3)))}
    prod = convolve(_element(3, a), _element(3, b))
    for w in permutations((1, 2, 3)):
        wp = Permutation(w)
        expected = sum(a[u] * b[(Permutation(u).inverse() * wp).image] for u in a)
        assert prod[wp] == expected


def test_sign_map_is_multiplicative():
    e, f = idempotent_element(4, 2), idempotent_element(4, 3) + GroupAlgebraElement.from_dict(4, {"1342": 1})
    assert convolve(e, f).sign_map() == convolve(e.sign_map(), f.sign_map())


@pytest.mark.parametrize("n", range(1, 9))
def test_vu_duality(n):
    assert vu_duality(n)


def test_vu_corner_n5():
    from carries.foulkes import left_eigen_matrix
    vu = linalg.matmul(left_eigen_matrix(5), right_eigen_matrix(5))
    assert vu[0][0] == 120
    assert linalg.matmul(left_eigen_matrix(1), right_eigen_matrix(1)) == [[factorial(1)]]
