"""Right eigenvectors of the carries matrix and the descent-class idempotents
E_{n,k} of the symmetric group algebra.

Group algebra elements are dense coefficient vectors over S_n indexed by
lexicographic rank.  Products read left to right, ``(u*v)(i) = v(u(i))``,
and convolution is ``(a*b)(w) = sum_u a(u) b(u^-1 w)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import factorial, gcd
from typing import Mapping

import numpy as np

from . import linalg
from .carries_chain import holte_matrix
from .combinatorics import (
    CapExceededError,
    Permutation,
    binomial,
    falling_binomial_poly,
    stirling_first,
)
from .report import CheckReport, run_cases

#: largest n for which group algebra elements are built by default
GROUP_ALGEBRA_CAP = 7

# multiplication tables up to this group order are cached (S_7: ~50 MB)
_TABLE_CACHE_ORDER = 5040


# ---------------------------------------------------------------------------
# right eigenvectors


def _check_ij(n, j, i):
    if not (0 <= i <= n - 1 and 0 <= j <= n - 1):
        raise ValueError(f"need 0 <= i, j <= n-1, got n={n} i={i} j={j}")


def right_eig_holte(n: int, j: int, i: int) -> int:
    """Holte's Stirling-number sum for the j-th right eigenvector at state i."""
    _check_ij(n, j, i)
    lo = n - j
    return sum(stirling_first(n, k) * binomial(k, lo) * (n - 1 - i) ** (k - lo) for k in range(lo, n + 1))


def right_eig_stirling(n: int, j: int, i: int) -> Fraction:
    """n! * sum_k s(k, n-j)/k! * C(n-i-1, n-k)."""
    _check_ij(n, j, i)
    total = sum(
        (Fraction(stirling_first(k, n - j), factorial(k)) * binomial(n - i - 1, n - k) for k in range(n + 1)),
        Fraction(0),
    )
    return factorial(n) * total


def right_eig_simple(n: int, j: int, i: int) -> Fraction:
    """n! times the coefficient of x^(n-j) in the polynomial C(x+n-i-1, n)."""
    _check_ij(n, j, i)
    return factorial(n) * falling_binomial_poly(n - i - 1, n).coefficient(n - j)


def right_eigen_matrix(n: int, formula=right_eig_simple) -> list[list[Fraction]]:
    """U[i][j] = u_j(i); column j has eigenvalue b^-j."""
    return [[Fraction(formula(n, j, i)) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class IdempotentValueTable:
    """E(n, k, d): coefficient of E_{n,k} on any permutation with d descents."""

    n: int
    values: dict[tuple[int, int], Fraction]

    def __call__(self, k: int, d: int) -> Fraction:
        return self.values[k, d]


def idempotent_values(n: int) -> IdempotentValueTable:
    if n < 1:
        raise ValueError("n must be >= 1")
    vals = {}
    for d in range(n):
        poly = falling_binomial_poly(n - d - 1, n)
        for k in range(1, n + 1):
            vals[k, d] = poly.coefficient(k)
    return IdempotentValueTable(n, vals)


# ---------------------------------------------------------------------------
# symmetric group tables


class SymmetricGroup:
    """Enumeration of S_n with vectorised rank, product and descent tables."""

    def __init__(self, n: int):
        self.n = n
        self.order = factorial(n)
        self.perms = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64).reshape(self.order, n)
        self._weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
        self._lookup = np.full(n ** n, -1, dtype=np.int64)
        self._lookup[(self.perms - 1) @ self._weights] = np.arange(self.order)
        self.descents = (self.perms[:, :-1] > self.perms[:, 1:]).sum(axis=1)
        self.identity_index = 0
        self._table = None

    def rank_rows(self, rows: np.ndarray) -> np.ndarray:
        return self._lookup[(rows - 1) @ self._weights]

    def product_row(self, u: int) -> np.ndarray:
        """Ranks of u*v for every v (u applied first)."""
        return self.rank_rows(self.perms[:, self.perms[u] - 1])

    @property
    def table(self) -> np.ndarray | None:
        if self._table is None and self.order <= _TABLE_CACHE_ORDER:
            dtype = np.int16 if self.order < 2 ** 15 else np.int32
            self._table = np.stack([self.product_row(u) for u in range(self.order)]).astype(dtype)
        return self._table

    @property
    def signs(self) -> np.ndarray:
        # parity of inversion count
        p = self.perms
        inv = np.zeros(self.order, dtype=np.int64)
        for a in range(self.n):
            inv += (p[:, a:a + 1] > p[:, a + 1:]).sum(axis=1)
        return np.where(inv % 2, -1, 1)

    def permutation(self, index: int) -> Permutation:
        return Permutation(tuple(int(x) for x in self.perms[index]))

    def index(self, p: Permutation) -> int:
        return int(self.rank_rows(np.array([p.image], dtype=np.int64))[0])


@lru_cache(maxsize=8)
def symmetric_group(n: int) -> SymmetricGroup:
    if n < 1:
        raise ValueError("n must be >= 1")
    return SymmetricGroup(n)


# ---------------------------------------------------------------------------
# group algebra


def _common_denominator(values) -> int:
    return reduce(lambda acc, q: acc * q.denominator // gcd(acc, q.denominator), values, 1)


@dataclass(frozen=True, eq=False)
class GroupAlgebraElement:
    n: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != factorial(self.n):
            raise ValueError(f"need {factorial(self.n)} coefficients for S_{self.n}")

    @classmethod
    def zero(cls, n: int) -> GroupAlgebraElement:
        return cls(n, (Fraction(0),) * factorial(n))

    @classmethod
    def unit(cls, n: int) -> GroupAlgebraElement:
        return cls.from_dict(n, {Permutation.identity(n): 1})

    @classmethod
    def from_dict(cls, n: int, data: Mapping) -> GroupAlgebraElement:
        group = symmetric_group(n)
        coeffs = [Fraction(0)] * group.order
        for perm, c in data.items():
            if isinstance(perm, str):
                perm = Permutation.parse(perm)
            elif not isinstance(perm, Permutation):
                perm = Permutation(tuple(perm))
            coeffs[group.index(perm)] += Fraction(c)
        return cls(n, tuple(coeffs))

    def to_dict(self) -> dict[str, str]:
        """Nonzero coefficients as ``{one-line string: rational string}``."""
        group = symmetric_group(self.n)
        return {str(group.permutation(i)): str(c) for i, c in enumerate(self.coeffs) if c}

    def __getitem__(self, p: Permutation) -> Fraction:
        return self.coeffs[symmetric_group(self.n).index(p)]

    def support(self) -> list[Permutation]:
        group = symmetric_group(self.n)
        return [group.permutation(i) for i, c in enumerate(self.coeffs) if c]

    def _same(self, other):
        if not isinstance(other, GroupAlgebraElement) or other.n != self.n:
            raise ValueError("group algebra elements must live in the same S_n")

    def __add__(self, other):
        self._same(other)
        return GroupAlgebraElement(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._same(other)
        return GroupAlgebraElement(self.n, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> GroupAlgebraElement:
        c = Fraction(c)
        return GroupAlgebraElement(self.n, tuple(c * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return convolve(self, other)
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, GroupAlgebraElement) and self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def sign_map(self) -> GroupAlgebraElement:
        """Image under the automorphism w -> sign(w) w."""
        signs = symmetric_group(self.n).signs
        return GroupAlgebraElement(self.n, tuple(int(s) * c for s, c in zip(signs, self.coeffs)))


def _as_int_array(nums: list[int], bound: int) -> np.ndarray:
    if bound < 2 ** 62:
        return np.array(nums, dtype=np.int64)
    return np.array(nums, dtype=object)


def convolve(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    """Exact product in Q[S_n].

    Coefficients are cleared to integer numerators over a common
    denominator.  The inner loop runs in int64 when the worst-case partial
    sum provably fits, and on Python integers otherwise.
    """
    if a.n != b.n:
        raise ValueError(f"cannot convolve elements of S_{a.n} and S_{b.n}")
    group = symmetric_group(a.n)
    da = _common_denominator(a.coeffs)
    db = _common_denominator(b.coeffs)
    na = [int(c * da) for c in a.coeffs]
    nb = [int(c * db) for c in b.coeffs]
    max_a = max(map(abs, na), default=0)
    max_b = max(map(abs, nb), default=0)
    bound = max_a * max_b * group.order
    exact64 = bound < 2 ** 62
    vb = _as_int_array(nb, bound)
    out = np.zeros(group.order, dtype=np.int64 if exact64 else object)
    table = group.table
    for u in np.flatnonzero(np.array([x != 0 for x in na], dtype=bool)):
        row = table[u] if table is not None else group.product_row(u)
        # row is a bijection, so the scatter has no repeated targets
        out[row] += na[u] * vb
    denom = da * db
    return GroupAlgebraElement(a.n, tuple(Fraction(int(x), denom) for x in out))


def idempotent_element(n: int, k: int, cap: int | None = None) -> GroupAlgebraElement:
    """E_{n,k}: coefficient E(n, k, d(w)) on every w in S_n."""
    cap = GROUP_ALGEBRA_CAP if cap is None else cap
    if n > cap:
        raise CapExceededError(f"refusing to build S_{n} group algebra elements: limit is n <= {cap} "
                               f"(pass cap= to override)")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}")
    values = idempotent_values(n)
    group = symmetric_group(n)
    by_descents = [values(k, d) for d in range(n)]
    return GroupAlgebraElement(n, tuple(by_descents[int(d)] for d in group.descents))


# ---------------------------------------------------------------------------
# identity checks


def idempotency_check(n: int, sign_twisted: bool = False, cap: int | None = None) -> CheckReport:
    """E_k * E_l == delta_kl E_k for all k, l, and sum_k E_k == unit."""
    elems = [idempotent_element(n, k, cap=cap) for k in range(1, n + 1)]
    if sign_twisted:
        elems = [e.sign_map() for e in elems]
    zero = GroupAlgebraElement.zero(n)
    unit = GroupAlgebraElement.unit(n)

    def cases():
        for k, ek in enumerate(elems, start=1):
            for l, el in enumerate(elems, start=1):
                prod_kl = convolve(ek, el)
                expected = ek if k == l else zero
                ok = prod_kl == expected
                yield {"n": n, "k": k, "l": l}, ok, True
        total = reduce(lambda x, y: x + y, elems)
        yield {"n": n, "identity": "completeness"}, total == unit, True

    name = "idempotents-sign-twisted" if sign_twisted else "idempotents"
    return run_cases(name, cases())


def right_eigen_triple_check(n: int) -> CheckReport:
    """Holte's sum, the Stirling sum and coefficient extraction agree, and u = n! E."""
    values = idempotent_values(n)
    nf = factorial(n)

    def cases():
        for j in range(n):
            for i in range(n):
                ref = right_eig_holte(n, j, i)
                yield {"n": n, "j": j, "i": i, "route": "stirling"}, right_eig_stirling(n, j, i), ref
                yield {"n": n, "j": j, "i": i, "route": "coefficient"}, right_eig_simple(n, j, i), ref
                yield {"n": n, "j": j, "i": i, "route": "n!E"}, nf * values(n - j, i), ref

    return run_cases("right-eigenvectors", cases())


def vu_duality(n: int, bases=(2, 10)) -> CheckReport:
    """V U = n! I, and M U = U diag(b^-j) for each base."""
    from .foulkes import left_eigen_matrix

    v = left_eigen_matrix(n)
    u = right_eigen_matrix(n)
    vu = linalg.matmul(v, u)
    nf = factorial(n)

    def cases():
        for i in range(n):
            for j in range(n):
                yield {"n": n, "i": i, "j": j, "identity": "VU"}, vu[i][j], nf if i == j else 0
        for b in bases:
            mu = linalg.matmul(holte_matrix(n, b).rows(), u)
            for i in range(n):
                for j in range(n):
                    yield ({"n": n, "b": b, "i": i, "j": j, "identity": "MU"},
                           mu[i][j], u[i][j] / b ** j)

    return run_cases("vu-duality", cases())
