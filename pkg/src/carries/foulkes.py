"""Foulkes character tables and their identities.

``chi(n, k, j)`` is the value of the k-th Foulkes character of S_n on a
permutation with j cycles (k = 0..n-1, j = 1..n).  Three constructions
are provided and kept independent of each other: the row recurrence, an
alternating power sum, and Foulkes' Eulerian-number sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

from . import linalg
from .carries_chain import holte_matrix
from .combinatorics import all_permutations, binomial, descent_count, eulerian
from .report import CheckReport, run_cases


@dataclass(frozen=True)
class FoulkesTable:
    """Integer table keyed by (k, j); out-of-range keys read as 0."""

    n: int
    values: dict[tuple[int, int], int]

    def __getitem__(self, kj: tuple[int, int]) -> int:
        return self.values.get(kj, 0)

    def display_rows(self) -> list[list[int]]:
        """Rows k = 0..n-1, columns j = n..1 (the usual printed layout)."""
        return [[self[k, j] for j in range(self.n, 0, -1)] for k in range(self.n)]

    def ascending_rows(self) -> list[list[int]]:
        return [[self[k, j] for j in range(1, self.n + 1)] for k in range(self.n)]

    def __eq__(self, other):
        return isinstance(other, FoulkesTable) and self.n == other.n and self.values == other.values

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.values.items()))))


@lru_cache(maxsize=None)
def _recursive_values(n: int) -> dict[tuple[int, int], int]:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return {(0, 1): 1}
    prev = _recursive_values(n - 1)
    vals = {}
    for k in range(n):
        for j in range(1, n + 1):
            if j == n:
                vals[k, j] = eulerian(n, k)
            elif k == 0:
                vals[k, j] = (-1) ** (n - j)
            else:
                vals[k, j] = prev.get((k - 1, j), 0) - prev.get((k, j), 0)
    return vals


def foulkes_table_recursive(n: int) -> FoulkesTable:
    return FoulkesTable(n, dict(_recursive_values(n)))


def _check_args(n, k, j):
    if not (0 <= k <= n - 1 and 1 <= j <= n):
        raise ValueError(f"need 0 <= k <= n-1 and 1 <= j <= n, got n={n} k={k} j={j}")


def foulkes_closed(n: int, k: int, j: int) -> int:
    """Alternating power sum over r of C(n+1, r) (n-k-r)^j."""
    _check_args(n, k, j)
    return sum((-1) ** r * binomial(n + 1, r) * (n - k - r) ** j for r in range(n - k + 1))


def foulkes_alt_closed(n: int, k: int, j: int) -> int:
    """Foulkes' own sum of Eulerian numbers A(j, k+j+r-n)."""
    _check_args(n, k, j)
    return sum((-1) ** r * binomial(n - j, r) * eulerian(j, k + j + r - n) for r in range(n - j + 1))


def foulkes_table(n: int, method: str = "recursive") -> FoulkesTable:
    if method == "recursive":
        return foulkes_table_recursive(n)
    formula = {"closed": foulkes_closed, "alt": foulkes_alt_closed}[method]
    return FoulkesTable(n, {(k, j): formula(n, k, j) for k in range(n) for j in range(1, n + 1)})


def holte_left_eigen(n: int, i: int, j: int) -> int:
    """Holte's closed form for entry j of the i-th left eigenvector."""
    return sum((-1) ** r * binomial(n + 1, r) * (j + 1 - r) ** (n - i) for r in range(j + 2))


def left_eigen_matrix(n: int) -> list[list[int]]:
    """V[i][j] = chi^{n, n-j-1} on n-i cycles; row i has eigenvalue b^-i."""
    t = foulkes_table_recursive(n)
    return [[t[n - j - 1, n - i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# identity checks


def triple_agreement(n: int) -> CheckReport:
    rec = foulkes_table_recursive(n)
    cases = (
        ({"n": n, "k": k, "j": j, "route": route}, rec[k, j], f(n, k, j))
        for k in range(n) for j in range(1, n + 1)
        for route, f in (("closed", foulkes_closed), ("alt", foulkes_alt_closed))
    )
    return run_cases("foulkes-triple-agreement", cases)


def left_eigen_check(n: int, b: int) -> CheckReport:
    """V M = diag(b^-i) V exactly, and V agrees with Holte's closed form."""
    v = left_eigen_matrix(n)
    m = holte_matrix(n, b).rows()
    vm = linalg.matmul(v, m)
    holte_cases = (
        ({"n": n, "i": i, "j": j, "identity": "holte-closed-form"}, v[i][j], holte_left_eigen(n, i, j))
        for i in range(n) for j in range(n)
    )
    eigen_cases = (
        ({"n": n, "b": b, "i": i, "j": j, "identity": "left-eigen"}, vm[i][j], Fraction(v[i][j], b ** i))
        for i in range(n) for j in range(n)
    )
    first = run_cases("left-eigenvectors", holte_cases)
    if not first:
        return first
    second = run_cases("left-eigenvectors", eigen_cases)
    second.cases += first.cases
    return second


def branching_check(n: int) -> CheckReport:
    """Restriction to S_{n-1}: chi^{n,k}_j = (k+1) chi^{n-1,k}_{j-1} + (n-k) chi^{n-1,k-1}_{j-1}."""
    if n < 2:
        raise ValueError("branching needs n >= 2")
    big = foulkes_table_recursive(n)
    small = foulkes_table_recursive(n - 1)
    cases = (
        ({"n": n, "k": k, "j": j}, big[k, j], (k + 1) * small[k, j - 1] + (n - k) * small[k - 1, j - 1])
        for k in range(n) for j in range(2, n + 1)
    )
    return run_cases("branching", cases)


def regular_character_check(n: int) -> CheckReport:
    t = foulkes_table_recursive(n)
    cases = (
        ({"n": n, "j": j}, sum(t[k, j] for k in range(n)), factorial(n) if j == n else 0)
        for j in range(1, n + 1)
    )
    return run_cases("regular-character", cases)


def table_determinant(n: int) -> int:
    """Signed determinant of the table in display layout (rows k up, columns j down)."""
    return linalg.determinant(foulkes_table_recursive(n).display_rows())


def superfactorial(n: int) -> int:
    """n! (n-1)! ... 2!"""
    return prod(factorial(m) for m in range(2, n + 1))


def determinant_check(n: int) -> CheckReport:
    t = foulkes_table_recursive(n)
    det_display = linalg.determinant(t.display_rows())
    det_ascending = linalg.determinant(t.ascending_rows())
    info = {"det_display_layout": det_display, "det_ascending_j": det_ascending,
            "superfactorial": superfactorial(n)}
    return run_cases("determinant", [({"n": n}, abs(det_display), superfactorial(n))], info)


def permutation_character_check(n: int, m: int) -> CheckReport:
    """M^j = sum_k C(M+k, n) chi^{n,k}_j for every cycle count j."""
    if m < 1:
        raise ValueError("M must be >= 1")
    t = foulkes_table_recursive(n)
    cases = (
        ({"n": n, "M": m, "j": j}, m ** j, sum(binomial(m + k, n) * t[k, j] for k in range(n)))
        for j in range(1, n + 1)
    )
    return run_cases("permutation-character", cases)


def dimension_check(n: int, cap: int | None = None) -> CheckReport:
    """Table column j = n against a census of descents over S_n."""
    census = [0] * n
    for p in all_permutations(n, cap=cap):
        census[descent_count(p)] += 1
    t = foulkes_table_recursive(n)
    cases = []
    for k in range(n):
        cases.append(({"n": n, "k": k, "route": "eulerian"}, t[k, n], eulerian(n, k)))
        cases.append(({"n": n, "k": k, "route": "census"}, t[k, n], census[k]))
    return run_cases("dimension", cases)
