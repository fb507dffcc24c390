"""Holte's carries transition matrix and the quantities derived from it."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import linalg
from .combinatorics import binomial, eulerian


@dataclass(frozen=True)
class CarriesMatrix:
    """Transition matrix of the carries chain for n summands in base b.

    ``entries[i][j]`` is the chance that the next carry is j given the
    last carry was i.
    """

    n: int
    b: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i])


@dataclass(frozen=True)
class Distribution:
    """Exact probability law on the carry states 0..n-1."""

    mass: tuple[Fraction, ...]

    def __post_init__(self):
        mass = tuple(Fraction(p) for p in self.mass)
        if any(p < 0 for p in mass) or sum(mass) != 1:
            raise ValueError(f"not a probability vector: {mass}")
        object.__setattr__(self, "mass", mass)

    def __getitem__(self, i: int) -> Fraction:
        return self.mass[i]

    def __len__(self):
        return len(self.mass)

    def mean(self) -> Fraction:
        return sum((i * p for i, p in enumerate(self.mass)), Fraction(0))

    def variance(self) -> Fraction:
        mu = self.mean()
        return sum((i * i * p for i, p in enumerate(self.mass)), Fraction(0)) - mu * mu


def _validate(n: int, b: int):
    if n < 1:
        raise ValueError(f"need at least one summand, got n={n}")
    if b < 2:
        raise ValueError(f"base must be >= 2, got b={b}")


def _wrap(n, b, rows) -> CarriesMatrix:
    return CarriesMatrix(n, b, tuple(tuple(Fraction(x) for x in r) for r in rows))


@lru_cache(maxsize=256)
def holte_matrix(n: int, b: int) -> CarriesMatrix:
    """Exact carries matrix from Holte's closed form.

    When the upper limit ``j - i // b`` is negative the sum is empty and
    the entry is zero.
    """
    _validate(n, b)
    scale = b ** n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            total = 0
            for l in range(j - i // b + 1):
                total += (-1) ** l * binomial(n + 1, l) * binomial(n - 1 - i + (j + 1 - l) * b, n)
            row.append(Fraction(total, scale))
        rows.append(row)
    return _wrap(n, b, rows)


def matrix_power(m: CarriesMatrix, k: int) -> CarriesMatrix:
    if k < 0:
        raise ValueError("k must be >= 0")
    return _wrap(m.n, m.b, linalg.matpow(m.rows(), k))


def stationary(n: int) -> Distribution:
    """Eulerian law A(n, i)/n!; the same for every base."""
    if n < 1:
        raise ValueError("n must be >= 1")
    nf = factorial(n)
    return Distribution(tuple(Fraction(eulerian(n, i), nf) for i in range(n)))


def carry_distribution(n: int, b: int, r: int, start: int = 0) -> Distribution:
    """Law of the r-th carry, with the chain started at ``start``."""
    if r < 0:
        raise ValueError("r must be >= 0")
    m = holte_matrix(n, b)
    if not 0 <= start < n:
        raise ValueError(f"start state {start} outside 0..{n - 1}")
    v = [Fraction(int(s == start)) for s in range(n)]
    rows = m.rows()
    for _ in range(r):
        v = linalg.vecmat(v, rows)
    return Distribution(tuple(v))


def spectral_terms(n: int, b: int, k: int, i: int, j: int) -> list[Fraction]:
    """Per-eigenvalue summands of M^k(i, j); term a carries the factor b^(-a k)."""
    # eigenvector modules depend on this one for their own checks
    from .foulkes import left_eigen_matrix
    from .idempotents import right_eig_simple

    v = left_eigen_matrix(n)
    nf = factorial(n)
    terms = []
    for a in range(n):
        left = Fraction(v[a][j], nf)
        right = right_eig_simple(n, a, i)
        terms.append(Fraction(1, b ** (a * k)) * right * left)
    return terms


def spectral_entry(n: int, b: int, k: int, i: int, j: int) -> Fraction:
    """M^k(i, j) summed from the left/right eigenvector expansion."""
    _validate(n, b)
    return sum(spectral_terms(n, b, k, i, j), Fraction(0))


def tv_curve(n: int, b: int, kmax: int, start: int = 0) -> list[Fraction]:
    """Exact total variation distance to stationarity for k = 0..kmax."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    pi = stationary(n).mass
    rows = holte_matrix(n, b).rows()
    v = [Fraction(int(s == start)) for s in range(n)]
    out = []
    for k in range(kmax + 1):
        if k:
            v = linalg.vecmat(v, rows)
        out.append(sum((abs(x - p) for x, p in zip(v, pi)), Fraction(0)) / 2)
    return out


def tv_distance(n: int, b: int, k: int) -> Fraction:
    if k < 0:
        raise ValueError("k must be >= 0")
    return tv_curve(n, b, k)[-1]
