"""Exact scalars and the combinatorial primitives used everywhere else.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator).  Permutations are 1-based one-line tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Iterator, Sequence

ExactRational = Fraction

#: largest n for which ``all_permutations`` will enumerate S_n by default
BRUTE_FORCE_CAP = 8


class CapExceededError(ValueError):
    """Raised when an exhaustive computation is asked for beyond its cap."""


def binomial(m: int, n: int) -> int:
    """Combinatorial binomial C(m, n); zero whenever m < n (also for m < 0)."""
    if n < 0:
        raise ValueError(f"binomial lower index must be >= 0, got {n}")
    if m < n:
        return 0
    return comb(m, n)


# ---------------------------------------------------------------------------
# polynomials with rational coefficients


@dataclass(frozen=True)
class IntPolynomial:
    """Dense polynomial in one formal variable; ``coeffs[d]`` multiplies x^d.

    Coefficients are exact rationals.  The highest stored coefficient is
    nonzero unless the polynomial is zero (stored as an empty tuple).
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, c) -> IntPolynomial:
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c=1) -> IntPolynomial:
        return cls((0,) * degree + (c,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def coefficient(self, d: int) -> Fraction:
        if 0 <= d < len(self.coeffs):
            return self.coeffs[d]
        return Fraction(0)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        size = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self.coefficient(d) + other.coefficient(d) for d in range(size)))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other) -> IntPolynomial:
        if not isinstance(other, IntPolynomial):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPolynomial:
        out = IntPolynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def truncate(self, max_degree: int) -> IntPolynomial:
        return IntPolynomial(self.coeffs[: max_degree + 1])

    def __repr__(self):
        if not self.coeffs:
            return "IntPolynomial(0)"
        terms = [f"{c}*x^{d}" for d, c in enumerate(self.coeffs) if c]
        return "IntPolynomial(" + " + ".join(terms) + ")"


def falling_binomial_poly(shift: int, n: int) -> IntPolynomial:
    """The polynomial (x+shift)(x+shift-1)...(x+shift-n+1) / n! in x.

    This is the binomial C(x+shift, n) viewed as a polynomial, so it is
    generally nonzero at arguments where :func:`binomial` returns 0.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    poly = IntPolynomial.constant(1)
    for t in range(n):
        poly = poly * IntPolynomial((shift - t, 1))
    return poly * Fraction(1, factorial(n))


# ---------------------------------------------------------------------------
# Stirling and Eulerian numbers


@lru_cache(maxsize=None)
def stirling_first(n: int, k: int) -> int:
    """Signed Stirling number of the first kind s(n, k)."""
    if n < 0 or k < 0:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0 or k > n:
        return 0
    return stirling_first(n - 1, k - 1) - (n - 1) * stirling_first(n - 1, k)


@lru_cache(maxsize=None)
def eulerian(n: int, k: int) -> int:
    """Eulerian number A(n, k): permutations of [n] with k descents."""
    if n < 1:
        raise ValueError(f"eulerian needs n >= 1, got {n}")
    if k < 0 or k > n - 1:
        return 0
    if n == 1:
        return 1
    return (k + 1) * eulerian(n - 1, k) + (n - k) * eulerian(n - 1, k - 1)


def eulerian_row(n: int) -> list[int]:
    return [eulerian(n, k) for k in range(n)]


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n} in one-line notation.

    Products read left to right: ``p * q`` applies ``p`` first, then ``q``,
    so ``(p * q)(i) == q(p(i))``.
    """

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise ValueError(f"not a permutation of 1..{len(image)}: {image}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Parse ``"4512376"`` (n <= 9) or ``"4,5,1,2,3,7,6"``."""
        text = text.strip()
        parts = text.split(",") if "," in text else list(text)
        return cls(tuple(int(p) for p in parts))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for pos, val in enumerate(self.image, start=1):
            inv[val - 1] = pos
        return Permutation(tuple(inv))

    def descent_set(self) -> frozenset[int]:
        return descent_set(self)

    def descent_count(self) -> int:
        return descent_count(self)

    def cycle_count(self) -> int:
        seen = [False] * self.n
        cycles = 0
        for start in range(self.n):
            if not seen[start]:
                cycles += 1
                i = start
                while not seen[i]:
                    seen[i] = True
                    i = self.image[i] - 1
        return cycles

    def sign(self) -> int:
        return -1 if (self.n - self.cycle_count()) % 2 else 1

    def __str__(self):
        sep = "" if self.n <= 9 else ","
        return sep.join(map(str, self.image))


def _image(p) -> Sequence[int]:
    return p.image if isinstance(p, Permutation) else p


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Left-to-right product: apply ``p`` then ``q``."""
    if p.n != q.n:
        raise ValueError("cannot compose permutations of different sizes")
    return Permutation(tuple(q.image[v - 1] for v in p.image))


def descent_set(p) -> frozenset[int]:
    """Positions i (1-based) with p(i) > p(i+1)."""
    img = _image(p)
    return frozenset(i + 1 for i in range(len(img) - 1) if img[i] > img[i + 1])


def descent_count(p) -> int:
    img = _image(p)
    return sum(1 for i in range(len(img) - 1) if img[i] > img[i + 1])


def all_permutations(n: int, cap: int | None = None) -> Iterator[Permutation]:
    """Every permutation of [n] exactly once, in lexicographic order."""
    cap = BRUTE_FORCE_CAP if cap is None else cap
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > cap:
        raise CapExceededError(
            f"refusing to enumerate S_{n}: brute-force limit is n <= {cap} "
            f"(pass cap= to override)")
    for img in itertools.permutations(range(1, n + 1)):
        yield Permutation(img)


def rank_permutation(p) -> int:
    """Lexicographic rank of ``p`` in S_n via its factorial-base (Lehmer) digits."""
    img = list(_image(p))
    n = len(img)
    rank = 0
    for i, v in enumerate(img):
        smaller = sum(1 for w in img[i + 1:] if w < v)
        rank += smaller * factorial(n - 1 - i)
    return rank


def unrank_permutation(rank: int, n: int) -> Permutation:
    if not 0 <= rank < factorial(n):
        raise ValueError(f"rank {rank} out of range for S_{n}")
    pool = list(range(1, n + 1))
    out = []
    for i in range(n - 1, -1, -1):
        digit, rank = divmod(rank, factorial(i))
        out.append(pool.pop(digit))
    return Permutation(tuple(out))


def distribution_moments(mass: Iterable[Fraction]) -> tuple[Fraction, Fraction]:
    """Mean and variance of a law on {0, 1, 2, ...}."""
    mass = list(mass)
    mean = sum((i * p for i, p in enumerate(mass)), Fraction(0))
    second = sum((i * i * p for i, p in enumerate(mass)), Fraction(0))
    return mean, second - mean * mean
