"""Brute-force reference computations, deliberately independent of the
package's closed forms."""

from fractions import Fraction
from itertools import permutations, product


def carries_matrix_by_enumeration(n, b):
    """Next-carry law from every digit tuple of one column."""
    counts = [[0] * n for _ in range(n)]
    for i in range(n):
        for digits in product(range(b), repeat=n):
            counts[i][(i + sum(digits)) // b] += 1
    return [[Fraction(c, b ** n) for c in row] for row in counts]


def cycles(perm):
    seen, count = set(), 0
    for s in range(len(perm)):
        if s not in seen:
            count += 1
            while s not in seen:
                seen.add(s)
                s = perm[s] - 1
    return count


def stirling_by_cycles(n, k):
    if n == 0:
        return int(k == 0)
    count = sum(1 for p in permutations(range(1, n + 1)) if cycles(p) == k)
    return (-1) ** (n - k) * count


def descents(seq):
    return sum(1 for x, y in zip(seq, seq[1:]) if x > y)


def gsr_descent_law(n, a):
    """Exact descent law of an a-shuffle by enumerating all a^n label vectors.

    The shuffled permutation sends card i to its position after a stable
    sort of the labels.
    """
    law = [Fraction(0)] * n
    for labels in product(range(a), repeat=n):
        order = sorted(range(n), key=lambda c: (labels[c], c))
        position = [0] * n
        for pos, card in enumerate(order):
            position[card] = pos
        law[descents(position)] += Fraction(1, a ** n)
    return law


def leibniz_det(m):
    n = len(m)
    total = 0
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        term = (-1) ** inv
        for i in range(n):
            term *= m[i][p[i]]
        total += term
    return total


def convolve_by_dict(a, b):
    """(a*b)(w) = sum over u*v = w, products read left to right (u first)."""
    out = {}
    for u, x in a.items():
        for v, y in b.items():
            w = tuple(v[k - 1] for k in u)
            out[w] = out.get(w, 0) + Fraction(x) * Fraction(y)
    return {w: c for w, c in out.items() if c}
