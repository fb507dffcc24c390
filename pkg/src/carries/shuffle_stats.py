"""Carry moments, the riffle-shuffle descent generating function, and
seeded Monte Carlo checks of both.

Exact quantities stay :class:`~fractions.Fraction` throughout; floats
only appear in :class:`MomentReport`.

Random streams: sample ``m`` lives in block ``m // BLOCK_SIZE`` and every
block draws from its own generator keyed by ``(seed, block)``, so results
do not depend on how blocks are spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .carries_chain import carry_distribution, holte_matrix, matrix_power, stationary
from .combinatorics import IntPolynomial, Permutation, binomial
from .report import CheckReport, IdentityFailure, run_cases

BLOCK_SIZE = 1 << 16
Z_THRESHOLD = 4.0


# ---------------------------------------------------------------------------
# exact moments


def _need_n2(n):
    if n < 2:
        raise ValueError(f"moment formulas need n >= 2, got n={n}")


def _chain_cross_moment(n, b, start_law, r) -> Fraction:
    """E[X Y] where X ~ start_law and Y is r steps later."""
    mr = matrix_power(holte_matrix(n, b), r)
    return sum((i * j * start_law[i] * mr[i, j] for i in range(n) for j in range(n)), Fraction(0))


def exact_cov_stationary(n: int, b: int, r: int) -> Fraction:
    """Cov(kappa_0, kappa_r) from stationarity: (n+1) / (12 b^r).

    The value is also computed by summing over the exact chain and the two
    must agree.
    """
    _need_n2(n)
    if r < 1:
        raise ValueError("r must be >= 1")
    formula = Fraction(n + 1, 12 * b ** r)
    pi = stationary(n)
    chain = _chain_cross_moment(n, b, pi.mass, r) - pi.mean() ** 2
    if chain != formula:
        raise IdentityFailure(f"stationary covariance n={n} b={b} r={r}: formula {formula} != chain {chain}")
    return formula


def exact_moments_from_zero(n: int, b: int, r: int) -> tuple[Fraction, Fraction]:
    """Mean and variance of kappa_r started from carry 0."""
    _need_n2(n)
    if r < 0:
        raise ValueError("r must be >= 0")
    mean = (1 - Fraction(1, b ** r)) * Fraction(n - 1, 2)
    var = (1 - Fraction(1, b ** (2 * r))) * Fraction(n + 1, 12)
    law = carry_distribution(n, b, r)
    if (law.mean(), law.variance()) != (mean, var):
        raise IdentityFailure(f"moments n={n} b={b} r={r}: formula {(mean, var)} "
                              f"!= chain {(law.mean(), law.variance())}")
    return mean, var


def exact_cov_from_zero(n: int, b: int, s: int, r: int) -> Fraction:
    """Cov(kappa_s, kappa_{s+r}) started from carry 0."""
    _need_n2(n)
    if s < 0 or r < 1:
        raise ValueError("need s >= 0 and r >= 1")
    formula = Fraction(n + 1, 12 * b ** r) * (1 - Fraction(1, b ** (2 * s)))
    law_s = carry_distribution(n, b, s)
    law_sr = carry_distribution(n, b, s + r)
    chain = _chain_cross_moment(n, b, law_s.mass, r) - law_s.mean() * law_sr.mean()
    if chain != formula:
        raise IdentityFailure(f"covariance n={n} b={b} s={s} r={r}: formula {formula} != chain {chain}")
    return formula


def covariance_check(n: int, b: int, max_s: int = 5, max_r: int = 5) -> CheckReport:
    """Every moment formula against the chain, plus strict positivity."""

    def cases():
        for r in range(max_r + 1):
            idx = {"n": n, "b": b, "r": r}
            exact_moments_from_zero(n, b, r)
            yield dict(idx, identity="moments"), True, True
            if r == 0:
                continue
            yield dict(idx, identity="stationary-cov>0"), exact_cov_stationary(n, b, r) > 0, True
            for s in range(max_s + 1):
                cov = exact_cov_from_zero(n, b, s, r)
                if s >= 1:
                    yield dict(idx, s=s, identity="cov>0"), cov > 0, True

    try:
        return run_cases("covariance", cases())
    except IdentityFailure as exc:
        return CheckReport("covariance", False, 0, {"error": str(exc)})


# ---------------------------------------------------------------------------
# descent generating function


@dataclass(frozen=True)
class DescentGF:
    """Coefficients of t^0..t^n; coefficient of t^(d+1) is P(d descents)."""

    n: int
    a: int
    coeffs: tuple[Fraction, ...]

    def descent_probabilities(self) -> list[Fraction]:
        return list(self.coeffs[1:])


def descent_gf(n: int, b: int, r: int) -> DescentGF:
    """Descent law after a b^r riffle shuffle of n cards.

    The series over k >= 1 is cut at k = n+1; lower coefficients are
    unaffected because (1-t)^(n+1) t^k only reaches degrees >= k.
    """
    if n < 1 or b < 2 or r < 0:
        raise ValueError("need n >= 1, b >= 2, r >= 0")
    a = b ** r
    top = n + 1
    series = IntPolynomial(tuple([0] + [binomial(a * k + n - 1, n) for k in range(1, top + 1)]))
    factor = IntPolynomial((1, -1)) ** (n + 1)
    poly = (series * factor).truncate(top) * Fraction(1, a ** n)
    if poly.coefficient(0) != 0 or poly.coefficient(top) != 0:
        raise IdentityFailure(f"descent series for n={n} a={a} has mass outside t^1..t^n")
    coeffs = tuple(poly.coefficient(d) for d in range(n + 1))
    if sum(coeffs) != 1 or any(c < 0 for c in coeffs):
        raise IdentityFailure(f"descent series for n={n} a={a} is not a probability law")
    return DescentGF(n, a, coeffs)


def gf_carry_equivalence(n: int, b: int, r: int) -> CheckReport:
    gf = descent_gf(n, b, r).descent_probabilities()
    law = carry_distribution(n, b, r)
    cases = (({"n": n, "b": b, "r": r, "i": i}, gf[i], law[i]) for i in range(n))
    return run_cases("gf-carries", cases)


# ---------------------------------------------------------------------------
# samplers


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for block ``index`` of a run seeded with ``seed``."""
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def carries_of_sum(numbers: Sequence[int], b: int = 10, columns: int | None = None) -> list[int]:
    """Carries kappa_0..kappa_L of a column addition, rightmost column first.

    kappa_c is the carry into column c; the last entry is the carry out of
    the leftmost column.
    """
    if columns is None:
        columns = max(1, max(_digit_count(x, b) for x in numbers))
    carries = [0]
    for col in range(columns):
        total = carries[-1] + sum(x // b ** col % b for x in numbers)
        carries.append(total // b)
    return carries


def _digit_count(x, b):
    count = 0
    while x:
        x //= b
        count += 1
    return count


def carries_from_digits(digits: np.ndarray, b: int) -> np.ndarray:
    """Carries for digit array of shape (..., L, n), last axis the summands."""
    sums = digits.sum(axis=-1)
    out = np.zeros(sums.shape[:-1] + (sums.shape[-1] + 1,), dtype=np.int64)
    carry = np.zeros(sums.shape[:-1], dtype=np.int64)
    for col in range(sums.shape[-1]):
        carry = (carry + sums[..., col]) // b
        out[..., col + 1] = carry
    return out


def simulate_carries(n: int, b: int, L: int, rng: np.random.Generator) -> list[int]:
    """kappa_0..kappa_L for n random L-digit base-b numbers."""
    if L < 1:
        raise ValueError("L must be >= 1")
    digits = rng.integers(0, b, size=(L, n))
    return [int(c) for c in carries_from_digits(digits, b)]


def gsr_shuffle(n: int, a: int, rng: np.random.Generator) -> Permutation:
    """One GSR a-shuffle.

    Each card gets a uniform label in 0..a-1 and the deck is stably sorted
    by label.  The sorted sequence is an inverse a-shuffle; the returned
    permutation maps card i to its new position, which is the forward
    a-shuffle whose descents follow the generating function above.
    """
    if a < 1:
        raise ValueError("a must be >= 1")
    labels = rng.integers(0, a, size=(1, n))
    return Permutation(tuple(int(x) + 1 for x in _positions(labels)[0]))


def _positions(labels: np.ndarray) -> np.ndarray:
    order = np.argsort(labels, axis=1, kind="stable")
    pos = np.empty_like(order)
    np.put_along_axis(pos, order, np.arange(labels.shape[1])[None, :].repeat(len(labels), 0), axis=1)
    return pos


def gsr_descents(n: int, a: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Descent counts of ``size`` independent a-shuffles of n cards."""
    pos = _positions(rng.integers(0, a, size=(size, n)))
    return (pos[:, :-1] > pos[:, 1:]).sum(axis=1)


def _blocked(seed: int, total: int, per_unit: int, fn, workers: int = 1) -> list:
    """Run ``fn(rng, count)`` over fixed blocks, in block order."""
    unit_block = max(1, BLOCK_SIZE // per_unit)
    jobs = []
    start = 0
    index = 0
    while start < total:
        count = min(unit_block, total - start)
        jobs.append((index, count))
        start += count
        index += 1

    def run(job):
        idx, count = job
        return fn(stream(seed, idx), count)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(run, jobs))
    return [run(job) for job in jobs]


# ---------------------------------------------------------------------------
# reports


@dataclass
class SimulationConfig:
    n: int
    b: int
    r: int = 1
    samples: int = 100_000
    seed: int = 0
    s: int = 1
    L: int = 1000
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.n < 1 or self.b < 2 or self.r < 0 or self.s < 0 or self.L < 1:
            raise ValueError(f"invalid simulation config: {self}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass
class MomentReport:
    statistic: str
    estimate: float
    exact: Fraction
    std_error: float
    z_score: float
    params: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return abs(self.z_score) < Z_THRESHOLD

    def as_dict(self) -> dict:
        d = asdict(self)
        d["exact"] = self.exact
        return d


def _z(estimate: float, exact: Fraction, se: float) -> float:
    diff = estimate - float(exact)
    if se == 0:
        return 0.0 if diff == 0 else math.inf
    return diff / se


def _report(statistic, estimate, exact, se, **params) -> MomentReport:
    return MomentReport(statistic, float(estimate), Fraction(exact), float(se),
                        _z(float(estimate), Fraction(exact), float(se)), params)


def moment_comparison(config: SimulationConfig) -> list[MomentReport]:
    """E, Var of kappa_r and Cov(kappa_s, kappa_{s+r}) from replicated additions."""
    n, b, r, s = config.n, config.b, config.r, config.s
    _need_n2(n)
    length = max(r, s + r, 1)

    def job(rng, count):
        digits = rng.integers(0, b, size=(count, length, n))
        return carries_from_digits(digits, b)

    runs = np.concatenate(_blocked(config.seed, config.samples, length * n, job, config.workers))
    x = runs[:, r].astype(np.float64)
    n_samp = len(x)
    mean_exact, var_exact = exact_moments_from_zero(n, b, r)
    reports = [_report("mean", x.mean(), mean_exact, x.std(ddof=1) / math.sqrt(n_samp) if n_samp > 1 else 0.0,
                       n=n, b=b, r=r, samples=n_samp)]
    dev2 = (x - x.mean()) ** 2
    reports.append(_report("variance", x.var(ddof=1) if n_samp > 1 else 0.0, var_exact,
                           dev2.std(ddof=1) / math.sqrt(n_samp) if n_samp > 1 else 0.0,
                           n=n, b=b, r=r, samples=n_samp))
    if r >= 1 and n_samp > 1:
        xs = runs[:, s].astype(np.float64)
        ys = runs[:, s + r].astype(np.float64)
        cross = (xs - xs.mean()) * (ys - ys.mean())
        est = cross.sum() / (n_samp - 1)
        reports.append(_report("covariance", est, exact_cov_from_zero(n, b, s, r),
                               cross.std(ddof=1) / math.sqrt(n_samp), n=n, b=b, s=s, r=r, samples=n_samp))
    return reports


def transition_comparison(config: SimulationConfig) -> list[MomentReport]:
    """Empirical transition frequencies over ``samples`` columns against the exact matrix.

    Columns are grouped into independent chains of ``L`` columns each, all
    started from carry 0.
    """
    n, b, L = config.n, config.b, config.L
    chains = max(1, config.samples // L)

    def job(rng, count):
        digits = rng.integers(0, b, size=(count, L, n))
        kappa = carries_from_digits(digits, b)
        pairs = kappa[:, :-1] * n + kappa[:, 1:]
        return np.bincount(pairs.ravel(), minlength=n * n)

    counts = sum(_blocked(config.seed, chains, L * n, job, config.workers)).reshape(n, n)
    m = holte_matrix(n, b)
    reports = []
    for i in range(n):
        visits = int(counts[i].sum())
        for j in range(n):
            p = m[i, j]
            est = counts[i, j] / visits if visits else 0.0
            se = math.sqrt(float(p * (1 - p)) / visits) if visits else 0.0
            reports.append(_report("transition", est, p, se, n=n, b=b, i=i, j=j, visits=visits))
    return reports


def descent_comparison(config: SimulationConfig) -> list[MomentReport]:
    """Descent histogram of b^r-shuffles against the exact generating function."""
    n, a = config.n, config.b ** config.r

    def job(rng, count):
        return np.bincount(gsr_descents(n, a, count, rng), minlength=n)

    counts = sum(_blocked(config.seed, config.samples, n, job, config.workers))
    probs = descent_gf(n, config.b, config.r).descent_probabilities()
    total = config.samples
    reports = []
    for d in range(n):
        p = probs[d]
        se = math.sqrt(float(p * (1 - p)) / total)
        reports.append(_report("descents", counts[d] / total, p, se, n=n, a=a, d=d, samples=total))
    return reports


def default_battery(samples: int = 1_000_000, seed: int = 20100301) -> dict[str, list[MomentReport]]:
    """The pinned statistical acceptance battery."""
    return {
        "transitions n=3 b=10": transition_comparison(SimulationConfig(n=3, b=10, samples=samples, seed=seed)),
        "moments n=3 b=10 r=2 s=1": moment_comparison(
            SimulationConfig(n=3, b=10, r=2, s=1, samples=samples, seed=seed + 1)),
        "moments n=5 b=2 r=3 s=2": moment_comparison(
            SimulationConfig(n=5, b=2, r=3, s=2, samples=samples, seed=seed + 2)),
        "descents n=5 a=4": descent_comparison(SimulationConfig(n=5, b=2, r=2, samples=samples, seed=seed + 3)),
    }
