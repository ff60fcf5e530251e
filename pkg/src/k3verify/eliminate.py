"""Resultants, discriminants, and probabilistic polynomial-identity testing.

The resultant is defined as the determinant of the Sylvester matrix with the
rows of the first argument on top.  The default path is the subresultant
polynomial remainder sequence; when coefficient swell passes a term-count
threshold the computation falls back to a fraction-free Bareiss determinant of
the Sylvester matrix, which yields the identical value.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .wpoly import NotDivisibleError, WeightedPolynomial

PRS_TERM_THRESHOLD = 200_000


class BothConstantError(ValueError):
    """Both inputs are constant in the elimination variable."""


class DegreeTooLowError(ValueError):
    """Discriminants need degree at least 2 in the variable."""


@dataclass(frozen=True)
class PitConfig:
    trials: int = 100
    seed: int = 0
    sample_bound: int = 1_000_003

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.sample_bound < 2:
            raise ValueError("sample_bound must be >= 2")


@dataclass(frozen=True)
class PitVerdict:
    """Outcome of a randomized identity test."""

    equal: bool
    trials: int
    witness_point: tuple = None
    witness_value: Fraction = None
    per_trial_bound: Fraction = None

    def __bool__(self):
        return self.equal


_MASK = (1 << 64) - 1


def splitmix64(state: int) -> int:
    """One output of the splitmix64 generator for the given state."""
    z = (state + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def sample_point(cfg: PitConfig, trial: int, nvars: int):
    """Deterministic coordinates in [-B, B], one stream per trial index."""
    width = 2 * cfg.sample_bound + 1
    coords = []
    state = (cfg.seed + trial) & _MASK
    for i in range(nvars):
        value = splitmix64((state + 0x1000 * (i + 1)) & _MASK)
        coords.append(value % width - cfg.sample_bound)
    return tuple(coords)


# -- coefficient-list helpers (entries are WeightedPolynomials) ---------------


def _trim(coeffs):
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _lead(coeffs):
    return coeffs[-1]


def _prem(a, b, one):
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b."""
    da, db = len(a) - 1, len(b) - 1
    lb = _lead(b)
    r = list(a)
    e = da - db + 1
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        top = r[-1]
        r = [c * lb for c in r]
        for i, bc in enumerate(b):
            r[shift + i] = r[shift + i] - top * bc
        r.pop()
        r = _trim(r)
        e -= 1
    if e > 0:
        scale = lb ** e
        r = [c * scale for c in r]
    return r


def sylvester_matrix(f: WeightedPolynomial, g: WeightedPolynomial, var: str):
    """Sylvester matrix entries (f-rows first) as nested lists of polynomials."""
    a = f.univariate_view(var)
    b = g.univariate_view(var)
    m, n = len(a) - 1, len(b) - 1
    if m < 1 and n < 1:
        raise BothConstantError(f"both inputs constant in {var!r}")
    zero = WeightedPolynomial.zero(f.table)
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(a)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(b)):
            row[i + k] = c
        rows.append(row)
    return rows


def _bareiss_poly_det(rows, one):
    """Fraction-free determinant over the polynomial ring."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if piv is None:
                return one - one
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev)
            a[i][k] = one - one
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def resultant(
    f: WeightedPolynomial,
    g: WeightedPolynomial,
    var: str,
    method: str = "auto",
) -> WeightedPolynomial:
    """Resultant of f and g with respect to ``var``.

    Equals the Sylvester determinant with f-rows on top.  A constant operand is
    handled as lc(const)^deg(other); two constants raise BothConstantError.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial is undefined here")
    table = f.table
    one = WeightedPolynomial.constant(table, 1)
    zero = WeightedPolynomial.zero(table)
    a = f.univariate_view(var)
    b = g.univariate_view(var)
    m, n = len(a) - 1, len(b) - 1
    if m < 1 and n < 1:
        raise BothConstantError(f"both inputs constant in {var!r}")
    if m < 1:
        return a[0] ** n
    if n < 1:
        return b[0] ** m
    if method == "bareiss":
        return _bareiss_poly_det(sylvester_matrix(f, g, var), one)
    try:
        if method in ("auto", "prs"):
            guard = None if method == "prs" else PRS_TERM_THRESHOLD
            return _resultant_prs_guarded(a, b, one, zero, guard)
        raise ValueError(f"unknown method {method!r}")
    except _SwellExceeded:
        return _bareiss_poly_det(sylvester_matrix(f, g, var), one)


class _SwellExceeded(Exception):
    pass


def _resultant_prs_guarded(a, b, one, zero, guard):
    if guard is not None:
        total = sum(c.term_count() for c in a) + sum(c.term_count() for c in b)
        if total > guard:
            raise _SwellExceeded
    # re-run the plain PRS with an inline watch on intermediate sizes
    s = 1
    if len(a) - 1 < len(b) - 1:
        if (len(a) - 1) % 2 == 1 and (len(b) - 1) % 2 == 1:
            s = -s
        a, b = b, a
    g = one
    h = one
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            s = -s
        r = _prem(a, b, one)
        if guard is not None and sum(c.term_count() for c in r) > guard:
            raise _SwellExceeded
        a = b
        denom = g * h ** delta
        b = _trim([c.exact_div(denom) for c in r])
        if not b:
            return zero
        g = _lead(a)
        if delta == 1:
            h = g
        elif delta > 1:
            h = (g ** delta).exact_div(h ** (delta - 1))
        if len(b) - 1 == 0:
            break
    q = len(a) - 1
    if q == 1:
        res = b[0]
    else:
        res = (b[0] ** q).exact_div(h ** (q - 1))
    return res if s == 1 else -res


def discriminant(f: WeightedPolynomial, var: str, method: str = "auto") -> WeightedPolynomial:
    """(-1)^(n(n-1)/2) * res(f, df/dvar) / lc(f), with exact division."""
    coeffs = f.univariate_view(var)
    n = len(coeffs) - 1
    if n < 2:
        raise DegreeTooLowError(f"degree {n} in {var!r} is below 2")
    lc = coeffs[-1]
    res = resultant(f, f.derivative(var), var, method=method)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    quotient = res.exact_div(lc)
    return quotient if sign == 1 else -quotient


def pit_equal(f: WeightedPolynomial, g: WeightedPolynomial, cfg: PitConfig) -> PitVerdict:
    """Schwartz-Zippel identity test of f == g at cfg.trials random points."""
    diff = f - g
    if diff.is_zero():
        return PitVerdict(True, cfg.trials, per_trial_bound=Fraction(0))
    nvars = len(f.table)
    width = 2 * cfg.sample_bound + 1
    degree = diff.total_degree()
    bound = min(Fraction(int(degree), width), Fraction(1))
    for trial in range(cfg.trials):
        point = sample_point(cfg, trial, nvars)
        value = diff.evaluate(point)
        if value != 0:
            return PitVerdict(False, trial + 1, witness_point=point, witness_value=value)
    return PitVerdict(True, cfg.trials, per_trial_bound=bound)
