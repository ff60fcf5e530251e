"""The concrete verification targets: the family S(t), its discriminant
factorization, the printed weight-90 polynomial, the CD specialization, the
Igusa parameter map, dimension counts, and the irreducibility certificate.

The printed polynomials ship as golden data files; every derived polynomial is
diffed against its golden counterpart, and a mismatch raises
ConsistencyFailure naming the offending monomials.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .eliminate import PitConfig, discriminant, resultant, sample_point, splitmix64
from .weierstrass import WeierstrassModel
from .wpoly import (
    VariableTable,
    WeightedPolynomial,
    factor_mod_p,
    parse,
    render,
)

T_TABLE = VariableTable(("t4", "t6", "t10", "t12", "t18"), (4, 6, 10, 12, 18))

# x0 carries weight 6: this makes both the affine model (g2 of weight 28, g3 of
# weight 42) and the degree-6 polynomial R (weight 36) weighted-homogeneous.
TX_TABLE = VariableTable(
    ("t4", "t6", "t10", "t12", "t18", "x0"), (4, 6, 10, 12, 18, 6)
)

CD_TABLE = VariableTable(("alpha", "beta", "gamma", "delta"), (4, 6, 10, 12))
CDX_TABLE = VariableTable(
    ("alpha", "beta", "gamma", "delta", "x1"), (4, 6, 10, 12, 1)
)
MIX_TABLE = VariableTable(
    ("alpha", "beta", "gamma", "delta", "x0"), (4, 6, 10, 12, 6)
)


class ConsistencyFailure(AssertionError):
    """A derived polynomial disagrees with its printed golden counterpart."""


@dataclass(frozen=True)
class ParameterPoint:
    """A point (t4, t6, t10, t12, t18) of the weighted parameter space."""

    t4: Fraction
    t6: Fraction
    t10: Fraction
    t12: Fraction
    t18: Fraction

    def __post_init__(self):
        for name in ("t4", "t6", "t10", "t12", "t18"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not any(self.as_tuple()):
            raise ValueError("parameter point must be nonzero")

    def as_tuple(self):
        return (self.t4, self.t6, self.t10, self.t12, self.t18)


@dataclass(frozen=True)
class CdParameterPoint:
    """A point (alpha, beta, gamma, delta) of weights (4, 6, 10, 12)."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not any(self.as_tuple()):
            raise ValueError("parameter point must be nonzero")

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma, self.delta)


def _load_text(filename: str) -> str:
    return resources.files("k3verify.data").joinpath(filename).read_text()


def _var(table, name):
    return WeightedPolynomial.variable(table, name)


def _const(table, value):
    return WeightedPolynomial.constant(table, value)


# -- the family S(t) -----------------------------------------------------------


def build_s(point: ParameterPoint) -> WeierstrassModel:
    """Affine model of S(t): g2 = t4 x0^4 + t10 x0^3, g3 = x0^7 + t6 x0^6
    + t12 x0^5 + t18 x0^4."""
    t4, t6, t10, t12, t18 = point.as_tuple()
    return WeierstrassModel(
        (0, 0, 0, t10, t4), (0, 0, 0, 0, t18, t12, t6, 1), height=2
    )


def build_s_symbolic():
    """The model coefficients (g2, g3) as polynomials over TX_TABLE."""
    x0 = _var(TX_TABLE, "x0")
    t4, t6 = _var(TX_TABLE, "t4"), _var(TX_TABLE, "t6")
    t10, t12, t18 = (
        _var(TX_TABLE, "t10"),
        _var(TX_TABLE, "t12"),
        _var(TX_TABLE, "t18"),
    )
    g2 = t4 * x0 ** 4 + t10 * x0 ** 3
    g3 = x0 ** 7 + t6 * x0 ** 6 + t12 * x0 ** 5 + t18 * x0 ** 4
    return g2, g3


def dual_polynomials():
    """g2/x0^3 and g3/x0^4 of the affine model: the degree-1 and degree-3
    polynomials whose resultant is r(t)."""
    x0 = _var(TX_TABLE, "x0")
    t4, t6 = _var(TX_TABLE, "t4"), _var(TX_TABLE, "t6")
    t10, t12, t18 = (
        _var(TX_TABLE, "t10"),
        _var(TX_TABLE, "t12"),
        _var(TX_TABLE, "t18"),
    )
    g2v = t4 * x0 + t10
    g3v = x0 ** 3 + t6 * x0 ** 2 + t12 * x0 + t18
    return g2v, g3v


@lru_cache(maxsize=1)
def big_r_symbolic() -> WeightedPolynomial:
    """The degree-6 polynomial R(x0, t) = 4 x0 (g2/x0^3)^3 + 27 (g3/x0^4)^2,
    i.e. (4 g2^3 + 27 g3^2) / x0^8, normalized with leading coefficient 27."""
    g2v, g3v = dual_polynomials()
    x0 = _var(TX_TABLE, "x0")
    return _const(TX_TABLE, 4) * x0 * g2v ** 3 + _const(TX_TABLE, 27) * g3v ** 2


@lru_cache(maxsize=1)
def r_poly() -> WeightedPolynomial:
    """The resultant r(t), normalized so the t10^3 coefficient is +1.

    Derived as -res(g2/x0^3, g3/x0^4) and diffed against the printed four-term
    golden file.
    """
    g2v, g3v = dual_polynomials()
    derived = (-resultant(g2v, g3v, "x0")).change_table(T_TABLE)
    printed = parse(_load_text("r.poly"), T_TABLE)
    diff = derived - printed
    if not diff.is_zero():
        raise ConsistencyFailure(f"r(t) derivation mismatch: {render(diff)}")
    return printed


@lru_cache(maxsize=1)
def printed_d90() -> WeightedPolynomial:
    """The printed weight-90 polynomial, loaded from the golden data file."""
    return parse(_load_text("d90.poly"), T_TABLE)


def _content_and_sign(p: WeightedPolynomial) -> Fraction:
    """Rational content of p, signed so p/content has a positive leading term."""
    num = 0
    den = 1
    for c in p.terms.values():
        num = _gcd(num, abs(c.numerator))
        den = _lcm(den, c.denominator)
    content = Fraction(num, den)
    lead_coeff = p.leading_term()[1]
    return -content if lead_coeff < 0 else content


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _lcm(a, b):
    return a * b // _gcd(a, b)


@dataclass(frozen=True)
class DiscFactorization:
    """disc_{x0}(R) = c * r^3 * d90 with the fitted constant c."""

    c: Fraction
    disc: WeightedPolynomial
    d90_derived: WeightedPolynomial


@lru_cache(maxsize=1)
def disc_factorization() -> DiscFactorization:
    """Symbolic factorization of the weight-180 discriminant of R.

    The quotient disc / r^3 is computed by exact division; its content is the
    constant c and its primitive part is the derived d90.  Nothing is assumed
    about c; it is reported in the result.
    """
    disc = discriminant(big_r_symbolic(), "x0").change_table(T_TABLE)
    quotient = disc.exact_div(r_poly().change_table(T_TABLE) ** 3)
    c = _content_and_sign(quotient)
    derived = quotient / c
    return DiscFactorization(c=c, disc=disc, d90_derived=derived)


def d90_poly() -> WeightedPolynomial:
    """The derived d90, diffed term-for-term against the printed golden file."""
    derived = disc_factorization().d90_derived
    diff = derived - printed_d90()
    if not diff.is_zero():
        raise ConsistencyFailure(
            f"d90 derivation differs from the printed polynomial in "
            f"{diff.term_count()} monomials: {render(diff)}"
        )
    return printed_d90()


def delta_t_poly() -> WeightedPolynomial:
    """Delta_T = t18 * d90, the weight-108 branch polynomial."""
    return _var(T_TABLE, "t18") * printed_d90()


def pit_disc_factorization(cfg: PitConfig):
    """Numeric check disc(R) = c * r^3 * d90 without symbolic elimination.

    R is specialized at random parameter points, its univariate discriminant
    in x0 is computed exactly, and the constant c is fitted from the first
    usable trial and then required to be constant across all trials.  Returns
    (c, trials_used, ok, witness) where witness names a failing point if any.
    """
    r = r_poly()
    d90 = printed_d90()
    big_r = big_r_symbolic()
    x_table = VariableTable(("x0",), (1,))
    c_fit = None
    used = 0
    for trial in range(cfg.trials):
        t_point = sample_point(cfg, trial, 5)
        r_val = r.evaluate(t_point)
        d_val = d90.evaluate(t_point)
        coeffs = [
            poly.evaluate(t_point + (0,))
            for poly in big_r.univariate_view("x0")
        ]
        if coeffs[-1] == 0:
            continue
        univ = WeightedPolynomial.from_terms(
            x_table, {(i,): c for i, c in enumerate(coeffs) if c}
        )
        disc_val = discriminant(univ, "x0").constant_value()
        rhs = r_val ** 3 * d_val
        used += 1
        if rhs == 0:
            if disc_val != 0:
                return c_fit, used, False, t_point
            continue
        ratio = disc_val / rhs
        if c_fit is None:
            c_fit = ratio
        elif ratio != c_fit:
            return c_fit, used, False, t_point
    return c_fit, used, c_fit is not None, None


# -- the CD family --------------------------------------------------------------


def build_scd(point: CdParameterPoint) -> WeierstrassModel:
    """The CD model in the x1 chart: g2 = -3a x1^4 - g x1^5,
    g3 = x1^5 - 2b x1^6 + d x1^7."""
    a, b, g, d = point.as_tuple()
    return WeierstrassModel(
        (0, 0, 0, 0, -3 * a, -g), (0, 0, 0, 0, 0, 1, -2 * b, d), height=2
    )


def build_scd_symbolic():
    """CD model coefficients over CDX_TABLE."""
    x1 = _var(CDX_TABLE, "x1")
    a, b = _var(CDX_TABLE, "alpha"), _var(CDX_TABLE, "beta")
    g, d = _var(CDX_TABLE, "gamma"), _var(CDX_TABLE, "delta")
    three = _const(CDX_TABLE, 3)
    two = _const(CDX_TABLE, 2)
    g2 = -(three * a * x1 ** 4) - g * x1 ** 5
    g3 = x1 ** 5 - two * b * x1 ** 6 + d * x1 ** 7
    return g2, g3


@lru_cache(maxsize=1)
def cd_r0_poly() -> WeightedPolynomial:
    """r0 = 9 a^2 d + 6 a b g + g^2, the resultant of the classical-form
    coefficient polynomials 3a + g x1 and -1 + 2b x1 - d x1^2 (sign normalized
    so the g^2 coefficient is +1)."""
    x1 = _var(CDX_TABLE, "x1")
    a, b = _var(CDX_TABLE, "alpha"), _var(CDX_TABLE, "beta")
    g, d = _var(CDX_TABLE, "gamma"), _var(CDX_TABLE, "delta")
    f = _const(CDX_TABLE, 3) * a + g * x1
    q = -_const(CDX_TABLE, 1) + _const(CDX_TABLE, 2) * b * x1 - d * x1 ** 2
    res = resultant(f, q, "x1").change_table(CD_TABLE)
    if res.coefficient((0, 0, 2, 0)) < 0:
        res = -res
    return res


@dataclass(frozen=True)
class CdDiscFactorization:
    """disc_{x1}(R0) = c' * gamma^3 * r0^3 * d0 with the fitted constant c'."""

    c_prime: Fraction
    r0: WeightedPolynomial
    d0: WeightedPolynomial


@lru_cache(maxsize=1)
def cd_disc_factorization() -> CdDiscFactorization:
    """Factor the discriminant of the degree-5 polynomial R0 of the CD model.

    The discriminant is taken in the resultant normalization res(R0, R0'),
    which keeps the leading coefficient -4 gamma^3 of the quintic as a factor;
    that is exactly the gamma^3 in the stated product (the lc-divided
    discriminant carries only r0^3 * d0).
    """
    g2, g3 = build_scd_symbolic()
    x1 = _var(CDX_TABLE, "x1")
    big = _const(CDX_TABLE, 4) * g2 ** 3 + _const(CDX_TABLE, 27) * g3 ** 2
    r0_big = big.exact_div(x1 ** 10)
    if r0_big.degree_in("x1") != 5:
        raise ConsistencyFailure("R0 is not a quintic in x1")
    res = resultant(r0_big, r0_big.derivative("x1"), "x1").change_table(CD_TABLE)
    gamma = _var(CD_TABLE, "gamma")
    r0 = cd_r0_poly()
    quotient = res.exact_div(gamma ** 3).exact_div(r0 ** 3)
    c_prime = _content_and_sign(quotient)
    d0 = quotient / c_prime
    for poly, weight, label in ((r0, 20, "r0"), (d0, 60, "d0")):
        if not (poly.is_weighted_homogeneous() and poly.weighted_degree() == weight):
            raise ConsistencyFailure(f"{label} is not homogeneous of weight {weight}")
    return CdDiscFactorization(c_prime=c_prime, r0=r0, d0=d0)


_CD_SUBSTITUTION = {"t4": "-3*alpha", "t6": "-2*beta", "t10": "-gamma", "t12": "delta", "t18": "0"}


def cd_specialize_check(substitution=None):
    """Prop 2.5 chart check: the x0-chart form of the CD model equals S(t)
    under t4 = -3a, t6 = -2b, t10 = -g, t12 = d, t18 = 0.

    Returns (True, None) on success or (False, witness) with the nonzero
    difference polynomials.
    """
    assignments = dict(_CD_SUBSTITUTION)
    if substitution:
        assignments.update(substitution)
    subs = {
        name: parse(text, MIX_TABLE) for name, text in assignments.items()
    }
    subs["x0"] = _var(MIX_TABLE, "x0")
    g2_s, g3_s = build_s_symbolic()
    side_s = (g2_s.substitute(subs), g3_s.substitute(subs))
    g2_cd, g3_cd = build_scd_symbolic()
    side_cd = (
        _chart_swap(g2_cd, 8),
        _chart_swap(g3_cd, 12),
    )
    diff2 = side_s[0] - side_cd[0]
    diff3 = side_s[1] - side_cd[1]
    if diff2.is_zero() and diff3.is_zero():
        return True, None
    return False, (render(diff2), render(diff3))


def _chart_swap(p: WeightedPolynomial, bound: int) -> WeightedPolynomial:
    """x0^bound * p(1/x0): reverse the x1-coefficients into the x0 chart."""
    coeffs = p.univariate_view("x1")
    terms = {}
    for i, c in enumerate(coeffs):
        if c.is_zero():
            continue
        new_exp = bound - i
        if new_exp < 0:
            raise ValueError("chart swap bound too small")
        for exp, value in c.change_table(CD_TABLE).terms.items():
            key = exp + (new_exp,)
            terms[key] = terms.get(key, 0) + value
    return WeightedPolynomial.from_terms(MIX_TABLE, terms)


def igusa_to_cd(i2, i4, i6, i10) -> CdParameterPoint:
    """The reference monomial map from Igusa invariants to CD parameters."""
    i2, i4, i6, i10 = Fraction(i2), Fraction(i4), Fraction(i6), Fraction(i10)
    return CdParameterPoint(
        alpha=i4 / 9,
        beta=(-i2 * i4 + 3 * i6) / 27,
        gamma=8 * i10,
        delta=Fraction(2, 3) * i2 * i10,
    )


# -- dimension counts ------------------------------------------------------------

_WEIGHTS = (4, 6, 10, 12, 18)


@lru_cache(maxsize=8)
def _monomial_counts(limit: int):
    counts = [0] * (limit + 1)
    counts[0] = 1
    for w in _WEIGHTS:
        for k in range(w, limit + 1):
            counts[k] += counts[k - w]
    return counts


def dim_forms(k: int, character: str = "id") -> int:
    """Dimension of the weight-k space: monomial count in weights (4, 6, 10,
    12, 18) for the trivial character, shifted by 54 for the determinant."""
    if k < 0:
        raise ValueError("weight must be >= 0")
    if character == "det":
        k -= 54
        if k < 0:
            return 0
    elif character != "id":
        raise ValueError("character must be 'id' or 'det'")
    return _monomial_counts(max(k, 0))[k]


def dim_forms_bruteforce(k: int) -> int:
    """Monomial count by direct exponent enumeration (cross-check path)."""
    count = 0
    w4, w6, w10, w12, w18 = _WEIGHTS
    for e18 in range(k // w18 + 1):
        k18 = k - w18 * e18
        for e12 in range(k18 // w12 + 1):
            k12 = k18 - w12 * e12
            for e10 in range(k12 // w10 + 1):
                k10 = k12 - w10 * e10
                for e6 in range(k10 // w6 + 1):
                    if (k10 - w6 * e6) % w4 == 0:
                        count += 1
    return count


# -- irreducibility certificate ---------------------------------------------------

_CERTIFICATE_PRIMES = (2, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59)


@dataclass(frozen=True)
class IrreducibilityCertificate:
    """Outcome of the d90 irreducibility search."""

    certified: bool
    prime: int = None
    specialization: tuple = None
    trials: int = 0
    reason: str = ""


def irreducibility_certificate(
    poly: WeightedPolynomial,
    var: str,
    cfg: PitConfig = PitConfig(trials=64),
    primes=_CERTIFICATE_PRIMES,
) -> IrreducibilityCertificate:
    """Certify irreducibility over Q of a polynomial primitive in ``var``.

    Requires (a) a nonzero var-free coefficient and conclusive content 1 in
    var, and (b) a rational specialization of the remaining variables and a
    prime p for which the specialized univariate polynomial is irreducible
    mod p with full degree.  Specializing can merge factors but never split
    them, so one hit certifies irreducibility.
    """
    view = poly.univariate_view(var)
    degree = len(view) - 1
    if view[0].is_zero():
        return IrreducibilityCertificate(
            False, reason=f"the coefficient of {var}^0 vanishes: {var} divides a factor"
        )
    content = poly.content_in_var(var)
    if not content.conclusive:
        return IrreducibilityCertificate(False, reason="content check inconclusive")
    if not (content.content.is_constant()):
        return IrreducibilityCertificate(
            False, reason=f"nontrivial content in {var}: {render(content.content)}"
        )
    others = [name for name in poly.table.names if name != var]
    var_index = poly.table.index(var)
    for trial in range(cfg.trials):
        state = splitmix64((cfg.seed + 0x5EED + trial) & ((1 << 64) - 1))
        values = []
        for i in range(len(others)):
            v = splitmix64((state + 977 * (i + 1)) & ((1 << 64) - 1))
            values.append(v % 41 - 20)
        point = [0] * len(poly.table.names)
        j = 0
        for i, name in enumerate(poly.table.names):
            if name != var:
                point[i] = values[j]
                j += 1
        coeffs = []
        ok = True
        for c in view:
            value = c.evaluate(tuple(point))
            if value.denominator != 1:
                ok = False
                break
            coeffs.append(value.numerator)
        if not ok:
            continue
        while len(coeffs) < degree + 1:
            coeffs.append(0)
        if coeffs[degree] == 0:
            continue
        for p in primes:
            if coeffs[degree] % p == 0:
                continue
            factorization = factor_mod_p(coeffs, p)
            if (
                len(factorization.factors) == 1
                and factorization.factors[0][1] == 1
                and len(factorization.factors[0][0]) - 1 == degree
            ):
                return IrreducibilityCertificate(
                    True,
                    prime=p,
                    specialization=tuple(values),
                    trials=trial + 1,
                )
    return IrreducibilityCertificate(
        False, trials=cfg.trials, reason="budget exhausted"
    )


def d90_irreducibility_certificate(cfg: PitConfig = PitConfig(trials=64)):
    """Irreducibility certificate for the printed d90, viewed as a quintic in
    t18 over the remaining parameters."""
    return irreducibility_certificate(printed_d90(), "t18", cfg)


# -- bookkeeping and sample points -----------------------------------------------


def s54_square_identity() -> bool:
    """Weight bookkeeping of the square relations: Delta_T = t18 * d90 with
    weights 108 = 2*54, 18 = 2*9, 90 = 2*45."""
    delta_t = delta_t_poly()
    t18 = _var(T_TABLE, "t18")
    checks = (
        delta_t.is_weighted_homogeneous(),
        delta_t.weighted_degree() == 108,
        108 == 2 * 54,
        18 == 2 * 9,
        90 == 2 * 45,
        108 == 18 + 90,
        54 == 9 + 45,
        delta_t.exact_div(t18) == printed_d90(),
    )
    return all(checks)


def genericity_certificate(point: ParameterPoint) -> dict:
    """Exact values of t18, r and d90 at the point; all nonzero means generic."""
    t = point.as_tuple()
    return {
        "t18": t[4],
        "r": r_poly().evaluate(t),
        "d90": printed_d90().evaluate(t),
    }


def is_generic_point(point: ParameterPoint) -> bool:
    return all(v != 0 for v in genericity_certificate(point).values())


def sample_points():
    """Named fixture points with their documented roles."""
    obj = json.loads(_load_text("sample_points.json"))
    out = []
    for entry in obj["points"]:
        point = ParameterPoint(*(Fraction(v) for v in entry["t"]))
        out.append({"name": entry["name"], "point": point, "role": entry["role"]})
    return out


def random_certified_points(count: int, seed: int = 0, t18_zero: bool = False):
    """Deterministic parameter points with r * d90 != 0 (and t18 != 0 unless
    t18_zero, in which case t18 is pinned to 0)."""
    points = []
    trial = 0
    while len(points) < count:
        raw = sample_point(PitConfig(trials=1, seed=seed + trial, sample_bound=50), 0, 5)
        values = list(raw)
        if t18_zero:
            values[4] = 0
        trial += 1
        if not any(values):
            continue
        try:
            point = ParameterPoint(*values)
        except ValueError:
            continue
        cert = genericity_certificate(point)
        if cert["r"] == 0 or cert["d90"] == 0:
            continue
        if not t18_zero and cert["t18"] == 0:
            continue
        points.append(point)
    return points
