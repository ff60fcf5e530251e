"""Elliptic fibrations over the projective line in Weierstrass form.

The model convention follows z^2 = y^3 + g2(x0) y + g3(x0) (note the plus
signs), with discriminant Delta = 4 g2^3 + 27 g3^2.  A model of height h has
degree bounds (4h, 6h, 12h) for (g2, g3, Delta); K3 surfaces have h = 2.

Fiber classification never factors polynomials over the rationals: the roots
of Delta are grouped into squarefree strata on which the vanishing orders of
g2, g3 and Delta are constant, so the Kodaira type is decided per stratum.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .wpoly import VariableTable, WeightedPolynomial, parse, render

INFINITY = math.inf

_X0_TABLE = VariableTable(("x0",), (1,))

_KODAIRA_EULER = {
    "I0": 0, "II": 2, "III": 3, "IV": 4,
    "IV*": 8, "III*": 9, "II*": 10,
}

_KODAIRA_MULTIPLICITIES = {
    # component multiplicities of the reducible fibers that occur here;
    # II* is the extended E8 diagram with a0 + 2a1 + 3a2 + 4a3 + 5a4 + 6a5
    # + 3a6 + 4a7 + 2a8
    "II*": (1, 2, 3, 4, 5, 6, 3, 4, 2),
    "III*": (1, 2, 3, 4, 3, 2, 1, 2),
    "IV*": (1, 2, 3, 2, 1, 2, 1),
}


class IdenticallyZeroError(ValueError):
    """The discriminant of the model vanishes identically."""


class InconsistentValuationsError(ValueError):
    """Valuation triple matches no row of the Kodaira table."""


class IrrationalRootUnresolvedError(ValueError):
    """A stratum of Delta could not be classified uniformly."""


@dataclass(frozen=True)
class KodairaType:
    """Kodaira symbol of a singular fiber, e.g. I1, II*, I0*."""

    tag: str
    n: int = 0

    def __post_init__(self):
        if self.tag not in ("I", "I*") and self.tag not in _KODAIRA_EULER:
            raise ValueError(f"unknown Kodaira tag {self.tag!r}")

    @property
    def euler_number(self) -> int:
        if self.tag == "I":
            return self.n
        if self.tag == "I*":
            return 6 + self.n
        return _KODAIRA_EULER[self.tag]

    @property
    def multiplicity_vector(self):
        if self.tag in _KODAIRA_MULTIPLICITIES:
            return _KODAIRA_MULTIPLICITIES[self.tag]
        return None

    @property
    def symbol(self) -> str:
        if self.tag == "I":
            return f"I{self.n}"
        if self.tag == "I*":
            return f"I{self.n}*"
        return self.tag

    def __str__(self):
        return self.symbol


NON_MINIMAL = "NonMinimal"


# -- exact univariate polynomials as low-to-high Fraction tuples ---------------


def _ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pdeg(c):
    return len(c) - 1


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim(
        [
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
            for i in range(n)
        ]
    )


def _pscale(a, s):
    if s == 0:
        return ()
    return tuple(c * s for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def _ppow(a, k):
    out = (Fraction(1),)
    for _ in range(k):
        out = _pmul(out, a)
    return out


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        f = r[-1] / lb
        q[shift] = f
        for i in range(len(b)):
            r[shift + i] -= f * b[i]
        while r and r[-1] == 0:
            r.pop()
    return _ptrim(q), _ptrim(r)


def _pgcd(a, b):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if a:
        a = tuple(c / a[-1] for c in a)
    return a


def _pderiv(a):
    return _ptrim([i * a[i] for i in range(1, len(a))])


def _peval(a, x):
    value = Fraction(0)
    for c in reversed(a):
        value = value * Fraction(x) + c
    return value


def _multiplicity_at(a, point) -> int:
    """Vanishing order of a nonzero polynomial at a rational point."""
    count = 0
    divisor = (-Fraction(point), Fraction(1))
    while a:
        q, r = _pdivmod(a, divisor)
        if r:
            break
        a = q
        count += 1
    return count


def _multiplicity_of_factor(a, f) -> int:
    """How many times the polynomial f divides a (f nonconstant)."""
    count = 0
    while a:
        q, r = _pdivmod(a, f)
        if r:
            break
        a = q
        count += 1
    return count


def squarefree_strata(a):
    """Yun decomposition a = lc * prod f_k^k as a list of (f_k, k).

    Each f_k is monic squarefree of positive degree; distinct f_k are coprime.
    """
    a = _ptrim(a)
    if _pdeg(a) < 1:
        return []
    a = tuple(c / a[-1] for c in a)
    d = _pderiv(a)
    g = _pgcd(a, d)
    if _pdeg(g) < 1:
        return [(a, 1)]
    strata = []
    c = _pdivmod(a, g)[0]
    w = _pdivmod(d, g)[0]
    k = 1
    while _pdeg(c) >= 1:
        diff = _padd(w, _pscale(_pderiv(c), -1))
        f = _pgcd(c, diff)
        if _pdeg(f) >= 1:
            strata.append((f, k))
        c = _pdivmod(c, f)[0]
        w = _pdivmod(diff, f)[0]
        k += 1
    return strata


def _mult_partition(f, poly):
    """Partition a monic squarefree f by multiplicity of its factors in poly.

    Returns a list of (g, m) with the g monic, squarefree, pairwise coprime,
    prod g = f, and every irreducible factor of g dividing poly exactly m
    times.  A zero poly gives [(f, INFINITY)].
    """
    f = _ptrim(f)
    if not poly:
        return [(f, INFINITY)]
    parts = []
    current = f
    remaining = poly
    m = 0
    while _pdeg(current) >= 1:
        deeper = _pgcd(current, remaining)
        factor = _pdivmod(current, deeper)[0]
        if _pdeg(factor) >= 1:
            parts.append((factor, m))
        if _pdeg(deeper) < 1:
            break
        remaining = _pdivmod(remaining, deeper)[0]
        current = deeper
        m += 1
    return parts


@dataclass(frozen=True)
class WeierstrassModel:
    """Fibration z^2 = y^3 + g2(x0) y + g3(x0) of a given height over P^1."""

    g2: tuple
    g3: tuple
    height: int = 2

    def __post_init__(self):
        object.__setattr__(self, "g2", _ptrim(Fraction(c) for c in self.g2))
        object.__setattr__(self, "g3", _ptrim(Fraction(c) for c in self.g3))
        if self.height < 0:
            raise ValueError("height must be >= 0")
        if _pdeg(self.g2) > 4 * self.height or _pdeg(self.g3) > 6 * self.height:
            raise ValueError("coefficient degree exceeds the height bounds")
        if not self.delta():
            raise IdenticallyZeroError("discriminant vanishes identically")

    def delta(self):
        """Discriminant 4 g2^3 + 27 g3^2 as a coefficient tuple."""
        return _padd(
            _pscale(_ppow(self.g2, 3), 4), _pscale(_ppow(self.g3, 2), 27)
        )

    def degree_bounds(self):
        return 4 * self.height, 6 * self.height, 12 * self.height


def classical_coefficients(model: WeierstrassModel):
    """Coefficients (h2, h3) of the classical form z^2 = y^3 - h2 y - h3."""
    return _pscale(model.g2, -1), _pscale(model.g3, -1)


def local_valuations(model: WeierstrassModel, point):
    """Vanishing orders (v(g2), v(g3), v(Delta)) at a rational point or INFINITY.

    At infinity the valuation of a polynomial of degree d is bound - d where
    the bounds are the model's (4h, 6h, 12h); an identically zero g2 or g3
    reports INFINITY.
    """
    b2, b3, bd = model.degree_bounds()
    delta = model.delta()
    if point is INFINITY:
        v2 = INFINITY if not model.g2 else b2 - _pdeg(model.g2)
        v3 = INFINITY if not model.g3 else b3 - _pdeg(model.g3)
        vd = bd - _pdeg(delta)
        return v2, v3, vd
    v2 = INFINITY if not model.g2 else _multiplicity_at(model.g2, point)
    v3 = INFINITY if not model.g3 else _multiplicity_at(model.g3, point)
    return v2, v3, _multiplicity_at(delta, point)


def kodaira_from_valuations(v2, v3, vd):
    """Kodaira type from a char-0 valuation triple, or NON_MINIMAL.

    Raises InconsistentValuationsError when the triple matches no table row
    (which signals a bug in the caller, not bad user data).
    """
    if vd == 0:
        return KodairaType("I", 0)
    if v2 >= 4 and v3 >= 6:
        return NON_MINIMAL
    if v2 == 0 and v3 == 0 and vd >= 1:
        return KodairaType("I", int(vd))
    if v2 >= 1 and v3 == 1 and vd == 2:
        return KodairaType("II")
    if v2 == 1 and v3 >= 2 and vd == 3:
        return KodairaType("III")
    if v2 >= 2 and v3 == 2 and vd == 4:
        return KodairaType("IV")
    if vd == 6 and ((v2 == 2 and v3 >= 3) or (v2 >= 2 and v3 == 3)):
        return KodairaType("I*", 0)
    if v2 == 2 and v3 == 3 and vd >= 7:
        return KodairaType("I*", int(vd) - 6)
    if v2 >= 3 and v3 == 4 and vd == 8:
        return KodairaType("IV*")
    if v2 == 3 and v3 >= 5 and vd == 9:
        return KodairaType("III*")
    if v2 >= 4 and v3 == 5 and vd == 10:
        return KodairaType("II*")
    raise InconsistentValuationsError(f"no table row for {(v2, v3, vd)}")


def minimalize_at(model: WeierstrassModel, point) -> WeierstrassModel:
    """Twist down at one point while (v2, v3) >= (4, 6); drops height by 1 each step."""
    current = model
    while True:
        v2, v3, _vd = local_valuations(current, point)
        if not (v2 >= 4 and v3 >= 6):
            return current
        if point is INFINITY:
            g2, g3 = current.g2, current.g3
        else:
            lin = (-Fraction(point), Fraction(1))
            g2 = _pdivmod(current.g2, _ppow(lin, 4))[0] if current.g2 else ()
            g3 = _pdivmod(current.g3, _ppow(lin, 6))[0] if current.g3 else ()
        current = WeierstrassModel(g2, g3, current.height - 1)


def minimalize_everywhere(model: WeierstrassModel) -> WeierstrassModel:
    """Remove every (4, 6)-divisible locus, rational or not."""
    current = minimalize_at(model, INFINITY)
    changed = True
    while changed:
        changed = False
        for f, vd in squarefree_strata(current.delta()):
            if vd < 12:
                continue
            m2 = _multiplicity_of_factor(current.g2, f) if current.g2 else None
            m3 = _multiplicity_of_factor(current.g3, f) if current.g3 else None
            if (m2 is None or m2 >= 4) and (m3 is None or m3 >= 6):
                g2 = (
                    _pdivmod(current.g2, _ppow(f, 4))[0] if current.g2 else ()
                )
                g3 = (
                    _pdivmod(current.g3, _ppow(f, 6))[0] if current.g3 else ()
                )
                current = WeierstrassModel(g2, g3, current.height - _pdeg(f))
                changed = True
                break
        if not changed:
            final = minimalize_at(current, INFINITY)
            if final is not current:
                current = final
                changed = True
    return current


@dataclass(frozen=True)
class FiberEntry:
    """One stratum of singular fibers: place, type, number of fibers."""

    place: object  # Fraction, INFINITY, or the defining polynomial string
    kodaira: KodairaType
    count: int = 1


@dataclass(frozen=True)
class FiberConfiguration:
    """All singular fibers of a model with the total Euler number."""

    fibers: tuple

    @property
    def total_euler(self) -> int:
        return sum(e.count * e.kodaira.euler_number for e in self.fibers)

    def counts_by_symbol(self):
        counts = {}
        for e in self.fibers:
            counts[e.kodaira.symbol] = counts.get(e.kodaira.symbol, 0) + e.count
        return counts

    def summary(self) -> str:
        counts = self.counts_by_symbol()
        order = sorted(
            counts,
            key=lambda s: (-_symbol_euler(s), s),
        )
        parts = []
        for symbol in order:
            n = counts[symbol]
            parts.append(symbol if n == 1 else f"{n} {symbol}")
        return " + ".join(parts) if parts else "smooth"


def _symbol_euler(symbol: str) -> int:
    if symbol.startswith("I") and symbol not in ("II", "III", "IV", "II*", "III*", "IV*"):
        star = symbol.endswith("*")
        n = int(symbol[1:-1] if star else symbol[1:])
        return 6 + n if star else n
    return _KODAIRA_EULER[symbol]


def fiber_configuration(model: WeierstrassModel) -> FiberConfiguration:
    """Classify the fiber over every root of Delta and over infinity.

    Roots are never computed: Delta is split into squarefree strata, each
    stratum is refined until the valuations of g2 and g3 are constant on it,
    and each root of a refined stratum contributes one fiber of the common
    type.  The model must already be minimal (use minimalize_everywhere).
    """
    entries = []
    v2, v3, vd = local_valuations(model, INFINITY)
    t_inf = kodaira_from_valuations(v2, v3, vd)
    if t_inf is NON_MINIMAL:
        raise ValueError("model is not minimal at infinity")
    if t_inf.euler_number:
        entries.append(FiberEntry(INFINITY, t_inf, 1))
    for f, k in squarefree_strata(model.delta()):
        for g, m2 in _mult_partition(f, model.g2):
            for h, m3 in _mult_partition(g, model.g3):
                t = kodaira_from_valuations(m2, m3, k)
                if t is NON_MINIMAL:
                    raise ValueError(
                        f"model is not minimal along {_render_place(h)}"
                    )
                if t.euler_number == 0:
                    continue
                if _pdeg(h) == 1:
                    place = -h[0] / h[1]
                    entries.append(FiberEntry(place, t, 1))
                else:
                    entries.append(FiberEntry(_render_place(h), t, _pdeg(h)))
    return FiberConfiguration(tuple(entries))


def _render_place(coeffs):
    p = WeightedPolynomial.from_terms(
        _X0_TABLE, {(i,): c for i, c in enumerate(coeffs) if c}
    )
    return render(p)


def is_k3(model: WeierstrassModel) -> bool:
    """True iff the minimal model has Euler number 24 (with singular fibers)."""
    minimal = minimalize_everywhere(model)
    if minimal.height != 2:
        return False
    config = fiber_configuration(minimal)
    return config.total_euler == 24 and bool(config.fibers)


# -- JSON interchange ----------------------------------------------------------


def _coeffs_from_poly(p: WeightedPolynomial):
    view = p.univariate_view("x0")
    return tuple(c.constant_value() for c in view)


def model_to_json(model: WeierstrassModel) -> str:
    g2 = WeightedPolynomial.from_terms(
        _X0_TABLE, {(i,): c for i, c in enumerate(model.g2) if c}
    )
    g3 = WeightedPolynomial.from_terms(
        _X0_TABLE, {(i,): c for i, c in enumerate(model.g3) if c}
    )
    return json.dumps({"g2": render(g2), "g3": render(g3)})


def model_from_json(text: str, height: int = 2) -> WeierstrassModel:
    obj = json.loads(text)
    g2 = parse(obj["g2"], _X0_TABLE)
    g3 = parse(obj["g3"], _X0_TABLE)
    return WeierstrassModel(_coeffs_from_poly(g2), _coeffs_from_poly(g3), height)
