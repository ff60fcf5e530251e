"""Sparse multivariate polynomials over exact rationals with weighted grading.

Terms are stored as a map from exponent tuples to nonzero ``Fraction``
coefficients, so equal polynomials always have identical term maps.  The
canonical term order is descending weighted degree, ties broken by descending
lexicographic exponent order in declared variable order.
"""
from __future__ import annotations

import random as _random
import re
from dataclasses import dataclass
from fractions import Fraction

NEG_INFINITY = float("-inf")


class TableMismatchError(ValueError):
    """Operands live over different variable tables."""


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariableError(PolynomialSyntaxError):
    pass


class NotDivisibleError(ArithmeticError):
    """Exact division failed; carries the nonzero remainder witness."""

    def __init__(self, remainder: "WeightedPolynomial"):
        super().__init__("polynomial division is not exact")
        self.remainder = remainder


class CompositeModulusError(ValueError):
    pass


class LeadingCoefficientVanishesError(ValueError):
    pass


@dataclass(frozen=True)
class VariableTable:
    """Ordered variable names with positive integer weights."""

    names: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if len(self.names) != len(self.weights):
            raise ValueError("names and weights differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be >= 1")

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def weighted_degree_of(self, exponents) -> int:
        return sum(e * w for e, w in zip(exponents, self.weights))


class WeightedPolynomial:
    """A sparse polynomial over Q, graded by the table's variable weights."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VariableTable, terms: dict):
        self.table = table
        self.terms = terms

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(table: VariableTable) -> "WeightedPolynomial":
        return WeightedPolynomial(table, {})

    @staticmethod
    def constant(table: VariableTable, value) -> "WeightedPolynomial":
        c = Fraction(value)
        if c == 0:
            return WeightedPolynomial.zero(table)
        return WeightedPolynomial(table, {(0,) * len(table): c})

    @staticmethod
    def variable(table: VariableTable, name: str) -> "WeightedPolynomial":
        i = table.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(table)))
        return WeightedPolynomial(table, {exp: Fraction(1)})

    @staticmethod
    def from_terms(table: VariableTable, mapping) -> "WeightedPolynomial":
        terms = {}
        n = len(table)
        for exp, coeff in dict(mapping).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp!r}")
            c = Fraction(coeff)
            if c != 0:
                terms[exp] = c
        return WeightedPolynomial(table, terms)

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def coefficient(self, exponents) -> Fraction:
        return self.terms.get(tuple(exponents), Fraction(0))

    def term_count(self) -> int:
        return len(self.terms)

    def weighted_degree(self):
        if not self.terms:
            return NEG_INFINITY
        wd = self.table.weighted_degree_of
        return max(wd(exp) for exp in self.terms)

    def is_weighted_homogeneous(self) -> bool:
        if not self.terms:
            return True
        wd = self.table.weighted_degree_of
        degrees = {wd(exp) for exp in self.terms}
        return len(degrees) == 1

    def total_degree(self):
        if not self.terms:
            return NEG_INFINITY
        return max(sum(exp) for exp in self.terms)

    def degree_in(self, var: str):
        if not self.terms:
            return NEG_INFINITY
        i = self.table.index(var)
        return max(exp[i] for exp in self.terms)

    def leading_term(self):
        """(exponents, coefficient) that is maximal in the canonical order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        wd = self.table.weighted_degree_of
        exp = max(self.terms, key=lambda e: (wd(e), e))
        return exp, self.terms[exp]

    def sorted_terms(self):
        wd = self.table.weighted_degree_of
        return sorted(self.terms.items(), key=lambda kv: (wd(kv[0]), kv[0]), reverse=True)

    # -- ring operations ---------------------------------------------------

    def _check_table(self, other):
        if self.table != other.table:
            raise TableMismatchError("operands use different variable tables")

    def _coerce(self, other):
        if isinstance(other, WeightedPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return WeightedPolynomial.constant(self.table, other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        return hash((self.table, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_table(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, 0) + c
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return WeightedPolynomial(self.table, terms)

    __radd__ = __add__

    def __neg__(self):
        return WeightedPolynomial(self.table, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_table(other)
        if not self.terms or not other.terms:
            return WeightedPolynomial.zero(self.table)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        terms = {}
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                exp = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(exp, 0) + c1 * c2
                if s:
                    terms[exp] = s
                else:
                    del terms[exp]
        return WeightedPolynomial(self.table, terms)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        c = Fraction(scalar)
        if c == 0:
            raise ZeroDivisionError("division by zero scalar")
        return WeightedPolynomial(self.table, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = WeightedPolynomial.constant(self.table, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- evaluation and substitution ---------------------------------------

    def evaluate(self, point) -> Fraction:
        """Exact value at a point given as one rational per variable."""
        vals = [Fraction(x) for x in point]
        if len(vals) != len(self.table):
            raise ValueError("point length does not match variable table")
        total = Fraction(0)
        power_cache = [{0: Fraction(1)} for _ in vals]
        for exp, coeff in self.terms.items():
            prod = coeff
            for i, e in enumerate(exp):
                if e:
                    cache = power_cache[i]
                    if e not in cache:
                        cache[e] = vals[i] ** e
                    prod *= cache[e]
            total += prod
        return total

    def substitute(self, assignments: dict) -> "WeightedPolynomial":
        """Compose with polynomial assignments for some of the variables.

        ``assignments`` maps variable names to polynomials sharing one common
        target table; unassigned variables must exist in the target table under
        the same name.
        """
        if not assignments:
            return self
        targets = list(assignments.values())
        target_table = targets[0].table
        if any(t.table != target_table for t in targets):
            raise TableMismatchError("assignment targets use different tables")
        images = []
        for name in self.table.names:
            if name in assignments:
                images.append(assignments[name])
            else:
                images.append(WeightedPolynomial.variable(target_table, name))
        result = WeightedPolynomial.zero(target_table)
        power_cache = [dict() for _ in images]
        for exp, coeff in self.terms.items():
            prod = WeightedPolynomial.constant(target_table, coeff)
            for i, e in enumerate(exp):
                if e:
                    cache = power_cache[i]
                    if e not in cache:
                        cache[e] = images[i] ** e
                    prod = prod * cache[e]
            result = result + prod
        return result

    def change_table(self, new_table: VariableTable) -> "WeightedPolynomial":
        """Re-express over another table, matching variables by name.

        Variables absent from the new table must not occur in any term.
        """
        positions = []
        for name in self.table.names:
            positions.append(new_table.names.index(name) if name in new_table.names else None)
        terms = {}
        for exp, coeff in self.terms.items():
            new_exp = [0] * len(new_table)
            for i, e in enumerate(exp):
                if e:
                    if positions[i] is None:
                        raise ValueError(
                            f"variable {self.table.names[i]!r} occurs but is not in the new table"
                        )
                    new_exp[positions[i]] = e
            terms[tuple(new_exp)] = coeff
        return WeightedPolynomial(new_table, terms)

    def derivative(self, var: str) -> "WeightedPolynomial":
        i = self.table.index(var)
        terms = {}
        for exp, coeff in self.terms.items():
            if exp[i]:
                new_exp = exp[:i] + (exp[i] - 1,) + exp[i + 1 :]
                terms[new_exp] = terms.get(new_exp, 0) + coeff * exp[i]
        return WeightedPolynomial.from_terms(self.table, terms)

    # -- division ----------------------------------------------------------

    def exact_div(self, divisor: "WeightedPolynomial") -> "WeightedPolynomial":
        """Exact quotient self / divisor; raises NotDivisibleError otherwise."""
        divisor = self._coerce(divisor)
        self._check_table(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return WeightedPolynomial.zero(self.table)
        d_exp, d_coeff = divisor.leading_term()
        quotient = {}
        remainder = WeightedPolynomial(self.table, dict(self.terms))
        while not remainder.is_zero():
            r_exp, r_coeff = remainder.leading_term()
            q_exp = tuple(a - b for a, b in zip(r_exp, d_exp))
            if any(e < 0 for e in q_exp):
                raise NotDivisibleError(remainder)
            q_coeff = r_coeff / d_coeff
            quotient[q_exp] = quotient.get(q_exp, 0) + q_coeff
            mono = WeightedPolynomial(self.table, {q_exp: q_coeff})
            remainder = remainder - mono * divisor
        return WeightedPolynomial.from_terms(self.table, quotient)

    def univariate_view(self, var: str):
        """Coefficient list indexed by the power of ``var``.

        Entries are polynomials over the same table with zero exponent in
        ``var``.  The zero polynomial yields an empty list.
        """
        i = self.table.index(var)
        if self.is_zero():
            return []
        top = max(exp[i] for exp in self.terms)
        coeffs = [dict() for _ in range(top + 1)]
        for exp, coeff in self.terms.items():
            reduced = exp[:i] + (0,) + exp[i + 1 :]
            coeffs[exp[i]][reduced] = coeff
        return [WeightedPolynomial(self.table, t) for t in coeffs]

    def content_in_var(self, var: str) -> "ContentResult":
        """Heuristic gcd of the coefficients of the ``var``-univariate view.

        A bounded number of candidate divisors is tried and every candidate is
        verified by exact division.  When no candidate certifies, the result is
        content 1 flagged inconclusive.
        """
        one = WeightedPolynomial.constant(self.table, 1)
        coeffs = [c for c in self.univariate_view(var) if not c.is_zero()]
        if not coeffs:
            return ContentResult(WeightedPolynomial.zero(self.table), True)
        if any(c.is_constant() for c in coeffs):
            return ContentResult(one, True)
        # candidates: the smallest coefficients by term count
        candidates = sorted(coeffs, key=lambda c: c.term_count())[:4]
        for cand in candidates:
            try:
                for c in coeffs:
                    c.exact_div(cand)
            except NotDivisibleError:
                continue
            return ContentResult(cand, True)
        return ContentResult(one, False)


@dataclass(frozen=True)
class ContentResult:
    content: WeightedPolynomial
    conclusive: bool


# -- text format ------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([+\-*/^()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise PolynomialSyntaxError("unexpected character", pos)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    return tokens


def parse(text: str, table: VariableTable) -> WeightedPolynomial:
    """Parse the polynomial text grammar into canonical form."""
    tokens = _tokenize(text)
    if not tokens:
        raise PolynomialSyntaxError("empty input", 0)
    n = len(table)
    result = WeightedPolynomial.zero(table)
    i = 0

    def parse_term(i, sign):
        # optional coefficient
        coeff = Fraction(sign)
        exps = [0] * n
        saw_anything = False
        if i < len(tokens) and tokens[i][0] == "int":
            num = tokens[i][1]
            i += 1
            saw_anything = True
            if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "/":
                i += 1
                if i >= len(tokens) or tokens[i][0] != "int":
                    raise PolynomialSyntaxError(
                        "expected denominator", tokens[i - 1][2]
                    )
                coeff *= Fraction(num, tokens[i][1])
                i += 1
            else:
                coeff *= num
        while i < len(tokens):
            kind, val, pos = tokens[i]
            if kind == "op" and val == "*":
                i += 1
                continue
            if kind == "name":
                try:
                    vi = table.index(val)
                except KeyError:
                    raise UnknownVariableError(f"unknown variable {val!r}", pos)
                i += 1
                power = 1
                if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "^":
                    i += 1
                    if i >= len(tokens) or tokens[i][0] != "int":
                        raise PolynomialSyntaxError("expected exponent", pos)
                    power = tokens[i][1]
                    i += 1
                exps[vi] += power
                saw_anything = True
                continue
            break
        if not saw_anything:
            pos = tokens[i][2] if i < len(tokens) else len(tokens)
            raise PolynomialSyntaxError("expected a term", pos)
        return i, tuple(exps), coeff

    sign = 1
    if tokens[0][0] == "op" and tokens[0][1] in "+-":
        sign = -1 if tokens[0][1] == "-" else 1
        i = 1
    while True:
        i, exp, coeff = parse_term(i, sign)
        result = result + WeightedPolynomial(table, {exp: coeff} if coeff else {})
        if i >= len(tokens):
            break
        kind, val, pos = tokens[i]
        if kind != "op" or val not in "+-":
            raise PolynomialSyntaxError("expected '+' or '-'", pos)
        sign = -1 if val == "-" else 1
        i += 1
    return result


def render(p: WeightedPolynomial) -> str:
    """Canonical text: descending weighted degree, explicit '*', no '^1'."""
    if p.is_zero():
        return "0"
    pieces = []
    for idx, (exp, coeff) in enumerate(p.sorted_terms()):
        mag = abs(coeff)
        factors = []
        for name, e in zip(p.table.names, exp):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if factors:
            body = "*".join(factors) if mag == 1 else f"{mag}*" + "*".join(factors)
        else:
            body = str(mag)
        if idx == 0:
            pieces.append(body if coeff > 0 else "-" + body)
        else:
            pieces.append((" + " if coeff > 0 else " - ") + body)
    return "".join(pieces)


# -- univariate factorization over a prime field ----------------------------

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _fp_trim(f):
    while f and f[-1] == 0:
        f = f[:-1]
    return tuple(f)


def _fp_mul(f, g, p):
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = (out[i + j] + a * b) % p
    return _fp_trim(out)


def _fp_divmod(f, g, p):
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], p - 2, p)
    q = [0] * max(len(f) - dg, 0)
    while len(f) - 1 >= dg and any(f):
        while f and f[-1] == 0:
            f.pop()
        if len(f) - 1 < dg:
            break
        c = f[-1] * inv % p
        shift = len(f) - 1 - dg
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
    return _fp_trim(q), _fp_trim(f)


def _fp_mod(f, g, p):
    return _fp_divmod(f, g, p)[1]


def _fp_gcd(f, g, p):
    while g:
        f, g = g, _fp_mod(f, g, p)
    if f:
        inv = pow(f[-1], p - 2, p)
        f = tuple(c * inv % p for c in f)
    return f

def _fp_monic(f, p):
    if not f:
        return f
    inv = pow(f[-1], p - 2, p)
    return tuple(c * inv % p for c in f)


def _fp_powmod(base, e, mod, p):
    result = (1,)
    base = _fp_mod(base, mod, p)
    while e:
        if e & 1:
            result = _fp_mod(_fp_mul(result, base, p), mod, p)
        base = _fp_mod(_fp_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _fp_derivative(f, p):
    return _fp_trim([(i * c) % p for i, c in enumerate(f)][1:])


def _fp_squarefree(f, p):
    """Squarefree decomposition in characteristic p: [(g_i, multiplicity)]."""
    out = []
    fp = _fp_derivative(f, p)
    if not fp:
        # f = h(x^p) = (h*)(x)^p with h* the coefficientwise p-th root
        root = _fp_trim([f[i] for i in range(0, len(f), p)])
        for g, m in _fp_squarefree(root, p):
            out.append((g, m * p))
        return out
    w = _fp_gcd(f, fp, p)
    v = _fp_divmod(_fp_monic(f, p), w, p)[0]  # product of distinct factors
    m = 1
    while len(v) > 1:
        g = _fp_gcd(v, w, p)
        piece = _fp_divmod(v, g, p)[0]
        if len(piece) > 1:
            out.append((piece, m))
        v = g
        w = _fp_divmod(w, g, p)[0]
        m += 1
    if len(w) > 1:
        # leftover p-th power part
        root = _fp_trim([w[i] for i in range(0, len(w), p)])
        for g, k in _fp_squarefree(root, p):
            out.append((g, k * p))
    return out


def _fp_sub(f, g, p):
    n = max(len(f), len(g))
    fx = list(f) + [0] * (n - len(f))
    gx = list(g) + [0] * (n - len(g))
    return _fp_trim([(a - b) % p for a, b in zip(fx, gx)])


def _fp_distinct_degree(f, p):
    """Distinct-degree splitting of a monic squarefree f: [(product, d)]."""
    out = []
    x = (0, 1)
    h = x
    d = 0
    rest = f
    while len(rest) - 1 > 2 * d:
        d += 1
        h = _fp_powmod(h, p, rest, p)
        g = _fp_gcd(rest, _fp_sub(h, x, p), p)
        if len(g) > 1:
            out.append((g, d))
            rest = _fp_divmod(rest, g, p)[0]
            if len(rest) == 1:
                break
            h = _fp_mod(h, rest, p)
    if len(rest) > 1:
        out.append((rest, len(rest) - 1))
    return out


def _fp_equal_degree(f, d, p, rng):
    """Cantor-Zassenhaus split of a monic squarefree product of degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        h = tuple(rng.randrange(p) for _ in range(n)) + (1,)
        if p == 2:
            # trace map splitting
            t = h
            acc = h
            for _ in range(d - 1):
                t = _fp_mod(_fp_mul(t, t, p), f, p)
                acc = _fp_trim([(a + b) % p for a, b in
                                zip(list(acc) + [0] * max(0, len(t) - len(acc)),
                                    list(t) + [0] * max(0, len(acc) - len(t)))])
            g = _fp_gcd(f, acc, p)
        else:
            e = (p ** d - 1) // 2
            w = _fp_powmod(h, e, f, p)
            wm1 = list(w) if w else [0]
            wm1[0] = (wm1[0] - 1) % p
            g = _fp_gcd(f, _fp_trim(wm1), p)
        if 0 < len(g) - 1 < n:
            rest = _fp_divmod(f, g, p)[0]
            return _fp_equal_degree(g, d, p, rng) + _fp_equal_degree(rest, d, p, rng)


@dataclass(frozen=True)
class FactorizationModP:
    """unit * prod(factor^multiplicity) == input mod p, factors monic irreducible."""

    modulus: int
    unit: int
    factors: tuple  # ((coeff tuple low..high, multiplicity), ...)


def factor_mod_p(coefficients, p: int) -> FactorizationModP:
    """Factor a univariate integer polynomial over the field with p elements.

    ``coefficients`` are listed from the constant term up.  Squarefree
    decomposition, then distinct-degree splitting, then Cantor-Zassenhaus
    equal-degree splitting.
    """
    if not _is_prime(p):
        raise CompositeModulusError(f"{p} is not prime")
    coeffs = [int(c) for c in coefficients]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs or coeffs[-1] % p == 0:
        raise LeadingCoefficientVanishesError("leading coefficient vanishes mod p")
    f = _fp_trim([c % p for c in coeffs])
    unit = f[-1]
    f = _fp_monic(f, p)
    if len(f) == 1:
        return FactorizationModP(p, unit, ())
    rng = _random.Random(0xD15EA5E ^ p ^ len(f))
    factors = []
    for g, mult in _fp_squarefree(f, p):
        g = _fp_monic(g, p)
        for part, d in _fp_distinct_degree(g, p):
            for irr in _fp_equal_degree(part, d, p, rng):
                factors.append((irr, mult))
    factors.sort()
    return FactorizationModP(p, unit, tuple(factors))
