"""Even integral lattices: catalog, invariants, discriminant forms, reflections.

A lattice is stored as its Gram matrix on a fixed basis.  All invariants are
computed with exact integer/rational arithmetic; the only floating point in the
module is the optional numeric path of :func:`is_period_point`.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .exactalg import (
    ExactMatrix,
    det_fraction_free,
    inertia,
    integer_kernel,
    smith_normal_form,
)


class UnknownLatticeError(ValueError):
    """Catalog name not recognized."""


class DegenerateLatticeError(ValueError):
    """Operation requires a nondegenerate Gram matrix."""


class OrderTooLargeError(ValueError):
    """Finite-group enumeration exceeds the configured bound."""


class WrongNormError(ValueError):
    """Reflection vectors must have self-intersection -2."""


class DependentBasisError(ValueError):
    """Sublattice basis vectors are linearly dependent."""


class ZeroVectorError(ValueError):
    """The zero vector is not a valid period candidate."""


@dataclass(frozen=True)
class GramLattice:
    """Even integral lattice given by a symmetric Gram matrix."""

    gram: ExactMatrix
    label: str = ""

    def __post_init__(self):
        if not self.gram.is_symmetric():
            raise ValueError("Gram matrix must be symmetric")
        if not self.gram.is_integral():
            raise ValueError("Gram matrix must be integral")
        for i in range(self.gram.rows):
            if self.gram[i, i] % 2 != 0:
                raise ValueError("lattice is not even: odd diagonal entry")

    @property
    def rank(self) -> int:
        return self.gram.rows

    def det(self) -> int:
        return det_fraction_free(self.gram)

    def inner(self, u, v) -> Fraction:
        """Bilinear form of two vectors given in basis coordinates."""
        gv = self.gram.apply(v)
        return sum(Fraction(u[i]) * gv[i] for i in range(self.rank))

    def norm(self, v) -> Fraction:
        return self.inner(v, v)


def _dynkin_a(k: int):
    """Gram matrix of the A_k root lattice (tridiagonal, 2 on the diagonal,
    -1 on the adjacent off-diagonals, the Cartan-matrix convention)."""
    return [
        [2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(k)]
        for i in range(k)
    ]


def _dynkin_e(n: int):
    """Gram matrix of E_n (n in 6..8): an A_{n-1} chain plus one extra node.

    Nodes 0..n-2 form the chain; node n-1 is attached to chain node n-4,
    the standard E-series diagram.
    """
    g = _dynkin_a(n - 1)
    for row in g:
        row.append(0)
    g.append([0] * n)
    g[n - 1][n - 1] = 2
    g[n - 1][n - 4] = -1
    g[n - 4][n - 1] = -1
    return g


_NAME_RE = re.compile(r"^([UAEI])(\d*)(?:\(\s*(-?\d+)\s*\))?$")


def catalog(name: str) -> GramLattice:
    """Standard lattice by name: U, U(n), A_k(e), E6/E7/E8(e), I_k(n), diag(...).

    The optional parenthesized integer rescales the Gram matrix (e = -1 gives
    the negative-definite form of a root lattice).
    """
    text = name.replace(" ", "")
    if text.startswith("diag(") and text.endswith(")"):
        values = [int(x) for x in text[5:-1].split(",")]
        if any(v % 2 for v in values):
            raise UnknownLatticeError(f"diag entries must be even: {name}")
        return GramLattice(ExactMatrix.diagonal(values), label=name)
    m = _NAME_RE.match(text)
    if not m:
        raise UnknownLatticeError(f"unknown lattice name: {name}")
    family, index, scale = m.group(1), m.group(2), m.group(3)
    scale = 1 if scale is None else int(scale)
    if scale == 0:
        raise UnknownLatticeError(f"zero scale in {name}")
    if family == "U":
        if index:
            raise UnknownLatticeError(f"unknown lattice name: {name}")
        rows = [[0, 1], [1, 0]]
    elif family == "A":
        k = int(index) if index else 0
        if k < 1:
            raise UnknownLatticeError(f"A needs a positive rank: {name}")
        rows = _dynkin_a(k)
    elif family == "E":
        n = int(index) if index else 0
        if n not in (6, 7, 8):
            raise UnknownLatticeError(f"E needs rank 6, 7 or 8: {name}")
        rows = _dynkin_e(n)
    else:  # I_k(n): rank-k diagonal lattice with entry n
        k = int(index) if index else 0
        if k < 1:
            raise UnknownLatticeError(f"I needs a positive rank: {name}")
        if scale % 2:
            raise UnknownLatticeError(f"I_k needs an even scale: {name}")
        rows = [[scale if i == j else 0 for j in range(k)] for i in range(k)]
        return GramLattice(ExactMatrix.from_rows(rows), label=text)
    gram = ExactMatrix.from_rows(rows)
    if scale != 1:
        gram = gram.scale(scale)
    return GramLattice(gram, label=text)


def direct_sum(lattices, label: str = "") -> GramLattice:
    """Orthogonal direct sum, Gram matrices on the block diagonal."""
    lats = list(lattices)
    total = sum(l.rank for l in lats)
    rows = [[0] * total for _ in range(total)]
    offset = 0
    for lat in lats:
        for i in range(lat.rank):
            for j in range(lat.rank):
                rows[offset + i][offset + j] = int(lat.gram[i, j])
        offset += lat.rank
    if not label:
        label = " + ".join(l.label or "?" for l in lats)
    return GramLattice(ExactMatrix.from_rows(rows), label=label)


def rescale(lat: GramLattice, n: int) -> GramLattice:
    if n == 0:
        raise ValueError("rescale by zero")
    return GramLattice(lat.gram.scale(n), label=f"{lat.label}({n})")


def signature(lat: GramLattice):
    """Signature (s_plus, s_minus); degenerate lattices are rejected."""
    pos, neg, zero = inertia(lat.gram)
    if zero:
        raise DegenerateLatticeError(f"{lat.label or 'lattice'} is degenerate")
    return pos, neg


def _reduce_mod2(x: Fraction) -> Fraction:
    num = x.numerator % (2 * x.denominator)
    return Fraction(num, x.denominator)


def _reduce_mod1(x: Fraction) -> Fraction:
    return Fraction(x.numerator % x.denominator, x.denominator)


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """Discriminant group with its Q/2Z-valued quadratic form.

    The group is a product of cyclic groups of the listed orders; elements are
    integer tuples modulo those orders.  ``q_diag[i]`` is q of the i-th
    generator (mod 2Z) and ``bilinear[i][j]`` the pairing b of generators i, j
    (mod Z), with b(x, x) = q(x) mod Z on the diagonal.
    """

    generator_orders: tuple
    q_diag: tuple
    bilinear: tuple

    @property
    def order(self) -> int:
        n = 1
        for d in self.generator_orders:
            n *= d
        return n

    def elements(self):
        return product(*(range(d) for d in self.generator_orders))

    def q_of(self, element) -> Fraction:
        """Quadratic value of an element (integer tuple), reduced mod 2Z."""
        total = Fraction(0)
        k = len(self.generator_orders)
        for i in range(k):
            total += element[i] * element[i] * self.q_diag[i]
            for j in range(i + 1, k):
                total += 2 * element[i] * element[j] * self.bilinear[i][j]
        return _reduce_mod2(total)

    def b_of(self, e1, e2) -> Fraction:
        """Bilinear pairing of two elements, reduced mod Z."""
        total = Fraction(0)
        k = len(self.generator_orders)
        for i in range(k):
            for j in range(k):
                total += e1[i] * e2[j] * self.bilinear[i][j]
        return _reduce_mod1(total)

    def element_order(self, element) -> int:
        orders = []
        for x, d in zip(element, self.generator_orders):
            g = _gcd(x % d, d)
            orders.append(d // g if g else 1)
        return _lcm_list(orders)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _lcm_list(values):
    out = 1
    for v in values:
        out = out * v // _gcd(out, v) if v else out
    return out


def discriminant_group(lat: GramLattice) -> FiniteQuadraticForm:
    """Discriminant form on A-dual/A computed from the Smith normal form."""
    if lat.det() == 0:
        raise DegenerateLatticeError(f"{lat.label or 'lattice'} is degenerate")
    d, u, _v = smith_normal_form(lat.gram)
    n = lat.rank
    ginv = lat.gram.inverse()
    uinv = u.inverse()
    orders = []
    dual_gens = []
    for i in range(n):
        di = int(d[i, i])
        if di > 1:
            orders.append(di)
            # class of u^{-1} e_i in Z^n / gram Z^n; dual vector is G^{-1} x
            x = tuple(uinv[r, i] for r in range(n))
            dual_gens.append(ginv.apply(x))
    k = len(orders)
    q_diag = []
    bilinear = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        q_diag.append(_reduce_mod2(lat.inner(dual_gens[i], dual_gens[i])))
        for j in range(k):
            bilinear[i][j] = _reduce_mod1(lat.inner(dual_gens[i], dual_gens[j]))
    return FiniteQuadraticForm(
        generator_orders=tuple(orders),
        q_diag=tuple(q_diag),
        bilinear=tuple(tuple(row) for row in bilinear),
    )


def _homomorphism_images(q: FiniteQuadraticForm, target: FiniteQuadraticForm):
    """Candidate generator images for a q-preserving homomorphism q -> target."""
    by_gen = []
    targets = list(target.elements())
    for i, d in enumerate(q.generator_orders):
        candidates = []
        for e in targets:
            if (target.element_order(e) * 1) and d % target.element_order(e) == 0:
                if target.q_of(e) == q.q_diag[i]:
                    candidates.append(e)
        by_gen.append(candidates)
    return by_gen


def _maps_between(q: FiniteQuadraticForm, target: FiniteQuadraticForm, bound: int):
    """All q-isomorphisms q -> target, as tuples of generator images."""
    if q.order > bound or target.order > bound:
        raise OrderTooLargeError(f"group order exceeds bound {bound}")
    if q.order != target.order:
        return []
    if q.generator_orders == ():
        return [()]
    by_gen = _homomorphism_images(q, target)
    k = len(q.generator_orders)
    found = []
    for images in product(*by_gen):
        ok = True
        for i in range(k):
            for j in range(i + 1, k):
                if target.b_of(images[i], images[j]) != q.bilinear[i][j]:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        # bijectivity: the images must generate all of target
        seen = set()
        for coeffs in q.elements():
            img = tuple(
                sum(c * images[g][t] for g, c in enumerate(coeffs))
                % target.generator_orders[t]
                for t in range(len(target.generator_orders))
            )
            seen.add(img)
        if len(seen) == q.order:
            found.append(images)
    return found


def finite_form_automorphisms(q: FiniteQuadraticForm, bound: int = 10_000):
    """Count (and list) automorphisms of a finite quadratic form.

    Returns ``(count, automorphisms)`` where each automorphism is the tuple of
    generator images.
    """
    autos = _maps_between(q, q, bound)
    return len(autos), autos


def finite_forms_isomorphic(q1: FiniteQuadraticForm, q2: FiniteQuadraticForm, bound: int = 10_000) -> bool:
    return bool(_maps_between(q1, q2, bound))


def rank_mod_p(lat: GramLattice, p: int) -> int:
    """Rank of the Gram matrix over the field with p elements."""
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    n = lat.rank
    a = [[int(lat.gram[i, j]) % p for j in range(n)] for i in range(n)]
    rank = 0
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, n) if a[i][col] % p), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = pow(a[row][col], -1, p)
        a[row] = [(x * inv) % p for x in a[row]]
        for i in range(n):
            if i != row and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[row])]
        row += 1
        rank += 1
        if row == n:
            break
    return rank


@dataclass(frozen=True)
class KneserReport:
    """Verdicts for the four Kneser conditions.

    Each verdict is "pass", "fail", or "inconclusive"; the overall verdict is
    "pass" only when all four conditions are certified.
    """

    signature_ok: str
    minus_two_vector: str
    rank_mod_2_ok: str
    rank_mod_3_ok: str
    witness: tuple = None
    details: dict = field(default_factory=dict)

    @property
    def overall(self) -> str:
        verdicts = (
            self.signature_ok,
            self.minus_two_vector,
            self.rank_mod_2_ok,
            self.rank_mod_3_ok,
        )
        if all(v == "pass" for v in verdicts):
            return "pass"
        if any(v == "fail" for v in verdicts):
            return "fail"
        return "inconclusive"


def _minus_two_search(lat: GramLattice, bound: int):
    """A vector of norm -2: basis vectors first, then a bounded box."""
    n = lat.rank
    for i in range(n):
        if lat.gram[i, i] == -2:
            return tuple(1 if j == i else 0 for j in range(n))
    for coords in product(range(-bound, bound + 1), repeat=n):
        if any(coords) and lat.norm(coords) == -2:
            return coords
    return None


def kneser_check(lat: GramLattice, search_bound: int = 2) -> KneserReport:
    """The four Kneser conditions for an even indefinite lattice."""
    s_pos, s_neg = signature(lat)
    sig_ok = "pass" if min(s_pos, s_neg) >= 2 else "fail"
    witness = _minus_two_search(lat, search_bound)
    minus_two = "pass" if witness is not None else "inconclusive"
    r2 = rank_mod_p(lat, 2)
    r3 = rank_mod_p(lat, 3)
    return KneserReport(
        signature_ok=sig_ok,
        minus_two_vector=minus_two,
        rank_mod_2_ok="pass" if r2 >= 6 else "fail",
        rank_mod_3_ok="pass" if r3 >= 5 else "fail",
        witness=witness,
        details={
            "signature": (s_pos, s_neg),
            "rank_mod_2": r2,
            "rank_mod_3": r3,
            "search_bound": search_bound,
        },
    )


@dataclass(frozen=True)
class Isometry:
    """Integral isometry of a lattice with its determinant and disc action."""

    matrix: ExactMatrix
    det: int
    fixes_discriminant_group: bool


def reflection(lat: GramLattice, delta) -> Isometry:
    """Reflection z -> z + (z, delta) delta in a vector of norm -2."""
    if lat.norm(delta) != -2:
        raise WrongNormError(f"(delta, delta) = {lat.norm(delta)} != -2")
    n = lat.rank
    gd = lat.gram.apply(delta)
    rows = [
        [
            Fraction(1 if r == c else 0) + Fraction(delta[r]) * gd[c]
            for c in range(n)
        ]
        for r in range(n)
    ]
    m = ExactMatrix.from_rows(rows)
    if m.transpose() @ lat.gram @ m != lat.gram:
        raise AssertionError("reflection failed to preserve the Gram matrix")
    det = det_fraction_free(m)
    fixes = _acts_trivially_on_discriminant(lat, m)
    return Isometry(matrix=m, det=det, fixes_discriminant_group=fixes)


def _acts_trivially_on_discriminant(lat: GramLattice, m: ExactMatrix) -> bool:
    """Whether the isometry moves every dual vector by a lattice vector."""
    d, u, _v = smith_normal_form(lat.gram)
    ginv = lat.gram.inverse()
    uinv = u.inverse()
    n = lat.rank
    for i in range(n):
        if int(d[i, i]) <= 1:
            continue
        x = tuple(uinv[r, i] for r in range(n))
        w = ginv.apply(x)
        moved = m.apply(w)
        if any((moved[r] - w[r]).denominator != 1 for r in range(n)):
            return False
    return True


def _coordinate_rank(vectors, n) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    rank = 0
    col = 0
    while rank < len(rows) and col < n:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        rows[rank] = [x / p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


def orthogonal_complement(ambient: GramLattice, sub_basis) -> GramLattice:
    """Gram matrix of the primitive orthogonal complement of a sublattice."""
    basis = [tuple(int(x) for x in v) for v in sub_basis]
    n = ambient.rank
    if _coordinate_rank(basis, n) != len(basis):
        raise DependentBasisError("sublattice basis is linearly dependent")
    pairing = ExactMatrix.from_rows(
        [[int(ambient.inner(v, _unit(n, j))) for j in range(n)] for v in basis]
    )
    kernel = integer_kernel(pairing)
    gram = ExactMatrix.from_rows(
        [[int(ambient.inner(a, b)) for b in kernel] for a in kernel]
    )
    return GramLattice(gram, label=f"({ambient.label})^perp")


def _unit(n, j):
    return tuple(1 if i == j else 0 for i in range(n))


def is_primitive_sublattice(ambient: GramLattice, sub_basis) -> bool:
    """True iff the span of sub_basis is saturated in the ambient lattice."""
    basis = [tuple(int(x) for x in v) for v in sub_basis]
    if _coordinate_rank(basis, ambient.rank) != len(basis):
        raise DependentBasisError("sublattice basis is linearly dependent")
    coord = ExactMatrix.from_rows(basis)
    d, _u, _v = smith_normal_form(coord)
    for i in range(len(basis)):
        if int(d[i, i]) != 1:
            return False
    return True


def same_genus_invariants(lat1: GramLattice, lat2: GramLattice, bound: int = 10_000) -> bool:
    """Equal signatures and isomorphic discriminant quadratic forms."""
    if signature(lat1) != signature(lat2):
        return False
    return finite_forms_isomorphic(
        discriminant_group(lat1), discriminant_group(lat2), bound
    )


def is_period_point(lat: GramLattice, xi, tol: float = 1e-9) -> bool:
    """Riemann-Hodge membership test: (xi, xi) = 0 and (xi, conj xi) > 0.

    Coordinates may be Python complex numbers (tolerance-based test) or pairs
    ``(re, im)`` of exact rationals (exact test, tol ignored).
    """
    coords = list(xi)
    if len(coords) != lat.rank:
        raise ValueError("coordinate length does not match rank")
    exact = all(isinstance(c, tuple) for c in coords)
    if exact:
        re = [Fraction(c[0]) for c in coords]
        im = [Fraction(c[1]) for c in coords]
        if all(x == 0 for x in re) and all(x == 0 for x in im):
            raise ZeroVectorError("xi must be nonzero")
        # (xi, xi) = (re, re) - (im, im) + 2i (re, im); (xi, conj xi) real part
        rr = lat.inner(re, re)
        ii = lat.inner(im, im)
        ri = lat.inner(re, im)
        return rr - ii == 0 and ri == 0 and rr + ii > 0
    values = [complex(c) for c in coords]
    if all(abs(v) == 0 for v in values):
        raise ZeroVectorError("xi must be nonzero")
    gram_norm = max(abs(int(lat.gram[i, j])) for i in range(lat.rank) for j in range(lat.rank))
    scale = sum(abs(v) ** 2 for v in values) * max(gram_norm, 1)
    s1 = sum(
        values[i] * int(lat.gram[i, j]) * values[j]
        for i in range(lat.rank)
        for j in range(lat.rank)
    )
    s2 = sum(
        values[i] * int(lat.gram[i, j]) * values[j].conjugate()
        for i in range(lat.rank)
        for j in range(lat.rank)
    )
    return abs(s1) <= tol * scale and s2.real > tol * scale


# -- the lattices of the verification suite -----------------------------------


def k3_lattice() -> GramLattice:
    """The even unimodular lattice of signature (3,19): U^3 + E8(-1)^2."""
    return direct_sum(
        [catalog("U"), catalog("U"), catalog("U"), catalog("E8(-1)"), catalog("E8(-1)")],
        label="L",
    )


def m_sublattice_basis():
    """Basis of the rank-16 sublattice U + E8(-1) + E6(-1) inside k3_lattice().

    The first hyperbolic plane and the first E8(-1) block are taken whole; the
    E6(-1) part is the standard E6 sub-diagram of the second E8(-1) block
    (chain nodes 2..6 plus the extra node 7, which is attached to chain
    node 4).
    """
    n = 22
    indices = [0, 1] + list(range(6, 14)) + list(range(16, 22))
    return [_unit(n, i) for i in indices]


def m_lattice() -> GramLattice:
    """Gram matrix of U + E8(-1) + E6(-1) on the embedded basis."""
    big = k3_lattice()
    basis = m_sublattice_basis()
    gram = ExactMatrix.from_rows(
        [[int(big.inner(a, b)) for b in basis] for a in basis]
    )
    return GramLattice(gram, label="M")


def a_lattice() -> GramLattice:
    """U + U + A2(-1), signature (2,4), discriminant group of order 3."""
    return direct_sum([catalog("U"), catalog("U"), catalog("A2(-1)")], label="A")


def a_s_lattice() -> GramLattice:
    """U + U + A1(-1), the rank-5 comparison lattice."""
    return direct_sum([catalog("U"), catalog("U"), catalog("A1(-1)")], label="A_S")


def a_msy_lattice() -> GramLattice:
    """U(2) + U(2) + I2(-2), the rank-6 comparison lattice."""
    return direct_sum(
        [catalog("U(2)"), catalog("U(2)"), catalog("I2(-2)")], label="A_MSY"
    )


def a_cms_lattice() -> GramLattice:
    """U + U + I2(-2), another rank-6 comparison lattice."""
    return direct_sum(
        [catalog("U"), catalog("U"), catalog("I2(-2)")], label="A_CMS"
    )


# -- JSON interchange ----------------------------------------------------------


def lattice_to_json(lat: GramLattice) -> str:
    return json.dumps({"label": lat.label, "gram": lat.gram.to_int_rows()})


def lattice_from_json(text: str) -> GramLattice:
    obj = json.loads(text)
    return GramLattice(ExactMatrix.from_rows(obj["gram"]), label=obj.get("label", ""))
