"""Multilinear polynomials and the operator calculus built on them.

A multilinear polynomial on variables x_1..x_n is stored as a map from
subset bitmask (bit i-1 encodes x_i) to a nonzero field coefficient.
Restriction, the discrete partial derivative, the pairwise commutator,
and the named constructors (elementary symmetric polynomials, the
top-degree combinations used by the hierarchy bound, and the weighted
4-variable quadratic family) all live here.

Two multiplications are exposed on purpose: ``mul_disjoint`` keeps the
result multilinear and refuses shared variables, while ``mul_general``
returns a :class:`SparsePoly` because commutators genuinely leave the
multilinear world (individual degrees up to 2, and up to 4 after one more
product).
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    DivisionByZero,
    EqualIndices,
    FieldMismatch,
    IndexOutOfRange,
    SharedVariables,
)
from .scalars import QQ, FieldDescriptor, FieldElem, format_scalar

MAX_VARIABLES = 30

Scalar = Union[int, FieldElem]


def _same_field(a: FieldDescriptor, b: FieldDescriptor):
    if a != b:
        raise FieldMismatch("polynomials over %s and %s" % (a, b))


class MultilinearPoly:
    """An exact multilinear polynomial; immutable by convention."""

    __slots__ = ("n", "field", "coeffs")

    def __init__(self, n: int, field: FieldDescriptor, coeffs: Dict[int, FieldElem]):
        if not (0 <= n <= MAX_VARIABLES):
            raise IndexOutOfRange("variable count %d outside 0..%d" % (n, MAX_VARIABLES))
        clean: Dict[int, FieldElem] = {}
        for mask, c in coeffs.items():
            if mask < 0 or mask >= (1 << n):
                raise IndexOutOfRange("monomial mask %d outside [0, 2^%d)" % (mask, n))
            c = field.elem(c)
            if not c.is_zero():
                clean[mask] = c
        self.n = n
        self.field = field
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int, field: FieldDescriptor) -> "MultilinearPoly":
        return cls(n, field, {})

    @classmethod
    def constant(cls, n: int, field: FieldDescriptor, c: Scalar) -> "MultilinearPoly":
        return cls(n, field, {0: field.elem(c)})

    @classmethod
    def variable(cls, n: int, field: FieldDescriptor, i: int) -> "MultilinearPoly":
        if not (1 <= i <= n):
            raise IndexOutOfRange("variable x%d outside 1..%d" % (i, n))
        return cls(n, field, {1 << (i - 1): field.one()})

    @classmethod
    def from_terms(
        cls, n: int, field: FieldDescriptor, terms: Dict[int, Scalar]
    ) -> "MultilinearPoly":
        return cls(n, field, {m: field.elem(c) for m, c in terms.items()})

    # -- basic queries -----------------------------------------------------

    def coeff(self, mask: int) -> FieldElem:
        return self.coeffs.get(mask, self.field.zero())

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return all(m == 0 for m in self.coeffs)

    def constant_term(self) -> FieldElem:
        return self.coeff(0)

    def var_mask(self) -> int:
        mask = 0
        for m in self.coeffs:
            mask |= m
        return mask

    def variables(self) -> List[int]:
        mask = self.var_mask()
        return [i + 1 for i in range(self.n) if mask & (1 << i)]

    def degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self.coeffs:
            return -1
        return max(m.bit_count() for m in self.coeffs)

    # -- ring operations ---------------------------------------------------

    def _check_compat(self, other: "MultilinearPoly"):
        _same_field(self.field, other.field)
        if self.n != other.n:
            raise IndexOutOfRange(
                "polynomials on %d and %d variables" % (self.n, other.n)
            )

    def __add__(self, other: "MultilinearPoly") -> "MultilinearPoly":
        self._check_compat(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m)
            out[m] = c if s is None else s + c
        return MultilinearPoly(self.n, self.field, out)

    def __sub__(self, other: "MultilinearPoly") -> "MultilinearPoly":
        self._check_compat(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m)
            out[m] = -c if s is None else s - c
        return MultilinearPoly(self.n, self.field, out)

    def __neg__(self) -> "MultilinearPoly":
        return MultilinearPoly(self.n, self.field, {m: -c for m, c in self.coeffs.items()})

    def scale(self, c: Scalar) -> "MultilinearPoly":
        c = self.field.elem(c)
        if c.is_zero():
            return MultilinearPoly.zero(self.n, self.field)
        return MultilinearPoly(
            self.n, self.field, {m: v * c for m, v in self.coeffs.items()}
        )

    def add_constant(self, c: Scalar) -> "MultilinearPoly":
        out = dict(self.coeffs)
        out[0] = self.coeff(0) + self.field.elem(c)
        return MultilinearPoly(self.n, self.field, out)

    def mul_disjoint(self, other: "MultilinearPoly") -> "MultilinearPoly":
        """Product of variable-disjoint factors; stays multilinear."""
        self._check_compat(other)
        if self.var_mask() & other.var_mask():
            raise SharedVariables(
                "factors share variables %s"
                % sorted(set(self.variables()) & set(other.variables()))
            )
        out: Dict[int, FieldElem] = {}
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                m = ma | mb
                c = ca * cb
                s = out.get(m)
                out[m] = c if s is None else s + c
        return MultilinearPoly(self.n, self.field, out)

    def mul_general(self, other: "MultilinearPoly") -> "SparsePoly":
        """Unrestricted product; the result may have individual degree 2."""
        self._check_compat(other)
        return SparsePoly.from_multilinear(self) * SparsePoly.from_multilinear(other)

    # -- the operator calculus --------------------------------------------

    def _check_index(self, i: int):
        if not (1 <= i <= self.n):
            raise IndexOutOfRange("variable x%d outside 1..%d" % (i, self.n))

    def restrict(self, i: int, v: Scalar) -> "MultilinearPoly":
        """Substitute the field constant v for x_i."""
        self._check_index(i)
        v = self.field.elem(v)
        bit = 1 << (i - 1)
        out: Dict[int, FieldElem] = {}
        for m, c in self.coeffs.items():
            if m & bit:
                if v.is_zero():
                    continue
                m2, c2 = m ^ bit, c * v
            else:
                m2, c2 = m, c
            s = out.get(m2)
            out[m2] = c2 if s is None else s + c2
        return MultilinearPoly(self.n, self.field, out)

    def restrict_many(self, assignment: Dict[int, Scalar]) -> "MultilinearPoly":
        p = self
        for i, v in assignment.items():
            p = p.restrict(i, v)
        return p

    def partial(self, i: int) -> "MultilinearPoly":
        """Discrete partial derivative: p|_{x_i=1} - p|_{x_i=0}."""
        self._check_index(i)
        bit = 1 << (i - 1)
        out = {m ^ bit: c for m, c in self.coeffs.items() if m & bit}
        return MultilinearPoly(self.n, self.field, out)

    def evaluate(self, point: Dict[int, Scalar]) -> FieldElem:
        """Evaluate at a full assignment of all variables in Var(p)."""
        p = self.restrict_many({i: point[i] for i in self.variables()})
        return p.constant_term()

    def with_n(self, n: int) -> "MultilinearPoly":
        """Re-declare the variable count (pad or shrink when unused)."""
        if n < self.n and self.var_mask() >= (1 << n):
            raise IndexOutOfRange("polynomial uses variables above x%d" % n)
        return MultilinearPoly(n, self.field, dict(self.coeffs))

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        return (
            self.n == other.n
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.n, self.field, frozenset(self.coeffs.items())))

    def __repr__(self):
        return "MultilinearPoly(%d, %r, %s)" % (self.n, self.field, _poly_str(self))

    def __str__(self):
        return _poly_str(self)


def _term_str(field: FieldDescriptor, c: FieldElem, factors: List[str]) -> str:
    if not factors:
        return format_scalar(c)
    if c.is_one():
        return "*".join(factors)
    if field.kind == "rationals" and c.value == -1:
        return "-" + "*".join(factors)
    return "*".join([format_scalar(c)] + factors)


def _poly_str(p: "MultilinearPoly") -> str:
    # Canonical ordering: mask ascending, constant term first.
    if not p.coeffs:
        return "0"
    rational = p.field.kind == "rationals"
    parts: List[str] = []
    for mask in sorted(p.coeffs):
        c = p.coeffs[mask]
        factors = ["x%d" % (i + 1) for i in range(p.n) if mask & (1 << i)]
        if rational and parts and c.value < 0:
            parts.append("- " + _term_str(p.field, -c, factors))
        elif parts:
            parts.append("+ " + _term_str(p.field, c, factors))
        else:
            parts.append(_term_str(p.field, c, factors))
    return " ".join(parts)


def format_poly(p: "MultilinearPoly") -> str:
    """Canonical text form: terms in mask order, e.g. ``1 + 2*x1 - x1*x2``."""
    return _poly_str(p)


class SparsePoly:
    """A small-degree polynomial keyed by per-variable exponent vectors.

    Individual exponents are bounded by 4: the largest objects the package
    ever builds are products of two individually-quadratic polynomials
    (squares of multilinear restrictions).
    """

    MAX_EXPONENT = 4

    __slots__ = ("n", "field", "coeffs")

    def __init__(
        self,
        n: int,
        field: FieldDescriptor,
        coeffs: Dict[Tuple[int, ...], FieldElem],
    ):
        clean: Dict[Tuple[int, ...], FieldElem] = {}
        for exps, c in coeffs.items():
            if len(exps) != n:
                raise IndexOutOfRange("exponent vector length %d != %d" % (len(exps), n))
            if any(e < 0 or e > self.MAX_EXPONENT for e in exps):
                raise IndexOutOfRange("individual exponent outside 0..4")
            c = field.elem(c)
            if not c.is_zero():
                clean[tuple(exps)] = c
        self.n = n
        self.field = field
        self.coeffs = clean

    @classmethod
    def zero(cls, n: int, field: FieldDescriptor) -> "SparsePoly":
        return cls(n, field, {})

    @classmethod
    def from_multilinear(cls, p: MultilinearPoly) -> "SparsePoly":
        out = {}
        for m, c in p.coeffs.items():
            out[tuple((m >> i) & 1 for i in range(p.n))] = c
        return cls(p.n, p.field, out)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_compat(self, other: "SparsePoly"):
        _same_field(self.field, other.field)
        if self.n != other.n:
            raise IndexOutOfRange(
                "polynomials on %d and %d variables" % (self.n, other.n)
            )

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_compat(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return SparsePoly(self.n, self.field, out)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_compat(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e)
            out[e] = -c if s is None else s - c
        return SparsePoly(self.n, self.field, out)

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.n, self.field, {e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_compat(other)
        out: Dict[Tuple[int, ...], FieldElem] = {}
        for ea, ca in self.coeffs.items():
            for eb, cb in other.coeffs.items():
                e = tuple(a + b for a, b in zip(ea, eb))
                c = ca * cb
                s = out.get(e)
                out[e] = c if s is None else s + c
        return SparsePoly(self.n, self.field, out)

    def scale(self, c: Scalar) -> "SparsePoly":
        c = self.field.elem(c)
        if c.is_zero():
            return SparsePoly.zero(self.n, self.field)
        return SparsePoly(self.n, self.field, {e: v * c for e, v in self.coeffs.items()})

    def substitute(self, i: int, value: Scalar) -> "SparsePoly":
        if not (1 <= i <= self.n):
            raise IndexOutOfRange("variable x%d outside 1..%d" % (i, self.n))
        v = self.field.elem(value)
        out: Dict[Tuple[int, ...], FieldElem] = {}
        for e, c in self.coeffs.items():
            k = e[i - 1]
            if k:
                c = c * _pow(v, k)
                if c.is_zero():
                    continue
            e2 = e[: i - 1] + (0,) + e[i:]
            s = out.get(e2)
            out[e2] = c if s is None else s + c
        return SparsePoly(self.n, self.field, out)

    def divide_exact(self, divisor: "SparsePoly") -> Optional["SparsePoly"]:
        """Exact quotient self / divisor, or None when division is inexact.

        Plain multivariate long division in lex order; for a single divisor
        the remainder vanishes exactly when the divisor divides self.
        Intermediate terms are kept on raw dicts so the exponent cap only
        applies to the final quotient.
        """
        self._check_compat(divisor)
        if divisor.is_zero():
            raise DivisionByZero("division by the zero polynomial")
        lead = max(divisor.coeffs)
        lead_c = divisor.coeffs[lead]
        rem = dict(self.coeffs)
        quot: Dict[Tuple[int, ...], FieldElem] = {}
        while rem:
            e = max(rem)
            if any(a < b for a, b in zip(e, lead)):
                return None
            shift = tuple(a - b for a, b in zip(e, lead))
            factor = rem[e] / lead_c
            q = quot.get(shift)
            quot[shift] = factor if q is None else q + factor
            for de, dc in divisor.coeffs.items():
                t = tuple(a + b for a, b in zip(shift, de))
                c = dc * factor
                s = rem.get(t)
                s = -c if s is None else s - c
                if s.is_zero():
                    rem.pop(t, None)
                else:
                    rem[t] = s
        return SparsePoly(self.n, self.field, quot)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return (
            self.n == other.n
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.n, self.field, frozenset(self.coeffs.items())))

    def __repr__(self):
        return "SparsePoly(%d, %r, %s)" % (self.n, self.field, sparse_str(self))

    def __str__(self):
        return sparse_str(self)


def _pow(v: FieldElem, k: int) -> FieldElem:
    out = v
    for _ in range(k - 1):
        out = out * v
    return out


def sparse_str(p: SparsePoly) -> str:
    """Display form mirroring the multilinear one; repeated factors show
    powers, e.g. ``x3*x3``."""
    if not p.coeffs:
        return "0"

    def key(e):
        return sum(v * (SparsePoly.MAX_EXPONENT + 1) ** i for i, v in enumerate(e))

    rational = p.field.kind == "rationals"
    parts: List[str] = []
    for e in sorted(p.coeffs, key=key):
        c = p.coeffs[e]
        factors = []
        for i, k in enumerate(e):
            factors.extend(["x%d" % (i + 1)] * k)
        if rational and parts and c.value < 0:
            parts.append("- " + _term_str(p.field, -c, factors))
        elif parts:
            parts.append("+ " + _term_str(p.field, c, factors))
        else:
            parts.append(_term_str(p.field, c, factors))
    return " ".join(parts)


# -- the commutator ---------------------------------------------------------


def commutator(p: MultilinearPoly, i: int, j: int) -> SparsePoly:
    """The pairwise commutator of p between x_i and x_j.

    (p|_{i=0,j=0})(p|_{i=1,j=1}) - (p|_{i=0,j=1})(p|_{i=1,j=0}), computed
    exactly.  The result is generally not multilinear.
    """
    if i == j:
        raise EqualIndices("commutator needs two distinct variables")
    p._check_index(i)
    p._check_index(j)
    p00 = p.restrict(i, 0).restrict(j, 0)
    p11 = p.restrict(i, 1).restrict(j, 1)
    p01 = p.restrict(i, 0).restrict(j, 1)
    p10 = p.restrict(i, 1).restrict(j, 0)
    return p00.mul_general(p11) - p01.mul_general(p10)


# -- named constructors ------------------------------------------------------


def elementary_symmetric(n: int, k: int, field: FieldDescriptor = QQ) -> MultilinearPoly:
    """S_n^k: the sum of all degree-k multilinear monomials on n variables."""
    if not (0 <= k <= n):
        raise IndexOutOfRange("need 0 <= k <= n, got k=%d, n=%d" % (k, n))
    one = field.one()
    coeffs = {}
    for subset in combinations(range(n), k):
        mask = 0
        for i in subset:
            mask |= 1 << i
        coeffs[mask] = one
    return MultilinearPoly(n, field, coeffs)


def _infer_field(field: Optional[FieldDescriptor], *scalars) -> FieldDescriptor:
    if field is not None:
        return field
    for s in scalars:
        if isinstance(s, FieldElem):
            return s.field
    return QQ


def m_poly(
    n: int, alpha: Scalar, beta: Scalar, field: Optional[FieldDescriptor] = None
) -> MultilinearPoly:
    """alpha*S_n^n + beta*S_n^{n-1}: the hierarchy family's witness."""
    field = _infer_field(field, alpha, beta)
    top = elementary_symmetric(n, n, field).scale(field.elem(alpha))
    sub = elementary_symmetric(n, n - 1, field).scale(field.elem(beta))
    return top + sub


def family4(
    alpha: Scalar,
    beta: Scalar,
    gamma: Scalar,
    field: Optional[FieldDescriptor] = None,
) -> MultilinearPoly:
    """The weighted perfect-matching family on four variables:
    alpha(x1x2 + x3x4) + beta(x1x3 + x2x4) + gamma(x1x4 + x2x3)."""
    field = _infer_field(field, alpha, beta, gamma)
    a = field.elem(alpha)
    b = field.elem(beta)
    c = field.elem(gamma)
    return MultilinearPoly(
        4,
        field,
        {0b0011: a, 0b1100: a, 0b0101: b, 0b1010: b, 0b1001: c, 0b0110: c},
    )


def linear_dependent(polys: Sequence[MultilinearPoly]) -> Optional[List[FieldElem]]:
    """A nonzero coefficient vector (a_1..a_k) with sum a_i * p_i = 0, if any.

    Exact Gaussian elimination on the coefficient matrix in the monomial
    basis; the first dependence found is normalized to leading coefficient 1.
    """
    if not polys:
        return None
    field = polys[0].field
    n = polys[0].n
    for p in polys[1:]:
        _same_field(field, p.field)
        if p.n != n:
            raise IndexOutOfRange("mixed variable counts in dependence test")

    masks = sorted({m for p in polys for m in p.coeffs})
    col = {m: idx for idx, m in enumerate(masks)}
    zero = field.zero()
    rows = []
    combos = []
    k = len(polys)
    for r, p in enumerate(polys):
        vec = [zero] * len(masks)
        for m, c in p.coeffs.items():
            vec[col[m]] = c
        combo = [zero] * k
        combo[r] = field.one()
        rows.append(vec)
        combos.append(combo)

    pivots: List[Tuple[int, List[FieldElem], List[FieldElem]]] = []
    for vec, combo in zip(rows, combos):
        for pcol, pvec, pcombo in pivots:
            c = vec[pcol]
            if not c.is_zero():
                vec = [a - c * b for a, b in zip(vec, pvec)]
                combo = [a - c * b for a, b in zip(combo, pcombo)]
        lead = next((idx for idx, c in enumerate(vec) if not c.is_zero()), None)
        if lead is None:
            first = next(idx for idx, c in enumerate(combo) if not c.is_zero())
            inv = combo[first].inverse()
            return [c * inv for c in combo]
        inv = vec[lead].inverse()
        vec = [c * inv for c in vec]
        combo = [c * inv for c in combo]
        pivots.append((lead, vec, combo))
    return None
