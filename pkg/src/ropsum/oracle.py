"""Exhaustive finite-field ground truth for read-once expressibility.

``enumerate_rops`` computes, for a small prime field and a small variable
count, the set of *all* functions computable by read-once formulas: a
dynamic program over nonempty variable subsets merges the function sets
of the two sides of every possible top gate, deduplicating at the level
of functions rather than trees.  Internally polynomials are carried as
evaluation tables over the 0/1 cube (gates act pointwise there); the
final class is stored in the packed coefficient encoding: 2^n base-p
digits, one per monomial mask.

``min_k`` answers the minimal-summand question by sumset search on the
class, and ``closure_report`` checks closure under derivatives and
restrictions member by member.

Feasible parameters: p=2 up to n=5, p=3 up to n=4, p=5 up to n=3.
Enumeration is single-threaded and deterministic; a class can be
persisted to a flat binary file and reloaded bit-exactly.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import (
    InfeasibleParameters,
    ParameterMismatch,
    ParseError,
    PreconditionViolated,
)
from .mpoly import MultilinearPoly
from .scalars import prime_field

_FEASIBLE = {2: 5, 3: 4, 5: 3}

KMAX_LIMIT = 4


@dataclass(frozen=True)
class PackedPoly:
    """A multilinear polynomial over F_p on n variables, packed into an int:
    digit ``mask`` (base p) is the coefficient of the monomial ``mask``."""

    p: int
    n: int
    value: int

    def __post_init__(self):
        if self.value < 0 or self.value >= self.p ** (1 << self.n):
            raise PreconditionViolated("packed value outside its digit range")


def pack(poly: MultilinearPoly) -> PackedPoly:
    """Pack a prime-field polynomial into its integer encoding."""
    if poly.field.kind != "prime":
        raise ParameterMismatch("packing needs a prime-field polynomial")
    p = poly.field.p
    value = 0
    for mask, c in poly.coeffs.items():
        value += c.value * p**mask
    return PackedPoly(p, poly.n, value)


def unpack(packed: PackedPoly) -> MultilinearPoly:
    field = prime_field(packed.p)
    coeffs = {}
    v = packed.value
    mask = 0
    while v:
        v, digit = divmod(v, packed.p)
        if digit:
            coeffs[mask] = field.elem(digit)
        mask += 1
    return MultilinearPoly(packed.n, field, coeffs)


def _digits(value: int, p: int, count: int) -> List[int]:
    out = [0] * count
    for i in range(count):
        value, out[i] = divmod(value, p)
    return out


def _undigits(digits: Sequence[int], p: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * p + d
    return value


def _evals_to_coeffs(evals: List[int], p: int, n: int) -> List[int]:
    # Moebius inversion over the 0/1 cube, one variable at a time.
    out = list(evals)
    for b in range(n):
        bit = 1 << b
        for s in range(1 << n):
            if s & bit:
                out[s] = (out[s] - out[s ^ bit]) % p
    return out


def _coeffs_to_evals(coeffs: List[int], p: int, n: int) -> List[int]:
    out = list(coeffs)
    for b in range(n):
        bit = 1 << b
        for s in range(1 << n):
            if s & bit:
                out[s] = (out[s] + out[s ^ bit]) % p
    return out


@dataclass
class RopClass:
    """The deduplicated set of read-once computable functions over F_p."""

    p: int
    n: int
    members: Tuple[int, ...]  # sorted packed coefficient encodings
    _member_set: frozenset = dataclass_field(repr=False, default=None)

    def __post_init__(self):
        if self._member_set is None:
            object.__setattr__(self, "_member_set", frozenset(self.members))

    def __contains__(self, packed_value: int) -> bool:
        return packed_value in self._member_set

    def __len__(self):
        return len(self.members)


def _submasks_with_lowest(u: int) -> Iterable[int]:
    """Proper nonempty submasks of u that contain u's lowest set bit;
    each unordered bipartition {A, u^A} is produced exactly once."""
    low = u & -u
    rest = u ^ low
    sub = rest
    while True:
        sub = (sub - 1) & rest
        yield low | sub
        if sub == 0:
            return


def _enumerate_f2(n: int) -> List[int]:
    size = 1 << n
    all_ones = (1 << size) - 1
    # var_pattern[i] has bit s set iff assignment s sets x_{i+1} to 1
    var_pattern = []
    for i in range(n):
        pat = 0
        for s in range(size):
            if s & (1 << i):
                pat |= 1 << s
        var_pattern.append(pat)

    tables: Dict[int, Set[int]] = {}
    for u in sorted(range(1, 1 << n), key=lambda m: m.bit_count()):
        out: Set[int] = {0, all_ones}
        if u.bit_count() == 1:
            pat = var_pattern[u.bit_length() - 1]
            out.add(pat)
            out.add(pat ^ all_ones)
        else:
            for a in _submasks_with_lowest(u):
                b = u ^ a
                if b == 0:
                    continue
                ta, tb = tables[a], tables[b]
                for left in ta:
                    for right in tb:
                        for raw in (left ^ right, left & right):
                            out.add(raw)
                            out.add(raw ^ all_ones)
        tables[u] = out

    union: Set[int] = set()
    for s in tables.values():
        union |= s

    # evaluation tables -> packed coefficient masks (both are 2^n-bit ints):
    # positions s and s^bit differ by a bit-shift of exactly `bit`
    low_half = []
    for b in range(n):
        bit = 1 << b
        mask = 0
        for s in range(size):
            if not s & bit:
                mask |= 1 << s
        low_half.append((mask, bit))
    members = []
    for t in union:
        for mask, shift in low_half:
            t ^= (t & mask) << shift
        members.append(t)
    return sorted(set(members))


def _enumerate_odd(p: int, n: int) -> List[int]:
    size = 1 << n
    # affine post-maps t -> alpha*t + beta for alpha != 0, as lookup tables
    affine = [
        tuple((alpha * v + beta) % p for v in range(p))
        for alpha in range(1, p)
        for beta in range(p)
    ]
    constants = {tuple([beta] * size) for beta in range(p)}

    tables: Dict[int, Set[Tuple[int, ...]]] = {}
    for u in sorted(range(1, 1 << n), key=lambda m: m.bit_count()):
        out: Set[Tuple[int, ...]] = set(constants)
        if u.bit_count() == 1:
            i = u.bit_length() - 1
            base = tuple((s >> i) & 1 for s in range(size))
            for av in affine:
                out.add(tuple(av[v] for v in base))
        else:
            add_mod = [[(x + y) % p for y in range(p)] for x in range(p)]
            mul_mod = [[(x * y) % p for y in range(p)] for x in range(p)]
            for a in _submasks_with_lowest(u):
                b = u ^ a
                if b == 0:
                    continue
                for left in tables[a]:
                    for right in tables[b]:
                        summed = tuple(
                            add_mod[x][y] for x, y in zip(left, right)
                        )
                        product = tuple(
                            mul_mod[x][y] for x, y in zip(left, right)
                        )
                        for raw in (summed, product):
                            for av in affine:
                                out.add(tuple(av[v] for v in raw))
        tables[u] = out

    union: Set[Tuple[int, ...]] = set()
    for s in tables.values():
        union |= s
    members = {
        _undigits(_evals_to_coeffs(list(t), p, n), p) for t in union
    }
    return sorted(members)


def enumerate_rops(p: int, n: int) -> RopClass:
    """All read-once computable functions over F_p on variables x_1..x_n."""
    limit = _FEASIBLE.get(p)
    if limit is None or n > limit or n < 1:
        raise InfeasibleParameters(
            "supported: p=2 with n<=5, p=3 with n<=4, p=5 with n<=3"
        )
    members = _enumerate_f2(n) if p == 2 else _enumerate_odd(p, n)
    return RopClass(p, n, tuple(members))


# ---------------------------------------------------------------------------
# sumset queries
# ---------------------------------------------------------------------------


def _check_target(target: PackedPoly, cls: RopClass):
    if target.p != cls.p or target.n != cls.n:
        raise ParameterMismatch(
            "target is (p=%d, n=%d), class is (p=%d, n=%d)"
            % (target.p, target.n, cls.p, cls.n)
        )


def _packed_sub(t: int, s: int, p: int, size: int) -> int:
    if p == 2:
        return t ^ s
    out = 0
    scale = 1
    for _ in range(size):
        t, dt = divmod(t, p)
        s, ds = divmod(s, p)
        out += ((dt - ds) % p) * scale
        scale *= p
    return out


def min_k(target: PackedPoly, cls: RopClass, kmax: int = 3) -> Optional[int]:
    """The smallest k <= kmax with the target in the k-fold sumset of the
    class, or None.  kmax is capped at 4.

    k=1 is a lookup and k=2 a single scan; k>=3 searches first summands in
    ascending encoding order with a scan per candidate, so positive answers
    are quick but a negative answer at k>=3 costs a full quadratic sweep.
    """
    _check_target(target, cls)
    if not (1 <= kmax <= KMAX_LIMIT):
        raise PreconditionViolated("kmax must be between 1 and %d" % KMAX_LIMIT)
    size = 1 << cls.n
    p = cls.p

    def reachable(t: int, k: int) -> bool:
        if k == 1:
            return t in cls
        if p == 2:
            hits = (t ^ s for s in cls.members)
        else:
            hits = (_packed_sub(t, s, p, size) for s in cls.members)
        if k == 2:
            mset = cls._member_set
            return any(h in mset for h in hits)
        return any(reachable(h, k - 1) for h in hits)

    for k in range(1, kmax + 1):
        if reachable(target.value, k):
            return k
    return None


# ---------------------------------------------------------------------------
# closure checks
# ---------------------------------------------------------------------------


@dataclass
class ClosureReport:
    p: int
    n: int
    members_checked: int
    derivative_violations: List[Tuple[int, int]]
    restriction_violations: List[Tuple[int, int, int]]

    @property
    def ok(self) -> bool:
        return not self.derivative_violations and not self.restriction_violations


def closure_report(cls: RopClass) -> ClosureReport:
    """Verify the class is closed under every partial derivative and every
    restriction x_i := v; lists any violations (none are expected)."""
    p, n = cls.p, cls.n
    size = 1 << n
    deriv_bad: List[Tuple[int, int]] = []
    restr_bad: List[Tuple[int, int, int]] = []
    for value in cls.members:
        digits = _digits(value, p, size)
        for i in range(n):
            bit = 1 << i
            deriv = [0] * size
            for mask in range(size):
                if mask & bit:
                    deriv[mask ^ bit] = digits[mask]
            if _undigits(deriv, p) not in cls:
                deriv_bad.append((value, i + 1))
            for v in range(p):
                restr = [0] * size
                for mask in range(size):
                    if mask & bit:
                        restr[mask ^ bit] = (restr[mask ^ bit] + digits[mask] * v) % p
                    else:
                        restr[mask] = (restr[mask] + digits[mask]) % p
                if _undigits(restr, p) not in cls:
                    restr_bad.append((value, i + 1, v))
    return ClosureReport(p, n, len(cls.members), deriv_bad, restr_bad)


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

_MAGIC = b"ROPC"
_VERSION = 1
_HEADER = struct.Struct("<4sIIIQ")


def save_class(cls: RopClass, path: str):
    """Write the class to a flat binary file (whole-file replace)."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, _VERSION, cls.p, cls.n, len(cls.members)))
        fh.write(struct.pack("<%dQ" % len(cls.members), *cls.members))


def load_class(path: str) -> RopClass:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ParseError("truncated class file %r" % path)
        magic, version, p, n, count = _HEADER.unpack(header)
        if magic != _MAGIC:
            raise ParseError("bad magic in %r" % path)
        if version != _VERSION:
            raise ParseError("unsupported version %d in %r" % (version, path))
        body = fh.read(8 * count)
        if len(body) != 8 * count:
            raise ParseError("truncated member table in %r" % path)
        members = struct.unpack("<%dQ" % count, body)
    return RopClass(p, n, tuple(members))
