"""Read-once formula trees in normal form, and sums of them.

A formula is a binary tree whose leaves are variables and whose internal
nodes are ``add``/``mul`` gates; every node carries an affine pair
(alpha, beta).  A leaf labelled x_i computes alpha*x_i + beta, a gate
computes alpha*(left op right) + beta.  Read-once means each variable
labels at most one leaf, which makes every evaluation multilinear.

``RopSum`` is an ordered list of such trees; distinct summands may share
variables freely, each tree alone may not.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple, Union

from .errors import (
    DegenerateLeaf,
    FieldMismatch,
    IndexOutOfRange,
    NotMultiplicative,
    ParseError,
    PreconditionViolated,
    RopsumError,
    TooFewVariables,
    TooManyVariables,
)
from .mpoly import MultilinearPoly
from .scalars import FieldDescriptor, FieldElem, format_scalar, parse_scalar

ADD = "add"
MUL = "mul"


@dataclass(frozen=True)
class Leaf:
    var: int
    alpha: FieldElem
    beta: FieldElem


@dataclass(frozen=True)
class Gate:
    op: str  # ADD or MUL
    alpha: FieldElem
    beta: FieldElem
    left: "Rof"
    right: "Rof"


Rof = Union[Leaf, Gate]


class Violation(NamedTuple):
    kind: str
    detail: str


def leaf_vars(rof: Rof) -> List[int]:
    """Variables labelling leaves, in left-to-right order (with repeats)."""
    if isinstance(rof, Leaf):
        return [rof.var]
    return leaf_vars(rof.left) + leaf_vars(rof.right)


def field_of(rof: Rof) -> FieldDescriptor:
    return rof.alpha.field


def validate(rof: Rof) -> List[Violation]:
    """All read-once / consistency violations; an empty list means valid."""
    violations: List[Violation] = []
    field = field_of(rof)

    def walk(node: Rof):
        for scalar in (node.alpha, node.beta):
            if scalar.field != field:
                violations.append(
                    Violation(
                        "field_mismatch",
                        "scalar in %s, tree is over %s" % (scalar.field, field),
                    )
                )
        if isinstance(node, Leaf):
            if node.var < 1:
                violations.append(
                    Violation("bad_index", "leaf variable x%d" % node.var)
                )
        else:
            if node.op not in (ADD, MUL):
                violations.append(Violation("bad_gate", "unknown op %r" % node.op))
            walk(node.left)
            walk(node.right)

    walk(rof)
    seen: Dict[int, int] = {}
    for v in leaf_vars(rof):
        seen[v] = seen.get(v, 0) + 1
    for v, count in sorted(seen.items()):
        if count > 1:
            violations.append(
                Violation("duplicate_variable", "x%d labels %d leaves" % (v, count))
            )
    return violations


def evaluate(rof: Rof, n: Optional[int] = None) -> MultilinearPoly:
    """The multilinear polynomial the formula computes.

    ``n`` defaults to the highest variable index in the tree.
    """
    field = field_of(rof)
    if n is None:
        n = max(leaf_vars(rof))

    def walk(node: Rof) -> MultilinearPoly:
        if isinstance(node, Leaf):
            if not (1 <= node.var <= n):
                raise IndexOutOfRange("leaf variable x%d outside 1..%d" % (node.var, n))
            return MultilinearPoly(
                n, field, {1 << (node.var - 1): node.alpha, 0: node.beta}
            )
        left = walk(node.left)
        right = walk(node.right)
        inner = left + right if node.op == ADD else left.mul_disjoint(right)
        return inner.scale(node.alpha).add_constant(node.beta)

    return walk(rof)


def relabel_variables(rof: Rof, mapping: Dict[int, int]) -> Rof:
    """A copy of the tree with leaf variables renamed through ``mapping``;
    variables absent from the mapping keep their index."""
    if isinstance(rof, Leaf):
        return Leaf(mapping.get(rof.var, rof.var), rof.alpha, rof.beta)
    return Gate(
        rof.op,
        rof.alpha,
        rof.beta,
        relabel_variables(rof.left, mapping),
        relabel_variables(rof.right, mapping),
    )


def is_multiplicative_structural(rof: Rof) -> bool:
    """True iff the tree contains no addition gate."""
    if isinstance(rof, Leaf):
        return True
    if rof.op == ADD:
        return False
    return is_multiplicative_structural(rof.left) and is_multiplicative_structural(
        rof.right
    )


def is_multiplicative_semantic(p: MultilinearPoly) -> bool:
    """True iff every mixed partial over Var(p) is nonzero.

    This characterizes multiplicative read-once polynomials among read-once
    polynomials; the caller is responsible for p being one.
    """
    var_list = p.variables()
    for idx, i in enumerate(var_list):
        pi = p.partial(i)
        for j in var_list[idx + 1 :]:
            if pi.partial(j).is_zero():
                return False
    return True


def _require_valid(rof: Rof):
    violations = validate(rof)
    if violations:
        raise PreconditionViolated("invalid formula: %s" % (violations,))


def mrops_witness(rof: Rof, i: int) -> Tuple[int, FieldElem]:
    """For a multiplicative formula and a variable x_i, a pair (j, gamma)
    with d/dx_j of the computed polynomial vanishing under x_i = gamma.

    j is the smallest variable in the sibling subtree of x_i's leaf and
    gamma = -beta/alpha from that leaf's labels; the identity is exact.
    """
    _require_valid(rof)
    if not is_multiplicative_structural(rof):
        raise NotMultiplicative("formula contains an addition gate")
    all_vars = leaf_vars(rof)
    if len(all_vars) < 2:
        raise TooFewVariables("need at least 2 variables")
    if i not in all_vars:
        raise IndexOutOfRange("x%d does not occur in the formula" % i)

    def check_scales(node: Rof):
        if node.alpha.is_zero():
            raise DegenerateLeaf("zero scale collapses a subtree to a constant")
        if isinstance(node, Gate):
            check_scales(node.left)
            check_scales(node.right)

    check_scales(rof)

    def find(node: Rof) -> Optional[Tuple[Leaf, Rof]]:
        """(leaf of x_i, sibling subtree), or None if x_i is not below."""
        if isinstance(node, Leaf):
            return None
        for child, sibling in ((node.left, node.right), (node.right, node.left)):
            if isinstance(child, Leaf) and child.var == i:
                return child, sibling
            if isinstance(child, Gate):
                found = find(child)
                if found is not None:
                    return found
        return None

    found = find(rof)
    assert found is not None  # >= 2 variables, so the leaf has a parent
    leaf, sibling = found
    gamma = -leaf.beta / leaf.alpha
    j = min(leaf_vars(sibling))
    # the defining identity is checked exactly, not sampled
    if not evaluate(rof).partial(j).restrict(i, gamma).is_zero():
        raise RopsumError("internal: witness identity failed")
    return j, gamma


def three_var_linearizing_restriction(rof: Rof) -> Tuple[int, FieldElem]:
    """A pair (i, a) such that restricting x_i = a makes the computed
    polynomial have degree at most 1.

    The top gate splits the three variables 1+2.  Under an addition gate
    any value for a variable of the bivariate side works (we pick 0); under
    a multiplication gate the univariate factor is zeroed at -beta/alpha.
    """
    _require_valid(rof)
    vars_present = leaf_vars(rof)
    if len(vars_present) < 3:
        raise TooFewVariables("need exactly 3 variables, got %d" % len(vars_present))
    if len(vars_present) > 3:
        raise TooManyVariables("need exactly 3 variables, got %d" % len(vars_present))
    assert isinstance(rof, Gate)
    field = field_of(rof)
    left_vars = leaf_vars(rof.left)
    solo, pair_side = (
        (rof.left, rof.right) if len(left_vars) == 1 else (rof.right, rof.left)
    )
    if rof.op == ADD:
        i, a = min(leaf_vars(pair_side)), field.zero()
    else:
        assert isinstance(solo, Leaf)
        if solo.alpha.is_zero():
            i, a = min(leaf_vars(pair_side)), field.zero()
        else:
            i, a = solo.var, -solo.beta / solo.alpha
    restricted = evaluate(rof).restrict(i, a)
    assert restricted.degree() <= 1
    return i, a


# -- sums of read-once formulas ----------------------------------------------


@dataclass(frozen=True)
class RopSum:
    """An ordered sum of read-once formulas over a shared variable range."""

    field: FieldDescriptor
    n: int
    summands: Tuple[Rof, ...]

    def __len__(self):
        return len(self.summands)


def sum_validate(s: RopSum) -> List[Violation]:
    violations: List[Violation] = []
    for idx, rof in enumerate(s.summands):
        for v in validate(rof):
            violations.append(Violation(v.kind, "summand %d: %s" % (idx, v.detail)))
        if field_of(rof) != s.field:
            violations.append(
                Violation("field_mismatch", "summand %d not over %s" % (idx, s.field))
            )
        high = max(leaf_vars(rof), default=0)
        if high > s.n:
            violations.append(
                Violation("bad_index", "summand %d uses x%d > n=%d" % (idx, high, s.n))
            )
    return violations


def sum_evaluate(s: RopSum) -> MultilinearPoly:
    total = MultilinearPoly.zero(s.n, s.field)
    for rof in s.summands:
        total = total + evaluate(rof, s.n)
    return total


def verify_against(s: RopSum, target: MultilinearPoly) -> bool:
    """Exact polynomial equality of the sum against a target."""
    if target.field != s.field:
        raise FieldMismatch("sum over %s, target over %s" % (s.field, target.field))
    n = max(s.n, target.n)
    return sum_evaluate(s).with_n(n) == target.with_n(n)


# -- text form ---------------------------------------------------------------


def print_rof(rof: Rof) -> str:
    """Canonical s-expression, e.g. ``(mul (1 0) (leaf (2 3) x1) (leaf (1 0) x2))``."""
    a, b = format_scalar(rof.alpha), format_scalar(rof.beta)
    if isinstance(rof, Leaf):
        return "(leaf (%s %s) x%d)" % (a, b, rof.var)
    return "(%s (%s %s) %s %s)" % (
        rof.op,
        a,
        b,
        print_rof(rof.left),
        print_rof(rof.right),
    )


def _tokenize(text: str) -> List[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


class _TokenStream:
    def __init__(self, tokens: List[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.pos)
        self.pos += 1
        return tok

    def expect(self, tok: str):
        got = self.next()
        if got != tok:
            raise ParseError("expected %r, got %r" % (tok, got), self.pos - 1)


def _parse_scalar_tokens(ts: _TokenStream, field: FieldDescriptor) -> FieldElem:
    first = ts.next()
    if ts.peek() == "mod":
        ts.next()
        modulus = ts.next()
        return parse_scalar("%s mod %s" % (first, modulus), field)
    return parse_scalar(first, field)


def _parse_node(ts: _TokenStream, field: FieldDescriptor) -> Rof:
    ts.expect("(")
    head = ts.next()
    if head not in ("leaf", ADD, MUL):
        raise ParseError("expected leaf/add/mul, got %r" % head, ts.pos - 1)
    ts.expect("(")
    alpha = _parse_scalar_tokens(ts, field)
    beta = _parse_scalar_tokens(ts, field)
    ts.expect(")")
    if head == "leaf":
        var_tok = ts.next()
        if not var_tok.startswith("x") or not var_tok[1:].isdigit():
            raise ParseError("expected a variable like x1, got %r" % var_tok, ts.pos - 1)
        var = int(var_tok[1:])
        if var < 1:
            raise ParseError("variable index must be >= 1", ts.pos - 1)
        node: Rof = Leaf(var, alpha, beta)
    else:
        left = _parse_node(ts, field)
        right = _parse_node(ts, field)
        node = Gate(head, alpha, beta, left, right)
    ts.expect(")")
    return node


def parse_rof(text: str, field: FieldDescriptor) -> Rof:
    """Parse the s-expression grammar; scalars are read in ``field``."""
    ts = _TokenStream(_tokenize(text))
    node = _parse_node(ts, field)
    if ts.peek() is not None:
        raise ParseError("trailing input %r" % ts.peek(), ts.pos)
    return node
