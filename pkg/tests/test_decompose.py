import math
import random

import pytest

from ropsum import (
    QQ,
    CharacteristicTwo,
    MultilinearPoly,
    PreconditionViolated,
    elementary_symmetric,
    m_poly,
    prime_field,
)
from ropsum.decompose import generic, pair_monomials, sympoly4, symmetric_halves
from ropsum.rof import evaluate, print_rof, validate, verify_against

from helpers import random_poly, random_scalar

F2 = prime_field(2)
F5 = prime_field(5)


def P(n, terms, field=QQ):
    return MultilinearPoly.from_terms(n, field, terms)


def assert_good(s, target, max_count):
    assert verify_against(s, target)
    assert len(s.summands) <= max_count
    for rof in s.summands:
        assert validate(rof) == []


# -- pair_monomials ------------------------------------------------------------


def test_pairing_disjoint_supports():
    p = P(4, {0b1001: 2, 0b0110: 3})
    s = pair_monomials(p)
    assert_good(s, p, 1)


def test_pairing_shared_core():
    p = P(4, {0b0111: 1, 0b1110: 1})  # x1x2x3 + x2x3x4
    s = pair_monomials(p)
    assert_good(s, p, 1)
    # the single tree multiplies the shared core x2 x3 into (x1 + x4)
    assert "add" in print_rof(s.summands[0])


def test_pairing_symmetric_count():
    p = elementary_symmetric(5, 4)
    s = pair_monomials(p)
    assert len(s.summands) == 3
    assert_good(s, p, 3)


def test_pairing_nested_and_constant_monomials():
    p = P(3, {0: 4, 0b011: 2, 0b111: 5})
    s = pair_monomials(p)
    assert_good(s, p, 2)


def test_pairing_respects_ceiling_bound():
    rng = random.Random(31)
    for _ in range(200):
        n = rng.randint(1, 8)
        p = random_poly(rng, n, QQ, density=0.4)
        if p.is_zero():
            continue
        s = pair_monomials(p)
        assert_good(s, p, math.ceil(len(p.coeffs) / 2))


def test_pairing_rejects_zero():
    with pytest.raises(PreconditionViolated):
        pair_monomials(MultilinearPoly.zero(3, QQ))


# -- generic --------------------------------------------------------------------


def test_generic_bivariate_single_summand():
    rng = random.Random(32)
    for _ in range(100):
        p = random_poly(rng, 2, QQ, density=0.8)
        if p.is_zero():
            continue
        s = generic(p)
        assert_good(s, p, 1)


def test_generic_no_quadratic_branch():
    p = P(4, {0: 1, 0b0001: 1, 0b0111: 1, 0b1101: 2, 0b1111: 3})
    s = generic(p)
    assert_good(s, p, 3)


def test_generic_pivot_branch_every_quadratic():
    # exercise each possible first nonzero quadratic coefficient
    for pair_mask in (0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100):
        p = P(4, {pair_mask: 2, 0b1111: 1, 0b0001: 3})
        s = generic(p)
        assert_good(s, p, 3)


def test_generic_counts_by_arity():
    rng = random.Random(33)
    for n, bound in [(1, 1), (2, 1), (3, 2), (4, 3), (5, 6), (6, 12), (7, 24), (8, 48)]:
        for _ in range(25):
            p = random_poly(rng, n, QQ, density=0.6)
            if p.is_zero():
                continue
            s = generic(p)
            assert_good(s, p, bound)


def test_generic_over_prime_fields():
    rng = random.Random(34)
    for field in (F2, F5):
        for _ in range(50):
            p = random_poly(rng, 5, field, density=0.6)
            s = generic(p)
            assert_good(s, p, 6)


def test_generic_zero_gives_empty_sum():
    assert len(generic(MultilinearPoly.zero(4, QQ)).summands) == 0


# -- symmetric halves -----------------------------------------------------------


def test_symmetric_halves_small_even():
    s = symmetric_halves(4, 0, 1)
    assert len(s.summands) == 2
    assert_good(s, elementary_symmetric(4, 3), 2)


def test_symmetric_halves_small_odd():
    s = symmetric_halves(5, 0, 1)
    assert len(s.summands) == 3
    assert_good(s, elementary_symmetric(5, 4), 3)


def test_symmetric_halves_two_vars():
    s = symmetric_halves(2, 0, 1)
    assert len(s.summands) == 1


def test_symmetric_halves_exact_count_up_to_twelve():
    rng = random.Random(35)
    for n in range(1, 13):
        for _ in range(20):
            a = random_scalar(rng, QQ)
            b = random_scalar(rng, QQ, nonzero=True)
            s = symmetric_halves(n, a, b)
            assert len(s.summands) == math.ceil(n / 2)
            assert_good(s, m_poly(n, a, b), math.ceil(n / 2))


def test_symmetric_halves_f2():
    s = symmetric_halves(5, 0, 1, F2)
    assert len(s.summands) == 3
    assert_good(s, elementary_symmetric(5, 4, F2), 3)
    s = symmetric_halves(4, 1, 1, F2)
    assert_good(s, m_poly(4, 1, 1, F2), 2)


# -- weighted symmetric combinations ---------------------------------------------


def combo(field, a0, a1, a2, a3, a4):
    out = MultilinearPoly.zero(4, field)
    for k, c in enumerate((a0, a1, a2, a3, a4)):
        out = out + elementary_symmetric(4, k, field).scale(c)
    return out


def test_sympoly4_no_quadratic_no_cubic():
    s = sympoly4(2, 3, 0, 0, 5)
    assert_good(s, combo(QQ, 2, 3, 0, 0, 5), 2)


def test_sympoly4_cubic_row_matches_expected_shape():
    s = sympoly4(0, 1, 0, 1, 0)
    target = combo(QQ, 0, 1, 0, 1, 0)
    assert_good(s, target, 2)
    # both summands multiply a (1 + product) block into a two-variable sum
    for rof in s.summands:
        assert evaluate(rof, 4).degree() == 3


def test_sympoly4_balanced_row():
    s = sympoly4(1, 1, 1, 1, 1)
    assert_good(s, combo(QQ, 1, 1, 1, 1, 1), 2)


def test_sympoly4_general_row():
    s = sympoly4(1, 2, 3, 4, 5)
    assert_good(s, combo(QQ, 1, 2, 3, 4, 5), 2)


def test_sympoly4_all_cases_random():
    rng = random.Random(36)
    for _ in range(300):
        coeffs = [random_scalar(rng, QQ) for _ in range(5)]
        s = sympoly4(*coeffs)
        assert_good(s, combo(QQ, *coeffs), 2)


def test_sympoly4_prime_field():
    rng = random.Random(37)
    for _ in range(100):
        coeffs = [random_scalar(rng, F5) for _ in range(5)]
        s = sympoly4(*coeffs, field=F5)
        assert_good(s, combo(F5, *coeffs), 2)


def test_sympoly4_rejects_char2():
    with pytest.raises(CharacteristicTwo):
        sympoly4(1, 1, 1, 1, 1, field=F2)
