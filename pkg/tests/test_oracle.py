import itertools

import pytest

from edenca.automata import IntStates, LocalRule, Pattern, check_mep_certificate, is_goe_bruteforce
from edenca.groups import ball
from edenca.linear import muller_rule
from edenca.oracle import (BUDGET, EXHAUSTED, FOUND, IDENTITY_RULE, XOR_RULE, SearchBudget, SearchOutcome,
                           elementary_rule, find_goe, find_mep, interval, majority_rule, moore_sweep,
                           z_neighbourhood)

BITS = IntStates(2)


def naive_mep(rule, Y):
    """Plain enumeration of pattern pairs on Y u Y S^-1 S."""
    Y = list(Y)
    S = rule.S
    watch = {y * si for y in Y for si in S.inverses}
    dom = sorted(set(Y) | {w * s for w in watch for s in S}, key=lambda x: x.key)
    ctx = [c for c in dom if c not in set(Y)]
    for a, b in itertools.combinations(list(itertools.product((0, 1), repeat=len(Y))), 2):
        for c in itertools.product((0, 1), repeat=len(ctx)):
            base = dict(zip(ctx, c))
            p1 = Pattern(BITS, {**base, **dict(zip(Y, a))})
            p2 = Pattern(BITS, {**base, **dict(zip(Y, b))})
            if check_mep_certificate(rule, p1, p2, Y):
                return True
    return False


def test_outcome_invariant():
    with pytest.raises(ValueError):
        SearchOutcome(FOUND)
    with pytest.raises(ValueError):
        SearchOutcome(EXHAUSTED, witness=1)


@pytest.mark.parametrize("number", range(16))
def test_find_mep_matches_naive(number):
    rule = elementary_rule(number)
    for w in (1, 2):
        out = find_mep(rule, interval(w))
        assert out.found == naive_mep(rule, interval(w))


def test_find_goe_witness_verified():
    rule = elementary_rule(8)  # AND
    out = find_goe(rule, interval(3))
    assert out.found
    assert is_goe_bruteforce(rule, out.witness)


def test_majority_mep_width_one():
    out = find_mep(majority_rule(), interval(1))
    assert out.found
    p1, p2, Y = out.witness
    assert check_mep_certificate(majority_rule(), p1, p2, Y)


def test_xor_exhausts():
    rule = elementary_rule(XOR_RULE)
    assert find_mep(rule, interval(4)).status == EXHAUSTED
    assert find_goe(rule, interval(4)).status == EXHAUSTED


def test_identity_is_bijective():
    rule = elementary_rule(IDENTITY_RULE)
    assert find_goe(rule, interval(3)).status == EXHAUSTED
    assert find_mep(rule, interval(3)).status == EXHAUSTED


def test_budget_status():
    rule = elementary_rule(XOR_RULE)
    assert find_goe(rule, interval(8), SearchBudget(max_assignments=10)).status == BUDGET
    assert find_mep(rule, interval(8), SearchBudget(max_cells=4)).status == BUDGET


def test_sweep_consistent():
    rows = moore_sweep(6)
    assert len(rows) == 16
    assert all(r.consistent for r in rows)
    free = {r.rule for r in rows if r.mep_width is None}
    assert free == {3, 5, 6, 9, 10, 12}


def test_muller_no_small_mep():
    rule = muller_rule()
    out = find_mep(rule, ball(rule.group, None, 0))
    assert out.status == EXHAUSTED
