import itertools
import random

import pytest

from edenca.automata import (IntStates, LabelStates, LazyConfiguration, LocalRule, Pattern, ProductStates,
                             check_mep_certificate, evolve, evolve_at, interior, is_goe_bruteforce, odometer,
                             states_from_description)
from edenca.errors import BudgetExceeded, DataError, UsageError
from edenca.groups import FreeGroup, GenSet, Lattice, ball
from edenca.oracle import elementary_rule, interval, majority_rule, z_neighbourhood

Z = Lattice(1)
BITS = IntStates(2)


def naive_goe(rule, target):
    """Enumerate every assignment on dom(target) S; no pruning."""
    cells = sorted({y * s for y in target for s in rule.S}, key=lambda x: x.key)
    for vals in itertools.product(list(rule.states), repeat=len(cells)):
        asg = dict(zip(cells, vals))
        if all(rule([asg[y * s] for s in rule.S]) == v for y, v in target.items()):
            return False
    return True


def test_odometer_order():
    got = list(odometer(BITS, 2))
    assert got == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(list(odometer(IntStates(3), 3))) == 27


def test_product_states_index_roundtrip():
    Q = ProductStates([IntStates(2), LabelStates(["u", "v", "w"]), IntStates(2)])
    assert len(Q) == 12
    for i in range(len(Q)):
        assert Q.index(Q[i]) == i
    assert Q[1] == (0, "u", 1)
    assert states_from_description(Q.describe()) == Q


def test_table_rule_matches_function():
    rule = majority_rule()
    tab = rule.tabulate()
    for vals in odometer(BITS, 3):
        assert tab(vals) == rule(vals)


def test_table_length_checked():
    with pytest.raises(UsageError):
        LocalRule.from_table(BITS, z_neighbourhood(0, 1), [0, 1, 0])


def test_evolve_on_interior_only():
    rule = elementary_rule(6)
    psi = Pattern(BITS, {Z.vector(i): v for i, v in enumerate([0, 1, 1, 0])})
    out = evolve(rule, psi)
    assert [x.word[0] for x in out.sorted_domain()] == [0, 1, 2]
    assert [out[Z.vector(i)] for i in range(3)] == [1, 0, 1]


def test_interior_of_ball(F2):
    S = F2.standard_genset()
    B2 = ball(F2, S, 2)
    assert set(interior(B2, S)) == set(ball(F2, S, 1))


def test_lazy_configuration_memoizes():
    calls = []

    def f(x):
        calls.append(x)
        return x.word[0] % 2

    cfg = LazyConfiguration(BITS, f)
    x = Z.vector(5)
    assert cfg(x) == cfg(x) == 1
    assert len(calls) == 1
    assert cfg.restrict(interval(3)).items_sorted()[1][1] == 1


def test_pattern_rejects_bad_state():
    with pytest.raises(UsageError):
        Pattern(BITS, {Z.vector(0): 2})


def test_pattern_document_roundtrip(F2):
    Q = ProductStates([IntStates(2), IntStates(3)])
    p = Pattern(Q, {x: (i % 2, i % 3) for i, x in enumerate(ball(F2, None, 2))})
    again = Pattern.loads(p.dumps())
    assert again == p
    assert again.dumps() == p.dumps()


def test_pattern_loads_malformed():
    with pytest.raises(DataError):
        Pattern.loads('{"group": "F2"}')


def test_translate_convention(F2):
    a, b = F2.generators()
    p = Pattern(BITS, {a: 1, b: 0})
    q = p.translate(a.inverse())
    # (g.psi)(x) = psi(g x)
    assert q[a * a] == 1
    assert q[a * b] == 0


def test_equivariance_random(F2):
    rng = random.Random(7)
    S = F2.standard_genset()
    rule = LocalRule(BITS, S, fn=lambda v: (v[0] + 2 * v[1] + v[2] * v[3]) % 2)
    B = ball(F2, S, 3)
    B1 = ball(F2, S, 1)
    for _ in range(30):
        psi = Pattern(BITS, {x: rng.randrange(2) for x in B})
        g = rng.choice(B1)
        lhs = evolve(rule, psi.translate(g))
        rhs = evolve(rule, psi).translate(g)
        assert lhs == rhs


@pytest.mark.parametrize("number", range(16))
def test_goe_bruteforce_matches_naive(number):
    rule = elementary_rule(number)
    for w in (1, 2, 3):
        for vals in odometer(BITS, w):
            target = Pattern(BITS, dict(zip(interval(w), vals)))
            assert is_goe_bruteforce(rule, target) == naive_goe(rule, target)


def test_goe_bruteforce_budget():
    rule = elementary_rule(6)
    target = Pattern(BITS, dict(zip(interval(10), [0] * 10)))
    with pytest.raises(BudgetExceeded):
        is_goe_bruteforce(rule, target, budget=100)


def test_mep_certificate_contract():
    rule = majority_rule()
    Y = [Z.vector(0)]
    dom = interval(5, -2)
    p1 = Pattern(BITS, {x: 0 for x in dom})
    p2 = p1.replace({Z.vector(0): 1})
    assert check_mep_certificate(rule, p1, p2, Y)
    assert not check_mep_certificate(rule, p1, p1, Y)
    with pytest.raises(UsageError):
        check_mep_certificate(rule, p1.restrict(interval(3, -1)), p2.restrict(interval(3, -1)), Y)
    with pytest.raises(UsageError):
        check_mep_certificate(rule, p1, p2.replace({Z.vector(2): 1}), Y)


def test_mep_certificate_rejects_visible_difference():
    rule = elementary_rule(6)
    dom = interval(3, -1)
    p1 = Pattern(BITS, {x: 0 for x in dom})
    p2 = p1.replace({Z.vector(0): 1})
    assert not check_mep_certificate(rule, p1, p2, [Z.vector(0)])


def test_custom_genset_with_identity():
    S = GenSet([Z.vector(0), Z.vector(1)])
    assert S.inverses[1] == Z.vector(-1)
    rule = LocalRule(BITS, S, fn=lambda v: v[0] ^ v[1])
    assert evolve_at(rule, lambda x: x.word[0] % 2, Z.vector(3)) == 1
