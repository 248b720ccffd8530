import random
from fractions import Fraction

import networkx as nx
import pytest

from edenca.automata import Pattern
from edenca.converse import GeneralRule, preimage_general
from edenca.automata import evolve
from edenca.correspondence import (correspondence_document, correspondence_from_document, double_field,
                                   verify_correspondence)
from edenca.errors import BudgetExceeded, UsageError
from edenca.flow import MaxFlow, build_correspondence, candidate_ratios, expansion_profile
from edenca.groups import FreeGroup, Lattice, ball, ball_layers


def nx_deficiency(group, m, n, radius):
    """Independent two-stage computation with networkx.

    Stage one maximizes inflow into the interior sinks alone; stage two
    fixes those sinks at that value by a lower bound trick (demand) and
    maximizes total throughput. Deficiency is unmet interior demand plus
    unmet source supply.
    """
    S = group.standard_genset()
    layers = ball_layers(group, S, radius)
    sources = [x for layer in layers for x in layer]
    interior = set(x for layer in layers[:-1] for x in layer)

    def network(boundary):
        G = nx.DiGraph()
        for x in sources:
            G.add_edge("s", ("src", x), capacity=n)
            for s in S:
                y = x * s
                G.add_edge(("src", x), ("snk", y), capacity=n)
                if y in interior or boundary:
                    G.add_edge(("snk", y), "t", capacity=m)
        return G

    inner, _ = nx.maximum_flow(network(False), "s", "t")
    total, _ = nx.maximum_flow(network(True), "s", "t")
    # Every max flow of the full network can be chosen to also maximize
    # interior inflow, so supply deficiency is n|B| - total.
    return m * len(interior) - inner, n * len(sources) - total


def test_maxflow_small():
    net = MaxFlow(4)
    net.add_edge(0, 1, 3)
    net.add_edge(0, 2, 2)
    net.add_edge(1, 2, 5)
    net.add_edge(1, 3, 2)
    net.add_edge(2, 3, 3)
    assert net.run(0, 3) == 5


def test_maxflow_random_vs_networkx():
    rng = random.Random(3)
    for _ in range(20):
        k = 8
        net = MaxFlow(k)
        G = nx.DiGraph()
        for _ in range(20):
            u, v = rng.sample(range(k), 2)
            c = rng.randint(1, 6)
            net.add_edge(u, v, c)
            if G.has_edge(u, v):
                G[u][v]["capacity"] += c
            else:
                G.add_edge(u, v, capacity=c)
        G.add_nodes_from([0, k - 1])
        assert net.run(0, k - 1) == nx.maximum_flow_value(G, 0, k - 1)


@pytest.mark.parametrize("group,m,n,radius", [
    (FreeGroup(2), 2, 1, 3), (FreeGroup(2), 3, 1, 3), (FreeGroup(2), 4, 1, 2),
    (Lattice(2), 2, 1, 2), (Lattice(2), 2, 1, 3), (Lattice(2), 3, 2, 3), (Lattice(1), 3, 2, 2),
])
def test_deficiency_matches_networkx(group, m, n, radius):
    rep = build_correspondence(group, None, m, n, radius)
    sink_def, source_def = nx_deficiency(group, m, n, radius)
    assert rep.sink_deficiency == sink_def
    assert rep.source_deficiency == source_def
    assert rep.deficiency == sink_def + source_def


def test_f2_witness_recount(F2):
    rep = build_correspondence(F2, None, 2, 1, 4)
    assert rep.feasible and rep.witness is not None
    S = F2.standard_genset()
    layers = ball_layers(F2, S, 4)
    check = verify_correspondence(rep.witness, [x for l in layers for x in l], [x for l in layers[:-1] for x in l])
    assert check.ok


def test_z2_deficiency_grows():
    Z2 = Lattice(2)
    defs = [build_correspondence(Z2, None, 2, 1, r).deficiency for r in range(1, 6)]
    assert defs[2] > 0
    assert all(a <= b for a, b in zip(defs, defs[1:]))


def test_z_profile_against_networkx():
    """Each radius's best ratio is feasible, every larger candidate is not,
    and all stay below the counting bound (2r + 1)/(2r - 1)."""
    Z = Lattice(1)
    prof = dict(expansion_profile(Z, None, 5))
    for r in range(1, 6):
        assert prof[r] <= Fraction(2 * r + 1, 2 * r - 1)
        for m, n in candidate_ratios():
            feasible = nx_deficiency(Z, m, n, r) == (0, 0)
            if Fraction(m, n) > prof[r]:
                assert not feasible
            elif Fraction(m, n) == prof[r]:
                assert feasible
    assert prof[5] == 1
    assert prof[4] == Fraction(5, 4)


def test_profile_f2_stays_above_one():
    prof = dict(expansion_profile(FreeGroup(2), None, 4))
    assert all(v >= 2 for r, v in prof.items() if r >= 1)


def test_candidate_ratios_sorted_unique():
    cands = candidate_ratios()
    vals = [Fraction(m, n) for m, n in cands]
    assert vals == sorted(set(vals), reverse=True)
    assert vals[0] == 4 and vals[-1] == Fraction(5, 4)


def test_preconditions(F2):
    with pytest.raises(UsageError):
        build_correspondence(F2, None, 1, 2, 2)
    with pytest.raises(UsageError):
        build_correspondence(F2, None, 2, 1, -1)
    with pytest.raises(BudgetExceeded):
        build_correspondence(F2, None, 2, 1, 6, budget=100)
    assert build_correspondence(F2, None, 1, 1, 2).feasible


@pytest.mark.parametrize("m,n", [(2, 1), (3, 1), (5, 2)])
def test_flow_witness_drives_general_rule(F2, m, n):
    rep = build_correspondence(F2, None, m, n, 4)
    assert rep.feasible
    rule = GeneralRule(rep.witness)
    rng = random.Random(m * 10 + n)
    Y = ball(F2, None, 2)
    phi = Pattern(rule.states, {y: rule.states[rng.randrange(len(rule.states))] for y in Y}, check=False)
    psi = preimage_general(rule, phi)
    assert evolve(rule, psi).restrict(Y) == phi


def test_document_roundtrip(F2, field_F2):
    corr = double_field(field_F2, 2)
    B = ball(F2, None, 2)
    doc = correspondence_document(corr, B)
    back = correspondence_from_document(doc)
    assert (back.m, back.n) == (4, 2)
    for x in B:
        assert sorted(back.row(x), key=lambda t: t[0].key) == sorted(corr.row(x), key=lambda t: t[0].key)
