import pytest

from edenca.errors import NotCompressible
from edenca.groups import FreeGroup, FreeProduct, GenSet, Lattice, ball, ball_layers
from edenca.treefield import P1, D, ROOT, build_tree_field, field_to_dot, verify_field


def local_fiber(field, x):
    """Preimages of x found by scanning xS, where any preimage must lie."""
    return {x * s for s in field.S if field(x * s) == x}


@pytest.mark.parametrize("group,radius", [(FreeGroup(2), 5), (FreeGroup(3), 3), (FreeProduct((2, 2, 2)), 5),
                                          (FreeProduct((2, 2, 2, 2)), 3)])
def test_local_fiber_oracle(group, radius):
    field = build_tree_field(group)
    S = field.S
    for x in ball(group, S, radius):
        assert field(x).inverse() * x in S
        fib = local_fiber(field, x)
        assert len(fib) == 2
        assert fib == set(field.fiber(x))


def test_root_and_first_layer(F2, field_F2):
    a, b = F2.generators()
    assert field_F2(F2.identity()) == b
    assert field_F2.status(F2.identity())[0] == ROOT
    assert field_F2(a) == F2.identity() and field_F2(a.inverse()) == F2.identity()
    assert field_F2.status(a)[0] == P1
    assert field_F2.status(b)[0] == D


def test_fiber_ordered_by_displacement(field_F2):
    S = field_F2.S
    for x in ball(field_F2.group, S, 3):
        first, second = field_F2.fiber(x)
        assert S.index(x.inverse() * first) < S.index(x.inverse() * second)


def test_verify_field_f2_small(field_F2):
    rep = verify_field(field_F2, 5)
    assert rep.ok
    assert rep.checked == 2 * 3**4 - 1


def test_verify_field_detects_bad_field(F2):
    S = F2.standard_genset()
    a = F2.generator(0)
    class Shift:
        group = F2

        def __call__(self, x):  # x -> x a^-1 has fibers of size 1
            return x * a.inverse()

    rep = verify_field(Shift(), 3, S=S)
    assert not rep.ok
    assert {v["kind"] for v in rep.violations} == {"fiber_size"}


@pytest.mark.parametrize("group", [Lattice(1), Lattice(2), FreeGroup(1), FreeProduct((2, 2)), FreeProduct((2, 3))])
def test_not_compressible(group):
    with pytest.raises(NotCompressible):
        build_tree_field(group)


def test_nonstandard_genset_refused(F2):
    a, b = F2.generators()
    with pytest.raises(NotCompressible):
        build_tree_field(F2, GenSet([b, b.inverse(), a, a.inverse()]))


def test_every_vertex_kind_appears(field_F2):
    kinds = {field_F2.status(x)[0] for x in ball(field_F2.group, None, 2)}
    assert kinds == {P1, D, ROOT}


def test_fingerprint_stable(F2):
    assert build_tree_field(F2).fingerprint() == build_tree_field(F2).fingerprint()


def test_dot_export(field_F2):
    dot = field_to_dot(field_F2, 2)
    assert dot.startswith("digraph field {") and dot.rstrip().endswith("}")
    nodes = sum(len(layer) for layer in ball_layers(field_F2.group, field_F2.S, 2))
    assert dot.count("->") == nodes - sum(
        1 for x in ball(field_F2.group, None, 2) if field_F2(x) not in set(ball(field_F2.group, None, 2)))
