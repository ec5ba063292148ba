import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prymeigen.butterfly import INF, apply, max_finite_q
from prymeigen.components import (
    SET_P,
    SET_Q,
    SET_S,
    admissible_discs,
    build_graph,
    component_count,
    q_components_via_parity,
    reports_to_csv,
    reports_to_json,
    set_summary,
    summary_flags,
    sweep,
    verify_classification,
)
from prymeigen.prototypes import GENUS3, GENUS4, enumerate_prototypes


def test_stated_component_counts():
    assert component_count(41, GENUS3, SET_S) == 2
    assert component_count(1684, GENUS3, SET_S) == 3
    for D in (41, 68, 100):
        assert component_count(D, GENUS3, SET_P) == 2
    assert component_count(41, GENUS3, SET_Q) == 4
    assert component_count(48, GENUS3, SET_Q) == 2


def test_stated_partitions():
    assert set_summary(112, GENUS3, SET_S)["partition"] == [[-8, 4], [-4, 0]]
    assert set_summary(73, GENUS3, SET_S)["partition"] == [[-7, -3, -1, 3], [-5, 1]]
    assert component_count(73, GENUS3, SET_P) == 1


def test_graph_shape_d68():
    g = build_graph(68, GENUS3, SET_P)
    assert len(g.nodes) == 5
    assert [sorted(c) for c in g.component_nodes()] == [
        [(2, 2, 1, -6), (8, 1, 0, -2)],
        [(4, 1, 0, -6), (4, 2, 1, -2), (8, 1, 0, 2)],
    ]


def test_graph_edges_are_the_moves():
    for D in (48, 68, 100, 292):
        g = build_graph(D, GENUS3, SET_P)
        want = sorted((p.key, q, apply(p, q).key) for p in enumerate_prototypes(D) for q in list(range(1, max_finite_q(p.h, p.e, D) + 1)) + [INF])
        got = sorted((g.nodes[i], q, g.nodes[j]) for i, j, q in g.edges)
        assert got == want


def test_dot_export_is_deterministic():
    a = build_graph(68, GENUS3, SET_P).to_dot()
    assert a == build_graph(68, GENUS3, SET_P).to_dot()
    assert a.startswith('digraph "P_68_g3"') and 'label="Binf"' in a


def test_parity_rule_examples():
    assert q_components_via_parity(20) == 1
    assert q_components_via_parity(48) == 2
    for D in (17, 33, 57, 73):
        g = build_graph(D, GENUS3, SET_P)
        und = g.undirected()
        assert all(nx.is_bipartite(und.subgraph(c)) for c in g.components())


def test_parity_rule_matches_q_graph_up_to_2000():
    for D in admissible_discs(17, 2000):
        assert q_components_via_parity(D) == component_count(D, GENUS3, SET_Q), D


def test_every_component_has_a_reduced_prototype():
    for D in admissible_discs(17, 2000):
        for comp in build_graph(D, GENUS3, SET_P).component_nodes():
            assert any(n[1] == 1 and n[2] == 0 for n in comp), (D, comp[0])


def test_reduced_relation_refines_prototype_relation():
    for D in admissible_discs(17, 1000):
        where = {}
        for k, comp in enumerate(build_graph(D, GENUS3, SET_P).component_nodes()):
            for n in comp:
                where[n] = k
        for part in set_summary(D, GENUS3, SET_S)["partition"]:
            ks = {where.get(((D - e * e) // 8, 1, 0, e)) for e in part} - {None}
            assert len(ks) <= 1, (D, part)


def test_e_mod_8_constant_for_d_4_mod_16():
    for D in range(20, 3000, 16):
        for part in set_summary(D, GENUS3, SET_S)["partition"]:
            assert len({e % 8 for e in part}) == 1, (D, part)


def test_genus4_e_mod_4_constant_for_even_d():
    for D in range(12, 1000, 4):
        for comp in build_graph(D, GENUS4, SET_P).component_nodes():
            assert len({n[3] % 4 for n in comp}) == 1, (D, comp[0])


def test_genus4_extra_components_are_the_even_class():
    """Diagnostic for the genus-4 disagreement: every extra component consists of all-even (w, h, t)."""
    for D in range(57, 1000, 4):
        comps = build_graph(D, GENUS4, SET_P).component_nodes()
        odd = [c for c in comps if not all(n[0] % 2 == 0 and n[1] % 2 == 0 and n[2] % 2 == 0 for n in c)]
        even = [c for c in comps if c not in odd]
        assert len(odd) == 1, D
        for c in even:
            assert all(n[1] != 1 for n in c)


def test_genus4_d36_has_two_components():
    g = build_graph(36, GENUS4, SET_P)
    assert sorted(g.nodes) == [(5, 1, 0, -4), (8, 1, 0, -2), (9, 1, 0, 0)]
    assert len(g.components()) == 2


def test_summary_flags():
    want, flags = summary_flags(set_summary(41, GENUS3, SET_P))
    assert want == 2 and flags == []
    fake = dict(set_summary(41, GENUS3, SET_P), components=1)
    assert summary_flags(fake)[1] == ["P: computed 1 components, predicted 2"]


def test_verify_classification_report():
    rep = verify_classification(148)
    assert rep.ok and rep.components == {"S": 3, "P": 1, "Q": 1}
    assert rep.s_partition == [[-10, 6], [-6, 2], [-2]]
    csv_text = reports_to_csv([rep])
    assert csv_text.splitlines()[1].startswith("148,3,")
    assert '"disc": 148' in reports_to_json([rep])


def test_sweep_is_independent_of_jobs():
    discs = admissible_discs(17, 120)
    serial = [r.to_dict() for r in sweep(discs, GENUS3, jobs=1)]
    parallel = [r.to_dict() for r in sweep(discs, GENUS3, jobs=2)]
    assert serial == parallel


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=17, max_value=1500).filter(lambda D: D % 8 in (0, 1, 4)))
def test_components_partition_the_nodes(D):
    for kind in (SET_P, SET_S):
        g = build_graph(D, GENUS3, kind)
        comps = g.components()
        assert sorted(i for c in comps for i in c) == list(range(len(g.nodes)))


def test_unknown_set_rejected():
    with pytest.raises(ValueError):
        build_graph(41, GENUS3, "X")
    with pytest.raises(ValueError):
        build_graph(41, GENUS4, SET_Q)
