import json

import pytest
from hypothesis import given, settings, strategies as st

from stochcover.instance import (CostError, GraphInstance, KCenterInstance, NotATreeError,
                                 ProbabilityError, SchemaError, SetCoverInstance, WeightError,
                                 generate_random_graph, generate_random_setcover,
                                 generate_random_tree, parse_instance, serialize_instance)


def tree_doc(n, edges, probs, **extra):
    return json.dumps({"type": "tree",
                       "vertices": [{"id": i, "p": p} for i, p in enumerate(probs)],
                       "edges": [{"u": u, "v": v, "w": w} for u, v, w in edges], **extra})


def test_single_vertex_document():
    inst = parse_instance(tree_doc(1, [], [0.5]))
    assert isinstance(inst, KCenterInstance)
    assert inst.n == 1 and inst.probs == (0.5,) and inst.root == 0


def test_three_path_document():
    inst = parse_instance(tree_doc(3, [(0, 1, 1), (1, 2, 1)], [1, 1, 1]))
    assert inst.edges == ((0, 1, 1.0), (1, 2, 1.0))


def test_cycle_rejected_as_tree():
    with pytest.raises(NotATreeError, match="cyclic"):
        parse_instance(tree_doc(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)], [1, 1, 1]))


@pytest.mark.parametrize("doc, err", [
    (tree_doc(2, [], [0.5, 0.5]), NotATreeError),
    (tree_doc(4, [(0, 1, 1), (1, 0, 1), (2, 3, 1)], [.5] * 4), NotATreeError),
    (tree_doc(2, [(0, 1, 1)], [0.5, 1.5]), ProbabilityError),
    (tree_doc(2, [(0, 1, -1)], [0.5, 0.5]), WeightError),
    (tree_doc(2, [(0, 5, 1)], [0.5, 0.5]), SchemaError),
    ('{"type": "tree"}', SchemaError),
    ('{"type": "forest", "vertices": []}', SchemaError),
    ("not json", SchemaError),
    ('{"type": "setcover", "elements": [{"id": 0, "p": 0.1}], '
     '"sets": [{"id": 0, "cost": 0, "members": [0]}]}', CostError),
    ('{"type": "setcover", "elements": [{"id": 0, "p": 0.1}], '
     '"sets": [{"id": 0, "cost": 1, "members": [3]}]}', SchemaError),
    ('{"type": "graph", "vertices": [{"id": 0, "p": 0.1}], '
     '"edges": [{"u": 0, "v": 0}]}', SchemaError),
])
def test_validation_errors(doc, err):
    with pytest.raises(err):
        parse_instance(doc)


def test_graph_weight_optional():
    doc = json.dumps({"type": "graph", "vertices": [{"id": 0, "p": .25}, {"id": 1, "p": .25}],
                      "edges": [{"u": 0, "v": 1}]})
    g = parse_instance(doc)
    assert isinstance(g, GraphInstance) and g.edges == ((0, 1),)


def test_uncoverable_elements_flagged():
    inst = SetCoverInstance(3, (0.1, 0.2, 0.3), ((1.0, frozenset({0, 1})),))
    assert inst.uncoverable_elements() == [2]


def test_generator_n_zero():
    with pytest.raises(ValueError):
        generate_random_tree(0, 7)


def test_generator_single_vertex():
    inst = generate_random_tree(1, 7)
    assert inst.n == 1 and inst.edges == ()


def test_generator_deterministic():
    assert generate_random_tree(8, 42) == generate_random_tree(8, 42)
    assert serialize_instance(generate_random_tree(8, 42)) == serialize_instance(generate_random_tree(8, 42))


def test_generator_seed_changes_tree():
    a, b = generate_random_tree(8, 42), generate_random_tree(8, 42 + 1)
    assert {e[:2] for e in a.edges} != {e[:2] for e in b.edges}


def test_generated_tree_is_valid():
    for seed in range(20):
        generate_random_tree(12, seed).check_tree()


def test_random_graph_has_no_isolated_vertices():
    for seed in range(20):
        assert generate_random_graph(7, seed, edge_prob=0.1).isolated_vertices() == []


def test_roundtrip_single_vertex():
    inst = KCenterInstance(1, (), (0.5,))
    assert parse_instance(serialize_instance(inst)) == inst


def test_roundtrip_setcover_two_sets():
    inst = SetCoverInstance(3, (0.1, 0.2, 1.0),
                            ((1.5, frozenset({0, 1})), (2.0, frozenset({1, 2}))))
    assert parse_instance(serialize_instance(inst)) == inst


def test_roundtrip_graph():
    g = generate_random_graph(6, 3)
    assert parse_instance(serialize_instance(g)) == g


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 30), seed=st.integers(0, 10**6))
def test_roundtrip_random_tree(n, seed):
    inst = generate_random_tree(n, seed, weight_law=("uniform", 0.0, 5.0))
    assert parse_instance(serialize_instance(inst)) == inst


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 12), m=st.integers(1, 10), seed=st.integers(0, 10**6))
def test_roundtrip_random_setcover(n, m, seed):
    inst = generate_random_setcover(n, m, seed)
    assert parse_instance(serialize_instance(inst)) == inst
    assert inst.uncoverable_elements() == []
