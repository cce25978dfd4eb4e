import random

import pytest

from argudas.errors import CycleDetected, DanglingEdge, BadStage, StageMismatch, UnknownTissue
from argudas.model import NOT_DETECTED
from argudas.ontology import AnatomyGraph, parse_ontology, propagate

from conftest import graph_from_edges, make_annotation
from oracles import closure_oracle


class TestLoadOntology:
    def test_two_node_graph(self):
        graph = parse_ontology(
            {
                "stage": 15,
                "nodes": [{"id": "telencephalon"}, {"id": "future brain"}],
                "edges": [{"child": "telencephalon", "parent": "future brain"}],
            }
        )
        assert len(graph.names) == 2
        assert graph.parents["telencephalon"] == ("future brain",)

    def test_cycle_detected(self):
        with pytest.raises(CycleDetected):
            graph_from_edges(15, [("a", "b"), ("b", "a")])

    def test_self_loop_detected(self):
        with pytest.raises(CycleDetected):
            graph_from_edges(15, [("a", "a")])

    def test_dangling_edge(self):
        with pytest.raises(DanglingEdge):
            AnatomyGraph.build(15, [("a", "a")], [("a", "ghost")])

    def test_bad_stage(self):
        with pytest.raises(BadStage):
            graph_from_edges(42, [("a", "b")])

    def test_empty_graph_is_valid(self):
        graph = AnatomyGraph.build(5, [], [])
        assert graph.names == {}


class TestAncestors:
    def test_single_hop(self):
        graph = graph_from_edges(15, [("telencephalon", "future brain")])
        assert graph.ancestors("telencephalon") == {"future brain"}

    def test_root_has_none(self):
        graph = graph_from_edges(15, [("telencephalon", "future brain")])
        assert graph.ancestors("future brain") == set()

    def test_chain(self):
        graph = graph_from_edges(15, [("a", "b"), ("b", "c")])
        assert graph.ancestors("a") == {"b", "c"}

    def test_unknown_tissue(self):
        graph = graph_from_edges(15, [("a", "b")])
        with pytest.raises(UnknownTissue):
            graph.ancestors("ghost")

    def test_never_contains_self_on_random_dags(self):
        rng = random.Random(7)
        for _ in range(40):
            graph, _ = _random_dag(rng, rng.randint(1, 20))
            for tissue in graph.names:
                assert tissue not in graph.ancestors(tissue)

    def test_matches_closure_oracle_on_random_dags(self):
        rng = random.Random(11)
        for _ in range(40):
            graph, edges = _random_dag(rng, rng.randint(1, 20))
            expected = closure_oracle(edges)
            for tissue in graph.names:
                assert graph.ancestors(tissue) == expected.get(tissue, set())


def _random_dag(rng, n):
    """Random DAG over n nodes; edges only point from lower to higher index."""
    names = [f"t{i:02d}" for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.2:
                edges.append((names[i], names[j]))
    return graph_from_edges(20, edges, extra_nodes=names), edges


class TestPropagate:
    def setup_method(self):
        self.graph = graph_from_edges(15, [("telencephalon", "future brain")])

    def test_weak_telencephalon_reaches_future_brain(self):
        source = make_annotation(local="e1", tissue="telencephalon", level="weak")
        result = propagate([source], self.graph)
        assert len(result) == 2
        derived = result[1]
        assert derived.tissue == "future brain"
        assert derived.level == source.level
        assert derived.direct is False
        assert derived.derived_from == source.id

    def test_not_detected_does_not_propagate(self):
        source = make_annotation(local="g2", tissue="telencephalon", level="not detected")
        assert propagate([source], self.graph) == [source]

    def test_derived_count_equals_ancestors(self):
        graph = graph_from_edges(15, [("leaf", "b"), ("b", "c")])
        source = make_annotation(local="e1", tissue="leaf", level="moderate")
        result = propagate([source], graph)
        assert len(result) - 1 == len(graph.ancestors("leaf")) == 2

    def test_stage_mismatch(self):
        source = make_annotation(local="e1", tissue="telencephalon", stage=14)
        with pytest.raises(StageMismatch):
            propagate([source], self.graph)

    def test_unknown_tissue(self):
        source = make_annotation(local="e1", tissue="hindbrain")
        with pytest.raises(UnknownTissue):
            propagate([source], self.graph)

    def test_idempotent(self):
        rng = random.Random(3)
        for _ in range(25):
            graph, annotations = _random_propagation_case(rng)
            once = propagate(annotations, graph)
            twice = propagate(once, graph)
            assert sorted(str(a.id) for a in twice) == sorted(str(a.id) for a in once)
            assert set(twice) == set(once)

    def test_derived_set_matches_reachability_oracle(self):
        rng = random.Random(5)
        for _ in range(25):
            graph, annotations = _random_propagation_case(rng)
            result = propagate(annotations, graph)
            derived = {(d.gene, d.tissue, d.level, d.derived_from) for d in result if not d.direct}
            expected = set()
            for a in annotations:
                if not a.level.is_present:
                    continue
                for ancestor in graph.ancestors(a.tissue):
                    expected.add((a.gene, ancestor, a.level, a.id))
            assert derived == expected

    def test_order_independence(self):
        rng = random.Random(9)
        graph, annotations = _random_propagation_case(rng, size=8)
        baseline = propagate(annotations, graph)
        for _ in range(5):
            shuffled = annotations[:]
            rng.shuffle(shuffled)
            assert sorted(propagate(shuffled, graph), key=lambda a: str(a.id)) == sorted(
                baseline, key=lambda a: str(a.id)
            )

    def test_multi_parent_ancestor_visited_once(self):
        graph = graph_from_edges(15, [("part", "wholeA"), ("part", "wholeB"),
                                      ("wholeA", "top"), ("wholeB", "top")])
        source = make_annotation(local="e1", tissue="part", level="strong")
        result = propagate([source], graph)
        derived_tissues = [d.tissue for d in result if not d.direct]
        assert sorted(derived_tissues) == ["top", "wholeA", "wholeB"]


def _random_propagation_case(rng, size=None):
    n = rng.randint(2, 12)
    names = [f"t{i:02d}" for i in range(n)]
    edges = [
        (names[i], names[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < 0.25
    ]
    graph = graph_from_edges(20, edges, extra_nodes=names)
    annotations = []
    for k in range(size or rng.randint(1, 6)):
        annotations.append(
            make_annotation(
                local=f"r{k}",
                resource=rng.choice(["EMAGE", "GXD"]),
                gene=rng.choice(["bmp4", "shh"]),
                tissue=rng.choice(names),
                stage=20,
                level=rng.choice(["weak", "moderate", "strong", "detected", "not detected"]),
            )
        )
    return graph, annotations
