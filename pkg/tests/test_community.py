import random
from itertools import combinations

import networkx as nx
import pytest

from copyflock.community import greedy_modularity, modularity_score, undirected_weights
from oracles import best_partition_upto_two


def clique_weights(nodes, w=1.0):
    return {(a, b): w for a, b in combinations(sorted(nodes), 2)}


def as_nx(nodes, weights):
    g = nx.Graph()
    g.add_nodes_from(nodes)
    for (a, b), w in weights.items():
        g.add_edge(a, b, weight=w)
    return g


def planted_graph(rng, sizes, p_intra=0.9, p_inter=0.05):
    nodes = []
    blocks = []
    for bi, size in enumerate(sizes):
        block = [f"n{bi}_{i}" for i in range(size)]
        blocks.append(block)
        nodes.extend(block)
    weights = {}
    for block in blocks:
        for a, b in combinations(block, 2):
            if rng.random() < p_intra:
                weights[(a, b)] = 1.0
    for b1, b2 in combinations(range(len(blocks)), 2):
        for a in blocks[b1]:
            for b in blocks[b2]:
                if rng.random() < p_inter:
                    weights[tuple(sorted((a, b)))] = 1.0
    return nodes, weights, blocks


def partitions_equal(assignment, blocks):
    got = {}
    for node, cid in assignment.items():
        got.setdefault(cid, set()).add(node)
    return sorted(map(sorted, got.values())) == sorted(map(sorted, (set(b) for b in blocks)))


class TestGreedyModularity:
    def test_empty(self):
        assert greedy_modularity([], {}) == ({}, 0.0)

    def test_edgeless_graph_all_singletons(self):
        assignment, q = greedy_modularity(["a", "b", "c"], {})
        assert sorted(assignment.values()) == [0, 1, 2]
        assert q == 0.0

    def test_single_edge_one_community(self):
        assignment, q = greedy_modularity(["a", "b"], {("a", "b"): 1.0})
        assert assignment["a"] == assignment["b"]

    def test_two_cliques_with_bridge(self):
        left = [f"l{i}" for i in range(5)]
        right = [f"r{i}" for i in range(5)]
        weights = clique_weights(left) | clique_weights(right)
        weights[("l0", "r0")] = 1.0
        nodes = left + right
        assignment, q = greedy_modularity(nodes, weights)
        assert partitions_equal(assignment, [left, right])
        # matches the exhaustive best split into at most two parts
        _, best_q = best_partition_upto_two(nodes, weights)
        assert q == pytest.approx(best_q)

    def test_disconnected_components_never_share(self):
        rng = random.Random(0)
        for _ in range(10):
            n1 = rng.randint(2, 5)
            n2 = rng.randint(2, 5)
            a_nodes = [f"a{i}" for i in range(n1)]
            b_nodes = [f"b{i}" for i in range(n2)]
            weights = {}
            for x, y in combinations(a_nodes, 2):
                if rng.random() < 0.7:
                    weights[(x, y)] = rng.randint(1, 3)
            for x, y in combinations(b_nodes, 2):
                if rng.random() < 0.7:
                    weights[(x, y)] = rng.randint(1, 3)
            assignment, _ = greedy_modularity(a_nodes + b_nodes, weights)
            a_comms = {assignment[x] for x in a_nodes}
            b_comms = {assignment[x] for x in b_nodes}
            assert not (a_comms & b_comms)

    def test_never_worse_than_singletons(self):
        rng = random.Random(3)
        for _ in range(15):
            n = rng.randint(2, 14)
            nodes = [f"x{i}" for i in range(n)]
            weights = {}
            for a, b in combinations(nodes, 2):
                if rng.random() < 0.3:
                    weights[(a, b)] = rng.randint(1, 4)
            assignment, q = greedy_modularity(nodes, weights)
            singles = modularity_score({x: i for i, x in enumerate(nodes)}, nodes, weights)
            assert q >= singles - 1e-12

    def test_reported_score_matches_formula_and_networkx(self):
        rng = random.Random(5)
        for _ in range(10):
            nodes, weights, _ = planted_graph(rng, [4, 5], p_intra=0.8, p_inter=0.2)
            assignment, q = greedy_modularity(nodes, weights)
            assert q == pytest.approx(modularity_score(assignment, nodes, weights))
            groups = {}
            for node, cid in assignment.items():
                groups.setdefault(cid, set()).add(node)
            nx_q = nx.algorithms.community.modularity(
                as_nx(nodes, weights), list(groups.values()), weight="weight"
            )
            assert q == pytest.approx(nx_q)

    def test_planted_partition_recovery(self):
        rng = random.Random(17)
        for sizes in ([8, 8, 8], [10, 6, 12], [7, 7, 7, 7]):
            nodes, weights, blocks = planted_graph(rng, sizes, p_intra=0.95, p_inter=0.03)
            assignment, _ = greedy_modularity(nodes, weights)
            assert partitions_equal(assignment, blocks)

    def test_two_block_recovery_matches_bruteforce(self):
        rng = random.Random(23)
        nodes, weights, blocks = planted_graph(rng, [6, 6], p_intra=1.0, p_inter=0.08)
        assignment, q = greedy_modularity(nodes, weights)
        best, best_q = best_partition_upto_two(nodes, weights)
        assert partitions_equal(assignment, blocks)
        assert q == pytest.approx(best_q)

    def test_deterministic_across_runs(self):
        rng = random.Random(9)
        nodes, weights, _ = planted_graph(rng, [5, 9, 4], p_intra=0.7, p_inter=0.1)
        first = greedy_modularity(nodes, weights)
        for _ in range(3):
            assert greedy_modularity(nodes, weights) == first

    def test_input_order_does_not_matter(self):
        rng = random.Random(13)
        nodes, weights, _ = planted_graph(rng, [5, 5])
        shuffled = list(nodes)
        rng.shuffle(shuffled)
        flipped = {(b, a): w for (a, b), w in weights.items()}
        assert greedy_modularity(nodes, weights) == greedy_modularity(shuffled, flipped)

    def test_unknown_edge_node_rejected(self):
        with pytest.raises(ValueError):
            greedy_modularity(["a"], {("a", "zz"): 1.0})

    def test_resolution_extremes(self):
        nodes, weights, blocks = planted_graph(random.Random(1), [5, 5], p_intra=1.0, p_inter=0.1)
        # very high resolution keeps everything singleton
        assignment, _ = greedy_modularity(nodes, weights, resolution=1e9)
        assert len(set(assignment.values())) == len(nodes)
        # resolution zero merges every connected pair eagerly
        assignment, _ = greedy_modularity(nodes, weights, resolution=0.0)
        assert len(set(assignment.values())) == 1


class TestUndirectedWeights:
    def test_directions_sum(self):
        out = undirected_weights({("a", "b"): 2, ("b", "a"): 3})
        assert out == {("a", "b"): 5.0}

    def test_unweighted_counts_edges(self):
        out = undirected_weights({("a", "b"): 7, ("b", "a"): 9}, weighted=False)
        assert out == {("a", "b"): 2.0}

    def test_self_loops_dropped(self):
        assert undirected_weights({("a", "a"): 5}) == {}
