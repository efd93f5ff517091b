import numpy as np
import pytest

from richnull.errors import EdgeListError
from richnull.graph import (
    Graph,
    KPlusSequence,
    Multigraph,
    cutoff_degree,
    kplus_from_graph,
    load_edge_list,
    rank_nodes,
    rich_club_coefficient,
)


class TestGraph:
    def test_basic_shape(self, k3):
        assert k3.n == 3
        assert k3.edge_count == 3
        assert list(k3.degrees) == [2, 2, 2]
        assert k3.adj[0] == frozenset({1, 2})

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph([(1, 1)])

    def test_rejects_duplicate_edge_either_orientation(self):
        with pytest.raises(ValueError, match="duplicate"):
            Graph([(0, 1), (1, 0)])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Graph([])

    def test_labels_sorted_and_indexed(self):
        g = Graph([(10, 3), (3, 7)])
        assert g.labels == (3, 7, 10)
        assert g.index_of(7) == 1
        assert g.label_of(2) == 10

    def test_string_labels(self):
        g = Graph([("b", "a"), ("b", "c")])
        assert g.labels == ("a", "b", "c")
        assert g.degrees[g.index_of("b")] == 2

    def test_extra_nodes_stay_isolated(self):
        g = Graph([(0, 1)], extra_nodes=[5])
        assert g.n == 3
        assert g.degrees[g.index_of(5)] == 0

    def test_adjacency_matrix(self, p3):
        a = p3.adjacency_matrix()
        assert a[0, 1] == a[1, 0] == 1.0
        assert a[0, 2] == 0.0
        assert np.trace(a) == 0.0


class TestMultigraph:
    def test_parallel_edges_counted(self):
        m = Multigraph(3, ((0, 1), (1, 0), (1, 2)))
        assert list(m.degrees) == [2, 3, 1]
        assert not m.is_simple()

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Multigraph(2, ((0, 0),))

    def test_simple_check(self):
        assert Multigraph(3, ((0, 1), (1, 2))).is_simple()


class TestLoadEdgeList:
    def test_comments_and_blanks(self):
        text = "# header\n\n0 1\n1 2\n"
        g = load_edge_list(text)
        assert g.n == 3 and g.edge_count == 2

    def test_line_numbers_in_errors(self):
        with pytest.raises(EdgeListError, match="line 3"):
            load_edge_list("0 1\n1 2\n2 2\n")

    def test_token_count(self):
        with pytest.raises(EdgeListError, match="two"):
            load_edge_list("0 1 2\n")

    def test_integer_ids_by_default(self):
        with pytest.raises(EdgeListError, match="non-integer"):
            load_edge_list("a b\n")
        with pytest.raises(EdgeListError, match="negative"):
            load_edge_list("0 -1\n")

    def test_string_ids_opt_in(self):
        g = load_edge_list("a b\nb c\n", allow_string_ids=True)
        assert g.labels == ("a", "b", "c")

    def test_duplicate_edge_reported(self):
        with pytest.raises(EdgeListError, match="duplicate"):
            load_edge_list("0 1\n1 0\n")

    def test_empty_input(self):
        with pytest.raises(EdgeListError):
            load_edge_list("# nothing\n")


def test_karate_fixture(karate):
    assert karate.n == 34
    assert karate.edge_count == 78
    assert int(karate.degrees.max()) == 17


class TestRanking:
    def test_deterministic_breaks_ties_by_label(self, s3):
        r = rank_nodes(s3)
        assert list(r.order) == [0, 1, 2, 3]
        assert list(s3.degrees[r.order]) == [3, 1, 1, 1]

    def test_positions_invert_order(self, karate):
        r = rank_nodes(karate)
        assert np.array_equal(r.order[r.positions], np.arange(karate.n))
        assert all(r.positions[r.order[i]] == i for i in range(karate.n))

    def test_random_policy_keeps_degrees_sorted(self, karate):
        rng_seed = 42
        r = rank_nodes(karate, policy="random", seed=rng_seed)
        deg = karate.degrees[r.order]
        assert np.all(np.diff(deg) <= 0)

    def test_random_policy_reproducible(self, karate):
        a = rank_nodes(karate, policy="random", seed=7)
        b = rank_nodes(karate, policy="random", seed=7)
        assert np.array_equal(a.order, b.order)

    def test_random_policy_permutes_only_within_degree_blocks(self, karate):
        det = rank_nodes(karate)
        rnd = rank_nodes(karate, policy="random", seed=3)
        assert np.array_equal(karate.degrees[det.order], karate.degrees[rnd.order])

    def test_unknown_policy(self, k3):
        with pytest.raises(ValueError):
            rank_nodes(k3, policy="sideways")


class TestKPlus:
    def test_k3_observed(self, k3):
        r = rank_nodes(k3)
        kp = kplus_from_graph(k3, r)
        assert list(kp.values) == [0, 1, 2]
        assert kp.total == k3.edge_count

    def test_s3_observed(self, s3):
        kp = kplus_from_graph(s3, rank_nodes(s3))
        assert list(kp.values) == [0, 1, 1, 1]

    def test_sums_to_link_count_random(self):
        from conftest import random_simple_graph

        rng = np.random.default_rng(11)
        for _ in range(25):
            g = random_simple_graph(rng, int(rng.integers(3, 30)))
            kp = kplus_from_graph(g, rank_nodes(g))
            assert kp.total == g.edge_count

    def test_first_rank_must_be_zero(self):
        with pytest.raises(ValueError, match="rank 0"):
            KPlusSequence([1, 0], "observed")

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            KPlusSequence([0, -1], "observed")

    def test_me2_rank_bound_checked(self):
        kp = KPlusSequence([0, 2], "me2")
        with pytest.raises(ValueError, match="rank bound"):
            kp.validate_against(np.array([2, 2]))

    def test_validate_against_degree_cap(self):
        kp = KPlusSequence([0, 3], "observed")
        with pytest.raises(ValueError, match="exceeds degree"):
            kp.validate_against(np.array([3, 2]))


def test_rich_club_star(s3):
    kp = kplus_from_graph(s3, rank_nodes(s3))
    # hub plus top leaf: one link among 4 possible ordered pairs / 2
    assert rich_club_coefficient(kp, 4) == pytest.approx(0.5)
    assert rich_club_coefficient(kp, 2) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        rich_club_coefficient(kp, 1)


def test_cutoff_degree(karate, k3):
    assert cutoff_degree(karate) == pytest.approx(np.sqrt(156))
    assert cutoff_degree(k3) == pytest.approx(np.sqrt(6))
