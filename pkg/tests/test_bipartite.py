import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matchmarket import LikeGraph, counterexample_instance, max_matching, min_vertex_cover_min_agents
from matchmarket.flow import INFINITE, FlowNetwork, MaxFlow, UnboundedFlow, max_flow, min_cut_partition
from matchmarket.graph import matching_size


def brute_matching_size(g: LikeGraph) -> int:
    edges = g.edges()
    for k in range(g.n, 0, -1):
        for sub in combinations(edges, k):
            if len({i for i, _ in sub}) == k and len({j for _, j in sub}) == k:
                return k
    return 0


def brute_cover(g: LikeGraph):
    """Smallest cover, ties broken by fewest agents: for a fixed agent part the goods part is forced."""
    best = None
    for k in range(g.n + 1):
        for agents in combinations(range(g.n), k):
            goods = {j for i in range(g.n) if i not in agents for j in g.adj[i]}
            key = (k + len(goods), k)
            if best is None or key < best[0]:
                best = (key, set(agents), goods)
    return best


@st.composite
def like_graphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    adj = []
    for _ in range(n):
        row = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True))
        adj.append(sorted(row))
    return LikeGraph(n, adj)


def test_complete_two_by_two():
    g = LikeGraph.from_edges(2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    assert matching_size(max_matching(g)) == 2


def test_star_matches_one():
    g = LikeGraph.from_edges(3, [(0, 0), (1, 0), (2, 0)])
    assert matching_size(max_matching(g)) == 1


def test_counterexample_matching_size():
    g = LikeGraph.from_utilities(counterexample_instance().utilities)
    # frozen from an exhaustive search over edge subsets of the 13-edge graph
    assert matching_size(max_matching(g)) == 7
    assert brute_matching_size(g) == 7


@given(like_graphs())
def test_matching_is_maximum_and_valid(g):
    match = max_matching(g)
    used = [j for j in match if j >= 0]
    assert len(used) == len(set(used))
    assert all(j in g.adj[i] for i, j in enumerate(match) if j >= 0)
    assert matching_size(match) == brute_matching_size(g)


def test_restricted_matching_stays_inside():
    g = LikeGraph.from_edges(3, [(0, 0), (1, 0), (1, 1), (2, 2)])
    match = max_matching(g, agents={0, 1}, goods={0})
    assert match[2] == -1
    assert matching_size(match) == 1


def test_cover_example_prefers_goods():
    g = LikeGraph.from_edges(2, [(0, 0), (1, 0), (1, 1)])
    cover = min_vertex_cover_min_agents(g)
    assert cover.G1 == {0, 1} and cover.A2 == set()
    assert cover.A1 == {0, 1} and cover.G2 == set()


def test_cover_of_identity():
    cover = min_vertex_cover_min_agents(LikeGraph.from_edges(2, [(0, 0), (1, 1)]))
    assert len(cover.G1) + len(cover.A2) == 2
    assert cover.A2 == set()


def check_cover_invariants(g: LikeGraph):
    cover = min_vertex_cover_min_agents(g)
    agents, goods = set(range(g.n)), set(range(g.n))
    assert cover.A1 | cover.A2 == agents and not cover.A1 & cover.A2
    assert cover.G1 | cover.G2 == goods and not cover.G1 & cover.G2
    # a vertex cover of minimum size, with the fewest agents among those
    assert all(i in cover.A2 or j in cover.G1 for i, j in g.edges())
    size = len(cover.G1) + len(cover.A2)
    assert size == matching_size(max_matching(g))
    (best_size, best_agents), _, _ = brute_cover(g)
    assert (size, len(cover.A2)) == (best_size, best_agents)
    assert all(set(g.adj[i]) <= cover.G1 for i in cover.A1)
    inner = max_matching(g, cover.A2, cover.G2)
    assert all(inner[i] >= 0 for i in cover.A2)
    by_good = g.goods_adj()
    G1 = sorted(cover.G1)
    for k in range(1, len(G1) + 1):
        for S in combinations(G1, k):
            assert len({i for j in S for i in by_good[j]} & cover.A1) >= k
    return cover


@given(like_graphs())
def test_cover_invariants_small(g):
    check_cover_invariants(g)


@pytest.mark.parametrize("seed", range(6))
def test_cover_invariants_n8(seed):
    rng = random.Random(seed)
    adj = [sorted(rng.sample(range(8), rng.randint(1, 3))) for _ in range(8)]
    check_cover_invariants(LikeGraph(8, adj))


@given(like_graphs())
def test_matching_and_cover_are_deterministic(g):
    assert max_matching(g) == max_matching(LikeGraph(g.n, [list(a) for a in g.adj]))
    assert min_vertex_cover_min_agents(g) == min_vertex_cover_min_agents(g)


# --------------------------------------------------------------------- flows


def test_single_arc():
    net = FlowNetwork(2, 0, 1)
    net.add_arc(0, 1, F(7, 3))
    value, flows = max_flow(net)
    assert value == F(7, 3) and flows == (F(7, 3),)
    assert min_cut_partition(net)[0] == {0}


def test_two_parallel_paths():
    net = FlowNetwork(4, 0, 3)
    for mid, cap in ((1, F(1)), (2, F(1, 2))):
        net.add_arc(0, mid, cap)
        net.add_arc(mid, 3, cap)
    assert max_flow(net)[0] == F(3, 2)


def test_bottleneck_cut():
    net = FlowNetwork(4, 0, 3)
    net.add_arc(0, 1, 5)
    net.add_arc(1, 2, F(1, 3))
    net.add_arc(2, 3, 5)
    source_side, sink_side = min_cut_partition(net)
    assert source_side == {0, 1} and sink_side == {2, 3}


def test_shared_good_pricing_network():
    # price class 2 of the two-agent shared-good market: agents 1, 2 -> good 0
    rho = F(2)
    net = FlowNetwork(5, 0, 4)
    for agent in (1, 2):
        net.add_arc(0, agent, min(F(1), rho))
        net.add_arc(agent, 3, INFINITE)
    net.add_arc(3, 4, rho)
    assert max_flow(net)[0] == rho * 1


def test_parametric_network_above_tight_price():
    # goods -> agents network of the worked disagreement example; tight at theta 4
    theta = F(5)
    net = FlowNetwork(5, 0, 4)
    net.add_arc(0, 1, theta)
    net.add_arc(1, 2, INFINITE)
    net.add_arc(1, 3, INFINITE)
    net.add_arc(2, 4, min(theta, 1 + F(1, 2) * theta))
    net.add_arc(3, 4, min(theta, F(1)))
    source_side, _ = min_cut_partition(net)
    assert source_side > {0}
    assert max_flow(net)[0] == F(9, 2)


def test_infinite_path_is_unbounded():
    net = FlowNetwork(3, 0, 2)
    net.add_arc(0, 1, INFINITE)
    net.add_arc(1, 2, INFINITE)
    with pytest.raises(UnboundedFlow):
        max_flow(net)


def test_source_in_arcs_rejected():
    net = FlowNetwork(3, 0, 2)
    with pytest.raises(ValueError):
        net.add_arc(1, 0, 1)
    with pytest.raises(ValueError):
        net.add_arc(2, 1, 1)


@st.composite
def networks(draw):
    size = draw(st.integers(2, 7))
    net = FlowNetwork(size, 0, size - 1)
    for _ in range(draw(st.integers(0, 14))):
        tail = draw(st.integers(0, size - 2))
        head = draw(st.integers(1, size - 1))
        if tail == head:
            continue
        cap = draw(st.one_of(st.fractions(0, 5, max_denominator=12), st.just(INFINITE)))
        net.add_arc(tail, head, cap)
    return net


@given(networks())
def test_max_flow_equals_min_cut(net):
    try:
        mf = MaxFlow(net)
    except UnboundedFlow:
        return
    side = mf.source_reachable()
    assert mf.cut_capacity(side) == mf.value
    assert mf.cut_capacity(mf.maximal_source_side()) == mf.value
    balance = [F(0)] * net.size
    for k, (tail, head, cap) in enumerate(net.arcs):
        f = mf.arc_flow(k)
        assert 0 <= f and (cap is INFINITE or f <= cap)
        balance[tail] -= f
        balance[head] += f
    assert all(b == 0 for v, b in enumerate(balance) if v not in (net.source, net.sink))
    assert balance[net.sink] == mf.value
    assert MaxFlow(net).flows() == mf.flows()


def test_matching_backends_agree():
    from matchmarket import _pymatch

    try:
        from matchmarket import _cmatch
    except ImportError:
        pytest.skip("compiled kernel not built")
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 12)
        adj = [sorted(rng.sample(range(n), rng.randint(0, n))) for _ in range(n)]
        indptr = [0]
        indices = []
        for row in adj:
            indices.extend(row)
            indptr.append(len(indices))
        a = _pymatch.max_matching_csr(n, n, indptr, indices)
        b = _cmatch.max_matching_csr(n, n, indptr, indices)
        assert list(a[0]) == list(b[0]) and list(a[1]) == list(b[1])
