import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netexpand.graph import Graph, complete_graph, cycle_graph, generate_ba, generate_er, path_graph
from netexpand.search import (
    STRATEGIES,
    DeadEndError,
    ExhaustedError,
    SearchState,
    SearchTrace,
    run_search,
    step_bfs,
    step_ds,
    step_rw,
    step_xs,
    steps_to_coverage,
)

from . import oracles


def state_with(g, visited, current, seed=0, track_gains=True):
    """Search state whose visited set is ``visited`` (first element is the source)."""
    st_ = SearchState(g, visited[0], seed, track_gains=track_gains)
    for v in visited[1:]:
        st_.cover.add(v)
    st_.current = current
    return st_


def two_cliques(m):
    """K_m on 0..m-1 and on m..2m-1, bridged by (m-1, m)."""
    edges = [(u, v) for base in (0, m) for u in range(base, base + m) for v in range(u + 1, base + m)]
    return Graph.from_edges(2 * m, edges + [(m - 1, m)])


# ---------------------------------------------------------------- single steps

def test_xs_star_center_any_leaf(star9):
    st_ = state_with(star9, [0], 0)
    assert st_.covered_count == 10
    step_xs(star9, st_)
    assert st_.current in range(1, 10)
    assert st_.covered_count == 10 and st_.steps == 1


def test_xs_path_forced(path5):
    st_ = state_with(path5, [0, 1], 1)
    assert st_.cover.gain[2] == 1
    step_xs(path5, st_)
    assert st_.current == 2
    assert st_.covered_count == 4


def test_xs_prefers_bridge(two_triangles):
    st_ = state_with(two_triangles, [0], 0)
    # candidate 2 newly reaches node 3, candidate 1 reaches nothing new
    assert (st_.cover.gain[2], st_.cover.gain[1]) == (1, 0)
    for seed in range(10):
        s = state_with(two_triangles, [0], 0, seed=seed)
        step_xs(two_triangles, s)
        assert s.current == 2


def test_ds_star_leaf_goes_to_center(star9):
    st_ = state_with(star9, [3], 3, track_gains=False)
    step_ds(star9, st_)
    assert st_.current == 0


def test_ds_prefers_high_degree():
    # path 0-1-2, edge 1-3, node 3 with five pendant leaves 4..8
    g = Graph.from_edges(9, [(0, 1), (1, 2), (1, 3)] + [(3, leaf) for leaf in range(4, 9)])
    st_ = state_with(g, [0], 0, track_gains=False)
    step_ds(g, st_)
    assert st_.current == 1
    step_ds(g, st_)
    assert st_.current == 3


def test_ds_and_xs_similar_on_hub_graph():
    g = generate_ba(2000, 3, seed=5)
    src = int(np.argmin(g.degrees))
    xs = run_search(g, "XS", src, target=None, max_steps=200, seed=5).final_coverage
    ds = run_search(g, "DS", src, target=None, max_steps=200, seed=5).final_coverage
    assert abs(ds - xs) <= 0.10 * xs


def test_rw_is_unbiased_on_path(path5):
    left = 0
    trials = 10_000
    rng = np.random.default_rng(123)
    for _ in range(trials):
        st_ = SearchState(path5, 2, rng, track_gains=False)
        step_rw(path5, st_)
        assert st_.current in (1, 3)
        left += st_.current == 1
    assert abs(left / trials - 0.5) < 0.02


def test_rw_self_avoiding_on_cycle():
    g = cycle_graph(4)
    for seed in range(20):
        st_ = state_with(g, [0, 1], 1, seed=seed, track_gains=False)
        step_rw(g, st_)
        assert st_.current == 2


def test_fallback_uniform_over_visited_neighbors(k4):
    counts = np.zeros(4)
    rng = np.random.default_rng(0)
    for _ in range(3000):
        st_ = state_with(k4, [0, 1, 2, 3], 3, seed=rng, track_gains=True)
        before = st_.covered_count
        step_xs(k4, st_)
        assert st_.covered_count == before and st_.visited_count == 4 and st_.steps == 1
        counts[st_.current] += 1
    assert counts[3] == 0
    assert np.all(np.abs(counts[:3] / 3000 - 1 / 3) < 0.04)


@pytest.mark.parametrize("step", [step_xs, step_ds, step_rw])
def test_isolated_node_is_dead_end(step):
    g = Graph.from_edges(3, [(1, 2)])
    with pytest.raises(DeadEndError):
        step(g, state_with(g, [0], 0))


def test_bfs_star_from_center(star9):
    st_ = state_with(star9, [0], 0, track_gains=False)
    assert st_.covered_count == 10
    for i in range(1, 10):
        step_bfs(star9, st_)
        assert st_.current == i
    assert st_.steps == 9 and st_.visited_count == 10
    with pytest.raises(ExhaustedError):
        step_bfs(star9, st_)


def test_bfs_path(path5):
    st_ = state_with(path5, [0], 0, track_gains=False)
    order = []
    for _ in range(4):
        step_bfs(path5, st_)
        order.append(st_.current)
    assert order == [1, 2, 3, 4] and st_.steps == 4


def test_bfs_fifo_order():
    # 0 -> {1, 2}; 1 -> {3}; 2 -> {4}
    g = Graph.from_edges(5, [(0, 1), (0, 2), (1, 3), (2, 4)])
    st_ = state_with(g, [0], 0, track_gains=False)
    seq = []
    for _ in range(4):
        step_bfs(g, st_)
        seq.append(st_.current)
    assert seq == [1, 2, 3, 4]


# ---------------------------------------------------------------- runs

@pytest.mark.parametrize("strategy", STRATEGIES)
def test_clique_needs_no_steps(strategy):
    trace = run_search(complete_graph(10), strategy, 4, target=1.0, seed=1)
    assert trace.steps == 0 and trace.termination == "target"
    assert steps_to_coverage(trace, 1.0) == 0


def test_xs_path_from_middle():
    # covered starts as {1,2,3}. Going left, 1 covers 0, then 0 is the only
    # unvisited neighbor, then fallbacks lead back through 1 and 2 to 3.
    # Shortest run is therefore 1,0,1,2,3 (or its mirror): five steps.
    seen = set()
    for seed in range(40):
        trace = run_search(path_graph(5), "XS", 2, target=1.0, seed=seed)
        assert trace.termination == "target" and trace.final_coverage == 1.0
        assert trace.steps >= 5
        seen.add(tuple(trace.nodes))
    assert {s[0] for s in seen} == {1, 3}
    assert {(1, 0, 1, 2, 3), (3, 4, 3, 2, 1)} <= seen


def test_target_node_mode(path5):
    trace = run_search(path5, "BFS", 0, target=None, target_node=3)
    # node 3 is covered once node 2 holds the query
    assert trace.termination == "target_node"
    assert trace.nodes == [1, 2]


def test_budget_termination():
    g = generate_er(500, 0.01, seed=1)
    trace = run_search(g, "RW", 0, target=1.0, max_steps=7, seed=1)
    assert trace.steps == 7 and trace.termination == "budget"


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_disconnected_target_is_exhausted(strategy):
    g = Graph.from_edges(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)])
    trace = run_search(g, strategy, 0, target=0.9, seed=3)
    assert trace.termination == "exhausted"
    assert trace.final_coverage == 0.5
    assert steps_to_coverage(trace, 0.9) is None


def test_run_rejects_bad_arguments(path5):
    with pytest.raises(ValueError):
        run_search(path5, "XS", 0, target=0.0)
    with pytest.raises(ValueError):
        run_search(path5, "teleport", 0)
    with pytest.raises(ValueError):
        run_search(path5, "XS", 9)
    with pytest.raises(ValueError):
        run_search(path5, "XS", 0, target=None)


def test_strategy_names_are_case_insensitive(path5):
    assert run_search(path5, "xs", 0, seed=1).strategy == "XS"


# ---------------------------------------------------------------- steps_to_coverage

def _trace(covered, n=100, initial=5):
    return SearchTrace("XS", 0, n, initial, nodes=list(range(len(covered))),
                       visited=list(range(2, len(covered) + 2)), covered=covered)


def test_steps_to_coverage_first_crossing():
    t = _trace([10, 25, 40])
    assert steps_to_coverage(t, 0.2) == 2
    assert steps_to_coverage(t, 0.5) is None
    assert steps_to_coverage(t, 0.05) == 0
    assert steps_to_coverage(t, 0.4) == 3


def test_trace_csv():
    text = run_search(path_graph(5), "BFS", 0, target=1.0).to_csv()
    assert text.splitlines() == [
        "step,node,visited,covered,coverage_fraction",
        "1,1,2,3,0.600000",
        "2,2,3,4,0.800000",
        "3,3,4,5,1.000000",
    ]


# ---------------------------------------------------------------- properties

connected_small = st.integers(2, 50).flatmap(
    lambda n: st.tuples(st.just(n), st.floats(0.0, 0.4), st.integers(0, 10**6))
)


def connected_graph(n, p, seed):
    """Random spanning tree plus ER noise: always connected."""
    rng = np.random.default_rng(seed)
    tree = [(v, int(rng.integers(v))) for v in range(1, n)]
    extra = generate_er(n, p, seed=seed).edges().tolist()
    return Graph.from_edges(n, tree + [tuple(e) for e in extra])


@settings(max_examples=60, deadline=None)
@given(connected_small, st.sampled_from(STRATEGIES), st.integers(0, 1000))
def test_full_coverage_and_invariants(params, strategy, seed):
    g = connected_graph(*params)
    n = g.node_count
    edges = {tuple(e) for e in g.edges().tolist()}
    src = seed % n
    trace = run_search(g, strategy, src, target=1.0, seed=seed)
    assert trace.termination == "target"
    assert trace.final_coverage == 1.0

    # replay to check incremental coverage against recomputation
    visited = [src]
    prev_visited, prev_cov = 1, trace.initial_covered
    assert prev_cov == len(oracles.neighborhood(n, edges, visited)) + 1
    for i, (v, nv, c) in enumerate(zip(trace.nodes, trace.visited, trace.covered), start=1):
        assert nv - prev_visited in (0, 1)
        if nv > prev_visited:
            assert v not in visited
            visited.append(v)
        else:
            assert v in visited
        assert c >= prev_cov
        assert c == len(oracles.neighborhood(n, edges, visited)) + len(visited)
        if strategy == "BFS":
            assert nv == i + 1
        prev_visited, prev_cov = nv, c


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_runs_are_deterministic(strategy):
    g = generate_ba(3000, 2, seed=8)
    a = run_search(g, strategy, 17, target=0.5, seed=99).to_csv()
    b = run_search(g, strategy, 17, target=0.5, seed=99).to_csv()
    assert a == b


@pytest.mark.parametrize("m", range(4, 9))
def test_xs_crosses_bridge_no_later_than_ds(m):
    g = two_cliques(m)

    def crossing(trace):
        return next(i for i, v in enumerate(trace.nodes, start=1) if v >= m)

    for src in range(m):
        for seed in range(5):
            xs = run_search(g, "XS", src, target=1.0, seed=seed)
            ds = run_search(g, "DS", src, target=1.0, seed=seed)
            assert crossing(xs) <= crossing(ds)
