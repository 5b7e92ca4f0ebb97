import itertools

import networkx as nx
import numpy as np
import pytest
from scipy.optimize import linprog

from boltapprox.space import build_explicit, build_grid


def random_space(rng, n_max=40, n_min=2):
    """Random labelings with at least one class holding two or more points."""
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        ks = int(rng.integers(1, n + 1))
        kp = int(rng.integers(1, n + 1))
        space = build_explicit(rng.integers(0, ks, n), rng.integers(0, kp, n))
        if space.n_s < n or space.n_p < n:
            return space


def scipy_error(space, f):
    """Independent oracle: HiGHS on the primal ``min t`` formulation."""
    n, ns, npc = space.n, space.n_s, space.n_p
    rows = np.zeros((2 * n, 1 + ns + npc))
    idx = np.arange(n)
    rows[:n, 0] = -1.0
    rows[idx, 1 + space.s_class] = -1.0
    rows[idx, 1 + ns + space.p_class] = -1.0
    rows[n:, 0] = -1.0
    rows[n + idx, 1 + space.s_class] = 1.0
    rows[n + idx, 1 + ns + space.p_class] = 1.0
    rhs = np.r_[-np.asarray(f), np.asarray(f)]
    cost = np.zeros(1 + ns + npc)
    cost[0] = 1.0
    res = linprog(cost, A_ub=rows, b_ub=rhs, bounds=[(None, None)] * cost.size, method="highs")
    assert res.status == 0
    return float(res.fun)


def brute_closed_bolts(space, max_len):
    """All closed bolts by exhaustive search over point sequences.

    Checks the bolt rules directly from the labels, without the bolt graph.
    Returns canonical (lexicographically smallest rotation) point tuples.
    """
    s, p = space.s_class, space.p_class
    labels = {"S": s, "P": p}
    found = set()
    for length in range(2, max_len + 1, 2):
        for seq in itertools.product(range(space.n), repeat=length):
            if any(seq[i] == seq[(i + 1) % length] for i in range(length)):
                continue
            for first, second in (("S", "P"), ("P", "S")):
                kinds = [first if i % 2 == 0 else second for i in range(length)]
                if all(labels[k][seq[i]] == labels[k][seq[(i + 1) % length]] for i, k in enumerate(kinds)):
                    rots = [seq[k:] + seq[:k] for k in range(length)]
                    found.add(min(rots))
                    break
    return found


def networkx_max_cycle_mean(space, f):
    """Max alternating mean over simple cycles of an independently built digraph."""
    g = nx.DiGraph()
    n = space.n
    for x in range(n):
        for y in range(n):
            if x != y and space.s_class[x] == space.s_class[y]:
                g.add_edge(("+", x), ("-", y))
            if x != y and space.p_class[x] == space.p_class[y]:
                g.add_edge(("-", x), ("+", y))
    best = None
    for cyc in nx.simple_cycles(g):
        val = np.mean([f[x] if sign == "+" else -f[x] for sign, x in cyc])
        best = val if best is None else max(best, val)
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def square():
    return build_grid(2, 2)


@pytest.fixture
def square_f():
    return np.array([0.0, 0.0, 0.0, 1.0])


@pytest.fixture
def doubled_pair():
    """Points 0 and 1 share both classes; point 2 is alone."""
    return build_explicit([0, 0, 1], [0, 0, 1])


def random_closed_bolt(space, rng, tries=50):
    """Closed bolt from a random walk on the labels, or None."""
    from boltapprox.bolt import validate_bolt

    n = space.n
    labels = (space.s_class, space.p_class)
    for _ in range(tries):
        x, layer = int(rng.integers(n)), 0  # layer 0 leaves by an s-link
        seen = {}
        walk = []
        while (x, layer) not in seen:
            seen[(x, layer)] = len(walk)
            walk.append(x)
            lab = labels[layer]
            nxt = np.flatnonzero(lab == lab[x])
            nxt = nxt[nxt != x]
            if nxt.size == 0:
                break
            x, layer = int(rng.choice(nxt)), 1 - layer
        else:
            cycle = walk[seen[(x, layer)]:]
            start = seen[(x, layer)]
            # rotate so the bolt starts on an s-link
            if start % 2:
                cycle = cycle[1:] + cycle[:1]
            return validate_bolt(space, cycle, closed=True)
    return None


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
