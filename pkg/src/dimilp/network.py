"""Directed communication graphs and round-indexed schedules.

Agents are numbered ``1..N``. An edge ``(i, j)`` means agent ``i`` can send to
agent ``j``, so the in-neighbours of ``j`` are the agents it hears from.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .errors import ConnectivityUnreachable, NotStronglyConnected

Edge = Tuple[int, int]


@dataclass(frozen=True)
class Digraph:
    N: int
    edges: FrozenSet[Edge]

    def __post_init__(self):
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.N < 1:
            raise ValueError("a digraph needs at least one node")
        for i, j in edges:
            if not (1 <= i <= self.N and 1 <= j <= self.N):
                raise ValueError(f"edge ({i}, {j}) outside 1..{self.N}")

    def to_networkx(self) -> nx.DiGraph:
        G = nx.DiGraph()
        G.add_nodes_from(range(1, self.N + 1))
        G.add_edges_from(self.edges)
        return G

    @cached_property
    def _in_map(self):
        m = {i: set() for i in range(1, self.N + 1)}
        for u, v in self.edges:
            if u != v:
                m[v].add(u)
        return {i: frozenset(s) for i, s in m.items()}

    def in_neighbors(self, i: int) -> FrozenSet[int]:
        return self._in_map[i]

    def union(self, other: "Digraph") -> "Digraph":
        if other.N != self.N:
            raise ValueError("cannot union digraphs of different sizes")
        return Digraph(self.N, self.edges | other.edges)


def cycle_digraph(N: int) -> Digraph:
    """Directed ring ``1 -> 2 -> ... -> N -> 1`` (diameter ``N - 1``)."""
    if N < 2:
        raise ValueError("a cycle needs at least two nodes")
    return Digraph(N, frozenset((i, i % N + 1) for i in range(1, N + 1)))


def complete_digraph(N: int) -> Digraph:
    return Digraph(N, frozenset((i, j) for i in range(1, N + 1) for j in range(1, N + 1) if i != j))


def er_digraph(N: int, p: float, seed: int, max_attempts: int = 10**4,
               augment_cycle: bool = False) -> Digraph:
    """Erdos-Renyi digraph conditioned on strong connectivity.

    Every ordered pair is an edge independently with probability ``p``; the
    whole draw is repeated until it is strongly connected. With
    ``augment_cycle`` a uniformly random directed Hamiltonian cycle is added
    to the first draw instead, which is strongly connected by construction
    (needed when ``p`` is far below the connectivity threshold ``ln N / N``).

    Raises
    ------
    ConnectivityUnreachable
        If ``max_attempts`` draws were all disconnected.
    """
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        mask = rng.random((N, N)) < p
        np.fill_diagonal(mask, False)
        edges = {(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(mask))}
        if augment_cycle:
            perm = [int(v) + 1 for v in rng.permutation(N)]
            edges |= {(perm[k], perm[(k + 1) % N]) for k in range(N)}
        G = Digraph(N, frozenset(edges))
        if is_strongly_connected(G):
            return G
    raise ConnectivityUnreachable(f"no strongly connected draw in {max_attempts} attempts (N={N}, p={p})")


def is_strongly_connected(G: Digraph) -> bool:
    return nx.is_strongly_connected(G.to_networkx())


def diameter(G: Digraph) -> int:
    """Largest shortest-path length over ordered pairs."""
    if not is_strongly_connected(G):
        raise NotStronglyConnected("diameter is only defined for strongly connected digraphs")
    if G.N == 1:
        return 0
    return nx.diameter(G.to_networkx())


class GraphSchedule:
    """Total map from round ``t >= 0`` to a digraph on a fixed node set.

    ``window`` is the joint-connectivity window the schedule was built for
    (1 for static graphs, the period for periodic ones), or None if unknown.
    """

    def __init__(self, N: int, graph_at: Callable[[int], Digraph], window: Optional[int] = None,
                 static: Optional[Digraph] = None, period: Optional[Sequence[Digraph]] = None):
        self.N = N
        self._graph_at = graph_at
        self.window = window
        self.static = static
        self.period = tuple(period) if period is not None else None
        self._cache = {}

    def at(self, t: int) -> Digraph:
        if t < 0:
            raise ValueError("rounds are non-negative")
        G = self._cache.get(t)
        if G is None:
            G = self._graph_at(t)
            if G.N != self.N:
                raise ValueError(f"schedule produced a digraph on {G.N} nodes, expected {self.N}")
            if len(self._cache) < 4096:
                self._cache[t] = G
        return G

    @classmethod
    def constant(cls, G: Digraph) -> "GraphSchedule":
        return cls(G.N, lambda t: G, window=1, static=G)

    @classmethod
    def periodic(cls, graphs: Sequence[Digraph]) -> "GraphSchedule":
        graphs = tuple(graphs)
        if not graphs:
            raise ValueError("a periodic schedule needs at least one graph")
        return cls(graphs[0].N, lambda t: graphs[t % len(graphs)], window=len(graphs), period=graphs)

    @classmethod
    def random_subgraphs(cls, base: Digraph, q: float, seed: int, window: Optional[int] = None) -> "GraphSchedule":
        """Each round keeps every edge of ``base`` independently with probability ``q``.

        Rounds are generated from ``(seed, t)`` so any round can be replayed on
        its own. Joint connectivity is not guaranteed; audit it with
        ``jointly_strongly_connected``.
        """
        edges = sorted(base.edges)

        def graph_at(t):
            rng = np.random.default_rng([seed, t])
            keep = rng.random(len(edges)) < q
            return Digraph(base.N, frozenset(e for e, k in zip(edges, keep) if k))

        return cls(base.N, graph_at, window=window)


def in_neighbors(sched: GraphSchedule, t: int, i: int) -> FrozenSet[int]:
    return sched.at(t).in_neighbors(i)


def jointly_strongly_connected(sched: GraphSchedule, window: int, horizon: int) -> bool:
    """True iff every ``window`` consecutive rounds in ``[0, horizon)`` have a
    strongly connected edge union."""
    if window < 1:
        raise ValueError("window must be positive")
    for t in range(0, max(horizon - window + 1, 1)):
        edges = set()
        for tau in range(t, t + window):
            edges |= sched.at(tau).edges
        if not is_strongly_connected(Digraph(sched.N, frozenset(edges))):
            return False
    return True


def write_schedule(sched: GraphSchedule, path, horizon: Optional[int] = None) -> None:
    """Write ``* i j`` lines for static schedules, ``t i j`` lines otherwise.

    Non-static schedules are written for ``horizon`` rounds (the period, if
    periodic and no horizon is given).
    """
    lines = [f"N {sched.N}"]
    if sched.static is not None:
        lines += [f"* {i} {j}" for i, j in sorted(sched.static.edges)]
    else:
        if horizon is None:
            if sched.period is None:
                raise ValueError("a horizon is required for non-periodic schedules")
            horizon = len(sched.period)
        lines.append(f"horizon {horizon}")
        for t in range(horizon):
            lines += [f"{t} {i} {j}" for i, j in sorted(sched.at(t).edges)]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_schedule(path) -> GraphSchedule:
    """Inverse of ``write_schedule``; timed files replay periodically."""
    N = None
    horizon = None
    static_edges = set()
    timed = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "N":
                N = int(parts[1])
            elif parts[0] == "horizon":
                horizon = int(parts[1])
            elif parts[0] == "*":
                static_edges.add((int(parts[1]), int(parts[2])))
            else:
                timed.setdefault(int(parts[0]), set()).add((int(parts[1]), int(parts[2])))
    if N is None:
        raise ValueError(f"{path}: missing 'N' header")
    if not timed and horizon is None:
        return GraphSchedule.constant(Digraph(N, frozenset(static_edges)))
    if horizon is None:
        horizon = max(timed) + 1
    graphs = [Digraph(N, frozenset(static_edges | timed.get(t, set()))) for t in range(horizon)]
    return GraphSchedule.periodic(graphs)


def union_over(graphs: Iterable[Digraph]) -> Digraph:
    graphs = list(graphs)
    out = graphs[0]
    for G in graphs[1:]:
        out = out.union(G)
    return out
