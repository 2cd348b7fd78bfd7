"""Bounded-degree graphs: construction, balls, families, text format.

Vertices are always 0..n-1.  Graphs are simple, undirected, and carry a hard
degree bound d >= 2 that every operation preserves.  The text format is

    graph <n> <m> <d>
    <u> <v>            (one line per edge, u < v, lexicographically ascending)
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DegreeExceeded, FormatError, InfeasibleSpec, NonSimple

_RANDOM_REGULAR_TRIES = 2000


class BoundedDegreeGraph:
    """Immutable simple graph on vertices 0..n-1 with max degree <= d."""

    __slots__ = ("n", "d", "adj", "_edge_set")

    def __init__(self, n: int, d: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        if d < 2:
            raise ValueError(f"degree bound must be at least 2, got {d}")
        buckets: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise NonSimple(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside vertex range [0, {n})")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise NonSimple(f"repeated edge {key}")
            seen.add(key)
            buckets[u].append(v)
            buckets[v].append(u)
        for v, nbrs in enumerate(buckets):
            if len(nbrs) > d:
                raise DegreeExceeded(v, len(nbrs), d)
        self.n = n
        self.d = d
        self.adj: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(nbrs)) for nbrs in buckets
        )
        self._edge_set = frozenset(seen)

    @property
    def m(self) -> int:
        return len(self._edge_set)

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, lexicographically ascending."""
        return sorted(self._edge_set)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoundedDegreeGraph):
            return NotImplemented
        return (self.n, self.d, self._edge_set) == (other.n, other.d, other._edge_set)

    def __hash__(self) -> int:
        return hash((self.n, self.d, self._edge_set))

    def __repr__(self) -> str:
        return f"BoundedDegreeGraph(n={self.n}, m={self.m}, d={self.d})"


def build_graph(edges: Iterable[tuple[int, int]], d: int, n: int | None = None) -> BoundedDegreeGraph:
    """Build a graph from an edge list, inferring n = max id + 1 if not given."""
    edges = list(edges)
    if n is None:
        n = 1 + max((max(u, v) for u, v in edges), default=-1)
    return BoundedDegreeGraph(n, d, edges)


class RootedBall:
    """The subgraph induced on B_s(center), re-indexed to local ids.

    Local id 0 is the center; vertices appear in BFS discovery order, so
    local ids and `dist` are deterministic for a fixed parent graph.
    `vertices[i]` is the parent id of local vertex i.
    """

    __slots__ = ("center", "radius_bound", "vertices", "dist", "edges_local", "parent_degree_bound", "__dict__")

    def __init__(self, center: int, radius_bound: int, vertices: tuple[int, ...],
                 dist: tuple[int, ...], edges_local: tuple[tuple[int, int], ...],
                 parent_degree_bound: int):
        self.center = center
        self.radius_bound = radius_bound
        self.vertices = vertices
        self.dist = dist
        self.edges_local = edges_local
        self.parent_degree_bound = parent_degree_bound

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def actual_radius(self) -> int:
        return max(self.dist)

    @cached_property
    def to_local(self) -> dict[int, int]:
        return {p: i for i, p in enumerate(self.vertices)}

    @cached_property
    def local_adj(self) -> tuple[tuple[int, ...], ...]:
        buckets: list[list[int]] = [[] for _ in self.vertices]
        for i, j in self.edges_local:
            buckets[i].append(j)
            buckets[j].append(i)
        return tuple(tuple(sorted(b)) for b in buckets)

    def as_graph(self) -> BoundedDegreeGraph:
        return BoundedDegreeGraph(self.size, self.parent_degree_bound, self.edges_local)


def ball(G: BoundedDegreeGraph, x: int, s: int) -> RootedBall:
    """Rooted ball of radius s around x, BFS order, local re-indexing."""
    if not 0 <= x < G.n:
        raise ValueError(f"center {x} outside vertex range [0, {G.n})")
    if s < 0:
        raise ValueError(f"radius must be nonnegative, got {s}")
    adj = G.adj
    dist = {x: 0}
    order = [x]
    queue = deque([x])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if du == s:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = du + 1
                order.append(w)
                queue.append(w)
    to_local = {p: i for i, p in enumerate(order)}
    edges_local = []
    for u in order:
        lu = to_local[u]
        for w in adj[u]:
            if u < w and w in dist:
                lw = to_local[w]
                edges_local.append((lu, lw) if lu < lw else (lw, lu))
    b = RootedBall(
        center=x,
        radius_bound=s,
        vertices=tuple(order),
        dist=tuple(dist[p] for p in order),
        edges_local=tuple(sorted(edges_local)),
        parent_degree_bound=G.d,
    )
    b.to_local = to_local
    return b


def ball_vertices(G: BoundedDegreeGraph, x: int, s: int) -> dict[int, int]:
    """Vertices of B_s(x) mapped to their distance from x (cheap: no edges)."""
    adj = G.adj
    dist = {x: 0}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if du == s:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def graph_distance(G: BoundedDegreeGraph, x: int, z: int, cutoff: int | None = None) -> int | None:
    """d_G(x, z), or None if z is unreachable (or beyond cutoff)."""
    if x == z:
        return 0
    dist = {x: 0}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if cutoff is not None and du == cutoff:
            continue
        for w in G.adj[u]:
            if w not in dist:
                if w == z:
                    return du + 1
                dist[w] = du + 1
                queue.append(w)
    return None


def max_ball_size_bound(d: int, r: int) -> int:
    """Worst-case |B_r(x)| over all graphs of max degree d: the tree bound."""
    if d < 2:
        raise ValueError(f"degree bound must be at least 2, got {d}")
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    if d == 2:
        return 2 * r + 1
    return 1 + d * ((d - 1) ** r - 1) // (d - 2)


def max_ball_size_actual(G: BoundedDegreeGraph, r: int) -> int:
    """max_x |B_r(x, G)| by BFS from every vertex."""
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    adj = G.adj
    n = G.n
    stamp = [-1] * n
    depth = [0] * n
    best = 0
    for x in range(n):
        stamp[x] = x
        depth[x] = 0
        queue = deque([x])
        count = 1
        while queue:
            u = queue.popleft()
            du = depth[u]
            if du == r:
                continue
            for w in adj[u]:
                if stamp[w] != x:
                    stamp[w] = x
                    depth[w] = du + 1
                    count += 1
                    queue.append(w)
        if count > best:
            best = count
    return best


def components(G: BoundedDegreeGraph) -> list[list[int]]:
    """Connected components as sorted id lists, ordered by smallest member."""
    seen = [False] * G.n
    out: list[list[int]] = []
    for x in range(G.n):
        if seen[x]:
            continue
        seen[x] = True
        comp = [x]
        queue = deque([x])
        while queue:
            u = queue.popleft()
            for w in G.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def induced_subgraph(G: BoundedDegreeGraph, vertices: Iterable[int]) -> BoundedDegreeGraph:
    """Subgraph induced on the given vertices, re-indexed to 0..k-1 by rank."""
    order = sorted(set(vertices))
    pos = {v: i for i, v in enumerate(order)}
    edges = [
        (pos[u], pos[w])
        for u in order
        for w in G.adj[u]
        if u < w and w in pos
    ]
    return BoundedDegreeGraph(len(order), G.d, edges)


def remove_edges(G: BoundedDegreeGraph, removed: Iterable[tuple[int, int]]) -> BoundedDegreeGraph:
    """Copy of G with the given edges deleted; edges must exist in G."""
    drop = set()
    for u, v in removed:
        key = (u, v) if u < v else (v, u)
        if not G.has_edge(*key):
            raise ValueError(f"cannot remove non-edge {key}")
        drop.add(key)
    return BoundedDegreeGraph(G.n, G.d, (e for e in G.edges() if e not in drop))


# --- graph families -------------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    """A named graph family instance: family name, integer params, seed."""

    family: str
    params: tuple[int, ...]
    seed: int | None = None

    def __post_init__(self):
        if self.family not in _GENERATORS:
            raise InfeasibleSpec(
                f"unknown family {self.family!r}; known: {sorted(_GENERATORS)}"
            )


def _gen_path(params: tuple[int, ...], seed: int | None) -> BoundedDegreeGraph:
    (n,) = params
    if n < 1:
        raise InfeasibleSpec(f"path needs n >= 1, got {n}")
    return BoundedDegreeGraph(n, 2, ((i, i + 1) for i in range(n - 1)))


def _gen_cycle(params: tuple[int, ...], seed: int | None) -> BoundedDegreeGraph:
    (n,) = params
    if n < 3:
        raise InfeasibleSpec(f"cycle needs n >= 3, got {n}")
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return BoundedDegreeGraph(n, 2, edges)


def _gen_grid(params: tuple[int, ...], seed: int | None) -> BoundedDegreeGraph:
    n1, n2 = params
    if n1 < 1 or n2 < 1:
        raise InfeasibleSpec(f"grid needs positive side lengths, got {n1}x{n2}")
    edges = []
    for i in range(n1):
        for j in range(n2):
            v = i * n2 + j
            if j + 1 < n2:
                edges.append((v, v + 1))
            if i + 1 < n1:
                edges.append((v, v + n2))
    return BoundedDegreeGraph(n1 * n2, 4, edges)


def _gen_full_tree(params: tuple[int, ...], seed: int | None) -> BoundedDegreeGraph:
    branching, depth = params
    if branching < 1 or depth < 0:
        raise InfeasibleSpec(f"full_tree needs branching >= 1, depth >= 0, got {params}")
    if branching == 1:
        n = depth + 1
    else:
        n = (branching ** (depth + 1) - 1) // (branching - 1)
    # heap layout: children of i are branching*i + 1 .. branching*i + branching
    edges = [((i - 1) // branching, i) for i in range(1, n)]
    return BoundedDegreeGraph(n, max(2, branching + 1), edges)


def _gen_random_regular(params: tuple[int, ...], seed: int | None) -> BoundedDegreeGraph:
    n, d = params
    if d < 2:
        raise InfeasibleSpec(f"random_regular needs d >= 2, got {d}")
    if d >= n or (n * d) % 2 != 0:
        raise InfeasibleSpec(f"no {d}-regular simple graph on {n} vertices")
    rng = random.Random(seed)
    stubs = [v for v in range(n) for _ in range(d)]
    for _ in range(_RANDOM_REGULAR_TRIES):
        rng.shuffle(stubs)
        pairs = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            key = (u, v) if u < v else (v, u)
            if key in pairs:
                ok = False
                break
            pairs.add(key)
        if ok:
            return BoundedDegreeGraph(n, d, pairs)
    raise InfeasibleSpec(
        f"pairing model found no simple {d}-regular graph on {n} vertices "
        f"after {_RANDOM_REGULAR_TRIES} tries (seed {seed})"
    )


_GENERATORS = {
    "path": _gen_path,
    "cycle": _gen_cycle,
    "grid": _gen_grid,
    "full_tree": _gen_full_tree,
    "random_regular": _gen_random_regular,
}

_PARAM_COUNTS = {"path": 1, "cycle": 1, "grid": 2, "full_tree": 2, "random_regular": 2}


def generate(spec: FamilySpec) -> BoundedDegreeGraph:
    """Deterministically generate the graph described by spec."""
    want = _PARAM_COUNTS[spec.family]
    if len(spec.params) != want:
        raise InfeasibleSpec(
            f"family {spec.family!r} takes {want} parameter(s), got {spec.params}"
        )
    return _GENERATORS[spec.family](spec.params, spec.seed)


# --- text format ----------------------------------------------------------

def format_graph(G: BoundedDegreeGraph) -> str:
    lines = [f"graph {G.n} {G.m} {G.d}"]
    lines.extend(f"{u} {v}" for u, v in G.edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> BoundedDegreeGraph:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty graph file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "graph":
        raise FormatError(f"bad graph header: {lines[0]!r}")
    try:
        n, m, d = int(head[1]), int(head[2]), int(head[3])
    except ValueError as exc:
        raise FormatError(f"non-integer graph header field: {lines[0]!r}") from exc
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != m:
        raise FormatError(f"header claims {m} edges, file has {len(body)} edge lines")
    edges: list[tuple[int, int]] = []
    prev: tuple[int, int] | None = None
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError(f"bad edge line: {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FormatError(f"non-integer edge line: {ln!r}") from exc
        if not u < v:
            raise FormatError(f"edge line must satisfy u < v: {ln!r}")
        if prev is not None and (u, v) <= prev:
            raise FormatError(f"edge lines must be strictly ascending: {ln!r}")
        prev = (u, v)
        edges.append((u, v))
    try:
        return BoundedDegreeGraph(n, d, edges)
    except (NonSimple, DegreeExceeded, ValueError) as exc:
        raise FormatError(f"graph body violates declared bounds: {exc}") from exc


def write_graph_file(G: BoundedDegreeGraph, path: str | Path) -> None:
    Path(path).write_text(format_graph(G))


def read_graph_file(path: str | Path) -> BoundedDegreeGraph:
    return parse_graph(Path(path).read_text())
