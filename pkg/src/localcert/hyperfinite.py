"""Hyperfinite partition extraction from uniformity witnesses.

An eps-uniform witness of radius r forces the graph to split into blocks of
at most max |B_2r| vertices after removing at most (d^2 eps / 2)|V| edges.
The constructive loop: project the witness onto the remaining vertices, pick
a coordinate z0 with a low smoothed boundary-to-mass ratio, sweep superlevel
sets of zeta(x) = f(x)(z0) until one has edge boundary at most (d eps/2) of
its size, cut it off, repeat.

Partition text format:

    partition <n> <num_blocks> <|W|>
    <size> <v1> <v2> ...     (one line per block, extraction order)
    removed
    <u> <v>                  (|W| edge lines, ascending)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Mapping

from .errors import FormatError, NoQualifyingSet, NotUniform, OutOfRange
from .graphs import BoundedDegreeGraph, induced_subgraph
from .measures import WitnessFunction, check_uniformity, project_witness


def threshold_set(zeta: Mapping[int, Fraction], t: Fraction) -> set[int]:
    """Strict superlevel set {x : zeta(x) > t}."""
    return {x for x, v in zeta.items() if v > t}


@dataclass(frozen=True)
class BoundarySets:
    """Vertex and edge boundary of a set A inside a host vertex set."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


def boundary_sets(G: BoundedDegreeGraph, domain: Iterable[int], A: Iterable[int]) -> BoundarySets:
    """Boundary of A within the subgraph induced on domain.

    Edges are reported as (inside, outside) pairs, ascending; the vertex
    boundary is never larger than the edge boundary.
    """
    dom = set(domain)
    aset = set(A)
    if not aset <= dom:
        raise ValueError("A must be a subset of the domain")
    verts = set()
    edges = []
    for x in aset:
        for y in G.adj[x]:
            if y in dom and y not in aset:
                verts.add(x)
                edges.append((x, y))
    out = BoundarySets(tuple(sorted(verts)), tuple(sorted(edges)))
    assert len(out.vertices) <= len(out.edges)
    return out


@dataclass(frozen=True)
class AreaCoareaResult:
    coarea_lhs: Fraction
    coarea_rhs: Fraction
    area_lhs: Fraction
    area_rhs: Fraction

    @property
    def ok(self) -> bool:
        return self.coarea_lhs == self.coarea_rhs and self.area_lhs == self.area_rhs


def area_coarea_check(G: BoundedDegreeGraph, zeta: Mapping[int, Fraction]) -> AreaCoareaResult:
    """Exact check of the area and coarea identities for zeta : domain -> [0,1].

    coarea:  sum_x sum_{x~y} |zeta(x)-zeta(y)|  =  2 * int_0^1 |edge boundary of
    the superlevel set| dt;  area:  sum_x zeta(x) = int_0^1 |superlevel set| dt.
    The integrals are finite sums over the intervals between distinct values.
    """
    domain = sorted(zeta)
    dom = set(domain)
    for x, v in zeta.items():
        if not 0 <= v <= 1:
            raise OutOfRange(f"zeta({x}) = {v} outside [0, 1]")
    edges = [
        (u, w) for u in domain for w in G.adj[u] if u < w and w in dom
    ]
    coarea_lhs = 2 * sum((abs(zeta[u] - zeta[w]) for u, w in edges), Fraction(0))
    area_lhs = sum(zeta.values(), Fraction(0))

    points = sorted({Fraction(0), Fraction(1), *zeta.values()})
    coarea_rhs = Fraction(0)
    area_rhs = Fraction(0)
    for a, b in zip(points, points[1:]):
        if b <= a:
            continue
        omega = {x for x in domain if zeta[x] > a}
        cut = sum(1 for u, w in edges if (u in omega) != (w in omega))
        coarea_rhs += (b - a) * 2 * cut
        area_rhs += (b - a) * len(omega)
    return AreaCoareaResult(coarea_lhs, coarea_rhs, area_lhs, area_rhs)


@dataclass(frozen=True)
class LowBoundaryResult:
    """A nonempty set with edge boundary at most (d*eps/2) times its size."""

    vertices: tuple[int, ...]
    z0: int
    threshold: Fraction
    boundary: BoundarySets


def find_low_boundary_set(w: WitnessFunction, eps: Fraction) -> LowBoundaryResult:
    """Locate a low-boundary superlevel set of an eps-uniform relative witness.

    z0 minimizes the ratio of summed neighbor differences to summed mass at
    z0 (ties by smallest id); averaging over z0 guarantees some ratio is at
    most d*eps, and the coarea identity then guarantees some superlevel set
    of zeta(x) = f(x)(z0) qualifies.  Thresholds are swept ascending over the
    distinct zeta values; the first qualifying nonempty set is returned.
    """
    G = w.graph
    domain = list(w.vertices)
    if not domain:
        raise NoQualifyingSet("empty domain")
    vset = w.vertex_set

    den = 1
    for x in domain:
        den = math.lcm(den, w.dists[x].den)
    num: dict[int, dict[int, int]] = {}
    for x in domain:
        d = w.dists[x]
        scale = den // d.den
        num[x] = {z: c * scale for z, c in d.num.items()}

    edges = [
        (u, v) for u in domain for v in G.adj[u] if u < v and v in vset
    ]
    mass: dict[int, int] = {}
    for x in domain:
        for z, c in num[x].items():
            mass[z] = mass.get(z, 0) + c
    diff: dict[int, int] = {}
    for u, v in edges:
        nu, nv = num[u], num[v]
        for z in nu.keys() | nv.keys():
            delta = abs(nu.get(z, 0) - nv.get(z, 0))
            if delta:
                diff[z] = diff.get(z, 0) + 2 * delta  # ordered pairs

    enum, eden = eps.numerator, eps.denominator
    z0 = None
    best_num = best_den = 0
    for z in sorted(mass):
        m = mass[z]
        if m <= 0:
            continue
        dz = diff.get(z, 0)
        if z0 is None or dz * best_den < best_num * m:
            z0, best_num, best_den = z, dz, m
    assert z0 is not None

    zeta = {x: num[x].get(z0, 0) for x in domain}

    # superlevel sets, largest first: vertices sorted by zeta descending,
    # boundary edge count maintained incrementally per distinct-value batch
    order = sorted(domain, key=lambda x: (-zeta[x], x))
    batch_of: dict[int, int] = {}
    snapshots: list[tuple[int, int]] = []  # (|Omega|, |edge boundary|) per batch
    values: list[int] = []
    added: set[int] = set()
    cut = 0
    i = 0
    while i < len(order) and zeta[order[i]] > 0:
        j = i
        val = zeta[order[i]]
        batch = []
        while j < len(order) and zeta[order[j]] == val:
            batch.append(order[j])
            j += 1
        for x in batch:
            batch_of[x] = len(values)
        for x in batch:
            for y in G.adj[x]:
                if y not in vset:
                    continue
                if y in added:
                    cut -= 1
                elif batch_of.get(y) == len(values):
                    pass  # same batch: never a boundary edge
                else:
                    cut += 1
        added.update(batch)
        values.append(val)
        snapshots.append((len(added), cut))
        i = j

    # ascending thresholds: 0 pairs with the full positive support, then each
    # positive value t = values[j] pairs with the prefix above it
    candidates: list[tuple[Fraction, int]] = [(Fraction(0), len(values) - 1)]
    for j in range(len(values) - 1, 0, -1):
        candidates.append((Fraction(values[j], den), j - 1))
    for t, snap in candidates:
        size, boundary_edges = snapshots[snap]
        if size and 2 * boundary_edges * eden <= G.d * enum * size:
            break
    else:
        raise NoQualifyingSet(
            f"no superlevel set of zeta(.)({z0}) meets the boundary bound {G.d}*{eps}/2"
        )

    # materialize the prefix for the chosen snapshot
    count = snapshots[snap][0]
    chosen = order[:count]
    bnd = boundary_sets(G, domain, chosen)
    assert len(bnd.edges) == snapshots[snap][1]
    return LowBoundaryResult(tuple(sorted(chosen)), z0, t, bnd)


@dataclass(frozen=True)
class PartitionResult:
    """Blocks in extraction order plus the removed edge set W."""

    n: int
    blocks: tuple[tuple[int, ...], ...]
    removed_edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for block in self.blocks:
            bset = set(block)
            if seen & bset:
                raise ValueError("blocks must be disjoint")
            seen |= bset
        if seen != set(range(self.n)):
            raise ValueError("blocks must partition 0..n-1")

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def max_block_size(self) -> int:
        return max(self.block_sizes, default=0)

    @property
    def num_removed(self) -> int:
        return len(self.removed_edges)


def extract_partition(G: BoundedDegreeGraph, w: WitnessFunction, eps: Fraction) -> PartitionResult:
    """Greedy low-boundary decomposition driven by an eps-uniform witness.

    Each iteration projects the ORIGINAL witness onto the remaining vertices
    (projection keeps its distance and support guarantees relative to G, not
    the shrinking subgraph), cuts off a low-boundary set, and records the
    edges leaving it.
    Every removed edge joins two distinct blocks, so block-induced subgraphs
    survive intact in G - W.
    """
    if not w.is_full:
        raise ValueError("extraction expects a full-graph witness")
    rep = check_uniformity(w)
    if not rep.satisfies(eps):
        raise NotUniform(
            f"witness measures {rep.max_edge_l1} at edge {rep.worst_edge}, "
            f"support_ok={rep.support_ok}; need max <= {eps}"
        )
    remaining = list(range(G.n))
    blocks: list[tuple[int, ...]] = []
    removed: list[tuple[int, int]] = []
    while remaining:
        rel = project_witness(w, remaining)
        res = find_low_boundary_set(rel, eps)
        blocks.append(res.vertices)
        removed.extend(tuple(sorted(e)) for e in res.boundary.edges)
        gone = set(res.vertices)
        remaining = [v for v in remaining if v not in gone]
    return PartitionResult(G.n, tuple(blocks), tuple(sorted(removed)))


@dataclass(frozen=True)
class HyperfiniteReport:
    ok: bool
    removed_per_vertex: Fraction
    removed_per_edge: Fraction
    max_block_size: int
    component_bound: int
    normalization: str


def check_hyperfinite(G: BoundedDegreeGraph, partition: PartitionResult,
                      eps_e: Fraction, K: int,
                      normalization: str = "vertices") -> HyperfiniteReport:
    """Is (blocks, W) an (eps_e, K) certificate?  Reports both normalizations."""
    if normalization not in ("vertices", "edges"):
        raise ValueError(f"normalization must be 'vertices' or 'edges', got {normalization!r}")
    removed = partition.num_removed
    per_vertex = Fraction(removed, G.n) if G.n else Fraction(0)
    per_edge = Fraction(removed, G.m) if G.m else Fraction(0)
    chosen = per_vertex if normalization == "vertices" else per_edge
    ok = partition.max_block_size <= K and chosen <= eps_e
    return HyperfiniteReport(
        ok=ok,
        removed_per_vertex=per_vertex,
        removed_per_edge=per_edge,
        max_block_size=partition.max_block_size,
        component_bound=K,
        normalization=normalization,
    )


@dataclass(frozen=True)
class EditDistanceBound:
    feasible: bool
    bound: Fraction | None
    offending_block: int | None


def edit_distance_upper_bound(G: BoundedDegreeGraph, partition: PartitionResult,
                              predicate: Callable[[BoundedDegreeGraph], bool]) -> EditDistanceBound:
    """|W|/|V| bounds the edit distance to the property when all blocks satisfy it.

    Removing W turns G into the disjoint union of the block-induced
    subgraphs; if each lies in the (monotone, union-closed) property, the
    whole edited graph does, and only |W| edge edits were spent.
    """
    for i, block in enumerate(partition.blocks):
        sub = induced_subgraph(G, block)
        if not predicate(sub):
            return EditDistanceBound(False, None, i)
    return EditDistanceBound(True, Fraction(partition.num_removed, G.n), None)


# --- text format ----------------------------------------------------------

def format_partition(partition: PartitionResult) -> str:
    lines = [
        f"partition {partition.n} {partition.num_blocks} {partition.num_removed}"
    ]
    for block in partition.blocks:
        lines.append(f"{len(block)} " + " ".join(str(v) for v in block))
    lines.append("removed")
    lines.extend(f"{u} {v}" for u, v in partition.removed_edges)
    return "\n".join(lines) + "\n"


def parse_partition(text: str) -> PartitionResult:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty partition file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "partition":
        raise FormatError(f"bad partition header: {lines[0]!r}")
    try:
        n, num_blocks, num_removed = int(head[1]), int(head[2]), int(head[3])
    except ValueError as exc:
        raise FormatError(f"non-integer partition header field: {lines[0]!r}") from exc
    if len(lines) != 1 + num_blocks + 1 + num_removed:
        raise FormatError("partition file has wrong line count")
    blocks = []
    for ln in lines[1 : 1 + num_blocks]:
        parts = ln.split()
        try:
            size = int(parts[0])
            verts = tuple(int(t) for t in parts[1:])
        except (ValueError, IndexError) as exc:
            raise FormatError(f"bad block line: {ln!r}") from exc
        if len(verts) != size:
            raise FormatError(f"block line claims {size} vertices, lists {len(verts)}")
        blocks.append(verts)
    if lines[1 + num_blocks] != "removed":
        raise FormatError("expected 'removed' marker line")
    removed = []
    for ln in lines[2 + num_blocks :]:
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError(f"bad removed-edge line: {ln!r}")
        try:
            removed.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise FormatError(f"bad removed-edge line: {ln!r}") from exc
    try:
        return PartitionResult(n, tuple(blocks), tuple(removed))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def write_partition_file(partition: PartitionResult, path: str | Path) -> None:
    Path(path).write_text(format_partition(partition))


def read_partition_file(path: str | Path) -> PartitionResult:
    return parse_partition(Path(path).read_text())
