"""Superlevel sweeps, the area/coarea identities, and partition extraction."""

import random
from fractions import Fraction

import pytest

import localcert as lc
from conftest import random_family_graph
from localcert.errors import FormatError, NoQualifyingSet, NotUniform, OutOfRange
from localcert.hyperfinite import (
    PartitionResult,
    area_coarea_check,
    boundary_sets,
    check_hyperfinite,
    edit_distance_upper_bound,
    extract_partition,
    find_low_boundary_set,
    format_partition,
    parse_partition,
    threshold_set,
)
from localcert.measures import RationalDist, WitnessFunction, uniform_ball_witness
from localcert.verifier import is_planar


def zeta_path3():
    return {0: Fraction(1), 1: Fraction(1, 2), 2: Fraction(0)}


def test_threshold_set_is_strict():
    z = zeta_path3()
    assert threshold_set(z, Fraction(1, 2)) == {0}
    assert threshold_set(z, Fraction(0)) == {0, 1}
    assert threshold_set(z, Fraction(1)) == set()


def test_boundary_sets_hand_case():
    P = lc.generate(lc.FamilySpec("path", (4,)))
    b = boundary_sets(P, range(4), {0, 1})
    assert b.edges == ((1, 2),)
    assert b.vertices == (1,)
    # restricting the domain hides edges that leave it
    b2 = boundary_sets(P, {0, 1}, {0, 1})
    assert b2.edges == ()
    with pytest.raises(ValueError):
        boundary_sets(P, {0, 1}, {2})


def test_area_coarea_hand_case():
    P = lc.generate(lc.FamilySpec("path", (3,)))
    res = area_coarea_check(P, zeta_path3())
    # both superlevel sets have one boundary edge, each interval has length 1/2
    assert res.coarea_lhs == res.coarea_rhs == 2
    assert res.area_lhs == res.area_rhs == Fraction(3, 2)
    assert res.ok


def test_area_coarea_rejects_out_of_range():
    P = lc.generate(lc.FamilySpec("path", (3,)))
    with pytest.raises(OutOfRange):
        area_coarea_check(P, {0: Fraction(2), 1: Fraction(0), 2: Fraction(0)})


def test_area_coarea_random():
    rng = random.Random(601)
    for _ in range(60):
        G = random_family_graph(rng)
        zeta = {
            x: Fraction(rng.randint(0, 12), 12)
            for x in rng.sample(range(G.n), rng.randint(1, G.n))
        }
        assert area_coarea_check(G, zeta).ok


# --- low-boundary sweep --------------------------------------------------------

def test_find_low_boundary_constant_witness():
    """A perfectly flat witness has an empty boundary at threshold zero."""
    P = lc.generate(lc.FamilySpec("path", (3,)))
    flat = RationalDist(3, {0: 1, 1: 1, 2: 1})
    w = WitnessFunction(P, 2, {x: flat for x in range(3)})
    res = find_low_boundary_set(w, Fraction(1, 100))
    assert res.vertices == (0, 1, 2)
    assert res.boundary.edges == ()
    assert res.z0 == 0


def test_find_low_boundary_respects_the_ratio():
    rng = random.Random(602)
    for _ in range(15):
        G = random_family_graph(rng)
        w = uniform_ball_witness(G, 1)
        eps = lc.check_uniformity(w).max_edge_l1
        if eps == 0:
            eps = Fraction(1, 10)
        res = find_low_boundary_set(w, eps)
        size = len(res.vertices)
        assert size > 0
        assert 2 * len(res.boundary.edges) <= G.d * eps * size
        # the chosen set really is a superlevel set of f(.)(z0)
        inside = set(res.vertices)
        for x in w.vertices:
            assert (w.dists[x].value(res.z0) > res.threshold) == (x in inside)


def test_find_low_boundary_can_fail_on_rough_witness():
    P = lc.generate(lc.FamilySpec("path", (2,)))
    deltas = WitnessFunction(P, 1, {0: RationalDist.delta(0), 1: RationalDist.delta(1)})
    with pytest.raises(NoQualifyingSet):
        find_low_boundary_set(deltas, Fraction(1, 2))
    res = find_low_boundary_set(deltas, Fraction(1))
    assert res.vertices == (0,)


# --- extraction ------------------------------------------------------------------

def test_extract_partition_path11():
    G = lc.generate(lc.FamilySpec("path", (11,)))
    w = uniform_ball_witness(G, 1)
    part = extract_partition(G, w, Fraction(5, 6))
    assert part.block_sizes == (3, 3, 3, 2)
    assert part.removed_edges == ((2, 3), (5, 6), (8, 9))
    assert part.max_block_size <= 5


def test_extract_partition_guards():
    G = lc.generate(lc.FamilySpec("path", (6,)))
    w = uniform_ball_witness(G, 1)
    with pytest.raises(NotUniform):
        extract_partition(G, w, Fraction(1, 100))
    rel = lc.project_witness(w, [0, 1, 2])
    with pytest.raises(ValueError):
        extract_partition(G, rel, Fraction(1))


def test_extract_partition_bounds_random():
    rng = random.Random(603)
    for _ in range(10):
        G = random_family_graph(rng)
        r = rng.randint(1, 2)
        w = uniform_ball_witness(G, r)
        eps = lc.check_uniformity(w).max_edge_l1
        if eps == 0:
            eps = Fraction(1, 4)
        part = extract_partition(G, w, eps)
        assert part.num_removed <= Fraction(G.d, 2) * eps * G.n
        assert part.max_block_size <= lc.max_ball_size_actual(G, 2 * r)
        # removed edges all exist and joined different blocks
        block_of = {}
        for i, block in enumerate(part.blocks):
            for v in block:
                block_of[v] = i
        for u, v in part.removed_edges:
            assert G.has_edge(u, v)
            assert block_of[u] != block_of[v]


def test_partition_result_validation():
    with pytest.raises(ValueError):
        PartitionResult(3, ((0, 1), (1, 2)), ())
    with pytest.raises(ValueError):
        PartitionResult(3, ((0, 1),), ())
    p = PartitionResult(3, ((0, 1), (2,)), ((1, 2),))
    assert p.block_sizes == (2, 1)
    assert p.num_removed == 1


# --- certificates over partitions ------------------------------------------------

def test_check_hyperfinite_normalizations():
    C = lc.generate(lc.FamilySpec("cycle", (10,)))
    part = PartitionResult(
        10, ((0, 1, 2, 3, 4), (5, 6, 7, 8, 9)), ((0, 9), (4, 5))
    )
    by_v = check_hyperfinite(C, part, Fraction(1, 5), K=5, normalization="vertices")
    assert by_v.ok and by_v.removed_per_vertex == Fraction(1, 5)
    assert by_v.removed_per_edge == Fraction(1, 5)
    tight = check_hyperfinite(C, part, Fraction(1, 6), K=5)
    assert not tight.ok
    small_k = check_hyperfinite(C, part, Fraction(1, 5), K=4)
    assert not small_k.ok
    with pytest.raises(ValueError):
        check_hyperfinite(C, part, Fraction(1, 5), K=5, normalization="mass")


def test_edit_distance_bound():
    import itertools

    grid = lc.generate(lc.FamilySpec("grid", (5, 5)))
    edges = grid.edges() + [
        (u + 25, v + 25) for u, v in itertools.combinations(range(5), 2)
    ]
    G = lc.build_graph(edges, d=4, n=30)
    blocks = (tuple(range(25)), tuple(range(25, 30)))
    part = PartitionResult(30, blocks, ())
    res = edit_distance_upper_bound(G, part, is_planar)
    assert not res.feasible and res.offending_block == 1
    fine = edit_distance_upper_bound(G, part, lambda H: True)
    assert fine.feasible and fine.bound == 0


# --- text format ------------------------------------------------------------------

def test_partition_file_round_trip(tmp_path):
    G = lc.generate(lc.FamilySpec("path", (11,)))
    part = extract_partition(G, uniform_ball_witness(G, 1), Fraction(5, 6))
    text = format_partition(part)
    back = parse_partition(text)
    assert back == part
    path = tmp_path / "p.partition"
    lc.write_partition_file(part, path)
    assert lc.read_partition_file(path) == part


def test_partition_format_golden():
    part = PartitionResult(3, ((0, 1), (2,)), ((1, 2),))
    assert format_partition(part) == "partition 3 2 1\n2 0 1\n1 2\nremoved\n1 2\n"


@pytest.mark.parametrize("text", [
    "",
    "partition 3 2 1\n2 0 1\n1 2\n1 2\n",
    "partition 3 2 0\n2 0 1\nremoved\n",
    "partition 3 1 0\n2 0 1\nremoved\n",
    "partition 3 2 1\n2 0 1\n1 2\nremoved\n",
])
def test_parse_partition_rejects_malformed(text):
    with pytest.raises(FormatError):
        parse_partition(text)
