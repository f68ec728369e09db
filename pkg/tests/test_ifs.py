"""Contracting systems: levels, norms, nets, metrics, gluing, verifiers."""

import random
from fractions import Fraction

import pytest

from ultrafractal import (
    Branch,
    CANTOR,
    CENTRAL_BRANCH,
    Caps,
    CapExceededError,
    DomainError,
    GluedIfs,
    IfsSystem,
    NotSuccessorError,
    PointSet,
    TreeView,
    banach_orbit,
    build_ifs_general,
    build_ifs_unital,
    build_surjective_morphism,
    fixed_point,
    hausdorff_distance,
    hutchinson_step,
    interval,
    nat,
    parse_ordinal,
    parse_space,
    tree_with_exceptions,
    verify_morphism_axioms,
    verify_partition,
    verify_system_lipschitz,
    word_diameters,
)
from ultrafractal.errors import UltrafractalError
from ultrafractal.ifs import verify_net_ultrametric
from ultrafractal.ordinals import INFINITY, ZERO

HALF = Fraction(1, 2)


def brute_hausdorff(a: PointSet, b: PointSet) -> Fraction:
    distance = a.context.distance
    directed = lambda xs, ys: max(min(distance(x, y) for y in ys) for x in xs)
    return max(directed(a.points, b.points), directed(b.points, a.points))


# --- builders ----------------------------------------------------------------

def test_canonical_system_has_two_maps(system_h1):
    assert system_h1.map_names == ("f", "g")


def test_infinite_height_system_has_two_maps(system_inf):
    assert system_inf.map_names == ("f", "g")
    assert system_inf.tree.height((5,)).is_infinity


def test_exceptional_children_add_one_map_each():
    tree = tree_with_exceptions(nat(3), [ZERO, ZERO])
    system = build_ifs_unital(nat(3), HALF, tree=tree)
    assert system.map_names == ("f", "g", "g1", "g2")
    for morphism in system.maps:
        assert verify_morphism_axioms(morphism, 3, 6).passed


def test_height_zero_system_is_a_single_chain_map():
    system = build_ifs_unital(ZERO, HALF)
    assert system.map_names == ("f",)
    assert system.is_singleton
    net = system.attractor_net(5)
    assert net.points == frozenset({CENTRAL_BRANCH})
    assert verify_partition(system, 3).passed
    assert verify_system_lipschitz(system, levels=4, net_level=3).passed


def test_limit_heights_are_refused():
    for literal in ["w", "w^2", "w^w", "w^2*7"]:
        with pytest.raises(NotSuccessorError):
            build_ifs_unital(parse_ordinal(literal), HALF)
    with pytest.raises(NotSuccessorError):
        build_ifs_general(parse_space("w^w"), HALF)
    with pytest.raises(NotSuccessorError):
        build_ifs_general(parse_space("w^w*2"), HALF)


def test_lambda_domain():
    for bad in [Fraction(0), Fraction(1), Fraction(3, 2), Fraction(-1, 2)]:
        with pytest.raises(DomainError):
            build_ifs_unital(nat(1), bad)


# --- level sets ----------------------------------------------------------------

def test_level_sets_match_hand_computation(system_h1):
    levels = system_h1.levels(3)
    assert levels[0] == frozenset({()})
    assert levels[1] == frozenset({(), (1,)})
    assert levels[2] == frozenset({(), (1,), (2,), (1, 0)})
    assert (3,) in levels[3] and (1, 0, 0) in levels[3]


def test_level_sets_are_monotone(system_h2, system_inf):
    for system in (system_h2, system_inf):
        levels = system.levels(6)
        for previous, current in zip(levels, levels[1:]):
            assert previous <= current


def test_first_level_and_norms(system_h1):
    assert system_h1.norm_value(()) == 1
    assert system_h1.norm_value((3,)) == Fraction(1, 8)
    assert system_h1.norm_value((0, 0)) == 0
    assert system_h1.norm_value((1, 0)) == 0  # height -1 beats its level
    assert system_h1.first_level((2,)) == 2


def test_every_positive_height_window_node_enters_the_levels(system_h2):
    from ultrafractal.trees import iter_window

    for path in iter_window(system_h2.tree, 3, 5):
        if not system_h2.tree.height(path).is_minus_one:
            assert system_h2.first_level(path) <= system_h2.caps.level_cap


def test_level_cap_is_a_hard_error():
    system = build_ifs_unital(nat(1), HALF, caps=Caps(level_cap=3))
    with pytest.raises(CapExceededError):
        system.norm_value((9,))


def test_net_cap_is_a_hard_error():
    system = build_ifs_unital(INFINITY, HALF, caps=Caps(net_cap=8))
    with pytest.raises(CapExceededError):
        system.attractor_net(6)


# --- hutchinson iteration ----------------------------------------------------------

def test_hutchinson_step_examples(system_h1):
    seed = system_h1.point_set([CENTRAL_BRANCH])
    first = hutchinson_step(system_h1, seed)
    assert first.points == {CENTRAL_BRANCH, Branch((1,))}
    second = hutchinson_step(system_h1, first)
    # g maps branch[1] to branch[1,0,...] which is branch[1] again.
    assert second.points == {CENTRAL_BRANCH, Branch((1,)), Branch((2,))}
    assert len(second) == 3


def test_fixed_points_persist_under_the_step(system_h1):
    fixes = {fixed_point(system_h1, i, Fraction(1, 1024)) for i in range(2)}
    stepped = hutchinson_step(system_h1, system_h1.point_set(fixes))
    assert fixes <= stepped.points


def test_hutchinson_step_rejects_foreign_contexts(system_h1, system_h2):
    seed = system_h1.point_set([CENTRAL_BRANCH])
    with pytest.raises(DomainError):
        hutchinson_step(system_h2, seed)


def test_attractor_net_sizes(system_h1):
    assert len(system_h1.attractor_net(0)) == 1
    assert len(system_h1.attractor_net(2)) == 3
    assert system_h1.attractor_net(4).points == {
        CENTRAL_BRANCH, Branch((1,)), Branch((2,)), Branch((3,)), Branch((4,)),
    }


# --- hausdorff distance ---------------------------------------------------------------

def test_hausdorff_examples(system_h1):
    net = system_h1.attractor_net(3)
    assert hausdorff_distance(net, net) == 0
    a = system_h1.point_set([CENTRAL_BRANCH])
    b = system_h1.point_set([Branch((1,))])
    assert hausdorff_distance(a, b) == HALF


def test_hausdorff_against_brute_force(system_h2, system_inf):
    for system in (system_h2, system_inf):
        for n, m in [(0, 3), (1, 4), (2, 5), (3, 3)]:
            a, b = system.attractor_net(n), system.attractor_net(m)
            assert hausdorff_distance(a, b) == brute_hausdorff(a, b)


def test_hausdorff_on_random_subsets(system_h2):
    rng = random.Random(11)
    pool = sorted(system_h2.attractor_net(6).points)
    for _ in range(20):
        a = system_h2.point_set(rng.sample(pool, rng.randint(1, 10)))
        b = system_h2.point_set(rng.sample(pool, rng.randint(1, 10)))
        assert hausdorff_distance(a, b) == brute_hausdorff(a, b)


def test_step_contracts_hausdorff_distance(system_h2):
    rng = random.Random(3)
    pool = sorted(system_h2.attractor_net(5).points)
    for _ in range(10):
        a = system_h2.point_set(rng.sample(pool, rng.randint(1, 6)))
        b = system_h2.point_set(rng.sample(pool, rng.randint(1, 6)))
        stepped = hausdorff_distance(
            hutchinson_step(system_h2, a), hutchinson_step(system_h2, b)
        )
        assert stepped <= HALF * hausdorff_distance(a, b)


def test_net_convergence_rate_with_sharpness(system_h1):
    final = system_h1.attractor_net(9)
    for n in range(9):
        gap = hausdorff_distance(system_h1.attractor_net(n), final)
        assert gap == HALF ** (n + 1)  # sharp at every stage for this system


# --- partition --------------------------------------------------------------------------

def test_partition_passes_on_canonical_systems(system_h1, system_h2, system_inf):
    for system in (system_h1, system_h2, system_inf):
        report = verify_partition(system, 5)
        assert report.passed, report.failures()


def test_partition_fails_with_a_duplicated_map(system_h1):
    tree = system_h1.tree
    duplicate = build_surjective_morphism(
        TreeView(tree), TreeView(tree, (1,)), name="g_dup"
    )
    broken = IfsSystem(tree, HALF, system_h1.maps + (duplicate,), tail_start=1)
    report = verify_partition(broken, 3)
    assert not report.passed
    assert any("disjoint" in c.label for c in report.failures())


def test_boundary_blocks_are_separated(system_h2):
    nets = system_h2.attractor_net(2)
    f, g = system_h2.maps
    blocks = [frozenset(m.boundary(b) for b in nets.points) for m in (f, g)]
    metric = system_h2.metric
    for x in blocks[0]:
        for y in blocks[1]:
            assert metric.distance(x, y) > 0


# --- word diameters ------------------------------------------------------------------------

def test_word_diameters_bounded_by_lambda_powers(system_h2):
    for n in range(0, 7):
        assert word_diameters(system_h2, n, 7) <= HALF ** n


def test_word_diameter_full_length(system_h2):
    assert word_diameters(system_h2, 5, 5) <= HALF ** 5


def test_word_cap(system_h2):
    capped = build_ifs_unital(nat(2), HALF, caps=Caps(word_cap=2))
    with pytest.raises(CapExceededError):
        word_diameters(capped, 3, 4)


# --- fixed points ----------------------------------------------------------------------------

def test_fixed_points_exact(system_h1):
    assert fixed_point(system_h1, 0, Fraction(1, 1024)) == CENTRAL_BRANCH
    assert fixed_point(system_h1, 1, Fraction(1, 1024)) == Branch((1,))


def test_fixed_point_requires_positive_tolerance(system_h1):
    with pytest.raises(DomainError):
        fixed_point(system_h1, 0, Fraction(0))


def test_banach_iteration_rate(system_h1):
    metric = system_h1.metric
    for index in range(2):
        fix = fixed_point(system_h1, index, Fraction(1, 2 ** 20))
        for seed in [Branch((2,)), Branch((3,)), CENTRAL_BRANCH]:
            orbit = banach_orbit(system_h1, index, seed, 10)
            start = metric.distance(seed, fix)
            for k, point in enumerate(orbit):
                assert metric.distance(point, fix) <= HALF ** k * start
            assert metric.distance(orbit[-1], fix) < Fraction(1, 1024)


# --- metric axioms ----------------------------------------------------------------------------

def test_net_ultrametric_passes(system_h1, system_h2):
    for system in (system_h1, system_h2):
        report = verify_net_ultrametric(system, 6)
        assert report.passed, report.failures()


def test_lipschitz_suite_passes(system_h1, system_h2, system_inf):
    for system in (system_h1, system_h2, system_inf):
        report = verify_system_lipschitz(system, levels=6, net_level=5)
        assert report.passed, report.failures()


# --- glued systems ----------------------------------------------------------------------------

def test_glued_system_for_two_pieces():
    glued = build_ifs_general(parse_space("w*2"), HALF)
    assert isinstance(glued, GluedIfs)
    assert glued.map_names == ("p0.f", "p0.g", "p1.f", "p1.g")
    metric = glued.metric
    assert metric.distance((0, CENTRAL_BRANCH), (1, CENTRAL_BRANCH)) == 2
    assert metric.distance((0, Branch((1,))), (0, Branch((2,)))) == HALF
    assert verify_partition(glued, 4).passed
    assert verify_system_lipschitz(glued, levels=4, net_level=3).passed
    assert verify_net_ultrametric(glued, 4).passed


def test_glued_extended_maps_send_foreign_points_to_fixed_points():
    glued = build_ifs_general(parse_space("w*2"), HALF)
    foreign = (1, Branch((3,)))
    assert glued.apply_extended(0, 0, foreign) == (0, CENTRAL_BRANCH)
    assert glued.apply_extended(0, 1, foreign) == (0, Branch((1,)))


def test_glued_cover_and_cross_pair_contraction():
    glued = build_ifs_general(parse_space("w*2"), HALF)
    net3, net4 = glued.attractor_net(3), glued.attractor_net(4)
    stepped = {
        glued.apply_extended(i, j, p)
        for (i, j, _) in glued.map_labels
        for p in net3.points
    }
    assert stepped == net4.points
    metric = glued.metric
    inside = (0, Branch((2,)))
    outside = (1, Branch((1,)))
    for (i, j, _) in glued.map_labels:
        image_in = glued.apply_extended(i, j, inside)
        image_out = glued.apply_extended(i, j, outside)
        assert metric.distance(image_in, image_out) <= HALF * metric.distance(inside, outside)


def test_glued_hausdorff_matches_brute_force():
    glued = build_ifs_general(parse_space("w*2"), HALF)
    for n, m in [(0, 2), (1, 3), (2, 4)]:
        a, b = glued.attractor_net(n), glued.attractor_net(m)
        assert hausdorff_distance(a, b) == brute_hausdorff(a, b)


def test_three_piece_decomposition_builds_six_maps():
    glued = build_ifs_general(parse_space("w^2*3+w*2+5"), HALF)
    assert len(glued.pieces) == 3
    assert len(glued.map_labels) == 6
    assert verify_partition(glued, 3).passed


def test_finite_space_glues_singleton_chains():
    glued = build_ifs_general(parse_space("5"), HALF)
    assert len(glued.pieces) == 5
    assert len(glued.map_labels) == 5
    net = glued.attractor_net(3)
    assert len(net) == 5
    assert verify_partition(glued, 3).passed
    assert verify_net_ultrametric(glued, 3).passed


def test_single_piece_inputs_return_plain_systems():
    assert isinstance(build_ifs_general(parse_space("w"), HALF), IfsSystem)
    assert isinstance(build_ifs_general(parse_space("cantor"), HALF), IfsSystem)
    assert isinstance(build_ifs_general(parse_space("w^(w+1)"), HALF), IfsSystem)


def test_empty_space_rejected():
    from ultrafractal import EMPTY

    with pytest.raises(UltrafractalError):
        build_ifs_general(EMPTY, HALF)
