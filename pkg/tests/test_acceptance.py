"""Acceptance suite: one test per criterion, exact arithmetic, pinned bounds.

Run with `pytest tests/test_acceptance.py -v -s` to see one pass line per
criterion.  Every tolerance and runtime budget is fixed here; nothing is
calibrated at run time.
"""

import time
from fractions import Fraction

import pytest

from ultrafractal import (
    Branch,
    CENTRAL_BRANCH,
    GluedIfs,
    NormedHeightTree,
    NotSuccessorError,
    Verdict,
    banach_orbit,
    build_ifs_general,
    build_ifs_unital,
    classify_fractal,
    derived_set,
    fixed_point,
    hausdorff_distance,
    interval,
    parse_ordinal,
    parse_space,
    scattered_height,
    verify_height_tree_axioms,
    verify_morphism_axioms,
    verify_norm_axioms,
    verify_partition,
    word_diameters,
)
from ultrafractal.ifs import verify_net_ultrametric
from ultrafractal.ordinals import Kind, classify_kind, iter_cnf_grid
from ultrafractal.trees import canonical_tree

HALF = Fraction(1, 2)

CATALOG = ["5", "w", "w*2", "w^2", "w^2*3+w*2+5", "w^w", "w^(w+1)", "w^w*2", "cantor"]
CATALOG_FRACTAL = {
    "5": True, "w": True, "w*2": True, "w^2": True, "w^2*3+w*2+5": True,
    "w^w": False, "w^(w+1)": True, "w^w*2": False, "cantor": True,
}
SYSTEM_HEIGHTS = ["1", "2", "w+1", "inf"]


def _announce(number: int, label: str, elapsed: float | None = None) -> None:
    timing = f" ({elapsed:.2f}s)" if elapsed is not None else ""
    print(f"[PASS] criterion {number}: {label}{timing}")


def test_criterion_01_classification_table():
    started = time.perf_counter()
    for literal in CATALOG:
        verdict = classify_fractal(parse_space(literal))
        expected = (Verdict.BANACH_ULTRAFRACTAL if CATALOG_FRACTAL[literal]
                    else Verdict.NOT_TOPOLOGICAL_FRACTAL)
        assert verdict is expected, literal
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0
    _announce(1, "classification table over the 9-space catalog", elapsed)


def test_criterion_02_cb_oracle_equivalence():
    started = time.perf_counter()
    cases = 0
    for gamma in iter_cnf_grid(3, 4):
        if gamma.is_zero:
            continue
        space = interval(gamma)
        closed = scattered_height(space)
        # Oracle: iterate the one-step derivative and count stages until the
        # space turns finite; that stage carries the top derived set.
        stage, steps = space, 0
        while not stage.gamma.is_finite:
            stage = derived_set(stage)
            steps += 1
        assert closed.height == parse_ordinal(str(steps)), gamma
        if steps >= 1:
            assert closed.multiplicity == stage.gamma.as_int() + 1, gamma
        else:
            assert closed.multiplicity == max(gamma.as_int(), 1), gamma
        cases += 1
    elapsed = time.perf_counter() - started
    assert cases >= 600
    assert elapsed < 5.0
    _announce(2, f"closed formula = iterated derivative on {cases} intervals", elapsed)


def test_criterion_03_axiom_suites_on_canonical_trees():
    started = time.perf_counter()
    heights = ["0", "1", "2", "w", "w+1", "w^2", "inf"]
    epsilon = HALF ** 3
    for literal in heights:
        height = parse_ordinal(literal)
        tree_report = verify_height_tree_axioms(canonical_tree(height), 4, 8)
        assert tree_report.passed, (literal, tree_report.failures())
        if classify_kind(height) is Kind.LIMIT:
            # No contracting system exists for limit heights, so there is no
            # norm and no constructed map; those sub-suites hold vacuously.
            continue
        system = build_ifs_unital(height, HALF)
        norm_report = verify_norm_axioms(
            NormedHeightTree(system.tree, system.norm), epsilon
        )
        assert norm_report.passed, (literal, norm_report.failures())
        for morphism in system.maps:
            morphism_report = verify_morphism_axioms(morphism, 4, 8)
            assert morphism_report.passed, (literal, morphism.name,
                                            morphism_report.failures())
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    _announce(3, "height-tree, norm, and morphism axioms at depth 4 / breadth 8",
              elapsed)


def test_criterion_04_exact_contraction_with_sharpness():
    started = time.perf_counter()
    for literal in SYSTEM_HEIGHTS:
        system = build_ifs_unital(parse_ordinal(literal), HALF)
        final = system.attractor_net(12)
        sharp = False
        for n in range(12):
            gap = hausdorff_distance(system.attractor_net(n), final)
            bound = HALF ** (n + 1)
            assert gap <= bound, (literal, n)
            sharp = sharp or gap == bound
        assert sharp, f"no sharpness witness for height {literal}"
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    _announce(4, "d_H(net(n), net(12)) <= (1/2)^(n+1), sharp, heights "
                 f"{SYSTEM_HEIGHTS}", elapsed)


def test_criterion_05_lipschitz_exactness():
    started = time.perf_counter()
    for literal in SYSTEM_HEIGHTS:
        system = build_ifs_unital(parse_ordinal(literal), HALF)
        stage = system.levels(10)[10]
        for morphism in system.maps:
            for path in stage:
                if not path:
                    continue  # the root norm backs no boundary distance
                image_value = system.norm_value(morphism.apply(path))
                assert image_value <= HALF * system.norm_value(path), (
                    literal, morphism.name, path)
        net = sorted(system.attractor_net(8).points)
        metric = system.metric
        for morphism in system.maps:
            images = {branch: morphism.boundary(branch) for branch in net}
            for i, a in enumerate(net):
                for b in net[i + 1:]:
                    left = metric.exponent(images[a], images[b])
                    if left is None:
                        continue
                    assert left >= metric.exponent(a, b) + 1, (literal, a, b)
    elapsed = time.perf_counter() - started
    _announce(5, "node norms and net pairs contract with zero violations", elapsed)


def test_criterion_06_partition_for_all_catalog_systems():
    started = time.perf_counter()
    for literal in CATALOG:
        if not CATALOG_FRACTAL[literal]:
            continue
        system = build_ifs_general(parse_space(literal), HALF)
        report = verify_partition(system, 8)
        assert report.passed, (literal, report.failures())
    elapsed = time.perf_counter() - started
    _announce(6, "map images partition levels and nets at n=8 for the catalog",
              elapsed)


def test_criterion_07_ultrametric_axioms_and_cross_distance():
    started = time.perf_counter()
    for literal in SYSTEM_HEIGHTS:
        system = build_ifs_unital(parse_ordinal(literal), HALF)
        report = verify_net_ultrametric(system, 8)
        assert report.passed, (literal, report.failures())
    glued = build_ifs_general(parse_space("w*2"), HALF)
    report = verify_net_ultrametric(glued, 6)
    assert report.passed, report.failures()
    metric = glued.metric
    for a in [CENTRAL_BRANCH, Branch((2,))]:
        for b in [CENTRAL_BRANCH, Branch((1, 1))]:
            assert metric.distance((0, a), (1, b)) == 2
    elapsed = time.perf_counter() - started
    _announce(7, "strong triangle over all net triples; cross distance exactly 2",
              elapsed)


def test_criterion_08_topological_contraction_witness():
    started = time.perf_counter()
    system = build_ifs_unital(parse_ordinal("2"), HALF)
    for n in range(11):
        assert word_diameters(system, n, 10) <= HALF ** n, n
    elapsed = time.perf_counter() - started
    _announce(8, "word diameters <= (1/2)^n for n <= 10 on the height-2 system",
              elapsed)


def test_criterion_09_fixed_points_and_banach_iteration():
    started = time.perf_counter()
    system = build_ifs_unital(parse_ordinal("1"), HALF)
    tol = Fraction(1, 2 ** 10)
    assert fixed_point(system, 0, tol) == CENTRAL_BRANCH
    assert fixed_point(system, 1, tol) == Branch((1,))
    metric = system.metric
    for index in range(2):
        fix = fixed_point(system, index, tol)
        for seed in [Branch((2,)), Branch((5,)), CENTRAL_BRANCH]:
            orbit = banach_orbit(system, index, seed, 10)
            assert metric.distance(orbit[-1], fix) < tol, (index, seed)
    elapsed = time.perf_counter() - started
    _announce(9, "Fix(f)=central, Fix(g)=branch[1]; orbits reach 2^-10 in 10 steps",
              elapsed)


def test_criterion_10_limit_heights_are_refused():
    started = time.perf_counter()
    for literal in ["w", "w^2", "w^w"]:
        with pytest.raises(NotSuccessorError):
            build_ifs_unital(parse_ordinal(literal), HALF)
    for literal in ["w^w", "w^w*2"]:
        with pytest.raises(NotSuccessorError):
            build_ifs_general(parse_space(literal), HALF)
    elapsed = time.perf_counter() - started
    _announce(10, "builders refuse limit scattered heights (the untestable "
                  "converse is out of computational reach)", elapsed)
