"""Request handlers shared by the FastAPI routes and the CLI.

Each handler turns a request model into a response model using the core
package; domain failures propagate as package exceptions and are mapped to
transport-specific errors by the caller (HTTP bodies or exit codes).
"""

from __future__ import annotations

from fractions import Fraction

from ..config import Caps
from ..errors import DomainError
from ..ifs import (
    GluedIfs,
    banach_orbit,
    build_ifs_general,
    build_ifs_unital,
    fixed_point,
    hausdorff_distance,
    verify_net_ultrametric,
    verify_partition,
    verify_system_lipschitz,
    word_diameters,
)
from ..ordinals import ExtHeight, Kind, classify_kind, parse_ordinal
from ..reporting import VerificationReport
from ..spaces import (
    Space,
    classify_fractal,
    parse_space,
    scattered_height,
    unital_decomposition,
)
from ..trees import (
    Branch,
    NormedHeightTree,
    canonical_tree,
    verify_height_tree_axioms,
    verify_norm_axioms,
)
from ..morphisms import verify_morphism_axioms
from . import models


def parse_rational(text: str, name: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"{name} must be a rational 'p/q' literal: {exc}") from exc


def _caps(model: models.CapsModel) -> Caps:
    return Caps(level_cap=model.level_cap, net_cap=model.net_cap, word_cap=model.word_cap)


def _resolve_target(space: str | None, height: str | None) -> tuple[str, Space | None, ExtHeight | None]:
    if (space is None) == (height is None):
        raise DomainError("give exactly one of 'space' or 'height'")
    if space is not None:
        return space.strip(), parse_space(space), None
    parsed = parse_ordinal(height.strip())
    return height.strip(), None, parsed


def _build_system(space: Space | None, height: ExtHeight | None, lam: Fraction, caps: Caps):
    if space is not None:
        return build_ifs_general(space, lam, caps=caps)
    return build_ifs_unital(height, lam, caps=caps)


def handle_classify(request: models.ClassifyRequest) -> models.ClassifyResponse:
    space = parse_space(request.space)
    info = scattered_height(space)
    return models.ClassifyResponse(
        space=space.literal(),
        verdict=classify_fractal(space).value,
        height=info.height.literal(),
        height_kind=classify_kind(info.height).value,
        multiplicity=info.multiplicity_literal(),
    )


def handle_tree(request: models.TreeRequest) -> models.TreeResponse:
    from ..exports import tree_nodes

    height = parse_ordinal(request.height.strip())
    tree = canonical_tree(height)
    norm = None
    if request.include_norms and classify_kind(height) is not Kind.LIMIT:
        lam = parse_rational(request.lam, "lambda")
        norm = build_ifs_unital(height, lam).norm
    return models.TreeResponse(
        root_height=height.literal(),
        nodes=[models.TreeNodeModel(**node)
               for node in tree_nodes(tree, request.depth, request.breadth, norm)],
    )


def handle_ifs(request: models.IfsRequest) -> models.IfsResponse:
    target, space, height = _resolve_target(request.space, request.height)
    lam = parse_rational(request.lam, "lambda")
    system = _build_system(space, height, lam, _caps(request.caps))
    n = request.iterate
    glued = isinstance(system, GluedIfs)
    if glued:
        level_sizes = None
        piece_sizes = [
            [len(stage) for stage in piece.levels(n)]
            for _, piece in system.pieces
        ]
        map_names = list(system.map_names)
        pieces = len(system.pieces)
    else:
        level_sizes = [len(stage) for stage in system.levels(n)]
        piece_sizes = None
        map_names = list(system.map_names)
        pieces = 1
    nets = [system.attractor_net(k) for k in range(n + 1)]
    distances = [hausdorff_distance(nets[k - 1], nets[k]) for k in range(1, n + 1)]
    contraction_ok = all(
        distances[k] <= lam * distances[k - 1] for k in range(1, len(distances))
    )
    return models.IfsResponse(
        target=target,
        lam=str(lam),
        glued=glued,
        pieces=pieces,
        map_names=map_names,
        iterations=n,
        level_sizes=level_sizes,
        piece_level_sizes=piece_sizes,
        net_sizes=[len(net) for net in nets],
        step_distances=[str(d) for d in distances],
        contraction_ok=contraction_ok,
    )


def _suite_model(report: VerificationReport, name: str) -> models.SuiteResultModel:
    return models.SuiteResultModel(
        name=name,
        passed=report.passed,
        scope=report.scope,
        checks_run=len(report.checks),
        failures=[
            models.CheckModel(label=c.label, passed=c.passed, detail=c.detail)
            for c in report.failures()
        ],
    )


def _merged(name: str, parts: list[tuple[str, VerificationReport]]) -> VerificationReport:
    merged = VerificationReport(name, "; ".join(f"{tag}: {r.scope}" for tag, r in parts))
    for tag, part in parts:
        merged.add(f"{tag} {part.suite}", part.passed,
                   "; ".join(c.label for c in part.failures()) if not part.passed else "")
    return merged


def _piece_systems(system) -> list[tuple[str, object]]:
    if isinstance(system, GluedIfs):
        return [(f"piece {i}", piece) for i, (_, piece) in enumerate(system.pieces)]
    return [("", system)]


def run_verify_suites(
    suites: list[str],
    space: Space | None,
    height: ExtHeight | None,
    lam: Fraction,
    depth: int,
    breadth: int,
    levels: int,
    epsilon: Fraction | None,
    caps: Caps,
) -> list[tuple[str, VerificationReport]]:
    chosen = list(models.SUITE_NAMES) if "all" in suites else suites
    unknown = [s for s in chosen if s not in models.SUITE_NAMES]
    if unknown:
        raise DomainError(f"unknown suites {unknown}; valid: {list(models.SUITE_NAMES)}")
    if epsilon is None:
        epsilon = lam ** 3
    results: list[tuple[str, VerificationReport]] = []
    system = None

    def get_system():
        nonlocal system
        if system is None:
            system = _build_system(space, height, lam, caps)
        return system

    for name in chosen:
        if name == "height-tree":
            # The canonical tree exists for every height, limit or not, so
            # this suite never needs a contracting system.
            if height is not None:
                roots = [("", height)]
            else:
                roots = [
                    (f"piece {i}", scattered_height(piece).height)
                    for i, piece in enumerate(unital_decomposition(space))
                ]
                if len(roots) == 1:
                    roots = [("", roots[0][1])]
            parts = [
                (tag, verify_height_tree_axioms(canonical_tree(root), depth, breadth))
                for tag, root in roots
            ]
            report = parts[0][1] if len(parts) == 1 else _merged("height-tree-axioms", parts)
        elif name == "norm":
            parts = [
                (tag, verify_norm_axioms(NormedHeightTree(piece.tree, piece.norm), epsilon))
                for tag, piece in _piece_systems(get_system())
            ]
            report = parts[0][1] if len(parts) == 1 else _merged("norm-axioms", parts)
        elif name == "morphism":
            parts = []
            for tag, piece in _piece_systems(get_system()):
                for morphism in piece.maps:
                    label = f"{tag} {morphism.name}".strip()
                    parts.append((label, verify_morphism_axioms(morphism, depth, breadth)))
            report = _merged("morphism-axioms", parts)
        elif name == "ultrametric":
            report = verify_net_ultrametric(get_system(), levels)
        elif name == "lipschitz":
            report = verify_system_lipschitz(get_system(), levels=levels, net_level=levels)
        elif name == "partition":
            report = verify_partition(get_system(), levels)
        else:  # word-diameters
            report = VerificationReport(
                "word-diameters", f"words up to {levels} on net {levels}"
            )
            glued = isinstance(get_system(), GluedIfs)
            for n in range(levels + 1):
                value = word_diameters(get_system(), n, levels)
                # A glued space has diameter 1/lam; one map application
                # already lands inside a single piece, so lam**n applies
                # from word length 1 on.
                bound = Fraction(1) / lam if (glued and n == 0) else lam ** n
                report.add(f"word length {n}", value <= bound,
                           f"max diameter {value} (bound {bound})")
        results.append((name, report))
    return results


def handle_verify(request: models.VerifyRequest) -> models.VerifyResponse:
    target, space, height = _resolve_target(request.space, request.height)
    lam = parse_rational(request.lam, "lambda")
    epsilon = parse_rational(request.epsilon, "epsilon") if request.epsilon else None
    results = run_verify_suites(
        request.suites, space, height, lam,
        request.depth, request.breadth, request.levels, epsilon, _caps(request.caps),
    )
    suites = [_suite_model(report, name) for name, report in results]
    return models.VerifyResponse(
        target=target,
        lam=str(lam),
        suites=suites,
        all_passed=all(s.passed for s in suites),
    )


def handle_iterate(request: models.IterateRequest) -> models.IterateResponse:
    target, space, height = _resolve_target(request.space, request.height)
    lam = parse_rational(request.lam, "lambda")
    tol = parse_rational(request.tol, "tol")
    if tol <= 0:
        raise DomainError("tol must be positive")
    system = _build_system(space, height, lam, _caps(request.caps))
    fixed: list[models.FixedPointModel] = []
    orbits: list[models.OrbitModel] = []
    pieces = _piece_systems(system)
    for tag, piece in pieces:
        for index, morphism in enumerate(piece.maps):
            label = f"{tag} {morphism.name}".strip()
            fix = fixed_point(piece, index, tol)
            fixed.append(models.FixedPointModel(map=label, branch=list(fix.stem)))
            if request.seeds is not None:
                seeds = [Branch(s) for s in request.seeds]
            elif piece.is_singleton:
                seeds = [Branch()]  # a chain has only the central branch
            else:
                seeds = [Branch((2,)), Branch((3,)), Branch()]
            for seed in seeds:
                orbit = banach_orbit(piece, index, seed, request.steps)
                metric = piece.metric
                distances = [metric.distance(point, fix) for point in orbit]
                orbits.append(models.OrbitModel(
                    map=label,
                    seed=list(seed.stem),
                    distances_to_fix=[str(d) for d in distances],
                    reached_tol=distances[-1] < tol,
                ))
    return models.IterateResponse(
        target=target,
        lam=str(lam),
        tol=str(tol),
        fixed_points=fixed,
        orbits=orbits,
    )
