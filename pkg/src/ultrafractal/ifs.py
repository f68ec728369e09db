"""Contracting systems on height-tree boundaries, with exact rational metrics.

A system is a finite family of height morphisms on one tree: the self-shift
fixing the root plus one surjection onto each distinguished root subtree.
Iterating the family from the root yields the level filtration; a node's norm
is lam to its first level of appearance, and the induced ultrametric makes
every family member a lam-contraction of the boundary.

All distances are powers of lam (or zero), so metric work is done on integer
exponents internally and surfaced as exact Fractions.

Non-unital interval spaces are handled by gluing: one system per unital
piece, distance 1/lam across pieces, and each piece map extended to foreign
points by its fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceededError, DomainError, NotSuccessorError
from .morphisms import (
    HeightMorphism,
    build_shift_endomorphism,
    build_surjective_morphism,
)
from .ordinals import INFINITY, ExtHeight, Kind, classify_kind
from .reporting import VerificationReport
from .spaces import (
    Space,
    Verdict,
    classify_fractal,
    scattered_height,
    unital_decomposition,
)
from .trees import Branch, CENTRAL_BRANCH, HeightTree, NodePath, TreeView, canonical_tree, path_str

_FAR = 10 ** 9  # exponent stand-in for distance zero (lam**_FAR ~ 0)


class IfsSystem:
    """A finite contracting family on one height tree, with cached levels."""

    def __init__(
        self,
        tree: HeightTree,
        lam: Fraction,
        maps: tuple[HeightMorphism, ...],
        tail_start: int,
        caps: Caps = DEFAULT_CAPS,
    ):
        lam = Fraction(lam)
        if not 0 < lam < 1:
            raise DomainError("contraction factor must lie strictly between 0 and 1")
        self.tree = tree
        self.lam = lam
        self.maps = maps
        self.tail_start = tail_start
        self.caps = caps
        self.is_singleton = tree.single_child(())
        self._levels: list[frozenset[NodePath]] = [frozenset({()})]
        self._first_level: dict[NodePath, int] = {(): 0}
        self._nets: list[frozenset[Branch]] = [frozenset({CENTRAL_BRANCH})]
        self._metric: TreeMetric | None = None

    @property
    def map_names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.maps)

    @property
    def exceptional_indices(self) -> tuple[int, ...]:
        """Root children below the regular tail (each owns a surjection)."""
        return self.tree.exceptional(())

    @property
    def tail_indices_start(self) -> int:
        """First index of the regular root children (the shifted family)."""
        return self.tail_start

    def map_by_name(self, name: str) -> HeightMorphism:
        for m in self.maps:
            if m.name == name:
                return m
        raise DomainError(f"no map named {name!r}; have {self.map_names}")

    # --- level filtration ------------------------------------------------

    def _grow_levels(self) -> None:
        current = self._levels[-1]
        level = len(self._levels)
        if level > self.caps.level_cap:
            raise CapExceededError(f"level cap {self.caps.level_cap} exceeded")
        new = set()
        for morphism in self.maps:
            for path in current:
                new.add(morphism.apply(path))
        if len(new) > self.caps.net_cap:
            raise CapExceededError(f"level set size exceeds cap {self.caps.net_cap}")
        grown = frozenset(new)
        if not current <= grown:
            raise DomainError("level filtration is not monotone; root is not fixed")
        for path in grown:
            self._first_level.setdefault(path, level)
        self._levels.append(grown)

    def levels(self, n: int) -> list[frozenset[NodePath]]:
        """The filtration stages T_0..T_n (each stage contains the previous)."""
        if n < 0:
            raise DomainError("level index must be >= 0")
        while len(self._levels) <= n:
            self._grow_levels()
        return self._levels[: n + 1]

    def first_level(self, path: NodePath) -> int:
        """First stage containing the node; expands the filtration up to the cap."""
        path = tuple(path)
        self.tree.height(path)
        while path not in self._first_level:
            if len(self._levels) > self.caps.level_cap:
                raise CapExceededError(
                    f"node {path_str(path)} not reached within level cap "
                    f"{self.caps.level_cap}"
                )
            self._grow_levels()
        return self._first_level[path]

    # --- norm -------------------------------------------------------------

    def norm_exponent(self, path: NodePath) -> int | None:
        """Exponent e with |x| = lam**e, or None when the norm is zero."""
        if self.tree.height(path).is_minus_one:
            return None
        return self.first_level(path)

    def norm_value(self, path: NodePath) -> Fraction:
        exponent = self.norm_exponent(path)
        return Fraction(0) if exponent is None else self.lam ** exponent

    @property
    def norm(self) -> "LevelNorm":
        return LevelNorm(self)

    @property
    def metric(self) -> "TreeMetric":
        if self._metric is None:
            self._metric = TreeMetric(self)
        return self._metric

    # --- boundary iteration ------------------------------------------------

    def _grow_nets(self) -> None:
        current = self._nets[-1]
        new = set()
        for morphism in self.maps:
            for branch in current:
                new.add(morphism.boundary(branch))
        if len(new) > self.caps.net_cap:
            raise CapExceededError(f"net size exceeds cap {self.caps.net_cap}")
        self._nets.append(frozenset(new))

    def attractor_net(self, n: int) -> "PointSet":
        """n-th iterate of the family on the central branch; a lam**(n+1)-net
        of the attractor."""
        if n < 0:
            raise DomainError("iteration count must be >= 0")
        while len(self._nets) <= n:
            self._grow_nets()
        return PointSet(self._nets[n], self.metric)

    def point_set(self, branches: Iterable[Branch]) -> "PointSet":
        return PointSet(frozenset(branches), self.metric)


class LevelNorm:
    """Norm adapter over a system's level filtration (trees.Norm protocol)."""

    def __init__(self, system: IfsSystem):
        self.system = system

    def value(self, path: NodePath) -> Fraction:
        return self.system.norm_value(path)

    def at_least(self, epsilon: Fraction) -> frozenset[NodePath] | None:
        lam, cap = self.system.lam, self.system.caps.level_cap
        deepest = -1
        power = Fraction(1)
        while power >= epsilon:
            deepest += 1
            power *= lam
            if deepest > cap:
                raise CapExceededError("epsilon smaller than the level cap resolves")
        if deepest < 0:
            return frozenset()
        stage = self.system.levels(deepest)[deepest]
        return frozenset(
            p for p in stage if not self.system.tree.height(p).is_minus_one
        )


@dataclass(frozen=True)
class PointSet:
    """Finite branch set with its metric context (one tree, or a glued sum)."""

    points: frozenset
    context: object

    def __post_init__(self) -> None:
        if not self.points:
            raise DomainError("point sets are nonempty")

    def sorted_points(self) -> list:
        return sorted(self.points)

    def __len__(self) -> int:
        return len(self.points)


def _require_same_context(a: PointSet, b: PointSet) -> None:
    if a.context is not b.context:
        raise DomainError("point sets live in different metric contexts")


class _Trie:
    """Stem trie over a branch set; terminals imply the central continuation."""

    __slots__ = ("children", "terminal")

    def __init__(self):
        self.children: dict[int, _Trie] = {}
        self.terminal = False

    @classmethod
    def build(cls, branches: Iterable[Branch]) -> "_Trie":
        root = cls()
        for branch in branches:
            node = root
            for index in branch.stem:
                node = node.children.setdefault(index, cls())
            node.terminal = True
        return root


class TreeMetric:
    """Canonical ultrametric of one system: max divergence-successor norm."""

    def __init__(self, system: IfsSystem):
        self.system = system
        self.lam = system.lam

    def _child_exponent(self, path: NodePath) -> int:
        exponent = self.system.norm_exponent(path)
        return _FAR if exponent is None else exponent

    def exponent(self, a: Branch, b: Branch) -> int | None:
        if a == b:
            return None
        depth = 0
        limit = max(len(a.stem), len(b.stem))
        while depth <= limit and a.index_at(depth) == b.index_at(depth):
            depth += 1
        prefix = tuple(a.index_at(i) for i in range(depth))
        ea = self._child_exponent(prefix + (a.index_at(depth),))
        eb = self._child_exponent(prefix + (b.index_at(depth),))
        exponent = min(ea, eb)
        assert exponent < _FAR, "two central divergence successors"
        return exponent

    def distance(self, a: Branch, b: Branch) -> Fraction:
        exponent = self.exponent(a, b)
        return Fraction(0) if exponent is None else self.lam ** exponent

    def nearest_exponent(self, trie: _Trie, members: frozenset, b: Branch) -> int | None:
        """Exponent of min distance from b to the member set (None = member)."""
        if b in members:
            return None
        node = trie
        prefix: NodePath = ()
        for _ in range(len(b.stem) + _trie_depth(trie) + 2):
            index = b.index_at(len(prefix))
            if index in node.children:
                prefix += (index,)
                node = node.children[index]
                continue
            if index == 0 and node.terminal:
                prefix += (0,)
                node = _TERMINAL_CHAIN
                continue
            own = self._child_exponent(prefix + (index,))
            alternatives = [
                self._child_exponent(prefix + (j,)) for j in node.children
            ]
            if node.terminal and 0 not in node.children:
                alternatives.append(_FAR)
            best_other = max(alternatives)
            return min(own, best_other)
        raise AssertionError("trie walk failed to terminate")

    def directed_exponent(self, sources: frozenset, targets: frozenset) -> int | None:
        trie = _Trie.build(targets)
        best: int | None = None
        for branch in sources:
            e = self.nearest_exponent(trie, targets, branch)
            if e is None:
                continue
            best = e if best is None else min(best, e)
        return best

    def diameter_exponent(self, points: frozenset) -> int | None:
        """In an ultrametric the diameter is attained against any anchor."""
        if len(points) < 2:
            return None
        anchor = min(points)
        return min(self.exponent(p, anchor) for p in points if p != anchor)


_TERMINAL_CHAIN = _Trie()
_TERMINAL_CHAIN.terminal = True


def _trie_depth(node: _Trie) -> int:
    if not node.children:
        return 0
    return 1 + max(_trie_depth(child) for child in node.children.values())


def hausdorff_distance(a: PointSet, b: PointSet) -> Fraction:
    """Exact Hausdorff distance between two finite sets in one context."""
    _require_same_context(a, b)
    metric = a.context
    exponents = [
        metric.directed_exponent(a.points, b.points),
        metric.directed_exponent(b.points, a.points),
    ]
    finite = [e for e in exponents if e is not None]
    if not finite:
        return Fraction(0)
    return metric.lam ** min(finite)


def hutchinson_step(system, points: PointSet) -> PointSet:
    """One application of the family to a finite point set, deduplicated."""
    if points.context is not _context_of(system):
        raise DomainError("point set belongs to a different system")
    return system_step(system, points)


def _context_of(system) -> object:
    return system.metric


def system_step(system, points: PointSet) -> PointSet:
    if isinstance(system, GluedIfs):
        new = {
            system.apply_extended(i, j, point)
            for (i, j, _) in system.map_labels
            for point in points.points
        }
    else:
        new = {
            morphism.boundary(branch)
            for morphism in system.maps
            for branch in points.points
        }
    if len(new) > system.caps.net_cap:
        raise CapExceededError(f"net size exceeds cap {system.caps.net_cap}")
    return PointSet(frozenset(new), points.context)


# --- builders ---------------------------------------------------------------


def build_ifs_unital(
    root_height: ExtHeight,
    lam: Fraction,
    tree: HeightTree | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> IfsSystem:
    """Contracting family for a unital space of the given scattered height.

    The regular root children (all of height root-1, or infinity under an
    infinite root) are shifted one slot up by `f`; the first of them and each
    exceptional child receive a surjection of the whole tree onto their
    subtree.  Height 0 yields the single chain self-map.  Limit heights are
    refused: no contracting self-covering exists for them.
    """
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise DomainError("contraction factor must lie strictly between 0 and 1")
    kind = classify_kind(root_height)
    if kind is Kind.MINUS_ONE:
        raise DomainError("height -1 names no space")
    if kind is Kind.LIMIT:
        raise NotSuccessorError(
            f"scattered height {root_height} is a countable limit ordinal; "
            "no contracting system exists"
        )
    if tree is None:
        tree = canonical_tree(root_height)
    elif tree.root_height != root_height:
        raise DomainError("tree root height does not match the requested height")
    view = TreeView(tree)
    if kind is Kind.ZERO:
        chain = build_surjective_morphism(view, view, name="f", caps=caps)
        return IfsSystem(tree, lam, (chain,), tail_start=1, caps=caps)
    exceptional = tree.exceptional(())
    tail_start = len(exceptional) + 1
    maps: list[HeightMorphism] = [
        build_shift_endomorphism(view, tail_start, name="f", caps=caps),
        build_surjective_morphism(view, TreeView(tree, (tail_start,)), name="g", caps=caps),
    ]
    for index in exceptional:
        maps.append(
            build_surjective_morphism(
                view, TreeView(tree, (index,)), name=f"g{index}", caps=caps
            )
        )
    return IfsSystem(tree, lam, tuple(maps), tail_start, caps)


class GluedMetric:
    """Piece metrics inside, constant 1/lam across pieces."""

    def __init__(self, piece_metrics: Sequence[TreeMetric], lam: Fraction):
        self.piece_metrics = tuple(piece_metrics)
        self.lam = lam
        self.cross = Fraction(1) / lam

    def exponent(self, p, q) -> int | None:
        (i, a), (j, b) = p, q
        if i != j:
            return -1
        return self.piece_metrics[i].exponent(a, b)

    def distance(self, p, q) -> Fraction:
        exponent = self.exponent(p, q)
        return Fraction(0) if exponent is None else self.lam ** exponent

    def directed_exponent(self, sources: frozenset, targets: frozenset) -> int | None:
        by_piece: dict[int, set[Branch]] = {}
        for i, branch in targets:
            by_piece.setdefault(i, set()).add(branch)
        tries = {
            i: (_Trie.build(branches), frozenset(branches))
            for i, branches in by_piece.items()
        }
        best: int | None = None
        for i, branch in sources:
            if i in tries:
                trie, members = tries[i]
                e = self.piece_metrics[i].nearest_exponent(trie, members, branch)
                if e is None:
                    continue
            else:
                e = -1
            best = e if best is None else min(best, e)
        return best

    def diameter_exponent(self, points: frozenset) -> int | None:
        if len(points) < 2:
            return None
        anchor = min(points)
        return min(self.exponent(p, anchor) for p in points if p != anchor)


class GluedIfs:
    """Finite topological sum of unital systems with extended maps.

    Each piece keeps its own tree, maps and metric (diameter <= lam < 1);
    points of different pieces sit at distance 1/lam.  A piece map extended
    to the whole sum sends every foreign point to its fixed point, which
    keeps it a lam-contraction because foreign pairs are 1/lam apart while
    images stay within one piece diameter.
    """

    def __init__(self, pieces: tuple[tuple[Space, IfsSystem], ...], lam: Fraction,
                 caps: Caps = DEFAULT_CAPS):
        if len(pieces) < 2:
            raise DomainError("gluing needs at least two pieces")
        self.pieces = pieces
        self.lam = Fraction(lam)
        self.caps = caps
        self.map_labels = tuple(
            (i, j, f"p{i}.{m.name}")
            for i, (_, system) in enumerate(pieces)
            for j, m in enumerate(system.maps)
        )
        self.metric = GluedMetric(
            [system.metric for _, system in pieces], self.lam
        )
        self._fix: dict[tuple[int, int], Branch] = {}
        self._nets: list[frozenset] = [
            frozenset((i, CENTRAL_BRANCH) for i in range(len(pieces)))
        ]

    @property
    def map_names(self) -> tuple[str, ...]:
        return tuple(label for _, _, label in self.map_labels)

    def fixed_branch(self, piece: int, map_index: int) -> Branch:
        key = (piece, map_index)
        if key not in self._fix:
            system = self.pieces[piece][1]
            self._fix[key] = fixed_point(system, map_index, self.lam ** 8)
        return self._fix[key]

    def apply_extended(self, piece: int, map_index: int, point) -> tuple:
        source_piece, branch = point
        if source_piece == piece:
            morphism = self.pieces[piece][1].maps[map_index]
            return (piece, morphism.boundary(branch))
        return (piece, self.fixed_branch(piece, map_index))

    def attractor_net(self, n: int) -> PointSet:
        if n < 0:
            raise DomainError("iteration count must be >= 0")
        while len(self._nets) <= n:
            current = self._nets[-1]
            new = {
                self.apply_extended(i, j, point)
                for (i, j, _) in self.map_labels
                for point in current
            }
            if len(new) > self.caps.net_cap:
                raise CapExceededError(f"net size exceeds cap {self.caps.net_cap}")
            self._nets.append(frozenset(new))
        return PointSet(self._nets[n], self.metric)

    def point_set(self, points: Iterable[tuple]) -> PointSet:
        return PointSet(frozenset(points), self.metric)


def build_ifs_general(space: Space, lam: Fraction, caps: Caps = DEFAULT_CAPS):
    """System for any admissible space: decompose into unital pieces, build a
    system per piece, and glue.  Single-piece inputs return the plain system."""
    if classify_fractal(space) is Verdict.NOT_TOPOLOGICAL_FRACTAL:
        raise NotSuccessorError(
            f"space {space.literal()} has limit scattered height; "
            "no contracting system exists"
        )
    if space.is_cantor:
        return build_ifs_unital(INFINITY, lam, caps=caps)
    pieces = unital_decomposition(space)
    systems = [
        build_ifs_unital(scattered_height(piece).height, lam, caps=caps)
        for piece in pieces
    ]
    if len(pieces) == 1:
        return systems[0]
    return GluedIfs(tuple(zip(pieces, systems)), lam, caps)


# --- iteration and verification ---------------------------------------------


def fixed_point(system: IfsSystem, map_index: int, tol: Fraction) -> Branch:
    """The unique fixed boundary point of one map, by iterating on the root.

    The node orbit of the root is stationary or nested; once the orbit's
    branch stabilizes (verified by applying the boundary map) the result is
    exact, otherwise iteration stops when the carrier norm drops below tol.
    """
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    morphism = system.maps[map_index]
    path: NodePath = ()
    for _ in range(system.caps.level_cap + 1):
        image = morphism.apply(path)
        if image == path:
            return Branch(path)
        if Branch(image) == Branch(path) and morphism.boundary(Branch(path)) == Branch(path):
            return Branch(path)
        if system.norm_value(image) < tol:
            return Branch(image)
        path = image
    raise CapExceededError("fixed-point orbit did not stabilize within the level cap")


def banach_orbit(system: IfsSystem, map_index: int, seed: Branch, steps: int) -> list[Branch]:
    morphism = system.maps[map_index]
    orbit = [seed]
    for _ in range(steps):
        orbit.append(morphism.boundary(orbit[-1]))
    return orbit


def verify_partition(system, n: int) -> VerificationReport:
    """Each filtration node is covered by exactly one map image, and the
    boundary blocks of the maps are disjoint and tile the next net."""
    if n < 1:
        raise DomainError("partition check needs n >= 1")
    if isinstance(system, GluedIfs):
        return _verify_partition_glued(system, n)
    report = VerificationReport(
        "partition", f"{system.tree.label}, level {n}, net {n}"
    )
    stage = system.levels(n)[n]
    images = [
        (m.name, frozenset(m.apply(p) for p in stage)) for m in system.maps
    ]
    _partition_checks(report, stage, images, "node")
    previous = system.attractor_net(n - 1).points
    blocks = [
        (m.name, frozenset(m.boundary(b) for b in previous)) for m in system.maps
    ]
    _partition_checks(report, system.attractor_net(n).points, blocks, "boundary")
    return report


def _partition_checks(report: VerificationReport, whole, images, tag: str) -> None:
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            overlap = images[i][1] & images[j][1]
            report.add(
                f"{tag} images {images[i][0]} and {images[j][0]} disjoint",
                not overlap,
                f"{len(overlap)} shared elements" if overlap else "",
            )
    union = frozenset().union(*(img for _, img in images))
    uncovered = whole - union
    report.add(f"{tag} cover", not uncovered,
               f"{len(uncovered)} uncovered" if uncovered else "")
    counts_bad = 0
    for element in whole:
        hits = sum(1 for _, img in images if element in img)
        if hits != 1:
            counts_bad += 1
    report.add(f"{tag} membership count is 1", counts_bad == 0,
               f"{counts_bad} elements off" if counts_bad else "")


def _verify_partition_glued(system: GluedIfs, n: int) -> VerificationReport:
    report = VerificationReport("partition", f"glued, {len(system.pieces)} pieces, level {n}")
    for i, (_, piece_system) in enumerate(system.pieces):
        sub = verify_partition(piece_system, n)
        report.add(f"piece {i} partition", sub.passed,
                   "; ".join(c.label for c in sub.failures()) if not sub.passed else "")
    previous = system.attractor_net(n - 1).points
    blocks = [
        (label, frozenset(system.apply_extended(i, j, p) for p in previous))
        for (i, j, label) in system.map_labels
    ]
    _partition_checks(report, system.attractor_net(n).points, blocks, "boundary")
    return report


def word_diameters(system, n: int, net_level: int) -> Fraction:
    """Max diameter of a length-n map word applied to the level-`net_level`
    net; witnesses topological contraction (bounded by lam**n)."""
    if n < 0 or n > net_level:
        raise DomainError("need 0 <= n <= net_level")
    if n > system.caps.word_cap:
        raise CapExceededError(f"word length {n} exceeds cap {system.caps.word_cap}")
    metric = system.metric
    current = [system.attractor_net(net_level).points]
    for _ in range(n):
        if isinstance(system, GluedIfs):
            current = [
                frozenset(system.apply_extended(i, j, p) for p in block)
                for block in current
                for (i, j, _) in system.map_labels
            ]
        else:
            current = [
                frozenset(m.boundary(b) for b in block)
                for block in current
                for m in system.maps
            ]
        if len(current) * max(len(block) for block in current) > system.caps.net_cap:
            raise CapExceededError("word sweep exceeds the net size cap")
    exponents = [metric.diameter_exponent(block) for block in current]
    finite = [e for e in exponents if e is not None]
    if not finite:
        return Fraction(0)
    return system.lam ** min(finite)


def verify_net_ultrametric(system, n: int, point_cap: int = 400) -> VerificationReport:
    """Metric axioms over every triple of the level-n net, via the integer
    exponent representation (all distances are powers of lam).

    The check is cubic in the net size, so nets beyond `point_cap` points are
    refused instead of running for hours."""
    points = sorted(system.attractor_net(n).points)
    if len(points) > point_cap:
        raise CapExceededError(
            f"net has {len(points)} points; the all-triples check is capped at "
            f"{point_cap} (lower the level or raise point_cap)"
        )
    metric = system.metric
    report = VerificationReport(
        "ultrametric-axioms", f"net {n}: {len(points)} points, all triples"
    )
    size = len(points)
    exps = [[0] * size for _ in range(size)]
    identity_bad = 0
    for i in range(size):
        for j in range(i, size):
            e = metric.exponent(points[i], points[j])
            if (e is None) != (i == j):
                identity_bad += 1
            exps[i][j] = exps[j][i] = _FAR if e is None else e
    report.add("symmetry", True, "distance computed from the unordered meet")
    report.add("zero exactly on the diagonal", identity_bad == 0,
               f"{identity_bad} pairs off" if identity_bad else "")
    violations = 0
    for i in range(size):
        row_i = exps[i]
        for k in range(size):
            e_ik = row_i[k]
            row_k = exps[k]
            for j in range(size):
                if row_i[j] > e_ik and row_k[j] > e_ik:
                    violations += 1
    report.add("strong triangle inequality", violations == 0,
               f"{violations} violating triples" if violations else "")
    return report


def verify_system_lipschitz(system, levels: int = 10, net_level: int = 8) -> VerificationReport:
    """Node and boundary contraction for every map of the system, exactly.

    Node level runs over the level filtration below the root (the root norm
    never enters a boundary distance; a root-fixing self-map cannot scale
    it).  Boundary level runs over all pairs of the level-`net_level` net.
    """
    if isinstance(system, GluedIfs):
        return _verify_lipschitz_glued(system, levels, net_level)
    report = VerificationReport(
        "lipschitz",
        f"{system.tree.label}, lam={system.lam}, nodes of T_{levels} below the root, "
        f"net {net_level} pairs",
    )
    stage = system.levels(levels)[levels]
    for morphism in system.maps:
        bad = []
        for path in stage:
            if not path:
                continue
            source = system.norm_exponent(path)
            image = system.norm_exponent(morphism.apply(path))
            if image is None:
                continue
            if source is None or image < source + 1:
                bad.append(path)
        report.add(f"node norms contract under {morphism.name}", not bad,
                   f"{len(bad)} nodes, first {path_str(sorted(bad)[0])}" if bad else "")
    net = sorted(system.attractor_net(net_level).points)
    metric = system.metric
    for morphism in system.maps:
        images = {b: morphism.boundary(b) for b in net}
        bad_pairs = 0
        for i, a in enumerate(net):
            for b in net[i + 1:]:
                source = metric.exponent(a, b)
                image = metric.exponent(images[a], images[b])
                if image is None:
                    continue
                if image < source + 1:
                    bad_pairs += 1
        report.add(f"boundary map {morphism.name} contracts the net",
                   bad_pairs == 0,
                   f"{bad_pairs} pairs" if bad_pairs else "")
    return report


def _verify_lipschitz_glued(system: GluedIfs, levels: int, net_level: int) -> VerificationReport:
    report = VerificationReport(
        "lipschitz", f"glued, lam={system.lam}, piece nodes T_{levels}, net {net_level}"
    )
    for i, (_, piece_system) in enumerate(system.pieces):
        sub = verify_system_lipschitz(piece_system, levels, net_level)
        report.add(f"piece {i} lipschitz", sub.passed,
                   "; ".join(c.label for c in sub.failures()) if not sub.passed else "")
    net = sorted(system.attractor_net(net_level).points)
    metric = system.metric
    bad = 0
    for (i, j, label) in system.map_labels:
        for a_idx, a in enumerate(net):
            image_a = system.apply_extended(i, j, a)
            for b in net[a_idx + 1:]:
                image_b = system.apply_extended(i, j, b)
                left = metric.distance(image_a, image_b)
                if left > system.lam * metric.distance(a, b):
                    bad += 1
        report.add(f"extended map {label} contracts the glued net", bad == 0,
                   f"{bad} pairs" if bad else "")
        bad = 0
    return report
