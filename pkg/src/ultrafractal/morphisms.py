"""Height morphisms: height-decreasing tree maps and their boundary actions.

A morphism sends each node's central child to the image's central child, is
injective off central children, and never raises heights.  Morphisms here are
lazy: the child-index map of a node is materialized (and memoized) the first
time a path through it is applied, so maps between infinite trees stay cheap.

The surjection builder replaces the classical arbitrary matching with a
deterministic greedy rule: target children are matched in index order to the
smallest unused source child of sufficient height, and unmatched source
children collapse onto the target's central chain.

Memoized entries are pure functions of the path, so concurrent traversal is
benign: racing threads at worst recompute an identical entry, and observable
behavior is independent of scheduling.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .config import DEFAULT_CAPS, Caps
from .errors import CapExceededError, DomainError, UnaddressablePathError
from .ordinals import ExtHeight, compare
from .reporting import VerificationReport
from .trees import (
    Branch,
    NodePath,
    NormedHeightTree,
    TreeView,
    canonical_ultrametric,
    path_str,
)


class _CollapseMap:
    """Every child to the central child; used when the target is a chain."""

    def image(self, index: int) -> int:
        return 0

    def preimage(self, index: int) -> int | None:
        return 0 if index == 0 else None


_COLLAPSE = _CollapseMap()


class _ShiftMap:
    """Root rule of the self-shift: the regular tail moves one slot up, the
    exceptional children (indices below `tail_start`) collapse to central."""

    def __init__(self, tail_start: int):
        self.tail_start = tail_start

    def image(self, index: int) -> int:
        if index < self.tail_start:
            return 0
        return index + 1

    def preimage(self, index: int) -> int | None:
        if index == 0:
            return 0
        if index >= self.tail_start + 1:
            return index - 1
        return None


class _TableMap:
    """Explicit finite child map; unlisted children go to `fallback`."""

    def __init__(self, table: dict[int, int], fallback: int | None = 0):
        self.table = dict(table)
        self.fallback = fallback

    def image(self, index: int) -> int:
        if index in self.table:
            return self.table[index]
        if index == 0:
            return 0
        if self.fallback is None:
            raise UnaddressablePathError(f"no image for child {index}")
        return self.fallback

    def preimage(self, index: int) -> int | None:
        if index == 0:
            return 0
        for src, dst in sorted(self.table.items()):
            if dst == index:
                return src
        return None


class _GreedyMap:
    """Greedy smallest-index matching of non-central children.

    Target children are processed in order; target m takes the smallest
    unused source child whose height is at least the target child's height.
    When both trees declare nondecreasing child heights the chosen source
    indices increase, so "source child i is never matched" becomes decidable
    (the pointer passes i); otherwise matching runs under a cap and an
    undecided child raises instead of silently collapsing.
    """

    def __init__(
        self,
        src_height: Callable[[int], ExtHeight],
        dst_height: Callable[[int], ExtHeight],
        monotone: bool,
        cap: int,
    ):
        self._src_height = src_height
        self._dst_height = dst_height
        self._monotone = monotone
        self._cap = cap
        self._to_dst: dict[int, int] = {}
        self._to_src: dict[int, int] = {}
        self._next_m = 1
        self._next_n = 1
        self._used: set[int] = set()

    def _advance_monotone(self) -> None:
        m = self._next_m
        need = self._dst_height(m)
        n = self._next_n
        while compare(self._src_height(n), need) < 0:
            n += 1
            if n - self._next_n > self._cap:
                raise CapExceededError(
                    f"no source child of height >= {need} within {self._cap} indices"
                )
        self._to_dst[n] = m
        self._to_src[m] = n
        self._next_n = n + 1
        self._next_m = m + 1

    def _advance_general(self) -> None:
        m = self._next_m
        need = self._dst_height(m)
        for n in range(1, self._cap + 1):
            if n not in self._used and not compare(self._src_height(n), need) < 0:
                self._used.add(n)
                self._to_dst[n] = m
                self._to_src[m] = n
                self._next_m = m + 1
                return
        raise CapExceededError(
            f"no unused source child of height >= {need} within cap {self._cap}"
        )

    def image(self, index: int) -> int:
        if index == 0:
            return 0
        if index in self._to_dst:
            return self._to_dst[index]
        if self._monotone:
            while self._next_n <= index:
                self._advance_monotone()
                if index in self._to_dst:
                    return self._to_dst[index]
            return 0
        while self._next_m <= self._cap:
            self._advance_general()
            if index in self._to_dst:
                return self._to_dst[index]
        raise CapExceededError(
            f"greedy matching exhausted cap {self._cap} without classifying child {index}"
        )

    def preimage(self, index: int) -> int | None:
        if index == 0:
            return 0
        while self._next_m <= index:
            if self._monotone:
                self._advance_monotone()
            else:
                self._advance_general()
        return self._to_src.get(index)


MapFactory = Callable[[NodePath, NodePath], object]


class HeightMorphism:
    """Lazy height morphism between tree views.

    `map_factory(src_rel, dst_rel)` supplies the child-index map of each
    visited node pair; the default collapses onto chains and greedily matches
    everywhere else.  Application walks a path prefix-wise and preserves its
    length in view-relative coordinates.
    """

    def __init__(
        self,
        src: TreeView,
        dst: TreeView,
        map_factory: MapFactory | None = None,
        root_map: object | None = None,
        name: str = "",
        surjective: bool = False,
        caps: Caps = DEFAULT_CAPS,
    ):
        self.src = src
        self.dst = dst
        self.name = name
        self.surjective = surjective
        self.caps = caps
        self._factory = map_factory or self._default_factory
        first = root_map if root_map is not None else self._factory((), ())
        self._nodes: dict[NodePath, tuple[NodePath, object]] = {(): ((), first)}

    def _default_factory(self, src_rel: NodePath, dst_rel: NodePath) -> object:
        if self.dst.single_child(dst_rel):
            return _COLLAPSE
        if self.src.single_child(src_rel):
            return _COLLAPSE
        monotone = self.src.tree.monotone_children and self.dst.tree.monotone_children
        return _GreedyMap(
            lambda n: self.src.child_height(src_rel, n),
            lambda m: self.dst.child_height(dst_rel, m),
            monotone,
            self.caps.match_cap,
        )

    def _resolve(self, rel: NodePath) -> tuple[NodePath, object]:
        cached = self._nodes.get(rel)
        if cached is not None:
            return cached
        self.src.height(rel)  # raises on unaddressable input
        dst_parent, parent_map = self._resolve(rel[:-1])
        dst_rel = dst_parent + (parent_map.image(rel[-1]),)
        self.dst.height(dst_rel)
        entry = (dst_rel, self._factory(rel, dst_rel))
        self._nodes[rel] = entry
        return entry

    def apply_rel(self, rel: NodePath) -> NodePath:
        return self._resolve(tuple(rel))[0]

    def apply(self, path: NodePath) -> NodePath:
        path = tuple(path)
        base = self.src.base
        if path[: len(base)] != base:
            raise DomainError(f"path {path_str(path)} lies outside the source subtree")
        return self.dst.abs_path(self.apply_rel(path[len(base):]))

    def boundary(self, branch: Branch) -> Branch:
        """Induced boundary map; central continuations map to central ones."""
        return Branch(self.apply(branch.stem))

    def find_preimage(self, dst_rel: NodePath) -> NodePath | None:
        """A source node mapping onto the given target node, or None."""
        src_rel: NodePath = ()
        for target_index in dst_rel:
            _, node_map = self._resolve(src_rel)
            source_index = node_map.preimage(target_index)
            if source_index is None:
                return None
            src_rel = src_rel + (source_index,)
        return src_rel

    def __repr__(self) -> str:
        return f"HeightMorphism({self.name or 'unnamed'})"


class ComposedMorphism:
    """Composition outer(inner(.)); inner's target view must be outer's source."""

    def __init__(self, outer: HeightMorphism, inner: HeightMorphism, name: str = ""):
        base = outer.src.base
        if inner.dst.tree is not outer.src.tree or inner.dst.base[: len(base)] != base:
            raise DomainError("inner image must land inside the outer source subtree")
        self.outer = outer
        self.inner = inner
        self.src = inner.src
        self.dst = outer.dst
        self.surjective = inner.surjective and outer.surjective
        self.name = name or f"{outer.name}*{inner.name}"

    def apply(self, path: NodePath) -> NodePath:
        return self.outer.apply(self.inner.apply(path))

    def apply_rel(self, rel: NodePath) -> NodePath:
        out = self.apply(self.src.abs_path(rel))
        return out[len(self.dst.base):]

    def boundary(self, branch: Branch) -> Branch:
        return Branch(self.apply(branch.stem))

    def find_preimage(self, dst_rel: NodePath) -> NodePath | None:
        mid = self.outer.find_preimage(dst_rel)
        if mid is None:
            return None
        return self.inner.find_preimage(mid)


def compose(outer: HeightMorphism, inner: HeightMorphism) -> ComposedMorphism:
    return ComposedMorphism(outer, inner)


def build_surjective_morphism(
    src: TreeView, dst: TreeView, name: str = "g", caps: Caps = DEFAULT_CAPS
) -> HeightMorphism:
    """Greedy surjection from a taller tree onto a lower one.

    Requires the source root height to dominate the target root height;
    recursion happens lazily per matched child pair.
    """
    if compare(src.root_height, dst.root_height) < 0:
        raise DomainError(
            f"source root height {src.root_height} is below target {dst.root_height}"
        )
    return HeightMorphism(src, dst, name=name, surjective=True, caps=caps)


def build_shift_endomorphism(
    view: TreeView, tail_start: int, name: str = "f", caps: Caps = DEFAULT_CAPS
) -> HeightMorphism:
    """Self-map fixing the root: regular root children shift one index up,
    exceptional ones collapse onto the central chain."""
    morphism = HeightMorphism(view, view, name=name, caps=caps)
    morphism._nodes[()] = ((), _ShiftMap(tail_start))
    return morphism


def table_morphism(
    src: TreeView,
    dst: TreeView,
    tables: dict[NodePath, dict[int, int]],
    fallback: int | None = 0,
    name: str = "table",
) -> HeightMorphism:
    """Morphism with hand-written child maps, mainly for counterexamples."""

    def factory(src_rel: NodePath, dst_rel: NodePath) -> object:
        return _TableMap(tables.get(src_rel, {}), fallback)

    return HeightMorphism(src, dst, map_factory=factory, name=name)


def _view_window(view: TreeView, depth: int, breadth: int) -> Iterator[NodePath]:
    stack: list[NodePath] = [()]
    while stack:
        rel = stack.pop()
        yield rel
        if len(rel) == depth:
            continue
        top = 0 if view.single_child(rel) else breadth
        for index in range(top, -1, -1):
            stack.append(rel + (index,))


def verify_morphism_axioms(morphism, depth: int, breadth: int) -> VerificationReport:
    """Check the morphism axioms on a window of the source tree.

    Per node: heights never increase, the central child maps to the central
    child, and distinct non-central children keep distinct non-central
    images.  When the morphism claims surjectivity, every target window node
    must exhibit a preimage.
    """
    src, dst = morphism.src, morphism.dst
    report = VerificationReport(
        "morphism-axioms",
        f"{morphism.name or 'morphism'}, depth<={depth}, children<={breadth}",
    )
    for rel in _view_window(src, depth, breadth):
        where = path_str(src.abs_path(rel))
        try:
            image = morphism.apply_rel(rel)
            report.add(
                f"height not raised at {where}",
                not compare(dst.height(image), src.height(rel)) > 0,
                f"{src.height(rel)} -> {dst.height(image)}",
            )
            central = morphism.apply_rel(rel + (0,))
            report.add(f"central to central at {where}", central[-1] == 0,
                       f"maps to child {central[-1]}")
            if src.single_child(rel):
                continue
            images: dict[int, list[int]] = {}
            for index in range(1, breadth + 1):
                target = morphism.apply_rel(rel + (index,))[-1]
                if target != 0:
                    images.setdefault(target, []).append(index)
            clashes = {t: srcs for t, srcs in images.items() if len(srcs) > 1}
            report.add(f"injective off central at {where}", not clashes,
                       f"shared targets {clashes}" if clashes else "")
        except UnaddressablePathError as exc:
            report.add(f"image addressable under {where}", False, str(exc))
    if getattr(morphism, "surjective", False):
        missing = []
        for rel in _view_window(dst, depth, breadth):
            source = morphism.find_preimage(rel)
            if source is None or morphism.apply_rel(source) != rel:
                missing.append(path_str(dst.abs_path(rel)))
        report.add("surjective onto target window", not missing,
                   f"no preimage for {missing}" if missing else "")
    return report


def lipschitz_check(
    morphism,
    src_norm,
    dst_norm,
    lam: Fraction,
    depth: int,
    breadth: int,
    branches: Iterable[Branch] = (),
) -> VerificationReport:
    """Exact contraction checks for a morphism under the given norms.

    Node level: |f(x)| <= lam * |x| for every window node below the root (the
    root norm never enters a boundary distance, and a root-fixing self-map
    could not scale it).  Branch level: the induced boundary map contracts
    every pair of the given branches under the canonical ultrametrics.
    """
    report = VerificationReport(
        "lipschitz",
        f"{morphism.name or 'morphism'}, lam={lam}, depth 1..{depth}, children<={breadth}",
    )
    node_bad = []
    for rel in _view_window(morphism.src, depth, breadth):
        if not rel:
            continue
        source_value = src_norm.value(morphism.src.abs_path(rel))
        image_value = dst_norm.value(morphism.dst.abs_path(morphism.apply_rel(rel)))
        if image_value > lam * source_value:
            node_bad.append(
                f"{path_str(rel)}: {image_value} > {lam}*{source_value}"
            )
    report.add("node norms contract", not node_bad,
               "; ".join(node_bad[:4]) if node_bad else "")
    branches = sorted(set(branches))
    if branches:
        src_nt = NormedHeightTree(morphism.src.tree, src_norm)
        dst_nt = NormedHeightTree(morphism.dst.tree, dst_norm)
        pair_bad = []
        for i, a in enumerate(branches):
            image_a = morphism.boundary(a)
            for b in branches[i + 1:]:
                image_b = morphism.boundary(b)
                left = canonical_ultrametric(dst_nt, image_a, image_b)
                right = lam * canonical_ultrametric(src_nt, a, b)
                if left > right:
                    pair_bad.append(f"({a},{b}): {left} > {right}")
        report.add(
            f"boundary map contracts on {len(branches)} branches",
            not pair_bad,
            "; ".join(pair_bad[:4]) if pair_bad else "",
        )
    return report
