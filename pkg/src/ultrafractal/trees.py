"""Lazy height trees, branches, norms, and the canonical ultrametric.

A height tree assigns every node an extended height.  Each node has a unique
"central" successor of height -1 at child index 0; nodes of height -1 or 0
have no other children, all other nodes have countably many.  Trees are pure
rule objects: a node's height is computed (and memoized) from its path, so
infinite trees never materialize.

Branches here are the eventually-central ones: a finite stem followed by the
all-central continuation.  Those are exactly the branches the contracting
systems produce, and they are dense in the boundary, so nothing else is
needed at this scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Callable, Iterable, Iterator, Protocol

from .errors import DomainError, UnaddressablePathError
from .ordinals import (
    ExtHeight,
    INFINITY,
    Kind,
    MINUS_ONE,
    ZERO,
    classify_kind,
    compare,
    fundamental_sequence,
    height_minus_one,
)
from .reporting import VerificationReport

NodePath = tuple[int, ...]


def path_str(path: NodePath) -> str:
    return "[" + ",".join(str(i) for i in path) + "]"


class Branch:
    """A boundary point: a stem of child indices, then central forever.

    Two branches are equal iff one stem extends the other by zeros only, so
    stems are normalized by stripping trailing zeros.
    """

    __slots__ = ("stem",)

    def __init__(self, stem: Iterable[int] = ()):
        stem = tuple(stem)
        if any(i < 0 for i in stem):
            raise DomainError("child indices are non-negative")
        while stem and stem[-1] == 0:
            stem = stem[:-1]
        self.stem = stem

    def index_at(self, depth: int) -> int:
        return self.stem[depth] if depth < len(self.stem) else 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Branch) and self.stem == other.stem

    def __hash__(self) -> int:
        return hash(("branch", self.stem))

    def __lt__(self, other: "Branch") -> bool:
        return self.stem < other.stem

    def __repr__(self) -> str:
        return f"Branch{path_str(self.stem)}"


CENTRAL_BRANCH = Branch()


def meet(a: Branch, b: Branch) -> NodePath:
    """Longest common prefix of two distinct branches (zero-extended stems)."""
    if a == b:
        raise DomainError("meet is undefined for equal branches")
    limit = max(len(a.stem), len(b.stem))
    prefix = []
    for depth in range(limit + 1):
        ia, ib = a.index_at(depth), b.index_at(depth)
        if ia != ib:
            return tuple(prefix)
        prefix.append(ia)
    raise AssertionError("distinct branches must diverge")


ChildRule = Callable[[NodePath, ExtHeight, int], ExtHeight]


class HeightTree:
    """Rule-generated height tree.

    The rule maps (path, node height, child index) to the child's height.
    `exceptional` lists the non-central child indices of a node whose heights
    differ from the node's main pattern; verifiers and the greedy matcher use
    it to know where the regular tail starts.  `monotone_children` declares
    that non-central child heights are nondecreasing in the index, which the
    canonical rules guarantee.
    """

    def __init__(
        self,
        root_height: ExtHeight,
        child_rule: ChildRule | None = None,
        exceptional_rule: Callable[[NodePath], tuple[int, ...]] | None = None,
        monotone_children: bool = True,
        label: str = "",
    ):
        if root_height.is_minus_one:
            raise DomainError("root height -1 is not a tree")
        self.root_height = root_height
        self._rule = child_rule or _canonical_child_height
        self._exceptional_rule = exceptional_rule
        self.monotone_children = monotone_children
        self.label = label or f"tree({root_height})"
        self._heights: dict[NodePath, ExtHeight] = {(): root_height}

    def height(self, path: NodePath) -> ExtHeight:
        path = tuple(path)
        cached = self._heights.get(path)
        if cached is not None:
            return cached
        parent_height = self.height(path[:-1])
        value = self._child_height(path[:-1], parent_height, path[-1])
        self._heights[path] = value
        return value

    def _child_height(self, path: NodePath, parent_height: ExtHeight, index: int) -> ExtHeight:
        if index < 0:
            raise UnaddressablePathError("child indices are non-negative")
        if index == 0:
            return MINUS_ONE
        if self.single_child_height(parent_height):
            raise UnaddressablePathError(
                f"node {path_str(path)} has height {parent_height}; only the central child exists"
            )
        return self._rule(path, parent_height, index)

    def child_height(self, path: NodePath, index: int) -> ExtHeight:
        return self.height(tuple(path) + (index,))

    @staticmethod
    def single_child_height(height: ExtHeight) -> bool:
        return height.is_minus_one or height.is_zero

    def single_child(self, path: NodePath) -> bool:
        return self.single_child_height(self.height(path))

    def exceptional(self, path: NodePath) -> tuple[int, ...]:
        if self._exceptional_rule is None:
            return ()
        return self._exceptional_rule(tuple(path))

    def __repr__(self) -> str:
        return f"HeightTree({self.label})"


def _canonical_child_height(path: NodePath, parent_height: ExtHeight, index: int) -> ExtHeight:
    kind = classify_kind(parent_height)
    if kind is Kind.INFINITY:
        return INFINITY
    if kind is Kind.SUCCESSOR:
        return height_minus_one(parent_height)
    if kind is Kind.LIMIT:
        return fundamental_sequence(parent_height, index)
    raise UnaddressablePathError(f"height {parent_height} admits no child {index}")


def canonical_tree(root_height: ExtHeight) -> HeightTree:
    """The canonical tree: under a successor a+1 every non-central child has
    height a; under a limit, child n has the n-th fundamental-sequence value;
    under infinity, every non-central child has height infinity."""
    if root_height.is_minus_one:
        raise DomainError("root height -1 is not a tree")
    return HeightTree(root_height)


def tree_with_exceptions(root_height: ExtHeight, extra: Iterable[ExtHeight]) -> HeightTree:
    """Canonical tree with finitely many extra root children of lower height.

    The extra children occupy indices 1..k (sorted ascending so child heights
    stay nondecreasing); the regular tail starts at index k+1.  Below the
    root the tree is canonical.
    """
    kind = classify_kind(root_height)
    if kind not in (Kind.SUCCESSOR, Kind.INFINITY):
        raise DomainError("exceptional children need a successor or infinite root height")
    extra = tuple(sorted(extra, key=cmp_to_key(compare)))
    tail_height = INFINITY if kind is Kind.INFINITY else height_minus_one(root_height)
    for h in extra:
        if h.is_minus_one or not compare(h, tail_height) < 0:
            raise DomainError("exceptional heights must lie in [0, root-1)")

    def rule(path: NodePath, parent_height: ExtHeight, index: int) -> ExtHeight:
        if path == ():
            if index <= len(extra):
                return extra[index - 1]
            return tail_height
        return _canonical_child_height(path, parent_height, index)

    def exceptional(path: NodePath) -> tuple[int, ...]:
        return tuple(range(1, len(extra) + 1)) if path == () else ()

    tree = HeightTree(root_height, rule, exceptional, monotone_children=True,
                      label=f"tree({root_height})+{len(extra)} extra")
    return tree


def custom_tree(
    root_height: ExtHeight,
    rule: ChildRule,
    monotone_children: bool = False,
    label: str = "custom",
) -> HeightTree:
    """Fully custom child-height rule, mainly for building counterexamples."""
    return HeightTree(root_height, rule, None, monotone_children, label)


@dataclass(frozen=True)
class TreeView:
    """A tree or one of its subtrees, addressed relative to `base`."""

    tree: HeightTree
    base: NodePath = ()

    def abs_path(self, rel: NodePath) -> NodePath:
        return self.base + tuple(rel)

    def height(self, rel: NodePath) -> ExtHeight:
        return self.tree.height(self.abs_path(rel))

    @property
    def root_height(self) -> ExtHeight:
        return self.tree.height(self.base)

    def child_height(self, rel: NodePath, index: int) -> ExtHeight:
        return self.tree.height(self.abs_path(rel) + (index,))

    def single_child(self, rel: NodePath) -> bool:
        return self.tree.single_child(self.abs_path(rel))

    def exceptional(self, rel: NodePath) -> tuple[int, ...]:
        return self.tree.exceptional(self.abs_path(rel))


class Norm(Protocol):
    """Node norm: non-negative rationals, zero exactly on height -1 nodes."""

    def value(self, path: NodePath) -> Fraction: ...

    def at_least(self, epsilon: Fraction) -> frozenset[NodePath] | None:
        """The exact set {x : |x| >= epsilon}, or None when it is infinite."""
        ...


class TableNorm:
    """Explicit norm table with a default for unlisted nodes."""

    def __init__(self, entries: dict[NodePath, Fraction], default: Fraction = Fraction(0)):
        self.entries = {tuple(k): Fraction(v) for k, v in entries.items()}
        self.default = Fraction(default)

    def value(self, path: NodePath) -> Fraction:
        return self.entries.get(tuple(path), self.default)

    def at_least(self, epsilon: Fraction) -> frozenset[NodePath] | None:
        if self.default >= epsilon:
            return None
        return frozenset(p for p, v in self.entries.items() if v >= epsilon)


@dataclass(frozen=True)
class NormedHeightTree:
    tree: HeightTree
    norm: Norm


def iter_window(tree: HeightTree, depth: int, breadth: int) -> Iterator[NodePath]:
    """All addressable paths of length <= depth with child indices <= breadth
    (single-child nodes contribute only their central chain)."""
    if depth < 0:
        return
    stack: list[NodePath] = [()]
    while stack:
        path = stack.pop()
        yield path
        if len(path) == depth:
            continue
        top = breadth if not tree.single_child(path) else 0
        for index in range(top, -1, -1):
            stack.append(path + (index,))


def canonical_ultrametric(normed: NormedHeightTree, a: Branch, b: Branch) -> Fraction:
    """Max of the norms of the two divergence successors below the meet."""
    if a == b:
        return Fraction(0)
    join = meet(a, b)
    child_a = join + (a.index_at(len(join)),)
    child_b = join + (b.index_at(len(join)),)
    return max(normed.norm.value(child_a), normed.norm.value(child_b))


def verify_height_tree_axioms(tree: HeightTree, depth: int, breadth: int) -> VerificationReport:
    """Check the height-tree axioms on the (depth, breadth) window.

    Verified per node: the central child is the unique height -1 successor;
    chain nodes have no other children; infinite-height nodes have height
    infinity on every non-exceptional sampled child; for countable positive
    heights the children's heights+1 stay <= the node's height, successors
    attain it, and limits climb past every fundamental-sequence stage that
    the breadth can witness.  The window can falsify, never fully certify.
    """
    if depth < 1 or breadth < 1:
        raise DomainError("depth and breadth must be >= 1")
    report = VerificationReport(
        "height-tree-axioms",
        f"{tree.label}, depth<={depth}, children<={breadth}",
    )
    for path in iter_window(tree, depth, breadth):
        node_height = tree.height(path)
        where = path_str(path)
        central = tree.child_height(path, 0)
        report.add(f"central child of {where}", central.is_minus_one,
                   f"height {central}")
        if tree.single_child(path):
            try:
                tree.child_height(path, 1)
                report.add(f"chain node {where} has a single child", False,
                           "child index 1 is addressable")
            except UnaddressablePathError:
                report.add(f"chain node {where} has a single child", True)
            continue
        exceptional = set(tree.exceptional(path))
        samples = {
            index: tree.child_height(path, index) for index in range(1, breadth + 1)
        }
        bad_central = [i for i, h in samples.items() if h.is_minus_one]
        report.add(f"unique central child of {where}", not bad_central,
                   f"also height -1 at indices {bad_central}" if bad_central else "")
        kind = classify_kind(node_height)
        if kind is Kind.INFINITY:
            stray = [i for i, h in samples.items()
                     if not h.is_infinity and i not in exceptional]
            report.add(f"infinite tail of {where}", not stray,
                       f"non-infinite children at {stray}" if stray else "")
            continue
        over = [i for i, h in samples.items() if not compare(h, node_height) < 0]
        report.add(f"children below {where}", not over,
                   f"height not decreased at {over}" if over else "")
        if over:
            continue
        if kind is Kind.SUCCESSOR:
            target = height_minus_one(node_height)
            tail = [i for i, h in samples.items() if i not in exceptional]
            attained = any(samples[i] == target for i in tail)
            stray = [i for i in tail if samples[i] != target]
            report.add(f"successor level attained at {where}", attained and not stray,
                       f"tail heights off {target} at {stray}" if stray else "")
        elif kind is Kind.LIMIT:
            failures = []
            for stage in range(1, breadth + 1):
                bound = fundamental_sequence(node_height, stage)
                if not any(not compare(h, bound) < 0 for h in samples.values()):
                    failures.append(stage)
            report.add(f"limit climb at {where}", not failures,
                       f"no child reaches stage(s) {failures}" if failures else "")
    return report


def verify_norm_axioms(normed: NormedHeightTree, epsilon: Fraction) -> VerificationReport:
    """Check the norm axioms with the finiteness test done exactly at epsilon.

    Monotonicity along ancestry and the zero-iff-height -1 law are checked on
    the enumerated support plus a one-step frontier; {|x| >= epsilon} must be
    enumerable and every member must really clear epsilon.
    """
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    tree, norm = normed.tree, normed.norm
    report = VerificationReport("norm-axioms", f"{tree.label}, epsilon={epsilon}")
    support = norm.at_least(epsilon)
    if support is None:
        report.add(f"{{|x| >= {epsilon}}} is finite", False,
                   "norm admits an infinite set above epsilon")
        return report
    report.add(f"{{|x| >= {epsilon}}} is finite", True, f"{len(support)} nodes")
    wrong = sorted(p for p in support if norm.value(p) < epsilon)
    report.add("support values clear epsilon", not wrong,
               f"below epsilon at {[path_str(p) for p in wrong]}" if wrong else "")
    probes: set[NodePath] = set(support)
    for path in support:
        for depth in range(len(path)):
            probes.add(path[:depth])
        probes.add(path + (0,))
        if not tree.single_child(path):
            probes.add(path + (1,))
    mono_bad, zero_bad = [], []
    for path in sorted(probes):
        value = norm.value(path)
        height = tree.height(path)
        if (value == 0) != height.is_minus_one:
            zero_bad.append(path)
        if path and norm.value(path[:-1]) < value:
            mono_bad.append(path)
    report.add("norm is monotone along ancestry", not mono_bad,
               f"child exceeds parent at {[path_str(p) for p in mono_bad]}" if mono_bad else "")
    report.add("norm vanishes exactly at height -1", not zero_bad,
               f"violated at {[path_str(p) for p in zero_bad]}" if zero_bad else "")
    return report


def verify_ultrametric_axioms(
    distance: Callable[[object, object], Fraction], points: Iterable
) -> VerificationReport:
    """Symmetry, identity of indiscernibles, and the strong triangle inequality
    over every triple of the given finite point set, in exact rationals."""
    pts = sorted(set(points), key=repr)
    if not pts:
        raise DomainError("need at least one point")
    report = VerificationReport("ultrametric-axioms", f"{len(pts)} points, all triples")
    sym_bad = id_bad = 0
    cache: dict[tuple[int, int], Fraction] = {}
    for i, p in enumerate(pts):
        for j, q in enumerate(pts):
            if j < i:
                continue
            d_pq = distance(p, q)
            if d_pq != distance(q, p):
                sym_bad += 1
            if (d_pq == 0) != (p == q) or d_pq < 0:
                id_bad += 1
            cache[(i, j)] = cache[(j, i)] = d_pq
    report.add("symmetry", sym_bad == 0, f"{sym_bad} asymmetric pairs" if sym_bad else "")
    report.add("zero exactly on the diagonal", id_bad == 0,
               f"{id_bad} offending pairs" if id_bad else "")
    violations = 0
    witness = ""
    n = len(pts)
    for i in range(n):
        for k in range(n):
            d_ik = cache[(i, k)]
            for j in range(n):
                if max(cache[(i, j)], cache[(j, k)]) < d_ik:
                    violations += 1
                    if not witness:
                        witness = f"d({pts[i]},{pts[k]})={d_ik} via {pts[j]}"
    report.add("strong triangle inequality", violations == 0,
               f"{violations} violating triples; first {witness}" if violations else "")
    return report
