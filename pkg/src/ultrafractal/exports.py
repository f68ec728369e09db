"""DOT and JSON exports of truncated trees, systems and morphism windows.

Output is deterministic: nodes are emitted in sorted path order and carry no
timestamps, so identical inputs produce byte-identical documents.
"""

from __future__ import annotations

from fractions import Fraction

from .ifs import GluedIfs, IfsSystem
from .trees import HeightTree, NodePath, iter_window, path_str


def _node_id(path: NodePath) -> str:
    return "n" + ("_".join(str(i) for i in path) if path else "root")


def tree_nodes(tree: HeightTree, depth: int, breadth: int, norm=None) -> list[dict]:
    nodes = []
    for path in sorted(iter_window(tree, depth, breadth)):
        entry = {
            "path": list(path),
            "height": tree.height(path).literal(),
        }
        if norm is not None:
            entry["norm"] = str(norm.value(path))
        nodes.append(entry)
    return nodes


def tree_json(tree: HeightTree, depth: int, breadth: int, norm=None) -> dict:
    return {
        "root_height": tree.root_height.literal(),
        "nodes": tree_nodes(tree, depth, breadth, norm),
    }


def tree_dot(tree: HeightTree, depth: int, breadth: int, norm=None) -> str:
    lines = ["digraph height_tree {", "  node [shape=box];"]
    for path in sorted(iter_window(tree, depth, breadth)):
        label = f"{path_str(path)}\\nh={tree.height(path).literal()}"
        if norm is not None:
            label += f"\\n|x|={norm.value(path)}"
        lines.append(f'  {_node_id(path)} [label="{label}"];')
        if path:
            lines.append(f"  {_node_id(path[:-1])} -> {_node_id(path)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


_PALETTE = ["lightblue", "lightgreen", "lightsalmon", "gold", "plum", "khaki",
            "palegreen", "lightcyan", "mistyrose", "wheat"]


def level_dot(system: IfsSystem, n: int) -> str:
    """Level set T_n with nodes colored by the unique covering map."""
    stage = system.levels(n)[n]
    owners: dict[NodePath, str] = {(): system.maps[0].name}
    previous = system.levels(max(n - 1, 0))[max(n - 1, 0)]
    for morphism in system.maps:
        for path in previous:
            owners.setdefault(morphism.apply(path), morphism.name)
    colors = {m.name: _PALETTE[i % len(_PALETTE)] for i, m in enumerate(system.maps)}
    lines = ["digraph level_set {", "  node [shape=box,style=filled];"]
    for path in sorted(stage):
        owner = owners.get(path, system.maps[0].name)
        label = (f"{path_str(path)}\\nlevel {system.first_level(path)}"
                 f"\\nvia {owner}")
        lines.append(f'  {_node_id(path)} [label="{label}",fillcolor="{colors[owner]}"];')
    for path in sorted(stage):
        if path and path[:-1] in stage:
            lines.append(f"  {_node_id(path[:-1])} -> {_node_id(path)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def morphism_window_json(morphism, depth: int, breadth: int) -> list[dict]:
    """[{src_path, dst_path}] over the source window."""
    from .morphisms import _view_window

    rows = []
    for rel in sorted(_view_window(morphism.src, depth, breadth)):
        rows.append({
            "src_path": list(morphism.src.abs_path(rel)),
            "dst_path": list(morphism.dst.abs_path(morphism.apply_rel(rel))),
        })
    return rows
