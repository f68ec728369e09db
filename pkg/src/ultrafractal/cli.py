"""Batch command-line front end.

The CLI is a thin client of the service layer: arguments become the same
pydantic request models the HTTP endpoints take, handlers run in process by
default, and `--server URL` sends the identical request to a running service
instead.  Exit codes: 0 success or all-pass (classification answers are
always 0), 1 verification failure or a refused limit height, 2 usage, 3 cap
exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from .errors import (
    CapExceededError,
    DomainError,
    NotSuccessorError,
    OrdinalParseError,
    UltrafractalError,
)
from .service import handlers, models

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # keep argparse's exit code 2
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(sub: argparse.ArgumentParser, formats: tuple[str, ...]) -> None:
    sub.add_argument("--format", choices=formats, default="text")
    sub.add_argument("--server", default=None,
                     help="send the request to a running service at this URL")


def _add_target(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--space", default=None,
                     help="space literal: ordinal (meaning [0,gamma]) or 'cantor'")
    sub.add_argument("--height", default=None, help="tree root height literal")


def _add_caps(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--level-cap", type=int, default=64)
    sub.add_argument("--net-cap", type=int, default=10 ** 6)
    sub.add_argument("--word-cap", type=int, default=20)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ultrafractal",
                     description="Classify, build and verify self-similar "
                                 "structure on zero-dimensional compact spaces.")
    subs = parser.add_subparsers(dest="verb", required=True)

    classify = subs.add_parser("classify", help="decide whether a space is self-similar")
    classify.add_argument("space", help="ordinal literal or 'cantor'")
    _add_common(classify, ("text", "json"))

    tree = subs.add_parser("tree", help="export a truncated canonical height tree")
    tree.add_argument("--height", required=True)
    tree.add_argument("--depth", type=int, default=3)
    tree.add_argument("--breadth", type=int, default=6)
    tree.add_argument("--lambda", dest="lam", default="1/2")
    tree.add_argument("--no-norms", action="store_true")
    _add_common(tree, ("text", "json", "dot"))

    ifs = subs.add_parser("ifs", help="build a contracting system and iterate it")
    _add_target(ifs)
    ifs.add_argument("--lambda", dest="lam", default="1/2")
    ifs.add_argument("--iterate", type=int, default=6)
    _add_caps(ifs)
    _add_common(ifs, ("text", "json", "dot"))

    verify = subs.add_parser("verify", help="run verification suites")
    _add_target(verify)
    verify.add_argument("--suite", action="append", default=None,
                        help="comma-separated suite names or 'all' "
                             f"(valid: {', '.join(models.SUITE_NAMES)})")
    verify.add_argument("--lambda", dest="lam", default="1/2")
    verify.add_argument("--depth", type=int, default=4)
    verify.add_argument("--breadth", type=int, default=8)
    verify.add_argument("--levels", type=int, default=6)
    verify.add_argument("--epsilon", default=None)
    _add_caps(verify)
    _add_common(verify, ("text", "json"))

    iterate = subs.add_parser("iterate", help="fixed points and contraction orbits")
    _add_target(iterate)
    iterate.add_argument("--lambda", dest="lam", default="1/2")
    iterate.add_argument("--tol", default="1/1024")
    iterate.add_argument("--steps", type=int, default=10)
    iterate.add_argument("--seed", action="append", default=None,
                         help="branch stem as comma-separated indices, or 'central'")
    _add_caps(iterate)
    _add_common(iterate, ("text", "json"))

    serve = subs.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


# --- rendering ---------------------------------------------------------------


def _print_classify(response: models.ClassifyResponse) -> None:
    print(f"{response.verdict} (height {response.height}, {response.height_kind})")
    print(f"multiplicity {response.multiplicity}")


def _print_tree(response: models.TreeResponse) -> None:
    print(f"root height {response.root_height}")
    for node in response.nodes:
        path = "[" + ",".join(str(i) for i in node.path) + "]"
        line = f"  {path:<16} h={node.height}"
        if node.norm is not None:
            line += f"  |x|={node.norm}"
        print(line)


def _print_ifs(response: models.IfsResponse) -> None:
    kind = "glued" if response.glued else "unital"
    print(f"system for {response.target}: {kind}, lambda={response.lam}, "
          f"{response.pieces} piece(s), maps {', '.join(response.map_names)}")
    if response.level_sizes is not None:
        print("level sizes |T_n|: " + ", ".join(str(s) for s in response.level_sizes))
    else:
        for i, sizes in enumerate(response.piece_level_sizes or []):
            print(f"piece {i} level sizes: " + ", ".join(str(s) for s in sizes))
    print("step  net size  d_H(net(k-1), net(k))")
    for k, distance in enumerate(response.step_distances, start=1):
        print(f"{k:>4}  {response.net_sizes[k]:>8}  {distance}")
    print(f"contraction verified: {'yes' if response.contraction_ok else 'NO'}")


def _print_verify(response: models.VerifyResponse) -> None:
    print(f"verification of {response.target} (lambda={response.lam})")
    for suite in response.suites:
        mark = "pass" if suite.passed else "FAIL"
        print(f"  [{mark}] {suite.name:<16} {suite.checks_run:>6} checks  ({suite.scope})")
        for failure in suite.failures[:8]:
            print(f"         - {failure.label}: {failure.detail}")
    print("all suites passed" if response.all_passed else "SOME SUITES FAILED")


def _print_iterate(response: models.IterateResponse) -> None:
    print(f"fixed points for {response.target} (lambda={response.lam}, tol={response.tol})")
    for fp in response.fixed_points:
        stem = "[" + ",".join(str(i) for i in fp.branch) + "]"
        print(f"  Fix({fp.map}) = branch{stem}")
    for orbit in response.orbits:
        seed = "[" + ",".join(str(i) for i in orbit.seed) + "]"
        tail = " -> ".join(orbit.distances_to_fix)
        mark = "ok" if orbit.reached_tol else "NOT within tol"
        print(f"  {orbit.map} from branch{seed}: d(phi^k seed, Fix) = {tail}  [{mark}]")


# --- request construction ----------------------------------------------------


def _caps_model(args: argparse.Namespace) -> models.CapsModel:
    return models.CapsModel(level_cap=args.level_cap, net_cap=args.net_cap,
                            word_cap=args.word_cap)


def _parse_seeds(raw: list[str] | None) -> list[list[int]] | None:
    if raw is None:
        return None
    seeds = []
    for item in raw:
        item = item.strip()
        if item in ("central", ""):
            seeds.append([])
            continue
        try:
            seeds.append([int(part) for part in item.split(",")])
        except ValueError as exc:
            raise DomainError(f"bad seed {item!r}: {exc}") from exc
    return seeds


def _suites(raw: list[str] | None) -> list[str]:
    if not raw:
        return ["all"]
    names: list[str] = []
    for item in raw:
        names.extend(part.strip() for part in item.split(",") if part.strip())
    return names or ["all"]


def _remote(server: str, path: str, payload: dict) -> dict:
    import httpx

    with httpx.Client(base_url=server, timeout=120.0) as client:
        response = client.post(path, json=payload)
    body = response.json()
    if response.status_code >= 400:
        code = body.get("error", "bad_request") if isinstance(body, dict) else "bad_request"
        detail = body.get("detail", str(body)) if isinstance(body, dict) else str(body)
        if code == "not_successor":
            raise NotSuccessorError(detail)
        if code == "cap_exceeded":
            raise CapExceededError(detail)
        raise DomainError(detail)
    return body


def _run(args: argparse.Namespace, path: str, request_model, handler: Callable,
         response_cls):
    if args.server:
        body = _remote(args.server, path, request_model.model_dump())
        return response_cls.model_validate(body)
    return handler(request_model)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        if args.verb == "serve":
            import uvicorn

            uvicorn.run("ultrafractal.service.app:app", host=args.host, port=args.port)
            return EXIT_OK

        if args.verb == "classify":
            request = models.ClassifyRequest(space=args.space)
            response = _run(args, "/classify", request, handlers.handle_classify,
                            models.ClassifyResponse)
            if args.format == "json":
                print(response.model_dump_json(indent=2))
            else:
                _print_classify(response)
            return EXIT_OK

        if args.verb == "tree":
            request = models.TreeRequest(
                height=args.height, depth=args.depth, breadth=args.breadth,
                lam=args.lam, include_norms=not args.no_norms,
            )
            if args.format == "dot":
                print(_tree_dot_local(args, request), end="")
                return EXIT_OK
            response = _run(args, "/tree", request, handlers.handle_tree,
                            models.TreeResponse)
            if args.format == "json":
                print(response.model_dump_json(indent=2))
            else:
                _print_tree(response)
            return EXIT_OK

        if args.verb == "ifs":
            request = models.IfsRequest(
                space=args.space, height=args.height, lam=args.lam,
                iterate=args.iterate, caps=_caps_model(args),
            )
            if args.format == "dot":
                print(_ifs_dot_local(request), end="")
                return EXIT_OK
            response = _run(args, "/ifs", request, handlers.handle_ifs,
                            models.IfsResponse)
            if args.format == "json":
                print(response.model_dump_json(indent=2))
            else:
                _print_ifs(response)
            return EXIT_OK

        if args.verb == "verify":
            request = models.VerifyRequest(
                space=args.space, height=args.height, suites=_suites(args.suite),
                lam=args.lam, depth=args.depth, breadth=args.breadth,
                levels=args.levels, epsilon=args.epsilon, caps=_caps_model(args),
            )
            response = _run(args, "/verify", request, handlers.handle_verify,
                            models.VerifyResponse)
            if args.format == "json":
                print(response.model_dump_json(indent=2))
            else:
                _print_verify(response)
            return EXIT_OK if response.all_passed else EXIT_FAIL

        if args.verb == "iterate":
            request = models.IterateRequest(
                space=args.space, height=args.height, lam=args.lam, tol=args.tol,
                steps=args.steps, seeds=_parse_seeds(args.seed), caps=_caps_model(args),
            )
            response = _run(args, "/iterate", request, handlers.handle_iterate,
                            models.IterateResponse)
            if args.format == "json":
                print(response.model_dump_json(indent=2))
            else:
                _print_iterate(response)
            ok = all(orbit.reached_tol for orbit in response.orbits)
            return EXIT_OK if ok else EXIT_FAIL

        raise DomainError(f"unknown verb {args.verb!r}")
    except NotSuccessorError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (OrdinalParseError, DomainError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UltrafractalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def _tree_dot_local(args: argparse.Namespace, request: models.TreeRequest) -> str:
    from fractions import Fraction

    from .exports import tree_dot
    from .ifs import build_ifs_unital
    from .ordinals import Kind, classify_kind, parse_ordinal
    from .trees import canonical_tree

    height = parse_ordinal(request.height)
    tree = canonical_tree(height)
    norm = None
    if request.include_norms and classify_kind(height) is not Kind.LIMIT:
        norm = build_ifs_unital(height, Fraction(request.lam)).norm
    return tree_dot(tree, request.depth, request.breadth, norm)


def _ifs_dot_local(request: models.IfsRequest) -> str:
    from .exports import level_dot
    from .ifs import GluedIfs
    from .service.handlers import _build_system, _caps, _resolve_target, parse_rational

    _, space, height = _resolve_target(request.space, request.height)
    system = _build_system(space, height, parse_rational(request.lam, "lambda"),
                           _caps(request.caps))
    if isinstance(system, GluedIfs):
        raise DomainError("dot export is available for single-piece systems only")
    return level_dot(system, request.iterate)


if __name__ == "__main__":
    sys.exit(main())
