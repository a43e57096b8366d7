"""Batch command line: classify/order a model file, evaluate it, or serve.

Exit codes: 0 on success, 1 for unreadable or invalid input, 2 when the
input system is over-constrained (a witness subset is printed).  The
CAUSAL_LOOM_LOG environment variable sets the log level.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .dsl import evaluate_forward, parse_model
from .errors import CausalLoomError
from .graphdoc import document_for_system, to_dot, to_json
from .kb import kb_load
from .ordering import causal_ordering, classify, over_constraint_witness, SystemClass

log = logging.getLogger("causal_loom")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_OVER_CONSTRAINED = 2


def _configure_logging() -> None:
    level = os.environ.get("CAUSAL_LOOM_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _load_system(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)
    try:
        return parse_model(text)
    except CausalLoomError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _reject_over_constrained(system) -> None:
    if classify(system) is not SystemClass.OVER_CONSTRAINED:
        return
    witness = over_constraint_witness(system)
    assert witness is not None
    equations, variables = witness
    print("over-constrained")
    print(f"witness equations: {', '.join(sorted(equations))}")
    print(f"witness variables: {', '.join(sorted(variables))}")
    raise SystemExit(EXIT_OVER_CONSTRAINED)


def cmd_order(args: argparse.Namespace) -> int:
    system = _load_system(args.file)
    _reject_over_constrained(system)
    ordering = causal_ordering(system)
    document = document_for_system(system, ordering)
    if args.format == "json":
        sys.stdout.write(to_json(document))
    else:
        sys.stdout.write(to_dot(document))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    system = _load_system(args.file)
    _reject_over_constrained(system)
    ordering = causal_ordering(system)
    try:
        values = evaluate_forward(system, ordering)
    except CausalLoomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for name in sorted(system.variables):
        if name in values:
            print(f"{name} {values[name]:.6g}")
        else:
            print(f"{name} structural-only")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    try:
        with open(args.kb, "rb") as handle:
            kb = kb_load(handle.read())
    except (OSError, CausalLoomError) as exc:
        print(f"error: cannot load knowledge base {args.kb}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        print(f"error: invalid bind address {args.bind!r}, expected host:port", file=sys.stderr)
        return EXIT_ERROR
    app = create_app(kb)
    log.info("serving on %s", args.bind)
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causal-loom",
        description="Causal ordering and model construction for structural equation models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    order = sub.add_parser("order", help="print the causal graph of a model file")
    order.add_argument("file", help="path to a .sem model file")
    order.add_argument("--format", choices=("dot", "json"), default="dot")
    order.set_defaults(func=cmd_order)

    evaluate = sub.add_parser("eval", help="forward-evaluate a model file")
    evaluate.add_argument("file", help="path to a .sem model file")
    evaluate.set_defaults(func=cmd_eval)

    serve = sub.add_parser("serve", help="run the HTTP modeling service")
    serve.add_argument("--kb", required=True, help="path to a knowledge base JSON file")
    serve.add_argument("--bind", default="127.0.0.1:8000", help="host:port to listen on")
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
