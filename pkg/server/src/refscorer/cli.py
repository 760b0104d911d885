"""Command-line entry points for the reference scorer server."""

from __future__ import annotations

import argparse
import sys

from refscorer.fixtures import record_fixtures
from refscorer.model import load_or_train
from refscorer.server import serve_forever

DEFAULT_CACHE = "refscorer-cache"


def _cmd_serve(args) -> int:
    backend = load_or_train(args.model, device=args.device)
    print(
        f"backend: {backend.name} vocab={len(backend.tokenizer)} "
        f"fingerprint={backend.fingerprint}",
        file=sys.stderr,
    )
    print(f"serving on {args.host}:{args.port}", file=sys.stderr)
    serve_forever(backend, args.host, args.port)
    return 0


def _cmd_record_fixtures(args) -> int:
    backend = load_or_train(args.model, device=args.device)
    written = record_fixtures(args.requests, args.out, backend)
    print(f"wrote {len(written)} fixture files to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="refscorer")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="serve the model over the /v1 wire protocol")
    p.add_argument("--model", default=DEFAULT_CACHE,
                   help="model cache directory (trained on first use)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8472)
    p.add_argument("--device", default="cpu")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("record-fixtures",
                       help="replay a JSON list of score requests into fixture files")
    p.add_argument("--requests", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--model", default=DEFAULT_CACHE)
    p.add_argument("--device", default="cpu")
    p.set_defaults(func=_cmd_record_fixtures)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
