"""Command-line entry point: run the HTTP API server."""

from __future__ import annotations

import argparse
import os
from pathlib import Path
from typing import Optional

from .gateway import LlmGateway
from .graph import IdFactory, TickClock
from .papers import PaperLibrary
from .server import ProjectStore, create_app


def build_app(port: int = 8080, data_dir: Optional[str] = None,
              cors_origin: Optional[str] = None, seed: Optional[int] = None,
              deterministic_clock: bool = False):
    gateway = LlmGateway.from_env()
    library = PaperLibrary.from_env(gateway)
    clock = TickClock() if deterministic_clock else None
    store = ProjectStore(data_dir=Path(data_dir) if data_dir else None,
                         id_factory=IdFactory(seed), clock=clock)
    origins = [cors_origin] if cors_origin else None
    return create_app(store=store, gateway=gateway, library=library,
                      cors_origins=origins)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ideaforge",
        description="Research idea development service (HTTP JSON API)")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the API server")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--data-dir", default=os.environ.get("IDEAFORGE_DATA_DIR", "data"),
                       help="directory for project documents")
    serve.add_argument("--cors-origin", default=os.environ.get("IDEAFORGE_CORS_ORIGIN"),
                       help="allowed origin for the canvas UI")
    serve.add_argument("--seed", type=int, default=None,
                       help="seed identifier generation (deterministic runs)")
    serve.add_argument("--deterministic-clock", action="store_true",
                       help="tick a fixed clock instead of wall time")

    args = parser.parse_args(argv)
    if args.command == "serve":
        import uvicorn
        app = build_app(port=args.port, data_dir=args.data_dir,
                        cors_origin=args.cors_origin, seed=args.seed,
                        deterministic_clock=args.deterministic_clock)
        uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
