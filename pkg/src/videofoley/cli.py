"""Command-line entry points: analyze, generate, export, serve."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from videofoley import pipeline
from videofoley.backends import make_embedder, make_saliency
from videofoley.config import load_config
from videofoley.errors import BackendError, InputError
from videofoley.project import load_project, save_project

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BACKEND = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="videofoley")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="split scenes and rank labels")
    analyze.add_argument("--media", required=True, help="frame directory")
    analyze.add_argument("--catalog", required=True, help="catalog manifest JSON")
    analyze.add_argument("--out", required=True, help="project JSON to write")
    analyze.add_argument("--config", default=None, help="config JSON")
    _backend_args(analyze)

    generate = sub.add_parser("generate", help="render tracks for the current selections")
    generate.add_argument("--project", required=True)
    _backend_args(generate)

    export = sub.add_parser("export", help="write the per-scene stems zip")
    export.add_argument("--project", required=True)
    export.add_argument("--out", required=True)

    serve = sub.add_parser("serve", help="serve the HTTP API and UI")
    serve.add_argument("--project", required=True)
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--frontend", default=None, help="directory of built UI assets")
    _backend_args(serve)

    return parser


def _backend_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--embed-backend",
        default=None,
        help="fixture:FILE or sidecar:CMD (defaults to the project's recorded backend)",
    )
    parser.add_argument(
        "--saliency-backend",
        default=None,
        help="fixture:FILE, occlusion, or sidecar:CMD",
    )


def _run_analyze(args: argparse.Namespace) -> int:
    if not args.embed_backend or not args.saliency_backend:
        raise InputError("analyze requires --embed-backend and --saliency-backend")
    config = load_config(args.config)
    embedder = make_embedder(args.embed_backend, config.prompt_template)
    project = pipeline.analyze(
        media_dir=args.media,
        catalog_path=args.catalog,
        config=config,
        embedder=embedder,
        embed_backend=args.embed_backend,
        saliency_backend=args.saliency_backend,
    )
    save_project(project, args.out)
    print(f"analyzed {len(project.scenes)} scenes -> {args.out}")
    return EXIT_OK


def _run_generate(args: argparse.Namespace) -> int:
    project = load_project(args.project)
    embed_spec = args.embed_backend or project.embed_backend
    saliency_spec = args.saliency_backend or project.saliency_backend
    embedder = make_embedder(embed_spec, project.config.prompt_template)
    saliency = make_saliency(saliency_spec, embedder, project.config.spatial)

    def progress(scene: int, total: int, stage: str) -> None:
        print(f"scene {scene + 1 if scene < total else total} of {total}: {stage}")

    pipeline.generate(project, args.project, embedder, saliency, progress=progress)
    save_project(project, args.project)
    print(f"generated {len(project.generated)} scenes")
    return EXIT_OK


def _run_export(args: argparse.Namespace) -> int:
    project = load_project(args.project)
    out = pipeline.export_stems(project, args.project, args.out)
    print(f"exported stems -> {out}")
    return EXIT_OK


def _run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from videofoley.server import create_app

    project = load_project(args.project)
    embed_spec = args.embed_backend or project.embed_backend
    saliency_spec = args.saliency_backend or project.saliency_backend
    embedder = make_embedder(embed_spec, project.config.prompt_template)
    saliency = make_saliency(saliency_spec, embedder, project.config.spatial)
    frontend = args.frontend or _default_frontend()
    app = create_app(args.project, embedder, saliency, frontend_dir=frontend)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def _default_frontend() -> str | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return str(candidate) if candidate.is_dir() else None


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "analyze": _run_analyze,
        "generate": _run_generate,
        "export": _run_export,
        "serve": _run_serve,
    }
    try:
        return handlers[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
