"""Command-line entry points.

    storyforge run   --brief brief.json [--config cfg.json] --out DIR
    storyforge serve [--config cfg.json] [--host H] [--port P]
    storyforge eval  --scores scores.csv [--moderation mod.csv] ...

Exit codes: 0 success, 2 validation failure, 3 unsafe content,
4 backend failure, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..errors import (
    BriefValidationError,
    ConfigurationError,
    GatewayError,
    GenerationError,
    ModerationProtocolError,
    PipelineStageError,
    StoryforgeError,
    UnsafeContentError,
)
from ..evalharness import (
    Granularity,
    ReportSpec,
    build_report,
    load_moderation,
    load_scores,
)
from ..narrative import brief_from_dict, validate_brief
from ..pipeline import manifest_to_bytes
from ..store import MemoryBlobStore
from .config import load_config
from .core import StoryService

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_UNSAFE = 3
EXIT_BACKEND = 4

log = logging.getLogger("storyforge.cli")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except BriefValidationError as exc:
        for issue in exc.issues:
            print(f"validation: {issue}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConfigurationError as exc:
        print(f"configuration: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except StoryforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _classify(exc)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="storyforge")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the pipeline synchronously on a brief file")
    run.add_argument("--brief", required=True, type=Path)
    run.add_argument("--config", type=Path, default=None)
    run.add_argument("--out", required=True, type=Path)
    run.set_defaults(handler=cmd_run)

    serve = sub.add_parser("serve", help="start the HTTP job service")
    serve.add_argument("--config", type=Path, default=None)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=cmd_serve)

    ev = sub.add_parser("eval", help="compute evaluation statistics from score files")
    ev.add_argument("--scores", type=Path, default=None)
    ev.add_argument("--moderation", type=Path, default=None)
    ev.add_argument(
        "--granularity",
        choices=[g.value for g in Granularity],
        default=Granularity.PER_CRITERION.value,
    )
    ev.add_argument("--pairs", default="", help="comma-separated A:B subject pairs")
    ev.add_argument("--means", default="", help="comma-separated subjects, or 'all'")
    ev.add_argument("--sources", default="", help="comma-separated moderation sources, or 'all'")
    ev.add_argument("--spec", type=Path, default=None, help="full report spec as JSON")
    ev.add_argument("--out", type=Path, default=None)
    ev.set_defaults(handler=cmd_eval)

    return parser


def _classify(exc: StoryforgeError) -> int:
    causes: list[BaseException] = [exc]
    if isinstance(exc, PipelineStageError):
        causes.append(exc.cause)
    for cause in causes:
        if isinstance(cause, BriefValidationError):
            return EXIT_VALIDATION
        if isinstance(cause, (UnsafeContentError, ModerationProtocolError)):
            return EXIT_UNSAFE
        if isinstance(cause, (GatewayError, GenerationError)):
            return EXIT_BACKEND
    return EXIT_ERROR


def cmd_run(args: argparse.Namespace) -> int:
    try:
        brief_raw = json.loads(args.brief.read_text(encoding="utf-8"))
    except FileNotFoundError:
        print(f"brief file not found: {args.brief}", file=sys.stderr)
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        print(f"brief file is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    config = load_config(args.config)
    brief = brief_from_dict(brief_raw)
    validate_brief(brief)  # fails before any backend call or output write

    from .config import build_pipeline

    store = MemoryBlobStore()
    pipeline = build_pipeline(config, store, on_stage=lambda s: log.info("stage: %s", s))
    package = pipeline.run(brief)

    out_dir: Path = args.out
    assets_dir = out_dir / "assets"
    assets_dir.mkdir(parents=True, exist_ok=True)
    for asset in [package.narration] + [
        a for seg in package.segments for a in (seg.video, seg.music)
    ]:
        path = assets_dir / f"{asset.payload_ref}.{asset.format}"
        path.write_bytes(store.get(asset.payload_ref))
    (out_dir / "manifest.json").write_bytes(manifest_to_bytes(package.manifest))
    print(f"package written to {out_dir} ({len(package.segments)} segments)")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    service = StoryService(load_config(args.config))
    app = create_app(service)
    try:
        uvicorn.run(app, host=args.host, port=args.port)
    finally:
        service.close()
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    records = load_scores(args.scores) if args.scores else []
    moderation = load_moderation(args.moderation) if args.moderation else []

    if args.spec is not None:
        spec = ReportSpec.from_dict(json.loads(args.spec.read_text(encoding="utf-8")))
    else:
        pairs = []
        for chunk in filter(None, (p.strip() for p in args.pairs.split(","))):
            if ":" not in chunk:
                print(f"--pairs entries must look like A:B, got {chunk!r}", file=sys.stderr)
                return EXIT_VALIDATION
            a, b = chunk.split(":", 1)
            pairs.append((a.strip(), b.strip()))
        if args.means == "all":
            means = tuple(sorted({r.subject_id for r in records}))
        else:
            means = tuple(filter(None, (s.strip() for s in args.means.split(","))))
        if args.sources == "all":
            sources = tuple(sorted({r.source for r in moderation}))
        else:
            sources = tuple(filter(None, (s.strip() for s in args.sources.split(","))))
        spec = ReportSpec(
            granularity=Granularity(args.granularity),
            pairs=tuple(pairs),
            means_subjects=means,
            moderation_sources=sources,
        )

    report = build_report(records, spec, moderation)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        for name, content in report.files.items():
            (args.out / name).write_text(content, encoding="utf-8")
        (args.out / "report.txt").write_text(report.text + "\n", encoding="utf-8")
        print(f"report written to {args.out}")
    else:
        print(report.text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
