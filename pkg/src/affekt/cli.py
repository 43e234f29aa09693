"""Command-line entry points: ingest, classify, metrics, serve.

Typical flow against a store root:

    affekt ingest   --in raw.jsonl --format jsonl --out store/corpus
    affekt classify --corpus store/corpus/corpus.jsonl --run-dir store/runs --mock
    affekt metrics  --run-dir store/runs/<ts> --corpus store/corpus/corpus.jsonl
    affekt serve    --store store --bind 127.0.0.1:8000
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .ingest import IngestConfig, ingest, load_corpus, write_corpus
from .metrics import MatchConfig, write_metric_artifacts
from .orchestrator.mock import MockBehavior, start_mock_pool
from .orchestrator.runner import RunnerConfig, load_annotations, resume, run_batch
from .taxonomy import Taxonomy, default_taxonomy

ENDPOINTS_ENV = "AFFEKT_ENDPOINTS"


def _cmd_ingest(args) -> int:
    config = IngestConfig(
        min_tokens=args.min_tokens,
        min_chars=args.min_chars,
        min_language_ratio=args.lang_ratio,
        language_filter=not args.no_lang_filter,
    )
    corpus, report = ingest(args.infile, fmt=args.format, config=config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_corpus(corpus, out / "corpus.jsonl")
    with open(out / "report.json", "w", encoding="utf-8") as fh:
        json.dump(report.to_json(), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    print(f"ingested {report.kept_count}/{report.input_count} records -> {out / 'corpus.jsonl'}")
    for reason, count in report.dropped.items():
        if count:
            print(f"  dropped {count:>6}  {reason}")
    return 0


def _endpoint_urls(args) -> list[str]:
    raw = args.endpoints or os.environ.get(ENDPOINTS_ENV, "")
    urls = [u.strip() for u in raw.split(",") if u.strip()]
    return urls


def _cmd_classify(args) -> int:
    config = RunnerConfig(
        workers=args.workers,
        checkpoint_every=args.checkpoint_every,
        model_id=args.model,
        timeout_s=args.timeout,
    )
    servers = []
    try:
        if args.mock:
            behavior = MockBehavior(latency_ms=args.mock_latency_ms)
            servers = start_mock_pool(args.mock_endpoints, behavior)
            urls = [s.base_url for s in servers]
            config.model_id = args.model if args.model != "local-llm" else "mock-emotion"
        else:
            urls = _endpoint_urls(args)
            if not urls:
                print(
                    f"no endpoints: pass --endpoints or set {ENDPOINTS_ENV} (or use --mock)",
                    file=sys.stderr,
                )
                return 2
        pool = config.build_pool(urls)

        if args.resume:
            report = resume(args.resume, pool, config)
        else:
            if not args.corpus:
                print("--corpus is required unless --resume is given", file=sys.stderr)
                return 2
            corpus = load_corpus(args.corpus)
            report = run_batch(corpus, pool, config, args.run_dir, corpus_path=args.corpus)
    finally:
        for server in servers:
            server.stop()

    print(json.dumps(report.to_json(), indent=2))
    return 0


def _cmd_metrics(args) -> int:
    corpus = load_corpus(args.corpus)
    annotations = load_annotations(args.run_dir)
    taxonomy = Taxonomy.load(args.taxonomy) if args.taxonomy else default_taxonomy()
    out_dir = Path(args.out) if args.out else Path(args.run_dir) / "metrics"
    match_config = MatchConfig(
        window_hours=args.window_hours,
        similarity_threshold=args.similarity_threshold,
    )
    artifacts = write_metric_artifacts(corpus, annotations, taxonomy, out_dir, match_config)
    fine = artifacts["distribution"]["fine"]
    print(f"wrote 5 artifacts -> {out_dir}")
    print(f"  annotations: {fine['total']}")
    print(f"  outlets:     {len(artifacts['profiles']['profiles'])}")
    print(f"  api:         {artifacts['polarization']['api']:.4f}")
    print(f"  matches:     {artifacts['polarization']['matched_story_count']}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app
    from .store import open_store

    taxonomy = Taxonomy.load(args.taxonomy) if args.taxonomy else default_taxonomy()
    store = open_store(args.store, taxonomy=taxonomy)
    host, _, port = args.bind.rpartition(":")
    app = create_app(store)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="affekt")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="clean and deduplicate a raw news file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--min-tokens", type=int, default=3)
    p.add_argument("--min-chars", type=int, default=10)
    p.add_argument("--lang-ratio", type=float, default=0.7)
    p.add_argument("--no-lang-filter", action="store_true")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("classify", help="run checkpointed batch inference")
    p.add_argument("--corpus", help="canonical corpus JSONL")
    p.add_argument("--endpoints", help="comma-separated endpoint base URLs")
    p.add_argument("--workers", type=int, default=6)
    p.add_argument("--run-dir", default="runs", help="parent directory for run folders")
    p.add_argument("--resume", help="existing run directory to continue")
    p.add_argument("--mock", action="store_true", help="spin up local mock endpoints")
    p.add_argument("--mock-endpoints", type=int, default=3)
    p.add_argument("--mock-latency-ms", type=float, default=0.0)
    p.add_argument("--model", default="local-llm")
    p.add_argument("--checkpoint-every", type=int, default=500)
    p.add_argument("--timeout", type=float, default=30.0)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("metrics", help="compute aggregate artifacts for a run")
    p.add_argument("--run-dir", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", help="artifact directory (default: <run-dir>/metrics)")
    p.add_argument("--taxonomy", help="override taxonomy table")
    p.add_argument("--window-hours", type=float, default=48.0)
    p.add_argument("--similarity-threshold", type=float, default=0.6)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("serve", help="serve the read-only analytics API")
    p.add_argument("--store", required=True, help="store root directory")
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--taxonomy", help="override taxonomy table")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
