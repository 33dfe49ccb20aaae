"""Command-line interface for the extraction pipeline."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import fixtures
from .corpus import (
    BUCKETS,
    SamplePlan,
    TABLE1_PLAN,
    bucket_for,
    case_id_from_filename,
    load_corpus,
    sample_manifest,
)
from .dataset import POLICIES, export
from .errors import ResponseParseError, UketError
from .extraction import (
    lint_record,
    load_records,
    parse_extraction,
    save_record,
)
from .gateway import Gateway, GatewayConfig, ReplayCache
from .prompting import ModelConfig, PromptRegistry, build_request
from .quality import AnnotationStore
from .service import DEFAULT_PORT, ReviewWorkspace, create_app
from .stats import rule21_report, suitability_rate, summarize

logger = logging.getLogger(__name__)


def _load_plan(name: str) -> SamplePlan:
    if name == "table1":
        return TABLE1_PLAN
    path = Path(name)
    if path.exists():
        raw = json.loads(path.read_text(encoding="utf-8"))
        return SamplePlan(tuple((bucket, int(target)) for bucket, target in raw))
    raise UketError(f"unknown plan: {name} (use 'table1' or a JSON plan file)")


def _sample_ids(sample_path: Path) -> list[str]:
    data = json.loads(sample_path.read_text(encoding="utf-8"))
    return data["case_ids"] if isinstance(data, dict) else list(data)


def cmd_ingest(args: argparse.Namespace) -> int:
    docs = load_corpus(args.corpus_dir)
    tallies = {bucket: 0 for bucket in BUCKETS}
    for doc in docs:
        tallies[bucket_for(doc.page_count)] += 1
    if args.json:
        print(json.dumps({"cases": len(docs), "buckets": tallies}, indent=2))
    else:
        print(f"{len(docs)} cases in {args.corpus_dir}")
        for bucket in BUCKETS:
            if tallies[bucket]:
                print(f"  {bucket:>3} page(s): {tallies[bucket]}")
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    docs = load_corpus(args.corpus_dir)
    plan = _load_plan(args.plan)
    manifest = sample_manifest(docs, plan, args.seed)
    args.out.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"sampled {manifest['total']} cases -> {args.out}")
    if manifest["shortfalls"]:
        print(f"shortfalls: {manifest['shortfalls']}")
    return 0


def cmd_prompts(args: argparse.Namespace) -> int:
    roots = [Path(p) for p in args.dir]
    registry = PromptRegistry(extra_roots=roots)
    if args.prompts_command == "list":
        for template_id, version, summary in registry.list_templates():
            print(f"{template_id}/{version}  {summary}")
        return 0
    template_id, _, version = args.template.partition("/")
    template = registry.get(template_id, version or "v1")
    print(template.text, end="" if template.text.endswith("\n") else "\n")
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    docs = {doc.case_id: doc for doc in load_corpus(args.corpus_dir)}
    case_ids = _sample_ids(args.sample) if args.sample else sorted(docs)
    registry = PromptRegistry(
        extra_roots=[Path(p) for p in args.prompt_dir]
    )
    template_id, _, version = args.template.partition("/")
    version = version or "v1"
    config = GatewayConfig.from_file(args.config) if args.config else GatewayConfig()
    gateway = Gateway(config=config, cache=ReplayCache(args.cache))
    model = ModelConfig(model_id=args.model, temperature=args.temperature)
    args.out.mkdir(parents=True, exist_ok=True)
    failures: list[str] = []
    for case_id in case_ids:
        doc = docs.get(case_id)
        if doc is None:
            failures.append(f"{case_id}: not in corpus")
            continue
        request = build_request(registry, template_id, version, doc, model)
        try:
            result = gateway.complete(request, args.mode)
            record = parse_extraction(case_id, result.raw_text)
        except (UketError, ResponseParseError) as exc:
            failures.append(f"{case_id}: {exc}")
            continue
        save_record(record, args.out)
        if args.responses_out:
            args.responses_out.mkdir(parents=True, exist_ok=True)
            name = f"{case_id.replace('/', '_')}.txt"
            (args.responses_out / name).write_text(
                result.raw_text, encoding="utf-8"
            )
    report = gateway.spend_report()
    print(
        f"extracted {len(case_ids) - len(failures)}/{len(case_ids)} cases "
        f"({report.replay_hits} replayed, {report.live_calls} live, "
        f"estimated cost {report.estimated_cost:.4f})"
    )
    for failure in failures:
        print(f"FAILED {failure}", file=sys.stderr)
    return 1 if failures else 0


def cmd_parse(args: argparse.Namespace) -> int:
    args.out.mkdir(parents=True, exist_ok=True)
    failures: list[str] = []
    count = 0
    for path in sorted(Path(args.in_dir).glob("*.txt")):
        case_id = case_id_from_filename(path.stem)
        try:
            record = parse_extraction(case_id, path.read_text(encoding="utf-8"))
        except ResponseParseError as exc:
            failures.append(f"{case_id}: {exc}")
            continue
        save_record(record, args.out)
        count += 1
    print(f"parsed {count} responses -> {args.out}")
    for failure in failures:
        print(f"FAILED {failure}", file=sys.stderr)
    return 1 if failures else 0


def cmd_lint(args: argparse.Namespace) -> int:
    records = load_records(args.records)
    total = 0
    for case_id in sorted(records):
        for finding in lint_record(records[case_id]):
            total += 1
            print(
                f"{case_id}  {finding.rule_id} {finding.severity} "
                f"[{finding.section}] {finding.message}"
            )
    print(f"{total} finding(s) over {len(records)} record(s)")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    records = load_records(args.records)
    if args.stats_command == "rule21":
        report = rule21_report(records.values())
        if args.format == "json":
            print(json.dumps(report.to_dict(), indent=2))
        else:
            print(f"cases applying the no-response rule: {report.total_cases}")
            print(f"  facts + statutes + reasons: {report.facts_statutes_reasons}")
            print(f"  statutes only:              {report.statutes_only}")
            print(
                f"  statutes + reasons (no facts): "
                f"{report.statutes_and_reasons_not_facts}"
            )
            if report.other_patterns:
                print(f"  other patterns: {dict(report.other_patterns)}")
        return 0
    store = AnnotationStore(args.annotations)
    annotations = store.load_all()
    subset = "suitable-only" if args.subset == "suitable" else "all"
    table = summarize(annotations, records, subset=subset)
    if args.format == "json":
        print(json.dumps(table.to_dict(), indent=2))
    else:
        columns = ("all",) if subset == "suitable-only" else ("all", "suitable")
        print(table.render(columns=columns))
        print(
            f"\ncases: {table.all_trials} annotated, "
            f"{table.suitable_trials} suitable for prediction"
        )
    return 0


def cmd_qc(args: argparse.Namespace) -> int:
    if args.qc_command == "export":
        store = AnnotationStore(args.annotations)
        count = store.export_jsonl(args.out)
        print(f"exported {count} annotation(s) -> {args.out}")
        return 0
    docs = {doc.case_id: doc for doc in load_corpus(args.corpus_dir)}
    workspace = ReviewWorkspace(
        cases=docs,
        sample_ids=_sample_ids(args.sample),
        records=load_records(args.records),
        store=AnnotationStore(args.annotations),
        static_dir=args.static,
    )
    app = create_app(workspace)
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_dataset(args: argparse.Namespace) -> int:
    records = load_records(args.records)
    store = AnnotationStore(args.annotations)
    manifest = export(records, store.load_all(), args.policy, args.out)
    print(
        f"wrote {manifest['examples']} example(s) -> {args.out} "
        f"(skipped: {len(manifest['skipped'])})"
    )
    return 0


def cmd_fixtures(args: argparse.Namespace) -> int:
    summary = fixtures.build_all(args.out)
    print(json.dumps(summary))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uket",
        description="Extraction, quality-check and dataset pipeline for "
        "employment-tribunal judgments.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and summarize a corpus directory")
    p.add_argument("--corpus-dir", type=Path, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("sample", help="draw a seeded stratified sample")
    p.add_argument("--corpus-dir", type=Path, required=True)
    p.add_argument("--plan", default="table1")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("prompts", help="inspect the prompt template registry")
    psub = p.add_subparsers(dest="prompts_command", required=True)
    pl = psub.add_parser("list")
    pl.add_argument("--dir", action="append", default=[])
    pl.set_defaults(func=cmd_prompts)
    ps = psub.add_parser("show")
    ps.add_argument("template", help="template as <id>/<version>")
    ps.add_argument("--dir", action="append", default=[])
    ps.set_defaults(func=cmd_prompts)

    p = sub.add_parser("extract", help="run extraction over sampled cases")
    p.add_argument("--corpus-dir", type=Path, required=True)
    p.add_argument("--sample", type=Path)
    p.add_argument("--mode", choices=("live", "replay-strict", "record"),
                   required=True)
    p.add_argument("--cache", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--responses-out", type=Path)
    p.add_argument("--template", default="uket-final/v1")
    p.add_argument("--prompt-dir", action="append", default=[])
    p.add_argument("--model", default="gpt-4-32k")
    p.add_argument("--temperature", type=float, default=0.0)
    p.add_argument("--config", type=Path, help="gateway config JSON")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("parse", help="parse raw responses into records")
    p.add_argument("--in", dest="in_dir", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("lint", help="lint parsed records")
    p.add_argument("--records", type=Path, required=True)
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("stats", help="accuracy and occurrence statistics")
    ssub = p.add_subparsers(dest="stats_command", required=True)
    st = ssub.add_parser("table2", help="two-column accuracy table")
    st.add_argument("--annotations", type=Path, required=True)
    st.add_argument("--records", type=Path, required=True)
    st.add_argument("--subset", choices=("suitable",))
    st.add_argument("--format", choices=("text", "json"), default="text")
    st.set_defaults(func=cmd_stats)
    sr = ssub.add_parser("rule21", help="no-response-rule occurrence report")
    sr.add_argument("--records", type=Path, required=True)
    sr.add_argument("--format", choices=("text", "json"), default="text")
    sr.set_defaults(func=cmd_stats)

    p = sub.add_parser("qc", help="quality-check annotation store")
    qsub = p.add_subparsers(dest="qc_command", required=True)
    qe = qsub.add_parser("export")
    qe.add_argument("--annotations", type=Path, required=True)
    qe.add_argument("--out", type=Path, required=True)
    qe.set_defaults(func=cmd_qc)
    qs = qsub.add_parser("serve")
    qs.add_argument("--corpus-dir", type=Path, required=True)
    qs.add_argument("--sample", type=Path, required=True)
    qs.add_argument("--records", type=Path, required=True)
    qs.add_argument("--annotations", type=Path, required=True)
    qs.add_argument("--static", type=Path)
    qs.add_argument("--host", default="127.0.0.1")
    qs.add_argument("--port", type=int, default=DEFAULT_PORT)
    qs.set_defaults(func=cmd_qc)

    p = sub.add_parser("dataset", help="export prediction datasets")
    dsub = p.add_subparsers(dest="dataset_command", required=True)
    de = dsub.add_parser("export")
    de.add_argument("--records", type=Path, required=True)
    de.add_argument("--annotations", type=Path, required=True)
    de.add_argument("--policy", choices=sorted(POLICIES), required=True)
    de.add_argument("--out", type=Path, required=True)
    de.set_defaults(func=cmd_dataset)

    p = sub.add_parser("fixtures", help="rebuild the reference fixture tree")
    fsub = p.add_subparsers(dest="fixtures_command", required=True)
    fb = fsub.add_parser("build")
    fb.add_argument("--out", type=Path, required=True)
    fb.set_defaults(func=cmd_fixtures)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
