"""Command-line surface: transform, validate, evaluate, report.

Exit codes: 0 success; 1 the run produced failures as data (a failing
patch, an integrity problem); 2 usage or bad input; 3 infrastructure
(missing JDK, spawn failures).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .benchmark import (
    build_benchmark,
    count_summary,
    load_base_dataset,
    load_manifest,
    verify_manifest,
)
from .errors import ContractViolation, InfrastructureError, InputError
from .harness import (
    PASS,
    ExecHarness,
    discover_patches,
    discover_toolchain,
)
from .metrics import codebleu_subset
from .errors import MetricError
from .naming import ExternalNamingProvider
from .report import build_report, load_results, render_csv, render_table
from .sourcetext import SourceText
from .transforms import TransformKind

EXIT_OK = 0
EXIT_DATA_FAILURES = 1
EXIT_USAGE = 2
EXIT_INFRASTRUCTURE = 3


def _global_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=42, help="global seed (default 42)")
    parser.add_argument("--jobs", type=int, default=None, help="parallel workers")
    parser.add_argument("--jdk-home", default=None, help="JDK root with bin/javac and bin/java")
    parser.add_argument("--naming-provider", default=None,
                        help="external naming provider command line")
    parser.add_argument("--timeout", type=float, default=30.0,
                        help="per-instance test timeout in seconds")
    parser.add_argument("--format", choices=("table", "csv"), default="table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repairbench",
        description="Build and score robustness benchmarks for program repair",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="emit a transformed benchmark")
    _global_flags(p)
    p.add_argument("--input", required=True, help="base dataset manifest (JSONL)")
    p.add_argument("--root", default=None, help="base dataset root (default: manifest dir)")
    p.add_argument("--out", required=True, help="output benchmark directory")
    p.add_argument("--kinds", default="all",
                   help="comma-separated transformation kinds, or 'all'")
    p.add_argument("--no-validate", action="store_true",
                   help="skip the test-execution preservation oracle")
    p.add_argument("--rename-choice", choices=("first", "random"), default="first",
                   help="which declaration the renaming kinds pick")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("validate", help="check an emitted benchmark's integrity")
    _global_flags(p)
    p.add_argument("--benchmark", required=True, help="benchmark directory")
    p.add_argument("--with-tests", action="store_true",
                   help="also rerun the preservation oracle (needs a JDK)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evaluate", help="score candidate patches against tests")
    _global_flags(p)
    p.add_argument("--benchmark", default=None,
                   help="transformed benchmark directory to evaluate on")
    p.add_argument("--base-manifest", default=None,
                   help="base dataset manifest for an original-programs run")
    p.add_argument("--base-root", default=None, help="base dataset root")
    p.add_argument("--patches", required=True, help="patches root directory")
    p.add_argument("--model", required=True, help="model id for the results records")
    p.add_argument("--out", required=True, help="results file (JSONL)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="render a robustness report")
    _global_flags(p)
    p.add_argument("--orig", required=True, help="results of the original-programs run")
    p.add_argument("--trans", required=True, help="results of the transformed run")
    p.add_argument("--k", type=int, default=10, help="k for pass@k (default 10)")
    p.add_argument("--out", default=None, help="write the report here as well")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfrastructureError as err:
        print(f"infrastructure error: {err}", file=sys.stderr)
        return EXIT_INFRASTRUCTURE
    except (InputError, ContractViolation) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def _parse_kinds(spec: str) -> list[TransformKind]:
    if spec.strip().lower() == "all":
        return list(TransformKind)
    kinds = []
    for name in spec.split(","):
        name = name.strip()
        if not name:
            continue
        kinds.append(TransformKind.from_name(name))
    if not kinds:
        raise InputError("no transformation kinds selected")
    return kinds


def cmd_transform(args) -> int:
    try:
        kinds = _parse_kinds(args.kinds)
    except ValueError as err:
        raise InputError(str(err))
    manifest_path = Path(args.input)
    root = Path(args.root) if args.root else manifest_path.parent
    loaded = load_base_dataset(root, manifest_path)
    for instance_id, reason in loaded.rejected:
        print(f"rejected {instance_id}: {reason}", file=sys.stderr)
    harness = None
    if not args.no_validate:
        toolchain = discover_toolchain(args.jdk_home)
        harness = ExecHarness(toolchain, timeout=args.timeout)
    provider = (
        ExternalNamingProvider(args.naming_provider)
        if args.naming_provider
        else None
    )
    try:
        manifest = build_benchmark(
            loaded.instances,
            kinds,
            seed=args.seed,
            naming_provider=provider,
            harness=harness,
            out_dir=Path(args.out),
            rename_choice=args.rename_choice,
            log=lambda msg: print(msg, file=sys.stderr),
        )
    finally:
        if provider is not None:
            provider.close()
    summary = count_summary(manifest)
    print(f"instances loaded: {len(loaded.instances)} "
          f"(rejected: {len(loaded.rejected)})")
    for kind in manifest.kinds:
        print(f"{kind:18} {summary['counts'].get(kind, 0):5d}")
    print(f"{'total':18} {summary['total']:5d}")
    if summary["exclusions"]:
        print("exclusions: " + ", ".join(
            f"{reason}={n}" for reason, n in sorted(summary["exclusions"].items())
        ))
    return EXIT_OK


def cmd_validate(args) -> int:
    bench_dir = Path(args.benchmark)
    manifest = load_manifest(bench_dir)
    problems = verify_manifest(manifest, bench_dir)
    if args.with_tests:
        toolchain = discover_toolchain(args.jdk_home)
        harness = ExecHarness(toolchain, timeout=args.timeout)
        for record in manifest.instances:
            inst_dir = bench_dir / record["dir"]
            fixed = (inst_dir / record["fixed_file"]).read_text(encoding="utf-8")
            test = (inst_dir / record["test_file"]).read_text(encoding="utf-8")
            verdict = harness.compile_and_run(fixed, test)
            if verdict.status != PASS:
                problems.append(
                    f"{record['id']}: transformed fixed source {verdict.status}"
                )
    for problem in problems:
        print(problem)
    if problems:
        print(f"{len(problems)} problem(s) found")
        return EXIT_DATA_FAILURES
    print(f"manifest OK: {manifest.total} instances, "
          f"{len(manifest.exclusions)} exclusions logged")
    return EXIT_OK


def _evaluation_units(args) -> list[dict]:
    """Instances to evaluate: id, base id, kind, test and reference sources."""
    units = []
    if args.benchmark:
        bench_dir = Path(args.benchmark)
        manifest = load_manifest(bench_dir)
        for record in manifest.instances:
            inst_dir = bench_dir / record["dir"]
            units.append(
                {
                    "instance_id": record["id"],
                    "base_id": record["base_id"],
                    "kind": record["kind"],
                    "test": (inst_dir / record["test_file"]).read_text(encoding="utf-8"),
                    "reference": (inst_dir / record["fixed_file"]).read_text(encoding="utf-8"),
                }
            )
    elif args.base_manifest:
        manifest_path = Path(args.base_manifest)
        root = Path(args.base_root) if args.base_root else manifest_path.parent
        loaded = load_base_dataset(root, manifest_path)
        for instance_id, reason in loaded.rejected:
            print(f"rejected {instance_id}: {reason}", file=sys.stderr)
        for inst in loaded.instances:
            units.append(
                {
                    "instance_id": inst.id,
                    "base_id": inst.id,
                    "kind": None,
                    "test": inst.test_source.content,
                    "reference": inst.fixed_source.content,
                }
            )
    else:
        raise InputError("evaluate needs --benchmark or --base-manifest")
    return units


def cmd_evaluate(args) -> int:
    units = _evaluation_units(args)
    toolchain = discover_toolchain(args.jdk_home)
    harness = ExecHarness(toolchain, timeout=args.timeout)
    patches_root = Path(args.patches)

    tasks = []
    per_unit_patches: dict[str, list[tuple[int, Path]]] = {}
    for unit in units:
        found = discover_patches(patches_root, unit["instance_id"])
        per_unit_patches[unit["instance_id"]] = found
        if not found:
            print(f"warning: no patches for {unit['instance_id']}", file=sys.stderr)
        for ordinal, path in found:
            tasks.append(
                (
                    unit["instance_id"],
                    ordinal,
                    path.read_text(encoding="utf-8"),
                    unit["test"],
                )
            )
    verdicts = harness.evaluate_many(tasks, jobs=args.jobs)
    by_instance: dict[str, list] = {}
    for v in verdicts:
        by_instance.setdefault(v.instance_id, []).append(v)

    any_failure = False
    records = []
    for unit in sorted(units, key=lambda u: u["instance_id"]):
        instance_id = unit["instance_id"]
        mine = sorted(by_instance.get(instance_id, []), key=lambda v: v.ordinal)
        outcomes = [v.verdict.status == PASS for v in mine]
        any_failure = any_failure or any(not ok for ok in outcomes)
        scores = []
        reference = SourceText(unit["reference"])
        for ordinal, path in per_unit_patches[instance_id]:
            try:
                scores.append(
                    codebleu_subset(reference, SourceText(path.read_text(encoding="utf-8")))
                )
            except MetricError as err:
                print(f"codebleu skipped for {instance_id}#{ordinal}: {err}",
                      file=sys.stderr)
        records.append(
            {
                "model": args.model,
                "instance_id": instance_id,
                "base_id": unit["base_id"],
                "kind": unit["kind"],
                "n": len(outcomes),
                "c": sum(outcomes),
                "outcomes": outcomes,
                "codebleu": round(sum(scores) / len(scores), 6) if scores else None,
            }
        )
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(
        "".join(json.dumps(r) + "\n" for r in records), encoding="utf-8"
    )
    evaluated = sum(1 for r in records if r["n"] > 0)
    fixed = sum(1 for r in records if r["c"] > 0)
    print(f"evaluated {evaluated}/{len(records)} instances; "
          f"{fixed} with at least one passing patch")
    return EXIT_DATA_FAILURES if any_failure else EXIT_OK


def cmd_report(args) -> int:
    orig = load_results(Path(args.orig))
    trans = load_results(Path(args.trans))
    table = build_report(orig, trans, k=args.k)
    for warning in table.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    rendered = render_csv(table) if args.format == "csv" else render_table(table)
    print(rendered, end="")
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
