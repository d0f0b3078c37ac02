"""Benchmark ingestion, construction, and emission.

The pipeline per (instance, kind, site): transform the buggy and fixed
sources with identical parameters, remap the buggy-line annotation
through the buggy edit script, drop the instance if any edit touches the
buggy line, optionally run the preservation oracle on the transformed
fixed source, then emit files plus a manifest with provenance, digests,
per-kind counts, and an exclusion log. Identical inputs and seed yield
byte-identical output trees.
"""

from __future__ import annotations

import hashlib
import json
import random
import shutil
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ApplicabilityError, InfrastructureError, InputError
from .harness import PASS
from .javaparse import SyntaxTree, parse_source
from .naming import (
    BuiltinNamingProvider,
    NamingRequest,
    mask_occurrences,
    select_name,
    suggest_names,
)
from .errors import ProviderError
from .scopes import ScopeTable, resolve_scopes
from .sourcetext import Edit, LineMap, SourceText, Span, edit_touches_lines
from .transforms import (
    APPLY_BY_KIND,
    TransformKind,
    TransformResult,
    TransformSite,
    enumerate_sites,
    insert_try_catch,
    rename_identifier,
)

MANIFEST_VERSION = "1"
MANIFEST_NAME = "manifest.json"

REASON_BUGGY_LINE = "buggy-line-touched"
REASON_PRESERVATION = "preservation-failed"
REASON_INAPPLICABLE = "inapplicable-collision"

KIND_ORDER = list(TransformKind)


@dataclass(frozen=True)
class BugInstance:
    id: str
    buggy_source: SourceText
    fixed_source: SourceText
    buggy_span: Span  # line-granular, in buggy_source
    test_source: SourceText


@dataclass(frozen=True)
class RemapOutcome:
    excluded: bool
    new_start_line: int | None = None
    new_end_line: int | None = None

    @staticmethod
    def mapped(start: int, end: int) -> "RemapOutcome":
        return RemapOutcome(False, start, end)

    @staticmethod
    def excluded_outcome() -> "RemapOutcome":
        return RemapOutcome(True)


@dataclass
class LoadResult:
    instances: list[BugInstance]
    rejected: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


@dataclass
class Manifest:
    version: str
    base_digest: str
    seed: int
    kinds: list[str]
    instances: list[dict]
    counts: dict[str, int]
    total: int
    exclusions: list[dict]

    def to_json(self) -> str:
        payload = {
            "version": self.version,
            "base_digest": self.base_digest,
            "seed": self.seed,
            "kinds": self.kinds,
            "counts": self.counts,
            "total": self.total,
            "instances": self.instances,
            "exclusions": self.exclusions,
        }
        return json.dumps(payload, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "Manifest":
        payload = json.loads(text)
        return Manifest(
            version=payload["version"],
            base_digest=payload["base_digest"],
            seed=payload["seed"],
            kinds=payload["kinds"],
            instances=payload["instances"],
            counts=payload["counts"],
            total=payload["total"],
            exclusions=payload["exclusions"],
        )


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# ----------------------------------------------------------------------
# Ingestion
# ----------------------------------------------------------------------


def load_base_dataset(root: Path, manifest: Path, harness=None) -> LoadResult:
    """Read a JSONL input manifest into BugInstances.

    Each record carries `id`, `buggy_path`, `fixed_path`, `test_path`,
    `buggy_start_line`, `buggy_end_line` (1-based inclusive, paths
    relative to ``root``). Entries whose sources do not parse are
    rejected with diagnostics; with a harness supplied, fixed sources
    failing their tests are kept but logged.
    """
    root = Path(root)
    manifest = Path(manifest)
    if not manifest.is_file():
        raise InputError(f"input manifest not found: {manifest}")
    result = LoadResult(instances=[])
    for lineno, line in enumerate(manifest.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as err:
            result.rejected.append((f"line {lineno}", f"bad record: {err}"))
            continue
        instance_id = str(record.get("id", f"line {lineno}"))
        try:
            instance = _load_instance(root, record)
        except (InputError, KeyError, TypeError, ValueError) as err:
            result.rejected.append((instance_id, str(err)))
            continue
        if harness is not None:
            verdict = harness.compile_and_run(
                instance.fixed_source.content, instance.test_source.content
            )
            if verdict.status != PASS:
                result.warnings.append(
                    f"{instance_id}: fixed source does not pass its tests "
                    f"({verdict.status})"
                )
        result.instances.append(instance)
    return result


def _load_instance(root: Path, record: dict) -> BugInstance:
    paths = {}
    for key in ("buggy_path", "fixed_path", "test_path"):
        p = root / record[key]
        if not p.is_file():
            raise InputError(f"missing file: {p}")
        paths[key] = p
    sources = {}
    for key, p in paths.items():
        text = SourceText(p.read_text(encoding="utf-8"))
        tree = parse_source(text.content)
        if tree.error:
            raise InputError(f"{p.name} does not parse: {tree.errors[0]}")
        sources[key] = text
    start = int(record["buggy_start_line"])
    end = int(record["buggy_end_line"])
    buggy = sources["buggy_path"]
    if not (1 <= start <= end <= buggy.num_lines):
        raise InputError(
            f"buggy line range {start}..{end} outside 1..{buggy.num_lines}"
        )
    return BugInstance(
        id=str(record["id"]),
        buggy_source=buggy,
        fixed_source=sources["fixed_path"],
        buggy_span=buggy.span_of_lines(start, end),
        test_source=sources["test_path"],
    )


def base_dataset_digest(instances: list[BugInstance]) -> str:
    h = hashlib.sha256()
    for inst in instances:
        h.update(
            "|".join(
                (
                    inst.id,
                    sha256_text(inst.buggy_source.content),
                    sha256_text(inst.fixed_source.content),
                    sha256_text(inst.test_source.content),
                    f"{inst.buggy_span.start_line}-{inst.buggy_span.end_line}",
                )
            ).encode()
        )
        h.update(b"\n")
    return h.hexdigest()


# ----------------------------------------------------------------------
# Remapping
# ----------------------------------------------------------------------


def remap_buggy_line(
    line_map: LineMap, edits, buggy_span: Span
) -> RemapOutcome:
    """Map a buggy-line annotation through an edit script.

    Excluded whenever any edit changes the content of a buggy line; pure
    whole-line insertions before or after it only shift it.
    """
    text = line_map.original
    for edit in edits:
        if edit_touches_lines(edit, text, buggy_span.start_line, buggy_span.end_line):
            return RemapOutcome.excluded_outcome()
    new_start, new_end, touched = line_map.map_range(
        buggy_span.start_line, buggy_span.end_line
    )
    if touched:
        return RemapOutcome.excluded_outcome()
    return RemapOutcome.mapped(new_start, new_end)


# ----------------------------------------------------------------------
# Construction
# ----------------------------------------------------------------------


@dataclass
class _Program:
    text: SourceText
    tree: SyntaxTree
    table: ScopeTable


def _analyze(text: SourceText) -> _Program:
    tree = parse_source(text.content)
    if tree.error:
        raise InputError("source no longer parses: " + "; ".join(tree.errors[:3]))
    return _Program(text, tree, resolve_scopes(tree))


def _site_signature(site: TransformSite, text: SourceText) -> tuple:
    md = site.metadata
    kind = site.kind
    if kind.is_rename:
        return (md["old_name"], md["decl_kind"])
    if kind == TransformKind.INSERT_LOG:
        return (md["method_name"],)
    if kind == TransformKind.INSERT_TRY_CATCH:
        stmt = text.slice_bytes(site.anchor.start_byte, site.anchor.end_byte)
        return ("".join(stmt.split()),)
    if kind == TransformKind.BOOLEAN_EXCHANGE:
        return (md["name"], md["init_literal"])
    if kind == TransformKind.LOOP_EXCHANGE:
        return (md["direction"], "".join(md["cond_text"].split()))
    if kind == TransformKind.REORDER_CONDITION:
        left = text.slice_bytes(md["left"].start_byte, md["left"].end_byte)
        right = text.slice_bytes(md["right"].start_byte, md["right"].end_byte)
        return (md["operator"], "".join(left.split()), "".join(right.split()))
    raise ValueError(kind)


def _match_fixed_site(
    buggy_site: TransformSite,
    buggy_text: SourceText,
    fixed_sites: list[TransformSite],
    fixed_text: SourceText,
) -> TransformSite | None:
    """Site in the fixed source corresponding to a buggy-source site."""
    want = _site_signature(buggy_site, buggy_text)
    candidates = [
        s for s in fixed_sites if _site_signature(s, fixed_text) == want
    ]
    if not candidates:
        return None
    return min(candidates, key=lambda s: abs(s.site_id - buggy_site.site_id))


def _instance_seed(seed: int, base_id: str, kind: TransformKind, site_id: int) -> int:
    digest = hashlib.sha256(f"{seed}:{base_id}:{kind.value}:{site_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


class _Exclusion(Exception):
    def __init__(self, reason: str, detail: str) -> None:
        super().__init__(detail)
        self.reason = reason
        self.detail = detail


def build_benchmark(
    instances: list[BugInstance],
    kinds,
    seed: int = 42,
    naming_provider=None,
    harness=None,
    out_dir: Path | None = None,
    rename_choice: str = "first",
    log=None,
) -> Manifest:
    """Transform every instance with every requested kind and emit the result.

    With ``harness`` set, transformed fixed sources must pass their tests
    (instances failing the oracle are dropped and logged); without it,
    validation is recorded as skipped. ``out_dir`` of None builds the
    manifest in memory without writing files.
    """
    kinds = sorted(set(kinds), key=KIND_ORDER.index)
    provider = naming_provider or BuiltinNamingProvider()
    log = log or (lambda msg: None)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)

    records: list[dict] = []
    exclusions: list[dict] = []
    counts = {k.value: 0 for k in kinds}

    try:
        for inst in instances:
            buggy = _analyze(inst.buggy_source)
            fixed = _analyze(inst.fixed_source)
            for kind in kinds:
                buggy_sites = enumerate_sites(buggy.text, buggy.tree, buggy.table, kind)
                if not buggy_sites:
                    continue
                fixed_sites = enumerate_sites(fixed.text, fixed.tree, fixed.table, kind)
                if kind.is_rename:
                    chosen = [_choose_rename_site(buggy_sites, seed, inst.id, kind, rename_choice)]
                else:
                    chosen = buggy_sites
                for site in chosen:
                    try:
                        record = _build_one(
                            inst, kind, site, buggy, fixed, fixed_sites,
                            seed, provider, harness, out_dir, log,
                        )
                    except _Exclusion as exc:
                        exclusions.append(
                            {
                                "base_id": inst.id,
                                "kind": kind.value,
                                "site_id": site.site_id,
                                "reason": exc.reason,
                                "detail": exc.detail,
                            }
                        )
                        log(f"excluded {inst.id} {kind.value} site {site.site_id}: "
                            f"{exc.reason} ({exc.detail})")
                        continue
                    records.append(record)
                    counts[kind.value] += 1
    except InfrastructureError:
        if out_dir is not None:
            shutil.rmtree(out_dir, ignore_errors=True)
        raise

    manifest = Manifest(
        version=MANIFEST_VERSION,
        base_digest=base_dataset_digest(instances),
        seed=seed,
        kinds=[k.value for k in kinds],
        instances=records,
        counts=counts,
        total=sum(counts.values()),
        exclusions=exclusions,
    )
    if out_dir is not None:
        (out_dir / MANIFEST_NAME).write_text(manifest.to_json(), encoding="utf-8")
    return manifest


def _choose_rename_site(
    sites: list[TransformSite],
    seed: int,
    base_id: str,
    kind: TransformKind,
    rename_choice: str,
) -> TransformSite:
    if rename_choice == "random":
        rng = random.Random(f"{seed}:{base_id}:{kind.value}")
        return rng.choice(sites)
    return sites[0]


def _build_one(
    inst: BugInstance,
    kind: TransformKind,
    site: TransformSite,
    buggy: _Program,
    fixed: _Program,
    fixed_sites: list[TransformSite],
    seed: int,
    provider,
    harness,
    out_dir: Path | None,
    log,
) -> dict:
    fixed_site = _match_fixed_site(site, buggy.text, fixed_sites, fixed.text)
    if fixed_site is None:
        raise _Exclusion(
            REASON_INAPPLICABLE, "no matching site in the fixed source"
        )
    inst_seed = _instance_seed(seed, inst.id, kind, site.site_id)

    if kind.is_rename:
        new_name = _pick_new_name(inst, site, fixed_site, provider, log)
        try:
            result_b = rename_identifier(buggy.text, site, new_name)
            result_f = rename_identifier(fixed.text, fixed_site, new_name)
        except ApplicabilityError as err:
            raise _Exclusion(REASON_INAPPLICABLE, str(err))
        extra_provenance = {"new_name": new_name}
    elif kind == TransformKind.INSERT_TRY_CATCH:
        result_b = insert_try_catch(buggy.text, site, inst_seed)
        result_f = insert_try_catch(fixed.text, fixed_site, inst_seed)
        extra_provenance = {}
    else:
        apply = APPLY_BY_KIND[kind]
        result_b = apply(buggy.text, site)
        result_f = apply(fixed.text, fixed_site)
        extra_provenance = {}

    outcome = remap_buggy_line(result_b.line_map, result_b.edits, inst.buggy_span)
    if outcome.excluded:
        raise _Exclusion(REASON_BUGGY_LINE, "an edit touches the buggy line")
    result_b = result_b.with_buggy_flag(False)

    _check_emission_invariants(inst, result_b, outcome)

    validation = "skipped"
    if harness is not None:
        verdict = harness.compile_and_run(
            result_f.output.content, inst.test_source.content
        )
        if verdict.status != PASS:
            raise _Exclusion(
                REASON_PRESERVATION,
                f"transformed fixed source: {verdict.status}",
            )
        validation = "pass"

    instance_id = f"{inst.id}__{kind.value}__{site.site_id:02d}"
    trimmed = [
        inst.buggy_source.line_text(ln).strip()
        for ln in range(inst.buggy_span.start_line, inst.buggy_span.end_line + 1)
    ]
    provenance = {
        "seed": inst_seed,
        "global_seed": seed,
        **result_b.provenance,
        **extra_provenance,
    }
    record = {
        "id": instance_id,
        "base_id": inst.id,
        "kind": kind.value,
        "site_id": site.site_id,
        "dir": instance_id,
        "buggy_file": "buggy.java",
        "fixed_file": "fixed.java",
        "test_file": "test.java",
        "buggy_sha256": sha256_text(result_b.output.content),
        "fixed_sha256": sha256_text(result_f.output.content),
        "test_sha256": sha256_text(inst.test_source.content),
        "buggy_start_line": outcome.new_start_line,
        "buggy_end_line": outcome.new_end_line,
        "orig_buggy_start_line": inst.buggy_span.start_line,
        "orig_buggy_end_line": inst.buggy_span.end_line,
        "buggy_lines_trimmed": trimmed,
        "provenance": provenance,
        "validation": validation,
    }
    if out_dir is not None:
        inst_dir = out_dir / instance_id
        inst_dir.mkdir(parents=True, exist_ok=True)
        (inst_dir / "buggy.java").write_text(result_b.output.content, encoding="utf-8")
        (inst_dir / "fixed.java").write_text(result_f.output.content, encoding="utf-8")
        (inst_dir / "test.java").write_text(inst.test_source.content, encoding="utf-8")
        (inst_dir / "metadata.json").write_text(
            json.dumps(record, indent=2) + "\n", encoding="utf-8"
        )
    return record


def _pick_new_name(
    inst: BugInstance,
    site: TransformSite,
    fixed_site: TransformSite,
    provider,
    log,
) -> str:
    old_name = site.metadata["old_name"]
    request = NamingRequest(
        masked_context=mask_occurrences(inst.buggy_source, site.metadata["occurrences"]),
        original_name=old_name,
        kind=site.metadata["decl_kind"],
        k=5,
    )
    try:
        candidates = suggest_names(request, provider)
    except ProviderError as err:
        log(f"naming provider failed ({err}); falling back to built-in")
        candidates = suggest_names(request, BuiltinNamingProvider())
    if not candidates:
        candidates = suggest_names(request, BuiltinNamingProvider())
    visible = (
        set(site.metadata["visible"])
        | set(fixed_site.metadata["visible"])
        | {old_name}
    )
    return select_name(candidates, visible)


def _check_emission_invariants(
    inst: BugInstance, result_b: TransformResult, outcome: RemapOutcome
) -> None:
    """Trimmed buggy-line content must survive the rewrite byte-for-byte."""
    out = result_b.output
    orig = inst.buggy_source
    for offset in range(inst.buggy_span.end_line - inst.buggy_span.start_line + 1):
        src_line = inst.buggy_span.start_line + offset
        dst_line = outcome.new_start_line + offset
        if orig.line_text(src_line).strip() != out.line_text(dst_line).strip():
            raise InputError(
                f"{inst.id}: buggy line {src_line} content changed after remap "
                f"(mapped to {dst_line}); this is a line-map defect"
            )


# ----------------------------------------------------------------------
# Summaries and verification
# ----------------------------------------------------------------------


def count_summary(manifest: Manifest) -> dict:
    """Per-kind emitted counts, total, and exclusion tallies by reason."""
    counts = dict(manifest.counts)
    exclusion_counts: dict[str, int] = {}
    for record in manifest.exclusions:
        exclusion_counts[record["reason"]] = exclusion_counts.get(record["reason"], 0) + 1
    return {
        "counts": counts,
        "total": sum(counts.values()),
        "exclusions": exclusion_counts,
    }


REFERENCE_COUNTS = {
    TransformKind.LOCAL_VAR_RENAME.value: 100,
    TransformKind.METHOD_RENAME.value: 149,
    TransformKind.PARAM_RENAME.value: 162,
    TransformKind.BOOLEAN_EXCHANGE.value: 7,
    TransformKind.LOOP_EXCHANGE.value: 142,
    TransformKind.REORDER_CONDITION.value: 603,
    TransformKind.INSERT_LOG.value: 173,
    TransformKind.INSERT_TRY_CATCH.value: 114,
}

STRUCTURAL_REFERENCE_KINDS = (
    TransformKind.LOOP_EXCHANGE.value,
    TransformKind.REORDER_CONDITION.value,
    TransformKind.INSERT_LOG.value,
    TransformKind.INSERT_TRY_CATCH.value,
)


def compare_reference_counts(
    counts: dict[str, int],
    reference: dict[str, int] | None = None,
    total_tolerance: float = 0.15,
    structural_tolerance: float = 0.20,
) -> dict:
    """Report emitted counts against published reference counts.

    The total must land within ``total_tolerance`` and each structural
    kind within ``structural_tolerance``; renaming kinds are reported
    without a tolerance gate (the upstream naming model and exclusion set
    are unpublished).
    """
    reference = reference or REFERENCE_COUNTS
    rows = []
    for kind, ref in reference.items():
        got = counts.get(kind, 0)
        deviation = (got - ref) / ref if ref else 0.0
        gated = kind in STRUCTURAL_REFERENCE_KINDS
        rows.append(
            {
                "kind": kind,
                "reference": ref,
                "emitted": got,
                "deviation": round(deviation, 4),
                "within_tolerance": (abs(deviation) <= structural_tolerance)
                if gated
                else None,
            }
        )
    ref_total = sum(reference.values())
    got_total = sum(counts.get(k, 0) for k in reference)
    total_dev = (got_total - ref_total) / ref_total
    return {
        "rows": rows,
        "total_reference": ref_total,
        "total_emitted": got_total,
        "total_deviation": round(total_dev, 4),
        "total_within_tolerance": abs(total_dev) <= total_tolerance,
    }


def load_manifest(path: Path) -> Manifest:
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    if not path.is_file():
        raise InputError(f"manifest not found: {path}")
    return Manifest.from_json(path.read_text(encoding="utf-8"))


def verify_manifest(manifest: Manifest, bench_dir: Path) -> list[str]:
    """Integrity check of an emitted benchmark; returns problem messages."""
    problems: list[str] = []
    bench_dir = Path(bench_dir)
    counted: dict[str, int] = {}
    for record in manifest.instances:
        counted[record["kind"]] = counted.get(record["kind"], 0) + 1
        inst_dir = bench_dir / record["dir"]
        for key, digest_key in (
            ("buggy_file", "buggy_sha256"),
            ("fixed_file", "fixed_sha256"),
            ("test_file", "test_sha256"),
        ):
            path = inst_dir / record[key]
            if not path.is_file():
                problems.append(f"{record['id']}: missing {record[key]}")
                continue
            if sha256_text(path.read_text(encoding="utf-8")) != record[digest_key]:
                problems.append(f"{record['id']}: digest mismatch for {record[key]}")
        buggy_path = inst_dir / record["buggy_file"]
        if buggy_path.is_file():
            text = SourceText(buggy_path.read_text(encoding="utf-8"))
            start, end = record["buggy_start_line"], record["buggy_end_line"]
            if not (1 <= start <= end <= text.num_lines):
                problems.append(f"{record['id']}: buggy line range out of bounds")
            else:
                got = [
                    text.line_text(ln).strip() for ln in range(start, end + 1)
                ]
                if got != record["buggy_lines_trimmed"]:
                    problems.append(
                        f"{record['id']}: buggy-line content drifted from annotation"
                    )
    for kind, n in manifest.counts.items():
        if counted.get(kind, 0) != n:
            problems.append(
                f"count mismatch for {kind}: manifest says {n}, found {counted.get(kind, 0)}"
            )
    if manifest.total != sum(manifest.counts.values()):
        problems.append("total disagrees with per-kind counts")
    return problems
