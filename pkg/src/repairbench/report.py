"""Robustness report assembly and rendering.

A report has one section per transformation kind. Each row pairs a
model's scores on the original bugs (restricted to the bug subset that
kind transformed) with its scores on the transformed instances, and shows
the relative change with a direction arrow. Both pass@k readings are
reported side by side, explicitly labeled; kinds with too few instances
carry an underpowered footnote.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InputError
from .metrics import (
    EvalRow,
    SampleStats,
    pass_at_k_any,
    pass_at_k_unbiased,
    relative_change,
)
from .transforms import TransformKind

UNDERPOWERED_THRESHOLD = 30

_KIND_ORDER = {k.value: i for i, k in enumerate(TransformKind)}


@dataclass
class Section:
    kind: str
    instances: int
    underpowered: bool
    rows: list[dict] = field(default_factory=list)


@dataclass
class ReportTable:
    k: int
    sections: list[Section]
    threshold: int = UNDERPOWERED_THRESHOLD
    warnings: list[str] = field(default_factory=list)

    def eval_rows(self) -> list[EvalRow]:
        """Primary-reading (unbiased estimator) rows, one per (model, kind)."""
        out = []
        for section in self.sections:
            for row in section.rows:
                out.append(
                    EvalRow(
                        model=row["model"],
                        kind=section.kind,
                        pass_orig=row["pass_est_orig"],
                        pass_trans=row["pass_est_trans"],
                        codebleu_orig=row["codebleu_orig"],
                        codebleu_trans=row["codebleu_trans"],
                        change=row["change_est"],
                        direction=row["direction_est"],
                        instances=section.instances,
                    )
                )
        return out


def load_results(path: Path) -> list[dict]:
    """Read per-instance evaluation records from a JSONL results file."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"results file not found: {path}")
    records = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as err:
            raise InputError(f"{path}:{lineno}: bad record: {err}") from err
    return records


def _stats_of(record: dict) -> SampleStats | None:
    n = int(record["n"])
    if n < 1:
        return None
    outcomes = record.get("outcomes")
    return SampleStats(
        n=n,
        c=int(record["c"]),
        outcomes=tuple(bool(o) for o in outcomes) if outcomes is not None else None,
    )


def build_report(
    orig_records: list[dict],
    trans_records: list[dict],
    k: int = 10,
    threshold: int = UNDERPOWERED_THRESHOLD,
) -> ReportTable:
    """Join original-run and transformed-run results into a report table.

    The original run's records are keyed by base instance id; each kind
    section restricts them to the bugs that kind actually transformed, so
    the original and transformed columns cover the same bug population.
    """
    orig_models = {r["model"] for r in orig_records}
    trans_models = {r["model"] for r in trans_records}
    if orig_models != trans_models:
        only_orig = sorted(orig_models - trans_models)
        only_trans = sorted(trans_models - orig_models)
        raise InputError(
            "model sets differ between results files: "
            f"only in original results {only_orig}; only in transformed results {only_trans}"
        )
    models = sorted(orig_models)
    warnings: list[str] = []

    orig_by_model: dict[str, dict[str, dict]] = {m: {} for m in models}
    for r in orig_records:
        orig_by_model[r["model"]][r["base_id"]] = r

    kinds = sorted(
        {r["kind"] for r in trans_records if r.get("kind")},
        key=lambda kv: _KIND_ORDER.get(kv, len(_KIND_ORDER)),
    )
    sections: list[Section] = []
    for kind in kinds:
        kind_records = [r for r in trans_records if r.get("kind") == kind]
        instance_ids = {r["instance_id"] for r in kind_records}
        section = Section(
            kind=kind,
            instances=len(instance_ids),
            underpowered=len(instance_ids) < threshold,
        )
        for model in models:
            mine = [r for r in kind_records if r["model"] == model]
            trans_stats = []
            orig_stats = []
            cb_orig: list[float] = []
            cb_trans: list[float] = []
            for r in sorted(mine, key=lambda r: r["instance_id"]):
                ts = _stats_of(r)
                if ts is None:
                    warnings.append(
                        f"{model}/{kind}: {r['instance_id']} has no patches; skipped"
                    )
                    continue
                base = orig_by_model[model].get(r["base_id"])
                if base is None:
                    warnings.append(
                        f"{model}/{kind}: no original-run record for {r['base_id']}; skipped"
                    )
                    continue
                bs = _stats_of(base)
                if bs is None:
                    warnings.append(
                        f"{model}: base {r['base_id']} has no patches; skipped"
                    )
                    continue
                trans_stats.append(ts)
                orig_stats.append(bs)
                if r.get("codebleu") is not None:
                    cb_trans.append(float(r["codebleu"]))
                if base.get("codebleu") is not None:
                    cb_orig.append(float(base["codebleu"]))
            if not trans_stats:
                continue
            est_orig = round(pass_at_k_unbiased(orig_stats, k), 2)
            est_trans = round(pass_at_k_unbiased(trans_stats, k), 2)
            any_orig = round(pass_at_k_any(orig_stats, k), 2)
            any_trans = round(pass_at_k_any(trans_stats, k), 2)
            change_est, dir_est = relative_change(est_orig, est_trans)
            change_any, dir_any = relative_change(any_orig, any_trans)
            section.rows.append(
                {
                    "model": model,
                    "bugs": len(trans_stats),
                    "pass_est_orig": est_orig,
                    "pass_est_trans": est_trans,
                    "change_est": change_est,
                    "direction_est": dir_est,
                    "pass_any_orig": any_orig,
                    "pass_any_trans": any_trans,
                    "change_any": change_any,
                    "direction_any": dir_any,
                    "codebleu_orig": round(
                        100 * sum(cb_orig) / len(cb_orig), 2
                    ) if cb_orig else None,
                    "codebleu_trans": round(
                        100 * sum(cb_trans) / len(cb_trans), 2
                    ) if cb_trans else None,
                }
            )
        sections.append(section)
    return ReportTable(k=k, sections=sections, threshold=threshold, warnings=warnings)


def format_change(change: float | None, direction: str) -> str:
    if change is None:
        return "undef"
    if direction == "none" or change == 0:
        return "0%"
    arrow = "↑" if direction == "up" else "↓"
    return f"{change:.2f}{arrow}"


def _fmt(value) -> str:
    return "-" if value is None else f"{value:.2f}"


def render_table(table: ReportTable) -> str:
    """Plain-text report, one section per transformation kind."""
    lines: list[str] = []
    header = (
        f"{'model':<16} {'P@k(est) orig':>13} {'trans':>8} {'change':>9} "
        f"{'P@k(any) orig':>13} {'trans':>8} {'change':>9} "
        f"{'CodeBLEU orig':>13} {'trans':>8}"
    )
    any_footnote = False
    for section in table.sections:
        marker = " †" if section.underpowered else ""
        any_footnote = any_footnote or section.underpowered
        lines.append(f"== {section.kind} ({section.instances} instances){marker}")
        lines.append(header)
        for row in section.rows:
            lines.append(
                f"{row['model']:<16} "
                f"{_fmt(row['pass_est_orig']):>13} {_fmt(row['pass_est_trans']):>8} "
                f"{format_change(row['change_est'], row['direction_est']):>9} "
                f"{_fmt(row['pass_any_orig']):>13} {_fmt(row['pass_any_trans']):>8} "
                f"{format_change(row['change_any'], row['direction_any']):>9} "
                f"{_fmt(row['codebleu_orig']):>13} {_fmt(row['codebleu_trans']):>8}"
            )
        lines.append("")
    if any_footnote:
        lines.append(
            f"† fewer than {table.threshold} instances: statistically "
            "underpowered, excluded from headline robustness claims"
        )
    lines.append(
        f"pass@k computed at k={table.k}; est = unbiased estimator, "
        "any = at least one pass among the first k samples"
    )
    return "\n".join(lines) + "\n"


_CSV_COLUMNS = [
    "model", "kind", "instances", "underpowered",
    "pass_est_orig", "pass_est_trans", "change_est", "direction_est",
    "pass_any_orig", "pass_any_trans", "change_any", "direction_any",
    "codebleu_orig", "codebleu_trans",
]


def render_csv(table: ReportTable) -> str:
    """Comma-separated report: one record per (model, kind), stable order."""
    lines = [",".join(_CSV_COLUMNS)]
    for section in table.sections:
        for row in section.rows:
            values = {
                **row,
                "kind": section.kind,
                "instances": section.instances,
                "underpowered": str(section.underpowered).lower(),
            }
            lines.append(
                ",".join(
                    "" if values.get(col) is None else str(values.get(col))
                    for col in _CSV_COLUMNS
                )
            )
    return "\n".join(lines) + "\n"
