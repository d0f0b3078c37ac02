"""Replacement-identifier generation for the renaming transformations.

Two providers share one interface. The built-in provider is a pure
function over the request: it infers a role for the masked identifier
(loop counter, boolean flag, text, collection, ...) from the masked
context and ranks a curated pool of common developer names, with a
deterministic hash jitter so rankings are stable run to run. The external
provider speaks a line-oriented protocol over a subprocess's standard
streams, standing in for model-backed generators:

    request   {"v": 1, "context": ..., "original": ..., "kind": ..., "k": ...}
    response  {"v": 1, "candidates": [{"name": ..., "score": ...}, ...]}

One JSON record per line in each direction, streams flushed per record.
Protocol violations and timeouts raise ProviderError; falling back to the
built-in provider is the caller's decision.
"""

from __future__ import annotations

import hashlib
import json
import re
import shlex
import subprocess
import threading
from dataclasses import dataclass, field

from .errors import ContractViolation, ProviderError
from .sourcetext import Edit, SourceText, apply_edits
from .javalex import is_valid_identifier

MASK_TOKEN = "<mask>"
PROTOCOL_VERSION = 1
DEFAULT_TIMEOUT = 10.0


@dataclass(frozen=True)
class NamingRequest:
    masked_context: str
    original_name: str
    kind: str  # local-variable | parameter | method
    k: int = 5

    def __post_init__(self) -> None:
        if MASK_TOKEN not in self.masked_context:
            raise ContractViolation("masked_context carries no mask token")
        if self.k < 1:
            raise ContractViolation("k must be at least 1")


@dataclass(frozen=True)
class NameCandidate:
    name: str
    score: float


def mask_occurrences(program: SourceText, occurrences) -> str:
    """Replace every occurrence span with the mask token."""
    edits = [Edit(span, MASK_TOKEN) for span in occurrences]
    masked, _ = apply_edits(program, edits)
    return masked.content


# ----------------------------------------------------------------------
# Built-in provider
# ----------------------------------------------------------------------

_POOLS: dict[str, list[str]] = {
    "counter": ["count", "index", "idx", "pos", "step", "num"],
    "int": ["count", "total", "value", "num", "sum", "acc"],
    "boolean": ["flag", "found", "done", "valid", "ok", "matched"],
    "text": ["text", "str", "word", "content", "label"],
    "decimal": ["value", "total", "avg", "amount", "score"],
    "collection": ["items", "values", "elements", "entries", "buffer"],
    "local": ["value", "result", "item", "data", "holder"],
    "param-int": ["val", "num", "amount", "limit", "size"],
    "param-text": ["input", "text", "name", "word", "label"],
    "param": ["val", "input", "arg", "value", "given"],
    "method": ["calculate", "evaluate", "process", "determine", "combine", "resolve"],
}

_COLLECTION_TYPES = r"(List|ArrayList|Set|HashSet|Map|HashMap|Collection|Deque|Queue|Stack)\b"


def _infer_role(request: NamingRequest) -> str:
    ctx = request.masked_context
    mask = re.escape(MASK_TOKEN)
    if request.kind == "method":
        return "method"
    counterish = (
        re.search(rf"for\s*\([^)]*{mask}", ctx)
        or re.search(rf"{mask}\s*\+\+", ctx)
        or re.search(rf"\+\+\s*{mask}", ctx)
        or re.search(rf"{mask}\s*\+=\s*1\b", ctx)
    )
    decl_type = None
    m = re.search(rf"([A-Za-z_$][\w$<>, .\[\]]*?)\s+{mask}\s*[=;,):\[]", ctx)
    if m:
        decl_type = m.group(1).strip()
    role_by_type = None
    if decl_type:
        if re.search(r"\bboolean\b", decl_type):
            role_by_type = "boolean"
        elif re.search(r"\bString\b|\bchar\b|\bCharSequence\b", decl_type):
            role_by_type = "text"
        elif re.search(r"\b(double|float)\b", decl_type):
            role_by_type = "decimal"
        elif re.search(_COLLECTION_TYPES, decl_type) or "[]" in decl_type:
            role_by_type = "collection"
        elif re.search(r"\b(int|long|short|byte|Integer|Long)\b", decl_type):
            role_by_type = "int"
    if request.kind == "parameter":
        if role_by_type in ("int", "decimal"):
            return "param-int"
        if role_by_type == "text":
            return "param-text"
        if role_by_type in ("boolean", "collection"):
            return role_by_type
        return "param"
    if counterish and role_by_type in (None, "int"):
        return "counter"
    return role_by_type or "local"


def _jitter(original: str, candidate: str) -> float:
    digest = hashlib.sha256(f"{original}:{candidate}".encode()).digest()
    return (digest[0] * 256 + digest[1]) / 65536 * 0.01


class BuiltinNamingProvider:
    """Deterministic dictionary-backed candidate generator."""

    def suggest(self, request: NamingRequest) -> list[NameCandidate]:
        role = _infer_role(request)
        pool = _POOLS[role]
        candidates: list[NameCandidate] = []
        for i, name in enumerate(pool):
            if name == request.original_name or not is_valid_identifier(name):
                continue
            score = round(0.9 - 0.06 * i - _jitter(request.original_name, name), 4)
            candidates.append(NameCandidate(name, max(score, 0.01)))
            if len(candidates) == request.k:
                break
        return candidates

    def close(self) -> None:  # interface symmetry with the external provider
        pass


# ----------------------------------------------------------------------
# External provider
# ----------------------------------------------------------------------


class ExternalNamingProvider:
    """Subprocess-backed provider speaking the line protocol.

    The handle is serially owned: one in-flight request per process.
    """

    def __init__(self, command: str | list[str], timeout: float = DEFAULT_TIMEOUT) -> None:
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self.timeout = timeout
        self._proc: subprocess.Popen | None = None

    def _ensure_started(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            try:
                self._proc = subprocess.Popen(
                    self.command,
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    stderr=subprocess.DEVNULL,
                    text=True,
                )
            except OSError as err:
                raise ProviderError(f"cannot start naming provider: {err}") from err
        return self._proc

    def suggest(self, request: NamingRequest) -> list[NameCandidate]:
        proc = self._ensure_started()
        record = json.dumps(
            {
                "v": PROTOCOL_VERSION,
                "context": request.masked_context,
                "original": request.original_name,
                "kind": request.kind,
                "k": request.k,
            }
        )
        try:
            assert proc.stdin is not None
            proc.stdin.write(record + "\n")
            proc.stdin.flush()
        except (BrokenPipeError, OSError) as err:
            self.close()
            raise ProviderError(f"naming provider pipe failed: {err}") from err

        line = self._read_line_with_timeout(proc)
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as err:
            self.close()
            raise ProviderError(f"naming provider sent invalid JSON: {line!r}") from err
        if not isinstance(payload, dict) or payload.get("v") != PROTOCOL_VERSION:
            self.close()
            raise ProviderError(f"naming provider protocol mismatch: {payload!r}")
        raw = payload.get("candidates")
        if not isinstance(raw, list):
            self.close()
            raise ProviderError("naming provider response lacks candidates")
        out: list[NameCandidate] = []
        for item in raw:
            if (
                not isinstance(item, dict)
                or not isinstance(item.get("name"), str)
                or not isinstance(item.get("score"), (int, float))
            ):
                self.close()
                raise ProviderError(f"malformed candidate record: {item!r}")
            out.append(NameCandidate(item["name"], float(item["score"])))
        return out

    def _read_line_with_timeout(self, proc: subprocess.Popen) -> str:
        result: list[str] = []

        def read() -> None:
            assert proc.stdout is not None
            result.append(proc.stdout.readline())

        t = threading.Thread(target=read, daemon=True)
        t.start()
        t.join(self.timeout)
        if t.is_alive() or not result or not result[0]:
            self.close()
            raise ProviderError(
                f"naming provider timed out after {self.timeout}s or closed its stream"
            )
        return result[0]

    def close(self) -> None:
        if self._proc is not None:
            self._proc.kill()
            self._proc.wait()
            self._proc = None

    def __enter__(self) -> "ExternalNamingProvider":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


# ----------------------------------------------------------------------
# Operations
# ----------------------------------------------------------------------


def suggest_names(request: NamingRequest, provider) -> list[NameCandidate]:
    """At most k distinct, lexically valid candidates, best first.

    Provider output is sanitized: invalid identifiers, duplicates, and the
    original name are dropped; ordering is by descending score with the
    provider's own order breaking ties.
    """
    raw = provider.suggest(request)
    seen: set[str] = set()
    cleaned: list[NameCandidate] = []
    for c in sorted(raw, key=lambda c: -c.score):
        if c.name == request.original_name or c.name in seen:
            continue
        if not is_valid_identifier(c.name):
            continue
        seen.add(c.name)
        cleaned.append(c)
        if len(cleaned) == request.k:
            break
    return cleaned


def select_name(candidates: list[NameCandidate], visible_names) -> str:
    """Highest-scored candidate not in ``visible_names``.

    When every candidate collides, the top candidate gets a numeric
    suffix (count -> count2, count3, ...) until it is fresh. Callers that
    need the result to differ from the original name include the original
    in ``visible_names``; the benchmark engine does.
    """
    if not candidates:
        raise ContractViolation("select_name requires at least one candidate")
    visible = set(visible_names)
    for c in candidates:
        if c.name not in visible:
            return c.name
    base = candidates[0].name
    n = 2
    while f"{base}{n}" in visible:
        n += 1
    return f"{base}{n}"
