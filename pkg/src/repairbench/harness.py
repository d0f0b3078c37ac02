"""Compile-and-test execution harness over an external JDK.

Compilation and test runs happen in isolated working directories via
subprocess calls to `javac` and `java`. Verdicts come from the test
process's exit status only; a missing toolchain or a failed spawn raises
InfrastructureError and is never folded into a fail verdict.
"""

from __future__ import annotations

import os
import re
import shutil
import signal
import subprocess
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .errors import ContractViolation, InfrastructureError

DEFAULT_TIMEOUT = 30.0
GRACE_PERIOD = 2.0
_DETAIL_LIMIT = 4000

PASS = "pass"
FAIL = "fail"
COMPILE_ERROR = "compile-error"
TIMEOUT = "timeout"
CRASH = "crash"


@dataclass(frozen=True)
class CompileResult:
    success: bool
    diagnostics: str
    artifacts_dir: Path


@dataclass(frozen=True)
class TestVerdict:
    status: str  # pass, fail, compile-error, timeout, crash
    duration: float
    detail: str = ""


@dataclass(frozen=True)
class PatchVerdict:
    instance_id: str
    ordinal: int
    verdict: TestVerdict


@dataclass(frozen=True)
class JavaToolchain:
    javac: Path
    java: Path


def discover_toolchain(jdk_home: str | None = None) -> JavaToolchain:
    """Locate javac/java from --jdk-home, JDK_HOME, JAVA_HOME, or PATH."""
    roots = [jdk_home, os.environ.get("JDK_HOME"), os.environ.get("JAVA_HOME")]
    for root in roots:
        if not root:
            continue
        javac = Path(root) / "bin" / "javac"
        java = Path(root) / "bin" / "java"
        if javac.exists() and java.exists():
            return JavaToolchain(javac, java)
        raise InfrastructureError(f"no javac/java under {root}/bin")
    javac_path = shutil.which("javac")
    java_path = shutil.which("java")
    if javac_path and java_path:
        return JavaToolchain(Path(javac_path), Path(java_path))
    raise InfrastructureError(
        "no JDK found: set --jdk-home, JDK_HOME, or JAVA_HOME, or put javac on PATH"
    )


def toolchain_available(jdk_home: str | None = None) -> bool:
    try:
        discover_toolchain(jdk_home)
        return True
    except InfrastructureError:
        return False


def main_class_of(source: str) -> str | None:
    """Class name a compilation unit must be saved under (public first)."""
    m = re.search(r"public\s+(?:final\s+|abstract\s+)?class\s+([A-Za-z_$][\w$]*)", source)
    if m:
        return m.group(1)
    m = re.search(r"\bclass\s+([A-Za-z_$][\w$]*)", source)
    return m.group(1) if m else None


class ExecHarness:
    """Runs compile + test cycles in private working directories."""

    def __init__(
        self,
        toolchain: JavaToolchain,
        timeout: float = DEFAULT_TIMEOUT,
        workspace: Path | None = None,
    ) -> None:
        self.toolchain = toolchain
        self.timeout = timeout
        self._workspace = workspace

    def _new_workdir(self) -> Path:
        if self._workspace is not None:
            self._workspace.mkdir(parents=True, exist_ok=True)
            return Path(tempfile.mkdtemp(prefix="run_", dir=self._workspace))
        return Path(tempfile.mkdtemp(prefix="repairbench_"))

    def compile(self, sources: dict[str, str], workdir: Path) -> CompileResult:
        """Write sources (class name -> text) into ``workdir`` and compile."""
        workdir.mkdir(parents=True, exist_ok=True)
        files = []
        for name, text in sources.items():
            path = workdir / f"{name}.java"
            path.write_text(text, encoding="utf-8")
            files.append(path.name)
        cmd = [str(self.toolchain.javac), "-d", ".", *files]
        try:
            proc = subprocess.run(
                cmd,
                cwd=workdir,
                capture_output=True,
                text=True,
                timeout=max(self.timeout, 60.0),
            )
        except FileNotFoundError as err:
            raise InfrastructureError(f"cannot execute {cmd[0]}: {err}") from err
        except subprocess.TimeoutExpired:
            return CompileResult(False, "compiler timed out", workdir)
        diagnostics = (proc.stdout + proc.stderr)[:_DETAIL_LIMIT]
        return CompileResult(proc.returncode == 0, diagnostics, workdir)

    def run_tests(
        self, compiled: CompileResult, main_class: str, timeout: float | None = None
    ) -> TestVerdict:
        if not compiled.success:
            raise ContractViolation("run_tests requires a successful compile")
        limit = timeout if timeout is not None else self.timeout
        cmd = [str(self.toolchain.java), "-cp", ".", main_class]
        start = time.monotonic()
        try:
            proc = subprocess.Popen(
                cmd,
                cwd=compiled.artifacts_dir,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                start_new_session=True,  # kill the whole group on timeout
            )
        except FileNotFoundError as err:
            raise InfrastructureError(f"cannot execute {cmd[0]}: {err}") from err
        try:
            out, err = proc.communicate(timeout=limit)
        except subprocess.TimeoutExpired:
            try:
                os.killpg(os.getpgid(proc.pid), signal.SIGKILL)
            except (ProcessLookupError, PermissionError):
                proc.kill()
            proc.communicate()
            return TestVerdict(TIMEOUT, time.monotonic() - start, f"killed after {limit}s")
        duration = time.monotonic() - start
        detail = (out + err)[:_DETAIL_LIMIT]
        if proc.returncode == 0:
            return TestVerdict(PASS, duration, detail)
        if proc.returncode < 0:
            return TestVerdict(CRASH, duration, f"signal {-proc.returncode}: {detail}")
        return TestVerdict(FAIL, duration, detail)

    def compile_and_run(
        self,
        program_source: str,
        test_source: str,
        timeout: float | None = None,
    ) -> TestVerdict:
        """One-shot compile of program + test, then run the test main class."""
        workdir = self._new_workdir()
        start = time.monotonic()
        try:
            sources = {}
            prog_class = main_class_of(program_source)
            test_class = main_class_of(test_source)
            if prog_class is None or test_class is None:
                return TestVerdict(
                    COMPILE_ERROR, 0.0, "cannot determine class names for sources"
                )
            sources[prog_class] = program_source
            sources[test_class] = test_source
            compiled = self.compile(sources, workdir)
            if not compiled.success:
                return TestVerdict(
                    COMPILE_ERROR, time.monotonic() - start, compiled.diagnostics
                )
            return self.run_tests(compiled, test_class, timeout)
        finally:
            shutil.rmtree(workdir, ignore_errors=True)

    def evaluate_patch(
        self,
        instance_id: str,
        ordinal: int,
        patch_source: str,
        test_source: str,
        timeout: float | None = None,
    ) -> PatchVerdict:
        verdict = self.compile_and_run(patch_source, test_source, timeout)
        return PatchVerdict(instance_id, ordinal, verdict)

    def evaluate_many(self, tasks, jobs: int | None = None) -> list[PatchVerdict]:
        """Evaluate (instance_id, ordinal, patch_source, test_source) tuples.

        Results come back in task order regardless of completion order.
        """
        workers = jobs or os.cpu_count() or 1
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(self.evaluate_patch, *task) for task in tasks
            ]
            return [f.result() for f in futures]


def discover_patches(patches_root: Path, instance_id: str) -> list[tuple[int, Path]]:
    """Patch files for one instance: `<root>/<id>/<ordinal>.java`, sorted."""
    instance_dir = patches_root / instance_id
    if not instance_dir.is_dir():
        return []
    found = []
    for path in instance_dir.glob("*.java"):
        try:
            found.append((int(path.stem), path))
        except ValueError:
            continue
    return sorted(found)
