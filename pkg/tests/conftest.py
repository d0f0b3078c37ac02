from __future__ import annotations

import os
import stat
from pathlib import Path

import pytest

from repairbench.benchmark import LoadResult, load_base_dataset
from repairbench.harness import ExecHarness, JavaToolchain, toolchain_available

CORPUS_ROOT = Path(__file__).parent / "fixtures" / "corpus"
CORPUS_MANIFEST = CORPUS_ROOT / "corpus.manifest"

requires_jdk = pytest.mark.skipif(
    not toolchain_available(), reason="no JDK available (JDK_HOME/JAVA_HOME/PATH)"
)


@pytest.fixture(scope="session")
def corpus() -> LoadResult:
    result = load_base_dataset(CORPUS_ROOT, CORPUS_MANIFEST)
    assert not result.rejected, result.rejected
    assert len(result.instances) >= 20
    return result


def make_fake_jdk(
    root: Path,
    javac_script: str | None = None,
    java_script: str | None = None,
) -> JavaToolchain:
    """Install scripted javac/java stand-ins under root/bin.

    Defaults: javac succeeds and touches a marker; java exits 0.
    """
    bin_dir = root / "bin"
    bin_dir.mkdir(parents=True, exist_ok=True)
    javac = bin_dir / "javac"
    java = bin_dir / "java"
    javac.write_text(javac_script or "#!/bin/sh\nexit 0\n")
    java.write_text(java_script or "#!/bin/sh\nexit 0\n")
    for path in (javac, java):
        path.chmod(path.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
    return JavaToolchain(javac, java)


@pytest.fixture
def passing_harness(tmp_path: Path) -> ExecHarness:
    toolchain = make_fake_jdk(tmp_path / "jdk")
    return ExecHarness(toolchain, timeout=5.0)
