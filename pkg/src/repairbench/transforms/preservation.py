"""Behavior-preservation oracle: run the developer tests on the
transformed fixed program.

A transformation is kept only if the fixed program still compiles and
passes every test after the rewrite. A missing toolchain raises, it never
masquerades as a false verdict.
"""

from __future__ import annotations

from ..sourcetext import SourceText
from . import TransformResult


def validate_preservation(
    fixed_program: SourceText,
    result: TransformResult,
    tests: SourceText,
    harness,
) -> bool:
    """True iff the transformed fixed program passes all tests.

    ``harness`` is a Toolchain-backed runner (see the harness module).
    ``fixed_program`` is the untransformed fixed source, kept in the
    signature for symmetry and debugging; the verdict is computed on
    ``result.output``.
    """
    verdict = harness.compile_and_run(result.output.content, tests.content)
    return verdict.status == "pass"
