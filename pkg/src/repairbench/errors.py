"""Exception hierarchy shared across the package.

The split mirrors the failure categories the pipeline distinguishes:
bad inputs, contract misuse by callers, sites a transformation cannot
legally apply to, misbehaving external naming providers, metric inputs
that cannot be scored, and missing external infrastructure (toolchains).
An infrastructure failure is never folded into an ordinary false verdict.
"""

from __future__ import annotations


class RepairBenchError(Exception):
    """Base class for all package errors."""


class InputError(RepairBenchError):
    """Malformed input data: bad encoding, missing file, bad line range."""


class ContractViolation(RepairBenchError):
    """A caller broke an operation's precondition (programming error)."""


class ApplicabilityError(RepairBenchError):
    """A transformation was requested at a site it cannot legally change."""


class ProviderError(RepairBenchError):
    """An external naming provider timed out or violated the wire protocol."""


class MetricError(RepairBenchError):
    """A metric could not be computed for a pair (e.g. untokenizable input)."""


class InfrastructureError(RepairBenchError):
    """External machinery is unavailable (toolchain missing, spawn failure)."""
