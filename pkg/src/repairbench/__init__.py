"""Robustness benchmark construction and evaluation for automated program repair.

The package applies eight semantics-preserving transformations to
function-level Java bug instances, remaps buggy-line annotations through
the resulting edit scripts, validates behavior preservation by executing
developer tests, and scores repair models with execution-based metrics.
"""

__version__ = "0.1.0"
