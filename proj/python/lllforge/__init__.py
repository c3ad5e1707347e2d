"""Python interface to the constructive Lovasz Local Lemma solver."""

from _lllforge import (
    InputError,
    InternalError,
    ValidationError,
    enumerate_witnesses,
    fast_path,
    solve,
    validate,
)

__all__ = [
    "InputError",
    "InternalError",
    "ValidationError",
    "enumerate_witnesses",
    "fast_path",
    "solve",
    "validate",
]
