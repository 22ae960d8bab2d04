"""High-precision truncated-channel calculator for two coupled oscillators."""

from ._qho import (
    ParseError,
    ValidationError,
    amplitudes,
    amplitudes_csv,
    bounds,
    channel_summary,
    derive,
    eval_psi,
    one_norm,
    set_precision_bits,
    sweep,
    verify,
)

__all__ = [
    "ParseError",
    "ValidationError",
    "amplitudes",
    "amplitudes_csv",
    "bounds",
    "channel_summary",
    "derive",
    "eval_psi",
    "one_norm",
    "set_precision_bits",
    "sweep",
    "verify",
]
