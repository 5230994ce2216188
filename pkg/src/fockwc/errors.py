"""Exception taxonomy shared by all fockwc modules.

Every failure mode that callers are expected to branch on gets its own class;
the CLI maps them onto process exit codes (see fockwc.cli).
"""


class FockwcError(Exception):
    """Base class for all structured fockwc errors."""


class DegenerateMap(FockwcError):
    """Affine map request that has no answer (a = 1 with b != 0, or a in {0, 1}
    where a fixed-point construction is required)."""


class InexactInput(FockwcError):
    """An exact decision was requested but the input lacks the polar-exact
    annotation needed to decide it."""


class UnsupportedCombination(FockwcError):
    """Two exact angles whose rational parts interact in a way the catalog
    cannot decide (conservative refusal)."""


class UnsupportedMultiplier(FockwcError):
    """Operation requires a multiplier shape outside what was given
    (e.g. a zero-free, constant-polynomial multiplier)."""


class Unbounded(FockwcError):
    """Operation requires a bounded operator but the symbol fails the
    boundedness test."""


class TruncationOverflow(FockwcError):
    """A truncated-matrix computation produced entries beyond the configured
    log-magnitude cap (diverging symbol or overflow)."""


class DimensionMismatch(FockwcError):
    """Matrix/vector sizes disagree."""


class ZeroVector(FockwcError):
    """A normalized quantity was requested for the zero vector."""


class NoConvergence(FockwcError):
    """Iterative solver hit its iteration cap before the tolerance.

    Carries the last estimate and the last observed gap so callers can report
    partial progress.
    """

    def __init__(self, message: str, estimate: float, gap: float):
        super().__init__(message)
        self.estimate = estimate
        self.gap = gap


class BudgetExceeded(FockwcError):
    """Requested orbit length exceeds the configured work budget."""


class RegionInvalid(FockwcError):
    """No invariant region exists for the requested symbol (a = 1, b = 0)."""
