"""Exception hierarchy shared by every chebkit module.

Each error carries a short machine-readable ``code`` which the command line
front end reports when it exits with status 2.
"""

from __future__ import annotations


class ChebkitError(Exception):
    """Base class of all library errors."""

    code = "error"


class ParseError(ChebkitError):
    code = "parse_error"


class ValidationError(ChebkitError):
    code = "validation_error"


class TraceError(ChebkitError):
    code = "trace_error"


class DomainError(ChebkitError):
    code = "domain_error"


class NonConvergence(ChebkitError):
    code = "non_convergence"


class RankDeficient(ChebkitError):
    code = "rank_deficient"


class Stalled(ChebkitError):
    code = "stalled"


class BadReference(ChebkitError):
    code = "bad_reference"


class LSQFailure(ChebkitError):
    code = "lsq_failure"


class NoProgress(ChebkitError):
    code = "no_progress"


class DegreeError(ChebkitError):
    code = "degree_error"


class BranchError(ChebkitError):
    code = "branch_error"


class IntegralDiverged(ChebkitError):
    code = "integral_diverged"


class EstimateUnstable(ChebkitError):
    code = "estimate_unstable"


class QuadratureDiverged(ChebkitError):
    code = "quadrature_diverged"


class SeriesUnstable(ChebkitError):
    code = "series_unstable"


class UnsupportedSeries(ChebkitError):
    code = "unsupported_series"
