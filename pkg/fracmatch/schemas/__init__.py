"""Pydantic models for inputs, reports, ledgers and certificates."""

from fracmatch.schemas.bounds import BoundLine, BoundReport, LineStatus, LowerSumReport
from fracmatch.schemas.formula import (
    ComplementReport,
    ExtremumProfile,
    FormulaSummary,
    IdentityReport,
    PeriodicityReport,
)
from fracmatch.schemas.hull import (
    Certificate,
    Hypergraph,
    OracleValue,
    PfmCertificate,
    SeparationCertificate,
    WeightVector,
)
from fracmatch.schemas.run import RunConfig, SelftestReport
from fracmatch.schemas.smooth import AnnealResult, AnnealSummary, SmoothConfig
from fracmatch.schemas.sweep import CellVerdict, Checkpoint, SweepConfig, SweepRecord, SweepSummary

__all__ = [
    # Bounds
    "BoundLine",
    "BoundReport",
    "LineStatus",
    "LowerSumReport",
    # Formulas
    "ComplementReport",
    "ExtremumProfile",
    "FormulaSummary",
    "IdentityReport",
    "PeriodicityReport",
    # Hull
    "Certificate",
    "Hypergraph",
    "OracleValue",
    "PfmCertificate",
    "SeparationCertificate",
    "WeightVector",
    # Run
    "RunConfig",
    "SelftestReport",
    # Smoothing
    "AnnealResult",
    "AnnealSummary",
    "SmoothConfig",
    # Sweep
    "CellVerdict",
    "Checkpoint",
    "SweepConfig",
    "SweepRecord",
    "SweepSummary",
]
