"""Hypergraph, certificate and weight-vector schemas."""

from collections.abc import Iterable
from fractions import Fraction

from pydantic import BaseModel, Field, field_validator, model_validator

from fracmatch.schemas.common import RatioField


def vertices_of(mask: int) -> list[int]:
    """1-based vertices of a bitmask edge, ascending."""
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << (v - 1)
    return mask


class Hypergraph(BaseModel):
    """k-uniform hypergraph on [n]; edges are bitmasks with bit v-1 for vertex v."""

    n: int = Field(ge=1)
    k: int = Field(ge=1)
    edges: list[int] = []

    @field_validator("edges")
    @classmethod
    def canonical_edges(cls, v: list[int]) -> list[int]:
        if len(set(v)) != len(v):
            raise ValueError("duplicate edges")
        return sorted(v)

    @model_validator(mode="after")
    def check_edges(self) -> "Hypergraph":
        for e in self.edges:
            if e <= 0 or e >= 1 << self.n:
                raise ValueError(f"edge {vertices_of(e)} has a vertex outside [1, {self.n}]")
            if e.bit_count() != self.k:
                raise ValueError(f"edge {vertices_of(e)} does not have {self.k} vertices")
        return self

    @classmethod
    def from_sets(cls, n: int, k: int, sets: Iterable[Iterable[int]]) -> "Hypergraph":
        return cls(n=n, k=k, edges=[mask_of(s) for s in sets])

    def edge_sets(self) -> list[list[int]]:
        return [vertices_of(e) for e in self.edges]

    def __len__(self) -> int:
        return len(self.edges)


class PfmCertificate(BaseModel):
    """Weights alpha on edges whose combination is (k/n, ..., k/n)."""

    kind: str = "pfm"
    support: list[int]
    alpha: list[RatioField]

    @model_validator(mode="after")
    def check_shape(self) -> "PfmCertificate":
        if len(self.support) != len(self.alpha):
            raise ValueError("support and alpha differ in length")
        return self


class SeparationCertificate(BaseModel):
    """omega with sum 0 and (omega, e) < 0 on every edge.

    ``vacuous`` marks the empty instance, where any omega separates.
    """

    kind: str = "separation"
    omega: list[RatioField]
    vacuous: bool = False


Certificate = PfmCertificate | SeparationCertificate


class WeightVector(BaseModel):
    """beta in Q^n with sum 0, not all zero."""

    beta: list[RatioField] = Field(min_length=2)

    @model_validator(mode="after")
    def check_beta(self) -> "WeightVector":
        if sum(self.beta, Fraction(0)) != 0:
            raise ValueError("weights must sum to 0")
        if not any(self.beta):
            raise ValueError("weights must not all be zero")
        return self

    @property
    def n(self) -> int:
        return len(self.beta)


class CountResult(BaseModel):
    """Number of k-sets with nonnegative weight, with the family itself."""

    count: int
    family: list[int]
    negative: int


class OracleValue(BaseModel):
    """Brute-force extremum with a weight vector attaining it."""

    n: int
    k: int
    value: int
    witness: WeightVector
    faces: int
