"""Perfect fractional matchings with certificates, the U(beta) count and the
monotone basis of the zero-sum cone."""

import math
import random
from fractions import Fraction
from itertools import combinations

from loguru import logger

from fracmatch.arith import binomial
from fracmatch.core.config import get_settings
from fracmatch.core.errors import CapExceededError, CertificateError, PreconditionError
from fracmatch.schemas.hull import (
    Certificate,
    CountResult,
    Hypergraph,
    PfmCertificate,
    SeparationCertificate,
    WeightVector,
    mask_of,
)
from fracmatch.services.simplex import phase_one


def all_k_sets(n: int, k: int) -> list[int]:
    """Every k-subset of [n] as a bitmask, in lexicographic vertex order."""
    return [mask_of(v + 1 for v in c) for c in combinations(range(n), k)]


def edge_weight(weights: list[Fraction], mask: int) -> Fraction:
    total = Fraction(0)
    v = 0
    while mask:
        if mask & 1:
            total += weights[v]
        mask >>= 1
        v += 1
    return total


def scale_to_integers(values: list[Fraction]) -> list[Fraction]:
    """Positive multiple of values with coprime integer entries."""
    lcm = 1
    for v in values:
        lcm = math.lcm(lcm, v.denominator)
    ints = [int(v * lcm) for v in values]
    g = math.gcd(*ints) or 1
    return [Fraction(i // g) for i in ints]


def has_pfm(h: Hypergraph, edge_cap: int | None = None) -> Certificate:
    """Decide whether (k/n, ..., k/n) lies in the convex hull of the edge indicators."""
    cap = get_settings().lp_edge_cap if edge_cap is None else edge_cap
    if h.k >= h.n:
        raise PreconditionError(f"need k < n, got n={h.n}, k={h.k}")
    if not h.edges:
        logger.warning(f"Empty instance on n={h.n}: separation is vacuous")
        return SeparationCertificate(omega=[Fraction(0)] * h.n, vacuous=True)
    if len(h.edges) > cap:
        raise CapExceededError("edges", len(h.edges), cap)

    target = Fraction(h.k, h.n)
    rows = [[Fraction((e >> v) & 1) for e in h.edges] for v in range(h.n)]
    result = phase_one(rows, [target] * h.n)
    logger.debug(f"phase 1 on {len(h.edges)} edges: {result.pivots} pivots")

    cert: Certificate
    if result.feasible:
        support = [(e, x) for e, x in zip(h.edges, result.x) if x > 0]
        cert = PfmCertificate(support=[e for e, _ in support], alpha=[x for _, x in support])
    else:
        mean = sum(result.dual, Fraction(0)) / h.n
        cert = SeparationCertificate(omega=scale_to_integers([u - mean for u in result.dual]))
    if not verify_certificate(h, cert):
        raise CertificateError(f"{cert.kind} certificate failed exact re-verification")
    return cert


def verify_certificate(h: Hypergraph, cert: Certificate) -> bool:
    """Re-check a certificate against the instance in exact arithmetic."""
    if isinstance(cert, PfmCertificate):
        edges = set(h.edges)
        if any(e not in edges for e in cert.support):
            return False
        if any(x < 0 for x in cert.alpha) or sum(cert.alpha, Fraction(0)) != 1:
            return False
        target = Fraction(h.k, h.n)
        for v in range(h.n):
            covered = sum((x for e, x in zip(cert.support, cert.alpha) if e >> v & 1), Fraction(0))
            if covered != target:
                return False
        return True

    if len(cert.omega) != h.n or sum(cert.omega, Fraction(0)) != 0:
        return False
    if cert.vacuous:
        return not h.edges
    return all(edge_weight(cert.omega, e) < 0 for e in h.edges)


def count_U(beta: WeightVector, k: int) -> CountResult:
    """k-sets whose beta-sum is >= 0, ties at zero included."""
    n = beta.n
    if not 1 <= k < n:
        raise PreconditionError(f"need 1 <= k < n, got n={n}, k={k}")
    family = [e for e in all_k_sets(n, k) if edge_weight(beta.beta, e) >= 0]
    return CountResult(
        count=len(family), family=family, negative=binomial(n, k) - len(family)
    )


def decompose_monotone(omega: list[Fraction]) -> list[Fraction]:
    """y >= 0 with omega = sum_j y_j z_j, z_j = (n-j, ..., n-j, -j, ..., -j) (j leading entries)."""
    n = len(omega)
    if n < 2:
        raise PreconditionError("need at least two coordinates")
    if sum(omega, Fraction(0)) != 0:
        raise PreconditionError("omega must sum to 0")
    if any(omega[j] < omega[j + 1] for j in range(n - 1)):
        raise PreconditionError("omega must be nonincreasing")
    return [Fraction(omega[j] - omega[j + 1], n) for j in range(n - 1)]


def compose_monotone(y: list[Fraction], n: int) -> list[Fraction]:
    """Inverse of decompose_monotone."""
    if len(y) != n - 1:
        raise PreconditionError(f"need {n - 1} coordinates, got {len(y)}")
    omega = []
    for i in range(1, n + 1):
        upper = sum((y[j - 1] * (n - j) for j in range(i, n)), Fraction(0))
        lower = sum((y[j - 1] * j for j in range(1, i)), Fraction(0))
        omega.append(upper - lower)
    return omega


def hyperplane_coefficients(mask: int, n: int, k: int) -> list[int]:
    """c_j = n |e & [j]| - j k for j = 1..n-1; (omega, e) = sum_j y_j c_j."""
    coeffs = []
    prefix = 0
    for j in range(1, n):
        prefix += (mask >> (j - 1)) & 1
        coeffs.append(n * prefix - j * k)
    return coeffs


def prefix_form(y: list[Fraction], mask: int, n: int, k: int) -> Fraction:
    """n * sum_j y_j S_j(e) - k * sum_j j y_j, with S_j(e) = |e & [j]|."""
    s = Fraction(0)
    prefix = 0
    for j in range(1, n):
        prefix += (mask >> (j - 1)) & 1
        s += y[j - 1] * prefix
    return n * s - k * sum((j * y[j - 1] for j in range(1, n)), Fraction(0))


def random_hypergraph(n: int, k: int, m: int, rng: random.Random) -> Hypergraph:
    """m distinct uniformly random k-subsets of [n]."""
    total = binomial(n, k)
    if m > total:
        raise PreconditionError(f"only {total} k-sets exist, asked for {m}")
    edges: set[int] = set()
    while len(edges) < m:
        edges.add(mask_of(v + 1 for v in rng.sample(range(n), k)))
    return Hypergraph(n=n, k=k, edges=list(edges))


def complement_hypergraph(h: Hypergraph) -> Hypergraph:
    """The k-sets of [n] that are not edges of h."""
    present = set(h.edges)
    return Hypergraph(n=h.n, k=h.k, edges=[e for e in all_k_sets(h.n, h.k) if e not in present])
