"""Brute-force p(n,k) and q(n,k) over every face of the k-set hyperplane arrangement.

Weights are taken sorted nonincreasing, so a point of the zero-sum cone is
omega = sum_j y_j z_j with y >= 0 and the hyperplane of an edge e reads
sum_j y_j c_j(e) = 0 (see hull_service.hyperplane_coefficients). Sign vectors
are extended one hyperplane at a time; a sign is kept when an exact LP finds a
point realizing it.

Edge e dominates e' when the i-th smallest vertex of e is at most that of e'
for every i. Then c(e) >= c(e') entrywise, hence sign(e) >= sign(e') on the
cone; this prunes sign choices before any LP runs.
"""

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

from loguru import logger

from fracmatch.arith import binomial
from fracmatch.core.config import get_settings
from fracmatch.core.errors import CapExceededError, PreconditionError
from fracmatch.schemas.hull import OracleValue, WeightVector, vertices_of
from fracmatch.services.hull_service import (
    all_k_sets,
    compose_monotone,
    hyperplane_coefficients,
    scale_to_integers,
)
from fracmatch.services.simplex import phase_one


@dataclass
class Face:
    signs: list[int]
    witness: list[Fraction]


def _dominates(e: list[int], f: list[int]) -> bool:
    return all(x <= y for x, y in zip(e, f))


def _dot(c: list[int], y: list[Fraction]) -> Fraction:
    return sum((ci * yi for ci, yi in zip(c, y)), Fraction(0))


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


class Arrangement:
    """Faces of the arrangement of k-set hyperplanes inside the sorted zero-sum cone."""

    def __init__(self, n: int, k: int):
        self.n = n
        self.k = k
        self.edges = all_k_sets(n, k)
        self.coeffs = [hyperplane_coefficients(e, n, k) for e in self.edges]
        verts = [vertices_of(e) for e in self.edges]
        m = len(self.edges)
        # edges are in lexicographic order: dominating edges come first
        self.above = [[i for i in range(t) if _dominates(verts[i], verts[t])] for t in range(m)]
        self.below = [
            [i for i in range(t + 1, m) if _dominates(verts[t], verts[i])] for t in range(m)
        ]
        self.lp_calls = 0

    def _allowed(self, t: int, signs: list[int]) -> list[int]:
        hi = min((signs[i] for i in self.above[t]), default=1)
        return [s for s in (-1, 0, 1) if s <= hi]

    def _essential(self, signs: list[int]) -> list[int]:
        """Indices whose constraints are not implied by dominance."""
        done = len(signs)
        keep = []
        for t, s in enumerate(signs):
            if s > 0 and any(i < done and signs[i] > 0 for i in self.below[t]):
                continue
            if s < 0 and any(signs[i] < 0 for i in self.above[t]):
                continue
            keep.append(t)
        return keep

    def _realize(self, signs: list[int]) -> list[Fraction] | None:
        """A point y >= 0 with the given signs on the first len(signs) hyperplanes."""
        d = self.n - 1
        rows: list[list[Fraction]] = []
        rhs: list[Fraction] = []
        essential = self._essential(signs)
        strict = [t for t in essential if signs[t] != 0]
        equal = [t for t in essential if signs[t] == 0]
        n_slack = len(strict)
        for t in equal:
            rows.append([Fraction(c) for c in self.coeffs[t]] + [Fraction(0)] * n_slack)
            rhs.append(Fraction(0))
        for s_idx, t in enumerate(strict):
            s = signs[t]
            slack = [Fraction(0)] * n_slack
            slack[s_idx] = Fraction(-1)
            rows.append([Fraction(s * c) for c in self.coeffs[t]] + slack)
            rhs.append(Fraction(1))
        if not strict:
            # the cone is homogeneous; normalize to exclude the origin
            rows.append([Fraction(1)] * d)
            rhs.append(Fraction(1))
        self.lp_calls += 1
        result = phase_one(rows, rhs)
        return result.x[:d] if result.feasible else None

    def faces(self) -> list[Face]:
        """Every nonzero face, as full sign vectors with a realizing point."""
        faces = [Face(signs=[], witness=[Fraction(1)] * (self.n - 1))]
        for t, c in enumerate(self.coeffs):
            extended: list[Face] = []
            for face in faces:
                own = _sign(_dot(c, face.witness))
                for s in self._allowed(t, face.signs):
                    signs = face.signs + [s]
                    if s == own:
                        extended.append(Face(signs, face.witness))
                        continue
                    point = self._realize(signs)
                    if point is not None:
                        extended.append(Face(signs, point))
            faces = extended
            logger.debug(f"hyperplane {t + 1}/{len(self.coeffs)}: {len(faces)} faces")
        return faces

    def extremum(self, score: Callable[[list[int]], int], better: Callable[[int, int], bool]) -> OracleValue:
        best: Face | None = None
        best_value = 0
        faces = self.faces()
        for face in faces:
            value = score(face.signs)
            if best is None or better(value, best_value):
                best, best_value = face, value
        assert best is not None
        omega = scale_to_integers(compose_monotone(best.witness, self.n))
        logger.info(
            f"arrangement n={self.n}, k={self.k}: {len(faces)} faces, {self.lp_calls} LPs"
        )
        return OracleValue(
            n=self.n, k=self.k, value=best_value, witness=WeightVector(beta=omega), faces=len(faces)
        )


def _check(n: int, k: int, cap: int | None) -> None:
    limit = get_settings().oracle_n_cap if cap is None else cap
    if not 1 <= k < n:
        raise PreconditionError(f"need 1 <= k < n, got n={n}, k={k}")
    if n > limit:
        raise CapExceededError("n", n, limit)


def brute_force_q(n: int, k: int, cap: int | None = None) -> OracleValue:
    """Minimum over nonzero zero-sum weights of the number of k-sets with sum >= 0."""
    _check(n, k, cap)
    return Arrangement(n, k).extremum(lambda s: sum(1 for x in s if x >= 0), lambda a, b: a < b)


def brute_force_p(n: int, k: int, cap: int | None = None) -> OracleValue:
    """Maximum over nonzero zero-sum weights of the number of k-sets with sum > 0."""
    _check(n, k, cap)
    return Arrangement(n, k).extremum(lambda s: sum(1 for x in s if x > 0), lambda a, b: a > b)


def check_complementarity(n: int, k: int, cap: int | None = None) -> bool:
    """brute_force_p + brute_force_q = C(n, k)."""
    return brute_force_p(n, k, cap).value + brute_force_q(n, k, cap).value == binomial(n, k)
