"""Sampling, normalisation and marked-length coordinates on the moduli space of ideal n-gons.

A polygon is in *standard position* when its first three vertices sit at
angles 0, 2pi/3, 4pi/3; the remaining n-3 angles lie in (4pi/3, 2pi) and are
the free coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernel import EPS_SEP, TWO_PI, GeometryError, mobius_normalize
from .polygon import (
    IdealPolygon,
    PolygonError,
    Triangulation,
    all_orthogeodesics,
    decomposition_from_triangulation,
    regular,
    orthogeodesic,
    chord_to_sides,
)

STANDARD = (0.0, TWO_PI / 3.0, 2.0 * TWO_PI / 3.0)
_ARC = TWO_PI / 3.0  # room left for the free vertices


class ReconstructionError(GeometryError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class ModuliSample:
    polygon: IdealPolygon
    seed: int
    n: int


@dataclass(frozen=True)
class MarkedLengths:
    triangulation: Triangulation
    lengths: tuple[float, ...]

    def __post_init__(self):
        lengths = tuple(float(x) for x in self.lengths)
        if len(lengths) != self.triangulation.n - 3:
            raise PolygonError(
                f"expected {self.triangulation.n - 3} lengths, got {len(lengths)}"
            )
        if not all(x > 0.0 and math.isfinite(x) for x in lengths):
            raise PolygonError("marked lengths must be finite and positive")
        object.__setattr__(self, "lengths", lengths)


def normalize(P: IdealPolygon) -> IdealPolygon:
    """Isometric copy of P with vertices 0, 1, 2 at angles 0, 2pi/3, 4pi/3."""
    T = mobius_normalize(P.vertex(0), P.vertex(1), P.vertex(2))
    rest = [T.apply_angle(a) for a in P.angles[3:]]
    # vertex 0 maps to angle 0, so a rounded 2pi - tiny may come back as 0
    rest = [a if a > STANDARD[2] else a + TWO_PI for a in rest]
    rest = [a if a < TWO_PI else TWO_PI - EPS_SEP for a in rest]
    return IdealPolygon(STANDARD + tuple(rest))


def sample(n: int, seed: int) -> ModuliSample:
    """Standard-position polygon with sorted uniform free angles in (4pi/3, 2pi)."""
    if n < 3:
        raise PolygonError(f"n must be >= 3, got {n}")
    rng = np.random.default_rng(seed)
    min_gap = 10 * EPS_SEP
    while True:
        free = np.sort(rng.uniform(STANDARD[2], TWO_PI, n - 3))
        gaps = np.diff(np.concatenate([[STANDARD[2]], free, [TWO_PI]]))
        if np.all(gaps > min_gap):
            break
    return ModuliSample(IdealPolygon(STANDARD + tuple(float(a) for a in free)), seed, n)


def marked_lengths(P: IdealPolygon, T: Triangulation) -> MarkedLengths:
    dec = decomposition_from_triangulation(P, T)
    by_sides = {m.sides: m.length for m in dec.members}
    return MarkedLengths(T, tuple(by_sides[chord_to_sides(P.n, c)] for c in T.chords))


def spectrum(P: IdealPolygon) -> list[float]:
    """Sorted lengths of all n(n-3)/2 orthogeodesics."""
    return sorted(o.length for o in all_orthogeodesics(P))


def length_table(P: IdealPolygon) -> dict[tuple[int, int], float]:
    return {(o.i, o.j): o.length for o in all_orthogeodesics(P)}


def isometric(P: IdealPolygon, Q: IdealPolygon, tol: float = 1e-8) -> bool:
    """Spectra agree and some cyclic relabelling matches every orthogeodesic length."""
    if P.n != Q.n:
        return False
    n = P.n
    if n == 3:
        return True
    sp, sq = spectrum(P), spectrum(Q)
    if max(abs(a - b) for a, b in zip(sp, sq)) > tol:
        return False
    LP, LQ = length_table(P), length_table(Q)
    for r in range(n):
        ok = True
        for (i, j), x in LP.items():
            a, b = sorted(((i + r) % n, (j + r) % n))
            if abs(LQ[(a, b)] - x) > tol:
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------- reconstruction


def _angles_from_params(u: np.ndarray) -> tuple[float, ...]:
    # gaps = ARC * softmax([0, u]); n-2 gaps between 4pi/3, the free angles and 2pi
    w = np.concatenate([[0.0], u])
    w = np.exp(w - w.max())
    gaps = _ARC * w / w.sum()
    free = STANDARD[2] + np.cumsum(gaps)[:-1]
    return STANDARD + tuple(float(a) for a in free)


def _params_from_polygon(P: IdealPolygon) -> np.ndarray:
    free = np.array(P.angles[3:])
    gaps = np.diff(np.concatenate([[STANDARD[2]], free, [TWO_PI]]))
    return np.log(gaps[1:] / gaps[0])


def _residual(u: np.ndarray, M: MarkedLengths) -> np.ndarray:
    P = IdealPolygon(_angles_from_params(u))
    n = P.n
    got = [orthogeodesic(P, *chord_to_sides(n, c)).length for c in M.triangulation.chords]
    return np.array(got) - np.array(M.lengths)


def residual_jacobian(M: MarkedLengths, u: np.ndarray, step: float = 1e-7) -> np.ndarray:
    """Central finite-difference Jacobian of the marked-length residual in log-gap coordinates."""
    m = len(u)
    J = np.empty((m, m))
    for k in range(m):
        e = np.zeros(m)
        e[k] = step
        J[:, k] = (_residual(u + e, M) - _residual(u - e, M)) / (2.0 * step)
    return J


def reconstruct(
    M: MarkedLengths,
    *,
    tol: float = 1e-10,
    max_iter: int = 200,
    max_halvings: int = 60,
) -> IdealPolygon:
    """Polygon in standard position whose decomposition along M.triangulation has M.lengths.

    Damped Newton from the regular polygon.  Raises ReconstructionError with
    the best residual reached if it does not converge.
    """
    n = M.triangulation.n
    if n < 4:
        raise PolygonError(f"reconstruction needs n >= 4, got {n}")
    u = _params_from_polygon(normalize(regular(n)))
    F = _residual(u, M)
    res = float(np.max(np.abs(F)))
    for _ in range(max_iter):
        if res < tol:
            return IdealPolygon(_angles_from_params(u))
        J = residual_jacobian(M, u)
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, -F, rcond=None)[0]
        lam = 1.0
        for _ in range(max_halvings):
            u_new = u + lam * step
            try:
                F_new = _residual(u_new, M)
            except (GeometryError, ValueError, OverflowError):
                lam *= 0.5
                continue
            res_new = float(np.max(np.abs(F_new)))
            if res_new < res:
                break
            lam *= 0.5
        else:
            raise ReconstructionError(
                f"line search stalled at residual {res:.3e}", residual=res
            )
        u, F, res = u_new, F_new, res_new
    if res < tol:
        return IdealPolygon(_angles_from_params(u))
    raise ReconstructionError(
        f"no convergence after {max_iter} iterations (residual {res:.3e})", residual=res
    )


def free_angles(P: IdealPolygon) -> tuple[float, ...]:
    return normalize(P).angles[3:]

