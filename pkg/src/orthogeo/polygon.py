"""Ideal polygons, their orthogeodesics, and triangulation combinatorics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .kernel import (
    EPS_SEP,
    TWO_PI,
    DiskPoint,
    DomainError,
    GeometryError,
    Geodesic,
    IdealPoint,
    OrthoSegment,
    common_perpendicular,
    dist_pp,
    normalize_angle,
    signed_distance,
    signed_distances,
)


class PolygonError(GeometryError):
    pass


class AdjacentSidesError(PolygonError):
    pass


class OutsidePolygonError(PolygonError):
    pass


class TriangulationError(PolygonError):
    pass


class DecompositionError(PolygonError):
    pass


@dataclass(frozen=True)
class IdealPolygon:
    """Ideal n-gon with vertex angles sorted in [0, 2pi).

    Side k is the geodesic from vertex k to vertex k+1 (mod n), oriented so
    the interior is on its positive side.
    """

    angles: tuple[float, ...]

    def __post_init__(self):
        angles = tuple(float(a) for a in self.angles)
        if len(angles) < 3:
            raise PolygonError(f"an ideal polygon needs n >= 3 vertices, got {len(angles)}")
        for i, a in enumerate(angles):
            if not 0.0 <= a < TWO_PI:
                raise PolygonError(f"angle {i} = {a} outside [0, 2pi); use make_polygon")
        gaps = np.diff(angles + (angles[0] + TWO_PI,))
        if np.any(gaps <= EPS_SEP):
            k = int(np.argmin(gaps))
            raise PolygonError(
                f"vertices {k} and {(k + 1) % len(angles)} are not strictly increasing / distinct "
                f"(gap {gaps[k]:.3e} rad)"
            )
        object.__setattr__(self, "angles", angles)

    @property
    def n(self) -> int:
        return len(self.angles)

    def vertex(self, k: int) -> IdealPoint:
        return IdealPoint(self.angles[k % self.n])

    @cached_property
    def sides(self) -> tuple[Geodesic, ...]:
        n = self.n
        return tuple(
            Geodesic.from_angles(self.angles[k], self.angles[(k + 1) % n]) for k in range(n)
        )

    def side(self, k: int) -> Geodesic:
        return self.sides[k % self.n]

    @cached_property
    def _side_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        a = np.array(self.angles)
        return a, np.roll(a, -1)

    def side_distances(self, p) -> np.ndarray:
        """Signed distances from p to every side (all positive iff p is inside)."""
        z = p.z if isinstance(p, DiskPoint) else complex(p)
        alphas, betas = self._side_arrays
        return signed_distances(np.array([z]), alphas, betas)[0]

    def contains(self, p) -> bool:
        return bool(np.all(self.side_distances(p) > 0.0))

    def adjacent(self, i: int, j: int) -> bool:
        return (i - j) % self.n in (1, self.n - 1)

    def centroid_point(self) -> DiskPoint:
        """Image in the disk of the Klein-model vertex average (always interior)."""
        k = np.mean(np.exp(1j * np.array(self.angles)))
        return DiskPoint.from_complex(klein_to_disk(k))

    @cached_property
    def _ortho_cache(self) -> dict:
        return {}


def klein_to_disk(k: complex) -> complex:
    r2 = abs(k) ** 2
    return k / (1.0 + math.sqrt(1.0 - r2))


def random_interior_point(P: IdealPolygon, rng: np.random.Generator) -> DiskPoint:
    """Random point of P: a Dirichlet convex combination of the vertices in the Klein model."""
    w = rng.dirichlet(np.ones(P.n))
    k = complex(np.dot(w, np.exp(1j * np.array(P.angles))))
    return DiskPoint.from_complex(klein_to_disk(k))


def make_polygon(angles: Sequence[float]) -> IdealPolygon:
    """Normalise angles into [0, 2pi), sort them, and validate."""
    angles = [float(a) for a in angles]
    if len(angles) < 3:
        raise PolygonError(f"an ideal polygon needs n >= 3 vertices, got {len(angles)}")
    if not all(math.isfinite(a) for a in angles):
        raise PolygonError("angles must be finite")
    norm = sorted(normalize_angle(a) for a in angles)
    for k in range(len(norm)):
        gap = normalize_angle(norm[(k + 1) % len(norm)] - norm[k])
        if len(norm) > 1 and (gap <= EPS_SEP or gap >= TWO_PI - EPS_SEP):
            raise PolygonError(f"duplicate vertex angle near {norm[k]!r} (separation <= {EPS_SEP})")
    return IdealPolygon(tuple(norm))


def regular(n: int) -> IdealPolygon:
    if n < 3:
        raise PolygonError(f"n must be >= 3, got {n}")
    return IdealPolygon(tuple(TWO_PI * k / n for k in range(n)))


def inradius_formula(n: int) -> float:
    """Radius of the inscribed disk of the regular ideal n-gon, arccosh(1/sin(pi/n))."""
    if n < 3:
        raise PolygonError(f"n must be >= 3, got {n}")
    return math.acosh(1.0 / math.sin(math.pi / n))


def regular_ortho_length(n: int, n1: int, form: str = "exact") -> float:
    """Length of an orthogeodesic of the regular n-gon cutting off n1 vertices.

    ``exact``: cosh(l/2) = sin(n1 pi/n) cosh(r_n) = sin(n1 pi/n) / sin(pi/n).
    ``sinh``: sinh(l/2) = sin(n1 pi/n) sinh(r_n), which only agrees with the
    geometry when n1 = n/2; kept for comparison.
    """
    if n < 4:
        raise PolygonError(f"n must be >= 4, got {n}")
    if not 2 <= n1 <= n - 2:
        raise PolygonError(f"split n1 must satisfy 2 <= n1 <= n-2, got {n1}")
    s = math.sin(n1 * math.pi / n)
    if form == "exact":
        return 2.0 * math.acosh(max(1.0, s / math.sin(math.pi / n)))
    if form == "sinh":
        return 2.0 * math.asinh(s * math.sinh(inradius_formula(n)))
    raise ValueError(f"unknown form {form!r}")


@dataclass(frozen=True)
class OrthoGeodesic:
    i: int
    j: int
    segment: OrthoSegment
    split: tuple[int, int]

    @property
    def length(self) -> float:
        return self.segment.length

    @property
    def sides(self) -> tuple[int, int]:
        return (self.i, self.j)


def split_counts(n: int, i: int, j: int) -> tuple[int, int]:
    """Sides i < j separate vertices i+1..j from the others."""
    n1 = j - i
    return (n1, n - n1)


def _side_pair(P: IdealPolygon, i: int, j: int) -> tuple[int, int]:
    n = P.n
    i, j = i % n, j % n
    if i == j or P.adjacent(i, j):
        raise AdjacentSidesError(f"sides {i} and {j} are equal or adjacent; no orthogeodesic")
    return (i, j) if i < j else (j, i)


def orthogeodesic(P: IdealPolygon, i: int, j: int) -> OrthoGeodesic:
    i, j = _side_pair(P, i, j)
    cache = P._ortho_cache
    key = (i, j)
    if key not in cache:
        seg = common_perpendicular(P.side(i), P.side(j))
        cache[key] = OrthoGeodesic(i, j, seg, split_counts(P.n, i, j))
    return cache[key]


def side_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 2, n) if not (i == 0 and j == n - 1)]


def all_orthogeodesics(P: IdealPolygon) -> list[OrthoGeodesic]:
    """One orthogeodesic per unordered pair of non-adjacent sides: n(n-3)/2 in all."""
    return [orthogeodesic(P, i, j) for i, j in side_pairs(P.n)]


def basmajian_sum(P: IdealPolygon, p: DiskPoint) -> float:
    """Sum over the sides of arcsin(1/cosh(x_k)), x_k the distance from p to side k.

    Each term is evaluated as atan(1/sinh x_k), which is the same number but
    keeps full precision when x_k is small.
    """
    x = P.side_distances(p)
    if not np.all(x > 0.0):
        raise OutsidePolygonError("point is not inside the polygon")
    return float(np.sum(np.arctan2(1.0, np.sinh(x))))


def max_inradius(P: IdealPolygon, p: DiskPoint) -> float:
    """Radius of the largest disk centred at p inside P."""
    x = P.side_distances(p)
    if not np.all(x > 0.0):
        raise OutsidePolygonError("point is not inside the polygon")
    return float(np.min(x))


def quad_partner_length(x: float) -> float:
    """The other orthogeodesic length of an ideal quadrilateral: sinh(x/2) sinh(y/2) = 1."""
    if not x > 0.0:
        raise DomainError(f"orthogeodesic length must be positive, got {x}")
    return 2.0 * math.asinh(1.0 / math.sinh(x / 2.0))


# ---------------------------------------------------------------- triangulations


def chords_cross(c1: tuple[int, int], c2: tuple[int, int]) -> bool:
    """Strict interleaving of two chords (sharing an endpoint is not a crossing)."""
    a, b = sorted(c1)
    c, d = sorted(c2)
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


@dataclass(frozen=True)
class Triangulation:
    n: int
    chords: tuple[tuple[int, int], ...]

    def __post_init__(self):
        n = self.n
        chords = tuple(sorted(tuple(sorted((a % n, b % n))) for a, b in self.chords))
        if len(chords) != n - 3:
            raise TriangulationError(f"a triangulation of an {n}-gon has {n - 3} chords, got {len(chords)}")
        if len(set(chords)) != len(chords):
            raise TriangulationError("repeated chord")
        for a, b in chords:
            if a == b or (b - a) % n in (1, n - 1):
                raise TriangulationError(f"({a}, {b}) is not a diagonal")
        for k, c1 in enumerate(chords):
            for c2 in chords[k + 1 :]:
                if chords_cross(c1, c2):
                    raise TriangulationError(f"chords {c1} and {c2} cross")
        object.__setattr__(self, "chords", chords)


def chord_to_sides(n: int, chord: tuple[int, int]) -> tuple[int, int]:
    """Chord (a, b) -> the orthogeodesic between sides a-1 and b-1."""
    a, b = chord
    i, j = (a - 1) % n, (b - 1) % n
    return (i, j) if i < j else (j, i)


def sides_to_chord(n: int, sides: tuple[int, int]) -> tuple[int, int]:
    """Inverse of chord_to_sides: pull each foot forward to the next vertex."""
    i, j = sides
    a, b = (i + 1) % n, (j + 1) % n
    return (a, b) if a < b else (b, a)


def triangulations(n: int) -> Iterator[Triangulation]:
    """All Catalan(n-2) triangulations of the n-gon."""
    if n < 3:
        raise TriangulationError(f"n must be >= 3, got {n}")

    def tri(lo: int, hi: int):
        # triangulations of the sub-polygon lo, lo+1, ..., hi with base (lo, hi)
        if hi - lo < 2:
            yield ()
            return
        for k in range(lo + 1, hi):
            left = [(lo, k)] if k - lo > 1 else []
            right = [(k, hi)] if hi - k > 1 else []
            for L in tri(lo, k):
                for R in tri(k, hi):
                    yield tuple(left) + tuple(right) + L + R

    for chords in tri(0, n - 1):
        yield Triangulation(n, chords)


def triangulation_chord_sets(n: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Like ``triangulations`` but yields raw chord tuples, skipping validation."""

    def tri(lo: int, hi: int):
        if hi - lo < 2:
            yield ()
            return
        for k in range(lo + 1, hi):
            left = ((lo, k),) if k - lo > 1 else ()
            right = ((k, hi),) if hi - k > 1 else ()
            for L in tri(lo, k):
                for R in tri(k, hi):
                    yield left + right + L + R

    yield from tri(0, n - 1)


def catalan(m: int) -> int:
    return math.comb(2 * m, m) // (m + 1)


def random_triangulation(n: int, rng: np.random.Generator) -> Triangulation:
    """Triangulation built by recursively picking a uniformly random apex."""
    chords = []
    stack = [(0, n - 1)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        k = int(rng.integers(lo + 1, hi))
        if k - lo > 1:
            chords.append((lo, k))
        if hi - k > 1:
            chords.append((k, hi))
        stack += [(lo, k), (k, hi)]
    return Triangulation(n, tuple(chords))


def fan_triangulation(n: int, apex: int = 0) -> Triangulation:
    return Triangulation(n, tuple((apex, (apex + k) % n) for k in range(2, n - 1)))


# ---------------------------------------------------------------- decompositions


def _pairs_interleave(n: int, p: tuple[int, int], q: tuple[int, int]) -> bool:
    return chords_cross(sides_to_chord(n, p), sides_to_chord(n, q))


@dataclass(frozen=True)
class OrthoDecomposition:
    n: int
    members: tuple[OrthoGeodesic, ...]

    def __post_init__(self):
        members = tuple(sorted(self.members, key=lambda m: m.sides))
        if len(members) != self.n - 3:
            raise DecompositionError(
                f"a decomposition of an ideal {self.n}-gon has {self.n - 3} members, got {len(members)}"
            )
        pairs = [m.sides for m in members]
        if len(set(pairs)) != len(pairs):
            raise DecompositionError("repeated orthogeodesic")
        for k, p in enumerate(pairs):
            for q in pairs[k + 1 :]:
                if _pairs_interleave(self.n, p, q):
                    raise DecompositionError(f"orthogeodesics {p} and {q} intersect")
        object.__setattr__(self, "members", members)

    @property
    def max_length(self) -> float:
        return max((m.length for m in self.members), default=0.0)

    @property
    def lengths(self) -> list[float]:
        return [m.length for m in self.members]

    def triangulation(self) -> Triangulation:
        return Triangulation(self.n, tuple(sides_to_chord(self.n, m.sides) for m in self.members))

    def geometrically_disjoint(self) -> bool:
        ms = self.members
        return all(
            segments_disjoint(ms[a].segment, ms[b].segment)
            for a in range(len(ms))
            for b in range(a + 1, len(ms))
        )


def segments_disjoint(s: OrthoSegment, t: OrthoSegment, tol: float = 1e-12) -> bool:
    """True when two geodesic segments have no point in common."""
    for u in (s.foot1, s.foot2):
        for v in (t.foot1, t.foot2):
            if dist_pp(u, v) < tol:
                return False
    g, h = s.carrier, t.carrier
    if g.crosses(h):
        x = _crossing_point(g, h)
        on_s = dist_pp(s.foot1, x) + dist_pp(x, s.foot2) - s.length
        on_t = dist_pp(t.foot1, x) + dist_pp(x, t.foot2) - t.length
        return not (on_s < 1e-9 and on_t < 1e-9)
    return True


def _crossing_point(g: Geodesic, h: Geodesic) -> DiskPoint:
    # bisect along g for the sign change of the signed distance to h
    lo, hi = -50.0, 50.0
    f_lo = signed_distance(g.point_at(lo), h)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = signed_distance(g.point_at(mid), h)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    return g.point_at(0.5 * (lo + hi))


def decomposition_from_triangulation(P: IdealPolygon, T: Triangulation) -> OrthoDecomposition:
    if T.n != P.n:
        raise TriangulationError(f"triangulation is for n={T.n}, polygon has n={P.n}")
    return OrthoDecomposition(
        P.n, tuple(orthogeodesic(P, *chord_to_sides(P.n, c)) for c in T.chords)
    )
