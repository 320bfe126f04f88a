"""Short orthogeodesic decompositions, the exhaustive min-max oracle, and the O_n bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cutlocus import CutLocusTree, build_cut_locus, internal_edges
from .polygon import (
    DecompositionError,
    IdealPolygon,
    OrthoDecomposition,
    PolygonError,
    Triangulation,
    catalan,
    chord_to_sides,
    decomposition_from_triangulation,
    inradius_formula,
    orthogeodesic,
    side_pairs,
    sides_to_chord,
    triangulation_chord_sets,
)
from .kernel import dist_pp, foot_pg

ORACLE_MAX_N = 14
BOUND_SLACK = 1e-9
_ORACLE_TIE = 1e-12


class OracleSizeError(PolygonError):
    pass


@dataclass(frozen=True)
class BoundPair:
    n: int
    lower: float
    upper: float


@dataclass(frozen=True)
class OracleResult:
    best: OrthoDecomposition
    minmax: float
    triangulations_searched: int

    @property
    def triangulation(self) -> Triangulation:
        return self.best.triangulation()


def fan_pairs(P: IdealPolygon, tree: CutLocusTree, k: int) -> list[tuple[int, int]]:
    """Orthogeodesics splitting the piece around a vertex of degree >= 4.

    The fan is rooted at the side nearest the vertex (ties to the smallest
    index); it is joined to every other fan side that is neither adjacent to
    it in P nor already its neighbour along the locus.
    """
    fan = list(tree.fans[k])
    m = len(fan)
    if m < 4:
        return []
    v = tree.vertices[k].location
    dist = {s: dist_pp(v, foot_pg(v, P.side(s))) for s in fan}
    dmin = min(dist.values())
    root = min(s for s in fan if dist[s] <= dmin + BOUND_SLACK)
    r = fan.index(root)
    fan = fan[r:] + fan[:r]
    out = []
    for s in fan[2:-1]:
        if not P.adjacent(root, s):
            out.append((min(root, s), max(root, s)))
    return out


def short_decomposition(P: IdealPolygon, tree: CutLocusTree | None = None) -> OrthoDecomposition:
    """Decomposition whose members all have length at most 2 r_n, read off the cut locus."""
    n = P.n
    if n < 4:
        raise PolygonError(f"decompositions need n >= 4, got {n}")
    if tree is None:
        tree = build_cut_locus(P)
    pairs = list(internal_edges(tree))
    for k in range(len(tree.vertices)):
        pairs += fan_pairs(P, tree, k)
    pairs = sorted(set(pairs))
    try:
        dec = OrthoDecomposition(n, tuple(orthogeodesic(P, i, j) for i, j in pairs))
    except DecompositionError as exc:
        raise DecompositionError(f"cut-locus construction produced an invalid set: {exc}") from exc
    bound = o_n_upper(n) + BOUND_SLACK
    if dec.max_length > bound:
        raise DecompositionError(
            f"member of length {dec.max_length!r} exceeds 2 r_n = {o_n_upper(n)!r}"
        )
    return dec


def oracle_minmax(P: IdealPolygon) -> OracleResult:
    """Exhaustive search over all triangulations for the smallest maximal member length.

    Ties within 1e-12 go to the lexicographically smallest sorted chord list.
    """
    n = P.n
    if n < 4:
        raise PolygonError(f"oracle needs n >= 4, got {n}")
    if n > ORACLE_MAX_N:
        raise OracleSizeError(
            f"oracle refuses n={n}: it would enumerate Catalan({n - 2}) = {catalan(n - 2)} "
            f"triangulations (limit n <= {ORACLE_MAX_N})"
        )
    length = {
        sides_to_chord(n, (i, j)): orthogeodesic(P, i, j).length for i, j in side_pairs(n)
    }
    best_val = math.inf
    best_key = None
    count = 0
    for chords in triangulation_chord_sets(n):
        count += 1
        val = max(length[c] for c in chords) if chords else 0.0
        if val < best_val - _ORACLE_TIE:
            best_val, best_key = val, tuple(sorted(chords))
        elif val <= best_val + _ORACLE_TIE:
            key = tuple(sorted(chords))
            if key < best_key:
                best_key = key
                best_val = min(best_val, val)
    best = decomposition_from_triangulation(P, Triangulation(n, best_key))
    return OracleResult(best, best.max_length, count)


def o_n_upper(n: int) -> float:
    """2 arccosh(1/sin(pi/n)): twice the inradius of the regular n-gon."""
    if n < 4:
        raise PolygonError(f"n must be >= 4, got {n}")
    return 2.0 * inradius_formula(n)


def o_n_lower(n: int, form: str = "exact") -> float:
    """Lower bound on O_n from the regular n-gon.

    Every decomposition has a member cutting off at least ceil(n/3) vertices on
    each side, and on the regular polygon that member has length
    2 arccosh(sin(n1 pi/n) / sin(pi/n)), n1 = ceil(n/3).

    ``form="sinh"`` evaluates 2 arcsinh(sin(n1 pi/n) sinh r_n) instead and
    ``form="three_halves"`` the closed form 2 arcsinh((3/2) cot(pi/n)); neither
    is a valid lower bound, they exist to be compared against the others.
    """
    if n < 4:
        raise PolygonError(f"n must be >= 4, got {n}")
    n1 = -(-n // 3)
    s = math.sin(n1 * math.pi / n)
    if form == "exact":
        return 2.0 * math.acosh(max(1.0, s / math.sin(math.pi / n)))
    if form == "sinh":
        return 2.0 * math.asinh(s * math.sinh(inradius_formula(n)))
    if form == "three_halves":
        return 2.0 * math.asinh(1.5 / math.tan(math.pi / n))
    raise ValueError(f"unknown form {form!r}")


def bounds(n: int) -> BoundPair:
    return BoundPair(n, o_n_lower(n), o_n_upper(n))


def splitting_width(T: Triangulation, n: int | None = None) -> int:
    """Largest min(n1, n2) over the chords of T."""
    n = T.n if n is None else n
    return max((min(b - a, n - (b - a)) for a, b in T.chords), default=0)


def chord_split(n: int, chord: tuple[int, int]) -> tuple[int, int]:
    i, j = chord_to_sides(n, chord)
    return (j - i, n - (j - i))
