"""Cut locus of an ideal polygon: the tree of points equidistant from two or more nearest sides."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .kernel import (
    DiskPoint,
    Geodesic,
    IdealPoint,
    NoEquidistantPointError,
    _bisector_meet,
    angular_separation,
    bisector,
    direction_at,
    dist_pp,
    foot_pg,
    equidistant_point,
    signed_distances,
)
from .polygon import IdealPolygon, PolygonError

EPS_MERGE = 1e-7  # hyperbolic distance below which candidate vertices coalesce
EPS_TIE = 1e-9  # distance slack for "equally near"
_PREFILTER = 1e-5  # slack for the fast vectorised candidate screen


class CutLocusError(PolygonError):
    """The assembled cut locus violates a tree invariant."""


@dataclass(frozen=True)
class CutVertex:
    location: DiskPoint
    distance: float
    sides: tuple[int, ...]  # sorted

    @property
    def degree(self) -> int:
        return len(self.sides)


@dataclass(frozen=True)
class CutEdge:
    """A piece of the locus separating the cells of ``sides``.

    ``u`` is a vertex index; the other end is either vertex ``v`` or, for a
    leaf edge, the ideal polygon vertex ``leaf``.
    """

    sides: tuple[int, int]
    u: int
    v: int | None
    leaf: int | None
    carrier: Geodesic

    @property
    def is_leaf(self) -> bool:
        return self.leaf is not None


@dataclass(frozen=True)
class CutLocusTree:
    polygon: IdealPolygon
    vertices: tuple[CutVertex, ...]
    edges: tuple[CutEdge, ...]
    fans: tuple[tuple[int, ...], ...]  # per vertex, sides in angular order

    @property
    def leaves(self) -> tuple[int, ...]:
        return tuple(sorted(e.leaf for e in self.edges if e.is_leaf))

    def degree(self, k: int) -> int:
        return sum((e.u == k) + (e.v == k) for e in self.edges)

    def edge_points(self, e: CutEdge, count: int = 10) -> list[DiskPoint]:
        """``count`` points strictly inside the edge."""
        p = self.vertices[e.u].location
        if e.is_leaf:
            target = self.polygon.vertex(e.leaf)
            # walk towards the cusp along the carrier
            ts = [0.5 * (k + 1) for k in range(count)]
            t0 = _carrier_param(e.carrier, p)
            sign = 1.0 if _towards(e.carrier, target) else -1.0
            return [e.carrier.point_at(t0 + sign * t) for t in ts]
        q = self.vertices[e.v].location
        t0, t1 = _carrier_param(e.carrier, p), _carrier_param(e.carrier, q)
        return [e.carrier.point_at(t0 + (t1 - t0) * (k + 1) / (count + 1)) for k in range(count)]


def _carrier_param(g: Geodesic, p: DiskPoint) -> float:
    """Arclength parameter (as in Geodesic.point_at) of a point on g."""
    origin = g.point_at(0.0)
    d = dist_pp(origin, p)
    if d == 0.0:
        return 0.0
    ahead = g.point_at(d)
    behind = g.point_at(-d)
    return d if dist_pp(ahead, p) <= dist_pp(behind, p) else -d


def _towards(g: Geodesic, target: IdealPoint) -> bool:
    return angular_separation(g.b.angle, target.angle) < angular_separation(g.a.angle, target.angle)


def _hyperboloid_normals(P: IdealPolygon) -> np.ndarray:
    a = np.array(P.angles)
    b = np.roll(a, -1)
    A = np.stack([np.ones_like(a), np.cos(a), np.sin(a)], axis=1)
    B = np.stack([np.ones_like(b), np.cos(b), np.sin(b)], axis=1)
    N = np.cross(A, B) * np.array([-1.0, 1.0, 1.0])
    # Minkowski norm of the cross product of two light-like vectors: 1 - cos(span)
    norm = 2.0 * np.sin(np.mod(b - a, 2.0 * math.pi) / 2.0) ** 2
    return N / norm[:, None]


def _candidate_triples(P: IdealPolygon) -> list[tuple[tuple[int, int, int], complex]]:
    """Triples whose bisector intersection is (roughly) nearest to exactly those sides."""
    n = P.n
    triples = np.array(list(itertools.combinations(range(n), 3)), dtype=int)
    N = _hyperboloid_normals(P)
    N1, N2, N3 = N[triples[:, 0]], N[triples[:, 1]], N[triples[:, 2]]
    X = _bisector_meet(N1, N2, N3)
    q = -X[:, 0] ** 2 + X[:, 1] ** 2 + X[:, 2] ** 2
    ok = q < 0.0
    # cancellation in q inflates the error of the crude point; widen the screen to match
    slack = _PREFILTER + 1e-12 * np.sum(X[ok] ** 2, axis=1) / -q[ok]
    X = X[ok] / np.sqrt(-q[ok])[:, None]
    X *= np.sign(X[:, 0])[:, None]
    triples = triples[ok]
    z = (X[:, 1] + 1j * X[:, 2]) / (1.0 + X[:, 0])
    alphas, betas = P._side_arrays
    S = signed_distances(z, alphas, betas)
    S = np.where(np.isfinite(S), S, -np.inf)
    own = np.take_along_axis(S, triples, axis=1)
    others = S.copy()
    np.put_along_axis(others, triples, np.inf, axis=1)
    d = np.min(own, axis=1)
    keep = (np.min(others, axis=1) >= d - slack) & (d > -slack)
    return [(tuple(int(s) for s in t), complex(w)) for t, w in zip(triples[keep], z[keep])]


def _polish(P: IdealPolygon, triple) -> tuple[DiskPoint, float] | None:
    g = [P.side(k) for k in triple]
    try:
        return equidistant_point(*g, oriented=True)
    except NoEquidistantPointError:
        return None


def build_cut_locus(P: IdealPolygon) -> CutLocusTree:
    """Nearest-side cell decomposition of P, as a tree with leaves at the ideal vertices."""
    n = P.n
    found = []  # (location, distance, sides)
    for triple, _ in _candidate_triples(P):
        res = _polish(P, triple)
        if res is None:
            continue
        p, _ = res
        x = P.side_distances(p)
        d = float(np.min(x))
        if d <= 0.0:
            continue
        own = x[list(triple)]
        if float(np.max(own)) > d + EPS_TIE:
            continue  # some other side is strictly nearer
        sides = tuple(int(k) for k in np.nonzero(x <= d + EPS_TIE)[0])
        found.append((p, d, sides))

    # merge coincident candidates
    groups: list[list[int]] = []
    for k, (p, _, _) in enumerate(found):
        for grp in groups:
            if dist_pp(found[grp[0]][0], p) < EPS_MERGE:
                grp.append(k)
                break
        else:
            groups.append([k])

    raw = []
    for grp in groups:
        p, d, _ = min((found[k] for k in grp), key=lambda f: f[1])
        sides = sorted(set().union(*(found[k][2] for k in grp)))
        raw.append(CutVertex(p, float(np.mean([found[k][1] for k in grp])), tuple(sides)))
    raw.sort(key=lambda v: v.sides)
    vertices = tuple(raw)
    fans = tuple(vertex_fan_sides(P, v) for v in vertices)
    edges = _connect(P, vertices, fans)
    tree = CutLocusTree(P, vertices, edges, fans)
    _check_tree(tree)
    return tree


def vertex_fan_sides(P: IdealPolygon, v: CutVertex) -> tuple[int, ...]:
    """Sides equidistant from v, in counterclockwise order of their feet, smallest index first."""
    ang = {k: direction_at(v.location, foot_pg(v.location, P.side(k))) for k in v.sides}
    order = sorted(v.sides, key=lambda k: ang[k])
    start = order.index(min(order))
    return tuple(order[start:] + order[:start])


def _connect(P: IdealPolygon, vertices, fans) -> tuple[CutEdge, ...]:
    n = P.n
    ends: dict[tuple[int, int], list[int]] = {}
    for idx, fan in enumerate(fans):
        m = len(fan)
        for t in range(m):
            s, r = fan[t], fan[(t + 1) % m]
            key = (min(s, r), max(s, r))
            ends.setdefault(key, []).append(idx)
    edges = []
    for key in sorted(ends):
        i, j = key
        owners = ends[key]
        carrier = bisector(P.side(i), P.side(j))
        if P.adjacent(i, j):
            if len(owners) != 1:
                raise CutLocusError(f"cusp bisector {key} reached from {len(owners)} vertices")
            shared = j if (i + 1) % n == j else i  # vertex between sides i and i+1
            edges.append(CutEdge(key, owners[0], None, shared, carrier))
        else:
            if len(owners) != 2:
                raise CutLocusError(f"side pair {key} bounds {len(owners)} vertices, expected 2")
            edges.append(CutEdge(key, owners[0], owners[1], None, carrier))
    return tuple(edges)


def _check_tree(T: CutLocusTree):
    n = T.polygon.n
    V, E = len(T.vertices), len(T.edges)
    if V == 0:
        raise CutLocusError("no cut vertices found")
    if E != V + n - 1:
        raise CutLocusError(f"|edges| = {E}, expected |vertices| + n - 1 = {V + n - 1}")
    if T.leaves != tuple(range(n)):
        raise CutLocusError(f"leaves {T.leaves} are not the {n} ideal vertices")
    for k in range(V):
        if T.degree(k) < 3:
            raise CutLocusError(f"vertex {k} has degree {T.degree(k)} < 3")
    parent = list(range(V))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in T.edges:
        if e.v is not None:
            ru, rv = find(e.u), find(e.v)
            if ru == rv:
                raise CutLocusError("cut locus contains a cycle")
            parent[ru] = rv
    if len({find(k) for k in range(V)}) != 1:
        raise CutLocusError("cut locus is disconnected")


def internal_edges(T: CutLocusTree) -> list[tuple[int, int]]:
    """Side pairs of the edges joining two cut vertices."""
    return [e.sides for e in T.edges if not e.is_leaf]
