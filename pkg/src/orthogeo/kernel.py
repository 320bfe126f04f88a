"""Poincare disk geometry: points, geodesics, perpendiculars, bisectors, isometries.

Everything lives in the unit disk. A geodesic is stored by its two ideal
endpoints; the order of the endpoints only matters for *signed* distances,
where the positive side is the one on the left when travelling from ``a`` to
``b`` (so the sides of a counterclockwise polygon all face inwards).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi
EPS_SEP = 1e-9  # radians, ideal point distinctness
EPS_NUM = 1e-10  # metric assertions


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DomainError(GeometryError):
    pass


class IntersectingGeodesicsError(GeometryError):
    pass


class AsymptoticGeodesicsError(GeometryError):
    pass


class NoEquidistantPointError(GeometryError):
    pass


def normalize_angle(t: float) -> float:
    t = math.fmod(t, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


def angular_separation(s: float, t: float) -> float:
    d = abs(normalize_angle(s) - normalize_angle(t))
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class IdealPoint:
    angle: float

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise DomainError(f"ideal point angle must be finite, got {self.angle}")
        object.__setattr__(self, "angle", normalize_angle(float(self.angle)))

    @property
    def z(self) -> complex:
        return cmath.exp(1j * self.angle)

    def distinct_from(self, other: "IdealPoint") -> bool:
        return angular_separation(self.angle, other.angle) > EPS_SEP


@dataclass(frozen=True)
class DiskPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError("disk point coordinates must be finite")
        if self.x * self.x + self.y * self.y >= 1.0:
            raise DomainError(f"point ({self.x}, {self.y}) is not inside the unit disk")

    @classmethod
    def from_complex(cls, z: complex) -> "DiskPoint":
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True, eq=False)
class Geodesic:
    a: IdealPoint
    b: IdealPoint

    def __post_init__(self):
        if not self.a.distinct_from(self.b):
            raise DomainError("geodesic endpoints coincide")

    @classmethod
    def from_angles(cls, alpha: float, beta: float) -> "Geodesic":
        return cls(IdealPoint(alpha), IdealPoint(beta))

    def _key(self):
        return tuple(sorted((self.a.angle, self.b.angle)))

    def __eq__(self, other):
        if not isinstance(other, Geodesic):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def reversed(self) -> "Geodesic":
        return Geodesic(self.b, self.a)

    @property
    def span(self) -> float:
        """Counterclockwise angle from ``a`` to ``b``, in (0, 2pi)."""
        return normalize_angle(self.b.angle - self.a.angle)

    def shares_endpoint(self, other: "Geodesic") -> bool:
        return any(
            not p.distinct_from(q) for p in (self.a, self.b) for q in (other.a, other.b)
        )

    def crosses(self, other: "Geodesic") -> bool:
        """True when the endpoint pairs interleave on the circle."""
        if self.shares_endpoint(other):
            return False
        span = self.span
        c = normalize_angle(other.a.angle - self.a.angle) < span
        d = normalize_angle(other.b.angle - self.a.angle) < span
        return c != d

    def point_at(self, t: float) -> DiskPoint:
        """Point at signed hyperbolic arclength ``t`` from the point nearest the origin."""
        m = _nearest_to_origin(self.a.angle, self.b.angle)
        # direction of travel a -> b at m, as a disk automorphism moving m to 0
        T = MobiusMap.translation(m)
        ta, tb = T(self.a.z), T(self.b.z)
        direction = tb / abs(tb)
        w = math.tanh(t / 2.0) * direction
        return DiskPoint.from_complex(T.inverse()(w))

    def contains(self, p: DiskPoint, tol: float = 1e-9) -> bool:
        return abs(signed_distance(p, self)) < tol


@dataclass(frozen=True)
class OrthoSegment:
    foot1: DiskPoint
    foot2: DiskPoint
    length: float

    @property
    def carrier(self) -> Geodesic:
        return geodesic_through(self.foot1, self.foot2)


@dataclass(frozen=True)
class MobiusMap:
    """Orientation preserving disk isometry z -> (u z + v) / (conj(v) z + conj(u)).

    ``|u|^2 - |v|^2 = 1``; (u, v) and (-u, -v) give the same map.
    """

    u: complex
    v: complex

    def __post_init__(self):
        det = abs(self.u) ** 2 - abs(self.v) ** 2
        if not det > 0.0:
            raise DomainError("not a disk automorphism (|u|^2 - |v|^2 <= 0)")
        s = math.sqrt(det)
        object.__setattr__(self, "u", complex(self.u) / s)
        object.__setattr__(self, "v", complex(self.v) / s)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1.0, 0.0)

    @classmethod
    def rotation(cls, phi: float) -> "MobiusMap":
        return cls(cmath.exp(0.5j * phi), 0.0)

    @classmethod
    def translation(cls, p) -> "MobiusMap":
        """The transvection taking ``p`` to the origin."""
        p = _as_complex(p)
        return cls(1.0, -p)

    @classmethod
    def from_matrix(cls, m) -> "MobiusMap":
        m = np.asarray(m, dtype=complex)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        m = m / cmath.sqrt(det)
        u, v = m[0, 0], m[0, 1]
        if abs(m[1, 0] - v.conjugate()) > 1e-8 * (abs(u) + abs(v)) or abs(
            m[1, 1] - u.conjugate()
        ) > 1e-8 * (abs(u) + abs(v)):
            if abs(m[1, 0] + v.conjugate()) < 1e-8 * (abs(u) + abs(v)):
                raise DomainError("matrix does not preserve the unit disk")
            raise DomainError("matrix is not in SU(1,1)")
        return cls(complex(u), complex(v))

    @property
    def matrix(self) -> np.ndarray:
        u, v = self.u, self.v
        return np.array([[u, v], [v.conjugate(), u.conjugate()]])

    def __call__(self, z):
        if isinstance(z, DiskPoint):
            return DiskPoint.from_complex(self._apply(z.z))
        if isinstance(z, IdealPoint):
            w = self._apply(z.z)
            return IdealPoint(cmath.phase(w))
        if isinstance(z, Geodesic):
            return Geodesic(self(z.a), self(z.b))
        if isinstance(z, np.ndarray):
            return (self.u * z + self.v) / (self.v.conjugate() * z + self.u.conjugate())
        return self._apply(complex(z))

    def _apply(self, z: complex) -> complex:
        return (self.u * z + self.v) / (self.v.conjugate() * z + self.u.conjugate())

    def apply_angle(self, t: float) -> float:
        return normalize_angle(cmath.phase(self._apply(cmath.exp(1j * t))))

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self o other."""
        u = self.u * other.u + self.v * other.v.conjugate()
        v = self.u * other.v + self.v * other.u.conjugate()
        return MobiusMap(u, v)

    __matmul__ = compose

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.u.conjugate(), -self.v)

    def close_to(self, other: "MobiusMap", tol: float = EPS_NUM) -> bool:
        return (abs(self.u - other.u) + abs(self.v - other.v) < tol) or (
            abs(self.u + other.u) + abs(self.v + other.v) < tol
        )


def _as_complex(p) -> complex:
    if isinstance(p, DiskPoint):
        return p.z
    return complex(p)


def _one_minus_abs2(z: complex) -> float:
    r = abs(z)
    return (1.0 - r) * (1.0 + r)


def _three_point_matrix(z1, z2, z3):
    """Matrix of the Mobius map sending z1, z2, z3 to 0, 1, infinity."""
    return np.array([[z2 - z3, -z1 * (z2 - z3)], [z2 - z1, -z3 * (z2 - z1)]], dtype=complex)


def mobius_normalize(t1: IdealPoint, t2: IdealPoint, t3: IdealPoint) -> MobiusMap:
    """Isometry sending three counterclockwise ideal points to angles 0, 2pi/3, 4pi/3."""
    pts = (t1, t2, t3)
    for i in range(3):
        for j in range(i + 1, 3):
            if not pts[i].distinct_from(pts[j]):
                raise DomainError("mobius_normalize needs three distinct ideal points")
    s2 = normalize_angle(t2.angle - t1.angle)
    s3 = normalize_angle(t3.angle - t1.angle)
    if not s2 < s3:
        raise DomainError("ideal points must be in counterclockwise order")
    src = _three_point_matrix(t1.z, t2.z, t3.z)
    w = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]
    dst = _three_point_matrix(*w)
    m = np.linalg.solve(dst, src)
    return MobiusMap.from_matrix(m)


def dist_pp(p: DiskPoint, q: DiskPoint) -> float:
    """Hyperbolic distance; cosh d = 1 + 2|p-q|^2 / ((1-|p|^2)(1-|q|^2)), in half-angle form."""
    pz, qz = _as_complex(p), _as_complex(q)
    if abs(pz) >= 1.0 or abs(qz) >= 1.0:
        raise DomainError("distance needs points strictly inside the disk")
    return 2.0 * math.asinh(abs(pz - qz) / math.sqrt(_one_minus_abs2(pz) * _one_minus_abs2(qz)))


def _nearest_to_origin(alpha: float, beta: float) -> complex:
    """Point of the geodesic (alpha, beta) closest to the origin."""
    span = normalize_angle(beta - alpha)
    mid = alpha + span / 2.0
    if span > math.pi:
        mid += math.pi
    rho = math.tan(abs(math.pi - span) / 4.0)
    return rho * cmath.exp(1j * mid)


# Spans below this use the circle-centre form of the signed distance.
_NARROW = math.pi / 2.0


def _sinh_signed(z: complex, alpha: float, beta: float) -> float:
    span = normalize_angle(beta - alpha)
    if span <= EPS_SEP or span >= TWO_PI - EPS_SEP:
        raise DomainError("degenerate geodesic")
    denom_p = _one_minus_abs2(z)
    if denom_p <= 0.0:
        raise DomainError("point is not inside the disk")
    short = min(span, TWO_PI - span)
    if short < _NARROW:
        # circle orthogonal to the boundary: centre c, radius R, |c|^2 = 1 + R^2
        half = short / 2.0
        mid = alpha + span / 2.0 + (math.pi if span > math.pi else 0.0)
        R = math.tan(half)
        c = cmath.exp(1j * mid) / math.cos(half)
        e = abs(z - c)
        val = (e - R) * (e + R) / (denom_p * R)
        return val if span < math.pi else -val
    a = cmath.exp(1j * alpha)
    b = cmath.exp(1j * beta)
    num = (
        (1.0 + abs(z) ** 2) * math.sin(span)
        + 2.0 * z.real * (a.imag - b.imag)
        + 2.0 * z.imag * (b.real - a.real)
    )
    return num / (denom_p * 2.0 * math.sin(span / 2.0) ** 2)


def signed_distance(p, g: Geodesic) -> float:
    """Distance from p to g, positive on the left of a -> b."""
    return math.asinh(_sinh_signed(_as_complex(p), g.a.angle, g.b.angle))


def signed_distances(points: np.ndarray, alphas: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """Vectorised signed distances: rows are points (complex), columns geodesics."""
    z = np.asarray(points, dtype=complex)[:, None]
    alphas = np.asarray(alphas, dtype=float)[None, :]
    betas = np.asarray(betas, dtype=float)[None, :]
    span = np.mod(betas - alphas, TWO_PI)
    short = np.minimum(span, TWO_PI - span)
    r = np.abs(z)
    denom_p = (1.0 - r) * (1.0 + r)

    half = short / 2.0
    mid = alphas + span / 2.0 + np.where(span > math.pi, math.pi, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        R = np.tan(half)
        c = np.exp(1j * mid) / np.cos(half)
        e = np.abs(z - c)
        circ = (e - R) * (e + R) / (denom_p * R)
        circ = np.where(span < math.pi, circ, -circ)
        a = np.exp(1j * alphas)
        b = np.exp(1j * betas)
        num = (
            (1.0 + r**2) * np.sin(span)
            + 2.0 * z.real * (a.imag - b.imag)
            + 2.0 * z.imag * (b.real - a.real)
        )
        wide = num / (denom_p * 2.0 * np.sin(span / 2.0) ** 2)
    return np.arcsinh(np.where(short < _NARROW, circ, wide))


def dist_pg(p: DiskPoint, g: Geodesic) -> float:
    return abs(signed_distance(p, g))


def foot_pg(p: DiskPoint, g: Geodesic) -> DiskPoint:
    """Orthogonal projection of p onto g."""
    T = MobiusMap.translation(p)
    m = _nearest_to_origin(T.apply_angle(g.a.angle), T.apply_angle(g.b.angle))
    return DiskPoint.from_complex(T.inverse()(m))


def direction_at(p: DiskPoint, q) -> float:
    """Angle of the initial tangent of the geodesic from p towards q (a disk point or ideal point)."""
    T = MobiusMap.translation(p)
    if isinstance(q, IdealPoint):
        return T.apply_angle(q.angle)
    w = T(_as_complex(q))
    return normalize_angle(cmath.phase(w))


def geodesic_through(p: DiskPoint, q: DiskPoint) -> Geodesic:
    if dist_pp(p, q) == 0.0:
        raise DomainError("two distinct points are needed to span a geodesic")
    T = MobiusMap.translation(p)
    w = T(q.z)
    t = cmath.phase(w)
    Ti = T.inverse()
    return Geodesic(Ti(IdealPoint(t + math.pi)), Ti(IdealPoint(t)))


def _check_disjoint(g1: Geodesic, g2: Geodesic):
    if g1 == g2:
        raise DomainError("identical geodesics")
    if g1.shares_endpoint(g2):
        raise AsymptoticGeodesicsError("geodesics share an ideal endpoint (distance 0)")
    if g1.crosses(g2):
        raise IntersectingGeodesicsError("geodesics intersect")


def common_perpendicular(g1: Geodesic, g2: Geodesic) -> OrthoSegment:
    """Common perpendicular of two ultraparallel geodesics.

    g1 is moved to the real diameter and g2 is then slid along it until it is
    symmetric about the imaginary axis; there the perpendicular is the segment
    [0, i r] with r = tan(theta/2), and both feet are mapped back.
    """
    _check_disjoint(g1, g2)
    q = _nearest_to_origin(g1.a.angle, g1.b.angle)
    T = MobiusMap.translation(q)
    a1 = T.apply_angle(g1.a.angle)
    T = MobiusMap.rotation(math.pi - a1) @ T  # g1 -> (-1, 1)
    c, d = T.apply_angle(g2.a.angle), T.apply_angle(g2.b.angle)
    if math.sin(c) < 0.0:
        T = MobiusMap.rotation(math.pi) @ T
        c, d = normalize_angle(c + math.pi), normalize_angle(d + math.pi)
    c, d = sorted((c, d))
    cot_c = 1.0 / math.tan(c / 2.0)
    cot_d = 1.0 / math.tan(d / 2.0)
    tau = -0.5 * math.log(cot_c * cot_d)
    t = math.tanh(tau / 2.0)
    T = MobiusMap(1.0, t) @ T
    r = math.sqrt(cot_d / cot_c)
    Ti = T.inverse()
    foot1 = DiskPoint.from_complex(Ti(0.0))
    foot2 = DiskPoint.from_complex(Ti(1j * r))
    return OrthoSegment(foot1, foot2, 2.0 * math.atanh(r))


def perpendicular_length_crossratio(g1: Geodesic, g2: Geodesic) -> float:
    """Closed-form length of the common perpendicular from the cross-ratio.

    With the four endpoints in cyclic order a, b, c, d (g1 = ab, g2 = cd),
    tanh(l/2)^2 = |a-d||b-c| / (|a-c||b-d|).
    """
    _check_disjoint(g1, g2)
    a, b = g1.a.angle, g1.b.angle
    if normalize_angle(g2.a.angle - a) < normalize_angle(b - a):
        a, b = b, a
    # now g2 lies counterclockwise after b
    c, d = g2.a.angle, g2.b.angle
    if normalize_angle(c - b) > normalize_angle(d - b):
        c, d = d, c

    def chord(s, t):
        return 2.0 * abs(math.sin((s - t) / 2.0))

    ratio = chord(a, d) * chord(b, c) / (chord(a, c) * chord(b, d))
    return 2.0 * math.atanh(math.sqrt(ratio))


def _normal(g: Geodesic) -> np.ndarray:
    """Unit spacelike normal (Minkowski, signature -++) of the plane of g."""
    A = np.array([1.0, math.cos(g.a.angle), math.sin(g.a.angle)])
    B = np.array([1.0, math.cos(g.b.angle), math.sin(g.b.angle)])
    N = np.cross(A, B) * np.array([-1.0, 1.0, 1.0])
    return N / (2.0 * math.sin(g.span / 2.0) ** 2)


def _mink(u, v) -> float:
    return float(-u[0] * v[0] + u[1] * v[1] + u[2] * v[2])


def _plane_ideal_points(M) -> tuple[float, float]:
    """Boundary angles t with -M0 + M1 cos t + M2 sin t = 0."""
    R = math.hypot(M[1], M[2])
    phi = math.atan2(M[2], M[1])
    w = math.acos(max(-1.0, min(1.0, M[0] / R)))
    return phi - w, phi + w


def bisector(g1: Geodesic, g2: Geodesic) -> Geodesic:
    """Geodesic of points equidistant from two disjoint or asymptotic geodesics."""
    if g1 == g2:
        raise DomainError("identical geodesics have no bisector")
    if g1.crosses(g2):
        raise IntersectingGeodesicsError("crossing geodesics have two bisectors")
    if g1.shares_endpoint(g2):
        return _asymptotic_bisector(g1, g2)
    N1, N2 = _normal(g1), _normal(g2)
    c = _mink(N1, N2)
    M = N1 + math.copysign(1.0, c) * N2
    s, t = _plane_ideal_points(M)
    return Geodesic.from_angles(s, t)


def _asymptotic_bisector(g1: Geodesic, g2: Geodesic) -> Geodesic:
    # with the shared endpoint v sent to infinity both geodesics are vertical lines
    # at x = -cot(phi/2), phi the angle from v; the bisector is the line halfway between
    for v in (g1.a, g1.b):
        if not (v.distinct_from(g2.a) and v.distinct_from(g2.b)):
            break
    u = g1.b if v is g1.a else g1.a
    w = g2.b if not v.distinct_from(g2.a) else g2.a
    xs = []
    for e in (u, w):
        phi = normalize_angle(e.angle - v.angle)
        xs.append(-math.cos(phi / 2.0) / math.sin(phi / 2.0))
    m = 0.5 * (xs[0] + xs[1])
    return Geodesic(v, IdealPoint(v.angle + 2.0 * math.atan2(1.0, -m)))


def _bisector_meet(N1, N2, N3):
    """Minkowski normal of the planes <X, N1 - N2> = <X, N2 - N3> = 0.

    Expanded as a cyclic sum of cross products; the difference form loses
    everything to cancellation when one side is tiny.
    """
    X = np.cross(N1, N2) + np.cross(N2, N3) + np.cross(N3, N1)
    return X * np.array([-1.0, 1.0, 1.0])


def _hyperboloid_to_disk(X) -> complex:
    return complex(X[1], X[2]) / (1.0 + X[0])


def _orient_towards(g: Geodesic, others) -> Geodesic:
    """Orient g so every endpoint of ``others`` lies on its positive side."""
    span = g.span
    for h in others:
        for e in (h.a, h.b):
            if g.a.distinct_from(e) and g.b.distinct_from(e):
                return g if normalize_angle(e.angle - g.a.angle) > span else g.reversed()
    return g


def equidistant_point(
    g1: Geodesic, g2: Geodesic, g3: Geodesic, *, oriented: bool = False
) -> tuple[DiskPoint, float]:
    """Point at equal distance from three geodesics bounding a common region.

    Starts at the intersection of two bisectors and polishes with a damped
    Newton iteration on the pairwise distance differences.  With
    ``oriented=True`` the geodesics are taken to face the region already.
    """
    gs = [g1, g2, g3]
    if len({g1, g2, g3}) < 3:
        raise DomainError("equidistant_point needs three distinct geodesics")
    if not oriented:
        gs = [_orient_towards(g, [h for h in gs if h is not g]) for g in gs]
    N = [_normal(g) for g in gs]
    X = _bisector_meet(N[0], N[1], N[2])
    q = _mink(X, X)
    if not q < 0.0:
        raise NoEquidistantPointError("bisectors do not meet inside the disk")
    X = X / math.sqrt(-q)
    if X[0] < 0.0:
        X = -X
    z0 = _hyperboloid_to_disk(X)
    z, res = _newton_equidistant(z0, gs)
    d = [signed_distance(z, g) for g in gs]
    if min(d) <= 0.0:
        raise NoEquidistantPointError("equidistant point lies outside the common region")
    return DiskPoint.from_complex(z), sum(d) / 3.0


def _equidistant_residual(z: complex, gs) -> np.ndarray:
    s = [signed_distance(z, g) for g in gs]
    return np.array([s[0] - s[1], s[1] - s[2]])


def _newton_equidistant(z: complex, gs, max_iter: int = 50) -> tuple[complex, float]:
    if abs(z) >= 1.0:
        raise NoEquidistantPointError("initial point is not inside the disk")
    F = _equidistant_residual(z, gs)
    res = float(np.max(np.abs(F)))
    for _ in range(max_iter):
        if res < 1e-12:
            break
        h = 1e-7 * _one_minus_abs2(z)
        J = np.empty((2, 2))
        for k, dz in enumerate((h, 1j * h)):
            J[:, k] = (_equidistant_residual(z + dz, gs) - _equidistant_residual(z - dz, gs)) / (2 * h)
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        dz = complex(step[0], step[1])
        lam = 1.0
        improved = False
        for _ in range(30):
            z_new = z + lam * dz
            if abs(z_new) < 1.0:
                F_new = _equidistant_residual(z_new, gs)
                res_new = float(np.max(np.abs(F_new)))
                if res_new < res:
                    improved = True
                    break
            lam *= 0.5
        if not improved:
            break
        z, F, res = z_new, F_new, res_new
    if res > equidistant_tolerance(z):
        raise NoEquidistantPointError(f"Newton did not converge (residual {res:.3e})")
    return z, res


def equidistant_tolerance(z: complex) -> float:
    """Acceptable residual at z: 1e-10, widened where disk coordinates lose digits."""
    return max(1e-10, 1e-14 / _one_minus_abs2(z))
