"""Geometry of the Riemann sphere.

Points (finite complex values plus a tagged point at infinity), the chordal
metric, Moebius transformations with trace classification, generalized
circles in Hermitian form, and parameterized circular arcs.

Conventions used throughout:

- A generalized circle is the locus  a*z*conj(z) + b*conj(z) + conj(b)*z + d = 0
  with a, d real; a == 0 encodes a line (a circle through infinity).  The
  canonical normalization is a == 1 for circles and |b| == 1 for lines.
- Moebius maps normalize to det = 1 with the sign fixed by Re(a+d) >= 0
  (ties broken by Im(a+d) >= 0), so trace^2 and classification are
  deterministic.
- Every circle carries the parametrization phi -> point_at(phi), phi in
  [0, 2*pi): circles run counterclockwise from center + radius, lines run
  along their direction with phi = 0 at infinity.  Arcs are (phi0, delta)
  parameter intervals swept counterclockwise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import GeometryError

TOL = 1e-9
TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpherePoint:
    """A point of the Riemann sphere: a finite complex value or infinity."""

    z: complex = 0j
    is_inf: bool = False

    def __post_init__(self):
        object.__setattr__(self, "z", 0j if self.is_inf else complex(self.z))
        if not self.is_inf and not (
            math.isfinite(self.z.real) and math.isfinite(self.z.imag)
        ):
            raise GeometryError(f"non-finite coordinate {self.z!r} for a finite point")

    @staticmethod
    def of(value) -> SpherePoint:
        if isinstance(value, SpherePoint):
            return value
        return SpherePoint(complex(value))

    @staticmethod
    def from_homogeneous(num: complex, den: complex) -> SpherePoint:
        """Point [num : den]; den == 0 (or float overflow) is infinity."""
        if num == 0 and den == 0:
            raise GeometryError("homogeneous (0, 0) is not a point")
        if den == 0:
            return INF
        z = num / den
        if math.isfinite(z.real) and math.isfinite(z.imag):
            return SpherePoint(z)
        return INF

    @property
    def value(self) -> complex:
        if self.is_inf:
            raise GeometryError("the point at infinity has no finite value")
        return self.z

    def homogeneous(self) -> tuple[complex, complex]:
        return (1 + 0j, 0j) if self.is_inf else (self.z, 1 + 0j)

    def embed(self) -> np.ndarray:
        """Coordinates on the unit 2-sphere; chordal distance is euclidean there."""
        if self.is_inf:
            return np.array([0.0, 0.0, 1.0])
        x, y = self.z.real, self.z.imag
        r2 = x * x + y * y
        if r2 > 1e200:
            w = 1.0 / r2
            return np.array([2 * x * w / (1 + w), 2 * y * w / (1 + w), (1 - w) / (1 + w)])
        s = 1.0 + r2
        return np.array([2 * x / s, 2 * y / s, (r2 - 1.0) / s])

    def __repr__(self):
        return "SpherePoint(inf)" if self.is_inf else f"SpherePoint({self.z!r})"


INF = SpherePoint(is_inf=True)


def as_point(value) -> SpherePoint:
    return SpherePoint.of(value)


def chordal(p, q) -> float:
    """Chordal distance 2|p-q| / sqrt((1+|p|^2)(1+|q|^2)), in [0, 2]."""
    p, q = SpherePoint.of(p), SpherePoint.of(q)
    if p.is_inf and q.is_inf:
        return 0.0
    if p.is_inf:
        return 2.0 / math.hypot(1.0, abs(q.z))
    if q.is_inf:
        return 2.0 / math.hypot(1.0, abs(p.z))
    return 2.0 * abs(p.z - q.z) / (math.hypot(1.0, abs(p.z)) * math.hypot(1.0, abs(q.z)))


def embed_points(points) -> np.ndarray:
    """Stack unit-sphere embeddings of an iterable of points into (n, 3)."""
    pts = [SpherePoint.of(p).embed() for p in points]
    if not pts:
        return np.zeros((0, 3))
    return np.vstack(pts)


# ---------------------------------------------------------------------------
# Moebius transformations
# ---------------------------------------------------------------------------

class MapKind(str, Enum):
    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    LOXODROMIC = "strictly-loxodromic"


@dataclass(frozen=True)
class MapClassification:
    kind: MapKind
    trace_sq: complex
    fixed_points: tuple[SpherePoint, ...]
    attracting: SpherePoint | None = None
    multipliers: tuple[complex, ...] = ()

    @property
    def is_loxodromic_like(self) -> bool:
        return self.kind in (MapKind.HYPERBOLIC, MapKind.LOXODROMIC)


@dataclass(frozen=True)
class MoebiusMap:
    """z -> (a z + b) / (c z + d) with ad - bc != 0."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            v = complex(getattr(self, name))
            object.__setattr__(self, name, v)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise GeometryError(f"non-finite coefficient {name}={v!r}")
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        # permissive floor: long compositions of contracting maps have det 1
        # but coefficients ~ condition^(1/2); only true degeneracy is rejected
        if scale == 0.0 or abs(self.det) <= 1e-18 * scale * scale:
            raise GeometryError("degenerate map: ad - bc is (numerically) zero")

    def well_conditioned(self, rel: float = 1e-12) -> bool:
        """Whether det is comfortably away from zero at the coefficient scale."""
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        return abs(self.det) > rel * scale * scale

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @staticmethod
    def identity() -> MoebiusMap:
        return MoebiusMap(1, 0, 0, 1)

    @staticmethod
    def scaling(factor: complex) -> MoebiusMap:
        return MoebiusMap(factor, 0, 0, 1)

    @staticmethod
    def translation(offset: complex) -> MoebiusMap:
        return MoebiusMap(1, offset, 0, 1)

    @staticmethod
    def affine(mul: complex, offset: complex) -> MoebiusMap:
        return MoebiusMap(mul, offset, 0, 1)

    def normalized(self) -> MoebiusMap:
        """det = 1 representative with Re(a+d) >= 0 (ties: Im(a+d) >= 0)."""
        s = cmath.sqrt(self.det)
        a, b, c, d = self.a / s, self.b / s, self.c / s, self.d / s
        t = a + d
        flip = False
        if abs(t) > 1e-12:
            flip = t.real < 0 or (abs(t.real) <= 1e-12 * abs(t) and t.imag < 0)
        else:
            # trace ~ 0: pick the sign from the first sizable coefficient
            for v in (a, b, c, d):
                if abs(v) > 1e-12:
                    flip = v.real < 0 or (abs(v.real) <= 1e-12 * abs(v) and v.imag < 0)
                    break
        if flip:
            a, b, c, d = -a, -b, -c, -d
        return MoebiusMap(a, b, c, d)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def apply(self, p) -> SpherePoint:
        num, den = SpherePoint.of(p).homogeneous()
        return SpherePoint.from_homogeneous(
            self.a * num + self.b * den, self.c * num + self.d * den
        )

    def __call__(self, p) -> SpherePoint:
        return self.apply(p)

    def compose(self, other: MoebiusMap) -> MoebiusMap:
        """self after other: (self @ other)(p) == self(other(p))."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        ).normalized()

    def __matmul__(self, other: MoebiusMap) -> MoebiusMap:
        return self.compose(other)

    def inverse(self) -> MoebiusMap:
        return MoebiusMap(self.d, -self.b, -self.c, self.a).normalized()

    def trace_sq(self) -> complex:
        n = self.normalized()
        t = n.a + n.d
        return t * t

    def is_identity(self, eps: float = TOL) -> bool:
        n = self.normalized()
        return (
            abs(n.b) <= eps
            and abs(n.c) <= eps
            and abs(n.a - n.d) <= eps
            and abs(n.a - 1) <= eps
        )

    def multiplier_at(self, p: SpherePoint) -> complex:
        """Derivative of the normalized map at a fixed point (at inf: via w=1/z)."""
        n = self.normalized()
        if p.is_inf:
            if abs(n.c) > 1e-12:
                raise GeometryError("infinity is not fixed by this map")
            return n.d / n.a
        return 1.0 / (n.c * p.z + n.d) ** 2

    def classify(self, eps: float = TOL) -> MapClassification:
        """Trace-squared classification with fixed points and attractor label."""
        n = self.normalized()
        a, b, c, d = n.a, n.b, n.c, n.d
        t = a + d
        t2 = t * t
        if n.is_identity(eps):
            return MapClassification(MapKind.IDENTITY, t2, ())

        if abs(t2 - 4.0) <= eps:
            if abs(c) > eps:
                fp = SpherePoint((a - d) / (2.0 * c))
            else:
                fp = INF
            return MapClassification(MapKind.PARABOLIC, t2, (fp,), None, (1.0 + 0j,))

        if abs(c) > eps:
            disc = cmath.sqrt(t2 - 4.0)
            # stable quadratic roots of c z^2 + (d - a) z - b = 0
            bb = d - a
            q = -0.5 * (bb + disc) if (bb.conjugate() * disc).real >= 0 else -0.5 * (bb - disc)
            if abs(q) > 1e-300:
                z1, z2 = q / c, -b / q
            else:
                z1, z2 = (a - d + disc) / (2 * c), (a - d - disc) / (2 * c)
            fps = (SpherePoint(z1), SpherePoint(z2))
        else:
            # affine: infinity is fixed; second fixed point if a != d
            fps = (INF, SpherePoint(b / (d - a)))

        mults = tuple(n.multiplier_at(p) for p in fps)

        if abs(t2.imag) <= eps:
            x = t2.real
            if x < 4.0:
                kind = MapKind.ELLIPTIC if x >= -eps else MapKind.LOXODROMIC
            else:
                kind = MapKind.HYPERBOLIC
        else:
            kind = MapKind.LOXODROMIC

        attracting = None
        if kind in (MapKind.HYPERBOLIC, MapKind.LOXODROMIC):
            attracting = fps[0] if abs(mults[0]) < abs(mults[1]) else fps[1]
        return MapClassification(kind, t2, fps, attracting, mults)

    def almost_equal(self, other: MoebiusMap, eps: float = TOL) -> bool:
        """Projective equality: same normalized coefficients up to eps."""
        m, n = self.normalized(), other.normalized()
        direct = max(abs(m.a - n.a), abs(m.b - n.b), abs(m.c - n.c), abs(m.d - n.d))
        flipped = max(abs(m.a + n.a), abs(m.b + n.b), abs(m.c + n.c), abs(m.d + n.d))
        return min(direct, flipped) <= eps


def apply(m: MoebiusMap, p) -> SpherePoint:
    return m.apply(p)


def compose(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    return m1.compose(m2)


# ---------------------------------------------------------------------------
# Generalized circles
# ---------------------------------------------------------------------------

_LINE_SNAP = 1e-12


@dataclass(frozen=True)
class GenCircle:
    """Locus a*|z|^2 + b*conj(z) + conj(b)*z + d = 0 in canonical form."""

    a: float
    b: complex
    d: float

    def __post_init__(self):
        a, b, d = float(self.a), complex(self.b), float(self.d)
        scale = max(abs(a), abs(b), abs(d))
        if scale == 0.0:
            raise GeometryError("zero coefficients do not define a circle")
        if abs(a) <= _LINE_SNAP * scale:
            a = 0.0
        if abs(b) ** 2 - a * d <= 1e-14 * scale * scale:
            raise GeometryError("degenerate circle: |b|^2 - a*d must be positive")
        if a != 0.0:
            b, d, a = b / a, d / a, 1.0
        else:
            s = abs(b)
            b, d = b / s, d / s
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def circle(center: complex, radius: float) -> GenCircle:
        if radius <= 0:
            raise GeometryError("radius must be positive")
        c = complex(center)
        return GenCircle(1.0, -c, abs(c) ** 2 - radius * radius)

    @staticmethod
    def line(point: complex, direction: complex) -> GenCircle:
        """Line through `point` along `direction`; normal is i*direction."""
        u = complex(direction)
        if u == 0:
            raise GeometryError("zero direction")
        u /= abs(u)
        nrm = 1j * u
        d = -2.0 * (nrm.conjugate() * complex(point)).real
        return GenCircle(0.0, nrm, d)

    @staticmethod
    def real_axis() -> GenCircle:
        return GenCircle.line(0.0, 1.0)

    @staticmethod
    def unit_circle() -> GenCircle:
        return GenCircle.circle(0.0, 1.0)

    # -- basic queries -----------------------------------------------------

    @property
    def is_line(self) -> bool:
        return self.a == 0.0

    @property
    def center(self) -> complex:
        if self.is_line:
            raise GeometryError("a line has no finite center")
        return -self.b

    @property
    def radius(self) -> float:
        if self.is_line:
            return math.inf
        return math.sqrt(abs(self.b) ** 2 - self.d)

    @property
    def line_point(self) -> complex:
        """Closest point of the line to the origin."""
        if not self.is_line:
            raise GeometryError("not a line")
        return -0.5 * self.d * self.b

    @property
    def line_direction(self) -> complex:
        if not self.is_line:
            raise GeometryError("not a line")
        return -1j * self.b

    def form(self, p) -> float:
        """Hermitian form at p, evaluated on unit homogeneous coordinates.

        Zero on the locus; the sign distinguishes the two sides (for a
        canonical circle the interior is negative).  Infinity gives a, so
        lines (a = 0) contain infinity.
        """
        num, den = SpherePoint.of(p).homogeneous()
        s = math.hypot(abs(num), abs(den))
        num, den = num / s, den / s
        val = (
            self.a * (num.real * num.real + num.imag * num.imag)
            + 2.0 * (self.b * num.conjugate() * den).real
            + self.d * (den.real * den.real + den.imag * den.imag)
        )
        return val

    def side(self, p, tol: float = TOL) -> int:
        """-1 / 0 / +1 for negative side, on the circle, positive side."""
        v = self.form(p)
        if abs(v) <= tol:
            return 0
        return -1 if v < 0 else 1

    def contains(self, p, tol: float = TOL) -> bool:
        return abs(self.form(p)) <= tol

    # -- parametrization ---------------------------------------------------

    def point_at(self, phi: float) -> SpherePoint:
        """phi in [0, 2*pi); lines pass through infinity at phi = 0."""
        if self.is_line:
            phi = phi % TWO_PI
            if phi == 0.0:
                return INF
            t = -1.0 / math.tan(0.5 * phi)
            return SpherePoint(self.line_point + self.line_direction * t)
        c, r = self.center, self.radius
        return SpherePoint(c + r * complex(math.cos(phi), math.sin(phi)))

    def param_of(self, p) -> float:
        """Inverse of point_at for a point on the locus."""
        p = SpherePoint.of(p)
        if self.is_line:
            if p.is_inf:
                return 0.0
            t = ((p.z - self.line_point) * self.line_direction.conjugate()).real
            return 2.0 * math.atan2(1.0, -t) % TWO_PI
        if p.is_inf:
            raise GeometryError("infinity is not on a finite circle")
        return cmath.phase(p.z - self.center) % TWO_PI

    # -- transforms and metric ----------------------------------------------

    def transform(self, m: MoebiusMap) -> GenCircle:
        """Image locus under m (Hermitian congruence by the inverse matrix)."""
        inv = m.inverse().matrix()
        h = np.array([[self.a, self.b], [self.b.conjugate(), self.d]], dtype=complex)
        hp = inv.conj().T @ h @ inv
        b = 0.5 * (hp[0, 1] + hp[1, 0].conjugate())
        return GenCircle(hp[0, 0].real, b, hp[1, 1].real)

    def plane(self) -> tuple[np.ndarray, float]:
        """The circle as sphere-plane intersection {X : n.X + h = 0} in R^3."""
        n = np.array([self.b.real, self.b.imag, 0.5 * (self.a - self.d)])
        h = 0.5 * (self.a + self.d)
        return n, h

    def dist_point(self, p) -> float:
        """Chordal distance from p to the circle (exact, via the R^3 picture)."""
        n, h = self.plane()
        nn = float(np.dot(n, n))
        x = SpherePoint.of(p).embed()
        delta = (float(np.dot(n, x)) + h) / math.sqrt(nn)
        c0 = -h * n / nn
        rho_sq = 1.0 - h * h / nn
        rho = math.sqrt(max(rho_sq, 0.0))
        v = x - delta * n / math.sqrt(nn) - c0
        vn = float(np.linalg.norm(v))
        if vn < 1e-15:
            return math.sqrt(delta * delta + rho * rho)
        return math.hypot(delta, vn - rho)

    def sample(self, n: int) -> list[SpherePoint]:
        """n points spread over the locus (parameter-uniform)."""
        return [self.point_at(TWO_PI * k / n) for k in range(n)]

    # -- relations -----------------------------------------------------------

    def key(self, digits: int = 9) -> tuple:
        """Rounded canonical coefficients, for dedup of equal loci."""
        return (
            round(self.a, digits),
            round(self.b.real, digits),
            round(self.b.imag, digits),
            round(self.d, digits),
        )

    def same_locus(self, other: GenCircle, tol: float = TOL) -> bool:
        if self.is_line != other.is_line:
            return False
        direct = max(abs(self.b - other.b), abs(self.d - other.d))
        flipped = max(abs(self.b + other.b), abs(self.d + other.d))
        if self.is_line:
            return direct <= tol or flipped <= tol
        return direct <= tol

    def intersect(self, other: GenCircle, tol: float = TOL) -> list[SpherePoint]:
        """0, 1 or 2 intersection points; identical loci are rejected.

        Two distinct parallel lines are tangent at infinity; two distinct
        non-parallel lines meet at one finite point and at infinity.
        """
        if self.same_locus(other, tol):
            raise GeometryError("identical loci have no discrete intersection")
        if self.is_line and other.is_line:
            return self._intersect_lines(other, tol)
        if self.is_line:
            return other._intersect_with_line(self, tol)
        if other.is_line:
            return self._intersect_with_line(other, tol)
        # circle-circle: reduce to the radical line
        db = self.b - other.b
        dd = self.d - other.d
        if abs(db) <= tol:
            return []  # concentric, distinct radii
        radical = GenCircle(0.0, db, dd)
        return self._intersect_with_line(radical, tol)

    def _intersect_lines(self, other: GenCircle, tol: float) -> list[SpherePoint]:
        b1, b2 = self.b, other.b
        cross = (b1.conjugate() * b2).imag
        if abs(cross) <= tol:
            return [INF]  # parallel distinct lines touch only at infinity
        # solve 2 Re(conj(b) z) + d = 0 for both lines
        a11, a12, r1 = 2 * b1.real, 2 * b1.imag, -self.d
        a21, a22, r2 = 2 * b2.real, 2 * b2.imag, -other.d
        det = a11 * a22 - a12 * a21
        x = (r1 * a22 - r2 * a12) / det
        y = (a11 * r2 - a21 * r1) / det
        return [SpherePoint(complex(x, y)), INF]

    def _intersect_with_line(self, line: GenCircle, tol: float) -> list[SpherePoint]:
        z0, u = line.line_point, line.line_direction
        alpha = z0 - self.center
        bb = (u.conjugate() * alpha).real
        cc = abs(alpha) ** 2 - self.radius ** 2
        disc = bb * bb - cc
        if abs(disc) <= tol:
            return [SpherePoint(z0 - bb * u)]
        if disc < 0:
            return []
        root = math.sqrt(disc)
        return [SpherePoint(z0 + (-bb - root) * u), SpherePoint(z0 + (-bb + root) * u)]


def map_circle(m: MoebiusMap, circle: GenCircle) -> GenCircle:
    return circle.transform(m)


def circle_intersect(c1: GenCircle, c2: GenCircle, tol: float = TOL) -> list[SpherePoint]:
    return c1.intersect(c2, tol)


# ---------------------------------------------------------------------------
# Arcs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Arc:
    """Sub-arc of a generalized circle: parameters [phi0, phi0 + delta], ccw.

    delta == 2*pi with full == True is the whole circle (endpoints equal).
    """

    circle: GenCircle
    phi0: float
    delta: float
    full: bool = False

    def __post_init__(self):
        phi0 = self.phi0 % TWO_PI
        if self.full:
            object.__setattr__(self, "phi0", 0.0)
            object.__setattr__(self, "delta", TWO_PI)
        else:
            if not (0.0 < self.delta <= TWO_PI):
                raise GeometryError(f"arc sweep must lie in (0, 2*pi], got {self.delta}")
            object.__setattr__(self, "phi0", phi0)

    @staticmethod
    def full_circle(circle: GenCircle) -> Arc:
        return Arc(circle, 0.0, TWO_PI, full=True)

    @staticmethod
    def from_endpoints(circle: GenCircle, p, q, ccw: bool = True) -> Arc:
        """Arc between two points of the circle; ccw picks which of the two."""
        a = circle.param_of(p)
        b = circle.param_of(q)
        if not ccw:
            a, b = b, a
        delta = (b - a) % TWO_PI
        if delta == 0.0:
            return Arc.full_circle(circle)
        return Arc(circle, a, delta)

    @property
    def phi1(self) -> float:
        return self.phi0 + self.delta

    def endpoints(self) -> tuple[SpherePoint, SpherePoint]:
        return self.circle.point_at(self.phi0), self.circle.point_at(self.phi1 % TWO_PI)

    def midpoint(self) -> SpherePoint:
        return self.circle.point_at((self.phi0 + 0.5 * self.delta) % TWO_PI)

    def point_at_fraction(self, t: float) -> SpherePoint:
        return self.circle.point_at((self.phi0 + t * self.delta) % TWO_PI)

    def contains_param(self, phi: float, slack: float = 0.0) -> bool:
        rel = (phi - self.phi0) % TWO_PI
        return rel <= self.delta + slack

    def transform(self, m: MoebiusMap) -> Arc:
        """Image arc under m (endpoints and a midpoint pin the image interval)."""
        image = self.circle.transform(m)
        if self.full:
            return Arc.full_circle(image)
        p0 = m.apply(self.circle.point_at(self.phi0))
        p1 = m.apply(self.circle.point_at(self.phi1 % TWO_PI))
        pm = m.apply(self.midpoint())
        a = image.param_of(p0)
        b = image.param_of(p1)
        tm = image.param_of(pm)
        delta = (b - a) % TWO_PI
        if delta == 0.0:
            return Arc.full_circle(image)
        rel = (tm - a) % TWO_PI
        if rel <= delta:
            return Arc(image, a, delta)
        return Arc(image, b, TWO_PI - delta)

    def chordal_length(self, samples: int = 64) -> float:
        pts = [self.point_at_fraction(k / samples) for k in range(samples + 1)]
        return sum(chordal(pts[k], pts[k + 1]) for k in range(samples))

    def sample_chordal(self, density: float, min_points: int = 2) -> list[SpherePoint]:
        """Deterministic points along the arc, ~uniform in chordal arclength."""
        if density <= 0:
            raise GeometryError("density must be positive")
        fine = 256
        fracs = np.linspace(0.0, 1.0, fine + 1)
        pts = [self.point_at_fraction(float(t)) for t in fracs]
        seg = np.array([chordal(pts[k], pts[k + 1]) for k in range(fine)])
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        total = float(cum[-1])
        if total == 0.0:
            return [pts[0]]
        n = max(min_points, int(math.ceil(total * density)) + 1)
        if self.full:
            targets = np.linspace(0.0, total, n, endpoint=False)
        else:
            targets = np.linspace(0.0, total, n)
        out_fracs = np.interp(targets, cum, fracs)
        return [self.point_at_fraction(float(t)) for t in out_fracs]

    def split(self, rel_offsets: list[float]) -> list[Arc]:
        """Cut at relative parameter offsets (strictly inside (0, delta))."""
        cuts = sorted({t for t in rel_offsets if 1e-12 < t < self.delta - 1e-12})
        bounds = [0.0] + cuts + [self.delta]
        return [
            Arc(self.circle, self.phi0 + a, b - a)
            for a, b in zip(bounds[:-1], bounds[1:])
            if b - a > 1e-12
        ]

    def key(self, digits: int = 9) -> tuple:
        ck = self.circle.key(digits)
        if self.full:
            return ck + ("full",)
        return ck + (round(self.phi0, digits), round(self.delta, digits))
