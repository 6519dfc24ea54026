"""Finite-dimensional real l_p spaces.

Norms and duality, extreme points and the face lattice of the polyhedral
unit balls (p in {1, inf}), supporting functionals, Birkhoff-James
orthogonality, and Euclidean arc-length machinery for the 2-D l_p circle.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.integrate import quad

from .errors import (
    MixedSpacesError,
    OutOfRangeError,
    UnsupportedExponentError,
    UnsupportedSpaceError,
    ZeroVectorError,
)
from .optim import golden_section_min

INF = math.inf

# Decidability tolerances. The underlying mathematics is exact; these make
# every predicate computable on floats.
TAU_EQ = 1e-9      # relative tolerance for norm equalities
TAU_OPT = 1e-10    # bracket width for 1-D convex minimisation
TAU_PROBE = 1e-6   # probe offset for strong Birkhoff-James certification

Exponent = Union[Fraction, float]


def as_exponent(value) -> Exponent:
    """Coerce to an exact exponent: a Fraction >= 1, or math.inf."""
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        value = Fraction(value)
    if isinstance(value, float) and math.isinf(value):
        return INF
    p = Fraction(value)
    if p < 1:
        raise UnsupportedExponentError(f"exponent must satisfy p >= 1, got {p}")
    return p


def exponent_str(p: Exponent) -> str:
    return "inf" if p == INF else str(Fraction(p))


@dataclass(frozen=True)
class SpaceSpec:
    """A finite-dimensional l_p space: exponent p in [1, inf] and dimension n."""

    p: Exponent
    n: int

    def __post_init__(self):
        object.__setattr__(self, "p", as_exponent(self.p))
        if not (isinstance(self.n, int) and self.n >= 1):
            raise UnsupportedSpaceError(f"dimension must be a positive integer, got {self.n}")

    @property
    def pf(self) -> float:
        """Exponent as a float (math.inf for the sup norm)."""
        return float(self.p)

    @property
    def polyhedral(self) -> bool:
        return self.p == 1 or self.p == INF

    @property
    def strictly_convex(self) -> bool:
        return 1 < self.p < INF

    @property
    def hilbert(self) -> bool:
        return self.p == 2

    def dual(self) -> "SpaceSpec":
        return dual_space(self)

    def __repr__(self):
        return f"l_{exponent_str(self.p)}^{self.n}"


def linf(n: int) -> SpaceSpec:
    return SpaceSpec(INF, n)


def l1(n: int) -> SpaceSpec:
    return SpaceSpec(Fraction(1), n)


def l2(n: int) -> SpaceSpec:
    return SpaceSpec(Fraction(2), n)


def lp(p, n: int) -> SpaceSpec:
    return SpaceSpec(as_exponent(p), n)


def pnorm(v, p: Exponent, axis: int = -1):
    """l_p norm along an axis; vectorized."""
    v = np.asarray(v, dtype=float)
    if p == INF:
        return np.abs(v).max(axis=axis)
    pf = float(p)
    if pf == 1.0:
        return np.abs(v).sum(axis=axis)
    if pf == 2.0:
        return np.sqrt((v * v).sum(axis=axis))
    return (np.abs(v) ** pf).sum(axis=axis) ** (1.0 / pf)


@dataclass(frozen=True)
class Point:
    """A vector together with the space whose norm measures it."""

    coords: np.ndarray
    space: SpaceSpec

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.ndim != 1 or c.shape[0] != self.space.n:
            raise MixedSpacesError(
                f"coordinate length {c.shape} does not match dimension {self.space.n}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def norm(self) -> float:
        return float(pnorm(self.coords, self.space.p))

    def __repr__(self):
        return f"Point({np.array2string(self.coords, precision=6)}, {self.space})"


def point(coords, space: SpaceSpec) -> Point:
    return Point(np.asarray(coords, dtype=float), space)


def norm(x: Point) -> float:
    """The l_p norm of x in its own space."""
    return x.norm()


def dual_space(s: SpaceSpec) -> SpaceSpec:
    """Conjugate-exponent space: 1/p + 1/q = 1, with 1 <-> inf."""
    if s.p == INF:
        return SpaceSpec(Fraction(1), s.n)
    if s.p == 1:
        return SpaceSpec(INF, s.n)
    q = s.p / (s.p - 1)
    return SpaceSpec(q, s.n)


def extreme_points(s: SpaceSpec) -> list[Point]:
    """Extreme points of the unit ball; polyhedral spaces only."""
    if not s.polyhedral:
        raise UnsupportedSpaceError(
            "extreme points of a strictly convex ball form the whole sphere"
        )
    pts = []
    if s.p == INF:
        for signs in itertools.product((-1.0, 1.0), repeat=s.n):
            pts.append(Point(np.array(signs), s))
    else:
        for i in range(s.n):
            for sgn in (1.0, -1.0):
                e = np.zeros(s.n)
                e[i] = sgn
                pts.append(Point(e, s))
    return pts


@dataclass(frozen=True)
class Face:
    """A proper face of the unit ball of l_inf^n or l_1^n.

    The sign pattern q in {-1,0,+1}^n encodes, for l_inf, the set
    {x : x_i = q_i where q_i != 0, |x_j| <= 1 elsewhere}; for l_1 it encodes
    conv{q_i e_i : q_i != 0}.
    """

    space: SpaceSpec
    pattern: tuple

    def __post_init__(self):
        if not self.space.polyhedral:
            raise UnsupportedSpaceError("faces are defined for polyhedral spaces only")
        pat = tuple(int(v) for v in self.pattern)
        if len(pat) != self.space.n or any(v not in (-1, 0, 1) for v in pat):
            raise OutOfRangeError(f"bad sign pattern {self.pattern}")
        if all(v == 0 for v in pat):
            raise OutOfRangeError("a proper face needs at least one nonzero sign")
        object.__setattr__(self, "pattern", pat)

    @property
    def dim(self) -> int:
        nz = sum(1 for v in self.pattern if v != 0)
        if self.space.p == INF:
            return self.space.n - nz
        return nz - 1

    @property
    def support(self) -> tuple:
        return tuple(i for i, v in enumerate(self.pattern) if v != 0)

    def vertices(self) -> np.ndarray:
        """Extreme points of the face, one per row."""
        n = self.space.n
        if self.space.p == INF:
            free = [i for i, v in enumerate(self.pattern) if v == 0]
            base = np.array(self.pattern, dtype=float)
            out = []
            for signs in itertools.product((-1.0, 1.0), repeat=len(free)):
                v = base.copy()
                for i, sgn in zip(free, signs):
                    v[i] = sgn
                out.append(v)
            return np.array(out)
        out = []
        for i in self.support:
            v = np.zeros(n)
            v[i] = self.pattern[i]
            out.append(v)
        return np.array(out)

    def relative_interior_coords(self) -> np.ndarray:
        if self.space.p == INF:
            return np.array(self.pattern, dtype=float)
        verts = self.vertices()
        return verts.mean(axis=0)

    def contains_face(self, other: "Face") -> bool:
        """Whether `other` is a (not necessarily proper) subface of this face."""
        if self.space != other.space:
            raise MixedSpacesError("faces of different spaces")
        if self.space.p == INF:
            # larger face = fewer fixed coordinates
            return all(
                other.pattern[i] == v for i, v in enumerate(self.pattern) if v != 0
            )
        return all(
            self.pattern[i] == v for i, v in enumerate(other.pattern) if v != 0
        )

    def distance_to(self, X) -> np.ndarray:
        """Distance (in the space's own norm) from each row of X to the face.

        Closed forms: coordinate clamping for l_inf faces, an exact simplex
        projection formula for l_1 faces.
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        pat = np.array(self.pattern, dtype=float)
        fixed = pat != 0
        if self.space.p == INF:
            dev_fixed = np.abs(X[:, fixed] - pat[fixed])
            a = dev_fixed.max(axis=1) if fixed.any() else np.zeros(len(X))
            free = ~fixed
            if free.any():
                over = np.maximum(np.abs(X[:, free]) - 1.0, 0.0).max(axis=1)
                a = np.maximum(a, over)
            return a
        # l_1: min over the simplex conv{q_i e_i} of ||x - v||_1.  With
        # y_i = q_i x_i on the support, the optimum value is
        # sum((-y)_+) + |sum(y_+) - 1| plus the off-support mass.
        sup = list(self.support)
        y = X[:, sup] * pat[sup]
        negpart = np.maximum(-y, 0.0).sum(axis=1)
        pospart = np.maximum(y, 0.0).sum(axis=1)
        off = np.abs(X).sum(axis=1) - np.abs(X[:, sup]).sum(axis=1)
        return negpart + np.abs(pospart - 1.0) + off

    def __repr__(self):
        s = "".join("+" if v > 0 else "-" if v < 0 else "0" for v in self.pattern)
        return f"Face({self.space}, {s})"


def enumerate_faces(s: SpaceSpec) -> list[Face]:
    """All proper faces of the unit ball of a polyhedral space."""
    if not s.polyhedral:
        raise UnsupportedSpaceError("face enumeration requires p in {1, inf}")
    faces = []
    for pat in itertools.product((-1, 0, 1), repeat=s.n):
        if any(v != 0 for v in pat):
            faces.append(Face(s, pat))
    return faces


def relative_interior_point(face: Face) -> Point:
    return Point(face.relative_interior_coords(), face.space)


def points_distance(x_coords, pts, p: Exponent) -> float:
    """Min l_p distance from a single vector to a finite point list."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    return float(pnorm(pts - np.asarray(x_coords, dtype=float), p, axis=1).min())


def subspace_distance(x_coords, basis) -> float:
    """Euclidean distance to a subspace given an orthonormal basis (columns)."""
    Q = np.asarray(basis, dtype=float)
    x = np.asarray(x_coords, dtype=float)
    r = x - Q @ (Q.T @ x)
    return float(np.linalg.norm(r))


def distance_point_to_set(x: Point, S) -> float:
    """inf over S of ||x - s|| in x's own norm.

    S may be a Face, a finite collection of Points (or an array of rows), or
    any object exposing a vectorized ``distance_to`` (an AttainmentSet).
    """
    if isinstance(S, Face):
        if S.space != x.space:
            raise MixedSpacesError("point and face in different spaces")
        return float(S.distance_to(x.coords[None, :])[0])
    if hasattr(S, "distance_to"):
        return float(np.atleast_1d(S.distance_to(x.coords[None, :]))[0])
    if isinstance(S, np.ndarray):
        return points_distance(x.coords, S, x.space.p)
    pts = []
    for s in S:
        if isinstance(s, Point):
            if s.space != x.space:
                raise MixedSpacesError("points in different spaces")
            pts.append(s.coords)
        else:
            pts.append(np.asarray(s, dtype=float))
    return points_distance(x.coords, np.array(pts), x.space.p)


@dataclass(frozen=True)
class SupportSet:
    """J(x): the norm-one functionals attaining ||x|| at x.

    ``functionals`` lists either the unique supporting functional or the
    extreme generators of the (polyhedral) support face in the dual ball.
    """

    point: Point
    functionals: tuple
    is_unique: bool

    def __post_init__(self):
        dual = self.point.space.dual()
        nx = self.point.norm()
        for f in self.functionals:
            if abs(f.norm() - 1.0) > 1e-7:
                raise OutOfRangeError("supporting functional is not norm-one")
            if abs(float(f.coords @ self.point.coords) - nx) > 1e-7 * max(1.0, nx):
                raise OutOfRangeError("functional does not attain the norm at x")
            if f.space != dual:
                raise MixedSpacesError("functional not in the dual space")


def support_functionals(x: Point) -> SupportSet:
    """The supporting functionals J(x) of a nonzero vector."""
    nx = x.norm()
    if nx == 0.0:
        raise ZeroVectorError("J(x) is undefined for x = 0")
    s = x.space
    dual = s.dual()
    c = x.coords
    if s.strictly_convex:
        pf = s.pf
        f = np.sign(c) * np.abs(c) ** (pf - 1.0) / nx ** (pf - 1.0)
        return SupportSet(x, (Point(f, dual),), True)
    if s.p == INF:
        gens = []
        for i in range(s.n):
            if abs(abs(c[i]) - nx) <= TAU_EQ * nx:
                e = np.zeros(s.n)
                e[i] = math.copysign(1.0, c[i])
                gens.append(Point(e, dual))
        return SupportSet(x, tuple(gens), len(gens) == 1)
    # l_1: f_i = sign(x_i) on the support, any value in [-1, 1] off it.
    supp = [i for i in range(s.n) if abs(c[i]) > TAU_EQ * nx]
    free = [i for i in range(s.n) if i not in supp]
    base = np.zeros(s.n)
    for i in supp:
        base[i] = math.copysign(1.0, c[i])
    gens = []
    for signs in itertools.product((-1.0, 1.0), repeat=len(free)):
        f = base.copy()
        for i, sgn in zip(free, signs):
            f[i] = sgn
        gens.append(Point(f, dual))
    if not free:
        gens = [Point(base, dual)]
    return SupportSet(x, tuple(gens), len(free) == 0)


def is_smooth_point(x: Point) -> bool:
    """True iff J(x) is a singleton."""
    nx = x.norm()
    if nx == 0.0:
        raise ZeroVectorError("smoothness is undefined for x = 0")
    s = x.space
    if s.strictly_convex:
        return True
    c = np.abs(x.coords)
    if s.p == INF:
        return int((c >= nx * (1.0 - TAU_EQ)).sum()) == 1
    return bool((c > TAU_EQ * nx).all())


def birkhoff_orthogonal(x: Point, y: Point, strong: bool = False) -> bool:
    """Birkhoff-James orthogonality x _|_B y.

    Plain: min over real lambda of ||x + lambda*y|| >= ||x||, decided by
    golden-section search on a bracketing interval.  Strong additionally
    requires the minimiser set to be {0}, certified by probing
    ||x +/- tau*y|| > ||x|| at tau = TAU_PROBE (exact for strictly convex
    spaces; a tau-resolution certificate for polyhedral ones).
    """
    if x.space != y.space:
        raise MixedSpacesError("Birkhoff-James orthogonality needs one space")
    nx = x.norm()
    if nx == 0.0:
        raise ZeroVectorError("x must be nonzero")
    ny = y.norm()
    if ny == 0.0:
        return not strong
    p = x.space.p
    r = 2.0 * nx / ny

    def g(lam):
        return float(pnorm(x.coords + lam * y.coords, p))

    _, gmin = golden_section_min(g, -r, r, tol=TAU_OPT)
    plain = gmin >= nx * (1.0 - TAU_EQ)
    if not strong or not plain:
        return plain
    if x.space.strictly_convex:
        # the minimiser is unique, and plain orthogonality pins it at 0
        return True
    probe = TAU_PROBE
    bump = nx * TAU_EQ
    return g(probe) > nx + bump and g(-probe) > nx + bump


# ---------------------------------------------------------------------------
# Arc-length machinery for the l_p circle |x|^p + |y|^p = 1.
# ---------------------------------------------------------------------------


def lp_circle(p: Exponent, t) -> np.ndarray:
    """Point(s) on the l_p unit circle at parameter t.

    Parametrization x = sgn(cos t)|cos t|^(2/p), y = sgn(sin t)|sin t|^(2/p).
    """
    t = np.asarray(t, dtype=float)
    e = 2.0 / float(p)
    c, s = np.cos(t), np.sin(t)
    x = np.sign(c) * np.abs(c) ** e
    y = np.sign(s) * np.abs(s) ** e
    return np.stack([x, y], axis=-1)


def arc_length_total(p) -> float:
    """Euclidean length of the l_p unit circle.

    Adaptive quadrature over the trigonometric parametrization for
    1 < p < inf; the exact polygonal perimeters for p in {1, inf} are
    returned without quadrature.
    """
    p = as_exponent(p)
    if p == 1:
        return 4.0 * math.sqrt(2.0)
    if p == INF:
        return 8.0
    e = 2.0 / float(p)

    def speed(t):
        c, s = math.cos(t), math.sin(t)
        dx = -e * abs(c) ** (e - 1.0) * s
        dy = e * abs(s) ** (e - 1.0) * c
        return math.hypot(dx, dy)

    val, _ = quad(speed, 0.0, math.pi / 2.0, epsabs=1e-13, epsrel=1e-10, limit=400)
    return 4.0 * val


@functools.lru_cache(maxsize=32)
def _arc_table(p_key: str, m: int):
    """Cumulative Euclidean arc-length table of the l_p circle.

    Returns (points (m+1,2) with wrap row, s (m+1,) cumulative lengths).
    """
    p = as_exponent(p_key)
    t = np.linspace(0.0, 2.0 * math.pi, m + 1)
    pts = lp_circle(p, t)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    return pts, s


def _interp_on_curve(pts, s, u):
    """Linear interpolation of curve points at cumulative arc positions u."""
    L = s[-1]
    u = np.mod(u, L)
    x = np.interp(u, s, pts[:, 0])
    y = np.interp(u, s, pts[:, 1])
    return np.stack([x, y], axis=-1)


def _arc_constant_at(p: Exponent, eps: float, m: int) -> float:
    pts, s = _arc_table(exponent_str(p), m)
    L = s[-1]
    u = np.linspace(0.0, L, m, endpoint=False)
    a = _interp_on_curve(pts, s, u)
    b = _interp_on_curve(pts, s, u + eps)
    return float(pnorm(a - b, p, axis=1).min())


def arc_length_constant(p, eps: float, resolution: int | None = None) -> float:
    """The eps-arc-length constant of the l_p circle.

    Minimal l_p chord length between circle points at Euclidean arc
    separation eps (monotone chord-vs-arc on a convex curve reduces the
    search over separations >= eps to exactly eps).  The table resolution is
    doubled until successive values agree to 1e-6 unless pinned explicitly.
    """
    p = as_exponent(p)
    if not (1 < p < INF):
        raise UnsupportedExponentError("arc-length constant needs 1 < p < inf")
    L = arc_length_total(p)
    if not (0.0 < eps < L / 2.0):
        raise OutOfRangeError(f"eps must lie in (0, L/2) = (0, {L / 2.0})")
    if resolution is not None:
        return _arc_constant_at(p, eps, int(resolution))
    m = 1 << 13
    prev = _arc_constant_at(p, eps, m)
    while m < (1 << 17):
        m *= 2
        cur = _arc_constant_at(p, eps, m)
        if abs(cur - prev) < 1e-6:
            return cur
        prev = cur
    return prev
