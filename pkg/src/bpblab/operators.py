"""Matrix operators between l_p spaces.

Operator norm with a maximising witness, the norm attainment set M_T in an
exact representation per domain geometry, delta-approximate attainment,
restricted norms, and operator smoothness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    DegenerateBasisError,
    MixedSpacesError,
    UnsupportedSpaceError,
    ZeroOperatorError,
)
from .optim import golden_section_min
from .sampling import sphere_grid
from .spaces import (
    INF,
    TAU_EQ,
    TAU_OPT,
    Face,
    Point,
    SpaceSpec,
    enumerate_faces,
    lp_circle,
    pnorm,
    points_distance,
    subspace_distance,
)

TAU_GAP = 1e-8     # singular-value gap deciding dim H_0
TAU_DEDUP = 1e-5   # dedup radius for point-pair attainment sets

DEFAULT_RESOLUTION = 4096


@dataclass(frozen=True)
class OperatorMatrix:
    """An m x n real matrix between declared l_p spaces."""

    entries: np.ndarray
    domain: SpaceSpec
    codomain: SpaceSpec

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape != (self.codomain.n, self.domain.n):
            raise MixedSpacesError(
                f"matrix shape {m.shape} does not match "
                f"{self.codomain.n} x {self.domain.n}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def apply(self, x) -> np.ndarray:
        return self.entries @ np.asarray(x, dtype=float)

    def apply_rows(self, X) -> np.ndarray:
        """Apply to each row of X; returns image rows."""
        return np.asarray(X, dtype=float) @ self.entries.T

    def image_norms(self, X) -> np.ndarray:
        return pnorm(self.apply_rows(X), self.codomain.p, axis=1)

    def __add__(self, other):
        self._check_same(other)
        return OperatorMatrix(self.entries + other.entries, self.domain, self.codomain)

    def __sub__(self, other):
        self._check_same(other)
        return OperatorMatrix(self.entries - other.entries, self.domain, self.codomain)

    def __mul__(self, c):
        return OperatorMatrix(self.entries * float(c), self.domain, self.codomain)

    __rmul__ = __mul__

    def _check_same(self, other):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise MixedSpacesError("operators between different space pairs")

    def close_to(self, other, tol=1e-12) -> bool:
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and bool(np.allclose(self.entries, other.entries, atol=tol, rtol=0.0))
        )

    def __repr__(self):
        return (
            f"OperatorMatrix({np.array2string(self.entries, precision=6)}, "
            f"{self.domain} -> {self.codomain})"
        )


def operator(entries, domain: SpaceSpec, codomain: SpaceSpec) -> OperatorMatrix:
    return OperatorMatrix(np.asarray(entries, dtype=float), domain, codomain)


@dataclass(frozen=True)
class AttainmentSet:
    """M_T = {x in S_X : ||Tx|| = ||T||} in one of three exact forms.

    kind "faces": a union of maximal faces of the polyhedral unit ball;
    kind "points": finitely many +/- point pairs (rows, closed under
    negation); kind "subspace": S_X intersected with a subspace given by an
    orthonormal column basis (Hilbert domain).
    """

    kind: str
    value: float
    space: SpaceSpec
    faces: tuple = ()
    points: Optional[np.ndarray] = None
    basis: Optional[np.ndarray] = None

    def distance_to(self, X) -> np.ndarray:
        """Distance in the domain norm from each row of X to the set."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.kind == "faces":
            d = np.full(len(X), np.inf)
            for f in self.faces:
                d = np.minimum(d, f.distance_to(X))
            return d
        if self.kind == "points":
            diffs = X[:, None, :] - self.points[None, :, :]
            return pnorm(diffs, self.space.p, axis=2).min(axis=1)
        # subspace: Euclidean residual, then renormalised? The set is
        # S_X /\ H_0; for p = 2 the nearest point of the set to a unit vector
        # is the normalised projection, at distance sqrt(2 - 2*||proj||).
        Q = self.basis
        proj = X @ Q @ Q.T
        pn = np.linalg.norm(proj, axis=1)
        xn = np.linalg.norm(X, axis=1)
        if Q.shape[1] == 0:
            return np.full(len(X), np.inf)
        # distance from x to the unit sphere of H_0
        inner = np.einsum("ij,ij->i", X, proj)
        d2 = xn ** 2 + 1.0 - 2.0 * np.where(pn > 0, inner / np.maximum(pn, 1e-300), 0.0)
        return np.sqrt(np.maximum(d2, 0.0))

    def representative_points(self) -> np.ndarray:
        """Unit vectors representing the set, one row each."""
        if self.kind == "faces":
            reps = [f.relative_interior_coords() for f in self.faces]
            verts = np.concatenate([f.vertices() for f in self.faces], axis=0)
            return np.unique(np.round(np.concatenate([reps, verts]), 12), axis=0)
        if self.kind == "points":
            return self.points
        Q = self.basis
        cols = [Q[:, j] for j in range(Q.shape[1])]
        reps = cols + [-c for c in cols]
        if Q.shape[1] >= 2:
            for i, j in itertools.combinations(range(Q.shape[1]), 2):
                v = (Q[:, i] + Q[:, j]) / math.sqrt(2.0)
                reps.extend([v, -v])
        return np.array(reps)

    @property
    def subspace_dim(self) -> int:
        if self.kind != "subspace":
            raise UnsupportedSpaceError("not a subspace attainment set")
        return self.basis.shape[1]

    def is_full_sphere(self) -> bool:
        return self.kind == "subspace" and self.subspace_dim == self.space.n

    def is_single_pair(self) -> bool:
        if self.kind == "points":
            return len(self.points) == 2
        if self.kind == "subspace":
            return self.subspace_dim == 1
        return len(self.faces) == 2 and all(f.dim == 0 for f in self.faces)

    def pair_count(self) -> int:
        """Number of +/- pairs for a discrete set."""
        from .errors import NotDiscreteError

        if self.kind == "points":
            return len(self.points) // 2
        if self.kind == "faces" and all(f.dim == 0 for f in self.faces):
            return len(self.faces) // 2
        if self.kind == "subspace" and self.subspace_dim == 1:
            return 1
        raise NotDiscreteError("attainment set is not a finite point set")


def attainment_equal(a: AttainmentSet, b: AttainmentSet, tol: float = 1e-7) -> bool:
    """Whether two attainment sets describe the same subset of the sphere."""
    if a.space != b.space:
        return False
    if a.kind == "faces" and b.kind == "faces":
        return {f.pattern for f in a.faces} == {f.pattern for f in b.faces}
    if a.kind == "subspace" and b.kind == "subspace":
        if a.subspace_dim != b.subspace_dim:
            return False
        P = a.basis @ a.basis.T
        Q = b.basis @ b.basis.T
        return bool(np.abs(P - Q).max() < tol)
    if a.kind == "points" and b.kind == "points":
        if len(a.points) != len(b.points):
            return False
        da = a.distance_to(b.points)
        db = b.distance_to(a.points)
        return bool(da.max() < tol and db.max() < tol)
    # mixed representations: compare via mutual representative distances
    ra, rb = a.representative_points(), b.representative_points()
    return bool(a.distance_to(rb).max() < tol and b.distance_to(ra).max() < tol)


def _lp2_local_maxima(T: OperatorMatrix, resolution: int):
    """Grid + golden-section refinement of ||T gamma(t)|| on the l_p circle."""
    p = T.domain.p
    t = np.linspace(0.0, math.pi, resolution, endpoint=False)
    h = T.image_norms(lp_circle(p, t))
    n = len(t)
    step = math.pi / n

    def val(tt):
        return -float(pnorm(T.apply(lp_circle(p, tt)), T.codomain.p))

    best_val = -np.inf
    candidates = []
    top = int(np.argmax(h))
    for i in range(n):
        left, right = h[(i - 1) % n], h[(i + 1) % n]
        # plateaus (constant stretches, up to rounding noise) contribute one
        # candidate at most, via the global argmax; otherwise require a rise
        # above the floating-point noise floor on the two sides combined
        if not (h[i] >= left and h[i] >= right):
            continue
        if (h[i] - left) + (h[i] - right) <= 1e-13 * max(1.0, h[i]) and i != top:
            continue
        a, b = t[i] - step, t[i] + step
        tt, negv = golden_section_min(val, a, b, tol=TAU_OPT)
        candidates.append((tt % math.pi, -negv))
        best_val = max(best_val, -negv)
    return candidates, best_val


def op_norm(T: OperatorMatrix) -> tuple[float, Point]:
    """Operator norm sup ||Tx|| over the unit sphere, with a witness.

    Exact per domain: max column image norm for l_1^n, vertex maximum for
    l_inf^n, the top singular value for Hilbert-to-Hilbert, and grid search
    refined by golden section for 2-D strictly convex domains.
    """
    dom = T.domain
    if dom.p == 1:
        best, wit = -1.0, None
        for j in range(dom.n):
            for sgn in (1.0, -1.0):
                v = float(pnorm(sgn * T.entries[:, j], T.codomain.p))
                if v > best:
                    e = np.zeros(dom.n)
                    e[j] = sgn
                    best, wit = v, e
        return best, Point(wit, dom)
    if dom.p == INF:
        best, wit = -1.0, None
        for signs in itertools.product((1.0, -1.0), repeat=dom.n):
            x = np.array(signs)
            v = float(pnorm(T.apply(x), T.codomain.p))
            if v > best:
                best, wit = v, x
        return best, Point(wit, dom)
    if dom.hilbert and T.codomain.hilbert:
        U, s, Vt = np.linalg.svd(T.entries)
        return float(s[0]), Point(Vt[0], dom)
    if dom.n == 2:
        candidates, best = _lp2_local_maxima(T, DEFAULT_RESOLUTION)
        tt = max(candidates, key=lambda c: c[1])[0]
        return best, Point(lp_circle(dom.p, tt), dom)
    raise UnsupportedSpaceError(
        f"operator norm on {dom} is out of desk scale (1<p<inf, p!=2 needs n=2)"
    )


def _polyhedral_attainment(T: OperatorMatrix, value: float) -> AttainmentSet:
    faces = []
    for f in enumerate_faces(T.domain):
        verts = f.vertices()
        if (T.image_norms(verts) >= value * (1.0 - TAU_EQ)).all():
            mid = f.relative_interior_coords()
            if float(pnorm(T.apply(mid), T.codomain.p)) >= value * (1.0 - TAU_EQ):
                faces.append(f)
    maximal = [
        f
        for f in faces
        if not any(g is not f and g.contains_face(f) for g in faces)
    ]
    return AttainmentSet("faces", value, T.domain, faces=tuple(maximal))


def _orthonormal(basis: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(basis)
    keep = np.abs(np.diag(R)) > 1e-12
    if not keep.all():
        raise DegenerateBasisError("basis columns are linearly dependent")
    return Q


def attainment_set(T: OperatorMatrix, resolution: int = DEFAULT_RESOLUTION) -> AttainmentSet:
    """The norm attainment set M_T in its exact representation.

    Polyhedral domains: union of maximal faces whose vertices and relative
    interior all attain.  Hilbert-to-Hilbert: the right singular subspace of
    the top singular value (gap TAU_GAP).  Other 2-D domains: refined point
    pairs.
    """
    value, _ = op_norm(T)
    if value <= 0.0:
        raise ZeroOperatorError("the zero operator attains nothing")
    dom = T.domain
    if dom.polyhedral:
        return _polyhedral_attainment(T, value)
    if dom.hilbert and T.codomain.hilbert:
        _, s, Vt = np.linalg.svd(T.entries)
        k = int((s >= s[0] - TAU_GAP * max(s[0], 1.0)).sum())
        return AttainmentSet("subspace", value, dom, basis=Vt[:k].T.copy())
    candidates, best = _lp2_local_maxima(T, resolution)
    pts = []
    for tt, v in candidates:
        if v >= best * (1.0 - TAU_EQ):
            x = lp_circle(dom.p, tt)
            if not pts or points_distance(x, np.array(pts), dom.p) > TAU_DEDUP:
                pts.append(x)
    pts = pts + [-x for x in pts]
    return AttainmentSet("points", best, dom, points=np.array(pts))


def approx_attainment(
    T: OperatorMatrix, delta: float, resolution: int = DEFAULT_RESOLUTION
) -> np.ndarray:
    """Sampled M_T(delta): unit grid vectors z with ||Tz|| > ||T|| - delta."""
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    value, _ = op_norm(T)
    X = sphere_grid(T.domain, resolution)
    mask = T.image_norms(X) > value - delta
    return X[mask]


@dataclass(frozen=True)
class DeltaSearch:
    """Outcome of the delta(eps) grid descent of the inclusion test."""

    succeeded: bool
    delta: Optional[float]
    counterexample: Optional[Point]
    resolution: int


DELTA_FLOOR = 1e-6


def delta_for_epsilon(
    T: OperatorMatrix, eps: float, resolution: int = DEFAULT_RESOLUTION
) -> DeltaSearch:
    """Largest grid delta with sampled M_T(delta) inside eps-balls of M_T.

    The delta grid is geometric, ||T||*2^-k down to 1e-6*||T||.  The
    certificate is valid at the stated sampling resolution only.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    value, _ = op_norm(T)
    M = attainment_set(T, resolution=resolution)
    X = sphere_grid(T.domain, resolution)
    norms = T.image_norms(X)
    dists = M.distance_to(X)
    delta = value / 2.0
    worst_idx = None
    while delta >= DELTA_FLOOR * value:
        mask = norms > value - delta
        if not mask.any() or dists[mask].max() < eps:
            return DeltaSearch(True, delta, None, resolution)
        worst_idx = np.argmax(np.where(mask, dists, -np.inf))
        delta /= 2.0
    z = Point(X[worst_idx], T.domain) if worst_idx is not None else None
    return DeltaSearch(False, None, z, resolution)


def restricted_norm(T: OperatorMatrix, basis) -> float:
    """sup ||Tz|| over unit vectors of the subspace spanned by basis columns."""
    B = np.asarray(basis, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    if B.shape[0] != T.domain.n:
        raise MixedSpacesError("basis does not live in the domain")
    if B.shape[1] == 0:
        return 0.0
    if np.linalg.matrix_rank(B, tol=1e-12) < B.shape[1]:
        raise DegenerateBasisError("basis columns are linearly dependent")
    dom = T.domain
    if dom.hilbert and T.codomain.hilbert:
        Q = _orthonormal(B)
        s = np.linalg.svd(T.entries @ Q, compute_uv=False)
        return float(s[0])
    if B.shape[1] == 1:
        b = B[:, 0]
        return float(pnorm(T.apply(b), T.codomain.p) / pnorm(b, dom.p))
    if B.shape[1] == 2:
        b1, b2 = B[:, 0], B[:, 1]

        def val(theta):
            v = math.cos(theta) * b1 + math.sin(theta) * b2
            return -float(
                pnorm(T.apply(v), T.codomain.p) / pnorm(v, dom.p)
            )

        t = np.linspace(0.0, math.pi, 2048, endpoint=False)
        h = np.array([-val(tt) for tt in t])
        best = -np.inf
        for i in range(len(t)):
            if h[i] >= h[(i - 1) % len(t)] and h[i] >= h[(i + 1) % len(t)]:
                _, negv = golden_section_min(
                    val, t[i] - math.pi / 2048, t[i] + math.pi / 2048, tol=TAU_OPT
                )
                best = max(best, -negv)
        return best
    raise UnsupportedSpaceError("restricted norm supports dim(Z) <= 2 off Hilbert space")


def is_smooth_operator(T: OperatorMatrix) -> bool:
    """True iff M_T is a single +/- pair and the image of the attaining
    direction is a smooth point of the codomain."""
    M = attainment_set(T)
    if not M.is_single_pair():
        return False
    x0 = M.representative_points()[0]
    from .spaces import is_smooth_point

    return is_smooth_point(Point(T.apply(x0), T.codomain))
