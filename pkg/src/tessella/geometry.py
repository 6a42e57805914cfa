r"""Constant-curvature model spaces: E^n and H^n for n = 2, 3.

Euclidean points are plain n-vectors.  Hyperbolic points live on the upper
sheet of the hyperboloid ``<x, x> = -1`` in Minkowski space R^{1,n}, with

    <x, y> = -x_0 y_0 + x_1 y_1 + ... + x_n y_n,

so every isometry is linear (a matrix in O^+(1, n)) and its differential is
the matrix itself.  Points are numpy arrays; most functions accept a stack of
points with shape ``(..., ambient)``.

A few conventions worth knowing:

* tangent vectors at a hyperbolic point ``x`` are ambient vectors ``v`` with
  ``<x, v> = 0``; the Minkowski form restricted to them is positive definite;
* the Klein chart ``x -> x[1:] / x[0]`` sends geodesics to straight segments,
  which is what polygon membership and SVG rendering rely on;
* a tangent frame ``(v_1, ..., v_n)`` at ``x`` is positively oriented when
  ``det[x, v_1, ..., v_n] > 0`` (hyperbolic) or ``det[v_1, ..., v_n] > 0``
  (Euclidean).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GeometryError, InputError

EUCLIDEAN = "euclidean"
HYPERBOLIC = "hyperbolic"
TWO_PI = 2.0 * np.pi


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ModelSpace:
    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in (EUCLIDEAN, HYPERBOLIC):
            raise InputError(f"unknown model kind {self.kind!r}")
        if self.dim not in (2, 3):
            raise InputError(f"dimension must be 2 or 3, got {self.dim}")

    @property
    def hyperbolic(self) -> bool:
        return self.kind == HYPERBOLIC

    @property
    def ambient(self) -> int:
        return self.dim + 1 if self.hyperbolic else self.dim

    @cached_property
    def eta(self) -> np.ndarray:
        """Gram matrix of the ambient bilinear form."""
        g = np.eye(self.ambient)
        if self.hyperbolic:
            g[0, 0] = -1.0
        g.flags.writeable = False
        return g

    def __str__(self):
        return f"{'H' if self.hyperbolic else 'E'}{self.dim}"

    # -- bilinear form -----------------------------------------------------

    def inner(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        prod = u * v
        if self.hyperbolic:
            return prod[..., 1:].sum(axis=-1) - prod[..., 0]
        return prod.sum(axis=-1)

    def norm(self, v):
        return np.sqrt(np.maximum(self.inner(v, v), 0.0))

    def origin(self) -> np.ndarray:
        o = np.zeros(self.ambient)
        if self.hyperbolic:
            o[0] = 1.0
        return o

    # -- points -------------------------------------------------------------

    def point(self, coords) -> np.ndarray:
        """Validate and return a point (a copy, as float array)."""
        x = np.array(coords, dtype=float)
        if x.shape != (self.ambient,):
            raise InputError(f"{self} point needs {self.ambient} coordinates, got shape {x.shape}")
        if self.hyperbolic:
            if x[0] <= 0 or abs(self.inner(x, x) + 1.0) > 1e-6 * max(1.0, x[0] ** 2):
                raise InputError(f"{x} is not on the upper sheet of the hyperboloid")
            x = self.normalize(x)
        return x

    def membership_residual(self, x):
        """``|<x,x> + 1|`` for hyperbolic points, zero for Euclidean ones."""
        if not self.hyperbolic:
            return np.zeros(np.shape(x)[:-1])
        return np.abs(self.inner(x, x) + 1.0)

    def normalize(self, x):
        """Project back onto the hyperboloid (no-op in Euclidean space)."""
        x = np.asarray(x, dtype=float)
        if not self.hyperbolic:
            return x
        q = -self.inner(x, x)
        if np.any(q <= 0):
            raise GeometryError("cannot normalise a non-timelike vector onto the hyperboloid")
        x = x / np.sqrt(q)[..., None]
        return np.where((x[..., :1] < 0), -x, x)

    def distance(self, p, q):
        """Geodesic distance; vectorised over leading axes."""
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if p.shape[-1] != self.ambient or q.shape[-1] != self.ambient:
            raise InputError(f"points do not belong to {self}")
        diff = p - q
        if not self.hyperbolic:
            return np.sqrt((diff * diff).sum(axis=-1))
        # <p-q, p-q> = 4 sinh^2(d/2); stable for tiny distances, unlike arccosh.
        chord = np.sqrt(np.maximum(self.inner(diff, diff), 0.0))
        return 2.0 * np.arcsinh(chord / 2.0)

    # -- tangent vectors ----------------------------------------------------

    def project_tangent(self, x, v):
        """Orthogonal projection of an ambient vector onto T_x."""
        v = np.asarray(v, dtype=float)
        if not self.hyperbolic:
            return v
        return v + np.asarray(self.inner(x, v))[..., None] * x

    def exp(self, x, v):
        """Exponential map; ``v`` may be a stack of tangent vectors at ``x``."""
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        if not self.hyperbolic:
            return x + v
        r = self.norm(v)[..., None]
        safe = np.where(r > 1e-300, r, 1.0)
        # sinh(r)/r -> 1 as r -> 0
        ratio = np.where(r > 1e-300, np.sinh(r) / safe, 1.0)
        return self.normalize(np.cosh(r) * x + ratio * v)

    def geodesic_point(self, x, v, t):
        """``exp_x(t v)`` for a unit tangent ``v`` at ``x``."""
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        t = np.asarray(t, dtype=float)
        if not self.hyperbolic:
            return x + t[..., None] * v if t.ndim else x + t * v
        if t.ndim:
            return self.normalize(np.cosh(t)[..., None] * x + np.sinh(t)[..., None] * v)
        return self.normalize(np.cosh(t) * x + np.sinh(t) * v)

    def log(self, x, y):
        """Inverse of ``exp``: tangent at ``x`` pointing to ``y`` with length d(x, y)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if not self.hyperbolic:
            return y - x
        d = self.distance(x, y)
        u = self.project_tangent(x, y)
        nu = self.norm(u)
        scale = np.where(nu > 0, d / np.where(nu > 0, nu, 1.0), 0.0)
        return u * np.asarray(scale)[..., None]

    def unit(self, v):
        n = self.norm(v)
        if np.any(n == 0):
            raise GeometryError("zero vector has no direction")
        return v / np.asarray(n)[..., None]

    def tangent_basis(self, x, against=()):
        """Orthonormal basis of the tangent vectors at ``x`` orthogonal to ``against``.

        The returned rows span the Riemannian orthogonal complement inside
        T_x; ``against`` must be tangent at ``x`` (it need not be orthonormal).
        """
        x = np.asarray(x, dtype=float)
        rows = [np.asarray(a, dtype=float) for a in against]
        if self.hyperbolic:
            rows = [x] + rows
        want = self.dim - len(against)
        if not rows:
            return np.eye(self.ambient)
        m = np.array(rows) @ self.eta
        _, s, vt = np.linalg.svd(m)
        rank = int(np.sum(s > 1e-12 * max(1.0, s[0])))
        if rank != len(rows):
            raise GeometryError("degenerate tangent constraints")
        basis = []
        for v in vt[rank:]:
            for b in basis:
                v = v - self.inner(v, b) * b
            basis.append(v / self.norm(v))
        if len(basis) != want:
            raise GeometryError("unexpected tangent complement dimension")
        return np.array(basis)

    def orientation(self, x, frame) -> float:
        """Sign of the determinant of a tangent frame at ``x``."""
        cols = [np.asarray(f, dtype=float) for f in frame]
        if self.hyperbolic:
            cols = [np.asarray(x, dtype=float)] + cols
        return float(np.sign(np.linalg.det(np.array(cols).T)))

    def rotate90(self, x, t):
        """Dim-2 only: the unit tangent ``n`` with ``(t, n)`` positively oriented."""
        if self.dim != 2:
            raise GeometryError("rotate90 is defined for planar models only")
        t = np.asarray(t, dtype=float)
        if not self.hyperbolic:
            return np.array([-t[1], t[0]]) / np.linalg.norm(t)
        (n,) = self.tangent_basis(x, [t])
        return n if self.orientation(x, [t, n]) > 0 else -n

    # -- charts ------------------------------------------------------------

    def klein(self, x):
        x = np.asarray(x, dtype=float)
        if not self.hyperbolic:
            return x
        return x[..., 1:] / x[..., :1]

    def from_klein(self, k):
        k = np.asarray(k, dtype=float)
        if not self.hyperbolic:
            return k
        r2 = (k * k).sum(axis=-1, keepdims=True)
        if np.any(r2 >= 1.0):
            raise GeometryError("Klein coordinates must lie in the open unit ball")
        x0 = 1.0 / np.sqrt(1.0 - r2)
        return np.concatenate([x0, k * x0], axis=-1)

    def poincare(self, x):
        x = np.asarray(x, dtype=float)
        if not self.hyperbolic:
            return x
        return x[..., 1:] / (1.0 + x[..., :1])


@dataclass(frozen=True)
class Tangent:
    space: ModelSpace
    base: np.ndarray
    vec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", _frozen(self.base))
        object.__setattr__(self, "vec", _frozen(self.vec))

    @property
    def norm(self) -> float:
        return float(self.space.norm(self.vec))

    def unit(self) -> "Tangent":
        return Tangent(self.space, self.base, self.vec / self.norm)

    def __neg__(self):
        return Tangent(self.space, self.base, -self.vec)


def oriented_angle(t_from: Tangent, t_to: Tangent, orient: tuple[Tangent, Tangent], tol: float = 1e-9) -> float:
    """Counter-clockwise angle in [0, 2pi) from ``t_from`` to ``t_to``.

    The plane and its orientation are fixed by the ordered pair ``orient``;
    both tangents are expected to lie in that plane.
    """
    space = t_from.space
    o1, o2 = (o.vec for o in orient)
    n1 = space.norm(o1)
    if n1 <= tol:
        raise GeometryError("degenerate orientation pair (zero vector)")
    e1 = o1 / n1
    w = o2 - space.inner(o2, e1) * e1
    nw = space.norm(w)
    if nw <= tol * max(1.0, space.norm(o2)):
        raise GeometryError("degenerate orientation pair (collinear vectors)")
    e2 = w / nw

    def polar(v):
        return np.arctan2(space.inner(v, e2), space.inner(v, e1))

    ang = (polar(t_to.vec) - polar(t_from.vec)) % TWO_PI
    return 0.0 if ang >= TWO_PI else float(ang)


def _orthonormal_frame(space, p, vs):
    """Gram-Schmidt (two passes) of a nearly orthonormal frame at ``p``.

    Tangents computed far from the origin carry cancellation error of order
    eps * |p|^2; a frame that is only approximately Lorentz-orthonormal makes
    ``eta F^T eta`` a poor inverse, so the frame is cleaned up first.
    """
    p = space.normalize(np.asarray(p, dtype=float)) if space.hyperbolic else np.asarray(p, dtype=float)
    out = []
    for v in vs:
        v = np.asarray(v, dtype=float)
        for _ in range(2):
            if space.hyperbolic:
                v = v + space.inner(v, p) * p
            for w in out:
                v = v - space.inner(v, w) * w
        out.append(v / space.norm(v))
    return p, out


@dataclass(frozen=True, eq=False)
class Isometry:
    """``x -> linear @ x + shift``; ``shift`` is identically zero in H^n."""

    space: ModelSpace
    linear: np.ndarray
    shift: np.ndarray = field(default=None)

    def __post_init__(self):
        lin = np.array(self.linear, dtype=float)
        if lin.shape != (self.space.ambient,) * 2:
            raise InputError(f"{self.space} isometry needs a {self.space.ambient}x{self.space.ambient} matrix")
        shift = np.zeros(self.space.ambient) if self.shift is None else np.array(self.shift, dtype=float)
        if shift.shape != (self.space.ambient,):
            raise InputError("translation has the wrong length")
        if self.space.hyperbolic and np.any(shift != 0):
            raise InputError("hyperbolic isometries are linear; translation must be omitted")
        object.__setattr__(self, "linear", _frozen(lin))
        object.__setattr__(self, "shift", _frozen(shift))

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, space):
        return cls(space, np.eye(space.ambient))

    @classmethod
    def translation(cls, space, vec):
        if space.hyperbolic:
            raise GeometryError("use boost() for hyperbolic translations")
        return cls(space, np.eye(space.dim), vec)

    @classmethod
    def rotation(cls, space, angle, axes=(0, 1)):
        """Rotation about the origin in the plane of two spatial axes."""
        i, j = axes
        off = 1 if space.hyperbolic else 0
        m = np.eye(space.ambient)
        c, s = np.cos(angle), np.sin(angle)
        m[i + off, i + off], m[i + off, j + off] = c, -s
        m[j + off, i + off], m[j + off, j + off] = s, c
        return cls(space, m)

    @classmethod
    def boost(cls, space, t, axis=0):
        """Hyperbolic translation by ``t`` along the geodesic through the origin in direction e_{axis+1}."""
        if not space.hyperbolic:
            raise GeometryError("boost() needs a hyperbolic space")
        k = axis + 1
        m = np.eye(space.ambient)
        m[0, 0] = m[k, k] = np.cosh(t)
        m[0, k] = m[k, 0] = np.sinh(t)
        return cls(space, m)

    @classmethod
    def from_frames(cls, space, src, dst):
        """The isometry carrying frame ``src = (p, [v_1..v_n])`` onto ``dst``.

        Both frames must be orthonormal tangent frames.
        """
        p, vs = _orthonormal_frame(space, *src)
        q, ws = _orthonormal_frame(space, *dst)
        if space.hyperbolic:
            f_src = np.column_stack([p, *vs])
            f_dst = np.column_stack([q, *ws])
            # Lorentz frames satisfy F^T eta F = eta, so F^-1 = eta F^T eta.
            lin = f_dst @ space.eta @ f_src.T @ space.eta
            return cls(space, lin)
        lin = np.column_stack(ws) @ np.column_stack(vs).T
        return cls(space, lin, np.asarray(q, float) - lin @ np.asarray(p, float))

    @classmethod
    def to_point(cls, space, x):
        """An isometry taking the origin to ``x``."""
        x = np.asarray(x, dtype=float)
        if not space.hyperbolic:
            return cls.translation(space, x)
        o = space.origin()
        return cls.from_frames(space, (o, list(np.eye(space.ambient)[1:])), (x, list(space.tangent_basis(x))))

    @classmethod
    def segment_map(cls, space, p, q, p2, q2, orientation_preserving=True):
        """Planar isometry sending ``p -> p2`` and the ray toward ``q`` onto the ray toward ``q2``.

        When ``d(p, q) == d(p2, q2)`` this maps the segment [p, q] onto [p2, q2].
        """
        t = space.unit(space.log(p, q))
        t2 = space.unit(space.log(p2, q2))
        n = space.rotate90(p, t)
        n2 = space.rotate90(p2, t2)
        if not orientation_preserving:
            n2 = -n2
        return cls.from_frames(space, (p, [t, n]), (p2, [t2, n2]))

    # -- group operations -----------------------------------------------------

    def apply(self, x):
        x = np.asarray(x, dtype=float)
        y = x @ self.linear.T + self.shift
        return y

    def differential(self, v: Tangent) -> Tangent:
        return Tangent(self.space, self.apply(v.base), self.linear @ v.vec)

    def compose(self, other: "Isometry") -> "Isometry":
        """``self o other`` (apply ``other`` first)."""
        if other.space != self.space:
            raise InputError("cannot compose isometries of different spaces")
        return Isometry(self.space, self.linear @ other.linear, self.linear @ other.shift + self.shift)

    __matmul__ = compose

    def inverse(self) -> "Isometry":
        if self.space.hyperbolic:
            eta = self.space.eta
            return Isometry(self.space, eta @ self.linear.T @ eta)
        lin_t = self.linear.T
        return Isometry(self.space, lin_t, -lin_t @ self.shift)

    def power(self, k: int) -> "Isometry":
        if k < 0:
            return self.inverse().power(-k)
        out = Isometry.identity(self.space)
        for i in range(k):
            out = self @ out
            if (i + 1) % 32 == 0:
                out = out.renormalized()
        return out

    def deviation(self) -> float:
        """Max-norm distance of (matrix, translation) from the identity."""
        d = np.abs(self.linear - np.eye(self.space.ambient)).max()
        if self.shift.size:
            d = max(d, np.abs(self.shift).max())
        return float(d)

    def is_identity(self, tol: float = 1e-8) -> bool:
        return self.deviation() < tol

    def distance_to(self, other: "Isometry") -> float:
        return (self.inverse() @ other).deviation()

    def residual(self) -> float:
        """How far the matrix is from the isometry group (max-norm)."""
        a = self.linear
        if self.space.hyperbolic:
            eta = self.space.eta
            return float(np.abs(a.T @ eta @ a - eta).max())
        return float(np.abs(a.T @ a - np.eye(self.space.dim)).max())

    def check(self, tol: float = 1e-8) -> None:
        if self.residual() >= tol:
            raise GeometryError(f"matrix is not an isometry of {self.space} (residual {self.residual():.3g})")
        if self.space.hyperbolic and self.linear[0, 0] <= 0:
            raise GeometryError("hyperbolic isometry swaps the sheets of the hyperboloid")

    def renormalized(self) -> "Isometry":
        """One Newton step back onto the isometry group."""
        a = self.linear
        if self.space.hyperbolic:
            eta = self.space.eta
            return Isometry(self.space, 0.5 * (a + eta @ np.linalg.inv(a).T @ eta))
        return Isometry(self.space, 0.5 * (a + np.linalg.inv(a).T), self.shift)

    def orientation(self) -> float:
        return float(np.sign(np.linalg.det(self.linear)))

    def key(self) -> np.ndarray:
        return np.concatenate([self.linear.ravel(), self.shift])

    def __repr__(self):
        body = np.array2string(self.linear, precision=4, suppress_small=True)
        if not self.space.hyperbolic:
            body += f" + {np.array2string(self.shift, precision=4, suppress_small=True)}"
        return f"Isometry({self.space}, {body})"


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """Totally geodesic hypersurface with a signed defining function.

    Euclidean: ``{x : normal . x = offset}``, value ``normal . x - offset``.
    Hyperbolic: ``{x : <x, normal> = 0}`` for a unit spacelike ``normal``,
    value ``asinh(<x, normal>)``.  In both models the value is the signed
    distance to the hyperplane.
    """

    space: ModelSpace
    normal: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        u = np.array(self.normal, dtype=float)
        if u.shape != (self.space.ambient,):
            raise InputError(f"hyperplane normal must have {self.space.ambient} entries")
        q = self.space.inner(u, u)
        if q <= 0:
            raise GeometryError("hyperplane normal must be spacelike (nonzero)")
        s = np.sqrt(q)
        object.__setattr__(self, "normal", _frozen(u / s))
        off = 0.0 if self.space.hyperbolic else float(self.offset) / s
        object.__setattr__(self, "offset", off)

    @classmethod
    def through(cls, space, points):
        """The hyperplane through ``dim`` points (sign arbitrary)."""
        pts = np.asarray(points, dtype=float)
        if len(pts) != space.dim:
            raise GeometryError(f"need {space.dim} points to span a hyperplane in {space}")
        if space.hyperbolic:
            _, s, vt = np.linalg.svd(pts @ space.eta)
            if s[-1] < 1e-12 * s[0]:
                raise GeometryError("points do not span a hyperplane")
            return cls(space, vt[-1])
        diffs = pts[1:] - pts[0]
        _, s, vt = np.linalg.svd(diffs, full_matrices=True)
        if s[-1] < 1e-12 * max(1.0, s[0]):
            raise GeometryError("points do not span a hyperplane")
        u = vt[-1]
        return cls(space, u, float(u @ pts[0]))

    def value(self, x):
        """Signed distance from ``x`` (vectorised)."""
        x = np.asarray(x, dtype=float)
        if self.space.hyperbolic:
            return np.arcsinh(self.space.inner(x, self.normal))
        return x @ self.normal - self.offset

    def gradient(self, x):
        """Unit normal field (tangent at ``x``); exact on the hyperplane."""
        x = np.asarray(x, dtype=float)
        if not self.space.hyperbolic:
            return np.broadcast_to(self.normal, x.shape).copy()
        g = self.space.project_tangent(x, np.broadcast_to(self.normal, x.shape))
        return self.space.unit(g)

    def project(self, x):
        """Foot of the perpendicular from ``x``."""
        x = np.asarray(x, dtype=float)
        if self.space.hyperbolic:
            ip = np.asarray(self.space.inner(x, self.normal))
            return self.space.normalize(x - ip[..., None] * self.normal)
        return x - np.asarray(self.value(x))[..., None] * self.normal

    def flipped(self) -> "Hyperplane":
        return Hyperplane(self.space, -self.normal, -self.offset)

    def transformed(self, g: Isometry) -> "Hyperplane":
        if self.space.hyperbolic:
            return Hyperplane(self.space, g.linear @ self.normal)
        u = g.linear @ self.normal
        return Hyperplane(self.space, u, self.offset + float(u @ g.shift))


@dataclass(frozen=True, eq=False)
class Geodesic:
    """A geodesic ``t -> gamma(t)`` (unit speed) restricted to ``[lo, hi]``.

    Infinite bounds give rays and complete lines.
    """

    space: ModelSpace
    base: np.ndarray
    direction: np.ndarray
    lo: float = -np.inf
    hi: float = np.inf

    def __post_init__(self):
        object.__setattr__(self, "base", _frozen(self.base))
        object.__setattr__(self, "direction", _frozen(self.space.unit(np.asarray(self.direction, float))))

    @classmethod
    def between(cls, space, p, q):
        d = float(space.distance(p, q))
        if d <= 0:
            raise GeometryError("segment endpoints coincide")
        return cls(space, p, space.log(p, q), 0.0, d)

    @property
    def bounded(self) -> bool:
        return np.isfinite(self.lo) and np.isfinite(self.hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def point(self, t):
        return self.space.geodesic_point(self.base, self.direction, t)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        if not self.space.hyperbolic:
            return np.broadcast_to(self.direction, t.shape + self.direction.shape).copy()
        if t.ndim:
            return np.sinh(t)[..., None] * self.base + np.cosh(t)[..., None] * self.direction
        return np.sinh(t) * self.base + np.cosh(t) * self.direction

    def foot(self, x, clamp=True):
        """Parameter of the nearest point of the (clamped) geodesic to ``x``."""
        x = np.asarray(x, dtype=float)
        if self.space.hyperbolic:
            a = -self.space.inner(x, self.base)
            b = self.space.inner(x, self.direction)
            t = np.arctanh(np.clip(b / a, -1 + 1e-16, 1 - 1e-16))
        else:
            t = (x - self.base) @ self.direction
        return np.clip(t, self.lo, self.hi) if clamp else t

    def distance(self, x):
        """Distance from ``x`` to the restricted geodesic (convexity makes clamping exact)."""
        return self.space.distance(x, self.point(self.foot(x)))

    def window(self, center: float, width: float) -> tuple[float, float]:
        lo = max(self.lo, center - width / 2.0)
        hi = min(self.hi, center + width / 2.0)
        if hi < lo:
            lo = hi = float(np.clip(center, self.lo, self.hi))
        return lo, hi

    def transformed(self, g: Isometry) -> "Geodesic":
        return Geodesic(self.space, g.apply(self.base), g.linear @ self.direction, self.lo, self.hi)


def golden_section(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200) -> tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns ``(argmin, min)``."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    best = min((fc, c), (fd, d), (f(lo), lo), (f(hi), hi))
    return best[1], best[0]
