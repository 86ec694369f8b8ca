"""Bodies in R^(n+1), exact membership tests, and boundary sampling.

A body is one of a small closed list of variants.  Membership is evaluated
from the defining inequality directly (vectorized over sample batches), never
from an interpolation grid, because the Monte Carlo oracle classifies points
out to radii ~1e5 where any cached grid would clip.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedGeometryError
from .profiles import RadialProfile, profile_values


@dataclass(frozen=True)
class FractionalOrder:
    """Order of the interaction kernel, strictly between 0 and 1."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (0.0 < a < 1.0):
            raise ValueError(f"order must lie in the open interval (0, 1), got {a}")
        object.__setattr__(self, "alpha", a)


@dataclass(frozen=True)
class AmbientDim:
    """Dimension n of the horizontal slice; the body lives in R^(n+1)."""

    n: int

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValueError(f"ambient slice dimension must be >= 1, got {n}")
        object.__setattr__(self, "n", n)


class Body:
    """Base variant; subclasses implement the open-set membership test."""

    def contains(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains_one(self, point) -> bool:
        return bool(self.contains(np.asarray(point, dtype=float)[None, :])[0])


@dataclass(frozen=True)
class TwoLeaf(Body):
    """{ |x_last| < v(|x'|) } for a positive radial height profile v."""

    profile: RadialProfile

    def contains(self, points):
        p = np.asarray(points, dtype=float)
        rad = np.linalg.norm(p[..., :-1], axis=-1)
        return np.abs(p[..., -1]) < profile_values(self.profile, rad)


@dataclass(frozen=True)
class Subgraph(Body):
    """{ x_last < u(|x'|) }: the region below a radial graph."""

    profile: RadialProfile

    def contains(self, points):
        p = np.asarray(points, dtype=float)
        rad = np.linalg.norm(p[..., :-1], axis=-1)
        return p[..., -1] < profile_values(self.profile, rad)


@dataclass(frozen=True)
class Cone(Body):
    """{ |x_last| < eps * |x'| }: the symmetric open double cone."""

    epsilon: float

    def contains(self, points):
        p = np.asarray(points, dtype=float)
        rad = np.linalg.norm(p[..., :-1], axis=-1)
        return np.abs(p[..., -1]) < self.epsilon * rad


@dataclass(frozen=True)
class Ball(Body):
    radius: float

    def contains(self, points):
        p = np.asarray(points, dtype=float)
        return np.linalg.norm(p, axis=-1) < self.radius


@dataclass(frozen=True)
class HalfSpace(Body):
    """{ x_last < height }."""

    height: float

    def contains(self, points):
        p = np.asarray(points, dtype=float)
        return p[..., -1] < self.height


@dataclass(frozen=True)
class Complement(Body):
    inner: Body

    def contains(self, points):
        return ~self.inner.contains(points)


@dataclass(frozen=True)
class Scaled(Body):
    """x is a member iff x / factor is a member of the inner body."""

    inner: Body
    factor: float

    def contains(self, points):
        p = np.asarray(points, dtype=float)
        return self.inner.contains(p / self.factor)


@dataclass(frozen=True)
class SampleSpec:
    """How to lay out boundary sample points for graph-type bodies."""

    count: int = 64
    r_max: float = 10.0
    refine_near: tuple = ()
    ray_radii: tuple = ()


@dataclass(frozen=True)
class BoundarySample:
    point: np.ndarray
    normal: np.ndarray
    radius: float


def _graph_radii(spec: SampleSpec) -> np.ndarray:
    base = np.linspace(0.0, spec.r_max, spec.count)
    extra = []
    for r0 in spec.refine_near:
        extra.append(r0 + np.array([-0.2, -0.05, -0.01, 0.01, 0.05, 0.2]))
    if spec.ray_radii:
        extra.append(np.asarray(spec.ray_radii, dtype=float))
    radii = np.concatenate([base] + extra) if extra else base
    radii = radii[radii >= 0.0]
    return np.unique(radii)


def boundary_sample(body: Body, n: int, spec: SampleSpec = SampleSpec()):
    """Points on the boundary of the body with outward unit normals.

    Supported variants: TwoLeaf, Subgraph (upper leaf along the first
    horizontal axis), Cone (upper leaf, apex excluded), Ball, HalfSpace.
    Wrapper variants have no canonical parametrization here; callers must
    unwrap them first.
    """
    d = n + 1
    out = []

    def graph_samples(value, slope, upper_leaf_sign=1.0):
        for r in _graph_radii(spec):
            x = np.zeros(d)
            x[0] = r
            x[-1] = upper_leaf_sign * value(r)
            g = slope(r)
            nv = np.zeros(d)
            nv[0] = -upper_leaf_sign * g
            nv[-1] = 1.0 * upper_leaf_sign
            nv /= np.linalg.norm(nv)
            out.append(BoundarySample(point=x, normal=nv, radius=float(r)))

    if isinstance(body, TwoLeaf):
        graph_samples(body.profile.value, body.profile.first_derivative)
    elif isinstance(body, Subgraph):
        graph_samples(body.profile.value, body.profile.first_derivative)
    elif isinstance(body, Cone):
        eps = body.epsilon
        for r in _graph_radii(spec):
            if r == 0.0:
                continue
            x = np.zeros(d)
            x[0] = r
            x[-1] = eps * r
            nv = np.zeros(d)
            nv[0] = -eps
            nv[-1] = 1.0
            nv /= np.linalg.norm(nv)
            out.append(BoundarySample(point=x, normal=nv, radius=float(r)))
    elif isinstance(body, Ball):
        R = body.radius
        angles = np.linspace(0.0, 2.0 * np.pi, spec.count, endpoint=False)
        for th in angles:
            x = np.zeros(d)
            x[0] = R * np.cos(th)
            x[-1] = R * np.sin(th)
            nv = x / R
            out.append(BoundarySample(point=x, normal=nv,
                                      radius=float(abs(R * np.cos(th)))))
    elif isinstance(body, HalfSpace):
        for r in _graph_radii(spec):
            x = np.zeros(d)
            x[0] = r
            x[-1] = body.height
            nv = np.zeros(d)
            nv[-1] = 1.0
            out.append(BoundarySample(point=x, normal=nv, radius=float(r)))
    elif isinstance(body, (Complement, Scaled)):
        raise UnsupportedGeometryError(
            f"{type(body).__name__} has no direct boundary parametrization; unwrap it first")
    else:
        raise UnsupportedGeometryError(f"cannot sample boundary of {type(body).__name__}")
    return out
