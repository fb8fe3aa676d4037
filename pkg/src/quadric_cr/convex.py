"""Convex bodies of central frequencies and their cone geometry.

Bodies live in the real dual of the center.  A body is either a polytope
(convex hull of finitely many vertices), a closed convex cone (nonnegative
hull of finitely many generators), or empty.  The support function follows
the sign convention

    H_K(v) = sup_{lam in K} < lam, -v >,

so that growth estimates read exp(H_K(Im z)) directly.

Exact polar cones are produced for one and two dimensions by angle
arithmetic and for full-dimensional pointed cones in three dimensions by
facet normals; this covers every body the transforms ship with.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, nnls
from scipy.spatial import ConvexHull, HalfspaceIntersection

__all__ = [
    "ConvexBody",
    "polytope_body",
    "interval_body",
    "box_body",
    "segment_body",
    "cone_body",
    "empty_body",
    "support",
    "contains",
    "polar_cone",
    "boundary_distance",
    "erode",
    "project_body",
    "cone_inequality_constant",
]

_TOL = 1e-12


@dataclass(frozen=True)
class ConvexBody:
    """A polytope (vertices), closed cone (generators), or empty set."""

    kind: str
    points: np.ndarray

    def __post_init__(self):
        if self.kind not in ("polytope", "cone", "empty"):
            raise ValueError(f"unknown body kind {self.kind!r}")
        pts = np.atleast_2d(np.asarray(self.points, float))
        object.__setattr__(self, "points", pts)

    @property
    def m(self):
        return self.points.shape[1]


def _dedupe(pts):
    pts = np.atleast_2d(np.asarray(pts, float))
    if pts.shape[0] < 2:
        return pts
    out = []
    for p in pts:
        if not any(np.allclose(p, q, atol=1e-12) for q in out):
            out.append(p)
    return np.array(out)


def polytope_body(vertices):
    v = _dedupe(vertices)
    if v.size == 0:
        raise ValueError("a polytope needs at least one vertex")
    return ConvexBody("polytope", v)


def interval_body(lo, hi):
    if hi < lo:
        raise ValueError("empty interval")
    return polytope_body([[float(lo)], [float(hi)]])


def box_body(lo, hi):
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    if np.any(hi < lo):
        raise ValueError("empty box")
    corners = [[]]
    for k in range(lo.size):
        corners = [c + [v] for c in corners for v in (lo[k], hi[k])]
    return polytope_body(corners)


def segment_body(a, b):
    return polytope_body([a, b])


def cone_body(generators):
    g = np.atleast_2d(np.asarray(generators, float))
    m = g.shape[1]
    norms = np.linalg.norm(g, axis=1)
    g = g[norms > _TOL]
    if g.shape[0]:
        g = _dedupe(g / np.linalg.norm(g, axis=1, keepdims=True))
    return ConvexBody("cone", g if g.size else np.zeros((0, m)))


def empty_body(m):
    return ConvexBody("empty", np.zeros((0, m)))


def support(body, v):
    """H_K(v) = sup over the body of <lam, -v>."""
    v = np.asarray(v, float)
    if body.kind == "empty":
        return -np.inf
    vals = -(body.points @ v)
    if body.kind == "polytope":
        return float(np.max(vals))
    scale = max(1.0, float(np.linalg.norm(v)))
    if vals.size == 0 or np.max(vals) <= _TOL * scale:
        return 0.0
    return np.inf


def contains(body, lam, tol=1e-9):
    """Membership test by nonnegative least squares on the generators."""
    lam = np.asarray(lam, float)
    if body.kind == "empty":
        return False
    scale = max(1.0, float(np.abs(body.points).max()), float(np.abs(lam).max()))
    # recompute the residual ourselves: scipy 1.15's nnls can report a
    # zero rnorm for systems it did not actually fit
    if body.kind == "polytope":
        a = np.vstack([body.points.T, np.ones(body.points.shape[0])])
        b = np.concatenate([lam, [1.0]])
        x, _ = nnls(a, b)
        return float(np.linalg.norm(a @ x - b)) <= tol * scale
    if body.points.shape[0] == 0:
        return bool(np.linalg.norm(lam) <= tol * scale)
    x, _ = nnls(body.points.T, lam)
    return float(np.linalg.norm(body.points.T @ x - lam)) <= tol * scale


def _rays(body):
    pts = body.points
    norms = np.linalg.norm(pts, axis=1)
    pts = pts[norms > _TOL]
    if pts.shape[0] == 0:
        return pts
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def polar_cone(body):
    """The cone { h : <lam, h> >= 0 for all lam in the body }."""
    if body.kind == "empty":
        raise ValueError("the polar of the empty body is not represented")
    rays = _rays(body)
    m = body.m
    if rays.shape[0] == 0:
        # polar of {0}: the whole space
        gens = np.vstack([np.eye(m), -np.eye(m)])
        return ConvexBody("cone", gens)
    if m == 1:
        has_pos = np.any(rays[:, 0] > 0)
        has_neg = np.any(rays[:, 0] < 0)
        if has_pos and has_neg:
            return ConvexBody("cone", np.zeros((0, 1)))
        return cone_body([[1.0] if has_pos else [-1.0]])
    if m == 2:
        ang = np.sort(np.arctan2(rays[:, 1], rays[:, 0]))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
        widest = int(np.argmax(gaps))
        span = 2 * np.pi - gaps[widest]
        if span > np.pi + 1e-12:
            return ConvexBody("cone", np.zeros((0, 2)))
        lo = ang[(widest + 1) % ang.size]
        hi = lo + span
        gens = [
            [math.cos(hi - np.pi / 2), math.sin(hi - np.pi / 2)],
            [math.cos(lo + np.pi / 2), math.sin(lo + np.pi / 2)],
        ]
        if span < 1e-12:
            # dual of a single ray is a closed halfplane: the two rotated
            # normals only span its edge, the ray itself fills it in
            gens.append([math.cos(lo), math.sin(lo)])
        return cone_body(gens)
    if m == 3:
        hull_pts = np.vstack([np.zeros(3), rays])
        try:
            hull = ConvexHull(hull_pts, qhull_options="QJ")
        except Exception as exc:  # degenerate input
            raise ValueError("polar cone needs a full-dimensional cone in 3d") from exc
        normals = []
        for eq in hull.equations:
            n, off = eq[:3], eq[3]
            if abs(off) > 1e-9:
                continue  # facet not through the origin
            n = -n  # qhull normals point outward; the polar wants inward
            if np.min(rays @ n) >= -1e-9:
                normals.append(n / np.linalg.norm(n))
        if not normals:
            return ConvexBody("cone", np.zeros((0, 3)))
        return cone_body(normals)
    raise NotImplementedError("polar cones are implemented for m <= 3")


def _affine_dim(pts, tol=1e-10):
    if pts.shape[0] < 2:
        return 0
    centered = pts - pts.mean(axis=0)
    s = np.linalg.svd(centered, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def _hull_halfspaces(vertices):
    hull = ConvexHull(vertices)
    # rows are [normal | offset] with normal x + offset <= 0 inside
    return hull.equations


def boundary_distance(body, lam):
    """Euclidean distance from lam to the boundary; 0 outside or on it."""
    lam = np.asarray(lam, float)
    if body.kind == "empty":
        return 0.0
    if body.kind == "polytope":
        if body.m == 1:
            lo, hi = body.points.min(), body.points.max()
            if lam[0] <= lo or lam[0] >= hi:
                return 0.0
            return float(min(lam[0] - lo, hi - lam[0]))
        if _affine_dim(body.points) < body.m:
            return 0.0
        eqs = _hull_halfspaces(body.points)
        slack = -(eqs[:, :-1] @ lam + eqs[:, -1])
        return float(max(0.0, np.min(slack)))
    # cone: facets pass through the origin with the polar's extreme rays as
    # normals; a ray body in low dimension has boundary {0} along itself
    rays = _rays(body)
    if rays.shape[0] == 0:
        return 0.0
    dual = polar_cone(body)
    if dual.points.shape[0] == 0:
        return 0.0
    slack = dual.points @ lam
    if np.min(slack) < 0:
        return 0.0
    return float(np.min(slack))


def erode(body, eps):
    """Inner parallel body { lam : dist(lam, boundary) >= eps }."""
    if eps < 0:
        raise ValueError("erosion depth must be nonnegative")
    if body.kind == "empty":
        return body
    if body.kind == "cone":
        raise ValueError("erosion is defined here for polytopes only")
    if eps == 0:
        return body
    if body.m == 1:
        lo, hi = body.points.min(), body.points.max()
        if hi - lo < 2 * eps:
            return empty_body(1)
        return interval_body(lo + eps, hi - eps)
    if _affine_dim(body.points) < body.m:
        return empty_body(body.m)
    eqs = _hull_halfspaces(body.points)
    a, b = eqs[:, :-1], eqs[:, -1] + eps  # normals are unit: shift inward
    # Chebyshev center of the shrunk region to seed the intersection
    res = linprog(
        c=np.concatenate([np.zeros(body.m), [-1.0]]),
        A_ub=np.hstack([a, np.ones((a.shape[0], 1))]),
        b_ub=-b,
        bounds=[(None, None)] * body.m + [(None, None)],
        method="highs",
    )
    if not res.success or res.x[-1] <= 0:
        return empty_body(body.m)
    center = res.x[: body.m]
    hs = HalfspaceIntersection(np.hstack([a, b[:, None]]), center)
    return polytope_body(hs.intersections)


def project_body(body, basis):
    """Image of the body under lam -> basis^T lam, basis of shape (m, p)."""
    basis = np.asarray(basis, float)
    pts = body.points @ basis
    if body.kind == "empty":
        return empty_body(basis.shape[1])
    if body.kind == "cone":
        return cone_body(pts)
    return polytope_body(pts)


def _sphere_directions(m, count):
    if m == 1:
        return np.array([[1.0], [-1.0]])
    if m == 2:
        th = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    out = []
    bands = max(2, int(math.sqrt(count)))
    for i in range(bands + 1):
        phi = np.pi * i / bands
        ring = max(1, int(round(count / bands * math.sin(phi))) or 1)
        for j in range(ring):
            th = 2 * np.pi * j / ring
            out.append(
                [math.sin(phi) * math.cos(th), math.sin(phi) * math.sin(th), math.cos(phi)]
            )
    return _dedupe(np.array(out))


def _body_directions(body, count):
    """Deterministic directions inside the cone: simplex mixes of generators."""
    rays = _rays(body)
    if rays.shape[0] == 0:
        return rays
    if rays.shape[0] == 1:
        return rays
    out = []
    steps = max(2, count // max(1, rays.shape[0] - 1))
    if rays.shape[0] == 2:
        for t in np.linspace(0.0, 1.0, steps):
            v = (1 - t) * rays[0] + t * rays[1]
            n = np.linalg.norm(v)
            if n > _TOL:
                out.append(v / n)
        return np.array(out)
    for i in range(rays.shape[0]):
        for j in range(i + 1, rays.shape[0]):
            for t in np.linspace(0.0, 1.0, steps):
                v = (1 - t) * rays[i] + t * rays[j]
                n = np.linalg.norm(v)
                if n > _TOL:
                    out.append(v / n)
    return _dedupe(np.array(out))


def cone_inequality_constant(body, directions=181, h_directions=181):
    """Largest C with <lam, h> >= C |h| dist(lam, boundary) on scanned pairs.

    lam runs over a deterministic angular grid inside the cone, h over unit
    directions filtered to the polar cone (every generator pairs
    nonnegatively).  The returned value is the infimum over the scan, an
    upper bound for the sharp constant that converges as the grids refine.
    """
    if body.kind != "cone":
        raise ValueError("the cone inequality is about cone bodies")
    lam_dirs = _body_directions(body, directions)
    if lam_dirs.shape[0] == 0:
        raise ValueError("cannot scan the trivial cone")
    hs = _sphere_directions(body.m, h_directions)
    keep = np.array([float(np.min(body.points @ h)) >= -1e-12 for h in hs])
    hs = hs[keep]
    if hs.shape[0] == 0:
        raise ValueError("the polar cone contains no scan directions")
    best = np.inf
    for lam in lam_dirs:
        dist = boundary_distance(body, lam)
        if dist <= 1e-14:
            continue
        pairings = hs @ lam
        best = min(best, float(np.min(pairings)) / dist)
    return best
