"""Geometric side: membership predicates, the scale/offset reduction, and an
explicit two-domain motion planner for three points on the line with at most
a double collision."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import sqrt
from typing import Callable, Iterable, Optional, Sequence, Union

from .errors import (
    BaseRuleUndefined,
    DimensionMismatch,
    NotInSpace,
    ParameterOutOfRange,
)

Configuration = Sequence[float]
EPS = 1e-9


def in_conf_k(x: Configuration, k: int) -> bool:
    """True iff no value occurs with multiplicity >= k."""
    if k < 2:
        raise ParameterOutOfRange("k must be >= 2")
    counts = Counter(x)
    return not counts or max(counts.values()) < k


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed family of subsets of {1..n} containing all singletons."""

    n: int
    faces: frozenset[frozenset[int]]

    def __post_init__(self):
        verts = set(range(1, self.n + 1))
        for f in self.faces:
            if not f <= verts:
                raise ParameterOutOfRange(f"face {sorted(f)} outside 1..{self.n}")
        for v in verts:
            if frozenset([v]) not in self.faces:
                raise ParameterOutOfRange(f"missing singleton {{{v}}}")
        for f in self.faces:
            for v in f:
                if f - {v} not in self.faces and len(f) > 1:
                    raise ParameterOutOfRange("faces are not downward closed")

    @classmethod
    def from_facets(cls, n: int, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        faces = {frozenset()}
        faces.update(frozenset([v]) for v in range(1, n + 1))
        stack = [frozenset(f) for f in facets]
        while stack:
            f = stack.pop()
            if f in faces:
                continue
            faces.add(f)
            stack.extend(f - {v} for v in f)
        return cls(n, frozenset(faces))

    @classmethod
    def skeleton(cls, n: int, dim: int) -> "SimplicialComplex":
        """The dim-skeleton of the full simplex: faces of size <= dim + 1."""
        faces = [frozenset(c)
                 for size in range(0, dim + 2)
                 for c in combinations(range(1, n + 1), size)]
        return cls(n, frozenset(faces))

    def minimal_nonfaces(self) -> list[frozenset[int]]:
        """Inclusion-minimal subsets of {1..n} that are not faces."""
        out = []
        for size in range(1, self.n + 1):
            for c in combinations(range(1, self.n + 1), size):
                s = frozenset(c)
                if s in self.faces:
                    continue
                if all(s - {v} in self.faces for v in s):
                    out.append(s)
        return out


def in_conf_complex(x: Configuration, K: SimplicialComplex) -> bool:
    """True iff no minimal non-face of K indexes an all-equal block of x."""
    if len(x) != K.n:
        raise DimensionMismatch(f"{len(x)} coordinates for {K.n} vertices")
    for sigma in K.minimal_nonfaces():
        vals = {x[i - 1] for i in sigma}
        if len(vals) == 1:
            return False
    return True


def reduce_to_xn(x: Configuration) -> tuple[tuple[float, ...], float, float]:
    """Split a configuration into a unit-sphere direction (last coordinate
    zero), a positive scale, and an offset: x = direction * scale + offset."""
    if len(x) < 3:
        raise ParameterOutOfRange("need at least 3 coordinates")
    if not in_conf_k(x, 3):
        raise NotInSpace("configuration has a triple collision")
    last = x[-1]
    diffs = [float(xi - last) for xi in x]
    # scaled norm: squaring subnormal differences would underflow to zero
    peak = max(abs(d) for d in diffs)
    assert peak > 0, "scale can vanish only on a total collision"
    norm = peak * sqrt(sum((d / peak) ** 2 for d in diffs))
    return tuple(d / norm for d in diffs), norm, float(last)


def inverse_reduce(direction: Sequence[float], scale: float, offset: float) -> tuple[float, ...]:
    return tuple(d * scale + offset for d in direction)


@dataclass(frozen=True)
class Path:
    """Piecewise-linear path given by its breakpoints."""

    points: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise ParameterOutOfRange("a path needs at least 2 breakpoints")
        dims = {len(p) for p in self.points}
        if len(dims) != 1:
            raise DimensionMismatch("breakpoints of mixed dimension")

    @classmethod
    def through(cls, *points: Configuration) -> "Path":
        return cls(tuple(tuple(p) for p in points))

    @property
    def start(self) -> tuple[float, ...]:
        return self.points[0]

    @property
    def end(self) -> tuple[float, ...]:
        return self.points[-1]

    @property
    def pieces(self) -> list[tuple[tuple[float, ...], tuple[float, ...]]]:
        return list(zip(self.points, self.points[1:]))

    def at(self, t: float) -> tuple[float, ...]:
        """Evaluate at time t in [0,1], equal time per segment."""
        m = len(self.points) - 1
        if t <= 0:
            return self.points[0]
        if t >= 1:
            return self.points[-1]
        scaled = t * m
        i = min(int(scaled), m - 1)
        u = scaled - i
        a, b = self.points[i], self.points[i + 1]
        return tuple(ai + u * (bi - ai) for ai, bi in zip(a, b))

    def reversed(self) -> "Path":
        return Path(self.points[::-1])


def _is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool)
               for v in values)


def _collision_time(x: Configuration, y: Configuration,
                    idxs: Sequence[int], eps: float = EPS):
    """First time t in [0,1] at which the coordinates indexed by idxs (1-based)
    are all equal along the segment [x, y], or None.

    Exact rational arithmetic when every involved coordinate is an int or
    Fraction; otherwise floating point with an absolute eps on the
    all-equal residual. The boundary between the planner's two domains is
    measure zero, where floats alone cannot be trusted.
    """
    ids = sorted(idxs)
    coords = [v for i in ids for v in (x[i - 1], y[i - 1])]
    pairs = []
    for i, j in zip(ids, ids[1:]):
        a = x[i - 1] - x[j - 1]
        b = (y[i - 1] - y[j - 1]) - a
        pairs.append((a, b))
    if _is_exact(*coords):
        t = None
        for a, b in pairs:
            if b == 0:
                if a != 0:
                    return None
                continue
            t0 = Fraction(-a, b)
            if t is None:
                t = t0
            elif t != t0:
                return None
        if t is None:
            return Fraction(0)  # the whole segment is collided
        return t if 0 <= t <= 1 else None
    a0, b0 = max(pairs, key=lambda ab: abs(ab[1]))
    if abs(b0) < 1e-300:
        return 0.0 if all(abs(a) <= eps for a, _ in pairs) else None
    t = -a0 / b0
    if not -eps <= t <= 1 + eps:
        return None
    t = min(max(t, 0.0), 1.0)
    pt = [x[i - 1] + t * (y[i - 1] - x[i - 1]) for i in ids]
    return t if max(pt) - min(pt) <= eps else None


def _cross(u: Sequence[float], v: Sequence[float]) -> tuple:
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def plan_conf3_3(x: Configuration, y: Configuration) -> tuple[int, Path]:
    """Motion planner for three points on the line, no triple collision.

    Domain 0: the segment [x, y] misses the diagonal; follow it. Domain 1:
    the segment crosses the diagonal at p; detour through p + u where u is
    the cross product of y - x with (1,1,1). u is orthogonal to the
    diagonal's direction and nonzero, so the waypoint (and hence both
    detour segments) stays clear of the diagonal.
    """
    if len(x) != 3 or len(y) != 3:
        raise DimensionMismatch("planner works on 3 coordinates")
    if not in_conf_k(x, 3) or not in_conf_k(y, 3):
        raise NotInSpace("endpoint has a triple collision")
    t = _collision_time(x, y, (1, 2, 3))
    if t is None:
        return 0, Path.through(x, y)
    p = tuple(xi + t * (yi - xi) for xi, yi in zip(x, y))
    u = _cross([yi - xi for xi, yi in zip(x, y)], (1, 1, 1))
    waypoint = tuple(pi + ui for pi, ui in zip(p, u))
    return 1, Path.through(x, waypoint, y)


PathRule = Callable[[Configuration, Configuration], Union[Path, Callable[[float], Configuration]]]


def pullback_rule(alpha: Callable, beta: Callable, homotopy_H: Callable,
                  base_rule: PathRule, x: Configuration, y: Configuration,
                  samples_per_stage: int = 33) -> Path:
    """Pull a motion-planning rule back along a homotopy equivalence.

    With H a homotopy satisfying H(., 0) = identity and H(., 1) = beta
    compose alpha, the output runs H(x, 3t) on the first third, the
    beta-image of the base path between alpha(x) and alpha(y) on the middle
    third, and H(y, 3(1-t)) backwards on the last third. Stages are sampled
    into a polyline; the endpoints are snapped to x and y exactly.
    """
    if samples_per_stage < 2:
        raise ParameterOutOfRange("samples_per_stage must be >= 2")
    ax, ay = alpha(x), alpha(y)
    base = base_rule(ax, ay)
    if base is None:
        raise BaseRuleUndefined(f"base rule undefined at ({ax}, {ay})")
    base_at = base.at if isinstance(base, Path) else base
    pts: list[tuple[float, ...]] = [tuple(x)]
    steps = [i / (samples_per_stage - 1) for i in range(1, samples_per_stage)]
    for s in steps:
        pts.append(tuple(homotopy_H(x, s)))
    for s in steps:
        pts.append(tuple(beta(base_at(s))))
    for s in steps[:-1]:
        pts.append(tuple(homotopy_H(y, 1 - s)))
    pts.append(tuple(y))
    return Path(tuple(pts))


def validate_path(path: Path, constraint: Union[int, SimplicialComplex],
                  samples: int = 256, strict: bool = False) -> bool:
    """Check that a path stays inside the configuration space.

    Sampled mode checks `samples` uniform points per segment (endpoints
    included). Strict mode additionally solves, per segment and per
    collision pattern, the all-equal linear system exactly; it catches
    crossings that land between samples.
    """
    if samples < 2:
        raise ParameterOutOfRange("samples must be >= 2")
    dim = len(path.start)
    if isinstance(constraint, SimplicialComplex):
        if dim != constraint.n:
            raise DimensionMismatch(f"{dim} coordinates for {constraint.n} vertices")
        patterns = constraint.minimal_nonfaces()
        member = lambda pt: in_conf_complex(pt, constraint)
    else:
        k = constraint
        patterns = [frozenset(c) for c in combinations(range(1, dim + 1), k)]
        member = lambda pt: in_conf_k(pt, k)
    for a, b in path.pieces:
        for i in range(samples):
            t = i / (samples - 1)
            pt = tuple(ai + t * (bi - ai) for ai, bi in zip(a, b))
            if not member(pt):
                return False
        if strict:
            for sigma in patterns:
                if _collision_time(a, b, sorted(sigma)) is not None:
                    return False
    return True
