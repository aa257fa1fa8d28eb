"""Piecewise-constant cadlag paths on [0, 1] and their completed graphs.

A :class:`StepPath` is a right-continuous, vector-valued step function with
finitely many jumps.  It is the carrier for every process in this package:
partial-maxima paths, coupled comparison paths, and simulated limit paths.
Operations here are pure functions over immutable arrays, safe to share
across threads.

Conventions
-----------
* evaluation is right-continuous, ``x(t_i) = values[i]``;
* the left limit at a breakpoint is the previous value, and at ``t = 0`` it
  is defined as ``x(0)`` (the completed graph has no jump piece at 0);
* breakpoint times are plain doubles and time equality is exact float
  equality; downstream metric computations carry their own tolerances.

The completed graph of a step path also admits a partial order along the
path (time order, refined by position inside a jump segment).  Nothing
computed here needs that order; it is mentioned only so readers of the
graph construction know it exists.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "StepPath",
    "ThinGraph",
    "PointMeasure",
    "step_path",
    "constant_path",
    "thin_graph",
    "max_functional",
    "running_max",
    "combine",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StepPath:
    """Right-continuous step function ``[0, 1] -> R^d``.

    Parameters
    ----------
    breakpoints : ndarray, shape (k+1,)
        Strictly increasing times ``0 = t_0 < t_1 < ... < t_k <= 1``.
    values : ndarray, shape (k+1, d)
        ``values[i]`` is the value on ``[t_i, t_{i+1})`` and ``values[k]``
        the value on ``[t_k, 1]``.

    Consecutive equal values are allowed (redundant breakpoints); use
    :meth:`normalize` to drop them.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        bp = _frozen(self.breakpoints)
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if vals.ndim == 1:
            vals = vals[:, None]
        vals = _frozen(vals)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        if bp.ndim != 1 or bp.size == 0:
            raise ValueError("breakpoints must be a non-empty 1-d array")
        if bp[0] != 0.0:
            raise ValueError("first breakpoint must be t=0")
        if bp.size > 1 and not np.all(np.diff(bp) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if bp[-1] > 1.0 or bp[0] < 0.0:
            raise ValueError("breakpoints must lie in [0, 1]")
        if vals.shape[0] != bp.size:
            raise ValueError("values must have one row per breakpoint")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def _index(self, t, side: str) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if np.any(t < 0.0) or np.any(t > 1.0):
            raise ValueError("evaluation time outside [0, 1]")
        idx = np.searchsorted(self.breakpoints, t, side=side) - 1
        return np.clip(idx, 0, len(self.breakpoints) - 1)

    def eval(self, t):
        """Value at time ``t`` (scalar or array); right-continuous."""
        return self.values[self._index(t, "right")]

    def left_limit(self, t):
        """Left limit at ``t``; at a breakpoint this is the previous value."""
        return self.values[self._index(t, "left")]

    def component(self, j: int) -> "StepPath":
        """Scalar path of coordinate ``j`` (0-based)."""
        return StepPath(self.breakpoints, self.values[:, j : j + 1])

    def normalize(self) -> "StepPath":
        """Drop breakpoints whose value repeats the previous one."""
        keep = np.ones(len(self.breakpoints), dtype=bool)
        keep[1:] = np.any(self.values[1:] != self.values[:-1], axis=1)
        return StepPath(self.breakpoints[keep], self.values[keep])

    def is_monotone(self) -> bool:
        """True when every coordinate is non-decreasing across breakpoints."""
        if len(self.breakpoints) == 1:
            return True
        return bool(np.all(self.values[1:] >= self.values[:-1]))

    # -- serialization ------------------------------------------------------

    def to_csv(self) -> str:
        """CSV with header ``t,comp1,...,compd``; 17 significant digits."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + [f"comp{j + 1}" for j in range(self.dim)])
        for t, row in zip(self.breakpoints, self.values):
            w.writerow([format(t, ".17g")] + [format(v, ".17g") for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "StepPath":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or not rows[0] or rows[0][0] != "t":
            raise ValueError("not a step-path CSV: expected header starting with 't'")
        data = np.array([[float(c) for c in row] for row in rows[1:] if row])
        if data.size == 0:
            raise ValueError("step-path CSV has no rows")
        return cls(data[:, 0], data[:, 1:])

    def to_json(self) -> str:
        return json.dumps(
            {
                "dim": self.dim,
                "breakpoints": self.breakpoints.tolist(),
                "values": self.values.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "StepPath":
        obj = json.loads(text)
        path = cls(np.array(obj["breakpoints"]), np.array(obj["values"]))
        if path.dim != obj["dim"]:
            raise ValueError("dim field inconsistent with values")
        return path


def step_path(breakpoints, values) -> StepPath:
    """Convenience constructor accepting lists and 1-d scalar values."""
    return StepPath(np.asarray(breakpoints, dtype=float), np.asarray(values, dtype=float))


def constant_path(value, dim: int | None = None) -> StepPath:
    """The path identically equal to ``value`` on [0, 1]."""
    v = np.atleast_1d(np.asarray(value, dtype=float))
    if dim is not None and v.size == 1:
        v = np.full(dim, v[0])
    return StepPath(np.zeros(1), v[None, :])


# ---------------------------------------------------------------------------
# Completed (thin) graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThinGraph:
    """Completed graph of a step path: a connected polyline in R^(d+1).

    ``segments`` alternate horizontal pieces ``(t, x(t_i))`` for
    ``t in [t_i, t_{i+1}]`` and zero-time-extent jump pieces joining
    ``(t_i, x(t_i-))`` to ``(t_i, x(t_i))``.  Each segment is an
    ``(start, end)`` pair of points in R^(d+1) with time first.
    """

    segments: tuple
    kinds: tuple  # "flat" or "jump", parallel to segments

    def vertices(self) -> np.ndarray:
        pts = [s for s, _ in self.segments] + [self.segments[-1][1]]
        return np.array(pts)


def thin_graph(path: StepPath) -> ThinGraph:
    """Completed graph of ``path``; zero jumps produce no jump piece."""
    p = path.normalize()
    bp, vals = p.breakpoints, p.values
    segs = []
    kinds = []
    for i in range(len(bp)):
        if i > 0:
            a = np.concatenate(([bp[i]], vals[i - 1]))
            b = np.concatenate(([bp[i]], vals[i]))
            segs.append((a, b))
            kinds.append("jump")
        t_end = bp[i + 1] if i + 1 < len(bp) else 1.0
        if t_end > bp[i]:
            a = np.concatenate(([bp[i]], vals[i]))
            b = np.concatenate(([t_end], vals[i]))
            segs.append((a, b))
            kinds.append("flat")
    return ThinGraph(tuple(segs), tuple(kinds))


# ---------------------------------------------------------------------------
# Point measures and the maximum functional
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointMeasure:
    """Finite point measure on ``[0, 1] x R^d``: times plus vector marks.

    Duplicate points are allowed and count with multiplicity.
    """

    times: np.ndarray
    marks: np.ndarray

    def __post_init__(self):
        t = _frozen(np.atleast_1d(self.times))
        m = np.asarray(self.marks, dtype=float)
        if m.ndim == 1:
            m = m[:, None] if t.size else m.reshape(0, 1)
        m = _frozen(m)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "marks", m)
        if m.shape[0] != t.size:
            raise ValueError("times and marks must have equal length")
        if t.size and (t.min() < 0.0 or t.max() > 1.0):
            raise ValueError("point times must lie in [0, 1]")
        if not np.all(np.isfinite(m)):
            raise ValueError("marks must be finite")

    @property
    def dim(self) -> int:
        return self.marks.shape[1]

    def __len__(self) -> int:
        return self.times.size

    @classmethod
    def empty(cls, dim: int) -> "PointMeasure":
        return cls(np.zeros(0), np.zeros((0, dim)))


def _running_max_of_points(times: np.ndarray, marks: np.ndarray) -> StepPath:
    """Non-decreasing step path of running maxima of marks, starting at 0."""
    d = marks.shape[1]
    if times.size == 0:
        return StepPath(np.zeros(1), np.zeros((1, d)))
    order = np.argsort(times, kind="stable")
    t = times[order]
    cm = np.maximum.accumulate(marks[order], axis=0)
    # collapse duplicate times onto their last (largest) row
    last = np.flatnonzero(np.concatenate((t[1:] != t[:-1], [True])))
    t, cm = t[last], cm[last]
    keep = np.concatenate(
        ([np.any(cm[0] > 0.0)], np.any(cm[1:] > cm[:-1], axis=1))
    )
    t, cm = t[keep], cm[keep]
    if len(t) and t[0] == 0.0:
        return StepPath(t, cm)
    bp = np.concatenate(([0.0], t))
    vals = np.concatenate((np.zeros((1, d)), cm), axis=0)
    return StepPath(bp, vals)


def max_functional(measure: PointMeasure, dim: int, replicate: bool = False) -> StepPath:
    """Running componentwise maxima of positive and negative mark parts.

    Component ``2j`` (0-based) at time ``t`` is the maximum of the positive
    parts of coordinate ``j`` over points with ``t_i <= t``; component
    ``2j+1`` is the maximum of the negative parts.  An empty maximum is 0,
    so the output is non-negative and non-decreasing with dimension ``2d``.

    ``replicate=True`` tiles the ``2d`` block ``d`` times (dimension
    ``2d**2``), the layout expected when pairing with per-row coefficient
    extremes.  The tiled array is materialized only on request.
    """
    if measure.dim != dim and len(measure):
        raise ValueError("measure dimension does not match dim")
    pm = measure.marks if len(measure) else np.zeros((0, dim))
    parts = np.empty((pm.shape[0], 2 * dim))
    parts[:, 0::2] = np.where(pm > 0, pm, 0.0)
    parts[:, 1::2] = np.where(pm < 0, -pm, 0.0)
    path = _running_max_of_points(measure.times, parts)
    if replicate:
        path = StepPath(path.breakpoints, np.tile(path.values, (1, dim)))
    return path


def running_max(samples, scale: float) -> StepPath:
    """Scaled partial-maxima step path of ``n`` sample vectors.

    The value at ``t`` is ``scale**-1`` times the componentwise maximum of
    the first ``floor(n t)`` samples for ``t >= 1/n``, and the first sample
    alone for ``t < 1/n``.  Breakpoints are kept only where the running
    maximum changes, so the path stores O(number of records) rows.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    if n == 0:
        raise ValueError("need at least one sample")
    if scale <= 0:
        raise ValueError("scale must be positive")
    cm = np.maximum.accumulate(x, axis=0) / scale
    changed = np.flatnonzero(np.any(cm[1:] != cm[:-1], axis=1)) + 1
    bp = np.concatenate(([0.0], (changed + 1) / n))
    vals = np.concatenate((cm[:1], cm[changed]), axis=0)
    return StepPath(bp, vals)


def combine(paths, reducer: str = "max", weights=None) -> StepPath:
    """Pointwise combination of step paths on the union of breakpoints.

    ``reducer`` is one of ``"max"`` (componentwise maximum),
    ``"difference"`` (first minus second, exactly two paths), or
    ``"linear"`` (weighted sum with ``weights``).  A scalar path broadcasts
    against vector paths; otherwise dimensions must agree.
    """
    paths = list(paths)
    if not paths:
        raise ValueError("need at least one path")
    dims = {p.dim for p in paths}
    if len(dims - {1}) > 1:
        raise ValueError("dimension mismatch between paths")
    dim = max(dims)
    grid = paths[0].breakpoints
    for p in paths[1:]:
        grid = np.union1d(grid, p.breakpoints)
    stacked = []
    for p in paths:
        v = p.eval(grid)
        if p.dim == 1 and dim > 1:
            v = np.repeat(v, dim, axis=1)
        stacked.append(v)
    if reducer == "max":
        out = stacked[0]
        for v in stacked[1:]:
            out = np.maximum(out, v)
    elif reducer == "difference":
        if len(stacked) != 2:
            raise ValueError("difference takes exactly two paths")
        out = stacked[0] - stacked[1]
    elif reducer == "linear":
        if weights is None or len(weights) != len(stacked):
            raise ValueError("linear reducer needs one weight per path")
        out = sum(w * v for w, v in zip(weights, stacked))
    else:
        raise ValueError(f"unknown reducer {reducer!r}")
    return StepPath(grid, out)
