"""Finite quotient spaces: points carrying two class labelings.

A function of the first algebra is constant on every s-class, a function of
the second algebra is constant on every p-class. Sampled functions are plain
1-D float arrays indexed by point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .exceptions import InputError

__all__ = [
    "FiniteQuotientSpace",
    "SumElement",
    "build_grid",
    "build_ridge",
    "build_explicit",
    "evaluate_sum",
    "check_function",
    "is_product_space",
    "load_space_file",
    "dump_space",
    "write_space_file",
]


def _frozen_int_array(values, name):
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise InputError(f"{name} must be one-dimensional")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        as_int = arr.astype(np.int64)
        if not np.array_equal(as_int, arr):
            raise InputError(f"{name} must contain integers")
        arr = as_int
    arr = arr.astype(np.int64, copy=True)
    arr.setflags(write=False)
    return arr


def _frozen_float_array(values, name):
    try:
        arr = np.array(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} must contain real numbers") from exc
    if arr.ndim != 1:
        raise InputError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteQuotientSpace:
    """Points ``0..n-1`` with an s-labeling and a p-labeling.

    Labels must already be dense: every class in ``range(n_s)`` (resp.
    ``range(n_p)``) is inhabited. Use :func:`build_explicit` to relabel
    arbitrary integer labels.
    """

    s_class: np.ndarray
    p_class: np.ndarray
    coords: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        s = _frozen_int_array(self.s_class, "s_class")
        p = _frozen_int_array(self.p_class, "p_class")
        if s.size == 0:
            raise InputError("a space needs at least one point")
        if s.size != p.size:
            raise InputError(
                f"s_class has {s.size} labels but p_class has {p.size}"
            )
        for name, lab in (("s_class", s), ("p_class", p)):
            if lab.min() < 0:
                raise InputError(f"{name} has negative labels")
            used = np.bincount(lab)
            if np.any(used == 0):
                raise InputError(f"{name} labels are not dense")
        object.__setattr__(self, "s_class", s)
        object.__setattr__(self, "p_class", p)
        if self.coords is not None:
            c = np.array(self.coords, dtype=float)
            if c.ndim == 1:
                c = c.reshape(-1, 1)
            if c.ndim != 2 or c.shape[0] != s.size:
                raise InputError("coords must hold one tuple per point")
            c.setflags(write=False)
            object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return int(self.s_class.size)

    @property
    def n_s(self) -> int:
        return int(self.s_class.max()) + 1

    @property
    def n_p(self) -> int:
        return int(self.p_class.max()) + 1

    def s_members(self, a: int) -> np.ndarray:
        return np.flatnonzero(self.s_class == a)

    def p_members(self, b: int) -> np.ndarray:
        return np.flatnonzero(self.p_class == b)

    def __repr__(self):
        return f"FiniteQuotientSpace(n={self.n}, n_s={self.n_s}, n_p={self.n_p})"


@dataclass(frozen=True, eq=False)
class SumElement:
    """``u = g o s + h o p`` stored as one value per s-class and per p-class."""

    g: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "g", _frozen_float_array(self.g, "g"))
        object.__setattr__(self, "h", _frozen_float_array(self.h, "h"))

    @classmethod
    def zeros(cls, space: FiniteQuotientSpace) -> "SumElement":
        return cls(np.zeros(space.n_s), np.zeros(space.n_p))

    def anchored(self) -> "SumElement":
        """Equivalent element with ``h[0] == 0``."""
        c = self.h[0]
        return SumElement(self.g + c, self.h - c)

    def check_shape(self, space: FiniteQuotientSpace) -> None:
        if self.g.size != space.n_s or self.h.size != space.n_p:
            raise InputError(
                f"sum element has shapes ({self.g.size}, {self.h.size}), "
                f"space needs ({space.n_s}, {space.n_p})"
            )

    def to_dict(self) -> dict:
        # + 0.0 turns -0.0 into 0.0
        return {"g": (self.g + 0.0).tolist(), "h": (self.h + 0.0).tolist()}


def check_function(space: FiniteQuotientSpace, values) -> np.ndarray:
    """Validate sampled function values against ``space``; returns a float array."""
    arr = _frozen_float_array(values, "function values")
    if arr.size != space.n:
        raise InputError(f"expected {space.n} function values, got {arr.size}")
    return arr


def _axis(k):
    if k >= 2:
        return np.linspace(-1.0, 1.0, k)
    return np.zeros(k)


def build_grid(nx: int, ny: int) -> FiniteQuotientSpace:
    """Product grid: point ``i*ny + j`` has s-class ``i`` and p-class ``j``."""
    if int(nx) != nx or int(ny) != ny or nx < 1 or ny < 1:
        raise InputError("grid sizes must be positive integers")
    nx, ny = int(nx), int(ny)
    ii, jj = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    xs, ys = np.meshgrid(_axis(nx), _axis(ny), indexing="ij")
    coords = np.column_stack([xs.ravel(), ys.ravel()])
    return FiniteQuotientSpace(ii.ravel(), jj.ravel(), coords)


def _chain_classes(values: np.ndarray, eps: float) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    gaps = np.diff(values[order])
    ranks = np.concatenate([[0], np.cumsum(gaps > eps)])
    labels = np.empty(values.size, dtype=np.int64)
    labels[order] = ranks
    return labels


def build_ridge(points, a, b, eps_class: float) -> FiniteQuotientSpace:
    """Group points by the ridge values ``a.x`` and ``b.x``.

    Sorted values closer than ``eps_class`` chain into one class
    (single linkage), so classes are ordered by increasing inner product.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise InputError("points must be a non-empty sequence of tuples")
    if not np.all(np.isfinite(pts)):
        raise InputError("points contain non-finite coordinates")
    if not eps_class > 0:
        raise InputError("eps_class must be positive")
    dirs = []
    for name, d in (("a", a), ("b", b)):
        d = np.asarray(d, dtype=float).ravel()
        if d.size != pts.shape[1]:
            raise InputError(
                f"direction {name} has dimension {d.size}, points have {pts.shape[1]}"
            )
        if not np.any(d):
            raise InputError(f"direction {name} is zero")
        dirs.append(d)
    s = _chain_classes(pts @ dirs[0], eps_class)
    p = _chain_classes(pts @ dirs[1], eps_class)
    return FiniteQuotientSpace(s, p, pts)


def _dense(labels, name):
    arr = np.asarray(labels)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"{name} must be a non-empty sequence")
    arr = _frozen_int_array(arr, name)
    if arr.min() < 0:
        raise InputError(f"{name} has negative labels")
    return np.unique(arr, return_inverse=True)[1].ravel()


def build_explicit(s_class: Sequence[int], p_class: Sequence[int], coords=None) -> FiniteQuotientSpace:
    """Space from arbitrary nonnegative labels, relabeled to dense ranges."""
    s = _dense(s_class, "s_class")
    p = _dense(p_class, "p_class")
    if s.size != p.size:
        raise InputError("s_class and p_class must have equal length")
    return FiniteQuotientSpace(s, p, coords)


def evaluate_sum(space: FiniteQuotientSpace, u: SumElement) -> np.ndarray:
    u.check_shape(space)
    return u.g[space.s_class] + u.h[space.p_class]


def is_product_space(space: FiniteQuotientSpace) -> bool:
    """True when every (s-class, p-class) pair holds exactly one point."""
    if space.n != space.n_s * space.n_p:
        return False
    cells = space.s_class * space.n_p + space.p_class
    return np.unique(cells).size == space.n


# -- space files -------------------------------------------------------------

def _parse_space_obj(obj):
    if not isinstance(obj, dict):
        raise InputError("space file must hold a JSON object")
    for key in ("s", "p"):
        if key not in obj:
            raise InputError(f"space file lacks key {key!r}")
        if not isinstance(obj[key], list):
            raise InputError(f"{key!r} must be an array")
    s, p = obj["s"], obj["p"]
    if len(s) == 0 or len(s) != len(p):
        raise InputError("'s' and 'p' must be non-empty arrays of equal length")
    for key in ("s", "p"):
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in obj[key]):
            raise InputError(f"{key!r} must contain integers")
    coords = obj.get("coords")
    if coords is not None and (not isinstance(coords, list) or len(coords) != len(s)):
        raise InputError("'coords' must be an array with one entry per point")
    space = build_explicit(s, p, coords)
    f = obj.get("f")
    if f is not None:
        if not isinstance(f, list) or len(f) != len(s):
            raise InputError("'f' must be an array with one value per point")
        f = check_function(space, f)
    return space, f


def load_space_file(path) -> tuple[FiniteQuotientSpace, Optional[np.ndarray]]:
    """Read a space file; returns ``(space, f)`` with ``f`` possibly ``None``."""
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read space file {path}: {exc}") from exc
    return _parse_space_obj(obj)


def dump_space(space: FiniteQuotientSpace, f=None) -> dict:
    obj = {"s": space.s_class.tolist(), "p": space.p_class.tolist()}
    if f is not None:
        obj["f"] = check_function(space, f).tolist()
    if space.coords is not None:
        obj["coords"] = space.coords.tolist()
    return obj


def write_space_file(path, space: FiniteQuotientSpace, f=None) -> None:
    Path(path).write_text(json.dumps(dump_space(space, f)) + "\n", encoding="utf-8")
