"""Lightning bolts, their averaging functionals and lower-bound certificates."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import (
    BrokenChain,
    ConsecutiveDuplicate,
    InputError,
    NotClosable,
    NotClosed,
    SignViolation,
)
from .space import FiniteQuotientSpace, SumElement, check_function, evaluate_sum

__all__ = [
    "Link",
    "Bolt",
    "validate_bolt",
    "bolt_functional",
    "dvp_bound",
    "has_unit_norm",
    "load_bolt_file",
]


class Link(enum.Enum):
    S = "S"
    P = "P"

    @property
    def other(self) -> "Link":
        return Link.P if self is Link.S else Link.S


@dataclass(frozen=True)
class Bolt:
    points: tuple
    closed: bool
    first_link: Link

    def __len__(self):
        return len(self.points)

    def link(self, i: int) -> Link:
        """Type of the link from ``points[i]`` to ``points[i + 1]`` (cyclic when closed)."""
        return self.first_link if i % 2 == 0 else self.first_link.other

    def rotated(self, k: int) -> "Bolt":
        """Closed bolt started ``k`` positions later."""
        if not self.closed:
            raise NotClosed("only closed bolts can be rotated")
        k %= len(self.points)
        pts = self.points[k:] + self.points[:k]
        first = self.first_link if k % 2 == 0 else self.first_link.other
        return Bolt(pts, True, first)

    def reversed(self) -> "Bolt":
        """Closed bolt traversed backwards, starting at the same point."""
        if not self.closed:
            raise NotClosed("only closed bolts can be reversed")
        pts = (self.points[0],) + tuple(reversed(self.points[1:]))
        # the link into points[0] becomes the first link
        return Bolt(pts, True, self.first_link.other)

    def to_dict(self) -> dict:
        return {"points": list(self.points), "closed": self.closed}


def _linked(space, x, y, link):
    labels = space.s_class if link is Link.S else space.p_class
    return labels[x] == labels[y]


def _chain_break(space, pts, first):
    """Position of the first broken link when starting with ``first``, else None."""
    link = first
    for i in range(len(pts) - 1):
        if not _linked(space, pts[i], pts[i + 1], link):
            return i
        link = link.other
    return None


def validate_bolt(space: FiniteQuotientSpace, points, closed: bool = False) -> Bolt:
    """Check ``points`` against the bolt rules and infer the first link type.

    When both link types hold between the first two points, S is tried first
    and P is used only if the rest of the sequence (or the wraparound for a
    closed bolt) fails with S.
    """
    pts = tuple(int(x) for x in points)
    if len(pts) < 2:
        raise InputError("a bolt needs at least two points")
    if any(x < 0 or x >= space.n for x in pts):
        raise InputError(f"bolt point indices must lie in [0, {space.n})")
    for i in range(len(pts) - 1):
        if pts[i] == pts[i + 1]:
            raise ConsecutiveDuplicate(i)

    breaks = {first: _chain_break(space, pts, first) for first in (Link.S, Link.P)}
    chains = [first for first in (Link.S, Link.P) if breaks[first] is None]
    if not chains:
        first = max(breaks, key=lambda k: breaks[k])
        pos = breaks[first]
        raise BrokenChain(pos, first if pos % 2 == 0 else first.other)
    if not closed:
        return Bolt(pts, False, chains[0])

    if len(pts) % 2:
        raise NotClosable(f"closed bolts need an even number of points, got {len(pts)}")
    if pts[-1] == pts[0]:
        raise NotClosable("last point repeats the first; list each point once")
    for first in chains:
        if _linked(space, pts[-1], pts[0], first.other):
            return Bolt(pts, True, first)
    raise NotClosable(
        f"no wraparound link from point {pts[-1]} back to point {pts[0]}"
    )


def _signs(n):
    return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)


def bolt_functional(bolt: Bolt, f) -> float:
    """Mean of the alternately signed values of ``f`` along the bolt, ``+`` first."""
    values = np.asarray(f, dtype=float)
    pts = np.asarray(bolt.points)
    if values.ndim != 1 or pts.max() >= values.size:
        raise InputError("function values do not cover the bolt points")
    return float(np.dot(_signs(pts.size), values[pts]) / pts.size)


def has_unit_norm(bolt: Bolt) -> bool:
    """Whether the functional has norm exactly one.

    That is the case iff no point sits both at an even and at an odd position.
    """
    even = set(bolt.points[0::2])
    odd = set(bolt.points[1::2])
    return not (even & odd)


def dvp_bound(space: FiniteQuotientSpace, f, u: SumElement, bolt: Bolt, tol: float = 0.0) -> float:
    """Lower bound on the best approximation error from an alternating residual.

    The residual ``f - u`` must alternate in sign along the closed ``bolt`` in
    either parity; entries with magnitude at most ``tol`` count as zero and
    fit both signs. Returns the smallest residual magnitude on the bolt.
    """
    if not bolt.closed:
        raise NotClosed("the lower bound needs a closed bolt")
    f = check_function(space, f)
    resid = (f - evaluate_sum(space, u))[np.asarray(bolt.points)]
    signed = resid * _signs(resid.size)
    signed[np.abs(resid) <= tol] = 0.0
    nonzero = np.flatnonzero(signed)
    if nonzero.size:
        anchor = nonzero[0]
        bad = nonzero[np.sign(signed[nonzero]) != np.sign(signed[anchor])]
        if bad.size:
            raise SignViolation(int(anchor), int(bad[0]))
    return float(np.min(np.abs(resid)))


def _bolt_obj(obj):
    if isinstance(obj, dict) and "points" not in obj:
        obj = (obj.get("witness") or {}).get("bolt", obj)
    if not isinstance(obj, dict) or "points" not in obj:
        raise InputError("bolt file needs a 'points' array")
    pts = obj["points"]
    if not isinstance(pts, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in pts
    ):
        raise InputError("'points' must be an integer array")
    closed = obj.get("closed", False)
    if not isinstance(closed, bool):
        raise InputError("'closed' must be a boolean")
    return pts, closed


def load_bolt_file(path, space: FiniteQuotientSpace) -> Bolt:
    """Read ``{"points": [...], "closed": bool}`` (or a report carrying one)."""
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read bolt file {path}: {exc}") from exc
    pts, closed = _bolt_obj(obj)
    return validate_bolt(space, pts, closed)
