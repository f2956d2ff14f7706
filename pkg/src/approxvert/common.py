"""Pieces shared by both enumeration algorithms."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .errors import EmptyMinusClass, ImprecisionAlarm
from .hrep import HPolytope
from .numerics import dot, solve_linear

MINUS, ZERO, PLUS = "-", "0", "+"


class IdRegistry:
    """Hands out vertex ids; ``v(u, w)`` created in iteration ``i`` gets one id.

    Sharing a registry between a graph-algorithm run and a double description
    run makes the same geometric vertex carry the same id in both.
    """

    def __init__(self, d: int):
        self.d = d
        self._next = d + 2
        self._by_key: dict = {}
        self.parents: dict = {}

    def initial(self):
        return list(range(1, self.d + 2))

    def child(self, u: int, w: int, i: int) -> int:
        key = (min(u, w), max(u, w), i)
        vid = self._by_key.get(key)
        if vid is None:
            vid = self._next
            self._next += 1
            self._by_key[key] = vid
            self.parents[vid] = key
        return vid


@dataclass(frozen=True)
class Bands:
    """Quarter-tolerance classification and placement levels for one run."""

    low: object
    mid: object
    high: object

    @classmethod
    def for_eps(cls, eps, backend):
        e = backend.scalar(eps)
        one = backend.one
        return cls(one + e / 4, one + e / 2, one + 3 * e / 4)

    def classify(self, value) -> str:
        if value < self.low:
            return MINUS
        if value > self.high:
            return PLUS
        return ZERO


def simplex_vertices(P: HPolytope, eps):
    """Vertices of ``(1 + eps/2) S`` where ``S`` is given by rows ``1..d+1``.

    Vertex ``j`` (1-based) lies on every prefix hyperplane except row ``j``.
    """
    if not P.simplex_prefix:
        raise ValueError("polytope has no bounding simplex prefix")
    d = P.d
    level = P.backend.one + P.backend.scalar(eps) / 2
    rows = P.A[: d + 1]
    out = []
    for j in range(d + 1):
        M = [rows[i] for i in range(d + 1) if i != j]
        out.append(solve_linear(M, [level] * d))
    return out


def place_on_segment(cu, cw, au, aw, level):
    """Point on ``[cu, cw]`` with row value ``level`` given the row values ``au``, ``aw``."""
    t = (level - au) / (aw - au)
    return tuple(a + t * (b - a) for a, b in zip(cu, cw))


def check_new_vertex(value, bands: Bands, exact: bool):
    """New vertices must land inside the zero band; a miss means rounding went wrong."""
    if exact:
        if value != bands.mid:  # pragma: no cover - exact placement
            raise ImprecisionAlarm("exact placement missed the target level")
    elif not (bands.low <= value <= bands.high):
        raise ImprecisionAlarm(f"new vertex value {value!r} left the zero band")


def require_minus(classes: dict, i: int):
    if not any(c == MINUS for c in classes.values()):
        raise EmptyMinusClass(f"iteration {i}: minus class is empty")


@dataclass
class ApproxVRep:
    """Output point list with provenance."""

    points: list
    ids: list
    eps: object
    provenance: dict = field(default_factory=dict)
    experimental: bool = False

    def __len__(self):
        return len(self.points)


def hashed_class(seed: int, i: int, vid: int, weights=(2, 1, 1)) -> str:
    """Deterministic pseudo-random class of vertex ``vid`` in iteration ``i``."""
    h = hashlib.blake2b(f"{seed}:{i}:{vid}".encode(), digest_size=8).digest()
    x = int.from_bytes(h, "little") % sum(weights)
    if x < weights[0]:
        return MINUS
    if x < weights[0] + weights[1]:
        return ZERO
    return PLUS


class HashedPartition:
    """Partition rule that depends on ``(iteration, vertex id)`` only.

    One anchor vertex chosen by the caller is forced into the minus class so
    that it is never empty.  Because classes are a function of the id, two
    algorithms sharing an :class:`IdRegistry` see the same partition rule.
    """

    def __init__(self, seed: int, weights=(2, 1, 1)):
        self.seed = seed
        self.weights = weights

    def __call__(self, i: int, vid: int, anchor: int) -> str:
        if vid == anchor:
            return MINUS
        return hashed_class(self.seed, i, vid, self.weights)


class ScriptPartition:
    """Partition rule given explicitly as ``{iteration: {vertex id: class}}``.

    Vertices created during an iteration are class 0 and need no entry;
    unlisted existing vertices default to ``default``.
    """

    def __init__(self, script: dict, default: str = MINUS):
        self.script = script
        self.default = default

    def __call__(self, i: int, vid: int, anchor: int) -> str:
        return self.script.get(i, {}).get(vid, self.default)


def row_value(P: HPolytope, i: int, x):
    return dot(P.row(i), x)
