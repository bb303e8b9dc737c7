"""Surface descriptors and the critical-type invariant.

A surface is described by orientability, genus and an ordered list of
labelled boundary circles.  The critical type of a Morse mapping on such a
surface collects the homotopy-class vector ``q``, the numbers of critical
points of index 0, 1 and 2, and a sign per boundary circle recording whether
the mapping increases or decreases towards that circle.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Mapping


class Target(enum.Enum):
    """Codomain of a Morse mapping: the real line or the circle."""

    LINE = "Line"
    CIRCLE = "Circle"


@dataclass(frozen=True)
class Surface:
    """A connected compact surface: orientability, genus, labelled boundary."""

    orientable: bool
    genus: int
    boundary: tuple[str, ...] = ()

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if not self.orientable and self.genus < 1:
            raise ValueError("a non-orientable surface has genus >= 1")
        labels = tuple(self.boundary)
        if len(set(labels)) != len(labels):
            raise ValueError("boundary labels must be distinct")
        if any(not isinstance(l, str) or not l for l in labels):
            raise ValueError("boundary labels must be non-empty strings")
        object.__setattr__(self, "boundary", labels)

    @property
    def num_boundary(self) -> int:
        return len(self.boundary)

    @property
    def homology_rank(self) -> int:
        """Rank of the first cohomology of the capped-off surface.

        2*genus for orientable surfaces, genus - 1 for non-orientable ones.
        """
        return 2 * self.genus if self.orientable else self.genus - 1


def euler_characteristic(s: Surface) -> int:
    """Euler characteristic from genus and boundary count."""
    if s.orientable:
        return 2 - 2 * s.genus - s.num_boundary
    return 2 - s.genus - s.num_boundary


def _check_signs(eps: Mapping[str, int]) -> dict[str, int]:
    for label, sign in eps.items():
        if sign not in (1, -1):
            raise ValueError(f"boundary sign for {label!r} must be +1 or -1")
    return dict(eps)


@dataclass(frozen=True)
class CriticalType:
    """The complete path-component invariant of a Morse mapping.

    ``q`` is an integer vector of length ``homology_rank`` of the surface
    (all zero for LINE targets), ``c0``/``c1``/``c2`` count critical points
    by index, and ``eps`` maps each boundary label to +1 or -1.  On
    orientable surfaces the coordinates of ``q`` refer to the basis dual to
    the standard symplectic curve classes; on non-orientable surfaces they
    refer to whatever basis of the capped surface's first cohomology the
    caller fixed.  Instances are value objects; treat ``eps`` as immutable.
    """

    target: Target
    q: tuple[int, ...]
    c0: int
    c1: int
    c2: int
    eps: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(int(x) for x in self.q))
        object.__setattr__(self, "eps", _check_signs(self.eps))
        if min(self.c0, self.c1, self.c2) < 0:
            raise ValueError("critical point counts must be non-negative")

    @property
    def b_minus(self) -> int:
        return sum(1 for v in self.eps.values() if v < 0)

    @property
    def b_plus(self) -> int:
        return sum(1 for v in self.eps.values() if v > 0)

    def total_critical_points(self) -> int:
        return self.c0 + self.c1 + self.c2


def validate_critical_type(s: Surface, k: CriticalType) -> list[str]:
    """Check a critical type against its surface.

    Returns a list of violated-identity descriptions, empty when the type is
    valid.  A mismatch between the eps domain and the surface's boundary
    labels is a usage error and raises instead of being reported.
    """
    if set(k.eps) != set(s.boundary):
        raise ValueError(
            "boundary sign labels %r do not match surface boundary %r"
            % (sorted(k.eps), list(s.boundary))
        )
    violations = []
    r = s.homology_rank
    if len(k.q) != r:
        violations.append(f"q must have length {r}, got {len(k.q)}")
    if k.target is Target.LINE and any(x != 0 for x in k.q):
        violations.append("q must be the zero vector for a Line target")
    chi = euler_characteristic(s)
    if k.c0 - k.c1 + k.c2 != chi:
        violations.append(
            "critical point counts violate c0 - c1 + c2 = chi: "
            f"{k.c0} - {k.c1} + {k.c2} != {chi}"
        )
    return violations


def is_valid_critical_type(s: Surface, k: CriticalType) -> bool:
    return not validate_critical_type(s, k)


def flip_target_orientation(k: CriticalType) -> CriticalType:
    """Invariant of the same mapping after reversing the target orientation.

    Swaps c0 with c2 and negates every boundary sign and every entry of q.
    This is an involution.
    """
    return CriticalType(
        target=k.target,
        q=tuple(-x for x in k.q),
        c0=k.c2,
        c1=k.c1,
        c2=k.c0,
        eps={label: -sign for label, sign in k.eps.items()},
    )


def critical_type_to_json(k: CriticalType) -> str:
    """Single-line JSON with keys target, q, c0, c1, c2, eps (eps sorted by label)."""
    payload = {
        "target": k.target.value,
        "q": list(k.q),
        "c0": k.c0,
        "c1": k.c1,
        "c2": k.c2,
        "eps": {label: k.eps[label] for label in sorted(k.eps)},
    }
    return json.dumps(payload, separators=(",", ":"))


def critical_type_from_json(text: str) -> CriticalType:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid critical-type JSON: {exc}") from None
    try:
        target = Target(payload["target"])
        return CriticalType(
            target=target,
            q=tuple(int(x) for x in payload["q"]),
            c0=int(payload["c0"]),
            c1=int(payload["c1"]),
            c2=int(payload["c2"]),
            eps={str(l): int(v) for l, v in payload["eps"].items()},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"invalid critical-type JSON: {exc}") from None
