"""The 16-graphlet dictionary, sub-dictionaries and kernel planning."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

log = logging.getLogger(__name__)

N_GRAPHLETS = 16


class GraphletDescriptor(NamedTuple):
    id: int
    name: str
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    incidence_orbit: tuple[int, ...]

    @property
    def edge_count(self) -> int:
        return len(self.edges)


# Template graphs with vertex 0 as the incidence node. Ordered by vertex
# count, then edge count, then degree at the incidence node (4-cycle excepted).
GRAPHLETS = (
    GraphletDescriptor(0, "singleton", 1, (), (0,)),
    GraphletDescriptor(1, "1-path, at an end", 2, ((0, 1),), (0, 1)),
    GraphletDescriptor(2, "2-path, at an end", 3, ((0, 1), (1, 2)), (0, 2)),
    GraphletDescriptor(3, "bi-fork, at the root", 3, ((0, 1), (0, 2)), (0,)),
    GraphletDescriptor(4, "3-clique, at any node", 3, ((0, 1), (0, 2), (1, 2)), (0, 1, 2)),
    GraphletDescriptor(5, "3-path, at an end", 4, ((0, 1), (1, 2), (2, 3)), (0, 3)),
    GraphletDescriptor(6, "3-path, at an interior node", 4, ((0, 1), (0, 2), (2, 3)), (0, 2)),
    GraphletDescriptor(7, "claw, at a leaf", 4, ((0, 1), (1, 2), (1, 3)), (0, 2, 3)),
    GraphletDescriptor(8, "claw, at the root", 4, ((0, 1), (0, 2), (0, 3)), (0,)),
    GraphletDescriptor(9, "dipper, at the handle tip", 4, ((0, 1), (1, 2), (1, 3), (2, 3)), (0,)),
    GraphletDescriptor(10, "dipper, at a base node", 4, ((0, 1), (0, 2), (1, 2), (1, 3)), (0, 2)),
    GraphletDescriptor(11, "dipper, at the center", 4, ((0, 1), (0, 2), (1, 2), (0, 3)), (0,)),
    GraphletDescriptor(12, "4-cycle, at any node", 4, ((0, 1), (1, 2), (2, 3), (0, 3)), (0, 1, 2, 3)),
    GraphletDescriptor(13, "diamond, at an off-cord node", 4, ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3)), (0, 3)),
    GraphletDescriptor(14, "diamond, at an on-cord node", 4, ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3)), (0, 1)),
    GraphletDescriptor(15, "4-clique, at any node", 4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)), (0, 1, 2, 3)),
)


@dataclass(frozen=True)
class Dictionary:
    """A sorted selection of graphlet ids that always contains 0 and 1."""

    selected: tuple[int, ...]

    def __post_init__(self):
        sel = tuple(sorted(set(self.selected)))
        if any(not 0 <= k < N_GRAPHLETS for k in sel):
            raise ValueError(f"graphlet ids must lie in 0..15, got {sel}")
        if not {0, 1} <= set(sel):
            raise ValueError("a dictionary must contain graphlets 0 and 1")
        object.__setattr__(self, "selected", sel)

    @classmethod
    def full(cls) -> "Dictionary":
        return cls(tuple(range(N_GRAPHLETS)))

    def __len__(self):
        return len(self.selected)

    def __iter__(self):
        return iter(self.selected)

    def __contains__(self, k):
        return k in self.selected

    def index(self, k: int) -> int:
        return self.selected.index(k)


def parse_dictionary(spec: str) -> Dictionary:
    """Parse ``"all"``, ``"0-4"``, ``"0,1,4,15"`` or mixtures like ``"0-5,12"``.

    Graphlets 0 and 1 are added when missing.
    """
    spec = spec.strip().lower()
    if not spec:
        raise ValueError("empty dictionary spec")
    if spec == "all":
        return Dictionary.full()
    ids = set()
    for part in spec.split(","):
        part = part.strip()
        if not part:
            raise ValueError(f"empty item in dictionary spec {spec!r}")
        try:
            if "-" in part:
                lo, hi = (int(x) for x in part.split("-", 1))
                if lo > hi:
                    raise ValueError(f"descending range {part!r}")
                ids.update(range(lo, hi + 1))
            else:
                ids.add(int(part))
        except ValueError as exc:
            raise ValueError(f"bad dictionary item {part!r}: {exc}") from None
    bad = sorted(k for k in ids if not 0 <= k < N_GRAPHLETS)
    if bad:
        raise ValueError(f"graphlet ids out of range 0..15: {bad}")
    missing = {0, 1} - ids
    if missing:
        log.warning("adding mandatory graphlet(s) %s to dictionary", sorted(missing))
    return Dictionary(tuple(ids | {0, 1}))


# Kernel steps in their fixed evaluation order.
P1, C3, P2, P3, P2_ROWS, D4, T = "p1", "c3", "p2", "p3", "p2_rows", "d4", "t"
PLAN_ORDER = (P1, C3, P2, P3, P2_ROWS, D4, T)

_NEEDS = {
    C3: {4, 5, 6, 9, 10, 11, 13},
    P2: {2, 5, 6},
    P3: {5},
    P2_ROWS: {12, 14},
    D4: {13},
    T: {15},
}


def resolve_dependencies(d: Dictionary) -> tuple[str, ...]:
    """Ordered auxiliary computations needed for the raw columns of ``d``."""
    want = set(d.selected)
    return tuple(step for step in PLAN_ORDER if step == P1 or want & _NEEDS[step])


def missing_supergraphs(d: Dictionary) -> dict[int, tuple[int, ...]]:
    from .conversion import U16

    sel = set(d.selected)
    out = {}
    for k in d.selected:
        sup = tuple(j for j in range(k + 1, N_GRAPHLETS) if U16[k, j] and j not in sel)
        if sup:
            out[k] = sup
    return out


def family_closure(d: Dictionary) -> Dictionary:
    """Smallest dictionary containing ``d`` with no missing supergraphs."""
    sel = set(d.selected)
    while True:
        extra = {j for sup in missing_supergraphs(Dictionary(tuple(sel))).values() for j in sup}
        if not extra:
            return Dictionary(tuple(sel))
        sel |= extra


def warn_incomplete_family(d: Dictionary) -> list[str]:
    """Advisories for graphlets whose net count will not be an induced count."""
    notes = []
    for k, sup in missing_supergraphs(d).items():
        names = ", ".join(f"sigma{j}" for j in sup)
        notes.append(
            f"net sigma{k} ({GRAPHLETS[k].name}) still includes copies inside {names}, "
            "which are not in the dictionary"
        )
    return notes
