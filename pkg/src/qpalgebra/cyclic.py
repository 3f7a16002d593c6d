"""Primitive potentials, anti-parallel shortest paths, and the sequence search.

An anti-parallel shortest path of an arrow is a directed path from the
arrow's target back to its source that closes a chordless cycle with it.
The sequence search walks from arrow to arrow through such closures:
step k picks the next arrow out of the previously chosen path (its first
arrow when k is odd, its last when k is even) and then branches over all
closures different from the previous cycle.  A branch terminates when it
reaches an arrow with exactly one anti-parallel shortest path.  The search
is an exhaustive BFS memoized on (arrow, previous cycle) states, so the
outcome does not depend on choice order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

from .algebra import Potential
from .fields import RATIONALS
from .quiver import (
    ChordlessCycle,
    Cycle,
    Path,
    Quiver,
    QuiverError,
    chordless_cycles,
    is_cyclically_oriented,
    vertex_key,
)


class AnalysisError(ValueError):
    pass


def primitive_potential(
    quiver: Quiver,
    max_degree: int,
    coefficients: Optional[Callable[[Cycle], object]] = None,
    field=RATIONALS,
) -> Potential:
    """One term per (oriented) chordless cycle, with nonzero coefficients.

    Requires the quiver to be cyclically oriented, so that every chordless
    cycle is oriented and "minimal cycle" is unambiguous.
    """
    ok, witness = is_cyclically_oriented(quiver)
    if not ok:
        raise AnalysisError(f"quiver is not cyclically oriented; witness {witness!r}")
    terms = []
    for cc in chordless_cycles(quiver):
        cyc = cc.directed_cycle(quiver)
        c = field.one() if coefficients is None else field.coerce(coefficients(cyc))
        if not c:
            raise AnalysisError(f"coefficient for {cyc!r} must be nonzero")
        terms.append((cyc.path, c))
    return Potential(quiver, max_degree, terms, field)


def antiparallel_shortest_paths(quiver: Quiver, arrow_id: str) -> list[Path]:
    """All paths from target to source of the arrow closing a chordless cycle.

    The closing cycle is directed, so only oriented chordless cycles through
    the arrow contribute; results come back in canonical path order.
    """
    eta = quiver.arrow(arrow_id)
    results = []
    max_len = len(quiver.vertices) - 1 if eta.source != eta.target else 1
    if eta.source == eta.target:
        # A loop closes with the lazy path; the induced cycle is the loop
        # itself, chordless iff no second loop sits at the vertex.
        others = [a for a in quiver.arrows if a.id != arrow_id and a.source == a.target == eta.source]
        return [] if others else [quiver.lazy_path(eta.source)]

    def closes_chordless(gamma_ids: tuple[str, ...]) -> bool:
        cycle_path = Path(eta.source, eta.source, (eta.id,) + gamma_ids)
        verts = quiver.path_vertices(cycle_path)[:-1]
        if len(set(verts)) != len(verts):
            return False
        used = set(cycle_path.arrows)
        vset = set(verts)
        for a in quiver.arrows:
            if a.id not in used and a.source in vset and a.target in vset:
                return False
        return True

    def dfs(v, seen, ids):
        if v == eta.source and ids:
            if closes_chordless(tuple(ids)):
                results.append(Path(eta.target, eta.source, tuple(ids)))
            return
        if len(ids) >= max_len:
            return
        for a in quiver.out_arrows(v):
            if a.id == eta.id:
                continue
            if a.target in seen and a.target != eta.source:
                continue
            if a.target == eta.target:
                continue
            dfs(a.target, seen | {a.target}, ids + [a.id])

    dfs(eta.target, {eta.target}, [])
    results.sort(key=Path.sort_key)
    return results


@dataclass(frozen=True)
class ArrowSequence:
    """Search result: the visited arrows with their chosen closures."""

    status: str  # "Terminated" | "Cyclic" | "Exhausted"
    steps: tuple[tuple[str, Optional[tuple[str, ...]]], ...]

    @property
    def m(self) -> Optional[int]:
        return len(self.steps) - 1 if self.status == "Terminated" else None

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "m": self.m,
            "steps": [
                {"arrow": a, "antiparallel_path": list(p) if p is not None else None}
                for a, p in self.steps
            ],
        }


def arrow_sequence_search(
    quiver: Quiver, arrow_id: str, step_cap: int = 10_000
) -> ArrowSequence:
    """BFS over all legal closure choices, memoized on (arrow, previous cycle).

    Returns the shortest Terminated sequence if any branch reaches an arrow
    with a unique anti-parallel shortest path; Cyclic when the finite state
    space is exhausted without termination; Exhausted when the step cap is
    hit first.
    """
    eta = quiver.arrow(arrow_id)
    ap_cache: dict[str, list[Path]] = {}

    def ap(aid: str) -> list[Path]:
        if aid not in ap_cache:
            ap_cache[aid] = antiparallel_shortest_paths(quiver, aid)
        return ap_cache[aid]

    if not ap(arrow_id):
        raise AnalysisError(f"arrow {arrow_id!r} lies on no chordless cycle")

    def cycle_key(aid: str, gamma: Path) -> tuple[str, ...]:
        src = quiver.arrow(aid).source
        return quiver.cycle(Path(src, src, (aid,) + gamma.arrows)).path.arrows

    # BFS nodes are (arrow, previous cycle key, index parity); the parity
    # matters because it decides how the next arrow is read off the chosen
    # path.  parents[node] = (parent node, gamma chosen at the parent).
    start = (arrow_id, None, 0)
    parents: dict[tuple, Optional[tuple]] = {start: None}
    queue = deque([start])
    expanded = 0
    while queue:
        node = queue.popleft()
        aid, prev_key, parity = node
        choices = ap(aid)
        if len(choices) == 1:
            nodes = []
            gammas = []
            cur = node
            while cur is not None:
                entry = parents[cur]
                nodes.append(cur)
                gammas.append(entry[1] if entry else None)
                cur = entry[0] if entry else None
            nodes.reverse()
            gammas.reverse()  # gammas[j] led from nodes[j-1] to nodes[j]
            steps = []
            for j in range(len(nodes) - 1):
                steps.append((nodes[j][0], gammas[j + 1].arrows))
            steps.append((nodes[-1][0], choices[0].arrows))
            return ArrowSequence("Terminated", tuple(steps))
        expanded += 1
        if expanded > step_cap:
            return ArrowSequence("Exhausted", ())
        for gamma in choices:
            key = cycle_key(aid, gamma)
            if prev_key is not None and key == prev_key:
                continue
            next_parity = (parity + 1) % 2
            nxt_arrow = gamma.arrows[0] if next_parity == 1 else gamma.arrows[-1]
            nxt = (nxt_arrow, key, next_parity)
            if nxt not in parents:
                parents[nxt] = (node, gamma)
                queue.append(nxt)
    return ArrowSequence("Cyclic", ())


@dataclass(frozen=True)
class ConditionReport:
    """Hypothesis check for the finite-dimensionality theorem on primitive potentials.

    Condition (ii) is checked under this interpretation: for every directed
    non-intersecting cycle that is not chordless (up to rotation, length at
    most the bound), some arrow of the cycle has at most 2 anti-parallel
    shortest paths.
    """

    cyclically_oriented: bool
    orientation_witness: Optional[ChordlessCycle]
    per_arrow_counts: tuple[tuple[str, int], ...]
    violations: tuple[tuple[str, ...], ...]
    condition_ii: bool
    cycle_length_bound: int
    note: str = ""

    interpretation = (
        "condition (ii) quantifies over directed non-intersecting non-chordless "
        "cycles up to the length bound; an arrow qualifies when it has at most "
        "2 anti-parallel shortest paths"
    )

    def to_json_dict(self) -> dict:
        return {
            "cyclically_oriented": self.cyclically_oriented,
            "orientation_witness": list(self.orientation_witness.arrows)
            if self.orientation_witness
            else None,
            "per_arrow_antiparallel_shortest_paths": dict(self.per_arrow_counts),
            "condition_ii": self.condition_ii,
            "violating_cycles": [list(v) for v in self.violations],
            "cycle_length_bound": self.cycle_length_bound,
            "interpretation": self.interpretation,
            "note": self.note,
        }


def directed_nonintersecting_cycles(quiver: Quiver, max_length: int) -> list[Cycle]:
    """All directed cycles with pairwise-distinct vertices, up to rotation."""
    found: dict[tuple[str, ...], Cycle] = {}
    order = {v: i for i, v in enumerate(sorted(quiver.vertices, key=vertex_key))}

    def dfs(v0, v, seen, ids):
        for a in quiver.out_arrows(v):
            if a.target == v0:
                seq = tuple(ids + [a.id])
                if len(seq) <= max_length:
                    cyc = quiver.cycle(Path(v0, v0, seq))
                    if cyc.nonintersecting:
                        found.setdefault(cyc.path.arrows, cyc)
                continue
            if a.target in seen or order[a.target] < order[v0]:
                continue
            if len(ids) + 2 > max_length:
                continue
            dfs(v0, a.target, seen | {a.target}, ids + [a.id])

    for v0 in quiver.vertices:
        dfs(v0, v0, {v0}, [])
    return sorted(found.values(), key=lambda c: (c.length, c.arrows))


def _is_chordless_directed(quiver: Quiver, cyc: Cycle) -> bool:
    verts = set(quiver.path_vertices(cyc.path)[:-1])
    used = set(cyc.arrows)
    for a in quiver.arrows:
        if a.id not in used and a.source in verts and a.target in verts:
            return False
    return True


def theorem_condition_check(quiver: Quiver, cycle_length_bound: Optional[int] = None) -> ConditionReport:
    bound = len(quiver.vertices) if cycle_length_bound is None else cycle_length_bound
    note = ""
    try:
        oriented_ok, witness = is_cyclically_oriented(quiver)
    except QuiverError as exc:
        oriented_ok, witness = False, None
        note = str(exc)

    counts = tuple(
        (a.id, len(antiparallel_shortest_paths(quiver, a.id))) for a in sorted(quiver.arrows, key=lambda a: a.id)
    )
    count_by_id = dict(counts)

    violations = []
    for cyc in directed_nonintersecting_cycles(quiver, bound):
        if _is_chordless_directed(quiver, cyc):
            continue
        if not any(count_by_id[aid] <= 2 for aid in cyc.arrows):
            violations.append(cyc.path.arrows)

    return ConditionReport(
        oriented_ok,
        witness,
        counts,
        tuple(violations),
        not violations,
        bound,
        note,
    )
