"""Quivers, paths, cycles, and the pure graph-combinatorics layer.

A quiver is a finite directed multigraph.  Paths compose left-to-right:
``p`` then ``q`` requires ``target(p) == source(q)``, so a cycle written
``a1 a2 ... ad`` walks along each arrow in reading order.  The canonical
order on paths is by length, then lexicographically by the arrow-id
sequence; this order fixes leading terms for the reduction engine.

Chordless-cycle machinery follows the walk-based definitions: cycles are
closed undirected walks with pairwise-distinct vertices, a chord is any
extra arrow (in either direction) between cycle vertices, and a quiver
without loops and directed 2-cycles is cyclically oriented when every
chordless cycle is oriented.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

VertexId = object  # str | int in practice


def vertex_key(v):
    """Total order on vertex ids, valid for mixed int/str ids."""
    if isinstance(v, bool):  # bool is an int subclass; keep it out
        raise TypeError("bool is not a valid vertex id")
    if isinstance(v, int):
        return (0, v, "")
    return (1, 0, str(v))


@dataclass(frozen=True)
class Arrow:
    id: str
    source: VertexId
    target: VertexId


@dataclass(frozen=True)
class Path:
    """A path in a quiver: a base vertex for length 0, else an arrow sequence.

    ``source`` and ``target`` are stored explicitly so composition checks do
    not need the ambient quiver.
    """

    source: VertexId
    target: VertexId
    arrows: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)

    def is_cycle(self) -> bool:
        return self.source == self.target

    def sort_key(self):
        return (len(self.arrows), self.arrows, vertex_key(self.source))

    def __repr__(self):
        if not self.arrows:
            return f"e[{self.source}]"
        return "*".join(self.arrows)


@dataclass(frozen=True)
class Cycle:
    """A directed cycle stored as its canonical rotation representative.

    The stored arrow sequence is the lexicographically least among all
    rotations.  ``nonintersecting`` records whether the visited vertices are
    pairwise distinct.
    """

    path: Path
    nonintersecting: bool

    @property
    def arrows(self) -> tuple[str, ...]:
        return self.path.arrows

    @property
    def length(self) -> int:
        return self.path.length

    def __repr__(self):
        return f"Cycle({self.path!r})"


class QuiverError(ValueError):
    pass


class Quiver:
    """A finite directed multigraph with identified vertices and arrows."""

    def __init__(self, vertices: Sequence[VertexId], arrows: Sequence[Arrow]):
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self._vertex_set = set(self.vertices)
        if len(self._vertex_set) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        self._arrow_by_id = {}
        for a in self.arrows:
            if a.id in self._arrow_by_id:
                raise QuiverError(f"duplicate arrow id {a.id!r}")
            if a.source not in self._vertex_set or a.target not in self._vertex_set:
                raise QuiverError(f"arrow {a.id!r} has an undeclared endpoint")
            self._arrow_by_id[a.id] = a
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for a in self.arrows:
            self._out[a.source].append(a)
            self._in[a.target].append(a)
        for v in self.vertices:
            self._out[v].sort(key=lambda a: a.id)
            self._in[v].sort(key=lambda a: a.id)

    # -- basic queries ----------------------------------------------------

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self._arrow_by_id[arrow_id]
        except KeyError:
            raise QuiverError(f"no arrow {arrow_id!r} in quiver") from None

    def has_arrow(self, arrow_id: str) -> bool:
        return arrow_id in self._arrow_by_id

    def out_arrows(self, v) -> list[Arrow]:
        return list(self._out[v])

    def in_arrows(self, v) -> list[Arrow]:
        return list(self._in[v])

    def loops(self) -> list[Arrow]:
        return [a for a in self.arrows if a.source == a.target]

    def two_cycles(self) -> list[tuple[Arrow, Arrow]]:
        """All directed 2-cycles, i.e. antiparallel arrow pairs."""
        pairs = []
        for a in self.arrows:
            for b in self.arrows:
                if a.id < b.id and a.source == b.target and a.target == b.source:
                    pairs.append((a, b))
        return pairs

    def parallel_pairs(self) -> list[tuple[Arrow, Arrow]]:
        pairs = []
        for a in self.arrows:
            for b in self.arrows:
                if a.id < b.id and a.source == b.source and a.target == b.target:
                    pairs.append((a, b))
        return pairs

    # -- paths -------------------------------------------------------------

    def lazy_path(self, v) -> Path:
        if v not in self._vertex_set:
            raise QuiverError(f"no vertex {v!r} in quiver")
        return Path(v, v, ())

    def path(self, arrow_ids: Iterable[str]) -> Path:
        ids = tuple(arrow_ids)
        if not ids:
            raise QuiverError("empty arrow sequence; use lazy_path(vertex)")
        arrows = [self.arrow(i) for i in ids]
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise QuiverError(f"arrows {a.id!r} and {b.id!r} do not compose")
        return Path(arrows[0].source, arrows[-1].target, ids)

    def arrow_path(self, arrow_id: str) -> Path:
        a = self.arrow(arrow_id)
        return Path(a.source, a.target, (a.id,))

    def path_vertices(self, p: Path) -> tuple:
        """Vertex visit sequence of ``p`` (length+1 entries)."""
        if not p.arrows:
            return (p.source,)
        verts = [self.arrow(p.arrows[0]).source]
        for i in p.arrows:
            verts.append(self.arrow(i).target)
        return tuple(verts)

    def cycle(self, p: Path) -> Cycle:
        """Canonical rotation representative of the directed cycle ``p``."""
        if not p.is_cycle():
            raise QuiverError(f"path {p!r} is not a cycle")
        if not p.arrows:
            raise QuiverError("length-0 path is not a cycle")
        best = None
        n = len(p.arrows)
        for r in range(n):
            cand = p.arrows[r:] + p.arrows[:r]
            if best is None or cand < best:
                best = cand
        src = self.arrow(best[0]).source
        canon = Path(src, src, best)
        verts = self.path_vertices(canon)[:-1]
        return Cycle(canon, len(set(verts)) == len(verts))

    def rotations(self, p: Path) -> list[Path]:
        if not p.is_cycle() or not p.arrows:
            raise QuiverError("rotations need a nonempty cycle")
        out = []
        n = len(p.arrows)
        for r in range(n):
            seq = p.arrows[r:] + p.arrows[:r]
            src = self.arrow(seq[0]).source
            out.append(Path(src, src, seq))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


def build_quiver(vertex_ids: Sequence, arrow_triples: Sequence[tuple]) -> Quiver:
    """Validated quiver from vertex ids and (arrow id, source, target) triples."""
    arrows = [Arrow(str(i), s, t) for (i, s, t) in arrow_triples]
    return Quiver(vertex_ids, arrows)


def compose(p: Path, q: Path) -> Path:
    """Concatenation ``p`` then ``q``; lazy paths are two-sided identities."""
    if p.target != q.source:
        raise QuiverError(
            f"non-composable: target {p.target!r} of {p!r} differs from source {q.source!r} of {q!r}"
        )
    return Path(p.source, q.target, p.arrows + q.arrows)


def enumerate_paths(quiver: Quiver, max_length: int) -> list[list[Path]]:
    """All paths of each length ``0..max_length``, in canonical path order.

    Satisfies the adjacency-matrix recurrence: every length-d path is a
    length-(d-1) path extended by one composable arrow.
    """
    if max_length < 0:
        raise QuiverError("max_length must be >= 0")
    by_degree: list[list[Path]] = []
    degree0 = sorted((quiver.lazy_path(v) for v in quiver.vertices), key=Path.sort_key)
    by_degree.append(degree0)
    current = degree0
    for _ in range(max_length):
        nxt = []
        for p in current:
            for a in quiver.out_arrows(p.target):
                nxt.append(Path(p.source if p.arrows else a.source, a.target, p.arrows + (a.id,)))
        nxt.sort(key=Path.sort_key)
        by_degree.append(nxt)
        current = nxt
    return by_degree


# -- chordless cycles (undirected walks) -----------------------------------


@dataclass(frozen=True)
class ChordlessCycle:
    """A chordless cycle as an undirected closed walk.

    ``vertices[i]`` and ``vertices[(i+1) % p]`` are joined by ``arrows[i]``;
    ``forwards[i]`` is True when that arrow points from ``vertices[i]`` to
    its successor.  ``oriented`` means all arrows point the same way around.
    The stored traversal is canonical among all rotations and the two
    traversal directions.
    """

    vertices: tuple
    arrows: tuple[str, ...]
    forwards: tuple[bool, ...]
    oriented: bool

    @property
    def length(self) -> int:
        return len(self.arrows)

    def directed_cycle(self, quiver: Quiver) -> Cycle:
        """The canonical directed Cycle, defined only for oriented cycles."""
        if not self.oriented:
            raise QuiverError("unoriented cycle has no directed representative")
        if all(self.forwards):
            seq = self.arrows
        else:
            seq = tuple(reversed(self.arrows))
        src = quiver.arrow(seq[0]).source
        return quiver.cycle(Path(src, src, seq))

    def __repr__(self):
        marks = "".join(a + ("" if f else "~") for a, f in zip(self.arrows, self.forwards))
        return f"ChordlessCycle({marks}, oriented={self.oriented})"


def _canonical_walk(quiver: Quiver, traversal: list[tuple[str, bool]], start: VertexId) -> ChordlessCycle:
    """Normalize a closed walk over rotation and reversal."""
    p = len(traversal)

    def vertices_of(trav, v0):
        verts = [v0]
        for aid, fwd in trav[:-1]:
            a = quiver.arrow(aid)
            verts.append(a.target if fwd else a.source)
        return tuple(verts)

    candidates = []
    verts = vertices_of(traversal, start)
    for r in range(p):
        rot = traversal[r:] + traversal[:r]
        candidates.append((rot, verts[r]))
    rev = [(aid, not fwd) for aid, fwd in reversed(traversal)]
    rev_start = verts[0]  # reversed walk also starts at the original base point
    rev_verts = vertices_of(rev, rev_start)
    for r in range(p):
        rot = rev[r:] + rev[:r]
        candidates.append((rot, rev_verts[r]))
    best = min(candidates, key=lambda c: tuple((aid, fwd) for aid, fwd in c[0]))
    trav, v0 = best
    arrows = tuple(aid for aid, _ in trav)
    forwards = tuple(fwd for _, fwd in trav)
    oriented = all(forwards) or not any(forwards)
    return ChordlessCycle(vertices_of(trav, v0), arrows, forwards, oriented)


def _has_chord(quiver: Quiver, vertex_set: set, used_arrow_ids: set) -> bool:
    for a in quiver.arrows:
        if a.id in used_arrow_ids:
            continue
        if a.source in vertex_set and a.target in vertex_set:
            return True
    return False


def chordless_cycles(quiver: Quiver, max_length: Optional[int] = None) -> list[ChordlessCycle]:
    """All chordless cycles of length <= max_length (default: vertex count).

    Cycles are undirected closed walks with pairwise-distinct vertices and no
    chord; each is tagged oriented/unoriented and returned once, deduplicated
    over rotation and traversal direction, in a deterministic order.
    """
    bound = len(quiver.vertices) if max_length is None else max_length
    if bound < 1:
        raise QuiverError("max_length must be >= 1")
    found: dict[tuple, ChordlessCycle] = {}

    # Loops are length-1 cycles; a chord of a loop is another loop at the
    # same vertex.
    for a in quiver.loops():
        others = [b for b in quiver.loops() if b.id != a.id and b.source == a.source]
        if not others:
            cc = ChordlessCycle((a.source,), (a.id,), (True,), True)
            found[(cc.arrows, cc.forwards)] = cc

    # Undirected incidence excluding loops.
    incident = {v: [] for v in quiver.vertices}
    for a in quiver.arrows:
        if a.source == a.target:
            continue
        incident[a.source].append((a.id, a.target, True))
        incident[a.target].append((a.id, a.source, False))
    for v in incident:
        incident[v].sort()

    order = {v: i for i, v in enumerate(sorted(quiver.vertices, key=vertex_key))}

    def arrows_between(u, w, excluding: set) -> int:
        n = 0
        for a in quiver.arrows:
            if a.id in excluding:
                continue
            if {a.source, a.target} == {u, w}:
                n += 1
        return n

    def search(v0, path_vertices, used_ids, traversal):
        u = path_vertices[-1]
        for aid, w, fwd in incident[u]:
            if aid in used_ids:
                continue
            if w == v0 and len(traversal) >= 1:
                cand = traversal + [(aid, fwd)]
                if len(cand) > bound:
                    continue
                vset = set(path_vertices)
                if not _has_chord(quiver, vset, {a for a, _ in cand}):
                    cc = _canonical_walk(quiver, cand, v0)
                    found.setdefault((cc.arrows, cc.forwards), cc)
                continue
            if w in path_vertices or order[w] < order[v0]:
                continue
            if len(traversal) + 2 > bound:
                continue
            # Soundness prunes: any unused arrow from w into the interior of
            # the current path, or a second arrow parallel to the step just
            # taken, is a chord of every completion.  On the very first step
            # a parallel arrow may still close a 2-cycle, so it only prunes
            # for u != v0.
            if u != v0 and arrows_between(u, w, used_ids | {aid}) > 0:
                continue
            interior = set(path_vertices[1:-1])
            if any(
                (a.source == w and a.target in interior) or (a.target == w and a.source in interior)
                for a in quiver.arrows
                if a.id not in used_ids and a.id != aid
            ):
                continue
            search(v0, path_vertices + [w], used_ids | {aid}, traversal + [(aid, fwd)])

    for v0 in sorted(quiver.vertices, key=vertex_key):
        search(v0, [v0], set(), [])

    out = list(found.values())
    out.sort(key=lambda c: (c.length, c.arrows, c.forwards))
    return out


def is_cyclically_oriented(quiver: Quiver) -> tuple[bool, Optional[ChordlessCycle]]:
    """True iff every chordless cycle is oriented.

    Requires a quiver without loops and without directed 2-cycles; raises
    otherwise.  On False, the witness is one unoriented chordless cycle.
    """
    if quiver.loops():
        raise QuiverError("quiver has a loop; cyclic orientation is undefined")
    if quiver.two_cycles():
        raise QuiverError("quiver has a 2-cycle; cyclic orientation is undefined")
    for c in chordless_cycles(quiver):
        if not c.oriented:
            return False, c
    return True, None


# -- isomorphism (used by mutation tests and acceptance checks) -------------


def quivers_isomorphic(q1: Quiver, q2: Quiver) -> Optional[dict]:
    """A vertex bijection identifying the two multigraphs, or None.

    Arrow identities are ignored; only the directed multigraph structure
    matters.  Backtracking with degree-signature pruning; fine at desk scale.
    """
    if len(q1.vertices) != len(q2.vertices) or len(q1.arrows) != len(q2.arrows):
        return None

    def signature(q, v):
        return (len(q._out[v]), len(q._in[v]))

    def multi_edges(q):
        m = {}
        for a in q.arrows:
            m[(a.source, a.target)] = m.get((a.source, a.target), 0) + 1
        return m

    m1, m2 = multi_edges(q1), multi_edges(q2)
    sig2 = {}
    for v in q2.vertices:
        sig2.setdefault(signature(q2, v), []).append(v)

    verts1 = sorted(q1.vertices, key=lambda v: (signature(q1, v), vertex_key(v)))
    mapping: dict = {}
    used = set()

    def consistent(v, w):
        for u, x in mapping.items():
            if m1.get((v, u), 0) != m2.get((w, x), 0):
                return False
            if m1.get((u, v), 0) != m2.get((x, w), 0):
                return False
        return m1.get((v, v), 0) == m2.get((w, w), 0)

    def extend(i):
        if i == len(verts1):
            return True
        v = verts1[i]
        for w in sig2.get(signature(q1, v), []):
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if extend(0):
        return dict(mapping)
    return None
