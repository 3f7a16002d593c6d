"""Premutation and trivial-part reduction of quivers with potentials.

Premutation at a vertex k reverses all arrows incident to k, adds one
composite arrow ``[ab]`` for every composable pair ``a: i -> k``,
``b: k -> j``, rewrites each potential cycle through k in terms of the
composites, and adds the correction cycles ``[ab] b* a*``.

Reduction splits off the trivial part: while the potential has a 2-cycle
term ``c*(u v)`` with invertible coefficient, the two relation equations of
that term are solved for ``u`` and ``v`` as higher-order expressions in the
remaining arrows, the solutions are substituted throughout the potential
(iterating to a fixed point under the truncation), and the arrow pair is
deleted and logged.  Applying the logged substitutions to the premutated
potential reproduces the reduced potential modulo the truncation; a test
asserts exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    AlgebraElement,
    Potential,
    cyclic_derivative,
    substitute,
    substitute_element,
)
from .qp import QP
from .quiver import Arrow, Path, Quiver


class MutationError(ValueError):
    pass


def star_name(arrow_id: str) -> str:
    return arrow_id + "*"


def composite_name(a_id: str, b_id: str) -> str:
    return f"[{a_id}{b_id}]"


def _check_mutable_at(quiver: Quiver, k) -> None:
    if k not in set(quiver.vertices):
        raise MutationError(f"no vertex {k!r} in quiver")
    for a in quiver.arrows:
        if a.source == k and a.target == k:
            raise MutationError(f"loop {a.id!r} at mutation vertex {k!r}")
    for a in quiver.arrows:
        for b in quiver.arrows:
            if a.source == k and b.target == k and a.target == b.source and a.target != k:
                # a: k -> x together with b: x -> k
                raise MutationError(
                    f"2-cycle through {k!r} ({a.id!r}, {b.id!r}); mutation undefined"
                )


def premutate(qp: QP, k) -> QP:
    """Premutation at vertex k: arrow reversal, composites, adjusted potential."""
    quiver = qp.quiver
    _check_mutable_at(quiver, k)
    incoming = [a for a in quiver.arrows if a.target == k]
    outgoing = [b for b in quiver.arrows if b.source == k]

    new_arrows: list[Arrow] = []
    for a in quiver.arrows:
        if a.target == k:
            new_arrows.append(Arrow(star_name(a.id), k, a.source))
        elif a.source == k:
            new_arrows.append(Arrow(star_name(a.id), a.target, k))
        else:
            new_arrows.append(a)
    for a in incoming:
        for b in outgoing:
            new_arrows.append(Arrow(composite_name(a.id, b.id), a.source, b.target))
    ids = [a.id for a in new_arrows]
    if len(set(ids)) != len(ids):
        raise MutationError("generated arrow names collide with existing ids")
    new_quiver = Quiver(quiver.vertices, new_arrows)

    term_list: list[tuple[Path, object]] = []

    # [S]: rewrite each cycle through k with composite arrows.
    for cyc, coeff in qp.potential.items():
        verts = quiver.path_vertices(cyc)[:-1]
        d = len(verts)
        rot = None
        for r in range(d):
            if verts[r] != k:
                rot = r
                break
        if rot is None:
            raise MutationError("potential cycle supported entirely at the mutation vertex")
        seq = cyc.arrows[rot:] + cyc.arrows[:rot]
        vseq = verts[rot:] + verts[:rot]
        new_seq: list[str] = []
        i = 0
        while i < d:
            if i + 1 < d and vseq[i + 1] == k:
                new_seq.append(composite_name(seq[i], seq[i + 1]))
                i += 2
            else:
                new_seq.append(seq[i])
                i += 1
        src = new_quiver.arrow(new_seq[0]).source
        term_list.append((Path(src, src, tuple(new_seq)), coeff))

    # Correction cycles [ab] b* a*.
    one = qp.field.one()
    for a in incoming:
        for b in outgoing:
            seq = (composite_name(a.id, b.id), star_name(b.id), star_name(a.id))
            term_list.append((Path(a.source, a.source, seq), one))

    new_potential = Potential(new_quiver, qp.max_degree, term_list, qp.field)
    return QP(new_quiver, new_potential, qp.max_degree, qp.scalars)


@dataclass(frozen=True)
class MutationResult:
    premutated: QP
    reduced: QP
    removed_pairs: tuple[tuple[str, str], ...]
    substitutions: tuple[tuple[str, AlgebraElement], ...]

    def substitution_map(self) -> dict[str, AlgebraElement]:
        return dict(self.substitutions)


def _drop_arrows(quiver: Quiver, drop: set[str]) -> Quiver:
    return Quiver(quiver.vertices, [a for a in quiver.arrows if a.id not in drop])


def reduce_qp(qp: QP) -> MutationResult:
    """Split off the trivial part of a QP at truncated precision."""
    quiver = qp.quiver
    potential = qp.potential
    D = qp.max_degree
    field = qp.field
    removed: list[tuple[str, str]] = []
    # Fully resolved images over the final quiver: later stages are folded
    # into earlier entries, so one simultaneous application of the log to
    # the input potential reproduces the reduced potential.
    log: dict[str, AlgebraElement] = {}
    log_order: list[str] = []

    while True:
        quadratics = [p for p in potential.support() if p.length == 2]
        if not quadratics:
            break
        term = quadratics[0]
        u_id, v_id = term.arrows
        if u_id == v_id:
            raise MutationError(
                f"degree-2 term {term!r} is not a genuine 2-cycle (repeated arrow)"
            )
        c = potential.coefficient(term)
        # Coefficients of stored terms are nonzero, hence invertible over a
        # field; the non-invertible branch cannot occur here.
        u_path = quiver.arrow_path(u_id)
        v_path = quiver.arrow_path(v_id)
        du = cyclic_derivative(potential, u_id)
        dv = cyclic_derivative(potential, v_id)
        image_v = (du - AlgebraElement.from_path(quiver, D, v_path, c, field)).scale(-1 / c)
        image_u = (dv - AlgebraElement.from_path(quiver, D, u_path, c, field)).scale(-1 / c)

        # Solve to a fixed point when the raw solutions still mention u or v.
        def mentions(x: AlgebraElement) -> bool:
            return any(u_id in p.arrows or v_id in p.arrows for p in x.support())

        guard = 0
        while mentions(image_u) or mentions(image_v):
            images = {u_id: image_u, v_id: image_v}
            image_u = substitute_element(image_u, images)
            image_v = substitute_element(image_v, images)
            guard += 1
            if guard > D + 1:
                raise MutationError("substitution failed to stabilize below the truncation")

        images = {u_id: image_u, v_id: image_v}
        new_potential = substitute(potential, images)
        if any(u_id in p.arrows or v_id in p.arrows for p in new_potential.support()):
            raise MutationError("substituted potential still mentions a removed arrow")

        quiver = _drop_arrows(quiver, {u_id, v_id})
        rebuilt = Potential(quiver, D, {p: c2 for p, c2 in new_potential.items()}, field)
        potential = rebuilt
        removed.append((u_id, v_id))
        for key in log_order:
            log[key] = substitute_element(log[key], images)
        log[u_id] = image_u
        log[v_id] = image_v
        log_order.extend((u_id, v_id))

    reduced = QP(quiver, potential, D, qp.scalars)
    return MutationResult(qp, reduced, tuple(removed), tuple((k, log[k]) for k in log_order))


def mutate(qp: QP, k) -> MutationResult:
    """Full mutation: premutation at k followed by trivial-part reduction."""
    return reduce_qp(premutate(qp, k))
