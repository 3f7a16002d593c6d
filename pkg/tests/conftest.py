"""Shared fixtures: small-QP corpus and independent brute-force oracles.

The oracles here deliberately avoid the engine's machinery: path
enumeration is a plain BFS, cyclic derivatives are recomputed locally, and
ranks come from textbook Gaussian elimination over Fractions with an
arbitrary (reversed) column order.  They exist to cross-check the
leading-path saturation engine, so they must not share its code paths.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from qpalgebra import AlgebraElement, Potential, QP, Quiver, build_quiver


# -- independent path enumeration -------------------------------------------


def walk_paths(quiver: Quiver, max_len: int):
    """All (source, target, arrow tuple) walks of length <= max_len, BFS."""
    arrows = {a.id: (a.source, a.target) for a in quiver.arrows}
    level = [(v, v, ()) for v in quiver.vertices]
    out = list(level)
    for _ in range(max_len):
        nxt = []
        for (s, t, ids) in level:
            for aid, (asrc, atgt) in arrows.items():
                if asrc == t:
                    nxt.append((s, atgt, ids + (aid,)))
        out.extend(nxt)
        level = nxt
    return out


# -- independent cyclic derivative -------------------------------------------


def naive_cyclic_derivative(term_list, arrow_id, arrows):
    """Derivative of [(arrow tuple, coeff)] cycles w.r.t. one arrow.

    Returns a dict mapping arrow tuples to coefficients; the empty tuple key
    carries the base vertex alongside.
    """
    acc = {}
    for seq, coeff in term_list:
        for k, aid in enumerate(seq):
            if aid != arrow_id:
                continue
            rest = seq[k + 1 :] + seq[:k]
            acc[rest] = acc.get(rest, 0) + coeff
    return {k: v for k, v in acc.items() if v}


# -- independent rank computation ---------------------------------------------


def gauss_rank(rows):
    """Rank of sparse Fraction rows (dicts keyed by column id)."""
    pivots = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            # Arbitrary but fixed pivot choice: the largest column key.
            col = max(row)
            if col in pivots:
                piv = pivots[col]
                factor = row[col] / piv[col]
                for c, v in piv.items():
                    nv = row.get(c, Fraction(0)) - factor * v
                    if nv:
                        row[c] = nv
                    elif c in row:
                        del row[c]
            else:
                pivots[col] = row
                rank += 1
                break
    return rank


def dense_quotient_dimension(qp: QP) -> int:
    """Dimension of the truncated algebra modulo all ideal shifts.

    Builds every row p * (cyclic derivative) * q explicitly and subtracts
    the rank from the path count.  Completely independent of the saturation
    engine.
    """
    D = qp.max_degree
    quiver = qp.quiver
    arrows = {a.id: (a.source, a.target) for a in quiver.arrows}
    paths = walk_paths(quiver, D)
    col = {(s, t, ids): i for i, (s, t, ids) in enumerate(paths)}
    term_list = [(p.arrows, c) for p, c in qp.potential.items()]

    rows = []
    seen = set()
    for arrow_id, (asrc, atgt) in arrows.items():
        deriv = naive_cyclic_derivative(term_list, arrow_id, arrows)
        if not deriv:
            continue
        # every relation term runs target(arrow) -> source(arrow)
        for (ps, pt, pids) in paths:
            if pt != atgt:
                continue
            for (qs, qt, qids) in paths:
                if qs != asrc:
                    continue
                row = {}
                for rest, coeff in deriv.items():
                    total = len(pids) + len(rest) + len(qids)
                    if total > D:
                        continue
                    key = (ps, qt, pids + rest + qids)
                    row[col[key]] = row.get(col[key], Fraction(0)) + Fraction(coeff)
                row = {k: v for k, v in row.items() if v}
                if row:
                    frozen = frozenset(row.items())
                    if frozen not in seen:
                        seen.add(frozen)
                        rows.append(row)
    return len(paths) - gauss_rank(rows)


# -- corpus --------------------------------------------------------------------


def cycle_potential(quiver: Quiver, max_degree: int, *weighted_words) -> Potential:
    terms = [(quiver.path(list(word)), coeff) for word, coeff in weighted_words]
    return Potential(quiver, max_degree, terms)


def small_qp_corpus() -> list[tuple[str, QP]]:
    """At least 20 QPs on at most 4 vertices, exercising mixed shapes."""
    corpus = []

    tri = build_quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3), ("c", 3, 1)])
    corpus.append(("triangle S=abc", QP(tri, cycle_potential(tri, 5, (("a", "b", "c"), 1)), 5)))
    corpus.append(("triangle S=2abc", QP(tri, cycle_potential(tri, 5, (("a", "b", "c"), 2)), 5)))
    corpus.append(("triangle S=0", QP(tri, Potential(tri, 4), 4)))

    single = build_quiver([1], [])
    corpus.append(("point", QP(single, Potential(single, 3), 3)))

    a2 = build_quiver([1, 2], [("a", 1, 2)])
    corpus.append(("A2", QP(a2, Potential(a2, 4), 4)))

    a3 = build_quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])
    corpus.append(("A3", QP(a3, Potential(a3, 4), 4)))

    kron = build_quiver([1, 2], [("a", 1, 2), ("b", 1, 2)])
    corpus.append(("kronecker", QP(kron, Potential(kron, 4), 4)))

    loop = build_quiver([1], [("l", 1, 1)])
    corpus.append(("loop S=l^3", QP(loop, cycle_potential(loop, 6, (("l", "l", "l"), 1)), 6)))
    corpus.append(("loop S=l^2", QP(loop, cycle_potential(loop, 5, (("l", "l"), 1)), 5)))
    corpus.append(("loop S=0", QP(loop, Potential(loop, 4), 4)))

    four = build_quiver([1, 2, 3, 4], [("a", 1, 2), ("b", 2, 3), ("c", 3, 4), ("d", 4, 1)])
    corpus.append(("4-cycle S=abcd", QP(four, cycle_potential(four, 6, (("a", "b", "c", "d"), 1)), 6)))
    corpus.append(("4-cycle S=0", QP(four, Potential(four, 5), 5)))

    double = build_quiver(
        [1, 2, 3, 4],
        [("a", 1, 2), ("b", 2, 3), ("c", 3, 1), ("d", 3, 4), ("e", 4, 1)],
    )
    corpus.append(
        (
            "two cycles sharing an edge",
            QP(double, cycle_potential(double, 5, (("a", "b", "c"), 1), (("a", "b", "d", "e"), 1)), 5),
        )
    )
    corpus.append(
        ("two cycles, one term", QP(double, cycle_potential(double, 5, (("a", "b", "c"), 3)), 5))
    )

    twotri = build_quiver(
        [1, 2, 3], [("a", 1, 2), ("b", 2, 3), ("c", 3, 1), ("a2", 1, 2)]
    )
    corpus.append(
        (
            "parallel arrows, both triangles",
            QP(twotri, cycle_potential(twotri, 5, (("a", "b", "c"), 1), (("a2", "b", "c"), 1)), 5),
        )
    )

    back = build_quiver([1, 2], [("a", 1, 2), ("b", 2, 1)])
    corpus.append(("2-cycle S=ab", QP(back, cycle_potential(back, 4, (("a", "b"), 1)), 4)))
    corpus.append(("2-cycle S=0", QP(back, Potential(back, 4), 4)))

    rng = random.Random(20240 + 1)
    attempts = 0
    while len(corpus) < 22 and attempts < 200:
        attempts += 1
        nv = rng.randint(3, 4)
        verts = list(range(1, nv + 1))
        na = rng.randint(3, 6)
        arrows = []
        for j in range(na):
            s = rng.choice(verts)
            t = rng.choice(verts)
            arrows.append((f"r{j}", s, t))
        try:
            q = build_quiver(verts, arrows)
        except Exception:
            continue
        # find short directed cycles to support a potential
        cycles = []
        for a in q.arrows:
            for b in q.arrows:
                if a.target == b.source and b.target == a.source and a.id != b.id:
                    cycles.append((a.id, b.id))
                for c in q.arrows:
                    if (
                        a.target == b.source
                        and b.target == c.source
                        and c.target == a.source
                        and len({a.id, b.id, c.id}) == 3
                    ):
                        cycles.append((a.id, b.id, c.id))
        terms = []
        for cyc in cycles[:2]:
            terms.append((cyc, rng.randint(1, 3)))
        D = rng.randint(4, 5)
        try:
            pot = cycle_potential(q, D, *terms) if terms else Potential(q, D)
            corpus.append((f"random-{attempts}", QP(q, pot, D)))
        except Exception:
            continue
    assert len(corpus) >= 20
    return corpus


@pytest.fixture(scope="session")
def corpus():
    return small_qp_corpus()


def random_element(quiver: Quiver, max_degree: int, rng: random.Random, n_terms: int = 4) -> AlgebraElement:
    from qpalgebra import enumerate_paths

    levels = enumerate_paths(quiver, max_degree)
    pool = [p for level in levels for p in level]
    terms = {}
    for _ in range(n_terms):
        p = rng.choice(pool)
        c = rng.randint(-4, 4)
        if c:
            terms[p] = terms.get(p, 0) + c
    return AlgebraElement(quiver, max_degree, {p: c for p, c in terms.items() if c})
