"""Quiver, path, and chordless-cycle layer."""

from __future__ import annotations

import itertools
import random

import pytest

from qpalgebra import (
    QuiverError,
    build_quiver,
    chordless_cycles,
    compose,
    enumerate_paths,
    is_cyclically_oriented,
    quivers_isomorphic,
)
from qpalgebra.quiver import Arrow, Quiver
from qpalgebra.sphere import fig5_quiver, sphere_quiver


def triangle():
    return build_quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3), ("c", 3, 1)])


# -- construction ---------------------------------------------------------------


def test_build_quiver_validates():
    q = build_quiver([1], [])
    assert len(q.vertices) == 1 and len(q.arrows) == 0
    with pytest.raises(QuiverError):
        build_quiver([1, 1], [])
    with pytest.raises(QuiverError):
        build_quiver([1, 2], [("a", 1, 3)])
    with pytest.raises(QuiverError):
        build_quiver([1, 2], [("a", 1, 2), ("a", 2, 1)])


def test_sphere_quiver_counts():
    q = sphere_quiver(3)
    assert len(q.vertices) == 9
    assert len(q.arrows) == 15


def test_loop_and_two_cycle_queries():
    q = build_quiver([1, 2], [("l", 1, 1), ("a", 1, 2), ("b", 2, 1)])
    assert [a.id for a in q.loops()] == ["l"]
    assert [(x.id, y.id) for x, y in q.two_cycles()] == [("a", "b")]


# -- composition ----------------------------------------------------------------


def test_compose_identity_and_concatenation():
    q = triangle()
    e1 = q.lazy_path(1)
    a = q.arrow_path("a")
    b = q.arrow_path("b")
    assert compose(e1, a) == a
    assert compose(a, q.lazy_path(2)) == a
    ab = compose(a, b)
    assert ab.arrows == ("a", "b") and ab.length == 2
    with pytest.raises(QuiverError):
        compose(b, a)


# -- path enumeration -----------------------------------------------------------


def test_enumerate_paths_single_vertex():
    q = build_quiver([1], [])
    levels = enumerate_paths(q, 5)
    assert [len(l) for l in levels] == [1, 0, 0, 0, 0, 0]


def test_enumerate_paths_triangle_brute_force():
    q = triangle()
    levels = enumerate_paths(q, 3)
    assert [len(l) for l in levels] == [3, 3, 3, 3]
    # independent check: walks by brute force over arrow sequences
    arrows = {a.id: a for a in q.arrows}
    for d in range(1, 4):
        walks = [
            seq
            for seq in itertools.product(arrows, repeat=d)
            if all(arrows[x].target == arrows[y].source for x, y in zip(seq, seq[1:]))
        ]
        assert sorted(walks) == sorted(p.arrows for p in levels[d])


def test_enumerate_paths_sphere_degree_one():
    q = sphere_quiver(3)
    levels = enumerate_paths(q, 1)
    assert len(levels[0]) == 9
    assert len(levels[1]) == 15


def test_path_count_recurrence(corpus):
    for name, qp in corpus[:8]:
        q = qp.quiver
        levels = enumerate_paths(q, 4)
        for d in range(1, 5):
            expected = 0
            for a in q.arrows:
                expected += sum(1 for p in levels[d - 1] if p.target == a.source)
            assert len(levels[d]) == expected, name


def test_canonical_order_is_length_then_lex():
    q = triangle()
    levels = enumerate_paths(q, 2)
    assert [p.arrows for p in levels[2]] == [("a", "b"), ("b", "c"), ("c", "a")]


# -- cycles ----------------------------------------------------------------------


def test_cycle_rotation_normalization():
    q = triangle()
    reps = {q.cycle(rot).path.arrows for rot in q.rotations(q.path(["b", "c", "a"]))}
    assert reps == {("a", "b", "c")}


def test_cycle_requires_closure():
    q = triangle()
    with pytest.raises(QuiverError):
        q.cycle(q.path(["a", "b"]))


# -- chordless cycles -------------------------------------------------------------


def test_triangle_single_oriented_chordless_cycle():
    q = triangle()
    cycles = chordless_cycles(q)
    assert len(cycles) == 1
    assert cycles[0].oriented
    assert cycles[0].directed_cycle(q).path.arrows == ("a", "b", "c")


def test_sphere_chordless_cycles():
    q = sphere_quiver(3)
    cycles = chordless_cycles(q, 9)
    assert len(cycles) == 7
    assert all(c.oriented for c in cycles)
    lengths = sorted(c.length for c in cycles)
    assert lengths == [3] * 7
    # the long delta cycle is excluded: every alpha arrow is a chord of it
    assert not any(set(c.arrows) == {f"delta{j}" for j in range(1, 7)} for c in cycles)


def test_adding_a_chord_removes_the_cycle():
    q = sphere_quiver(3)
    before = {c.arrows for c in chordless_cycles(q)}
    target = ("alpha1", "beta1", "beta2")
    assert any(set(c) == set(target) for c in before)
    arrows = list(q.arrows) + [Arrow("chord", "a1", "b1")]
    q2 = Quiver(q.vertices, arrows)
    after = {c.arrows for c in chordless_cycles(q2)}
    assert not any(set(c) == set(target) for c in after)


def test_parallel_pair_is_unoriented_two_cycle():
    q = build_quiver([1, 2], [("a", 1, 2), ("b", 1, 2)])
    cycles = chordless_cycles(q)
    assert len(cycles) == 1
    assert cycles[0].length == 2 and not cycles[0].oriented


def test_loop_is_an_oriented_one_cycle():
    q = build_quiver([1], [("l", 1, 1)])
    cycles = chordless_cycles(q)
    assert len(cycles) == 1 and cycles[0].oriented and cycles[0].length == 1


def naive_chordless(quiver, bound):
    """Independent oracle: enumerate closed vertex walks directly.

    Returns pairs (frozen arrow-id set, oriented flag).
    """
    arrows = list(quiver.arrows)
    results = set()

    def edges_between(u, w):
        return [a for a in arrows if {a.source, a.target} == {u, w} or (u == w and a.source == a.target == u)]

    verts = list(quiver.vertices)
    for length in range(1, bound + 1):
        for vseq in itertools.permutations(verts, length):
            # close the vertex sequence; pick one arrow per consecutive pair
            pairs = [(vseq[i], vseq[(i + 1) % length]) for i in range(length)]
            if length == 1:
                choices = [edges_between(vseq[0], vseq[0])]
            else:
                choices = [edges_between(u, w) for (u, w) in pairs]
            if any(not c for c in choices):
                continue
            for combo in itertools.product(*choices):
                if len({a.id for a in combo}) != length:
                    continue
                vset = set(vseq)
                used = {a.id for a in combo}
                if any(a.id not in used and a.source in vset and a.target in vset for a in arrows):
                    continue
                oriented = all(
                    a.source == u and a.target == w for a, (u, w) in zip(combo, pairs)
                ) or all(a.source == w and a.target == u for a, (u, w) in zip(combo, pairs))
                results.add((frozenset(used), oriented))
    return results


def test_chordless_matches_naive_oracle_on_small_quivers():
    rng = random.Random(99)
    for trial in range(20):
        nv = rng.randint(2, 5)
        verts = list(range(nv))
        arrows = []
        for j in range(rng.randint(1, 7)):
            arrows.append((f"x{j}", rng.randrange(nv), rng.randrange(nv)))
        q = build_quiver(verts, arrows)
        mine = {(frozenset(c.arrows), c.oriented) for c in chordless_cycles(q, nv)}
        oracle = naive_chordless(q, nv)
        assert mine == oracle, f"trial {trial}: {arrows}"
        if not q.loops() and not q.two_cycles():
            ok, witness = is_cyclically_oriented(q)
            assert ok == all(flag for _, flag in oracle), f"trial {trial}: {arrows}"
            if not ok:
                assert (frozenset(witness.arrows), False) in oracle


# -- cyclic orientation ------------------------------------------------------------


def test_triangle_is_cyclically_oriented():
    ok, witness = is_cyclically_oriented(triangle())
    assert ok and witness is None


def test_unoriented_triangle_witness():
    q = build_quiver([1, 2, 3], [("a", 1, 2), ("b", 3, 2), ("c", 1, 3)])
    ok, witness = is_cyclically_oriented(q)
    assert not ok
    assert witness is not None and set(witness.arrows) == {"a", "b", "c"}
    assert not witness.oriented


def test_cyclic_orientation_requires_no_loops_or_two_cycles():
    with pytest.raises(QuiverError):
        is_cyclically_oriented(build_quiver([1], [("l", 1, 1)]))
    with pytest.raises(QuiverError):
        is_cyclically_oriented(build_quiver([1, 2], [("a", 1, 2), ("b", 2, 1)]))


def test_sphere_is_cyclically_oriented():
    ok, _ = is_cyclically_oriented(sphere_quiver(3))
    assert ok


def test_fig5_counts():
    q = fig5_quiver()
    assert len(q.vertices) == 6 and len(q.arrows) == 12
    assert not q.loops() and not q.two_cycles()


# -- isomorphism -------------------------------------------------------------------


def test_quiver_isomorphism():
    q1 = triangle()
    q2 = build_quiver(["x", "y", "z"], [("p", "y", "z"), ("q", "z", "x"), ("r", "x", "y")])
    assert quivers_isomorphic(q1, q2) is not None
    q3 = build_quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3), ("c", 1, 3)])
    assert quivers_isomorphic(q1, q3) is None
