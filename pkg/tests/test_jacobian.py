"""Saturation, normal forms, certificates, and the independent oracle."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from qpalgebra import (
    AlgebraElement,
    CapExceeded,
    Potential,
    QP,
    build_quiver,
    certificate_from_basis,
    cycle_power_nonvanishing,
    finite_dim_certificate,
    jacobian_relations,
    normal_form,
    saturate_qp,
)
from qpalgebra.sphere import fig4_qp, sphere_qp
from conftest import dense_quotient_dimension, random_element


def triangle_qp(D=4, coeff=1):
    q = build_quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3), ("c", 3, 1)])
    return QP(q, Potential(q, D, {q.path(["a", "b", "c"]): coeff}), D)


# -- relations -------------------------------------------------------------------


def test_zero_potential_relations_are_zero():
    q = build_quiver([1, 2], [("a", 1, 2)])
    qp = QP(q, Potential(q, 3), 3)
    rels = jacobian_relations(qp)
    assert len(rels) == 1
    assert all(e.is_zero() for e in rels.elements())


def test_triangle_relations():
    qp = triangle_qp()
    q = qp.quiver
    rels = jacobian_relations(qp).by_arrow()
    assert rels["a"] == AlgebraElement.from_path(q, 4, q.path(["b", "c"]))
    assert rels["b"] == AlgebraElement.from_path(q, 4, q.path(["c", "a"]))
    assert rels["c"] == AlgebraElement.from_path(q, 4, q.path(["a", "b"]))


def test_sphere_has_one_relation_per_arrow():
    sqp = sphere_qp(3, max_degree=8)
    rels = jacobian_relations(sqp.qp)
    assert len(rels) == 15
    assert {aid for aid, _ in rels.relations} == {a.id for a in sqp.quiver.arrows}


# -- saturation ------------------------------------------------------------------


def test_empty_relations_give_empty_basis():
    q = build_quiver([1, 2], [("a", 1, 2)])
    qp = QP(q, Potential(q, 3), 3)
    basis = saturate_qp(qp)
    assert len(basis) == 0
    assert basis.standard_path_counts() == [2, 1, 0, 0]


def test_triangle_saturation_frozen_values():
    qp = triangle_qp(D=4)
    basis = saturate_qp(qp)
    counts = basis.standard_path_counts()
    # 3 lazy paths, 3 arrows survive; everything of length >= 2 dies
    assert counts == [3, 3, 0, 0, 0]
    cert = certificate_from_basis(basis)
    assert cert.verdict == "FiniteDimensional"
    assert cert.nilpotency_degree == 2
    assert cert.dimension == 6
    assert cert.per_degree == (3, 3)


def test_basis_is_interreduced_and_monic(corpus):
    for name, qp in corpus[:10]:
        basis = saturate_qp(qp)
        leads = set(basis.rows)
        for lead, row in basis.rows.items():
            assert row[lead] == qp.field.one(), name
            for j in row:
                if j != lead:
                    assert j not in leads, name
                    assert j > lead, name


def test_saturated_span_closed_under_arrow_multiplication(corpus):
    for name, qp in corpus[:10]:
        basis = saturate_qp(qp)
        table = basis.table
        for side in ("left", "right"):
            exts = table.left_ext if side == "left" else table.right_ext
            for row in basis.rows.values():
                for a in range(len(table.arrow_ids)):
                    prod = {}
                    for i, c in row.items():
                        j = exts[a][i]
                        if j >= 0:
                            prod[j] = c
                    assert not basis.reduce_vector(prod), (name, side)


def test_row_cap_aborts():
    sqp = sphere_qp(3, max_degree=8)
    with pytest.raises(CapExceeded):
        saturate_qp(sqp.qp, row_cap=5)


# -- normal forms ------------------------------------------------------------------


def test_normal_form_idempotent_and_kills_relations():
    qp = triangle_qp()
    basis = saturate_qp(qp)
    rels = jacobian_relations(qp)
    for e in rels.elements():
        assert normal_form(e, basis).is_zero()
    rng = random.Random(3)
    for _ in range(50):
        x = random_element(qp.quiver, qp.max_degree, rng)
        nf = normal_form(x, basis)
        assert normal_form(nf.reduced, basis).reduced == nf.reduced
        assert basis.contains(x - nf.reduced)


def test_normal_form_stable_under_adding_ideal_rows(corpus):
    rng = random.Random(8)
    for name, qp in corpus[:8]:
        basis = saturate_qp(qp)
        rows = basis.row_elements()
        if not rows:
            continue
        for _ in range(10):
            x = random_element(qp.quiver, qp.max_degree, rng)
            r = rng.choice(rows)
            assert basis.reduce(x + r) == basis.reduce(x), name


def test_reduced_form_already_reduced_is_fixed():
    qp = triangle_qp()
    basis = saturate_qp(qp)
    x = AlgebraElement.from_path(qp.quiver, 4, qp.quiver.arrow_path("a"), 7)
    assert normal_form(x, basis).reduced == x


def test_sphere_mixed_word_reduces_to_zero():
    sqp = sphere_qp(3, max_degree=8)
    basis = saturate_qp(sqp.qp)
    q = sqp.quiver
    word = AlgebraElement.from_path(q, 8, q.path(["beta1", "beta2", "alpha1"]))
    assert normal_form(word, basis).is_zero()


# -- certificates -------------------------------------------------------------------


def test_acyclic_quiver_certificate():
    q = build_quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])
    qp = QP(q, Potential(q, 5), 5)
    cert = finite_dim_certificate(qp)
    assert cert.verdict == "FiniteDimensional"
    # dimension equals the number of paths: 3 lazy + a, b, ab
    assert cert.dimension == 6
    assert cert.nilpotency_degree == 3


def test_certificate_requires_matching_degree():
    qp = triangle_qp(D=4)
    with pytest.raises(Exception):
        finite_dim_certificate(qp, max_degree=6)


def test_sphere_certificates():
    cert3 = finite_dim_certificate(sphere_qp(3, max_degree=8).qp)
    assert cert3.verdict == "FiniteDimensional" and cert3.nilpotency_degree <= 8
    assert cert3.dimension == sum(cert3.per_degree)


def test_every_top_degree_path_reduces_to_zero_sphere():
    sqp = sphere_qp(3, max_degree=8)
    basis = saturate_qp(sqp.qp)
    table = basis.table
    start = sum(table.degree_counts[:8])
    for idx in range(start, len(table.paths)):
        assert not basis.reduce_vector({idx: Fraction(1)})


def test_dimension_monotonic_in_truncation(corpus):
    for name, qp in corpus[:8]:
        D = qp.max_degree
        rel_deg = 0
        for e in jacobian_relations(qp).elements():
            for p in e.support():
                rel_deg = max(rel_deg, p.length)
        qp2 = QP(qp.quiver, Potential(qp.quiver, D + 1, qp.potential.terms(), qp.field), D + 1)
        c1 = saturate_qp(qp).standard_path_counts()
        c2 = saturate_qp(qp2).standard_path_counts()
        for d in range(0, max(0, D - rel_deg) + 1):
            assert c1[d] == c2[d], (name, d)


# -- cycle powers --------------------------------------------------------------------


def test_cycle_in_ideal_gives_zero_power():
    qp = triangle_qp(D=9)
    q = qp.quiver
    assert cycle_power_nonvanishing(qp, q.path(["a", "b", "c"])) == 0


def test_fig4_displayed_qp_powers_reach_bound():
    qp = fig4_qp(3, max_degree=12)
    basis = saturate_qp(qp)
    c4 = qp.quiver.path(["beta2*", "beta1*", "delta1", "delta2"])
    assert cycle_power_nonvanishing(qp, c4, basis=basis) == 3  # floor(12/4)
    assert certificate_from_basis(basis).verdict == "Inconclusive"


def test_cycle_power_validates_input():
    qp = triangle_qp(D=4)
    with pytest.raises(Exception):
        cycle_power_nonvanishing(qp, qp.quiver.path(["a", "b"]))


# -- independent oracle ----------------------------------------------------------------


def test_certificate_dimension_matches_dense_oracle(corpus):
    assert len(corpus) >= 20
    for name, qp in corpus:
        basis = saturate_qp(qp)
        engine_total = sum(basis.standard_path_counts())
        oracle_total = dense_quotient_dimension(qp)
        assert engine_total == oracle_total, name
        cert = certificate_from_basis(basis)
        if cert.verdict == "FiniteDimensional":
            assert cert.dimension == oracle_total, name


def test_finished_basis_is_safe_to_share_across_threads():
    from concurrent.futures import ThreadPoolExecutor

    sqp = sphere_qp(3, max_degree=6)
    basis = saturate_qp(sqp.qp)
    paths = basis.table.paths

    def job(seed):
        rng = random.Random(seed)
        return [
            basis.reduce(AlgebraElement.from_path(sqp.quiver, 6, rng.choice(paths)))
            for _ in range(30)
        ]

    with ThreadPoolExecutor(4) as ex:
        concurrent = list(ex.map(job, [1, 2, 3, 4]))
    assert concurrent == [job(s) for s in [1, 2, 3, 4]]


def test_membership_soundness_sampled_rows():
    """Basis rows lie in the span of explicit shift products (rank check)."""
    from conftest import walk_paths, naive_cyclic_derivative, gauss_rank

    qp = triangle_qp(D=4)
    basis = saturate_qp(qp)
    D = qp.max_degree
    quiver = qp.quiver
    arrows = {a.id: (a.source, a.target) for a in quiver.arrows}
    paths = walk_paths(quiver, D)
    col = {(s, t, ids): i for i, (s, t, ids) in enumerate(paths)}
    term_list = [(p.arrows, c) for p, c in qp.potential.items()]
    shift_rows = []
    for arrow_id, (asrc, atgt) in arrows.items():
        deriv = naive_cyclic_derivative(term_list, arrow_id, arrows)
        if not deriv:
            continue
        for (ps, pt, pids) in paths:
            if pt != atgt:
                continue
            for (qs, qt, qids) in paths:
                if qs != asrc:
                    continue
                row = {}
                for rest, coeff in deriv.items():
                    if len(pids) + len(rest) + len(qids) <= D:
                        key = col[(ps, qt, pids + rest + qids)]
                        row[key] = row.get(key, Fraction(0)) + Fraction(coeff)
                row = {k: v for k, v in row.items() if v}
                if row:
                    shift_rows.append(row)
    base_rank = gauss_rank(shift_rows)
    for row_elem in basis.row_elements():
        vec = {col[(p.source, p.target, p.arrows)]: Fraction(c) for p, c in row_elem.items()}
        assert gauss_rank(shift_rows + [vec]) == base_rank
