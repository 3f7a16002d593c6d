"""The punctured-sphere QP family and its machine-checked identity suite.

``sphere_qp(n, ...)`` builds the quiver with 3n vertices and 5n arrows
coming from the standard triangulation of a sphere with n+2 punctures
(n >= 3): an oriented n-gon of ``alpha`` arrows between the vertices
``a1..an``, with a ``beta`` transit and a ``delta`` transit from ``a(i+1)``
back to ``ai`` through ``bi`` and ``di``.  Its potential is

    x(n+1) * alpha1...alphan
  + x(n+2) * delta(2n-1) delta(2n) ... delta1 delta2
  + sum_i           alpha_i beta(2i-1) beta(2i)
  + sum_i (-1/x_i) * alpha_i delta(2i-1) delta(2i)

for one nonzero scalar per puncture.  The identity suite checks the
relations this potential forces in the quotient algebra: proportionality
of the mixed beta/delta quartic words, the vanishing of mixed alpha/beta
words, and the classification of the surviving beta-free words of
length 5.  Scalars on the right-hand sides are solved for by the engine
and reported next to the reference values rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import AlgebraElement, Potential
from .fields import RATIONALS
from .jacobian import IdealBasis, saturate_qp
from .qp import QP, PunctureScalars, ScalarError
from .quiver import Arrow, Quiver

# -- naming ------------------------------------------------------------------


def _wrap(i: int, n: int) -> int:
    return (i - 1) % n + 1


def vertex_a(i: int, n: int) -> str:
    return f"a{_wrap(i, n)}"


def vertex_b(i: int, n: int) -> str:
    return f"b{_wrap(i, n)}"


def vertex_d(i: int, n: int) -> str:
    return f"d{_wrap(i, n)}"


def alpha(i: int, n: int) -> str:
    return f"alpha{_wrap(i, n)}"


def beta(j: int, n: int) -> str:
    return f"beta{(j - 1) % (2 * n) + 1}"


def delta(j: int, n: int) -> str:
    return f"delta{(j - 1) % (2 * n) + 1}"


# -- construction -------------------------------------------------------------


def sphere_quiver(n: int) -> Quiver:
    """The 3n-vertex, 5n-arrow quiver of the (n+2)-punctured sphere."""
    if n < 3:
        raise ScalarError("sphere family needs n >= 3 (at least 5 punctures)")
    vertices = (
        [f"a{i}" for i in range(1, n + 1)]
        + [f"b{i}" for i in range(1, n + 1)]
        + [f"d{i}" for i in range(1, n + 1)]
    )
    arrows = []
    for i in range(1, n + 1):
        nxt = _wrap(i + 1, n)
        arrows.append(Arrow(f"alpha{i}", f"a{i}", f"a{nxt}"))
        arrows.append(Arrow(f"beta{2 * i - 1}", f"a{nxt}", f"b{i}"))
        arrows.append(Arrow(f"beta{2 * i}", f"b{i}", f"a{i}"))
        arrows.append(Arrow(f"delta{2 * i - 1}", f"a{nxt}", f"d{i}"))
        arrows.append(Arrow(f"delta{2 * i}", f"d{i}", f"a{i}"))
    return Quiver(vertices, arrows)


def big_delta_cycle_ids(n: int) -> tuple[str, ...]:
    """delta(2n-1) delta(2n) delta(2n-3) delta(2n-2) ... delta1 delta2."""
    ids = []
    for i in range(n, 0, -1):
        ids.append(f"delta{2 * i - 1}")
        ids.append(f"delta{2 * i}")
    return tuple(ids)


def sphere_potential(n: int, scalars: PunctureScalars, max_degree: int, field=RATIONALS) -> Potential:
    quiver = sphere_quiver(n)
    if len(scalars) != n + 2:
        raise ScalarError(f"need {n + 2} puncture scalars, got {len(scalars)}")
    one = field.one()
    terms = []
    alpha_ids = tuple(f"alpha{i}" for i in range(1, n + 1))
    terms.append((quiver.path(alpha_ids), scalars[n + 1]))
    terms.append((quiver.path(big_delta_cycle_ids(n)), scalars[n + 2]))
    for i in range(1, n + 1):
        terms.append((quiver.path((alpha(i, n), beta(2 * i - 1, n), beta(2 * i, n))), one))
        terms.append(
            (
                quiver.path((alpha(i, n), delta(2 * i - 1, n), delta(2 * i, n))),
                -(one / scalars[i]),
            )
        )
    return Potential(quiver, max_degree, terms, field)


@dataclass(frozen=True)
class SphereQP:
    n: int
    qp: QP
    scalars: PunctureScalars

    @property
    def quiver(self) -> Quiver:
        return self.qp.quiver

    @property
    def potential(self) -> Potential:
        return self.qp.potential


def sphere_qp(n: int, scalars: Optional[PunctureScalars] = None, max_degree: Optional[int] = None, field=RATIONALS) -> SphereQP:
    """Sphere QP for n >= 3; default scalars are all ones, default D = 2n+4."""
    if n < 3:
        raise ScalarError("sphere family needs n >= 3 (at least 5 punctures)")
    if scalars is None:
        scalars = PunctureScalars.ones(n + 2, field)
    D = 2 * n + 4 if max_degree is None else max_degree
    if D < 2 * n:
        raise ScalarError(f"max_degree {D} would truncate the length-2n potential term")
    pot = sphere_potential(n, scalars, D, field)
    return SphereQP(n, QP(pot.quiver, pot, D, scalars), scalars)


def primitive_sphere_qp(
    n: int,
    mu: Optional[dict] = None,
    lam: Optional[dict] = None,
    alpha_coeff=1,
    max_degree: Optional[int] = None,
    field=RATIONALS,
) -> QP:
    """The primitive potential on the sphere quiver: one term per chordless cycle.

    ``mu[i]`` weights the beta triangle at i, ``lam[i]`` the delta triangle,
    ``alpha_coeff`` the long alpha cycle; all default to 1 and must be nonzero.
    """
    quiver = sphere_quiver(n)
    D = 2 * n + 4 if max_degree is None else max_degree
    mu = {i: 1 for i in range(1, n + 1)} if mu is None else mu
    lam = {i: 1 for i in range(1, n + 1)} if lam is None else lam
    terms = []
    for i in range(1, n + 1):
        cm = field.coerce(mu[i])
        cl = field.coerce(lam[i])
        if not cm or not cl:
            raise ScalarError("primitive potential coefficients must be nonzero")
        terms.append((quiver.path((alpha(i, n), beta(2 * i - 1, n), beta(2 * i, n))), cm))
        terms.append((quiver.path((alpha(i, n), delta(2 * i - 1, n), delta(2 * i, n))), cl))
    ca = field.coerce(alpha_coeff)
    if not ca:
        raise ScalarError("primitive potential coefficients must be nonzero")
    terms.append((quiver.path(tuple(f"alpha{i}" for i in range(1, n + 1))), ca))
    pot = Potential(quiver, D, terms, field)
    return QP(quiver, pot, D)


def fig4_quiver(n: int) -> Quiver:
    """The sphere quiver after mutation at b1: alpha1, beta1, beta2 are gone,
    beta2*: a1 -> b1 and beta1*: b1 -> a2 take their place."""
    base = sphere_quiver(n)
    arrows = [a for a in base.arrows if a.id not in {"alpha1", "beta1", "beta2"}]
    arrows.append(Arrow("beta2*", "a1", "b1"))
    arrows.append(Arrow("beta1*", "b1", "a2"))
    return Quiver(base.vertices, arrows)


def fig4_qp(
    n: int,
    mu: Optional[dict] = None,
    lam: Optional[dict] = None,
    max_degree: int = 16,
    field=RATIONALS,
) -> QP:
    """The mutated-sphere QP with the i >= 2 triangle terms only.

    This is the displayed form of the mutated primitive potential, i.e. with
    the trivial-pair cross terms dropped; ``mutate`` on
    ``primitive_sphere_qp`` produces those extra terms (see README).
    """
    quiver = fig4_quiver(n)
    mu = {i: 1 for i in range(2, n + 1)} if mu is None else mu
    lam = {i: 1 for i in range(2, n + 1)} if lam is None else lam
    terms = []
    for i in range(2, n + 1):
        terms.append((quiver.path((alpha(i, n), beta(2 * i - 1, n), beta(2 * i, n))), field.coerce(mu[i])))
        terms.append((quiver.path((alpha(i, n), delta(2 * i - 1, n), delta(2 * i, n))), field.coerce(lam[i])))
    pot = Potential(quiver, max_degree, terms, field)
    return QP(quiver, pot, max_degree)


def fig5_quiver() -> Quiver:
    """The 6-vertex, 12-arrow quiver of the 4-punctured sphere (octahedron).

    Every face triangle is an oriented 3-cycle; antipodal vertex pairs are
    (1,5), (2,4), (3,6).
    """
    vertices = [1, 2, 3, 4, 5, 6]
    edges = [
        (1, 2), (2, 3), (3, 1),
        (1, 4), (4, 3), (3, 5),
        (5, 2), (2, 6), (6, 1),
        (5, 4), (4, 6), (6, 5),
    ]
    arrows = [Arrow(f"r{s}{t}", s, t) for s, t in edges]
    return Quiver(vertices, arrows)


# -- identity suite ------------------------------------------------------------


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    i: int
    holds: bool
    lhs_zero: bool
    rhs_zero: bool
    engine_scalar: Optional[str]
    reference_scalar: Optional[str]
    matches_reference: Optional[bool]

    def to_json_dict(self) -> dict:
        return {
            "identity": self.name,
            "i": self.i,
            "holds": self.holds,
            "lhs_zero": self.lhs_zero,
            "rhs_zero": self.rhs_zero,
            "engine_scalar": self.engine_scalar,
            "reference_scalar": self.reference_scalar,
            "matches_reference": self.matches_reference,
        }


@dataclass(frozen=True)
class IdentityReport:
    n: int
    max_degree: int
    checks: tuple[IdentityCheck, ...]
    mixed_vanishing_ok: bool
    mixed_failures: tuple[str, ...]
    all_identities_hold: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "D": self.max_degree,
            "identities": [c.to_json_dict() for c in self.checks],
            "mixed_alpha_beta_vanishing": self.mixed_vanishing_ok,
            "mixed_failures": list(self.mixed_failures),
            "all_identities_hold": self.all_identities_hold,
        }


def _proportionality(lhs: AlgebraElement, rhs: AlgebraElement):
    """(holds, scalar): scalar c with lhs == c*rhs, or both zero (c None)."""
    if lhs.is_zero() and rhs.is_zero():
        return True, None
    if lhs.is_zero() or rhs.is_zero():
        return False, None
    probe = rhs.leading_path()
    c = lhs.coefficient(probe)
    if not c:
        return False, None
    c = c / rhs.coefficient(probe)
    return (lhs == rhs.scale(c)), c


def identity_words(n: int, i: int) -> dict:
    """Arrow-id sequences of the five quotient identities at index i."""
    b, d, al = (lambda j: beta(j, n)), (lambda j: delta(j, n)), (lambda j: alpha(j, n))
    return {
        "id1": (
            (b(2 * i - 1), b(2 * i), d(2 * (i - 1) - 1), d(2 * (i - 1))),
            (b(2 * i - 1), b(2 * i), b(2 * (i - 1) - 1), b(2 * (i - 1))),
        ),
        "id2": (
            (b(2 * i - 1), b(2 * i), d(2 * (i - 1) - 1), d(2 * (i - 1))),
            (d(2 * i - 1), d(2 * i), b(2 * (i - 1) - 1), b(2 * (i - 1))),
        ),
        "id3": (
            (b(2 * i - 1), b(2 * i), d(2 * (i - 1) - 1), d(2 * (i - 1))),
            (d(2 * i - 1), d(2 * i), d(2 * (i - 1) - 1), d(2 * (i - 1))),
        ),
        "id4": (
            (al(i), d(2 * i - 1), d(2 * i)),
            (d(2 * (i - 1) - 1), d(2 * (i - 1)), al(i - 1)),
        ),
        # Both words of id5 must be zero; the second is stated with the
        # composable index alignment.
        "id5a": ((al(i), al(i + 1), d(2 * (i + 1) - 1)), None),
        "id5b": ((d(2 * (i - 1)), al(i - 1), al(i)), None),
    }


def _reference_scalars(scalars: PunctureScalars, n: int, i: int) -> dict:
    x = scalars
    im1 = _wrap(i - 1, n)
    return {
        "id1": x[im1],
        "id2": x[im1] / x[i],
        "id3": 1 / x[i],
        "id4": x[i] * x[im1],
    }


def verify_lemma_identities(
    n: int,
    scalars: Optional[PunctureScalars] = None,
    max_degree: int = 8,
    field=RATIONALS,
    basis: Optional[IdealBasis] = None,
) -> IdentityReport:
    """Check the five quotient identities and the mixed alpha/beta vanishing.

    Identities are verified as normal-form proportionalities with the scalar
    solved for by the engine; the reference scalar is reported alongside.
    ``max_degree`` must be at least 6.
    """
    if max_degree < 6:
        raise ScalarError("identity suite needs max_degree >= 6")
    if scalars is None:
        scalars = PunctureScalars.ones(n + 2, field)
    sqp = sphere_qp(n, scalars, max_degree, field)
    if basis is None:
        basis = saturate_qp(sqp.qp)
    quiver = sqp.quiver

    def nf(word: tuple[str, ...]) -> AlgebraElement:
        path = quiver.path(word)
        return basis.reduce(AlgebraElement.from_path(quiver, max_degree, path, 1, field))

    checks = []
    for i in range(1, n + 1):
        words = identity_words(n, i)
        refs = _reference_scalars(scalars, n, i)
        for name in ("id1", "id2", "id3", "id4"):
            lhs_word, rhs_word = words[name]
            nl, nr = nf(lhs_word), nf(rhs_word)
            holds, scalar = _proportionality(nl, nr)
            ref = refs[name]
            checks.append(
                IdentityCheck(
                    name,
                    i,
                    holds,
                    nl.is_zero(),
                    nr.is_zero(),
                    None if scalar is None else field.format(scalar),
                    field.format(ref),
                    None if scalar is None else scalar == ref,
                )
            )
        for name in ("id5a", "id5b"):
            word, _ = words[name]
            nl = nf(word)
            checks.append(
                IdentityCheck(name, i, nl.is_zero(), nl.is_zero(), True, None, "0", None)
            )

    mixed_failures = []
    alphas = {f"alpha{i}" for i in range(1, n + 1)}
    betas = {f"beta{j}" for j in range(1, 2 * n + 1)}
    for idx, p in enumerate(basis.table.paths):
        ids = set(p.arrows)
        if ids & alphas and ids & betas:
            if basis.reduce_vector({idx: field.one()}):
                mixed_failures.append(repr(p))
    ok_mixed = not mixed_failures
    all_hold = all(c.holds for c in checks)
    return IdentityReport(
        n, max_degree, tuple(checks), ok_mixed, tuple(mixed_failures), all_hold and ok_mixed
    )


def expected_length5_survivors(n: int, i: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """The two beta-free words of length 5 expected to survive at index i."""
    alpha_word = tuple(alpha(i + k, n) for k in range(5))
    delta_word = (
        delta(2 * i - 1, n),
        delta(2 * i, n),
        delta(2 * (i - 1) - 1, n),
        delta(2 * (i - 1), n),
        delta(2 * (i - 2) - 1, n),
    )
    return alpha_word, delta_word


def surviving_beta_free_paths(
    n: int,
    scalars: Optional[PunctureScalars] = None,
    max_degree: int = 8,
    field=RATIONALS,
    basis: Optional[IdealBasis] = None,
) -> dict[int, list[tuple[str, ...]]]:
    """Beta-free length-5 words starting with alpha_i or delta(2i-1) that
    have nonzero normal form, per index i."""
    if scalars is None:
        scalars = PunctureScalars.ones(n + 2, field)
    sqp = sphere_qp(n, scalars, max_degree, field)
    if basis is None:
        basis = saturate_qp(sqp.qp)
    quiver = sqp.quiver
    betas = {f"beta{j}" for j in range(1, 2 * n + 1)}
    out: dict[int, list[tuple[str, ...]]] = {i: [] for i in range(1, n + 1)}
    for idx, p in enumerate(basis.table.paths):
        if p.length != 5 or set(p.arrows) & betas:
            continue
        first = p.arrows[0]
        for i in range(1, n + 1):
            if first in (alpha(i, n), delta(2 * i - 1, n)):
                if basis.reduce_vector({idx: field.one()}):
                    out[i].append(p.arrows)
    return out


def verify_length_bound(
    n: int,
    max_degree: int,
    scalars: Optional[PunctureScalars] = None,
    field=RATIONALS,
) -> bool:
    """True iff every path of length exactly 2n+2 has zero normal form.

    Because the saturated span is closed under arrow multiplication, this is
    equivalent to the vanishing of the standard-path counts at every degree
    from 2n+2 up to the truncation.  Requires max_degree >= 2n+2.
    """
    bound = 2 * n + 2
    if max_degree < bound:
        raise ScalarError(f"need max_degree >= {bound}")
    sqp = sphere_qp(n, scalars, max_degree, field)
    basis = saturate_qp(sqp.qp)
    counts = basis.standard_path_counts()
    return all(counts[d] == 0 for d in range(bound, max_degree + 1))
