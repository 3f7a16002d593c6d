"""Exact-arithmetic engine for quivers with potentials.

Quivers, truncated path-algebra arithmetic over exact fields, cyclic
derivatives, Jacobian-ideal saturation with normal forms and
finite-dimensionality certificates, QP mutation, the punctured-sphere QP
family, and chordless-cycle analysis for primitive potentials.
"""

__version__ = "0.1.0"

from .algebra import (
    AlgebraElement,
    AlgebraError,
    Potential,
    add,
    cyclic_derivative,
    multiply,
    normalize_potential,
    scale,
    substitute,
    substitute_element,
)
from .cyclic import (
    AnalysisError,
    ArrowSequence,
    ConditionReport,
    antiparallel_shortest_paths,
    arrow_sequence_search,
    directed_nonintersecting_cycles,
    primitive_potential,
    theorem_condition_check,
)
from .fields import FpElement, PrimeField, RATIONALS, RationalField
from .jacobian import (
    CapExceeded,
    Certificate,
    IdealBasis,
    NormalForm,
    PathTable,
    RelationSet,
    certificate_from_basis,
    cycle_power_nonvanishing,
    finite_dim_certificate,
    jacobian_relations,
    normal_form,
    saturate,
    saturate_qp,
)
from .mutation import MutationError, MutationResult, mutate, premutate, reduce_qp
from .qp import QP, PunctureScalars, ScalarError
from .quiver import (
    Arrow,
    ChordlessCycle,
    Cycle,
    Path,
    Quiver,
    QuiverError,
    build_quiver,
    chordless_cycles,
    compose,
    enumerate_paths,
    is_cyclically_oriented,
    quivers_isomorphic,
)
from .sphere import (
    SphereQP,
    fig4_qp,
    fig4_quiver,
    fig5_quiver,
    primitive_sphere_qp,
    sphere_potential,
    sphere_qp,
    sphere_quiver,
    surviving_beta_free_paths,
    verify_lemma_identities,
    verify_length_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
