"""JSON interchange for quivers, algebra elements, QPs, and reports.

Serialization is deterministic: vertices and arrows are sorted by id,
element terms by the canonical path order, and dictionaries are dumped
with sorted keys, so build -> serialize -> parse -> serialize is
byte-identical.
"""

from __future__ import annotations

import json
from typing import Optional

from .algebra import AlgebraElement, Potential
from .fields import RATIONALS, field_from_spec, field_to_spec
from .qp import QP, PunctureScalars
from .quiver import Arrow, Quiver, vertex_key

FORMAT_QP = "qp/1"
FORMAT_QUIVER = "quiver/1"


class FormatError(ValueError):
    pass


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- quivers -------------------------------------------------------------------


def quiver_to_dict(quiver: Quiver) -> dict:
    return {
        "vertices": sorted(quiver.vertices, key=vertex_key),
        "arrows": [
            {"id": a.id, "src": a.source, "tgt": a.target}
            for a in sorted(quiver.arrows, key=lambda a: a.id)
        ],
    }


def quiver_from_dict(data: dict) -> Quiver:
    try:
        vertices = data["vertices"]
        arrows = [Arrow(str(a["id"]), a["src"], a["tgt"]) for a in data["arrows"]]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed quiver object: {exc}") from exc
    return Quiver(vertices, arrows)


# -- elements and potentials ---------------------------------------------------


def element_to_list(x: AlgebraElement) -> list:
    out = []
    for p in x.support():
        entry = {"coeff": x.field.format(x.coefficient(p)), "path": list(p.arrows)}
        if not p.arrows:
            entry["base_vertex"] = p.source
        out.append(entry)
    return out


def element_from_list(data: list, quiver: Quiver, max_degree: int, field=RATIONALS) -> AlgebraElement:
    terms = []
    for entry in data:
        try:
            coeff = field.coerce(entry["coeff"])
            ids = entry["path"]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed element term: {exc}") from exc
        if ids:
            path = quiver.path(ids)
        else:
            path = quiver.lazy_path(entry["base_vertex"])
        terms.append((path, coeff))
    return AlgebraElement(quiver, max_degree, terms, field)


def potential_to_list(potential: Potential) -> list:
    return element_to_list(potential.as_element())


def potential_from_list(data: list, quiver: Quiver, max_degree: int, field=RATIONALS) -> Potential:
    raw = element_from_list(data, quiver, max_degree, field)
    return Potential(quiver, max_degree, raw.terms(), field)


# -- scalar sets ---------------------------------------------------------------


def scalars_to_dict(scalars: Optional[PunctureScalars], field) -> Optional[dict]:
    if scalars is None:
        return None
    return {str(i): field.format(c) for i, c in scalars.values}


def scalars_from_dict(data: Optional[dict], field) -> Optional[PunctureScalars]:
    if data is None:
        return None
    return PunctureScalars.from_dict({int(k): v for k, v in data.items()}, field)


# -- QP documents --------------------------------------------------------------


def qp_to_dict(qp: QP, meta: Optional[dict] = None) -> dict:
    return {
        "format": FORMAT_QP,
        "meta": dict(qp.meta) if meta is None else meta,
        "field": field_to_spec(qp.field),
        "max_degree": qp.max_degree,
        "quiver": quiver_to_dict(qp.quiver),
        "potential": potential_to_list(qp.potential),
        "scalars": scalars_to_dict(qp.scalars, qp.field),
    }


def qp_from_dict(data: dict, max_degree: Optional[int] = None) -> QP:
    if data.get("format") != FORMAT_QP:
        raise FormatError(f"not a {FORMAT_QP} document")
    field = field_from_spec(data["field"])
    quiver = quiver_from_dict(data["quiver"])
    D = int(data["max_degree"]) if max_degree is None else max_degree
    declared = [entry for entry in data["potential"] if len(entry["path"]) > D]
    if declared:
        raise FormatError(
            f"max_degree {D} would drop {len(declared)} potential term(s); "
            "refusing to change the QP silently"
        )
    potential = potential_from_list(data["potential"], quiver, D, field)
    scalars = scalars_from_dict(data.get("scalars"), field)
    meta = data.get("meta") or {}
    return QP(quiver, potential, D, scalars, meta=tuple(sorted(meta.items())))


def quiver_doc_to_dict(quiver: Quiver, meta: Optional[dict] = None) -> dict:
    return {
        "format": FORMAT_QUIVER,
        "meta": meta or {},
        "quiver": quiver_to_dict(quiver),
    }


def load_quiver_doc(data: dict) -> Quiver:
    fmt = data.get("format")
    if fmt == FORMAT_QUIVER:
        return quiver_from_dict(data["quiver"])
    if fmt == FORMAT_QP:
        return quiver_from_dict(data["quiver"])
    if "vertices" in data and "arrows" in data:
        return quiver_from_dict(data)
    raise FormatError("document contains no quiver")
