"""Degree-truncated elements of the complete path algebra, and potentials.

An :class:`AlgebraElement` is a finite map from paths to nonzero scalars,
truncated at a global degree bound ``D``: it represents a residue class
modulo the (D+1)-st power of the arrow ideal, and every product term of
length greater than ``D`` is discarded.  Elements are immutable values;
all arithmetic returns new instances.

A :class:`Potential` is supported on cycles, stored with one canonical
rotation representative per term.
"""

from __future__ import annotations

from typing import Optional

from .fields import RATIONALS
from .quiver import Path, Quiver, QuiverError, compose


class AlgebraError(ValueError):
    pass


def _check_compatible(x: "AlgebraElement", y: "AlgebraElement") -> None:
    if x.quiver != y.quiver:
        raise AlgebraError("elements live over different quivers")
    if x.max_degree != y.max_degree:
        raise AlgebraError(
            f"mismatched truncation degrees {x.max_degree} and {y.max_degree}"
        )
    if x.field != y.field:
        raise AlgebraError("elements use different coefficient fields")


class AlgebraElement:
    """Sparse element of the path algebra truncated at degree ``max_degree``."""

    __slots__ = ("quiver", "max_degree", "field", "_terms")

    def __init__(self, quiver: Quiver, max_degree: int, terms=None, field=RATIONALS):
        if max_degree < 0:
            raise AlgebraError("truncation degree must be >= 0")
        self.quiver = quiver
        self.max_degree = max_degree
        self.field = field
        clean: dict[Path, object] = {}
        if terms:
            for path, coeff in terms.items() if isinstance(terms, dict) else terms:
                if path.length > max_degree:
                    continue
                c = field.coerce(coeff)
                if not c:
                    continue
                prev = clean.get(path)
                total = c if prev is None else prev + c
                if total:
                    clean[path] = total
                elif prev is not None:
                    del clean[path]
        self._terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, quiver: Quiver, max_degree: int, field=RATIONALS) -> "AlgebraElement":
        return cls(quiver, max_degree, None, field)

    @classmethod
    def from_path(cls, quiver: Quiver, max_degree: int, path: Path, coeff=1, field=RATIONALS):
        return cls(quiver, max_degree, {path: coeff}, field)

    # -- inspection ----------------------------------------------------------

    def terms(self) -> dict[Path, object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[Path]:
        return sorted(self._terms, key=Path.sort_key)

    def coefficient(self, path: Path):
        return self._terms.get(path, self.field.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def leading_path(self) -> Optional[Path]:
        """The least support path in canonical order (lowest degree first)."""
        if not self._terms:
            return None
        return min(self._terms, key=Path.sort_key)

    def degree_component(self, d: int) -> "AlgebraElement":
        return AlgebraElement(
            self.quiver,
            self.max_degree,
            {p: c for p, c in self._terms.items() if p.length == d},
            self.field,
        )

    def min_degree(self) -> Optional[int]:
        if not self._terms:
            return None
        return min(p.length for p in self._terms)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _check_compatible(self, other)
        terms = dict(self._terms)
        for p, c in other._terms.items():
            cur = terms.get(p)
            total = c if cur is None else cur + c
            if total:
                terms[p] = total
            elif cur is not None:
                del terms[p]
        out = AlgebraElement.zero(self.quiver, self.max_degree, self.field)
        out._terms = terms
        return out

    def __neg__(self) -> "AlgebraElement":
        out = AlgebraElement.zero(self.quiver, self.max_degree, self.field)
        out._terms = {p: -c for p, c in self._terms.items()}
        return out

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, coeff) -> "AlgebraElement":
        c = self.field.coerce(coeff)
        out = AlgebraElement.zero(self.quiver, self.max_degree, self.field)
        if c:
            out._terms = {p: c * v for p, v in self._terms.items()}
        return out

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        """Concatenation product; non-composable pairs and overlong terms vanish."""
        _check_compatible(self, other)
        terms: dict[Path, object] = {}
        for p, cp in self._terms.items():
            for q, cq in other._terms.items():
                if p.target != q.source:
                    continue
                if p.length + q.length > self.max_degree:
                    continue
                pq = compose(p, q)
                cur = terms.get(pq)
                total = cp * cq if cur is None else cur + cp * cq
                if total:
                    terms[pq] = total
                elif cur is not None:
                    del terms[pq]
        out = AlgebraElement.zero(self.quiver, self.max_degree, self.field)
        out._terms = terms
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self.max_degree == other.max_degree
            and self.field == other.field
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.max_degree, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        bits = []
        for p in self.support():
            bits.append(f"{self.field.format(self._terms[p])}*{p!r}")
        return " + ".join(bits)


def add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x + y


def scale(coeff, x: AlgebraElement) -> AlgebraElement:
    return x.scale(coeff)


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


class Potential:
    """A cyclic element with rotation-normalized term keys.

    Two paths that are rotations of each other index the same term; the
    stored key is the canonical rotation.
    """

    __slots__ = ("quiver", "max_degree", "field", "_terms")

    def __init__(self, quiver: Quiver, max_degree: int, terms=None, field=RATIONALS):
        self.quiver = quiver
        self.max_degree = max_degree
        self.field = field
        clean: dict[Path, object] = {}
        if terms:
            for path, coeff in terms.items() if isinstance(terms, dict) else terms:
                if not path.is_cycle() or path.length == 0:
                    raise AlgebraError(f"potential term {path!r} is not a cycle")
                if path.length > max_degree:
                    continue
                key = quiver.cycle(path).path
                c = field.coerce(coeff)
                prev = clean.get(key)
                total = c if prev is None else prev + c
                if total:
                    clean[key] = total
                elif prev is not None:
                    del clean[key]
        self._terms = clean

    def terms(self) -> dict[Path, object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[Path]:
        return sorted(self._terms, key=Path.sort_key)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def coefficient(self, path: Path):
        key = self.quiver.cycle(path).path
        return self._terms.get(key, self.field.zero())

    def as_element(self) -> AlgebraElement:
        return AlgebraElement(self.quiver, self.max_degree, self._terms, self.field)

    def __add__(self, other: "Potential") -> "Potential":
        if self.quiver != other.quiver or self.max_degree != other.max_degree or self.field != other.field:
            raise AlgebraError("incompatible potentials")
        merged = dict(self._terms)
        out = Potential(self.quiver, self.max_degree, None, self.field)
        for p, c in other._terms.items():
            cur = merged.get(p)
            total = c if cur is None else cur + c
            if total:
                merged[p] = total
            elif cur is not None:
                del merged[p]
        out._terms = merged
        return out

    def scale(self, coeff) -> "Potential":
        c = self.field.coerce(coeff)
        out = Potential(self.quiver, self.max_degree, None, self.field)
        if c:
            out._terms = {p: c * v for p, v in self._terms.items()}
        return out

    def __eq__(self, other):
        if not isinstance(other, Potential):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self.max_degree == other.max_degree
            and self.field == other.field
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.max_degree, frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "Potential(0)"
        bits = [f"{self.field.format(c)}*{p!r}" for p, c in sorted(self._terms.items(), key=lambda t: t[0].sort_key())]
        return "Potential(" + " + ".join(bits) + ")"


def normalize_potential(raw: AlgebraElement) -> Potential:
    """Merge rotations of cyclic terms into canonical representatives.

    Raises if any supported path is not a cycle.  The cyclic derivative is
    invariant under this normalization.
    """
    return Potential(raw.quiver, raw.max_degree, raw.terms(), raw.field)


def cyclic_derivative(potential: Potential, arrow_id: str) -> AlgebraElement:
    """Cyclic derivative of a potential with respect to one arrow.

    On a cycle ``a1 ... ad`` the derivative deletes each occurrence of the
    arrow in turn and reads the remainder cyclically, so every result path
    runs from the arrow's target back to its source.
    """
    quiver = potential.quiver
    if not quiver.has_arrow(arrow_id):
        raise QuiverError(f"no arrow {arrow_id!r} in quiver")
    arrow = quiver.arrow(arrow_id)
    terms: dict[Path, object] = {}
    for cyc, coeff in potential.items():
        seq = cyc.arrows
        d = len(seq)
        for k in range(d):
            if seq[k] != arrow_id:
                continue
            rest = seq[k + 1 :] + seq[:k]
            if rest:
                rem = Path(arrow.target, arrow.source, rest)
            else:
                rem = Path(arrow.target, arrow.target, ())
            cur = terms.get(rem)
            total = coeff if cur is None else cur + coeff
            if total:
                terms[rem] = total
            elif cur is not None:
                del terms[rem]
    return AlgebraElement(quiver, potential.max_degree, terms, potential.field)


def substitute_element(x: AlgebraElement, images: dict[str, AlgebraElement]) -> AlgebraElement:
    """Apply an arrow substitution to a plain element, truncating products."""
    quiver = x.quiver
    D = x.max_degree
    field = x.field
    out = AlgebraElement.zero(quiver, D, field)
    for path, coeff in x.items():
        if not path.arrows:
            out = out + AlgebraElement.from_path(quiver, D, path, coeff, field)
            continue
        prod = None
        for aid in path.arrows:
            factor = images.get(aid)
            if factor is None:
                factor = AlgebraElement.from_path(quiver, D, quiver.arrow_path(aid), 1, field)
            prod = factor if prod is None else prod * factor
            if prod.is_zero():
                break
        out = out + prod.scale(coeff)
    return out


def substitute(potential: Potential, images: dict[str, AlgebraElement]) -> Potential:
    """Apply an arrow substitution to every term of a potential.

    ``images`` maps arrow ids to replacement elements with matching
    endpoints; arrows not listed map to themselves.  Products are truncated
    at the potential's degree bound.  Raises if an image has a term whose
    endpoints differ from the replaced arrow's.
    """
    quiver = potential.quiver
    D = potential.max_degree
    field = potential.field
    for aid, img in images.items():
        a = quiver.arrow(aid)
        for p in img.support():
            if p.source != a.source or p.target != a.target:
                raise AlgebraError(
                    f"substitution image for {aid!r} has term {p!r} with wrong endpoints"
                )
    out = Potential(quiver, D, None, field)
    acc: dict[Path, object] = {}
    for cyc, coeff in potential.items():
        factors = []
        for aid in cyc.arrows:
            if aid in images:
                factors.append(images[aid])
            else:
                factors.append(AlgebraElement.from_path(quiver, D, quiver.arrow_path(aid), 1, field))
        prod = factors[0]
        for f in factors[1:]:
            prod = prod * f
            if prod.is_zero():
                break
        for p, c in prod.items():
            if not p.is_cycle() or p.length == 0:
                raise AlgebraError("substitution broke cyclicity of a potential term")
            key = quiver.cycle(p).path
            cur = acc.get(key)
            total = coeff * c if cur is None else cur + coeff * c
            if total:
                acc[key] = total
            elif cur is not None:
                del acc[key]
    out._terms = acc
    return out
