"""The quiver-with-potential value type and puncture scalar sets."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Optional

from .algebra import AlgebraError, Potential
from .fields import RATIONALS
from .quiver import Quiver


class ScalarError(ValueError):
    pass


@dataclass(frozen=True)
class PunctureScalars:
    """Nonzero scalars indexed by puncture number; inverses appear in potentials."""

    values: tuple  # tuple of (index, scalar) pairs, index-sorted

    @classmethod
    def from_dict(cls, mapping: dict, field=RATIONALS) -> "PunctureScalars":
        items = []
        for i in sorted(mapping):
            c = field.coerce(mapping[i])
            if not c:
                raise ScalarError(f"puncture scalar x_{i} must be nonzero")
            items.append((int(i), c))
        return cls(tuple(items))

    @classmethod
    def ones(cls, count: int, field=RATIONALS) -> "PunctureScalars":
        return cls.from_dict({i: 1 for i in range(1, count + 1)}, field)

    @classmethod
    def random(cls, count: int, seed: int, field=RATIONALS) -> "PunctureScalars":
        rng = random.Random(seed)
        return cls.from_dict(
            {i: field.random_nonzero(rng) for i in range(1, count + 1)}, field
        )

    def __getitem__(self, i: int):
        for j, c in self.values:
            if j == i:
                return c
        raise KeyError(i)

    def as_dict(self) -> dict:
        return dict(self.values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class QP:
    """A quiver with potential at a fixed truncation degree."""

    quiver: Quiver
    potential: Potential
    max_degree: int
    scalars: Optional[PunctureScalars] = None
    meta: tuple = dc_field(default=(), compare=False)

    def __post_init__(self):
        if self.potential.quiver != self.quiver:
            raise AlgebraError("potential lives over a different quiver")
        if self.potential.max_degree != self.max_degree:
            raise AlgebraError("potential truncation differs from QP truncation")

    @property
    def field(self):
        return self.potential.field
