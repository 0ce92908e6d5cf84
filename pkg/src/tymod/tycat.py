"""Tambara-Yamagami data ``TY(A, chi, tau)`` and its fusion ring."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .abelian import Element, FinAbGroup
from .errors import ValidationError
from .forms import Bicharacter, is_symmetric, symmetry_witness

M = "m"
Basis = Union[Element, str]


@dataclass(frozen=True)
class TYData:
    """``A``, a bicharacter ``chi`` and the sign of ``tau = +-1/sqrt|A|``."""

    A: FinAbGroup
    chi: Bicharacter
    tau_sign: int

    def __post_init__(self):
        if self.tau_sign not in (1, -1):
            raise ValidationError(f"tau sign must be +1 or -1, got {self.tau_sign!r}")
        if self.chi.group != self.A:
            raise ValidationError("chi is not defined on A")

    @property
    def tau(self) -> float:
        return self.tau_sign / math.sqrt(self.A.order)

    @property
    def tau_symbol(self) -> str:
        return "+" if self.tau_sign > 0 else "-"

    def checked(self) -> TYData:
        problems = validate(self)
        if problems:
            raise ValidationError("; ".join(problems))
        return self


def validate(ty: TYData) -> list[str]:
    """Empty when chi is symmetric and nondegenerate; otherwise diagnostics
    naming a witness pair or a kernel element."""
    out = []
    if not is_symmetric(ty.chi):
        a, b = symmetry_witness(ty.chi)
        out.append(f"chi is not symmetric: chi{a, b} = {ty.chi(a, b)} but chi{b, a} = {ty.chi(b, a)}")
    kernel = [x for x in ty.chi.adjoint.kernel.elements if any(x)]
    if kernel:
        out.append(f"chi is degenerate: kernel element {kernel[0]} pairs trivially with A")
    return out


class FusionElement(Counter):
    """A non-negative combination of the basis ``A + {m}``."""

    @classmethod
    def of(cls, *terms: Basis) -> FusionElement:
        return cls(terms)

    def __init__(self, data: Union[Iterable, Mapping, None] = None):
        super().__init__()
        if data is not None:
            self.update(data)
        if any(v < 0 for v in self.values()):
            raise ValueError("multiplicities must be non-negative")

    def __eq__(self, other) -> bool:
        return {k: v for k, v in self.items() if v} == {k: v for k, v in other.items() if v}

    __hash__ = None


def fuse(A: FinAbGroup, x: FusionElement, y: FusionElement) -> FusionElement:
    """Product in the TY fusion ring: ``g h = g+h``, ``g m = m g = m``, ``m m = sum_g g``."""
    out = FusionElement()
    everything = A.elements()
    for s, p in x.items():
        for t, q in y.items():
            if not p or not q:
                continue
            if s == M and t == M:
                for g in everything:
                    out[g] += p * q
            elif s == M or t == M:
                out[M] += p * q
            else:
                out[A.add(s, t)] += p * q
    return out


def fpdim(A: FinAbGroup, x: FusionElement) -> float:
    return sum(n * (math.sqrt(A.order) if s == M else 1.0) for s, n in x.items())
