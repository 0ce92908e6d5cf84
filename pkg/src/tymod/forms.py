"""Bicharacters, alternating forms and the cocycles built from them.

Forms are matrices of :class:`PhaseExp` over the generator basis of a
:class:`FinAbGroup`: ``B(a, b) = sum_ij a_i b_j B[i][j]``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Mapping, Sequence, Union

from .abelian import (
    DEFAULT_BUDGET,
    Element,
    FinAbGroup,
    Hom,
    PhaseExp,
    Subgroup,
    _diag,
    _matvec,
    _smith,
    characters,
    enumerate_subgroups,
    quotient,
    solve_hom,
)
from .errors import ConsistencyError, ValidationError

GAUSS_TOL = 1e-9


def _phase_matrix(rows) -> tuple[tuple[PhaseExp, ...], ...]:
    return tuple(tuple(PhaseExp(x) for x in row) for row in rows)


@dataclass(frozen=True)
class Bicharacter:
    """A map ``G x G -> Q/Z`` additive in each argument."""

    group: FinAbGroup
    matrix: tuple[tuple[PhaseExp, ...], ...]

    def __init__(self, group: FinAbGroup, matrix: Sequence[Sequence]):
        mat = _phase_matrix(matrix)
        n = group.rank
        if len(mat) != n or any(len(row) != n for row in mat):
            raise ValidationError(f"form on {group} needs a {n}x{n} matrix, got {[len(r) for r in mat]} rows")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "matrix", mat)
        self._check_well_defined()

    def _check_well_defined(self) -> None:
        for i, mi in enumerate(self.group.orders):
            for j, mj in enumerate(self.group.orders):
                entry = self.matrix[i][j]
                bad = mi if entry * mi else mj if entry * mj else None
                if bad is not None:
                    raise ValidationError(
                        f"entry [{i}][{j}] = {entry} is not well defined: {bad} * {entry} is not 0 mod 1"
                    )

    @cached_property
    def _fractions(self) -> list[list[Fraction]]:
        return [[e.value for e in row] for row in self.matrix]

    def __call__(self, a: Element, b: Element) -> PhaseExp:
        m = self._fractions
        return PhaseExp(sum(a[i] * b[j] * m[i][j] for i in range(len(a)) if a[i] for j in range(len(b)) if b[j]))

    def transpose(self):
        n = self.group.rank
        return Bicharacter(self.group, [[self.matrix[j][i] for j in range(n)] for i in range(n)])

    @cached_property
    def adjoint(self) -> Hom:
        """``a -> B(a, -)`` as a homomorphism into the character group."""
        dual = characters(self.group)
        images = [dual.from_values([self(g, h) for h in self.group.gens]) for g in self.group.gens]
        return Hom.from_images(self.group, dual.group, images)

    def key(self) -> tuple:
        return tuple(tuple(e.value for e in row) for row in self.matrix)

    def __str__(self) -> str:
        return render_matrix(self.matrix)


class AlternatingForm(Bicharacter):
    """A bicharacter with ``xi(x, x) = 0`` for every ``x``."""

    def __init__(self, group: FinAbGroup, matrix: Sequence[Sequence]):
        super().__init__(group, matrix)
        n = group.rank
        for i in range(n):
            if self.matrix[i][i]:
                raise ValidationError(f"alternating form has nonzero diagonal entry [{i}][{i}]")
            for j in range(i):
                if self.matrix[i][j] != -self.matrix[j][i]:
                    raise ValidationError(f"alternating form is not antisymmetric at [{i}][{j}]")

    @classmethod
    def zero(cls, group: FinAbGroup) -> AlternatingForm:
        return cls(group, [[0] * group.rank for _ in range(group.rank)])


@dataclass(frozen=True)
class BilinearCocycle:
    """A bilinear (hence normalized) 2-cocycle, not necessarily symmetric."""

    group: FinAbGroup
    matrix: tuple[tuple[PhaseExp, ...], ...]

    def __init__(self, group: FinAbGroup, matrix: Sequence[Sequence]):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "matrix", _phase_matrix(matrix))
        Bicharacter._check_well_defined(self)

    _fractions = Bicharacter._fractions
    __call__ = Bicharacter.__call__


@dataclass(frozen=True)
class NuFunction:
    """A normalized function ``domain -> Q/Z`` stored as a table."""

    domain: FinAbGroup
    values: tuple[PhaseExp, ...]

    def __post_init__(self):
        if len(self.values) != self.domain.order:
            raise ValueError("table size does not match the domain")
        if self.values[0]:
            raise ValueError("nu must vanish at the identity")

    @classmethod
    def from_function(cls, domain: FinAbGroup, fn: Callable[[Element], PhaseExp]) -> NuFunction:
        return cls(domain, tuple(PhaseExp(fn(x)) for x in domain.elements()))

    @cached_property
    def table(self) -> dict[Element, PhaseExp]:
        return dict(zip(self.domain.elements(), self.values))

    def __call__(self, x: Element) -> PhaseExp:
        return self.table[x]

    def __add__(self, other: Union[NuFunction, Callable]) -> NuFunction:
        return NuFunction.from_function(self.domain, lambda x: self(x) + other(x))

    def key(self) -> tuple[Fraction, ...]:
        return tuple(v.value for v in self.values)

    def coboundary(self, a: Element, b: Element) -> PhaseExp:
        """``nu(a) + nu(b) - nu(a + b)``."""
        return self(a) + self(b) - self(self.domain.add(a, b))


# --------------------------------------------------------------------------
# Predicates


def bichar_eval(form: Bicharacter, a: Element, b: Element) -> PhaseExp:
    return form(a, b)


def is_symmetric(form: Bicharacter) -> bool:
    n = form.group.rank
    return all(form.matrix[i][j] == form.matrix[j][i] for i in range(n) for j in range(i))


def symmetry_witness(form: Bicharacter) -> tuple[Element, Element] | None:
    G = form.group
    for i in range(G.rank):
        for j in range(i):
            if form.matrix[i][j] != form.matrix[j][i]:
                return G.gen(i), G.gen(j)
    return None


def is_alternating(form: Bicharacter) -> bool:
    n = form.group.rank
    return all(not form.matrix[i][i] for i in range(n)) and all(
        form.matrix[i][j] == -form.matrix[j][i] for i in range(n) for j in range(i)
    )


def is_nondegenerate(form: Bicharacter) -> bool:
    return form.adjoint.kernel.order == 1


# --------------------------------------------------------------------------
# Subgroup operations


def perp(form: Bicharacter, sub: Subgroup) -> Subgroup:
    """``{a : form(a, s) = 0 for all s in sub}``."""
    if sub.ambient != form.group:
        raise ValueError("subgroup and form live on different groups")
    G = form.group
    return Subgroup.from_elements(G, [a for a in G.elements() if all(not form(a, s) for s in sub.basis)])


def radical(xi: Bicharacter) -> Subgroup:
    """Left kernel ``{h : xi(h, -) = 0}``."""
    return xi.adjoint.kernel


def restrict(form, sub: Subgroup):
    """The form pulled back to the abstract group of ``sub``."""
    b = sub.basis
    return type(form)(sub.group, [[form(x, y) for y in b] for x in b])


def descend(form, sub: Subgroup):
    """The induced form on ``form.group / sub``; ``sub`` must pair trivially on both sides."""
    G = form.group
    for k in sub.basis:
        for g in G.gens:
            if form(k, g) or form(g, k):
                raise ValidationError(f"{k} is not in the radical of the form")
    q, proj = quotient(G, sub)
    lifts = [solve_hom(proj, e)[0] for e in q.gens]
    return type(form)(q, [[form(x, y) for y in lifts] for x in lifts])


def lagrangians(form: Bicharacter, budget: int = DEFAULT_BUDGET) -> list[Subgroup]:
    """Subgroups with ``L = L^perp``."""
    return [L for L in enumerate_subgroups(form.group, budget) if perp(form, L) == L]


# --------------------------------------------------------------------------
# Cocycle classes as alternating forms


def alt_form(psi: BilinearCocycle) -> AlternatingForm:
    n = psi.group.rank
    return AlternatingForm(psi.group, [[psi.matrix[i][j] - psi.matrix[j][i] for j in range(n)] for i in range(n)])


def standard_cocycle(xi: AlternatingForm) -> BilinearCocycle:
    """Upper-triangular bilinear representative of the class with form ``xi``."""
    n = xi.group.rank
    return BilinearCocycle(xi.group, [[xi.matrix[i][j] if i < j else 0 for j in range(n)] for i in range(n)])


def alternating_forms(group: FinAbGroup) -> Iterator[AlternatingForm]:
    """All alternating forms; there are ``prod_{i<j} gcd(m_i, m_j)`` of them."""
    n = group.rank
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    ranges = [range(math.gcd(group.orders[i], group.orders[j])) for i, j in slots]
    for choice in itertools.product(*ranges):
        mat = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), c in zip(slots, choice):
            g = math.gcd(group.orders[i], group.orders[j])
            mat[i][j] = Fraction(c, g)
            mat[j][i] = -Fraction(c, g)
        yield AlternatingForm(group, mat)


def symmetric_forms(group: FinAbGroup) -> Iterator[Bicharacter]:
    n = group.rank
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    ranges = [range(math.gcd(group.orders[i], group.orders[j])) for i, j in slots]
    for choice in itertools.product(*ranges):
        mat = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), c in zip(slots, choice):
            mat[i][j] = mat[j][i] = Fraction(c, math.gcd(group.orders[i], group.orders[j]))
        yield Bicharacter(group, mat)


def metric_forms(group: FinAbGroup) -> list[Bicharacter]:
    """All nondegenerate symmetric bicharacters on ``group`` (basis dependent)."""
    return [f for f in symmetric_forms(group) if is_nondegenerate(f)]


# --------------------------------------------------------------------------
# Coboundary solver

CocycleTable = Union[Mapping[tuple[Element, Element], PhaseExp], Callable[[Element, Element], PhaseExp]]


@lru_cache(maxsize=256)
def _delta_system(group: FinAbGroup):
    """SNF of the linear map ``nu -> (nu(a) + nu(e_j) - nu(a + e_j))_{a, j}, nu(0)``."""
    elems = group.elements()
    index = {x: k for k, x in enumerate(elems)}
    rows, keys = [], []
    for a in elems:
        for j, e in enumerate(group.gens):
            row = [0] * len(elems)
            row[index[a]] += 1
            row[index[e]] += 1
            row[index[group.add(a, e)]] -= 1
            rows.append(row)
            keys.append((a, e))
    rows.append([1] + [0] * (len(elems) - 1))
    keys.append(None)
    u, _, d, v = _smith(rows)
    return elems, keys, u, _diag(d), v


def solve_coboundary(group: FinAbGroup, f: CocycleTable) -> NuFunction:
    """Find ``nu`` with ``nu(a) + nu(b) - nu(a + b) = f(a, b)`` and ``nu(0) = 0``.

    ``f`` must be a normalized symmetric 2-cocycle.  Among all solutions (a
    torsor under the characters) the lexicographically least table is returned.
    """
    fn = (lambda a, b: f[(a, b)]) if isinstance(f, Mapping) else f
    elems = group.elements()
    table = {(a, b): PhaseExp(fn(a, b)) for a in elems for b in elems}
    denom = math.lcm(1, *(v.den for v in table.values()))
    modulus = group.order * denom * 2
    ints = {k: v.num * (modulus // v.den) for k, v in table.items()}

    if ints[(group.zero, group.zero)]:
        raise ValidationError("f is not normalized: f(0, 0) != 0")
    for a in elems:
        for b in elems:
            if ints[(a, b)] != ints[(b, a)]:
                raise ValidationError(f"f is not symmetric: f{a, b} != f{b, a}")
    for a in elems:
        for b in elems:
            ab = group.add(a, b)
            for c in elems:
                lhs = ints[(a, b)] + ints[(ab, c)]
                rhs = ints[(b, c)] + ints[(a, group.add(b, c))]
                if (lhs - rhs) % modulus:
                    raise ValidationError(f"f fails the cocycle identity at {a, b, c}")

    _, keys, u, diag, v = _delta_system(group)
    rhs = [ints[k] if k is not None else 0 for k in keys]
    c = _matvec(u, rhs)
    w = [0] * len(elems)
    for i, ci in enumerate(c):
        di = diag[i] if i < len(diag) else 0
        g = math.gcd(di, modulus)
        if ci % g:
            raise ConsistencyError("coboundary system unsolvable for a symmetric cocycle")
        if di:
            w[i] = (ci // g) * pow(di // g, -1, modulus // g) % (modulus // g)
    n_vals = [x % modulus for x in _matvec(v, w)]
    nu0 = [PhaseExp(x, modulus) for x in n_vals]

    dual = characters(group)
    best = min(
        (tuple(n + dual.eval(lam, x) for n, x in zip(nu0, elems)) for lam in dual.group.elements()),
        key=lambda t: tuple(p.value for p in t),
    )
    nu = NuFunction(group, best)
    for a in elems:
        for b in elems:
            if nu.coboundary(a, b) != table[(a, b)]:
                raise ConsistencyError(f"coboundary check failed at {a, b}")
    return nu


# --------------------------------------------------------------------------
# Gauss sums


def gauss_sum(values: Sequence[PhaseExp]) -> complex:
    return sum((v.to_complex() for v in values), 0j)


def gauss_sign(values: Sequence[PhaseExp], norm_sq: int | None = None) -> int:
    """Sign (+1 / -1) of the real number ``sum exp(2 pi i v)``.

    The sum must be real with ``|sum|^2 = norm_sq`` (default: the number of
    values); anything else means the input is not a valid quadratic function.
    """
    total = gauss_sum(values)
    expected = math.sqrt(len(values) if norm_sq is None else norm_sq)
    if abs(total.imag) >= GAUSS_TOL or abs(abs(total.real) - expected) >= GAUSS_TOL:
        raise ConsistencyError(
            f"Gauss sum {total:.12g} is not real of magnitude {expected:.12g}: invalid nu"
        )
    return 1 if total.real > 0 else -1


# --------------------------------------------------------------------------
# Text format: "a,b;c,d" row-major, entries p/q


def parse_matrix(text: str) -> list[list[PhaseExp]]:
    text = text.strip()
    if not text:
        return []
    rows = []
    for r, row in enumerate(text.split(";")):
        entries = []
        for c, entry in enumerate(row.split(",")):
            try:
                entries.append(PhaseExp.parse(entry))
            except (ValueError, ZeroDivisionError):
                raise ValidationError(f"bad matrix entry {entry!r} at row {r}, column {c}") from None
        rows.append(entries)
    return rows


def render_matrix(matrix: Sequence[Sequence[PhaseExp]]) -> str:
    return ";".join(",".join(str(e) for e in row) for row in matrix)
