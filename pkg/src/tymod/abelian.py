"""Exact arithmetic on finite abelian groups.

A group is a fixed direct sum of cyclic factors ``Z_m1 + ... + Z_mk`` and an
element is a plain tuple of residues.  Everything that needs linear algebra
over the integers (kernels, images, preimages, quotients, subgroup bases) goes
through :func:`snf`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceeded, ConsistencyError

Element = tuple[int, ...]
Matrix = list[list[int]]

DEFAULT_BUDGET = 4096


class PhaseExp:
    """The root of unity ``exp(2 pi i q)``, stored as ``q`` reduced into [0, 1)."""

    __slots__ = ("_q",)

    def __init__(self, value: int | str | Fraction | PhaseExp = 0, den: int | None = None):
        if isinstance(value, PhaseExp):
            q = value._q
        elif den is not None:
            q = Fraction(value, den)
        else:
            q = Fraction(value)
        self._q = q - math.floor(q)

    @classmethod
    def parse(cls, text: str) -> PhaseExp:
        return cls(Fraction(text.strip()))

    @property
    def num(self) -> int:
        return self._q.numerator

    @property
    def den(self) -> int:
        return self._q.denominator

    @property
    def value(self) -> Fraction:
        return self._q

    def __add__(self, other: PhaseExp) -> PhaseExp:
        return PhaseExp(self._q + _q(other))

    __radd__ = __add__

    def __sub__(self, other: PhaseExp) -> PhaseExp:
        return PhaseExp(self._q - _q(other))

    def __rsub__(self, other: PhaseExp) -> PhaseExp:
        return PhaseExp(_q(other) - self._q)

    def __neg__(self) -> PhaseExp:
        return PhaseExp(-self._q)

    def __mul__(self, n: int) -> PhaseExp:
        if not isinstance(n, int):
            return NotImplemented
        return PhaseExp(self._q * n)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, PhaseExp):
            return self._q == other._q
        if isinstance(other, (int, Fraction)):
            return self._q == Fraction(other) % 1
        return NotImplemented

    def __lt__(self, other: PhaseExp) -> bool:
        return self._q < _q(other)

    def __hash__(self) -> int:
        return hash(self._q)

    def __bool__(self) -> bool:
        return self._q != 0

    def __str__(self) -> str:
        return str(self._q)

    def __repr__(self) -> str:
        return f"PhaseExp('{self._q}')"

    def to_complex(self) -> complex:
        angle = 2 * math.pi * float(self._q)
        return complex(math.cos(angle), math.sin(angle))


def _q(x) -> Fraction:
    return x._q if isinstance(x, PhaseExp) else Fraction(x)


ZERO = PhaseExp(0)


# --------------------------------------------------------------------------
# Smith normal form


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _smith(matrix: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    """Return ``(U, Uinv, D, V)`` with ``U @ matrix @ V == D``."""
    a = [list(map(int, row)) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    u = _identity(m)
    uinv = _identity(m)
    v = _identity(n)

    def add_row(dst, src, q):  # row_dst -= q * row_src
        if q == 0:
            return
        for k in range(n):
            a[dst][k] -= q * a[src][k]
        for k in range(m):
            u[dst][k] -= q * u[src][k]
        for k in range(m):
            uinv[k][src] += q * uinv[k][dst]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        if q == 0:
            return
        for k in range(m):
            a[k][dst] -= q * a[k][src]
        for k in range(n):
            v[k][dst] -= q * v[k][src]

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]
            for row in uinv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return u, uinv, a, v
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                add_row(i, t, a[i][t] // p)
                dirty |= a[i][t] != 0
            for j in range(t + 1, n):
                add_col(j, t, a[t][j] // p)
                dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            for k in range(n):
                a[t][k] = -a[t][k]
            for k in range(m):
                u[t][k] = -u[t][k]
            for k in range(m):
                uinv[k][t] = -uinv[k][t]
    return u, uinv, a, v


def snf(matrix: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form: unimodular ``U``, ``V`` and diagonal ``D = U @ matrix @ V``.

    The diagonal is non-negative with each entry dividing the next.
    """
    u, _, d, v = _smith(matrix)
    return u, d, v


def _diag(d: Matrix) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def _matvec(mat: Sequence[Sequence[int]], vec: Sequence[int]) -> list[int]:
    return [sum(r * x for r, x in zip(row, vec)) for row in mat]


def _integer_kernel(matrix: Matrix, ncols: int) -> list[list[int]]:
    """A basis of ``{x in Z^ncols : matrix @ x == 0}``."""
    if not matrix:
        return _identity(ncols)
    _, _, d, v = _smith(matrix)
    rank = sum(1 for x in _diag(d) if x)
    return [[v[k][j] for k in range(ncols)] for j in range(rank, ncols)]


# --------------------------------------------------------------------------
# Groups


@dataclass(frozen=True)
class FinAbGroup:
    """``Z_m1 + ... + Z_mk`` in an explicit basis.  Factors equal to 1 are dropped."""

    orders: tuple[int, ...]

    def __init__(self, orders: Iterable[int] = ()):
        orders = tuple(int(m) for m in orders)
        if any(m < 1 for m in orders):
            raise ValueError(f"cyclic factor orders must be positive, got {orders}")
        object.__setattr__(self, "orders", tuple(m for m in orders if m != 1))

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def exponent(self) -> int:
        return reduce(math.lcm, self.orders, 1)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def gen(self, i: int) -> Element:
        return tuple(int(i == j) for j in range(self.rank))

    @property
    def gens(self) -> list[Element]:
        return [self.gen(i) for i in range(self.rank)]

    def reduce(self, x: Iterable[int]) -> Element:
        return tuple(c % m for c, m in zip(x, self.orders))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.orders))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % m for a, b, m in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple(-a % m for a, m in zip(x, self.orders))

    def scale(self, n: int, x: Element) -> Element:
        return tuple(n * a % m for a, m in zip(x, self.orders))

    def contains(self, x) -> bool:
        return len(x) == self.rank and all(0 <= c < m for c, m in zip(x, self.orders))

    def element_order(self, x: Element) -> int:
        return reduce(math.lcm, (m // math.gcd(c, m) for c, m in zip(x, self.orders)), 1)

    def elements(self) -> list[Element]:
        """All elements in lexicographic order."""
        return list(itertools.product(*(range(m) for m in self.orders)))

    def direct_sum(self, other: FinAbGroup) -> FinAbGroup:
        return FinAbGroup(self.orders + other.orders)

    def invariant_factors(self) -> list[int]:
        if not self.orders:
            return []
        _, d, _ = snf([[m if i == j else 0 for j in range(self.rank)] for i, m in enumerate(self.orders)])
        return [x for x in _diag(d) if x != 1]

    def is_isomorphic(self, other: FinAbGroup) -> bool:
        return self.invariant_factors() == other.invariant_factors()

    def __str__(self) -> str:
        return "x".join(f"Z{m}" for m in self.orders) or "0"


# --------------------------------------------------------------------------
# Homomorphisms


@dataclass(frozen=True)
class Hom:
    """A homomorphism given by an integer matrix (target rank x source rank)."""

    source: FinAbGroup
    target: FinAbGroup
    matrix: tuple[tuple[int, ...], ...]

    def __init__(self, source: FinAbGroup, target: FinAbGroup, matrix: Sequence[Sequence[int]]):
        rows = tuple(
            tuple(int(matrix[i][j]) % target.orders[i] for j in range(source.rank))
            for i in range(target.rank)
        )
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", rows)
        for j, mj in enumerate(source.orders):
            column = [rows[i][j] for i in range(target.rank)]
            if any(target.reduce(mj * c for c in column)):
                raise ValueError(
                    f"ill-defined homomorphism: generator {j} has order {mj} but maps to {tuple(column)}"
                )

    @classmethod
    def from_images(cls, source: FinAbGroup, target: FinAbGroup, images: Sequence[Element]) -> Hom:
        """Build from the images of the source generators."""
        return cls(source, target, [[images[j][i] for j in range(source.rank)] for i in range(target.rank)])

    @classmethod
    def identity(cls, group: FinAbGroup) -> Hom:
        return cls(group, group, _identity(group.rank))

    def __call__(self, x: Element) -> Element:
        return self.target.reduce(_matvec(self.matrix, x))

    def compose(self, other: Hom) -> Hom:
        """``self o other``."""
        return Hom.from_images(other.source, self.target, [self(other(g)) for g in other.source.gens])

    def __add__(self, other: Hom) -> Hom:
        return Hom(self.source, self.target, [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def __sub__(self, other: Hom) -> Hom:
        return Hom(self.source, self.target, [[a - b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def is_identity(self) -> bool:
        return self.source == self.target and all(self(g) == g for g in self.source.gens)

    def _lifted(self) -> Matrix:
        # [F | diag(target orders)] : solutions over Z of F x + diag(n) y = t
        t = self.target
        return [
            list(self.matrix[i]) + [t.orders[i] if k == i else 0 for k in range(t.rank)]
            for i in range(t.rank)
        ]

    @cached_property
    def _smith_lifted(self):
        return _smith(self._lifted())

    @cached_property
    def kernel_basis(self) -> list[Element]:
        ncols = self.source.rank + self.target.rank
        basis = _integer_kernel(self._lifted(), ncols) if self.target.rank else _identity(self.source.rank)
        out = {self.source.reduce(vec[: self.source.rank]) for vec in basis}
        out.discard(self.source.zero)
        return sorted(out)

    @cached_property
    def kernel(self) -> Subgroup:
        return Subgroup.generated_by(self.source, self.kernel_basis)

    @cached_property
    def image(self) -> Subgroup:
        return Subgroup.generated_by(self.target, [self(g) for g in self.source.gens])

    def particular_preimage(self, t: Element) -> Optional[Element]:
        """Some ``x`` with ``self(x) == t`` (not canonical), or ``None``."""
        if self.target.rank == 0:
            return self.source.zero
        u, _, d, v = self._smith_lifted
        c = _matvec(u, t)
        diag = _diag(d)
        w = [0] * len(v)
        for i, ci in enumerate(c):
            di = diag[i] if i < len(diag) else 0
            if di == 0:
                if ci != 0:
                    return None
            elif ci % di:
                return None
            else:
                w[i] = ci // di
        z = _matvec(v, w)
        return self.source.reduce(z[: self.source.rank])


def solve_hom(f: Hom, t: Element) -> tuple[Optional[Element], list[Element]]:
    """Solve ``f(x) == t``.

    Returns the lexicographically least solution (``None`` when ``t`` is not
    in the image) together with a basis of ``ker f``.
    """
    if not f.target.contains(t):
        raise ValueError(f"{t} is not an element of {f.target}")
    x0 = f.particular_preimage(t)
    if x0 is None:
        return None, f.kernel_basis
    if f(x0) != t:
        raise ConsistencyError(f"preimage check failed: f({x0}) = {f(x0)} != {t}")
    best = min(f.source.add(x0, k) for k in f.kernel.elements)
    return best, f.kernel_basis


# --------------------------------------------------------------------------
# Subgroups


def span(group: FinAbGroup, gens: Iterable[Element]) -> frozenset[Element]:
    elems = {group.zero}
    for g in gens:
        g = group.reduce(g)
        if g in elems:
            continue
        layer = set()
        step = g
        while step not in elems:
            layer.add(step)
            step = group.add(step, g)
        elems |= {group.add(x, y) for x in elems for y in layer}
    return frozenset(elems)


def _greedy_generators(group: FinAbGroup, elements: Sequence[Element]) -> list[Element]:
    gens: list[Element] = []
    current = frozenset([group.zero])
    for x in elements:
        if x not in current:
            gens.append(x)
            current = span(group, gens)
            if len(current) == len(elements):
                break
    return gens


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of ``ambient`` with a canonical SNF basis.

    ``group`` is the abstract group ``Z_d1 + ... + Z_dr`` (``d_i | d_{i+1}``) and
    ``embed`` sends its generators to ``basis``.  Equality is elementwise.
    """

    ambient: FinAbGroup
    elements: tuple[Element, ...]
    basis: tuple[Element, ...] = field(repr=False)
    group: FinAbGroup = field(repr=False)
    embed: Hom = field(repr=False)

    @classmethod
    def generated_by(cls, ambient: FinAbGroup, gens: Iterable[Element]) -> Subgroup:
        return cls.from_elements(ambient, span(ambient, gens))

    @classmethod
    def from_elements(cls, ambient: FinAbGroup, elements: Iterable[Element]) -> Subgroup:
        return _subgroup_from_elements(ambient, tuple(sorted(elements)))

    @classmethod
    def whole(cls, group: FinAbGroup) -> Subgroup:
        return cls.generated_by(group, group.gens)

    @classmethod
    def trivial(cls, group: FinAbGroup) -> Subgroup:
        return cls.from_elements(group, [group.zero])

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset[Element]:
        return frozenset(self.elements)

    def __contains__(self, x: Element) -> bool:
        return x in self.element_set

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.ambient == other.ambient and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.ambient, self.elements))

    def __le__(self, other: Subgroup) -> bool:
        return self.element_set <= other.element_set

    @cached_property
    def _coord_table(self) -> dict[Element, Element]:
        return {self.embed(x): x for x in self.group.elements()}

    def coords(self, x: Element) -> Element:
        """Coordinates of an ambient element in the abstract basis."""
        try:
            return self._coord_table[x]
        except KeyError:
            raise ValueError(f"{x} is not in the subgroup") from None

    def pullback(self, other: Subgroup) -> Subgroup:
        """``other`` (contained in ``self``) as a subgroup of ``self.group``."""
        if not other <= self:
            raise ValueError("subgroup is not contained in this subgroup")
        return Subgroup.generated_by(self.group, [self.coords(b) for b in other.basis])

    def image_of(self, sub: Subgroup) -> Subgroup:
        """Push a subgroup of ``self.group`` forward into the ambient group."""
        return Subgroup.generated_by(self.ambient, [self.embed(b) for b in sub.basis])

    def coset_rep(self, x: Element) -> Element:
        return min(self.ambient.add(x, h) for h in self.elements)

    def __str__(self) -> str:
        return "{" + ", ".join("(" + ",".join(map(str, e)) + ")" for e in self.elements) + "}"


@lru_cache(maxsize=4096)
def _subgroup_from_elements(ambient: FinAbGroup, elements: tuple[Element, ...]) -> Subgroup:
    if not elements or elements[0] != ambient.zero:
        raise ValueError("a subgroup must contain the identity")
    gens = _greedy_generators(ambient, elements)
    if len(span(ambient, gens)) != len(elements):
        raise ValueError("element list is not closed under addition")
    k, n = len(gens), ambient.rank
    if k == 0:
        group = FinAbGroup(())
        return Subgroup(ambient, elements, (), group, Hom(group, ambient, [[] for _ in range(n)]))
    # relations among the generators: x with sum x_i g_i == 0 in the ambient group
    lifted = [[gens[j][i] for j in range(k)] + [ambient.orders[i] if c == i else 0 for c in range(n)] for i in range(n)]
    relations = [vec[:k] for vec in _integer_kernel(lifted, k + n)]
    u, uinv, d, _ = _smith([[relations[c][r] for c in range(len(relations))] for r in range(k)])
    diag = _diag(d) + [0] * (k - len(_diag(d)))
    if 0 in diag:
        raise ConsistencyError("subgroup relation lattice is not of full rank")
    basis, orders = [], []
    for i, di in enumerate(diag):
        if di == 1:
            continue
        combo = [uinv[r][i] for r in range(k)]
        basis.append(ambient.reduce(sum(c * g[t] for c, g in zip(combo, gens)) for t in range(n)))
        orders.append(di)
    group = FinAbGroup(orders)
    if group.order != len(elements):
        raise ConsistencyError(f"subgroup basis of order {group.order} for {len(elements)} elements")
    # readable canonical choices; both depend only on the element set
    if len(elements) == ambient.order and all(b % a == 0 for a, b in zip(ambient.orders, ambient.orders[1:])):
        basis, group = ambient.gens, ambient
    elif len(orders) == 1:
        basis = [min(x for x in elements if ambient.element_order(x) == orders[0])]
    embed = Hom.from_images(group, ambient, basis)
    return Subgroup(ambient, elements, tuple(basis), group, embed)


def enumerate_subgroups(group: FinAbGroup, budget: int = DEFAULT_BUDGET) -> list[Subgroup]:
    """Every subgroup exactly once, sorted by (order, element list)."""
    if group.order > budget:
        raise BudgetExceeded(f"|G| = {group.order} exceeds the budget of {budget}")
    elements = group.elements()
    trivial = frozenset([group.zero])
    seen = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for sub in frontier:
            for g in elements:
                if g in sub:
                    continue
                layer = []
                step = g
                while step not in sub:
                    layer.append(step)
                    step = group.add(step, g)
                bigger = frozenset(sub | {group.add(x, y) for x in sub for y in layer})
                if bigger not in seen:
                    seen.add(bigger)
                    nxt.append(bigger)
        frontier = nxt
    subs = [Subgroup.from_elements(group, s) for s in seen]
    return sorted(subs, key=lambda s: (s.order, s.elements))


# --------------------------------------------------------------------------
# Quotients and characters


@lru_cache(maxsize=4096)
def quotient(group: FinAbGroup, sub: Subgroup) -> tuple[FinAbGroup, Hom]:
    """``group / sub`` together with the projection."""
    if sub.ambient != group:
        raise ValueError("subgroup does not live in this group")
    n = group.rank
    rel = [[group.orders[i] if c == i else 0 for c in range(n)] + [b[i] for b in sub.basis] for i in range(n)]
    if n == 0:
        return FinAbGroup(()), Hom(group, FinAbGroup(()), [])
    u, _, d, _ = _smith(rel)
    diag = _diag(d)
    keep = [i for i, di in enumerate(diag) if di != 1]
    q = FinAbGroup([diag[i] for i in keep])
    proj = Hom(group, q, [u[i] for i in keep])
    if q.order * sub.order != group.order:
        raise ConsistencyError("quotient order mismatch")
    if proj.kernel != sub:
        raise ConsistencyError("quotient projection kernel differs from the subgroup")
    return q, proj


class Characters:
    """The dual group.  A character ``lam`` of ``Z_m1 + ...`` has coordinates
    ``lam_i`` in ``Z_mi`` and sends ``a`` to ``sum lam_i a_i / m_i``."""

    def __init__(self, base: FinAbGroup):
        self.base = base
        self.group = FinAbGroup(base.orders)

    def eval(self, lam: Element, a: Element) -> PhaseExp:
        return PhaseExp(sum(Fraction(l * x, m) for l, x, m in zip(lam, a, self.base.orders)))

    def from_values(self, values: Sequence[PhaseExp]) -> Element:
        """The character taking ``values[i]`` on the i-th generator."""
        out = []
        for v, m in zip(values, self.base.orders):
            scaled = v.value * m
            if scaled.denominator != 1:
                raise ValueError(f"value {v} is not an {m}-th root of unity")
            out.append(int(scaled) % m)
        return tuple(out)

    def from_function(self, fn) -> Element:
        return self.from_values([fn(g) for g in self.base.gens])

    def pullback(self, hom: Hom) -> Hom:
        """The dual map ``lam -> lam o hom`` from characters of ``hom.target``
        to characters of ``hom.source`` (requires ``hom.source == self.base``)."""
        src, tgt = hom.source, hom.target
        rows = [
            [src.orders[j] * hom.matrix[i][j] // tgt.orders[i] for i in range(tgt.rank)]
            for j in range(src.rank)
        ]
        return Hom(FinAbGroup(tgt.orders), self.group, rows)


def characters(group: FinAbGroup) -> Characters:
    return Characters(group)
