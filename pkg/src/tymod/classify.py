"""Module categories over ``TY(A, chi, tau)``.

A ``Vec_A`` module category is a pair ``(H, xi)`` with ``xi`` an alternating
form on ``H`` standing for a class in ``H^2(H, k*)``.  The grading element
``sigma`` permutes these pairs.  Size-two orbits induce up to one ``TY``-module
category each; a fixed pair carries ``TY``-module structures parameterized by
an involution ``s`` of ``H / H^perp`` and classes of functions ``nu``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

from .abelian import (
    DEFAULT_BUDGET,
    Element,
    FinAbGroup,
    Hom,
    PhaseExp,
    Subgroup,
    characters,
    enumerate_subgroups,
    quotient,
    solve_hom,
)
from .errors import ConsistencyError, ValidationError
from .forms import (
    AlternatingForm,
    Bicharacter,
    BilinearCocycle,
    NuFunction,
    alternating_forms,
    descend,
    gauss_sign,
    lagrangians,
    perp,
    radical,
    restrict,
    solve_coboundary,
    standard_cocycle,
)
from .tycat import TYData

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class VecAPair:
    """The ``Vec_A`` module category ``M(H, psi)``, keyed by ``xi = alt(psi)``."""

    H: Subgroup
    xi: AlternatingForm

    def __post_init__(self):
        if self.xi.group != self.H.group:
            raise ValidationError("xi must be a form on the abstract group of H")

    @cached_property
    def psi(self) -> BilinearCocycle:
        return standard_cocycle(self.xi)

    def key(self) -> tuple:
        return (self.H.order, self.H.elements, self.xi.key())

    def __lt__(self, other: VecAPair) -> bool:
        return self.key() < other.key()

    def __str__(self) -> str:
        return f"M({self.H}, xi=[{self.xi}])"


def all_pairs(A: FinAbGroup, budget: int = DEFAULT_BUDGET) -> list[VecAPair]:
    return sorted(VecAPair(H, xi) for H in enumerate_subgroups(A, budget) for xi in alternating_forms(H.group))


# --------------------------------------------------------------------------
# The sigma action


def t_map(ty: TYData, pair: VecAPair) -> Callable[[Element], Element]:
    """``a -> t_a`` for ``a`` in ``Rad(xi)^perp``: the least ``t`` in ``H`` (abstract
    coordinates) with ``xi(t, h) = chi(a, h)`` for every ``h`` in ``H``."""
    H = pair.H
    dual = characters(H.group)
    adjoint = pair.xi.adjoint
    cache: dict[Element, Element] = {}

    def t(a: Element) -> Element:
        if a not in cache:
            target = dual.from_values([ty.chi(a, h) for h in H.basis])
            x, _ = solve_hom(adjoint, target)
            if x is None:
                raise ConsistencyError(f"chi({a}, -) restricted to H is not of the form xi(t, -)")
            cache[a] = x
        return cache[a]

    return t


def sigma_act(ty: TYData, pair: VecAPair) -> VecAPair:
    """``sigma . M(H, psi) = M(Rad(psi)^perp, psi~)`` with ``psi~(a, b) = psi(t_b, t_a)``."""
    rad = pair.H.image_of(radical(pair.xi))
    new_h = perp(ty.chi, rad)
    t = t_map(ty, pair)
    ts = [t(g) for g in new_h.basis]
    psi = pair.psi
    n = len(ts)
    mat = [[psi(ts[j], ts[i]) - psi(ts[i], ts[j]) for j in range(n)] for i in range(n)]
    return VecAPair(new_h, AlternatingForm(new_h.group, mat))


@dataclass(frozen=True)
class FixedData:
    """Everything derived from a sigma-fixed pair: ``Hbar = H / H^perp``, the
    induced forms there and the involution ``s``."""

    pair: VecAPair
    h_perp: Subgroup
    hbar: FinAbGroup
    proj: Hom
    chibar: Bicharacter
    xibar: AlternatingForm
    s: Hom

    @cached_property
    def psibar(self) -> BilinearCocycle:
        return standard_cocycle(self.xibar)

    @cached_property
    def fixed_points(self) -> list[Element]:
        return [a for a in self.hbar.elements() if self.s(a) == a]

    @cached_property
    def norm_subgroup(self) -> Subgroup:
        """``{a + s(a)}``."""
        G = self.hbar
        return Subgroup.generated_by(G, [G.add(a, self.s(a)) for a in G.gens])

    def twist(self, a: Element, b: Element) -> PhaseExp:
        """``psi(a, b) - psi(s b, s a)``, the right side of the coboundary equation."""
        s = self.s
        return self.psibar(a, b) - self.psibar(s(b), s(a))


def fixed_data(ty: TYData, pair: VecAPair) -> Optional[FixedData]:
    H = pair.H
    h_perp = perp(ty.chi, H)
    if not h_perp <= H:
        return None
    if H.image_of(radical(pair.xi)) != h_perp:
        return None
    k = H.pullback(h_perp)
    hbar, proj = quotient(H.group, k)
    chibar = descend(restrict(ty.chi, H), k)
    xibar = descend(pair.xi, k)
    dual = characters(hbar)
    images = []
    for e in hbar.gens:
        x, _ = solve_hom(xibar.adjoint, dual.from_values([chibar(e, b) for b in hbar.gens]))
        if x is None:
            raise ConsistencyError("descended form is degenerate on H / H^perp")
        images.append(x)
    try:
        s = Hom.from_images(hbar, hbar, images)
    except ValueError as exc:
        raise ConsistencyError(f"s is not a homomorphism: {exc}") from None
    if not s.compose(s).is_identity():
        return None
    return FixedData(pair, h_perp, hbar, proj, chibar, xibar, s)


def is_sigma_fixed(ty: TYData, pair: VecAPair) -> Optional[Hom]:
    """The involution ``s`` of ``H / H^perp`` when ``sigma`` fixes the pair."""
    fd = fixed_data(ty, pair)
    return None if fd is None else fd.s


# --------------------------------------------------------------------------
# nu classes


@dataclass(frozen=True)
class NuClass:
    nu: NuFunction
    sign: int
    size: int


@dataclass(frozen=True)
class NuSolution:
    """All classes of solutions before and after the sign filter."""

    fixed: FixedData
    tau_sign: int
    particular: NuFunction
    presign_solvable: bool
    all_classes: tuple[NuClass, ...]
    torsor_size: int
    equivalence_size: int

    @property
    def s(self) -> Hom:
        return self.fixed.s

    @property
    def classes(self) -> list[NuClass]:
        return [c for c in self.all_classes if c.sign == self.tau_sign]

    def count(self, sign: int) -> int:
        return sum(1 for c in self.all_classes if c.sign == sign)


def solve_nu(ty: TYData, pair: VecAPair, s: Optional[Hom] = None, particular: Optional[NuFunction] = None) -> NuSolution:
    """Classes of ``nu`` on ``Hbar`` with ``delta nu = psi(a,b) - psi(s b, s a)``,
    ``nu(a) + nu(s a) = 0`` and Gauss sign over the ``s``-fixed points equal to
    ``sign(tau)``, modulo ``nu ~ nu + eta - eta o s``.

    The solutions of the first equation form a torsor ``nu0 + characters``; the
    second is linear in the character, and the equivalence is a subgroup, so
    the whole computation is character linear algebra.
    """
    fd = fixed_data(ty, pair)
    if fd is None:
        raise ValidationError(f"{pair} is not sigma-fixed")
    if s is not None and s != fd.s:
        raise ValidationError("s does not match the involution determined by psi")
    hb, s = fd.hbar, fd.s
    nu0 = particular if particular is not None else solve_coboundary(hb, fd.twist)
    elems = hb.elements()
    dual = characters(hb)

    def g(a):
        return nu0(a) + nu0(s(a))

    for a in elems:
        for b in elems:
            if g(hb.add(a, b)) != g(a) + g(b):
                raise ConsistencyError("nu0 + nu0 o s is not a character")
    gamma = dual.from_function(g)
    one = Hom.identity(hb)
    plus = dual.pullback(one + s)
    minus = dual.pullback(one - s)
    lam0, _ = solve_hom(plus, dual.group.neg(gamma))
    if lam0 is None:
        return NuSolution(fd, ty.tau_sign, nu0, False, (), 0, minus.image.order)

    norm_sq = len(fd.fixed_points) * fd.norm_subgroup.order
    ker, im = plus.kernel, minus.image
    seen: set[Element] = set()
    classes = []
    for k in ker.elements:
        if k in seen:
            continue
        coset = [dual.group.add(k, i) for i in im.elements]
        seen.update(coset)
        members = []
        for c in coset:
            lam = dual.group.add(lam0, c)
            members.append(NuFunction(hb, tuple(nu0(x) + dual.eval(lam, x) for x in elems)))
        rep = min(members, key=NuFunction.key)
        sign = gauss_sign([rep(a) for a in fd.fixed_points], norm_sq)
        classes.append(NuClass(rep, sign, len(coset)))
    classes.sort(key=lambda c: c.nu.key())
    return NuSolution(fd, ty.tau_sign, nu0, True, tuple(classes), ker.order, im.order)


def check_nu(fd: FixedData, nu: NuFunction) -> bool:
    """The coboundary and twist conditions, evaluated directly."""
    hb, s = fd.hbar, fd.s
    elems = hb.elements()
    return all(nu.coboundary(a, b) == fd.twist(a, b) for a in elems for b in elems) and all(
        not (nu(a) + nu(s(a))) for a in elems
    )


# --------------------------------------------------------------------------
# Fiber functors and the (s, mu) description


@dataclass(frozen=True)
class TambaraCount:
    count: int
    by_sign: dict
    quotient_type: tuple[int, ...]


def tambara_cross_check(ty: TYData, pair: VecAPair) -> TambaraCount:
    """Count quadratic maps ``mu`` on ``Hbar^s / Hbar_s`` refining the induced
    form, split by the sign of their Gauss sum."""
    if pair.H != Subgroup.whole(ty.A):
        raise ValidationError("the (s, mu) description needs H = A")
    fd = fixed_data(ty, pair)
    if fd is None:
        raise ValidationError(f"{pair} is not sigma-fixed")
    hb, chibar = fd.hbar, fd.chibar
    fixed = Subgroup.from_elements(hb, fd.fixed_points)
    norm = fd.norm_subgroup
    if not norm <= fixed:
        raise ConsistencyError("a + s(a) is not s-fixed")
    v, proj = quotient(fixed.group, fixed.pullback(norm))
    lift = {x: fixed.embed(solve_hom(proj, x)[0]) for x in v.elements()}

    def form(x, y):
        return chibar(lift[x], lift[y])

    for x in v.elements():
        for y in v.elements():
            for n in norm.elements:
                if chibar(hb.add(lift[x], n), lift[y]) != form(x, y):
                    raise ConsistencyError("induced form on Hbar^s / Hbar_s is not well defined")
    if any(m != 2 for m in v.orders):
        raise ConsistencyError(f"Hbar^s / Hbar_s = {v} is not an F2-vector space")

    by_sign = {1: 0, -1: 0}
    quarter = [PhaseExp(k, 4) for k in range(4)]
    elems = v.elements()
    for choice in _product(quarter, v.rank):
        mu = _extend_quadratic(v, choice, form)
        if mu is None:
            continue
        by_sign[gauss_sign([mu[x] for x in elems], len(elems))] += 1
    return TambaraCount(by_sign[ty.tau_sign], by_sign, v.orders)


def _product(values, n):
    if n == 0:
        yield ()
        return
    for head in values:
        for rest in _product(values, n - 1):
            yield (head,) + rest


def _extend_quadratic(v: FinAbGroup, on_gens, form) -> Optional[dict]:
    """Extend generator values by ``mu(x + e) = mu(x) + mu(e) - form(x, e)``;
    ``None`` when the result is inconsistent."""
    mu = {v.zero: PhaseExp(0)}
    frontier = [v.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for e, val in zip(v.gens, on_gens):
                y = v.add(x, e)
                if y not in mu:
                    mu[y] = mu[x] + val - form(x, e)
                    nxt.append(y)
        frontier = nxt
    elems = v.elements()
    for a in elems:
        for b in elems:
            if mu[a] + mu[b] - mu[v.add(a, b)] != form(a, b):
                return None
    return mu


# --------------------------------------------------------------------------
# Invertible bimodules


@dataclass(frozen=True)
class EGroup:
    """``E = (A + Hhat) / <(h, -xi(h, -))>``; elements are also written as
    canonical pairs (coset representative of ``H`` in ``A``, character of ``H``)."""

    pair: VecAPair
    presentation: FinAbGroup
    relations: tuple[Element, ...]
    group: FinAbGroup
    proj: Hom
    pairs: dict = field(repr=False)
    sigma: Optional[Hom] = None

    @property
    def snf_type(self) -> list[int]:
        return self.group.invariant_factors()

    def to_e(self, a: Element, lam: Element) -> Element:
        return self.proj(tuple(a) + tuple(lam))


def e_group(ty: TYData, pair: VecAPair) -> EGroup:
    A, H = ty.A, pair.H
    hd = characters(H.group)
    pres = A.direct_sum(hd.group)
    rels = [tuple(H.embed(g)) + hd.group.neg(pair.xi.adjoint(g)) for g in H.group.gens]
    E, proj = quotient(pres, Subgroup.generated_by(pres, rels))
    pairs = {}
    for a in sorted({H.coset_rep(x) for x in A.elements()}):
        for lam in hd.group.elements():
            e = proj(a + lam)
            if e in pairs:
                raise ConsistencyError(f"canonical pairs {pairs[e]} and {(a, lam)} coincide in E")
            pairs[e] = (a, lam)
    if len(pairs) != E.order or E.order != A.order:
        raise ConsistencyError(f"|E| = {E.order}, expected |A| = {A.order}")
    return EGroup(pair, pres, tuple(rels), E, proj, pairs)


@dataclass(frozen=True)
class SigmaOnE:
    egroup: EGroup
    sigma: Hom
    variant: str
    obstruction: Element
    obstruction_trivial: bool


_VARIANTS = ("a_j", "a_i")


def sigma_on_e(ty: TYData, pair: VecAPair, nu: Optional[NuFunction] = None) -> SigmaOnE:
    """The action of ``sigma`` on ``E`` for a fixed pair and the class of the
    second obstruction in ``E^sigma / (1 + sigma) E``.

    ``sigma(a_i, lam) = (a_j, mu)`` with ``a_j`` the representative satisfying
    ``chi(a_j, -) = -lam`` on ``H^perp`` and
    ``mu(h) = -chi(a_i, h) + lam(t_h) + chi(a_j, t_h)``.  The obstruction is the
    character ``h -> nu(h) + nu(t_h)`` for a solution ``nu`` of the coboundary
    equation alone (default: the particular one).
    """
    fd = fixed_data(ty, pair)
    if fd is None:
        raise ValidationError(f"{pair} is not sigma-fixed; sigma does not act on E")
    eg = e_group(ty, pair)
    H, A, chi = pair.H, ty.A, ty.chi
    hd = characters(H.group)
    t = t_map(ty, pair)
    reps = sorted({a for a, _ in eg.pairs.values()})
    t_of = {h: t(H.embed(h)) for h in H.group.elements()}

    def image(a_i, lam, variant):
        matches = [
            a for a in reps if all(chi(a, r) == -hd.eval(lam, H.coords(r)) for r in fd.h_perp.basis)
        ]
        if len(matches) != 1:
            raise ConsistencyError(f"no unique coset for sigma({a_i}, {lam})")
        a_j = matches[0]
        anchor = a_j if variant == "a_j" else a_i

        def mu(h):
            th = t_of[h]
            return -chi(a_i, H.embed(h)) + hd.eval(lam, th) + chi(anchor, H.embed(th))

        for x in H.group.elements():
            for y in H.group.elements():
                if mu(H.group.add(x, y)) != mu(x) + mu(y):
                    return None
        return a_j, hd.from_values([mu(g) for g in H.group.gens])

    sigma = None
    for variant in _VARIANTS:
        table = {}
        for e, (a_i, lam) in eg.pairs.items():
            img = image(a_i, lam, variant)
            if img is None:
                break
            table[e] = eg.to_e(*img)
        else:
            try:
                cand = Hom.from_images(eg.group, eg.group, [table[g] for g in eg.group.gens])
            except ValueError:
                cand = None
            if cand is not None and all(cand(e) == table[e] for e in table) and cand.compose(cand).is_identity():
                sigma = cand
                break
        if variant == _VARIANTS[0]:
            log.warning("sigma on E: the a_j form failed for %s; trying the a_i form", pair)
    if sigma is None:
        raise ConsistencyError(f"sigma on E is not an involutive automorphism for {pair} (both formula variants)")

    if nu is None:
        nu = solve_coboundary(fd.hbar, fd.twist)
    s = fd.s
    lam = hd.from_function(lambda h: nu(fd.proj(h)) + nu(s(fd.proj(h))))
    obstruction = eg.to_e(A.zero, lam)
    if sigma(obstruction) != obstruction:
        raise ConsistencyError("second obstruction is not sigma-invariant")
    E = eg.group
    norms = {E.add(x, sigma(x)) for x in E.elements()}
    eg_sigma = EGroup(eg.pair, eg.presentation, eg.relations, eg.group, eg.proj, eg.pairs, sigma)
    return SigmaOnE(eg_sigma, sigma, variant, obstruction, obstruction in norms)


@dataclass(frozen=True)
class DualReport:
    e_type: list[int]
    dual_pointed: bool


def dual_report(ty: TYData, pair: VecAPair) -> DualReport:
    """The dual with respect to the induced category is pointed iff the pair is sigma-fixed."""
    return DualReport(e_group(ty, pair).snf_type, fixed_data(ty, pair) is not None)


def is_group_theoretical(ty: TYData, budget: int = DEFAULT_BUDGET) -> tuple[bool, list[Subgroup]]:
    """Lagrangian existence, checked against existence of a sigma-fixed pair."""
    witnesses = lagrangians(ty.chi, budget)
    any_fixed = any(fixed_data(ty, p) is not None for p in all_pairs(ty.A, budget))
    if bool(witnesses) != any_fixed:
        raise ConsistencyError(
            f"Lagrangian existence ({bool(witnesses)}) disagrees with sigma-fixed pair existence ({any_fixed})"
        )
    return bool(witnesses), witnesses


# --------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class SigmaOrbit:
    members: tuple[VecAPair, ...]

    @property
    def fixed(self) -> bool:
        return len(self.members) == 1


@dataclass(frozen=True)
class EquivariantStructure:
    pair: VecAPair
    s: Hom
    nu: NuFunction
    sign: int
    class_size: int
    torsor_size: int


@dataclass(frozen=True)
class PairAnalysis:
    pair: VecAPair
    image: VecAPair
    nu: Optional[NuSolution]
    egroup: EGroup
    e_obstruction_trivial: Optional[bool]

    @property
    def fixed(self) -> bool:
        return self.nu is not None


@dataclass(frozen=True)
class ClassificationReport:
    ty: TYData
    pairs: tuple[PairAnalysis, ...]
    induced: tuple[SigmaOrbit, ...]
    equivariant: tuple[EquivariantStructure, ...]
    obstructed_fixed: tuple[VecAPair, ...]
    group_theoretical: bool
    lagrangians: tuple[Subgroup, ...]
    fiber_functor_count: int

    @property
    def total(self) -> int:
        return len(self.induced) + len(self.equivariant) + len(self.obstructed_fixed)


def analyse_pair(ty: TYData, pair: VecAPair) -> PairAnalysis:
    image = sigma_act(ty, pair)
    fd = fixed_data(ty, pair)
    if (fd is not None) != (image == pair):
        raise ConsistencyError(f"fixed-pair test disagrees with the sigma action on {pair}")
    if fd is None:
        return PairAnalysis(pair, image, None, e_group(ty, pair), None)
    nu = solve_nu(ty, pair)
    action = sigma_on_e(ty, pair, nu.particular)
    if action.obstruction_trivial != nu.presign_solvable:
        raise ConsistencyError(
            f"E-obstruction triviality ({action.obstruction_trivial}) disagrees with nu solvability "
            f"({nu.presign_solvable}) for {pair}"
        )
    return PairAnalysis(pair, image, nu, action.egroup, action.obstruction_trivial)


def _analyse_all(ty: TYData, pairs: list[VecAPair], workers: int) -> list[PairAnalysis]:
    if workers <= 1:
        return [analyse_pair(ty, p) for p in pairs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: analyse_pair(ty, p), pairs))


def classify(ty: TYData, budget: int = DEFAULT_BUDGET, workers: int = 1) -> ClassificationReport:
    ty.checked()
    pairs = all_pairs(ty.A, budget)
    results = _analyse_all(ty, pairs, workers)
    by_pair = {r.pair: r for r in results}

    induced, equivariant, obstructed = [], [], []
    for r in results:
        if by_pair.get(r.image) is None:
            raise ConsistencyError(f"sigma image {r.image} is not a pair on A")
        if by_pair[r.image].image != r.pair:
            raise ConsistencyError(f"sigma is not an involution on {r.pair}")
        if r.fixed:
            matching = r.nu.classes
            if not matching:
                obstructed.append(r.pair)
            for c in matching:
                equivariant.append(
                    EquivariantStructure(r.pair, r.nu.s, c.nu, c.sign, c.size, r.nu.torsor_size)
                )
        elif r.pair < r.image:
            induced.append(SigmaOrbit((r.pair, r.image)))

    gt, witnesses = is_group_theoretical(ty, budget)
    whole = Subgroup.whole(ty.A)
    fibers = sum(1 for e in equivariant if e.pair.H == whole)
    return ClassificationReport(
        ty,
        tuple(results),
        tuple(induced),
        tuple(equivariant),
        tuple(obstructed),
        gt,
        tuple(witnesses),
        fibers,
    )


def fiber_functors(ty: TYData) -> tuple[int, list[EquivariantStructure]]:
    """Module categories of rank one: equivariant structures on pairs with ``H = A``."""
    ty.checked()
    whole = Subgroup.whole(ty.A)
    found = []
    for xi in alternating_forms(whole.group):
        pair = VecAPair(whole, xi)
        if fixed_data(ty, pair) is None:
            continue
        sol = solve_nu(ty, pair)
        found.extend(EquivariantStructure(pair, sol.s, c.nu, c.sign, c.size, sol.torsor_size) for c in sol.classes)
    return len(found), found
