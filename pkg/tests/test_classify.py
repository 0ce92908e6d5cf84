import random

import pytest

from conftest import HYPERBOLIC, group, ty
from tymod.abelian import Subgroup, characters
from tymod.classify import (
    VecAPair,
    all_pairs,
    check_nu,
    classify,
    dual_report,
    e_group,
    fiber_functors,
    fixed_data,
    is_group_theoretical,
    is_sigma_fixed,
    sigma_act,
    sigma_on_e,
    solve_nu,
    t_map,
    tambara_cross_check,
)
from tymod.errors import ValidationError
from tymod.forms import (
    AlternatingForm,
    BilinearCocycle,
    alt_form,
    gauss_sign,
    metric_forms,
    parse_matrix,
    radical,
)
from tymod.tycat import TYData

ISING = ("Z2", "1/2")
Z4 = ("Z4", "1/4")
HYP = ("Z2xZ2", HYPERBOLIC)


def pair(t, gens, xi=None):
    H = Subgroup.generated_by(t.A, gens)
    form = AlternatingForm.zero(H.group) if xi is None else AlternatingForm(H.group, parse_matrix(xi))
    return VecAPair(H, form)


def test_t_map_examples():
    t = ty(*ISING)
    assert t_map(t, pair(t, []))((1,)) == ()
    t = ty(*Z4)
    tm = t_map(t, pair(t, [(2,)]))
    assert tm((0,)) == tm((2,)) == (0,)
    t = ty(*HYP)
    assert t_map(t, pair(t, [(1, 0), (0, 1)], HYPERBOLIC))((1, 0)) == (1, 0)


def test_sigma_act_examples():
    t = ty(*ISING)
    assert sigma_act(t, pair(t, [])) == pair(t, [(1,)])
    assert sigma_act(t, pair(t, [(1,)])) == pair(t, [])
    t = ty(*Z4)
    half = pair(t, [(2,)])
    assert sigma_act(t, half) == half


def test_is_sigma_fixed_examples():
    t = ty(*Z4)
    s = is_sigma_fixed(t, pair(t, [(2,)]))
    assert s is not None and s.source.order == 1
    t = ty(*ISING)
    assert is_sigma_fixed(t, pair(t, [(1,)])) is None
    t = ty(*HYP)
    s = is_sigma_fixed(t, pair(t, [(1, 0), (0, 1)], HYPERBOLIC))
    assert s is not None and s.is_identity()


def test_solve_nu_examples():
    for tau, count in ((1, 1), (-1, 0)):
        t = ty(*Z4, tau)
        sol = solve_nu(t, pair(t, [(2,)]))
        assert len(sol.classes) == count
        assert sol.all_classes[0].nu.values == (0,)
    for tau, count in ((1, 3), (-1, 1)):
        t = ty(*HYP, tau)
        sol = solve_nu(t, pair(t, [(1, 0), (0, 1)], HYPERBOLIC))
        assert len(sol.classes) == count
        assert sol.equivalence_size == 1


def test_solve_nu_rejects_unfixed_pair():
    t = ty(*ISING)
    with pytest.raises(ValidationError):
        solve_nu(t, pair(t, [(1,)]))


def test_classify_ising():
    for tau in (1, -1):
        r = classify(ty(*ISING, tau))
        assert (len(r.induced), len(r.equivariant), len(r.obstructed_fixed)) == (1, 0, 0)
        assert r.induced[0].members == (pair(r.ty, []), pair(r.ty, [(1,)]))
        assert not r.group_theoretical and r.fiber_functor_count == 0


def test_classify_z4():
    r = classify(ty(*Z4, 1))
    assert len(r.induced) == 1 and r.induced[0].members == (pair(r.ty, []), pair(r.ty, [(1,)]))
    (e,) = r.equivariant
    assert e.pair == pair(r.ty, [(2,)])
    assert [L.elements for L in r.lagrangians] == [((0,), (2,))]
    r = classify(ty(*Z4, -1))
    assert len(r.induced) == 1 and not r.equivariant
    assert r.obstructed_fixed == (pair(r.ty, [(2,)]),)


def test_fiber_functors_and_tambara():
    assert fiber_functors(ty(*ISING))[0] == 0
    for tau, count in ((1, 3), (-1, 1)):
        t = ty(*HYP, tau)
        assert fiber_functors(t)[0] == count
        assert tambara_cross_check(t, pair(t, [(1, 0), (0, 1)], HYPERBOLIC)).count == count
    t = ty(*Z4)
    with pytest.raises(ValidationError):
        tambara_cross_check(t, pair(t, [(1,)]))


def test_e_group_examples():
    t = ty(*ISING)
    assert e_group(t, pair(t, [])).snf_type == [2]
    assert e_group(t, pair(t, [(1,)])).snf_type == [2]


def test_sigma_on_e_examples():
    t = ty(*Z4)
    action = sigma_on_e(t, pair(t, [(2,)]))
    assert action.obstruction_trivial
    assert action.sigma.compose(action.sigma).is_identity()
    t = ty(*ISING)
    with pytest.raises(ValidationError, match="not sigma-fixed"):
        sigma_on_e(t, pair(t, []))


def test_dual_report_examples():
    t = ty(*ISING)
    assert not dual_report(t, pair(t, [])).dual_pointed
    t = ty(*Z4)
    rep = dual_report(t, pair(t, [(2,)]))
    assert rep.dual_pointed and rep.e_type == [2, 2]


def test_group_theoretical_examples():
    assert is_group_theoretical(ty(*ISING)) == (False, [])
    gt, witnesses = is_group_theoretical(ty(*Z4))
    assert gt and [L.elements for L in witnesses] == [((0,), (2,))]
    assert len(is_group_theoretical(ty(*HYP))[1]) == 3


@pytest.mark.parametrize("spec", ["Z4", "Z8", "Z2xZ2", "Z2xZ4", "Z3xZ3"])
def test_report_partitions_pairs(spec):
    for chi in metric_forms(group(spec)):
        for tau in (1, -1):
            r = classify(TYData(chi.group, chi, tau))
            seen = [m for o in r.induced for m in o.members]
            seen += list(dict.fromkeys(e.pair for e in r.equivariant))
            seen += list(r.obstructed_fixed)
            assert sorted(seen) == all_pairs(chi.group)
            for e in r.equivariant:
                fd = fixed_data(r.ty, e.pair)
                assert e.s.compose(e.s).is_identity()
                assert check_nu(fd, e.nu)
                assert gauss_sign([e.nu(a) for a in fd.fixed_points], len(fd.fixed_points) * fd.norm_subgroup.order) == tau


@pytest.mark.parametrize("spec", ["Z4", "Z2xZ2", "Z2xZ4", "Z3xZ3", "Z4xZ4"])
def test_t_map_choice_does_not_change_the_class(spec):
    rng = random.Random(7)
    for chi in metric_forms(group(spec))[:3]:
        t = TYData(chi.group, chi, 1)
        for p in all_pairs(chi.group):
            image = sigma_act(t, p)
            tm = t_map(t, p)
            rad = radical(p.xi).elements
            H = p.H.group
            ts = [H.add(tm(g), rng.choice(rad)) for g in image.H.basis]
            n = len(ts)
            psi = p.psi
            mat = [[psi(ts[j], ts[i]) for j in range(n)] for i in range(n)]
            assert alt_form(BilinearCocycle(image.H.group, mat)) == image.xi


@pytest.mark.parametrize("spec", ["Z4", "Z2xZ2", "Z2xZ4", "Z3xZ3", "Z4xZ4"])
def test_class_count_independent_of_particular_solution(spec):
    rng = random.Random(11)
    for chi in metric_forms(group(spec))[:4]:
        for tau in (1, -1):
            t = TYData(chi.group, chi, tau)
            for p in all_pairs(chi.group):
                if fixed_data(t, p) is None:
                    continue
                base = solve_nu(t, p)
                hb = base.fixed.hbar
                dual = characters(hb)
                for _ in range(5):
                    lam = rng.choice(dual.group.elements())
                    nu0 = base.particular + (lambda x, lam=lam: dual.eval(lam, x))
                    other = solve_nu(t, p, particular=nu0)
                    assert len(other.classes) == len(base.classes)
                    assert [c.nu for c in other.all_classes] == [c.nu for c in base.all_classes]


def test_workers_do_not_change_the_report():
    t = ty("Z4xZ4", "0,1/4;1/4,0", 1)
    a, b = classify(t, workers=1), classify(t, workers=4)
    assert a == b
