"""Quick oracle comparisons, run by ``tymod selfcheck``."""

from __future__ import annotations

import math
import random

from . import oracles
from .abelian import FinAbGroup, PhaseExp, enumerate_subgroups
from .classify import (
    all_pairs,
    fiber_functors,
    fixed_data,
    is_group_theoretical,
    sigma_act,
    sigma_on_e,
    solve_nu,
    tambara_cross_check,
)
from .forms import Bicharacter, alternating_forms, lagrangians, metric_forms, solve_coboundary
from .tycat import TYData

GROUPS = [(2,), (3,), (4,), (6,), (2, 2), (2, 4)]


def _random_symmetric(group: FinAbGroup, rng: random.Random) -> Bicharacter:
    n = group.rank
    m = group.orders
    mat = [[PhaseExp(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            g = m[i] if i == j else math.gcd(m[i], m[j])
            mat[i][j] = mat[j][i] = PhaseExp(rng.randrange(g), g)
    return Bicharacter(group, mat)


def run(rng: random.Random) -> list[tuple[str, bool, str]]:
    results = []

    def record(name, ok, detail=""):
        results.append((name, bool(ok), detail))

    for orders in GROUPS:
        A = FinAbGroup(orders)
        label = str(A)
        n_sub, n_brute = len(enumerate_subgroups(A)), len(oracles.subgroups(A))
        record(f"subgroups {label}", n_sub == n_brute, f"{n_sub} vs {n_brute}")
        n_alt, n_brute = sum(1 for _ in alternating_forms(A)), oracles.alternating_form_count(A)
        record(f"alternating forms {label}", n_alt == n_brute, f"{n_alt} vs {n_brute}")

        bad = 0
        for _ in range(20):
            f = _random_symmetric(A, rng)
            nu = solve_coboundary(A, f)
            bad += any(nu.coboundary(a, b) != f(a, b) for a in A.elements() for b in A.elements())
        record(f"coboundary {label}", bad == 0, f"{bad} failures in 20")

        for chi in metric_forms(A):
            lag, brute = lagrangians(chi), oracles.lagrangians(chi)
            record(f"lagrangians {label} [{chi}]", len(lag) == len(brute), f"{len(lag)} vs {len(brute)}")
            for tau in (1, -1):
                ty = TYData(A, chi, tau)
                tag = f"{label} [{chi}] tau={ty.tau_symbol}"
                pairs = all_pairs(A)
                record(f"sigma involution {tag}", all(sigma_act(ty, sigma_act(ty, p)) == p for p in pairs))
                nu_ok = e_ok = True
                tambara = 0
                for p in pairs:
                    fd = fixed_data(ty, p)
                    if fd is None:
                        continue
                    sol = solve_nu(ty, p)
                    if fd.hbar.order <= 4:
                        nu_ok &= (len(sol.classes), len(sol.all_classes)) == oracles.nu_classes(fd, tau)
                    e_ok &= sigma_on_e(ty, p).obstruction_trivial == sol.presign_solvable
                    if p.H.order == A.order:
                        tambara += tambara_cross_check(ty, p).count
                record(f"nu brute force {tag}", nu_ok)
                record(f"E obstruction {tag}", e_ok)
                count, _ = fiber_functors(ty)
                record(f"fiber functors {tag}", count == tambara, f"{count} vs {tambara}")
                is_group_theoretical(ty)
    return results
