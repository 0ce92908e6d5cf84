"""Slow exhaustive enumerations used to cross-check the linear-algebra paths.

Nothing here calls an SNF-based solver for the quantity being checked; the
only shared pieces are group arithmetic and form evaluation.
"""

from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction
from typing import Optional

from .abelian import Element, FinAbGroup, PhaseExp
from .classify import FixedData
from .forms import Bicharacter

SIGN_TOL = 1e-9


def subgroups(group: FinAbGroup) -> list[frozenset[Element]]:
    """Every subset containing 0 and closed under addition."""
    elems = group.elements()
    rest = elems[1:]
    found = []
    for mask in range(1 << len(rest)):
        s = {group.zero} | {x for i, x in enumerate(rest) if mask >> i & 1}
        if all(group.add(a, b) in s for a in s for b in s):
            found.append(frozenset(s))
    return found


def lagrangians(form: Bicharacter) -> list[frozenset[Element]]:
    G = form.group
    out = []
    for L in subgroups(G):
        perp = {a for a in G.elements() if all(not form(a, x) for x in L)}
        if perp == L:
            out.append(L)
    return out


def alternating_form_count(group: FinAbGroup) -> int:
    """Count antisymmetric zero-diagonal matrices of well-defined entries."""
    m = group.orders
    n = len(m)
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    count = 0
    for vals in itertools.product(*[range(m[i] * m[j]) for i, j in slots]):
        if all(
            (m[i] * v) % (m[i] * m[j]) == 0 and (m[j] * v) % (m[i] * m[j]) == 0
            for (i, j), v in zip(slots, vals)
        ):
            count += 1
    return count


def sign_of(values) -> Optional[int]:
    total = sum(cmath.exp(2j * math.pi * float(v.value)) for v in values)
    if abs(total.imag) >= SIGN_TOL or abs(total.real) < SIGN_TOL:
        return None
    return 1 if total.real > 0 else -1


def involutions(fd: FixedData) -> list[dict[Element, Element]]:
    """All ``s`` on ``Hbar`` (as tables) with ``xibar(s a, b) = chibar(a, b)`` and ``s^2 = 1``."""
    G = fd.hbar
    elems = G.elements()
    out = []
    for images in itertools.product(elems, repeat=G.rank):
        table = {}
        for x in elems:
            img = G.zero
            for c, y in zip(x, images):
                img = G.add(img, G.scale(c, y))
            table[x] = img
        if any(table[G.add(a, b)] != G.add(table[a], table[b]) for a in elems for b in elems):
            continue
        if any(table[table[a]] != a for a in elems):
            continue
        if all(fd.xibar(table[a], b) == fd.chibar(a, b) for a in elems for b in elems):
            out.append(table)
    return out


def nu_classes(fd: FixedData, tau_sign: int) -> tuple[int, int]:
    """(classes with the requested sign, classes before the sign filter), by
    brute force over ``nu`` with values in ``(1 / 4 exp) Z / Z``.

    ``s`` is found by search rather than taken from ``fd``.
    """
    G = fd.hbar
    found = involutions(fd)
    if len(found) != 1:
        raise AssertionError(f"expected a unique involution, found {len(found)}")
    s = found[0]
    elems = G.elements()
    den = 4 * G.exponent
    psi = fd.psibar

    admissible = []
    for vals in itertools.product(range(den), repeat=len(elems) - 1):
        nu = dict(zip(elems, [PhaseExp(0)] + [PhaseExp(v, den) for v in vals]))
        if any(nu[a] + nu[s[a]] for a in elems):
            continue
        if all(nu[a] + nu[b] - nu[G.add(a, b)] == psi(a, b) - psi(s[b], s[a]) for a in elems for b in elems):
            admissible.append(nu)

    chars = []
    for lam in itertools.product(*[range(m) for m in G.orders]):
        chars.append({x: PhaseExp(sum(Fraction(l * c, m) for l, c, m in zip(lam, x, G.orders))) for x in elems})

    def key(nu):
        return tuple(nu[x] for x in elems)

    seen = set()
    total = matching = 0
    fixed = [a for a in elems if s[a] == a]
    for nu in admissible:
        k = key(nu)
        if k in seen:
            continue
        total += 1
        for eta in chars:
            seen.add(tuple(nu[x] + eta[x] - eta[s[x]] for x in elems))
        if sign_of([nu[a] for a in fixed]) == tau_sign:
            matching += 1
    return matching, total
