"""Command-line front end: ``tymod <command> --group Z2xZ4 --chi ... --tau +``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import random
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .abelian import DEFAULT_BUDGET, FinAbGroup, PhaseExp, Subgroup, enumerate_subgroups
from .classify import (
    ClassificationReport,
    VecAPair,
    classify,
    dual_report,
    fiber_functors,
    fixed_data,
    sigma_act,
    sigma_on_e,
    solve_nu,
    tambara_cross_check,
)
from .errors import BudgetExceeded, ConsistencyError, ValidationError
from .forms import (
    AlternatingForm,
    Bicharacter,
    alternating_forms,
    is_nondegenerate,
    is_symmetric,
    lagrangians,
    metric_forms,
    parse_matrix,
)
from .tycat import TYData

log = logging.getLogger("tymod")

COMMANDS = ("classify", "subgroups", "forms", "lagrangians", "sigma", "fiber", "dual", "sweep", "selfcheck")
REPORT_KEYS = (
    "input",
    "induced",
    "equivariant",
    "obstructed",
    "group_theoretical",
    "lagrangians",
    "fiber_functor_count",
    "e_groups",
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    group_spec: Optional[str] = None
    chi_spec: Optional[str] = None
    tau: str = "+"
    h_spec: Optional[str] = None
    xi_spec: Optional[str] = None
    output: str = "json"
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    sweep_file: Optional[str] = None
    workers: int = 1
    metric: bool = False


# --------------------------------------------------------------------------
# Parsing

_FACTOR = re.compile(r"[zZ](\d+)")


def parse_group(spec: str) -> FinAbGroup:
    """``Z<n>(xZ<n>)*``; factor order is kept as written."""
    orders = []
    pos = 0
    while True:
        m = _FACTOR.match(spec, pos)
        if m is None:
            raise ValidationError(f"group spec {spec!r}: expected Z<n> at position {pos}")
        n = int(m.group(1))
        if n < 2:
            raise ValidationError(f"group spec {spec!r}: factor order {n} at position {pos} must be at least 2")
        orders.append(n)
        pos = m.end()
        if pos == len(spec):
            return FinAbGroup(orders)
        if spec[pos] not in "xX":
            raise ValidationError(f"group spec {spec!r}: expected 'x' at position {pos}")
        pos += 1


def parse_chi(spec: str, group: FinAbGroup) -> Bicharacter:
    return Bicharacter(group, parse_matrix(spec))


def parse_tau(spec: str) -> int:
    if spec in ("+", "+1", "1"):
        return 1
    if spec in ("-", "-1"):
        return -1
    raise ValidationError(f"tau must be + or -, got {spec!r}")


def parse_elements(spec: str, group: FinAbGroup) -> list[tuple[int, ...]]:
    """``"(1,0);(0,1)"``; an empty string means no generators."""
    out = []
    for k, chunk in enumerate(filter(None, (c.strip() for c in spec.split(";")))):
        body = chunk.strip("()")
        try:
            coords = tuple(int(c) for c in body.split(",")) if body else ()
        except ValueError:
            raise ValidationError(f"generator {k}: {chunk!r} is not a coordinate tuple") from None
        if len(coords) != group.rank:
            raise ValidationError(f"generator {k}: expected {group.rank} coordinates, got {len(coords)}")
        out.append(group.reduce(coords))
    return out


def parse_pair(cfg: RunConfig, A: FinAbGroup) -> VecAPair:
    H = Subgroup.generated_by(A, parse_elements(cfg.h_spec or "", A))
    if cfg.xi_spec is None:
        xi = AlternatingForm.zero(H.group)
    elif H.group.rank == 0:
        xi = AlternatingForm.zero(H.group)
    else:
        xi = AlternatingForm(H.group, parse_matrix(cfg.xi_spec))
    return VecAPair(H, xi)


def env_budget(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("TYMOD_BUDGET")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"TYMOD_BUDGET must be an integer, got {raw!r}") from None


def load_ty(cfg: RunConfig) -> TYData:
    if not cfg.group_spec or cfg.chi_spec is None:
        raise ValidationError(f"{cfg.command} needs --group and --chi")
    A = parse_group(cfg.group_spec)
    if A.order > cfg.budget:
        raise BudgetExceeded(f"|A| = {A.order} exceeds the budget {cfg.budget}")
    return TYData(A, parse_chi(cfg.chi_spec, A), parse_tau(cfg.tau)).checked()


# --------------------------------------------------------------------------
# JSON encoding


def enc_elem(x) -> list[int]:
    return list(x)


def enc_key(x) -> str:
    return "(" + ",".join(map(str, x)) + ")"


def enc_sub(H: Subgroup) -> list[list[int]]:
    return [enc_elem(x) for x in H.elements]


def enc_matrix(rows) -> list[list[str]]:
    return [[str(PhaseExp(v)) for v in row] for row in rows]


def enc_hom(f) -> list[list[int]]:
    return [list(r) for r in f.matrix]


def enc_pair(p: VecAPair) -> dict:
    return {
        "H": enc_sub(p.H),
        "basis": [enc_elem(b) for b in p.H.basis],
        "xi": enc_matrix(p.xi.matrix),
    }


def enc_nu(nu) -> dict:
    return {enc_key(x): str(v) for x, v in zip(nu.domain.elements(), nu.values)}


def sign_symbol(sign: int) -> str:
    return "+" if sign > 0 else "-"


def enc_input(ty: TYData, spec: Optional[str] = None) -> dict:
    return {
        "group": spec if spec is not None else str(ty.A),
        "orders": list(ty.A.orders),
        "chi": enc_matrix(ty.chi.matrix),
        "tau": ty.tau_symbol,
    }


def report_to_json(report: ClassificationReport, spec: Optional[str] = None) -> dict:
    out = {
        "input": enc_input(report.ty, spec),
        "induced": [{"members": [enc_pair(m) for m in o.members]} for o in report.induced],
        "equivariant": [
            {
                **enc_pair(e.pair),
                "hbar": list(e.nu.domain.orders),
                "s": enc_hom(e.s),
                "nu": enc_nu(e.nu),
                "sign": sign_symbol(e.sign),
                "class_size": e.class_size,
                "torsor_size": e.torsor_size,
            }
            for e in report.equivariant
        ],
        "obstructed": [enc_pair(p) for p in report.obstructed_fixed],
        "group_theoretical": report.group_theoretical,
        "lagrangians": [enc_sub(L) for L in report.lagrangians],
        "fiber_functor_count": report.fiber_functor_count,
        "e_groups": [
            {
                **enc_pair(r.pair),
                "type": r.egroup.snf_type,
                "sigma_fixed": r.fixed,
                "dual_pointed": r.fixed,
                "sigma": enc_hom(r.egroup.sigma) if r.egroup.sigma is not None else None,
                "obstruction_trivial": r.e_obstruction_trivial,
            }
            for r in report.pairs
        ],
    }
    assert tuple(out) == REPORT_KEYS
    return out


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# --------------------------------------------------------------------------
# Commands


def cmd_classify(cfg: RunConfig) -> dict:
    ty = load_ty(cfg)
    return report_to_json(classify(ty, cfg.budget, cfg.workers), cfg.group_spec)


def cmd_subgroups(cfg: RunConfig) -> dict:
    if not cfg.group_spec:
        raise ValidationError("subgroups needs --group")
    A = parse_group(cfg.group_spec)
    subs = enumerate_subgroups(A, cfg.budget)
    return {
        "group": cfg.group_spec,
        "count": len(subs),
        "subgroups": [
            {"elements": enc_sub(H), "basis": [enc_elem(b) for b in H.basis], "type": list(H.group.orders)}
            for H in subs
        ],
    }


def cmd_forms(cfg: RunConfig) -> dict:
    if not cfg.group_spec:
        raise ValidationError("forms needs --group")
    A = parse_group(cfg.group_spec)
    out: dict = {"group": cfg.group_spec}
    if cfg.chi_spec is not None:
        chi = parse_chi(cfg.chi_spec, A)
        out["chi"] = {"symmetric": is_symmetric(chi), "nondegenerate": is_nondegenerate(chi)}
    H = Subgroup.generated_by(A, parse_elements(cfg.h_spec, A)) if cfg.h_spec is not None else Subgroup.whole(A)
    forms = list(alternating_forms(H.group))
    out["H"] = enc_sub(H)
    out["alternating"] = [enc_matrix(f.matrix) for f in forms]
    out["alternating_count"] = len(forms)
    if cfg.metric:
        out["metric"] = [enc_matrix(f.matrix) for f in metric_forms(A)]
    return out


def cmd_lagrangians(cfg: RunConfig) -> dict:
    if not cfg.group_spec or cfg.chi_spec is None:
        raise ValidationError("lagrangians needs --group and --chi")
    A = parse_group(cfg.group_spec)
    chi = parse_chi(cfg.chi_spec, A)
    found = lagrangians(chi, cfg.budget)
    return {"group": cfg.group_spec, "count": len(found), "lagrangians": [enc_sub(L) for L in found]}


def cmd_sigma(cfg: RunConfig) -> dict:
    ty = load_ty(cfg)
    pair = parse_pair(cfg, ty.A)
    out = {"input": enc_input(ty, cfg.group_spec), "pair": enc_pair(pair), "image": enc_pair(sigma_act(ty, pair))}
    fd = fixed_data(ty, pair)
    out["fixed"] = fd is not None
    if fd is not None:
        sol = solve_nu(ty, pair)
        out["hbar"] = list(fd.hbar.orders)
        out["s"] = enc_hom(fd.s)
        out["presign_solvable"] = sol.presign_solvable
        out["classes"] = [
            {"nu": enc_nu(c.nu), "sign": sign_symbol(c.sign), "class_size": c.size} for c in sol.all_classes
        ]
        out["matching"] = len(sol.classes)
    return out


def cmd_fiber(cfg: RunConfig) -> dict:
    ty = load_ty(cfg)
    count, found = fiber_functors(ty)
    checks = []
    whole = Subgroup.whole(ty.A)
    for xi in alternating_forms(whole.group):
        pair = VecAPair(whole, xi)
        if fixed_data(ty, pair) is not None:
            tc = tambara_cross_check(ty, pair)
            checks.append({**enc_pair(pair), "tambara_count": tc.count, "quotient_type": list(tc.quotient_type)})
    tambara_total = sum(c["tambara_count"] for c in checks)
    if tambara_total != count:
        raise ConsistencyError(f"fiber functor count {count} disagrees with the (s, mu) count {tambara_total}")
    return {
        "input": enc_input(ty, cfg.group_spec),
        "fiber_functor_count": count,
        "fiber_functors": [{**enc_pair(e.pair), "s": enc_hom(e.s), "nu": enc_nu(e.nu)} for e in found],
        "tambara": checks,
    }


def cmd_dual(cfg: RunConfig) -> dict:
    ty = load_ty(cfg)
    pair = parse_pair(cfg, ty.A)
    rep = dual_report(ty, pair)
    out = {"input": enc_input(ty, cfg.group_spec), "pair": enc_pair(pair), "e_type": rep.e_type, "dual_pointed": rep.dual_pointed}
    if rep.dual_pointed:
        action = sigma_on_e(ty, pair)
        out["sigma"] = enc_hom(action.sigma)
        out["obstruction"] = enc_elem(action.obstruction)
        out["obstruction_trivial"] = action.obstruction_trivial
    return out


def read_sweep(path: str) -> list[tuple[str, str, str]]:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split("|")]
            if len(parts) != 3:
                raise ValidationError(f"{path}:{lineno}: expected group|chi|tau")
            rows.append(tuple(parts))
    return rows


def _sweep_one(row, budget: int) -> dict:
    group, chi, tau = row
    cfg = RunConfig("classify", group, chi, tau, budget=budget)
    try:
        rep = cmd_classify(cfg)
    except ValidationError as exc:
        return {"group": group, "chi": chi, "tau": tau, "error": str(exc)}
    return {
        "group": group,
        "chi": chi,
        "tau": tau,
        "induced": len(rep["induced"]),
        "equivariant": len(rep["equivariant"]),
        "obstructed": len(rep["obstructed"]),
        "group_theoretical": rep["group_theoretical"],
        "fiber_functor_count": rep["fiber_functor_count"],
    }


def cmd_sweep(cfg: RunConfig) -> list[dict]:
    if not cfg.sweep_file:
        raise ValidationError("sweep needs --sweep FILE")
    rows = read_sweep(cfg.sweep_file)
    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
        return list(pool.map(lambda r: _sweep_one(r, cfg.budget), rows))


def cmd_selfcheck(cfg: RunConfig) -> dict:
    from . import selfcheck

    results = selfcheck.run(random.Random(cfg.seed))
    failed = [name for name, ok, _ in results if not ok]
    out = {"seed": cfg.seed, "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results]}
    if failed:
        raise ConsistencyError(f"selfcheck failed: {', '.join(failed)}")
    return out


HANDLERS = {
    "classify": cmd_classify,
    "subgroups": cmd_subgroups,
    "forms": cmd_forms,
    "lagrangians": cmd_lagrangians,
    "sigma": cmd_sigma,
    "fiber": cmd_fiber,
    "dual": cmd_dual,
    "sweep": cmd_sweep,
    "selfcheck": cmd_selfcheck,
}


# --------------------------------------------------------------------------
# Output formats


def _flat_rows(result) -> list[dict]:
    if isinstance(result, list):
        return result
    if "induced" in result and "e_groups" in result:
        rows = []
        for o in result["induced"]:
            rows.append({"kind": "induced", "H": json.dumps(o["members"][0]["H"]), "xi": json.dumps(o["members"][0]["xi"]), "detail": json.dumps(o["members"][1]["H"])})
        for e in result["equivariant"]:
            rows.append({"kind": "equivariant", "H": json.dumps(e["H"]), "xi": json.dumps(e["xi"]), "detail": json.dumps(e["nu"])})
        for p in result["obstructed"]:
            rows.append({"kind": "obstructed", "H": json.dumps(p["H"]), "xi": json.dumps(p["xi"]), "detail": ""})
        return rows
    return [{k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in result.items()}]


def render_csv(result) -> str:
    rows = _flat_rows(result)
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def render_text(result) -> str:
    if isinstance(result, dict) and "induced" in result and "e_groups" in result:
        inp = result["input"]
        lines = [
            f"TY({inp['group']}, chi={inp['chi']}, tau={inp['tau']})",
            f"  induced:             {len(result['induced'])}",
            f"  equivariant:         {len(result['equivariant'])}",
            f"  obstructed fixed:    {len(result['obstructed'])}",
            f"  group theoretical:   {str(result['group_theoretical']).lower()}",
            f"  lagrangians:         {len(result['lagrangians'])}",
            f"  fiber functors:      {result['fiber_functor_count']}",
        ]
        for e in result["equivariant"]:
            lines.append(f"  - H={e['H']} xi={e['xi']} nu={e['nu']} sign={e['sign']}")
        for p in result["obstructed"]:
            lines.append(f"  x H={p['H']} xi={p['xi']} (no admissible nu)")
        return "\n".join(lines) + "\n"
    if isinstance(result, dict) and "checks" in result:
        return "".join(f"{'ok  ' if c['ok'] else 'FAIL'} {c['name']} {c['detail']}".rstrip() + "\n" for c in result["checks"])
    rows = result if isinstance(result, list) else [result]
    return "".join(" ".join(f"{k}={json.dumps(v)}" for k, v in row.items()) + "\n" for row in rows)


RENDERERS = {"json": dump_json, "csv": render_csv, "text": render_text}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        result = HANDLERS[cfg.command](cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=err)
        return 1
    except ConsistencyError as exc:
        print(f"internal check failed: {exc}", file=err)
        return 2
    out.write(RENDERERS[cfg.output](result))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tymod", description="Module categories over Tambara-Yamagami categories.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--group", help="e.g. Z2xZ4")
    p.add_argument("--chi", help='row-major matrix, e.g. "0,1/2;1/2,0"')
    p.add_argument("--tau", default="+", help="sign of tau: + or -")
    p.add_argument("--H", dest="h_spec", help='subgroup generators, e.g. "(1,0);(0,1)"')
    p.add_argument("--xi", help="alternating form on the basis of H")
    p.add_argument("--format", dest="output", choices=tuple(RENDERERS), default="json")
    p.add_argument("--budget", type=int, help="max |A| and max subgroup count (default from TYMOD_BUDGET)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sweep", dest="sweep_file", metavar="FILE")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--metric", action="store_true", help="forms: also list nondegenerate symmetric forms")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        budget = args.budget if args.budget is not None else env_budget()
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    cfg = RunConfig(
        command=args.command,
        group_spec=args.group,
        chi_spec=args.chi,
        tau=args.tau,
        h_spec=args.h_spec,
        xi_spec=args.xi,
        output=args.output,
        budget=budget,
        seed=args.seed,
        sweep_file=args.sweep_file,
        workers=args.workers,
        metric=args.metric,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
