"""Verification suites over a parsed workspace, with text and CSV reports."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from .brauer import verify_brauer
from .errors import Inconclusive, UnknownSuite
from .functcat import (exactness_at, faithfulness_rank, functor_stabilizer, nat_trans_space,
                       phi_pointwise, phi_pointwise_rows, representable, sfm_check, verify_gcf,
                       yoneda_square_rows)
from .morphcat import (h_adjunction_check, h_pushdown, h_stabilizer,
                       verify_gstab, verify_gstab_part3, verify_hgcm)
from .repcat import (DEFAULT_BUDGET, CheckRow, Iso, adjunction_check, coadjunction_check, decompose,
                     direct_sum, hom_space, module_stabilizer, modules_isomorphic, pushdown_full,
                     rad_power_dims, restrict, skew_universe, twist, verify_radical_preservation,
                     verify_semicovering_module)
from .workspace import Workspace

SUITES = ("semicovering-mod", "hgcm", "adjunction", "gstab", "gcf", "phi-exact-faithful",
          "yoneda-square", "radical-preservation", "brauer-all")
CSV_HEADER = ("suite", "case", "branch", "lhs", "rhs", "status")


@dataclass
class SuiteResult:
    suite: str
    seed: int
    budget: int
    p: int
    rows: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)   # (case, message)

    @property
    def n_failed(self) -> int:
        return sum(r.status != "pass" for r in self.rows)

    def ok(self, strict: bool = False) -> bool:
        return self.n_failed == 0 and not (strict and self.inconclusive)


@dataclass
class Context:
    """One action of the workspace with the objects over its algebra."""
    name: str
    bundle: object
    modules: list
    morphisms: list
    functors: list
    universes: list

    def prefix(self, rows):
        for r in rows:
            r.case = f"{self.name}:{r.case}"
        return rows


def contexts(ws: Workspace) -> list[Context]:
    out = []
    for name, (alg_name, _, _) in ws.actions.items():
        out.append(Context(name, ws.bundles[name], ws.modules_over(alg_name), ws.morphisms_over(alg_name),
                           ws.functors_over(alg_name), ws.universes_over(alg_name)))
    return out


def _activate(ctx: Context):
    ctx.bundle.base.group_action = ctx.bundle.action


def skew_fixture_modules(bundle, modules, seed: int = 0, budget: int = DEFAULT_BUDGET) -> list:
    """Pushdowns of the fixture modules and their indecomposable summands."""
    out = []
    for m in modules:
        Fm = pushdown_full(bundle, m)
        Fm.name = f"F({m.name})"
        out.append(Fm)
        if Fm.dim == 0:
            continue
        parts = decompose(Fm, seed=seed, budget=budget)
        if len(parts) > 1:
            for k, s in enumerate(parts):
                s.module.name = f"F({m.name})#{k}"
                out.append(s.module)
    return out


class _Collector:
    def __init__(self, res: SuiteResult, ctx: Context | None):
        self.res, self.ctx = res, ctx

    def run(self, case: str, fn):
        """Run ``fn`` returning rows; Inconclusive outcomes are recorded separately."""
        try:
            rows = fn()
        except Inconclusive as exc:
            tag = f"{self.ctx.name}:{case}" if self.ctx else case
            self.res.inconclusive.append((tag, str(exc)))
            return None
        rows = [rows] if isinstance(rows, CheckRow) else list(rows)
        if self.ctx:
            self.ctx.prefix(rows)
        self.res.rows.extend(rows)
        return rows


def _stabs(col: _Collector, objs, fn) -> dict:
    out = {}
    for o in objs:
        def one(o=o):
            out[id(o)] = fn(o)
            return []
        col.run(f"stabilizer({o.name})", one)
    return out


def _adj_row(case, branch, rep) -> CheckRow:
    return CheckRow(case, branch, rep.lhs_dim, rep.rhs_dim, status="pass" if rep.passed else "fail",
                    detail="; ".join(rep.witnesses))


def suite_semicovering(ws, ctx, col, seed, budget):
    stabs = _stabs(col, ctx.modules, lambda m: module_stabilizer(m, seed=seed, budget=budget))
    for m, n in product(ctx.modules, repeat=2):
        if id(m) in stabs and id(n) in stabs:
            col.run(f"{m.name},{n.name}", lambda: verify_semicovering_module(ctx.bundle, m, n, stabs=stabs))


def suite_hgcm(ws, ctx, col, seed, budget):
    stabs = _stabs(col, ctx.morphisms, lambda f: h_stabilizer(f, seed=seed, budget=budget))
    for f, h in product(ctx.morphisms, repeat=2):
        if id(f) in stabs and id(h) in stabs:
            col.run(f"{f.name},{h.name}", lambda: verify_hgcm(ctx.bundle, f, h, stabs=stabs))


def suite_adjunction(ws, ctx, col, seed, budget):
    b = ctx.bundle
    xbars = skew_fixture_modules(b, ctx.modules, seed, budget)
    for x, mb in product(ctx.modules, xbars):
        col.run(f"{x.name}|{mb.name}", lambda: _adj_row(f"{x.name}|{mb.name}", "Hom(Fx,m)=Hom(x,res m)",
                                                         adjunction_check(b, x, mb, seed=seed)))
    for d, c in product(xbars, ctx.modules):
        col.run(f"{d.name}|{c.name}", lambda: _adj_row(f"{d.name}|{c.name}", "Hom(res d,c)=Hom(d,Fc)",
                                                        coadjunction_check(b, d, c, seed=seed)))
    pushed = [h_pushdown(b, g) for g in ctx.morphisms]
    for f, mb in product(ctx.morphisms, pushed):
        col.run(f"{f.name}|{mb.name}", lambda: _adj_row(f"{f.name}|{mb.name}", "H(HFf,m)=H(f,res m)",
                                                         h_adjunction_check(b, f, mb, seed=seed)))


def _module_gstab_rows(b, m, seed, budget):
    rows = []
    Fm = pushdown_full(b, m)
    for g in b.group.elements:
        r = modules_isomorphic(pushdown_full(b, twist(g, m)), Fm, seed=seed, budget=budget)
        rows.append(CheckRow(f"{m.name}", f"(1)F(^{''.join(map(str, g))}M)=F(M)", int(isinstance(r, Iso)), 1))
    tw = direct_sum([twist(g, m) for g in b.group.elements])
    r = modules_isomorphic(restrict(b, Fm), tw, seed=seed, budget=budget)
    rows.append(CheckRow(f"{m.name}", "(2)res F(M)=sum ^gM", int(isinstance(r, Iso)), 1))
    return rows


def suite_gstab(ws, ctx, col, seed, budget):
    b = ctx.bundle
    for m in ctx.modules:
        col.run(m.name, lambda: _module_gstab_rows(b, m, seed, budget))
    for f in ctx.morphisms:
        def parts(f=f):
            rep = verify_gstab(b, f, seed=seed, budget=budget)
            return [CheckRow(f.name, "(1)HF(^gf)=HF(f)", int(rep.ok1), 1, detail="; ".join(rep.notes)),
                    CheckRow(f.name, "(2)res HF(f)=sum ^gf", int(rep.ok2), 1, detail="; ".join(rep.notes))]
        col.run(f.name, parts)

    def part3():
        rows = []
        for f1, f2, g, wit in verify_gstab_part3(b, ctx.morphisms, seed=seed, budget=budget):
            rows.append(CheckRow(f"{f1.name},{f2.name}", "(3)f1=^g f2", int(g is not None), 1,
                                 detail="" if g is None else f"g={''.join(map(str, g))}"))
        return rows
    col.run("part3", part3)


def suite_gcf(ws, ctx, col, seed, budget):
    probes = ctx.modules
    stabs = _stabs(col, ctx.functors, lambda t: functor_stabilizer(t, probes, seed=seed, budget=budget))
    for t1, t2 in product(ctx.functors, repeat=2):
        if id(t1) in stabs and id(t2) in stabs:
            col.run(f"{t1.name},{t2.name}", lambda: verify_gcf(ctx.bundle, t1, t2, stabs))
    for t in ctx.functors:
        col.run(f"sfm({t.name})", lambda: sfm_check(t, probes, seed=seed, budget=budget))


def suite_phi(ws, ctx, col, seed, budget):
    b = ctx.bundle
    xbars = skew_fixture_modules(b, ctx.modules, seed, budget)
    for t in ctx.functors:
        col.run(f"pointwise({t.name})", lambda: phi_pointwise_rows(b, t, xbars))
        for x in xbars:
            def exact(t=t, x=x):
                e = exactness_at(b, t, x)
                return CheckRow(e.case, "exact", e.lhs, e.rhs, status="pass" if e.passed else "fail")
            col.run(f"exact({t.name},{x.name})", exact)
            col.run(f"split({t.name},{x.name})",
                    lambda: phi_pointwise(b, t, x, ctx.modules, seed=seed, budget=budget))
    for t1, t2 in product(ctx.functors, repeat=2):
        def faithful(t1=t1, t2=t2):
            r, n = faithfulness_rank(b, t1, t2)
            return CheckRow(f"{t1.name},{t2.name}", "faithful:rank=dim Nat", r, n)
        col.run(f"faithful({t1.name},{t2.name})", faithful)


def suite_yoneda(ws, ctx, col, seed, budget):
    b = ctx.bundle
    xbars = skew_fixture_modules(b, ctx.modules, seed, budget)
    for f in ctx.morphisms:
        col.run(f"square({f.name})", lambda: yoneda_square_rows(b, f, xbars))
    reps = {id(m): representable(m) for m in ctx.modules}
    for m, n in product(ctx.modules, repeat=2):
        col.run(f"{m.name},{n.name}", lambda: CheckRow(
            f"{m.name},{n.name}", "Nat(Hom(-,M),Hom(-,N))=Hom(M,N)",
            nat_trans_space(reps[id(m)], reps[id(n)]).dim, hom_space(m, n).dim))


def _nilpotency(universe, cap: int = 8) -> int:
    for n in range(1, cap + 1):
        if not rad_power_dims(universe, n, check=(n == 1))[-1].any():
            return n
    return cap


def suite_radical(ws, ctx, col, seed, budget):
    b = ctx.bundle
    for name, univ in ctx.universes:
        def rows(name=name, univ=univ):
            skew = skew_universe(b, univ, seed=seed, budget=budget)
            n = _nilpotency(univ)
            out = verify_radical_preservation(b, univ, skew, n, seed=seed, budget=budget)
            for r in out:
                r.case = f"{name}:{r.case}"
            return out
        col.run(name, rows)


def suite_brauer(ws, col):
    for name, (g, d) in ws.brauer.items():
        col.run(name, lambda: verify_brauer(name, g, d, ws.fs))


RUNNERS = {
    "semicovering-mod": suite_semicovering, "hgcm": suite_hgcm, "adjunction": suite_adjunction,
    "gstab": suite_gstab, "gcf": suite_gcf, "phi-exact-faithful": suite_phi,
    "yoneda-square": suite_yoneda, "radical-preservation": suite_radical,
}


def run_suite(ws: Workspace, suite: str, seed: int = 0, budget: int = DEFAULT_BUDGET) -> SuiteResult:
    if suite not in SUITES:
        raise UnknownSuite(f"unknown suite '{suite}'; choose from {', '.join(SUITES)}")
    res = SuiteResult(suite, seed, budget, ws.fs.p)
    if suite == "brauer-all":
        suite_brauer(ws, _Collector(res, None))
        return res
    for ctx in contexts(ws):
        _activate(ctx)
        RUNNERS[suite](ws, ctx, _Collector(res, ctx), seed, budget)
    return res


# -- reports ------------------------------------------------------------------

def format_text(res: SuiteResult, strict: bool = False) -> str:
    lines = [f"suite: {res.suite}", f"field: GF({res.p})", f"seed: {res.seed}", f"budget: {res.budget}",
             f"checks: {len(res.rows)}  failed: {res.n_failed}  inconclusive: {len(res.inconclusive)}", ""]
    for r in res.rows:
        line = f"[{r.status}] {r.case}  {r.branch}  {r.lhs} vs {r.rhs}"
        if r.detail:
            line += f"  ({r.detail})"
        lines.append(line)
    if res.inconclusive:
        lines += ["", "inconclusive:"]
        lines += [f"  {c}: {msg}" for c, msg in res.inconclusive]
    lines += ["", f"result: {'PASS' if res.ok(strict) else 'FAIL'}"]
    return "\n".join(lines) + "\n"


def format_csv(res: SuiteResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in res.rows:
        w.writerow((res.suite, r.case, r.branch, r.lhs, r.rhs, r.status))
    return buf.getvalue()


def write_reports(res: SuiteResult, out_dir, strict: bool = False) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    txt, cv = out / f"{res.suite}.txt", out / f"{res.suite}.csv"
    txt.write_text(format_text(res, strict))
    cv.write_text(format_csv(res))
    return txt, cv
