"""Command-line front end: m24tmf {verify,dcohom,ahss,lattice,lcomplex-demo,tmf-table}.

Exit codes: 0 success, 1 verification failure, 2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import List, Optional, Tuple

OMEGA_HELP = "twist label; the dictionary is  omega=0 <-> eps=0,  omega=-r <-> eps=1,  omega=+r <-> eps=-1  (D = P + eps*r)"


@dataclass(frozen=True)
class RunConfig:
    command: str
    epsilon: int = 0
    sigma: int = 1
    cutoff: int = 80
    periods: int = 2
    format: str = "markdown"
    cache_dir: Optional[str] = None
    degree: Optional[int] = None
    fault: Optional[str] = None


def _emit(obj, fmt: str, markdown: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(markdown.rstrip("\n") + "\n")


def _table(header: List[str], rows: List[List]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(x) for x in r) + " |" for r in rows]
    return "\n".join(lines)


# verify ---------------------------------------------------------------------


def _verify_sigma(sigma: int, fault: Optional[str]):
    from .fieldalg import IntegrityError
    from .m24ring import FAULTS, M24Ring, check_naturality, check_operation_tables

    ring = M24Ring(sigma, overrides=FAULTS[fault] if fault else None)
    items = []
    try:
        rel = ring.verify_relations()
        items += [("relation", n, ok) for n, ok in rel.items]
    except IntegrityError as exc:
        items.append(("relation", f"relation suite aborted: {exc}", False))
    items += [("steenrod", n, ok) for n, ok in check_operation_tables(ring)]
    items += [("naturality", n, ok) for n, ok in check_naturality(ring)]
    return items


def cmd_verify(cfg: RunConfig, sigmas) -> int:
    report = {}
    bad = []
    for s in sigmas:
        items = _verify_sigma(s, cfg.fault)
        report[f"{s:+d}"] = [{"suite": k, "item": n, "ok": ok} for k, n, ok in items]
        bad += [f"sigma={s:+d} {k}: {n}" for k, n, ok in items if not ok]
    md = []
    for s in sigmas:
        rows = report[f"{s:+d}"]
        passed = sum(r["ok"] for r in rows)
        md.append(f"sigma={s:+d}: {passed}/{len(rows)} checks pass")
    if bad:
        md.append("")
        md.append("failing items:")
        md += ["  " + b for b in bad]
    _emit({"sigmas": report, "ok": not bad, "failures": bad}, cfg.format, "\n".join(md))
    return 1 if bad else 0


# dcohom ---------------------------------------------------------------------


def cmd_dcohom(cfg: RunConfig) -> int:
    from .dcomplex import TwistConfig, d_cohomology, mod36_descriptors, omega_label, periodicity_check

    tc = TwistConfig(cfg.epsilon, cfg.sigma, cfg.cutoff)
    rep = d_cohomology(tc)
    nperiods = max(1, min(cfg.periods, (cfg.cutoff - 3) // 36))
    lists = [mod36_descriptors(rep.mod36(k)) for k in range(nperiods)]
    extra = [str(c) for c in rep.nonperiodic()]
    obj = {
        "omega": omega_label(cfg.epsilon),
        "sigma": cfg.sigma,
        "cutoff": cfg.cutoff,
        "mod36": lists[0],
        "periods_agree": all(x == lists[0] for x in lists),
        "nonperiodic": extra,
        "classes": [
            {"descriptor": c.descriptor, "aux": c.aux, "representatives": [str(x) for x in c.representatives]}
            for c in rep.reliable
        ],
    }
    md = [f"D-cohomology, omega = {omega_label(cfg.epsilon)}, sigma = {cfg.sigma:+d}, degrees <= {cfg.cutoff}", ""]
    md.append("mod 36: " + ", ".join(lists[0]))
    md.append(f"periodic over {nperiods} period(s): {'yes' if obj['periods_agree'] and periodicity_check(rep) else 'no'}")
    if extra:
        md.append("nonperiodic: " + ", ".join(extra))
    md.append("")
    md.append(_table(["class", "aux", "representatives"], [[c.descriptor, c.aux, " -> ".join(str(x) for x in c.representatives)] for c in rep.reliable]))
    _emit(obj, cfg.format, "\n".join(md))
    return 0


# ahss -----------------------------------------------------------------------


def cmd_ahss(cfg: RunConfig) -> int:
    from .ahss import HMAX, FAMILY_DELTA, FAMILY_PLAIN, FAMILY_UPSILON, AhssEngine, E9Summary
    from .dcomplex import TwistConfig

    tc = TwistConfig(cfg.epsilon, cfg.sigma, cfg.cutoff)
    eng = AhssEngine(tc, hmax=min(cfg.cutoff, HMAX), kmax=cfg.periods)
    if cfg.degree is not None:
        res = eng.group_at(cfg.degree)
        rows = [[g.label(), g.total_degree, g.flag] for g in res.generators]
        md = f"twisted tmf^{cfg.degree}(BM24), omega = {tc.omega}, E9-page approximation: {res.module} (rank {res.rank})\n\n"
        md += _table(["generator", "degree", "Phi-action"], rows) if rows else "(zero)"
        _emit(res.as_json(), cfg.format, md)
        return 0
    summ = E9Summary(tc, eng.e9_generators())
    md = [f"E9 module generators in residue 1 mod 4, omega = {tc.omega}", ""]
    for fam in (FAMILY_UPSILON, FAMILY_PLAIN, FAMILY_DELTA):
        degs = summ.degrees(fam)
        md.append(f"{fam}: " + (", ".join(str(d) for d in degs) if degs else "none"))
    md.append("")
    gens = sorted(summ.generators, key=lambda g: (-g.total_degree, g.label()))
    md.append(_table(["generator", "degree", "family"], [[g.label(), g.total_degree, g.family] for g in gens]))
    _emit(summ.as_json(), cfg.format, "\n".join(md))
    return 0


# lattice / tmf-table / lcomplex-demo ----------------------------------------


def cmd_lattice(cfg: RunConfig) -> int:
    from .d12lattice import lattice_table

    rows = lattice_table()
    md = _table(["class", "tr24", "bosons", "fermions"], [[r["class"], r["tr24"], r["bosons"], r["fermions"]] for r in rows])
    _emit({"rows": rows}, cfg.format, md)
    return 0


def cmd_tmf_table(cfg: RunConfig) -> int:
    from .tmfcoeff import table_json, table_markdown

    if cfg.format == "json":
        sys.stdout.write(table_json() + "\n")
    else:
        sys.stdout.write(table_markdown() + "\n")
    return 0


def cmd_lcomplex_demo(cfg: RunConfig) -> int:
    from .lcomplex import block_decompose, cohomology, jordan_block, tensor, verlinde_fuse

    ell = 3
    rows = []
    for a in range(1, ell):
        for b in range(1, ell):
            t = tensor(jordan_block(a, ell, ell), jordan_block(b, ell, ell))
            h = sorted(blk.length for blk in cohomology(t).blocks)
            rows.append({"a": a, "b": b, "blocks": [str(x) for x in block_decompose(t)], "cohomology": h, "verlinde": verlinde_fuse(a, b, ell)})
    md = "tensor products of 3-complex blocks (1 = boson, 2 = fermion)\n\n"
    md += _table(["a", "b", "all blocks", "H*", "fusion"], [[r["a"], r["b"], " ".join(r["blocks"]), r["cohomology"], r["verlinde"]] for r in rows])
    _emit({"ell": ell, "products": rows}, cfg.format, md)
    return 0


# argument handling ----------------------------------------------------------


def _fix_argv(argv: List[str]) -> List[str]:
    # "--omega -r" would otherwise be read as an option
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in ("--omega", "--epsilon", "--degree", "--sigma") and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", choices=["0", "+r", "-r", "r"], help=OMEGA_HELP)
    common.add_argument("--epsilon", type=int, choices=[-1, 0, 1], help="debug: raw eps instead of omega")
    common.add_argument("--sigma", type=int, choices=[-1, 1], default=None, help="sign convention for the restriction of v (default +1)")
    common.add_argument("--cutoff", type=int, default=80, help="top cohomological degree (default 80)")
    common.add_argument("--periods", type=int, default=2, help="number of Delta^3 / 36-degree periods (default 2)")
    common.add_argument("--format", choices=["json", "markdown"], default="markdown")
    common.add_argument("--degree", type=int, default=None, help="ahss: a single total degree")
    common.add_argument("--cache-dir", default=None, help="basis cache directory (or M24TMF_CACHE_DIR)")
    common.add_argument("--inject-fault", choices=["r-sign", "r-aa"], default=None, help=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="m24tmf", description="mod-3 cohomology of M24 and twisted tmf. Twists: omega=0 <-> eps=0, omega=-r <-> eps=1, omega=+r <-> eps=-1 (D = P + eps*r)")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in (
        ("verify", "relation, Steenrod and naturality suites"),
        ("dcohom", "cohomology of D = P + eps*r, mod 36"),
        ("ahss", "E9 generators or a single twisted tmf group"),
        ("lattice", "ground-state counts in twisted D12+ cosets"),
        ("lcomplex-demo", "tensor products of 3-complexes against Verlinde fusion"),
        ("tmf-table", "3-torsion in the coefficients of tmf"),
    ):
        sub.add_parser(name, parents=[common], help=text, description=text)
    return p


def parse_config(argv: Optional[List[str]] = None) -> Tuple[RunConfig, Optional[int]]:
    from .dcomplex import epsilon_of

    ns = build_parser().parse_args(_fix_argv(list(sys.argv[1:] if argv is None else argv)))
    eps = 0
    if ns.omega is not None and ns.epsilon is not None and epsilon_of(ns.omega) != ns.epsilon:
        raise SystemExit("m24tmf: error: --omega and --epsilon disagree")
    if ns.omega is not None:
        eps = epsilon_of(ns.omega)
    elif ns.epsilon is not None:
        eps = ns.epsilon
    if ns.cutoff < 8 or ns.periods < 1:
        build_parser().error("cutoff must be >= 8 and periods >= 1")
    return RunConfig(ns.command, eps, ns.sigma or 1, ns.cutoff, ns.periods, ns.format, ns.cache_dir, ns.degree, ns.inject_fault), ns.sigma


def main(argv: Optional[List[str]] = None) -> int:
    try:
        cfg, explicit_sigma = parse_config(argv)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            sys.stderr.write(exc.code + "\n")
            return 2
        return 2 if exc.code else 0
    if cfg.cache_dir:
        os.environ["M24TMF_CACHE_DIR"] = cfg.cache_dir
    if cfg.command == "verify":
        return cmd_verify(cfg, (explicit_sigma,) if explicit_sigma else (1, -1))
    handler = {
        "dcohom": cmd_dcohom,
        "ahss": cmd_ahss,
        "lattice": cmd_lattice,
        "lcomplex-demo": cmd_lcomplex_demo,
        "tmf-table": cmd_tmf_table,
    }[cfg.command]
    return handler(cfg)


if __name__ == "__main__":
    sys.exit(main())
