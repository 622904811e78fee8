"""``hcg`` command line: run a configured experiment and write a JSON report.

Exit status: 0 when the verdict matches the declared expectation (or none
is declared), 1 on a verdict mismatch, 2 on a configuration error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import lab, models, zoo
from .config import COMMANDS, ConfigError, ExperimentConfig, check_level, validate_config
from .tensors import curvature_derivatives, weyl_scalars

SIG_DIGITS = 12


def _clean(obj):
    """JSON-ready copy: floats rounded to 12 significant digits, non-finite -> None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        x = float(f"{x:.{SIG_DIGITS}g}")
        return 0.0 if x == 0 else x
    return obj


def serialize(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# commands


def _analyze(cfg: ExperimentConfig, g):
    out = []
    for p in cfg.points:
        levels = curvature_derivatives(g, p, cfg.k)
        model = models.build_model(g, p, cfg.k)
        out.append(
            {
                "point": p,
                "level_norms": [float(np.linalg.norm(c)) for c in model.components],
                "coordinate_max_abs": [float(np.max(np.abs(t.entries))) for t in levels],
                "weyl": weyl_scalars(g, p).values,
            }
        )
    return out, "analyzed"


def _match_summary(m: models.HomothetyMatch) -> dict:
    return {
        "status": m.status,
        "lambda": m.lam,
        "residuals": list(m.residuals),
        "frame_map": m.frame_map,
    }


def _match(cfg: ExperimentConfig, g):
    M0 = models.build_model(g, cfg.points[0], cfg.k)
    out, iso_all, hom_all, hom_fail, iso_fail = [], True, True, False, True
    for j, q in enumerate(cfg.points[1:], start=1):
        Mj = models.build_model(g, q, cfg.k)
        iso = models.isometry_match(M0, Mj, n_starts=cfg.starts, tol=cfg.tol)
        entry = {"pair": [0, j], "isometry": _match_summary(iso)}
        try:
            hom = models.homothety_match(M0, Mj, n_starts=cfg.starts, tol=cfg.tol)
            entry["homothety"] = _match_summary(hom)
            if hom.converged:
                entry["homothety"]["operator_check"] = models.lemma12_equivalence_check(hom, M0, Mj)
            hstat = hom.status
        except models.NoScalingError as exc:
            entry["homothety"] = {"status": "no_match", "message": str(exc)}
            hstat = "no_match"
        iso_all &= iso.status == "success"
        iso_fail &= iso.status == "no_match"
        hom_all &= hstat == "success"
        hom_fail |= hstat == "no_match"
        out.append(entry)
    if iso_all:
        verdict = "isometry"
    elif hom_all and iso_fail:
        verdict = "homothety-not-isometry"
    elif hom_fail:
        verdict = "no-homothety"
    else:
        verdict = "inconclusive"
    return out, verdict


def _vsi(cfg: ExperimentConfig, g):
    res = lab.vsi_sweep(g, cfg.points, cfg.tol)
    detail = [{"point": p, "max_abs": max(abs(v) for v in weyl_scalars(g, p).values.values())} for p in cfg.points]
    summary = {"max_abs": res.max_abs, "worst_invariant": res.worst_invariant, "worst_point": res.worst_sample}
    return [summary] + detail, "VSI" if res.vsi else "not-VSI"


def _classify(cfg: ExperimentConfig, g):
    if not cfg.metric.startswith("walker."):
        raise ConfigError("classify needs a Walker metric", "metric.name")
    wf = zoo.walker_function(cfg.metric, **cfg.params)
    out, cs = [], []
    third = [wf.partials(p[0], p[1], 3).derivative((0, 3)) for p in cfg.points]
    if all(abs(t) < 1e-12 for t in third):

        def alpha(x):
            return 2.0 * wf.f(x, 1.0)  # f = alpha(x) y^2 / 2

        xs = sorted({p[0] for p in cfg.points})
        res = lab.classify_walker_alpha(alpha, xs)
        out.append({"branch": "f_yyy=0", "c3": res.c3, "residual": res.branch1_residual})
        return out, "alpha-power-law" if res.power_law() else "alpha-other"
    for p in cfg.points:
        c = zoo.homothety_invariant_c(wf, p)
        fr = zoo.walker_frame(wf, p)
        cs.append(c)
        out.append({"point": p, "c_122122": c, "lambda": fr.lam, "sign": fr.sign})
    spread = max(cs) - min(cs)
    if spread > 1e-9 * max(1.0, max(abs(c) for c in cs)):
        return out, "c-varies"
    c = cs[0]
    if abs(c - 1.0) < 1e-9:
        return out, "exponential"
    if abs(c - 1.5) < 1e-9:
        return out, "logarithmic"
    eps = (2 * c - 3) / (c - 1)
    out.append({"power_exponent": eps})
    return out, "power"


def _slice(cfg: ExperimentConfig, g):
    base = cfg.points[0]
    levels = sorted(set(cfg.slice_levels) | {1.0})
    arcs = lab.level_arc_lengths(g, levels, base)
    kappas = []
    out = []
    for c, d in zip(levels[:-1], levels[1:]):
        dist = abs(arcs[d] - arcs[c])
        kappas.append(dist / (d - c))
        out.append({"levels": [c, d], "distance": dist, "kappa": kappas[-1]})
    probe = lab.incompleteness_probe(g, base)
    out.append({"incompleteness": {"status": probe.status, "length": probe.length}})
    spread = (max(kappas) - min(kappas)) / max(kappas)
    verdict = "kappa-constant" if spread <= 1e-3 else "kappa-varies"
    return out, verdict, float(np.mean(kappas))


def _singer(cfg: ExperimentConfig, g):
    out = []
    profiles = []
    for p in cfg.points:
        sp = models.singer_profile(g, p, cfg.k)
        profiles.append(sp.dims)
        out.append({"point": p, "dims": list(sp.dims), "singer_number": sp.singer_number})
    return out, "constant-profile" if len(set(profiles)) == 1 else "varying-profile"


def _variable(cfg: ExperimentConfig, g):
    top = cfg.k + 1
    M0 = models.build_model(g, cfg.points[0], top)
    out, through = [], top
    for j, q in enumerate(cfg.points[1:], start=1):
        Mj = models.build_model(g, q, top)
        vm = models.variable_match(M0, Mj, n_starts=cfg.starts, tol=cfg.tol)
        entry = {"pair": [0, j], "levels": []}
        ok = -1
        for l, m in enumerate(vm.levels):
            entry["levels"].append({"level": l, "status": m.status, "lambda": m.lam, "residual": m.max_residual})
            if m.converged and ok == l - 1:
                ok = l
        through = min(through, ok)
        out.append(entry)
    return out, ("none" if through < 0 else f"variable-through-{through}")


def run(cfg: ExperimentConfig) -> tuple[dict, int]:
    """Execute ``cfg``; returns the report and the exit status (0 or 1)."""
    t0 = time.perf_counter()
    g = cfg.metric_field()
    extra = {}
    if cfg.command == "analyze":
        results, verdict = _analyze(cfg, g)
    elif cfg.command == "match":
        results, verdict = _match(cfg, g)
    elif cfg.command == "vsi":
        results, verdict = _vsi(cfg, g)
    elif cfg.command == "classify":
        results, verdict = _classify(cfg, g)
    elif cfg.command == "slice":
        results, verdict, kappa = _slice(cfg, g)
        extra["kappa"] = kappa
    elif cfg.command == "singer":
        results, verdict = _singer(cfg, g)
    else:
        results, verdict = _variable(cfg, g)

    ok = cfg.expect is None or verdict == cfg.expect
    checks = {}
    if cfg.expect_lambda is not None:
        lam = None
        for r in results:
            hom = r.get("homothety", {}) if isinstance(r, dict) else {}
            if "lambda" in hom:
                lam = hom["lambda"]
                break
        good = lam is not None and abs(lam - cfg.expect_lambda) <= 1e-7 * max(1.0, abs(cfg.expect_lambda))
        checks["lambda"] = {"measured": lam, "expected": cfg.expect_lambda, "ok": good}
        ok &= good
    if cfg.expect_kappa is not None:
        kap = extra.get("kappa")
        good = kap is not None and abs(kap - cfg.expect_kappa) <= 1e-3
        checks["kappa"] = {"measured": kap, "expected": cfg.expect_kappa, "ok": good}
        ok &= good
    report = {
        "config": cfg.echo(),
        "results": results,
        "verdict": {"value": verdict, "expected": cfg.expect, "ok": bool(ok), "checks": checks, **extra},
        "timing": {"seconds": time.perf_counter() - t0} if cfg.timing else None,
    }
    return report, 0 if ok else 1


def summary_line(report: dict) -> str:
    v = report["verdict"]
    cfg = report["config"]
    state = "PASS" if v["ok"] else "FAIL"
    exp = f" (expected {v['expected']})" if v["expected"] is not None else ""
    return f"{state} {cfg['command']} {cfg['metric']}: {v['value']}{exp}"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hcg", description="Curvature-model experiments on coordinate metrics.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, type=Path, help="key = value experiment file")
    p.add_argument("--out", type=Path, help="write the JSON report here (default: stdout)")
    p.add_argument("--tol", type=float, help="override the success tolerance")
    p.add_argument("--k", type=int, help="override the curvature level (0, 1 or 2)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.config.read_text()
    except OSError as exc:
        print(f"hcg: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = validate_config(text, args.command)
        if args.k is not None:
            check_level(args.k)
            cfg.k = args.k
        if args.tol is not None:
            if not args.tol > 0:
                raise ConfigError("tol must be positive", "tol")
            cfg.tol = args.tol
        report, status = run(cfg)
    except ConfigError as exc:
        print(f"hcg: config error in {args.config}: {exc}", file=sys.stderr)
        return 2
    text_out = serialize(report)
    if args.out is not None:
        args.out.write_text(text_out)
        print(summary_line(report))
    else:
        sys.stdout.write(text_out)
        print(summary_line(report), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
