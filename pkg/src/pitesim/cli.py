"""Deterministic experiment runner.

Subcommands
    run       execute one experiment from a JSON config, write CSV + manifest
    validate  static config diagnostics as JSON on stdout
    cost      one-shot analytic cost query, JSON on stdout

Experiments and CSV schemas (header order is the contract; floats are written
with repr, i.e. shortest round-trip decimals; LF line endings; rows sorted by
the identity columns so output bytes do not depend on scheduling):

    pite-sweep            pite_sweep.csv
        seed,n,K,mode,trotter_order,r,gamma,shift,P_K,delta_K,depth_measured,depth_formula
        trotter_order 0 marks exact-step rows (r = 0, depth_measured = 0 there).
    qpe-sweep             qpe_sweep.csv
        seed,n,K,mode,trotter_order,r,t0,k_selected,P_k,delta,depth_formula
        trotter_order 0 marks exact-unitary rows; r is echoed on every row
        because the depth formula depends on it either way.
    qaa-sweep             qaa_sweep.csv
        seed,n,K,c1_abs,P_before,m_star,m_used,P_after,delta_post,depth_formula
    weight-sweep          weight_sweep.csv
        seed,n,K,method,sigma,c1_abs,P,delta
        method "pite" reports (P_K, delta_K); "qpe" reports (P_k, delta).
    cost-sweep            cost.csv
        method,c1_abs,delta_target,K_needed,depth_total,expected_repetitions,cost
    trotter-order-study   trotter_order_study.csv
        seed,n,order,r,t,error

All depth_formula columns share one depth unit: d_CRTE measured as the layer
depth of a single controlled order-4 Suzuki block compiled down to CNOTs and
one-qubit gates (13 CNOTs per controlled two-qubit factor).  The manifest
records that number together with every default that affects output values.

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 resource guard.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .costs import (
    DepthParams,
    d_qft,
    depth_pite,
    depth_pite_qaa,
    depth_qpe,
    steps_estimate,
    total_cost,
)
from .kak import controlled_two_qubit
from .pite import run_pite, schedule_from_spectrum
from .qaa import optimal_repetitions, run_multistep_pite_qaa
from .qpe import ancillas_for_target, configure_qpe, qpe_run
from .spinchain import build_chain, diagonalize, even_odd_split, prepare_initial_state
from .statevector import Circuit, PostSelectionError
from .trotter import TrotterPlan, suzuki_sequence

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_RESOURCE = 4

DENSE_LIMIT = 12
REGISTER_LIMIT = 18
GAMMA_SINGULARITY = 1.0 / math.sqrt(2.0)

CSV_NAMES = {
    "pite-sweep": "pite_sweep.csv",
    "qpe-sweep": "qpe_sweep.csv",
    "qaa-sweep": "qaa_sweep.csv",
    "weight-sweep": "weight_sweep.csv",
    "cost-sweep": "cost.csv",
    "trotter-order-study": "trotter_order_study.csv",
}

HEADERS = {
    "pite-sweep": [
        "seed", "n", "K", "mode", "trotter_order", "r", "gamma", "shift",
        "P_K", "delta_K", "depth_measured", "depth_formula",
    ],
    "qpe-sweep": [
        "seed", "n", "K", "mode", "trotter_order", "r", "t0", "k_selected",
        "P_k", "delta", "depth_formula",
    ],
    "qaa-sweep": [
        "seed", "n", "K", "c1_abs", "P_before", "m_star", "m_used", "P_after",
        "delta_post", "depth_formula",
    ],
    "weight-sweep": ["seed", "n", "K", "method", "sigma", "c1_abs", "P", "delta"],
    "cost-sweep": [
        "method", "c1_abs", "delta_target", "K_needed", "depth_total",
        "expected_repetitions", "cost",
    ],
    "trotter-order-study": ["seed", "n", "order", "r", "t", "error"],
}

DEFAULTS = {
    "pite-sweep": {
        "n": 8, "seed": 42, "periodic": True, "k_min": 1, "k_max": 10,
        "orders": [1, 2, 4], "r": 4, "gamma": 0.8, "shift": True,
        "kappa_bar": 1.0, "compile": "kak",
    },
    "qpe-sweep": {
        "n": 6, "seed": 11, "periodic": True, "k_min": 1, "k_max": 8,
        "orders": [1, 4], "r": 4,
    },
    "qaa-sweep": {
        "n": 8, "seed": 42, "periodic": True, "steps": 8,
        "c1_exponents": [1, 2, 3, 4, 5], "gamma": 0.8, "shift": True,
    },
    "weight-sweep": {
        "n": 8, "seed": 42, "periodic": True, "steps": 6,
        "i_values": list(range(1, 30, 2)), "gamma": 0.8, "shift": True,
    },
    "cost-sweep": {
        "n": 8, "c1_exponents": [1, 2, 3, 4, 5], "delta_target": 1e-4,
        "d_crte": 10.0, "gap_scaled": 1.0, "r": 4,
    },
    "trotter-order-study": {
        "n": 8, "seed": 42, "periodic": True, "t": 1.0,
        "orders": [1, 2, 4], "r_values": [1, 2, 4, 8, 16],
    },
}

RESOURCE_CODES = {"dense-limit", "register-limit"}


def config_hash(cfg: dict) -> str:
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def resolve_config(raw: dict) -> tuple[str, dict, list[dict]]:
    """Merge defaults under the raw keys and collect static diagnostics."""
    diags: list[dict] = []
    exp = raw.get("experiment")
    if exp not in DEFAULTS:
        diags.append({
            "level": "error", "code": "unknown-experiment",
            "message": f"experiment must be one of {sorted(DEFAULTS)}, got {exp!r}",
        })
        return exp or "", dict(raw), diags
    cfg = dict(DEFAULTS[exp])
    for key, value in raw.items():
        if key in ("experiment", "out"):
            continue
        if key not in cfg:
            diags.append({
                "level": "error", "code": "unknown-key",
                "message": f"config key {key!r} is not valid for {exp}",
            })
            continue
        cfg[key] = value
    diags.extend(validate_config(exp, cfg))
    return exp, cfg, diags


def validate_config(exp: str, cfg: dict) -> list[dict]:
    diags: list[dict] = []

    def err(code: str, message: str) -> None:
        diags.append({"level": "error", "code": code, "message": message})

    n = int(cfg.get("n", 0))
    if n > DENSE_LIMIT:
        err("dense-limit", f"n={n} exceeds the dense-simulation limit of {DENSE_LIMIT} spins")
    elif n < 2:
        err("bad-range", "n must be at least 2")
    gamma = cfg.get("gamma")
    if gamma is not None:
        if not 0.0 < float(gamma) < 1.0:
            err("bad-range", "gamma must lie in (0, 1)")
        elif abs(float(gamma) - GAMMA_SINGULARITY) < 1e-9:
            err("gamma-singularity", "gamma at 1/sqrt(2) makes the step parameters singular")
    if "k_min" in cfg and (int(cfg["k_min"]) < 1 or int(cfg["k_max"]) < int(cfg["k_min"])):
        err("bad-range", "need 1 <= k_min <= k_max")
    if "steps" in cfg and int(cfg["steps"]) < 1:
        err("bad-range", "steps must be >= 1")
    if "r" in cfg and int(cfg["r"]) < 1:
        err("bad-range", "r must be >= 1")
    if "delta_target" in cfg and not float(cfg["delta_target"]) > 0.0:
        err("bad-range", "delta_target must be positive")
    if exp == "qpe-sweep" and n + int(cfg.get("k_max", 0)) > REGISTER_LIMIT:
        err("register-limit", f"n + k_max exceeds {REGISTER_LIMIT} qubits")
    if exp == "qaa-sweep" and n + int(cfg.get("steps", 0)) > REGISTER_LIMIT:
        err("register-limit", f"n + steps exceeds {REGISTER_LIMIT} qubits")
    return diags


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[dict]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(row[h]) for h in header) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _linfit(x, y) -> tuple[float, float, float]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    design = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    pred = design @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(coef[0]), float(coef[1]), r2


def measure_crte_depth(h1_terms, h2_terms, n: int, order: int = 4, t_unit: float = 0.1) -> int:
    """Layer depth of one controlled Suzuki block, CNOT-level compile."""
    seq = suzuki_sequence(TrotterPlan(order, 1), h1_terms, h2_terms, t_unit, n)
    circ = Circuit(n + 1)
    for op in seq.ops:
        circ.extend(controlled_two_qubit(op.matrix, op.targets, n, num_qubits=n + 1).ops)
    return circ.depth_by_layer()


def _instance(cfg: dict):
    chain = build_chain(int(cfg["n"]), bool(cfg["periodic"]), int(cfg["seed"]))
    return chain, diagonalize(chain)


# --- per-experiment point lists and row workers ------------------------------

def _points_pite(cfg):
    pts = []
    for K in range(int(cfg["k_min"]), int(cfg["k_max"]) + 1):
        pts.append({"K": K, "order": 0})
        pts.extend({"K": K, "order": int(o)} for o in cfg["orders"])
    return pts


def _row_pite(cfg, pt):
    chain, spec = _instance(cfg)
    init, _ = prepare_initial_state(spec, kind="uniform")
    h1, h2 = even_odd_split(chain)
    sched = schedule_from_spectrum(spec, pt["K"], cfg["gamma"], cfg["kappa_bar"])
    if pt["order"] == 0:
        res = run_pite(init, spec, sched, cfg["gamma"], mode="exact-step", shift=cfg["shift"])
        mode, r_used = "exact-step", 0
    else:
        res = run_pite(
            init, spec, sched, cfg["gamma"], mode="circuit",
            trotter=TrotterPlan(pt["order"], int(cfg["r"])), shift=cfg["shift"],
            h1_terms=h1, h2_terms=h2, compile_crte=cfg["compile"],
        )
        mode, r_used = "circuit", int(cfg["r"])
    return {
        "seed": cfg["seed"], "n": cfg["n"], "K": pt["K"], "mode": mode,
        "trotter_order": pt["order"], "r": r_used, "gamma": cfg["gamma"],
        "shift": bool(cfg["shift"]), "P_K": res.P_K, "delta_K": res.delta_K,
        "depth_measured": res.depth,
        "depth_formula": depth_pite(pt["K"], cfg["d_crte_measured"]),
    }


def _points_qpe(cfg):
    pts = []
    for K in range(int(cfg["k_min"]), int(cfg["k_max"]) + 1):
        pts.append({"K": K, "order": 0})
        pts.extend({"K": K, "order": int(o)} for o in cfg["orders"])
    return pts


def _row_qpe(cfg, pt):
    chain, spec = _instance(cfg)
    init, _ = prepare_initial_state(spec, kind="uniform")
    h1, h2 = even_odd_split(chain)
    qcfg = configure_qpe(spec, pt["K"], int(cfg["r"]))
    if pt["order"] == 0:
        out = qpe_run(init, spec, qcfg)
        mode = "exact-unitary"
    else:
        out = qpe_run(init, spec, qcfg, mode="trotter", order=pt["order"], h1_terms=h1, h2_terms=h2)
        mode = "trotter"
    return {
        "seed": cfg["seed"], "n": cfg["n"], "K": pt["K"], "mode": mode,
        "trotter_order": pt["order"], "r": int(cfg["r"]), "t0": qcfg.t0,
        "k_selected": out.selected_k, "P_k": out.P_k, "delta": out.delta,
        "depth_formula": depth_qpe(pt["K"], int(cfg["r"]), cfg["d_crte_measured"], d_qft(pt["K"])),
    }


def _points_qaa(cfg):
    return [{"exponent": int(e)} for e in cfg["c1_exponents"]]


def _row_qaa(cfg, pt):
    chain, spec = _instance(cfg)
    dim = 2 ** int(cfg["n"])
    c1 = 2.0 ** -pt["exponent"]
    weights = np.full(dim, math.sqrt((1.0 - c1**2) / (dim - 1)))
    weights[0] = c1
    init, _ = prepare_initial_state(spec, kind="explicit", weights=weights)
    sched = schedule_from_spectrum(spec, int(cfg["steps"]), cfg["gamma"])
    res = run_multistep_pite_qaa(
        init, spec, sched, cfg["gamma"], shift=cfg["shift"],
        depth_params=DepthParams(d_crte=cfg["d_crte_measured"]),
    )
    return {
        "seed": cfg["seed"], "n": cfg["n"], "K": int(cfg["steps"]), "c1_abs": c1,
        "P_before": res.P_before, "m_star": res.m_star, "m_used": res.m_used,
        "P_after": res.P_after, "delta_post": res.delta_post,
        "depth_formula": res.depth_formula,
    }


def _points_weight(cfg):
    return [{"method": m, "i": int(i)} for m in ("pite", "qpe") for i in cfg["i_values"]]


def _row_weight(cfg, pt):
    chain, spec = _instance(cfg)
    h1, h2 = even_odd_split(chain)
    sigma = 30.0 / pt["i"]
    init, coeffs = prepare_initial_state(spec, kind="gaussian", sigma=sigma)
    K = int(cfg["steps"])
    if pt["method"] == "pite":
        sched = schedule_from_spectrum(spec, K, cfg["gamma"])
        res = run_pite(init, spec, sched, cfg["gamma"], mode="exact-step", shift=cfg["shift"])
        prob, delta = res.P_K, res.delta_K
    else:
        out = qpe_run(init, spec, configure_qpe(spec, K))
        prob, delta = out.P_k, out.delta
    return {
        "seed": cfg["seed"], "n": cfg["n"], "K": K, "method": pt["method"],
        "sigma": sigma, "c1_abs": float(abs(coeffs[0])), "P": prob, "delta": delta,
    }


def _points_cost(cfg):
    methods = ("pite", "pite+qaa", "qpe", "qpe+aa")
    return [{"method": m, "exponent": int(e)} for m in methods for e in cfg["c1_exponents"]]


def _row_cost(cfg, pt):
    return _cost_row_at(cfg, pt["method"], 2.0 ** -pt["exponent"])


def _cost_row_at(cfg: dict, method: str, c1: float) -> dict:
    delta = float(cfg["delta_target"])
    d = float(cfg["d_crte"])
    gap = float(cfg["gap_scaled"])
    if method in ("pite", "pite+qaa"):
        k_needed = max(1, math.ceil(steps_estimate(c1, delta)))
        if method == "pite":
            depth_total = depth_pite(k_needed, d)
            repetitions = (1.0 - delta) / c1**2
        else:
            m_star = optimal_repetitions(min(1.0, c1**2 / (1.0 - delta)))
            depth_total = depth_pite_qaa(m_star, k_needed, int(cfg["n"]), DepthParams(d_crte=d))
            repetitions = (math.pi / 4.0) * math.sqrt(1.0 - delta) / c1
    else:
        k_needed = ancillas_for_target(c1, delta, gap)
        depth_total = depth_qpe(k_needed, int(cfg["r"]), d, d_qft(k_needed))
        if method == "qpe":
            repetitions = (1.0 - delta) / c1**2
        else:
            repetitions = (math.pi / 4.0) * math.sqrt(1.0 - delta) / c1
    return {
        "method": method, "c1_abs": c1, "delta_target": delta, "K_needed": k_needed,
        "depth_total": depth_total, "expected_repetitions": repetitions,
        "cost": total_cost(method, c1, delta, d_crte=d, gap_scaled=gap),
    }


def _points_trotter(cfg):
    return [{"order": int(o), "r": int(r)} for o in cfg["orders"] for r in cfg["r_values"]]


def _row_trotter(cfg, pt):
    chain, spec = _instance(cfg)
    h1, h2 = even_odd_split(chain)
    t = float(cfg["t"])
    seq = suzuki_sequence(TrotterPlan(pt["order"], pt["r"]), h1, h2, t, int(cfg["n"]))
    approx = seq.dense(max_qubits=DENSE_LIMIT)
    exact = spec.function_dense(lambda lams: np.exp(1j * t * lams))
    return {
        "seed": cfg["seed"], "n": cfg["n"], "order": pt["order"], "r": pt["r"],
        "t": t, "error": float(np.max(np.abs(approx - exact))),
    }


EXPERIMENTS = {
    "pite-sweep": (_points_pite, _row_pite, lambda r: (r["K"], r["trotter_order"])),
    "qpe-sweep": (_points_qpe, _row_qpe, lambda r: (r["K"], r["trotter_order"])),
    "qaa-sweep": (_points_qaa, _row_qaa, lambda r: (-r["c1_abs"],)),
    "weight-sweep": (_points_weight, _row_weight, lambda r: (r["method"], r["sigma"])),
    "cost-sweep": (_points_cost, _row_cost, lambda r: (r["method"], -r["c1_abs"])),
    "trotter-order-study": (_points_trotter, _row_trotter, lambda r: (r["order"], r["r"])),
}

NEEDS_CHAIN = {"pite-sweep", "qpe-sweep", "qaa-sweep", "weight-sweep", "trotter-order-study"}
NEEDS_D_CRTE = {"pite-sweep", "qpe-sweep", "qaa-sweep"}


def _worker(args):
    exp, cfg, pt = args
    return EXPERIMENTS[exp][1](cfg, pt)


def _fits(exp: str, cfg: dict, rows: list[dict]) -> dict:
    """Least-squares slopes recorded for downstream consumers."""
    fits: dict = {}
    if exp == "pite-sweep":
        conv = [r for r in rows if r["trotter_order"] == 0 and 0.0 < r["delta_K"] < 0.5]
        if len(conv) >= 3:
            slope, _, r2 = _linfit([math.log(1.0 / r["delta_K"]) for r in conv],
                                   [r["K"] for r in conv])
            fits["steps_vs_log_inv_delta"] = {
                "slope": slope, "r_squared": r2, "window": [r["K"] for r in conv],
            }
    elif exp == "qpe-sweep":
        conv = sorted((r for r in rows if r["trotter_order"] == 0 and 0.0 < r["delta"] < 0.5),
                      key=lambda r: r["K"])
        ratios = [conv[i]["delta"] / conv[i + 1]["delta"] for i in range(len(conv) - 1)]
        if ratios:
            fits["delta_drop_per_ancilla"] = {
                "ratios": ratios, "min": min(ratios), "max": max(ratios),
            }
    elif exp == "qaa-sweep":
        lx = [math.log(1.0 / r["c1_abs"]) for r in rows]
        slope_m, _, r2_m = _linfit(lx, [math.log(r["m_star"]) for r in rows])
        slope_p, _, r2_p = _linfit(lx, [math.log(1.0 / r["P_before"]) for r in rows])
        fits["m_star_vs_inv_c1"] = {"slope": slope_m, "r_squared": r2_m}
        fits["inv_P_vs_inv_c1"] = {"slope": slope_p, "r_squared": r2_p}
    elif exp == "cost-sweep":
        for method in ("pite", "pite+qaa", "qpe", "qpe+aa"):
            sub = [r for r in rows if r["method"] == method]
            slope, _, r2 = _linfit([math.log(1.0 / r["c1_abs"]) for r in sub],
                                   [math.log(r["cost"]) for r in sub])
            fits[method] = {"slope": slope, "r_squared": r2}
    elif exp == "trotter-order-study":
        for order in sorted({r["order"] for r in rows}):
            sub = [r for r in rows if r["order"] == order]
            conv = [r for r in sub if r["error"] < 0.5] or sub
            slope, _, r2 = _linfit([math.log(r["r"]) for r in conv],
                                   [math.log(r["error"]) for r in conv])
            fits[f"order{order}"] = {
                "slope": slope, "r_squared": r2, "window": [r["r"] for r in conv],
            }
    return fits


def run_experiment(exp: str, cfg: dict, out_dir: Path, threads: int) -> dict:
    points_fn, _, sort_key = EXPERIMENTS[exp]
    cfg = dict(cfg)

    chain = spectrum = None
    if exp in NEEDS_CHAIN:
        chain, spectrum = _instance(cfg)
    if exp in NEEDS_D_CRTE:
        h1, h2 = even_odd_split(chain)
        cfg["d_crte_measured"] = measure_crte_depth(h1, h2, int(cfg["n"]))

    tasks = [(exp, cfg, pt) for pt in points_fn(cfg)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_worker, tasks))
    else:
        rows = [_worker(t) for t in tasks]
    rows.sort(key=sort_key)

    out_dir.mkdir(parents=True, exist_ok=True)
    csv_name = CSV_NAMES[exp]
    write_csv(out_dir / csv_name, HEADERS[exp], rows)

    manifest = {
        "version": __version__,
        "experiment": exp,
        "config": {k: v for k, v in cfg.items() if k != "d_crte_measured"},
        "config_hash": config_hash({k: v for k, v in cfg.items() if k != "d_crte_measured"}),
        "defaults": {
            "gamma": 0.8,
            "energy_shift_branch": "minimal |E_k| over adjacent branches",
            "kappa_bar": 1.0,
            "s0_depth_model": {"c0": 4, "c1": 2},
            "d_uref": 0,
            "qpe_offset": "lambda_1 (ground eigenvalue)",
            "qpe_r": 4,
            "d_crte_definition": "layer depth of one controlled order-4 Suzuki block, CNOT-level compile",
        },
        "files": {csv_name: {"rows": len(rows), "config_hash": config_hash(
            {k: v for k, v in cfg.items() if k != "d_crte_measured"})}},
        "fits": _fits(exp, cfg, rows),
    }
    if "d_crte_measured" in cfg:
        manifest["d_crte_measured"] = cfg["d_crte_measured"]
    if chain is not None:
        manifest["chain"] = {
            "n": chain.n, "periodic": chain.periodic, "seed": chain.seed,
            "fields": [float(h) for h in chain.fields],
            "edges": [list(e) for e in chain.edges],
        }
        manifest["spectrum"] = {
            "lambda1": spectrum.lambda1, "lambda2": spectrum.lambda2,
            "lambda_max": spectrum.lambda_max, "gap_min": spectrum.gap_min,
        }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest


def _cmd_run(args) -> int:
    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": f"cannot read config: {exc}"}), file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        raw["seed"] = args.seed
    exp, cfg, diags = resolve_config(raw)
    errors = [d for d in diags if d["level"] == "error"]
    if errors:
        print(json.dumps({"diagnostics": diags}, indent=2))
        if any(d["code"] in RESOURCE_CODES for d in errors):
            return EXIT_RESOURCE
        return EXIT_CONFIG
    out_dir = Path(args.out if args.out is not None else raw.get("out", "results"))
    try:
        manifest = run_experiment(exp, cfg, out_dir, max(1, args.threads))
    except PostSelectionError as exc:
        print(json.dumps({"error": f"numerical failure: {exc}"}), file=sys.stderr)
        return EXIT_NUMERICAL
    print(json.dumps({
        "experiment": exp,
        "out": str(out_dir),
        "rows": manifest["files"][CSV_NAMES[exp]]["rows"],
        "config_hash": manifest["config_hash"],
    }))
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": f"cannot read config: {exc}"}), file=sys.stderr)
        return EXIT_CONFIG
    _, _, diags = resolve_config(raw)
    print(json.dumps({"diagnostics": diags}, indent=2))
    return EXIT_OK


def _cmd_cost(args) -> int:
    if args.method not in ("pite", "pite+qaa", "qpe", "qpe+aa"):
        print(json.dumps({"error": f"unknown method {args.method!r}"}), file=sys.stderr)
        return EXIT_CONFIG
    if not 0.0 < args.c1 < 1.0 or args.delta <= 0.0:
        print(json.dumps({"error": "need 0 < c1 < 1 and delta > 0"}), file=sys.stderr)
        return EXIT_CONFIG
    cfg = dict(DEFAULTS["cost-sweep"])
    cfg.update(delta_target=args.delta, d_crte=args.d_crte, gap_scaled=args.gap, n=args.n, r=args.r)
    print(json.dumps(_cost_row_at(cfg, args.method, args.c1), sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pitesim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a JSON config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--threads", type=int, default=1)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="static config diagnostics")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(func=_cmd_validate)

    p_cost = sub.add_parser("cost", help="one-shot analytic cost query")
    p_cost.add_argument("--method", required=True)
    p_cost.add_argument("--c1", type=float, required=True)
    p_cost.add_argument("--delta", type=float, required=True)
    p_cost.add_argument("--d-crte", type=float, default=10.0, dest="d_crte")
    p_cost.add_argument("--gap", type=float, default=1.0)
    p_cost.add_argument("--n", type=int, default=8)
    p_cost.add_argument("--r", type=int, default=4)
    p_cost.set_defaults(func=_cmd_cost)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
