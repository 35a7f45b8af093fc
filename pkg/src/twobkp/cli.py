"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field

from .coeffield import parse_scalar
from .report import CheckReport
from .ring.lseries import WindowError
from .ring.params import HierarchyParams
from .ring.tpoly import TPoly

DEFAULT_WEIGHT = 12


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    N: int = 3
    t: list = field(default_factory=list)
    weight_cap: int | None = None
    z_window: int | None = None
    m_max: int = 0
    k_max: int | None = None
    x_order: int = 3
    source: str = "gaussian"
    tau_file: str | None = None
    fmt: str = "json"
    output: str | None = None
    explain_window: bool = False

    def validate(self):
        if self.N < 3:
            raise InputError("N must be >= 3")
        if self.weight_cap is not None and self.weight_cap < 1:
            raise InputError("weight cap must be >= 1")
        if self.m_max < 0:
            raise InputError("m-max must be >= 0")
        if self.x_order < 0:
            raise InputError("x-order must be >= 0")


def _weight(cfg: RunConfig) -> int:
    return DEFAULT_WEIGHT if cfg.weight_cap is None else cfg.weight_cap


def _point(cfg: RunConfig):
    from .gaussian import DeformationPoint

    try:
        vals = [parse_scalar(s) for s in cfg.t] if cfg.t else [parse_scalar("0")] * cfg.N
        return DeformationPoint(cfg.N, tuple(vals))
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def run_gaussian(cfg: RunConfig, explain: list) -> CheckReport:
    from .gaussian import assemble, verify_structure
    from .hirota import hirota_check, required_cap

    point = _point(cfg)
    cap = _weight(cfg)
    tau_cap = required_cap(cfg.N, cfg.m_max, cap)
    explain.append(f"Omega_m to weight {cap} for m <= {cfg.m_max} reads z1^-(m h), h = {point.h}: "
                   f"tau assembled to weight {cap} + {cfg.m_max}*{point.h} = {tau_cap}")
    model = assemble(point, tau_cap)
    rep = CheckReport(command="gaussian", config={"N": cfg.N, "t": point.to_json(), "weight_cap": cap,
                                                  "tau_cap": tau_cap, "m_max": cfg.m_max})
    rep.extend(verify_structure(model), prefix="structure:")
    rep.extend(hirota_check(model.tau, cfg.m_max, cap), prefix="hirota:")
    rep.tables["W"] = model.w_table_json()
    rep.tables["psi0"] = {f"{a}": model.psi0[a].to_json() for a in (1, 2)}
    rep.tables["tau"] = model.tau.to_json()
    return rep


def load_tau(path: str) -> TPoly:
    try:
        with open(path) as fh:
            obj = json.load(fh)
        return TPoly.from_json(obj)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read tau file {path!r}: {exc}") from exc


def run_hirota(cfg: RunConfig, explain: list) -> CheckReport:
    from .hirota import hirota_check

    if not cfg.tau_file:
        raise InputError("hirota-check needs --tau-file")
    tau = load_tau(cfg.tau_file)
    h = tau.table.params.h
    cap = cfg.weight_cap
    if cap is None:
        if tau.cap is None:
            raise InputError("exact tau: pass --weight")
        cap = tau.cap - cfg.m_max * h
    explain.append(f"tau known to weight {tau.cap}; Omega_m for m <= {cfg.m_max} needs {cap} + m*{h} <= {tau.cap}")
    try:
        return hirota_check(tau, cfg.m_max, cap)
    except WindowError as exc:
        raise InputError(str(exc)) from exc


def run_virasoro(cfg: RunConfig, explain: list) -> CheckReport:
    from .virasoro import virasoro_report

    cap = _weight(cfg)
    explain.append(f"commutators on all monomials of weight <= {cap}; vertex series compared on the common window")
    return virasoro_report(cfg.N, cap)


def run_descendant(cfg: RunConfig, explain: list) -> CheckReport:
    from .descendant import verify_descendant

    h = HierarchyParams(cfg.N).h
    k_max = 3 * (h + 1) if cfg.k_max is None else cfg.k_max
    D = cfg.x_order + h
    explain.append(f"psi_k(0) for k <= {k_max} + {D}; wave expanded to x-order {cfg.x_order} + h = {D}; "
                   f"component 2 known down to z2^-{k_max}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return verify_descendant(cfg.N, k_max, cfg.x_order, cfg.z_window)


def run_grassmannian(cfg: RunConfig, explain: list) -> CheckReport:
    from .grassmannian import span_from_wave, subspace_checks, vacuum_wave

    D = cfg.x_order
    if cfg.source == "vacuum":
        w = vacuum_wave(cfg.N, D)
    elif cfg.source == "gaussian":
        from .gaussian import assemble, direct_wave

        cap = max(_weight(cfg), D * (cfg.N - 1) + 2 * cfg.N)
        explain.append(f"spectral pair solved to weight {cap}")
        w = direct_wave(assemble(_point(cfg), cap), D)
    elif cfg.source == "descendant":
        from .descendant import expand_wave

        h = HierarchyParams(cfg.N).h
        k_max = 4 * (h + 1) if cfg.k_max is None else cfg.k_max
        explain.append(f"descendant wave with psi_k for k <= {k_max}")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            w = expand_wave(cfg.N, k_max, D)
    else:
        raise InputError(f"unknown source {cfg.source!r}")
    point = span_from_wave(w)
    rep = subspace_checks(point)
    rep.config.update({"source": cfg.source, "windows": point.windows()})
    return rep


RUNNERS = {
    "gaussian": run_gaussian,
    "hirota-check": run_hirota,
    "virasoro-check": run_virasoro,
    "descendant": run_descendant,
    "grassmannian-check": run_grassmannian,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twobkp", description="Exact checks for the D_N Kac-Wakimoto hierarchy.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="rank N >= 3")
    common.add_argument("--weight", type=int, default=None, help=f"weight cap (default {DEFAULT_WEIGHT})")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    common.add_argument("--explain-window", action="store_true", help="print the window sizing to stderr")
    sub = p.add_subparsers(dest="command", required=True)
    g = sub.add_parser("gaussian", parents=[common], help="Gaussian tau: structure and Hirota checks")
    g.add_argument("--t", required=True, help="comma-separated scalars t_1,...,t_N")
    g.add_argument("--m-max", type=int, default=1)
    hc = sub.add_parser("hirota-check", parents=[common], help="Hirota check of a tau read from JSON")
    hc.add_argument("--tau-file", required=True)
    hc.add_argument("--m-max", type=int, default=0)
    sub.add_parser("virasoro-check", parents=[common], help="vertex-operator commutators and grading")
    d = sub.add_parser("descendant", parents=[common], help="psi tables and the wave-function equations")
    d.add_argument("--k-max", type=int, default=None)
    d.add_argument("--x-order", type=int, default=3)
    d.add_argument("--z-window", type=int, default=None)
    gr = sub.add_parser("grassmannian-check", parents=[common], help="subspace checks for a wave")
    gr.add_argument("--source", choices=("vacuum", "gaussian", "descendant"), default="gaussian")
    gr.add_argument("--t", default=None)
    gr.add_argument("--k-max", type=int, default=None)
    gr.add_argument("--x-order", type=int, default=4)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    default_N = 4 if ns.command == "descendant" else 3
    t = getattr(ns, "t", None)
    return RunConfig(
        command=ns.command,
        N=ns.n if ns.n is not None else default_N,
        t=[s for s in t.split(",")] if t else [],
        weight_cap=ns.weight,
        z_window=getattr(ns, "z_window", None),
        m_max=getattr(ns, "m_max", 0),
        k_max=getattr(ns, "k_max", None),
        x_order=getattr(ns, "x_order", 3),
        source=getattr(ns, "source", "gaussian"),
        tau_file=getattr(ns, "tau_file", None),
        fmt=ns.format,
        output=ns.output,
        explain_window=ns.explain_window,
    )


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute ``cfg``; returns the exit code and the rendered report."""
    explain: list = []
    try:
        cfg.validate()
        rep = RUNNERS[cfg.command](cfg, explain)
    except InputError as exc:
        return 2, f"error: {exc}\n"
    except WindowError as exc:
        return 2, f"error: {exc}\n"
    if cfg.explain_window:
        for line in explain:
            print(line, file=sys.stderr)
    text = rep.dumps() if cfg.fmt == "json" else rep.to_text()
    text = text if text.endswith("\n") else text + "\n"
    return (0 if rep.passed else 1), text


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    code, text = run(cfg)
    if code == 2:
        sys.stderr.write(text)
        return code
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code
