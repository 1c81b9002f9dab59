"""Batch front end: run any symmetry test, cross-validate the methods, and
emit machine-readable reports (JSON or CSV).  Sweep-style commands can also
render a figure of the report data to a file alongside the delimited output.

Exit codes: 0 success, 2 validation failure, 3 numeric non-convergence.
Identical configuration and seed produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import models, plotting, serialize
from .groups import PermutationRep, UnitaryRepTable, parse_group_spec
from .hamiltonian import (
    HamiltonianSpec,
    abelian_otoc,
    block_encoding_acceptance,
    covariance_acceptance,
    dme_acceptance,
    dqc1_reduction_check,
)
from .linalg import DensityMatrix, PureState, random_unitary, schatten_norm
from .separability import (
    acceptance_bell,
    acceptance_direct,
    acceptance_for_kind,
    acceptance_group,
    acceptance_recurrence,
    gate_count,
    group_for_kind,
    resources_to_rejection,
)
from .states import (
    ProverConfig,
    bose_acceptance,
    bose_circuit_sample,
    max_symmetric_fidelity,
    phase_rep,
    prover_acceptance,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3


@dataclass
class RunConfig:
    """Validated run parameters for one CLI invocation."""

    command: str
    state: str | None = None
    ham: str | None = None
    unitary: str | None = None
    group: str | None = None
    groups: tuple[str, ...] = ()
    t_grid: tuple[float, ...] = ()
    k_grid: tuple[int, ...] = ()
    shots: int = 0
    seed: int | None = None
    out: str = "-"
    fmt: str = "json"
    plot: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        sources = [s for s in (self.state, self.ham, self.unitary) if s]
        if len(sources) != 1:
            raise ValueError("exactly one input source (state, Hamiltonian, or unitary) is required")
        if self.shots > 0 and self.seed is None:
            raise ValueError("a seed is mandatory when shots > 0")
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"unknown format {self.fmt!r}")


def _resolve_state(spec: str):
    if spec.startswith("@"):
        return serialize.load_state(spec[1:])
    obj = models.fixture(spec).obj
    if not isinstance(obj, (PureState, DensityMatrix)):
        raise ValueError(f"fixture {spec!r} is not a state")
    return obj


def _as_density(state) -> DensityMatrix:
    return state.density() if isinstance(state, PureState) else state


def _resolve_ham(spec: str) -> HamiltonianSpec:
    if spec.startswith("@"):
        return serialize.load_hamiltonian(spec[1:])
    if spec.startswith("pauli:"):
        body = spec[len("pauli:"):]
        expr, _, coeffs = body.partition(":")
        cs = [float(c) for c in coeffs.split(",")] if coeffs else None
        return HamiltonianSpec.from_pauli(expr, cs)
    obj = models.fixture(spec).obj
    if not isinstance(obj, HamiltonianSpec):
        raise ValueError(f"fixture {spec!r} is not a Hamiltonian")
    return obj


def _resolve_rep(spec: str, dims) -> PermutationRep | UnitaryRepTable:
    """Build a representation matching the given subsystem dimensions."""
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    if spec.startswith("table:"):
        mats = serialize.load_unitary_table(spec[len("table:"):].lstrip("@"))
        rep = UnitaryRepTable(tuple(mats), name=spec)
    elif spec.startswith("phase:"):
        rep = phase_rep(int(spec.partition(":")[2]))
    elif spec.partition(":")[0] in ("sym", "cyc", "dih", "zpow"):
        group = parse_group_spec(spec)
        if len(set(dims)) != 1 or len(dims) != group.letters:
            raise ValueError(
                f"group {spec!r} permutes {group.letters} equal factors but the "
                f"input has dims {dims}"
            )
        rep = PermutationRep(group, dims[0])
    else:
        rep = models.named_group_table(spec)
    if rep.dim != total:
        raise ValueError(f"group {spec!r} acts on dim {rep.dim}, input has dim {total}")
    return rep


def _emit(cfg: RunConfig, rows: list[dict], columns: list[str], summary: dict | None = None) -> None:
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if row.get(c) is None else row.get(c) for c in columns])
        text = buf.getvalue()
    else:
        payload = {
            "schema": SCHEMA_VERSION,
            "command": cfg.command,
            "config": _config_payload(cfg),
            "rows": rows,
        }
        if summary:
            payload["summary"] = summary
        text = json.dumps(payload, sort_keys=True, ensure_ascii=True, indent=1) + "\n"
    if cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _config_payload(cfg: RunConfig) -> dict:
    payload = {
        "state": cfg.state,
        "ham": cfg.ham,
        "unitary": cfg.unitary,
        "group": cfg.group,
        "groups": list(cfg.groups),
        "shots": cfg.shots,
        "seed": cfg.seed,
        "format": cfg.fmt,
    }
    payload.update(cfg.extra)
    return {k: v for k, v in payload.items() if v not in (None, [], ())}


def _prover_config(args) -> ProverConfig:
    return ProverConfig(
        ancilla_dim=getattr(args, "ancilla", None),
        restarts=getattr(args, "restarts", 8),
        max_iters=getattr(args, "iters", 500),
        tolerance=getattr(args, "tol", 1e-7),
        seed=getattr(args, "seed", None) or 0,
    )


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_bose(cfg: RunConfig, args) -> int:
    state = _resolve_state(cfg.state)
    rho = _as_density(state)
    rep = _resolve_rep(cfg.group, rho.dims)
    rows = []
    if cfg.shots > 0:
        if not isinstance(state, PureState):
            raise ValueError("shot sampling needs a pure input state")
        rep_s = bose_circuit_sample(state, rep, cfg.shots, cfg.seed)
        rows.append({
            "method": rep_s.method,
            "simulated": rep_s.simulated,
            "closed_form": rep_s.closed_form,
            "difference": rep_s.difference,
            "shots": rep_s.shots,
        })
    report = bose_acceptance(rho, rep)
    rows.insert(0, {
        "method": report.method,
        "simulated": report.simulated,
        "closed_form": report.closed_form,
        "difference": report.difference,
        "shots": 0,
    })
    _emit(cfg, rows, ["method", "simulated", "closed_form", "difference", "shots"])
    return EXIT_OK


def _cmd_prover(cfg: RunConfig, args, mode: str) -> int:
    rho = _as_density(_resolve_state(cfg.state))
    # extendibility modes act on reference ⊗ system
    rep_dims = rho.dims if mode == "gsym" else (args.ref_dim,) + rho.dims
    rep = _resolve_rep(cfg.group, rep_dims)
    pcfg = _prover_config(args)
    prover = prover_acceptance(rho, rep, mode, pcfg)
    state_side = max_symmetric_fidelity(rho, rep, mode, pcfg)
    rows = [{
        "mode": mode,
        "prover_value": prover.value,
        "state_value": state_side.value,
        "difference": abs(prover.value - state_side.value),
        "prover_converged": prover.converged,
        "state_converged": state_side.converged,
        "restarts": pcfg.restarts,
    }]
    _emit(cfg, rows, ["mode", "prover_value", "state_value", "difference",
                      "prover_converged", "state_converged", "restarts"])
    if not (prover.converged and state_side.converged):
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _cmd_ham(cfg: RunConfig, args) -> int:
    h = _resolve_ham(cfg.ham)
    rep = _resolve_rep(cfg.group, h.dims)
    rows = []
    for t in cfg.t_grid:
        rep_t = covariance_acceptance(h, rep, t)
        rows.append({
            "t": t,
            "group": cfg.group,
            "p": rep_t.simulated,
            "trace_form": rep_t.closed_form,
            "difference": rep_t.difference,
        })
    _emit(cfg, rows, ["t", "group", "p", "trace_form", "difference"])
    if cfg.plot:
        plotting.render_t_sweep(rows, cfg.plot)
    return EXIT_OK


def _cmd_dqc1(cfg: RunConfig, args) -> int:
    spec = cfg.unitary
    rows = []
    count = max(1, args.count)
    for i in range(count):
        if spec.startswith("random:"):
            d = int(spec.partition(":")[2])
            u = random_unitary(d, (cfg.seed or 0) + i)
        elif spec.startswith("@"):
            with open(spec[1:], encoding="utf-8") as fh:
                u = serialize.decode_matrix(json.load(fh)["matrix"])
            d = u.shape[0]
        else:
            raise ValueError("unitary spec must be random:<d> or @<file>")
        lhs, rhs = dqc1_reduction_check(u)
        rows.append({
            "index": i,
            "d": d,
            "lhs": lhs,
            "rhs": rhs,
            "difference": abs(lhs - rhs),
        })
    _emit(cfg, rows, ["index", "d", "lhs", "rhs", "difference"])
    return EXIT_OK


def _cmd_dme(cfg: RunConfig, args) -> int:
    rho = _as_density(_resolve_state(cfg.state))
    rep = _resolve_rep(cfg.group, rho.dims)
    rows = []
    for t in cfg.t_grid:
        rep_t = dme_acceptance(rho, rho, rep, t)
        rows.append({
            "t": t,
            "group": cfg.group,
            "p": rep_t.simulated,
            "second_order": rep_t.metadata["second_order_expansion"],
            "difference": abs(rep_t.simulated - rep_t.metadata["second_order_expansion"]),
            "copies_for_t4_error": rep_t.metadata["copies_for_t4_error"],
        })
    _emit(cfg, rows, ["t", "group", "p", "second_order", "difference", "copies_for_t4_error"])
    if cfg.plot:
        plotting.render_t_sweep(rows, cfg.plot)
    return EXIT_OK


def _cmd_otoc(cfg: RunConfig, args) -> int:
    h = _resolve_ham(cfg.ham)
    rep = _resolve_rep(cfg.group, h.dims)
    t = cfg.t_grid[0]
    report = abelian_otoc(
        h, rep, t,
        shots=cfg.shots, seed=cfg.seed or 0,
        epsilon=args.epsilon, delta=args.delta,
    )
    rows = []
    for label in range(rep.size):
        row = {
            "label": label,
            "probability": report.probabilities[label],
            "otoc_re": report.otocs[label].real,
            "otoc_im": report.otocs[label].imag,
        }
        if report.estimates is not None:
            row["estimate_re"] = report.estimates[label].real
            row["estimate_im"] = report.estimates[label].imag
        rows.append(row)
    columns = ["label", "probability", "otoc_re", "otoc_im"]
    if report.estimates is not None:
        columns += ["estimate_re", "estimate_im"]
    summary = {
        "t": t,
        "roundtrip_error": report.roundtrip_error,
        "probability_sum": float(sum(report.probabilities)),
        "shots": report.shots,
        "hoeffding_bound": report.hoeffding_bound,
    }
    _emit(cfg, rows, columns, summary)
    if cfg.plot:
        plotting.render_distribution(rows, cfg.plot)
    return EXIT_OK


def _cmd_blockenc(cfg: RunConfig, args) -> int:
    h = _resolve_ham(cfg.ham)
    hd = h.to_dense()
    if args.normalize:
        hd = hd / schatten_norm(hd, np.inf)
    rep = _resolve_rep(cfg.group, h.dims)
    report = block_encoding_acceptance(hd, rep)
    rows = [{
        "group": cfg.group,
        "circuit": report.simulated,
        "trace_form": report.closed_form,
        "difference": report.difference,
    }]
    _emit(cfg, rows, ["group", "circuit", "trace_form", "difference"])
    return EXIT_OK


_SEP_KINDS = {"sym": "symmetric", "cyc": "cyclic", "dih": "dihedral"}


def _sep_row(rho: DensityMatrix, kind: str, k: int) -> dict:
    group = group_for_kind(_SEP_KINDS[kind], k)
    result = acceptance_group(rho, group)
    row = {"k": k, "group": group.name, "p": result.p}
    diffs = []
    if kind == "sym":
        row["p_recurrence"] = acceptance_recurrence(rho, k).p
        row["p_bell"] = acceptance_bell(rho, k).p
        diffs += [abs(row["p_recurrence"] - result.p), abs(row["p_bell"] - result.p)]
    if rho.dim**k <= 4096 and group.order <= 5040:
        row["p_direct"] = acceptance_direct(rho, group).p
        diffs.append(abs(row["p_direct"] - result.p))
    else:
        row["p_direct"] = None
    row["max_difference"] = max(diffs) if diffs else None
    return row


def _cmd_sep(cfg: RunConfig, args) -> int:
    rho = _as_density(_resolve_state(cfg.state))
    rows = []
    if cfg.group in _SEP_KINDS:
        for k in cfg.k_grid:
            rows.append(_sep_row(rho, cfg.group, k))
    else:
        group = parse_group_spec(cfg.group)
        result = acceptance_group(rho, group)
        row = {"k": group.letters, "group": group.name, "p": result.p,
               "p_recurrence": None, "p_bell": None, "p_direct": None,
               "max_difference": None}
        if rho.dim**group.letters <= 4096 and group.order <= 5040:
            row["p_direct"] = acceptance_direct(rho, group).p
            row["max_difference"] = abs(row["p_direct"] - result.p)
        rows.append(row)
    columns = ["k", "group", "p", "p_recurrence", "p_bell", "p_direct", "max_difference"]
    _emit(cfg, rows, columns)
    if cfg.plot:
        plotting.render_k_sweep(rows, cfg.plot)
    return EXIT_OK


def _cmd_resources(cfg: RunConfig, args) -> int:
    rho = _as_density(_resolve_state(cfg.state))
    kinds = [k.strip() for k in args.kind.split(",")]
    rows = []
    for kind in kinds:
        if kind not in ("cyclic", "symmetric", "dihedral"):
            raise ValueError(f"unknown resource kind {kind!r}")
        for k in cfg.k_grid:
            if kind == "dihedral" and k < 3:
                continue
            p = acceptance_for_kind(rho, kind, k)
            counts = gate_count(kind, k)
            ratio = resources_to_rejection(rho, kind, k)
            rows.append({
                "k": k,
                "group": kind,
                "p": p,
                "cswaps": counts.cswap_count,
                "ratio": ratio,
            })
    _emit(cfg, rows, ["k", "group", "p", "cswaps", "ratio"])
    if cfg.plot:
        plotting.render_k_sweep(rows, cfg.plot, ycolumn="ratio", ylabel="resources to rejection")
    return EXIT_OK


def _cmd_sweep(cfg: RunConfig, args) -> int:
    rows = []
    if args.kind == "sep":
        rho = _as_density(_resolve_state(cfg.state))
        for gspec in cfg.groups:
            if gspec not in _SEP_KINDS:
                raise ValueError(f"sweep sep supports groups {sorted(_SEP_KINDS)}, got {gspec!r}")
            for k in cfg.k_grid:
                if gspec == "dih" and k < 3:
                    continue
                rows.append(_sep_row(rho, gspec, k))
        _emit(cfg, rows, ["k", "group", "p", "p_recurrence", "p_bell", "p_direct", "max_difference"])
        if cfg.plot:
            plotting.render_k_sweep(rows, cfg.plot)
        return EXIT_OK
    if args.kind == "ham":
        h = _resolve_ham(cfg.ham)
        for gspec in cfg.groups:
            rep = _resolve_rep(gspec, h.dims)
            for t in cfg.t_grid:
                rep_t = covariance_acceptance(h, rep, t)
                rows.append({
                    "t": t,
                    "group": gspec,
                    "p": rep_t.simulated,
                    "trace_form": rep_t.closed_form,
                    "difference": rep_t.difference,
                })
        _emit(cfg, rows, ["t", "group", "p", "trace_form", "difference"])
        if cfg.plot:
            plotting.render_t_sweep(rows, cfg.plot)
        return EXIT_OK
    raise ValueError(f"unknown sweep kind {args.kind!r}")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default="-", help="output path, or - for stdout")
    p.add_argument("--format", dest="fmt", default="json", choices=["json", "csv"])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--plot", default=None, help="also render a figure to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symtest",
        description="Simulate quantum symmetry tests and cross-check closed forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bose", help="Bose symmetry test: circuit vs projector")
    p.add_argument("--state", required=True)
    p.add_argument("--group", required=True)
    _add_common(p)

    for name, help_text in (
        ("gsym", "conjugation-symmetry test (prover vs state optimization)"),
        ("gbse", "Bose-symmetric-extendibility test"),
        ("gse", "symmetric-extendibility test"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--state", required=True)
        p.add_argument("--group", required=True)
        p.add_argument("--ref-dim", type=int, default=1, dest="ref_dim",
                       help="reference dimension for extendibility modes")
        p.add_argument("--restarts", type=int, default=8)
        p.add_argument("--iters", type=int, default=500)
        p.add_argument("--tol", type=float, default=1e-7)
        p.add_argument("--ancilla", type=int, default=None)
        _add_common(p)

    p = sub.add_parser("ham", help="Hamiltonian covariance test over a time grid")
    p.add_argument("--ham", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--t", required=True, help="time grid start..end:count")
    _add_common(p)

    p = sub.add_parser("dqc1", help="one-clean-qubit reduction identity")
    p.add_argument("--unitary", required=True, help="random:<d> or @<file>")
    p.add_argument("--count", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("dme", help="state-exponentiation symmetry test")
    p.add_argument("--state", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--t", required=True)
    _add_common(p)

    p = sub.add_parser("otoc", help="Abelian Fourier measurement and OTOC recovery")
    p.add_argument("--ham", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("blockenc", help="block-encoded symmetry test")
    p.add_argument("--ham", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--normalize", action="store_true",
                   help="rescale the Hamiltonian to unit spectral norm first")
    _add_common(p)

    p = sub.add_parser("sep", help="separability-test acceptance over a copy grid")
    p.add_argument("--state", required=True)
    p.add_argument("--group", required=True, help="sym | cyc | dih | zpow:m^n")
    p.add_argument("--k", required=True, help="copy grid a..b")
    _add_common(p)

    p = sub.add_parser("resources", help="gate counts and resources-to-rejection")
    p.add_argument("--state", required=True)
    p.add_argument("--kind", required=True, help="comma list of cyclic,symmetric,dihedral")
    p.add_argument("--k", required=True)
    _add_common(p)

    p = sub.add_parser("sweep", help="multi-group sweeps reproducing the figures")
    p.add_argument("--kind", required=True, choices=["sep", "ham"])
    p.add_argument("--state", default=None)
    p.add_argument("--ham", default=None)
    p.add_argument("--groups", required=True, help="comma-separated group specs")
    p.add_argument("--k", default=None)
    p.add_argument("--t", default=None)
    _add_common(p)

    return parser


_HANDLERS = {
    "bose": _cmd_bose,
    "ham": _cmd_ham,
    "dqc1": _cmd_dqc1,
    "dme": _cmd_dme,
    "otoc": _cmd_otoc,
    "blockenc": _cmd_blockenc,
    "sep": _cmd_sep,
    "resources": _cmd_resources,
    "sweep": _cmd_sweep,
}

_PROVER_MODES = {"gsym": "gsym", "gbse": "bse", "gse": "se"}


def _build_config(args) -> RunConfig:
    t_grid = tuple(serialize.parse_t_grid(args.t)) if getattr(args, "t", None) else ()
    k_grid = tuple(serialize.parse_k_grid(args.k)) if getattr(args, "k", None) else ()
    groups = tuple(
        g.strip() for g in getattr(args, "groups", "").split(",") if g.strip()
    ) if getattr(args, "groups", None) else ()
    extra = {}
    for key in ("count", "kind", "epsilon", "delta", "restarts", "iters", "tol",
                "ancilla", "normalize", "ref_dim"):
        if getattr(args, key, None) not in (None, False):
            extra[key] = getattr(args, key)
    if t_grid:
        extra["t_grid"] = list(t_grid)
    if k_grid:
        extra["k_grid"] = list(k_grid)
    return RunConfig(
        command=args.command,
        state=getattr(args, "state", None),
        ham=getattr(args, "ham", None),
        unitary=getattr(args, "unitary", None),
        group=getattr(args, "group", None),
        groups=groups,
        t_grid=t_grid,
        k_grid=k_grid,
        shots=getattr(args, "shots", 0),
        seed=getattr(args, "seed", None),
        out=args.out,
        fmt=args.fmt,
        plot=getattr(args, "plot", None),
        extra=extra,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _build_config(args)
        if args.command in _PROVER_MODES:
            return _cmd_prover(cfg, args, _PROVER_MODES[args.command])
        return _HANDLERS[args.command](cfg, args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ArithmeticError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
