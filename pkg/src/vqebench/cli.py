"""Command-line front end: single runs, potential-energy-curve scans, and
report emission.

The scan config is a plain key-value text file::

    output = scan_out
    methods = fci, vqe, adapt
    optimizers = nelder_mead, lbfgs
    grad_norm_threshold = 1e-2
    tol_rel_energy = 1e-6
    fd_step = 1e-5
    max_iterations = 50
    input = 0.50 data/h2_r0.500.fcidump
    input = 0.70 data/h2_r0.700.fcidump

``input`` lines repeat, one per scan point, and keep file order. The
gradient-free optimizer is Nelder-Mead (standing in for the reference
implementation's COBYLA); every summary report says so.
"""
from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import tempfile
from pathlib import Path

from .adapt import AdaptConfig, run_adapt, run_vqe
from .fcidump import (
    FcidumpIntegrityError,
    FcidumpParseError,
    load_fcidump,
)
from .fci import infidelity_vs_fci, solve_fci
from .selftest import run_selftest

METHOD_ORDER = ("fci", "vqe", "adapt")
OPTIMIZER_ORDER = ("nelder_mead", "lbfgs")
OPTIMIZER_ALIASES = {"nm": "nelder_mead", "nelder_mead": "nelder_mead",
                     "nelder-mead": "nelder_mead", "lbfgs": "lbfgs",
                     "l-bfgs": "lbfgs"}
CSV_HEADER = ("label,method,optimizer,energy,abs_error_vs_fci,infidelity,"
              "n_operators,gate_count,depth,measurement_total,converged")
GRADIENT_FREE_NOTE = ("gradient-free optimizer: Nelder-Mead (stand-in for "
                      "the reference COBYLA)")


class ConfigError(ValueError):
    """Bad scan configuration."""


class ScanConfig:
    __slots__ = ("inputs", "methods", "optimizers", "adapt", "output")

    def __init__(self, inputs, methods, optimizers, adapt, output):
        if not inputs:
            raise ConfigError("config needs at least one input")
        if not methods:
            raise ConfigError("config needs at least one method")
        labels = [label for label, _ in inputs]
        if len(set(labels)) != len(labels):
            raise ConfigError("input labels must be unique")
        for method in methods:
            if method not in METHOD_ORDER:
                raise ConfigError(f"unknown method {method!r}")
        if any(m in ("vqe", "adapt") for m in methods) and not optimizers:
            raise ConfigError("vqe/adapt methods need at least one optimizer")
        self.inputs = list(inputs)
        self.methods = [m for m in METHOD_ORDER if m in methods]
        self.optimizers = [o for o in OPTIMIZER_ORDER if o in optimizers]
        self.adapt = adapt
        self.output = Path(output)


def parse_scan_config(text: str, base_dir: Path | None = None) -> ScanConfig:
    base_dir = base_dir or Path(".")
    inputs = []
    fields: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key == "input":
            parts = value.split(None, 1)
            if len(parts) != 2:
                raise ConfigError(
                    f"line {line_no}: input needs '<label> <path>'")
            inputs.append((parts[0], base_dir / parts[1]))
        else:
            fields[key] = value

    def split_list(key, default):
        raw = fields.get(key)
        if raw is None:
            return list(default)
        return [token.strip() for token in raw.split(",") if token.strip()]

    methods = split_list("methods", METHOD_ORDER)
    optimizers = []
    for token in split_list("optimizers", OPTIMIZER_ORDER):
        canon = OPTIMIZER_ALIASES.get(token.lower())
        if canon is None:
            raise ConfigError(f"unknown optimizer {token!r}")
        optimizers.append(canon)

    def number(key, default):
        raw = fields.get(key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"bad numeric value for {key}: {raw!r}") \
                from exc

    adapt = AdaptConfig(
        grad_norm_threshold=number("grad_norm_threshold", 1e-2),
        max_iterations=int(number("max_iterations", 50)),
        tol_rel_energy=number("tol_rel_energy", 1e-6),
        fd_step=number("fd_step", 1e-5),
    )
    output = fields.get("output", "scan_out")
    return ScanConfig(inputs, methods, optimizers, adapt,
                      base_dir / output)


class ScanRow:
    __slots__ = ("label", "method", "optimizer", "energy",
                 "abs_error_vs_fci", "infidelity", "n_operators",
                 "gate_count", "depth", "measurement_total", "converged")

    def __init__(self, **kwargs):
        for name in self.__slots__:
            setattr(self, name, kwargs[name])

    def formatted(self) -> dict:
        return {
            "label": self.label,
            "method": self.method,
            "optimizer": self.optimizer,
            "energy": f"{self.energy:.9f}",
            "abs_error_vs_fci": f"{self.abs_error_vs_fci:.9f}",
            "infidelity": f"{self.infidelity:.9e}",
            "n_operators": str(self.n_operators),
            "gate_count": str(self.gate_count),
            "depth": str(self.depth),
            "measurement_total": str(self.measurement_total),
            "converged": "true" if self.converged else "false",
        }

    def csv_line(self) -> str:
        return ",".join(self.formatted().values())


def _row_from_result(label, result, fci_energy, infid) -> ScanRow:
    return ScanRow(
        label=label, method=result.method, optimizer=result.optimizer,
        energy=result.energy,
        abs_error_vs_fci=abs(result.energy - fci_energy),
        infidelity=infid, n_operators=len(result.ansatz),
        gate_count=result.resources["gate_count"],
        depth=result.resources["depth"],
        measurement_total=result.ledger.total(),
        converged=result.converged)


def run_scan(cfg: ScanConfig) -> list[ScanRow]:
    """Run every input x method x optimizer combination.

    All inputs are parsed up front so a bad file aborts before any
    computation; FCI is always solved first per input for the error and
    infidelity columns.
    """
    hamiltonians = []
    for label, path in cfg.inputs:
        hamiltonians.append((label, load_fcidump(path, label=label)))

    rows = []
    for label, ham in hamiltonians:
        sol = solve_fci(ham)
        for method in cfg.methods:
            if method == "fci":
                rows.append(ScanRow(
                    label=label, method="fci", optimizer="-",
                    energy=sol.energy, abs_error_vs_fci=0.0, infidelity=0.0,
                    n_operators=0, gate_count=0, depth=0,
                    measurement_total=0, converged=True))
                continue
            runner = run_vqe if method == "vqe" else run_adapt
            for optimizer in cfg.optimizers:
                adapt_cfg = AdaptConfig(
                    grad_norm_threshold=cfg.adapt.grad_norm_threshold,
                    max_iterations=cfg.adapt.max_iterations,
                    optimizer=optimizer,
                    tol_rel_energy=cfg.adapt.tol_rel_energy,
                    fd_step=cfg.adapt.fd_step)
                result = runner(ham, adapt_cfg)
                infid = infidelity_vs_fci(result.prepared_state(), sol)
                rows.append(_row_from_result(label, result, sol.energy,
                                             infid))
    return rows


def _atomic_write(path: Path, content: str):
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name,
                                    suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(content)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def render_csv(rows) -> str:
    return "\n".join([CSV_HEADER] + [row.csv_line() for row in rows]) + "\n"


def parse_scan_csv(text: str) -> list[dict]:
    lines = text.strip().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    keys = CSV_HEADER.split(",")
    return [dict(zip(keys, line.split(","))) for line in lines[1:]]


def render_json(rows) -> str:
    payload = []
    for row in rows:
        formatted = row.formatted()
        payload.append({
            "label": formatted["label"],
            "method": formatted["method"],
            "optimizer": formatted["optimizer"],
            "energy": float(formatted["energy"]),
            "abs_error_vs_fci": float(formatted["abs_error_vs_fci"]),
            "infidelity": float(formatted["infidelity"]),
            "n_operators": row.n_operators,
            "gate_count": row.gate_count,
            "depth": row.depth,
            "measurement_total": row.measurement_total,
            "converged": row.converged,
        })
    return json.dumps(payload, indent=2) + "\n"


def render_summary(rows) -> str:
    lines = ["vqebench scan summary", GRADIENT_FREE_NOTE, ""]
    methods = sorted({row.method for row in rows},
                     key=METHOD_ORDER.index)
    lines.append("per-method medians")
    for method in methods:
        sample = [row for row in rows if row.method == method]
        err = statistics.median(row.abs_error_vs_fci for row in sample)
        infid = statistics.median(row.infidelity for row in sample)
        lines.append(f"  {method:<6} abs_error_vs_fci {err:.9f}  "
                     f"infidelity {infid:.9e}  ({len(sample)} rows)")
    by_key = {(row.label, row.method, row.optimizer): row for row in rows}
    have_both = [
        (label, method)
        for (label, method, _opt) in by_key
        if (label, method, "nelder_mead") in by_key
        and (label, method, "lbfgs") in by_key]
    if have_both:
        lines.append("")
        lines.append("optimizer difference, E(gradient-free) - "
                     "E(gradient-based), per label")
        non_negative = 0
        pairs = sorted(set(have_both))
        for label, method in pairs:
            gap = (by_key[(label, method, "nelder_mead")].energy
                   - by_key[(label, method, "lbfgs")].energy)
            non_negative += gap >= 0.0
            lines.append(f"  {label:<10} {method:<6} {gap:+.9f}")
        lines.append(f"gradient-based at or below gradient-free at "
                     f"{non_negative}/{len(pairs)} rows")
    return "\n".join(lines) + "\n"


def emit_report(rows, out_dir: Path) -> dict[str, Path]:
    """Write scan.csv, scan.json, and summary.txt atomically."""
    if not rows:
        raise ValueError("nothing to report")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts = {"csv": out_dir / "scan.csv",
                 "json": out_dir / "scan.json",
                 "summary": out_dir / "summary.txt"}
    _atomic_write(artifacts["csv"], render_csv(rows))
    _atomic_write(artifacts["json"], render_json(rows))
    _atomic_write(artifacts["summary"], render_summary(rows))
    return artifacts


# ---------------------------------------------------------------------------
# argparse front end
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqebench",
        description="VQE / ADAPT-VQE statevector benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="run a potential-energy-curve scan")
    scan.add_argument("--config", required=True, type=Path)

    single = sub.add_parser("run", help="run one method on one FCIDUMP")
    single.add_argument("--fcidump", required=True, type=Path)
    single.add_argument("--method", required=True, choices=METHOD_ORDER)
    single.add_argument("--optimizer", default="lbfgs",
                        choices=sorted(OPTIMIZER_ALIASES))
    single.add_argument("--grad-norm-threshold", type=float, default=1e-2)
    single.add_argument("--tol", type=float, default=1e-6)
    single.add_argument("--fd-step", type=float, default=1e-5)
    single.add_argument("--max-iter", type=int, default=50)

    sub.add_parser("selftest", help="run the built-in invariant suite")
    return parser


def _cmd_scan(args) -> int:
    config_path = args.config
    if not config_path.exists():
        print(f"error: config file {config_path} not found", file=sys.stderr)
        return 1
    cfg = parse_scan_config(config_path.read_text(),
                            base_dir=config_path.parent)
    rows = run_scan(cfg)
    artifacts = emit_report(rows, cfg.output)
    print(GRADIENT_FREE_NOTE)
    print(f"{len(rows)} rows written:")
    for kind, path in artifacts.items():
        print(f"  {kind}: {path}")
    return 0


def _cmd_run(args) -> int:
    ham = load_fcidump(args.fcidump)
    sol = solve_fci(ham)
    if args.method == "fci":
        print(f"fci energy: {sol.energy:.9f}")
        if sol.degeneracy_flag:
            print("note: degenerate ground space")
        return 0
    cfg = AdaptConfig(grad_norm_threshold=args.grad_norm_threshold,
                      max_iterations=args.max_iter,
                      optimizer=OPTIMIZER_ALIASES[args.optimizer.lower()],
                      tol_rel_energy=args.tol, fd_step=args.fd_step)
    runner = run_vqe if args.method == "vqe" else run_adapt
    result = runner(ham, cfg)
    infid = infidelity_vs_fci(result.prepared_state(), sol)
    print(GRADIENT_FREE_NOTE)
    print(f"method: {result.method}  optimizer: {result.optimizer}")
    print(f"energy: {result.energy:.9f}")
    print(f"fci energy: {sol.energy:.9f}")
    print(f"abs error vs fci: {abs(result.energy - sol.energy):.9f}")
    print(f"infidelity: {infid:.9e}")
    print(f"operators: {len(result.ansatz)}")
    for pid, theta in result.ansatz.elements:
        print(f"  {result.ansatz.pool[pid].description}  theta={theta:+.9f}")
    print(f"gate count: {result.resources['gate_count']}  "
          f"depth: {result.resources['depth']}")
    ledger = result.ledger.as_dict()
    print(f"measurements: {ledger['pauli_term_measurements']} "
          f"({ledger['energy_evaluations']} energy evaluations, "
          f"{ledger['commutator_evaluations']} commutator evaluations)")
    if result.method == "adapt":
        print(f"final gradient norm: {result.final_grad_norm:.6f}")
    print(f"converged: {result.converged}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "scan":
            return _cmd_scan(args)
        if args.command == "run":
            return _cmd_run(args)
        return 0 if run_selftest() else 2
    except (ConfigError, FcidumpParseError, FcidumpIntegrityError,
            FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (AssertionError, ValueError, RuntimeError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
