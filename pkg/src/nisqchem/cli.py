"""Command-line entry points.

Subcommands: ``select``, ``map``, ``vqe``, ``zne``, ``pipeline`` run the
workflow up to the named stage from a JSON config; ``barrier`` converts a
pair of energies; ``benchmark`` sweeps noise levels over HAA vs a
gate-matched HEA.  Exit codes: 0 success, 2 config error, 3 stage failure,
4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .hamstore import barrier_kcal, parse_fcidump
from .pipeline import (
    ConfigError,
    OracleMismatchError,
    PipelineConfig,
    StageError,
    noise_benchmark,
    run_pipeline,
    run_stage,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STAGE = 3
EXIT_ORACLE = 4


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="JSON config path")
    parser.add_argument("--seed", type=int, default=None, help="override optimizer seed")
    parser.add_argument("--out", default=None, help="override output directory")


def _load_config(args) -> PipelineConfig:
    cfg = PipelineConfig.from_file(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(
            cfg, optimize=dataclasses.replace(cfg.optimize, seed=args.seed)
        )
    if args.out is not None:
        cfg = dataclasses.replace(cfg, outputs=Path(args.out))
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nisqchem", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("select", "correlation table and active-space selection"),
        ("map", "qubit Hamiltonian (serialized operator)"),
        ("vqe", "variational minimization (trace CSV + best energy)"),
        ("zne", "zero-noise extrapolation report"),
        ("pipeline", "full workflow incl. barrier"),
        ("benchmark", "noise sweep: HAA vs gate-matched HEA"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)

    b = sub.add_parser("barrier", help="convert IS/TS energies to kcal/mol")
    b.add_argument("--is", dest="e_is", type=float, required=True, help="initial-state energy (hartree)")
    b.add_argument("--ts", dest="e_ts", type=float, required=True, help="transition-state energy (hartree)")
    b.add_argument("--out", default=None, help="optional directory for barrier.json")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OracleMismatchError as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except StageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_STAGE


def _dispatch(args) -> int:
    if args.command == "barrier":
        value = barrier_kcal(args.e_is, args.e_ts)
        print(f"{value:.2f}")
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / "barrier.json").write_text(
                json.dumps(
                    {"e_is": args.e_is, "e_ts": args.e_ts, "barrier_kcal": value},
                    sort_keys=True,
                )
            )
        return EXIT_OK

    cfg = _load_config(args)
    if args.command == "select":
        for name, orbitals in run_stage(cfg, "selection").items():
            print(f"{name}: orbitals {list(orbitals)}")
    elif args.command == "map":
        for name, qop in run_stage(cfg, "mapping").items():
            print(f"{name}: {len(qop.terms)} terms on {qop.n_qubits} qubits")
    elif args.command == "vqe":
        for name, energy in run_stage(cfg, "vqe").items():
            print(f"{name}: best energy {energy:.10f}")
    elif args.command == "zne":
        if not cfg.zne_enabled:
            cfg = dataclasses.replace(cfg, zne_enabled=True)
        for name, intercept in run_stage(cfg, "zne").items():
            print(f"{name}: extrapolated energy {intercept:.10f}")
    elif args.command == "benchmark":
        return _run_benchmark(cfg, Path(args.config))
    else:  # pipeline
        report = run_pipeline(cfg)
        for name, rep in sorted(report.inputs.items()):
            print(
                f"{name}: casci {rep.e_casci:.8f}  vqe {rep.e_vqe:.8f}"
                + (f"  zne {rep.e_zne:.8f}" if rep.e_zne is not None else "")
            )
        if report.barrier_raw_kcal is not None:
            print(f"barrier (raw) {report.barrier_raw_kcal:.2f} kcal/mol")
        if report.barrier_mitigated_kcal is not None:
            print(f"barrier (zne) {report.barrier_mitigated_kcal:.2f} kcal/mol")
    return EXIT_OK


def _run_benchmark(cfg: PipelineConfig, config_path: Path) -> int:
    doc = json.loads(config_path.read_text())
    bench = doc.get("benchmark", {})
    if len(cfg.inputs) != 1:
        raise ConfigError("benchmark runs on exactly one input")
    (name, path), = cfg.inputs.items()
    ints = parse_fcidump(path.read_text())
    try:
        csv_text, rows = noise_benchmark(
            ints,
            p2_values=tuple(bench.get("p2_values", (0.005, 0.01, 0.02))),
            p1_ratio=float(bench.get("p1_ratio", 0.1)),
            n_ancillas=tuple(bench.get("n_ancillas", (1, 2))),
            n_layers=int(bench.get("n_layers", 2)),
            seeds=tuple(bench.get("seeds", (0, 1, 2, 3, 4))),
            max_iters=int(bench.get("max_iters", 80)),
            ordering=cfg.ordering,
        )
    except Exception as exc:
        raise StageError("benchmark", str(exc)) from exc
    cfg.outputs.mkdir(parents=True, exist_ok=True)
    out = cfg.outputs / f"{name}_noise_benchmark.csv"
    out.write_text(csv_text)
    print(f"wrote {out} ({len(rows)} rows)")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
