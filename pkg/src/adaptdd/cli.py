"""Command-line front end: ``adapt <subcommand> ...``.

``--circuit`` takes a QASM path or a shipped benchmark name, ``--device`` and
``--noise`` take a JSON path or a shipped name. JSON outputs use sorted keys,
so reruns with the same inputs and seed are byte-identical. Outputs go to
``--out`` when given, otherwise to stdout.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .benchmarks import load_benchmarks
from .circuit import Circuit
from .dd import DDMask, DDProtocol, characterization_circuit, insert_dd
from .decoy import ideal_distribution, make_decoy
from .device import DeviceError
from .noise import NoiseError, NoisyExecutor, analytic_mode, run_noisy
from .qasm import QasmError, parse_qasm, serialize_qasm
from .schedule import build_gst
from .search import SearchError, adapt_search, exhaustive_best, policy_compare
from .shipped import device_names, noise_names, resolve_device, resolve_noise


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def load_circuit(arg: str) -> Circuit:
    path = Path(arg)
    if path.exists():
        return parse_qasm(path.read_text(encoding="utf-8"))
    suite = load_benchmarks()
    if arg in suite:
        return suite[arg]
    raise UsageError(f"{arg!r} is neither a file nor a benchmark ({', '.join(suite)})")


def _need_seed(args):
    if args.seed is None:
        raise UsageError("--seed is required for sampled runs")


def _executor(args, device, noise) -> NoisyExecutor:
    if not getattr(args, "analytic", False):
        _need_seed(args)
    return NoisyExecutor(device, noise, args.shots, args.seed or 0, getattr(args, "analytic", False))


def cmd_schedule(args):
    gst = build_gst(load_circuit(args.circuit), resolve_device(args.device))
    _emit(gst.to_json(), args.emit_gst)


def cmd_transpile_dd(args):
    c = load_circuit(args.circuit)
    d = resolve_device(args.device)
    mask = DDMask.from_string(args.mask) if args.mask else DDMask.all(c.num_qubits)
    out = insert_dd(build_gst(c, d), mask, DDProtocol(args.protocol), d)
    _emit(serialize_qasm(out), args.out)


def cmd_decoy(args):
    decoy = make_decoy(load_circuit(args.circuit), args.mode)
    _emit(serialize_qasm(decoy), args.out)
    if args.emit_ideal:
        Path(args.emit_ideal).write_text(ideal_distribution(decoy).to_json(), encoding="utf-8")


def cmd_simulate(args):
    c = load_circuit(args.circuit)
    d = resolve_device(args.device)
    nm = resolve_noise(args.noise)
    gst = build_gst(c, d)
    if args.analytic:
        dist = analytic_mode(gst, nm)
    else:
        _need_seed(args)
        dist = run_noisy(gst, nm, args.shots, args.seed)
    _emit(dist.to_json(), args.out)


def cmd_adapt(args):
    c = load_circuit(args.circuit)
    d = resolve_device(args.device)
    ex = _executor(args, d, resolve_noise(args.noise))
    p = DDProtocol(args.protocol)
    if args.compare:
        report = policy_compare(c, d, p, ex, args.decoy, runtime_best=not args.no_runtime_best)
    else:
        report = adapt_search(c, d, p, ex, args.decoy)
    body = report.to_dict()
    body.update(circuit=c.name or args.circuit, shots=args.shots, seed=args.seed)
    _emit(dumps(body), args.report)
    if args.out:
        Path(args.out).write_text(serialize_qasm(report.circuit), encoding="utf-8")


def cmd_sweep_masks(args):
    c = load_circuit(args.circuit)
    d = resolve_device(args.device)
    ex = _executor(args, d, resolve_noise(args.noise))
    target = make_decoy(c, args.decoy) if args.decoy else c
    best, table = exhaustive_best(target, d, DDProtocol(args.protocol), ex)
    body = {
        "circuit": c.name or args.circuit,
        "scored_on": args.decoy or "real",
        "protocol": DDProtocol(args.protocol).variant,
        "fidelity": table,
        "best": str(best),
        "shots": args.shots,
        "seed": args.seed,
    }
    _emit(dumps(body), args.out)


def cmd_characterize(args):
    d = resolve_device(args.device)
    nm = resolve_noise(args.noise)
    edge = tuple(int(v) for v in args.edge.split(",")) if args.edge else None
    if args.theta_grid < 2:
        raise UsageError("--theta-grid needs at least 2 points")
    thetas = [math.pi * i / (args.theta_grid - 1) for i in range(args.theta_grid)]
    if not args.analytic:
        _need_seed(args)
    rows = []
    for variant in args.variants.split(","):
        for theta in thetas:
            c = characterization_circuit(theta, args.idle, variant, edge, d)
            gst = build_gst(c, d)
            dist = analytic_mode(gst, nm) if args.analytic else run_noisy(gst, nm, args.shots, args.seed)
            rows.append({"variant": variant, "theta": theta, "fidelity": dist["0"]})
    body = {"idle_ns": args.idle, "edge": list(edge) if edge else None, "rows": rows}
    _emit(dumps(body), args.out)


def cmd_benchmark(args):
    suite = load_benchmarks()
    if not args.name:
        _emit(dumps({"benchmarks": sorted(suite), "devices": device_names(), "noise": noise_names()}), args.out)
        return
    _emit(serialize_qasm(load_circuit(args.name)), args.out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="adapt", description="Decoy-guided dynamical decoupling toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, device=True, noise=False, sampled=False):
        p.add_argument("--circuit", required=True, help="QASM file or benchmark name")
        if device:
            p.add_argument("--device", required=True, help="device JSON or shipped device name")
        if noise:
            p.add_argument("--noise", required=True, help="noise JSON or shipped noise name")
        if sampled:
            p.add_argument("--shots", type=int, default=8000)
            p.add_argument("--seed", type=int)
            p.add_argument("--analytic", action="store_true", help="exact distribution (coherent-only noise)")

    p = sub.add_parser("schedule", help="ASAP schedule and idle windows")
    common(p)
    p.add_argument("--emit-gst", dest="emit_gst")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("transpile-dd", help="insert DD into idle windows")
    common(p)
    p.add_argument("--protocol", default="xy4", choices=["xy4", "xx"])
    p.add_argument("--mask", help="qubit-0-first bitstring; default all ones")
    p.add_argument("--out")
    p.set_defaults(func=cmd_transpile_dd)

    p = sub.add_parser("decoy", help="build a Clifford or seeded decoy")
    common(p, device=False)
    p.add_argument("--mode", default="cdc", choices=["cdc", "sdc"])
    p.add_argument("--out")
    p.add_argument("--emit-ideal", dest="emit_ideal")
    p.set_defaults(func=cmd_decoy)

    p = sub.add_parser("simulate", help="noisy execution")
    common(p, noise=True, sampled=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("adapt", help="decoy-guided DD mask search")
    common(p, noise=True, sampled=True)
    p.add_argument("--protocol", default="xy4", choices=["xy4", "xx"])
    p.add_argument("--decoy", default="cdc", choices=["cdc", "sdc"])
    p.add_argument("--report")
    p.add_argument("--out")
    p.add_argument("--compare", action="store_true", help="also score No-DD, All-DD and Runtime-Best")
    p.add_argument("--no-runtime-best", action="store_true")
    p.set_defaults(func=cmd_adapt)

    p = sub.add_parser("sweep-masks", help="fidelity of every DD mask")
    common(p, noise=True, sampled=True)
    p.add_argument("--protocol", default="xy4", choices=["xy4", "xx"])
    p.add_argument("--decoy", choices=["cdc", "sdc"], help="score on a decoy instead of the circuit")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep_masks)

    p = sub.add_parser("characterize", help="idle-qubit fidelity vs initial state")
    p.add_argument("--device", default="chain6")
    p.add_argument("--noise", default="coherent_only")
    p.add_argument("--theta-grid", type=int, default=5)
    p.add_argument("--idle", type=float, default=8000.0)
    p.add_argument("--edge", help="concurrent CNOT edge, e.g. 1,2")
    p.add_argument("--variants", default="free,xy4,xx")
    p.add_argument("--shots", type=int, default=8000)
    p.add_argument("--seed", type=int)
    p.add_argument("--analytic", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("benchmark", help="list or export shipped benchmarks")
    p.add_argument("--name")
    p.add_argument("--out")
    p.set_defaults(func=cmd_benchmark)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "shots", 1) < 1:
        parser.error("--shots must be >= 1")
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"adapt: error: {exc}", file=sys.stderr)
        return 2
    except (QasmError, DeviceError, NoiseError, SearchError, ValueError, KeyError, OSError) as exc:
        print(f"adapt: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
