"""Command-line surface: bound evaluation, protocol runs, budget grids, witness.

Scenarios come from flags, optionally seeded by a plain ``key = value``
config file (flags override the file). Traces are written as CSV with the
fixed header ``step,m,s_ground,mutual_info`` and 12-significant-digit
floats so identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import analysis, asymptotics, engine, nonadaptive
from .spectra import EnergySpectrum, MemoryConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_CAPACITY = 4

_SCENARIO_KEYS = {
    "ds": int,
    "dm": int,
    "k": int,
    "l": int,
    "beta": float,
    "system-levels": str,
    "machine-levels": str,
    "machine-gap": float,
}

_MODE_BY_FLAG = {
    "stepwise": "stepwise",
    "global": "global",
    "global-final": "global_with_final_sort",
    "nonadaptive": "nonadaptive",
}


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _parse_levels(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ValueError(f"bad level list {text!r}: {exc}") from None


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _SCENARIO_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value
    return values


def _merged(args: argparse.Namespace, key: str):
    """Flag value if given, else the config-file value, else None."""
    dest = key.replace("-", "_")
    cli_value = getattr(args, dest, None)
    if cli_value is not None:
        return cli_value
    file_values = getattr(args, "_file_values", {})
    if key in file_values:
        return _SCENARIO_KEYS[key](file_values[key])
    return None


def _add_scenario_flags(parser: argparse.ArgumentParser, with_kl: bool = True) -> None:
    parser.add_argument("--config", help="key = value scenario file; flags override")
    parser.add_argument("--ds", type=int, help="system dimension (levels default to 0,1,...,ds-1)")
    parser.add_argument("--dm", type=int, help="machine dimension (levels default to 0,1,...,dm-1)")
    parser.add_argument("--system-levels", help="comma-separated system energies, ground first")
    parser.add_argument("--machine-levels", help="comma-separated machine energies, ground first")
    parser.add_argument("--machine-gap", type=float, help="shorthand for qubit machine levels 0,<gap>")
    parser.add_argument("--beta", type=float, help="inverse temperature (k_B = 1)")
    if with_kl:
        parser.add_argument("--k", type=int, help="machines per collision")
        parser.add_argument("--l", type=int, help="memory carriers per collision")


def _levels_from_args(args, kind: str) -> tuple[float, ...]:
    explicit = _merged(args, f"{kind}-levels")
    dim = _merged(args, "ds" if kind == "system" else "dm")
    if kind == "machine" and explicit is None:
        gap = _merged(args, "machine-gap")
        if gap is not None:
            explicit = f"0,{gap!r}"
    if explicit is not None:
        levels = _parse_levels(explicit)
        if dim is not None and dim != len(levels):
            raise ValueError(f"--{'ds' if kind == 'system' else 'dm'} disagrees with --{kind}-levels")
        return levels
    if dim is None:
        raise ValueError(f"missing {kind} spectrum: give --{kind}-levels or a dimension flag")
    return tuple(float(i) for i in range(dim))


def _scenario(args, with_kl: bool = True) -> MemoryConfig | tuple:
    config_path = getattr(args, "config", None)
    if config_path:
        args._file_values = _read_config_file(config_path)
    system = EnergySpectrum(_levels_from_args(args, "system"))
    machine = EnergySpectrum(_levels_from_args(args, "machine"))
    beta = _merged(args, "beta")
    if beta is None:
        raise ValueError("missing --beta")
    if not with_kl:
        return system, machine, beta
    k = _merged(args, "k")
    ell = _merged(args, "l")
    if k is None or ell is None:
        raise ValueError("missing --k or --l")
    return MemoryConfig(system=system, machine=machine, k=k, ell=ell, beta=beta)


def _config_dict(config: MemoryConfig) -> dict:
    return {
        "system_levels": list(config.system.levels),
        "machine_levels": list(config.machine.levels),
        "k": config.k,
        "l": config.ell,
        "beta": config.beta,
    }


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _summary_payload(config: MemoryConfig, final_s_ground: float | None) -> dict:
    return {
        "config": _config_dict(config),
        "p_star": asymptotics.p_star(config),
        "final_s_ground": final_s_ground,
        "attainable": asymptotics.attainability_check(config),
        "hierarchy_exponent": asymptotics.hierarchy_exponent(config),
    }


def _cmd_bound(args) -> int:
    config = _scenario(args)
    vector_s = asymptotics.rho_star_s(config)
    vector_sl = asymptotics.rho_star_sl(config)
    print(f"p_star              {_fmt(asymptotics.p_star(config))}")
    print(f"rho_star_S          {','.join(_fmt(x) for x in vector_s)}")
    print(f"rho_star_SL         {','.join(_fmt(x) for x in vector_sl)}")
    print(f"attainable          {str(asymptotics.attainability_check(config)).lower()}")
    print(f"hierarchy_exponent  {_fmt(asymptotics.hierarchy_exponent(config))}")
    if args.json:
        _write_json(args.json, _summary_payload(config, None))
    return EXIT_OK


def _write_trace_csv(path: str, trace, dump_sl: bool) -> None:
    lines = ["step,m,s_ground,mutual_info"]
    if dump_sl:
        width = trace.records[0].sl_probs.size
        lines[0] += "," + ",".join(f"sl_{i}" for i in range(width))
    for record in trace.records:
        row = f"{record.step},{record.machines_used},{_fmt(record.s_ground)},{_fmt(record.mutual_info)}"
        if dump_sl:
            row += "," + ",".join(_fmt(x) for x in record.sl_probs)
        lines.append(row)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write("\n".join(lines) + "\n")


def _cmd_simulate(args) -> int:
    config = _scenario(args)
    mode = _MODE_BY_FLAG[args.mode]
    if mode == "nonadaptive":
        trace = nonadaptive.iterate_chain(config, args.steps)
    else:
        trace = engine.run_protocol(config, args.steps, mode=mode)
    _write_trace_csv(args.out, trace, args.dump_sl)
    bound = asymptotics.p_star(config)
    final = trace.final.s_ground
    print(f"final s_ground  {_fmt(final)}")
    print(f"p_star          {_fmt(bound)}")
    print(f"gap to bound    {_fmt(bound - final)}")
    print(f"wrote {args.out} ({len(trace.records)} steps)")
    if args.json:
        _write_json(args.json, _summary_payload(config, final))
    return EXIT_OK


def _cmd_compare(args) -> int:
    system, machine, beta = _scenario(args, with_kl=False)
    configs = [
        MemoryConfig(system=system, machine=machine, k=k, ell=ell, beta=beta)
        for k in range(1, args.k_max + 1)
        for ell in range(k)
    ]
    budgets = list(range(args.budget_min, args.budget_max + 1))
    cells = analysis.budget_grid(configs, budgets, mode=_MODE_BY_FLAG[args.mode])
    cells.sort(key=lambda c: (c.config.k, c.config.ell, c.machines_used))
    lines = ["k,l,m,s_ground"]
    lines += [
        f"{c.config.k},{c.config.ell},{c.machines_used},{_fmt(c.s_ground)}"
        for c in cells
    ]
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        handle.write("\n".join(lines) + "\n")
    print(f"wrote {args.out} ({len(cells)} rows)")
    return EXIT_OK


def _cmd_witness(args) -> int:
    config = _scenario(args)
    if not 1 <= args.t < args.n:
        raise ValueError("need 1 <= t < n")
    s_level = analysis.cp_divisibility_witness(config, args.t, args.n, level="s")
    sl_level = analysis.cp_divisibility_witness(config, args.t, args.n, level="sl")
    print(f"S-level deviation    {_fmt(s_level.deviation)}"
          f"  markovian={str(s_level.is_markovian_at_tolerance).lower()}")
    print(f"SL-level deviation   {_fmt(sl_level.deviation)}"
          f"  markovian={str(sl_level.is_markovian_at_tolerance).lower()}")
    if args.json:
        _write_json(
            args.json,
            {
                "config": _config_dict(config),
                "t": args.t,
                "n": args.n,
                "s_deviation": s_level.deviation,
                "s_is_markovian": s_level.is_markovian_at_tolerance,
                "sl_deviation": sl_level.deviation,
                "sl_is_markovian": sl_level.is_markovian_at_tolerance,
            },
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memcool",
        description="Memory-enhanced quantum cooling: bounds, protocols, comparisons.",
    )
    parser.add_argument("--verbose", action="store_true", help="log skipped grid cells etc.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound", help="print asymptotic limits for one scenario")
    _add_scenario_flags(p_bound)
    p_bound.add_argument("--json", help="also write a JSON summary to this path")
    p_bound.set_defaults(handler=_cmd_bound)

    p_sim = sub.add_parser("simulate", help="run a protocol and write a CSV trace")
    _add_scenario_flags(p_sim)
    p_sim.add_argument("--mode", choices=sorted(_MODE_BY_FLAG), default="stepwise")
    p_sim.add_argument("--steps", type=int, required=True)
    p_sim.add_argument("--out", required=True, help="CSV output path")
    p_sim.add_argument("--dump-sl", action="store_true", help="append SL distribution columns")
    p_sim.add_argument("--json", help="also write a JSON summary to this path")
    p_sim.set_defaults(handler=_cmd_simulate)

    p_cmp = sub.add_parser("compare", help="fixed-budget grid over memory structures")
    _add_scenario_flags(p_cmp, with_kl=False)
    p_cmp.add_argument("--k-max", type=int, default=7)
    p_cmp.add_argument("--budget-min", type=int, default=1)
    p_cmp.add_argument("--budget-max", type=int, required=True)
    p_cmp.add_argument("--mode", choices=sorted(_MODE_BY_FLAG), default="stepwise")
    p_cmp.add_argument("--out", required=True, help="CSV output path")
    p_cmp.set_defaults(handler=_cmd_compare)

    p_wit = sub.add_parser("witness", help="operational divisibility witness")
    _add_scenario_flags(p_wit)
    p_wit.add_argument("--t", type=int, required=True, help="intermediate step")
    p_wit.add_argument("--n", type=int, required=True, help="final step")
    p_wit.add_argument("--json", help="also write a JSON summary to this path")
    p_wit.set_defaults(handler=_cmd_witness)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(message)s",
    )
    try:
        return args.handler(args)
    except engine.CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())
