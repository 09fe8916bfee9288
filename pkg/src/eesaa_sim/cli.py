"""Command-line front end: config files, runs, batches, comparison plots.

Config files are JSON with keys matching NetworkConfig field names in
lower_snake_case; missing keys take the benchmark defaults and flag values
override file values.  Every run writes a per-round CSV plus a provenance
JSON sufficient to replay it byte-identically.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .engine import PROTOCOLS, make_protocol, run_batch, run_simulation
from .model import ConfigError, NetworkConfig, Position, RadioParams, validate_config
from .records import SimSummary
from .rng import RNG_ALGORITHM

CSV_HEADER = "round,alive,dead,ch_count,packets_to_bs,packets_to_ch,energy_dissipated,total_residual"

_RADIO_KEYS = ("e_elec_tx", "e_elec_rx", "e_amp", "e_agg")
_INT_KEYS = ("n_nodes", "packet_bits", "aggregated_bits", "app_type_count",
             "max_rounds", "rng_seed")
_FLOAT_KEYS = ("field_width", "field_height", "initial_energy", "p_desired",
               "pairing_range", "sep_advanced_fraction", "sep_energy_factor")


def config_from_dict(data: dict, source: str = "config") -> NetworkConfig:
    """Build a validated NetworkConfig from a JSON-shaped dict; unknown keys
    and invariant violations raise ConfigError naming the key."""
    if not isinstance(data, dict):
        raise ConfigError(source, "top-level JSON value must be an object")
    known = set(_INT_KEYS) | set(_FLOAT_KEYS) | {"bs_position", "radio"}
    for key in data:
        if key not in known:
            raise ConfigError(key, "unknown configuration key")

    kwargs = {}
    for key in _INT_KEYS:
        if key in data:
            value = data[key]
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(key, "must be an integer")
            kwargs[key] = value
    for key in _FLOAT_KEYS:
        if key in data:
            value = data[key]
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ConfigError(key, "must be a number")
            kwargs[key] = float(value)
    if "bs_position" in data:
        raw = data["bs_position"]
        if (not isinstance(raw, (list, tuple)) or len(raw) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                           for v in raw)):
            raise ConfigError("bs_position", "must be a [x, y] pair of numbers")
        kwargs["bs_position"] = Position(float(raw[0]), float(raw[1]))
    if "radio" in data:
        raw = data["radio"]
        if not isinstance(raw, dict):
            raise ConfigError("radio", "must be an object")
        for key in raw:
            if key not in _RADIO_KEYS:
                raise ConfigError(f"radio.{key}", "unknown configuration key")
        defaults = RadioParams()
        kwargs["radio"] = RadioParams(**{
            key: float(raw.get(key, getattr(defaults, key))) for key in _RADIO_KEYS})

    cfg = NetworkConfig(**kwargs)
    validate_config(cfg)
    return cfg


def parse_config(path) -> NetworkConfig:
    """Read a JSON config file; missing keys take the benchmark defaults."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config file: {exc}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"malformed JSON: {exc}")
    return config_from_dict(data, source=str(path))


def config_to_dict(cfg: NetworkConfig) -> dict:
    out = {key: getattr(cfg, key) for key in _INT_KEYS}
    out.update({key: getattr(cfg, key) for key in _FLOAT_KEYS})
    out["bs_position"] = [cfg.bs_position.x, cfg.bs_position.y]
    out["radio"] = {key: getattr(cfg.radio, key) for key in _RADIO_KEYS}
    return out


def _fmt(value: float) -> str:
    return format(value, ".12g")


def emit_csv(summary: SimSummary, path) -> Path:
    """Write the per-round series; floats carry 12 significant digits and
    rows end with LF, so identical summaries yield identical bytes."""
    path = Path(path)
    lines = [CSV_HEADER]
    for r in summary.per_round:
        lines.append(f"{r.round},{r.alive},{r.dead},{r.ch_count},"
                     f"{r.packets_to_bs},{r.packets_to_ch},"
                     f"{_fmt(r.energy_dissipated)},{_fmt(r.total_residual)}")
    path.write_bytes(("\n".join(lines) + "\n").encode("ascii"))
    return path


@dataclass
class RunProvenance:
    """Everything needed to replay one run byte-identically."""

    config: dict
    protocol: str
    seed: int
    pairing: dict | None
    engine_version: str
    rng_algorithm: str
    timestamp: str

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n"


def _timestamp() -> str:
    # SOURCE_DATE_EPOCH pins the recorded time so repeated runs can produce
    # byte-identical provenance files.
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = (datetime.fromtimestamp(int(epoch), tz=timezone.utc)
            if epoch is not None else datetime.now(tz=timezone.utc))
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def build_provenance(cfg: NetworkConfig, protocol: str,
                     pairing: dict | None) -> RunProvenance:
    return RunProvenance(config=config_to_dict(cfg),
                         protocol=protocol,
                         seed=cfg.rng_seed,
                         pairing=pairing,
                         engine_version=f"eesaa-sim {__version__}",
                         rng_algorithm=RNG_ALGORITHM,
                         timestamp=_timestamp())


def emit_plots(groups: dict[str, list[SimSummary]], out_dir) -> list[Path]:
    """Write four SVG comparison plots (alive, dead, heads per round,
    cumulative delivered packets), one mean series per protocol."""
    if not groups:
        raise ValueError("no summaries to plot")
    for protocol, summaries in groups.items():
        if not summaries or all(not s.per_round for s in summaries):
            raise ValueError(f"no rounds to plot for protocol {protocol!r}")

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def mean_series(summaries, extract, pad):
        longest = max(len(s.per_round) for s in summaries)
        rows = []
        for s in summaries:
            series = [extract(r) for r in s.per_round]
            filler = pad(series, s)
            series = series + [filler] * (longest - len(series))
            rows.append(series)
        return [sum(col) / len(col) for col in zip(*rows)]

    def total_nodes(s):
        return s.per_round[0].alive + s.per_round[0].dead

    panels = [
        ("alive_vs_round.svg", "Alive nodes", lambda r: r.alive,
         lambda series, s: 0),
        ("dead_vs_round.svg", "Dead nodes", lambda r: r.dead,
         lambda series, s: total_nodes(s)),
        ("chs_per_round.svg", "Cluster heads per round", lambda r: r.ch_count,
         lambda series, s: 0),
        ("packets_to_bs.svg", "Cumulative packets to BS", None, None),
    ]
    written = []
    for filename, ylabel, extract, pad in panels:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for protocol in sorted(groups):
            summaries = [s for s in groups[protocol] if s.per_round]
            if extract is None:
                longest = max(len(s.per_round) for s in summaries)
                rows = []
                for s in summaries:
                    total = 0
                    series = []
                    for r in s.per_round:
                        total += r.packets_to_bs
                        series.append(total)
                    series = series + [series[-1]] * (longest - len(series))
                    rows.append(series)
                series = [sum(col) / len(col) for col in zip(*rows)]
            else:
                series = mean_series(summaries, extract, pad)
            ax.plot(range(1, len(series) + 1), series, label=protocol.upper())
        ax.set_xlabel("Round")
        ax.set_ylabel(ylabel)
        ax.legend()
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        path = out_dir / filename
        fig.savefig(path, format="svg")
        plt.close(fig)
        written.append(path)
    return written


def _load_config(args) -> NetworkConfig:
    cfg = parse_config(args.config) if args.config else NetworkConfig()
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, rng_seed=args.seed)
    if getattr(args, "rounds", None) is not None:
        cfg = replace(cfg, max_rounds=args.rounds)
    validate_config(cfg)
    return cfg


def _summary_line(protocol: str, seed: int, summary: SimSummary) -> str:
    fnd = summary.first_death_round if summary.first_death_round is not None else "-"
    lnd = summary.last_death_round if summary.last_death_round is not None else "-"
    return (f"{protocol} seed={seed}: rounds={summary.rounds_simulated} "
            f"fnd={fnd} lnd={lnd} packets={summary.cumulative_packets_to_bs}")


def _write_run(out_dir: Path, cfg: NetworkConfig, protocol: str,
               summary: SimSummary, pairing: dict | None) -> tuple[Path, Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{protocol}_seed{cfg.rng_seed}"
    csv_path = emit_csv(summary, out_dir / f"{stem}.csv")
    prov = build_provenance(cfg, protocol, pairing)
    prov_path = out_dir / f"{stem}.provenance.json"
    prov_path.write_bytes(prov.to_json().encode("ascii"))
    return csv_path, prov_path


def cmd_run(args) -> int:
    cfg = _load_config(args)
    proto = make_protocol(args.protocol, cfg)
    summary = run_simulation(cfg, proto)
    pairing = (proto.pair_table.to_json_dict()
               if getattr(proto, "pair_table", None) is not None else None)
    _write_run(Path(args.out), cfg, args.protocol, summary, pairing)
    print(_summary_line(args.protocol, cfg.rng_seed, summary))
    return 0


def _aggregate_table(aggregates) -> str:
    header = (f"{'protocol':<9} {'runs':>4} "
              f"{'fnd_mean':>9} {'fnd_min':>8} {'fnd_max':>8} {'fnd_sd':>8} "
              f"{'lnd_mean':>9} {'lnd_min':>8} {'lnd_max':>8} "
              f"{'pkts_mean':>10} {'pkts_sd':>9}")
    lines = [header]
    for agg in aggregates:
        def cell(stats, attr, width):
            if stats is None:
                return "-".rjust(width)
            return f"{getattr(stats, attr):.1f}".rjust(width)
        lines.append(
            f"{agg.protocol:<9} {agg.runs:>4} "
            f"{cell(agg.fnd, 'mean', 9)} {cell(agg.fnd, 'minimum', 8)} "
            f"{cell(agg.fnd, 'maximum', 8)} {cell(agg.fnd, 'stddev', 8)} "
            f"{cell(agg.lnd, 'mean', 9)} {cell(agg.lnd, 'minimum', 8)} "
            f"{cell(agg.lnd, 'maximum', 8)} "
            f"{cell(agg.packets, 'mean', 10)} {cell(agg.packets, 'stddev', 9)}")
    return "\n".join(lines)


def _run_jobs(cfg, protocols, n_seeds, out_dir, workers) -> "BatchOutcome":
    seeds = [cfg.rng_seed + i for i in range(n_seeds)]
    jobs = [(cfg, protocol, seed) for protocol in protocols for seed in seeds]
    batch = run_batch(jobs, workers=workers)
    out_dir.mkdir(parents=True, exist_ok=True)
    failures = []
    for result in batch.results:
        if result.summary is None:
            failures.append(result)
            continue
        run_cfg = replace(cfg, rng_seed=result.seed)
        _write_run(out_dir, run_cfg, result.protocol, result.summary, result.pairing)
    return batch, failures


def cmd_batch(args) -> int:
    cfg = _load_config(args)
    protocols = [p.strip() for p in args.protocols.split(",") if p.strip()]
    for protocol in protocols:
        if protocol not in PROTOCOLS:
            raise ConfigError("protocols", f"unknown protocol {protocol!r}")
    batch, failures = _run_jobs(cfg, protocols, args.seeds, Path(args.out), args.workers)
    print(_aggregate_table(batch.aggregates))
    for failure in failures:
        print(f"job failed: {failure.protocol} seed={failure.seed}: {failure.error}",
              file=sys.stderr)
    return 1 if failures else 0


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    out_dir = Path(args.out)
    batch, failures = _run_jobs(cfg, list(PROTOCOLS), args.seeds, out_dir, args.workers)
    if failures:
        for failure in failures:
            print(f"job failed: {failure.protocol} seed={failure.seed}: {failure.error}",
                  file=sys.stderr)
        return 1
    groups = {}
    for result in batch.results:
        groups.setdefault(result.protocol, []).append(result.summary)
    emit_plots(groups, out_dir)
    table = _aggregate_table(batch.aggregates)
    print(table)
    report = {
        "config": config_to_dict(cfg),
        "seeds": args.seeds,
        "aggregates": [{
            "protocol": agg.protocol,
            "runs": agg.runs,
            "fnd": agg.fnd.__dict__ if agg.fnd else None,
            "lnd": agg.lnd.__dict__ if agg.lnd else None,
            "packets": agg.packets.__dict__ if agg.packets else None,
        } for agg in batch.aggregates],
    }
    (out_dir / "compare_summary.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="ascii")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eesaa-sim",
        description="Round-based cluster-routing WSN simulator "
                    "(sleep/awake-aware protocol plus LEACH/SEP/DEEC baselines)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, protocol_flag):
        p.add_argument("--config", metavar="PATH", help="JSON config file")
        p.add_argument("--seed", type=int, metavar="U64",
                       help="base RNG seed (overrides config)")
        p.add_argument("--rounds", type=int, metavar="N",
                       help="maximum rounds (overrides config)")
        p.add_argument("--out", metavar="DIR", default="out",
                       help="output directory (default: out)")
        if protocol_flag:
            p.add_argument("--protocol", choices=PROTOCOLS, default="eesaa",
                           help="protocol to simulate")

    run_p = sub.add_parser("run", help="single simulation run")
    common(run_p, protocol_flag=True)
    run_p.set_defaults(func=cmd_run)

    batch_p = sub.add_parser("batch", help="seed sweep over selected protocols")
    common(batch_p, protocol_flag=False)
    batch_p.add_argument("--protocols", default="eesaa",
                         help="comma-separated protocol list")
    batch_p.add_argument("--seeds", type=int, default=10, metavar="N",
                         help="number of consecutive seeds (default: 10)")
    batch_p.add_argument("--workers", type=int, default=1,
                         help="parallel worker processes (default: 1)")
    batch_p.set_defaults(func=cmd_batch)

    cmp_p = sub.add_parser("compare",
                           help="all four protocols: seed sweep, table, plots")
    common(cmp_p, protocol_flag=False)
    cmp_p.add_argument("--seeds", type=int, default=10, metavar="N",
                       help="seeds per protocol (default: 10)")
    cmp_p.add_argument("--workers", type=int, default=1,
                       help="parallel worker processes (default: 1)")
    cmp_p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
