"""Round driver: deployment, full runs, summaries, and seed batches.

Randomness is consumed in a documented fixed order so that a (seed,
config, protocol) triple reproduces byte-identical results everywhere:
for each node id in ascending order, deployment draws x, then y, then the
application type; afterwards each round's election draws one uniform per
participating node in ascending id order.
"""

from __future__ import annotations

import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .baselines import DeecProtocol, LeachProtocol, SepProtocol
from .eesaa import EesaaProtocol
from .model import Mode, NetworkConfig, NodeState, Position, validate_config
from .records import RoundRecord, SimSummary
from .rng import Xoshiro256StarStar

PROTOCOLS = ("eesaa", "leach", "sep", "deec")

_FACTORIES = {
    "eesaa": EesaaProtocol,
    "leach": LeachProtocol,
    "sep": SepProtocol,
    "deec": DeecProtocol,
}


def make_protocol(name: str, cfg: NetworkConfig):
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise ValueError(f"unknown protocol {name!r}; expected one of {PROTOCOLS}")
    return factory(cfg)


def deploy_nodes(cfg: NetworkConfig, rng: Xoshiro256StarStar) -> list[NodeState]:
    """Drop n nodes uniformly at random in the field; per node, in id order,
    the stream yields x, y, then the application-type draw."""
    nodes = []
    for node_id in range(cfg.n_nodes):
        x = rng.uniform(0.0, cfg.field_width)
        y = rng.uniform(0.0, cfg.field_height)
        app_type = int(rng.random() * cfg.app_type_count)
        nodes.append(NodeState(id=node_id,
                               position=Position(x, y),
                               app_type=app_type,
                               residual_energy=cfg.initial_energy,
                               mode=Mode.ACTIVE))
    return nodes


def run_simulation(cfg: NetworkConfig, protocol, on_round=None) -> SimSummary:
    """Run one simulation to network death or cfg.max_rounds.

    `protocol` is a name from PROTOCOLS or an already-built protocol object.
    `on_round(round_no, nodes, record)` is an optional instrumentation hook,
    called once after setup with (0, nodes, None) and then after every round.
    """
    validate_config(cfg)
    rng = Xoshiro256StarStar(cfg.rng_seed)
    nodes = deploy_nodes(cfg, rng)
    proto = protocol if hasattr(protocol, "step") else make_protocol(protocol, cfg)
    proto.setup(nodes, cfg, rng)
    if on_round is not None:
        on_round(0, nodes, None)
    records: list[RoundRecord] = []
    for round_no in range(1, cfg.max_rounds + 1):
        record = proto.step(nodes, round_no, cfg, rng)
        records.append(record)
        if on_round is not None:
            on_round(round_no, nodes, record)
        if record.alive == 0:
            break
    return compute_summary(records)


def compute_summary(records: list[RoundRecord]) -> SimSummary:
    """First/last death rounds, instability span, and cumulative delivery.
    Unreached events stay None."""
    first_death = next((r.round for r in records if r.dead > 0), None)
    last_death = next((r.round for r in records if r.alive == 0), None)
    instability = (last_death - first_death
                   if first_death is not None and last_death is not None else None)
    return SimSummary(first_death_round=first_death,
                      last_death_round=last_death,
                      instability=instability,
                      cumulative_packets_to_bs=sum(r.packets_to_bs for r in records),
                      rounds_simulated=len(records),
                      per_round=list(records))


@dataclass
class JobResult:
    """Outcome of one batch entry; exactly one of summary/error is set."""

    index: int
    protocol: str
    seed: int
    summary: SimSummary | None = None
    error: str | None = None
    pairing: dict | None = None


@dataclass(frozen=True)
class Stats:
    mean: float
    minimum: float
    maximum: float
    stddev: float


@dataclass
class ProtocolAggregate:
    protocol: str
    runs: int
    fnd: Stats | None
    lnd: Stats | None
    packets: Stats | None


@dataclass
class BatchResult:
    results: list[JobResult] = field(default_factory=list)
    aggregates: list[ProtocolAggregate] = field(default_factory=list)


def _stats(values: list[float]) -> Stats | None:
    if not values:
        return None
    spread = statistics.stdev(values) if len(values) >= 2 else 0.0
    return Stats(mean=statistics.fmean(values), minimum=min(values),
                 maximum=max(values), stddev=spread)


def _run_job(job) -> JobResult:
    index, cfg, protocol, seed = job
    run_cfg = replace(cfg, rng_seed=seed)
    try:
        proto = make_protocol(protocol, run_cfg)
        summary = run_simulation(run_cfg, proto)
        pairing = (proto.pair_table.to_json_dict()
                   if getattr(proto, "pair_table", None) is not None else None)
        return JobResult(index=index, protocol=protocol, seed=seed,
                         summary=summary, pairing=pairing)
    except Exception as exc:  # job isolation: one failure must not sink the batch
        return JobResult(index=index, protocol=protocol, seed=seed,
                         error=f"{type(exc).__name__}: {exc}")


def run_batch(jobs, workers: int = 1) -> BatchResult:
    """Run (config, protocol, seed) jobs; results keep the input ordering
    regardless of execution order, and per-job failures are recorded without
    aborting the batch."""
    indexed = [(i, cfg, protocol, seed) for i, (cfg, protocol, seed) in enumerate(jobs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, indexed))
    else:
        results = [_run_job(job) for job in indexed]
    results.sort(key=lambda r: r.index)

    aggregates = []
    for protocol in sorted({r.protocol for r in results}):
        ok = [r.summary for r in results if r.protocol == protocol and r.summary]
        aggregates.append(ProtocolAggregate(
            protocol=protocol,
            runs=len(ok),
            fnd=_stats([s.first_death_round for s in ok
                        if s.first_death_round is not None]),
            lnd=_stats([s.last_death_round for s in ok
                        if s.last_death_round is not None]),
            packets=_stats([float(s.cumulative_packets_to_bs) for s in ok]),
        ))
    return BatchResult(results=results, aggregates=aggregates)
