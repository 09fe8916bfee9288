"""LEACH, SEP, and DEEC cluster-head election baselines.

All three share the same round shape: threshold election over every alive
node (no duty cycling, every node transmits every round), nearest-head
association, and the identical transmission-phase energy accounting used
by the sleep/awake protocol.  They differ only in how each node's election
threshold is computed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .eesaa import associate_members, run_ntp
from .model import Mode, NetworkConfig, NodeState, epoch_length
from .records import RoundRecord


@dataclass(frozen=True)
class BaselineKind:
    """Baseline selector plus its election parameters: `sep_advanced_fraction`
    (m) of nodes carry `sep_energy_factor` (alpha) extra initial energy."""

    kind: str
    sep_advanced_fraction: float = 0.0
    sep_energy_factor: float = 1.0
    deec_rounds_estimate: int = 1

    def __post_init__(self):
        if self.kind not in ("leach", "sep", "deec"):
            raise ValueError(f"unknown baseline kind: {self.kind!r}")
        if not 0.0 <= self.sep_advanced_fraction <= 1.0:
            raise ValueError("sep_advanced_fraction must lie in [0, 1]")
        if self.sep_energy_factor < 0:
            raise ValueError("sep_energy_factor must be >= 0")
        if self.deec_rounds_estimate < 1:
            raise ValueError("deec_rounds_estimate must be >= 1")


def leach_threshold(p: float, round_no: int, eligible: bool) -> float:
    """p / (1 - p * (round mod ceil(1/p))) while the node has not served as
    head in the current epoch, else 0."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    if round_no < 1:
        raise ValueError("round numbers start at 1")
    if not eligible:
        return 0.0
    m = round_no % epoch_length(p)
    return p / (1.0 - p * m)


def deec_probability(p: float, residual: float, network_average: float) -> float:
    """Per-round election probability scaled by residual over network-average
    energy, capped at 1."""
    if network_average <= 0:
        return 0.0
    return min(1.0, p * (residual / network_average))


def _election(nodes: list[NodeState], rng, threshold_of) -> list[int]:
    """Draw one uniform per alive node in ascending id order; fall back to
    the maximum-residual-energy node when nothing is elected."""
    alive = [n for n in nodes if n.mode is not Mode.DEAD]
    chosen: list[int] = []
    for node in sorted(alive, key=lambda n: n.id):
        if rng.random() < threshold_of(node):
            chosen.append(node.id)
    if not chosen and alive:
        fallback = min(alive, key=lambda n: (-n.residual_energy, n.id))
        chosen.append(fallback.id)
    return chosen


def _finish_round(nodes, round_no, ch_ids, cfg) -> RoundRecord:
    n_total = len(nodes)
    for ch_id in ch_ids:
        nodes[ch_id].is_ch = True
    alive = [n for n in nodes if n.mode is not Mode.DEAD]
    clusters = associate_members(ch_ids, alive)
    ntp = run_ntp(clusters, nodes, cfg)
    for node in nodes:
        node.is_ch = False
        node.cluster_of = None
    alive_end = sum(1 for n in nodes if n.mode is not Mode.DEAD)
    return RoundRecord(round=round_no,
                       alive=alive_end,
                       dead=n_total - alive_end,
                       ch_count=len(ch_ids),
                       packets_to_bs=ntp.packets_to_bs,
                       packets_to_ch=ntp.packets_to_ch,
                       energy_dissipated=ntp.energy_dissipated,
                       total_residual=sum(n.residual_energy for n in nodes))


def _terminal_record(round_no: int, n_total: int) -> RoundRecord:
    return RoundRecord(round=round_no, alive=0, dead=n_total, ch_count=0,
                       packets_to_bs=0, packets_to_ch=0,
                       energy_dissipated=0.0, total_residual=0.0)


class LeachProtocol:
    """Periodic rotation: each node serves at most once per epoch."""

    name = "leach"

    def __init__(self, cfg: NetworkConfig):
        self._epoch = epoch_length(cfg.p_desired)
        self._served: set[int] = set()

    def setup(self, nodes, cfg, rng) -> None:
        pass

    def step(self, nodes, round_no, cfg, rng) -> RoundRecord:
        return run_leach_round(self, nodes, round_no, cfg, rng)


def run_leach_round(proto: LeachProtocol, nodes, round_no, cfg, rng) -> RoundRecord:
    if not any(n.mode is not Mode.DEAD for n in nodes):
        return _terminal_record(round_no, len(nodes))
    if round_no % proto._epoch == 0:
        proto._served.clear()
    p = cfg.p_desired

    def threshold_of(node):
        return leach_threshold(p, round_no, node.id not in proto._served)

    ch_ids = _election(nodes, rng, threshold_of)
    proto._served.update(ch_ids)
    return _finish_round(nodes, round_no, ch_ids, cfg)


class SepProtocol:
    """Two-tier election: advanced nodes carry extra energy and a
    proportionally raised election probability.  With an advanced fraction
    of zero this reduces exactly to LEACH, draw for draw."""

    name = "sep"

    def __init__(self, cfg: NetworkConfig):
        self.kind = BaselineKind(kind="sep",
                                 sep_advanced_fraction=cfg.sep_advanced_fraction,
                                 sep_energy_factor=cfg.sep_energy_factor)
        m = self.kind.sep_advanced_fraction
        alpha = self.kind.sep_energy_factor
        self._advanced = frozenset(range(int(round(m * cfg.n_nodes))))
        self._p_normal = cfg.p_desired / (1.0 + alpha * m)
        self._p_advanced = cfg.p_desired * (1.0 + alpha) / (1.0 + alpha * m)
        self._epoch_normal = epoch_length(self._p_normal)
        self._epoch_advanced = epoch_length(self._p_advanced)
        self._served: set[int] = set()

    def setup(self, nodes, cfg, rng) -> None:
        boost = 1.0 + self.kind.sep_energy_factor
        for node in nodes:
            if node.id in self._advanced:
                node.residual_energy = cfg.initial_energy * boost

    def step(self, nodes, round_no, cfg, rng) -> RoundRecord:
        return run_sep_round(self, nodes, round_no, cfg, rng)


def run_sep_round(proto: SepProtocol, nodes, round_no, cfg, rng) -> RoundRecord:
    if not any(n.mode is not Mode.DEAD for n in nodes):
        return _terminal_record(round_no, len(nodes))
    if round_no % proto._epoch_normal == 0:
        proto._served -= {n.id for n in nodes if n.id not in proto._advanced}
    if round_no % proto._epoch_advanced == 0:
        proto._served -= proto._advanced

    def threshold_of(node):
        p = proto._p_advanced if node.id in proto._advanced else proto._p_normal
        return leach_threshold(p, round_no, node.id not in proto._served)

    ch_ids = _election(nodes, rng, threshold_of)
    proto._served.update(ch_ids)
    return _finish_round(nodes, round_no, ch_ids, cfg)


class DeecProtocol:
    """Election probability scales with residual over network-average energy,
    recomputed exactly from simulator state each round."""

    name = "deec"

    def __init__(self, cfg: NetworkConfig):
        self.kind = BaselineKind(kind="deec")

    def setup(self, nodes, cfg, rng) -> None:
        pass

    def step(self, nodes, round_no, cfg, rng) -> RoundRecord:
        return run_deec_round(self, nodes, round_no, cfg, rng)


def run_deec_round(proto: DeecProtocol, nodes, round_no, cfg, rng) -> RoundRecord:
    alive = [n for n in nodes if n.mode is not Mode.DEAD]
    if not alive:
        return _terminal_record(round_no, len(nodes))
    average = sum(n.residual_energy for n in alive) / len(alive)
    p = cfg.p_desired

    def threshold_of(node):
        return deec_probability(p, node.residual_energy, average)

    ch_ids = _election(nodes, rng, threshold_of)
    return _finish_round(nodes, round_no, ch_ids, cfg)
