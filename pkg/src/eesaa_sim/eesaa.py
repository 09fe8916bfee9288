"""Sleep/awake-aware clustering protocol: per-round state machine.

Each round runs, in order: determine acting cluster heads (threshold
election in round 1 or whenever no live node carries a successor flag,
otherwise the flagged successors take over), nearest-head association,
successor selection on maximum residual energy, the data-transmission
phase with its energy debits, and finally the end-of-round mode switch
that alternates coupled nodes between Active and Sleep.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (Mode, NetworkConfig, NodeState, ch_round_energy, distance,
                    drain, epoch_length, tx_energy)
from .pairing import PairingTable, apply_pairs, compute_pairs, initial_modes
from .records import RoundRecord


@dataclass
class ClusterAssignment:
    """One cluster for the current round: acting head, its members, and the
    successor picked for the next round (None while unset)."""

    ch_id: int
    member_ids: list[int] = field(default_factory=list)
    next_cch: int | None = None


@dataclass
class NtpResult:
    """Energy and packet tallies of one transmission phase."""

    energy_dissipated: float = 0.0
    packets_to_ch: int = 0
    packets_to_bs: int = 0


def election_threshold(p_desired: float, round_no: int) -> float:
    """Election threshold for an eligible Active node:
    p / (1 - p * (round mod ceil(1/p))).  Ineligible nodes use 0."""
    if not 0.0 < p_desired < 1.0:
        raise ValueError("p_desired must lie strictly between 0 and 1")
    if round_no < 1:
        raise ValueError("round numbers start at 1")
    m = round_no % epoch_length(p_desired)
    return p_desired / (1.0 - p_desired * m)


def elect_pchs(active_nodes: list[NodeState], p_desired: float, round_no: int,
               rng, ineligible: frozenset | set = frozenset()) -> list[int]:
    """Threshold election among Active nodes, in ascending id order.

    Every Active alive node draws one uniform and is selected when the draw
    falls below its threshold (0 for ids in `ineligible`).  If nothing is
    selected and at least one Active node exists, the Active node with
    maximum residual energy (tie: lowest id) becomes the single head.
    """
    threshold = election_threshold(p_desired, round_no)
    chosen: list[int] = []
    candidates = sorted((n for n in active_nodes if n.mode is Mode.ACTIVE),
                        key=lambda n: n.id)
    for node in candidates:
        u = rng.random()
        if node.id not in ineligible and u < threshold:
            chosen.append(node.id)
    if not chosen and candidates:
        fallback = min(candidates, key=lambda n: (-n.residual_energy, n.id))
        chosen.append(fallback.id)
    return chosen


def associate_members(chs: list[int], active_nodes: list[NodeState]) -> list[ClusterAssignment]:
    """Attach every Active non-head node to its nearest head (signal strength
    proxied by geometric distance; ties go to the lower head id)."""
    if not chs:
        raise ValueError("association requires at least one cluster head")
    by_id = {n.id: n for n in active_nodes}
    head_ids = sorted(chs)
    clusters = {ch_id: ClusterAssignment(ch_id=ch_id) for ch_id in head_ids}
    for node in sorted(active_nodes, key=lambda n: n.id):
        if node.id in clusters:
            node.cluster_of = node.id
            continue
        best = min(head_ids,
                   key=lambda c: (distance(node.position, by_id[c].position), c))
        clusters[best].member_ids.append(node.id)
        node.cluster_of = best
    return [clusters[c] for c in head_ids]


def select_cch(cluster: ClusterAssignment, nodes: list[NodeState]) -> int:
    """Pick next round's head from the acting head plus its members: maximum
    residual energy, ties broken by distance to the acting head, then lowest
    id.  Sets the winner's successor flag and returns its id."""
    ch = nodes[cluster.ch_id]
    candidates = [ch] + [nodes[m] for m in cluster.member_ids]
    winner = min(candidates,
                 key=lambda n: (-n.residual_energy,
                                distance(n.position, ch.position),
                                n.id))
    winner.cch_flag = True
    cluster.next_cch = winner.id
    return winner.id


def run_ntp(clusters: list[ClusterAssignment], nodes: list[NodeState],
            cfg: NetworkConfig) -> NtpResult:
    """Transmission phase: members send one packet to their head, heads
    receive, aggregate, and forward one aggregated packet to the base
    station.  Sleep nodes spend nothing.

    A node whose debit meets or exceeds its residual energy dies and its
    transmission that round is not counted as delivered; heads are charged
    reception/aggregation only for the packets that actually arrived.
    Tallies accumulate the energy actually drawn, so the phase conserves
    energy exactly even across deaths.
    """
    radio = cfg.radio
    bits = cfg.packet_bits
    result = NtpResult()
    for cluster in sorted(clusters, key=lambda c: c.ch_id):
        head = nodes[cluster.ch_id]
        delivered = 0
        for member_id in cluster.member_ids:
            member = nodes[member_id]
            need = tx_energy(radio, bits, distance(member.position, head.position))
            result.energy_dissipated += drain(member, need)
            if member.mode is not Mode.DEAD:
                delivered += 1
                result.packets_to_ch += 1
        d_bs = distance(head.position, cfg.bs_position)
        need = ch_round_energy(radio, delivered, bits, cfg.aggregated_bits, d_bs)
        result.energy_dissipated += drain(head, need)
        if head.mode is not Mode.DEAD:
            result.packets_to_bs += 1
    return result


def node_mode_setup(nodes: list[NodeState], table: PairingTable) -> None:
    """End-of-round mode switch.

    Coupled nodes: an Active node keeps Active only while it carries the
    successor flag, otherwise it goes to Sleep; a Sleep node stays asleep
    only while its partner carries the flag, otherwise it wakes.  A node
    whose partner has died stays Active permanently.  Uncoupled nodes are
    always Active.  Dead nodes are untouched.
    """
    partners = table.partner_map()
    for node in nodes:
        if node.mode is Mode.DEAD:
            continue
        partner_id = partners.get(node.id)
        if partner_id is None:
            node.mode = Mode.ACTIVE
            continue
        partner = nodes[partner_id]
        if partner.mode is Mode.DEAD:
            node.mode = Mode.ACTIVE
        elif node.mode is Mode.ACTIVE:
            node.mode = Mode.ACTIVE if node.cch_flag else Mode.SLEEP
        else:
            node.mode = Mode.SLEEP if partner.cch_flag else Mode.ACTIVE


class EesaaProtocol:
    """Round driver holding the pairing table and election bookkeeping."""

    name = "eesaa"

    def __init__(self, cfg: NetworkConfig):
        self.pair_table: PairingTable | None = None
        self._epoch = epoch_length(cfg.p_desired)
        # Nodes that served as head during the current run of consecutive
        # election rounds; cleared whenever flag handover resumes.
        self._served: set[int] = set()
        self._election_streak = 0

    def setup(self, nodes: list[NodeState], cfg: NetworkConfig, rng) -> None:
        self.pair_table = compute_pairs(nodes, cfg.pairing_range)
        apply_pairs(nodes, self.pair_table)
        initial_modes(nodes, self.pair_table, cfg.bs_position)

    def step(self, nodes: list[NodeState], round_no: int,
             cfg: NetworkConfig, rng) -> RoundRecord:
        return run_eesaa_round(self, nodes, round_no, cfg, rng)


def run_eesaa_round(proto: EesaaProtocol, nodes: list[NodeState], round_no: int,
                    cfg: NetworkConfig, rng) -> RoundRecord:
    """Execute one full round; returns the all-zero terminal record when no
    node is alive at entry."""
    n_total = len(nodes)
    if not any(n.mode is not Mode.DEAD for n in nodes):
        return RoundRecord(round=round_no, alive=0, dead=n_total, ch_count=0,
                           packets_to_bs=0, packets_to_ch=0,
                           energy_dissipated=0.0, total_residual=0.0)

    holders = [n for n in nodes if n.cch_flag and n.mode is not Mode.DEAD]
    active = [n for n in nodes if n.mode is Mode.ACTIVE]
    if round_no == 1 or not holders:
        ch_ids = elect_pchs(active, cfg.p_desired, round_no, rng,
                            ineligible=proto._served)
        proto._served.update(ch_ids)
        proto._election_streak += 1
        if proto._election_streak >= proto._epoch:
            proto._served.clear()
            proto._election_streak = 0
    else:
        ch_ids = sorted(n.id for n in holders)
        proto._served.clear()
        proto._election_streak = 0

    for ch_id in ch_ids:
        nodes[ch_id].is_ch = True
        nodes[ch_id].cch_flag = False

    clusters = associate_members(ch_ids, active)
    for cluster in clusters:
        select_cch(cluster, nodes)

    ntp = run_ntp(clusters, nodes, cfg)
    node_mode_setup(nodes, proto.pair_table)

    for node in nodes:
        node.is_ch = False
        node.cluster_of = None

    alive = sum(1 for n in nodes if n.mode is not Mode.DEAD)
    return RoundRecord(round=round_no,
                       alive=alive,
                       dead=n_total - alive,
                       ch_count=len(ch_ids),
                       packets_to_bs=ntp.packets_to_bs,
                       packets_to_ch=ntp.packets_to_ch,
                       energy_dissipated=ntp.energy_dissipated,
                       total_residual=sum(n.residual_energy for n in nodes))
