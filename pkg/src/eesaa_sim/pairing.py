"""Startup coupling of same-application nodes and initial duty modes.

Pairing happens once, before round 1: nodes of the same application type
within pairing range are coupled greedily by ascending mutual distance.
Within each pair the member closer to the base station starts Active and
its partner starts Sleep; nodes left without a partner stay Active for
their whole lifetime.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Mode, NodeState, Position, distance


@dataclass
class PairingTable:
    """Disjoint pairs (first id < second id) plus the unpaired ids."""

    pairs: list[tuple[int, int]] = field(default_factory=list)
    isolated: list[int] = field(default_factory=list)

    def partner_of(self, node_id: int) -> int | None:
        for a, b in self.pairs:
            if a == node_id:
                return b
            if b == node_id:
                return a
        return None

    def partner_map(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def to_json_dict(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs],
                "isolated": list(self.isolated)}


def compute_pairs(nodes: list[NodeState], pairing_range: float) -> PairingTable:
    """Greedy minimum-distance matching of same-type nodes within range.

    Candidate pairs are taken in ascending (distance, first id, second id)
    order, skipping nodes already matched.  The result is independent of
    the input list order and deterministic for fixed ids and positions.
    """
    ordered = sorted(nodes, key=lambda n: n.id)
    candidates = []
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if a.app_type != b.app_type:
                continue
            d = distance(a.position, b.position)
            if d <= pairing_range:
                candidates.append((d, a.id, b.id))
    candidates.sort()

    matched: set[int] = set()
    pairs: list[tuple[int, int]] = []
    for _, a_id, b_id in candidates:
        if a_id in matched or b_id in matched:
            continue
        matched.add(a_id)
        matched.add(b_id)
        pairs.append((a_id, b_id))
    pairs.sort()
    isolated = [n.id for n in ordered if n.id not in matched]
    return PairingTable(pairs=pairs, isolated=isolated)


def apply_pairs(nodes: list[NodeState], table: PairingTable) -> None:
    """Record each node's partner id on the node states."""
    partners = table.partner_map()
    for node in nodes:
        node.partner = partners.get(node.id)


def initial_modes(nodes: list[NodeState], table: PairingTable, bs: Position) -> None:
    """Assign startup modes: in each pair the node strictly closer to the
    base station goes Active and the other Sleep (ties: lower id Active);
    isolated nodes go Active."""
    by_id = {n.id: n for n in nodes}
    for a_id, b_id in table.pairs:
        a, b = by_id[a_id], by_id[b_id]
        da = distance(a.position, bs)
        db = distance(b.position, bs)
        if da < db or (da == db and a.id < b.id):
            a.mode, b.mode = Mode.ACTIVE, Mode.SLEEP
        else:
            a.mode, b.mode = Mode.SLEEP, Mode.ACTIVE
    for node_id in table.isolated:
        by_id[node_id].mode = Mode.ACTIVE
