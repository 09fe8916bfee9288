"""Per-round metric records and whole-run summaries."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class RoundRecord:
    """Metrics for one completed round.  `alive`/`dead`/`total_residual`
    are end-of-round counts; `ch_count` is the number of clusters formed."""

    round: int
    alive: int
    dead: int
    ch_count: int
    packets_to_bs: int
    packets_to_ch: int
    energy_dissipated: float
    total_residual: float


@dataclass
class SimSummary:
    """Derived lifetime metrics.  Death rounds are None when the event was
    not reached within the simulated horizon."""

    first_death_round: int | None
    last_death_round: int | None
    instability: int | None
    cumulative_packets_to_bs: int
    rounds_simulated: int
    per_round: list[RoundRecord] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "first_death_round": self.first_death_round,
            "last_death_round": self.last_death_round,
            "instability": self.instability,
            "cumulative_packets_to_bs": self.cumulative_packets_to_bs,
            "rounds_simulated": self.rounds_simulated,
        }
