"""Shared domain types and the first-order radio energy model.

Transmitting L bits over distance d costs ``e_elec_tx*L + e_amp*L*d^2``
(electronics plus free-space amplifier, d^2 path loss only); receiving
costs ``e_elec_rx*L``; aggregating costs ``e_agg`` per bit per source
stream.  All energies are double-precision joules and every operation
here is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Mode(Enum):
    ACTIVE = "active"
    SLEEP = "sleep"
    DEAD = "dead"


class ConfigError(ValueError):
    """Invalid configuration; `key` names the offending parameter."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class Position:
    x: float
    y: float


@dataclass(frozen=True)
class RadioParams:
    """Radio constants: electronics (J/bit), amplifier (J/bit/m^2), aggregation (J/bit)."""

    e_elec_tx: float = 50e-9
    e_elec_rx: float = 50e-9
    e_amp: float = 100e-12
    e_agg: float = 50e-12


@dataclass(frozen=True)
class NetworkConfig:
    """Field geometry, traffic sizes, and protocol knobs; defaults are the
    standard 100-node / 100 m x 100 m benchmark configuration."""

    n_nodes: int = 100
    field_width: float = 100.0
    field_height: float = 100.0
    bs_position: Position = Position(50.0, 175.0)
    initial_energy: float = 0.5
    p_desired: float = 0.1
    packet_bits: int = 4000
    aggregated_bits: int = 4000
    pairing_range: float = 15.0
    app_type_count: int = 1
    max_rounds: int = 10000
    rng_seed: int = 1
    radio: RadioParams = RadioParams()
    # Two-tier heterogeneity used only by the SEP baseline: a fraction of
    # "advanced" nodes carries (1 + factor) times the initial energy.
    sep_advanced_fraction: float = 0.0
    sep_energy_factor: float = 1.0


@dataclass(slots=True)
class NodeState:
    """One sensor node.  Mutated only by the simulation engine that owns it."""

    id: int
    position: Position
    app_type: int = 0
    residual_energy: float = 0.0
    mode: Mode = Mode.ACTIVE
    partner: int | None = None
    is_ch: bool = False
    cch_flag: bool = False
    cluster_of: int | None = None

    def alive(self) -> bool:
        return self.mode is not Mode.DEAD


def distance(a: Position, b: Position) -> float:
    """Euclidean distance in meters; symmetric, zero iff a == b."""
    return math.hypot(a.x - b.x, a.y - b.y)


def tx_energy(radio: RadioParams, bits: float, d: float) -> float:
    """Energy to transmit `bits` over distance `d` meters."""
    return radio.e_elec_tx * bits + radio.e_amp * bits * d * d


def rx_energy(radio: RadioParams, bits: float) -> float:
    """Energy to receive `bits`."""
    return radio.e_elec_rx * bits


def agg_energy(radio: RadioParams, bits_per_source: float, sources: int) -> float:
    """Energy to aggregate `sources` data streams of `bits_per_source` each.

    `sources` counts every stream entering the aggregate, including the
    aggregator's own sensed data.
    """
    return radio.e_agg * bits_per_source * sources


def expected_cluster_members(n: int, k: int) -> float:
    """Average non-head nodes per cluster when n nodes form k clusters: n/k - 1."""
    if k < 1:
        raise ValueError("cluster count k must be >= 1")
    return n / k - 1


def ch_round_energy(radio: RadioParams, members: int, bits: float,
                    agg_bits: float, d_to_bs: float) -> float:
    """Total cluster-head cost for one round: receive `bits` from each of
    `members` nodes, aggregate members+1 streams, transmit `agg_bits` to the
    base station at `d_to_bs`.  Exactly the sum of the three component
    operations, in that order."""
    return (rx_energy(radio, bits) * members
            + agg_energy(radio, bits, members + 1)
            + tx_energy(radio, agg_bits, d_to_bs))


def drain(node: NodeState, joules: float) -> float:
    """Debit `joules` from a node, clamping at zero.

    A debit that meets or exceeds the residual kills the node (mode Dead,
    CH flags cleared).  Returns the energy actually drawn, which is what
    conservation accounting must accumulate.
    """
    if joules >= node.residual_energy:
        drawn = node.residual_energy
        node.residual_energy = 0.0
        node.mode = Mode.DEAD
        node.is_ch = False
        node.cch_flag = False
        node.cluster_of = None
        return drawn
    node.residual_energy -= joules
    return joules


def epoch_length(p: float) -> int:
    """Rounds per election epoch, ceil(1/p) (guarded against float noise)."""
    return math.ceil(1.0 / p - 1e-9)


def validate_config(cfg: NetworkConfig) -> None:
    """Raise ConfigError naming the offending key on any invariant violation."""
    if cfg.n_nodes < 1:
        raise ConfigError("n_nodes", "must be >= 1")
    if not cfg.field_width > 0:
        raise ConfigError("field_width", "must be > 0")
    if not cfg.field_height > 0:
        raise ConfigError("field_height", "must be > 0")
    if not 0.0 < cfg.p_desired < 1.0:
        raise ConfigError("p_desired", "must lie strictly between 0 and 1")
    if not cfg.initial_energy > 0:
        raise ConfigError("initial_energy", "must be > 0")
    if cfg.packet_bits <= 0:
        raise ConfigError("packet_bits", "must be > 0")
    if cfg.aggregated_bits <= 0:
        raise ConfigError("aggregated_bits", "must be > 0")
    if not cfg.pairing_range > 0:
        raise ConfigError("pairing_range", "must be > 0")
    if cfg.app_type_count < 1:
        raise ConfigError("app_type_count", "must be >= 1")
    if cfg.max_rounds < 0:
        raise ConfigError("max_rounds", "must be >= 0")
    if not 0 <= cfg.rng_seed < (1 << 64):
        raise ConfigError("rng_seed", "must be a 64-bit unsigned integer")
    for name in ("e_elec_tx", "e_elec_rx", "e_amp", "e_agg"):
        value = getattr(cfg.radio, name)
        if not (value > 0 and math.isfinite(value)):
            raise ConfigError(f"radio.{name}", "must be strictly positive and finite")
    if not 0.0 <= cfg.sep_advanced_fraction <= 1.0:
        raise ConfigError("sep_advanced_fraction", "must lie in [0, 1]")
    if cfg.sep_energy_factor < 0:
        raise ConfigError("sep_energy_factor", "must be >= 0")
