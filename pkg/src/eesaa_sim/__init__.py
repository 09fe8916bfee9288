"""Deterministic round-based simulator for cluster-routing wireless sensor
networks: a sleep/awake-aware pairing protocol with residual-energy head
handover, plus LEACH/SEP/DEEC baselines for comparison."""

__version__ = "0.1.0"

from .baselines import (BaselineKind, DeecProtocol, LeachProtocol, SepProtocol,
                        deec_probability, leach_threshold)
from .eesaa import (ClusterAssignment, EesaaProtocol, associate_members,
                    elect_pchs, election_threshold, node_mode_setup, run_ntp,
                    run_eesaa_round, select_cch)
from .engine import (PROTOCOLS, BatchResult, JobResult, compute_summary,
                     deploy_nodes, make_protocol, run_batch, run_simulation)
from .model import (ConfigError, Mode, NetworkConfig, NodeState, Position,
                    RadioParams, agg_energy, ch_round_energy, distance, drain,
                    expected_cluster_members, rx_energy, tx_energy,
                    validate_config)
from .pairing import PairingTable, compute_pairs, initial_modes
from .records import RoundRecord, SimSummary
from .rng import RNG_ALGORITHM, Xoshiro256StarStar

__all__ = [
    "BaselineKind", "BatchResult", "ClusterAssignment", "ConfigError",
    "DeecProtocol", "EesaaProtocol", "JobResult", "LeachProtocol", "Mode",
    "NetworkConfig", "NodeState", "PROTOCOLS", "PairingTable", "Position",
    "RNG_ALGORITHM", "RadioParams", "RoundRecord", "SepProtocol", "SimSummary",
    "Xoshiro256StarStar", "agg_energy", "associate_members", "ch_round_energy",
    "compute_pairs", "compute_summary", "deec_probability", "deploy_nodes",
    "distance", "drain", "elect_pchs", "election_threshold",
    "expected_cluster_members", "initial_modes", "leach_threshold",
    "make_protocol", "node_mode_setup", "run_batch", "run_eesaa_round",
    "run_ntp", "run_simulation", "rx_energy", "select_cch", "tx_energy",
    "validate_config",
]
