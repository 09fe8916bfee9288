"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with the measured numbers.

Full simulation sweeps are shared through module-scoped fixtures; every
run is seeded, so all verdicts are reproducible bit for bit.  Criteria
that miss their stated bound fail honestly, with the measured value in
the verdict line; see the README for the quantitative background on the
known misses.
"""

import json
import math
import statistics
from dataclasses import replace
from pathlib import Path

import pytest

from eesaa_sim.cli import main as cli_main
from eesaa_sim.eesaa import node_mode_setup
from eesaa_sim.engine import run_simulation
from eesaa_sim.model import (Mode, NetworkConfig, Position, RadioParams,
                             agg_energy, ch_round_energy, distance,
                             expected_cluster_members, rx_energy, tx_energy)
from eesaa_sim.pairing import PairingTable, compute_pairs
from eesaa_sim.rng import Xoshiro256StarStar
from conftest import make_node

DATA = Path(__file__).parent / "data"
TABLE_CFG = NetworkConfig()  # benchmark defaults: 100 nodes, 100 m x 100 m
RATIO_SEEDS = list(range(1, 11))
EESAA_SEEDS = list(range(1, 21))


def report(num, name, ok, detail):
    verdict = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:>2} [{name}] {verdict}: {detail}")
    assert ok, f"criterion {num} ({name}): {detail}"


def run_eesaa_instrumented(seed):
    """Full run on the benchmark config recording pair-exclusivity
    violations at every round boundary."""
    cfg = replace(TABLE_CFG, rng_seed=seed)
    pairs_holder = {}
    violations = []

    def hook(round_no, nodes, record):
        if round_no == 0:
            pairs_holder["pairs"] = compute_pairs(nodes, cfg.pairing_range).pairs
        for a, b in pairs_holder["pairs"]:
            na, nb = nodes[a], nodes[b]
            if na.mode is Mode.DEAD or nb.mode is Mode.DEAD:
                continue
            active = (na.mode is Mode.ACTIVE) + (nb.mode is Mode.ACTIVE)
            if active != 1:
                violations.append((seed, round_no, a, b))

    summary = run_simulation(cfg, "eesaa", on_round=hook)
    return summary, violations


@pytest.fixture(scope="module")
def eesaa_runs():
    out = {}
    for seed in EESAA_SEEDS:
        out[seed] = run_eesaa_instrumented(seed)
    return out


@pytest.fixture(scope="module")
def baseline_runs():
    out = {"leach": {}, "sep": {}}
    for name in out:
        for seed in RATIO_SEEDS:
            out[name][seed] = run_simulation(replace(TABLE_CFG, rng_seed=seed), name)
    return out


def test_c01_unit_oracle_suite():
    radio = RadioParams()
    cases = [
        (tx_energy(radio, 0, 100), 0.0),
        (tx_energy(radio, 4000, 0), 2.0e-4),
        (tx_energy(radio, 4000, 50), 1.2e-3),
        (rx_energy(radio, 0), 0.0),
        (rx_energy(radio, 4000), 2.0e-4),
        (rx_energy(radio, 8000), 4.0e-4),
        (agg_energy(radio, 4000, 0), 0.0),
        (agg_energy(radio, 4000, 10), 2.0e-6),
        (agg_energy(radio, 4000, 1), 2.0e-7),
        (expected_cluster_members(100, 10), 9.0),
        (expected_cluster_members(100, 100), 0.0),
        (expected_cluster_members(100, 5), 19.0),
        (ch_round_energy(radio, 0, 4000, 4000, 0), 2.002e-4),
        (ch_round_energy(radio, 9, 4000, 4000, 100), 6.002e-3),
    ]
    worst = 0.0
    for got, want in cases:
        if want == 0.0:
            ok = got == 0.0
            err = abs(got)
        else:
            err = abs(got - want) / abs(want)
            ok = err <= 1e-12
        worst = max(worst, err)
        assert ok, (got, want)
    report(1, "unit-oracles", True,
           f"{len(cases)} hand-derived values matched, worst rel err {worst:.2e}")


def test_c02_pair_exclusivity(eesaa_runs):
    violations = [v for _, vs in eesaa_runs.values() for v in vs]
    report(2, "pair-exclusivity", len(violations) == 0,
           f"{len(EESAA_SEEDS)} seeds, {len(violations)} violations "
           f"(first: {violations[:3] if violations else 'none'})")


def test_c03_conservation(eesaa_runs):
    budget = TABLE_CFG.n_nodes * TABLE_CFG.initial_energy
    worst = 0.0
    for seed, (summary, _) in eesaa_runs.items():
        dissipated = sum(r.energy_dissipated for r in summary.per_round)
        final_residual = summary.per_round[-1].total_residual
        rel = abs(budget - final_residual - dissipated) / budget
        worst = max(worst, rel)
    report(3, "conservation", worst <= 1e-9,
           f"worst relative imbalance over {len(EESAA_SEEDS)} runs: {worst:.2e}")


def test_c04_determinism(tmp_path, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert cli_main(["run", "--protocol", "eesaa", "--seed", "7",
                     "--out", str(out_a)]) == 0
    assert cli_main(["run", "--protocol", "eesaa", "--seed", "7",
                     "--out", str(out_b)]) == 0
    same_csv = (out_a / "eesaa_seed7.csv").read_bytes() == \
               (out_b / "eesaa_seed7.csv").read_bytes()
    same_prov = (out_a / "eesaa_seed7.provenance.json").read_bytes() == \
                (out_b / "eesaa_seed7.provenance.json").read_bytes()

    golden_out = tmp_path / "golden"
    assert cli_main(["run", "--config", str(DATA / "golden_config.json"),
                     "--protocol", "eesaa", "--seed", "7",
                     "--out", str(golden_out)]) == 0
    golden_ok = (golden_out / "eesaa_seed7.csv").read_bytes() == \
                (DATA / "golden_seed7.csv").read_bytes()
    report(4, "determinism", same_csv and same_prov and golden_ok,
           f"csv identical: {same_csv}, provenance identical: {same_prov}, "
           f"golden fixture match: {golden_ok}")


def test_c05_stability_period_ratio(eesaa_runs, baseline_runs):
    eesaa_fnd = statistics.fmean(eesaa_runs[s][0].first_death_round
                                 for s in RATIO_SEEDS)
    leach_fnd = statistics.fmean(baseline_runs["leach"][s].first_death_round
                                 for s in RATIO_SEEDS)
    ratio = eesaa_fnd / leach_fnd
    report(5, "stability-ratio", ratio >= 1.6,
           f"mean FND eesaa {eesaa_fnd:.1f} / leach {leach_fnd:.1f} = "
           f"{ratio:.3f} (need >= 1.6)")


def test_c06_absolute_fnd_band(eesaa_runs, tmp_path):
    lo, hi = 1200, 2400
    default_mean = statistics.fmean(s.first_death_round
                                    for s, _ in eesaa_runs.values())
    attempts = [("defaults (bs=(50,175), pairing_range=15)", default_mean)]
    in_band = lo <= default_mean <= hi

    if not in_band:
        # Demonstration clause: sweep the documented free parameters (base
        # station position, pairing range, aggregated packet length) and
        # record whether any setting reaches the band.
        knobs = {
            "bs_position=(50,100)": dict(bs_position=Position(50, 100)),
            "bs_position=(50,50)": dict(bs_position=Position(50, 50)),
            "pairing_range=35": dict(pairing_range=35.0),
            "aggregated_bits=500": dict(aggregated_bits=500),
            "bs_position=(50,50)+pairing_range=35":
                dict(bs_position=Position(50, 50), pairing_range=35.0),
            "pairing_range=35+aggregated_bits=500":
                dict(pairing_range=35.0, aggregated_bits=500),
        }
        for label, overrides in knobs.items():
            fnds = []
            for seed in range(1, 6):
                cfg = replace(TABLE_CFG, rng_seed=seed, **overrides)
                fnds.append(run_simulation(cfg, "eesaa").first_death_round)
            mean = statistics.fmean(fnds)
            attempts.append((label, mean))
            if lo <= mean <= hi:
                in_band = True

    record = {"band": [lo, hi],
              "attempts": [{"parameters": label, "mean_fnd": mean,
                            "in_band": lo <= mean <= hi}
                           for label, mean in attempts]}
    (tmp_path / "fnd_band_demonstrations.json").write_text(
        json.dumps(record, indent=2) + "\n")
    detail = "; ".join(f"{label}: {mean:.0f}" for label, mean in attempts)
    report(6, "absolute-fnd-band", in_band,
           f"band [{lo},{hi}]; {detail}")


def test_c07_lifetime_ratio(eesaa_runs, baseline_runs):
    eesaa_lnd = statistics.fmean(eesaa_runs[s][0].last_death_round
                                 for s in RATIO_SEEDS)
    leach_lnd = statistics.fmean(baseline_runs["leach"][s].last_death_round
                                 for s in RATIO_SEEDS)
    ratio = eesaa_lnd / leach_lnd
    report(7, "lifetime-ratio", ratio >= 1.5,
           f"mean LND eesaa {eesaa_lnd:.1f} / leach {leach_lnd:.1f} = "
           f"{ratio:.3f} (need >= 1.5)")


def test_c08_ch_count_regularity(eesaa_runs, baseline_runs):
    def stability_variance(summary):
        fnd = summary.first_death_round
        counts = [r.ch_count for r in summary.per_round if r.round < fnd]
        return statistics.variance(counts) if len(counts) > 1 else 0.0

    wins = 0
    for seed in RATIO_SEEDS:
        var_e = stability_variance(eesaa_runs[seed][0])
        var_l = stability_variance(baseline_runs["leach"][seed])
        if var_e < var_l:
            wins += 1
    report(8, "ch-count-regularity", wins >= 8,
           f"eesaa variance strictly lower in {wins}/10 seeds (need >= 8)")


def test_c09_throughput(eesaa_runs, baseline_runs):
    eesaa_pk = statistics.fmean(eesaa_runs[s][0].cumulative_packets_to_bs
                                for s in RATIO_SEEDS)
    leach_pk = statistics.fmean(baseline_runs["leach"][s].cumulative_packets_to_bs
                                for s in RATIO_SEEDS)
    sep_pk = statistics.fmean(baseline_runs["sep"][s].cumulative_packets_to_bs
                              for s in RATIO_SEEDS)
    ok = eesaa_pk > leach_pk and eesaa_pk > sep_pk
    report(9, "throughput", ok,
           f"mean cumulative packets: eesaa {eesaa_pk:.0f}, leach {leach_pk:.0f}, "
           f"sep {sep_pk:.0f} (need eesaa greatest)")


def test_c10_pairing_brute_force():
    import random as stdrandom
    from test_pairing import (brute_force_matching, check_table_invariants,
                              table_total_distance)
    rnd = stdrandom.Random(2024)
    worst_ratio = 0.0
    for _ in range(100):
        n = rnd.randrange(2, 11)
        nodes = [make_node(i, rnd.uniform(0, 100), rnd.uniform(0, 100))
                 for i in range(n)]
        table = compute_pairs(nodes, 30.0)
        check_table_invariants(table, nodes, 30.0)
        _, optimal = brute_force_matching(nodes, 30.0)
        total = table_total_distance(table, nodes)
        assert total <= 2.0 * optimal + 1e-12
        if optimal > 0:
            worst_ratio = max(worst_ratio, total / optimal)
    report(10, "pairing-vs-bruteforce", True,
           f"100 instances, invariants hold, worst greedy/optimal ratio "
           f"{worst_ratio:.3f} (bound 2.0)")


def test_c11_mode_setup_truth_table():
    # (coupled?, own mode, own flag, partner flag, partner dead) -> mode.
    cases = [
        (True, Mode.ACTIVE, True, False, False, Mode.ACTIVE),
        (True, Mode.ACTIVE, False, False, False, Mode.SLEEP),
        (True, Mode.SLEEP, False, True, False, Mode.SLEEP),
        (True, Mode.SLEEP, False, False, False, Mode.ACTIVE),
        (True, Mode.ACTIVE, False, False, True, Mode.ACTIVE),
        (False, Mode.ACTIVE, False, False, False, Mode.ACTIVE),
    ]
    for coupled, mode, flag, partner_flag, partner_dead, want in cases:
        node = make_node(0, 0, 0, mode=mode, partner=1 if coupled else None)
        node.cch_flag = flag
        if coupled:
            partner = make_node(1, 1, 0,
                                mode=Mode.DEAD if partner_dead else
                                (Mode.SLEEP if mode is Mode.ACTIVE else Mode.ACTIVE),
                                partner=0)
            partner.cch_flag = partner_flag
            table = PairingTable(pairs=[(0, 1)], isolated=[])
            node_mode_setup([node, partner], table)
        else:
            table = PairingTable(pairs=[], isolated=[0])
            node_mode_setup([node], table)
        assert node.mode is want, (coupled, mode, flag, partner_flag, partner_dead)
    report(11, "mode-setup-truth-table", True,
           "all six branch combinations produce the required modes")
