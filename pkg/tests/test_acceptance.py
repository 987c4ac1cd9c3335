"""
Exit criteria for the package, one test per criterion (criterion 6 is split
by partition kind). Each test records a PASS/FAIL line that is repeated in
the pytest terminal summary.

Criteria 5 and 6 run 10^5-trial Monte Carlo experiments and take a couple
of minutes in total.
"""
import itertools
import math
import time

import numpy as np
import pytest

from csspapr.acf import acf_adjacent_closed, acf_interleaved_closed, acf_numeric, max_sidelobe, power_spectrum
from csspapr.cli import main as cli_main
from csspapr.css import SvCollection, make_candidate, pts_candidate, select_min_papr, subblock_signals
from csspapr.harness import SimConfig, analytic_threshold_db, interpolate_papr_at, run_experiment
from csspapr.modem import random_symbol_sequence
from csspapr.partition import adjacent_pattern, interleaved_pattern, make_pattern, msequence_pattern
from csspapr.spectral import cyclic_shift_left, dft, idft, papr_db
from csspapr.svsets import check_criterion1, check_criterion2, criterion3_score, paper_collection

ACF_TOL = 1e-9
INVARIANT_TOL = 1e-9
TRIALS = 100_000
CCDF_BASELINE_LEVEL = 1e-3
BASELINE_TOL_DB = 0.3
COMPARE_LEVEL = 1e-2
MIN_MARGIN_DB = 0.1


def test_c1_acf_closed_forms(record_acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    for n, v in [(32, 2), (128, 4), (256, 8)]:
        for kind, closed in (("interleaved", acf_interleaved_closed), ("adjacent", acf_adjacent_closed)):
            p = make_pattern(kind, n, v)
            for sub in range(1, v + 1):
                numeric = acf_numeric(power_spectrum(p, sub))
                dev = max(abs(numeric[m] - closed(n, v, m)) for m in range(n))
                worst = max(worst, dev)
    elapsed = time.perf_counter() - t0
    ok = worst <= ACF_TOL and elapsed < 1.0
    record_acceptance(1, ok, f"max |numeric - closed| = {worst:.2e} (tol {ACF_TOL:g}), {elapsed:.3f}s")
    assert ok


def test_c2_acf_shapes(record_acceptance):
    t0 = time.perf_counter()
    n, v = 32, 2
    inter = acf_numeric(power_spectrum(interleaved_pattern(n, v), 1))
    impulse = np.zeros(n)
    impulse[[0, 16]] = math.sqrt(32) / 2
    dev_inter = float(np.max(np.abs(inter - impulse)))

    adj = acf_numeric(power_spectrum(adjacent_pattern(n, v), 1))
    eq6 = np.array([math.sqrt(n) / v] + [abs(math.sin(m * math.pi / v) / (math.sqrt(n) * math.sin(m * math.pi / n)))
                                         for m in range(1, n)])
    dev_adj = float(np.max(np.abs(adj - eq6)))
    zero_at_16 = adj[16]

    rnd = acf_numeric(power_spectrum(msequence_pattern(n), 1))
    side_rnd, side_adj = max_sidelobe(rnd), max_sidelobe(adj)
    elapsed = time.perf_counter() - t0
    ok = (dev_inter <= ACF_TOL and dev_adj <= ACF_TOL and zero_at_16 <= ACF_TOL
          and side_rnd < side_adj and elapsed < 1.0)
    record_acceptance(
        2, ok,
        f"interleaved dev {dev_inter:.1e}, adjacent dev {dev_adj:.1e} (|R(16)|={zero_at_16:.1e}), "
        f"sidelobes random {side_rnd:.4f} < adjacent {side_adj:.4f}, {elapsed:.3f}s",
    )
    assert ok


def _score_oracle(c):
    gaps = []
    for a, b in itertools.combinations(c.tolist(), 2):
        r = [(x - y) % c.n for x, y in zip(a, b)]
        for i, j in itertools.combinations(range(len(r)), 2):
            d = (r[i] - r[j]) % c.n
            gaps.append(min(d, c.n - d))
    return min(gaps), sum(gaps) / len(gaps)


def test_c3_verdict_matrix(record_acceptance):
    t0 = time.perf_counter()
    col = {(k, s): paper_collection(k, s) for k in ("random", "interleaved", "adjacent") for s in ("solid", "dotted")}
    s_solid = criterion3_score(col["adjacent", "solid"])
    s_dotted = criterion3_score(col["adjacent", "dotted"])
    checks = {
        "random solid passes C1": check_criterion1(col["random", "solid"]).satisfied,
        "random dotted fails C1": not check_criterion1(col["random", "dotted"]).satisfied,
        "interleaved solid passes C2": check_criterion2(col["interleaved", "solid"]).satisfied,
        "interleaved dotted fails C2": not check_criterion2(col["interleaved", "dotted"]).satisfied,
        "interleaved dotted passes C1": check_criterion1(col["interleaved", "dotted"]).satisfied,
        "adjacent dotted passes C1": check_criterion1(col["adjacent", "dotted"]).satisfied,
        "adjacent dotted passes C2": check_criterion2(col["adjacent", "dotted"]).satisfied,
        "adjacent solid scores higher": s_solid > s_dotted,
        "adjacent dotted min gap 1": s_dotted.min_circular_gap == 1,
        "scores match oracle": (
            _score_oracle(col["adjacent", "solid"]) == s_solid.key()
            and _score_oracle(col["adjacent", "dotted"]) == s_dotted.key()
        ),
    }
    elapsed = time.perf_counter() - t0
    failed = [k for k, v in checks.items() if not v]
    ok = not failed and elapsed < 1.0
    record_acceptance(
        3, ok,
        f"{len(checks) - len(failed)}/{len(checks)} verdicts as stated; C3 score solid "
        f"{s_solid.key()} vs dotted {s_dotted.key()}, {elapsed:.3f}s" + (f"; failed: {failed}" if failed else ""),
    )
    assert ok


def test_c4_brute_force_checker(record_acceptance):
    t0 = time.perf_counter()
    n, v = 8, 2
    sets = list(itertools.product(range(n), repeat=v))
    mismatches = pairs = 0
    for a in sets:
        for b in sets:
            c = SvCollection(np.array([a, b]), n, v)
            d1 = [(x - y) % n for x, y in zip(a, b)]
            d2 = [(x - y) % (n // v) for x, y in zip(a, b)]
            mismatches += check_criterion1(c).satisfied != (len(set(d1)) == v)
            mismatches += check_criterion2(c).satisfied != (len(set(d2)) == v)
            pairs += 1
    elapsed = time.perf_counter() - t0
    ok = pairs == 4096 and mismatches == 0 and elapsed < 10.0
    record_acceptance(4, ok, f"{pairs} pairs, {mismatches} mismatches, {elapsed:.2f}s")
    assert ok


def test_c5_ccdf_baseline(record_acceptance):
    cfg = SimConfig(n=128, v_count=4, u_count=1, partition_kind="random", scheme="none", trials=TRIALS)
    t0 = time.perf_counter()
    table = run_experiment(cfg)
    elapsed = time.perf_counter() - t0
    measured = interpolate_papr_at(table, CCDF_BASELINE_LEVEL, "original")
    analytic = analytic_threshold_db(CCDF_BASELINE_LEVEL, 128)
    ok = abs(measured - analytic) <= BASELINE_TOL_DB
    record_acceptance(
        5, ok,
        f"original CCDF hits 1e-3 at {measured:.3f} dB vs analytic {analytic:.3f} dB "
        f"(|diff| {abs(measured - analytic):.3f} <= {BASELINE_TOL_DB}), {elapsed:.1f}s",
    )
    assert ok


_TABLES = {}


def _table(kind, style):
    if (kind, style) not in _TABLES:
        cfg = SimConfig(n=128, v_count=4, u_count=4, partition_kind=kind, sv_preset=style, trials=TRIALS)
        _TABLES[kind, style] = run_experiment(cfg)
    return _TABLES[kind, style]


@pytest.mark.parametrize("kind", ["random", "interleaved", "adjacent"])
def test_c6_solid_beats_dotted(kind, record_acceptance):
    t0 = time.perf_counter()
    solid, dotted = _table(kind, "solid"), _table(kind, "dotted")
    elapsed = time.perf_counter() - t0
    p_solid = interpolate_papr_at(solid, COMPARE_LEVEL)
    p_dotted = interpolate_papr_at(dotted, COMPARE_LEVEL)
    margin = p_dotted - p_solid
    dominance = all(np.all(t.prob_selected <= t.prob_original) for t in (solid, dotted))
    ok = margin >= MIN_MARGIN_DB and dominance
    record_acceptance(
        f"6/{kind}", ok,
        f"PAPR at CCDF 1e-2: solid {p_solid:.3f} dB, dotted {p_dotted:.3f} dB, "
        f"margin {margin:.3f} dB (need >= {MIN_MARGIN_DB}); dominance {'ok' if dominance else 'VIOLATED'}, "
        f"{elapsed:.1f}s",
    )
    assert dominance
    assert margin >= MIN_MARGIN_DB


def test_c7_invariant_suite(record_acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    counts = dict.fromkeys(
        ["parseval", "round_trip", "shift_phase", "energy", "identity", "global_shift", "translation"], 0)
    worst = 0.0
    for trial in range(120):
        n = int(2 ** rng.integers(2, 11))
        X = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x = idft(X)
        worst = max(worst, abs(np.vdot(x, x).real - np.vdot(X, X).real))
        counts["parseval"] += 1
        worst = max(worst, float(np.max(np.abs(dft(x) - X))))
        counts["round_trip"] += 1
        tau = int(rng.integers(0, 4 * n))
        k = np.arange(n)
        worst = max(worst, float(np.max(np.abs(dft(cyclic_shift_left(x, tau)) - np.exp(2j * np.pi * k * tau / n) * X))))
        counts["shift_phase"] += 1

        n = int(2 ** rng.integers(3, 9))
        v = int(2 ** rng.integers(1, min(4, int(math.log2(n))) + 1))
        p = make_pattern(["random", "adjacent", "interleaved"][trial % 3], n, v, trial)
        S = random_symbol_sequence(trial, n)
        xs = subblock_signals(S, p)
        e0 = float(np.sum(np.abs(S) ** 2))
        t = rng.integers(0, n, v)
        rot = rng.choice([1, -1, 1j, -1j], v)
        worst = max(worst, abs(np.sum(np.abs(make_candidate(xs, t)) ** 2) - e0),
                    abs(np.sum(np.abs(pts_candidate(xs, rot)) ** 2) - e0))
        counts["energy"] += 1
        sets = np.vstack([np.zeros(v, dtype=int), rng.integers(0, n, (3, v))])
        col = SvCollection(sets, n, v)
        r = select_min_papr(S, p, col)
        assert r.papr <= r.original_papr
        counts["identity"] += 1
        c = int(rng.integers(0, 10 * n))
        assert papr_db(make_candidate(xs, t + c), 1.0) == papr_db(make_candidate(xs, t), 1.0)
        counts["global_shift"] += 1
        moved = col.translated(c)
        assert check_criterion1(moved).satisfied == check_criterion1(col).satisfied
        assert check_criterion2(moved).satisfied == check_criterion2(col).satisfied
        if check_criterion1(col).satisfied:
            assert criterion3_score(moved) == criterion3_score(col)
        counts["translation"] += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= INVARIANT_TOL and min(counts.values()) >= 100 and elapsed < 30
    record_acceptance(7, ok, f"{min(counts.values())} instances per invariant, worst numeric deviation "
                             f"{worst:.2e} (tol {INVARIANT_TOL:g}), {elapsed:.2f}s")
    assert ok


def test_c8_determinism(tmp_path, record_acceptance):
    cfg = tmp_path / "det.cfg"
    cfg.write_text("n=128\nv=4\nu=4\npartition=adjacent\nsv_preset=solid\ntrials=5000\nchunk_size=500\n")
    outputs = []
    for run, workers in enumerate([1, 1, 2, 4]):
        out = tmp_path / f"run{run}.csv"
        assert cli_main(["simulate", "--config", str(cfg), "--out", str(out), "--workers", str(workers)]) == 0
        outputs.append(out.read_bytes())
    ok = all(o == outputs[0] for o in outputs)
    record_acceptance(8, ok, "simulate CSV byte-identical across 4 runs (workers 1, 1, 2, 4)")
    assert ok
