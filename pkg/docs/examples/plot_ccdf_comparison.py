"""
CCDF of PAPR: criterion-satisfying vs violating SV sets
=======================================================

For each partition (random, interleaved, adjacent) we run CSS with N = 128,
V = 4, U = 4 and 16-QAM, once with the "solid" SV collection (satisfies the
partition's criterion) and once with the "dotted" one (does not), and
compare the PAPR at which the CCDF drops to 1e-2.

Pass the number of trials as the first argument; 100000 takes about two
minutes for all six runs.
"""
import sys

from csspapr.harness import SimConfig, interpolate_papr_at, run_experiment, write_ccdf_csv

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000

tables = {}
for kind in ("random", "interleaved", "adjacent"):
    for style in ("solid", "dotted"):
        cfg = SimConfig(partition_kind=kind, sv_preset=style, trials=trials, ccdf_depth=1e-2)
        tables[kind, style] = run_experiment(cfg)
        write_ccdf_csv(tables[kind, style], f"ccdf_{kind}_{style}.csv")

###############################################################################
# PAPR (dB) at CCDF = 1e-2.

print(f"{'partition':>12s} {'original':>9s} {'solid':>7s} {'dotted':>7s} {'gap':>6s}")
for kind in ("random", "interleaved", "adjacent"):
    orig = interpolate_papr_at(tables[kind, "solid"], 1e-2, "original")
    s = interpolate_papr_at(tables[kind, "solid"], 1e-2)
    d = interpolate_papr_at(tables[kind, "dotted"], 1e-2)
    print(f"{kind:>12s} {orig:9.3f} {s:7.3f} {d:7.3f} {d - s:6.3f}")

###############################################################################
# Optional plot in the usual log-probability style.

try:
    import matplotlib.pyplot as plt
except ImportError:  # pragma: no cover
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4.5))
    t = tables["random", "solid"]
    ax.semilogy(t.thresholds_db, t.prob_original, "k-", label="original")
    for kind, color in zip(("random", "interleaved", "adjacent"), ("C0", "C1", "C2")):
        for style, ls in (("solid", "-"), ("dotted", ":")):
            tab = tables[kind, style]
            ax.semilogy(tab.thresholds_db, tab.prob_selected, ls, color=color, label=f"{kind} {style}")
    ax.set_ylim(1.0 / trials, 1)
    ax.set_xlabel("PAPR threshold (dB)")
    ax.set_ylabel("CCDF")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig("ccdf_comparison.png", dpi=120)
    print("wrote ccdf_comparison.png")
