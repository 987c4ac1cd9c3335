"""
Subblock ACF shapes for the three partitions
============================================

Each OFDM signal subsequence has a binary power spectrum: ones on the
subcarriers its subblock owns, zeros elsewhere. The magnitude of its
autocorrelation is the (unitary) IDFT magnitude of that spectrum. Its shape
tells us which cyclic shifts leave the subsequence nearly unchanged.

This script reproduces the N = 32, V = 2 example: an interleaved, an
adjacent and an m-sequence based random partition.
"""
import numpy as np

from csspapr.acf import acf_closed, acf_numeric, max_sidelobe, power_spectrum
from csspapr.partition import adjacent_pattern, interleaved_pattern, msequence_pattern

N, V = 32, 2

patterns = {
    "interleaved": interleaved_pattern(N, V),
    "adjacent": adjacent_pattern(N, V),
    "random (m-sequence)": msequence_pattern(N),
}

###############################################################################
# The power spectra of subblock 1. Subblock 2 is always the complement.

for name, p in patterns.items():
    print(f"{name:>20s}: S_1 =", "".join(str(int(b)) for b in power_spectrum(p, 1)))

###############################################################################
# Numeric ACF magnitudes. The interleaved one is an impulse train with
# period N/V, the adjacent one a Dirichlet kernel that is smallest near
# lag N/2, and the random one looks like a delta with small sidelobes.

acfs = {name: acf_numeric(power_spectrum(p, 1)) for name, p in patterns.items()}
print("\n  m " + "".join(f"{name[:12]:>14s}" for name in acfs))
for m in range(N):
    print(f"{m:3d} " + "".join(f"{a[m]:14.4f}" for a in acfs.values()))

###############################################################################
# The closed forms agree with the numeric ACFs to machine precision.

for kind in ("interleaved", "adjacent"):
    dev = np.max(np.abs(acfs[kind] - acf_closed(kind, N, V)))
    print(f"{kind}: max deviation from closed form = {dev:.1e}")

print("max sidelobe, random   :", round(max_sidelobe(acfs["random (m-sequence)"]), 4))
print("max sidelobe, adjacent :", round(max_sidelobe(acfs["adjacent"]), 4))

###############################################################################
# Optional stem plot (needs matplotlib).

try:
    import matplotlib.pyplot as plt
except ImportError:  # pragma: no cover
    plt = None

if plt is not None:
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(6, 6))
    for ax, (name, a) in zip(axes, acfs.items()):
        ax.stem(np.arange(N), a)
        ax.set_ylabel("|R(m)|")
        ax.set_title(name)
    axes[-1].set_xlabel("lag m")
    fig.tight_layout()
    fig.savefig("acf_shapes.png", dpi=120)
    print("wrote acf_shapes.png")
