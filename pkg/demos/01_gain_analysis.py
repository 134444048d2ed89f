"""How much does majority voting buy you?

Walks the closed-form side of the library: the majority error p_m, the
fractional gain (1 - p_m)/(1 - p), the best operating point per swarm
size, and how good the normal approximation of the majority probability
is.  Saves a gain-curve plot next to this script when matplotlib is
available.
"""

import numpy as np

from swarmnav import (
    fractional_gain,
    gain_polynomial,
    majority_error,
    normal_approx_majority_success,
    optimal_gain,
)

# --- 1. Error amplification in one number -------------------------------
# A single vehicle misreads a landmark 20% of the time.  Three vehicles
# voting get that down to 10.4%, and the improvement compounds per segment.
p = 0.2
print("per-decision error with p = 0.2:")
for m in (1, 3, 5, 7, 9, 21):
    print(f"  m={m:>2}: majority error = {majority_error(p, m):.6f}")

# --- 2. The gain curve and its sweet spot -------------------------------
# The fractional gain tells you the multiplicative improvement in
# per-decision correctness.  It is maximized at a specific error level:
# unreliable-but-not-hopeless sensors benefit the most from voting.
print("\nbest operating point per swarm size:")
print(f"  {'m':>2} {'p*':>9} {'max gain':>9}")
for m in range(2, 12):
    point = optimal_gain(m)
    print(f"  {m:>2} {point.p_star:>9.5f} {point.gain:>9.5f}")

# For small swarms the gain is a tidy polynomial in p:
for m in (2, 3, 5):
    coeffs = gain_polynomial(m)
    terms = " + ".join(f"{c}p^{j}" if j else f"{c}" for j, c in enumerate(coeffs))
    print(f"  gain_{m}(p) = {terms}")

# --- 3. How trustworthy is the CLT shortcut? ----------------------------
# For large swarms the binomial sum can be replaced by a normal CDF.  The
# approximation error shrinks roughly like 1/sqrt(m):
print("\nnormal-approximation error, worst case over p in {0.1..0.4}:")
for m in (11, 51, 201, 1001):
    dev = max(
        abs(normal_approx_majority_success(q, m) - (1.0 - majority_error(q, m)))
        for q in (0.1, 0.2, 0.3, 0.4)
    )
    print(f"  m={m:>4}: max |deviation| = {dev:.6f}")

# --- 4. Plot the curves (optional) ---------------------------------------
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not installed; skipping the plot")
else:
    ps = np.linspace(0.0, 0.99, 397)
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.2), sharey=True)
    for ax, ms, title in (
        (axes[0], (2, 4, 6, 8), "even swarm sizes"),
        (axes[1], (3, 5, 7, 9), "odd swarm sizes"),
    ):
        for m in ms:
            ax.plot(ps, [fractional_gain(float(x), m) for x in ps], label=f"m={m}")
        ax.axhline(1.0, color="gray", lw=0.8, ls="--")
        ax.set_xlabel("per-vehicle error probability p")
        ax.set_title(title)
        ax.legend()
    axes[0].set_ylabel("fractional gain (1-p_m)/(1-p)")
    fig.tight_layout()
    out = "demos/gain_curves.png"
    fig.savefig(out, dpi=150)
    print(f"\nwrote {out}")
