"""The symmetric unlabeled-margin loss and its convex/concave split.

Prints the loss on a margin grid and, when matplotlib is available, saves a
figure of the decomposition: the loss peaks at margin zero (decision boundary
crossing a dense region costs the most) and vanishes for confidently
classified unlabeled points, and it is exactly the difference of two convex
curves, which is what lets the DC solvers handle it.
"""

import numpy as np

from dcprox import transductive_margin_terms

TAU = 1.0

grid = np.linspace(-6.0, 6.0, 13)
terms = transductive_margin_terms(grid, TAU)
print(f"symmetric margin loss, tau={TAU}")
print(f"{'u':>6} {'loss':>10} {'convex':>10} {'concave':>10}")
for u, lo, cv, cc in zip(grid, terms.loss, terms.convex_part, terms.concave_part):
    print(f"{u:>6.1f} {lo:>10.6f} {cv:>10.6f} {cc:>10.6f}")

peak = transductive_margin_terms(0.0, TAU).loss
print(f"\npeak at u=0: {float(peak):.6f}; symmetric; bounded below 1.")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the figure")
else:
    u = np.linspace(-6.0, 6.0, 601)
    t = transductive_margin_terms(u, TAU)
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.2))
    axes[0].plot(u, t.loss)
    axes[0].set_title("unlabeled-margin loss")
    axes[0].set_xlabel("margin u")
    axes[1].plot(u, t.convex_part, label="convex part")
    axes[1].plot(u, t.concave_part, "--", label="concave part")
    axes[1].set_title("difference-of-convex split")
    axes[1].set_xlabel("margin u")
    axes[1].legend()
    fig.tight_layout()
    fig.savefig("transductive_loss.png", dpi=120)
    print("figure saved to transductive_loss.png")
