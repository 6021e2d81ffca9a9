"""Higgs-field holonomy: fourth-order convergence and pure-gauge recovery."""
import numpy as np

from caloron import forms, lie, loops
from caloron.gauge import random_trig_gauge
from caloron.holonomy import group_distance, higgs_holonomy

X = np.diag([0.5j, -0.5j])


def main():
    t = loops.theta_grid(64)
    phi = (1 - np.cos(t))[:, None, None] * X
    exact = lie.exp(2 * np.pi * X)
    prev = None
    print("abelian endpoint error against exp(2 pi X)")
    for s in (1, 2, 4, 8):
        err = group_distance(higgs_holonomy(phi, s).endpoint, exact)
        rate = "" if prev is None else f"  ratio {prev / err:.1f}"
        print(f"  substeps {s}: {err:.3e}{rate}")
        prev = err

    gamma = loops.LoopGroupField(random_trig_gauge(forms.torus(1, 4), 256, seed=0).samples[0], based=True)
    path = higgs_holonomy(loops.log_derivative(gamma))
    print(f"\npure gauge: endpoint distance to e {group_distance(path.endpoint, np.eye(2)):.2e}, "
          f"path vs gauge {group_distance(path.samples[:-1], gamma.samples):.2e}")


if __name__ == "__main__":
    main()
