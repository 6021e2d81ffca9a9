"""The string class of the path fibration over SU(2).

On a Hopf patch away from the cut locus the string form of the standard
connection equals the transgression form pointwise; both integrate to a
unit over the whole group.
"""
import numpy as np

from caloron import lie
from caloron.charts import hopf_chart
from caloron.forms import integrate_top
from caloron.holonomy import classifying_map, group_distance
from caloron.string_forms import (CutoffFunction, covering_pairing, path_fibration_pair, string_form,
                                  transgression_form)

P1 = lie.p1poly()


def main():
    alpha = CutoffFunction()
    print("pointwise string form vs transgression form on eta in [pi/3, pi/2]")
    for ne, nx in ((8, 16), (12, 24), (16, 32)):
        chart = hopf_chart(ne, nx, nx, eta_range=(np.pi / 3, np.pi / 2))
        pair = path_fibration_pair(alpha, chart, 32)
        s, tau = string_form(P1, pair), transgression_form(P1, chart)
        err = np.max(np.abs(s.components - tau.components)) / np.max(np.abs(tau.components))
        incl = group_distance(classifying_map(pair), chart.g)
        print(f"  grid {ne}x{nx}x{nx}: relative error {err:.2e}, holonomy vs inclusion {incl:.1e}")

    tau = transgression_form(P1, hopf_chart(48, 64, 64))
    print(f"\nintegral of the transgression form over SU(2): {integrate_top(tau):+.12f}")
    print(f"string form integrated over two patches:      {covering_pairing(P1):+.7f}")


if __name__ == "__main__":
    main()
