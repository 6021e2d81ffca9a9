"""Caloron transform, Higgs-field holonomy and string forms on grids.

The package works with SU(n) gauge data sampled on structured grids:
connection and Higgs-field pairs of a trivialized loop-group bundle,
their caloron transform on ``M x S^1``, the holonomy of the Higgs field,
and the string forms obtained from invariant polynomials.
"""
from .errors import (ArityError, BandwidthError, BranchError, CaloronError, DimensionError,
                     InvariantError, ResolutionError)
from .lie import (InvariantPolynomial, ad_invariance_defect, adjoint_action, bracket, eval_poly,
                  exp, inner, log, p1poly)
from .loops import (LoopAlgebraField, LoopGroupField, PathGroupField, log_derivative,
                    theta_derivative)
from .forms import (FormField, GridManifold, GridMap, dump_form, exterior_derivative,
                    fiber_integrate_S1, hopf, integrate_top, load_form, poly_on_forms,
                    product_with_circle, pullback, torus, wedge_bracket)
from .charts import GroupChart, hopf_chart, maurer_cartan
from .gauge import (GaugePair, curvature, gauge_transform, higgs_covariant_derivative,
                    pullback_pair, random_based_gauge, random_gauge_pair, random_trig_gauge)
from .transform import caloron_curvature, caloron_curvature_defect, caloron_transform, inverse_caloron
from .holonomy import caloron_holonomy_defect, classifying_map, higgs_holonomy
from .string_forms import (CutoffFunction, TransgressionCoefficient, class_pairing,
                           covering_pairing, difference_correction, path_fibration_pair,
                           string_form, sury_identity, transgression_form)

__version__ = "0.1.0"
