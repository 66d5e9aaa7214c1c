"""nashkit: numerical toolkit for analytic-algebraic (Nash) functions.

Curve decomposition and excluded points, Riemann-branch continuation and
monodromy, growth (Bernstein) constants, argument-principle zero counts,
Taylor-coefficient bounds, and reproducible sampling campaigns.
"""

from .analysis import (BernsteinReport, ClosedDisk, FinitePoints, OpenDisk,
                       Segment, TaylorReport, bernstein_constant,
                       cauchy_bound_check, check_bernstein_1912, max_modulus,
                       max_on_compact, taylor_coeffs, tijdeman_check,
                       valency_check, zero_count)
from .branch import (BranchEvaluator, BranchPath, ContinuationOptions,
                     Monodromy, branch_values, continue_branch, monodromy,
                     origin_branch)
from .campaign import (CampaignConfig, CampaignResult, SequenceExperiment,
                       Tolerances, run_campaign, sample_class_a,
                       sequence_experiment)
from .curve import (Category, ExcludedPoint, ExcludedSet, SafeRegion,
                    excluded_bound, excluded_points, is_class_b, safe_region)
from .poly import (BivarPoly, RootSet, UnivarPoly, content_z, evaluate,
                   poly_from_json, poly_to_json, resultant_w, roots,
                   specialize_z, sphere_normalize, squarefree_w)

__version__ = "0.1.0"
