"""Principal-curvature-line dynamics on normally deformed Clifford tori.

The library evaluates the deformed embedding
a_eps = (a + eps h n)/|a + eps h n| of the Clifford torus in S^3,
computes its fundamental forms and principal line fields, integrates the
two principal foliations with exact lift bookkeeping, estimates return
maps and rotation numbers, and projects everything stereographically to
R^3 with conformality cross-checks.
"""

from .bumps import BumpFunction, BumpJet, SinSquaredBump, ZeroBump, bump_by_name
from .errors import (AmbiguousBranchError, ConfigError, DegenerateMetricError,
                     NoBracketError, NumericalError, PoleProximityError,
                     StepCollapseError, TangencyError, UmbilicError)
from .field import (Branch, FieldCoefficients, consistency_check, direction_angle,
                    lmn_closed_form, lmn_from_forms, lmn_normalization,
                    principal_directions, select_branch, umbilic_scan)
from .flow import (Orbit, RotationEstimate, SectionSpec, coverage_fraction,
                   epsilon_scan, first_branch_solution, integrate_orbit,
                   poincare_diag, poincare_u0, poincare_v0, rotation_number,
                   section_crossing, slope_function)
from .forms import (FormCoefficients, Surface3Jet, closed_form_coefficients,
                    first_form, first_form_r3, second_form_r3, second_form_s3,
                    second_form_scale_ratio)
from .geometry import (EPS_MAX, SQRT2_2, TWO_PI, SurfaceJet, TorusPoint,
                       canonical_angles, check_epsilon, clifford, clifford_normal,
                       deformed, jet_selfcheck)
from .jets import Jet2, const, var_u, var_v
from .meshes import revolution_profile, revolution_residual, torus_mesh, write_obj
from .perturb import (closed_form_scale, displacement_fit, fd_v_derivatives,
                      v_eps_closed, v_epseps_closed, variational_residual)
from .projection import (DEFAULT_POLE, pole_clearance, pole_rotation,
                         principal_match, project_orbit, stereo, stereo_jet,
                         tangent_distortion)
from .report import CheckResult, VerificationReport, run_verification

__version__ = "0.1.0"
