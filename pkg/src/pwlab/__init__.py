"""pwlab: a numerical laboratory for weighted Paley-Wiener spaces.

Builds Hermite-Biehler multipliers from line weights, evaluates their
potentials, phases, and majorants, verifies the mountain-chain axioms,
runs the smoothing/Hilbert pipeline behind the majorant representation,
and checks the complete-interpolation conditions, rendering every
comparability claim as a machine-checkable certificate.
"""

from .fixtures import bad_model, single_zero_model, stair_model
from .hbmodel import (HBModel, check_hb_property, eval_E, log_abs_E,
                      majorant, majorant_halfplane, phase, phase_derivative,
                      reproducing_kernel)
from .interpolation import (A2Weight, LevelSet, PavlovReport, check_a2,
                            check_carleson, check_separation,
                            exceptional_alpha_diagnostic,
                            exponential_type_estimate, generating_product,
                            lift_to_classical, pavlov_diagnostics,
                            solve_level_set, upper_density)
from .mountain import (AxiomReport, MountainChain, StripParams, check_axioms,
                       delta_ladder, gamma_delta, mountain_integral_check,
                       nearest_zero, poisson_remainder, segment_chain,
                       shift_down, verify_shift_ratio, verify_shift_ratio_real)
from .multiplier import (CentroidSequence, Partition, build_centroids,
                         build_multiplier, build_partition,
                         halfplane_majorant_check, pw_membership_diagnostic,
                         verify_multiplier_lemma)
from .numerics import (ComparabilityCertificate, Grid, InvalidGridError,
                       InvalidInputError, PVDivergenceError, QuadratureConfig,
                       QuadratureError, certify_comparable, integrate_line,
                       integrate_pv)
from .potential import (Weight, eval_conjugate_omega, eval_omega,
                        eval_omega_closed, eval_poisson,
                        verify_laplacian, verify_poisson_derivative)
from .smoothing import (MajorantRepresentation, Mollifier,
                        RetryWithLargerLError, SigmaProfile, SmoothedProfile,
                        build_majorant_representation, build_polygon,
                        build_sigma, hilbert_of_derivative, mollify,
                        verify_smoothing_conditions)

__version__ = "0.1.0"
