"""Single-lobe kink states of the sine-Gordon equation on a tadpole graph.

Construction of glued (loop libration, kink tail) stationary states,
spectral certificates for the linearized vertex-coupled operator, and
nonlinear evolution runs that measure the instability growth rate.
"""

from .elliptic import EllipticModulus, complete_K, jacobi_sn_cn_dn, shift_identities
from .existence import (ExistenceCase, NoSolution, SolvedGluing, classify_case,
                        existence_function_H, lobe_bound_kl,
                        modulus_threshold_k0, neumann_gluing_F, shift_map_a,
                        solve_gluing)
from .profiles import (Branch, GraphParams, KinkTail, LibrationProfile,
                       StationaryState, degenerate_state, kink_derivative,
                       kink_value, libration_derivative, libration_value,
                       make_state, sample_state)
from .spectral import (Discretization, SpectrumReport, StabilityVerdict,
                       direct_spectrum, kernel_certificate,
                       laplacian_point_spectrum, lobe_condition_check,
                       quadratic_form_Q, splitting_spectrum, stability_verdict,
                       transcendental_rho)
from .dynamics import (EvolutionState, EvolutionTrace, GraphWave, evolve,
                       instability_experiment, state_from_stationary, step)

__version__ = "0.1.0"
