"""Desk-scale numerical verification of the quantitative deformation and
transversality estimates: cutoff profiles, the radial-map linearization,
Morse-function deformations, and symmetric local perturbations."""

from .cutoff import CutoffProfile, ThresholdError, build_cutoff, min_admissible_k
from .radial import power_profile, radial_jacobian, radial_map_check
from .morse import (
    CirclePair,
    CriticalPoint,
    DeformedMorse,
    MorseModel,
    QuadraticBackground,
    check_gradient_transversality,
    circle_pair,
    deform_grid,
    deform_morse,
    verify_deform_bounds,
)
from .localtrans import (
    CPoly,
    LocalTransInstance,
    TransversalityCertificate,
    VerificationError,
    ball_grid,
    dw_dz_bound_check,
    dw_dz_jacobian,
    eta_transverse_check,
    find_good_w0,
    random_instance,
    reverify,
    sigma_of,
    solve_w,
    solve_w_residual,
)
