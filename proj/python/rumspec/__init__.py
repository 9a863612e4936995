"""RUM spectra, joint spectral points and flexes of gain frameworks."""

from ._core import (
    Framework,
    RumError,
    check_ap_rigidity,
    chi_flex_basis,
    covering,
    evaluate_character,
    folner_defect,
    joint_spectral_points,
    orbit_matrix,
    rum_membership,
    rum_spectrum,
    translation_space,
    verify_chi_flex,
)

__all__ = [
    "Framework",
    "RumError",
    "check_ap_rigidity",
    "chi_flex_basis",
    "covering",
    "evaluate_character",
    "folner_defect",
    "joint_spectral_points",
    "orbit_matrix",
    "rum_membership",
    "rum_spectrum",
    "translation_space",
    "verify_chi_flex",
]
