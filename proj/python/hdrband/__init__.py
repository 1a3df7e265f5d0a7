"""Kernel estimation of highest density regions with an HDR-tailored plug-in bandwidth."""

from ._core import (
    NormalMixture,
    RiskCoefficients,
    asymptotic_risk_ar,
    asymptotic_risk_in_h,
    compare_selectors,
    estimate_region,
    gaussian_derivative,
    hdr_bandwidth,
    hdr_oracle,
    kde_evaluate,
    kernel_constants,
    lscv_bandwidth,
    minimize_ar,
    mixture_preset_names,
    monte_carlo_risk,
    oracle_coefficients,
    psi_kernel_estimate,
    psi_normal_scale,
    risk_coefficients,
    robust_scale,
    symmetric_difference_mass,
)

__all__ = [
    "NormalMixture",
    "RiskCoefficients",
    "asymptotic_risk_ar",
    "asymptotic_risk_in_h",
    "compare_selectors",
    "estimate_region",
    "gaussian_derivative",
    "hdr_bandwidth",
    "hdr_oracle",
    "kde_evaluate",
    "kernel_constants",
    "lscv_bandwidth",
    "minimize_ar",
    "mixture_preset_names",
    "monte_carlo_risk",
    "oracle_coefficients",
    "psi_kernel_estimate",
    "psi_normal_scale",
    "risk_coefficients",
    "robust_scale",
    "symmetric_difference_mass",
]
