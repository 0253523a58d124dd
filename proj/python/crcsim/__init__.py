"""Consistent-recalibration short-rate models.

Thin python surface over the C++ core: curve conversions, Riccati closed
forms, Hull-White extension calibration, path-ensemble simulation, and the
realized-covariation estimators.
"""

from ._core import (
    AdmissibilityError,
    CovariationRank,
    EstimatePoint,
    ForwardCurve,
    HullWhiteExtension,
    McValue,
    MomentReport,
    PathEnsemble,
    PathRecord,
    RiccatiPair,
    RngStream,
    TimeGrid,
    YieldCurve,
    YieldPanel,
    bond_price_affine,
    bond_price_from_forwards,
    calibrate_cir_head,
    calibrate_vasicek,
    covariation_matrix_rank,
    estimate_cir,
    estimate_vasicek,
    fit_gbm,
    forward_yield,
    forwards_to_yields,
    h_operator,
    hjm_coeffs,
    load_yield_panel,
    mc_mgf,
    mc_moments,
    mgf_ramp_exact,
    realized_covariation,
    riccati,
    shift,
    short_rate_law,
    simulate,
    volterra_apply,
    volterra_solve,
    write_yield_panel,
    xi_deterministic,
    yields_to_forwards,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
