"""Moments, cumulants and Monte-Carlo estimates for block extractions of
unitary Brownian motions over the reals, complexes and quaternions."""

from ._mfe import (
    MomentFunction,
    biane_moment,
    casimir_check,
    compose,
    cumulant_of_generators,
    enumerate_nc,
    kappa_closed_form,
    limit_cumulant_coefficient,
    mobius_nc,
    moment_finite,
    moment_limit,
    simulate,
)

__all__ = [
    "MomentFunction",
    "biane_moment",
    "casimir_check",
    "compose",
    "cumulant_of_generators",
    "enumerate_nc",
    "kappa_closed_form",
    "limit_cumulant_coefficient",
    "mobius_nc",
    "moment_finite",
    "moment_limit",
    "simulate",
]
