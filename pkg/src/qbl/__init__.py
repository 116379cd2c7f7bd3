"""Mostow coordinates, Stein certification and hyperbolicity witnesses for
SU(2)-equivariant disc bundles over the affine quadric."""

from .algebra import DomainError, exp_traceless, sample_group, sigma_u
from .bundles import BundlePoint, Membership, fiber_norm, membership
from .certify import Status, certify_stein, hyperbolicity_witness
from .mostow import coords, decompose, gram_slice
from .profiles import Constant, CoshPower, Grid, normalize

__all__ = [
    "BundlePoint",
    "Constant",
    "CoshPower",
    "DomainError",
    "Grid",
    "Membership",
    "Status",
    "certify_stein",
    "coords",
    "decompose",
    "exp_traceless",
    "fiber_norm",
    "gram_slice",
    "hyperbolicity_witness",
    "membership",
    "normalize",
    "sample_group",
    "sigma_u",
]
