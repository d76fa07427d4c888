"""Reference parameter sets for a micron-scale YIG-bridge device.

The numbers describe a feasible device: a 10 um^3 garnet bridge with a 40 MHz
flexural mode and 10 GHz Kittel mode, read out by a 1064 nm cavity that also
hosts a cold two-level ensemble, operated in the resolved-sideband regime
with the atoms on the lower sideband. All frequencies are /2pi values in Hz
at the call sites below and converted to rad/s exactly once here.
"""

from __future__ import annotations

import dataclasses

from .constants import TWO_PI
from .params import PhysicalParams

__all__ = ["default_params", "drive_power_params"]


def default_params(**overrides) -> PhysicalParams:
    """Effective-coupling parameter set: the working point for entanglement.

    Cavity detuned half a mechanical frequency above the drive, magnons on
    their lower sideband, atoms on the laser's lower sideband. Override any
    field by keyword, e.g. ``default_params(T=0.2)``.
    """
    params = PhysicalParams(
        omega_b=TWO_PI * 40e6,
        omega_m=TWO_PI * 10e9,
        lambda_L=1.064e-6,
        kappa_c=TWO_PI * 2e6,
        kappa_m=TWO_PI * 1e6,
        gamma_a=TWO_PI * 1e6,
        gamma_b=TWO_PI * 100.0,
        g_c=TWO_PI * 1e3,
        g_m=TWO_PI * 20.0,
        g_a=TWO_PI * 1e3,
        g_N=TWO_PI * 8e6,
        delta_a=-TWO_PI * 40e6,
        delta_c_eff=TWO_PI * 20e6,
        delta_m_eff=TWO_PI * 40e6,
        G_c=TWO_PI * 8e6,
        G_m=TWO_PI * 2.5e6,
        T=0.01,
    )
    return dataclasses.replace(params, **overrides) if overrides else params


def drive_power_params(**overrides) -> PhysicalParams:
    """Same device driven by physical strengths: 4.4 mW of laser power and a
    1.1 mT microwave field, with the effective detunings pinned.
    """
    base = default_params()
    params = dataclasses.replace(
        base,
        G_c=None,
        G_m=None,
        P_L=4.4e-3,
        B_d=1.1e-3,
    )
    return dataclasses.replace(params, **overrides) if overrides else params
