"""dB and dBm conversion helpers.

Sample convention used across the package: the squared magnitude of a
complex baseband sample is an instantaneous power in watts, so mean
|s|^2 is average power in watts and dBm values follow directly.
"""

import numpy as np

BOLTZMANN = 1.380649e-23  # J/K
T0_KELVIN = 290.0


def db_to_lin(x_db):
    """Power ratio from dB. Accepts +-inf (maps to inf / 0)."""
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def lin_to_db(x_lin):
    """dB from a power ratio. Zero maps silently to -inf."""
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x_lin)


def dbm_to_watts(p_dbm):
    return 10.0 ** ((np.asarray(p_dbm, dtype=float) - 30.0) / 10.0)


def watts_to_dbm(p_watts):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(p_watts) + 30.0


def thermal_noise_watts(bandwidth_hz, nf_db=0.0):
    """k*T0*B noise power in watts, scaled by a noise figure in dB."""
    return BOLTZMANN * T0_KELVIN * bandwidth_hz * db_to_lin(nf_db)
