"""Parameter sets for the figure scenarios.

Scenarios fig2-fig6 are in units of gamma = g = 2 pi x 35 MHz; fig7-fig8 use SI
(rad/s, seconds). The absolute qubit frequency only sets a rotating frame and
drops out of every fidelity.
"""
import math

from hybridmem.model import (SI, DriveParams, FluxQubitParams, NVEParams, SystemConfig, UnitSystem,
                             nv_transition_frequency)

MHZ = 2.0 * math.pi * 1e6
GAMMA = 35.0 * MHZ
BASE_OMEGA = 50.0  # gamma units
ALPHA = 1.0 / math.sqrt(3.0)
BETA = math.sqrt(2.0 / 3.0)
D_ZERO_FIELD = 2880.0 * MHZ


def gamma_config(delta_c=0.0, delta_nv=0.0, g=1.0, j_t=1.0, fock_cutoff=2, alpha=ALPHA, beta=BETA):
    """Dimensionless configuration with omega_M fixed and C / ensemble placed by their detunings."""
    w_m = BASE_OMEGA
    return SystemConfig(
        qubit_c=FluxQubitParams(w_m - delta_c),
        qubit_m=FluxQubitParams(w_m),
        nve=NVEParams(omega_nv=w_m - delta_nv, g=g, fock_cutoff=fock_cutoff),
        j_t=j_t,
        unit=UnitSystem(gamma=GAMMA),
        alpha=alpha,
        beta=beta,
    )


def fig2():
    return gamma_config()


def fig5():
    return gamma_config(10.0, 10.0)


def fig7_drive(d_n=8e-6, omega_c_override=35.0 * MHZ):
    return DriveParams(i_ext=700e-9, d_c=1.2e-6, d_n=d_n, loop_side=2e-6, persistent_current=60e-9,
                       drive_frequency=D_ZERO_FIELD, omega_c_override=omega_c_override)


def si_config(delta=0.0, alpha=ALPHA, beta=BETA, drive=None, gamma_decay=0.0, fock_cutoff=2):
    """fig7 and fig8: g = J_t = 2 pi x 35 MHz, N = 1e6, ensemble at the zero-field splitting."""
    w0 = nv_transition_frequency(D_ZERO_FIELD, 2.0, 0.0)
    return SystemConfig(
        qubit_c=FluxQubitParams(w0, gamma_decay),
        qubit_m=FluxQubitParams(w0 + delta, gamma_decay),
        nve=NVEParams(omega_nv=w0, g=35.0 * MHZ, n_spins=10 ** 6, fock_cutoff=fock_cutoff,
                      zero_field_D=D_ZERO_FIELD, g_factor=2.0, b_ext_z=0.0),
        j_t=35.0 * MHZ,
        unit=UnitSystem(mode=SI),
        drive=drive,
        alpha=alpha,
        beta=beta,
    )


def fig7(dispersive=False):
    return si_config(350.0 * MHZ if dispersive else 0.0, alpha=1.0, beta=0.0, drive=fig7_drive())


def fig8(dispersive=False):
    return si_config(350.0 * MHZ if dispersive else 0.0)
