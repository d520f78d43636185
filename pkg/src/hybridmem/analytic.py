"""Closed-form solutions used as oracles for the integrators."""
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ResonantAmplitudes:
    c1: complex
    c2: complex
    c3: complex

    def as_tuple(self):
        return self.c1, self.c2, self.c3


def resonant_amplitudes(j, g, t):
    """Amplitudes on (|1,0,0>, |0,1,0>, |0,0,1>) at time t, starting from |1,0,0>.

    The three-site chain with couplings J (C-M) and g (M-NVE). The constant
    g**2 / Omega**2 in c1 makes the solution start in |1,0,0>; c2 and c3 are
    the usual chain expressions.
    """
    if j == 0 and g == 0:
        raise ValueError("at least one of j, g must be non-zero")
    omega2 = j * j + g * g
    omega = math.sqrt(omega2)
    c, s = math.cos(omega * t), math.sin(omega * t)
    return ResonantAmplitudes(
        complex((g * g + j * j * c) / omega2),
        -1j * j * s / omega,
        complex(j * g * (c - 1.0) / omega2),
    )


def resonant_transfer_time(g, k=0):
    """Time of the (k+1)-th complete C -> NVE transfer for J_t = g."""
    if not g > 0:
        raise ValueError("coupling must be positive")
    if k < 0 or int(k) != k:
        raise ValueError("k must be a non-negative integer")
    return (2 * k + 1) * math.pi / (math.sqrt(2.0) * g)


def dispersive_transfer_time(lambda_eff, k=0):
    if lambda_eff == 0:
        raise ValueError("effective coupling is zero; no transfer")
    return (2 * k + 1) * math.pi / (2.0 * abs(lambda_eff))


def dispersive_amplitudes(lambda_eff, delta_diag, t):
    """Two-level Rabi amplitudes (C excited, NVE excited) starting from C excited.

    ``delta_diag`` is E_C - E_NVE of the effective Hamiltonian. Phases are those
    of the frame co-rotating with the mean energy (E_C + E_NVE) / 2.
    """
    half = 0.5 * delta_diag
    w = math.sqrt(lambda_eff ** 2 + half ** 2)
    if w == 0:
        return 1.0 + 0j, 0j
    c, s = math.cos(w * t), math.sin(w * t)
    return complex(c, -half * s / w), -1j * lambda_eff * s / w
