"""Storage fidelity after a frequency ramp of the coupler, around the 35 MHz / 700 MHz / 0.45 ns datum.

Prints the maximum fidelity for several readings of the datum and a small
(tau, delta_max) table, with an independent adaptive-ODE check on the
single-excitation chain.
"""
import math

import numpy as np
from scipy.integrate import solve_ivp

from hybridmem import presets
from hybridmem.analytic import resonant_transfer_time
from hybridmem.experiments import peak, run_ramp_storage, with_ramp

DELTA_MAX = 700.0 / 35.0
TAU = 0.45e-9 * presets.GAMMA


def ramp_peak(tau, delta_max, shape="linear"):
    return peak(run_ramp_storage(with_ramp(presets.fig2(), tau, delta_max, shape)), tau)


def chain_oracle(tau, delta_max):
    """Amplitudes on (C, M, NVE) in the frame of C and NVE, integrated adaptively."""
    def rhs(t, y):
        d = delta_max * (1 - t / tau) if t < tau else 0.0
        h = np.array([[0, 1, 0], [1, d, 1], [0, 1, 0]], dtype=complex)
        return -1j * h @ y

    t_end = tau + 2 * resonant_transfer_time(1.0)
    ts = np.linspace(tau, t_end, 4001)
    sol = solve_ivp(rhs, (0, t_end), np.array([1, 0, 0], dtype=complex), t_eval=ts, rtol=1e-11, atol=1e-12,
                    method="DOP853")
    a, b = presets.ALPHA, presets.BETA
    # target alpha|0> - beta|1> on the ensemble, M empty
    return np.max(np.abs(a * a + (-b) * b * sol.y[2]) ** 2)


def main():
    print(f"gamma*tau = {TAU:.5f}, delta_max = {DELTA_MAX:g} gamma")
    t, f = ramp_peak(TAU, DELTA_MAX)
    print(f"linear ramp: max F = {f:.6f} at gamma t = {t:.4f}")
    print(f"cosine ramp: max F = {ramp_peak(TAU, DELTA_MAX, 'cosine')[1]:.6f}")
    print(f"adaptive ODE on the three-level chain: max F = {chain_oracle(TAU, DELTA_MAX):.6f}")
    traj = run_ramp_storage(with_ramp(presets.fig2(), TAU, DELTA_MAX))
    t_fixed = TAU + resonant_transfer_time(1.0)
    k = np.argmin(np.abs(traj.times - t_fixed))
    print(f"F at tau + t* = {traj.observables['fidelity'][k]:.6f}")
    print(f"ramp time read as 0.45 ns x 2 pi: max F = {ramp_peak(2 * math.pi * TAU, DELTA_MAX)[1]:.6f}")
    print()
    print("gamma*tau " + " ".join(f"{d:>8g}" for d in (5, 10, 20, 40)))
    for tau in (0.05, 0.1, 0.5, 1.0, 2.0, 5.0):
        print(f"{tau:9.2f} " + " ".join(f"{ramp_peak(tau, d)[1]:8.5f}" for d in (5, 10, 20, 40)))


if __name__ == "__main__":
    main()
