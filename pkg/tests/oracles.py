"""Reference computations that share no numerics with the package."""
import math

import numpy as np
from numba import njit
from scipy.integrate import solve_ivp
from scipy.linalg import expm


def expm_propagator(c, t):
    """exp(t [[0, 1], [-c, 0]]) by scipy's Pade approximant."""
    return expm(t * np.array([[0.0, 1.0], [-c, 0.0]]))


def dop853_monodromy(omega2, amplitude, omega, q_values=(0.0,), rtol=1e-12, atol=1e-13):
    """Transfer matrix of x'' + (omega2 + A cos(omega t) + q) x = 0 over one period, segment by segment."""
    T = 2 * math.pi / omega
    M = len(q_values)
    Y = np.eye(2)
    for s, q in enumerate(q_values):
        def rhs(t, y, q=q):
            return [y[1], -(omega2 + amplitude * math.cos(omega * t) + q) * y[0]]
        for col in range(2):
            sol = solve_ivp(rhs, (s * T / M, (s + 1) * T / M), Y[:, col], method="DOP853",
                            rtol=rtol, atol=atol)
            Y[:, col] = sol.y[:, -1]
    return Y


def hill_trace(omega2, amplitude, omega, K=60):
    """Monodromy trace of x'' + (omega2 + A cos(omega t)) x = 0 from the Hill determinant.

    In tau = omega t / 2 the equation is y'' + (theta0 + 2 theta1 cos 2 tau) y = 0
    with theta0 = 4 omega2 / omega^2 and theta1 = 2 A / omega^2, and
    cos(pi c) = 1 - 2 Delta(0) sin^2(pi sqrt(theta0) / 2) (Whittaker & Watson).
    """
    theta0 = 4.0 * omega2 / omega**2
    theta1 = 2.0 * amplitude / omega**2
    n = np.arange(-K, K + 1)
    B = np.eye(2 * K + 1)
    xi = theta1 / (theta0 - 4.0 * n**2)
    for i in range(2 * K + 1):
        if i > 0:
            B[i, i - 1] = xi[i]
        if i < 2 * K:
            B[i, i + 1] = xi[i]
    delta0 = np.linalg.det(B)
    return 2.0 * (1.0 - 2.0 * delta0 * math.sin(math.pi * math.sqrt(theta0) / 2.0) ** 2)


def explicit_product_lognorm(mats, v):
    """log |M_N ... M_1 v| with no renormalization."""
    prod = np.eye(mats[0].shape[0])
    for m in mats:
        prod = m @ prod
    return math.log(np.linalg.norm(prod @ v))


@njit(cache=True)
def _numerov_run(omega2, amplitude, omega, q, sub):
    N, M = q.shape
    T = 2 * math.pi / omega
    h = T / (M * sub)
    h12 = h * h / 12.0
    psi_prev, psi = 1.0, 1.0 + 0.3 * h   # generic start
    logs = np.empty(N)
    scale = 0.0
    i = 1
    for j in range(N):
        for s in range(M):
            for _ in range(sub):
                x0 = (i - 1) * h
                x1 = i * h
                x2 = (i + 1) * h
                # segment index from the midpoint of the step keeps jumps on grid lines
                f0 = -(omega2 + amplitude * math.cos(omega * x0) + q[j, s])
                f1 = -(omega2 + amplitude * math.cos(omega * x1) + q[j, s])
                f2 = -(omega2 + amplitude * math.cos(omega * x2) + q[j, s])
                nxt = (2.0 * psi * (1.0 + 5.0 * h12 * f1) - psi_prev * (1.0 - h12 * f0)) / (1.0 - h12 * f2)
                psi_prev, psi = psi, nxt
                i += 1
        r = math.sqrt(psi * psi + psi_prev * psi_prev)
        scale += math.log(r)
        psi /= r
        psi_prev /= r
        logs[j] = scale
    return logs


def numerov_decay_rate(omega2, amplitude, omega, q, sub=64):
    """Least-squares slope of log|(psi_i, psi_{i-1})| against x for the direct spatial recursion."""
    logs = _numerov_run(float(omega2), float(amplitude), float(omega), np.ascontiguousarray(q), sub)
    x = (2 * math.pi / omega) * np.arange(1, len(logs) + 1)
    slope, _ = np.polyfit(x, logs, 1)
    return slope
