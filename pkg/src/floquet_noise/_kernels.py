"""Compiled RK4 kernels for x'' + (omega2 + p(t)) x + V(t) x = 0.

State layout is ``Y[:n]`` positions and ``Y[n:]`` velocities, with any number
of columns.  ``V`` on segment s is ``sum_c coeffs[s, c] * G[c]``; for a single
mode ``G = [[[1.0]]]`` and ``V`` is just q.  Every step lies inside one noise
segment, so the piecewise-constant coefficient is never sampled across a jump.
"""
import math

import numpy as np
from numba import njit

NORM_L2 = 0
NORM_MAX = 1
NORM_L1 = 2


@njit(cache=True)
def _coupling(coeffs_seg, G, V):
    C, n, _ = G.shape
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for c in range(C):
                acc += coeffs_seg[c] * G[c, i, j]
            V[i, j] = acc


@njit(cache=True)
def _accel(omega2, pval, V, X, out):
    n, m = X.shape
    for i in range(n):
        d = omega2[i] + pval
        for col in range(m):
            acc = d * X[i, col]
            for j in range(n):
                acc += V[i, j] * X[j, col]
            out[i, col] = -acc


@njit(cache=True)
def propagate_period(omega2, pvals, coeffs, G, Y, steps_per_seg, h):
    """Advance ``Y`` (2n x m) in place by one period.

    Returns -1 on success, otherwise the index of the step at which the state
    stopped being finite.
    """
    n = omega2.shape[0]
    m = Y.shape[1]
    M = coeffs.shape[0]
    V = np.empty((n, n))
    X = Y[:n]
    W = Y[n:]
    k1w = np.empty((n, m))
    k2w = np.empty((n, m))
    k3w = np.empty((n, m))
    k4w = np.empty((n, m))
    tmp = np.empty((n, m))
    hh = 0.5 * h
    h6 = h / 6.0
    step = 0
    for s in range(M):
        _coupling(coeffs[s], G, V)
        for _ in range(steps_per_seg):
            p0 = pvals[2 * step]
            p1 = pvals[2 * step + 1]
            p2 = pvals[2 * step + 2]
            _accel(omega2, p0, V, X, k1w)
            for i in range(n):
                for c in range(m):
                    tmp[i, c] = X[i, c] + hh * W[i, c]
            _accel(omega2, p1, V, tmp, k2w)
            for i in range(n):
                for c in range(m):
                    tmp[i, c] = X[i, c] + hh * (W[i, c] + hh * k1w[i, c])
            _accel(omega2, p1, V, tmp, k3w)
            for i in range(n):
                for c in range(m):
                    tmp[i, c] = X[i, c] + h * (W[i, c] + hh * k2w[i, c])
            _accel(omega2, p2, V, tmp, k4w)
            ok = True
            for i in range(n):
                for c in range(m):
                    w = W[i, c]
                    # position stages: k1x=w, k2x=w+hh*k1w, k3x=w+hh*k2w, k4x=w+h*k3w
                    dx = 6.0 * w + h * (k1w[i, c] + k2w[i, c] + k3w[i, c])
                    X[i, c] = X[i, c] + h6 * dx
                    W[i, c] = w + h6 * (k1w[i, c] + 2.0 * k2w[i, c] + 2.0 * k3w[i, c] + k4w[i, c])
                    if not (math.isfinite(X[i, c]) and math.isfinite(W[i, c])):
                        ok = False
            if not ok:
                return step
            step += 1
    return -1


@njit(cache=True)
def _rk4_scalar(a0, a1, a2, x, w, h):
    # one RK4 step of x' = w, w' = -a(t) x with a sampled at t, t + h/2, t + h
    hh = 0.5 * h
    k1 = -a0 * x
    x2 = x + hh * w
    k2 = -a1 * x2
    x3 = x + hh * (w + hh * k1)
    k3 = -a1 * x3
    x4 = x + h * (w + hh * k2)
    k4 = -a2 * x4
    xn = x + h / 6.0 * (6.0 * w + h * (k1 + k2 + k3))
    wn = w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return xn, wn


@njit(cache=True)
def period_matrix_single(omega2, pvals, q, M, steps_per_seg, h, out):
    """Single-mode specialization of propagate_period from identity data into ``out`` (2 x 2)."""
    x1, w1, x2, w2 = 1.0, 0.0, 0.0, 1.0
    step = 0
    for s in range(M):
        c = omega2 + q[s]
        for _ in range(steps_per_seg):
            a0 = c + pvals[2 * step]
            a1 = c + pvals[2 * step + 1]
            a2 = c + pvals[2 * step + 2]
            x1, w1 = _rk4_scalar(a0, a1, a2, x1, w1, h)
            x2, w2 = _rk4_scalar(a0, a1, a2, x2, w2, h)
            step += 1
        # non-finite values persist, so checking once per segment is enough
        if not math.isfinite(x1 + w1 + x2 + w2):
            return step - 1
    out[0, 0] = x1
    out[1, 0] = w1
    out[0, 1] = x2
    out[1, 1] = w2
    return -1


@njit(cache=True)
def period_matrices(omega2, pvals, coeffs, G, steps_per_seg, h):
    """Per-period propagators for a block of periods.

    ``coeffs`` has shape (N, M, C).  Returns (mats, fail) where ``fail`` is
    (-1, -1) or (period, step) of the first non-finite state.
    """
    N = coeffs.shape[0]
    n = omega2.shape[0]
    mats = np.empty((N, 2 * n, 2 * n))
    if n == 1 and G.shape[0] == 1 and G[0, 0, 0] == 1.0:
        M = coeffs.shape[1]
        for j in range(N):
            st = period_matrix_single(omega2[0], pvals, coeffs[j, :, 0], M, steps_per_seg, h, mats[j])
            if st >= 0:
                return mats, (j, st)
        return mats, (-1, -1)
    for j in range(N):
        Y = np.eye(2 * n)
        st = propagate_period(omega2, pvals, coeffs[j], G, Y, steps_per_seg, h)
        if st >= 0:
            return mats, (j, st)
        mats[j] = Y
    return mats, (-1, -1)


@njit(cache=True)
def vector_norm(v, kind):
    acc = 0.0
    if kind == NORM_MAX:
        for x in v:
            if abs(x) > acc:
                acc = abs(x)
        return acc
    if kind == NORM_L1:
        for x in v:
            acc += abs(x)
        return acc
    for x in v:
        acc += x * x
    return math.sqrt(acc)


@njit(cache=True)
def accumulate_matrices(mats, v, kind):
    """Push ``v`` through ``mats[0], mats[1], ...`` renormalizing every period.

    Returns the per-period log growth increments, the final unit vector and the
    index of the first non-finite period (-1 if none).
    """
    N, d, _ = mats.shape
    inc = np.empty(N)
    w = np.empty(d)
    for j in range(N):
        for i in range(d):
            acc = 0.0
            for l in range(d):
                acc += mats[j, i, l] * v[l]
            w[i] = acc
        nrm = vector_norm(w, kind)
        if not (math.isfinite(nrm) and nrm > 0.0):
            return inc, v, j
        inc[j] = math.log(nrm)
        for i in range(d):
            v[i] = w[i] / nrm
    return inc, v, -1


@njit(cache=True)
def accumulate_vector(omega2, pvals, coeffs, G, v, steps_per_seg, h, kind):
    """Vector propagation straight through the RK4 steps, no period matrices.

    Also records, at every period end, log of the Euclidean norm of each
    mode's (position, velocity) pair of the normalized state.
    Returns (increments, pair_log_norms, v, fail_period, fail_step).
    """
    N = coeffs.shape[0]
    n = omega2.shape[0]
    inc = np.empty(N)
    pairs = np.empty((N, n))
    Y = np.empty((2 * n, 1))
    for i in range(2 * n):
        Y[i, 0] = v[i]
    for j in range(N):
        st = propagate_period(omega2, pvals, coeffs[j], G, Y, steps_per_seg, h)
        if st >= 0:
            return inc, pairs, v, j, st
        nrm = vector_norm(Y[:, 0], kind)
        if not (math.isfinite(nrm) and nrm > 0.0):
            return inc, pairs, v, j, -1
        inc[j] = math.log(nrm)
        for i in range(2 * n):
            Y[i, 0] = Y[i, 0] / nrm
        for i in range(n):
            pairs[j, i] = 0.5 * math.log(Y[i, 0] ** 2 + Y[n + i, 0] ** 2)
    for i in range(2 * n):
        v[i] = Y[i, 0]
    return inc, pairs, v, -1, -1
