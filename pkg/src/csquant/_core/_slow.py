"""Pure numpy implementation of the per-point well lattice sums.

Both functions take flat float64 arrays ``q`` and ``p`` of equal length and sum
over levels n = 1..n_max. Gaussian weights are rescaled per point by
exp(shift) with shift = min_n (p -/+ p_n)**2/rho**2, so every term stays
representable for tiny rho; all quantities used downstream are ratios of
these sums and the common factor cancels.
"""
import numpy as np

_CHUNK = 4096


def _weights(q, p, n_max, rho, a, L):
    n = np.arange(1, n_max + 1, dtype=float)
    pn = a * n
    s = np.sin(np.pi * q[:, None] * n[None, :] / L)
    em = (p[:, None] - pn[None, :]) ** 2 / rho**2
    ep = (p[:, None] + pn[None, :]) ** 2 / rho**2
    shift = np.minimum(em.min(axis=1), ep.min(axis=1))
    return n, pn, s, em, ep, shift


def well_sums(q, p, n_max, rho, a, L):
    """Return (S, M, K, D, shift) for every point.

    S = sum (g- + g+),  M = sum p_n (g- - g+),  K = sum p_n**2 (g- + g+),
    D = sum (g- + g+)/n**2,  with g-/+ = exp(-(p -/+ p_n)**2/rho**2 + shift) sin(n pi q/L)**2.
    """
    q = np.ascontiguousarray(q, dtype=float)
    p = np.ascontiguousarray(p, dtype=float)
    out = np.empty((5, q.size))
    for lo in range(0, q.size, _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        n, pn, s, em, ep, shift = _weights(q[sl], p[sl], n_max, rho, a, L)
        s2 = s * s
        gm = np.exp(shift[:, None] - em) * s2
        gp = np.exp(shift[:, None] - ep) * s2
        tot = gm + gp
        out[0, sl] = tot.sum(axis=1)
        out[1, sl] = ((gm - gp) * pn).sum(axis=1)
        out[2, sl] = (tot * pn**2).sum(axis=1)
        out[3, sl] = (tot / n**2).sum(axis=1)
        out[4, sl] = shift
    return tuple(out)


def pair_tables(n_max, rho, a, tau):
    """Coupling matrices for the position-type double sums.

    W1 carries the n+n' odd selection and the Heisenberg phase
    cos(2 pi tau (n**2 - n'**2)); W2 is the off-diagonal part of the q**2
    operator, with sign (-1)**(n+n').
    """
    n = np.arange(1, n_max + 1)
    dn = n[:, None] - n[None, :]
    sn = n[:, None] + n[None, :]
    off = dn != 0
    K = np.zeros((n_max, n_max))
    K[off] = 1.0 / dn[off] ** 2 - 1.0 / sn[off] ** 2
    G = np.exp(-(a * dn) ** 2 / (4.0 * rho**2))
    base = G * K
    odd = (sn % 2) == 1
    freq = (n[:, None] ** 2 - n[None, :] ** 2).astype(float)
    cycles = np.mod(tau * freq, 1.0)
    W1 = np.where(odd, base * np.cos(2.0 * np.pi * cycles), 0.0)
    W2 = np.where(odd, -base, base)
    return W1, W2


def well_pair_sums(q, p, n_max, rho, a, L, tau=0.0):
    """Return (R1, R2) = sum_kappa h_kappa^T W h_kappa for W1 and W2 of `pair_tables`.

    h-/+_n = exp((shift - (p -/+ p_n)**2/rho**2)/2) sin(n pi q/L). ``tau`` is
    omega*t/(2 pi), already reduced modulo 1 by the caller.
    """
    q = np.ascontiguousarray(q, dtype=float)
    p = np.ascontiguousarray(p, dtype=float)
    W1, W2 = pair_tables(n_max, rho, a, tau)
    out = np.empty((2, q.size))
    for lo in range(0, q.size, _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        _, _, s, em, ep, shift = _weights(q[sl], p[sl], n_max, rho, a, L)
        hm = np.exp(0.5 * (shift[:, None] - em)) * s
        hp = np.exp(0.5 * (shift[:, None] - ep)) * s
        for k, W in enumerate((W1, W2)):
            out[k, sl] = ((hm @ W) * hm).sum(axis=1) + ((hp @ W) * hp).sum(axis=1)
    return out[0], out[1]
