"""Independent evaluation of K0 and K0' by power series and asymptotic expansion.

This is the cross-check path for the integral representation used in
:mod:`eulerblowup.weights`. It shares no code with it: small and moderate
arguments use the ascending series summed in extended precision (the series
cancels catastrophically in double precision once r exceeds a few units),
large arguments use the Hankel asymptotic expansion truncated at its smallest
term.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

# Beyond this radius the smallest asymptotic term is below ~1e-15 relative.
SERIES_ASYMPTOTIC_SWITCH = 17.0


def _series(r: float, order: int) -> float:
    # Ascending series for K_0 and K_1, e.g. Abramowitz & Stegun 9.6.13 / 9.6.11.
    with mpmath.workdps(30 + int(r)):
        z = mpmath.mpf(r)
        q = z * z / 4
        log_half = mpmath.log(z / 2)
        euler = mpmath.euler
        tol = mpmath.mpf(10) ** (-(25 + int(r)))
        if order == 0:
            term = mpmath.mpf(1)  # q**k / (k!)**2
            harmonic = mpmath.mpf(0)
            total = -(log_half + euler) * term
            k = 0
            while True:
                k += 1
                term *= q / (k * k)
                harmonic += mpmath.mpf(1) / k
                piece = (harmonic - log_half - euler) * term
                total += piece
                if abs(piece) < tol * abs(total) and k > q:
                    break
            return float(total)
        # K_1(z) = 1/z + log(z/2) I_1(z) - (z/4) sum_k [psi(k+1) + psi(k+2)] q**k / (k!(k+1)!)
        term = mpmath.mpf(1)  # q**k / (k!(k+1)!)
        h_k = mpmath.mpf(0)
        h_k1 = mpmath.mpf(1)
        acc = (h_k + h_k1 - 2 * euler) * term
        i1 = term
        k = 0
        while True:
            k += 1
            term *= q / (k * (k + 1))
            h_k += mpmath.mpf(1) / k
            h_k1 += mpmath.mpf(1) / (k + 1)
            piece = (h_k + h_k1 - 2 * euler) * term
            acc += piece
            i1 += term
            if abs(piece) < tol * abs(acc) and k > q:
                break
        k1 = 1 / z + log_half * (z / 2) * i1 - (z / 4) * acc
        return float(k1)


def _asymptotic(r: float, order: int) -> float:
    mu = 4.0 * order * order
    total = 1.0
    term = 1.0
    prev = math.inf
    k = 0
    while True:
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * r)
        if abs(term) >= prev or abs(term) < 1e-18:
            break
        total += term
        prev = abs(term)
    return math.sqrt(math.pi / (2.0 * r)) * math.exp(-r) * total


def _evaluate(r, order):
    arr = np.asarray(r, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("Bessel K is only evaluated for r > 0")
    flat = arr.ravel()
    out = np.empty_like(flat)
    for i, x in enumerate(flat):
        if x <= SERIES_ASYMPTOTIC_SWITCH:
            out[i] = _series(float(x), order)
        else:
            out[i] = _asymptotic(float(x), order)
    out = out.reshape(arr.shape)
    return float(out) if arr.ndim == 0 else out


def k0_reference(r):
    """K_0(r) by series (r <= 17) or asymptotic expansion (r > 17)."""
    return _evaluate(r, 0)


def k0_prime_reference(r):
    """K_0'(r) = -K_1(r) by the same two independent expansions."""
    out = _evaluate(r, 1)
    return -out
