# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Mirrors :mod:`dwtunnel._kernels_py` exactly."""

from libc.math cimport fabs, log

DEF RESCALE = 1e250
DEF EPS_STOP = 1e-17


def kummer_series(double a, double c, double x, long max_terms=2000000):
    """Scaled Taylor sum of M(a, c; x).

    Returns ``(total, log_scale, max_term, n_terms)`` with
    ``M = total * exp(log_scale)``; ``max_term`` is the largest term magnitude
    in the same scale, ``n_terms`` is negative if the series did not converge.
    """
    cdef double term = 1.0, total = 1.0, comp = 0.0, scale = 0.0
    cdef double max_term = 1.0, r, y, t
    cdef double log_rescale = log(RESCALE)
    cdef long k = 0
    while k < max_terms:
        r = (a + k) / (c + k) * x / (k + 1)
        term *= r
        if term == 0.0:
            return total, scale, max_term, k + 1
        # Kahan-compensated accumulation
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        k += 1
        if fabs(term) > max_term:
            max_term = fabs(term)
        if fabs(total) > RESCALE or max_term > RESCALE:
            total /= RESCALE
            term /= RESCALE
            comp /= RESCALE
            max_term /= RESCALE
            scale += log_rescale
        if (fabs(r) < 1.0 and a + k > 0 and c + k > 0
                and fabs(term) <= EPS_STOP * fabs(total)):
            return total, scale, max_term, k + 1
    return total, scale, max_term, -k


def hermite(long n, double x):
    """Physicists' Hermite polynomial by upward recurrence."""
    cdef double h0 = 1.0, h1 = 2.0 * x, h2
    cdef long k
    if n == 0:
        return h0
    for k in range(1, n):
        h2 = 2.0 * x * h1 - 2.0 * k * h0
        h0 = h1
        h1 = h2
    return h1
