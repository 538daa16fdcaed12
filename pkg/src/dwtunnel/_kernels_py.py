"""Pure-Python fallback for :mod:`dwtunnel._kernels`.

Same algorithms and return conventions as the compiled module; selected
automatically when the extension is unavailable or when
``DWTUNNEL_PURE_PYTHON=1`` is set.
"""

import math

RESCALE = 1e250
EPS_STOP = 1e-17
_LOG_RESCALE = math.log(RESCALE)


def kummer_series(a, c, x, max_terms=2000000):
    term = 1.0
    total = 1.0
    comp = 0.0
    scale = 0.0
    max_term = 1.0
    k = 0
    while k < max_terms:
        r = (a + k) / (c + k) * x / (k + 1)
        term *= r
        if term == 0.0:
            return total, scale, max_term, k + 1
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        k += 1
        at = abs(term)
        if at > max_term:
            max_term = at
        if abs(total) > RESCALE or max_term > RESCALE:
            total /= RESCALE
            term /= RESCALE
            comp /= RESCALE
            max_term /= RESCALE
            scale += _LOG_RESCALE
        if abs(r) < 1.0 and a + k > 0 and c + k > 0 and at <= EPS_STOP * abs(total):
            return total, scale, max_term, k + 1
    return total, scale, max_term, -k


def hermite(n, x):
    if n == 0:
        return 1.0
    h0, h1 = 1.0, 2.0 * x
    for k in range(1, n):
        h0, h1 = h1, 2.0 * x * h1 - 2.0 * k * h0
    return h1
