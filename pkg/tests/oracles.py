"""Independent reference computations used to freeze expected values."""

import mpmath as mp


def z1_bisection(p_star=0.5, lo=1e-6, hi=5.0, dps=40, iters=200):
    """Brute-force bisection for z1 in extended precision (k_min = 0)."""
    with mp.workdps(dps):
        ps = mp.mpf(p_star)
        f = lambda z: ps * mp.erf(z) * z * mp.exp(z * z) - (1 - ps) / mp.sqrt(mp.pi)  # noqa: E731
        a, b = mp.mpf(lo), mp.mpf(hi)
        for _ in range(iters):
            m = (a + b) / 2
            if f(m) > 0:
                b = m
            else:
                a = m
        return float(a)


def z1_two_phase(k_max, k_min, p_star, dps=40):
    """Bisection on the unscaled two-phase flux balance in extended precision."""
    with mp.workdps(dps):
        ps = mp.mpf(p_star)
        r = mp.sqrt(mp.mpf(k_max) / k_min)

        def f(z):
            z2 = z * r
            return ps * mp.erf(z) * z * mp.exp(z * z) - (1 - ps) * mp.erfc(z2) * mp.exp(z2 * z2) * z2

        a, b = mp.mpf("1e-6"), mp.mpf(5)
        for _ in range(200):
            m = (a + b) / 2
            if f(m) > 0:
                b = m
            else:
                a = m
        return float(a)
