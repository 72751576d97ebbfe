# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled time loops for the FTCS and SAM schemes.

Signatures and status codes match ``_pykernels``; arrays are updated in
place. The arithmetic mirrors the numpy reference updates operation by
operation so both backends agree to round-off.
"""

from libc.math cimport sqrt, isfinite

cdef int OK = 0
cdef int NONFINITE = 1
cdef int RECEDED = 2
cdef int FRONT_EXIT = 3
cdef int WINDOW_EXIT = 4

cdef int ARITHMETIC = 0
cdef int HARMONIC = 1
cdef int INTEGRAL = 2

cdef int EXACT = 0
cdef int JUMP = 1
cdef int LEVEL_SET = 2

cdef int ZERO = 0
cdef int TWO_CELLS_RIGHT = 1

cdef double STENCIL_SWITCH_TOL = 1e-10
cdef double DEGENERATE_JUMP = 1e-14


cdef inline double _coef(double p, double k_max, double k_min, double ps) nogil:
    return k_max if p >= ps else k_min


cdef inline double _phi(double p, double k_max, double k_min, double ps) nogil:
    return k_min * (p if p < ps else ps) + k_max * (p - ps if p - ps > 0.0 else 0.0)


cdef inline double _face(int kind, double a, double b, double k_max, double k_min, double ps) nogil:
    cdef double ka, kb, s
    if kind == INTEGRAL:
        if (a >= ps) == (b >= ps):
            return _coef(a, k_max, k_min, ps)
        return (_phi(b, k_max, k_min, ps) - _phi(a, k_max, k_min, ps)) / (b - a)
    ka = _coef(a, k_max, k_min, ps)
    kb = _coef(b, k_max, k_min, ps)
    if kind == ARITHMETIC:
        return 0.5 * (ka + kb)
    s = ka + kb
    if s == 0.0:
        return 0.0
    return 2.0 * ka * kb / s


cdef inline Py_ssize_t _front_index(double[::1] p, double ps, Py_ssize_t j) nogil:
    cdef Py_ssize_t n = p.shape[0]
    while j + 1 < n and p[j + 1] >= ps:
        j += 1
    while j > 0 and p[j] < ps:
        j -= 1
    return j


cdef inline double _front_position(double[::1] p, const double[::1] xc, double ps, Py_ssize_t j) nogil:
    cdef Py_ssize_t n = p.shape[0]
    cdef double a, b
    if j + 1 >= n:
        return xc[n - 1]
    a = p[j]
    b = p[j + 1]
    if a == b:
        return xc[j]
    return xc[j] + (a - ps) / (a - b) * (xc[j + 1] - xc[j])


cdef inline void _probe(double[::1] p, const long[::1] idx, const double[::1] w, double[:, ::1] rec,
                        Py_ssize_t n) nogil:
    cdef Py_ssize_t k, j
    for k in range(idx.shape[0]):
        j = idx[k]
        if w[k] != 0.0:
            rec[n, k] = (1.0 - w[k]) * p[j] + w[k] * p[j + 1]
        else:
            rec[n, k] = p[j]


def ftcs_advance(double[::1] p, const double[::1] vol, const double[::1] inv_dist, const double[::1] xc,
                 int kind, double k_max, double k_min, double p_star, double dt,
                 Py_ssize_t nsteps, const long[::1] probe_idx, const double[::1] probe_w,
                 double[:, ::1] rec_p, double[::1] rec_front, Py_ssize_t lo, Py_ssize_t hi):
    """Advance nsteps FTCS steps; stop early if the front leaves [lo, hi].

    Returns (steps_done, status).
    """
    cdef Py_ssize_t m = p.shape[0]
    cdef Py_ssize_t n, j
    cdef double fl, fr, new
    cdef Py_ssize_t jf = m - 1
    while jf > 0 and p[jf] < p_star:
        jf -= 1
    with nogil:
        for n in range(nsteps):
            # left-to-right sweep; fl carries the flux computed from old values
            fl = -_face(kind, p[0], p[1], k_max, k_min, p_star) * (p[1] - p[0]) * inv_dist[0]
            for j in range(1, m - 1):
                fr = -_face(kind, p[j], p[j + 1], k_max, k_min, p_star) * (p[j + 1] - p[j]) * inv_dist[j]
                new = p[j] + dt / vol[j] * (fl - fr)
                if not isfinite(new):
                    with gil:
                        return n, NONFINITE
                p[j] = new
                fl = fr
            _probe(p, probe_idx, probe_w, rec_p, n)
            jf = _front_index(p, p_star, jf)
            rec_front[n] = _front_position(p, xc, p_star, jf)
            if jf < lo or jf > hi:
                with gil:
                    return n + 1, WINDOW_EXIT
    return nsteps, OK


cdef inline bint _geometry(int tracker_kind, double xi, double[::1] phi, Py_ssize_t* il,
                           double x_lo, double dx, Py_ssize_t last, Py_ssize_t* i,
                           double* dxs) nogil:
    """Front cell i and distance dxs from node i; False once the front leaves the grid."""
    cdef double s
    cdef Py_ssize_t k
    if tracker_kind == LEVEL_SET:
        k = il[0]
        while k + 1 <= last and phi[k + 1] <= 0.0:
            k += 1
        while k > 0 and phi[k] > 0.0:
            k -= 1
        il[0] = k
        if phi[k] > 0.0 or k >= last:
            return False
        i[0] = k
        dxs[0] = -phi[k]
    else:
        s = (xi - x_lo) / dx
        k = <Py_ssize_t>s
        if s < 0.0 and <double>k != s:
            k -= 1
        dxs[0] = xi - (x_lo + k * dx)
        if dxs[0] >= dx:
            k += 1
            dxs[0] -= dx
        elif dxs[0] < 0.0:
            k -= 1
            dxs[0] += dx
        i[0] = k
    return i[0] >= 1 and i[0] + 1 <= last - 1


def sam_advance(double[::1] p, double x_lo, double dx, double k_max, double k_min,
                double p_star, double dt, double t0, Py_ssize_t nsteps, int tracker_kind,
                double xi, double[::1] phi, double eps, double alpha, double t_offset,
                int stencil, const long[::1] probe_idx, const double[::1] probe_w,
                double[:, ::1] rec_p, double[::1] rec_xi, double[::1] rec_dxs):
    """Advance nsteps SAM steps with the given tracker.

    Returns (steps_done, status, xi, stencil).
    """
    cdef Py_ssize_t last = p.shape[0] - 1
    cdef Py_ssize_t n, j, i = 0, i_next = 0
    cdef double dxs, dxs_next, dm, v, fl, fr, new, g0, jump, fp, fm, vi, vi1
    cdef double qi, qi1, f_im1, f_ip1, ps = p_star
    cdef bint held
    cdef Py_ssize_t il = 0
    if tracker_kind == LEVEL_SET:
        il = last
        while il > 0 and phi[il] > 0.0:
            il -= 1
    for n in range(nsteps):
        # front geometry; within eps of node i that node is held on the line
        # from node i-1 to (xi, p_star)
        if tracker_kind == EXACT:
            xi = x_lo + alpha * sqrt(t0 + n * dt + t_offset)
        if not _geometry(tracker_kind, xi, phi, &il, x_lo, dx, last, &i, &dxs):
            return n, FRONT_EXIT, xi, stencil
        held = dxs <= eps
        if held:
            p[i] = ps + dxs * (p[i - 1] - ps) / (dx + dxs)

        # speed from the (held) old state
        v = 0.0
        if tracker_kind != EXACT:
            if stencil == TWO_CELLS_RIGHT and (i + 3 > last or p[i + 2] < STENCIL_SWITCH_TOL):
                stencil = ZERO
            fl = -k_max * (p[i] - p[i - 1]) / dx
            if stencil == ZERO:
                if p[i] <= 0.0:
                    raise ValueError("jump velocity needs p_i > 0")
                v = fl / p[i]
            else:
                jump = p[i] - p[i + 2]
                if (jump if jump >= 0.0 else -jump) < DEGENERATE_JUMP:
                    raise ValueError("degenerate jump |p_i - p_{i+2}| < 1e-14")
                fr = -k_min * (p[i + 3] - p[i + 2]) / dx
                v = (fl - fr) / jump
            if dt * v < -eps:
                return n, RECEDED, xi, stencil

        # flux update; faces left of i carry k_max, right of i k_min
        qi = p[i]
        qi1 = p[i + 1]
        f_im1 = -k_max * (p[i] - p[i - 1]) / dx
        f_ip1 = -k_min * (p[i + 2] - p[i + 1]) / dx
        fl = -k_max * (p[1] - p[0]) / dx if 0 < i else -k_min * (p[1] - p[0]) / dx
        for j in range(1, last):
            if j < i:
                fr = -k_max * (p[j + 1] - p[j]) / dx
            else:
                fr = -k_min * (p[j + 1] - p[j]) / dx
            if not (j == i or (j == i + 1 and not held)):
                new = p[j] + dt / dx * (fl - fr)
                if not isfinite(new):
                    return n, NONFINITE, xi, stencil
                p[j] = new
            elif j == i and held:
                # node i-1 already carries its new value
                p[i] = ps + dxs * (p[i - 1] - ps) / (dx + dxs)
            fl = fr
        if not held:
            # shock fluxes on the reduced volumes; the right distance is floored at eps
            dm = dx - dxs
            if dm < eps:
                dm = eps
            fp = -k_max * (ps - qi) / dxs
            fm = -k_min * (qi1 - ps) / dm
            vi = 0.5 * (dx + dxs)
            vi1 = dx - 0.5 * dxs
            p[i] = qi + dt / vi * (f_im1 - fp)
            p[i + 1] = qi1 + dt / vi1 * (fm - f_ip1)
            if not (isfinite(p[i]) and isfinite(p[i + 1])):
                return n, NONFINITE, xi, stencil

        # advance the front
        if tracker_kind == EXACT:
            xi = x_lo + alpha * sqrt(t0 + (n + 1) * dt + t_offset)
        elif tracker_kind == JUMP:
            xi = xi + dt * v
        else:
            g0 = (phi[1] - phi[0]) / dx
            for j in range(last, 0, -1):
                phi[j] = phi[j] - dt * v * ((phi[j] - phi[j - 1]) / dx)
            phi[0] = phi[0] - dt * v * g0
            while il + 1 <= last and phi[il + 1] <= 0.0:
                il += 1
            while il > 0 and phi[il] > 0.0:
                il -= 1
            if phi[il] > 0.0 or il >= last:
                return n, FRONT_EXIT, xi, stencil
            xi = (x_lo + il * dx) - phi[il] * dx / (phi[il + 1] - phi[il])
        # hold a node the front has just reached so the stored state matches xi
        if _geometry(tracker_kind, xi, phi, &il, x_lo, dx, last, &i_next, &dxs_next):
            if dxs_next <= eps:
                p[i_next] = ps + dxs_next * (p[i_next - 1] - ps) / (dx + dxs_next)
        _probe(p, probe_idx, probe_w, rec_p, n)
        rec_xi[n] = xi
        rec_dxs[n] = dxs
    return nsteps, OK, xi, stencil
