# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: subset extraction, cleanup and the sequential hull driver.

The pure-Python module ``_pykernels`` exposes the same functions with the
same results; ``_backend`` picks one at import time.
"""
from libc.math cimport NAN
from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memmove

import numpy as np

cdef extern from "_simd.h" nogil:
    int VQ_HAVE_AVX512
    ctypedef struct vq_result:
        Py_ssize_t w_l, w_r
        int has1, has2
        double r1x, r1y, r2x, r2y
        long long reads, writes
    void vq_extract8(double* X, double* Y, Py_ssize_t n, const double* e, vq_result* s)

#: 1 when the eight-lane loop was compiled with AVX-512 instructions
HAVE_AVX512 = bool(VQ_HAVE_AVX512)

from .errors import ExtractionError, InvariantViolation

# counters layout: reads, writes, moves, extreme reads, overhead
# stats layout: calls, sum |P|, sum |S1|, sum |S2|, sum |CH(S2)|

cdef unsigned char PERM[256][8]
cdef unsigned char POPC[256]


cdef void _init_tables():
    cdef int m, i, k
    for m in range(256):
        k = 0
        for i in range(8):
            PERM[m][i] = 0
        for i in range(8):
            if (m >> i) & 1:
                PERM[m][k] = i
                k += 1
        POPC[m] = k


_init_tables()

cdef enum:
    STAGE = 64

ctypedef struct Edges:
    double ax, ay, bx, by
    double cx, cy, dx, dy

ctypedef struct Layout:
    Py_ssize_t base, T, b, t, n

ctypedef struct State:
    Py_ssize_t w_l, w_r
    int has1, has2
    double r1x, r1y, r2x, r2y
    long long reads, writes, overhead
    int wc
    Py_ssize_t fl, fr
    int nl, nr
    double lsx[STAGE]
    double lsy[STAGE]
    double rsx[STAGE]
    double rsy[STAGE]

ctypedef struct Frame:
    Py_ssize_t lo, hi, wl, wr, h1, k1, k2
    double px, py, rx, ry, qx, qy, r1x, r1y, r2x, r2y
    int stage


cdef inline bint left_of(double ux, double uy, double px, double py,
                         double qx, double qy) noexcept nogil:
    return (px - ux) * (qy - uy) > (py - uy) * (qx - ux)


cdef inline bint farther(double ux, double uy, double vx, double vy, double px, double py,
                         double qx, double qy) noexcept nogil:
    return (qy - py) * (ux - vx) < (qx - px) * (uy - vy)


cdef inline Py_ssize_t phys(const Layout* L, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t blk
    if L.T == 1:
        return L.base + i
    blk = i // L.b
    return L.base + (blk * L.T + L.t) * L.b + (i - blk * L.b)


cdef inline void put(double* X, double* Y, const Layout* L, Py_ssize_t li, double x, double y,
                     int* owner, int oid) noexcept nogil:
    cdef Py_ssize_t p = phys(L, li)
    X[p] = x
    Y[p] = y
    if owner != NULL:
        owner[p] = oid


cdef inline void flush_left(double* X, double* Y, const Layout* L, State* S,
                            int* owner, int oid) noexcept nogil:
    cdef int j
    for j in range(S.nl):
        put(X, Y, L, S.fl + j, S.lsx[j], S.lsy[j], owner, oid)
    S.fl += S.nl
    S.nl = 0


cdef inline void flush_right(double* X, double* Y, const Layout* L, State* S,
                             int* owner, int oid) noexcept nogil:
    cdef int j
    for j in range(S.nr):
        put(X, Y, L, S.fr - 1 - j, S.rsx[j], S.rsy[j], owner, oid)
    S.fr -= S.nr
    S.nr = 0


cdef inline void get_logical(double* X, double* Y, const Layout* L, const State* S,
                             Py_ssize_t li, double* x, double* y) noexcept nogil:
    # memory overlaid with the staging buffers
    cdef Py_ssize_t p
    if S.wc and li >= S.fl and li < S.fl + S.nl:
        x[0] = S.lsx[li - S.fl]
        y[0] = S.lsy[li - S.fl]
    elif S.wc and li < S.fr and li >= S.fr - S.nr:
        x[0] = S.rsx[S.fr - 1 - li]
        y[0] = S.rsy[S.fr - 1 - li]
    else:
        p = phys(L, li)
        x[0] = X[p]
        y[0] = Y[p]


cdef inline void process_block(double* X, double* Y, const Layout* L, const Edges* E,
                               double* bx, double* by, int m, State* S,
                               int* owner, int oid, bint wide) noexcept nogil:
    # wide: at least m free slots past each write cursor, so whole rows may be stored
    cdef unsigned int mA = 0
    cdef unsigned int mB = 0
    cdef unsigned int a, b
    cdef int i, j, k1, k2
    cdef Py_ssize_t base
    cdef double ux, uy
    for i in range(m):
        a = left_of(bx[i], by[i], E.ax, E.ay, E.bx, E.by)
        b = left_of(bx[i], by[i], E.cx, E.cy, E.dx, E.dy) & (a ^ 1)
        mA |= a << i
        mB |= b << i
    S.reads += m
    k1 = POPC[mA]
    k2 = POPC[mB]
    # fused farthest-point search over the selected lanes, incumbent kept on ties
    for j in range(k1):
        i = PERM[mA][j]
        if (not S.has1) or farther(bx[i], by[i], S.r1x, S.r1y, E.ax, E.ay, E.bx, E.by):
            S.r1x = bx[i]
            S.r1y = by[i]
            S.has1 = 1
    for j in range(k2):
        i = PERM[mB][j]
        if (not S.has2) or farther(bx[i], by[i], S.r2x, S.r2y, E.cx, E.cy, E.dx, E.dy):
            S.r2x = bx[i]
            S.r2y = by[i]
            S.has2 = 1
    S.writes += k1 + k2
    if S.wc:
        for j in range(k1):
            i = PERM[mA][j]
            S.lsx[S.nl + j] = bx[i]
            S.lsy[S.nl + j] = by[i]
        S.nl += k1
        S.w_l += k1
        base = S.w_r - k2
        for j in range(k2):
            i = PERM[mB][j]
            S.rsx[S.fr - 1 - (base + j)] = bx[i]
            S.rsy[S.fr - 1 - (base + j)] = by[i]
        S.nr = <int>(S.fr - base)
        S.w_r = base
        if S.nl + 8 > STAGE:
            flush_left(X, Y, L, S, owner, oid)
        if S.nr + 8 > STAGE:
            flush_right(X, Y, L, S, owner, oid)
    elif wide and L.T == 1 and owner == NULL:
        # compressed row first, then unselected lanes spill into the gap
        base = L.base + S.w_l
        for j in range(m):
            i = PERM[mA][j]
            X[base + j] = bx[i]
            Y[base + j] = by[i]
        S.w_l += k1
        base = L.base + S.w_r - m
        for j in range(m):
            i = PERM[mB][(j - (m - k2)) & 7]
            X[base + j] = bx[i]
            Y[base + j] = by[i]
        S.w_r -= k2
    else:
        for j in range(k1):
            i = PERM[mA][j]
            put(X, Y, L, S.w_l + j, bx[i], by[i], owner, oid)
        S.w_l += k1
        base = S.w_r - k2
        for j in range(k2):
            i = PERM[mB][j]
            put(X, Y, L, base + j, bx[i], by[i], owner, oid)
        S.w_r = base


cdef int check_invariants(double* X, double* Y, const Layout* L, const Edges* E, const State* S,
                          Py_ssize_t r_l, Py_ssize_t r_r, int d,
                          const double* snapx, const double* snapy,
                          const double* bufl_x, const double* bufl_y,
                          const double* bufr_x, const double* bufr_y) noexcept nogil:
    cdef Py_ssize_t i, n = L.n
    cdef double x, y
    for i in range(S.w_l):
        get_logical(X, Y, L, S, i, &x, &y)
        if not left_of(x, y, E.ax, E.ay, E.bx, E.by):
            return 1
    for i in range(S.w_r, n):
        get_logical(X, Y, L, S, i, &x, &y)
        if left_of(x, y, E.ax, E.ay, E.bx, E.by) or not left_of(x, y, E.cx, E.cy, E.dx, E.dy):
            return 2
    if not (r_l - S.w_l >= d or S.w_r - r_r >= d):
        return 3
    for i in range(r_l, r_r):
        get_logical(X, Y, L, S, i, &x, &y)
        if not (x == snapx[i] and y == snapy[i]):
            return 4
    for i in range(d):
        if not (bufl_x[i] == snapx[i] and bufl_y[i] == snapy[i]):
            return 4
        if not (bufr_x[i] == snapx[n - d + i] and bufr_y[i] == snapy[n - d + i]):
            return 4
    return 0


cdef void extract_flat(double* X, double* Y, Py_ssize_t n, const Edges* E, int d,
                       State* S) noexcept nogil:
    # contiguous, sequential, no staging: everything stays in locals
    cdef double ax = E.ax, ay = E.ay, bx = E.bx, by = E.by
    cdef double cx = E.cx, cy = E.cy, dx = E.dx, dy = E.dy
    cdef double r1x = 0.0, r1y = 0.0, r2x = 0.0, r2y = 0.0
    cdef bint has1 = 0, has2 = 0
    cdef Py_ssize_t w_l = 0, w_r = n, r_l = d, r_r = n - d, start
    cdef long long reads = 0, writes = 0
    cdef double ux[8]
    cdef double uy[8]
    cdef double bufl_x[8]
    cdef double bufl_y[8]
    cdef double bufr_x[8]
    cdef double bufr_y[8]
    cdef double* srcx
    cdef double* srcy
    cdef unsigned int mA, mB, a, b
    cdef int i, j, m, k1, k2, phase
    cdef bint wide
    cdef vq_result v

    if VQ_HAVE_AVX512 and d == 8:
        vq_extract8(X, Y, n, &E.ax, &v)
        S.w_l = v.w_l
        S.w_r = v.w_r
        S.has1 = v.has1
        S.has2 = v.has2
        S.r1x = v.r1x
        S.r1y = v.r1y
        S.r2x = v.r2x
        S.r2y = v.r2y
        S.reads += v.reads
        S.writes += v.writes
        return

    for i in range(d):
        bufl_x[i] = X[i]
        bufl_y[i] = Y[i]
        bufr_x[i] = X[n - d + i]
        bufr_y[i] = Y[n - d + i]

    phase = 0
    while True:
        if phase == 0:
            if r_l >= r_r:
                phase = 1
                continue
            m = d if r_r - r_l >= d else <int>(r_r - r_l)
            if r_l - w_l <= w_r - r_r:
                start = r_l
                r_l += m
            else:
                r_r -= m
                start = r_r
            for i in range(m):
                ux[i] = X[start + i]
                uy[i] = Y[start + i]
            srcx = ux
            srcy = uy
            wide = m == d
        elif phase == 1:
            srcx = bufl_x
            srcy = bufl_y
            m = d
            wide = 0
            phase = 2
        elif phase == 2:
            srcx = bufr_x
            srcy = bufr_y
            m = d
            wide = 0
            phase = 3
        else:
            break

        mA = 0
        mB = 0
        for i in range(m):
            a = (ax - srcx[i]) * (by - srcy[i]) > (ay - srcy[i]) * (bx - srcx[i])
            b = ((cx - srcx[i]) * (dy - srcy[i]) > (cy - srcy[i]) * (dx - srcx[i])) & (a ^ 1)
            mA |= a << i
            mB |= b << i
        reads += m
        k1 = POPC[mA]
        k2 = POPC[mB]
        writes += k1 + k2
        for j in range(k1):
            i = PERM[mA][j]
            if (not has1) or (by - ay) * (srcx[i] - r1x) < (bx - ax) * (srcy[i] - r1y):
                r1x = srcx[i]
                r1y = srcy[i]
                has1 = 1
        for j in range(k2):
            i = PERM[mB][j]
            if (not has2) or (dy - cy) * (srcx[i] - r2x) < (dx - cx) * (srcy[i] - r2y):
                r2x = srcx[i]
                r2y = srcy[i]
                has2 = 1
        if wide:
            for j in range(m):
                i = PERM[mA][j]
                X[w_l + j] = srcx[i]
                Y[w_l + j] = srcy[i]
            for j in range(m):
                i = PERM[mB][(j - (m - k2)) & 7]
                X[w_r - m + j] = srcx[i]
                Y[w_r - m + j] = srcy[i]
        else:
            for j in range(k1):
                i = PERM[mA][j]
                X[w_l + j] = srcx[i]
                Y[w_l + j] = srcy[i]
            for j in range(k2):
                i = PERM[mB][j]
                X[w_r - k2 + j] = srcx[i]
                Y[w_r - k2 + j] = srcy[i]
        w_l += k1
        w_r -= k2

    S.w_l = w_l
    S.w_r = w_r
    S.has1 = has1
    S.has2 = has2
    S.r1x = r1x
    S.r1y = r1y
    S.r2x = r2x
    S.r2y = r2y
    S.reads += reads
    S.writes += writes


cdef int run_extract(double* X, double* Y, const Layout* L, const Edges* E, int d, int wc,
                     int debug, State* S, int* owner, int oid,
                     long long* iters) noexcept nogil:
    """Two-sided in-place extraction over the logical index space of ``L``.

    Returns 0, the number (1-4) of a violated loop invariant, or -1 if the
    debug snapshot could not be allocated.
    """
    cdef Py_ssize_t n = L.n
    cdef Py_ssize_t r_l, r_r, start, i, p
    cdef int m, code = 0
    cdef double bufl_x[8]
    cdef double bufl_y[8]
    cdef double bufr_x[8]
    cdef double bufr_y[8]
    cdef double regx[8]
    cdef double regy[8]
    cdef double tx[16]
    cdef double ty[16]
    cdef double* snapx = NULL
    cdef double* snapy = NULL

    S.w_l = 0
    S.w_r = n
    S.has1 = 0
    S.has2 = 0
    S.r1x = S.r1y = S.r2x = S.r2y = 0.0
    S.wc = wc
    S.fl = 0
    S.fr = n
    S.nl = 0
    S.nr = 0

    if n < 2 * d:
        for i in range(n):
            p = phys(L, i)
            tx[i] = X[p]
            ty[i] = Y[p]
        S.reads += n
        for i in range(n):
            if left_of(tx[i], ty[i], E.ax, E.ay, E.bx, E.by):
                if (not S.has1) or farther(tx[i], ty[i], S.r1x, S.r1y, E.ax, E.ay, E.bx, E.by):
                    S.r1x = tx[i]
                    S.r1y = ty[i]
                    S.has1 = 1
                put(X, Y, L, S.w_l, tx[i], ty[i], owner, oid)
                S.w_l += 1
                S.writes += 1
            elif left_of(tx[i], ty[i], E.cx, E.cy, E.dx, E.dy):
                if (not S.has2) or farther(tx[i], ty[i], S.r2x, S.r2y, E.cx, E.cy, E.dx, E.dy):
                    S.r2x = tx[i]
                    S.r2y = ty[i]
                    S.has2 = 1
                S.w_r -= 1
                put(X, Y, L, S.w_r, tx[i], ty[i], owner, oid)
                S.writes += 1
        return 0

    if L.T == 1 and owner == NULL and not wc and not debug:
        extract_flat(X + L.base, Y + L.base, n, E, d, S)
        return 0

    if debug:
        snapx = <double*>malloc(n * sizeof(double))
        snapy = <double*>malloc(n * sizeof(double))
        if snapx == NULL or snapy == NULL:
            free(snapx)
            free(snapy)
            return -1
        for i in range(n):
            p = phys(L, i)
            snapx[i] = X[p]
            snapy[i] = Y[p]

    for i in range(d):
        p = phys(L, i)
        bufl_x[i] = X[p]
        bufl_y[i] = Y[p]
        p = phys(L, n - d + i)
        bufr_x[i] = X[p]
        bufr_y[i] = Y[p]
    r_l = d
    r_r = n - d

    while r_l < r_r:
        if debug:
            code = check_invariants(X, Y, L, E, S, r_l, r_r, d, snapx, snapy,
                                    bufl_x, bufl_y, bufr_x, bufr_y)
            iters[0] += 1
            if code:
                break
        m = d if r_r - r_l >= d else <int>(r_r - r_l)
        if r_l - S.w_l <= S.w_r - r_r:
            start = r_l
            r_l += m
        else:
            r_r -= m
            start = r_r
        if L.T == 1:
            for i in range(m):
                regx[i] = X[L.base + start + i]
                regy[i] = Y[L.base + start + i]
        else:
            for i in range(m):
                p = phys(L, start + i)
                regx[i] = X[p]
                regy[i] = Y[p]
        if m == 8:
            process_block(X, Y, L, E, regx, regy, 8, S, owner, oid, True)
        else:
            process_block(X, Y, L, E, regx, regy, m, S, owner, oid, m == d)

    if debug and code == 0:
        code = check_invariants(X, Y, L, E, S, r_l, r_r, d, snapx, snapy,
                                bufl_x, bufl_y, bufr_x, bufr_y)
        iters[0] += 1
    free(snapx)
    free(snapy)
    if code:
        return code

    process_block(X, Y, L, E, bufl_x, bufl_y, d, S, owner, oid, False)
    process_block(X, Y, L, E, bufr_x, bufr_y, d, S, owner, oid, False)
    if wc:
        flush_left(X, Y, L, S, owner, oid)
        flush_right(X, Y, L, S, owner, oid)
    return 0


cdef inline Edges make_edges(tuple e):
    cdef Edges E
    E.ax, E.ay, E.bx, E.by, E.cx, E.cy, E.dx, E.dy = e
    return E


cdef inline void add_counters(long long[::1] counters, const State* S):
    if counters is not None:
        counters[0] += S.reads
        counters[1] += S.writes
        counters[4] += S.overhead


cdef _raise_code(int code, long long iters):
    if code == -1:
        raise MemoryError("debug snapshot allocation failed")
    raise InvariantViolation(
        f"subset-extraction invariant {code} violated at loop iteration {iters}"
    )


cdef tuple _outcome(const State* S):
    return (
        S.w_l, S.w_r,
        (S.r1x, S.r1y) if S.has1 else None,
        (S.r2x, S.r2y) if S.has2 else None,
    )


# -- public kernel surface ---------------------------------------------------

def compress_select(values, unsigned int mask, int d):
    """Table-driven lane compression: selected lanes first, order preserved."""
    cdef int j, k = POPC[mask & 0xFF]
    if d < 1 or d > 8 or mask >> d:
        raise ValueError("mask must fit in d <= 8 lanes")
    return k, [values[PERM[mask][j]] for j in range(k)]


def classify_block(xs, ys, tuple edges):
    cdef Edges E = make_edges(edges)
    cdef unsigned int mA = 0, mB = 0, a, b
    cdef int i
    for i in range(len(xs)):
        a = left_of(xs[i], ys[i], E.ax, E.ay, E.bx, E.by)
        b = left_of(xs[i], ys[i], E.cx, E.cy, E.dx, E.dy) & (a ^ 1)
        mA |= a << i
        mB |= b << i
    return mA, mB


def extremes(double[::1] xs, double[::1] ys, long long[::1] counters=None):
    cdef Py_ssize_t n = xs.shape[0], i, il = 0, ir = 0
    cdef double lx, ly, rx, ry, x
    if n == 0:
        raise ValueError("empty input")
    with nogil:
        lx = rx = xs[0]
        ly = ry = ys[0]
        for i in range(1, n):
            x = xs[i]
            if x < lx or (x == lx and ys[i] < ly):
                lx = x
                ly = ys[i]
                il = i
            if x > rx or (x == rx and ys[i] > ry):
                rx = x
                ry = ys[i]
                ir = i
    if counters is not None:
        counters[3] += n
    return il, ir


def extract(double[::1] xs, double[::1] ys, Py_ssize_t lo, Py_ssize_t hi, tuple edges,
            int d=8, bint wc=False, bint debug=False, long long[::1] counters=None,
            long long[::1] iters=None):
    """Sequential extraction on ``[lo, hi)``; cursors are relative to ``lo``."""
    cdef Layout L
    cdef State S
    cdef Edges E = make_edges(edges)
    cdef int code
    cdef long long it = 0
    if not (0 <= lo <= hi <= xs.shape[0]) or ys.shape[0] != xs.shape[0]:
        raise IndexError("range outside the coordinate arrays")
    L.base = lo
    L.T = 1
    L.b = 1
    L.t = 0
    L.n = hi - lo
    S.reads = S.writes = S.overhead = 0
    with nogil:
        code = run_extract(&xs[0] if xs.shape[0] else NULL, &ys[0] if ys.shape[0] else NULL,
                           &L, &E, d, wc, debug, &S, NULL, 0, &it)
    if iters is not None:
        iters[0] += it
    if code:
        _raise_code(code, it)
    add_counters(counters, &S)
    return _outcome(&S)


cdef Py_ssize_t owned_count(Py_ssize_t m, Py_ssize_t T, Py_ssize_t b, Py_ssize_t t) noexcept nogil:
    cdef Py_ssize_t nb = (m + b - 1) // b
    cdef Py_ssize_t owned, rem
    if t >= nb:
        return 0
    owned = (nb - t + T - 1) // T
    rem = m - (nb - 1) * b
    if (nb - 1) % T == t:
        return (owned - 1) * b + rem
    return owned * b


def worker_extract(double[::1] xs, double[::1] ys, Py_ssize_t a, Py_ssize_t z,
                   Py_ssize_t T, Py_ssize_t b, Py_ssize_t t, tuple edges, int d=8,
                   bint wc=False, bint debug=False, long long[::1] counters=None,
                   int[::1] owner_log=None, long long[::1] iters=None):
    """Extraction of worker ``t``'s block-cyclic share of ``[a, z)``.

    Undefined slots of the share are set to NaN. Returns
    ``(n_t, w_l, w_r, r1, r2)`` with global cursors.
    """
    cdef Layout L
    cdef State S
    cdef Edges E = make_edges(edges)
    cdef int code
    cdef long long it = 0
    cdef Py_ssize_t i, p, gl, gr
    cdef int* owner = NULL
    cdef double* X
    cdef double* Y
    if not (0 <= a <= z <= xs.shape[0]) or T < 1 or b < 1 or not (0 <= t < T):
        raise ValueError("invalid worker layout")
    L.base = a
    L.T = T
    L.b = b
    L.t = t
    L.n = owned_count(z - a, T, b, t)
    S.reads = S.writes = S.overhead = 0
    if owner_log is not None:
        owner = &owner_log[0]
    if L.n == 0:
        start = min(a + t * b, z)
        return 0, start, start, None, None
    X = &xs[0]
    Y = &ys[0]
    with nogil:
        code = run_extract(X, Y, &L, &E, d, wc, debug, &S, owner, <int>(t + 1), &it)
        if code == 0:
            for i in range(S.w_l, S.w_r):
                put(X, Y, &L, i, NAN, NAN, owner, <int>(t + 1))
            S.overhead += S.w_r - S.w_l
    if iters is not None:
        iters[0] += it
    if code:
        _raise_code(code, it)
    add_counters(counters, &S)
    gl = phys(&L, S.w_l) if S.w_l < L.n else phys(&L, L.n - 1) + 1
    gr = phys(&L, S.w_r) if S.w_r < L.n else phys(&L, L.n - 1) + 1
    r1 = (S.r1x, S.r1y) if S.has1 else None
    r2 = (S.r2x, S.r2y) if S.has2 else None
    return L.n, gl, gr, r1, r2


cdef inline int classify_slot(double x, double y, const Edges* E) noexcept nogil:
    if x != x:
        return 0
    if left_of(x, y, E.ax, E.ay, E.bx, E.by):
        return 1
    if left_of(x, y, E.cx, E.cy, E.dx, E.dy):
        return 2
    return -1


cdef inline void swap(double* X, double* Y, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef double t
    t = X[i]
    X[i] = X[j]
    X[j] = t
    t = Y[i]
    Y[i] = Y[j]
    Y[j] = t


def cleanup(double[::1] xs, double[::1] ys, Py_ssize_t wl_min, Py_ssize_t wl_max,
            Py_ssize_t wr_min, Py_ssize_t wr_max, tuple edges, long long[::1] counters=None):
    """Three-way compaction of the windows left by the parallel step.

    Returns ``(c1, c2)``: S1 now fills ``[wl_min, wl_min + c1)`` and S2 fills
    ``[wr_max - c2, wr_max)``; everything in between is NaN.
    """
    cdef Edges E = make_edges(edges)
    cdef double* X = &xs[0]
    cdef double* Y = &ys[0]
    cdef Py_ssize_t c1 = 0, c2 = 0, x, w, end1, beg2, bad = -1
    cdef long long ops = 0
    cdef int cls
    if not (0 <= wl_min <= wl_max and wr_min <= wr_max <= xs.shape[0] and wl_min <= wr_min):
        raise ValueError("inconsistent merge bounds")
    if wl_max < wr_min:
        end1 = wl_max
        beg2 = wr_min
    else:
        end1 = wr_max
        beg2 = wr_max
    with nogil:
        w = wl_min
        x = wl_min
        while x < wr_max:
            if x == end1:
                x = beg2
                if x >= wr_max:
                    break
            cls = classify_slot(X[x], Y[x], &E)
            ops += 1
            if cls < 0:
                bad = x
                break
            if cls == 1:
                if x != w:
                    swap(X, Y, x, w)
                    ops += 2
                w += 1
                c1 += 1
            x += 1
        if bad < 0:
            w = wr_max - 1
            x = wr_max - 1
            while x >= wl_min + c1:
                if x == beg2 - 1 and beg2 != end1:
                    x = end1 - 1
                    if x < wl_min + c1:
                        break
                cls = classify_slot(X[x], Y[x], &E)
                ops += 1
                if cls == 2:
                    if x != w:
                        swap(X, Y, x, w)
                        ops += 2
                    w -= 1
                    c2 += 1
                x -= 1
    if bad >= 0:
        raise ExtractionError(
            f"window slot {bad} holds ({xs[bad]!r}, {ys[bad]!r}), which is in neither subset"
        )
    if counters is not None:
        counters[4] += ops
    return c1, c2


def scalar_partition(double[::1] xs, double[::1] ys, Py_ssize_t lo, Py_ssize_t hi, tuple edges,
                     long long[::1] counters=None):
    """Branch-based scalar three-way partition (Dijkstra's flag) with fused search.

    Reference for timing comparisons; same outcome contract as ``extract``.
    """
    cdef Edges E = make_edges(edges)
    cdef Py_ssize_t low, mid, high
    cdef double ux, uy, r1x = 0, r1y = 0, r2x = 0, r2y = 0
    cdef bint has1 = 0, has2 = 0
    cdef double* X
    cdef double* Y
    if not (0 <= lo <= hi <= xs.shape[0]):
        raise IndexError("range outside the coordinate arrays")
    if hi == lo:
        return 0, 0, None, None
    X = &xs[0]
    Y = &ys[0]
    with nogil:
        low = lo
        mid = lo
        high = hi
        while mid < high:
            ux = X[mid]
            uy = Y[mid]
            if left_of(ux, uy, E.ax, E.ay, E.bx, E.by):
                if (not has1) or farther(ux, uy, r1x, r1y, E.ax, E.ay, E.bx, E.by):
                    r1x = ux
                    r1y = uy
                    has1 = 1
                swap(X, Y, low, mid)
                low += 1
                mid += 1
            elif left_of(ux, uy, E.cx, E.cy, E.dx, E.dy):
                if (not has2) or farther(ux, uy, r2x, r2y, E.cx, E.cy, E.dx, E.dy):
                    r2x = ux
                    r2y = uy
                    has2 = 1
                high -= 1
                swap(X, Y, mid, high)
            else:
                mid += 1
    if counters is not None:
        counters[0] += hi - lo
        counters[1] += (low - lo) + (hi - high)
    return (low - lo, high - lo,
            (r1x, r1y) if has1 else None,
            (r2x, r2y) if has2 else None)


def hull_chain(double[::1] xs, double[::1] ys, Py_ssize_t lo, Py_ssize_t hi, p, r, q,
               int d=8, bint wc=False, bint debug=False, long long[::1] counters=None,
               long long[::1] stats=None, bint trace=False):
    """Sequential in-place Quickhull recursion on ``[lo, hi)`` with an explicit stack.

    ``[lo, hi)`` holds the candidates for the edge pair ``p -> r -> q``
    (``r`` included). On return ``[lo, lo + h)`` holds the chain strictly
    between ``p`` and ``q`` in clockwise order. Returns ``(h, records)``
    where records are ``(|P|, |S1|, |S2|, |CH(S2)|)`` tuples when tracing.
    """
    cdef Frame* frames
    cdef Frame* f
    cdef Frame* nf
    cdef Py_ssize_t cap = 64, top = 0, ret = 0, n, h2
    cdef long long* rec = NULL
    cdef Py_ssize_t rec_n = 0, rec_cap = 0
    cdef long long* tmp
    cdef Layout L
    cdef State S
    cdef Edges E
    cdef int code = 0, oom = 0
    cdef long long it = 0
    cdef long long calls = 0, sP = 0, s1 = 0, s2 = 0, sch = 0, moves = 0
    cdef double* X
    cdef double* Y
    cdef Frame* grown
    if not (0 <= lo <= hi <= xs.shape[0]):
        raise IndexError("range outside the coordinate arrays")
    if hi - lo <= 1:
        return hi - lo, [] if trace else None
    X = &xs[0]
    Y = &ys[0]
    frames = <Frame*>malloc(cap * sizeof(Frame))
    if frames == NULL:
        raise MemoryError()
    f = &frames[0]
    f.lo = lo
    f.hi = hi
    f.px = p[0]
    f.py = p[1]
    f.rx = r[0]
    f.ry = r[1]
    f.qx = q[0]
    f.qy = q[1]
    f.stage = 0
    S.reads = S.writes = S.overhead = 0
    L.T = 1
    L.b = 1
    L.t = 0
    with nogil:
        while top >= 0:
            if top + 1 >= cap:
                grown = <Frame*>realloc(frames, 2 * cap * sizeof(Frame))
                if grown == NULL:
                    oom = 1
                    break
                frames = grown
                cap *= 2
            f = &frames[top]
            if f.stage == 0:
                n = f.hi - f.lo
                if n <= 1:
                    ret = n
                    top -= 1
                    continue
                L.base = f.lo
                L.n = n
                E.ax = f.px
                E.ay = f.py
                E.bx = f.rx
                E.by = f.ry
                E.cx = f.rx
                E.cy = f.ry
                E.dx = f.qx
                E.dy = f.qy
                code = run_extract(X, Y, &L, &E, d, wc, debug, &S, NULL, 0, &it)
                if code:
                    break
                f.k1 = S.w_l
                f.k2 = n - S.w_r
                f.wl = f.lo + S.w_l
                f.wr = f.lo + S.w_r
                f.r1x = S.r1x
                f.r1y = S.r1y
                f.r2x = S.r2x
                f.r2y = S.r2y
                f.stage = 1
                if f.k1 > 0:
                    nf = &frames[top + 1]
                    nf.lo = f.lo
                    nf.hi = f.wl
                    nf.px = f.px
                    nf.py = f.py
                    nf.rx = f.r1x
                    nf.ry = f.r1y
                    nf.qx = f.rx
                    nf.qy = f.ry
                    nf.stage = 0
                    top += 1
                else:
                    ret = 0
            elif f.stage == 1:
                f.h1 = ret
                X[f.lo + f.h1] = f.rx
                Y[f.lo + f.h1] = f.ry
                S.overhead += 1
                f.stage = 2
                if f.k2 > 0:
                    nf = &frames[top + 1]
                    nf.lo = f.wr
                    nf.hi = f.hi
                    nf.px = f.rx
                    nf.py = f.ry
                    nf.rx = f.r2x
                    nf.ry = f.r2y
                    nf.qx = f.qx
                    nf.qy = f.qy
                    nf.stage = 0
                    top += 1
                else:
                    ret = 0
            else:
                h2 = ret
                memmove(&X[f.lo + f.h1 + 1], &X[f.wr], h2 * sizeof(double))
                memmove(&Y[f.lo + f.h1 + 1], &Y[f.wr], h2 * sizeof(double))
                moves += h2
                calls += 1
                sP += f.hi - f.lo
                s1 += f.k1
                s2 += f.k2
                sch += h2
                if trace:
                    if rec_n + 4 > rec_cap:
                        rec_cap = 1024 if rec_cap == 0 else 2 * rec_cap
                        tmp = <long long*>realloc(rec, rec_cap * sizeof(long long))
                        if tmp == NULL:
                            oom = 1
                            break
                        rec = tmp
                    rec[rec_n] = f.hi - f.lo
                    rec[rec_n + 1] = f.k1
                    rec[rec_n + 2] = f.k2
                    rec[rec_n + 3] = h2
                    rec_n += 4
                ret = f.h1 + 1 + h2
                top -= 1
    free(frames)
    records = None
    if trace:
        records = [(rec[i], rec[i + 1], rec[i + 2], rec[i + 3]) for i in range(0, rec_n, 4)]
    free(rec)
    if oom:
        raise MemoryError("hull recursion stack")
    if code:
        _raise_code(code, it)
    if counters is not None:
        counters[0] += S.reads
        counters[1] += S.writes
        counters[2] += moves
        counters[4] += S.overhead
    if stats is not None:
        stats[0] += calls
        stats[1] += sP
        stats[2] += s1
        stats[3] += s2
        stats[4] += sch
    return ret, records
