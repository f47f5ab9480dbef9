"""Pure-Python kernels, selected when the compiled extension is unavailable.

Every function mirrors its counterpart in ``_kernels.pyx`` and produces the
same array contents, cursors and farthest points. The write-combining flag
is accepted and ignored here: staged and direct writes are observationally
identical.
"""
from __future__ import annotations

import math

from .errors import ExtractionError, InvariantViolation

NAN = math.nan

def _left(ux, uy, px, py, qx, qy):
    return (px - ux) * (qy - uy) > (py - uy) * (qx - ux)


def _farther(ux, uy, vx, vy, px, py, qx, qy):
    return (qy - py) * (ux - vx) < (qx - px) * (uy - vy)


def compress_select(values, mask, d):
    """Scalar-loop lane compression: selected lanes first, order preserved."""
    if d < 1 or d > 8 or mask >> d:
        raise ValueError("mask must fit in d <= 8 lanes")
    out = []
    for i in range(d):
        if (mask >> i) & 1:
            out.append(values[i])
    return len(out), out


def classify_block(xs, ys, edges):
    ax, ay, bx, by, cx, cy, dx, dy = edges
    mA = mB = 0
    for i, (x, y) in enumerate(zip(xs, ys)):
        a = _left(x, y, ax, ay, bx, by)
        if a:
            mA |= 1 << i
        elif _left(x, y, cx, cy, dx, dy):
            mB |= 1 << i
    return mA, mB


def extremes(xs, ys, counters=None):
    n = len(xs)
    if n == 0:
        raise ValueError("empty input")
    X = xs.tolist()
    Y = ys.tolist()
    il = ir = 0
    lx = rx = X[0]
    ly = ry = Y[0]
    for i in range(1, n):
        x = X[i]
        if x < lx or (x == lx and Y[i] < ly):
            lx, ly, il = x, Y[i], i
        if x > rx or (x == rx and Y[i] > ry):
            rx, ry, ir = x, Y[i], i
    if counters is not None:
        counters[3] += n
    return il, ir


def _phys_fn(base, T, b, t):
    if T == 1:
        return lambda i: base + i

    def phys(i):
        blk = i // b
        return base + (blk * T + t) * b + (i - blk * b)

    return phys


class _State:
    __slots__ = ("w_l", "w_r", "has1", "has2", "r1x", "r1y", "r2x", "r2y",
                 "reads", "writes", "overhead")

    def __init__(self, n):
        self.w_l = 0
        self.w_r = n
        self.has1 = self.has2 = False
        self.r1x = self.r1y = self.r2x = self.r2y = 0.0
        self.reads = self.writes = self.overhead = 0

    def outcome(self):
        return (
            self.w_l, self.w_r,
            (self.r1x, self.r1y) if self.has1 else None,
            (self.r2x, self.r2y) if self.has2 else None,
        )


def _run_extract(X, Y, phys, n, E, d, debug, S, owner, oid, iters):
    ax, ay, bx, by, cx, cy, dx, dy = E

    def put(li, x, y):
        p = phys(li)
        X[p] = x
        Y[p] = y
        if owner is not None:
            owner[p] = oid

    if n < 2 * d:
        pts = [(X[phys(i)], Y[phys(i)]) for i in range(n)]
        S.reads += n
        for ux, uy in pts:
            if _left(ux, uy, ax, ay, bx, by):
                if not S.has1 or _farther(ux, uy, S.r1x, S.r1y, ax, ay, bx, by):
                    S.r1x, S.r1y, S.has1 = ux, uy, True
                put(S.w_l, ux, uy)
                S.w_l += 1
                S.writes += 1
            elif _left(ux, uy, cx, cy, dx, dy):
                if not S.has2 or _farther(ux, uy, S.r2x, S.r2y, cx, cy, dx, dy):
                    S.r2x, S.r2y, S.has2 = ux, uy, True
                S.w_r -= 1
                put(S.w_r, ux, uy)
                S.writes += 1
        return 0

    def block(rx, ry):
        m = len(rx)
        s1 = []
        s2 = []
        for i in range(m):
            ux = rx[i]
            uy = ry[i]
            if _left(ux, uy, ax, ay, bx, by):
                s1.append(i)
                if not S.has1 or _farther(ux, uy, S.r1x, S.r1y, ax, ay, bx, by):
                    S.r1x, S.r1y, S.has1 = ux, uy, True
            elif _left(ux, uy, cx, cy, dx, dy):
                s2.append(i)
                if not S.has2 or _farther(ux, uy, S.r2x, S.r2y, cx, cy, dx, dy):
                    S.r2x, S.r2y, S.has2 = ux, uy, True
        S.reads += m
        S.writes += len(s1) + len(s2)
        for j, i in enumerate(s1):
            put(S.w_l + j, rx[i], ry[i])
        S.w_l += len(s1)
        base = S.w_r - len(s2)
        for j, i in enumerate(s2):
            put(base + j, rx[i], ry[i])
        S.w_r = base

    snap = None
    if debug:
        snap = [(X[phys(i)], Y[phys(i)]) for i in range(n)]

    bufl = ([X[phys(i)] for i in range(d)], [Y[phys(i)] for i in range(d)])
    bufr = ([X[phys(n - d + i)] for i in range(d)], [Y[phys(n - d + i)] for i in range(d)])
    r_l = d
    r_r = n - d

    def check():
        for i in range(S.w_l):
            p = phys(i)
            if not _left(X[p], Y[p], ax, ay, bx, by):
                return 1
        for i in range(S.w_r, n):
            p = phys(i)
            if _left(X[p], Y[p], ax, ay, bx, by) or not _left(X[p], Y[p], cx, cy, dx, dy):
                return 2
        if not (r_l - S.w_l >= d or S.w_r - r_r >= d):
            return 3
        for i in range(r_l, r_r):
            p = phys(i)
            if not (X[p] == snap[i][0] and Y[p] == snap[i][1]):
                return 4
        for i in range(d):
            if not (bufl[0][i] == snap[i][0] and bufl[1][i] == snap[i][1]):
                return 4
            if not (bufr[0][i] == snap[n - d + i][0] and bufr[1][i] == snap[n - d + i][1]):
                return 4
        return 0

    while r_l < r_r:
        if debug:
            code = check()
            iters[0] += 1
            if code:
                return code
        m = d if r_r - r_l >= d else r_r - r_l
        if r_l - S.w_l <= S.w_r - r_r:
            start = r_l
            r_l += m
        else:
            r_r -= m
            start = r_r
        idx = [phys(start + i) for i in range(m)]
        block([X[p] for p in idx], [Y[p] for p in idx])

    if debug:
        code = check()
        iters[0] += 1
        if code:
            return code

    block(*bufl)
    block(*bufr)
    return 0


def _raise_code(code, it):
    raise InvariantViolation(f"subset-extraction invariant {code} violated at loop iteration {it}")


def _add(counters, S):
    if counters is not None:
        counters[0] += S.reads
        counters[1] += S.writes
        counters[4] += S.overhead


def _views(xs, ys):
    return memoryview(xs).cast("B").cast("d"), memoryview(ys).cast("B").cast("d")


def extract(xs, ys, lo, hi, edges, d=8, wc=False, debug=False, counters=None, iters=None):
    """Sequential extraction on ``[lo, hi)``; cursors are relative to ``lo``."""
    if not (0 <= lo <= hi <= len(xs)) or len(ys) != len(xs):
        raise IndexError("range outside the coordinate arrays")
    X, Y = _views(xs, ys)
    S = _State(hi - lo)
    it = [0]
    code = _run_extract(X, Y, _phys_fn(lo, 1, 1, 0), hi - lo, edges, d, debug, S, None, 0, it)
    if iters is not None:
        iters[0] += it[0]
    if code:
        _raise_code(code, it[0])
    _add(counters, S)
    return S.outcome()


def owned_count(m, T, b, t):
    nb = -(-m // b)
    if t >= nb:
        return 0
    owned = (nb - t + T - 1) // T
    rem = m - (nb - 1) * b
    if (nb - 1) % T == t:
        return (owned - 1) * b + rem
    return owned * b


def worker_extract(xs, ys, a, z, T, b, t, edges, d=8, wc=False, debug=False, counters=None,
                   owner_log=None, iters=None):
    """Extraction of worker ``t``'s block-cyclic share of ``[a, z)``.

    Undefined slots of the share are set to NaN. Returns
    ``(n_t, w_l, w_r, r1, r2)`` with global cursors.
    """
    if not (0 <= a <= z <= len(xs)) or T < 1 or b < 1 or not (0 <= t < T):
        raise ValueError("invalid worker layout")
    n = owned_count(z - a, T, b, t)
    if n == 0:
        start = min(a + t * b, z)
        return 0, start, start, None, None
    X, Y = _views(xs, ys)
    phys = _phys_fn(a, T, b, t)
    S = _State(n)
    it = [0]
    code = _run_extract(X, Y, phys, n, edges, d, debug, S, owner_log, t + 1, it)
    if iters is not None:
        iters[0] += it[0]
    if code:
        _raise_code(code, it[0])
    for i in range(S.w_l, S.w_r):
        p = phys(i)
        X[p] = NAN
        Y[p] = NAN
        if owner_log is not None:
            owner_log[p] = t + 1
    S.overhead += S.w_r - S.w_l
    _add(counters, S)
    gl = phys(S.w_l) if S.w_l < n else phys(n - 1) + 1
    gr = phys(S.w_r) if S.w_r < n else phys(n - 1) + 1
    _, _, r1, r2 = S.outcome()
    return n, gl, gr, r1, r2


def cleanup(xs, ys, wl_min, wl_max, wr_min, wr_max, edges, counters=None):
    """Three-way compaction of the windows left by the parallel step.

    Returns ``(c1, c2)``: S1 now fills ``[wl_min, wl_min + c1)`` and S2 fills
    ``[wr_max - c2, wr_max)``; everything in between is NaN.
    """
    if not (0 <= wl_min <= wl_max and wr_min <= wr_max <= len(xs) and wl_min <= wr_min):
        raise ValueError("inconsistent merge bounds")
    ax, ay, bx, by, cx, cy, dx, dy = edges
    X, Y = _views(xs, ys)

    def cls(i):
        x = X[i]
        y = Y[i]
        if x != x:
            return 0
        if _left(x, y, ax, ay, bx, by):
            return 1
        if _left(x, y, cx, cy, dx, dy):
            return 2
        return -1

    def swap(i, j):
        X[i], X[j] = X[j], X[i]
        Y[i], Y[j] = Y[j], Y[i]

    if wl_max < wr_min:
        positions = list(range(wl_min, wl_max)) + list(range(wr_min, wr_max))
    else:
        positions = list(range(wl_min, wr_max))
    ops = 0
    c1 = 0
    w = wl_min
    for x in positions:
        c = cls(x)
        ops += 1
        if c < 0:
            raise ExtractionError(
                f"window slot {x} holds ({X[x]!r}, {Y[x]!r}), which is in neither subset"
            )
        if c == 1:
            if x != w:
                swap(x, w)
                ops += 2
            w += 1
            c1 += 1
    c2 = 0
    w = wr_max - 1
    for x in reversed(positions):
        if x < wl_min + c1:
            break
        ops += 1
        if cls(x) == 2:
            if x != w:
                swap(x, w)
                ops += 2
            w -= 1
            c2 += 1
    if counters is not None:
        counters[4] += ops
    return c1, c2


def scalar_partition(xs, ys, lo, hi, edges, counters=None):
    """Branch-based scalar three-way partition (Dijkstra's flag) with fused search."""
    if not (0 <= lo <= hi <= len(xs)):
        raise IndexError("range outside the coordinate arrays")
    ax, ay, bx, by, cx, cy, dx, dy = edges
    X, Y = _views(xs, ys)
    has1 = has2 = False
    r1x = r1y = r2x = r2y = 0.0
    low = mid = lo
    high = hi
    while mid < high:
        ux = X[mid]
        uy = Y[mid]
        if _left(ux, uy, ax, ay, bx, by):
            if not has1 or _farther(ux, uy, r1x, r1y, ax, ay, bx, by):
                r1x, r1y, has1 = ux, uy, True
            X[low], X[mid] = X[mid], X[low]
            Y[low], Y[mid] = Y[mid], Y[low]
            low += 1
            mid += 1
        elif _left(ux, uy, cx, cy, dx, dy):
            if not has2 or _farther(ux, uy, r2x, r2y, cx, cy, dx, dy):
                r2x, r2y, has2 = ux, uy, True
            high -= 1
            X[high], X[mid] = X[mid], X[high]
            Y[high], Y[mid] = Y[mid], Y[high]
        else:
            mid += 1
    if counters is not None:
        counters[0] += hi - lo
        counters[1] += (low - lo) + (hi - high)
    return (low - lo, high - lo,
            (r1x, r1y) if has1 else None,
            (r2x, r2y) if has2 else None)


def hull_chain(xs, ys, lo, hi, p, r, q, d=8, wc=False, debug=False, counters=None,
               stats=None, trace=False):
    """Sequential in-place Quickhull recursion on ``[lo, hi)`` with an explicit stack.

    Returns ``(h, records)``; the chain strictly between ``p`` and ``q`` is
    left in ``[lo, lo + h)``.
    """
    if not (0 <= lo <= hi <= len(xs)):
        raise IndexError("range outside the coordinate arrays")
    if hi - lo <= 1:
        return hi - lo, [] if trace else None
    X, Y = _views(xs, ys)
    records = [] if trace else None
    S = _State(0)
    it = [0]
    calls = sP = s1 = s2 = sch = moves = 0
    # frame: [lo, hi, p, r, q, stage, wl, wr, k1, k2, r1, r2, h1]
    stack = [[lo, hi, tuple(p), tuple(r), tuple(q), 0, 0, 0, 0, 0, None, None, 0]]
    ret = 0
    while stack:
        f = stack[-1]
        flo, fhi, fp, fr, fq, stage = f[0], f[1], f[2], f[3], f[4], f[5]
        if stage == 0:
            n = fhi - flo
            if n <= 1:
                ret = n
                stack.pop()
                continue
            S.w_l, S.w_r = 0, n
            S.has1 = S.has2 = False
            S.r1x = S.r1y = S.r2x = S.r2y = 0.0
            E = (fp[0], fp[1], fr[0], fr[1], fr[0], fr[1], fq[0], fq[1])
            code = _run_extract(X, Y, _phys_fn(flo, 1, 1, 0), n, E, d, debug, S, None, 0, it)
            if code:
                _raise_code(code, it[0])
            f[6] = flo + S.w_l
            f[7] = flo + S.w_r
            f[8] = S.w_l
            f[9] = n - S.w_r
            f[10] = (S.r1x, S.r1y)
            f[11] = (S.r2x, S.r2y)
            f[5] = 1
            if f[8] > 0:
                stack.append([flo, f[6], fp, f[10], fr, 0, 0, 0, 0, 0, None, None, 0])
            else:
                ret = 0
        elif stage == 1:
            f[12] = ret
            X[flo + ret] = fr[0]
            Y[flo + ret] = fr[1]
            S.overhead += 1
            f[5] = 2
            if f[9] > 0:
                stack.append([f[7], fhi, fr, f[11], fq, 0, 0, 0, 0, 0, None, None, 0])
            else:
                ret = 0
        else:
            h1 = f[12]
            h2 = ret
            src = f[7]
            dst = flo + h1 + 1
            xs[dst:dst + h2] = xs[src:src + h2].copy()
            ys[dst:dst + h2] = ys[src:src + h2].copy()
            moves += h2
            calls += 1
            sP += fhi - flo
            s1 += f[8]
            s2 += f[9]
            sch += h2
            if trace:
                records.append((fhi - flo, f[8], f[9], h2))
            ret = h1 + 1 + h2
            stack.pop()
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
