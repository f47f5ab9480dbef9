/* AVX-512 extraction loop for eight lanes of doubles.
 *
 * Same arithmetic as the scalar predicates (no fused multiply-add, so the
 * build must not contract), same lane order, same tie rules. When the target
 * lacks AVX-512F, VQ_HAVE_AVX512 is 0 and the Cython loop is used instead.
 */
#ifndef VQHULL_SIMD_H
#define VQHULL_SIMD_H

#include <stddef.h>

#if defined(__AVX512F__)
#include <immintrin.h>
#define VQ_HAVE_AVX512 1

typedef struct {
    ptrdiff_t w_l, w_r;
    int has1, has2;
    double r1x, r1y, r2x, r2y;
    long long reads, writes;
} vq_result;

static inline __mmask8 vq_left(__m512d x, __m512d y, __m512d px, __m512d py,
                               __m512d qx, __m512d qy)
{
    __m512d lhs = _mm512_mul_pd(_mm512_sub_pd(px, x), _mm512_sub_pd(qy, y));
    __m512d rhs = _mm512_mul_pd(_mm512_sub_pd(py, y), _mm512_sub_pd(qx, x));
    return _mm512_cmp_pd_mask(lhs, rhs, _CMP_GT_OQ);
}

/* farthest candidate among the lanes of m, incumbent kept on ties */
static inline void vq_farthest(const double *ux, const double *uy, __mmask8 m,
                               double px, double py, double qx, double qy,
                               __m512d x, __m512d y, int *has, double *rx, double *ry)
{
    if (!m)
        return;
    if (*has) {
        /* fast reject: no lane beats the current incumbent */
        __m512d ex = _mm512_set1_pd(qx - px), ey = _mm512_set1_pd(qy - py);
        __m512d lhs = _mm512_mul_pd(ey, _mm512_sub_pd(x, _mm512_set1_pd(*rx)));
        __m512d rhs = _mm512_mul_pd(ex, _mm512_sub_pd(y, _mm512_set1_pd(*ry)));
        if (!_mm512_mask_cmp_pd_mask(m, lhs, rhs, _CMP_LT_OQ))
            return;
    }
    unsigned bits = m;
    while (bits) {
        int i = __builtin_ctz(bits);
        bits &= bits - 1;
        if (!*has || (qy - py) * (ux[i] - *rx) < (qx - px) * (uy[i] - *ry)) {
            *rx = ux[i];
            *ry = uy[i];
            *has = 1;
        }
    }
}

static inline void vq_block(double *X, double *Y, const double *ux, const double *uy,
                            const double *e, int wide, vq_result *s)
{
    __m512d x = _mm512_loadu_pd(ux), y = _mm512_loadu_pd(uy);
    __mmask8 a = vq_left(x, y, _mm512_set1_pd(e[0]), _mm512_set1_pd(e[1]),
                         _mm512_set1_pd(e[2]), _mm512_set1_pd(e[3]));
    __mmask8 b = vq_left(x, y, _mm512_set1_pd(e[4]), _mm512_set1_pd(e[5]),
                         _mm512_set1_pd(e[6]), _mm512_set1_pd(e[7]));
    b &= (__mmask8)~a;
    int k1 = __builtin_popcount(a), k2 = __builtin_popcount(b);
    s->reads += 8;
    s->writes += k1 + k2;
    vq_farthest(ux, uy, a, e[0], e[1], e[2], e[3], x, y, &s->has1, &s->r1x, &s->r1y);
    vq_farthest(ux, uy, b, e[4], e[5], e[6], e[7], x, y, &s->has2, &s->r2x, &s->r2y);
    if (wide) {
        /* full-width stores; the unselected tail lands in the free gap */
        _mm512_storeu_pd(X + s->w_l, _mm512_maskz_compress_pd(a, x));
        _mm512_storeu_pd(Y + s->w_l, _mm512_maskz_compress_pd(a, y));
        __m512i up = _mm512_set1_epi64(8 - k2);
        __m512i lane = _mm512_setr_epi64(0, 1, 2, 3, 4, 5, 6, 7);
        __m512i idx = _mm512_sub_epi64(lane, up);
        __m512d cx = _mm512_maskz_compress_pd(b, x), cy = _mm512_maskz_compress_pd(b, y);
        _mm512_storeu_pd(X + s->w_r - 8, _mm512_permutexvar_pd(idx, cx));
        _mm512_storeu_pd(Y + s->w_r - 8, _mm512_permutexvar_pd(idx, cy));
    } else {
        _mm512_mask_compressstoreu_pd(X + s->w_l, a, x);
        _mm512_mask_compressstoreu_pd(Y + s->w_l, a, y);
        _mm512_mask_compressstoreu_pd(X + s->w_r - k2, b, x);
        _mm512_mask_compressstoreu_pd(Y + s->w_r - k2, b, y);
    }
    s->w_l += k1;
    s->w_r -= k2;
}

/* whole two-sided pass over contiguous X[0:n], Y[0:n]; requires n >= 16 */
static inline void vq_extract8(double *X, double *Y, ptrdiff_t n, const double *e,
                               vq_result *s)
{
    double blx[8], bly[8], brx[8], bry[8], ux[8], uy[8];
    ptrdiff_t r_l = 8, r_r = n - 8;
    int i;
    for (i = 0; i < 8; i++) {
        blx[i] = X[i];
        bly[i] = Y[i];
        brx[i] = X[n - 8 + i];
        bry[i] = Y[n - 8 + i];
    }
    s->w_l = 0;
    s->w_r = n;
    s->has1 = s->has2 = 0;
    s->r1x = s->r1y = s->r2x = s->r2y = 0.0;
    s->reads = s->writes = 0;
    while (r_r - r_l >= 8) {
        ptrdiff_t start;
        if (r_l - s->w_l <= s->w_r - r_r) {
            start = r_l;
            r_l += 8;
        } else {
            r_r -= 8;
            start = r_r;
        }
        _mm512_storeu_pd(ux, _mm512_loadu_pd(X + start));
        _mm512_storeu_pd(uy, _mm512_loadu_pd(Y + start));
        vq_block(X, Y, ux, uy, e, 1, s);
    }
    if (r_l < r_r) {
        /* trailing partial block, lanes past m masked off */
        int m = (int)(r_r - r_l);
        ptrdiff_t start;
        if (r_l - s->w_l <= s->w_r - r_r) {
            start = r_l;
        } else {
            start = r_r - m;
        }
        __mmask8 live = (__mmask8)((1u << m) - 1);
        _mm512_storeu_pd(ux, _mm512_maskz_loadu_pd(live, X + start));
        _mm512_storeu_pd(uy, _mm512_maskz_loadu_pd(live, Y + start));
        __m512d x = _mm512_loadu_pd(ux), y = _mm512_loadu_pd(uy);
        __mmask8 a = live & vq_left(x, y, _mm512_set1_pd(e[0]), _mm512_set1_pd(e[1]),
                                    _mm512_set1_pd(e[2]), _mm512_set1_pd(e[3]));
        __mmask8 b = live & (__mmask8)~a & vq_left(x, y, _mm512_set1_pd(e[4]),
                                                   _mm512_set1_pd(e[5]), _mm512_set1_pd(e[6]),
                                                   _mm512_set1_pd(e[7]));
        int k1 = __builtin_popcount(a), k2 = __builtin_popcount(b);
        s->reads += m;
        s->writes += k1 + k2;
        vq_farthest(ux, uy, a, e[0], e[1], e[2], e[3], x, y, &s->has1, &s->r1x, &s->r1y);
        vq_farthest(ux, uy, b, e[4], e[5], e[6], e[7], x, y, &s->has2, &s->r2x, &s->r2y);
        _mm512_mask_compressstoreu_pd(X + s->w_l, a, x);
        _mm512_mask_compressstoreu_pd(Y + s->w_l, a, y);
        _mm512_mask_compressstoreu_pd(X + s->w_r - k2, b, x);
        _mm512_mask_compressstoreu_pd(Y + s->w_r - k2, b, y);
        s->w_l += k1;
        s->w_r -= k2;
    }
    vq_block(X, Y, blx, bly, e, 0, s);
    vq_block(X, Y, brx, bry, e, 0, s);
}

#else
#define VQ_HAVE_AVX512 0

typedef struct {
    ptrdiff_t w_l, w_r;
    int has1, has2;
    double r1x, r1y, r2x, r2y;
    long long reads, writes;
} vq_result;

static inline void vq_extract8(double *X, double *Y, ptrdiff_t n, const double *e,
                               vq_result *s)
{
    (void)X; (void)Y; (void)n; (void)e; (void)s;
}
#endif

#endif
