"""Numba kernels for the special-function series.

The double series is organized around per-signature coefficient tables
holding log-magnitudes (double-double) and signs of the pure-gamma part of
each (m, n) term.  Tables depend only on the twelve signature parameters,
not on the series arguments, so they are built once and reused across
modes, times and evaluation points.

Status codes returned by the evaluators:
  0  converged
  1  inner (m) extent of the table too small
  2  outer (n) extent of the table too small
  3  term budget exhausted before decay
  4  overflow in a term
  5  numerator gamma pole (invalid signature/term)
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._dd import (
    _two_prod,
    dd_add,
    dd_add_d,
    dd_div_d,
    dd_exp,
    dd_lgamma_sign,
    dd_log_d,
    dd_mul,
    dd_mul_d,
    dd_sub,
)

_JIT = dict(cache=True, fastmath=False)

OK = 0
NEED_M = 1
NEED_N = 2
MAXTERMS = 3
OVERFLOW = 4
NUMPOLE = 5

# double-double unit roundoff, used in the honest error estimate
_DD_EPS = 1.232595164407831e-32


@njit(**_JIT)
def _lin3(c, s1, m, s2, n):
    """c + s1*m + s2*n as a double-double (m, n exact small integers)."""
    h1, l1 = _two_prod(s1, m)
    h2, l2 = _two_prod(s2, n)
    rh, rl = dd_add(h1, l1, h2, l2)
    return dd_add_d(rh, rl, c)


@njit(**_JIT)
def build_table(g1, a1, b1, g2, a2, d1, a3, b2, d2, a4, d3, b3, M, N):
    """Log-magnitude/sign table of the gamma part of each (m, n) term.

    term(m,n) = G(g1+a1 m+b1 n) G(g2+a2 m) /
                (G(g1) G(g2) G(d1+a3 m+b2 n) G(d2+a4 m) G(d3+b3 n))

    Returns (Lhi, Llo, sign); sign 0 marks a denominator pole (the term is
    exactly zero), sign 127 marks a numerator pole (evaluation must fail).
    """
    Lhi = np.zeros((M, N))
    Llo = np.zeros((M, N))
    sgn = np.zeros((M, N), dtype=np.int8)
    lg1h, lg1l, s1 = dd_lgamma_sign(g1, 0.0)
    lg2h, lg2l, s2 = dd_lgamma_sign(g2, 0.0)
    if s1 == 0 or s2 == 0:
        sgn[:, :] = 127
        return Lhi, Llo, sgn
    basen = s1 * s2
    for m in range(M):
        fm = float(m)
        n2h, n2l = _lin3(g2, a2, fm, 0.0, 0.0)
        ln2h, ln2l, sn2 = dd_lgamma_sign(n2h, n2l)
        d2h, d2l = _lin3(d2, a4, fm, 0.0, 0.0)
        ld2h, ld2l, sd2 = dd_lgamma_sign(d2h, d2l)
        for n in range(N):
            fn = float(n)
            n1h, n1l = _lin3(g1, a1, fm, b1, fn)
            ln1h, ln1l, sn1 = dd_lgamma_sign(n1h, n1l)
            if sn1 == 0 or sn2 == 0:
                sgn[m, n] = 127
                continue
            d1h, d1l = _lin3(d1, a3, fm, b2, fn)
            ld1h, ld1l, sd1 = dd_lgamma_sign(d1h, d1l)
            d3h, d3l = _lin3(d3, 0.0, 0.0, b3, fn)
            ld3h, ld3l, sd3 = dd_lgamma_sign(d3h, d3l)
            if sd1 == 0 or sd2 == 0 or sd3 == 0:
                sgn[m, n] = 0
                continue
            th, tl = dd_add(ln1h, ln1l, ln2h, ln2l)
            th, tl = dd_sub(th, tl, lg1h, lg1l)
            th, tl = dd_sub(th, tl, lg2h, lg2l)
            th, tl = dd_sub(th, tl, ld1h, ld1l)
            th, tl = dd_sub(th, tl, ld2h, ld2l)
            th, tl = dd_sub(th, tl, ld3h, ld3l)
            Lhi[m, n] = th
            Llo[m, n] = tl
            sgn[m, n] = basen * sn1 * sn2 * sd1 * sd2 * sd3
    return Lhi, Llo, sgn


@njit(**_JIT)
def eval_table(Lhi, Llo, sgn, x, y, abs_tol, max_terms):
    """Sum the double series with arguments (x, y) over a prepared table.

    Row-major over n, inner sum over m; an inner sum ends after three
    consecutive term ratios below 1/2 once the geometric tail bound drops
    under the per-row budget, and the row loop ends under the same rule
    applied to row sums.

    Returns (hi, lo, est_abs_err, max_term, terms_used, status).
    """
    M, N = Lhi.shape
    row_tol = abs_tol / (2.0 * N)
    lxh, lxl = 0.0, 0.0
    sx = 0
    if x > 0.0:
        lxh, lxl = dd_log_d(x)
        sx = 1
    elif x < 0.0:
        lxh, lxl = dd_log_d(-x)
        sx = -1
    lyh, lyl = 0.0, 0.0
    sy = 0
    if y > 0.0:
        lyh, lyl = dd_log_d(y)
        sy = 1
    elif y < 0.0:
        lyh, lyl = dd_log_d(-y)
        sy = -1

    sh, sl = 0.0, 0.0
    est = 0.0
    max_term = 0.0
    terms = 0
    row_prev = -1.0
    row_streak = 0
    syn = 1
    for n in range(N):
        if n > 0:
            if sy == 0:
                return sh, sl, est + _DD_EPS * max_term * (terms + 4.0), \
                    max_term, terms, OK
            syn = -syn if sy < 0 else syn
        # n-dependent part of the log-magnitude
        enh, enl = dd_mul_d(lyh, lyl, float(n))
        rsh, rsl = 0.0, 0.0
        row_max = 0.0
        prev = -1.0
        streak = 0
        row_done = False
        sxm = 1
        for m in range(M):
            if m > 0:
                if sx == 0:
                    row_done = True
                    break
                sxm = -sxm if sx < 0 else sxm
            s = sgn[m, n]
            if s == 127:
                return sh, sl, est, max_term, terms, NUMPOLE
            if s == 0:
                prev = -1.0
                streak = 0
                continue
            eh, el = dd_mul_d(lxh, lxl, float(m))
            eh, el = dd_add(eh, el, enh, enl)
            eh, el = dd_add(eh, el, Lhi[m, n], Llo[m, n])
            th, tl = dd_exp(eh, el)
            if th == np.inf:
                return sh, sl, est, max_term, terms, OVERFLOW
            if s * sxm * syn < 0:
                th, tl = -th, -tl
            rsh, rsl = dd_add(rsh, rsl, th, tl)
            terms += 1
            mag = abs(th)
            if mag > row_max:
                row_max = mag
            if terms >= max_terms:
                return sh, sl, est, max_term, terms, MAXTERMS
            if prev > 0.0:
                ratio = mag / prev
                if ratio < 0.5:
                    streak += 1
                    if streak >= 3:
                        tail = mag * ratio / (1.0 - ratio)
                        if tail < row_tol or mag == 0.0:
                            est += tail
                            row_done = True
                            break
                else:
                    streak = 0
            if mag == 0.0 and m > 2:
                row_done = True
                break
            prev = mag
        if not row_done:
            return sh, sl, est, max_term, terms, NEED_M
        sh, sl = dd_add(sh, sl, rsh, rsl)
        if row_max > max_term:
            max_term = row_max
        rmag = abs(rsh) + row_max * _DD_EPS
        if n > 0 and row_prev > 0.0:
            rratio = rmag / row_prev
            if rratio < 0.5:
                row_streak += 1
                if row_streak >= 3:
                    rtail = rmag * rratio / (1.0 - rratio)
                    if rtail < abs_tol / 2.0 or rmag == 0.0:
                        est += rtail
                        return sh, sl, est + _DD_EPS * max_term * (terms + 4.0), \
                            max_term, terms, OK
            else:
                row_streak = 0
        row_prev = rmag if rmag > 0.0 else row_prev
    if sy == 0:
        return sh, sl, est + _DD_EPS * max_term * (terms + 4.0), max_term, terms, OK
    return sh, sl, est, max_term, terms, NEED_N


@njit(**_JIT)
def eval_temporal(Lhi, Llo, sgn, lam, dlt, beta, alpha, q, w, d, abs_tol,
                  max_terms):
    """d-th derivative (d in 0..2) of  w^q * e(...; lam w^beta, dlt w^alpha)
    summed termwise:  sum c_mn lam^m dlt^n ff(e,d) w^(e-d),
    e = q + beta m + alpha n.

    Requires w > 0.  Same return contract as eval_table.
    """
    M, N = Lhi.shape
    row_tol = abs_tol / (2.0 * N)
    lwh, lwl = dd_log_d(w)
    llh, lll = 0.0, 0.0
    sx = 0
    if lam > 0.0:
        llh, lll = dd_log_d(lam)
        sx = 1
    elif lam < 0.0:
        llh, lll = dd_log_d(-lam)
        sx = -1
    ldh, ldl = 0.0, 0.0
    sy = 0
    if dlt > 0.0:
        ldh, ldl = dd_log_d(dlt)
        sy = 1
    elif dlt < 0.0:
        ldh, ldl = dd_log_d(-dlt)
        sy = -1

    sh, sl = 0.0, 0.0
    est = 0.0
    max_term = 0.0
    terms = 0
    row_prev = -1.0
    row_streak = 0
    syn = 1
    for n in range(N):
        if n > 0:
            if sy == 0:
                return sh, sl, est + _DD_EPS * max_term * (terms + 4.0), \
                    max_term, terms, OK
            syn = -syn if sy < 0 else syn
        nlh, nll = dd_mul_d(ldh, ldl, float(n))
        rsh, rsl = 0.0, 0.0
        row_max = 0.0
        prev = -1.0
        streak = 0
        row_done = False
        sxm = 1
        for m in range(M):
            if m > 0:
                if sx == 0:
                    row_done = True
                    break
                sxm = -sxm if sx < 0 else sxm
            s = sgn[m, n]
            if s == 127:
                return sh, sl, est, max_term, terms, NUMPOLE
            if s == 0:
                prev = -1.0
                streak = 0
                continue
            # exponent e = q + beta m + alpha n, exactly in double-double
            e1h, e1l = _two_prod(beta, float(m))
            e2h, e2l = _two_prod(alpha, float(n))
            eh, el = dd_add(e1h, e1l, e2h, e2l)
            eh, el = dd_add_d(eh, el, q)
            # falling factorial e (e-1) ... (e-d+1)
            fh, fl = 1.0, 0.0
            zero_term = False
            for j in range(d):
                gh, gl = dd_add_d(eh, el, -float(j))
                if gh == 0.0 and gl == 0.0:
                    zero_term = True
                    break
                fh, fl = dd_mul(fh, fl, gh, gl)
            if zero_term:
                prev = -1.0
                streak = 0
                continue
            # log magnitude: L + m log|lam| + n log|dlt| + (e - d) log w
            xh, xl = dd_mul_d(llh, lll, float(m))
            xh, xl = dd_add(xh, xl, nlh, nll)
            xh, xl = dd_add(xh, xl, Lhi[m, n], Llo[m, n])
            peh, pel = dd_add_d(eh, el, -float(d))
            wh_, wl_ = dd_mul(peh, pel, lwh, lwl)
            xh, xl = dd_add(xh, xl, wh_, wl_)
            th, tl = dd_exp(xh, xl)
            if th == np.inf:
                return sh, sl, est, max_term, terms, OVERFLOW
            th, tl = dd_mul(th, tl, fh, fl)
            if s * sxm * syn < 0:
                th, tl = -th, -tl
            rsh, rsl = dd_add(rsh, rsl, th, tl)
            terms += 1
            mag = abs(th)
            if mag > row_max:
                row_max = mag
            if terms >= max_terms:
                return sh, sl, est, max_term, terms, MAXTERMS
            if prev > 0.0:
                ratio = mag / prev
                if ratio < 0.5:
                    streak += 1
                    if streak >= 3:
                        tail = mag * ratio / (1.0 - ratio)
                        if tail < row_tol or mag == 0.0:
                            est += tail
                            row_done = True
                            break
                else:
                    streak = 0
            if mag == 0.0 and m > 2:
                row_done = True
                break
            prev = mag
        if not row_done:
            return sh, sl, est, max_term, terms, NEED_M
        sh, sl = dd_add(sh, sl, rsh, rsl)
        if row_max > max_term:
            max_term = row_max
        rmag = abs(rsh) + row_max * _DD_EPS
        if n > 0 and row_prev > 0.0:
            rratio = rmag / row_prev
            if rratio < 0.5:
                row_streak += 1
                if row_streak >= 3:
                    rtail = rmag * rratio / (1.0 - rratio)
                    if rtail < abs_tol / 2.0 or rmag == 0.0:
                        est += rtail
                        return sh, sl, est + _DD_EPS * max_term * (terms + 4.0), \
                            max_term, terms, OK
            else:
                row_streak = 0
        row_prev = rmag if rmag > 0.0 else row_prev
    if sy == 0:
        return sh, sl, est + _DD_EPS * max_term * (terms + 4.0), max_term, terms, OK
    return sh, sl, est, max_term, terms, NEED_N


@njit(**_JIT)
def prabhakar_series(alpha, beta, gamma, z, abs_tol, max_terms):
    """Three-parameter series  sum_k (gamma)_k z^k / (G(alpha k + beta) k!).

    Pochhammer handled in log space with sign tracking; a zero factor
    (gamma a non-positive integer) terminates the series exactly.
    Returns (hi, lo, est_abs_err, max_term, terms_used, status).
    """
    lzh, lzl = 0.0, 0.0
    sz = 0
    if z > 0.0:
        lzh, lzl = dd_log_d(z)
        sz = 1
    elif z < 0.0:
        lzh, lzl = dd_log_d(-z)
        sz = -1
    sh, sl = 0.0, 0.0
    est = 0.0
    max_term = 0.0
    lph, lpl = 0.0, 0.0          # log |(gamma)_k|
    psign = 1
    lfh, lfl = 0.0, 0.0          # log k!
    prev = -1.0
    streak = 0
    szk = 1
    k = 0
    while k < max_terms:
        if k > 0:
            fac = gamma + (k - 1)
            if fac == 0.0:
                return sh, sl, est + _DD_EPS * max_term * (k + 4.0), \
                    max_term, k, OK
            if fac < 0.0:
                psign = -psign
            ah, al = dd_log_d(abs(fac))
            lph, lpl = dd_add(lph, lpl, ah, al)
            ah, al = dd_log_d(float(k))
            lfh, lfl = dd_add(lfh, lfl, ah, al)
            if sz == 0:
                return sh, sl, est + _DD_EPS * max_term * (k + 4.0), \
                    max_term, k, OK
            szk = -szk if sz < 0 else szk
        gh, gl = _two_prod(alpha, float(k))
        gh, gl = dd_add_d(gh, gl, beta)
        lgh, lgl, gs = dd_lgamma_sign(gh, gl)
        if gs == 0:
            # denominator pole: the term is zero
            k += 1
            prev = -1.0
            streak = 0
            continue
        eh, el = dd_mul_d(lzh, lzl, float(k))
        eh, el = dd_add(eh, el, lph, lpl)
        eh, el = dd_sub(eh, el, lgh, lgl)
        eh, el = dd_sub(eh, el, lfh, lfl)
        th, tl = dd_exp(eh, el)
        if th == np.inf:
            return sh, sl, est, max_term, k, OVERFLOW
        if psign * szk * gs < 0:
            th, tl = -th, -tl
        sh, sl = dd_add(sh, sl, th, tl)
        mag = abs(th)
        if mag > max_term:
            max_term = mag
        if prev > 0.0:
            ratio = mag / prev
            if ratio < 0.5:
                streak += 1
                if streak >= 3:
                    tail = mag * ratio / (1.0 - ratio)
                    if tail < abs_tol / 2.0 or mag == 0.0:
                        est += tail
                        return sh, sl, est + _DD_EPS * max_term * (k + 5.0), \
                            max_term, k + 1, OK
            else:
                streak = 0
        prev = mag
        k += 1
    return sh, sl, est, max_term, k, MAXTERMS
