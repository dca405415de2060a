"""Double-double (two-float compensated) arithmetic kernels.

All heavy series summation in this package runs on (hi, lo) float pairs
carrying ~31 significant digits.  The hot paths are numba-compiled; a small
pure-Python ``D2`` class mirrors the same algorithms for the low-volume
modal algebra.

Conventions: a double-double value is an unevaluated sum hi + lo with
|lo| <= 0.5 ulp(hi).  Functions ending in ``_d`` take a plain float operand.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_JIT = dict(cache=True, fastmath=False)

# splitter for Dekker's product, 2^27 + 1
_SPLIT = 134217729.0


def _py_two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _py_quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _py_two_prod(a, b):
    p = a * b
    ca = _SPLIT * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLIT * b
    bhi = cb - (cb - b)
    blo = b - bhi
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo

# (hi, lo) representations of constants
_LN2 = (0.6931471805599453, 2.3190468138462996e-17)
_PI = (3.141592653589793, 1.2246467991473532e-16)
_LN_SQRT_2PI = (0.9189385332046728, -3.8782941580672414e-17)

# Stirling series coefficients B_{2n} / (2n (2n-1)) for n = 1..17
_STIRLING = np.array([
    (0.16666666666666666, 9.25185853854297e-18),
    (-0.03333333333333333, -4.625929269271486e-19),
    (0.023809523809523808, 1.32169407693471e-18),
    (-0.03333333333333333, -4.625929269271486e-19),
    (0.07575757575757576, -2.10269512239613e-18),
    (-0.2531135531135531, -1.1061562736192037e-17),
    (1.1666666666666667, -7.401486830834377e-17),
    (-7.092156862745098, -3.274069468698501e-16),
    (54.971177944862156, -1.9588897477095493e-16),
    (-529.1242424242424, 6.890111377067638e-16),
    (6192.123188405797, 9.226757844073186e-14),
    (-86580.25311355312, 3.5926706461242705e-12),
    (1425517.1666666667, -7.761021455128987e-11),
    (-27298231.067816094, 1.610010519795034e-09),
    (601580873.9006424, -2.6635227381825164e-08),
    (-15116315767.092157, 5.011465035232843e-07),
    (429614643061.1667, -2.0345052083333332e-05),
], dtype=np.float64)


def _prepare_stirling(table):
    # proper double-double division keeps the pair invariant intact
    for n in range(table.shape[0]):
        k = 2 * (n + 1)
        c = float(k * (k - 1))
        hi, lo = table[n, 0], table[n, 1]
        q1 = hi / c
        ph, pe = _py_two_prod(q1, c)
        rh, rl = _py_two_sum(hi, -ph)
        rl += lo - pe
        q2 = (rh + rl) / c
        table[n, 0], table[n, 1] = _py_quick_two_sum(q1, q2)


_prepare_stirling(_STIRLING)

_STIRLING_CUTOFF = 30.0
# relative tolerance for treating a gamma argument as a non-positive integer
_POLE_RTOL = 1e-9


@njit(**_JIT)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit(**_JIT)
def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


@njit(**_JIT)
def _two_prod(a, b):
    p = a * b
    ca = _SPLIT * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLIT * b
    bhi = cb - (cb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


@njit(**_JIT)
def dd_add(ah, al, bh, bl):
    sh, sl = _two_sum(ah, bh)
    th, tl = _two_sum(al, bl)
    sl += th
    sh, sl = _quick_two_sum(sh, sl)
    sl += tl
    return _quick_two_sum(sh, sl)


@njit(**_JIT)
def dd_add_d(ah, al, b):
    sh, sl = _two_sum(ah, b)
    sl += al
    return _quick_two_sum(sh, sl)


@njit(**_JIT)
def dd_sub(ah, al, bh, bl):
    return dd_add(ah, al, -bh, -bl)


@njit(**_JIT)
def dd_mul(ah, al, bh, bl):
    ph, pl = _two_prod(ah, bh)
    pl += ah * bl + al * bh
    return _quick_two_sum(ph, pl)


@njit(**_JIT)
def dd_mul_d(ah, al, b):
    ph, pl = _two_prod(ah, b)
    pl += al * b
    return _quick_two_sum(ph, pl)


@njit(**_JIT)
def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    th, tl = dd_mul_d(bh, bl, q1)
    rh, rl = dd_sub(ah, al, th, tl)
    q2 = rh / bh
    th, tl = dd_mul_d(bh, bl, q2)
    rh, rl = dd_sub(rh, rl, th, tl)
    q3 = rh / bh
    qh, ql = _quick_two_sum(q1, q2)
    return dd_add_d(qh, ql, q3)


@njit(**_JIT)
def dd_div_d(ah, al, b):
    return dd_div(ah, al, b, 0.0)


@njit(**_JIT)
def dd_exp(ah, al):
    """exp of a double-double, accurate to ~1e-31 relative."""
    if ah > 709.0:
        return math.inf, 0.0
    if ah < -746.0:
        return 0.0, 0.0
    m = math.floor(ah / _LN2[0] + 0.5)
    th, tl = _two_prod(m, _LN2[0])
    tl += m * _LN2[1]
    rh, rl = dd_sub(ah, al, th, tl)
    # Taylor on |r| <= 0.5 ln 2
    sh, sl = 1.0, 0.0
    th, tl = 1.0, 0.0
    for k in range(1, 27):
        th, tl = dd_mul(th, tl, rh, rl)
        th, tl = dd_div_d(th, tl, float(k))
        sh, sl = dd_add(sh, sl, th, tl)
        if abs(th) < 1e-35:
            break
    im = int(m)
    return math.ldexp(sh, im), math.ldexp(sl, im)


@njit(**_JIT)
def dd_log(ah, al):
    """log of a positive double-double via one Newton step from float log."""
    y0 = math.log(ah)
    eh, el = dd_exp(-y0, 0.0)
    ph, pl = dd_mul(ah, al, eh, el)
    ch, cl = dd_add_d(ph, pl, -1.0)
    return dd_add_d(ch, cl, y0)


@njit(**_JIT)
def dd_log_d(a):
    return dd_log(a, 0.0)


@njit(**_JIT)
def _dd_sin_taylor(xh, xl):
    # sin for |x| <= pi/2 + eps
    x2h, x2l = dd_mul(xh, xl, xh, xl)
    sh, sl = xh, xl
    th, tl = xh, xl
    for k in range(1, 16):
        th, tl = dd_mul(th, tl, x2h, x2l)
        th, tl = dd_div_d(th, tl, -float((2 * k) * (2 * k + 1)))
        sh, sl = dd_add(sh, sl, th, tl)
        if abs(th) < 1e-35:
            break
    return sh, sl


@njit(**_JIT)
def dd_sinpi(zh, zl):
    """sin(pi z) for double-double z, exact integer detection included."""
    n = math.floor(zh + 0.5)
    fh, fl = dd_add_d(zh, zl, -n)
    ph, pl = dd_mul(_PI[0], _PI[1], fh, fl)
    sh, sl = _dd_sin_taylor(ph, pl)
    if int(n) % 2 != 0:
        sh, sl = -sh, -sl
    return sh, sl


@njit(**_JIT)
def _dd_lgamma_pos(zh, zl):
    """log Gamma for z > 0, Stirling with shift below the cutoff."""
    sh, sl = 0.0, 0.0
    wh, wl = zh, zl
    if wh < _STIRLING_CUTOFF:
        # accumulate the product w (w+1) ... then one log
        ph, pl = 1.0, 0.0
        while wh < _STIRLING_CUTOFF:
            ph, pl = dd_mul(ph, pl, wh, wl)
            wh, wl = dd_add_d(wh, wl, 1.0)
        sh, sl = dd_log(ph, pl)
    lh, ll = dd_log(wh, wl)
    # (w - 1/2) log w - w + log sqrt(2 pi)
    ah, al = dd_add_d(wh, wl, -0.5)
    rh, rl = dd_mul(ah, al, lh, ll)
    rh, rl = dd_sub(rh, rl, wh, wl)
    rh, rl = dd_add(rh, rl, _LN_SQRT_2PI[0], _LN_SQRT_2PI[1])
    # Stirling correction in inverse powers
    ih, il = dd_div(1.0, 0.0, wh, wl)
    i2h, i2l = dd_mul(ih, il, ih, il)
    ch, cl = _STIRLING[16, 0], _STIRLING[16, 1]
    for k in range(15, -1, -1):
        ch, cl = dd_mul(ch, cl, i2h, i2l)
        ch, cl = dd_add(ch, cl, _STIRLING[k, 0], _STIRLING[k, 1])
    ch, cl = dd_mul(ch, cl, ih, il)
    rh, rl = dd_add(rh, rl, ch, cl)
    return dd_sub(rh, rl, sh, sl)


@njit(**_JIT)
def dd_lgamma_sign(zh, zl):
    """(log |Gamma(z)|, sign) for real double-double z.

    Returns sign 0 at non-positive integer arguments (a gamma pole); the
    log slot is then meaningless.
    """
    if zh > 0.0:
        h, l = _dd_lgamma_pos(zh, zl)
        return h, l, 1
    n = math.floor(zh + 0.5)
    dh, dl = dd_add_d(zh, zl, -n)
    if abs(dh) <= _POLE_RTOL * max(1.0, abs(zh)):
        return 0.0, 0.0, 0
    # reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
    sh, sl = dd_sinpi(zh, zl)
    sign = 1
    if sh < 0.0:
        sign = -1
        sh, sl = -sh, -sl
    oh, ol = dd_sub(1.0, 0.0, zh, zl)
    gh, gl = _dd_lgamma_pos(oh, ol)
    lph, lpl = dd_log(_PI[0], _PI[1])
    lsh, lsl = dd_log(sh, sl)
    rh, rl = dd_sub(lph, lpl, lsh, lsl)
    rh, rl = dd_sub(rh, rl, gh, gl)
    return rh, rl, sign


@njit(**_JIT)
def dd_gamma(zh, zl):
    """Gamma(z) as a double-double; (nan, nan) at poles."""
    h, l, s = dd_lgamma_sign(zh, zl)
    if s == 0:
        return math.nan, math.nan
    eh, el = dd_exp(h, l)
    if s < 0:
        eh, el = -eh, -el
    return eh, el


class D2:
    """Pure-Python double-double scalar for modal algebra.

    Supports +, -, *, / against D2 and float; intended for the short
    alternating sums assembled from series evaluations, not for bulk
    summation (that lives in the numba kernels).
    """

    __slots__ = ("hi", "lo")

    def __init__(self, hi, lo=0.0):
        self.hi = float(hi)
        self.lo = float(lo)

    @staticmethod
    def _norm(hi, lo):
        s = hi + lo
        return D2(s, lo - (s - hi))

    def __float__(self):
        return self.hi + self.lo

    def __repr__(self):
        return f"D2({self.hi!r}, {self.lo!r})"

    def __neg__(self):
        return D2(-self.hi, -self.lo)

    def _coerce(self, other):
        if isinstance(other, D2):
            return other
        return D2(float(other))

    def __add__(self, other):
        o = self._coerce(other)
        sh, sl = _py_two_sum(self.hi, o.hi)
        th, tl = _py_two_sum(self.lo, o.lo)
        sl += th
        sh, sl = _py_quick_two_sum(sh, sl)
        sl += tl
        sh, sl = _py_quick_two_sum(sh, sl)
        return D2(sh, sl)

    __radd__ = __add__

    def __sub__(self, other):
        return self.__add__(-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        ph, pl = _py_two_prod(self.hi, o.hi)
        pl += self.hi * o.lo + self.lo * o.hi
        ph, pl = _py_quick_two_sum(ph, pl)
        return D2(ph, pl)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        q1 = self.hi / o.hi
        r = self - o * q1
        q2 = r.hi / o.hi
        r = r - o * q2
        q3 = r.hi / o.hi
        return D2(q1) + q2 + q3

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def __abs__(self):
        return D2(-self.hi, -self.lo) if self.hi < 0 else D2(self.hi, self.lo)
