"""Dense univariate polynomial arithmetic over an abstract coefficient field.

Polynomials are tuples of coefficient raws, little-endian, with no trailing
zeros; the zero polynomial is the empty tuple.  Every function takes the
coefficient field object F first; F must provide zero/one/add/neg/sub/mul/
inv/div/eq/is_zero over its raw element type.
"""

from .errors import DivisionByZero


def trim(F, coeffs):
    c = list(coeffs)
    while c and F.is_zero(c[-1]):
        c.pop()
    return tuple(c)


def deg(a):
    """Degree; -1 for the zero polynomial."""
    return len(a) - 1


def const(F, x):
    return () if F.is_zero(x) else (x,)


def padd(F, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.zero
        y = b[i] if i < len(b) else F.zero
        out.append(F.add(x, y))
    return trim(F, out)


def pneg(F, a):
    return tuple(F.neg(x) for x in a)


def psub(F, a, b):
    return padd(F, a, pneg(F, b))


def pmul(F, a, b):
    if not a or not b:
        return ()
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(F, out)


def pscale(F, a, c):
    return trim(F, [F.mul(x, c) for x in a])


def pdivmod(F, a, b):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    q = [F.zero] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    inv_lead = F.inv(b[-1])
    while len(r) >= len(b) and not all(F.is_zero(x) for x in r):
        # strip exact trailing zeros first
        while r and F.is_zero(r[-1]):
            r.pop()
        if len(r) < len(b):
            break
        c = F.mul(r[-1], inv_lead)
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] = F.sub(r[k + i], F.mul(c, y))
    return trim(F, q), trim(F, r)


def pmod(F, a, b):
    return pdivmod(F, a, b)[1]


def pgcd(F, a, b):
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def pmonic(F, a):
    if not a:
        return a
    return pscale(F, a, F.inv(a[-1]))


def pderiv(F, a):
    out = []
    for i in range(1, len(a)):
        c = a[i]
        s = F.zero
        for _ in range(i):
            s = F.add(s, c)
        out.append(s)
    return trim(F, out)


def peval(F, a, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def ppow_mod(F, a, n, m):
    result = (F.one,)
    base = pmod(F, a, m)
    while n > 0:
        if n & 1:
            result = pmod(F, pmul(F, result, base), m)
        base = pmod(F, pmul(F, base, base), m)
        n >>= 1
    return result


def pxgcd(F, a, b):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = (F.one,), ()
    t0, t1 = (), (F.one,)
    while r1:
        q, r = pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(F, s0, pmul(F, q, s1))
        t0, t1 = t1, psub(F, t0, pmul(F, q, t1))
    if r0:
        c = F.inv(r0[-1])
        r0, s0, t0 = pscale(F, r0, c), pscale(F, s0, c), pscale(F, t0, c)
    return r0, s0, t0


def pshift_order(F, a):
    """Number of leading zero coefficients (order of vanishing at 0)."""
    for i, c in enumerate(a):
        if not F.is_zero(c):
            return i
    return len(a)


def psqrt(F, a):
    """Exact square root of a monic polynomial, or None.

    Solves h^2 = a coefficient by coefficient from the top; requires
    char(F) != 2.
    """
    d = deg(a)
    if d < 0:
        return ()
    if d % 2:
        return None
    m = d // 2
    two = F.add(F.one, F.one)
    h = [F.zero] * (m + 1)
    h[m] = F.one
    # coefficient of X^(m+j) in h^2 determines h[j], from j = m-1 down
    for j in range(m - 1, -1, -1):
        s = F.zero
        for i in range(j + 1, m):
            k = m + j - i
            if 0 <= k <= m and i > k:
                s = F.add(s, F.add(F.mul(h[i], h[k]), F.mul(h[i], h[k])))
            elif i == k:
                s = F.add(s, F.mul(h[i], h[i]))
        # a[m+j] = 2*h[m]*h[j] + s  (h[m] = 1)
        target = a[m + j] if m + j < len(a) else F.zero
        h[j] = F.div(F.sub(target, s), two)
    hh = trim(F, h)
    sq = pmul(F, hh, hh)
    return hh if sq == a else None
