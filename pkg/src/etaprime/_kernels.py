"""Limb-level arithmetic kernels.

Numbers are little-endian arrays of 32-bit limbs stored in uint64 slots, so
a full limb product a*b + carry + addend fits in uint64 with no overflow.
Canonical form has no leading zero limbs; zero is the empty array.  Kernels
never mutate their inputs; outputs may carry leading zeros and are trimmed
by the caller (or internally where a kernel composes with comparisons).

Backend selection: by default the kernels are compiled with numba.njit.
Setting ETAPRIME_BACKEND=numpy skips compilation and runs the same code as
plain Python over numpy arrays (slow, but dependency-light and useful for
differential testing).  ETAPRIME_BACKEND=numba forces compilation and
raises if numba is unavailable.
"""

import os

import numpy as np

_env = os.environ.get("ETAPRIME_BACKEND", "").strip().lower()
if _env not in ("", "numba", "numpy"):
    raise RuntimeError(
        "ETAPRIME_BACKEND must be 'numba' or 'numpy', got %r" % _env
    )

BACKEND = "numpy"
if _env != "numpy":
    try:
        import numba

        BACKEND = "numba"
    except ImportError:
        if _env == "numba":
            raise
        BACKEND = "numpy"

if BACKEND == "numba":
    def _jit(fn):
        return numba.njit(cache=True)(fn)
else:
    def _jit(fn):
        return fn

# Typed constants: inside njit code, mixing uint64 with int literals demotes
# to int64 and breaks wraparound semantics, so every arithmetic constant in
# the kernels below goes through these.
MASK32 = np.uint64(0xFFFFFFFF)
SH32 = np.uint64(32)
B32 = np.uint64(1 << 32)
HIBIT32 = np.uint64(0x80000000)
U0 = np.uint64(0)
U1 = np.uint64(1)
U31 = np.uint64(31)

EMPTY = np.zeros(0, np.uint64)

# Below ~32 limbs schoolbook multiplication beats the recursion overhead.
_KARATSUBA_CUTOFF = 32


@_jit
def k_trim(a):
    """Canonical view of a: leading zero limbs dropped."""
    n = a.shape[0]
    while n > 0 and a[n - 1] == U0:
        n -= 1
    return a[:n]


@_jit
def k_cmp(a, b):
    """Compare canonical arrays: -1, 0, or 1."""
    la = a.shape[0]
    lb = b.shape[0]
    if la != lb:
        if la < lb:
            return -1
        return 1
    for i in range(la - 1, -1, -1):
        if a[i] != b[i]:
            if a[i] < b[i]:
                return -1
            return 1
    return 0


@_jit
def k_bitlen(a):
    """Bit length of a canonical array (0 for zero)."""
    la = a.shape[0]
    if la == 0:
        return 0
    t = a[la - 1]
    bits = 0
    while t != U0:
        t = t >> U1
        bits += 1
    return 32 * (la - 1) + bits


@_jit
def k_add(a, b):
    la = a.shape[0]
    lb = b.shape[0]
    n = la if la > lb else lb
    out = np.zeros(n + 1, np.uint64)
    carry = U0
    for i in range(n):
        t = carry
        if i < la:
            t = t + a[i]
        if i < lb:
            t = t + b[i]
        out[i] = t & MASK32
        carry = t >> SH32
    out[n] = carry
    return out


@_jit
def k_sub(a, b):
    """a - b for values a >= b; raises on underflow.

    Either array may carry leading zero limbs; the loop spans both.
    """
    la = a.shape[0]
    lb = b.shape[0]
    n = la if la > lb else lb
    out = np.zeros(n, np.uint64)
    borrow = U0
    for i in range(n):
        ai = a[i] if i < la else U0
        bi = b[i] if i < lb else U0
        t = ai + B32 - bi - borrow
        out[i] = t & MASK32
        borrow = U1 - (t >> SH32)
    if borrow != U0:
        raise ValueError("subtraction underflow")
    return out


@_jit
def k_iadd_at(out, src, off):
    # out[off:] += src with carry propagation; caller guarantees room.
    n = src.shape[0]
    carry = U0
    for i in range(n):
        t = out[off + i] + src[i] + carry
        out[off + i] = t & MASK32
        carry = t >> SH32
    i = off + n
    while carry != U0:
        t = out[i] + carry
        out[i] = t & MASK32
        carry = t >> SH32
        i += 1


@_jit
def k_mul_school(a, b):
    la = a.shape[0]
    lb = b.shape[0]
    out = np.zeros(la + lb, np.uint64)
    if la == 0 or lb == 0:
        return out
    for i in range(la):
        ai = a[i]
        if ai == U0:
            continue
        carry = U0
        for j in range(lb):
            t = out[i + j] + ai * b[j] + carry
            out[i + j] = t & MASK32
            carry = t >> SH32
        out[i + lb] = carry
    return out


@_jit
def k_sqr_school(a):
    la = a.shape[0]
    out = np.zeros(2 * la, np.uint64)
    if la == 0:
        return out
    # Cross products i < j, then double the lot, then add the diagonal.
    # Doubling afterwards keeps every intermediate within uint64.
    for i in range(la):
        ai = a[i]
        if ai == U0:
            continue
        carry = U0
        for j in range(i + 1, la):
            t = out[i + j] + ai * a[j] + carry
            out[i + j] = t & MASK32
            carry = t >> SH32
        out[i + la] = carry
    carry = U0
    for i in range(2 * la):
        t = (out[i] << U1) | carry
        out[i] = t & MASK32
        carry = t >> SH32
    carry = U0
    for i in range(la):
        t = out[2 * i] + a[i] * a[i] + carry
        out[2 * i] = t & MASK32
        c = t >> SH32
        t = out[2 * i + 1] + c
        out[2 * i + 1] = t & MASK32
        carry = t >> SH32
    return out


@_jit
def k_mul(a, b):
    """Full product; schoolbook below the cutoff, Karatsuba above."""
    la = a.shape[0]
    lb = b.shape[0]
    if la == 0 or lb == 0:
        return np.zeros(la + lb, np.uint64)
    mn = la if la < lb else lb
    if mn < _KARATSUBA_CUTOFF:
        return k_mul_school(a, b)
    m = mn // 2
    z0 = k_mul(k_trim(a[:m]), k_trim(b[:m]))
    z2 = k_mul(a[m:], b[m:])
    sa = k_trim(k_add(a[:m], a[m:]))
    sb = k_trim(k_add(b[:m], b[m:]))
    z1 = k_sub(k_mul(sa, sb), k_add(z0, z2))
    out = np.zeros(la + lb, np.uint64)
    for i in range(z0.shape[0]):
        out[i] = z0[i]
    k_iadd_at(out, k_trim(z1), m)
    k_iadd_at(out, k_trim(z2), 2 * m)
    return out


@_jit
def k_sqr(a):
    la = a.shape[0]
    if la < _KARATSUBA_CUTOFF:
        return k_sqr_school(a)
    m = la // 2
    z0 = k_sqr(k_trim(a[:m]))
    z2 = k_sqr(a[m:])
    z1 = k_mul(k_trim(a[:m]), a[m:])
    # a^2 = z2*B^2m + 2*z1*B^m + z0
    dbl = np.zeros(z1.shape[0] + 1, np.uint64)
    carry = U0
    for i in range(z1.shape[0]):
        t = (z1[i] << U1) | carry
        dbl[i] = t & MASK32
        carry = t >> SH32
    dbl[z1.shape[0]] = carry
    out = np.zeros(2 * la, np.uint64)
    for i in range(z0.shape[0]):
        out[i] = z0[i]
    k_iadd_at(out, k_trim(dbl), m)
    k_iadd_at(out, k_trim(z2), 2 * m)
    return out


@_jit
def k_shl(a, nbits):
    la = a.shape[0]
    ls = nbits // 32
    bs = np.uint64(nbits % 32)
    out = np.zeros(la + ls + 1, np.uint64)
    if la == 0:
        return out
    if bs == U0:
        for i in range(la):
            out[i + ls] = a[i]
    else:
        carry = U0
        for i in range(la):
            t = (a[i] << bs) | carry
            out[i + ls] = t & MASK32
            carry = t >> SH32
        out[la + ls] = carry
    return out


@_jit
def k_shr(a, nbits):
    la = a.shape[0]
    ls = nbits // 32
    if ls >= la:
        return np.zeros(0, np.uint64)
    bs = np.uint64(nbits % 32)
    n = la - ls
    out = np.zeros(n, np.uint64)
    if bs == U0:
        for i in range(n):
            out[i] = a[i + ls]
    else:
        ibs = SH32 - bs
        for i in range(n):
            t = a[i + ls] >> bs
            if i + ls + 1 < la:
                t = t | ((a[i + ls + 1] << ibs) & MASK32)
            out[i] = t
    return out


@_jit
def k_lowbits(a, nbits):
    """a mod 2^nbits."""
    la = a.shape[0]
    if la == 0 or nbits <= 0:
        return np.zeros(0, np.uint64)
    ls = nbits // 32
    bs = nbits % 32
    if ls >= la:
        return a[:la]
    n = ls + 1 if bs > 0 else ls
    out = np.zeros(n, np.uint64)
    for i in range(ls):
        out[i] = a[i]
    if bs > 0:
        out[ls] = a[ls] & np.uint64((1 << bs) - 1)
    return k_trim(out)


@_jit
def k_muladd_small(a, mult, addend):
    """a * mult + addend for limb-sized mult and addend."""
    la = a.shape[0]
    out = np.zeros(la + 1, np.uint64)
    carry = addend
    for i in range(la):
        t = a[i] * mult + carry
        out[i] = t & MASK32
        carry = t >> SH32
    out[la] = carry
    return out


@_jit
def k_divmod_small(u, d):
    """(u // d, u mod d) for a single nonzero limb d."""
    lu = u.shape[0]
    q = np.zeros(lu, np.uint64)
    r = U0
    for i in range(lu - 1, -1, -1):
        cur = (r << SH32) | u[i]
        q[i] = cur // d
        r = cur % d
    return k_trim(q), r


@_jit
def k_divmod(u, v):
    """Knuth algorithm D.  v nonzero; returns trimmed (q, r)."""
    lv = v.shape[0]
    if lv == 1:
        q, r = k_divmod_small(u, v[0])
        if r == U0:
            return q, np.zeros(0, np.uint64)
        rr = np.zeros(1, np.uint64)
        rr[0] = r
        return q, rr
    c = k_cmp(u, v)
    if c < 0:
        return np.zeros(0, np.uint64), u[: u.shape[0]]
    lu = u.shape[0]
    # Normalize so the divisor's top limb has its high bit set.
    sh = 0
    top = v[lv - 1]
    while (top & HIBIT32) == U0:
        top = top << U1
        sh += 1
    un = k_shl(u, sh)[: lu + 1]
    vn = k_shl(v, sh)[:lv]
    m = lu - lv
    q = np.zeros(m + 1, np.uint64)
    vtop = vn[lv - 1]
    vsec = vn[lv - 2]
    for j in range(m, -1, -1):
        num = (un[j + lv] << SH32) | un[j + lv - 1]
        qhat = num // vtop
        rhat = num % vtop
        while qhat >= B32 or qhat * vsec > ((rhat << SH32) | un[j + lv - 2]):
            qhat -= U1
            rhat += vtop
            if rhat >= B32:
                break
        borrow = U0
        carry = U0
        for i in range(lv):
            p = qhat * vn[i] + carry
            carry = p >> SH32
            t = un[i + j] + B32 - (p & MASK32) - borrow
            un[i + j] = t & MASK32
            borrow = U1 - (t >> SH32)
        t = un[j + lv] + B32 - carry - borrow
        un[j + lv] = t & MASK32
        q[j] = qhat
        if (t >> SH32) == U0:
            # qhat was one too large: add the divisor back.
            q[j] = qhat - U1
            carry = U0
            for i in range(lv):
                t2 = un[i + j] + vn[i] + carry
                un[i + j] = t2 & MASK32
                carry = t2 >> SH32
            un[j + lv] = (un[j + lv] + carry) & MASK32
    return k_trim(q), k_shr(un[:lv], sh)


@_jit
def k_addmod(a, b, n):
    s = k_trim(k_add(a, b))
    if k_cmp(s, n) >= 0:
        s = k_trim(k_sub(s, n))
    return s


@_jit
def k_submod(a, b, n):
    if k_cmp(a, b) >= 0:
        return k_trim(k_sub(a, b))
    return k_trim(k_sub(k_trim(k_add(a, n)), b))


@_jit
def k_fold_reduce(x, n, s_bits, t_bits, e1):
    """Reduce x modulo n using 2^s_bits == e1*2^t_bits - 1 (mod n).

    e1 in {-1, 0, +1} selects the modulus shape.  Splitting x = hi*2^s + lo
    gives x == lo + hi*(e1*2^t - 1); the negative part is lifted by a
    shifted copy of n sized to keep the value nonnegative.  Each pass
    roughly halves the excess bits, so the loop is logarithmic.
    """
    cur = k_trim(x[: x.shape[0]])
    guard = 0
    while k_bitlen(cur) > s_bits + 1:
        hi = k_trim(k_shr(cur, s_bits))
        lo = k_lowbits(cur, s_bits)
        pos = lo
        neg = hi
        if e1 != 0:
            sh = k_trim(k_shl(hi, t_bits))
            if e1 < 0:
                neg = k_trim(k_add(hi, sh))
            else:
                pos = k_trim(k_add(lo, sh))
        if k_cmp(pos, neg) >= 0:
            cur = k_trim(k_sub(pos, neg))
        else:
            e = k_bitlen(neg) - k_bitlen(n) + 1
            if e < 0:
                e = 0
            lift = k_trim(k_shl(n, e))
            cur = k_trim(k_sub(k_trim(k_add(pos, lift)), neg))
        guard += 1
        if guard > 10000:
            raise RuntimeError("folding reduction failed to converge")
    while k_cmp(cur, n) >= 0:
        cur = k_trim(k_sub(cur, n))
    return cur


@_jit
def k_gcd(a, b):
    """Binary gcd of canonical arrays (either may be zero or even)."""
    la = a.shape[0]
    lb = b.shape[0]
    if la == 0:
        return b[:lb]
    if lb == 0:
        return a[:la]
    w = la if la > lb else lb
    u = np.zeros(w, np.uint64)
    v = np.zeros(w, np.uint64)
    for i in range(la):
        u[i] = a[i]
    for i in range(lb):
        v[i] = b[i]
    nu = la
    nv = lb
    # Strip and remember the common power of two.
    shift = 0
    while (u[0] & U1) == U0 and (v[0] & U1) == U0:
        c = U0
        for i in range(nu - 1, -1, -1):
            t = u[i]
            u[i] = (t >> U1) | (c << U31)
            c = t & U1
        if u[nu - 1] == U0:
            nu -= 1
        c = U0
        for i in range(nv - 1, -1, -1):
            t = v[i]
            v[i] = (t >> U1) | (c << U31)
            c = t & U1
        if v[nv - 1] == U0:
            nv -= 1
        shift += 1
    guard = 0
    while nu > 0:
        guard += 1
        if guard > 200 * (w + 1) * 32:
            raise RuntimeError("binary gcd failed to converge")
        while nu > 0 and (u[0] & U1) == U0:
            c = U0
            for i in range(nu - 1, -1, -1):
                t = u[i]
                u[i] = (t >> U1) | (c << U31)
                c = t & U1
            if u[nu - 1] == U0:
                nu -= 1
        while nv > 0 and (v[0] & U1) == U0:
            c = U0
            for i in range(nv - 1, -1, -1):
                t = v[i]
                v[i] = (t >> U1) | (c << U31)
                c = t & U1
            if v[nv - 1] == U0:
                nv -= 1
        if nu == 0:
            break
        # Compare active parts of u and v.
        cres = 0
        if nu != nv:
            cres = -1 if nu < nv else 1
        else:
            for i in range(nu - 1, -1, -1):
                if u[i] != v[i]:
                    cres = -1 if u[i] < v[i] else 1
                    break
        if cres >= 0:
            borrow = U0
            for i in range(nu):
                bi = v[i] if i < nv else U0
                t = u[i] + B32 - bi - borrow
                u[i] = t & MASK32
                borrow = U1 - (t >> SH32)
            while nu > 0 and u[nu - 1] == U0:
                nu -= 1
        else:
            borrow = U0
            for i in range(nv):
                bi = u[i] if i < nu else U0
                t = v[i] + B32 - bi - borrow
                v[i] = t & MASK32
                borrow = U1 - (t >> SH32)
            while nv > 0 and v[nv - 1] == U0:
                nv -= 1
    g = np.zeros(nv, np.uint64)
    for i in range(nv):
        g[i] = v[i]
    return k_trim(k_shl(g, shift))


@_jit
def k_invgcd(a, n):
    """Binary extended gcd against an odd modulus.

    Requires 1 <= a < n, n odd >= 3.  Returns (g, x) with g = gcd(a, n)
    and x*a == g (mod n), 0 <= x < n.  When g == 1, x is the inverse.
    """
    ln = n.shape[0]
    w = ln + 1
    u = np.zeros(w, np.uint64)
    v = np.zeros(w, np.uint64)
    x1 = np.zeros(w, np.uint64)
    x2 = np.zeros(w, np.uint64)
    la = a.shape[0]
    for i in range(la):
        u[i] = a[i]
    for i in range(ln):
        v[i] = n[i]
    nu = la
    nv = ln
    x1[0] = U1
    guard = 0
    while nu > 0:
        guard += 1
        if guard > 200 * (w + 1) * 32:
            raise RuntimeError("binary extended gcd failed to converge")
        while nu > 0 and (u[0] & U1) == U0:
            c = U0
            for i in range(nu - 1, -1, -1):
                t = u[i]
                u[i] = (t >> U1) | (c << U31)
                c = t & U1
            if u[nu - 1] == U0:
                nu -= 1
            # x1 = x1/2 mod n: make even by adding n first if needed.
            if (x1[0] & U1) != U0:
                carry = U0
                for i in range(w):
                    t = x1[i] + (n[i] if i < ln else U0) + carry
                    x1[i] = t & MASK32
                    carry = t >> SH32
            c = U0
            for i in range(w - 1, -1, -1):
                t = x1[i]
                x1[i] = (t >> U1) | (c << U31)
                c = t & U1
        while (v[0] & U1) == U0:
            c = U0
            for i in range(nv - 1, -1, -1):
                t = v[i]
                v[i] = (t >> U1) | (c << U31)
                c = t & U1
            if v[nv - 1] == U0:
                nv -= 1
            if (x2[0] & U1) != U0:
                carry = U0
                for i in range(w):
                    t = x2[i] + (n[i] if i < ln else U0) + carry
                    x2[i] = t & MASK32
                    carry = t >> SH32
            c = U0
            for i in range(w - 1, -1, -1):
                t = x2[i]
                x2[i] = (t >> U1) | (c << U31)
                c = t & U1
        if nu == 0:
            break
        cres = 0
        if nu != nv:
            cres = -1 if nu < nv else 1
        else:
            for i in range(nu - 1, -1, -1):
                if u[i] != v[i]:
                    cres = -1 if u[i] < v[i] else 1
                    break
        if cres >= 0:
            borrow = U0
            for i in range(nu):
                bi = v[i] if i < nv else U0
                t = u[i] + B32 - bi - borrow
                u[i] = t & MASK32
                borrow = U1 - (t >> SH32)
            while nu > 0 and u[nu - 1] == U0:
                nu -= 1
            # x1 = (x1 - x2) mod n
            cres2 = 0
            for i in range(w - 1, -1, -1):
                if x1[i] != x2[i]:
                    cres2 = -1 if x1[i] < x2[i] else 1
                    break
            if cres2 < 0:
                carry = U0
                for i in range(w):
                    t = x1[i] + (n[i] if i < ln else U0) + carry
                    x1[i] = t & MASK32
                    carry = t >> SH32
            borrow = U0
            for i in range(w):
                t = x1[i] + B32 - x2[i] - borrow
                x1[i] = t & MASK32
                borrow = U1 - (t >> SH32)
        else:
            borrow = U0
            for i in range(nv):
                bi = u[i] if i < nu else U0
                t = v[i] + B32 - bi - borrow
                v[i] = t & MASK32
                borrow = U1 - (t >> SH32)
            while nv > 0 and v[nv - 1] == U0:
                nv -= 1
            cres2 = 0
            for i in range(w - 1, -1, -1):
                if x2[i] != x1[i]:
                    cres2 = -1 if x2[i] < x1[i] else 1
                    break
            if cres2 < 0:
                carry = U0
                for i in range(w):
                    t = x2[i] + (n[i] if i < ln else U0) + carry
                    x2[i] = t & MASK32
                    carry = t >> SH32
            borrow = U0
            for i in range(w):
                t = x2[i] + B32 - x1[i] - borrow
                x2[i] = t & MASK32
                borrow = U1 - (t >> SH32)
    g = np.zeros(nv, np.uint64)
    for i in range(nv):
        g[i] = v[i]
    x = k_trim(x2)
    xc = np.zeros(x.shape[0], np.uint64)
    for i in range(x.shape[0]):
        xc[i] = x[i]
    return g, xc


@_jit
def k_curve_counts(p, chi, ms):
    """Point counts of y^2 = x^3 - m*x over F_p for each m in ms.

    chi is the quadratic character table chi[t] in {-1, 0, 1} for t in
    [0, p).  Values stay within int64: p < 2^21 keeps x*x and x*t below
    2^42.
    """
    out = np.zeros(ms.shape[0], np.int64)
    for im in range(ms.shape[0]):
        m = ms[im]
        acc = 0
        for x in range(p):
            t = (x * x - m) % p
            t = (x * t) % p
            acc += chi[t]
        out[im] = p + 1 + acc
    return out
