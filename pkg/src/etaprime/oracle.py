"""Independent ground truth for the test drivers.

Everything here that produces a verdict or a reference value works on plain
Python integers (arbitrary precision, unrelated to the limb engine), so a
bug in the engine cannot silently agree with itself.  The verification
suites at the bottom deliberately run both routes and compare.

Point counting over F_p uses a quadratic-character table; the batch sweep
runs through the compiled kernel when available and through vectorized
numpy otherwise.
"""

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _kernels as K
from .bignat import Form, Modulus, Natural, build_modulus
from .curve import (
    AffinePoint,
    CurveParams,
    Finite,
    INFINITY,
    QuarticUnit,
    ZERO_POINT,
    affine_add,
    apply_i,
    double_step,
    eta_step,
    i_unit,
    scalar_mul,
    to_x_state,
)

__all__ = [
    "FactViolation",
    "GroupStructure",
    "NoRepresentation",
    "StructureMismatch",
    "TwoSquares",
    "curve_counts",
    "enumerate_curve",
    "fermat_divisor_check",
    "group_structure",
    "legendre",
    "miller_rabin",
    "primes_up_to",
    "trial_division",
    "two_squares",
    "verify_residue_facts",
    "verify_step_properties",
    "verify_structure",
]


class NoRepresentation(Exception):
    """No two-squares decomposition found (impossible for valid input)."""


class StructureMismatch(Exception):
    """Observed point orders contradict the claimed invariant factors."""


class FactViolation(Exception):
    def __init__(self, fact: str, k: int):
        super().__init__("residue fact %r fails at k = %d" % (fact, k))
        self.fact = fact
        self.k = k


@dataclass(frozen=True)
class TwoSquares:
    a: int  # signed; a + b == 1 (mod 4)
    b: int  # even, nonnegative


@dataclass(frozen=True)
class GroupStructure:
    n1: int
    n2: int
    order: int  # n1 * n2


def primes_up_to(n: int) -> np.ndarray:
    """Ascending primes <= n (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def trial_division(n, bound) -> Optional[int]:
    """Smallest prime factor of n that is <= bound, or None.

    A prime n <= bound reports itself.  Scans 2 then odd numbers; the
    first divisor hit is necessarily prime.
    """
    n = int(n)
    bound = int(bound)
    if n < 2:
        raise ValueError("trial division needs n >= 2")
    d = 2
    while d <= bound and d * d <= n:
        if n % d == 0:
            return d
        d = 3 if d == 2 else d + 2
    if d * d > n:  # no divisor up to sqrt(n): n is prime
        return n if n <= bound else None
    return None


_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _mr_witness(a: int, d: int, s: int, n: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def miller_rabin(n) -> bool:
    """True if n is (probably) prime.

    Below 3.3e24 the fixed base set {2..37} is a proven deterministic
    witness set; above it, 64 bases drawn from a generator seeded by n
    (so results are reproducible).
    """
    n = int(n)
    if n < 3 or n % 2 == 0:
        raise ValueError("miller_rabin needs odd n >= 3")
    if n in _MR_BASES:
        return True
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _MR_DETERMINISTIC_LIMIT:
        bases = [a for a in _MR_BASES if a < n]
    else:
        rng = random.Random(n % (1 << 63))
        bases = [rng.randrange(2, n - 1) for _ in range(64)]
    return not any(_mr_witness(a, d, s, n) for a in bases)


def two_squares(p) -> TwoSquares:
    """p = a^2 + b^2 with b even and a + b == 1 (mod 4).

    Exhaustive scan over even b; asserts the decomposition is unique.
    """
    p = int(p)
    if p % 4 != 1 or p > (1 << 20) or not miller_rabin(p):
        raise ValueError("two_squares needs a prime p == 1 (mod 4), p <= 2^20")
    hits = []
    for b in range(0, math.isqrt(p) + 1, 2):
        r = p - b * b
        a = math.isqrt(r)
        if a * a == r:
            hits.append((a, b))
    if not hits:
        raise NoRepresentation("no a^2 + b^2 = %d found" % p)
    if len(hits) != 1:
        raise NoRepresentation("non-unique decomposition of %d: %r" % (p, hits))
    a, b = hits[0]
    signed = [s for s in (a, -a) if (s + b) % 4 == 1]
    if len(signed) != 1:
        raise NoRepresentation("normalization of %d not unique: %r" % (p, hits))
    return TwoSquares(signed[0], b)


def legendre(a, p) -> int:
    """Legendre symbol by Euler's criterion (pure-int route)."""
    a = int(a) % int(p)
    p = int(p)
    r = pow(a, (p - 1) // 2, p)
    if r == p - 1:
        return -1
    return int(r)


def fermat_divisor_check(q) -> bool:
    """Divisors of Fermat numbers are == 1 (mod 4); sanity hook for tests."""
    return int(q) % 4 == 1


@lru_cache(maxsize=64)
def _chi_table(p: int) -> np.ndarray:
    """chi[t] = Legendre(t, p) for t in [0, p) as int8."""
    xs = np.arange(p, dtype=np.int64)
    sq = (xs * xs) % p
    chi = np.full(p, -1, dtype=np.int8)
    chi[sq] = 1
    chi[0] = 0
    return chi


def _fourth_powers(p: int) -> np.ndarray:
    xs = np.arange(1, p, dtype=np.int64)
    sq = (xs * xs) % p
    return np.unique((sq * sq) % p)


def _is_fourth_power(m: int, p: int) -> bool:
    e = (p - 1) // math.gcd(4, p - 1)
    return pow(m, e, p) == 1


def curve_counts(p: int, ms: np.ndarray) -> np.ndarray:
    """#E(F_p) of y^2 = x^3 - m*x for each m in ms (batch path).

    Uses the compiled kernel under the numba backend; otherwise a
    vectorized numpy loop with identical arithmetic.
    """
    chi = _chi_table(p)
    ms = np.asarray(ms, dtype=np.int64)
    if K.BACKEND == "numba":
        return K.k_curve_counts(p, chi, ms)
    xs = np.arange(p, dtype=np.int64)
    sq = (xs * xs) % p
    out = np.empty(ms.shape[0], np.int64)
    for idx, m in enumerate(ms):
        f = ((sq - m) * xs) % p
        out[idx] = p + 1 + chi[f].sum(dtype=np.int64)
    return out


def enumerate_curve(p, m, with_points: bool = False):
    """Point count (and optionally the points) of y^2 = x^3 - m*x over F_p.

    Count includes the point at infinity.  Requires p prime <= 2^20 and
    m a nonzero fourth power mod p.
    """
    p = int(p)
    m = int(m) % p
    if p < 3 or p > (1 << 20) or p % 2 == 0 or not miller_rabin(p):
        raise ValueError("enumerate_curve needs an odd prime p <= 2^20")
    if math.gcd(m, p) != 1:
        raise ValueError("m must be a unit mod p")
    if not _is_fourth_power(m, p):
        raise ValueError("m = %d is not a fourth power mod %d" % (m, p))
    xs = np.arange(p, dtype=np.int64)
    f = ((xs * xs % p - m) * xs) % p
    chi = _chi_table(p)
    count = int(p + 1 + chi[f].sum(dtype=np.int64))
    if not with_points:
        return count, None
    roots = {}
    for y in range(p):
        roots.setdefault(y * y % p, []).append(y)
    points = []
    for x in range(p):
        for y in roots.get(int(f[x]), ()):
            points.append((x, y))
    if len(points) != count - 1:
        raise StructureMismatch(
            "point list length %d != count %d - 1" % (len(points), count)
        )
    if p % 4 == 1:
        ts = two_squares(p)
        if count != p + 1 - 2 * ts.a:
            raise StructureMismatch(
                "count %d != p + 1 - 2a for %d = %d^2 + %d^2"
                % (count, p, ts.a, ts.b)
            )
    return count, points


def _factorize(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d = 3 if d == 2 else d + 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _fourth_root(m: int, p: int) -> int:
    cs = np.arange(1, p, dtype=np.int64)
    sq = (cs * cs) % p
    hit = np.flatnonzero((sq * sq) % p == m % p)
    if hit.size == 0:
        raise ValueError("no fourth root of %d mod %d" % (m, p))
    return int(cs[hit[0]])


def group_structure(p, m) -> GroupStructure:
    """Invariant factors (n1, n2) of E(F_p), n1 | n2, by point orders.

    Cross-checks that the number of elements of each order matches
    Z_n1 x Z_n2 exactly; any inconsistency raises StructureMismatch.
    """
    p = int(p)
    m = int(m) % p
    count, points = enumerate_curve(p, m, with_points=True)
    mod = Modulus(p)
    cp = CurveParams(mod, _fourth_root(m, p))
    fac = _factorize(count)
    orders = [1]  # infinity
    for x, y in points:
        pt = AffinePoint(mod.residue(x), mod.residue(y))
        order = count
        for q in fac:
            while order % q == 0 and scalar_mul(order // q, pt, cp) is INFINITY:
                order //= q
        if scalar_mul(order, pt, cp) is not INFINITY:
            raise StructureMismatch("order computation failed at (%d, %d)" % (x, y))
        orders.append(order)
    n2 = 1
    for o in orders:
        n2 = n2 * o // math.gcd(n2, o)
    if count % n2 != 0:
        raise StructureMismatch("exponent %d does not divide order %d" % (n2, count))
    n1 = count // n2
    if n2 % n1 != 0:
        raise StructureMismatch("invariant factors %d | %d fail" % (n1, n2))
    for d in sorted({d for o in orders for d in _divisors(o)} | set(_divisors(n2))):
        observed = sum(1 for o in orders if d % o == 0)
        expected = math.gcd(d, n1) * math.gcd(d, n2)
        if observed != expected:
            raise StructureMismatch(
                "elements of order dividing %d: %d observed, %d expected for "
                "Z_%d x Z_%d" % (d, observed, expected, n1, n2)
            )
    return GroupStructure(n1, n2, count)


def _divisors(n: int) -> list:
    out = [1]
    for q, e in _factorize(n).items():
        out = [d * q ** j for d in out for j in range(e + 1)]
    return sorted(out)


# ---------------------------------------------------------------------------
# Verification suites


def verify_structure(p_max: int = 10000) -> dict:
    """#E = p + 1 - 2a for every prime p == 1 (mod 4) < p_max and every
    nonzero fourth-power m, plus pinned invariant factors for the small
    moduli of interest.  Returns a report dict with any mismatches."""
    mismatches = []
    pairs = 0
    for p in primes_up_to(p_max - 1):
        p = int(p)
        if p % 4 != 1:
            continue
        ts = two_squares(p)
        want = p + 1 - 2 * ts.a
        ms = _fourth_powers(p)
        counts = curve_counts(p, ms)
        pairs += ms.shape[0]
        bad = np.flatnonzero(counts != want)
        for idx in bad:
            mismatches.append((p, int(ms[idx]), int(counts[idx]), want))
    pinned = {5: (2, 4), 13: (2, 4), 17: (4, 4), 41: (4, 8), 113: (8, 16)}
    structures = {}
    for p, want in pinned.items():
        gs = group_structure(p, 1)
        structures[p] = (gs.n1, gs.n2)
        if (gs.n1, gs.n2) != want:
            mismatches.append((p, 1, (gs.n1, gs.n2), want))
    return {
        "pairs_checked": pairs,
        "structures": structures,
        "mismatches": mismatches,
        "ok": not mismatches,
    }


def _g_value(k: int) -> int:
    return (1 << (2 * k + 1)) + (1 << (k + 1)) + 1


def _h_value(k: int) -> int:
    return (1 << (2 * k + 1)) - (1 << (k + 1)) + 1


def verify_residue_facts(k_max: int = 10000, qr_k_max: int = 600) -> dict:
    """Divisibility facts for all k <= k_max and quadratic-residue facts
    for every prime G_k/H_k with k <= qr_k_max.

    Facts: 5 | G_k iff k == 0,3 (mod 4); 5 | H_k iff k == 1,2 (mod 4);
    13 | H_k whenever k == 4 (mod 12).  For prime G_k: 3 is a QNR iff k
    even, 5 is a QNR iff k == 1 (mod 4), 7 is always a QNR.  For prime
    H_k: 3 is a QNR iff k odd (H_k == (-1)^k mod 3 and H_k == 1 mod 8,
    so reciprocity gives (3|H_k) = ((-1)^k|3)), 5 is a QNR iff
    k == 3 (mod 4)."""
    violations = []
    checks = 0
    for k in range(1, k_max + 1):
        g5 = (pow(2, 2 * k + 1, 5) + pow(2, k + 1, 5) + 1) % 5 == 0
        if g5 != (k % 4 in (0, 3)):
            violations.append(("5 | G_k iff k == 0,3 (4)", k))
        h5 = (pow(2, 2 * k + 1, 5) - pow(2, k + 1, 5) + 1) % 5 == 0
        if h5 != (k % 4 in (1, 2)):
            violations.append(("5 | H_k iff k == 1,2 (4)", k))
        if k % 12 == 4:
            h13 = (pow(2, 2 * k + 1, 13) - pow(2, k + 1, 13) + 1) % 13 == 0
            if not h13:
                violations.append(("13 | H_k when k == 4 (12)", k))
        checks += 3
    qr_primes = 0
    for k in range(1, qr_k_max + 1):
        g = _g_value(k)
        if k % 4 in (1, 2) and miller_rabin(g):
            qr_primes += 1
            if (legendre(3, g) == -1) != (k % 2 == 0):
                violations.append(("3 QNR mod G_k iff k even", k))
            if (legendre(5, g) == -1) != (k % 4 == 1):
                violations.append(("5 QNR mod G_k iff k == 1 (4)", k))
            if legendre(7, g) != -1:
                violations.append(("7 QNR mod G_k", k))
        h = _h_value(k)
        if k >= 2 and k % 4 in (0, 3) and miller_rabin(h):
            qr_primes += 1
            if (legendre(3, h) == -1) != (k % 2 == 1):
                violations.append(("3 QNR mod H_k iff k odd", k))
            if (legendre(5, h) == -1) != (k % 4 == 3):
                violations.append(("5 QNR mod H_k iff k == 3 (4)", k))
    return {
        "divisibility_checks": checks,
        "qr_primes_checked": qr_primes,
        "violations": violations,
        "ok": not violations,
    }


def _quartic_unit(p: int) -> int:
    for a in range(2, p):
        i = pow(a, (p - 1) // 4, p)
        if i * i % p == p - 1:
            return i
    raise ValueError("no fourth root of unity mod %d" % p)


@lru_cache(maxsize=64)
def _sqrt_table(p: int) -> dict:
    roots = {}
    for y in range(p):
        roots.setdefault(y * y % p, y)
    return roots


def verify_step_properties(
    samples: int = 500, seed: int = 0, reduce_samples: int = 10000
) -> dict:
    """Engine-versus-oracle property sweep; returns counts and failures.

    (a) i_unit squares to -1: G/H for k <= 1000, F for k <= 16 (an F_k
        operand doubles in size with k, so 1000 is out of reach for F).
    (b) eta o eta = negated doubling on x: engine x-only route vs affine.
    (c) x-only eta/double agree with affine addition.
    (d) x-coordinate of eta output is a square (checked by Euler).
    (e) special (fold) reduction equals plain Python % on random inputs
        below N^2 for all three forms.
    """
    rng = random.Random(seed)
    failures = []

    i_unit_checked = 0
    for form, kmax in ((Form.F, 16), (Form.G, 1000), (Form.H, 1000)):
        for k in range(1, kmax + 1):
            try:
                i_unit(build_modulus(form, k))  # validates i^2 == -1
            except ValueError:
                failures.append(("i_unit", form.value, k))
            i_unit_checked += 1

    ps = [int(p) for p in primes_up_to(3000) if p % 4 == 1 and p >= 13]
    eta_sq = agree_eta = agree_dbl = image_qr = 0
    while min(eta_sq, agree_eta, agree_dbl) < samples:
        p = rng.choice(ps)
        mod = Modulus(p)
        c = rng.randrange(1, p)
        cp = CurveParams(mod, c)
        m = int(cp.m.value)
        iu = QuarticUnit(mod.residue(_quartic_unit(p)))
        x = rng.randrange(1, p)
        fx = (pow(x, 3, p) - m * x) % p
        root = _sqrt_table(p).get(fx)
        if root is None or fx == 0:
            continue
        pt = AffinePoint(mod.residue(x), mod.residue(root))
        # (c) x-only vs affine, one eta and one doubling step
        via_affine = to_x_state(affine_add(pt, apply_i(pt, iu), cp))
        via_x = eta_step(Finite(mod.residue(x)), cp, iu)
        if via_x != via_affine:
            failures.append(("eta vs affine", p, m, x))
        agree_eta += 1
        dbl_affine = to_x_state(affine_add(pt, pt, cp))
        dbl_x = double_step(Finite(mod.residue(x)), cp)
        if dbl_x != dbl_affine:
            failures.append(("double vs affine", p, m, x))
        agree_dbl += 1
        # (d) image of eta has square x
        if isinstance(via_x, Finite):
            if legendre(int(via_x.x.value), p) == -1:
                failures.append(("eta image QR", p, m, x))
            image_qr += 1
        # (b) eta(eta(x)) == -x(2P), needs 2P outside {inf, (0,0)} and
        # eta(P) itself finite
        two_p = affine_add(pt, pt, cp)
        if two_p is INFINITY or two_p.x.is_zero or not isinstance(via_x, Finite):
            continue
        twice = eta_step(via_x, cp, iu)
        want = (-two_p.x).value
        if not (isinstance(twice, Finite) and twice.x.value == want):
            failures.append(("eta o eta = -2", p, m, x))
        eta_sq += 1

    reduce_checked = 0
    per_form = max(1, reduce_samples // 3)
    for form in (Form.F, Form.G, Form.H):
        kmax = 16 if form is Form.F else 64
        for _ in range(per_form):
            k = rng.randrange(2, kmax + 1)
            mod = build_modulus(form, k)
            nv = int(mod.value)
            x = rng.randrange(nv * nv)
            got = int(mod.reduce(Natural(x)))
            if got != x % nv:
                failures.append(("special_reduce", form.value, k, x))
            reduce_checked += 1

    return {
        "i_unit_checked": i_unit_checked,
        "eta_square_samples": eta_sq,
        "eta_affine_samples": agree_eta,
        "double_affine_samples": agree_dbl,
        "image_qr_samples": image_qr,
        "reduce_checked": reduce_checked,
        "failures": failures,
        "ok": not failures,
    }
