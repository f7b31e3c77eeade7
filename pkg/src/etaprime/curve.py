"""Arithmetic on y^2 = x^3 - m*x and its endomorphism eta = 1 + i.

The curve has complex multiplication by i: (x, y) -> (-x, i*y) where i is a
square root of -1 modulo n.  The tests in this package only need the
x-coordinate of repeated eta applications, so the workhorses here are
x-only maps; full affine points exist as an independent cross-check route
and for small-field experiments.

Working modulo a possibly composite n, a denominator can fail to invert.
A proper divisor surfacing that way is reported through FactorFound, which
settles compositeness immediately.
"""

from .bignat import Modulus, Natural, NonInvertible, Residue, gcd

__all__ = [
    "AffinePoint",
    "CurveParams",
    "FactorFound",
    "Finite",
    "INFINITY",
    "QuarticUnit",
    "ZERO_POINT",
    "affine_add",
    "apply_i",
    "double_step",
    "eta_step",
    "i_unit",
    "on_curve",
    "scalar_mul",
    "to_x_state",
]


class FactorFound(Exception):
    """A denominator shared a proper factor with the modulus."""

    def __init__(self, factor: Natural, modulus: Natural):
        super().__init__("found factor %s of %s" % (factor, modulus))
        self.factor = factor
        self.modulus = modulus


class _ZeroPoint:
    """x-only state for the 2-torsion point (0, 0)."""

    __slots__ = ()

    def __repr__(self):
        return "ZeroPoint"


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "Infinity"


ZERO_POINT = _ZeroPoint()
INFINITY = _Infinity()


class Finite:
    """x-only state with x != 0; (0, 0) and infinity have their own states."""

    __slots__ = ("x",)

    def __init__(self, x: Residue):
        if x.is_zero:
            raise ValueError("x = 0 is the ZERO_POINT state")
        self.x = x

    def __eq__(self, other):
        if isinstance(other, Finite):
            return self.x == other.x
        return NotImplemented

    def __hash__(self):
        return hash(("Finite", self.x))

    def __repr__(self):
        return "Finite(%s)" % self.x


class CurveParams:
    """Curve y^2 = x^3 - m*x with m = root^4 a unit mod n.

    Storing the fourth root keeps sqrt(m) = root^2 available exactly; the
    tests accept final x-states in {0, +/- sqrt(m)}.
    """

    __slots__ = ("modulus", "root", "sqrt_m", "m")

    def __init__(self, modulus: Modulus, root):
        root = Natural(root)
        if gcd(root, modulus.value) != 1:
            raise ValueError("curve coefficient root shares a factor with n")
        r = modulus.residue(root)
        self.modulus = modulus
        self.root = root
        self.sqrt_m = r.sqr()
        self.m = self.sqrt_m.sqr()

    def __repr__(self):
        return "CurveParams(m=%s mod %r)" % (self.m, self.modulus.value)


class QuarticUnit:
    """A residue i with i^2 == -1 (mod n), checked at construction.

    The identity holds for composite n of the right shape too, so the
    check does not presuppose primality.
    """

    __slots__ = ("value",)

    def __init__(self, value: Residue):
        if not (value.sqr() + value.modulus.one()).is_zero:
            raise ValueError("i^2 + 1 != 0 for the given residue")
        self.value = value

    def __repr__(self):
        return "QuarticUnit(%s)" % self.value


def i_unit(n) -> QuarticUnit:
    """Square root of -1 mod n derived from the form's a^2 + b^2 split.

    F: n = (2^(2^(k-1)))^2 + 1^2       -> i = 2^(2^(k-1))
    G: n = (2^k + 1)^2 + (2^k)^2       -> i = (2^k + 1) / 2^k
    H: n = (2^k - 1)^2 + (2^k)^2       -> i = (2^k - 1) / 2^k
    These are exact integer identities, so i is valid whether or not n is
    prime.
    """
    from .bignat import Form, FormModulus, ONE

    if not isinstance(n, FormModulus):
        raise TypeError("i_unit needs a form modulus")
    k = n.k
    if n.form is Form.F:
        v = n.residue(ONE << (1 << (k - 1)))
    elif n.form is Form.G:
        v = n.residue((ONE << k) + 1) * n.residue(ONE << k).inverse()
    else:
        v = n.residue((ONE << k) - 1) * n.residue(ONE << k).inverse()
    return QuarticUnit(v)


def eta_step(state, params: CurveParams, i: QuarticUnit):
    """x-coordinate of eta(P) = P + i(P) from the x-coordinate of P.

    x' = (x^2 - m) / (2*i*x).  The kernel of eta is {infinity, (0, 0)},
    so both special states map to infinity.  A non-invertible denominator
    with gcd strictly between 1 and n raises FactorFound.
    """
    if state is INFINITY or state is ZERO_POINT:
        return INFINITY
    x = state.x
    den = (i.value * x).double()
    try:
        dinv = den.inverse()
    except NonInvertible as e:
        if e.gcd == params.modulus.value:
            raise AssertionError("zero denominator for nonzero x") from None
        raise FactorFound(e.gcd, params.modulus.value) from None
    xp = (x.sqr() - params.m) * dinv
    return ZERO_POINT if xp.is_zero else Finite(xp)


def double_step(state, params: CurveParams):
    """x-coordinate doubling: x(2P) = (x^2 + m)^2 / (4x(x^2 - m)).

    A denominator with gcd = n means the point was 2-torsion, so 2P is
    infinity; a proper gcd raises FactorFound.
    """
    if state is INFINITY or state is ZERO_POINT:
        return INFINITY
    x = state.x
    x2 = x.sqr()
    den = (x * (x2 - params.m)).double().double()
    try:
        dinv = den.inverse()
    except NonInvertible as e:
        if e.gcd == params.modulus.value:
            return INFINITY
        raise FactorFound(e.gcd, params.modulus.value) from None
    xp = (x2 + params.m).sqr() * dinv
    return ZERO_POINT if xp.is_zero else Finite(xp)


class AffinePoint:
    """Full (x, y) point; the identity is the shared INFINITY singleton."""

    __slots__ = ("x", "y")

    def __init__(self, x: Residue, y: Residue):
        self.x = x
        self.y = y

    def __eq__(self, other):
        if isinstance(other, AffinePoint):
            return self.x == other.x and self.y == other.y
        return NotImplemented

    def __hash__(self):
        return hash(("Affine", self.x, self.y))

    def __repr__(self):
        return "AffinePoint(%s, %s)" % (self.x, self.y)


def on_curve(p, params: CurveParams) -> bool:
    if p is INFINITY:
        return True
    lhs = p.y.sqr()
    rhs = p.x * (p.x.sqr() - params.m)
    return lhs == rhs


def apply_i(p, i: QuarticUnit):
    """The automorphism (x, y) -> (-x, i*y)."""
    if p is INFINITY:
        return INFINITY
    return AffinePoint(-p.x, i.value * p.y)


def affine_add(p, q, params: CurveParams):
    """Chord-tangent addition; intended for prime moduli (cross-checks)."""
    if p is INFINITY:
        return q
    if q is INFINITY:
        return p
    if p.x == q.x:
        if (p.y + q.y).is_zero:
            return INFINITY
        x2 = p.x.sqr()
        lam = (x2 + x2 + x2 - params.m) * p.y.double().inverse()
    else:
        lam = (q.y - p.y) * (q.x - p.x).inverse()
    x3 = lam.sqr() - p.x - q.x
    y3 = lam * (p.x - x3) - p.y
    return AffinePoint(x3, y3)


def scalar_mul(e, p, params: CurveParams):
    """e*P by binary double-and-add over affine_add."""
    e = int(e)
    if e < 0:
        raise ValueError("scalar must be nonnegative")
    result = INFINITY
    addend = p
    while e:
        if e & 1:
            result = affine_add(result, addend, params)
        e >>= 1
        if e:
            addend = affine_add(addend, addend, params)
    return result


def to_x_state(p):
    """Project an affine point to its x-only state."""
    if p is INFINITY:
        return INFINITY
    if p.x.is_zero:
        return ZERO_POINT
    return Finite(p.x)
