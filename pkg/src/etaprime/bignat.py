"""Natural numbers, special-form moduli, and modular arithmetic.

The three supported modulus families, indexed by k:

    F: 2^(2^k) + 1
    G: 2^(2k+1) + 2^(k+1) + 1
    H: 2^(2k+1) - 2^(k+1) + 1

Each satisfies a congruence 2^s == e1*2^t - 1 (mod N) that turns reduction
into shifts and adds; generic odd moduli fall back to long division.
"""

import enum

import numpy as np

from . import _kernels as K
from ._kernels import EMPTY


class Form(enum.Enum):
    F = "F"
    G = "G"
    H = "H"

    @classmethod
    def parse(cls, s: str) -> "Form":
        try:
            return cls[s.strip().upper()]
        except KeyError:
            raise ValueError("unknown form %r (expected f, g, or h)" % s) from None


class NonInvertible(ArithmeticError):
    """Inversion failed; .gcd carries the witness gcd(a, n) > 1."""

    def __init__(self, gcd: "Natural"):
        super().__init__("value is not invertible; gcd with modulus is %s" % gcd)
        self.gcd = gcd


def _limbs_from_int(x: int) -> np.ndarray:
    if x == 0:
        return EMPTY
    nb = ((x.bit_length() + 31) // 32) * 4
    buf = x.to_bytes(nb, "little")
    return np.frombuffer(buf, dtype="<u4").astype(np.uint64)


def _int_from_limbs(a: np.ndarray) -> int:
    if a.shape[0] == 0:
        return 0
    return int.from_bytes(a.astype("<u4").tobytes(), "little")


_CHUNK = np.uint64(10 ** 9)


class Natural:
    """Immutable arbitrary-size natural number backed by the limb kernels."""

    __slots__ = ("_limbs",)

    def __init__(self, value=0):
        if isinstance(value, Natural):
            self._limbs = value._limbs
        elif isinstance(value, int):
            if value < 0:
                raise ValueError("Natural cannot be negative")
            self._limbs = _limbs_from_int(value)
        elif isinstance(value, str):
            self._limbs = Natural.from_str(value)._limbs
        else:
            raise TypeError("cannot build Natural from %r" % type(value))

    @classmethod
    def _raw(cls, limbs: np.ndarray) -> "Natural":
        # Wrap a kernel result; trims leading zeros, does not copy.
        out = object.__new__(cls)
        nz = np.flatnonzero(limbs)
        out._limbs = limbs[: nz[-1] + 1] if nz.size else EMPTY
        return out

    @classmethod
    def from_str(cls, s: str) -> "Natural":
        s = s.strip().lower()
        if s.startswith("0x"):
            return cls.from_hex(s)
        if not s or not s.isdigit():
            raise ValueError("not a decimal literal: %r" % s)
        acc = EMPTY
        for i in range(0, len(s), 9):
            chunk = s[i : i + 9]
            acc = K.k_muladd_small(
                acc, np.uint64(10 ** len(chunk)), np.uint64(int(chunk))
            )
        return cls._raw(acc)

    @classmethod
    def from_hex(cls, s: str) -> "Natural":
        s = s.strip().lower()
        if s.startswith("0x"):
            s = s[2:]
        if not s or any(c not in "0123456789abcdef" for c in s):
            raise ValueError("not a hex literal")
        limbs = []
        for i in range(len(s), 0, -8):
            limbs.append(int(s[max(0, i - 8) : i], 16))
        return cls._raw(np.array(limbs, dtype=np.uint64))

    # -- conversions ----------------------------------------------------

    def __int__(self) -> int:
        return _int_from_limbs(self._limbs)

    def __str__(self) -> str:
        # Decimal serialization by repeated division; stays on the engine.
        if self._limbs.shape[0] == 0:
            return "0"
        parts = []
        cur = self._limbs
        while cur.shape[0] > 0:
            cur, r = K.k_divmod_small(cur, _CHUNK)
            parts.append(int(r))
        out = [str(parts[-1])]
        for p in parts[-2::-1]:
            out.append("%09d" % p)
        return "".join(out)

    def to_hex(self) -> str:
        if self._limbs.shape[0] == 0:
            return "0x0"
        top = "%x" % int(self._limbs[-1])
        rest = "".join("%08x" % int(v) for v in self._limbs[-2::-1])
        return "0x" + top + rest

    def __repr__(self) -> str:
        s = str(self)
        if len(s) > 40:
            s = s[:18] + "..." + s[-18:]
        return "Natural(%s)" % s

    # -- structure ------------------------------------------------------

    def bit_length(self) -> int:
        n = self._limbs.shape[0]
        if n == 0:
            return 0
        return 32 * (n - 1) + int(self._limbs[-1]).bit_length()

    def bit(self, i: int) -> int:
        w, b = divmod(i, 32)
        if w >= self._limbs.shape[0]:
            return 0
        return (int(self._limbs[w]) >> b) & 1

    def trailing_zeros(self) -> int:
        if self._limbs.shape[0] == 0:
            raise ValueError("trailing_zeros of zero")
        for w in range(self._limbs.shape[0]):
            v = int(self._limbs[w])
            if v:
                return 32 * w + (v & -v).bit_length() - 1
        raise AssertionError("non-canonical limbs")

    @property
    def is_zero(self) -> bool:
        return self._limbs.shape[0] == 0

    def _low(self, mask: int) -> int:
        # Low bits as a machine int; mask must be 2^j - 1 with j <= 32.
        if self._limbs.shape[0] == 0:
            return 0
        return int(self._limbs[0]) & mask

    # -- arithmetic -----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Natural):
            return other
        if isinstance(other, int):
            return Natural(other)
        return None

    def __add__(self, other):
        o = Natural._coerce(other)
        if o is None:
            return NotImplemented
        return Natural._raw(K.k_add(self._limbs, o._limbs))

    __radd__ = __add__

    def __sub__(self, other):
        o = Natural._coerce(other)
        if o is None:
            return NotImplemented
        if K.k_cmp(self._limbs, o._limbs) < 0:
            raise ValueError("Natural subtraction underflow")
        return Natural._raw(K.k_sub(self._limbs, o._limbs))

    def __rsub__(self, other):
        o = Natural._coerce(other)
        if o is None:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        o = Natural._coerce(other)
        if o is None:
            return NotImplemented
        return Natural._raw(K.k_mul(self._limbs, o._limbs))

    __rmul__ = __mul__

    def sqr(self) -> "Natural":
        return Natural._raw(K.k_sqr(self._limbs))

    def __pow__(self, e: int) -> "Natural":
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = Natural(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base.sqr()
        return result

    def __divmod__(self, other):
        o = Natural._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("division by zero")
        q, r = K.k_divmod(self._limbs, o._limbs)
        return Natural._raw(q), Natural._raw(r)

    def __floordiv__(self, other):
        d = self.__divmod__(other)
        return d[0] if d is not NotImplemented else NotImplemented

    def __mod__(self, other):
        d = self.__divmod__(other)
        return d[1] if d is not NotImplemented else NotImplemented

    def __lshift__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        return Natural._raw(K.k_shl(self._limbs, n))

    def __rshift__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        return Natural._raw(K.k_shr(self._limbs, n))

    # -- comparisons ----------------------------------------------------

    def _cmp(self, other):
        o = Natural._coerce(other)
        if o is None:
            return None
        return K.k_cmp(self._limbs, o._limbs)

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        return hash(self._limbs.tobytes())

    def __bool__(self):
        return self._limbs.shape[0] != 0


ZERO = Natural(0)
ONE = Natural(1)


class Modulus:
    """Odd modulus >= 3; reduction by long division."""

    __slots__ = ("value", "bit_len")

    def __init__(self, value):
        v = Natural(value)
        if v < 3 or v._low(1) == 0:
            raise ValueError("modulus must be odd and >= 3")
        self.value = v
        self.bit_len = v.bit_length()

    def reduce(self, x: Natural) -> Natural:
        x = Natural(x)
        if x < self.value:
            return x
        return Natural._raw(K.k_divmod(x._limbs, self.value._limbs)[1])

    def residue(self, x) -> "Residue":
        return Residue(self, self.reduce(Natural(x)), _reduced=True)

    def one(self) -> "Residue":
        return Residue(self, ONE, _reduced=True)

    def zero(self) -> "Residue":
        return Residue(self, ZERO, _reduced=True)

    def __eq__(self, other):
        if not isinstance(other, Modulus):
            return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return "Modulus(%r)" % self.value


class FormModulus(Modulus):
    """Modulus of one of the three special shapes, reduced by folding.

    The congruence 2^s == e1*2^t - 1 (mod N) holds with
        F: s = 2^k,   e1 = 0
        G: s = 2k+1,  e1 = -1, t = k+1
        H: s = 2k+1,  e1 = +1, t = k+1
    For G and H at k = 1 the fold has a fixed point below the exit
    threshold, so those two tiny moduli (13 and 5) use long division.
    """

    __slots__ = ("form", "k", "_s_bits", "_t_bits", "_e1", "_fold")

    def __init__(self, form: Form, k: int):
        if not isinstance(k, int) or k < 1:
            raise ValueError("k must be an integer >= 1")
        form = Form(form)
        if form is Form.F:
            s = 1 << k
            v = (ONE << s) + 1
            t, e1 = 0, 0
        elif form is Form.G:
            s = 2 * k + 1
            v = (ONE << s) + (ONE << (k + 1)) + 1
            t, e1 = k + 1, -1
        else:
            s = 2 * k + 1
            v = (ONE << s) - (ONE << (k + 1)) + 1
            t, e1 = k + 1, 1
        super().__init__(v)
        self.form = form
        self.k = k
        self._s_bits = s
        self._t_bits = t
        self._e1 = e1
        self._fold = not (form in (Form.G, Form.H) and k == 1)

    def reduce(self, x: Natural) -> Natural:
        x = Natural(x)
        if x < self.value:
            return x
        if not self._fold:
            return super().reduce(x)
        return Natural._raw(
            K.k_fold_reduce(
                x._limbs, self.value._limbs, self._s_bits, self._t_bits, self._e1
            )
        )

    def __repr__(self):
        return "FormModulus(%s, k=%d)" % (self.form.value, self.k)


def build_modulus(form, k: int) -> FormModulus:
    """Construct the modulus for the given family and index."""
    if not isinstance(form, Form):
        form = Form.parse(str(form))
    return FormModulus(form, k)


def special_reduce(x, n: Modulus) -> Natural:
    """x mod n using the modulus's native reduction path."""
    return n.reduce(Natural(x))


class Residue:
    """Element of Z/n for a fixed odd modulus n."""

    __slots__ = ("modulus", "value")

    def __init__(self, modulus: Modulus, value, _reduced=False):
        self.modulus = modulus
        v = Natural(value)
        self.value = v if _reduced else modulus.reduce(v)

    def _same(self, other) -> "Residue":
        if isinstance(other, Residue):
            if other.modulus.value != self.modulus.value:
                raise ValueError("residues from different moduli")
            return other
        return Residue(self.modulus, Natural(other))

    def __add__(self, other):
        o = self._same(other)
        return Residue(
            self.modulus,
            Natural._raw(
                K.k_addmod(self.value._limbs, o.value._limbs, self.modulus.value._limbs)
            ),
            _reduced=True,
        )

    def __sub__(self, other):
        o = self._same(other)
        return Residue(
            self.modulus,
            Natural._raw(
                K.k_submod(self.value._limbs, o.value._limbs, self.modulus.value._limbs)
            ),
            _reduced=True,
        )

    def __mul__(self, other):
        o = self._same(other)
        prod = Natural._raw(K.k_mul(self.value._limbs, o.value._limbs))
        return Residue(self.modulus, self.modulus.reduce(prod), _reduced=True)

    def sqr(self) -> "Residue":
        sq = Natural._raw(K.k_sqr(self.value._limbs))
        return Residue(self.modulus, self.modulus.reduce(sq), _reduced=True)

    def __neg__(self):
        return Residue(self.modulus, ZERO, _reduced=True) - self

    def double(self) -> "Residue":
        return self + self

    def pow(self, e) -> "Residue":
        e = Natural(e) if not isinstance(e, Natural) else e
        if e.is_zero:
            return self.modulus.one()
        r = self
        for i in range(e.bit_length() - 2, -1, -1):
            r = r.sqr()
            if e.bit(i):
                r = r * self
        return r

    def inverse(self) -> "Residue":
        if self.value.is_zero:
            raise NonInvertible(self.modulus.value)
        g, x = K.k_invgcd(self.value._limbs, self.modulus.value._limbs)
        g = Natural._raw(g)
        if g != ONE:
            raise NonInvertible(g)
        return Residue(self.modulus, Natural._raw(x), _reduced=True)

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero

    def __eq__(self, other):
        if isinstance(other, Residue):
            return (
                self.modulus.value == other.modulus.value
                and self.value == other.value
            )
        if isinstance(other, (int, Natural)):
            return self.value == self.modulus.reduce(Natural(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.modulus.value, self.value))

    def __int__(self):
        return int(self.value)

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return "Residue(%s mod %r)" % (self.value, self.modulus.value)


def pow_mod(base, exp, n: Modulus) -> Natural:
    """base^exp mod n."""
    return n.residue(base).pow(exp).value


def gcd(a, b) -> Natural:
    a = Natural(a)
    b = Natural(b)
    return Natural._raw(K.k_gcd(a._limbs, b._limbs))


def inv_mod(a, n: Modulus) -> Natural:
    """Inverse of a mod n; raises NonInvertible with the gcd witness."""
    return n.residue(a).inverse().value


def jacobi(a, n) -> int:
    """Jacobi symbol (a/n) for odd n >= 3."""
    a = Natural(a)
    n = Natural(n)
    if n < 3 or n._low(1) == 0:
        raise ValueError("jacobi requires odd n >= 3")
    a = a % n
    result = 1
    while not a.is_zero:
        tz = a.trailing_zeros()
        if tz:
            a = a >> tz
            if tz & 1 and n._low(7) in (3, 5):
                result = -result
        if a._low(3) == 3 and n._low(3) == 3:
            result = -result
        a, n = n % a, a
    if n == ONE:
        return result
    return 0
