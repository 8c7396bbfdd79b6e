"""Arithmetic in the finite field GF(p^r).

Elements are encoded as integers: the element with polynomial coefficients
``c_0, ..., c_{r-1}`` (low degree first) is ``sum(c_j * p**j)``, so the encodings
are exactly ``0..q-1``, ``0`` is the additive and ``1`` the multiplicative identity.
All dense arithmetic operates on numpy ``int64`` arrays of these encodings.
"""
import logging
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from functools import lru_cache

import numpy as np

from hullcode.valid import (
    HullCodeError,
    InvalidParamsError,
    as_int,
    prime_factors,
    prime_power,
    valid_prime,
)

logger = logging.getLogger(__name__)

MAX_FIELD_SIZE = 2**20
TABLE_FIELD_SIZE = 2**16


class SizeCapExceededError(InvalidParamsError):
    """Raise when the requested field is larger than the configured size cap."""


class FieldMismatchError(HullCodeError, ValueError):
    """Raise when operands belong to different fields."""


class LengthMismatchError(HullCodeError, ValueError):
    """Raise when vectors of different length are combined."""


class FieldDivisionByZeroError(HullCodeError, ZeroDivisionError):
    """Raise when the inverse of the zero element is requested."""


class ZeroTargetError(HullCodeError, ValueError):
    """Raise when the discrete logarithm of zero is requested."""


class BaseNotPrimitiveError(HullCodeError, ValueError):
    """Raise when a discrete logarithm base does not generate the unit group."""


class WrongCharacteristicError(HullCodeError, ValueError):
    """Raise when an operation is not available in the field characteristic."""


class NoSquareRootOfMinusOneError(HullCodeError, ValueError):
    """Raise when -1 is not a square in the field (q = 3 mod 4)."""


class NoSolutionError(HullCodeError, ValueError):
    """Raise when no pair of nonzero elements has squares summing to -1."""


# polynomials over GF(p): coefficient lists, low degree first, no trailing zeros


def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a, b, p):
    size = max(len(a), len(b))
    a = list(a) + [0] * (size - len(a))
    b = list(b) + [0] * (size - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_monic(a, p):
    a = _poly_trim(a)
    if not a:
        return a
    lead_inv = pow(a[-1], -1, p)
    return [(c * lead_inv) % p for c in a]


def _poly_mod(a, f, p):
    """Remainder of a modulo the monic polynomial f."""
    a = _poly_trim(a)
    deg_f = len(f) - 1
    while len(a) > deg_f:
        coef = a[-1]
        shift = len(a) - 1 - deg_f
        for j, c in enumerate(f):
            a[shift + j] = (a[shift + j] - coef * c) % p
        a = _poly_trim(a)
    return a


def _poly_gcd(a, b, p):
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        b = _poly_monic(b, p)
        a, b = b, _poly_mod(a, b, p)
    return _poly_monic(a, p)


def _poly_powmod(base, exponent, f, p):
    result = [1]
    base = _poly_mod(base, f, p)
    while exponent:
        if exponent & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        exponent >>= 1
    return result


def is_irreducible(modulus, p):
    """Irreducibility of a monic polynomial over GF(p).

    Parameters
    ----------
    modulus: sequence of int
        Coefficients ``c_0..c_r`` (low degree first), ``c_r = 1``.
    p: int
        Prime characteristic.

    Returns
    -------
    bool

    Notes
    -----
    Ben-Or test: a polynomial f of degree r is irreducible iff
    ``gcd(f, x^(p^i) - x) = 1`` for every ``1 <= i <= r // 2``.
    """
    f = _poly_trim(modulus)
    r = len(f) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    h = x
    for _ in range(r // 2):
        h = _poly_powmod(h, p, f, p)
        if len(_poly_gcd(f, _poly_sub(h, x, p), p)) > 1:
            return False
    return True


def _to_digits(value, p, r):
    digits = []
    for _ in range(r):
        value, digit = divmod(value, p)
        digits.append(digit)
    return digits


def _from_digits(digits, p):
    value = 0
    for digit in reversed(digits):
        value = value * p + digit
    return value


def smallest_irreducible(p, r):
    """Monic irreducible polynomial of degree r with the smallest encoding.

    Candidates ``x^r + c_{r-1} x^{r-1} + ... + c_0`` are scanned in increasing
    order of ``sum(c_j * p**j)``; for r = 1 this yields ``x``.
    """
    for value in range(p**r):
        candidate = _to_digits(value, p, r) + [1]
        if is_irreducible(candidate, p):
            return tuple(candidate)
    raise AssertionError(f"no irreducible polynomial of degree {r} over GF({p})")


@dataclass(frozen=True)
class Field:
    """Finite field GF(p^r) defined by a monic irreducible modulus.

    Instances are created by :func:`hullcode.gf.field_new` (cached per ``(p, r)``)
    and are immutable; the optional log/antilog tables are read-only arrays.
    """

    p: int
    r: int
    modulus: tuple
    _powers: np.ndarray = dataclass_field(init=False, repr=False, compare=False)
    _primitive: int = dataclass_field(init=False, repr=False, compare=False)
    _exp: np.ndarray = dataclass_field(init=False, repr=False, compare=False)
    _log: np.ndarray = dataclass_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.modulus) != self.r + 1 or self.modulus[-1] != 1:
            raise InvalidParamsError(
                f"Modulus {list(self.modulus)} should be monic of degree {self.r}."
            )
        powers = np.array([self.p**j for j in range(self.r)], dtype=np.int64)
        powers.flags.writeable = False
        object.__setattr__(self, "_powers", powers)
        object.__setattr__(self, "_primitive", self._search_primitive())

        exp_table, log_table = None, None
        if self.q <= TABLE_FIELD_SIZE:
            exp_table, log_table = self._build_tables()
        object.__setattr__(self, "_exp", exp_table)
        object.__setattr__(self, "_log", log_table)

    @property
    def q(self):
        """Number of field elements."""
        return self.p**self.r

    @property
    def has_tables(self):
        return self._log is not None

    @property
    def minus_one(self):
        return self.neg(1)

    def __call__(self, value):
        return FieldElement(self, value)

    def __str__(self):
        return f"GF({self.q})"

    def to_dict(self):
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    # construction helpers, use polynomial arithmetic only

    def _mul_poly(self, a, b):
        if self.r == 1:
            return (a * b) % self.p
        product = _poly_mul(
            _poly_trim(_to_digits(a, self.p, self.r)),
            _poly_trim(_to_digits(b, self.p, self.r)),
            self.p,
        )
        remainder = _poly_mod(product, self.modulus, self.p)
        return _from_digits(remainder + [0] * (self.r - len(remainder)), self.p)

    def _pow_poly(self, a, exponent):
        if self.r == 1:
            return pow(a, exponent, self.p)
        result = 1
        while exponent:
            if exponent & 1:
                result = self._mul_poly(result, a)
            a = self._mul_poly(a, a)
            exponent >>= 1
        return result

    def _search_primitive(self):
        group_order = self.q - 1
        factors = prime_factors(group_order)
        for candidate in range(1, self.q):
            if all(
                self._pow_poly(candidate, group_order // factor) != 1
                for factor in factors
            ):
                return candidate
        raise AssertionError(f"no primitive element found in {self}")

    def _build_tables(self):
        group_order = self.q - 1
        exp_table = np.zeros(2 * group_order, dtype=np.int64)
        log_table = np.zeros(self.q, dtype=np.int64)
        value = 1
        for exponent in range(group_order):
            exp_table[exponent] = value
            log_table[value] = exponent
            value = self._mul_poly(value, self._primitive)
        exp_table[group_order:] = exp_table[:group_order]
        exp_table.flags.writeable = False
        log_table.flags.writeable = False
        logger.debug("Built log/antilog tables for %s", self)
        return exp_table, log_table

    # vectorized arithmetic on encodings

    def _digitwise(self, a, b=None):
        a = np.asarray(a, dtype=np.int64)
        if b is None:
            out = np.zeros(a.shape, dtype=np.int64)
            for power in self._powers:
                out += ((-((a // power) % self.p)) % self.p) * power
            return out
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for power in self._powers:
            out += (((a // power) + (b // power)) % self.p) * power
        return out

    def add_array(self, a, b):
        """Elementwise field addition (numpy broadcasting applies)."""
        if self.r == 1:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(np.asarray(a, dtype=np.int64), b)
        return self._digitwise(a, b)

    def neg_array(self, a):
        if self.r == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        if self.p == 2:
            return np.array(a, dtype=np.int64)
        return self._digitwise(a)

    def sub_array(self, a, b):
        return self.add_array(a, self.neg_array(b))

    def mul_array(self, a, b):
        """Elementwise field multiplication (numpy broadcasting applies)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.r == 1:
            return (a * b) % self.p
        if self.has_tables:
            product = self._exp[self._log[a] + self._log[b]]
            return np.where((a == 0) | (b == 0), 0, product)
        return np.vectorize(self._mul_poly, otypes=[np.int64])(a, b)

    def matmul(self, a, b):
        """Matrix product of two 2-D encoding arrays over the field."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.r == 1:
            return (a @ b) % self.p
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for j in range(a.shape[1]):
            out = self.add_array(out, self.mul_array(a[:, j : j + 1], b[j : j + 1, :]))
        return out

    # scalar arithmetic on encodings

    def add(self, a, b):
        if self.r == 1:
            return (a + b) % self.p
        return int(self.add_array(a, b))

    def neg(self, a):
        if self.r == 1:
            return (-a) % self.p
        return int(self.neg_array(a))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.r == 1:
            return (a * b) % self.p
        return int(self.mul_array(a, b))

    def inv(self, a):
        if a == 0:
            raise FieldDivisionByZeroError(f"Zero has no inverse in {self}.")
        if self.r == 1:
            return pow(a, -1, self.p)
        if self.has_tables:
            return int(self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)])
        return self._pow_poly(a, self.q - 2)

    def power(self, a, exponent):
        """Raise an encoding to an integer (possibly negative) power."""
        if exponent < 0:
            return self.power(self.inv(a), -exponent)
        if a == 0:
            return 1 if exponent == 0 else 0
        if self.has_tables:
            return int(self._exp[(int(self._log[a]) * exponent) % (self.q - 1)])
        return self._pow_poly(a, exponent)

    def order(self, a):
        """Multiplicative order of a nonzero encoding."""
        if a == 0:
            raise FieldDivisionByZeroError("Zero has no multiplicative order.")
        order = self.q - 1
        for factor in prime_factors(self.q - 1):
            while order % factor == 0 and self.power(a, order // factor) == 1:
                order //= factor
        return order


@dataclass(frozen=True)
class FieldElement:
    """Element of a :class:`Field`, stored by its canonical integer encoding."""

    field: Field
    value: int

    def __post_init__(self):
        value = as_int(self.value, "value")
        if not 0 <= value < self.field.q:
            raise InvalidParamsError(
                f"Encoding {value} is not an element of {self.field}."
            )
        object.__setattr__(self, "value", value)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"{self.field}({self.value})"

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"Cannot combine elements of {self.field} and {other.field}."
                )
            return other.value
        return FieldElement(self.field, other).value

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._coerce(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        divisor = self.field.inv(self._coerce(other))
        return FieldElement(self.field, self.field.mul(self.value, divisor))

    def __pow__(self, exponent):
        return FieldElement(self.field, self.field.power(self.value, exponent))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))


@lru_cache(maxsize=None)
def _cached_field(p, r):
    return Field(p, r, smallest_irreducible(p, r))


def field_new(p, r, max_size=MAX_FIELD_SIZE):
    """Create the finite field GF(p^r).

    Parameters
    ----------
    p: int
        Prime characteristic, validated by trial division.
    r: int
        Extension degree, at least 1.
    max_size: int, default MAX_FIELD_SIZE
        Largest accepted field size p**r.

    Returns
    -------
    field: Field
        Field with the smallest-encoded monic irreducible modulus of degree r,
        see :func:`hullcode.gf.smallest_irreducible`. Identical ``(p, r)``
        return the same (cached) object.

    Examples
    --------
    >>> field_new(2, 3).modulus
    (1, 1, 0, 1)
    """
    p = valid_prime(p)
    r = as_int(r, "r")
    if r < 1:
        raise InvalidParamsError(f"Extension degree r={r} should be at least 1.")
    if p**r > max_size:
        raise SizeCapExceededError(
            f"GF({p}^{r}) exceeds the field size cap of {max_size} elements."
        )
    return _cached_field(p, r)


def field_from_order(q, max_size=MAX_FIELD_SIZE):
    """Create GF(q) for a prime power q, see :func:`hullcode.gf.field_new`."""
    p, r = prime_power(q)
    return field_new(p, r, max_size=max_size)


def field_with_modulus(p, r, modulus):
    """Create GF(p^r) with an explicit modulus (e.g. read from a report file)."""
    p = valid_prime(p)
    modulus = tuple(as_int(c, "modulus") for c in modulus)
    if any(not 0 <= c < p for c in modulus):
        raise InvalidParamsError(f"Modulus coefficients should lie in 0..{p - 1}.")
    if len(modulus) != r + 1 or modulus[-1] != 1 or not is_irreducible(modulus, p):
        raise InvalidParamsError(
            f"Modulus {list(modulus)} is not monic irreducible of degree {r}."
        )
    if modulus == smallest_irreducible(p, r):
        return field_new(p, r)
    return Field(p, r, modulus)


def _check_same(a, b):
    if a.field != b.field:
        raise FieldMismatchError(f"Cannot combine elements of {a.field} and {b.field}.")


def add(a, b):
    _check_same(a, b)
    return a + b


def sub(a, b):
    _check_same(a, b)
    return a - b


def neg(a):
    return -a


def mul(a, b):
    _check_same(a, b)
    return a * b


def inv(a):
    """Multiplicative inverse; raises FieldDivisionByZeroError for zero."""
    return a.inverse()


def dot(u, v):
    """Standard bilinear form sum(u_i * v_i) of two field vectors.

    Parameters
    ----------
    u, v: hullcode.linalg.FieldVector
        Vectors of equal length over the same field.

    Returns
    -------
    FieldElement
    """
    if u.field != v.field:
        raise FieldMismatchError(f"Cannot combine vectors of {u.field} and {v.field}.")
    if len(u) != len(v):
        raise LengthMismatchError(
            f"Vectors of length {len(u)} and {len(v)} cannot be multiplied."
        )
    field = u.field
    if len(u) == 0:
        return field(0)
    product = field.matmul(u.array[np.newaxis, :], v.array[:, np.newaxis])
    return field(int(product[0, 0]))


def _encoding(field, x):
    if isinstance(x, FieldElement):
        if x.field != field:
            raise FieldMismatchError(f"Element of {x.field} used with {field}.")
        return x.value
    return field(x).value


def primitive_element(field):
    """Smallest-encoded element of multiplicative order q - 1."""
    return field(field._primitive)


def discrete_log(field, base, target):
    """Exponent w in 0..q-2 with base**w = target.

    Parameters
    ----------
    field: Field
    base: FieldElement or int
        Primitive element of the field.
    target: FieldElement or int
        Nonzero element.

    Returns
    -------
    omega: int

    Notes
    -----
    Uses the log/antilog tables when present, otherwise walks the powers of
    ``base`` one by one.
    """
    base, target = _encoding(field, base), _encoding(field, target)
    if target == 0:
        raise ZeroTargetError("The discrete logarithm of zero is undefined.")
    if base == 0 or field.order(base) != field.q - 1:
        raise BaseNotPrimitiveError(f"{base} is not a primitive element of {field}.")
    group_order = field.q - 1
    if group_order == 1:
        return 0
    if field.has_tables:
        log_base = int(field._log[base])
        return (int(field._log[target]) * pow(log_base, -1, group_order)) % group_order
    value = 1
    for omega in range(group_order):
        if value == target:
            return omega
        value = field.mul(value, base)
    raise AssertionError("primitive base did not reach the target")


def sqrt_char2(field, x):
    """Unique square root in characteristic 2, computed as ``x^(2^(r-1))``."""
    if field.p != 2:
        raise WrongCharacteristicError(
            f"Square roots by Frobenius inversion need characteristic 2, not {field.p}."
        )
    x = _encoding(field, x)
    return field(field.power(x, 2 ** (field.r - 1)))


def _squares(field):
    elements = np.arange(field.q, dtype=np.int64)
    return field.mul_array(elements, elements)


def find_sqrt_minus_one(field):
    """Smallest-encoded a in GF(q) with a^2 = -1 (exists iff q = 1 mod 4)."""
    if field.p == 2:
        raise WrongCharacteristicError("A square root of -1 is sought for odd q only.")
    if field.q % 4 == 3:
        raise NoSquareRootOfMinusOneError(
            f"-1 is not a square in {field} (q = 3 mod 4)."
        )
    candidates = np.flatnonzero(_squares(field) == field.minus_one)
    return field(int(candidates[0]))


def find_sum_two_squares_minus_one(field):
    """Lexicographically smallest nonzero pair (a, b) with a^2 + b^2 = -1.

    Raises
    ------
    NoSolutionError
        When no pair with both entries nonzero exists (this can only happen for
        q = 1 mod 4, e.g. q = 5).
    """
    if field.p == 2:
        raise WrongCharacteristicError("Sums of two squares are sought for odd q only.")
    squares = _squares(field)
    minus_one = field.minus_one
    for a in range(1, field.q):
        target = field.sub(minus_one, int(squares[a]))
        candidates = np.flatnonzero(squares[1:] == target)
        if candidates.size:
            return field(a), field(int(candidates[0]) + 1)
    raise NoSolutionError(f"No nonzero a, b with a^2 + b^2 = -1 exist in {field}.")
