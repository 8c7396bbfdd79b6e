import inspect
import operator
from functools import wraps


class HullCodeError(Exception):
    """Base class of all errors raised by the hullcode package."""


class InvalidParamsError(HullCodeError, ValueError):
    """Raise when input parameters are not conform the required ranges."""


class NotPrimeError(InvalidParamsError):
    """Raise when a field characteristic is not a prime number."""


def as_int(value, name):
    """Coerce integer-like input (also numpy integers) and reject bools/floats."""
    if isinstance(value, bool):
        raise InvalidParamsError(f"`{name}` should be an integer, got a boolean.")
    try:
        return operator.index(value)
    except TypeError:
        raise InvalidParamsError(
            f"`{name}` should be an integer, got {type(value).__name__}."
        ) from None


def is_prime(n):
    """Primality by trial division (desk-scale inputs)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    divisor = 3
    while divisor * divisor <= n:
        if n % divisor == 0:
            return False
        divisor += 2
    return True


def prime_factors(n):
    """Distinct prime factors of a positive integer, in increasing order."""
    factors = []
    divisor = 2
    while divisor * divisor <= n:
        if n % divisor == 0:
            factors.append(divisor)
            while n % divisor == 0:
                n //= divisor
        divisor += 1
    if n > 1:
        factors.append(n)
    return factors


def prime_power(q):
    """Decompose a prime power q into (p, r) with q = p**r.

    Parameters
    ----------
    q: int
        Candidate field size.

    Returns
    -------
    p: int
        Prime characteristic.
    r: int
        Extension degree (>= 1).

    Raises
    ------
    InvalidParamsError
        When q is not a prime power.
    """
    q = as_int(q, "q")
    if q < 2:
        raise InvalidParamsError(f"q={q} is not a prime power.")
    factors = prime_factors(q)
    if len(factors) != 1:
        raise InvalidParamsError(f"q={q} is not a prime power.")
    p = factors[0]
    r = 0
    while q > 1:
        q //= p
        r += 1
    return p, r


def valid_prime(p):
    """Characteristic is a prime number

    Parameters
    ----------
    p: int
        To test characteristic
    """
    p = as_int(p, "p")
    if not is_prime(p):
        raise NotPrimeError(f"p={p} is not a prime number.")
    return p


def valid_prime_power(q):
    """Field size is a prime power, see :func:`hullcode.valid.prime_power`."""
    prime_power(q)
    return as_int(q, "q")


def valid_dimensions(m, k):
    """Ambient length and dimension satisfy m >= k >= 1."""
    m, k = as_int(m, "m"), as_int(k, "k")
    if k < 1:
        raise InvalidParamsError(f"Dimension k={k} should be at least 1.")
    if k > m:
        raise InvalidParamsError(f"Dimension k={k} exceeds the length m={m}.")


def valid_distance(d, m):
    """Distance satisfies 1 <= d <= m."""
    d, m = as_int(d, "d"), as_int(m, "m")
    if not 1 <= d <= m:
        raise InvalidParamsError(f"Distance d={d} should lie in 1..m (m={m}).")


def valid_hull(t, k):
    """Hull dimension satisfies 0 <= t <= k."""
    t, k = as_int(t, "t"), as_int(k, "k")
    if t < 0:
        raise InvalidParamsError(f"Hull dimension t={t} should be non-negative.")
    if t > k:
        raise InvalidParamsError(f"Hull dimension t={t} exceeds the dimension k={k}.")


def valid_code_parameters(q=None, m=None, k=None, d=None, t=None):
    """Check any combination of the construction parameters.

    Only the given (non-None) parameters are tested. Checks that need two
    parameters (e.g. ``k <= m``) are only applied when both are given.
    """
    if q is not None:
        valid_prime_power(q)
    if m is not None:
        m = as_int(m, "m")
        if m < 1:
            raise InvalidParamsError(f"Length m={m} should be at least 1.")
    if k is not None:
        if m is not None:
            valid_dimensions(m, k)
        elif as_int(k, "k") < 1:
            raise InvalidParamsError(f"Dimension k={k} should be at least 1.")
    if d is not None and m is not None:
        valid_distance(d, m)
    if t is not None and k is not None:
        valid_hull(t, k)


def valid_parameters(func=None, require=("q", "m", "k", "d")):
    """Customisable decorator to check the integer code parameters of a function.

    Parameters
    ----------
    func: callable, default None
    require: tuple of str
        Names of the arguments of ``func`` to validate with
        :func:`hullcode.valid.valid_code_parameters`.

    Returns
    -------
    decorator: callable
        Return the execution of the actual decorator

    Notes
    -----
    Use super decorator to allow for decorator inputs
    """
    assert callable(func) or func is None

    def _decorator(func):
        signature = inspect.signature(func)

        @wraps(func)
        def wrapper(*args, **kwargs):
            bound = signature.bind(*args, **kwargs)
            bound.apply_defaults()
            values = {
                name: bound.arguments[name]
                for name in require
                if name in bound.arguments
            }
            valid_code_parameters(**values)
            return func(*args, **kwargs)

        return wrapper

    return _decorator(func) if callable(func) else _decorator
