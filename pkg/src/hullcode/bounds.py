"""Existence bounds for codes with a prescribed hull dimension and distance.

All comparisons are exact: integers are Python integers, ratios are
:class:`fractions.Fraction`. Only the entropy based rate threshold is real valued;
it is evaluated with :mod:`decimal` at ``ENTROPY_PRECISION`` significant digits.
"""
import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation, localcontext
from fractions import Fraction

import pandas as pd

from hullcode.valid import InvalidParamsError, as_int, valid_parameters

ENTROPY_PRECISION = 50


class HypothesisViolatedError(InvalidParamsError):
    """Raise when the unimodality hypothesis d - 1 <= m / 2 does not hold."""


class DomainError(InvalidParamsError):
    """Raise when a real argument lies outside the domain of a function."""


def rational_string(value):
    """Encode a rational as ``"num/den"`` (integers as plain decimal strings)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class BoundReport:
    """Exact evaluation of an existence condition.

    ``holds`` is the strict comparison ``lhs < rhs``. The Step-1 diagnostics
    (``theta``, ``epsilons`` = eps_2..eps_k and ``p_jk_lower``) refer to the same
    parameters whichever condition is evaluated.
    """

    q: int
    m: int
    k: int
    d: int
    lhs: int
    rhs: Fraction
    holds: bool
    theta: int
    epsilons: tuple
    p_jk_lower: Fraction
    condition: str = "gv"

    def to_dict(self):
        return {
            "q": self.q,
            "m": self.m,
            "k": self.k,
            "d": self.d,
            "condition": self.condition,
            "lhs": str(self.lhs),
            "rhs": rational_string(self.rhs),
            "holds": self.holds,
            "theta": str(self.theta),
            "epsilons": [rational_string(eps) for eps in self.epsilons],
            "p_lower": f"{self.p_jk_lower.numerator}/{self.p_jk_lower.denominator}",
        }


@valid_parameters(require=("q", "m", "d"))
def theta(q, m, d):
    """Number of nonzero message multiples reaching low weight, scaled by q^(i-1).

    Parameters
    ----------
    q, m, d: int

    Returns
    -------
    theta: int
        ``(q - 1) * sum_{j=0}^{d-1} (q - 1)^j * C(m, j)``

    Examples
    --------
    >>> theta(3, 4, 2)
    18
    """
    return (q - 1) * sum((q - 1) ** j * math.comb(m, j) for j in range(d))


@valid_parameters(require=("q", "m", "d"))
def epsilon(q, m, d, i):
    """Step factor ``eps_i = 1 - (1 + theta) / q^(m - 2i + 2)`` for i >= 1."""
    i = as_int(i, "i")
    if i < 1:
        raise InvalidParamsError(f"Step index i={i} should be at least 1.")
    return 1 - Fraction(1 + theta(q, m, d)) / Fraction(q) ** (m - 2 * i + 2)


@valid_parameters
def success_probability_lower_bound(q, m, k, d):
    """Lower bound on the probability that k i.i.d. uniform vectors succeed.

    Success means: linearly independent, mutually orthogonal and spanning a
    space of minimum distance at least d.

    Parameters
    ----------
    q, m, k, d: int

    Returns
    -------
    p_lower: fractions.Fraction
        ``q^-C(k,2) * prod_{i=2}^{k} eps_i * (1 - theta / q^m)``, or 0 when any
        factor is negative.
    """
    factors = [epsilon(q, m, d, i) for i in range(2, k + 1)]
    factors.append(1 - Fraction(theta(q, m, d), q**m))
    if any(factor < 0 for factor in factors):
        return Fraction(0)
    bound = Fraction(1, q ** math.comb(k, 2))
    for factor in factors:
        bound *= factor
    return bound


def _report(q, m, k, d, lhs, rhs, condition):
    return BoundReport(
        q=q,
        m=m,
        k=k,
        d=d,
        lhs=lhs,
        rhs=rhs,
        holds=lhs < rhs,
        theta=theta(q, m, d),
        epsilons=tuple(epsilon(q, m, d, i) for i in range(2, k + 1)),
        p_jk_lower=success_probability_lower_bound(q, m, k, d),
        condition=condition,
    )


@valid_parameters
def gv_condition(q, m, k, d):
    """Gilbert-Varshamov type sufficient condition for the construction.

    Parameters
    ----------
    q, m, k, d: int
        Field size (prime power), length, dimension (m >= k >= 1) and
        distance (1 <= d <= m).

    Returns
    -------
    report: BoundReport
        ``lhs = 1 + sum_{j=0}^{d-1} (q-1)^(j+1) C(m, j)`` and
        ``rhs = q^(m - 2k + 2)``; the right side is a rational below 1 when the
        exponent is not positive, so the condition then fails.

    Examples
    --------
    >>> report = gv_condition(2, 10, 2, 2)
    >>> report.lhs, report.rhs, report.holds
    (12, Fraction(256, 1), True)
    """
    lhs = 1 + sum((q - 1) ** (j + 1) * math.comb(m, j) for j in range(d))
    rhs = Fraction(q) ** (m - 2 * k + 2)
    return _report(q, m, k, d, lhs, rhs, "gv")


@valid_parameters
def simplified_condition(q, m, k, d, intermediate=False):
    """Closed-form sufficient condition, valid for d - 1 <= m / 2.

    Parameters
    ----------
    q, m, k, d: int
    intermediate: bool, default False
        Evaluate ``(d+1) (q-1)^d C(m, d-1) < q^(m - 2k + 2)`` instead of the
        relaxed ``(d+1) C(m, d-1) < q^(m - 2k - d + 2)``.

    Returns
    -------
    report: BoundReport

    Notes
    -----
    Every term of the left side of :func:`gv_condition` is at most
    ``(q-1)^d C(m, d-1)`` when ``C(m, j)`` grows up to ``j = d - 1``, which gives
    the intermediate form; replacing ``(q-1)^d`` by ``q^d`` gives the relaxed one.
    Both imply :func:`gv_condition`.
    """
    if 2 * (d - 1) > m:
        raise HypothesisViolatedError(
            f"The closed-form bound needs d - 1 <= m / 2, got d={d}, m={m}."
        )
    if intermediate:
        lhs = (d + 1) * (q - 1) ** d * math.comb(m, d - 1)
        rhs = Fraction(q) ** (m - 2 * k + 2)
        return _report(q, m, k, d, lhs, rhs, "intermediate")
    lhs = (d + 1) * math.comb(m, d - 1)
    rhs = Fraction(q) ** (m - 2 * k - d + 2)
    return _report(q, m, k, d, lhs, rhs, "simplified")


@valid_parameters
def step_probabilities(q, m, k, d):
    """Per-step success probabilities of the i.i.d. sampling argument.

    Parameters
    ----------
    q, m, k, d: int

    Returns
    -------
    steps: pandas.DataFrame
        One row per step ``i = 1..k`` with the exact (``Fraction``) columns

        - *p_basis*: probability that the i-th draw keeps the set independent
        - *p_orthogonal*: probability that it is orthogonal to the earlier draws
        - *p_distance_lower*: lower bound that the distance stays at least d
        - *p_step_lower*: lower bound on all three together (clamped at 0)
        - *epsilon*: eps_i (missing for i = 1)

        and for each a ``<name>_float`` companion column.
    """
    theta_value = theta(q, m, d)
    records = []
    for i in range(1, k + 1):
        remaining = Fraction(q) ** (m - i + 1)
        p_distance = max(Fraction(0), 1 - theta_value / remaining)
        if i == 1:
            p_step = p_distance
        else:
            p_step = Fraction(1, q ** (i - 1)) - (1 + theta_value) / remaining
            p_step = max(Fraction(0), p_step)
        records.append(
            {
                "step": i,
                "p_basis": 1 - 1 / remaining,
                "p_orthogonal": Fraction(1, q ** (i - 1)),
                "p_distance_lower": p_distance,
                "p_step_lower": p_step,
                "epsilon": epsilon(q, m, d, i) if i > 1 else None,
            }
        )
    steps = pd.DataFrame.from_records(records)
    exact = ["p_basis", "p_orthogonal", "p_distance_lower", "p_step_lower", "epsilon"]
    for column in exact:
        steps[f"{column}_float"] = [
            float("nan") if value is None else float(value) for value in steps[column]
        ]
    return steps


def _to_decimal(value, name):
    try:
        if isinstance(value, Fraction):
            return Decimal(value.numerator) / Decimal(value.denominator)
        if isinstance(value, float):
            return Decimal(repr(value))
        return Decimal(value)
    except (InvalidOperation, TypeError, ValueError):
        raise DomainError(f"`{name}` should be a real number, got {value!r}.") from None


def _entropy_decimal(delta):
    if delta in (0, 1):
        return Decimal(0)
    ln2 = Decimal(2).ln()
    return -(delta * delta.ln() + (1 - delta) * (1 - delta).ln()) / ln2


def entropy(delta):
    """Binary entropy function.

    Parameters
    ----------
    delta: float, fractions.Fraction, str or int
        Argument in [0, 1].

    Returns
    -------
    h: float
        ``-delta log2(delta) - (1 - delta) log2(1 - delta)``, with H(0) = H(1) = 0.
    """
    with localcontext() as context:
        context.prec = ENTROPY_PRECISION
        value = _to_decimal(delta, "delta")
        if not 0 <= value <= 1:
            raise DomainError(f"Entropy is defined on [0, 1], got delta={delta}.")
        return float(_entropy_decimal(value))


def _epsilon0_decimal(delta, q):
    value = _to_decimal(delta, "delta")
    if not 0 < value < Decimal(1) / 2:
        raise DomainError(f"The rate threshold needs 0 < delta < 1/2, got {delta}.")
    try:
        q = as_int(q, "q")
    except InvalidParamsError as err:
        raise DomainError(str(err)) from None
    if q < 2:
        raise DomainError(f"The rate threshold needs q >= 2, got q={q}.")
    log2_q = Decimal(q).ln() / Decimal(2).ln()
    return (1 - value - _entropy_decimal(value) / log2_q) / 2


def epsilon0(delta, q):
    """Asymptotic rate threshold ``(1 - delta - H(delta) / log2(q)) / 2``.

    Rates ``k / m`` strictly below the threshold satisfy the simplified
    condition for all large m, see :func:`rate_feasible`.
    """
    with localcontext() as context:
        context.prec = ENTROPY_PRECISION
        return float(_epsilon0_decimal(delta, q))


@dataclass(frozen=True)
class AsymptoticParams:
    """Relative distance, hull and dimension rates (d, t, k as fractions of m)."""

    delta: Fraction
    gamma: Fraction
    epsilon: Fraction

    def __post_init__(self):
        for name in ("delta", "gamma", "epsilon"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not 0 < self.gamma < self.epsilon < 1:
            raise DomainError(
                f"Rates need 0 < gamma < epsilon < 1, got gamma={self.gamma}, "
                f"epsilon={self.epsilon}."
            )
        if not 0 < self.delta < Fraction(1, 2):
            raise DomainError(f"Rates need 0 < delta < 1/2, got delta={self.delta}.")

    @classmethod
    def from_code(cls, m, k, t, d):
        return cls(delta=Fraction(d, m), gamma=Fraction(t, m), epsilon=Fraction(k, m))


def rate_feasible(params, q):
    """Dimension rate strictly below the threshold ``epsilon0(delta, q)``."""
    with localcontext() as context:
        context.prec = ENTROPY_PRECISION
        threshold = _epsilon0_decimal(params.delta, q)
        return _to_decimal(params.epsilon, "epsilon") < threshold


def epsilon0_table(deltas, qs):
    """Tabulate :func:`epsilon0` with one row per delta and one column per q."""
    table = pd.DataFrame(
        {q: [epsilon0(delta, q) for delta in deltas] for q in qs},
        index=pd.Index(list(deltas), name="delta"),
    )
    table.columns.name = "q"
    return table
