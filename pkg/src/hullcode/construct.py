"""Randomized construction of linear codes with a prescribed hull dimension.

The construction runs in two steps. First a set of k linearly independent,
mutually orthogonal vectors of F_q^m is sampled whose span has minimum distance at
least d (:func:`sample_orthogonal_set`). Then the vectors are completed into a
generator matrix whose Gram matrix is diagonal with exactly t zeros, which fixes the
hull dimension to t. Which completion applies depends on q:

- q even: ``[A | B]``, length m + k, distance >= d (:func:`build_even`)
- q = 1 mod 4: ``[D | B | aB]``, length 2m + k, distance >= 2d (:func:`build_1mod4`)
- q = 3 mod 4: ``[D | B | aB | bB]``, length 3m + k, distance >= 3d
  (:func:`build_3mod4`)
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from tqdm import tqdm

from hullcode.bounds import gv_condition
from hullcode.codes import (
    MAX_CODEWORD_EVALUATIONS,
    EnumerationCapExceededError,
    LinearCode,
    min_distance,
    verify,
)
from hullcode.gf import (
    WrongCharacteristicError,
    discrete_log,
    field_from_order,
    find_sqrt_minus_one,
    find_sum_two_squares_minus_one,
    primitive_element,
    sqrt_char2,
)
from hullcode.linalg import FieldMatrix, gram, hstack, rank
from hullcode.valid import (
    HullCodeError,
    InvalidParamsError,
    as_int,
    valid_code_parameters,
    valid_hull,
)

logger = logging.getLogger(__name__)

MAX_ATTEMPTS_PER_VECTOR = 10000
MAX_RESTARTS = 100
DRAW_BATCH = 256


class SearchExhaustedError(HullCodeError):
    """Raise when the sampler runs out of attempts and restarts.

    Parameters
    ----------
    message: str
    attempts: int
        Total number of candidate vectors drawn.
    restarts: int
        Number of restarts from the first vector.
    bound_holds: bool or None
        Verdict of :func:`hullcode.bounds.gv_condition` for the parameters.
    """

    def __init__(self, message, attempts=0, restarts=0, bound_holds=None):
        super().__init__(message)
        self.attempts = attempts
        self.restarts = restarts
        self.bound_holds = bound_holds


class WrongResidueClassError(HullCodeError, ValueError):
    """Raise when a builder is used for a field size of the wrong residue class."""


class VerificationFailedError(HullCodeError, RuntimeError):
    """Raise when a constructed code does not pass the independent verifiers."""


class HullCase(Enum):
    """Construction case, determined by the field size."""

    EVEN = "Even"
    ONE_MOD_4 = "OneMod4"
    THREE_MOD_4 = "ThreeMod4"

    @classmethod
    def for_field_size(cls, q):
        if q % 2 == 0:
            return cls.EVEN
        if q % 4 == 1:
            return cls.ONE_MOD_4
        return cls.THREE_MOD_4

    @property
    def copies(self):
        """Number of copies of the sampled block in the generator matrix."""
        return {HullCase.EVEN: 1, HullCase.ONE_MOD_4: 2, HullCase.THREE_MOD_4: 3}[self]


@dataclass(frozen=True)
class ConstructionParams:
    """Parameters of a single construction run.

    Parameters
    ----------
    q: int
        Field size, a prime power.
    m: int
        Length of the sampled vectors, m >= k.
    k: int
        Code dimension, k >= 1.
    t: int
        Hull dimension, 0 <= t <= k.
    d: int
        Distance of the sampled span, 1 <= d <= m.
    seed: int, default 0
        Seed of the random generator, 0 <= seed < 2**64.
    max_attempts_per_vector: int, default MAX_ATTEMPTS_PER_VECTOR
    max_restarts: int, default MAX_RESTARTS
    """

    q: int
    m: int
    k: int
    t: int
    d: int
    seed: int = 0
    max_attempts_per_vector: int = MAX_ATTEMPTS_PER_VECTOR
    max_restarts: int = MAX_RESTARTS

    def __post_init__(self):
        valid_code_parameters(q=self.q, m=self.m, k=self.k, d=self.d, t=self.t)
        seed = as_int(self.seed, "seed")
        if not 0 <= seed < 2**64:
            raise InvalidParamsError(f"Seed {seed} should lie in 0..2**64 - 1.")
        if as_int(self.max_attempts_per_vector, "max_attempts_per_vector") < 1:
            raise InvalidParamsError("`max_attempts_per_vector` should be at least 1.")
        if as_int(self.max_restarts, "max_restarts") < 0:
            raise InvalidParamsError("`max_restarts` should be non-negative.")

    @property
    def case(self):
        return HullCase.for_field_size(self.q)

    @property
    def expected_length(self):
        return self.case.copies * self.m + self.k

    @property
    def guaranteed_distance(self):
        return self.case.copies * self.d


@dataclass(frozen=True)
class OrthogonalSet:
    """Linearly independent, mutually orthogonal vectors (the rows of ``vectors``).

    ``self_products`` holds ``g_i . g_i^T`` per row; these are unconstrained.
    """

    field: object
    vectors: FieldMatrix
    self_products: tuple
    attempts: int = 0
    restarts: int = 0

    @property
    def k(self):
        return self.vectors.nrows

    @property
    def m(self):
        return self.vectors.ncols


@dataclass(frozen=True)
class ConstructionResult:
    code: LinearCode
    case: HullCase
    expected_length: int
    guaranteed_distance: int
    attempts: int
    restarts: int
    report: object
    params: ConstructionParams
    bound: object

    @property
    def seed(self):
        return self.params.seed


def _extend_span(field, span, vector):
    """All codewords ``c + a * vector`` with c in span and a in the field."""
    scalars = np.arange(field.q, dtype=np.int64)
    multiples = field.mul_array(scalars[:, np.newaxis], vector[np.newaxis, :])
    extended = field.add_array(span[np.newaxis, :, :], multiples[:, np.newaxis, :])
    return extended.reshape(-1, span.shape[1])


def _first_acceptable(field, batch, prefix, span, d):
    """Index of the first candidate of the batch passing all checks, or None.

    A candidate g is accepted when it is orthogonal to every prefix vector and
    every codeword ``g + c`` (c in the span of the prefix) has weight >= d. The
    latter also rules out g in the span, since then ``g + (-g) = 0``.
    """
    orthogonal = np.all(field.matmul(batch, prefix.T) == 0, axis=1)
    for index in np.flatnonzero(orthogonal):
        shifted = field.add_array(span, batch[index])
        if np.count_nonzero(shifted, axis=1).min() >= d:
            return int(index)
    return None


def sample_orthogonal_set(
    field,
    m,
    k,
    d,
    rng,
    max_attempts_per_vector=MAX_ATTEMPTS_PER_VECTOR,
    max_restarts=MAX_RESTARTS,
    batch=DRAW_BATCH,
):
    """Sample k independent, mutually orthogonal vectors spanning distance >= d.

    Vectors are drawn uniformly from F_q^m one position at a time. A draw is kept
    when it is orthogonal to the vectors kept so far and every new codeword
    (a combination with coefficient 1 on the new vector) has weight >= d. After
    ``max_attempts_per_vector`` rejected draws for one position the search
    restarts from the first vector.

    Parameters
    ----------
    field: hullcode.gf.Field
    m, k, d: int
    rng: numpy.random.Generator
        Source of randomness, owned by the caller.
    max_attempts_per_vector: int, default MAX_ATTEMPTS_PER_VECTOR
    max_restarts: int, default MAX_RESTARTS
    batch: int, default DRAW_BATCH
        Number of candidates drawn at once; the outcome for a given generator
        state depends on this value.

    Returns
    -------
    orthogonal_set: OrthogonalSet

    Raises
    ------
    SearchExhaustedError
        After more than ``max_restarts`` restarts.
    """
    valid_code_parameters(q=field.q, m=m, k=k, d=d)
    attempts, restarts = 0, 0
    while True:
        prefix = np.zeros((0, m), dtype=np.int64)
        span = np.zeros((1, m), dtype=np.int64)
        for position in range(k):
            tried = 0
            accepted = None
            while tried < max_attempts_per_vector:
                size = min(batch, max_attempts_per_vector - tried)
                candidates = rng.integers(0, field.q, size=(size, m), dtype=np.int64)
                index = _first_acceptable(field, candidates, prefix, span, d)
                if index is not None:
                    tried += index + 1
                    accepted = candidates[index]
                    break
                tried += size
            attempts += tried
            if accepted is None:
                logger.debug(
                    "No vector accepted at position %d after %d draws.",
                    position + 1,
                    tried,
                )
                break
            prefix = np.vstack([prefix, accepted])
            if position + 1 < k:
                span = _extend_span(field, span, accepted)
        else:
            vectors = FieldMatrix(field, prefix)
            products = np.diag(gram(vectors).array)
            return OrthogonalSet(
                field=field,
                vectors=vectors,
                self_products=tuple(field(int(value)) for value in products),
                attempts=attempts,
                restarts=restarts,
            )
        restarts += 1
        if restarts > max_restarts:
            holds = gv_condition(field.q, m, k, d).holds
            raise SearchExhaustedError(
                f"No orthogonal set of {k} vectors in {field}^{m} with distance "
                f">= {d} found after {attempts} draws and {max_restarts} restarts "
                f"(existence condition {'holds' if holds else 'does not hold'}).",
                attempts=attempts,
                restarts=max_restarts,
                bound_holds=holds,
            )
        logger.debug("Restart %d after %d draws.", restarts, attempts)


def _delta(field, k, t):
    return FieldMatrix.diagonal(field, [0] * t + [1] * (k - t))


def build_even(field, orthogonal_set, t):
    """Generator ``[A | B]`` with ``A = diag(alpha_1..alpha_k)`` for even q.

    Parameters
    ----------
    field: hullcode.gf.Field
        Field of characteristic 2.
    orthogonal_set: OrthogonalSet
        Rows of B.
    t: int
        Hull dimension, 0 <= t <= k.

    Returns
    -------
    generator: hullcode.linalg.FieldMatrix
        k x (m + k) matrix with Gram ``diag(alpha_i^2 + g_i . g_i^T)``.

    Notes
    -----
    For the first t rows, ``alpha_i`` is the square root of ``g_i . g_i^T``
    (so the diagonal entry cancels): with ``alpha`` primitive and
    ``beta^2 = alpha``, ``alpha_i = beta^w`` where ``alpha^w = g_i . g_i^T``.
    For the other rows ``alpha_i`` is the smallest element with a nonzero entry.
    """
    if field.p != 2:
        raise WrongCharacteristicError(
            f"The even construction needs characteristic 2, got {field}."
        )
    valid_hull(t, orthogonal_set.k)
    alpha = primitive_element(field)
    beta = sqrt_char2(field, alpha)
    alphas = []
    for i, product in enumerate(orthogonal_set.self_products):
        if i < t:
            if product.value == 0:
                alphas.append(0)
            else:
                omega = discrete_log(field, alpha, product)
                alphas.append((beta**omega).value)
        else:
            alphas.append(0 if product.value != 0 else 1)
    return hstack(
        [FieldMatrix.diagonal(field, alphas), orthogonal_set.vectors],
    )


def build_1mod4(field, orthogonal_set, t):
    """Generator ``[D | B | aB]`` with ``a^2 = -1`` for q = 1 mod 4.

    ``D`` is diagonal with t leading zeros and ones elsewhere, and the Gram
    matrix of the result equals ``D^2``.
    """
    if field.q % 4 != 1:
        raise WrongResidueClassError(f"Expected q = 1 mod 4, got q={field.q}.")
    valid_hull(t, orthogonal_set.k)
    a = find_sqrt_minus_one(field)
    vectors = orthogonal_set.vectors
    return hstack([_delta(field, orthogonal_set.k, t), vectors, vectors.scale(a)])


def build_3mod4(field, orthogonal_set, t):
    """Generator ``[D | B | aB | bB]`` with ``a^2 + b^2 = -1`` for q = 3 mod 4."""
    if field.q % 4 != 3:
        raise WrongResidueClassError(f"Expected q = 3 mod 4, got q={field.q}.")
    valid_hull(t, orthogonal_set.k)
    a, b = find_sum_two_squares_minus_one(field)
    vectors = orthogonal_set.vectors
    return hstack(
        [
            _delta(field, orthogonal_set.k, t),
            vectors,
            vectors.scale(a),
            vectors.scale(b),
        ]
    )


BUILDERS = {
    HullCase.EVEN: build_even,
    HullCase.ONE_MOD_4: build_1mod4,
    HullCase.THREE_MOD_4: build_3mod4,
}


def _check_result(params, code, report):
    problems = []
    if code.n != params.expected_length:
        problems.append(f"length {code.n} != {params.expected_length}")
    if code.k != params.k:
        problems.append(f"dimension {code.k} != {params.k}")
    if report.hull_dim != params.t:
        problems.append(f"hull dimension {report.hull_dim} != {params.t}")
    if report.min_distance < params.guaranteed_distance:
        problems.append(
            f"distance {report.min_distance} < {params.guaranteed_distance}"
        )
    if not report.gram_diagonal or report.gram_diag_zero_count != params.t:
        problems.append("Gram matrix is not diagonal with t zeros")
    if problems:
        raise VerificationFailedError(
            f"Constructed {code} fails verification: {', '.join(problems)}."
        )


def construct(params, n_jobs=1, max_evaluations=MAX_CODEWORD_EVALUATIONS):
    """Construct and verify a code with hull dimension t.

    Parameters
    ----------
    params: ConstructionParams
    n_jobs: int, default 1
        Workers for the minimum distance enumeration of the verifier.
    max_evaluations: int, default MAX_CODEWORD_EVALUATIONS
        Enumeration cap for the sampler and the verifier.

    Returns
    -------
    result: ConstructionResult
        Identical params (seed included) give an identical generator matrix.

    Raises
    ------
    SearchExhaustedError
        When the sampler gives up.
    VerificationFailedError
        When the assembled code does not verify.
    """
    q, m, k, t, d = params.q, params.m, params.k, params.t, params.d
    if q**k > max_evaluations:
        raise EnumerationCapExceededError(
            f"Verifying a code with {q}^{k} codewords exceeds the cap of "
            f"{max_evaluations} evaluations."
        )
    field = field_from_order(q)
    case = params.case
    bound = gv_condition(q, m, k, d)
    logger.info(
        "Constructing [%d, %d] code over %s with hull %d (case %s, seed %d).",
        params.expected_length,
        k,
        field,
        t,
        case.value,
        params.seed,
    )
    if not bound.holds:
        logger.info(
            "Existence condition does not hold for q=%d m=%d k=%d d=%d.", q, m, k, d
        )

    rng = np.random.default_rng(params.seed)
    orthogonal_set = sample_orthogonal_set(
        field,
        m,
        k,
        d,
        rng,
        max_attempts_per_vector=params.max_attempts_per_vector,
        max_restarts=params.max_restarts,
    )
    generator = BUILDERS[case](field, orthogonal_set, t)
    code = LinearCode(generator)
    report = verify(code, max_evaluations=max_evaluations, n_jobs=n_jobs)
    _check_result(params, code, report)
    logger.info(
        "Constructed %s after %d draws and %d restarts, distance %d.",
        code,
        orthogonal_set.attempts,
        orthogonal_set.restarts,
        report.min_distance,
    )
    return ConstructionResult(
        code=code,
        case=case,
        expected_length=params.expected_length,
        guaranteed_distance=params.guaranteed_distance,
        attempts=orthogonal_set.attempts,
        restarts=orthogonal_set.restarts,
        report=report,
        params=params,
        bound=bound,
    )


def iid_trial(field, m, k, d, rng):
    """Draw k i.i.d. uniform vectors and test them.

    Returns
    -------
    success: bool
        The vectors are linearly independent, mutually orthogonal and span a
        space of minimum distance >= d.
    """
    vectors = FieldMatrix(field, rng.integers(0, field.q, size=(k, m), dtype=np.int64))
    products = gram(vectors).array
    if np.count_nonzero(products - np.diag(np.diag(products))):
        return False
    if rank(vectors) < k:
        return False
    return min_distance(LinearCode(vectors)) >= d


@dataclass(frozen=True)
class IidFrequency:
    """Outcome of repeated :func:`iid_trial` runs."""

    successes: int
    trials: int

    @property
    def frequency(self):
        return self.successes / self.trials

    @property
    def sigma(self):
        """Binomial standard deviation of the frequency."""
        p = self.frequency
        return math.sqrt(p * (1 - p) / self.trials)


def iid_success_frequency(q, m, k, d, trials=1000, seed=0, progress=False):
    """Empirical success frequency of drawing k i.i.d. uniform vectors.

    Parameters
    ----------
    q, m, k, d: int
    trials: int, default 1000
    seed: int, default 0
    progress: bool, default False
        Show a tqdm progress bar.

    Returns
    -------
    IidFrequency

    Notes
    -----
    The frequency estimates the probability bounded from below by
    :func:`hullcode.bounds.success_probability_lower_bound`.
    """
    valid_code_parameters(q=q, m=m, k=k, d=d)
    if as_int(trials, "trials") < 1:
        raise InvalidParamsError("`trials` should be at least 1.")
    field = field_from_order(q)
    rng = np.random.default_rng(seed)
    successes = 0
    for _ in tqdm(range(trials), total=trials, disable=not progress):
        successes += iid_trial(field, m, k, d, rng)
    return IidFrequency(successes=successes, trials=trials)
