import logging
from dataclasses import asdict, dataclass

import numpy as np
from joblib import Parallel, delayed

from hullcode.linalg import (
    FieldMatrix,
    gram,
    intersect_rowspaces,
    nullspace_basis,
    rank,
)
from hullcode.valid import HullCodeError, InvalidParamsError

logger = logging.getLogger(__name__)

MAX_CODEWORD_EVALUATIONS = 2**24
ENUMERATION_BLOCK = 2**14


class RankDeficientError(InvalidParamsError):
    """Raise when a generator matrix does not have full row rank."""


class EnumerationCapExceededError(HullCodeError, ValueError):
    """Raise when exhaustive codeword enumeration exceeds the configured cap."""


class InternalInconsistencyError(HullCodeError, RuntimeError):
    """Raise when independent verification methods disagree."""


class LinearCode:
    """[n, k] linear code over a finite field given by a full-rank generator.

    Parameters
    ----------
    generator: hullcode.linalg.FieldMatrix
        k x n generator matrix; rank deficient input is rejected.
    """

    __slots__ = ("generator",)

    def __init__(self, generator):
        if rank(generator) != generator.nrows:
            raise RankDeficientError(
                f"Generator with {generator.nrows} rows has rank {rank(generator)}, "
                f"the rows should be linearly independent."
            )
        object.__setattr__(self, "generator", generator)

    def __setattr__(self, name, value):
        raise AttributeError("LinearCode is immutable.")

    @classmethod
    def from_rows(cls, field, rows, n=None):
        return cls(FieldMatrix(field, rows, ncols=n))

    @property
    def field(self):
        return self.generator.field

    @property
    def n(self):
        return self.generator.ncols

    @property
    def k(self):
        return self.generator.nrows

    @property
    def G(self):
        return self.generator

    def __eq__(self, other):
        if not isinstance(other, LinearCode):
            return NotImplemented
        return self.generator == other.generator

    def __hash__(self):
        return hash(self.generator)

    def __repr__(self):
        return f"LinearCode([{self.n}, {self.k}] over {self.field})"


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the independent verifiers on a code.

    Both hull dimensions are always computed; a report in which they differ
    cannot be created.
    """

    hull_dim_gram: int
    hull_dim_intersection: int
    min_distance: int
    dual_dim: int
    gram_diagonal: bool
    gram_diag_zero_count: int

    def __post_init__(self):
        if self.hull_dim_gram != self.hull_dim_intersection:
            raise InternalInconsistencyError(
                f"Hull dimension by Gram rank ({self.hull_dim_gram}) differs from "
                f"the explicit intersection ({self.hull_dim_intersection})."
            )

    @property
    def hull_dim(self):
        return self.hull_dim_gram

    def to_dict(self):
        return asdict(self)


def weight(vector):
    """Number of nonzero coordinates of a vector (FieldVector or array)."""
    array = getattr(vector, "array", vector)
    return int(np.count_nonzero(array))


def dual(code):
    """Dual code, generated by a nullspace basis of the generator."""
    return LinearCode(nullspace_basis(code.generator))


def hull_basis(code):
    """Basis of C intersected with its dual, by explicit row space intersection."""
    return intersect_rowspaces(code.generator, dual(code).generator)


def _hull_dimensions(code):
    by_gram = code.k - rank(gram(code.generator))
    by_intersection = hull_basis(code).nrows
    return by_gram, by_intersection


def hull_dimension(code):
    """Dimension of the hull, computed twice.

    The Gram shortcut ``k - rank(G . G^T)`` is cross-checked against the
    dimension of the explicit intersection of C with its dual.

    Parameters
    ----------
    code: LinearCode

    Returns
    -------
    t: int

    Raises
    ------
    InternalInconsistencyError
        When both methods disagree (an implementation bug, never user error).
    """
    by_gram, by_intersection = _hull_dimensions(code)
    if by_gram != by_intersection:
        raise InternalInconsistencyError(
            f"Hull dimension by Gram rank ({by_gram}) differs from the explicit "
            f"intersection ({by_intersection}) for {code}."
        )
    return by_gram


def message_block(q, length, start, stop):
    """Base-q digit rows (most significant first) of the integers start..stop-1."""
    numbers = np.arange(start, stop, dtype=np.int64)
    block = np.empty((numbers.size, length), dtype=np.int64)
    for position in range(length):
        block[:, position] = (numbers // q ** (length - 1 - position)) % q
    return block


def projective_blocks(q, k, block_size=ENUMERATION_BLOCK):
    """Work units covering one message per line of F_q^k.

    Every nonzero message is scaled so its first nonzero coordinate (``lead``)
    equals 1; the ``k - lead - 1`` trailing coordinates run over all values.

    Yields
    ------
    lead, start, stop: int
    """
    for lead in range(k):
        total = q ** (k - lead - 1)
        for start in range(0, total, block_size):
            yield lead, start, min(start + block_size, total)


def _block_min_weight(field, generator, lead, start, stop):
    k = generator.shape[0]
    messages = np.zeros((stop - start, k), dtype=np.int64)
    messages[:, lead] = 1
    messages[:, lead + 1 :] = message_block(field.q, k - lead - 1, start, stop)
    codewords = field.matmul(messages, generator)
    return int(np.count_nonzero(codewords, axis=1).min())


def min_distance(
    code,
    max_evaluations=MAX_CODEWORD_EVALUATIONS,
    n_jobs=1,
    block_size=ENUMERATION_BLOCK,
):
    """Minimum weight over the nonzero codewords by exhaustive enumeration.

    Parameters
    ----------
    code: LinearCode
    max_evaluations: int, default MAX_CODEWORD_EVALUATIONS
        Refuse codes with ``q**k`` above this cap.
    n_jobs: int, default 1
        Number of joblib workers sharing the enumeration blocks.
    block_size: int, default ENUMERATION_BLOCK
        Messages per work unit.

    Returns
    -------
    d: int

    Notes
    -----
    Scalar multiples share their weight, so only the ``(q^k - 1)/(q - 1)``
    messages with first nonzero coordinate 1 are enumerated.
    """
    field, k = code.field, code.k
    if k == 0:
        raise InvalidParamsError("The zero code has no nonzero codewords.")
    if field.q**k > max_evaluations:
        raise EnumerationCapExceededError(
            f"Enumerating {field.q}^{k} codewords exceeds the cap of "
            f"{max_evaluations} evaluations."
        )
    generator = code.generator.array
    blocks = list(projective_blocks(field.q, k, block_size))
    if n_jobs == 1:
        weights = [_block_min_weight(field, generator, *block) for block in blocks]
    else:
        weights = Parallel(n_jobs=n_jobs)(
            delayed(_block_min_weight)(field, generator, *block) for block in blocks
        )
    return min(weights)


def verify(code, max_evaluations=MAX_CODEWORD_EVALUATIONS, n_jobs=1):
    """Run all independent verifiers on a code.

    Parameters
    ----------
    code: LinearCode
    max_evaluations: int
        See :func:`hullcode.codes.min_distance`
    n_jobs: int
        See :func:`hullcode.codes.min_distance`

    Returns
    -------
    report: VerificationReport
    """
    by_gram, by_intersection = _hull_dimensions(code)
    gram_matrix = gram(code.generator).array
    diagonal = np.diag(gram_matrix)
    report = VerificationReport(
        hull_dim_gram=by_gram,
        hull_dim_intersection=by_intersection,
        min_distance=min_distance(code, max_evaluations=max_evaluations, n_jobs=n_jobs),
        dual_dim=dual(code).k,
        gram_diagonal=bool(np.array_equal(gram_matrix, np.diag(diagonal))),
        gram_diag_zero_count=int(np.count_nonzero(diagonal == 0)),
    )
    logger.debug("Verified %s: %s", code, report)
    return report
