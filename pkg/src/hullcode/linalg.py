"""Dense linear algebra over a :class:`hullcode.gf.Field`.

Vectors and matrices wrap read-only numpy ``int64`` arrays of canonical element
encodings. Pivoting always takes the first nonzero entry in column order, so all
outputs (echelon forms, nullspace bases) are deterministic.
"""
import operator

import numpy as np

from hullcode.gf import FieldMismatchError, LengthMismatchError
from hullcode.valid import HullCodeError, InvalidParamsError


class ShapeMismatchError(HullCodeError, ValueError):
    """Raise when matrix shapes are incompatible for the requested operation."""


def _encodings(entries):
    """Integer array of element encodings; floats, strings and None are refused."""
    try:
        array = np.asarray(entries)
    except ValueError:
        raise ShapeMismatchError("Matrix rows should have equal lengths.") from None
    if array.size == 0:
        return array.astype(np.int64)
    if array.dtype == object:
        try:
            return np.vectorize(operator.index, otypes=[np.int64])(array)
        except (TypeError, OverflowError):
            raise InvalidParamsError("Entries should be integer encodings.") from None
    if not np.issubdtype(array.dtype, np.integer):
        raise InvalidParamsError(
            f"Entries should be integer encodings, got {array.dtype} values."
        )
    return array.astype(np.int64)


def _frozen(array, field, ndim):
    array = np.array(_encodings(array), dtype=np.int64, copy=True)
    if array.ndim != ndim:
        raise ShapeMismatchError(f"Expected a {ndim}-D array, got {array.ndim}-D.")
    if array.size and (array.min() < 0 or array.max() >= field.q):
        raise InvalidParamsError(f"Entries should be encodings 0..{field.q - 1}.")
    array.flags.writeable = False
    return array


class FieldVector:
    """Row vector over a finite field."""

    __slots__ = ("field", "array")

    def __init__(self, field, entries):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "array", _frozen(entries, field, 1))

    def __setattr__(self, name, value):
        raise AttributeError("FieldVector is immutable.")

    def __len__(self):
        return self.array.shape[0]

    def __iter__(self):
        return (self.field(int(value)) for value in self.array)

    def __getitem__(self, index):
        return self.field(int(self.array[index]))

    def __eq__(self, other):
        if not isinstance(other, FieldVector):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.array, other.array)

    def __hash__(self):
        return hash((self.field, self.array.tobytes()))

    def __repr__(self):
        return f"FieldVector({self.field}, {self.to_list()})"

    @property
    def length(self):
        return len(self)

    def to_list(self):
        return [int(value) for value in self.array]

    def scale(self, scalar):
        """Multiply every entry by a field scalar (element or encoding)."""
        return FieldVector(self.field, self.field.mul_array(self.array, int(scalar)))


class FieldMatrix:
    """Rectangular matrix over a finite field; 0-row matrices are the zero space.

    Parameters
    ----------
    field: hullcode.gf.Field
    rows: array-like
        Nested sequence or 2-D array of encodings.
    ncols: int, optional
        Number of columns, required to build an empty (0-row) matrix from ``[]``.
    """

    __slots__ = ("field", "array")

    def __init__(self, field, rows, ncols=None):
        array = _encodings(rows)
        if array.size == 0 and array.ndim < 2:
            array = np.zeros((0, ncols or 0), dtype=np.int64)
        if ncols is not None and array.ndim == 2 and array.shape[1] != ncols:
            raise ShapeMismatchError(
                f"Matrix has {array.shape[1]} columns, expected {ncols}."
            )
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "array", _frozen(array, field, 2))

    def __setattr__(self, name, value):
        raise AttributeError("FieldMatrix is immutable.")

    @classmethod
    def from_vectors(cls, field, vectors, ncols=None):
        vectors = list(vectors)
        for vector in vectors:
            if vector.field != field:
                raise FieldMismatchError(
                    f"Vector over {vector.field} in a matrix over {field}."
                )
        if len({len(vector) for vector in vectors}) > 1:
            raise LengthMismatchError("Rows of a matrix should have equal lengths.")
        if not vectors:
            return cls(field, np.zeros((0, ncols or 0), dtype=np.int64))
        return cls(field, np.vstack([vector.array for vector in vectors]))

    @classmethod
    def identity(cls, field, size):
        return cls(field, np.eye(size, dtype=np.int64))

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, np.zeros((nrows, ncols), dtype=np.int64))

    @classmethod
    def diagonal(cls, field, entries):
        entries = [int(entry) for entry in entries]
        size = len(entries)
        diagonal = np.diag(np.array(entries, dtype=np.int64)).reshape(size, size)
        return cls(field, diagonal)

    @property
    def nrows(self):
        return self.array.shape[0]

    @property
    def ncols(self):
        return self.array.shape[1]

    @property
    def shape(self):
        return self.array.shape

    @property
    def rows(self):
        return [FieldVector(self.field, row) for row in self.array]

    @property
    def T(self):
        return FieldMatrix(self.field, self.array.T)

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.array, other.array)

    def __hash__(self):
        return hash((self.field, self.array.shape, self.array.tobytes()))

    def __repr__(self):
        return f"FieldMatrix({self.field}, {self.to_list()})"

    def __matmul__(self, other):
        return matmul(self, other)

    def to_list(self):
        return self.array.tolist()

    def row(self, index):
        return FieldVector(self.field, self.array[index])

    def scale(self, scalar):
        return FieldMatrix(self.field, self.field.mul_array(self.array, int(scalar)))

    def neg(self):
        return FieldMatrix(self.field, self.field.neg_array(self.array))


def _check_fields(*matrices):
    fields = {matrix.field for matrix in matrices}
    if len(fields) > 1:
        raise FieldMismatchError("Matrices are defined over different fields.")


def matmul(a, b):
    """Matrix product over the field."""
    _check_fields(a, b)
    if a.ncols != b.nrows:
        raise ShapeMismatchError(f"Cannot multiply {a.shape} by {b.shape}.")
    return FieldMatrix(a.field, a.field.matmul(a.array, b.array))


def hstack(matrices):
    """Concatenate matrices with equal row counts side by side."""
    _check_fields(*matrices)
    if len({matrix.nrows for matrix in matrices}) > 1:
        raise ShapeMismatchError("Blocks of a row should have equal row counts.")
    return FieldMatrix(matrices[0].field, np.hstack([m.array for m in matrices]))


def vstack(matrices):
    """Stack matrices with equal column counts on top of each other."""
    _check_fields(*matrices)
    if len({matrix.ncols for matrix in matrices}) > 1:
        raise ShapeMismatchError("Stacked matrices should have equal column counts.")
    return FieldMatrix(matrices[0].field, np.vstack([m.array for m in matrices]))


def _rref_array(field, array):
    """Gauss-Jordan elimination on a copy of ``array``; returns (array, pivots)."""
    reduced = np.array(array, dtype=np.int64, copy=True)
    nrows, ncols = reduced.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        candidates = np.flatnonzero(reduced[row:, col])
        if candidates.size == 0:
            continue
        pivot_row = row + candidates[0]
        if pivot_row != row:
            reduced[[row, pivot_row]] = reduced[[pivot_row, row]]
        pivot_inv = field.inv(int(reduced[row, col]))
        reduced[row] = field.mul_array(reduced[row], pivot_inv)
        factors = reduced[:, col].copy()
        factors[row] = 0
        if factors.any():
            reduced = field.sub_array(
                reduced, field.mul_array(factors[:, np.newaxis], reduced[row])
            )
        pivots.append(col)
        row += 1
    return reduced, pivots


def rref(matrix):
    """Reduced row echelon form.

    Parameters
    ----------
    matrix: FieldMatrix

    Returns
    -------
    reduced: FieldMatrix
        Same shape as the input, zero rows at the bottom.
    pivots: list of int
        Pivot column of every nonzero row.
    rank: int
        Number of pivots.
    """
    reduced, pivots = _rref_array(matrix.field, matrix.array)
    return FieldMatrix(matrix.field, reduced), pivots, len(pivots)


def rank(matrix):
    return len(_rref_array(matrix.field, matrix.array)[1])


def row_basis(matrix):
    """Basis of the row space: the nonzero rows of the reduced echelon form."""
    reduced, pivots = _rref_array(matrix.field, matrix.array)
    return FieldMatrix(matrix.field, reduced[: len(pivots)], ncols=matrix.ncols)


def nullspace_basis(matrix):
    """Basis of {v : matrix . v^T = 0}, one row per free column.

    Parameters
    ----------
    matrix: FieldMatrix

    Returns
    -------
    basis: FieldMatrix
        ``ncols - rank`` rows; each basis vector has a 1 on its free column and
        zeros on the other free columns.
    """
    field = matrix.field
    reduced, pivots = _rref_array(field, matrix.array)
    pivot_set = set(pivots)
    free = [col for col in range(matrix.ncols) if col not in pivot_set]
    basis = np.zeros((len(free), matrix.ncols), dtype=np.int64)
    for idx, col in enumerate(free):
        basis[idx, col] = 1
        for pivot_row, pivot_col in enumerate(pivots):
            basis[idx, pivot_col] = field.neg(int(reduced[pivot_row, col]))
    return FieldMatrix(field, basis, ncols=matrix.ncols)


def gram(matrix):
    """Gram matrix ``M . M^T`` with entry (i, j) the dot product of rows i and j."""
    return matmul(matrix, matrix.T)


def intersect_rowspaces(a, b):
    """Basis of rowspace(a) intersected with rowspace(b).

    Solves ``x . a = y . b`` through the left kernel of the stacked matrix
    ``[a; -b]`` and maps every kernel vector ``(x, y)`` to ``x . a``.

    Parameters
    ----------
    a, b: FieldMatrix
        Matrices with an equal number of columns over the same field.

    Returns
    -------
    basis: FieldMatrix
        Rows in reduced echelon form; 0 rows when the spaces meet only in 0.
    """
    _check_fields(a, b)
    if a.ncols != b.ncols:
        raise ShapeMismatchError(
            f"Row spaces in F^{a.ncols} and F^{b.ncols} cannot be intersected."
        )
    stacked = vstack([a, b.neg()])
    kernel = nullspace_basis(stacked.T)
    coefficients = FieldMatrix(a.field, kernel.array[:, : a.nrows], ncols=a.nrows)
    return row_basis(matmul(coefficients, a))


def rowspace_equal(a, b):
    """Two matrices span the same row space."""
    return np.array_equal(row_basis(a).array, row_basis(b).array)


def is_linearly_independent(rows):
    """Rows are linearly independent (an empty set is independent)."""
    rows = list(rows)
    if not rows:
        return True
    matrix = FieldMatrix.from_vectors(rows[0].field, rows)
    return rank(matrix) == len(rows)
