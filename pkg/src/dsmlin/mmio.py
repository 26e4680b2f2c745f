"""Matrix Market and plain-text I/O for operators and vectors.

Operators are written as ``coordinate real symmetric`` (lower triangle) with
17 significant digits so that a write/read round trip is exact.  Vectors are
either Matrix Market ``array real general`` n x 1 files or plain text with
one value per line and ``#`` comments; :func:`read_vector` tells them apart
by the ``%%MatrixMarket`` banner.
"""

import numpy as np
import scipy.io
import scipy.sparse

from .errors import DimensionError, MatrixMarketError, SymmetryError
from .linops import SymmetricOperator

BANNER = "%%MatrixMarket"
_REAL_FIELDS = ("real", "integer", "double")


def _info(path):
    with open(path):  # surface a missing file as FileNotFoundError, not a parse error
        pass
    try:
        return scipy.io.mminfo(str(path))
    except (ValueError, IndexError, TypeError) as exc:
        raise MatrixMarketError(f"{path}: malformed Matrix Market header: {exc}") from None


def _read(path):
    try:
        m = scipy.io.mmread(str(path))
    except FileNotFoundError:
        raise
    except (ValueError, IndexError, TypeError, RuntimeError) as exc:
        raise MatrixMarketError(f"{path}: cannot parse Matrix Market data: {exc}") from None
    if scipy.sparse.issparse(m):
        m = m.toarray()
    return np.asarray(m, dtype=np.float64)


def read_matrix_market(path):
    rows, cols, _, _, fieldname, symmetry = _info(path)
    if fieldname not in _REAL_FIELDS:
        raise MatrixMarketError(f"{path}: field {fieldname!r} is not real")
    if symmetry not in ("symmetric", "general"):
        raise SymmetryError(f"{path}: matrix kind {symmetry!r} is not symmetric")
    if rows != cols:
        raise DimensionError(f"{path}: matrix is {rows} x {cols}, not square")
    m = _read(path)
    try:
        return SymmetricOperator(m)
    except SymmetryError as exc:
        raise SymmetryError(f"{path}: {exc}") from None


def write_matrix_market(A, path):
    coo = scipy.sparse.coo_matrix(np.tril(A.entries))
    scipy.io.mmwrite(str(path), coo, field="real", symmetry="symmetric", precision=17)


def _has_banner(path):
    with open(path, "r") as fh:
        for line in fh:
            if line.strip():
                return line.lstrip().startswith(BANNER)
    return False


def read_vector(path):
    if _has_banner(path):
        rows, cols, _, _, fieldname, _ = _info(path)
        if fieldname not in _REAL_FIELDS:
            raise MatrixMarketError(f"{path}: field {fieldname!r} is not real")
        if min(rows, cols) != 1:
            raise DimensionError(f"{path}: expected an n x 1 vector, got {rows} x {cols}")
        return _read(path).ravel()
    try:
        v = np.loadtxt(path, comments="#", ndmin=1, dtype=np.float64)
    except ValueError as exc:
        raise MatrixMarketError(f"{path}: cannot parse vector: {exc}") from None
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"{path}: expected one value per line")
    return v


def write_vector(v, path, fmt=None):
    """Write ``v`` as Matrix Market (``fmt='mtx'``) or plain text (``'txt'``).

    Without ``fmt`` the choice follows the file suffix: ``.mtx`` means Matrix
    Market, anything else plain text.
    """
    v = np.asarray(v, dtype=np.float64).ravel()
    if fmt is None:
        fmt = "mtx" if str(path).endswith(".mtx") else "txt"
    if fmt == "mtx":
        scipy.io.mmwrite(str(path), v.reshape(-1, 1), field="real", precision=17)
    elif fmt == "txt":
        with open(path, "w") as fh:
            fh.writelines(f"{x:.17g}\n" for x in v)
    else:
        raise ValueError(f"unknown vector format {fmt!r}")
