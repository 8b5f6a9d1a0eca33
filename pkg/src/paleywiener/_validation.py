"""Input validation helpers and multi-index enumeration."""

from functools import lru_cache
from itertools import combinations_with_replacement
import math
import numbers

import numpy as np

from .exceptions import ParameterError

MAX_DIM = 4


def check_dim(dim):
    if isinstance(dim, bool) or not isinstance(dim, numbers.Integral):
        raise ParameterError(f"dimension must be an integer, got {dim!r}")
    dim = int(dim)
    if not 1 <= dim <= MAX_DIM:
        raise ParameterError(f"dimension must lie in [1, {MAX_DIM}], got {dim}")
    return dim


def check_degree(degree, minimum=0):
    if isinstance(degree, bool) or not isinstance(degree, numbers.Integral):
        raise ParameterError(f"degree must be an integer, got {degree!r}")
    degree = int(degree)
    if degree < minimum:
        raise ParameterError(f"degree must be >= {minimum}, got {degree}")
    return degree


def check_positive(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a real number, got {value!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise ParameterError(f"{name} must be a positive finite number, got {value}")
    return value


def as_multi_index(alpha, dim=None):
    """Return ``alpha`` as a tuple of non-negative ints, optionally checking its length."""
    if isinstance(alpha, numbers.Integral) and not isinstance(alpha, bool):
        alpha = (alpha,)
    try:
        entries = tuple(alpha)
    except TypeError:
        raise ParameterError(f"multi-index must be a sequence of integers, got {alpha!r}") from None
    out = []
    for a in entries:
        if isinstance(a, bool) or not isinstance(a, numbers.Integral):
            if isinstance(a, (float, np.floating)) and float(a).is_integer():
                a = int(a)
            else:
                raise ParameterError(f"multi-index entries must be integers, got {alpha!r}")
        if a < 0:
            raise ParameterError(f"multi-index entries must be >= 0, got {alpha!r}")
        out.append(int(a))
    check_dim(len(out))
    if dim is not None and len(out) != dim:
        raise ParameterError(f"multi-index {tuple(out)} has length {len(out)}, expected {dim}")
    return tuple(out)


def as_points(z, dim, dtype=complex):
    """Coerce one point (shape ``(dim,)``) or a batch (shape ``(m, dim)``) to 2-D."""
    arr = np.asarray(z, dtype=dtype)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.shape[0] == dim else arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ParameterError(f"points must have trailing dimension {dim}, got shape {np.shape(z)}")
    return arr


@lru_cache(maxsize=64)
def _multi_indices(dim, degree):
    rows = []
    for n in range(degree + 1):
        # graded order; within a shell, reverse-lexicographic on the first axis
        shell = []
        for combo in combinations_with_replacement(range(dim), n):
            alpha = [0] * dim
            for j in combo:
                alpha[j] += 1
            shell.append(tuple(alpha))
        shell.sort(reverse=True)
        rows.extend(shell)
    out = np.array(rows, dtype=np.int64).reshape(-1, dim)
    out.setflags(write=False)
    return out


def multi_indices(dim, degree):
    """All multi-indices of length ``dim`` with ``|alpha| <= degree`` in graded order."""
    return _multi_indices(check_dim(dim), check_degree(degree))
