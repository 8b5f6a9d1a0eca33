"""Log-domain coefficient tables for truncated power and Hermite series.

Coefficients of the spaces studied here behave like ``alpha!**(+-1/(2 sigma))``,
which leaves the double range near ``|alpha| ~ 170``. Every table therefore
stores ``(log|c|, arg c)`` pairs; conversion to ordinary complex numbers
happens only at the edges.
"""

from dataclasses import dataclass, field
import io
import math
from types import MappingProxyType

import numpy as np
from scipy.special import gammaln

from ._validation import as_multi_index, as_points, check_degree, check_dim, multi_indices
from .exceptions import ParameterError, SeriesFormatError, SeriesOverflowError

TWO_PI = 2.0 * math.pi
LOG_MAX = math.log(np.finfo(float).max)
KINDS = ("power-series", "hermite-series")


def _wrap(phase):
    return np.mod(phase, TWO_PI)


@dataclass(frozen=True)
class LogComplex:
    """A complex number stored as ``(log|z|, arg z)`` with ``arg`` in ``[0, 2 pi)``."""

    log_mag: float
    phase: float = 0.0

    def __post_init__(self):
        log_mag = float(self.log_mag)
        if math.isnan(log_mag) or log_mag == math.inf:
            raise ParameterError(f"log_mag must be finite or -inf, got {log_mag}")
        phase = 0.0 if log_mag == -math.inf else float(math.fmod(float(self.phase), TWO_PI))
        if phase < 0.0:
            phase += TWO_PI
        if phase >= TWO_PI:
            phase = 0.0
        object.__setattr__(self, "log_mag", log_mag)
        object.__setattr__(self, "phase", phase)

    @classmethod
    def from_complex(cls, value):
        value = complex(value)
        if value == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(value)), math.atan2(value.imag, value.real))

    @property
    def is_zero(self):
        return self.log_mag == -math.inf

    def __complex__(self):
        if self.is_zero:
            return 0j
        return complex(math.exp(self.log_mag) * math.cos(self.phase),
                       math.exp(self.log_mag) * math.sin(self.phase))

    def __abs__(self):
        return math.exp(self.log_mag)

    def __mul__(self, other):
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        return LogComplex(self.log_mag + other.log_mag, self.phase + other.phase)

    __rmul__ = __mul__

    def conjugate(self):
        return LogComplex(self.log_mag, -self.phase)


ZERO = LogComplex(-math.inf, 0.0)


def log_factorial(alpha):
    """``log(alpha!)`` for a multi-index, via the log-gamma function."""
    alpha = as_multi_index(alpha)
    return float(np.sum(gammaln(np.asarray(alpha, dtype=float) + 1.0)))


def log_factorials(indices):
    """Row-wise ``log(alpha!)`` for an integer array of multi-indices."""
    return gammaln(np.asarray(indices, dtype=float) + 1.0).sum(axis=-1)


class CoefficientTable:
    """Truncated coefficient map ``alpha -> c(alpha)`` for ``|alpha| <= degree``.

    Only nonzero entries are stored; missing indices are exact zeros. Instances
    are immutable and their arrays are read-only.

    Parameters
    ----------
    dim, degree : int
        Number of variables and truncation degree.
    indices : array_like of int, shape (n, dim)
    log_mag, phase : array_like of float, shape (n,)
        ``log|c|`` and ``arg c``. Entries with ``log_mag == -inf`` are dropped.
    kind : {"power-series", "hermite-series"}
    meta : mapping, optional
        Free-form metadata such as quadrature convergence flags.
    """

    __slots__ = ("dim", "degree", "kind", "indices", "log_mag", "phase", "meta", "_lookup")

    def __init__(self, dim, degree, indices=(), log_mag=(), phase=None,
                 kind="power-series", meta=None):
        dim = check_dim(dim)
        degree = check_degree(degree)
        if kind not in KINDS:
            raise ParameterError(f"kind must be one of {KINDS}, got {kind!r}")
        idx = np.asarray(indices, dtype=np.int64).reshape(-1, dim) if len(indices) else \
            np.zeros((0, dim), dtype=np.int64)
        lm = np.asarray(log_mag, dtype=float).reshape(-1)
        ph = np.zeros_like(lm) if phase is None else np.asarray(phase, dtype=float).reshape(-1)
        if not (idx.shape[0] == lm.shape[0] == ph.shape[0]):
            raise ParameterError("indices, log_mag and phase must have matching lengths")
        if np.any(idx < 0):
            raise ParameterError("multi-index entries must be non-negative")
        if np.any(np.isnan(lm)) or np.any(lm == np.inf) or not np.all(np.isfinite(ph)):
            raise ParameterError("log_mag must be finite or -inf and phases finite")
        if idx.shape[0] and int(idx.sum(axis=1).max()) > degree:
            raise ParameterError(f"table holds an index with |alpha| > degree={degree}")
        keep = lm > -np.inf
        idx, lm, ph = idx[keep], lm[keep], _wrap(ph[keep])
        order = np.lexsort(tuple(-idx[:, j] for j in reversed(range(dim))) + (idx.sum(axis=1),))
        idx, lm, ph = idx[order], lm[order], ph[order]
        lookup = {tuple(int(v) for v in row): i for i, row in enumerate(idx)}
        if len(lookup) != idx.shape[0]:
            raise ParameterError("duplicate multi-indices in table")
        for arr in (idx, lm, ph):
            arr.setflags(write=False)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "log_mag", lm)
        object.__setattr__(self, "phase", ph)
        object.__setattr__(self, "meta", MappingProxyType(dict(meta or {})))
        object.__setattr__(self, "_lookup", lookup)

    def __setattr__(self, name, value):
        raise AttributeError("CoefficientTable is immutable")

    # construction -----------------------------------------------------------

    @classmethod
    def from_dict(cls, coefficients, dim, degree, kind="power-series"):
        """Build from ``{alpha: complex or LogComplex}``."""
        rows, lms, phs = [], [], []
        for alpha, value in coefficients.items():
            alpha = as_multi_index(alpha, dim)
            value = value if isinstance(value, LogComplex) else LogComplex.from_complex(value)
            rows.append(alpha)
            lms.append(value.log_mag)
            phs.append(value.phase)
        return cls(dim, degree, rows, lms, phs, kind=kind)

    @classmethod
    def from_dense(cls, values, dim, degree, kind="power-series", meta=None):
        """Build from complex values aligned with ``multi_indices(dim, degree)``."""
        idx = multi_indices(dim, degree)
        values = np.asarray(values, dtype=complex).reshape(-1)
        if values.shape[0] != idx.shape[0]:
            raise ParameterError(f"expected {idx.shape[0]} values, got {values.shape[0]}")
        with np.errstate(divide="ignore"):
            lm = np.log(np.abs(values))
        return cls(dim, degree, idx, lm, np.angle(values), kind=kind, meta=meta)

    @classmethod
    def from_log_dense(cls, log_mag, phase, dim, degree, kind="power-series", meta=None):
        idx = multi_indices(dim, degree)
        return cls(dim, degree, idx, log_mag, phase, kind=kind, meta=meta)

    @classmethod
    def zeros(cls, dim, degree, kind="power-series"):
        return cls(dim, degree, kind=kind)

    @classmethod
    def monomial(cls, alpha, degree=None, value=1.0, kind="power-series"):
        """Table with a single entry ``c(alpha) = value``."""
        alpha = as_multi_index(alpha)
        degree = sum(alpha) if degree is None else degree
        return cls.from_dict({alpha: value}, len(alpha), degree, kind=kind)

    # access -----------------------------------------------------------------

    def __len__(self):
        return self.indices.shape[0]

    def __iter__(self):
        for i, row in enumerate(self.indices):
            yield tuple(int(v) for v in row), LogComplex(self.log_mag[i], self.phase[i])

    def items(self):
        return list(self)

    def __getitem__(self, alpha):
        alpha = as_multi_index(alpha, self.dim)
        i = self._lookup.get(alpha)
        if i is None:
            return ZERO
        return LogComplex(self.log_mag[i], self.phase[i])

    def __contains__(self, alpha):
        return as_multi_index(alpha, self.dim) in self._lookup

    def __repr__(self):
        return (f"CoefficientTable(dim={self.dim}, degree={self.degree}, kind={self.kind!r}, "
                f"nonzero={len(self)})")

    def __eq__(self, other):
        if not isinstance(other, CoefficientTable):
            return NotImplemented
        return (self.dim == other.dim and self.degree == other.degree and self.kind == other.kind
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.log_mag, other.log_mag)
                and np.array_equal(self.phase, other.phase))

    __hash__ = None

    @property
    def degrees(self):
        """``|alpha|`` of every stored entry."""
        return self.indices.sum(axis=1)

    @property
    def is_zero(self):
        return len(self) == 0

    def values(self):
        """Stored entries as complex numbers (may overflow to ``inf``)."""
        with np.errstate(over="ignore"):
            return np.exp(self.log_mag) * np.exp(1j * self.phase)

    def log_dense(self):
        """``(log_mag, phase)`` aligned with ``multi_indices(dim, degree)``; zeros are ``-inf``."""
        idx = multi_indices(self.dim, self.degree)
        lm = np.full(idx.shape[0], -np.inf)
        ph = np.zeros(idx.shape[0])
        if len(self):
            pos = _positions(idx, self.indices)
            lm[pos] = self.log_mag
            ph[pos] = self.phase
        return lm, ph

    def to_dense(self):
        lm, ph = self.log_dense()
        with np.errstate(over="ignore"):
            return np.exp(lm) * np.exp(1j * ph)

    # algebra ----------------------------------------------------------------

    def _replace(self, **changes):
        args = dict(dim=self.dim, degree=self.degree, indices=self.indices, log_mag=self.log_mag,
                    phase=self.phase, kind=self.kind, meta=dict(self.meta))
        args.update(changes)
        return CoefficientTable(**args)

    def with_kind(self, kind):
        return self._replace(kind=kind)

    def with_meta(self, **meta):
        return self._replace(meta={**self.meta, **meta})

    def truncate(self, degree):
        degree = check_degree(degree)
        keep = self.degrees <= degree
        return self._replace(degree=degree, indices=self.indices[keep],
                             log_mag=self.log_mag[keep], phase=self.phase[keep])

    def scale(self, factor):
        """Multiply every coefficient by a complex (or ``LogComplex``) scalar."""
        factor = factor if isinstance(factor, LogComplex) else LogComplex.from_complex(factor)
        if factor.is_zero:
            return CoefficientTable.zeros(self.dim, self.degree, self.kind)
        return self._replace(log_mag=self.log_mag + factor.log_mag, phase=self.phase + factor.phase)

    def __mul__(self, factor):
        if isinstance(factor, CoefficientTable):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1.0)

    def __add__(self, other):
        if not isinstance(other, CoefficientTable):
            return NotImplemented
        if other.dim != self.dim or other.kind != self.kind:
            raise ParameterError("cannot add tables of different dimension or kind")
        degree = max(self.degree, other.degree)
        idx = multi_indices(self.dim, degree)
        la, pa = _dense_at(self, idx)
        lb, pb = _dense_at(other, idx)
        m = np.maximum(la, lb)
        finite = m > -np.inf
        lm = np.full(idx.shape[0], -np.inf)
        ph = np.zeros(idx.shape[0])
        s = (np.exp(la[finite] - m[finite]) * np.exp(1j * pa[finite])
             + np.exp(lb[finite] - m[finite]) * np.exp(1j * pb[finite]))
        with np.errstate(divide="ignore"):
            lm[finite] = m[finite] + np.log(np.abs(s))
        ph[finite] = np.angle(s)
        return CoefficientTable(self.dim, degree, idx, lm, ph, kind=self.kind)

    def __sub__(self, other):
        if not isinstance(other, CoefficientTable):
            return NotImplemented
        return self + (-other)


def _positions(all_idx, sub_idx):
    lookup = {tuple(row): i for i, row in enumerate(all_idx.tolist())}
    return np.array([lookup[tuple(row)] for row in sub_idx.tolist()], dtype=np.int64)


def _dense_at(table, idx):
    lm = np.full(idx.shape[0], -np.inf)
    ph = np.zeros(idx.shape[0])
    if len(table):
        pos = _positions(idx, table.indices)
        lm[pos] = table.log_mag
        ph[pos] = table.phase
    return lm, ph


# evaluation ---------------------------------------------------------------


def monomial_eval(alpha, z):
    """``e_alpha(z) = z**alpha / sqrt(alpha!)`` as a ``LogComplex``."""
    alpha = as_multi_index(alpha)
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape[0] != len(alpha):
        raise ParameterError(f"point has length {z.shape[0]}, multi-index has length {len(alpha)}")
    log_mag = -0.5 * log_factorial(alpha)
    phase = 0.0
    for a, zj in zip(alpha, z):
        if a == 0:
            continue
        if zj == 0:
            return ZERO
        log_mag += a * math.log(abs(zj))
        phase += a * math.atan2(zj.imag, zj.real)
    return LogComplex(log_mag, phase)


def _term_logs(table, z):
    """Log-magnitudes and phases of ``c(alpha) e_alpha(z)`` for one point."""
    idx = table.indices
    with np.errstate(divide="ignore"):
        log_abs_z = np.log(np.abs(z))
    arg_z = np.angle(z)
    lt = table.log_mag - 0.5 * log_factorials(idx)
    ph = table.phase.copy()
    for j in range(table.dim):
        a = idx[:, j]
        nz = a > 0
        if np.isneginf(log_abs_z[j]):
            lt = np.where(nz, -np.inf, lt)
        else:
            lt = lt + a * log_abs_z[j]
            ph = ph + a * arg_z[j]
    return lt, ph


def _compensated_log_sum(lt, ph):
    """Sum ``exp(lt + i ph)`` in descending magnitude with exact partial sums."""
    finite = lt > -np.inf
    if not np.any(finite):
        return ZERO
    lt, ph = lt[finite], ph[finite]
    order = np.argsort(-lt, kind="stable")
    lt, ph = lt[order], ph[order]
    m = lt[0]
    w = np.exp(lt - m)
    re = math.fsum((w * np.cos(ph)).tolist())
    im = math.fsum((w * np.sin(ph)).tolist())
    s = complex(re, im)
    if s == 0:
        return ZERO
    return LogComplex(m + math.log(abs(s)), math.atan2(s.imag, s.real))


def series_eval(table, z, log_result=False):
    """Evaluate ``sum c(alpha) e_alpha(z)`` over the stored power-series coefficients.

    With ``log_result=True`` the value is returned as a ``LogComplex``; otherwise a
    result beyond the double range raises ``SeriesOverflowError`` carrying the
    log-domain value.
    """
    if table.kind != "power-series":
        raise ParameterError("series_eval needs a power-series table")
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape[0] != table.dim:
        raise ParameterError(f"point has length {z.shape[0]}, table has dim {table.dim}")
    value = _compensated_log_sum(*_term_logs(table, z))
    if log_result:
        return value
    if value.log_mag > LOG_MAX:
        raise SeriesOverflowError(
            f"series value exp({value.log_mag:.6g}) exceeds the double range", log_value=value)
    return complex(value)


def series_values(table, points):
    """Vectorised ``series_eval`` over a batch of points (shape ``(m, dim)``).

    Uses plain summation with a per-point magnitude shift; intended for
    quadrature nodes, not for ill-conditioned evaluations.
    """
    if table.kind != "power-series":
        raise ParameterError("series_values needs a power-series table")
    pts = as_points(points, table.dim)
    if len(table) == 0:
        return np.zeros(pts.shape[0], dtype=complex)
    idx = table.indices
    with np.errstate(divide="ignore"):
        log_abs = np.log(np.abs(pts))
    arg = np.angle(pts)
    lt = np.broadcast_to(table.log_mag - 0.5 * log_factorials(idx), (pts.shape[0], len(table))).copy()
    ph = np.broadcast_to(table.phase, lt.shape).copy()
    for j in range(table.dim):
        a = idx[:, j][None, :]
        term = np.where(a > 0, a * log_abs[:, j][:, None], 0.0)
        lt += term
        ph += a * arg[:, j][:, None]
    m = lt.max(axis=1, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    s = (np.exp(lt - m) * np.exp(1j * ph)).sum(axis=1)
    with np.errstate(over="ignore", invalid="ignore"):
        return s * np.exp(m[:, 0])


def pair(f, g):
    """Sesquilinear pairing ``sum c(f, alpha) conj(c(g, alpha))`` over common indices."""
    if f.dim != g.dim:
        raise ParameterError("pair needs tables of equal dimension")
    if f.kind != g.kind:
        raise ParameterError("pair needs tables of the same kind")
    if len(f) == 0 or len(g) == 0:
        return 0j
    common = [(i, g._lookup[a]) for a, i in f._lookup.items() if a in g._lookup]
    if not common:
        return 0j
    i, j = np.array(common).T
    value = _compensated_log_sum(f.log_mag[i] + g.log_mag[j], f.phase[i] - g.phase[j])
    if value.log_mag > LOG_MAX:
        raise SeriesOverflowError("pairing exceeds the double range", log_value=value)
    return complex(value)


def bargmann_coeff_map(f):
    """Bargmann transform on coefficients: Hermite coefficients become power coefficients."""
    if f.kind != "hermite-series":
        raise ParameterError("bargmann_coeff_map needs a hermite-series table")
    return f.with_kind("power-series")


def inverse_bargmann_coeff_map(F):
    if F.kind != "power-series":
        raise ParameterError("inverse_bargmann_coeff_map needs a power-series table")
    return F.with_kind("hermite-series")


# CSV interchange ---------------------------------------------------------------


def _fmt(x):
    return format(float(x), ".17g")


def format_series_csv(table, comments=()):
    """Serialise a table; exact zeros are omitted and numbers carry 17 significant digits."""
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    buf.write("dim,degree,kind\n")
    buf.write(f"{table.dim},{table.degree},{table.kind}\n")
    buf.write(",".join([f"alpha_{j + 1}" for j in range(table.dim)] + ["log_mag", "phase"]) + "\n")
    for row, lm, ph in zip(table.indices.tolist(), table.log_mag, table.phase):
        buf.write(",".join([str(a) for a in row] + [_fmt(lm), _fmt(ph)]) + "\n")
    return buf.getvalue()


def write_series_csv(table, path, comments=()):
    from ._io import atomic_write_text

    atomic_write_text(path, format_series_csv(table, comments))


def parse_series_csv(text):
    """Parse the series interchange format; errors carry 1-based line numbers."""
    lines = text.split("\n")
    content = [(i + 1, ln.strip()) for i, ln in enumerate(lines)
               if ln.strip() and not ln.lstrip().startswith("#")]
    if len(content) < 2:
        raise SeriesFormatError("missing header", line=len(lines))
    lineno, header = content[0]
    if [h.strip() for h in header.split(",")] != ["dim", "degree", "kind"]:
        raise SeriesFormatError(f"expected header 'dim,degree,kind', got {header!r}", line=lineno)
    lineno, meta = content[1]
    parts = [p.strip() for p in meta.split(",")]
    if len(parts) != 3:
        raise SeriesFormatError("expected 'dim,degree,kind' values", line=lineno)
    try:
        dim, degree, kind = int(parts[0]), int(parts[1]), parts[2]
        check_dim(dim)
        check_degree(degree)
    except (ValueError, ParameterError) as exc:
        raise SeriesFormatError(f"bad header values: {exc}", line=lineno) from None
    if kind not in KINDS:
        raise SeriesFormatError(f"unknown kind {kind!r}", line=lineno)
    rows = content[2:]
    if rows and rows[0][1].split(",")[0].strip() == "alpha_1":
        rows = rows[1:]
    idx, lms, phs, seen = [], [], [], set()
    for lineno, line in rows:
        parts = line.split(",")
        if len(parts) != dim + 2:
            raise SeriesFormatError(f"expected {dim + 2} fields, got {len(parts)}", line=lineno)
        try:
            alpha = tuple(int(p) for p in parts[:dim])
            lm = float(parts[dim])
            ph = float(parts[dim + 1])
        except ValueError:
            raise SeriesFormatError(f"unparseable row {line!r}", line=lineno) from None
        if any(a < 0 for a in alpha) or sum(alpha) > degree:
            raise SeriesFormatError(f"index {alpha} outside |alpha| <= {degree}", line=lineno)
        if math.isnan(lm) or lm == math.inf or not math.isfinite(ph):
            raise SeriesFormatError("log_mag must be finite or -inf and phase finite", line=lineno)
        if alpha in seen:
            raise SeriesFormatError(f"duplicate index {alpha}", line=lineno)
        seen.add(alpha)
        idx.append(alpha)
        lms.append(lm)
        phs.append(ph)
    return CoefficientTable(dim, degree, idx, lms, phs, kind=kind)


def read_series_csv(path):
    with open(path, encoding="utf-8") as fh:
        return parse_series_csv(fh.read())
