"""Quadrature ground truth for the Bargmann side and the Hermite side.

Everything here is computed from integrals, never from the coefficient
identities used elsewhere in the package, so it can serve as an independent
check on them. Each integral is evaluated twice (base order and doubled order)
and the comparison is returned as convergence information.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
import math

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln, roots_hermite, roots_legendre

from ._validation import as_multi_index, as_points, check_degree, check_dim, check_positive, multi_indices
from .exceptions import IndeterminateError, ParameterError, UnsupportedMeasureError
from .measures import PointMasses
from .series import CoefficientTable, series_eval, series_values

CERTIFIED_Z = 6.0
CERTIFIED_R = 12.0


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights; ``nodes`` has shape ``(n, dim)``."""

    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim == 1:
            nodes = nodes[:, None]
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if nodes.shape[0] != weights.shape[0]:
            raise ParameterError("nodes and weights must have matching lengths")
        if not np.all(weights > 0):
            raise ParameterError("quadrature weights must be positive")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def dim(self):
        return self.nodes.shape[1]

    @classmethod
    def gauss_hermite(cls, order):
        """Rule for ``int exp(-x**2) g(x) dx``; nodes whose weight underflows are dropped."""
        x, w = _hermite_rule(int(order))
        keep = w > 0
        return cls("gauss-hermite", x[keep], w[keep], int(order))

    @classmethod
    def gauss_legendre(cls, order, a=-1.0, b=1.0):
        x, w = roots_legendre(int(order))
        return cls("gauss-legendre", a + (b - a) * (x + 1) / 2, w * (b - a) / 2, int(order))

    @classmethod
    def tensor(cls, rules):
        rules = list(rules)
        nodes = np.array([np.concatenate(p) for p in product(*[r.nodes for r in rules])])
        weights = np.array([np.prod(p) for p in product(*[r.weights for r in rules])])
        return cls("tensor", nodes, weights, max(r.order for r in rules))

    def integrate(self, fn):
        return np.sum(self.weights * np.asarray(fn(self.nodes)))


@lru_cache(maxsize=32)
def _hermite_rule(order):
    x, w = roots_hermite(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class SampledFunction:
    """A black-box function on ``R^d`` (``domain="real"``) or ``C^d`` (``domain="complex"``).

    ``evaluator`` receives an array of shape ``(m, dim)`` and returns ``m`` values.
    With ``vectorized=False`` it is called once per point with a 1-D array.
    """

    dim: int
    evaluator: object
    domain: str = "real"
    vectorized: bool = True
    degree: int = None

    def __post_init__(self):
        object.__setattr__(self, "dim", check_dim(self.dim))
        if self.domain not in ("real", "complex"):
            raise ParameterError(f"domain must be 'real' or 'complex', got {self.domain!r}")

    def __call__(self, points):
        dtype = complex if self.domain == "complex" else float
        pts = as_points(points, self.dim, dtype=dtype)
        if self.vectorized:
            out = np.asarray(self.evaluator(pts), dtype=complex).reshape(-1)
        else:
            out = np.array([complex(self.evaluator(p)) for p in pts], dtype=complex)
        if out.shape[0] != pts.shape[0]:
            raise ParameterError("evaluator returned the wrong number of values")
        return out

    @classmethod
    def from_table(cls, table):
        """Power series become functions on ``C^d``; Hermite series functions on ``R^d``."""
        if table.kind == "power-series":
            return cls(table.dim, lambda w: series_values(table, w), "complex",
                       degree=table.degree)
        return cls(table.dim, lambda x: hermite_series_values(table, x), "real",
                   degree=table.degree)


def _as_function(F, domain):
    if isinstance(F, CoefficientTable):
        F = SampledFunction.from_table(F)
    if not isinstance(F, SampledFunction):
        raise ParameterError("expected a SampledFunction or a CoefficientTable")
    if F.domain != domain:
        raise ParameterError(f"expected a function on the {domain} side, got {F.domain}")
    return F


# Hermite functions -------------------------------------------------------------


def hermite_functions(n_max, x):
    """``h_0..h_{n_max}`` at the points ``x`` (shape ``(n_max + 1, len(x))``).

    Three-term recurrence ``h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}``
    seeded with ``h_0 = pi**-1/4 exp(-x**2/2)``.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    h = np.empty((n_max + 1, x.size))
    h[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        h[1] = math.sqrt(2.0) * x * h[0]
    for n in range(1, n_max):
        h[n + 1] = math.sqrt(2.0 / (n + 1)) * x * h[n] - math.sqrt(n / (n + 1)) * h[n - 1]
    return h


def hermite_eval(alpha, x):
    """``h_alpha(x) = prod_j h_{alpha_j}(x_j)`` at one point (scalar) or a batch ``(m, d)``."""
    alpha = as_multi_index(alpha)
    arr = np.asarray(x, dtype=float)
    single = arr.ndim <= 1 and arr.size == len(alpha)
    if arr.size % len(alpha):
        raise ParameterError(f"points have length {arr.size}, multi-index has length {len(alpha)}")
    pts = arr.reshape(-1, len(alpha))
    values = _basis_on_points(np.array([alpha]), pts)[0]
    return float(values[0]) if single else values


def _basis_on_points(indices, pts):
    top = int(indices.max()) if indices.size else 0
    per_axis = [hermite_functions(top, pts[:, j]) for j in range(pts.shape[1])]
    out = np.ones((indices.shape[0], pts.shape[0]))
    for j, h in enumerate(per_axis):
        out *= h[indices[:, j]]
    return out


def hermite_series_values(table, points):
    """``sum c_h(alpha) h_alpha(x)`` at a batch of real points."""
    if table.kind != "hermite-series":
        raise ParameterError("hermite_series_values needs a hermite-series table")
    pts = as_points(points, table.dim, dtype=float)
    if len(table) == 0:
        return np.zeros(pts.shape[0], dtype=complex)
    return table.values() @ _basis_on_points(table.indices, pts)


@dataclass(frozen=True)
class ConvergenceInfo:
    order: int
    doubled_order: int
    discrepancy: float
    tolerance: float
    converged: bool
    certified: bool = True

    def to_dict(self):
        return dict(self.__dict__)


def _info(base, doubled, a, b, tol, certified=True):
    a, b = np.asarray(a), np.asarray(b)
    scale = max(1.0, float(np.max(np.abs(b)))) if b.size else 1.0
    disc = float(np.max(np.abs(a - b))) / scale if b.size else 0.0
    return ConvergenceInfo(base, doubled, disc, tol, bool(disc <= 10.0 * tol), certified)


def _gh_tensor(order, dim):
    rule = QuadratureRule.gauss_hermite(order)
    x, log_w = rule.nodes[:, 0], np.log(rule.weights)
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    pts = np.stack([g.reshape(-1) for g in grids], axis=1)
    lw = sum(np.meshgrid(*([log_w] * dim), indexing="ij")).reshape(-1)
    return pts, lw


def _hermite_coeffs_at(f, indices, order):
    pts, lw = _gh_tensor(order, f.dim)
    # int f h_alpha dx = sum w_k exp(|x_k|^2) f(x_k) h_alpha(x_k)
    weights = np.exp(lw + (pts ** 2).sum(axis=1))
    vals = f(pts)
    return _basis_on_points(indices, pts) @ (weights * vals)


def hermite_coefficients(f, N, order=None, tol=1e-10, full_output=False):
    """Hermite coefficients ``(f, h_alpha)`` for ``|alpha| <= N`` by tensor Gauss-Hermite.

    The base order defaults to ``2N + 20``; the result is recomputed at twice
    that order and the doubled-order values are returned. ``meta`` of the
    returned table carries the convergence record.
    """
    f = _as_function(f, "real")
    N = check_degree(N)
    order = 2 * N + 20 if order is None else int(order)
    idx = multi_indices(f.dim, N)
    base = _hermite_coeffs_at(f, idx, order)
    fine = _hermite_coeffs_at(f, idx, 2 * order)
    info = _info(order, 2 * order, base, fine, tol)
    table = CoefficientTable.from_dense(fine, f.dim, N, kind="hermite-series",
                                        meta={"convergence": info.to_dict()})
    return (table, info) if full_output else table


def _bargmann_at(f, z, order):
    pts, lw = _gh_tensor(order, f.dim)
    vals = f(pts)
    nz = vals != 0
    pts, lw, vals = pts[nz], lw[nz], vals[nz]
    # kernel * exp(|y|^2) = exp(-<z,z>/2 + sqrt2 <z,y> + |y|^2/2)
    base = lw + 0.5 * (pts ** 2).sum(axis=1)
    out = np.empty(z.shape[0], dtype=complex)
    for start in range(0, z.shape[0], 256):
        zz = z[start:start + 256]
        expo = (-0.5 * (zz ** 2).sum(axis=1))[:, None] + math.sqrt(2.0) * zz @ pts.T + base[None, :]
        out[start:start + 256] = np.exp(expo) @ vals
    return math.pi ** (-0.25 * f.dim) * out


def _hermite_sum_mp(terms, y):
    """``sum c_n h_n(y)`` at an mpmath point by the three-term recurrence."""
    import mpmath

    top = max(n for n, _ in terms)
    h = [mpmath.exp(-y * y / 2) / mpmath.pi ** mpmath.mpf(0.25)]
    if top >= 1:
        h.append(mpmath.sqrt(2) * y * h[0])
    for n in range(1, top):
        h.append(mpmath.sqrt(mpmath.mpf(2) / (n + 1)) * y * h[n]
                 - mpmath.sqrt(mpmath.mpf(n) / (n + 1)) * h[n - 1])
    return mpmath.fsum(c * h[n] for n, c in terms)


def _bargmann_trapezoid_mp(table, z, step, half_width, dps):
    import mpmath

    with mpmath.workdps(dps):
        terms = [(int(a[0]), mpmath.exp(mpmath.mpf(lm)) * mpmath.expj(mpmath.mpf(ph)))
                 for a, lm, ph in zip(table.indices, table.log_mag, table.phase)]
        step = mpmath.mpf(step)
        m = int(math.ceil(half_width / float(step)))
        nodes = [k * step for k in range(-m, m + 1)]
        values = [_hermite_sum_mp(terms, y) for y in nodes]
        root2 = mpmath.sqrt(2)
        scale = step / mpmath.pi ** mpmath.mpf(0.25)
        out = np.empty(z.shape[0], dtype=complex)
        for i, zi in enumerate(z[:, 0]):
            w = mpmath.mpc(zi.real, zi.imag)
            total = mpmath.fsum(mpmath.exp(-(w * w + y * y) / 2 + root2 * w * y) * v
                                for y, v in zip(nodes, values))
            out[i] = complex(total * scale)
    return out


def _bargmann_mp(f, zz, dps, tol, certified):
    """Trapezoid rule on a truncated line in ``dps``-digit arithmetic, checked by halving the step.

    The integrand is entire and decays like a Gaussian, so the trapezoid rule
    converges geometrically; extended precision removes the cancellation
    floor that limits relative accuracy where ``|V f(z)|`` is tiny.
    """
    if not isinstance(f, CoefficientTable) or f.kind != "hermite-series" or f.dim != 1:
        raise ParameterError("extended precision needs a one-dimensional hermite-series table")
    dps = int(dps)
    if dps < 16:
        raise ParameterError(f"dps must be at least 16, got {dps}")
    if len(f) == 0:
        zeros = np.zeros(zz.shape[0], dtype=complex)
        return zeros, ConvergenceInfo(0, 0, 0.0, tol, True, certified)
    half_width = math.sqrt(2.0 * f.degree + 1.0) + float(np.max(np.abs(zz.real))) + 14.0
    base = _bargmann_trapezoid_mp(f, zz, 0.25, half_width, dps)
    fine = _bargmann_trapezoid_mp(f, zz, 0.125, half_width, dps)
    n_base = 2 * int(math.ceil(half_width / 0.25)) + 1
    n_fine = 2 * int(math.ceil(half_width / 0.125)) + 1
    # relative where the value stands above the working precision, absolute below
    scale = np.maximum(np.abs(fine), 10.0 ** (10 - dps))
    disc = float(np.max(np.abs(base - fine) / scale))
    return fine, ConvergenceInfo(n_base, n_fine, disc, tol, bool(disc <= 10.0 * tol), certified)


def bargmann_quadrature(f, z, order=None, tol=1e-9, check=True, full_output=False, dps=None):
    """``(V f)(z) = pi**(-d/4) int exp(-(<z,z> + |y|**2)/2 + sqrt(2) <z,y>) f(y) dy``.

    ``z`` is one point or a batch ``(m, d)``; a single point returns a scalar.
    In double precision the result carries an absolute error of a few ulps of
    the integrand, which is large relative to ``|V f(z)|`` near the origin for
    high degrees. Passing ``dps`` (decimal digits) for a one-dimensional
    Hermite-series table switches to an extended-precision trapezoid rule whose
    convergence record is relative; ``order`` is then ignored.
    """
    if dps is not None:
        zz = as_points(z, 1)
        single = np.ndim(z) <= 1 and np.size(z) == 1
        value, info = _bargmann_mp(f, zz, dps, tol, bool(np.all(np.abs(zz) <= CERTIFIED_Z)))
        result = value[0] if single else value
        return (result, info) if full_output else result
    f = _as_function(f, "real")
    single = np.ndim(z) <= 1 and np.size(z) == f.dim
    zz = as_points(z, f.dim)
    order = max(160, 2 * (f.degree or 0) + 60) if order is None else int(order)
    value = _bargmann_at(f, zz, order)
    certified = bool(np.all(np.abs(zz) <= CERTIFIED_Z))
    if check:
        fine = _bargmann_at(f, zz, 2 * order)
        info = _info(order, 2 * order, value, fine, tol, certified)
        value = fine
    else:
        info = ConvergenceInfo(order, order, math.nan, tol, False, certified)
    result = value[0] if single else value
    return (result, info) if full_output else result


# polar quadrature on C^d ---------------------------------------------------------


def _polar_grid(radial, angular):
    """Tensor grid over axes of (radius node, angle) pairs for C^d.

    ``radial`` is a list of ``(r_nodes, r_weights)`` per axis; ``angular`` the
    number of equispaced angles. Returns points ``(m, d)`` and weights ``(m,)``.
    """
    theta = 2.0 * math.pi * np.arange(angular) / angular
    axis_pts, axis_w = [], []
    for r, w in radial:
        axis_pts.append((r[:, None] * np.exp(1j * theta)[None, :]).reshape(-1))
        axis_w.append(np.repeat(w * (2.0 * math.pi / angular), angular))
    grids = np.meshgrid(*axis_pts, indexing="ij")
    wgrids = np.meshgrid(*axis_w, indexing="ij")
    pts = np.stack([g.reshape(-1) for g in grids], axis=1)
    weights = np.prod(np.stack([g.reshape(-1) for g in wgrids], axis=1), axis=1)
    return pts, weights


def _measure_radial(nu, n_radial):
    body = nu.body
    if isinstance(body, PointMasses):
        return None
    return [axis.nodes(n_radial) for axis in body.axes]


def _pia_at(F, nu, z, n_radial, n_angle):
    if isinstance(nu.body, PointMasses):
        pts, weights = [], []
        for radius, weight in nu.body.atoms:
            radial = [(np.array([t]), np.array([1.0])) for t in radius]
            p, w = _polar_grid(radial, n_angle)
            pts.append(p)
            weights.append(weight * w)
        pts, weights = np.concatenate(pts), np.concatenate(weights)
    else:
        pts, weights = _polar_grid(_measure_radial(nu, n_radial), n_angle)
    fw = F(pts) * weights * np.exp(-(np.abs(pts) ** 2).sum(axis=1))
    out = np.empty(z.shape[0], dtype=complex)
    for start in range(0, z.shape[0], 64):
        zz = z[start:start + 64]
        out[start:start + 64] = np.exp(zz @ np.conj(pts).T) @ fw
    return math.pi ** (-nu.dim) * out


def _pia_series(F, nu, z, n_radial):
    # angular integral done in closed form: only the diagonal terms survive
    table = F
    if isinstance(nu.body, PointMasses):
        radii, wts = nu.body.radii(), nu.body.weights()
        moments = np.zeros(len(table))
        for t, w in zip(radii, wts):
            moments += w * np.exp(-np.sum(t ** 2)) * np.prod(t[None, :] ** (2 * table.indices), axis=1)
    else:
        moments = np.ones(len(table))
        for j, (r, w) in enumerate(_measure_radial(nu, n_radial)):
            k = table.indices[:, j][:, None]
            moments *= (w[None, :] * np.exp(-r * r)[None, :] * r[None, :] ** (2 * k)).sum(axis=1)
    factor = (2.0 ** nu.dim) * moments * np.exp(-gammaln(table.indices + 1.0).sum(axis=1))
    scaled = CoefficientTable(table.dim, table.degree, table.indices,
                              table.log_mag + np.log(factor), table.phase)
    return series_values(scaled, z)


def pia_quadrature(F, nu, z, n_radial=64, n_angle=96, method="polar", tol=1e-9,
                   full_output=False):
    """``(Pi_A(F nu))(z) = pi**-d int F(w) exp((z, w) - |w|**2) dnu(w)``.

    ``method="polar"`` integrates over the full polar grid (Gauss nodes of the
    radial part of ``nu`` times an equispaced angle grid). ``method="series"``
    needs ``F`` as a power-series table and does the angular integral in closed
    form, leaving only radial moments.
    """
    if nu.is_distributional:
        raise UnsupportedMeasureError("pia_quadrature integrates against measures only")
    single = np.ndim(z) <= 1 and np.size(z) == nu.dim
    zz = as_points(z, nu.dim)
    if method == "series":
        if not isinstance(F, CoefficientTable) or F.kind != "power-series":
            raise ParameterError("method='series' needs a power-series table")
        base = _pia_series(F, nu, zz, n_radial)
        fine = _pia_series(F, nu, zz, 2 * n_radial)
        info = _info(n_radial, 2 * n_radial, base, fine, tol)
    elif method == "polar":
        Ff = _as_function(F, "complex")
        if Ff.dim != nu.dim:
            raise ParameterError("function and measure dimensions differ")
        base = _pia_at(Ff, nu, zz, n_radial, n_angle)
        fine = _pia_at(Ff, nu, zz, 2 * n_radial, 2 * n_angle)
        info = _info(n_radial, 2 * n_radial, base, fine, tol)
    else:
        raise ParameterError(f"method must be 'polar' or 'series', got {method!r}")
    result = fine[0] if single else fine
    return (result, info) if full_output else result


def _gaussian_grid(dim, R, n_radial, n_angle):
    x, w = roots_legendre(n_radial)
    r = R * (x + 1) / 2
    radial = [(r, w * R / 2 * r)] * dim
    pts, weights = _polar_grid(radial, n_angle)
    weights = weights * np.exp(-(np.abs(pts) ** 2).sum(axis=1)) * math.pi ** (-dim)
    return pts, weights


def a2_inner_quadrature(F, G, R=8.0, n_radial=96, n_angle=64, tol=1e-10, full_output=False):
    """``(F, G) = pi**-d int_{|z_j| <= R} F(z) conj(G(z)) exp(-|z|**2) dlambda(z)``."""
    F = _as_function(F, "complex")
    G = _as_function(G, "complex")
    if F.dim != G.dim:
        raise ParameterError("F and G must have the same dimension")
    R = check_positive("R", R)
    if R < 8.0:
        raise ParameterError(f"truncation radius must be at least 8, got {R}")

    def run(nr, na):
        pts, w = _gaussian_grid(F.dim, R, nr, na)
        return np.sum(w * F(pts) * np.conj(G(pts)))

    base = run(n_radial, n_angle)
    fine = run(2 * n_radial, 2 * n_angle)
    info = _info(n_radial, 2 * n_radial, base, fine, tol, certified=R <= CERTIFIED_R)
    return (fine, info) if full_output else fine


def _project(values, pts, weights, indices):
    out = np.empty(indices.shape[0], dtype=complex)
    log_abs = np.log(np.abs(pts))
    arg = np.angle(pts)
    for i, alpha in enumerate(indices):
        # conj(e_alpha(w)) = |w|^alpha exp(-i alpha arg w) / sqrt(alpha!)
        basis = np.exp(log_abs @ alpha - 0.5 * gammaln(alpha + 1.0).sum() - 1j * (arg @ alpha))
        out[i] = np.sum(weights * values * basis)
    return out


def a2_coefficients(F, N, R=8.0, n_radial=96, n_angle=64, tol=1e-10, full_output=False):
    """Power-series coefficients ``c(F, alpha) = (F, e_alpha)`` for ``|alpha| <= N``."""
    F = _as_function(F, "complex")
    N = check_degree(N)
    R = check_positive("R", R)
    if R < 8.0:
        raise ParameterError(f"truncation radius must be at least 8, got {R}")
    idx = multi_indices(F.dim, N)

    def run(nr, na):
        pts, w = _gaussian_grid(F.dim, R, nr, na)
        return _project(F(pts), pts, w, idx)

    base = run(n_radial, n_angle)
    fine = run(2 * n_radial, 2 * n_angle)
    info = _info(n_radial, 2 * n_radial, base, fine, tol, certified=R <= CERTIFIED_R)
    table = CoefficientTable.from_dense(fine, F.dim, N, meta={"convergence": info.to_dict()})
    return (table, info) if full_output else table


# growth of power series ----------------------------------------------------------


def _log_max_modulus(table, R, n_angle):
    theta = 2.0 * math.pi * np.arange(n_angle) / n_angle
    direction = np.ones(table.dim)
    best = -math.inf
    for th in theta:
        z = R * np.exp(1j * th) * direction
        best = max(best, series_eval(table, z, log_result=True).log_mag)
    return best


def _normalized_residual(x, y):
    design = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    spread = float(np.std(y))
    return (float(np.sqrt(np.mean(resid ** 2))) / spread if spread > 0 else 0.0), coef


def radial_growth_exponent(F, radii, n_angle=64, full_output=False):
    """Leading exponent ``beta`` in ``log M(R) ~ R**beta`` from a truncated power series.

    ``M(R)`` is the maximum of ``|F|`` over ``n_angle`` points of the diagonal
    circle ``R e^{i theta} (1, ..., 1)``. ``beta`` is the least-squares slope of
    ``log log M`` against ``log R``. If ``log M`` is better explained as linear
    in ``log R`` (polynomial growth), the growth is of log type and ``0.0`` is
    returned.
    """
    if F.kind != "power-series":
        raise ParameterError("radial_growth_exponent needs a power-series table")
    radii = np.asarray(radii, dtype=float).reshape(-1)
    if radii.size < 6 or np.any(np.diff(radii) <= 0) or radii[0] < 2.0:
        raise ParameterError("radii must be >= 2, strictly increasing, with at least 6 values")
    if len(F) == 0:
        raise IndeterminateError("M(R) vanishes identically")
    log_m = np.array([_log_max_modulus(F, R, n_angle) for R in radii])
    if not np.all(np.isfinite(log_m)):
        raise IndeterminateError("M(R) vanishes at some radius")
    if np.any(np.diff(log_m) <= 0):
        raise IndeterminateError("M(R) is not increasing on the radius grid")
    if np.any(log_m <= 0):
        raise IndeterminateError("M(R) <= 1 on the grid; log log M undefined")
    log_r = np.log(radii)
    res_poly, poly_coef = _normalized_residual(log_r, log_m)
    res_exp, exp_coef = _normalized_residual(log_r, np.log(log_m))
    log_type = res_poly < res_exp
    beta = 0.0 if log_type else float(exp_coef[1])
    info = {"log_type": bool(log_type), "log_max_modulus": log_m.tolist(),
            "residual_log_type": res_poly, "residual_exponential": res_exp,
            "polynomial_degree": float(poly_coef[1]), "fitted_beta": float(exp_coef[1])}
    return (beta, info) if full_output else beta


# harmonic-oscillator seminorm --------------------------------------------------


def _default_grid(table):
    L = math.sqrt(2.0 * table.degree) + 6.0
    return np.linspace(-L, L, 400)


def _log_sup_1d(lc, ph, idx, grid, refine):
    """``log sup_x |sum exp(lc) e^{i ph} h_alpha(x)|`` for d = 1 with local refinement."""
    m = lc.max()
    coeffs = np.exp(lc - m) * np.exp(1j * ph)
    top = int(idx.max())

    def mod(x):
        h = hermite_functions(top, np.atleast_1d(x))
        return np.abs(coeffs @ h[idx[:, 0]])

    vals = mod(grid)
    k = int(np.argmax(vals))
    best = float(vals[k])
    if refine:
        lo = grid[max(k - 1, 0)]
        hi = grid[min(k + 1, grid.size - 1)]
        res = minimize_scalar(lambda x: -float(mod(x)[0]), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return m + math.log(best) if best > 0 else -math.inf


def _log_sup_grid(lc, ph, idx, grid, dim):
    m = lc.max()
    coeffs = np.exp(lc - m) * np.exp(1j * ph)
    grids = np.meshgrid(*([grid] * dim), indexing="ij")
    pts = np.stack([g.reshape(-1) for g in grids], axis=1)
    vals = np.abs(coeffs @ _basis_on_points(idx, pts))
    best = float(vals.max())
    return m + math.log(best) if best > 0 else -math.inf


def pilipovic_profile(f, r, s, N_max, grid=None, refine=True):
    """``log(||H^N f||_inf / (r**N N!**(2s)))`` for ``N = 0..N_max``.

    ``H`` is the harmonic oscillator, diagonal on Hermite functions with
    eigenvalue ``2|alpha| + d``. The sup-norm is taken on ``grid`` (per axis),
    refined by a bounded scalar search around the grid maximum when ``d = 1``.
    """
    if f.kind != "hermite-series":
        raise ParameterError("pilipovic seminorm needs a hermite-series table")
    r = check_positive("r", r)
    s = check_positive("s", s)
    N_max = check_degree(N_max)
    if len(f) == 0:
        return np.full(N_max + 1, -np.inf)
    grid = _default_grid(f) if grid is None else np.asarray(grid, dtype=float).reshape(-1)
    log_eig = np.log(2.0 * f.degrees + f.dim)
    out = np.empty(N_max + 1)
    for N in range(N_max + 1):
        lc = f.log_mag + N * log_eig
        if f.dim == 1:
            log_sup = _log_sup_1d(lc, f.phase, f.indices, grid, refine)
        else:
            log_sup = _log_sup_grid(lc, f.phase, f.indices, grid, f.dim)
        out[N] = log_sup - N * math.log(r) - 2.0 * s * math.lgamma(N + 1.0)
    return out


def pilipovic_seminorm(f, r, s, N_max=30, grid=None, refine=True, full_output=False):
    """``sup_N ||H^N f||_inf / (r**N N!**(2s))`` over ``N <= N_max``."""
    prof = pilipovic_profile(f, r, s, N_max, grid, refine)
    k = int(np.argmax(prof))
    value = math.exp(prof[k]) if prof[k] < 709 else math.inf
    if full_output:
        return value, {"argmax_N": k, "log_profile": prof.tolist(), "log_value": float(prof[k])}
    return value
