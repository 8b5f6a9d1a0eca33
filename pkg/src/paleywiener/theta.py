"""Synthesis of functions on R^d from analytic data on a polydisc.

For a power series ``F`` and a polydisc ``D`` of radii ``r`` the map is

    Theta(x) = int_D F(y + i eta) exp(-(|x - y|**2 / 2 + |y|**2 + |eta|**2))
                      exp(i (<y, eta> / 2 - <x, eta>)) dy deta.

Its Bargmann transform is ``Pi_A`` applied to a rescaled copy of ``F`` cut off
to the polydisc of radii ``r / sqrt(2)``; :func:`groch_consistency_check`
compares the two sides coefficient by coefficient.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import roots_legendre

from ._validation import check_degree, check_positive
from .exceptions import ParameterError
from .measures import RadialMeasure
from .oracle import SampledFunction
from .series import series_values


@dataclass(frozen=True)
class PolydiscDomain:
    """Open polydisc ``{|w_j| < r_j}`` in C^d, identified with a subset of R^{2d}."""

    radii: tuple

    def __post_init__(self):
        radii = tuple(check_positive("radius", r) for r in np.atleast_1d(self.radii))
        if not 1 <= len(radii) <= 4:
            raise ParameterError("polydisc dimension must lie in [1, 4]")
        object.__setattr__(self, "radii", radii)

    @property
    def dim(self):
        return len(self.radii)

    def scaled(self, factor):
        return PolydiscDomain(tuple(r * factor for r in self.radii))

    def as_measure(self):
        """Lebesgue measure restricted to the polydisc, as a radial measure."""
        from .measures import AxisDensity, ProductDensity

        return RadialMeasure(ProductDensity(tuple(AxisDensity("disc", r) for r in self.radii)))


def _polar_nodes(domain, n_radial, n_angle):
    x, w = roots_legendre(n_radial)
    theta = 2.0 * math.pi * np.arange(n_angle) / n_angle
    axis_pts, axis_w = [], []
    for R in domain.radii:
        rho = R * (x + 1) / 2
        pts = (rho[:, None] * np.exp(1j * theta)[None, :]).reshape(-1)
        wts = np.repeat(w * R / 2 * rho * (2.0 * math.pi / n_angle), n_angle)
        axis_pts.append(pts)
        axis_w.append(wts)
    grids = np.meshgrid(*axis_pts, indexing="ij")
    wgrids = np.meshgrid(*axis_w, indexing="ij")
    pts = np.stack([g.reshape(-1) for g in grids], axis=1)
    weights = np.prod(np.stack([g.reshape(-1) for g in wgrids], axis=1), axis=1)
    return pts, weights


def _theta_at(F, domain, x, n_radial, n_angle):
    w, weights = _polar_nodes(domain, n_radial, n_angle)
    y, eta = w.real, w.imag
    base = series_values(F, w) * weights * np.exp(-(y ** 2 + eta ** 2).sum(axis=1)
                                                  + 0.5j * (y * eta).sum(axis=1))
    out = np.empty(x.shape[0], dtype=complex)
    for start in range(0, x.shape[0], 128):
        xx = x[start:start + 128]
        diff2 = ((xx[:, None, :] - y[None, :, :]) ** 2).sum(axis=2)
        phase = (xx[:, None, :] * eta[None, :, :]).sum(axis=2)
        out[start:start + 128] = np.exp(-0.5 * diff2 - 1j * phase) @ base
    return out


def theta_eval(F, D, x, n_radial=48, n_angle=64, tol=1e-9, full_output=False):
    """``Theta_{F,r}(x)`` by Gauss-Legendre in the radius and the trapezoid rule in the angle.

    ``x`` is one point of R^d or a batch ``(m, d)``. The result is recomputed
    with both orders doubled; the doubled value is returned and the comparison
    goes into the convergence record when ``full_output`` is set.
    """
    from .oracle import _info

    if F.kind != "power-series":
        raise ParameterError("theta_eval needs a power-series table")
    if F.dim != D.dim:
        raise ParameterError(f"table has dim {F.dim}, domain has dim {D.dim}")
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 0 or (arr.ndim == 1 and arr.size == D.dim)
    pts = arr.reshape(-1, D.dim)
    if len(F) == 0:
        zeros = np.zeros(pts.shape[0], dtype=complex)
        result = zeros[0] if single else zeros
        return (result, None) if full_output else result
    base = _theta_at(F, D, pts, n_radial, n_angle)
    fine = _theta_at(F, D, pts, 2 * n_radial, 2 * n_angle)
    result = fine[0] if single else fine
    if full_output:
        return result, _info(n_radial, 2 * n_radial, base, fine, tol)
    return result


EXACT_SCALE_1D = 2.0 * math.pi ** 1.25
PRINTED_SCALE_1D = (8.0 * math.pi ** 5) ** 0.25


def scale_to_bargmann_side(F, D, convention="exact"):
    """Rescale ``F`` so that ``Pi_A`` of it, cut to ``D / sqrt(2)``, is the Bargmann transform of Theta.

    ``convention="exact"`` returns ``u -> (2 pi**(5/4))**d F(sqrt(2) u) exp(-3|u|**2/2)``,
    which reproduces Theta exactly. ``convention="as-printed"`` returns
    ``u -> (8 pi**5)**(d/4) F(sqrt(2) u)`` without the Gaussian factor; it is
    kept for comparison. Both come with the polydisc of radii ``r / sqrt(2)``.
    """
    if F.kind != "power-series":
        raise ParameterError("scale_to_bargmann_side needs a power-series table")
    if F.dim != D.dim:
        raise ParameterError(f"table has dim {F.dim}, domain has dim {D.dim}")
    d = F.dim
    root2 = math.sqrt(2.0)
    if convention == "exact":
        const = EXACT_SCALE_1D ** d

        def evaluate(u):
            return const * series_values(F, root2 * u) * np.exp(-1.5 * (np.abs(u) ** 2).sum(axis=1))
    elif convention == "as-printed":
        const = PRINTED_SCALE_1D ** d

        def evaluate(u):
            return const * series_values(F, root2 * u)
    else:
        raise ParameterError(f"convention must be 'exact' or 'as-printed', got {convention!r}")
    return SampledFunction(d, evaluate, "complex", degree=F.degree), D.scaled(1.0 / root2)


@dataclass(frozen=True)
class GrochReport:
    discrepancy: float
    side_a: np.ndarray
    side_b: np.ndarray
    scale: int
    orders: dict
    convention: str

    def to_dict(self):
        return {"discrepancy": self.discrepancy, "scale": self.scale, "orders": dict(self.orders),
                "convention": self.convention,
                "side_a": [[v.real, v.imag] for v in self.side_a],
                "side_b": [[v.real, v.imag] for v in self.side_b]}


# base orders at scale 1; each doubles with the scale
_BASE_ORDERS = {"theta": (4, 6), "hermite": 12, "pia": (4, 6), "projection": (16, 12)}


def groch_consistency_check(F, D, N=10, scale=1, convention="exact", R=8.0):
    """Compare the Hermite coefficients of Theta with the coefficients of ``Pi_A(F0 chi)``.

    Side A: Hermite coefficients of ``x -> Theta(x)`` by Gauss-Hermite quadrature
    of Theta values, each itself a polar quadrature over the polydisc. Side B:
    ``Pi_A`` of the rescaled function on the shrunken polydisc by polar
    quadrature, evaluated on a Gaussian polar grid of radius ``R`` and projected
    onto ``e_alpha``. All four rules run at their base order times ``scale``,
    without the internal order doubling of the public oracles, so that the
    effect of ``scale`` is visible. The discrepancy is
    ``max |a - b| / max |b|`` over ``|alpha| <= N`` (zero when both vanish).
    """
    from ._validation import multi_indices
    from .oracle import _gaussian_grid, _hermite_coeffs_at, _pia_at, _project

    if F.dim != 1 or D.dim != 1:
        raise ParameterError("the consistency check is implemented for d = 1")
    N = check_degree(N)
    if N > 20:
        raise ParameterError("N must not exceed 20")
    scale = int(scale)
    if scale < 1:
        raise ParameterError("scale must be a positive integer")
    orders = {"theta": tuple(scale * k for k in _BASE_ORDERS["theta"]),
              "hermite": max(scale * _BASE_ORDERS["hermite"], N + 2),
              "pia": tuple(scale * k for k in _BASE_ORDERS["pia"]),
              "projection": tuple(scale * k for k in _BASE_ORDERS["projection"])}
    idx = multi_indices(1, N)
    if len(F) == 0:
        zeros = np.zeros(idx.shape[0], dtype=complex)
        return GrochReport(0.0, zeros, zeros.copy(), scale, orders, convention)
    theta_fn = SampledFunction(1, lambda x: _theta_at(F, D, x, *orders["theta"]), "real")
    a = _hermite_coeffs_at(theta_fn, idx, orders["hermite"])
    F0, D0 = scale_to_bargmann_side(F, D, convention)
    pts, w = _gaussian_grid(1, R, *orders["projection"])
    b = _project(_pia_at(F0, D0.as_measure(), pts, *orders["pia"]), pts, w, idx)
    top = float(np.max(np.abs(b)))
    disc = float(np.max(np.abs(a - b))) / top if top > 0 else float(np.max(np.abs(a)))
    return GrochReport(disc, a, b, scale, orders, convention)
