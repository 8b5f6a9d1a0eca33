"""Polyradial measures and the multiplier sequence they induce.

A measure in the class handled here factors as ``dnu = dtheta dnu0(r)`` with
``dtheta`` Lebesgue measure on the torus and ``nu0`` a measure on ``R_+^d``
that already contains the polar Jacobian (``dnu0 = r dr`` for the unit disc).
The multiplier sequence is

    sigma_alpha = 2**d * int exp(-|r|**2) r**(2 alpha) dnu0(r).
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from scipy.special import logsumexp, roots_jacobi, roots_legendre

from ._validation import as_multi_index, check_degree, check_positive, multi_indices
from .exceptions import ParameterError, UnsupportedMeasureError

AXIS_KINDS = ("disc", "annulus", "power")
MAX_DERIVATIVE = 6


@lru_cache(maxsize=32)
def _legendre(n):
    x, w = roots_legendre(n)
    return x, w


@lru_cache(maxsize=32)
def _jacobi(n, beta):
    x, w = roots_jacobi(n, 0.0, beta)
    return x, w


@dataclass(frozen=True)
class PointMasses:
    """Finite sum of torus measures: ``sum_k w_k delta_{|z| = t_k}`` in radial form."""

    atoms: tuple

    def __post_init__(self):
        atoms = []
        for radius, weight in self.atoms:
            radius = tuple(check_positive("atom radius", t) for t in np.atleast_1d(radius))
            atoms.append((radius, check_positive("atom weight", weight)))
        if not atoms:
            raise ParameterError("PointMasses needs at least one atom")
        if len({len(r) for r, _ in atoms}) != 1:
            raise ParameterError("all atoms must have the same dimension")
        object.__setattr__(self, "atoms", tuple(atoms))

    @property
    def dim(self):
        return len(self.atoms[0][0])

    def radii(self):
        return np.array([r for r, _ in self.atoms], dtype=float)

    def weights(self):
        return np.array([w for _, w in self.atoms], dtype=float)

    def to_dict(self):
        return {"type": "point-masses",
                "atoms": [{"radius": list(r), "weight": w} for r, w in self.atoms]}


@dataclass(frozen=True)
class AxisDensity:
    """One-dimensional radial part ``nu0`` of a rotation invariant density on C.

    kind ``"disc"``: ``r dr`` on ``[0, radius]`` (Lebesgue measure on a disc);
    kind ``"annulus"``: ``r dr`` on ``[inner, radius]``;
    kind ``"power"``: ``r**exponent dr`` on ``[0, radius]`` with ``exponent > -1``.

    ``tilt`` multiplies the density by ``exp(tilt r**2)``.
    """

    kind: str
    radius: float = 1.0
    inner: float = 0.0
    exponent: float = 1.0
    tilt: float = 0.0

    def __post_init__(self):
        if self.kind not in AXIS_KINDS:
            raise ParameterError(f"axis kind must be one of {AXIS_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "radius", check_positive("radius", self.radius))
        inner = float(self.inner)
        if self.kind == "annulus":
            if not 0.0 <= inner < self.radius:
                raise ParameterError(f"annulus needs 0 <= inner < radius, got {inner}, {self.radius}")
        else:
            inner = 0.0
        object.__setattr__(self, "inner", inner)
        exponent = float(self.exponent) if self.kind == "power" else 1.0
        if not exponent > -1.0:
            raise ParameterError(f"power exponent must exceed -1, got {exponent}")
        object.__setattr__(self, "exponent", exponent)
        tilt = float(self.tilt)
        if not math.isfinite(tilt):
            raise ParameterError("tilt must be finite")
        object.__setattr__(self, "tilt", tilt)

    def nodes(self, n):
        """Quadrature nodes on the support and weights that include the density."""
        a, b = self.inner, self.radius
        if self.kind == "power":
            x, w = _jacobi(n, self.exponent)
            r = b * (1.0 + x) / 2.0
            weights = w * (b / 2.0) ** (self.exponent + 1.0)
        else:
            x, w = _legendre(n)
            r = a + (b - a) * (1.0 + x) / 2.0
            weights = w * (b - a) / 2.0 * r
        if self.tilt:
            weights = weights * np.exp(self.tilt * r * r)
        return r, weights

    def mass(self, n=64):
        _, w = self.nodes(n)
        return float(w.sum())

    def log_moments(self, degree, n_quad=None):
        """``log(2 int exp(-r**2) r**(2k) dnu0)`` for ``k = 0..degree``."""
        n_quad = max(64, degree + 24) if n_quad is None else n_quad
        r, w = self.nodes(n_quad)
        k = np.arange(degree + 1)[:, None]
        # Gauss nodes are interior, so log(r) is finite
        terms = np.log(w)[None, :] - r[None, :] ** 2 + 2.0 * k * np.log(r)[None, :]
        return math.log(2.0) + logsumexp(terms, axis=1)

    def to_dict(self):
        out = {"kind": self.kind, "radius": self.radius}
        if self.kind == "annulus":
            out["inner"] = self.inner
        if self.kind == "power":
            out["exponent"] = self.exponent
        if self.tilt:
            out["tilt"] = self.tilt
        return out


@dataclass(frozen=True)
class ProductDensity:
    """Tensor product of per-axis radial densities."""

    axes: tuple

    def __post_init__(self):
        axes = tuple(self.axes)
        if not axes or not all(isinstance(a, AxisDensity) for a in axes):
            raise ParameterError("ProductDensity needs a non-empty tuple of AxisDensity")
        object.__setattr__(self, "axes", axes)

    @property
    def dim(self):
        return len(self.axes)

    def to_dict(self):
        return {"type": "product-density", "axes": [a.to_dict() for a in self.axes]}


@dataclass(frozen=True)
class DistributionalPoint:
    """``sum_k c_k delta^{(m_k)}_{t_k}`` acting on the radial variable (``d = 1``)."""

    terms: tuple

    def __post_init__(self):
        terms = []
        for t, m, c in self.terms:
            t = check_positive("distribution radius", t)
            if isinstance(m, bool) or int(m) != m or m < 0:
                raise ParameterError(f"derivative order must be a non-negative integer, got {m!r}")
            if int(m) > MAX_DERIVATIVE:
                raise UnsupportedMeasureError(
                    f"derivative order {int(m)} exceeds the supported maximum {MAX_DERIVATIVE}")
            c = float(c)
            if not math.isfinite(c):
                raise ParameterError("distribution coefficients must be finite")
            terms.append((t, int(m), c))
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def dim(self):
        return 1

    def to_dict(self):
        return {"type": "distributional-point",
                "terms": [{"radius": t, "order": m, "coefficient": c} for t, m, c in self.terms]}


@dataclass(frozen=True)
class RadialMeasure:
    """A polyradial measure with support radii ``t1 <= t2``.

    ``t1`` is a torus contained in the support and ``t2`` the radii of a closed
    polydisc containing it. Both default to the tightest values the body allows.
    """

    body: object
    t1: tuple = None
    t2: tuple = None
    dim: int = field(init=False)

    def __post_init__(self):
        body = self.body
        if not isinstance(body, (PointMasses, ProductDensity, DistributionalPoint)):
            raise ParameterError(f"unsupported measure body {type(body).__name__}")
        dim = body.dim
        object.__setattr__(self, "dim", dim)
        t1, t2 = self._default_radii()
        if self.t1 is not None:
            t1 = self._as_radii("t1", self.t1)
        if self.t2 is not None:
            t2 = self._as_radii("t2", self.t2)
        if any(a > b * (1 + 1e-12) for a, b in zip(t1, t2)):
            raise ParameterError(f"t1 must not exceed t2 componentwise, got {t1} and {t2}")
        self._check_support(t1, t2)
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "t2", t2)

    def _as_radii(self, name, values):
        values = tuple(check_positive(name, v) for v in np.atleast_1d(values))
        if len(values) == 1 and self.dim > 1:
            values = values * self.dim
        if len(values) != self.dim:
            raise ParameterError(f"{name} must have {self.dim} entries")
        return values

    def _default_radii(self):
        body = self.body
        if isinstance(body, PointMasses):
            radii = body.radii()
            t1 = tuple(radii[int(np.argmax(np.log(radii).sum(axis=1)))])
            return t1, tuple(radii.max(axis=0))
        if isinstance(body, ProductDensity):
            outer = tuple(a.radius for a in body.axes)
            return outer, outer
        radii = [t for t, _, _ in body.terms] or [1.0]
        return (min(radii),), (max(radii),)

    def _check_support(self, t1, t2):
        body = self.body
        tol = 1e-12
        if isinstance(body, PointMasses):
            radii = body.radii()
            if not np.any(np.all(np.abs(radii - np.array(t1)) <= tol * np.array(t1), axis=1)):
                raise ParameterError("t1 must be the radius of one of the atoms")
            if np.any(radii > np.array(t2) * (1 + tol)):
                raise ParameterError("all atoms must lie inside the polydisc of radii t2")
        elif isinstance(body, ProductDensity):
            for j, axis in enumerate(body.axes):
                if not axis.inner * (1 - tol) <= t1[j] <= axis.radius * (1 + tol):
                    raise ParameterError(f"t1[{j}] must lie in the support [{axis.inner}, {axis.radius}]")
                if axis.radius > t2[j] * (1 + tol):
                    raise ParameterError(f"support radius {axis.radius} exceeds t2[{j}] = {t2[j]}")
        else:
            for t, _, _ in body.terms:
                if t > t2[0] * (1 + tol):
                    raise ParameterError(f"distribution point {t} exceeds t2 = {t2[0]}")

    # constructors -------------------------------------------------------------

    @classmethod
    def point_mass(cls, t, weight=1.0):
        t = tuple(np.atleast_1d(t).astype(float))
        return cls(PointMasses(((t, weight),)))

    @classmethod
    def disc(cls, radius=1.0, dim=1):
        return cls(ProductDensity(tuple(AxisDensity("disc", radius) for _ in range(dim))))

    @classmethod
    def annulus(cls, inner, outer, dim=1):
        return cls(ProductDensity(tuple(AxisDensity("annulus", outer, inner=inner)
                                        for _ in range(dim))))

    @classmethod
    def distributional(cls, terms):
        return cls(DistributionalPoint(tuple(terms)))

    @property
    def is_distributional(self):
        return isinstance(self.body, DistributionalPoint)

    def mass(self):
        """Total mass of ``nu0`` (not defined for distributions)."""
        if isinstance(self.body, PointMasses):
            return float(self.body.weights().sum())
        if isinstance(self.body, ProductDensity):
            return float(np.prod([a.mass() for a in self.body.axes]))
        raise UnsupportedMeasureError("a distribution has no total mass")

    # JSON ---------------------------------------------------------------------

    def to_dict(self):
        return {"dim": self.dim, "body": self.body.to_dict(), "t1": list(self.t1),
                "t2": list(self.t2)}

    @classmethod
    def from_dict(cls, data):
        try:
            dim = int(data["dim"])
            body = data["body"]
            kind = body["type"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"measure spec needs 'dim' and 'body.type': {exc}") from None
        if kind == "point-masses":
            atoms = tuple((tuple(np.atleast_1d(a["radius"]).astype(float)), a.get("weight", 1.0))
                          for a in body["atoms"])
            built = PointMasses(atoms)
        elif kind == "product-density":
            axes = [AxisDensity(**{k: v for k, v in a.items()}) for a in body["axes"]]
            if len(axes) == 1 and dim > 1:
                axes = axes * dim
            built = ProductDensity(tuple(axes))
        elif kind == "distributional-point":
            built = DistributionalPoint(tuple((t["radius"], t.get("order", 0), t["coefficient"])
                                              for t in body["terms"]))
        else:
            raise ParameterError(f"unknown measure body type {kind!r}")
        if built.dim != dim:
            raise ParameterError(f"body has dimension {built.dim}, spec says {dim}")
        return cls(built, t1=data.get("t1"), t2=data.get("t2"))


# multiplier sequence ---------------------------------------------------------------


def _require_positive_body(nu, op):
    if nu.is_distributional:
        raise UnsupportedMeasureError(f"{op} needs a positive measure; use sigma_distributional")


def log_sigma_indices(nu, indices, n_quad=None):
    """``log sigma_alpha`` for every row of an integer index array."""
    _require_positive_body(nu, "log_sigma")
    indices = np.asarray(indices, dtype=np.int64).reshape(-1, nu.dim)
    if indices.shape[0] == 0:
        return np.zeros(0)
    body = nu.body
    if isinstance(body, PointMasses):
        radii = body.radii()
        base = nu.dim * math.log(2.0) + np.log(body.weights()) - (radii ** 2).sum(axis=1)
        terms = base[None, :] + 2.0 * indices @ np.log(radii).T
        return logsumexp(terms, axis=1)
    top = int(indices.max())
    out = np.zeros(indices.shape[0])
    for j, axis in enumerate(body.axes):
        out += axis.log_moments(top, n_quad)[indices[:, j]]
    return out


def log_sigma(nu, alpha, n_quad=None):
    """``log sigma_alpha`` for one multi-index."""
    alpha = as_multi_index(alpha, nu.dim)
    return float(log_sigma_indices(nu, [alpha], n_quad)[0])


def sigma(nu, alpha, n_quad=None):
    """``sigma_alpha = 2**d int exp(-|r|**2) r**(2 alpha) dnu0(r)``."""
    return math.exp(log_sigma(nu, alpha, n_quad))


def log_sigma_table(nu, degree, n_quad=None):
    """``log sigma_alpha`` aligned with ``multi_indices(nu.dim, degree)``."""
    return log_sigma_indices(nu, multi_indices(nu.dim, check_degree(degree)), n_quad)


def _hermite_phys(k, t):
    h0, h1 = 1.0, 2.0 * t
    if k == 0:
        return h0
    for j in range(1, k):
        h0, h1 = h1, 2.0 * t * h1 - 2.0 * j * h0
    return h1


def _signed_log_pairing(t, m, n):
    """``(log|.|, sign)`` of ``(-1)**m phi^{(m)}(t)`` for ``phi(r) = exp(-r**2) r**(2n+1)``."""
    p = 2 * n + 1
    total = 0.0
    for k in range(m + 1):
        j = m - k
        falling = math.prod(p - i for i in range(j))
        # d^k/dr^k exp(-r^2) = (-1)^k H_k(r) exp(-r^2)
        total += math.comb(m, k) * (-1) ** k * _hermite_phys(k, t) * falling * t ** (-j)
    total *= (-1) ** m
    if total == 0:
        return -math.inf, 0
    return -t * t + p * math.log(t) + math.log(abs(total)), (1 if total > 0 else -1)


def signed_log_sigma_distributional(nu, alpha):
    """``(log|sigma_alpha|, sign)`` for a distributional body; sign 0 means exact zero."""
    if not nu.is_distributional:
        raise UnsupportedMeasureError("sigma_distributional needs a DistributionalPoint body")
    (n,) = as_multi_index(alpha, 1)
    logs, signs = [], []
    for t, m, c in nu.body.terms:
        if c == 0:
            continue
        lv, sg = _signed_log_pairing(t, m, n)
        if sg == 0:
            continue
        logs.append(lv + math.log(abs(c)))
        signs.append(sg * (1 if c > 0 else -1))
    if not logs:
        return -math.inf, 0
    value, sign = logsumexp(np.array(logs), b=np.array(signs, dtype=float), return_sign=True)
    if sign == 0 or not np.isfinite(value):
        return -math.inf, 0
    return math.log(2.0) + float(value), int(sign)


def sigma_distributional(nu, alpha):
    """``2 <nu0, phi_alpha>`` with ``phi_alpha(r) = exp(-r**2) r**(2 alpha + 1)``."""
    lv, sign = signed_log_sigma_distributional(nu, alpha)
    return 0.0 if sign == 0 else sign * math.exp(lv)


@dataclass(frozen=True)
class BoundsReport:
    """Best constants in ``C1 t1**(2a) exp(-|t2|**2) <= sigma_a <= C2 t2**(2a)``."""

    C1: float
    C2: float
    log_C1: float
    log_C2: float
    alpha_max: int
    ok: bool
    violations: tuple

    def to_dict(self):
        return {"C1": self.C1, "C2": self.C2, "log_C1": self.log_C1, "log_C2": self.log_C2,
                "alpha_max": self.alpha_max, "ok": self.ok, "violations": list(self.violations)}


def sigma_bounds_check(nu, alpha_max, slack=1e-9):
    """Compute the best two-sided constants over ``|alpha| <= alpha_max`` and audit them.

    Besides finiteness and positivity, ``C2`` may not exceed ``2**d`` times the
    mass of ``nu0``; for atomic bodies ``C1`` must be at least ``2**d`` times the
    weight of the atom sitting at ``t1``. A breach signals a quadrature or
    support bug and is listed in ``violations``.
    """
    _require_positive_body(nu, "sigma_bounds_check")
    alpha_max = check_degree(alpha_max)
    idx = multi_indices(nu.dim, alpha_max)
    ls = log_sigma_indices(nu, idx)
    t1, t2 = np.array(nu.t1), np.array(nu.t2)
    lower = 2.0 * idx @ np.log(t1) - float(np.sum(t2 ** 2))
    upper = 2.0 * idx @ np.log(t2)
    log_c1 = float(np.min(ls - lower))
    log_c2 = float(np.max(ls - upper))
    violations = []
    if not np.all(np.isfinite(ls)):
        violations.append("sigma is zero or non-finite for some alpha")
    if not (math.isfinite(log_c1) and math.isfinite(log_c2)):
        violations.append("constants are not finite and positive")
    cap = nu.dim * math.log(2.0) + math.log(nu.mass())
    if log_c2 > cap + math.log1p(slack):
        violations.append(f"C2 = {math.exp(log_c2):.17g} exceeds 2^d * mass = {math.exp(cap):.17g}")
    if isinstance(nu.body, PointMasses):
        radii = nu.body.radii()
        at_t1 = np.all(np.abs(radii - t1) <= 1e-12 * t1, axis=1)
        floor = nu.dim * math.log(2.0) + math.log(float(nu.body.weights()[at_t1].max()))
        if log_c1 < floor + math.log1p(-slack):
            violations.append(f"C1 = {math.exp(log_c1):.17g} below the atom bound {math.exp(floor):.17g}")
    return BoundsReport(C1=math.exp(log_c1), C2=math.exp(log_c2), log_C1=log_c1, log_C2=log_c2,
                        alpha_max=alpha_max, ok=not violations, violations=tuple(violations))
