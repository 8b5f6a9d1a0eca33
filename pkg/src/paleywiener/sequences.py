"""Weighted sequence norms, extremal coefficient generators and a growth-law classifier.

Two families of coefficient laws appear throughout:

* stretched: ``|c(alpha)| ~ exp(-+ r |alpha|**(1/(2s)))``
* factorial: ``|c(alpha)| ~ h**|alpha| * alpha!**(-+1/(2 sigma))``

with the upper sign on the decay side. The classifier fits both models to a
finite table and reports which one explains the data.
"""

from dataclasses import asdict, dataclass
import json
import math

import numpy as np
from scipy.optimize import minimize_scalar

from ._validation import check_degree, check_dim, check_positive, multi_indices
from .exceptions import InsufficientDataError, ParameterError
from .series import CoefficientTable, log_factorials

FAMILIES = ("stretched", "factorial")
SIDES = ("decay", "growth")
TAU_THRESHOLD = 0.02


@dataclass(frozen=True)
class Flat:
    """Marks a factorial order ``flat sigma`` as opposed to a stretched order ``s``."""

    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "sigma", check_positive("sigma", self.sigma))


@dataclass(frozen=True)
class GrowthLaw:
    """A coefficient law: ``family``, ``side``, order (``s`` or ``sigma``) and rate (``r`` or ``h``)."""

    family: str
    side: str
    order: float
    rate: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.side not in SIDES:
            raise ParameterError(f"side must be one of {SIDES}, got {self.side!r}")
        object.__setattr__(self, "order", check_positive("order", self.order))
        object.__setattr__(self, "rate", check_positive("rate", self.rate))

    @property
    def sign(self):
        return -1.0 if self.side == "decay" else 1.0

    @property
    def label(self):
        return f"{self.family}/{self.side}"

    def log_modulus(self, indices):
        """``log|c(alpha)|`` prescribed by the law for each row of ``indices``."""
        indices = np.asarray(indices, dtype=np.int64)
        n = indices.sum(axis=1).astype(float)
        if self.family == "stretched":
            return self.sign * self.rate * n ** (1.0 / (2.0 * self.order))
        return n * math.log(self.rate) + self.sign * log_factorials(indices) / (2.0 * self.order)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(data["family"], data["side"], data["order"], data.get("rate", 1.0))


@dataclass(frozen=True)
class GrowthReport:
    """Both model fits for a coefficient table plus the selected law."""

    fitted_tau: float
    fitted_log_h: float
    stretched_exponent: float
    stretched_rate: float
    residual_factorial: float
    residual_stretched: float
    verdict: object

    @property
    def determinate(self):
        return isinstance(self.verdict, GrowthLaw)

    def to_dict(self):
        out = {k: getattr(self, k) for k in ("fitted_tau", "fitted_log_h", "stretched_exponent",
                                              "stretched_rate", "residual_factorial",
                                              "residual_stretched")}
        out["verdict"] = self.verdict.to_dict() if self.determinate else "indeterminate"
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data):
        verdict = data["verdict"]
        if verdict != "indeterminate":
            verdict = GrowthLaw.from_dict(verdict)
        fields = {k: float(data[k]) for k in ("fitted_tau", "fitted_log_h", "stretched_exponent",
                                              "stretched_rate", "residual_factorial",
                                              "residual_stretched")}
        return cls(verdict=verdict, **fields)


def _log_weights(indices, r, order, variant):
    n = indices.sum(axis=1).astype(float)
    if isinstance(order, Flat):
        sign = 1.0 if variant == "decay" else -1.0
        return -n * math.log(r) + sign * log_factorials(indices) / (2.0 * order.sigma)
    s = check_positive("s", order)
    sign = 1.0 if variant == "decay" else -1.0
    return sign * r * n ** (1.0 / (2.0 * s))


def log_weighted_sup_norm(a, r, order, variant="decay"):
    """Logarithm of :func:`weighted_sup_norm`; ``-inf`` for the zero table."""
    r = check_positive("r", r)
    if variant not in SIDES:
        raise ParameterError(f"variant must be one of {SIDES}, got {variant!r}")
    if len(a) == 0:
        return -math.inf
    return float(np.max(a.log_mag + _log_weights(a.indices, r, order, variant)))


def weighted_sup_norm(a, r, order, variant="decay"):
    """Sup over stored indices of ``|a(alpha)| w(alpha)``.

    ``order`` is a positive float ``s`` for the stretched weights
    ``exp(+-r|alpha|**(1/(2s)))`` or a :class:`Flat` instance for the factorial
    weights ``r**-|alpha| alpha!**(+-1/(2 sigma))``. The plus sign belongs to
    ``variant="decay"``. Values beyond the double range come back as ``inf``;
    use :func:`log_weighted_sup_norm` to keep them.
    """
    value = log_weighted_sup_norm(a, r, order, variant)
    with np.errstate(over="ignore"):
        return float(np.exp(value))


def generate_synthetic(law, N, d=1, phase_seed=0, random_phase=True):
    """Table over all ``|alpha| <= N`` whose moduli follow ``law`` exactly."""
    N = check_degree(N, minimum=8)
    d = check_dim(d)
    idx = multi_indices(d, N)
    log_mag = law.log_modulus(idx)
    if random_phase:
        phase = np.random.default_rng(phase_seed).uniform(0.0, 2.0 * math.pi, idx.shape[0])
    else:
        phase = np.zeros(idx.shape[0])
    meta = {"law": law.to_dict(), "phase_seed": int(phase_seed), "random_phase": bool(random_phase)}
    return CoefficientTable(d, N, idx, log_mag, phase, kind="power-series", meta=meta)


def _factorial_fit(n, lf, y):
    # log(1+n) is a nuisance column absorbing algebraic prefactors such as 1/(n+1)
    design = np.column_stack([np.ones_like(n), n, lf, np.log1p(n)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return coef, float(np.sqrt(np.mean(resid ** 2)))


def _stretched_profile(n, y, p):
    col = n ** p
    scale = col.max()
    design = np.column_stack([np.ones_like(n), col / scale])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return float(np.sqrt(np.mean(resid ** 2))), coef[1] / scale


def _stretched_fit(n, y, p_bounds=(0.05, 8.0), grid=400):
    ps = np.linspace(p_bounds[0], p_bounds[1], grid)
    prof = [_stretched_profile(n, y, p)[0] for p in ps]
    k = int(np.argmin(prof))
    lo = ps[max(k - 1, 0)]
    hi = ps[min(k + 1, grid - 1)]
    res = minimize_scalar(lambda p: _stretched_profile(n, y, p)[0], bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-12})
    p = float(res.x)
    resid, slope = _stretched_profile(n, y, p)
    return p, slope, resid


def classify(a, tau_threshold=TAU_THRESHOLD, window=0.25, min_shells=12):
    """Fit factorial and stretched laws to ``a`` and pick the better-supported one.

    The factorial model regresses ``log|c|`` on ``1, |alpha|, log alpha!, log(1+|alpha|)``
    over all nonzero entries with ``|alpha|`` in ``[window*N, N]``. The stretched
    model fits ``a + rho n**p`` to the shell maxima of ``log|c|`` by profile least
    squares in ``p``. A fitted ``|tau|`` below ``tau_threshold`` selects the
    stretched family; otherwise the model with the smaller residual wins.
    """
    if len(a) == 0:
        raise InsufficientDataError("table has no nonzero coefficients")
    degrees = a.degrees
    shells = np.unique(degrees)
    if shells.size < min_shells:
        raise InsufficientDataError(
            f"need at least {min_shells} nonzero shells, table has {shells.size}")
    top = int(shells.max())
    keep = degrees >= window * top
    if np.unique(degrees[keep]).size < 4:
        keep = np.ones_like(keep)
    n_all = degrees[keep].astype(float)
    y_all = a.log_mag[keep]
    coef, res_f = _factorial_fit(n_all, log_factorials(a.indices[keep]), y_all)
    log_h, tau = float(coef[1]), float(coef[2])

    shell_n = np.unique(degrees[keep])
    shell_max = np.array([a.log_mag[degrees == k].max() for k in shell_n])
    p, rho, res_s = _stretched_fit(shell_n.astype(float), shell_max)

    verdict = "indeterminate"
    if abs(tau) < tau_threshold or res_s < res_f:
        if rho != 0 and math.isfinite(p) and 0.05 + 1e-6 < p < 8.0 - 1e-6:
            side = "decay" if rho < 0 else "growth"
            verdict = GrowthLaw("stretched", side, 1.0 / (2.0 * p), abs(rho))
    elif math.isfinite(tau):
        side = "decay" if tau < 0 else "growth"
        verdict = GrowthLaw("factorial", side, 1.0 / (2.0 * abs(tau)), math.exp(log_h))
    return GrowthReport(fitted_tau=tau, fitted_log_h=log_h, stretched_exponent=p,
                        stretched_rate=abs(rho), residual_factorial=res_f,
                        residual_stretched=res_s, verdict=verdict)


def shell_log_max(a):
    """``(n, log max_{|alpha|=n} |c(alpha)|)`` over nonzero shells."""
    degrees = a.degrees
    shells = np.unique(degrees)
    return shells, np.array([a.log_mag[degrees == k].max() for k in shells])

