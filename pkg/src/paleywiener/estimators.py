"""scikit-learn style wrappers around the coefficient-table operations.

Samples are :class:`~paleywiener.series.CoefficientTable` objects (or, for
:class:`BargmannTransformer`, functions on R^d), so ``X`` is a sequence of
such objects rather than a numeric matrix.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import InsufficientDataError, ParameterError
from .measures import RadialMeasure
from .multiplier import apply_multiplier, invert_multiplier
from .oracle import SampledFunction, hermite_coefficients
from .sequences import TAU_THRESHOLD, classify
from .series import CoefficientTable, bargmann_coeff_map, inverse_bargmann_coeff_map

INDETERMINATE = "indeterminate"


def check_tables(X, kind=None):
    """Coerce ``X`` to a list of tables, optionally checking their kind."""
    if isinstance(X, CoefficientTable):
        X = [X]
    try:
        tables = list(X)
    except TypeError:
        raise ParameterError("X must be a CoefficientTable or a sequence of them") from None
    if not tables:
        raise ParameterError("X is empty")
    for t in tables:
        if not isinstance(t, CoefficientTable):
            raise ParameterError(f"expected CoefficientTable, got {type(t).__name__}")
        if kind is not None and t.kind != kind:
            raise ParameterError(f"expected {kind} tables, got {t.kind}")
    return tables


def check_measure(measure):
    if isinstance(measure, dict):
        measure = RadialMeasure.from_dict(measure)
    if not isinstance(measure, RadialMeasure):
        raise ParameterError("measure must be a RadialMeasure or its JSON dict")
    return measure


class MultiplierTransformer(TransformerMixin, BaseEstimator):
    """``F -> Pi_A(F nu)`` on power-series tables; ``inverse_transform`` undoes it."""

    def __init__(self, measure=None):
        self.measure = measure

    def fit(self, X=None, y=None):
        self.measure_ = check_measure(self.measure if self.measure is not None
                                      else RadialMeasure.disc())
        return self

    def transform(self, X):
        check_is_fitted(self, "measure_")
        return [apply_multiplier(t, self.measure_) for t in check_tables(X, "power-series")]

    def inverse_transform(self, X):
        check_is_fitted(self, "measure_")
        return [invert_multiplier(t, self.measure_) for t in check_tables(X, "power-series")]


class BargmannTransformer(TransformerMixin, BaseEstimator):
    """Functions on R^d to power-series tables through their Hermite coefficients."""

    def __init__(self, degree=20, order=None, tol=1e-10):
        self.degree = degree
        self.order = order
        self.tol = tol

    def fit(self, X=None, y=None):
        if int(self.degree) < 0:
            raise ParameterError("degree must be non-negative")
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        if isinstance(X, (SampledFunction, CoefficientTable)):
            X = [X]
        out = []
        for f in X:
            if isinstance(f, CoefficientTable):
                if f.kind != "hermite-series":
                    raise ParameterError("tables passed to transform must be hermite-series")
                out.append(bargmann_coeff_map(f.truncate(min(f.degree, int(self.degree)))))
            else:
                out.append(bargmann_coeff_map(
                    hermite_coefficients(f, int(self.degree), order=self.order, tol=self.tol)))
        return out

    def inverse_transform(self, X):
        check_is_fitted(self, "n_features_in_")
        return [inverse_bargmann_coeff_map(t) for t in check_tables(X, "power-series")]


class GrowthLawClassifier(ClassifierMixin, BaseEstimator):
    """Labels tables ``"<family>/<side>"`` or ``"indeterminate"``.

    ``fit`` only records the label set seen in ``y``; the decision itself is
    the deterministic two-model fit of :func:`~paleywiener.sequences.classify`.
    """

    def __init__(self, tau_threshold=TAU_THRESHOLD, window=0.25, min_shells=12):
        self.tau_threshold = tau_threshold
        self.window = window
        self.min_shells = min_shells

    def fit(self, X, y=None):
        check_tables(X)
        labels = [] if y is None else list(y)
        self.classes_ = np.array(sorted(set(labels) | {INDETERMINATE}), dtype=object)
        return self

    def report(self, X):
        out = []
        for t in check_tables(X):
            try:
                out.append(classify(t, self.tau_threshold, self.window, self.min_shells))
            except InsufficientDataError:
                out.append(None)
        return out

    def predict(self, X):
        check_is_fitted(self, "classes_")
        labels = []
        for rep in self.report(X):
            labels.append(rep.verdict.label if rep is not None and rep.determinate
                          else INDETERMINATE)
        return np.array(labels, dtype=object)

    def predict_order(self, X):
        """Fitted ``s`` or ``sigma`` per table (``nan`` when indeterminate)."""
        return np.array([rep.verdict.order if rep is not None and rep.determinate else np.nan
                         for rep in self.report(X)])
