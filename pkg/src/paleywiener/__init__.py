"""Paley-Wiener multipliers on Bargmann-side coefficient tables."""

__version__ = "0.1.0"

from .exceptions import (DomainError, IndeterminateError, InsufficientDataError, PaleyWienerError,
                         ParameterError, SeriesFormatError, SeriesOverflowError,
                         UnsupportedMeasureError)
from .series import (CoefficientTable, LogComplex, bargmann_coeff_map, inverse_bargmann_coeff_map,
                     log_factorial, monomial_eval, pair, parse_series_csv, read_series_csv,
                     series_eval, series_values, write_series_csv)
from .sequences import (Flat, GrowthLaw, GrowthReport, classify, generate_synthetic,
                        log_weighted_sup_norm, weighted_sup_norm)
from .measures import (AxisDensity, DistributionalPoint, PointMasses, ProductDensity,
                       RadialMeasure, log_sigma, sigma, sigma_bounds_check, sigma_distributional)
from .oracle import (QuadratureRule, SampledFunction, a2_coefficients, a2_inner_quadrature,
                     bargmann_quadrature, hermite_coefficients, hermite_eval, hermite_functions,
                     pia_quadrature, pilipovic_profile, pilipovic_seminorm, radial_growth_exponent)
from .multiplier import (SpaceDescriptor, TheoremCase, apply_multiplier, diagonal_consistency,
                         invert_multiplier, sandwich_profile, theorem_map_table, verify_theorem)
from .theta import PolydiscDomain, groch_consistency_check, scale_to_bargmann_side, theta_eval
from .estimators import BargmannTransformer, GrowthLawClassifier, MultiplierTransformer
