"""Toeplitz and Hankel operators on Orlicz sequence spaces: N-functions,
Matuszewska-Orlicz indices, the interpolating function ``Phi_theta``,
Luxemburg norms, symbol calculus and a local principle for Fredholmness."""

from __future__ import annotations

from .errors import (ConvergenceError, CoverError, DegenerateError, DilationInfiniteError, DomainError,
                     IndexDivergedError, IndicesOutOfRangeError, OrliczError, RangeError, SizeGuardError,
                     SymbolError)
from .indices import (IndexConfig, IndexReport, dilation, dilation_exponents, dilation_limits,
                      matuszewska_orlicz_indices)
from .localisation import (FredholmCertificate, LocalAssignment, LocalEntry, LocalisationReport,
                           cover_and_partition_check, equivalence_bound, fredholm_certificate, localise,
                           winding_number)
from .majorant import (PhiTheta, build_phi_theta, default_theta, exponent_transform_check,
                       least_concave_majorant, psi_theta, theta_range)
from .nfunction import Composite, NFunction, Power, PowerLog, TabulatedConcaveInverse, nfunction_from_json
from .operators import (build, flip_conjugation_residual, hankel, hankel_fejer_decay, hankel_tilde,
                        l2_multiplier_consistency, l2_norm, laurent, shift_invariance_residual, toeplitz,
                        widom_residual)
from .orlicz_space import (FiniteSequence, calderon_factorize, interpolation_bound_check, luxemburg_norm,
                           modular, multiplier_inclusion_check)
from .symbols import (BumpFunction, PiecewiseC1, Symbol, TrigPoly, bump_infimum, fejer_mean, local_distance,
                      stechkin_bound, symbol_from_json, total_variation)

__version__ = "0.1.0"
