"""rpkit: reflection positivity at desk scale.

Kernel definiteness verdicts, the quotient construction for reflected Gram
matrices, Bernstein / Levy-Khintchine analysis of reflection-negative
functions, seeded Gaussian-process simulation with stationarity
diagnostics, and exact step-function cocycle identities on the line.
"""

__version__ = "0.1.0"

from .cocycles import (BROWNIAN, ONE_SIDED_INDICATOR, CocycleSpec,
                       check_cocycle_identity, check_duality,
                       check_hat_triviality, cocycle, normalized_indicator,
                       psi_of)
from .definiteness import (DEFAULT_TOL, NdVerdict, PsdVerdict, ToleranceConfig,
                           check_negative_definite, check_positive_semidefinite,
                           factorize_rkhs)
from .errors import (DefinitenessError, DomainError, EigensolveError,
                     IngestionError, QuotientDescentError, RPKitError,
                     ReflectionPositivityError, SamplingError)
from .grids import Grid
from .jsonio import canonical_json
from .kernels import (BrownianOneSided, BrownianTwoSided, Exponential,
                      FractionalBrownian, GaussianFock, GramMatrix, Kernel,
                      Normalized, NormalizedOneSided, ReflectionSetup,
                      Tabulated, eval_kernel, gram, identity, invert, negate,
                      reflected_gram)
from .montecarlo import (FockKernelReport, MCReport, mc_characteristic,
                         mc_fock_kernel, mc_pair_covariance)
from .negdef import (AbsoluteValue, BernsteinReport, LKFitResult, LKPsi,
                     LKTriple, Power, PsiSpec, TabulatedPsi, check_bernstein,
                     check_reflection_negative, eval_psi, lk_eval, lk_fit,
                     read_psi_samples, schoenberg_bridge)
from .processes import (BROWNIAN_ONE_SIDED, BROWNIAN_TWO_SIDED,
                        NORMALIZED_ONE_SIDED, ProcessSpec,
                        check_dilation_stationarity,
                        check_stationary_increments, covariance, custom,
                        fractional_brownian, increment_form,
                        normalize_covariance)
from .quotient import (ContractionReport, OSQuotient, hat_contraction,
                       os_quotient)
from .sampling import (PathEnsemble, EmpiricalCovariance, empirical_covariance,
                       sample_paths)
from .stepfun import StepFunction, dilate, inner, reflect, shift
