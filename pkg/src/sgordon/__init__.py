"""Transfer matrices, Floquet data and Gordon-type approximation checks for
one-dimensional Schrodinger operators with distributional potentials
q = sigma' + tau."""

from .bounds import (BoundCertificate, c_q, gronwall_bound, gronwall_constants,
                     growth_bound_generic, growth_bound_lambda, offdiag_norm,
                     unif_growth_bound)
from .errors import (DeskScaleError, NonIntegrableError, PrecisionError, PropagationError,
                     QuadratureError, SingularPointError)
from .floquet import (BandPoint, band_scan, cayley_hamilton_residual, discriminant,
                      monodromy, three_periods_check)
from .gordon import (Convergent, GordonReport, approximation_error, continued_fraction,
                     gordon_certificate, gordon_exponent, liouville_truncation,
                     periodic_approximant)
from .potential import (NormKind, QuasiperiodicPotential, SigmaTau, decompose_tau_periodic,
                        delta_comb, norm_on_interval, shift, unif_norm)
from .propagator import StateVector, TransferMatrix, propagate, transfer_matrix
from .sobolev import (GridFunction, InequalityReport, check_dilation_bound, check_shift_bound,
                      check_two_scale_bound, ws_norm)
from .spectrum import ScanReport, approximant_proximity, decay_profile, eigen_scan

__version__ = "0.1.0"
