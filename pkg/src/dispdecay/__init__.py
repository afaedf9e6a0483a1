"""Numerical verification toolkit for dispersive decay estimates.

Frequency-localized kernels of semigroups exp(i t phi(sqrt(-Laplace))) are
evaluated by phase-aware quadrature and their sup-norm decay is fitted
against predicted exponents; periodic-grid propagators supply the Besov and
mixed space-time norms behind the group-decay and bounded-ratio space-time
checks, and a Picard iteration certifies small-data contraction for the
nonlinear Klein-Gordon and beam equations.
"""

from . import (cli, decay_fit, dispersion, kernel, nonlinear, oscillatory,
               propagator, special, strichartz)
from .decay_fit import DecaySeries, fit_exponent
from .dispersion import (DispersionRelation, builtin, predicted_high_exponents,
                         predicted_low_exponents, predicted_lowfreq_aggregate,
                         verify_hypotheses)
from .kernel import eval_kernel, low_freq_kernel, sup_norm
from .nonlinear import (critical_power_beam, critical_power_kg,
                        NonlinearProblem, picard_iterate, small_data_threshold)
from .propagator import GridField, NormSpec, evolve, kg_group, beam_group
from .special import bessel_j, phi_bump, psi_bump
from .strichartz import hls_admissible, in_exponent_set

__version__ = "0.1.0"
