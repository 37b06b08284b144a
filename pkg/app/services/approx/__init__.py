"""Приближённые решения, невязки и предсказанные показатели."""

from .models import ApproxConfig, ExponentReport
from .exponents import (
    CARRIER_WAVE,
    WAVE_WAVE,
    exponent_report,
    predicted_alpha,
    predicted_beta,
    predicted_r_j,
    regularity_index,
    sharp_r_j,
)
from .solutions import (
    approximate_difference,
    approximate_solution,
    check_frequency,
    data_difference_reference,
    explicit_difference,
    initial_data,
    separation_omegas,
    separation_reference,
    time_derivative,
)
from .residuals import burgers_cancellation, leading_error_expansion, residual, roundoff_floor
from .interpolation import interpolation_bound, random_trig_polynomial
