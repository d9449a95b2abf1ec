"""heckelab: exact eta-quotient newform coefficients, prime-power eigenvalues,
symmetric-power coefficient streams, and sign/equidistribution experiments."""

from .asymptotics import (
    AsymptoticsReport,
    abscissa_probe,
    delta_m,
    partial_summation_check,
    partial_sums,
)
from .forms import (
    REGISTRY,
    CoefficientSeries,
    FormDescriptor,
    RecipeError,
    expand,
)
from .hecke import (
    PrimePowerValue,
    ThetaTable,
    lambda_prime_power_chebyshev,
    lambda_prime_power_exact,
    theta_table,
)
from .ntt import NttCapacityError
from .series import (
    IntSeries,
    SparseSeries,
    eta_power_series,
    mul,
    mul_schoolbook,
    mul_sparse,
)
from .stats import (
    DistributionTestReport,
    SignDensityReport,
    empirical_sign_density,
    ks_test,
    measure_of_positivity_set,
    predicted_density,
    sato_tate_cdf,
)
from .sympower import (
    SymCoefficientStream,
    assemble_multiplicative,
    divisor_bound,
    sym_local_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticsReport",
    "CoefficientSeries",
    "DistributionTestReport",
    "FormDescriptor",
    "IntSeries",
    "NttCapacityError",
    "PrimePowerValue",
    "REGISTRY",
    "RecipeError",
    "SignDensityReport",
    "SparseSeries",
    "SymCoefficientStream",
    "ThetaTable",
    "abscissa_probe",
    "assemble_multiplicative",
    "delta_m",
    "divisor_bound",
    "empirical_sign_density",
    "eta_power_series",
    "expand",
    "ks_test",
    "lambda_prime_power_chebyshev",
    "lambda_prime_power_exact",
    "measure_of_positivity_set",
    "mul",
    "mul_schoolbook",
    "mul_sparse",
    "partial_summation_check",
    "partial_sums",
    "predicted_density",
    "sato_tate_cdf",
    "sym_local_coefficients",
    "theta_table",
    "__version__",
]
