"""Shallow complex-valued networks with single-pole rational activations.

The network is assembled without training from Laurent coefficients sampled
on a circle, and its hidden-layer weights and biases locate the poles of
the approximated function.
"""

from .activation import Activation, SeedFunction, build_activation, eval_activation, make_seed
from .errors import (
    DegeneracyWarning,
    NumericalError,
    PadeNetError,
    RepresentationWarning,
    SchemaError,
    ValidationError,
)
from .laurent import (
    ContourSamples,
    LaurentWindow,
    compute_coefficients,
    estimate_error,
    sample_function,
    split_windows,
)
from .network import (
    FactorSet,
    NetworkComponent,
    PoleEstimate,
    cluster_poles,
    eval_component,
    eval_network,
    factor_denominator,
    hidden_params,
    output_params,
    recover_poles,
)
from .pade import DegreeEstimate, build_toeplitz, estimate_degrees
from .pipeline import FitConfig, Model, eval_grid, fit, load_model, save_model

__version__ = "0.1.0"
