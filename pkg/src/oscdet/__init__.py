"""oscdet: zeta-regularized actions, spectra, and spectral determinants
for Schrodinger operators with even polynomial potentials on the line."""

__version__ = "0.1.0"

from .actions import (
    ActionValue,
    binomial_action,
    binomial_action_s,
    improper_action,
    regularized_tail,
    trinomial_action_asymptotic,
)
from .errors import (
    AccuracyError,
    DivergenceError,
    DomainError,
    ModelError,
    PoleError,
    TailPreconditionError,
)
from .mellin import (
    AsymptoticTerm,
    MellinPole,
    assemble_asymptotics,
    contributing_poles,
    enumerate_poles,
)
from .potential import (
    AnomalyType,
    BetaTable,
    PotentialSpec,
    beta_coefficients,
    classify,
    order_mu,
    symanzik_inverse,
    symanzik_map,
)
from .predictions import (
    PredictionReport,
    VerifyConfig,
    predict_det_asymptotic,
    predict_det_ratio_g,
    predict_Z1,
    verify,
)
from .special_functions import (
    CATALAN,
    EULER_GAMMA,
    Jet1,
    digamma,
    general_binomial,
    log_gamma,
    odd_harmonic_partial,
)
from .spectral import (
    DeterminantValue,
    ZetaValue,
    det_ratio,
    det_ratio_skew,
    dilate_det,
    dilate_zeta,
    harmonic_det,
    harmonic_zeta_full,
    harmonic_zeta_skew,
    shooting_det,
    zeta_from_det,
    zeta_full,
    zeta_skew,
)
from .spectrum import (
    SpectrumResult,
    eigenvalue_tail_model,
    eigenvalues,
)

__all__ = [name for name in dir() if not name.startswith("_")]
