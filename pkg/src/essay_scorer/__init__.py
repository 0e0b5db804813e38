"""Cross-prompt automated essay scoring.

A POS-embedding attention CNN-LSTM regressor concatenated with 86
prompt-agnostic linguistic features, trained and evaluated with
prompt-wise cross-validation and quadratic weighted kappa.
"""

from .estimator import EssayScorer
from .metrics import (
    ASAP_PROMPTS,
    PromptMeta,
    quadratic_weighted_kappa,
    rescale_from_unit,
    scale_to_unit,
)

__version__ = "0.1.0"

__all__ = [
    "EssayScorer",
    "PromptMeta",
    "ASAP_PROMPTS",
    "quadratic_weighted_kappa",
    "scale_to_unit",
    "rescale_from_unit",
    "__version__",
]
