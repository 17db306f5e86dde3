"""rPRAE model: retrofit layer, paired recurrent autoencoders and their losses"""

from retrofit_prae.rprae.losses import LossBreakdown, LossDomainError, loss_act, loss_dsc, loss_shr, total_loss
from retrofit_prae.rprae.model import PairedBatch, RetrofitPRAE, forward_losses, pad_frames
from retrofit_prae.rprae.params import (
    AE_PREFIX,
    RET_PREFIX,
    ModelConfig,
    ModelParams,
    ParamGroup,
    VocabularyError,
    init_model_params,
)
from retrofit_prae.rprae.rae import StopRule
from retrofit_prae.rprae.retrofit import retrofit_forward, word_matrix

__all__ = [
    "LossBreakdown",
    "LossDomainError",
    "loss_act",
    "loss_dsc",
    "loss_shr",
    "total_loss",
    "PairedBatch",
    "RetrofitPRAE",
    "forward_losses",
    "pad_frames",
    "AE_PREFIX",
    "RET_PREFIX",
    "ModelConfig",
    "ModelParams",
    "ParamGroup",
    "VocabularyError",
    "init_model_params",
    "StopRule",
    "retrofit_forward",
    "word_matrix",
]
