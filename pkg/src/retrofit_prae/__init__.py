"""
Retrofit PRAE - paired recurrent autoencoders with a retrofit layer

Translates between robot action sequences and three-word descriptions,
grounding pre-trained word embeddings through a learned retrofit layer so
that unseen synonyms still map to the right actions.
"""

__version__ = "0.1.0"

from retrofit_prae.rprae.model import RetrofitPRAE
from retrofit_prae.rprae.params import ModelConfig, ModelParams, init_model_params
from retrofit_prae.simdata.dataset import DataConfig, build_dataset
from retrofit_prae.trainer.checkpoint import load_checkpoint, save_checkpoint
from retrofit_prae.trainer.config import TrainConfig
from retrofit_prae.trainer.loop import train

__all__ = [
    "RetrofitPRAE",
    "ModelConfig",
    "ModelParams",
    "init_model_params",
    "DataConfig",
    "build_dataset",
    "load_checkpoint",
    "save_checkpoint",
    "TrainConfig",
    "train",
    "__version__",
]
