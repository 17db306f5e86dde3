"""Training configuration"""

import math

from pydantic import BaseModel, Field, model_validator

from retrofit_prae.rprae.params import ModelConfig


class TrainConfig(BaseModel):
    """Algorithm hyperparameters plus the model they train"""

    model: ModelConfig = Field(default_factory=ModelConfig)
    iterations: int = Field(5000, ge=0, description="Total iterations N")
    n_ini: int = Field(1, ge=0, description="AE-only prefix")
    n_ch: int = Field(100, ge=1, description="Length of each alternating block")
    lr: float = Field(0.002, ge=0.0)
    beta1: float = Field(0.9, ge=0.0, lt=1.0)
    beta2: float = Field(0.999, ge=0.0, lt=1.0)
    eps: float = Field(1e-8, gt=0.0)
    batch_size: int = Field(16, ge=2, description="K; the binding loss needs negatives")
    margin: float = Field(1.0, ge=0.0, description="Binding-loss margin")
    seed: int = Field(0, ge=0, lt=2**64)
    checkpoint_every: int = Field(0, ge=0, description="Iterations between checkpoints, 0 for final only")
    log_every: int = Field(100, ge=1)

    @model_validator(mode="after")
    def _check_schedule(self) -> "TrainConfig":
        if self.n_ini > self.iterations:
            raise ValueError(f"n_ini ({self.n_ini}) must not exceed iterations ({self.iterations})")
        return self

    @classmethod
    def for_scale(cls, scale: str) -> "TrainConfig":
        if scale == "full":
            return cls(model=ModelConfig.for_scale("full"), iterations=17300, lr=0.001, batch_size=120)
        return cls()

    @classmethod
    def from_epochs(cls, n_sequences: int, batch_size: int, epochs: int, **kwargs) -> "TrainConfig":
        """N = ceil(n_sequences / batch_size) iterations per epoch, times ``epochs``"""
        per_epoch = math.ceil(n_sequences / batch_size)
        return cls(iterations=per_epoch * epochs, batch_size=batch_size, **kwargs)


def ablate_prae(cfg: TrainConfig) -> TrainConfig:
    """Same run without the retrofit layer; the update schedule is untouched"""
    return cfg.model_copy(update={"model": cfg.model.model_copy(update={"use_retrofit": False})})
