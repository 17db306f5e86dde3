"""Shared fixtures"""

import pytest

from retrofit_prae.embeddings.lexicon import SynonymLexicon
from retrofit_prae.utils.config import reset_settings


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Point the default output directory at a temporary path"""
    monkeypatch.setenv("RPRAE_OUTPUT_DIR", str(tmp_path / "runs"))
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def lexicon():
    """Default eight-group lexicon"""
    return SynonymLexicon()


@pytest.fixture(scope="session")
def desk_dataset():
    """Desk-scale fold 1 dataset, seed 0"""
    from retrofit_prae.simdata.dataset import DataConfig, build_dataset

    dataset, _ = build_dataset(DataConfig(), fold=1, seed=0)
    return dataset


@pytest.fixture(scope="session")
def tiny_config():
    """Model small enough for gradient and overfit tests"""
    from retrofit_prae.rprae.params import ModelConfig

    return ModelConfig(embed_dim=8, retrofit_hidden=6, hidden=6, z_dim=5, t_max=30)


@pytest.fixture
def tiny_model(tiny_config, lexicon):
    from retrofit_prae.embeddings.synth import synth_pretrained
    from retrofit_prae.rprae.params import init_model_params

    table = synth_pretrained(lexicon, tiny_config.embed_dim, seed=0)
    return init_model_params(tiny_config, table, lexicon.vocabulary(), seed=0)
