"""
Commands - gen-data, train, eval, analyze and gradcheck

Each command takes a merged RunConfig, writes its artifacts into the run
directory through a RunStore and returns a small result object the entry
point renders.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

from loguru import logger

from retrofit_prae.cli.config import RunConfig
from retrofit_prae.cli.gradcheck import CheckResult, run_gradcheck
from retrofit_prae.embeddings.lexicon import MERGED_SYMBOL, SynonymLexicon
from retrofit_prae.embeddings.synth import synth_pretrained
from retrofit_prae.embeddings.table import EmbeddingTable, load_embedding_file, save_embedding_file
from retrofit_prae.evalkit.analysis import EmbeddingAnalysis, analyze_embeddings
from retrofit_prae.evalkit.evaluate import ConfigCompatibilityError, EvalMode, EvalReport, evaluate
from retrofit_prae.evalkit.report import write_report
from retrofit_prae.evalkit.svg import SvgRenderer, word_colors, write_svg
from retrofit_prae.ndkernel.rng import RngStream
from retrofit_prae.rprae.params import ModelParams, init_model_params
from retrofit_prae.simdata.dataset import Cell, PairedSample, build_dataset
from retrofit_prae.simdata.store import read_samples_jsonl, write_samples_jsonl
from retrofit_prae.storage.file_store import RunStore
from retrofit_prae.trainer.checkpoint import read_checkpoint, save_checkpoint
from retrofit_prae.trainer.config import ablate_prae
from retrofit_prae.trainer.loop import TrainLog, train

CONFIG_FILE = "config.json"
DATASET_FILE = "dataset.jsonl"
MANIFEST_FILE = "manifest.json"
CHECKPOINT_FILE = "checkpoint.json"
TRAIN_LOG_FILE = "train_log.csv"
ANALYSIS_FILE = "analysis.json"
RETROFITTED_FILE = "retrofitted.txt"


@dataclass
class GenDataResult:
    dataset_path: Path
    manifest: dict
    lines: int


@dataclass
class TrainResult:
    checkpoint_path: Path
    log_path: Path
    iterations: int
    final_losses: Dict[str, float] = field(default_factory=dict)


@dataclass
class AnalyzeResult:
    analysis: EmbeddingAnalysis
    written: List[Path]


def make_lexicon(cfg: RunConfig) -> SynonymLexicon:
    return SynonymLexicon(merge_symbols=cfg.embeddings.merge_symbols)


def build_embeddings(cfg: RunConfig, lexicon: SynonymLexicon) -> EmbeddingTable:
    """
    Pre-trained vectors for the lexicon vocabulary

    Synthetic tables come from the run seed. A word2vec file must hold every
    lexicon word; BOS/EOS missing from the file get seeded random unit vectors.
    """
    source = cfg.embeddings
    if source.source == "synthetic":
        return synth_pretrained(lexicon, source.dim, cfg.seed, source.synth)

    loaded = load_embedding_file(source.source)
    entries = list(loaded.restrict(lexicon.words).items())
    rng = RngStream(cfg.seed).child("embeddings", "symbols").generator()
    for symbol in lexicon.symbols:
        if symbol in loaded:
            entries.append((symbol, loaded.vector(symbol)))
        else:
            v = rng.standard_normal(loaded.dim)
            entries.append((symbol, v / max(float((v @ v) ** 0.5), 1e-12)))
            logger.warning(f"'{symbol}' not in {source.source}, using a random unit vector")
    return EmbeddingTable(entries)


def load_samples(cfg: RunConfig, data_path: Optional[Union[str, Path]] = None) -> List[PairedSample]:
    """
    Samples of a dataset file

    An explicit path must exist. Without one the run directory's dataset is
    used, and regenerated in memory from the config when absent.
    """
    if data_path is not None:
        return read_samples_jsonl(data_path)
    default = cfg.out_dir() / DATASET_FILE
    if default.exists():
        return read_samples_jsonl(default)
    logger.warning(f"{default} not found, generating the dataset in memory")
    dataset, _ = build_dataset(cfg.data, cfg.fold, cfg.seed, make_lexicon(cfg), cfg.threads)
    return list(dataset.all_samples())


def cmd_gen_data(cfg: RunConfig) -> GenDataResult:
    """Write dataset.jsonl and manifest.json for the configured fold"""
    store = RunStore(cfg.out_dir())
    store.save_json(CONFIG_FILE, cfg.snapshot())
    dataset, _ = build_dataset(cfg.data, cfg.fold, cfg.seed, make_lexicon(cfg), cfg.threads)

    dataset_path = store.path(DATASET_FILE)
    lines = write_samples_jsonl(dataset.all_samples(), dataset_path)
    manifest = dataset.manifest()
    store.save_json(MANIFEST_FILE, manifest)
    logger.info(f"Dataset written: {dataset_path} ({lines} samples)")
    return GenDataResult(dataset_path, manifest, lines)


def cmd_train(
    cfg: RunConfig,
    prae: bool = False,
    resume: Optional[Union[str, Path]] = None,
    data_path: Optional[Union[str, Path]] = None,
) -> TrainResult:
    """
    Train on the training cell and write checkpoint.json and train_log.csv

    Args:
        cfg: Merged run configuration
        prae: Train the identity-retrofit ablation
        resume: Checkpoint to continue from
        data_path: Dataset file; the run directory's by default
    """
    if prae:
        cfg = cfg.model_copy(update={"train": ablate_prae(cfg.train)})
    store = RunStore(cfg.out_dir())
    samples = [s for s in load_samples(cfg, data_path) if s.cell == Cell.TRAIN_TRAINED]

    start, log = 0, TrainLog()
    if resume is not None:
        checkpoint = read_checkpoint(resume)
        model = checkpoint.model
        if model.config.use_retrofit != cfg.train.model.use_retrofit:
            raise ConfigCompatibilityError(
                f"checkpoint use_retrofit={model.config.use_retrofit} differs from the run configuration"
            )
        start = checkpoint.completed_iterations
        log_path = store.path(TRAIN_LOG_FILE)
        if log_path.exists():
            log = TrainLog([r for r in TrainLog.read_csv(log_path).records if r.iteration < start])
        logger.info(f"Resuming from {resume} at iteration {start}")
    else:
        lexicon = make_lexicon(cfg)
        model = init_model_params(cfg.train.model, build_embeddings(cfg, lexicon), lexicon.vocabulary(), cfg.seed)

    # the snapshot records the architecture actually trained
    cfg = cfg.model_copy(update={"train": cfg.train.model_copy(update={"model": model.config})})
    store.save_json(CONFIG_FILE, cfg.snapshot())

    def on_checkpoint(params: ModelParams, completed: int, current: TrainLog) -> None:
        save_checkpoint(params, store.path(CHECKPOINT_FILE), cfg.train, completed)
        current.write_csv(store.path(TRAIN_LOG_FILE))

    model, log = train(samples, model, cfg.train, start_iteration=start, log=log, on_checkpoint=on_checkpoint)
    checkpoint_path = save_checkpoint(model, store.path(CHECKPOINT_FILE), cfg.train, cfg.train.iterations)
    log_path = log.write_csv(store.path(TRAIN_LOG_FILE))
    final = log.records[-1].to_dict() if log.records else {}
    return TrainResult(checkpoint_path, log_path, cfg.train.iterations, final)


def check_checkpoint_config(params: ModelParams, cfg: RunConfig) -> None:
    """Raise ConfigCompatibilityError when the checkpoint is not the configured architecture"""
    expected = cfg.train.model.model_dump()
    actual = params.config.model_dump()
    differing = sorted(k for k in expected if expected[k] != actual.get(k))
    if differing:
        details = ", ".join(f"{k}: config {expected[k]!r} vs checkpoint {actual.get(k)!r}" for k in differing)
        raise ConfigCompatibilityError(f"checkpoint does not match the run configuration ({details})")


def cmd_eval(
    cfg: RunConfig,
    checkpoint: Optional[Union[str, Path]] = None,
    data_path: Optional[Union[str, Path]] = None,
    modes: Optional[List[EvalMode]] = None,
) -> Dict[EvalMode, EvalReport]:
    """Run the act->dsc and/or dsc->act experiments and write their reports"""
    store = RunStore(cfg.out_dir())
    params = read_checkpoint(checkpoint or store.path(CHECKPOINT_FILE)).model
    check_checkpoint_config(params, cfg)
    samples = load_samples(cfg, data_path)
    lexicon = SynonymLexicon(merge_symbols=MERGED_SYMBOL in params.vocabulary)

    reports: Dict[EvalMode, EvalReport] = {}
    for mode in modes or list(EvalMode):
        report = evaluate(params, samples, cfg.fold, mode, cfg.eval, lexicon)
        write_report(report, store.base_path)
        reports[mode] = report
    return reports


def cmd_analyze(
    cfg: RunConfig,
    checkpoint: Optional[Union[str, Path]] = None,
    embeddings: Optional[Union[str, Path]] = None,
) -> AnalyzeResult:
    """
    Cosine and PCA views of the word space before and after retrofitting

    Writes analysis.json, cosine heatmaps, PCA scatter plots of components
    1-2 and 2-3, and the retrofitted table in word2vec format.
    """
    store = RunStore(cfg.out_dir())
    params = read_checkpoint(checkpoint or store.path(CHECKPOINT_FILE)).model
    lexicon = SynonymLexicon(merge_symbols=MERGED_SYMBOL in params.vocabulary)
    table = load_embedding_file(embeddings) if embeddings is not None else None
    analysis = analyze_embeddings(params, lexicon, table)

    renderer = SvgRenderer()
    words = analysis.vocabulary
    colors = word_colors(words, lexicon)
    written = [store.save_json(ANALYSIS_FILE, analysis.to_dict(lexicon))]
    for stage, cosine, pca in (
        ("input", analysis.input_cosine, analysis.input_pca),
        ("retrofitted", analysis.retrofitted_cosine, analysis.retrofitted_pca),
    ):
        written.append(
            write_svg(renderer.heatmap(cosine, words, f"Cosine similarity ({stage})"), store.path(f"cosine_{stage}.svg"))
        )
        n_components = pca.coordinates.shape[1]
        for first in range(min(n_components - 1, 2)):
            axes = (f"PC{first + 1}", f"PC{first + 2}")
            svg = renderer.scatter(pca.coordinates[:, first : first + 2], words, colors, f"PCA ({stage})", axes)
            written.append(write_svg(svg, store.path(f"pca_{stage}_{first + 1}{first + 2}.svg")))
    written.append(save_embedding_file(analysis.retrofitted_table, store.path(RETROFITTED_FILE)))
    logger.info(f"Analysis written to {store.base_path} ({len(written)} files)")
    return AnalyzeResult(analysis, written)


def cmd_gradcheck(seed: int = 0) -> List[CheckResult]:
    return run_gradcheck(seed)
