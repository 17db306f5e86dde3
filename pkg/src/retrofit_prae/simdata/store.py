"""
Dataset file - JSON Lines, one object per paired sample

Field order is fixed: id, spec, joints, visual, tokens, word_set,
repetition, cell. Floats use the shortest repr that round-trips.
"""

from pathlib import Path
from typing import Dict, Iterable, List, Union

import orjson

from retrofit_prae.simdata.actions import ActionSpec
from retrofit_prae.simdata.dataset import Cell, DatasetError, PairedSample
from retrofit_prae.simdata.describe import Description
from retrofit_prae.simdata.trajectory import ActionSequence


def sample_to_record(sample: PairedSample) -> dict:
    return {
        "id": sample.id,
        "spec": sample.spec.to_dict(),
        "joints": sample.sequence.joints.tolist(),
        "visual": sample.sequence.visual.tolist(),
        "tokens": list(sample.description.tokens),
        "word_set": list(sample.word_sets),
        "repetition": sample.repetition,
        "cell": sample.cell.value,
    }


def record_to_sample(record: dict) -> PairedSample:
    word_sets = tuple(int(k) for k in record["word_set"])
    if len(word_sets) != 3:
        raise ValueError("word_set must hold one index per slot")
    return PairedSample(
        id=record["id"],
        spec=ActionSpec.from_dict(record["spec"]),
        sequence=ActionSequence(joints=record["joints"], visual=record["visual"]),
        description=Description(tuple(record["tokens"])),
        word_sets=word_sets,  # type: ignore[arg-type]
        repetition=int(record["repetition"]),
        cell=Cell(record["cell"]),
    )


def write_samples_jsonl(samples: Iterable[PairedSample], path: Union[str, Path]) -> int:
    """Write samples to ``path``; returns the number of lines written"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "wb") as f:
        for sample in samples:
            f.write(orjson.dumps(sample_to_record(sample)))
            f.write(b"\n")
            count += 1
    return count


def read_samples_jsonl(path: Union[str, Path]) -> List[PairedSample]:
    """
    Load every sample from a dataset file

    Raises:
        DatasetError: Missing file or a malformed line (named by number)
    """
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")
    samples: List[PairedSample] = []
    with open(path, "rb") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                samples.append(record_to_sample(orjson.loads(line)))
            except (orjson.JSONDecodeError, KeyError, TypeError, ValueError) as e:
                raise DatasetError(f"{path}:{line_no}: malformed sample ({e})") from e
    return samples


def group_by_cell(samples: Iterable[PairedSample]) -> Dict[Cell, List[PairedSample]]:
    grouped: Dict[Cell, List[PairedSample]] = {cell: [] for cell in Cell}
    for sample in samples:
        grouped[sample.cell].append(sample)
    return grouped
