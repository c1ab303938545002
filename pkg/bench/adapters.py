# Python imports
import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple
from logging import getLogger

# Third party imports
import numpy as np
from jsonschema import Draft202012Validator

# Local imports
from promptkit.exceptions import VocabularyError
from promptkit.vocabulary import ClassVocabulary, load_aliases, load_vocabulary, normalize_name
from .exceptions import DatasetError

# Constants
logger = getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent / 'data'
DEFAULT_LABEL_MAPPING = DATA_DIR / 'bigearthnet_43_to_19.json'

INDEX_COLUMNS = ('sample_id', 'manifest', 'labels')
LABEL_SEPARATOR = ';'

MAPPING_SCHEMA = {
    'type': 'object',
    'minProperties': 1,
    'additionalProperties': {'type': ['string', 'null']},
}


@dataclass(frozen=True)
class Sample:
    sample_id: str
    manifest_path: Path
    labels: Tuple[str, ...]


def read_index(path):
    """
    Rows of a ``sample_id,manifest,labels`` CSV. Manifest paths are
    relative to the index file; labels are ``;``-separated.
    """
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"Dataset index not found: {path}", path=str(path))
    try:
        with path.open(newline='', encoding='utf-8') as f:
            reader = csv.DictReader(f)
            missing = [column for column in INDEX_COLUMNS if column not in (reader.fieldnames or ())]
            if missing:
                raise DatasetError(f"{path}: missing columns {missing}", path=str(path))
            rows = list(reader)
    except (OSError, UnicodeDecodeError, csv.Error) as e:
        raise DatasetError(f"Cannot read dataset index {path}: {e}", path=str(path)) from e

    seen = set()
    for line, row in enumerate(rows, start=2):
        sample_id = (row['sample_id'] or '').strip()
        if not sample_id:
            raise DatasetError(f"{path}:{line}: empty sample_id", path=str(path))
        if sample_id in seen:
            raise DatasetError(f"{path}:{line}: duplicate sample_id {sample_id!r}", path=str(path))
        seen.add(sample_id)
        tokens = [token.strip() for token in (row['labels'] or '').split(LABEL_SEPARATOR) if token.strip()]
        manifest = Path((row['manifest'] or '').strip())
        if not manifest.is_absolute():
            manifest = path.parent / manifest
        yield sample_id, manifest, tokens


def load_label_mapping(path, vocabulary: ClassVocabulary):
    """
    Source label -> vocabulary class (or None for labels the vocabulary
    drops). Every vocabulary class must be reachable.
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding='utf-8'))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DatasetError(f"Cannot read label mapping {path}: {e}", path=str(path)) from e
    error = next(iter(Draft202012Validator(MAPPING_SCHEMA).iter_errors(payload)), None)
    if error is not None:
        raise DatasetError(f"{path}: {error.message}", path=str(path))

    mapping = {}
    for source, target in payload.items():
        if target is None:
            mapping[normalize_name(source)] = None
            continue
        canonical = vocabulary.resolve(target)
        if canonical is None:
            raise DatasetError(f"{path}: {source!r} maps to unknown class {target!r}", path=str(path))
        mapping[normalize_name(source)] = canonical

    unreachable = set(vocabulary.names) - {target for target in mapping.values() if target}
    if unreachable:
        raise DatasetError(f"{path}: classes not reachable from the mapping: {sorted(unreachable)}", path=str(path))
    return mapping


class DatasetAdapter:
    """An indexed dataset exposing samples with labels in its class vocabulary."""

    name = ''
    default_vocabulary = None

    def __init__(self, index_path, vocabulary=None, aliases=None):
        self.index_path = Path(index_path)
        try:
            vocabulary = load_vocabulary(vocabulary or self.default_vocabulary)
            if aliases:
                vocabulary = vocabulary.with_aliases(load_aliases(aliases))
        except VocabularyError as e:
            raise DatasetError(str(e), **e.context) from e
        vocabulary.require_non_empty()
        self.vocabulary = vocabulary

    @property
    def task_kind(self):
        return self.vocabulary.task_kind

    def map_labels(self, sample_id, tokens):
        labels = []
        for token in tokens:
            canonical = self.vocabulary.resolve(token)
            if canonical is None:
                raise DatasetError(f"{sample_id}: label {token!r} is not in {self.vocabulary.name}", sample=sample_id)
            labels.append(canonical)
        return tuple(dict.fromkeys(labels))

    def samples(self):
        result = []
        for sample_id, manifest, tokens in read_index(self.index_path):
            labels = self.map_labels(sample_id, tokens)
            if not labels:
                logger.warning(f"Skipping {sample_id}: no labels in {self.vocabulary.name}")
                continue
            result.append(Sample(sample_id=sample_id, manifest_path=manifest, labels=labels))
        return sorted(result, key=lambda sample: sample.sample_id)


class BigEarthNetAdapter(DatasetAdapter):
    """
    Multi-label, 19 classes. Index labels may use either the 43 source
    classes (translated through the mapping table) or the 19 classes.
    """

    name = 'bigearthnet'
    default_vocabulary = 'bigearthnet19'

    def __init__(self, index_path, vocabulary=None, aliases=None, label_mapping=None):
        super().__init__(index_path, vocabulary=vocabulary, aliases=aliases)
        self.label_mapping = load_label_mapping(label_mapping or DEFAULT_LABEL_MAPPING, self.vocabulary)

    def map_labels(self, sample_id, tokens):
        labels = []
        for token in tokens:
            key = normalize_name(token)
            if key in self.label_mapping:
                target = self.label_mapping[key]
                if target is not None:
                    labels.append(target)
                continue
            canonical = self.vocabulary.resolve(token)
            if canonical is None:
                raise DatasetError(f"{sample_id}: unknown BigEarthNet label {token!r}", sample=sample_id)
            labels.append(canonical)
        return tuple(dict.fromkeys(labels))


class EuroSatAdapter(DatasetAdapter):
    """Multi-class, 10 classes; folder tokens such as ``SeaLake`` resolve through aliases."""

    name = 'eurosat'
    default_vocabulary = 'eurosat'

    def __init__(self, index_path, vocabulary=None, aliases=None, label_mapping=None):
        super().__init__(index_path, vocabulary=vocabulary, aliases=aliases)

    def map_labels(self, sample_id, tokens):
        labels = super().map_labels(sample_id, tokens)
        if len(labels) != 1:
            raise DatasetError(f"{sample_id}: expected exactly one label, got {list(tokens)}", sample=sample_id)
        return labels


ADAPTERS = {
    BigEarthNetAdapter.name: BigEarthNetAdapter,
    EuroSatAdapter.name: EuroSatAdapter,
}


def get_adapter(name, index_path, vocabulary=None, aliases=None, label_mapping=None) -> DatasetAdapter:
    try:
        adapter_class = ADAPTERS[name]
    except KeyError:
        raise DatasetError(f"Unknown dataset adapter {name!r}; expected one of {sorted(ADAPTERS)}") from None
    return adapter_class(index_path, vocabulary=vocabulary, aliases=aliases, label_mapping=label_mapping)


def select_subset(samples, limit=None, seed=0):
    """
    ``limit`` samples drawn without replacement under ``seed``, returned in
    sample-id order. The draw depends only on the sorted id list.
    """
    samples = sorted(samples, key=lambda sample: sample.sample_id)
    if limit is None or limit >= len(samples):
        return samples
    if limit <= 0:
        raise DatasetError(f"sample_limit must be positive, got {limit}")
    chosen = np.random.default_rng(seed).choice(len(samples), size=limit, replace=False)
    return [samples[index] for index in sorted(chosen.tolist())]
