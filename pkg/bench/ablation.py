# Python imports
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Tuple
from logging import getLogger

# Third party imports
from jsonschema import Draft202012Validator

# Local imports
from backend.factory import build_backend
from promptkit.builders import PromptStrategy, PromptVariant
from spectral.modalities import ALL_MODALITIES, ModalityKind, canonical_order
from utils.exceptions import SpectralBenchError
from .config import RunConfig, apply_overrides, read_yaml
from .exceptions import ConfigError
from .runner import load_samples, run_eval, save_run

# Constants
logger = getLogger(__name__)

RGB = (ModalityKind.TRUE_COLOR,)
RGB_NDVI = (ModalityKind.TRUE_COLOR, ModalityKind.NDVI)
RGB_NDVI_NDWI = (ModalityKind.TRUE_COLOR, ModalityKind.NDVI, ModalityKind.NDWI)

MODALITY_SET_LABELS = {
    RGB: 'RGB Only',
    RGB_NDVI: 'RGB + NDVI',
    RGB_NDVI_NDWI: 'RGB + NDVI + NDWI',
    ALL_MODALITIES: 'All Multi-Spectral',
}

MATRIX_SCHEMA = {
    'type': 'object',
    'required': ['base'],
    'additionalProperties': False,
    'properties': {
        'name': {'type': 'string'},
        'base': {'type': ['object', 'string']},
        'rows': {
            'oneOf': [
                {'const': 'default'},
                {
                    'type': 'array',
                    'minItems': 1,
                    'items': {
                        'type': 'object',
                        'required': ['strategy'],
                        'additionalProperties': False,
                        'properties': {
                            'name': {'type': 'string'},
                            'strategy': {'type': ['object', 'string']},
                            'modalities': {'type': ['array', 'string']},
                        },
                    },
                },
            ],
        },
        'row_workers': {'type': 'integer', 'minimum': 1},
    },
}


def modality_set_label(kinds):
    kinds = canonical_order(kinds)
    if kinds in MODALITY_SET_LABELS:
        return MODALITY_SET_LABELS[kinds]
    return ' + '.join(kind.spec.label for kind in kinds)


@dataclass(frozen=True)
class AblationRow:
    config: RunConfig

    @property
    def strategy_label(self):
        return self.config.strategy.label

    @property
    def modality_label(self):
        return modality_set_label(self.config.modalities)

    @property
    def key(self):
        return self.strategy_label, self.modality_label


@dataclass(frozen=True)
class AblationMatrix:
    rows: Tuple[AblationRow, ...]
    name: str = 'ablation'
    row_workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'rows', tuple(self.rows))
        if not self.rows:
            raise ConfigError('An ablation matrix needs at least one row')
        keys = [row.key for row in self.rows]
        if len(set(keys)) != len(keys):
            raise ConfigError(f"Duplicate ablation rows: {keys}")

    @property
    def base(self) -> RunConfig:
        return self.rows[0].config

    @classmethod
    def default(cls, base: RunConfig, name='ablation'):
        """The eleven strategy x modality-subset rows of the standard ablation."""
        baseline = PromptStrategy(variant=PromptVariant.BASELINE)
        expansion = PromptStrategy(variant=PromptVariant.EXPANSION)
        cot = PromptStrategy(variant=PromptVariant.COT)
        subsets = (RGB, RGB_NDVI, RGB_NDVI_NDWI, ALL_MODALITIES)

        grid = [(baseline, subset) for subset in subsets]
        grid.append((expansion, ALL_MODALITIES))
        grid.extend((cot, subset) for subset in subsets)
        grid.append((PromptStrategy(variant=PromptVariant.COT, include_band_catalog=False), ALL_MODALITIES))
        grid.append((PromptStrategy(variant=PromptVariant.COT, include_image_descriptors=False), ALL_MODALITIES))
        return cls(rows=tuple(cls.make_row(base, strategy, subset, name) for strategy, subset in grid), name=name)

    @staticmethod
    def make_row(base: RunConfig, strategy, modalities, matrix_name, row_name=''):
        strategy = strategy if isinstance(strategy, PromptStrategy) else PromptStrategy.from_dict(strategy)
        modalities = canonical_order(modalities)
        row_name = row_name or f'{matrix_name} / {strategy.label} / {modality_set_label(modalities)}'
        return AblationRow(config=base.derive(strategy=strategy, modalities=modalities, name=row_name))

    @classmethod
    def from_dict(cls, payload, base_dir=None, overrides=None):
        error = next(iter(Draft202012Validator(MATRIX_SCHEMA).iter_errors(payload)), None)
        if error is not None:
            location = '.'.join(str(part) for part in error.absolute_path) or 'matrix'
            raise ConfigError(f"{location}: {error.message}")

        base = payload['base']
        if isinstance(base, str):
            base_path = Path(base) if base_dir is None else Path(base_dir) / base
            base = RunConfig.from_file(base_path, overrides=overrides)
        else:
            base = RunConfig.from_dict(apply_overrides(base, overrides), base_dir=base_dir)

        name = payload.get('name', 'ablation')
        rows = payload.get('rows', 'default')
        if rows == 'default':
            matrix = cls.default(base, name=name)
        else:
            built = []
            for row in rows:
                modalities = row.get('modalities', 'all')
                try:
                    kinds = ALL_MODALITIES if modalities == 'all' else [ModalityKind.parse(kind) for kind in modalities]
                except ValueError as e:
                    raise ConfigError(str(e)) from e
                built.append(cls.make_row(base, row['strategy'], kinds, name, row.get('name', '')))
            matrix = cls(rows=tuple(built), name=name)
        return cls(rows=matrix.rows, name=name, row_workers=payload.get('row_workers', 1))

    @classmethod
    def from_file(cls, path, overrides=None):
        path = Path(path)
        return cls.from_dict(read_yaml(path), base_dir=path.parent, overrides=overrides)


@dataclass(frozen=True)
class AblationResult:
    matrix: AblationMatrix
    reports: Tuple = ()
    # (row name, reason) for rows that did not complete
    failures: Tuple = ()
    table: Tuple = field(default=())


def comparison_table(matrix: AblationMatrix, reports):
    """
    One entry per completed row, in matrix order, keyed by strategy and
    modality set. Values are rounded to three decimals.
    """
    by_name = {report.name: report for report in reports}
    table = []
    for row in matrix.rows:
        report = by_name.get(row.config.name)
        if report is None:
            continue
        entry = {'strategy': row.strategy_label, 'modalities': row.modality_label}
        entry.update({metric: f'{value:.3f}' for metric, value in report.aggregate.items()})
        table.append(entry)
    return tuple(table)


def run_ablation(matrix: AblationMatrix, backend=None, persist=True) -> AblationResult:
    """
    Run every row against one shared backend, so rows that send identical
    requests hit the cache. A failed row is recorded and the rest continue.
    Rows run on ``matrix.row_workers`` threads; runs are saved afterwards
    from the calling thread.
    """
    owns_backend = backend is None
    if owns_backend:
        _, samples = load_samples(matrix.base)
        answers = {sample.sample_id: sample.labels for sample in samples}
        backend = build_backend(matrix.base.backend, answers=answers)

    def run_row(row):
        try:
            return run_eval(row.config, backend=backend, persist=False), None
        except SpectralBenchError as e:
            logger.error(f"Ablation row {row.config.name} failed: {e}")
            return None, (row.config.name, f'{e.reason}: {e}')

    try:
        if matrix.row_workers == 1:
            outcomes = [run_row(row) for row in matrix.rows]
        else:
            with ThreadPoolExecutor(max_workers=matrix.row_workers, thread_name_prefix='ablation') as pool:
                outcomes = list(pool.map(run_row, matrix.rows))
    finally:
        if owns_backend:
            backend.close()

    reports = []
    for row, (report, _) in zip(matrix.rows, outcomes):
        if report is None:
            continue
        if persist:
            run = save_run(row.config, report, ablation=matrix.name)
            report = replace(report, run_id=run.pk)
        reports.append(report)

    failures = tuple(failure for _, failure in outcomes if failure is not None)
    logger.info(f"Ablation {matrix.name}: {len(reports)} rows done, {len(failures)} failed")
    return AblationResult(matrix=matrix, reports=tuple(reports), failures=failures, table=comparison_table(matrix, reports))
