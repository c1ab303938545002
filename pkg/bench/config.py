# Python imports
import copy
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple

# Third party imports
import yaml
from jsonschema import Draft202012Validator

# Local imports
from backend.exceptions import BackendError
from backend.factory import BackendSpec
from promptkit.builders import PromptStrategy
from raster.grid import NormalizationConfig
from spectral.modalities import ALL_MODALITIES, ModalityKind, canonical_order
from utils.conf import bench_setting
from utils.hashing import digest_payload
from .exceptions import ConfigError

# Keys that never change results.
NON_IDENTITY_KEYS = ('name', 'workers', 'output_dir')

RUN_CONFIG_SCHEMA = {
    'type': 'object',
    'required': ['dataset'],
    'additionalProperties': False,
    'properties': {
        'name': {'type': 'string'},
        'dataset': {
            'type': 'object',
            'required': ['adapter', 'index'],
            'additionalProperties': False,
            'properties': {
                'adapter': {'type': 'string'},
                'index': {'type': 'string'},
                'vocabulary': {'type': ['string', 'null']},
                'aliases': {'type': ['string', 'null']},
                'label_mapping': {'type': ['string', 'null']},
            },
        },
        'strategy': {
            'oneOf': [
                {'enum': ['baseline', 'expansion', 'cot']},
                {
                    'type': 'object',
                    'additionalProperties': False,
                    'properties': {
                        'variant': {'enum': ['baseline', 'expansion', 'cot']},
                        'include_band_catalog': {'type': 'boolean'},
                        'include_image_descriptors': {'type': 'boolean'},
                        'include_guides': {'type': 'boolean'},
                    },
                },
            ],
        },
        'modalities': {
            'oneOf': [
                {'const': 'all'},
                {'type': 'array', 'minItems': 1, 'items': {'type': 'string'}},
            ],
        },
        'backend': {'type': ['object', 'string']},
        'sample_limit': {'type': ['integer', 'null'], 'minimum': 1},
        'seed': {'type': 'integer'},
        'workers': {'type': 'integer', 'minimum': 1},
        'target_resolution': {'enum': [10, 20, 60]},
        'normalization': {'type': 'object'},
        'averaging': {'enum': ['samples', 'micro']},
        'output_dir': {'type': ['string', 'null']},
    },
}


def read_yaml(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}", path=str(path))
    try:
        payload = yaml.safe_load(path.read_text(encoding='utf-8'))
    except (OSError, UnicodeDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"Cannot read {path}: {e}", path=str(path)) from e
    if not isinstance(payload, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level", path=str(path))
    return payload


def apply_overrides(payload, overrides):
    """
    Return a copy of ``payload`` with dotted keys replaced, e.g.
    ``{'backend.kind': 'replay', 'sample_limit': 10}``. ``None`` values are ignored.
    """
    payload = copy.deepcopy(payload)
    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        target = payload
        *parents, leaf = dotted.split('.')
        for key in parents:
            if isinstance(target.get(key), str) and key == 'backend':
                target[key] = {'kind': target[key]}
            target = target.setdefault(key, {})
        target[leaf] = value
    return payload


@dataclass(frozen=True)
class DatasetSpec:
    adapter: str
    index: str
    vocabulary: Optional[str] = None
    aliases: Optional[str] = None
    label_mapping: Optional[str] = None

    def to_dict(self):
        return {
            'adapter': self.adapter,
            'index': self.index,
            'vocabulary': self.vocabulary,
            'aliases': self.aliases,
            'label_mapping': self.label_mapping,
        }


@dataclass(frozen=True)
class RunConfig:
    dataset: DatasetSpec
    strategy: PromptStrategy = field(default_factory=PromptStrategy)
    modalities: Tuple[ModalityKind, ...] = ALL_MODALITIES
    backend: BackendSpec = field(default_factory=BackendSpec)
    sample_limit: Optional[int] = None
    seed: int = 0
    workers: int = None
    target_resolution: int = None
    normalization: NormalizationConfig = field(default_factory=NormalizationConfig)
    averaging: str = None
    name: str = ''
    output_dir: Optional[str] = None

    def __post_init__(self):
        if not self.modalities:
            raise ConfigError('At least one modality is required')
        object.__setattr__(self, 'modalities', canonical_order(self.modalities))
        if self.workers is None:
            object.__setattr__(self, 'workers', int(bench_setting('WORKERS', 4)))
        if self.target_resolution is None:
            object.__setattr__(self, 'target_resolution', int(bench_setting('TARGET_RESOLUTION', 10)))
        if self.averaging is None:
            object.__setattr__(self, 'averaging', bench_setting('AVERAGING', 'samples'))
        if not self.name:
            object.__setattr__(self, 'name', f'{self.dataset.adapter}-{self.strategy.variant.value}-{len(self.modalities)}m')

    @classmethod
    def from_dict(cls, payload, base_dir=None):
        """
        Build from a plain mapping. Relative dataset paths resolve against
        ``base_dir`` (the config file's directory) when given.
        """
        payload = dict(payload or {})
        error = next(iter(Draft202012Validator(RUN_CONFIG_SCHEMA).iter_errors(payload)), None)
        if error is not None:
            location = '.'.join(str(part) for part in error.absolute_path) or 'config'
            raise ConfigError(f"{location}: {error.message}")

        dataset = dict(payload['dataset'])
        if base_dir is not None:
            for key in ('index', 'aliases', 'label_mapping'):
                if dataset.get(key) and not Path(dataset[key]).is_absolute():
                    dataset[key] = str(Path(base_dir) / dataset[key])
            vocabulary = dataset.get('vocabulary')
            if vocabulary and vocabulary.endswith('.json') and not Path(vocabulary).is_absolute():
                dataset['vocabulary'] = str(Path(base_dir) / vocabulary)

        modalities = payload.get('modalities', 'all')
        try:
            kinds = ALL_MODALITIES if modalities == 'all' else tuple(ModalityKind.parse(kind) for kind in modalities)
            backend = BackendSpec.from_dict(payload.get('backend'))
            normalization = NormalizationConfig.from_dict(
                {**bench_setting('NORMALIZATION', {}), **(payload.get('normalization') or {})}
            )
        except (ValueError, BackendError) as e:
            raise ConfigError(str(e)) from e

        return cls(
            dataset=DatasetSpec(**dataset),
            strategy=PromptStrategy.from_dict(payload.get('strategy', 'baseline')),
            modalities=kinds,
            backend=backend,
            sample_limit=payload.get('sample_limit', bench_setting('SAMPLE_LIMIT', 1000)),
            seed=payload.get('seed', bench_setting('SEED', 0)),
            workers=payload.get('workers'),
            target_resolution=payload.get('target_resolution'),
            normalization=normalization,
            averaging=payload.get('averaging'),
            name=payload.get('name', ''),
            output_dir=payload.get('output_dir'),
        )

    @classmethod
    def from_file(cls, path, overrides=None):
        path = Path(path)
        payload = apply_overrides(read_yaml(path), overrides)
        return cls.from_dict(payload, base_dir=path.parent)

    def to_dict(self):
        return {
            'name': self.name,
            'dataset': self.dataset.to_dict(),
            'strategy': self.strategy.to_dict(),
            'modalities': [kind.value for kind in self.modalities],
            'backend': self.backend.to_dict(),
            'sample_limit': self.sample_limit,
            'seed': self.seed,
            'workers': self.workers,
            'target_resolution': self.target_resolution,
            'normalization': self.normalization.to_dict(),
            'averaging': self.averaging,
            'output_dir': self.output_dir,
        }

    def identity_dict(self):
        payload = {key: value for key, value in self.to_dict().items() if key not in NON_IDENTITY_KEYS}
        payload['backend'] = self.backend.identity_dict()
        return payload

    @property
    def digest(self) -> str:
        return digest_payload(self.identity_dict())

    def derive(self, **changes):
        """A copy with some fields replaced; the name is regenerated unless given."""
        changes.setdefault('name', '')
        return replace(self, **changes)
