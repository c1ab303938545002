# Python imports
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping, Optional, Tuple

# Third party imports
from jsonschema import Draft202012Validator

# Local imports
from .exceptions import VocabularyError, EmptyVocabulary, MissingDefinition

# Constants
DATA_DIR = Path(__file__).resolve().parent / 'data' / 'vocabularies'

VOCABULARY_SCHEMA = {
    'type': 'object',
    'required': ['task', 'classes'],
    'properties': {
        'name': {'type': 'string'},
        'task': {'enum': ['multi-label', 'multi-class']},
        'classes': {
            'type': 'array',
            'items': {
                'type': 'object',
                'required': ['name'],
                'properties': {
                    'name': {'type': 'string'},
                    'definition': {'type': ['string', 'null']},
                },
            },
        },
        'aliases': {'$ref': '#/$defs/aliases'},
    },
    '$defs': {
        'aliases': {'type': 'object', 'additionalProperties': {'type': 'string'}},
    },
}

ALIAS_SCHEMA = {'type': 'object', 'additionalProperties': {'type': 'string'}}

_WHITESPACE = re.compile(r'\s+')


def normalize_name(text) -> str:
    """Case- and whitespace-insensitive matching form."""
    return _WHITESPACE.sub(' ', str(text)).strip().casefold()


class TaskKind(str, Enum):
    MULTI_LABEL = 'multi-label'
    MULTI_CLASS = 'multi-class'


@dataclass(frozen=True)
class VocabularyClass:
    name: str
    definition: Optional[str] = None


@dataclass(frozen=True)
class ClassVocabulary:
    task_kind: TaskKind
    classes: Tuple[VocabularyClass, ...]
    aliases: Mapping[str, str] = field(default_factory=dict)
    name: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'task_kind', TaskKind(self.task_kind))
        object.__setattr__(self, 'classes', tuple(self.classes))

        seen = set()
        for item in self.classes:
            if not item.name or not item.name.strip():
                raise VocabularyError('Class names must be non-empty')
            key = normalize_name(item.name)
            if key in seen:
                raise VocabularyError(f"Duplicate class name: {item.name!r}", class_name=item.name)
            seen.add(key)

        names = {normalize_name(item.name): item.name for item in self.classes}
        aliases = {}
        for surface, target in dict(self.aliases).items():
            canonical = names.get(normalize_name(target))
            if canonical is None:
                raise VocabularyError(f"Alias {surface!r} points at unknown class {target!r}", alias=surface)
            aliases[surface] = canonical
        object.__setattr__(self, 'aliases', aliases)

    @property
    def names(self):
        return [item.name for item in self.classes]

    @property
    def is_multi_label(self):
        return self.task_kind == TaskKind.MULTI_LABEL

    def require_non_empty(self):
        if not self.classes:
            raise EmptyVocabulary('The class vocabulary is empty')

    def require_definitions(self):
        for item in self.classes:
            if not (item.definition or '').strip():
                raise MissingDefinition(item.name)

    @property
    def has_definitions(self):
        return bool(self.classes) and all((item.definition or '').strip() for item in self.classes)

    def surface_forms(self):
        """normalized surface form -> canonical class name, aliases included."""
        forms = {normalize_name(alias): canonical for alias, canonical in self.aliases.items()}
        forms.update({normalize_name(name): name for name in self.names})
        return forms

    def resolve(self, token) -> Optional[str]:
        return self.surface_forms().get(normalize_name(token))

    def with_aliases(self, aliases):
        merged = {**self.aliases, **aliases}
        return ClassVocabulary(task_kind=self.task_kind, classes=self.classes, aliases=merged, name=self.name)


def _read(path, schema):
    path = Path(path)
    if not path.exists():
        raise VocabularyError(f"File not found: {path}", path=str(path))
    try:
        payload = json.loads(path.read_text(encoding='utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise VocabularyError(f"Invalid JSON in {path}: {e}", path=str(path)) from e
    error = next(iter(Draft202012Validator(schema).iter_errors(payload)), None)
    if error is not None:
        raise VocabularyError(f"{path}: {error.message}", path=str(path))
    return payload


def resolve_vocabulary_path(name_or_path) -> Path:
    """Shipped vocabularies may be referenced by bare name, e.g. ``eurosat``."""
    candidate = Path(name_or_path)
    if candidate.suffix != '.json' and (DATA_DIR / f'{candidate}.json').exists():
        return DATA_DIR / f'{candidate}.json'
    return candidate


def load_vocabulary(name_or_path) -> ClassVocabulary:
    path = resolve_vocabulary_path(name_or_path)
    payload = _read(path, VOCABULARY_SCHEMA)
    return ClassVocabulary(
        task_kind=payload['task'],
        classes=tuple(VocabularyClass(item['name'], item.get('definition')) for item in payload['classes']),
        aliases=payload.get('aliases', {}),
        name=payload.get('name', path.stem),
    )


def load_aliases(path):
    return _read(path, ALIAS_SCHEMA)
