# Python imports
import re
from dataclasses import dataclass
from enum import Enum
from typing import Tuple
from logging import getLogger

# Local imports
from spectral.modalities import ModalityKind
from spectral.render import PseudoImage
from .catalog import catalog_lines
from .exceptions import NoImages, PromptError
from .templating import render_block
from .vocabulary import ClassVocabulary

# Constants
logger = getLogger(__name__)

IMAGE_REFERENCE = re.compile(r'\bImage (\d+)\b')
ANSWER_PREFIX = 'ANSWER:'

MULTI_LABEL_SENTENCE = 'More than one class is possible as an output. List every class that applies.'
MULTI_CLASS_SENTENCE = 'Exactly one class applies. Choose the single best matching class.'


class PromptVariant(str, Enum):
    BASELINE = 'baseline'
    EXPANSION = 'expansion'
    COT = 'cot'

    @property
    def label(self):
        return {'baseline': 'Baseline', 'expansion': 'Expansion', 'cot': 'CoT'}[self.value]


@dataclass(frozen=True)
class PromptStrategy:
    variant: PromptVariant = PromptVariant.BASELINE
    include_band_catalog: bool = True
    include_image_descriptors: bool = True
    # CoT only: also append the class guides.
    include_guides: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'variant', PromptVariant(self.variant))

    @classmethod
    def from_dict(cls, payload):
        if isinstance(payload, str):
            return cls(variant=payload)
        return cls(
            variant=payload.get('variant', PromptVariant.BASELINE),
            include_band_catalog=payload.get('include_band_catalog', True),
            include_image_descriptors=payload.get('include_image_descriptors', True),
            include_guides=payload.get('include_guides', False),
        )

    def to_dict(self):
        return {
            'variant': self.variant.value,
            'include_band_catalog': self.include_band_catalog,
            'include_image_descriptors': self.include_image_descriptors,
            'include_guides': self.include_guides,
        }

    @property
    def label(self):
        label = self.variant.label
        if self.variant == PromptVariant.COT and self.include_guides:
            label = f'{label} + Expansion'
        if not self.include_band_catalog:
            label = f'{label} w/o band description'
        if not self.include_image_descriptors:
            label = f'{label} w/o pseudo-image description'
        return label


@dataclass(frozen=True, eq=False)
class PromptBundle:
    images: Tuple[PseudoImage, ...]
    instruction_text: str
    strategy: PromptStrategy

    @property
    def kinds(self):
        return tuple(image.kind for image in self.images)

    def image_payloads(self):
        return [image.to_png() for image in self.images]

    def referenced_images(self):
        return sorted({int(number) for number in IMAGE_REFERENCE.findall(self.instruction_text)})


def ordered_images(images):
    images = list(images)
    if not images:
        raise NoImages('At least one pseudo-image is required')
    kinds = [image.kind for image in images]
    if len(set(kinds)) != len(kinds):
        raise PromptError(f"Each modality may appear once, got {[kind.value for kind in kinds]}")
    order = list(ModalityKind)
    return tuple(sorted(images, key=lambda image: order.index(image.kind)))


def image_block(images, strategy):
    if strategy.include_image_descriptors:
        lines = [
            f'Image {position} - {image.label}: {image.descriptor}'
            for position, image in enumerate(images, start=1)
        ]
        return render_block('images', image_lines='\n'.join(lines))
    refs = ', '.join(f'Image {position} ({image.label})' for position, image in enumerate(images, start=1))
    return render_block('image_list', image_refs=refs)


def class_block(vocabulary: ClassVocabulary):
    return render_block(
        'classes',
        class_lines='\n'.join(f'- {name}' for name in vocabulary.names),
        task_sentence=MULTI_LABEL_SENTENCE if vocabulary.is_multi_label else MULTI_CLASS_SENTENCE,
    )


def guide_block(vocabulary: ClassVocabulary):
    vocabulary.require_definitions()
    lines = [
        f'({number}) {item.name}: {item.definition.strip()}'
        for number, item in enumerate(vocabulary.classes, start=1)
    ]
    return render_block('guides', guide_lines='\n'.join(lines))


def answer_block(vocabulary: ClassVocabulary):
    answer_format = f'{ANSWER_PREFIX} <class>; <class>; ...' if vocabulary.is_multi_label else f'{ANSWER_PREFIX} <class>'
    return render_block('answer', answer_format=answer_format)


def assemble(images, vocabulary: ClassVocabulary, strategy: PromptStrategy, cot=False, guides=False) -> PromptBundle:
    vocabulary.require_non_empty()
    images = ordered_images(images)

    blocks = [render_block('intro', image_count=len(images))]
    if strategy.include_band_catalog:
        blocks.append(render_block('band_catalog', band_lines='\n'.join(f'- {line}' for line in catalog_lines())))
    blocks.append(image_block(images, strategy))
    if cot:
        blocks.append(render_block('cot', image_count=len(images)))
    blocks.append(class_block(vocabulary))
    if guides:
        blocks.append(guide_block(vocabulary))
    blocks.append(answer_block(vocabulary))

    text = '\n\n'.join(blocks) + '\n'
    logger.debug(f"Built {strategy.label} prompt with {len(images)} images and {len(vocabulary.classes)} classes")
    return PromptBundle(images=images, instruction_text=text, strategy=strategy)


def build_baseline_prompt(images, vocabulary: ClassVocabulary, strategy: PromptStrategy = None) -> PromptBundle:
    strategy = strategy or PromptStrategy(variant=PromptVariant.BASELINE)
    return assemble(images, vocabulary, strategy)


def build_expansion_prompt(images, vocabulary: ClassVocabulary, strategy: PromptStrategy = None) -> PromptBundle:
    strategy = strategy or PromptStrategy(variant=PromptVariant.EXPANSION)
    vocabulary.require_definitions()
    return assemble(images, vocabulary, strategy, guides=True)


def build_cot_prompt(images, vocabulary: ClassVocabulary, strategy: PromptStrategy = None) -> PromptBundle:
    strategy = strategy or PromptStrategy(variant=PromptVariant.COT)
    guides = strategy.include_guides and vocabulary.has_definitions
    if strategy.include_guides and not guides:
        logger.warning('CoT guides requested but the vocabulary lacks definitions; leaving them out')
    return assemble(images, vocabulary, strategy, cot=True, guides=guides)


BUILDERS = {
    PromptVariant.BASELINE: build_baseline_prompt,
    PromptVariant.EXPANSION: build_expansion_prompt,
    PromptVariant.COT: build_cot_prompt,
}


def build_prompt(images, vocabulary: ClassVocabulary, strategy: PromptStrategy) -> PromptBundle:
    return BUILDERS[strategy.variant](images, vocabulary, strategy)
