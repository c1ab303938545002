# Django imports
from django.test import SimpleTestCase

# Python imports
import json
import tempfile
from pathlib import Path

# Local imports
from bench.testing import synthetic_scene
from spectral.render import render_all
from .builders import PromptStrategy, PromptVariant, build_prompt
from .catalog import BAND_CATALOG, catalog_lines
from .exceptions import EmptyVocabulary, MissingDefinition, NoImages, PromptError, VocabularyError
from .templating import placeholders
from .vocabulary import ClassVocabulary, TaskKind, VocabularyClass, load_aliases, load_vocabulary, normalize_name


def toy_vocabulary(multi_label=True, definitions=True):
    return ClassVocabulary(
        task_kind=TaskKind.MULTI_LABEL if multi_label else TaskKind.MULTI_CLASS,
        classes=(
            VocabularyClass('Forest', 'Dense tree canopy' if definitions else None),
            VocabularyClass('Water bodies', 'Open water, blue in the water index'),
        ),
        aliases={'Lakes': 'Water bodies'},
        name='toy',
    )


class CatalogTests(SimpleTestCase):
    def test_twelve_lines_in_listing_order(self):
        lines = catalog_lines()
        self.assertEqual(len(lines), 12)
        self.assertEqual(lines[0], 'B02: Blue (10m)')
        self.assertEqual(lines[3], 'B05: Red Edge (704.1nm, 20m)')
        self.assertEqual(lines[8], 'B01: Coastal Aerosol (60m)')
        self.assertEqual(lines[-1], 'B12: SWIR (2202.4nm, 20m)')

    def test_wavelengths(self):
        wavelengths = [entry.central_wavelength for entry in BAND_CATALOG if entry.central_wavelength]
        self.assertEqual(wavelengths, [704.1, 740.5, 782.8, 1613.7, 2202.4])


class VocabularyTests(SimpleTestCase):
    def test_shipped_vocabularies(self):
        bigearthnet = load_vocabulary('bigearthnet19')
        self.assertEqual(len(bigearthnet.names), 19)
        self.assertTrue(bigearthnet.is_multi_label)
        self.assertTrue(bigearthnet.has_definitions)

        eurosat = load_vocabulary('eurosat')
        self.assertEqual(len(eurosat.names), 10)
        self.assertFalse(eurosat.is_multi_label)
        self.assertEqual(eurosat.resolve('SeaLake'), 'Sea Lake')

    def test_resolve_is_case_and_space_insensitive(self):
        vocab = toy_vocabulary()
        self.assertEqual(vocab.resolve('  water   BODIES '), 'Water bodies')
        self.assertEqual(vocab.resolve('lakes'), 'Water bodies')
        self.assertIsNone(vocab.resolve('Desert'))
        self.assertEqual(normalize_name(' A\tB '), 'a b')

    def test_duplicate_classes_rejected(self):
        with self.assertRaises(VocabularyError):
            ClassVocabulary(task_kind='multi-label', classes=(VocabularyClass('Forest'), VocabularyClass('forest')))

    def test_alias_to_unknown_class_rejected(self):
        with self.assertRaises(VocabularyError):
            toy_vocabulary().with_aliases({'Sea': 'Ocean'})

    def test_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'custom.json'
            path.write_text(json.dumps({'task': 'multi-class', 'classes': [{'name': 'Forest'}]}))
            vocab = load_vocabulary(path)
            self.assertEqual(vocab.name, 'custom')
            self.assertEqual(vocab.task_kind, TaskKind.MULTI_CLASS)

            path.write_text('{"task": "regression", "classes": []}')
            with self.assertRaises(VocabularyError):
                load_vocabulary(path)

            aliases = Path(tmp) / 'aliases.json'
            aliases.write_text(json.dumps({'Woods': 'Forest'}))
            self.assertEqual(vocab.with_aliases(load_aliases(aliases)).resolve('woods'), 'Forest')

        with self.assertRaises(VocabularyError):
            load_vocabulary('/nonexistent/vocabulary.json')


class PromptBuildTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.images = render_all(synthetic_scene('prompt', size=4))

    def build(self, variant='baseline', vocab=None, images=None, **flags):
        strategy = PromptStrategy(variant=variant, **flags)
        return build_prompt(self.images if images is None else images, vocab or toy_vocabulary(), strategy)

    def test_baseline_sections(self):
        text = self.build().instruction_text
        for line in catalog_lines():
            self.assertIn(f'- {line}', text)
        self.assertIn('Image 1 - RGB: Composited from B04, B03, B02', text)
        self.assertIn('Image 6 - NDMI-2: Moisture Index using B8A, B12', text)
        self.assertIn('- Forest\n- Water bodies', text)
        self.assertIn('More than one class is possible', text)
        self.assertNotIn('Step 1', text)
        self.assertNotIn('Dense tree canopy', text)
        self.assertTrue(text.rstrip().endswith('ANSWER: <class>; <class>; ...'))

    def test_descriptor_lines_follow_image_order(self):
        text = self.build().instruction_text
        lines = [line for line in text.splitlines() if line.startswith('Image ')]
        self.assertEqual(len(lines), 6)
        labels = [line.split(' - ')[1].split(':')[0] for line in lines]
        self.assertEqual(labels, ['RGB', 'False Color', 'NDVI', 'NDWI', 'NDMI-1', 'NDMI-2'])

    def test_payloads_follow_canonical_order(self):
        bundle = self.build(images=list(reversed(self.images)))
        self.assertEqual([image.kind for image in bundle.images], [image.kind for image in self.images])
        self.assertEqual(len(bundle.image_payloads()), 6)
        self.assertEqual(bundle.referenced_images(), [1, 2, 3, 4, 5, 6])

    def test_multi_class_answer_format(self):
        text = self.build(vocab=toy_vocabulary(multi_label=False)).instruction_text
        self.assertIn('Exactly one class applies', text)
        self.assertTrue(text.rstrip().endswith('ANSWER: <class>'))

    def test_expansion_adds_guides(self):
        text = self.build('expansion').instruction_text
        self.assertIn('(1) Forest: Dense tree canopy', text)
        self.assertIn('(2) Water bodies: Open water', text)

    def test_expansion_requires_definitions(self):
        with self.assertRaises(MissingDefinition) as ctx:
            self.build('expansion', vocab=toy_vocabulary(definitions=False))
        self.assertEqual(ctx.exception.class_name, 'Forest')

    def test_cot_block(self):
        text = self.build('cot').instruction_text
        self.assertIn('Step 1: Propose', text)
        self.assertIn('You MUST cite which image(s)', text)
        self.assertIn('Step 3: Conclude', text)
        self.assertLess(text.index('Step 3'), text.index('ANSWER:'))
        self.assertNotIn('(1) Forest', text)

    def test_cot_with_guides(self):
        strategy = PromptStrategy(variant='cot', include_guides=True)
        self.assertEqual(strategy.label, 'CoT + Expansion')
        text = build_prompt(self.images, toy_vocabulary(), strategy).instruction_text
        self.assertIn('(1) Forest: Dense tree canopy', text)

    def test_without_band_catalog(self):
        text = self.build('cot', include_band_catalog=False).instruction_text
        for line in catalog_lines():
            self.assertNotIn(line, text)
        self.assertIn('Image 3 - NDVI', text)

    def test_without_descriptors(self):
        text = self.build('cot', include_image_descriptors=False).instruction_text
        self.assertNotIn('Composited from', text)
        self.assertIn('Image 1 (RGB)', text)
        self.assertIn('Image 6 (NDMI-2)', text)

    def test_strategy_labels(self):
        self.assertEqual(PromptStrategy(variant='baseline').label, 'Baseline')
        self.assertEqual(PromptStrategy(variant='cot', include_band_catalog=False).label, 'CoT w/o band description')
        self.assertEqual(
            PromptStrategy(variant='cot', include_image_descriptors=False).label,
            'CoT w/o pseudo-image description',
        )
        strategy = PromptStrategy.from_dict({'variant': 'expansion'})
        self.assertIs(strategy.variant, PromptVariant.EXPANSION)
        self.assertEqual(PromptStrategy.from_dict(strategy.to_dict()), strategy)

    def test_empty_vocabulary(self):
        with self.assertRaises(EmptyVocabulary):
            self.build(vocab=ClassVocabulary(task_kind='multi-label', classes=()))

    def test_no_images(self):
        with self.assertRaises(NoImages):
            self.build(images=[])

    def test_duplicate_modality(self):
        with self.assertRaises(PromptError):
            self.build(images=[self.images[0], self.images[0]])

    def test_single_image_prompt(self):
        text = self.build(images=self.images[:1]).instruction_text
        self.assertIn('You are given 1 image of the same location', text)

    def test_prompt_is_deterministic(self):
        self.assertEqual(self.build('cot').instruction_text, self.build('cot').instruction_text)

    def test_placeholders(self):
        self.assertEqual(placeholders('{{ a }} and {{b|upper}}'), {'a', 'b'})
