# Django imports
from django.test import SimpleTestCase

# Python imports
import random

# Local imports
from promptkit.builders import PromptVariant
from promptkit.exceptions import EmptyVocabulary
from promptkit.vocabulary import ClassVocabulary, VocabularyClass, load_vocabulary
from .parser import LabelSet, ParseMode, parse_answer_tokens, parse_response, scan_text, top1_label


def vocabulary(multi_label=True):
    return ClassVocabulary(
        task_kind='multi-label' if multi_label else 'multi-class',
        classes=tuple(VocabularyClass(name) for name in ('Forest', 'Mixed forest', 'Water bodies', 'Pastures')),
        aliases={'Lake': 'Water bodies'},
    )


COT_RESPONSE = """Step 1: Propose
- Forest: Image 3 (NDVI) is mostly green.
- Pastures: smooth texture in Image 1 (RGB).

Step 2: Verify
Forest is confirmed by the high moisture in Image 5 (NDMI-1). Pastures cannot be confirmed.
Some Water bodies were considered and rejected.

Step 3: Conclude
The scene shows Mixed forest with small clearings.
"""


class AnswerLineTests(SimpleTestCase):
    def test_answer_line(self):
        outcome = parse_response('Looks wooded.\nANSWER: Forest; Water bodies', vocabulary())
        self.assertIs(outcome.parse_mode, ParseMode.ANSWER_LINE)
        self.assertEqual(outcome.labels, ('Forest', 'Water bodies'))

    def test_last_answer_line_wins(self):
        text = 'ANSWER: Pastures\nOn reflection the cover is denser.\nANSWER: Forest'
        self.assertEqual(parse_response(text, vocabulary()).labels, ('Forest',))

    def test_case_and_markup_insensitive(self):
        for line in ('answer: forest', '**ANSWER:** FOREST', '> Answer : forest.', '## Answer**: `Forest`'):
            with self.subTest(line=line):
                self.assertEqual(parse_response(line, vocabulary()).labels, ('Forest',))

    def test_aliases_and_duplicates(self):
        outcome = parse_response('ANSWER: lake; Water bodies; water  BODIES', vocabulary())
        self.assertEqual(outcome.labels, ('Water bodies',))

    def test_unmatched_tokens_are_kept(self):
        outcome = parse_response('ANSWER: Forest; Desert; ', vocabulary())
        self.assertEqual(outcome.labels, ('Forest',))
        self.assertEqual(outcome.label_set.unmatched, ('Desert',))

    def test_empty_answer_line(self):
        outcome = parse_response('I cannot tell.\nANSWER:', vocabulary())
        self.assertIs(outcome.parse_mode, ParseMode.ANSWER_LINE)
        self.assertEqual(outcome.labels, ())

    def test_labels_are_closed_over_vocabulary(self):
        vocab = load_vocabulary('bigearthnet19')
        text = 'ANSWER: Arable land; Tundra; Urban fabric; Marine waters; Clouds'
        outcome = parse_response(text, vocab)
        self.assertTrue(set(outcome.labels) <= set(vocab.names))
        self.assertEqual(outcome.label_set.unmatched, ('Tundra', 'Clouds'))

    def test_answer_tokens_directly(self):
        label_set = parse_answer_tokens(' "Forest". ; (Pastures)', vocabulary())
        self.assertEqual(label_set.labels, ('Forest', 'Pastures'))


class FullScanTests(SimpleTestCase):
    def test_longer_names_shadow_shorter(self):
        label_set = scan_text('A Mixed Forest next to the lake.', vocabulary())
        self.assertEqual(label_set.labels, ('Mixed forest', 'Water bodies'))

    def test_both_names_when_both_appear(self):
        label_set = scan_text('mixed forest in the north, forest in the south', vocabulary())
        self.assertEqual(label_set.labels, ('Mixed forest', 'Forest'))

    def test_word_boundaries(self):
        self.assertEqual(scan_text('Forestry offices and Lakeside homes', vocabulary()).labels, ())

    def test_free_text_falls_back_to_scan(self):
        outcome = parse_response('The image shows pastures and a lake.', vocabulary())
        self.assertIs(outcome.parse_mode, ParseMode.FULL_SCAN)
        self.assertEqual(outcome.labels, ('Pastures', 'Water bodies'))

    def test_cot_scans_after_conclusion(self):
        outcome = parse_response(COT_RESPONSE, vocabulary(), variant=PromptVariant.COT)
        self.assertIs(outcome.parse_mode, ParseMode.FULL_SCAN)
        self.assertEqual(outcome.labels, ('Mixed forest',))

    def test_non_cot_scans_everything(self):
        outcome = parse_response(COT_RESPONSE, vocabulary(), variant='baseline')
        self.assertEqual(outcome.labels, ('Forest', 'Pastures', 'Water bodies', 'Mixed forest'))

    def test_cot_answer_line_takes_precedence(self):
        outcome = parse_response(COT_RESPONSE + 'ANSWER: Forest; Pastures\n', vocabulary(), variant='cot')
        self.assertIs(outcome.parse_mode, ParseMode.ANSWER_LINE)
        self.assertEqual(outcome.labels, ('Forest', 'Pastures'))

    def test_cot_without_marker_scans_everything(self):
        outcome = parse_response('Forest dominates.', vocabulary(), variant='cot')
        self.assertEqual(outcome.labels, ('Forest',))


def random_responses(vocab, count, seed):
    rng = random.Random(seed)
    names = list(vocab.names)
    for _ in range(count):
        picked = rng.sample(names, rng.randint(1, 3))
        if rng.random() < 0.5:
            tokens = picked + rng.sample(['Clouds', 'Tundra', ''], rng.randint(0, 2))
            rng.shuffle(tokens)
            yield 'Reasoning about the images.\nANSWER: ' + '; '.join(tokens)
        else:
            yield 'The scene shows ' + ' and '.join(picked).lower() + ' near a road.'


class InvariantTests(SimpleTestCase):
    def test_parsing_is_idempotent(self):
        vocab = load_vocabulary('bigearthnet19')
        for text in random_responses(vocab, 300, seed=1):
            first = parse_response(text, vocab)
            self.assertEqual(parse_response(text, vocab), first)
            again = parse_response('ANSWER: ' + '; '.join(first.labels), vocab)
            self.assertEqual(set(again.labels), set(first.labels))

    def test_case_does_not_matter(self):
        for name in ('bigearthnet19', 'eurosat'):
            vocab = load_vocabulary(name)
            for text in random_responses(vocab, 300, seed=2):
                with self.subTest(vocabulary=name, text=text):
                    lower = parse_response(text, vocab)
                    upper = parse_response(text.upper(), vocab)
                    self.assertEqual(upper.labels, lower.labels)
                    self.assertEqual(upper.parse_mode, lower.parse_mode)


class EdgeCaseTests(SimpleTestCase):
    def test_blank_responses_are_empty(self):
        for text in ('', '   \n\t', None):
            with self.subTest(text=text):
                outcome = parse_response(text, vocabulary())
                self.assertIs(outcome.parse_mode, ParseMode.EMPTY)
                self.assertEqual(outcome.labels, ())

    def test_empty_vocabulary(self):
        with self.assertRaises(EmptyVocabulary):
            parse_response('ANSWER: Forest', ClassVocabulary(task_kind='multi-label', classes=()))

    def test_top1(self):
        vocab = vocabulary(multi_label=False)
        self.assertEqual(top1_label(parse_response('ANSWER: Pastures; Forest', vocab)), 'Pastures')
        self.assertIsNone(top1_label(parse_response('', vocab)))

    def test_label_set(self):
        label_set = LabelSet(labels=('Forest', 'Pastures'))
        self.assertIn('Forest', label_set)
        self.assertEqual(len(label_set), 2)
        self.assertEqual(label_set.as_set(), frozenset({'Forest', 'Pastures'}))
