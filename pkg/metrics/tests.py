# Django imports
from django.test import SimpleTestCase

# Python imports
import random

# Local imports
from parse.parser import LabelSet
from .exceptions import EmptyRun, EmptyTruth
from .scores import AveragingMode, aggregate_multilabel, harmonic_f1, per_class_counts, sample_prf, top1_accuracy

CLASSES = [f'class-{index}' for index in range(8)]


def oracle_prf(pred, truth):
    hits = sum(1 for label in pred if label in truth)
    precision = hits / len(pred) if pred else 0.0
    recall = hits / len(truth)
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return precision, recall, f1


def random_run(rng, size):
    run = []
    for _ in range(size):
        truth = set(rng.sample(CLASSES, rng.randint(1, 4)))
        pred = set(rng.sample(CLASSES, rng.randint(0, 4)))
        run.append((pred, truth))
    return run


class SampleScoreTests(SimpleTestCase):
    def test_hand_computed_case(self):
        score = sample_prf({'Forest', 'Pastures'}, {'Forest'})
        self.assertEqual(score.precision, 0.5)
        self.assertEqual(score.recall, 1.0)
        self.assertAlmostEqual(score.f1, 2 / 3, places=12)

    def test_empty_prediction_scores_zero(self):
        score = sample_prf(LabelSet(), {'Forest'})
        self.assertEqual((score.precision, score.recall, score.f1), (0.0, 0.0, 0.0))

    def test_perfect_prediction(self):
        score = sample_prf(LabelSet(labels=('Forest', 'Pastures')), ['Pastures', 'Forest'])
        self.assertEqual((score.precision, score.recall, score.f1), (1.0, 1.0, 1.0))

    def test_empty_truth_is_invalid(self):
        with self.assertRaises(EmptyTruth):
            sample_prf({'Forest'}, set())

    def test_matches_brute_force(self):
        rng = random.Random(11)
        for pred, truth in random_run(rng, 500):
            score = sample_prf(pred, truth)
            expected = oracle_prf(pred, truth)
            for got, want in zip((score.precision, score.recall, score.f1), expected):
                self.assertAlmostEqual(got, want, delta=1e-12)

    def test_adding_a_correct_label_never_lowers_recall(self):
        rng = random.Random(5)
        for pred, truth in random_run(rng, 200):
            missing = sorted(truth - pred)
            if not missing:
                continue
            before = sample_prf(pred, truth)
            after = sample_prf(pred | {missing[0]}, truth)
            self.assertGreater(after.recall, before.recall)
            self.assertGreaterEqual(after.precision, before.precision)

    def test_harmonic_f1(self):
        self.assertEqual(harmonic_f1(0.0, 0.0), 0.0)
        self.assertAlmostEqual(harmonic_f1(0.5, 1.0), 2 / 3)


class AggregateTests(SimpleTestCase):
    def test_samples_average_matches_brute_force(self):
        rng = random.Random(2024)
        for _ in range(200):
            run = random_run(rng, rng.randint(1, 25))
            aggregate = aggregate_multilabel([sample_prf(pred, truth) for pred, truth in run])
            rows = [oracle_prf(pred, truth) for pred, truth in run]
            self.assertAlmostEqual(aggregate.precision, sum(r[0] for r in rows) / len(rows), delta=1e-12)
            self.assertAlmostEqual(aggregate.recall, sum(r[1] for r in rows) / len(rows), delta=1e-12)
            self.assertAlmostEqual(aggregate.f1, sum(r[2] for r in rows) / len(rows), delta=1e-12)

    def test_micro_pools_counts(self):
        run = [({'a', 'b'}, {'a'}), (set(), {'c', 'd'}), ({'c'}, {'c'})]
        aggregate = aggregate_multilabel([sample_prf(pred, truth) for pred, truth in run], mode='micro')
        self.assertIs(aggregate.mode, AveragingMode.MICRO)
        self.assertAlmostEqual(aggregate.precision, 2 / 3)
        self.assertAlmostEqual(aggregate.recall, 2 / 4)
        self.assertAlmostEqual(aggregate.f1, harmonic_f1(2 / 3, 0.5))

    def test_order_does_not_matter(self):
        rng = random.Random(9)
        scores = [sample_prf(pred, truth) for pred, truth in random_run(rng, 40)]
        shuffled = list(scores)
        rng.shuffle(shuffled)
        for mode in AveragingMode:
            self.assertAlmostEqual(
                aggregate_multilabel(scores, mode).f1,
                aggregate_multilabel(shuffled, mode).f1,
                delta=1e-12,
            )

    def test_empty_run(self):
        with self.assertRaises(EmptyRun):
            aggregate_multilabel([])
        with self.assertRaises(ValueError):
            aggregate_multilabel([sample_prf({'a'}, {'a'})], mode='macro')


class AccuracyTests(SimpleTestCase):
    def test_top1_accuracy(self):
        records = [('Forest', 'Forest'), ('Pasture', 'Forest'), (None, 'River'), ('River', 'River')]
        self.assertEqual(top1_accuracy(records), 0.5)

    def test_missing_prediction_is_wrong(self):
        self.assertEqual(top1_accuracy([(None, 'Forest')]), 0.0)

    def test_empty_run(self):
        with self.assertRaises(EmptyRun):
            top1_accuracy([])


class PerClassTests(SimpleTestCase):
    def test_counts(self):
        counts = per_class_counts(
            [({'a', 'b'}, {'a'}), (LabelSet(labels=('c',)), {'a', 'c'})],
            class_names=['a', 'b', 'c', 'd'],
        )
        self.assertEqual(list(counts), ['a', 'b', 'c', 'd'])
        self.assertEqual(counts['a'], {'tp': 1, 'fp': 0, 'fn': 1})
        self.assertEqual(counts['b'], {'tp': 0, 'fp': 1, 'fn': 0})
        self.assertEqual(counts['c'], {'tp': 1, 'fp': 0, 'fn': 0})
        self.assertEqual(counts['d'], {'tp': 0, 'fp': 0, 'fn': 0})
