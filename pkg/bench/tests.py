# Django imports
from django.contrib.auth import get_user_model
from django.core.management import CommandError, call_command
from django.test import SimpleTestCase, TestCase, override_settings
from django.urls import reverse

# Python imports
import csv
import io
import json
import tempfile
from dataclasses import replace
from pathlib import Path

# Third party imports
import yaml
from rest_framework import status
from rest_framework.test import APITestCase

# Local imports
from backend.mocks import EchoBackend
from backend.wrappers import CachingBackend
from promptkit.vocabulary import load_vocabulary
from raster.grid import align_to_common_grid
from raster.io import load_scene, save_scene
from spectral.modalities import ALL_MODALITIES
from .ablation import RGB, RGB_NDVI, AblationMatrix, modality_set_label, run_ablation
from .adapters import (
    DEFAULT_LABEL_MAPPING,
    BigEarthNetAdapter,
    EuroSatAdapter,
    Sample,
    get_adapter,
    load_label_mapping,
    select_subset,
)
from .config import RunConfig, apply_overrides
from .exceptions import ConfigError, DatasetError
from .models import EvalRun, SampleRecord
from .reports import emit_ablation, emit_report, to_csv, to_json, to_table
from .runner import report_from_run, run_eval
from .tasks import run_eval_task
from .testing import synthetic_labels, write_dataset


class DatasetMixin:
    """A temp dir with a small synthetic BigEarthNet-style and EuroSAT-style dataset."""

    def setUp(self):
        super().setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)
        self.ben_labels = synthetic_labels('bigearthnet19', 10, seed=1)
        self.ben_index = write_dataset(self.root / 'ben', self.ben_labels, size=6, seed=1)
        self.eurosat_labels = synthetic_labels('eurosat', 10, seed=2)
        self.eurosat_index = write_dataset(self.root / 'eurosat', self.eurosat_labels, size=6, seed=2)

    def tearDown(self):
        self.tmp.cleanup()
        super().tearDown()

    def config(self, adapter='bigearthnet', backend='echo', **payload):
        index = self.ben_index if adapter == 'bigearthnet' else self.eurosat_index
        payload.setdefault('workers', 4)
        return RunConfig.from_dict({
            'dataset': {'adapter': adapter, 'index': str(index)},
            'backend': backend,
            **payload,
        })


class RunEvalTests(DatasetMixin, TestCase):
    def test_echo_backend_scores_perfectly(self):
        report = run_eval(self.config())
        self.assertEqual(report.n_samples, 10)
        self.assertEqual(report.aggregate, {'precision': 1.0, 'recall': 1.0, 'f1': 1.0})
        self.assertEqual(report.aggregates['micro']['f1'], 1.0)
        self.assertEqual(report.counts['parse_modes'], {'AnswerLine': 10, 'FullScan': 0, 'Empty': 0})
        self.assertEqual(report.counts['errors'], 0)
        self.assertEqual([result.sample_id for result in report.per_sample], sorted(self.ben_labels))

        run = EvalRun.objects.get(pk=report.run_id)
        self.assertEqual(run.status, EvalRun.STATUS_DONE)
        self.assertEqual(run.config_digest, report.run_config_digest)
        self.assertEqual(run.samples.count(), 10)
        record = run.samples.get(sample_id='S0000')
        self.assertEqual(record.truth, self.ben_labels['S0000'])
        self.assertEqual(record.f1, 1.0)
        self.assertIn('ANSWER:', record.response_text)
        self.assertEqual(len(record.cache_key), 64)

    def test_multi_class_accuracy(self):
        report = run_eval(self.config(adapter='eurosat'))
        self.assertEqual(report.task_kind, 'multi-class')
        self.assertEqual(report.aggregate, {'accuracy': 1.0})
        self.assertTrue(all(result.correct for result in report.per_sample))

    def test_empty_answers_score_zero(self):
        report = run_eval(self.config(backend={'kind': 'static', 'text': ''}))
        self.assertEqual(report.aggregate['f1'], 0.0)
        self.assertEqual(report.counts['parse_modes']['Empty'], 10)

    def test_free_text_answers_are_scanned(self):
        report = run_eval(self.config(adapter='eurosat', backend={'kind': 'static', 'text': 'Probably a Highway.'}))
        self.assertEqual(report.counts['parse_modes']['FullScan'], 10)
        self.assertEqual({result.prediction for result in report.per_sample}, {('Highway',)})

    def test_modalities_set_images_per_request(self):
        rgb = run_eval(self.config(modalities=['rgb']), persist=False)
        full = run_eval(self.config(), persist=False)
        self.assertEqual(rgb.counts['images_per_request'], {'1': 10})
        self.assertEqual(full.counts['images_per_request'], {'6': 10})
        self.assertIsNone(rgb.run_id)

    def test_sample_limit_is_seeded(self):
        first = run_eval(self.config(sample_limit=4, seed=3), persist=False)
        second = run_eval(self.config(sample_limit=4, seed=3), persist=False)
        self.assertEqual(first.n_samples, 4)
        self.assertEqual(
            [result.sample_id for result in first.per_sample],
            [result.sample_id for result in second.per_sample],
        )

    def test_record_then_replay_is_deterministic(self):
        fixtures = str(self.root / 'fixtures')
        recorded = run_eval(self.config(backend={'kind': 'record', 'inner': 'echo', 'fixture_dir': fixtures}))
        self.assertEqual(recorded.backend['stats']['recorded'], 10)

        replay_config = self.config(backend={'kind': 'replay', 'fixture_dir': fixtures})
        outputs = [to_json(run_eval(replay_config, persist=False).to_dict()) for _ in range(3)]
        self.assertEqual(outputs[0], outputs[1])
        self.assertEqual(outputs[1], outputs[2])

        replayed = json.loads(outputs[0])
        self.assertEqual(replayed['aggregate']['f1'], 1.0)
        self.assertEqual(replayed['backend'], {'identity': 'replay', 'stats': {'replay_hits': 10, 'requests': 10}})

    def test_replay_miss_is_recorded_per_sample(self):
        report = run_eval(self.config(backend={'kind': 'replay', 'fixture_dir': str(self.root / 'none')}))
        self.assertEqual(report.counts['errors'], 10)
        self.assertEqual(report.counts['parse_modes']['Empty'], 10)
        self.assertTrue(report.per_sample[0].error.startswith('replay_miss'))
        self.assertEqual(SampleRecord.objects.exclude(error='').count(), 10)

    def test_broken_scene_fails_only_that_sample(self):
        (self.root / 'ben' / 'scenes' / 'S0003' / 'B04.u16').write_bytes(b'\x00')
        report = run_eval(self.config(), persist=False)
        failed = [result for result in report.per_sample if result.error]
        self.assertEqual([result.sample_id for result in failed], ['S0003'])
        self.assertTrue(failed[0].error.startswith('corrupt_raster'))

    def test_rerun_replaces_records(self):
        run = EvalRun.objects.create(name='pending', config={}, config_digest='', dataset='', strategy='')
        run_eval(self.config(), run=run)
        run_eval(self.config(), run=run)
        run.refresh_from_db()
        self.assertEqual(run.status, EvalRun.STATUS_DONE)
        self.assertEqual(run.samples.count(), 10)

    def test_failure_marks_run(self):
        run = EvalRun.objects.create(name='doomed', config={}, config_digest='', dataset='', strategy='')
        config = RunConfig.from_dict({'dataset': {'adapter': 'bigearthnet', 'index': str(self.root / 'nope.csv')}})
        with self.assertRaises(DatasetError):
            run_eval(config, run=run)
        run.refresh_from_db()
        self.assertEqual(run.status, EvalRun.STATUS_FAILED)
        self.assertTrue(run.error.startswith('dataset_error'))

    def test_native_resolution_scenes_render_like_aligned_ones(self):
        write_dataset(self.root / 'native', self.ben_labels, size=12, seed=4, aligned=False)
        aligned_dir = self.root / 'aligned'
        rows = []
        for sample_id, labels in sorted(self.ben_labels.items()):
            native = load_scene(self.root / 'native' / 'scenes' / sample_id / 'manifest.json')
            self.assertIn((2, 2), {raster.values.shape for raster in native.bands.values()})
            scene = align_to_common_grid(native)
            self.assertEqual({raster.values.shape for raster in scene.bands.values()}, {(12, 12)})
            manifest = save_scene(scene, aligned_dir / sample_id)
            rows.append((sample_id, manifest.relative_to(aligned_dir).as_posix(), ';'.join(labels)))
        with (aligned_dir / 'index.csv').open('w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(('sample_id', 'manifest', 'labels'))
            writer.writerows(rows)

        def run_on(index):
            return run_eval(RunConfig.from_dict({
                'dataset': {'adapter': 'bigearthnet', 'index': str(index)},
                'backend': 'echo',
            }), persist=False)

        native_report = run_on(self.root / 'native' / 'index.csv')
        aligned_report = run_on(aligned_dir / 'index.csv')
        self.assertEqual(native_report.counts['errors'], 0)
        self.assertEqual(native_report.aggregate['f1'], 1.0)
        self.assertEqual(
            [result.cache_key for result in native_report.per_sample],
            [result.cache_key for result in aligned_report.per_sample],
        )

    def test_report_rebuilt_from_stored_records(self):
        report = run_eval(self.config(strategy='cot'))
        run = EvalRun.objects.get(pk=report.run_id)
        self.assertEqual(to_json(report_from_run(run).to_dict()), to_json(report.to_dict()))
        self.assertEqual(to_json(report_from_run(run, reparse=True).to_dict()), to_json(report.to_dict()))


class RunConfigTests(DatasetMixin, SimpleTestCase):
    def test_digest_ignores_bookkeeping(self):
        config = self.config()
        self.assertEqual(config.digest, self.config().digest)
        self.assertEqual(config.digest, self.config(workers=1, name='renamed', output_dir='/tmp/x').digest)
        self.assertEqual(
            config.digest,
            self.config(backend={'kind': 'echo', 'cache_dir': '/elsewhere', 'fixture_dir': '/other'}).digest,
        )

    def test_digest_tracks_what_is_asked(self):
        base = self.config().digest
        self.assertNotEqual(base, self.config(seed=1).digest)
        self.assertNotEqual(base, self.config(strategy='cot').digest)
        self.assertNotEqual(base, self.config(modalities=['rgb']).digest)
        self.assertNotEqual(base, self.config(backend={'kind': 'echo', 'temperature': 0.4}).digest)
        self.assertNotEqual(base, self.config(normalization={'mode': 'fixed'}).digest)

    @override_settings(SPECTRAL_BENCH={'NORMALIZATION': {'mode': 'fixed', 'default_range': [0, 3000]}})
    def test_normalization_defaults_come_from_settings(self):
        config = self.config()
        self.assertEqual(config.normalization.mode, 'fixed')
        self.assertEqual(config.normalization.default_range, (0, 3000))
        self.assertEqual(self.config(normalization={'mode': 'scene'}).normalization.mode, 'scene')
        self.assertEqual(self.config(normalization={'default_range': [0, 1000]}).normalization.mode, 'fixed')

    def test_round_trip(self):
        config = self.config(strategy={'variant': 'cot', 'include_band_catalog': False}, modalities=['ndvi', 'rgb'])
        again = RunConfig.from_dict(config.to_dict())
        self.assertEqual(again, config)
        self.assertEqual(again.digest, config.digest)

    def test_default_name(self):
        self.assertEqual(self.config(modalities=['rgb', 'ndvi']).name, 'bigearthnet-baseline-2m')

    def test_invalid_configs(self):
        with self.assertRaises(ConfigError):
            RunConfig.from_dict({'dataset': {'adapter': 'bigearthnet'}})
        with self.assertRaises(ConfigError):
            self.config(modalities=['rgb', 'thermal'])
        with self.assertRaises(ConfigError):
            self.config(target_resolution=15)
        with self.assertRaises(ConfigError):
            self.config(backend={'kind': 'echo', 'unknown': 1})
        with self.assertRaises(ConfigError):
            RunConfig.from_file(self.root / 'missing.yaml')

    def test_file_paths_resolve_against_config_dir(self):
        path = self.root / 'ben' / 'run.yaml'
        path.write_text(yaml.safe_dump({'dataset': {'adapter': 'bigearthnet', 'index': 'index.csv'}}))
        config = RunConfig.from_file(path, overrides={'backend.kind': 'echo', 'sample_limit': 3, 'seed': None})
        self.assertEqual(Path(config.dataset.index), self.root / 'ben' / 'index.csv')
        self.assertEqual(config.backend.kind, 'echo')
        self.assertEqual(config.sample_limit, 3)

    def test_apply_overrides(self):
        payload = {'backend': 'http', 'seed': 1}
        updated = apply_overrides(payload, {'backend.model_id': 'm', 'seed': None})
        self.assertEqual(updated, {'backend': {'kind': 'http', 'model_id': 'm'}, 'seed': 1})
        self.assertEqual(payload, {'backend': 'http', 'seed': 1})

    def test_derive_regenerates_name(self):
        config = self.config()
        derived = config.derive(modalities=RGB)
        self.assertEqual(derived.name, 'bigearthnet-baseline-1m')
        self.assertEqual(derived.dataset, config.dataset)


class AdapterTests(DatasetMixin, SimpleTestCase):
    def write_index(self, rows, header='sample_id,manifest,labels'):
        path = self.root / 'custom.csv'
        path.write_text('\n'.join([header, *rows]) + '\n')
        return path

    def test_bigearthnet_source_labels_are_mapped(self):
        path = self.write_index([
            'a,a/manifest.json,Non-irrigated arable land;Rice fields;Pastures',
            'b,b/manifest.json,Airports',
            'c,/abs/manifest.json,Sea and ocean',
        ])
        samples = BigEarthNetAdapter(path).samples()
        self.assertEqual([sample.sample_id for sample in samples], ['a', 'c'])
        self.assertEqual(samples[0].labels, ('Arable land', 'Pastures'))
        self.assertEqual(samples[0].manifest_path, self.root / 'a' / 'manifest.json')
        self.assertEqual(samples[1].manifest_path, Path('/abs/manifest.json'))

    def test_shipped_mapping_is_total(self):
        vocab = load_vocabulary('bigearthnet19')
        mapping = load_label_mapping(DEFAULT_LABEL_MAPPING, vocab)
        self.assertEqual(len(mapping), 43)
        self.assertEqual(sum(1 for target in mapping.values() if target is None), 11)
        self.assertEqual({target for target in mapping.values() if target}, set(vocab.names))

    def test_incomplete_mapping_is_rejected(self):
        path = self.root / 'mapping.json'
        path.write_text(json.dumps({'Pastures': 'Pastures'}))
        with self.assertRaises(DatasetError):
            load_label_mapping(path, load_vocabulary('bigearthnet19'))
        path.write_text(json.dumps({'Pastures': 'Glaciers'}))
        with self.assertRaises(DatasetError):
            load_label_mapping(path, load_vocabulary('bigearthnet19'))

    def test_eurosat_folder_names(self):
        samples = EuroSatAdapter(self.write_index(['x,x.json,SeaLake', 'y,y.json,AnnualCrop'])).samples()
        self.assertEqual([sample.labels for sample in samples], [('Sea Lake',), ('Annual Crop',)])

    def test_eurosat_needs_exactly_one_label(self):
        with self.assertRaises(DatasetError):
            EuroSatAdapter(self.write_index(['x,x.json,Forest;River'])).samples()

    def test_index_errors(self):
        with self.assertRaises(DatasetError):
            BigEarthNetAdapter(self.root / 'absent.csv').samples()
        with self.assertRaises(DatasetError):
            BigEarthNetAdapter(self.write_index(['a,a.json'], header='sample_id,manifest')).samples()
        with self.assertRaises(DatasetError):
            BigEarthNetAdapter(self.write_index(['a,a.json,Pastures', 'a,b.json,Pastures'])).samples()
        with self.assertRaises(DatasetError):
            BigEarthNetAdapter(self.write_index(['a,a.json,Glaciers'])).samples()
        with self.assertRaises(DatasetError):
            get_adapter('imagenet', self.ben_index)

    def test_select_subset(self):
        samples = [Sample(sample_id=f'id{index:02d}', manifest_path=None, labels=('x',)) for index in range(20)]
        chosen = select_subset(list(reversed(samples)), limit=5, seed=4)
        self.assertEqual(len(chosen), 5)
        self.assertEqual(chosen, sorted(chosen, key=lambda sample: sample.sample_id))
        self.assertEqual(chosen, select_subset(samples, limit=5, seed=4))
        self.assertEqual(select_subset(samples, limit=50), samples)
        with self.assertRaises(DatasetError):
            select_subset(samples, limit=0)


class ReportTests(DatasetMixin, TestCase):
    def test_emit_report_is_byte_stable(self):
        report = run_eval(self.config(), persist=False)
        out = self.root / 'reports'
        paths = emit_report([report], out)
        self.assertEqual(sorted(path.name for path in paths), [
            'bigearthnet-baseline-6m.csv', 'bigearthnet-baseline-6m.json', 'bigearthnet-baseline-6m.txt',
        ])
        first = {path.name: path.read_bytes() for path in paths}
        emit_report([report], out)
        self.assertEqual(first, {path.name: path.read_bytes() for path in paths})

        payload = json.loads(first['bigearthnet-baseline-6m.json'])
        self.assertEqual(payload['run_config_digest'], report.run_config_digest)
        self.assertEqual(len(payload['per_sample']), 10)

    def test_combined_reports(self):
        reports = [
            run_eval(self.config(modalities=['rgb']), persist=False),
            run_eval(self.config(), persist=False),
        ]
        paths = emit_report(reports, self.root / 'reports', stem='Both Runs')
        self.assertEqual(len(paths), 9)
        self.assertTrue((self.root / 'reports' / 'both-runs.csv').exists())
        self.assertEqual(len(to_csv(reports).splitlines()), 3)

    def test_tables(self):
        multi_label = to_table([run_eval(self.config(), persist=False)])
        self.assertIn('F1', multi_label)
        self.assertIn('1.000', multi_label)
        multi_class = to_table([run_eval(self.config(adapter='eurosat'), persist=False)])
        self.assertIn('Accuracy (%)', multi_class)
        self.assertIn('100.0', multi_class)


class AblationTests(DatasetMixin, TestCase):
    def test_default_matrix(self):
        matrix = AblationMatrix.default(self.config())
        self.assertEqual(len(matrix.rows), 11)
        keys = [row.key for row in matrix.rows]
        self.assertEqual(keys[0], ('Baseline', 'RGB Only'))
        self.assertIn(('Expansion', 'All Multi-Spectral'), keys)
        self.assertIn(('CoT', 'RGB + NDVI + NDWI'), keys)
        self.assertIn(('CoT w/o band description', 'All Multi-Spectral'), keys)
        self.assertIn(('CoT w/o pseudo-image description', 'All Multi-Spectral'), keys)
        self.assertEqual(len({row.config.digest for row in matrix.rows}), 11)

    def test_modality_set_label(self):
        self.assertEqual(modality_set_label(ALL_MODALITIES), 'All Multi-Spectral')
        self.assertEqual(modality_set_label(['ndwi', 'rgb']), 'RGB + NDWI')

    def test_duplicate_rows_rejected(self):
        base = self.config()
        row = AblationMatrix.make_row(base, 'baseline', RGB, 'm')
        with self.assertRaises(ConfigError):
            AblationMatrix(rows=(row, row))

    def test_shared_cache_across_runs(self):
        base = self.config()
        matrix = AblationMatrix(rows=(
            AblationMatrix.make_row(base, 'baseline', RGB, 'm'),
            AblationMatrix.make_row(base, 'cot', RGB_NDVI, 'm'),
        ), name='m')
        inner = EchoBackend(self.ben_labels)
        backend = CachingBackend(inner, self.root / 'cache')

        first = run_ablation(matrix, backend=backend)
        self.assertEqual(inner.stats.snapshot()['requests'], 20)
        second = run_ablation(matrix, backend=backend, persist=False)
        self.assertEqual(inner.stats.snapshot()['requests'], 20)

        for report in second.reports:
            self.assertEqual(report.backend['stats']['cache_hits'], 10)
        self.assertEqual([r.aggregate for r in first.reports], [r.aggregate for r in second.reports])
        self.assertEqual(EvalRun.objects.filter(ablation='m').count(), 2)
        self.assertEqual([entry['f1'] for entry in first.table], ['1.000', '1.000'])

    def test_parallel_rows_report_their_own_stats(self):
        matrix = AblationMatrix.default(self.config(), name='grid')
        sequential = run_ablation(matrix, persist=False)
        parallel = run_ablation(replace(matrix, row_workers=4), persist=False)

        self.assertEqual(len(parallel.reports), 11)
        for report in parallel.reports:
            self.assertEqual(report.backend['stats'], {'requests': 10})
        self.assertEqual(
            [to_json(report.to_dict()) for report in sequential.reports],
            [to_json(report.to_dict()) for report in parallel.reports],
        )

    def test_failed_row_does_not_stop_the_matrix(self):
        vocab = load_vocabulary('eurosat')
        bare = self.root / 'eurosat-bare.json'
        bare.write_text(json.dumps({'task': 'multi-class', 'classes': [{'name': name} for name in vocab.names]}))
        base = RunConfig.from_dict({
            'dataset': {'adapter': 'eurosat', 'index': str(self.eurosat_index), 'vocabulary': str(bare)},
            'backend': 'echo',
        })
        matrix = AblationMatrix(rows=(
            AblationMatrix.make_row(base, 'baseline', ALL_MODALITIES, 'bare'),
            AblationMatrix.make_row(base, 'expansion', ALL_MODALITIES, 'bare'),
        ), name='bare', row_workers=2)
        result = run_ablation(matrix)

        self.assertEqual(len(result.reports), 1)
        self.assertEqual(len(result.failures), 1)
        self.assertTrue(result.failures[0][1].startswith('missing_definition'))

        paths = emit_ablation(result, self.root / 'out')
        comparison = json.loads((self.root / 'out' / 'bare-comparison.json').read_text())
        self.assertEqual(comparison['failures'][0]['row'], 'bare / Expansion / All Multi-Spectral')
        self.assertIn(self.root / 'out' / 'bare-comparison.txt', paths)

    def test_matrix_from_file(self):
        (self.root / 'ben' / 'run.yaml').write_text(yaml.safe_dump({
            'dataset': {'adapter': 'bigearthnet', 'index': 'index.csv'},
            'backend': 'echo',
        }))
        path = self.root / 'ben' / 'matrix.yaml'
        path.write_text(yaml.safe_dump({
            'name': 'small',
            'base': 'run.yaml',
            'rows': [{'strategy': 'baseline', 'modalities': ['rgb']}, {'strategy': {'variant': 'cot'}}],
        }))
        matrix = AblationMatrix.from_file(path, overrides={'sample_limit': 2})
        self.assertEqual([row.key for row in matrix.rows], [('Baseline', 'RGB Only'), ('CoT', 'All Multi-Spectral')])
        self.assertEqual(matrix.base.sample_limit, 2)

        path.write_text(yaml.safe_dump({'base': 'run.yaml', 'rows': [{'modalities': ['rgb']}]}))
        with self.assertRaises(ConfigError):
            AblationMatrix.from_file(path)


class TaskTests(DatasetMixin, TestCase):
    def test_eval_task_fills_pending_run(self):
        config = self.config()
        run = EvalRun.objects.create(name=config.name, config=config.to_dict(), config_digest=config.digest, dataset='bigearthnet', strategy='Baseline')
        outcome = run_eval_task.apply(kwargs={'config_payload': config.to_dict(), 'run_id': run.pk, 'emit': False}).get()
        self.assertEqual(outcome, {'success': True, 'run_id': run.pk, 'run_config_digest': config.digest})
        run.refresh_from_db()
        self.assertEqual(run.status, EvalRun.STATUS_DONE)
        self.assertEqual(run.aggregate['f1'], 1.0)

    def test_eval_task_reports_domain_errors(self):
        payload = self.config().to_dict()
        payload['dataset']['index'] = str(self.root / 'missing.csv')
        outcome = run_eval_task.apply(kwargs={'config_payload': payload}).get()
        self.assertFalse(outcome['success'])
        self.assertEqual(outcome['reason'], 'dataset_error')


class CommandTests(DatasetMixin, TestCase):
    def setUp(self):
        super().setUp()
        self.config_path = self.root / 'ben' / 'run.yaml'
        self.config_path.write_text(yaml.safe_dump({
            'dataset': {'adapter': 'bigearthnet', 'index': 'index.csv'},
            'strategy': 'cot',
        }))
        self.manifest = self.root / 'ben' / 'scenes' / 'S0000' / 'manifest.json'

    def call(self, *args):
        out = io.StringIO()
        call_command(*args, stdout=out, stderr=io.StringIO())
        return out.getvalue()

    def test_run_and_report(self):
        out_dir = self.root / 'reports'
        output = self.call('run', str(self.config_path), '--backend', 'echo', '--output-dir', str(out_dir), '--workers', '2')
        self.assertIn('1.000', output)
        self.assertTrue((out_dir / 'bigearthnet-cot-6m.json').exists())

        run = EvalRun.objects.get()
        self.assertEqual(run.strategy, 'CoT')
        output = self.call('report', str(run.pk), '--reparse', '--output-dir', str(self.root / 'again'))
        self.assertIn('1.000', output)
        self.assertEqual(
            (self.root / 'again' / 'bigearthnet-cot-6m.json').read_bytes(),
            (out_dir / 'bigearthnet-cot-6m.json').read_bytes(),
        )

        self.call('report', '--digest', run.config_digest[:8])
        with self.assertRaises(CommandError):
            self.call('report')
        with self.assertRaises(CommandError):
            self.call('report', '--ablation', 'nothing')

    def test_run_with_bad_config(self):
        self.config_path.write_text(yaml.safe_dump({'dataset': {'adapter': 'bigearthnet'}}))
        with self.assertRaises(CommandError):
            self.call('run', str(self.config_path), '--backend', 'echo')

    def test_ablate(self):
        matrix = self.root / 'ben' / 'matrix.yaml'
        matrix.write_text(yaml.safe_dump({
            'name': 'mini',
            'base': 'run.yaml',
            'rows': [{'strategy': 'baseline', 'modalities': ['rgb']}, {'strategy': 'cot', 'modalities': ['rgb', 'ndvi']}],
        }))
        out_dir = self.root / 'ablation'
        output = self.call('ablate', str(matrix), '--backend', 'echo', '--output-dir', str(out_dir))
        self.assertIn('RGB + NDVI', output)
        self.assertTrue((out_dir / 'mini-comparison.txt').exists())
        self.assertEqual(EvalRun.objects.filter(ablation='mini').count(), 2)

    def test_prompt(self):
        output = self.call('prompt', str(self.manifest), '--vocabulary', 'bigearthnet19', '--strategy', 'cot', '--modalities', 'rgb,ndvi')
        self.assertIn('You MUST cite which image(s)', output)
        self.assertIn('Image 2 - NDVI', output)
        self.assertNotIn('Image 3', output)

        target = self.root / 'prompt.txt'
        self.call('prompt', str(self.manifest), '--vocabulary', 'eurosat', '--no-band-catalog', '--out', str(target))
        self.assertNotIn('704.1nm', target.read_text())

    def test_render(self):
        output = self.call('render', str(self.manifest), '--out', str(self.root / 'png'), '--modalities', 'rgb,ndmi2')
        self.assertEqual(len(output.split()), 2)
        self.assertTrue((self.root / 'png' / 'S0000_ndmi2.png').exists())
        with self.assertRaises(CommandError):
            self.call('render', str(self.root / 'missing.json'), '--out', str(self.root / 'png'))


class RunApiTests(DatasetMixin, APITestCase):
    def setUp(self):
        super().setUp()
        self.user = get_user_model().objects.create_user(username='analyst', password='s3cret-pass')
        self.report = run_eval(self.config(backend={'kind': 'replay', 'fixture_dir': str(self.root / 'none')}))
        run_eval(self.config(adapter='eurosat'))

    def test_requires_authentication(self):
        response = self.client.get(reverse('run-list'))
        self.assertEqual(response.status_code, status.HTTP_401_UNAUTHORIZED)

    def test_jwt_login_and_list(self):
        response = self.client.post(reverse('token-obtain-pair'), {'username': 'analyst', 'password': 's3cret-pass'})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.client.credentials(HTTP_AUTHORIZATION=f"Bearer {response.data['access']}")

        response = self.client.get(reverse('run-list'))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['count'], 2)
        self.assertNotIn('report', response.data['results'][0])

        response = self.client.get(reverse('run-list'), {'dataset': 'eurosat'})
        self.assertEqual(response.data['count'], 1)
        self.assertEqual(response.data['results'][0]['aggregate'], {'accuracy': 1.0})

    def test_detail_and_samples(self):
        self.client.force_authenticate(self.user)
        response = self.client.get(reverse('run-retrieve', args=[self.report.run_id]))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['sample_count'], 10)
        self.assertEqual(response.data['report']['run_config_digest'], self.report.run_config_digest)

        url = reverse('run-samples-list', args=[self.report.run_id])
        response = self.client.get(url, {'failed': 'true'})
        self.assertEqual(response.data['count'], 10)
        self.assertEqual(response.data['results'][0]['parse_mode'], 'Empty')
        response = self.client.get(url, {'failed': 'false'})
        self.assertEqual(response.data['count'], 0)

    def test_soft_deleted_runs_are_hidden(self):
        self.client.force_authenticate(self.user)
        EvalRun.objects.get(pk=self.report.run_id).delete()
        response = self.client.get(reverse('run-retrieve', args=[self.report.run_id]))
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)
        self.assertEqual(self.client.get(reverse('run-list')).data['count'], 1)
