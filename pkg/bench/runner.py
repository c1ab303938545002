# Django imports
from django.db import transaction

# Python imports
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple
from logging import getLogger

# Local imports
from backend.base import Backend, BackendStats, metering
from backend.exceptions import BackendError, StorageError
from backend.factory import build_backend
from backend.messages import ModelRequest
from metrics.scores import AveragingMode, aggregate_multilabel, per_class_counts, sample_prf, top1_accuracy
from parse.parser import ParseMode, ParseOutcome, parse_response, top1_label
from promptkit.builders import PromptVariant, build_prompt
from promptkit.vocabulary import ClassVocabulary
from raster.exceptions import RasterError
from raster.grid import align_to_common_grid
from raster.io import load_scene
from spectral.exceptions import SpectralError
from spectral.render import RenderConfig, render_all
from .adapters import Sample, get_adapter, select_subset
from .config import RunConfig
from .exceptions import DatasetError
from .models import EvalRun, SampleRecord

# Constants
logger = getLogger(__name__)


@dataclass(frozen=True)
class SampleResult:
    sample_id: str
    truth: Tuple[str, ...]
    prediction: Tuple[str, ...]
    parse_mode: ParseMode
    unmatched: Tuple[str, ...] = ()
    score: object = None
    correct: Optional[bool] = None
    prompt_text: str = ''
    response_text: str = ''
    n_images: int = 0
    cache_key: str = ''
    error: str = ''

    def to_dict(self):
        entry = {
            'sample_id': self.sample_id,
            'prediction': list(self.prediction),
            'truth': list(self.truth),
            'parse_mode': self.parse_mode.value,
            'unmatched': list(self.unmatched),
            'n_images': self.n_images,
        }
        if self.score is not None:
            entry['score'] = self.score.to_dict()
        if self.correct is not None:
            entry['correct'] = self.correct
        if self.error:
            entry['error'] = self.error
        return entry


@dataclass(frozen=True)
class EvalReport:
    name: str
    run_config_digest: str
    dataset: str
    task_kind: str
    strategy: str
    modalities: Tuple[str, ...]
    n_samples: int
    aggregate: dict
    aggregates: dict
    per_sample: Tuple[SampleResult, ...]
    counts: dict
    per_class: dict
    backend: dict
    config: dict
    run_id: Optional[int] = field(default=None, compare=False)

    @property
    def is_multi_label(self):
        return self.task_kind == 'multi-label'

    def to_dict(self):
        return {
            'name': self.name,
            'run_config_digest': self.run_config_digest,
            'dataset': self.dataset,
            'task_kind': self.task_kind,
            'strategy': self.strategy,
            'modalities': list(self.modalities),
            'n_samples': self.n_samples,
            'aggregate': self.aggregate,
            'aggregates': self.aggregates,
            'counts': self.counts,
            'per_class': self.per_class,
            'backend': self.backend,
            'config': self.config,
            'per_sample': [result.to_dict() for result in self.per_sample],
        }


def score_outcome(sample: Sample, outcome: ParseOutcome, vocabulary: ClassVocabulary, **artifacts) -> SampleResult:
    """Turn a parse outcome into a scored result; multi-class keeps only the first label."""
    if vocabulary.is_multi_label:
        prediction = outcome.labels
        return SampleResult(
            sample_id=sample.sample_id,
            truth=sample.labels,
            prediction=prediction,
            parse_mode=outcome.parse_mode,
            unmatched=outcome.label_set.unmatched,
            score=sample_prf(prediction, sample.labels),
            **artifacts,
        )

    predicted = top1_label(outcome)
    return SampleResult(
        sample_id=sample.sample_id,
        truth=sample.labels,
        prediction=(predicted,) if predicted else (),
        parse_mode=outcome.parse_mode,
        unmatched=outcome.label_set.unmatched,
        correct=predicted is not None and predicted == sample.labels[0],
        **artifacts,
    )


def evaluate_sample(sample: Sample, config: RunConfig, vocabulary: ClassVocabulary, backend: Backend) -> SampleResult:
    """
    Load, align, render, prompt, send and parse one sample. Scene and
    backend failures are recorded as an empty answer with an error note.
    """
    artifacts = {'prompt_text': '', 'n_images': 0, 'cache_key': ''}
    try:
        scene = align_to_common_grid(load_scene(sample.manifest_path), target=config.target_resolution)
        images = render_all(scene, config.modalities, RenderConfig(normalization=config.normalization))
        bundle = build_prompt(images, vocabulary, config.strategy)
        request = ModelRequest(
            model_id=config.backend.model_id,
            instruction_text=bundle.instruction_text,
            images=bundle.image_payloads(),
            generation_params=config.backend.generation_params,
            tag=sample.sample_id,
        )
        artifacts.update(prompt_text=request.instruction_text, n_images=len(request.images), cache_key=request.cache_key)
        response_text = backend.send(request).text
        error = ''
    except StorageError as e:
        if getattr(e, 'response', None) is None:
            return failed_result(sample, vocabulary, e, artifacts)
        logger.warning(f"{sample.sample_id}: answer kept but not recorded: {e}")
        response_text, error = e.response.text, f'{e.reason}: {e}'
    except (RasterError, SpectralError, BackendError) as e:
        return failed_result(sample, vocabulary, e, artifacts)

    outcome = parse_response(response_text, vocabulary, config.strategy.variant)
    return score_outcome(sample, outcome, vocabulary, response_text=response_text, error=error, **artifacts)


def failed_result(sample, vocabulary, exc, artifacts):
    logger.warning(f"{sample.sample_id} failed ({exc.reason}): {exc}")
    outcome = parse_response('', vocabulary)
    return score_outcome(sample, outcome, vocabulary, error=f'{exc.reason}: {exc}', **artifacts)


def build_report(config: RunConfig, vocabulary: ClassVocabulary, results, backend_info) -> EvalReport:
    results = tuple(sorted(results, key=lambda result: result.sample_id))
    if vocabulary.is_multi_label:
        scores = [result.score for result in results]
        aggregates = {mode.value: aggregate_multilabel(scores, mode).to_dict() for mode in AveragingMode}
        aggregate = aggregates[AveragingMode(config.averaging).value]
    else:
        accuracy = top1_accuracy(
            (result.prediction[0] if result.prediction else None, result.truth[0]) for result in results
        )
        aggregates = {}
        aggregate = {'accuracy': accuracy}

    parse_modes = Counter(result.parse_mode.value for result in results)
    unmatched = Counter(token for result in results for token in result.unmatched)
    images = Counter(result.n_images for result in results)
    counts = {
        'parse_modes': {mode.value: parse_modes[mode.value] for mode in ParseMode},
        'unmatched_tokens': dict(sorted(unmatched.items())),
        'errors': sum(1 for result in results if result.error),
        'images_per_request': {str(n): images[n] for n in sorted(images)},
    }

    return EvalReport(
        name=config.name,
        run_config_digest=config.digest,
        dataset=config.dataset.adapter,
        task_kind=vocabulary.task_kind.value,
        strategy=config.strategy.label,
        modalities=tuple(kind.value for kind in config.modalities),
        n_samples=len(results),
        aggregate=aggregate,
        aggregates=aggregates,
        per_sample=results,
        counts=counts,
        per_class=per_class_counts(((r.prediction, r.truth) for r in results), vocabulary.names),
        backend=backend_info,
        config=config.identity_dict(),
    )


def load_samples(config: RunConfig):
    dataset = config.dataset
    adapter = get_adapter(
        dataset.adapter,
        dataset.index,
        vocabulary=dataset.vocabulary,
        aliases=dataset.aliases,
        label_mapping=dataset.label_mapping,
    )
    samples = select_subset(adapter.samples(), limit=config.sample_limit, seed=config.seed)
    if not samples:
        raise DatasetError(f"{dataset.index} has no usable samples", path=str(dataset.index))
    return adapter, samples


def check_strategy(config: RunConfig, vocabulary: ClassVocabulary):
    vocabulary.require_non_empty()
    strategy = config.strategy
    if strategy.variant == PromptVariant.EXPANSION:
        vocabulary.require_definitions()


@transaction.atomic
def save_run(config: RunConfig, report: EvalReport, run: EvalRun = None, ablation=''):
    run = run or EvalRun(name=config.name)
    run.name = config.name
    run.status = EvalRun.STATUS_DONE
    run.config = config.to_dict()
    run.config_digest = report.run_config_digest
    run.dataset = report.dataset
    run.task_kind = report.task_kind
    run.strategy = report.strategy
    run.modalities = list(report.modalities)
    run.ablation = ablation or run.ablation
    run.backend_identity = report.backend.get('identity', '')
    run.n_samples = report.n_samples
    run.aggregate = report.aggregate
    run.report = report.to_dict()
    run.error = ''
    run.save()

    run.samples.all().delete()
    SampleRecord.objects.bulk_create([
        SampleRecord(
            run=run,
            sample_id=result.sample_id,
            prompt_text=result.prompt_text,
            response_text=result.response_text,
            parse_mode=result.parse_mode.value,
            prediction=list(result.prediction),
            truth=list(result.truth),
            unmatched=list(result.unmatched),
            precision=result.score.precision if result.score else None,
            recall=result.score.recall if result.score else None,
            f1=result.score.f1 if result.score else None,
            correct=result.correct,
            n_images=result.n_images,
            cache_key=result.cache_key,
            error=result.error,
        )
        for result in report.per_sample
    ])
    return run


def mark_failed(run: EvalRun, exc):
    if run is None:
        return
    run.status = EvalRun.STATUS_FAILED
    run.error = f'{getattr(exc, "reason", "error")}: {exc}'
    run.save(update_fields=['status', 'error', 'updated_at'])


def run_eval(config: RunConfig, backend: Backend = None, persist=True, run: EvalRun = None, ablation='') -> EvalReport:
    """
    Evaluate ``config`` end to end. Samples run on a pool of ``config.workers``
    threads; results are ordered by sample id and written from this thread.
    """
    if run is not None:
        run.status = EvalRun.STATUS_RUNNING
        run.save(update_fields=['status', 'updated_at'])

    owns_backend = backend is None
    try:
        adapter, samples = load_samples(config)
        vocabulary = adapter.vocabulary
        check_strategy(config, vocabulary)
        if owns_backend:
            answers = {sample.sample_id: sample.labels for sample in samples}
            backend = build_backend(config.backend, answers=answers)

        logger.info(f"Running {config.name}: {len(samples)} samples, {config.strategy.label}, backend {backend.identity}")
        usage = BackendStats()

        def evaluate(sample):
            with metering(usage):
                return evaluate_sample(sample, config, vocabulary, backend)

        with ThreadPoolExecutor(max_workers=config.workers, thread_name_prefix='bench') as pool:
            results = list(pool.map(evaluate, samples))
        backend_info = {'identity': backend.identity, 'stats': usage.snapshot()}
        report = build_report(config, vocabulary, results, backend_info)
    except Exception as e:
        mark_failed(run, e)
        raise
    finally:
        if owns_backend and backend is not None:
            backend.close()

    logger.info(f"{config.name} finished: {report.aggregate}, parse modes {report.counts['parse_modes']}")
    if persist:
        run = save_run(config, report, run=run, ablation=ablation)
        report = replace(report, run_id=run.pk)
    return report


def report_from_run(run: EvalRun, reparse=False) -> EvalReport:
    """
    Rebuild the report of a stored run from its sample records. With
    ``reparse`` the stored responses are parsed and scored again.
    """
    config = RunConfig.from_dict(run.config)
    adapter = get_adapter(
        config.dataset.adapter,
        config.dataset.index,
        vocabulary=config.dataset.vocabulary,
        aliases=config.dataset.aliases,
        label_mapping=config.dataset.label_mapping,
    )
    vocabulary = adapter.vocabulary
    results = []
    for record in run.samples.order_by('sample_id'):
        sample = Sample(sample_id=record.sample_id, manifest_path=None, labels=tuple(record.truth))
        artifacts = {
            'prompt_text': record.prompt_text,
            'response_text': record.response_text,
            'n_images': record.n_images,
            'cache_key': record.cache_key,
            'error': record.error,
        }
        if reparse and not record.error:
            outcome = parse_response(record.response_text, vocabulary, config.strategy.variant)
            results.append(score_outcome(sample, outcome, vocabulary, **artifacts))
            continue
        results.append(stored_result(record, sample, vocabulary, artifacts))

    backend_info = run.report.get('backend', {'identity': run.backend_identity, 'stats': {}})
    report = build_report(config, vocabulary, results, backend_info)
    return replace(report, run_id=run.pk)


def stored_result(record: SampleRecord, sample: Sample, vocabulary: ClassVocabulary, artifacts):
    score = None
    if vocabulary.is_multi_label:
        score = sample_prf(tuple(record.prediction), sample.labels)
    return SampleResult(
        sample_id=record.sample_id,
        truth=sample.labels,
        prediction=tuple(record.prediction),
        parse_mode=ParseMode(record.parse_mode),
        unmatched=tuple(record.unmatched),
        score=score,
        correct=record.correct,
        **artifacts,
    )
