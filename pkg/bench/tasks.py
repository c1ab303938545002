from celery import shared_task
import logging

from utils.exceptions import SpectralBenchError
from .ablation import AblationMatrix, run_ablation
from .config import RunConfig
from .models import EvalRun
from .reports import emit_ablation, emit_report
from .runner import run_eval

logger = logging.getLogger(__name__)


@shared_task(bind=True, max_retries=3, default_retry_delay=60)
def run_eval_task(self, config_payload, run_id=None, emit=True):
    """Evaluate a serialized RunConfig; ``run_id`` points at a pending EvalRun."""
    run = EvalRun.objects.filter(pk=run_id).first() if run_id else None
    try:
        config = RunConfig.from_dict(config_payload)
        report = run_eval(config, run=run)
        if emit and config.output_dir:
            emit_report([report], config.output_dir)
        logger.info(f"Task completed: run {report.run_id} {report.aggregate}")
        return {'success': True, 'run_id': report.run_id, 'run_config_digest': report.run_config_digest}
    except SpectralBenchError as exc:
        logger.warning(f"Task failed: {exc.reason}: {exc}")
        return {'success': False, 'reason': exc.reason, 'detail': str(exc)}
    except Exception as exc:
        logger.error(f"Task error: {exc}", exc_info=True)
        raise self.retry(exc=exc)


@shared_task(bind=True, max_retries=3, default_retry_delay=60)
def run_ablation_task(self, matrix_path, overrides=None, output_dir=None):
    try:
        matrix = AblationMatrix.from_file(matrix_path, overrides=overrides)
        result = run_ablation(matrix)
        if output_dir:
            emit_ablation(result, output_dir)
        logger.info(f"Task completed: ablation {matrix.name}, {len(result.reports)} rows")
        return {
            'success': not result.failures,
            'run_ids': [report.run_id for report in result.reports],
            'failures': [list(failure) for failure in result.failures],
        }
    except SpectralBenchError as exc:
        logger.warning(f"Task failed: {exc.reason}: {exc}")
        return {'success': False, 'reason': exc.reason, 'detail': str(exc)}
    except Exception as exc:
        logger.error(f"Task error: {exc}", exc_info=True)
        raise self.retry(exc=exc)
