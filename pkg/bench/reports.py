# Django imports
from django.utils.text import slugify

# Python imports
import csv
import io
import json
from pathlib import Path
from logging import getLogger

# Local imports
from backend.exceptions import StorageError
from utils.files import atomic_write_text
from .exceptions import BenchError

# Constants
logger = getLogger(__name__)

SUMMARY_COLUMNS = (
    'name', 'run_config_digest', 'dataset', 'task_kind', 'strategy', 'modalities', 'n_samples',
    'f1', 'precision', 'recall', 'micro_f1', 'micro_precision', 'micro_recall', 'accuracy',
    'parse_answer_line', 'parse_full_scan', 'parse_empty', 'errors', 'backend', 'backend_stats',
)


def fmt(value):
    return '' if value is None else f'{value:.3f}'


def to_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def summary_row(report):
    aggregate = report.aggregate
    micro = report.aggregates.get('micro', {})
    modes = report.counts['parse_modes']
    stats = report.backend.get('stats', {})
    return {
        'name': report.name,
        'run_config_digest': report.run_config_digest,
        'dataset': report.dataset,
        'task_kind': report.task_kind,
        'strategy': report.strategy,
        'modalities': ' '.join(report.modalities),
        'n_samples': report.n_samples,
        'f1': fmt(aggregate.get('f1')),
        'precision': fmt(aggregate.get('precision')),
        'recall': fmt(aggregate.get('recall')),
        'micro_f1': fmt(micro.get('f1')),
        'micro_precision': fmt(micro.get('precision')),
        'micro_recall': fmt(micro.get('recall')),
        'accuracy': fmt(aggregate.get('accuracy')),
        'parse_answer_line': modes.get('AnswerLine', 0),
        'parse_full_scan': modes.get('FullScan', 0),
        'parse_empty': modes.get('Empty', 0),
        'errors': report.counts['errors'],
        'backend': report.backend.get('identity', ''),
        'backend_stats': ' '.join(f'{name}={value}' for name, value in sorted(stats.items())),
    }


def to_csv(reports) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=SUMMARY_COLUMNS, lineterminator='\n')
    writer.writeheader()
    for report in reports:
        writer.writerow(summary_row(report))
    return buffer.getvalue()


def to_table(reports, title='') -> str:
    """Fixed-width plain-text table, one line per report."""
    multi_label = all(report.is_multi_label for report in reports)
    if multi_label:
        header = ('Strategy', 'Modalities', 'F1', 'Precision', 'Recall', 'Micro F1', 'N')
        rows = [
            (
                report.strategy,
                ' + '.join(report.modalities),
                fmt(report.aggregate.get('f1')),
                fmt(report.aggregate.get('precision')),
                fmt(report.aggregate.get('recall')),
                fmt(report.aggregates.get('micro', {}).get('f1')),
                str(report.n_samples),
            )
            for report in reports
        ]
    else:
        header = ('Strategy', 'Modalities', 'Accuracy (%)', 'N')
        rows = [
            (
                report.strategy,
                ' + '.join(report.modalities),
                '' if 'accuracy' not in report.aggregate else f"{100 * report.aggregate['accuracy']:.1f}",
                str(report.n_samples),
            )
            for report in reports
        ]

    widths = [max(len(str(cell)) for cell in column) for column in zip(header, *rows)]
    lines = [title] if title else []
    lines.append('  '.join(cell.ljust(width) for cell, width in zip(header, widths)).rstrip())
    lines.append('  '.join('-' * width for width in widths))
    for row in rows:
        lines.append('  '.join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
    return '\n'.join(lines) + '\n'


def comparison_text(table, title='') -> str:
    """Render an ablation comparison table (dicts of pre-formatted cells)."""
    if not table:
        return (title + '\n' if title else '') + '(no completed rows)\n'
    header = list(table[0])
    rows = [[str(entry.get(column, '')) for column in header] for entry in table]
    labels = [column.replace('_', ' ').title() if column not in ('f1',) else 'F1' for column in header]
    widths = [max(len(cell) for cell in column) for column in zip(labels, *rows)]
    lines = [title] if title else []
    lines.append('  '.join(cell.ljust(width) for cell, width in zip(labels, widths)).rstrip())
    lines.append('  '.join('-' * width for width in widths))
    for row in rows:
        lines.append('  '.join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
    return '\n'.join(lines) + '\n'


def write_files(directory, stem, contents):
    directory = Path(directory)
    paths = []
    for suffix, text in contents:
        path = directory / f'{stem}.{suffix}'
        try:
            atomic_write_text(path, text)
        except OSError as e:
            raise StorageError(f"Cannot write report {path}: {e}", path=str(path)) from e
        paths.append(path)
    logger.info(f"Wrote {', '.join(str(path) for path in paths)}")
    return paths


def report_stem(report):
    return slugify(report.name) or report.run_config_digest[:12]


def emit_report(reports, directory, stem=None):
    """
    Write JSON, CSV and text renderings of each report, plus a combined
    set under ``stem`` when several reports are given. Unchanged reports
    produce byte-identical files.
    """
    reports = list(reports)
    if not reports:
        raise BenchError('No reports to emit')

    paths = []
    for report in reports:
        paths += write_files(directory, report_stem(report), [
            ('json', to_json(report.to_dict())),
            ('csv', to_csv([report])),
            ('txt', to_table([report], title=report.name)),
        ])
    if len(reports) > 1:
        stem = stem or 'summary'
        paths += write_files(directory, slugify(stem), [
            ('json', to_json([report.to_dict() for report in reports])),
            ('csv', to_csv(reports)),
            ('txt', to_table(reports, title=stem)),
        ])
    return paths


def emit_ablation(result, directory):
    """Per-row reports plus the matrix comparison table and failures."""
    paths = emit_report(result.reports, directory, stem=result.matrix.name) if result.reports else []
    payload = {
        'matrix': result.matrix.name,
        'rows': list(result.table),
        'failures': [{'row': name, 'reason': reason} for name, reason in result.failures],
    }
    text = comparison_text(result.table, title=result.matrix.name)
    if result.failures:
        text += '\nFailed rows:\n' + ''.join(f'  {name}: {reason}\n' for name, reason in result.failures)
    paths += write_files(directory, f'{slugify(result.matrix.name)}-comparison', [
        ('json', to_json(payload)),
        ('txt', text),
    ])
    return paths
