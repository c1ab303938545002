# Python imports
import re
from functools import lru_cache
from pathlib import Path

# Django imports
from django.template import Context, Engine, TemplateDoesNotExist

# Local imports
from utils.conf import bench_setting
from .exceptions import PromptError, UnboundPlaceholder

# Constants
BUILTIN_TEMPLATE_DIR = Path(__file__).resolve().parent / 'templates'
PLACEHOLDER = re.compile(r'\{\{\s*([A-Za-z_][A-Za-z0-9_]*)')
INVALID_MARKER = '<<unbound:%s>>'


@lru_cache(maxsize=8)
def get_engine(extra_dirs=()):
    return Engine(
        dirs=[*extra_dirs, str(BUILTIN_TEMPLATE_DIR)],
        autoescape=False,
        string_if_invalid=INVALID_MARKER,
    )


def template_dirs():
    return tuple(str(path) for path in bench_setting('PROMPT_TEMPLATE_DIRS', ()) or ())


def placeholders(source) -> set:
    return set(PLACEHOLDER.findall(source))


def render_block(name, **context) -> str:
    """
    Render ``promptkit/<name>.txt``. Every placeholder in the template must
    be bound by ``context``.
    """
    try:
        template = get_engine(template_dirs()).get_template(f'promptkit/{name}.txt')
    except TemplateDoesNotExist as e:
        raise PromptError(f"Prompt template not found: {name}") from e

    unbound = placeholders(template.source) - set(context)
    if unbound:
        raise UnboundPlaceholder(f"Template {name} has unbound placeholders: {sorted(unbound)}", template=name)

    text = template.render(Context(context, autoescape=False))
    if '<<unbound:' in text:
        raise UnboundPlaceholder(f"Template {name} rendered an unresolved variable", template=name)
    return text.strip()
