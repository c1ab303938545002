# Python imports
import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

# Local imports
from promptkit.builders import PromptVariant
from promptkit.vocabulary import ClassVocabulary, normalize_name

ANSWER_LINE = re.compile(r'^[\s>*_#`-]*answer[*_`]*\s*:(?P<rest>.*)$', re.IGNORECASE | re.MULTILINE)
CONCLUDE_MARKER = re.compile(r'conclude', re.IGNORECASE)
TOKEN_EDGE = ' \t*_`"\'.,:!()[]'


class ParseMode(str, Enum):
    ANSWER_LINE = 'AnswerLine'
    FULL_SCAN = 'FullScan'
    EMPTY = 'Empty'


@dataclass(frozen=True)
class LabelSet:
    """Matched class names in order of appearance, plus answer tokens that matched nothing."""

    labels: Tuple[str, ...] = ()
    unmatched: Tuple[str, ...] = ()

    def __contains__(self, name):
        return name in self.labels

    def __len__(self):
        return len(self.labels)

    def as_set(self):
        return frozenset(self.labels)


@dataclass(frozen=True)
class ParseOutcome:
    label_set: LabelSet
    parse_mode: ParseMode

    @property
    def labels(self):
        return self.label_set.labels


def _unique(items):
    return tuple(dict.fromkeys(items))


def parse_answer_tokens(remainder, vocabulary: ClassVocabulary) -> LabelSet:
    forms = vocabulary.surface_forms()
    labels, unmatched = [], []
    for raw in remainder.split(';'):
        token = raw.strip().strip(TOKEN_EDGE)
        if not token:
            continue
        canonical = forms.get(normalize_name(token))
        if canonical is None:
            unmatched.append(raw.strip())
        else:
            labels.append(canonical)
    return LabelSet(labels=_unique(labels), unmatched=tuple(unmatched))


def scan_text(text, vocabulary: ClassVocabulary) -> LabelSet:
    """
    Find vocabulary names (and aliases) anywhere in ``text``, longest first.
    A matched span is blanked out so shorter names inside it cannot match.
    """
    haystack = normalize_name(text)
    forms = vocabulary.surface_forms()
    found = []
    for form in sorted(forms, key=lambda item: (-len(item), item)):
        pattern = re.compile(r'(?<!\w)' + re.escape(form) + r'(?!\w)')
        for match in pattern.finditer(haystack):
            found.append((match.start(), forms[form]))
        haystack = pattern.sub(lambda m: '\0' * len(m.group(0)), haystack)
    found.sort()
    return LabelSet(labels=_unique(name for _, name in found))


def parse_response(text, vocabulary: ClassVocabulary, variant=None) -> ParseOutcome:
    """
    Use the last ``ANSWER:`` line when present; otherwise scan the text
    (only the part after the last "Conclude" marker for CoT responses).
    """
    vocabulary.require_non_empty()
    text = text or ''
    if not text.strip():
        return ParseOutcome(label_set=LabelSet(), parse_mode=ParseMode.EMPTY)

    answers = list(ANSWER_LINE.finditer(text))
    if answers:
        return ParseOutcome(
            label_set=parse_answer_tokens(answers[-1].group('rest'), vocabulary),
            parse_mode=ParseMode.ANSWER_LINE,
        )

    region = text
    if variant is not None and PromptVariant(variant) == PromptVariant.COT:
        markers = list(CONCLUDE_MARKER.finditer(text))
        if markers:
            region = text[markers[-1].end():]
    return ParseOutcome(label_set=scan_text(region, vocabulary), parse_mode=ParseMode.FULL_SCAN)


def top1_label(outcome: ParseOutcome) -> Optional[str]:
    """Multi-class tie-break: the first parsed label, or None."""
    return outcome.labels[0] if outcome.labels else None
