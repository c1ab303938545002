# Python imports
from typing import Mapping, Sequence

# Local imports
from .base import Backend
from .messages import ModelRequest, ModelResponse


def answer_line(labels) -> str:
    return 'ANSWER: ' + '; '.join(labels)


class EchoBackend(Backend):
    """Replies with the labels registered for the request tag, on an ANSWER line."""

    def __init__(self, answers: Mapping[str, Sequence[str]]):
        super().__init__()
        self.answers = dict(answers)

    @property
    def identity(self):
        return 'echo'

    def send(self, request: ModelRequest) -> ModelResponse:
        self.stats.incr('requests')
        labels = self.answers.get(request.tag, ())
        return ModelResponse(text=answer_line(labels))


class StaticBackend(Backend):
    """Replies with the same text to every request."""

    def __init__(self, text=''):
        super().__init__()
        self.text = text

    @property
    def identity(self):
        return 'static'

    def send(self, request: ModelRequest) -> ModelResponse:
        self.stats.incr('requests')
        return ModelResponse(text=self.text)
