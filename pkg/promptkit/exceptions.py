# Local imports
from utils.exceptions import SpectralBenchError


class PromptError(SpectralBenchError):
    reason = 'prompt_error'


class EmptyVocabulary(PromptError):
    reason = 'empty_vocabulary'


class NoImages(PromptError):
    reason = 'no_images'


class MissingDefinition(PromptError):
    reason = 'missing_definition'

    def __init__(self, class_name):
        super().__init__(f"Class {class_name!r} has no expanded definition", class_name=class_name)
        self.class_name = class_name


class UnboundPlaceholder(PromptError):
    reason = 'unbound_placeholder'


class VocabularyError(PromptError):
    reason = 'malformed_vocabulary'
