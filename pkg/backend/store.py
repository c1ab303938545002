# Python imports
import hashlib
import json
from pathlib import Path
from logging import getLogger

# Local imports
from utils.files import atomic_write_text
from .exceptions import StorageError
from .messages import ModelRequest

# Constants
logger = getLogger(__name__)


def request_summary(request: ModelRequest) -> dict:
    return {
        'model_id': request.model_id,
        'generation_params': request.generation_params.to_dict(),
        'instruction_text': request.instruction_text,
        'image_sha256': [hashlib.sha256(image).hexdigest() for image in request.images],
        'tag': request.tag,
    }


class FixtureStore:
    """
    Content-addressed JSON records, one file per cache key under
    ``<root>/<key[:2]>/<key>.json``. Writes are atomic renames, so readers
    never observe a partial record.
    """

    def __init__(self, root):
        self.root = Path(root)

    def path_for(self, key) -> Path:
        return self.root / key[:2] / f'{key}.json'

    def get(self, key):
        path = self.path_for(key)
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text(encoding='utf-8'))
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
            raise StorageError(f"Unreadable fixture {path}: {e}", key=key) from e

    def put(self, key, request: ModelRequest, text: str):
        record = {'key': key, 'request': request_summary(request), 'response': {'text': text}}
        try:
            atomic_write_text(self.path_for(key), json.dumps(record, indent=2, sort_keys=True, ensure_ascii=False))
        except OSError as e:
            raise StorageError(f"Could not write fixture {self.path_for(key)}: {e}", key=key) from e

    def keys(self):
        if not self.root.exists():
            return []
        return sorted(path.stem for path in self.root.glob('*/*.json'))

    def __contains__(self, key):
        return self.path_for(key).exists()
