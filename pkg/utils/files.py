# Python imports
import os
import tempfile
from pathlib import Path
from logging import getLogger

logger = getLogger(__name__)


def atomic_write_bytes(path, data: bytes):
    """Write to a sibling temp file, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f'.{path.name}.', dir=path.parent)
    try:
        with os.fdopen(fd, 'wb') as f:
            f.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.remove(tmp_name)
        except OSError as e:
            logger.error(f"Cleanup failed: {e}")
        raise


def atomic_write_text(path, text: str):
    atomic_write_bytes(path, text.encode('utf-8'))
