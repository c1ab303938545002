# Python imports
import hashlib
import json


def canonical_json(payload) -> str:
    """Serialize with sorted keys and no insignificant whitespace."""
    return json.dumps(payload, sort_keys=True, separators=(',', ':'), ensure_ascii=False)


def sha256_hex(*chunks: bytes) -> str:
    """
    Digest of the given chunks, each prefixed with its length so that
    moving bytes from one chunk to the next changes the digest.
    """
    digest = hashlib.sha256()
    for chunk in chunks:
        digest.update(len(chunk).to_bytes(8, 'big'))
        digest.update(chunk)
    return digest.hexdigest()


def digest_payload(payload) -> str:
    return sha256_hex(canonical_json(payload).encode('utf-8'))
