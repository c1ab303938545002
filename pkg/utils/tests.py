# Django imports
from django.test import SimpleTestCase, override_settings

# Python imports
import tempfile
from pathlib import Path

# Local imports
from .conf import bench_setting
from .exceptions import SpectralBenchError
from .files import atomic_write_bytes, atomic_write_text
from .hashing import canonical_json, digest_payload, sha256_hex


class HashingTests(SimpleTestCase):
    def test_canonical_json_sorts_keys(self):
        self.assertEqual(canonical_json({'b': 1, 'a': [1, 2]}), '{"a":[1,2],"b":1}')

    def test_digest_ignores_key_order(self):
        self.assertEqual(digest_payload({'a': 1, 'b': 2}), digest_payload({'b': 2, 'a': 1}))
        self.assertNotEqual(digest_payload({'a': 1}), digest_payload({'a': 2}))

    def test_chunks_are_length_prefixed(self):
        self.assertNotEqual(sha256_hex(b'ab', b'c'), sha256_hex(b'a', b'bc'))
        self.assertNotEqual(sha256_hex(b'abc'), sha256_hex(b'abc', b''))
        self.assertEqual(len(sha256_hex(b'x')), 64)


class AtomicWriteTests(SimpleTestCase):
    def test_creates_parents_and_replaces(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'a' / 'b' / 'out.txt'
            atomic_write_text(path, 'first')
            atomic_write_text(path, 'second')
            self.assertEqual(path.read_text(), 'second')
            self.assertEqual(sorted(p.name for p in path.parent.iterdir()), ['out.txt'])

    def test_failure_leaves_no_temp_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / 'taken'
            target.mkdir()
            with self.assertRaises(OSError):
                atomic_write_bytes(target, b'data')
            self.assertEqual(sorted(p.name for p in Path(tmp).iterdir()), ['taken'])


class SettingsTests(SimpleTestCase):
    @override_settings(SPECTRAL_BENCH={'WORKERS': 7})
    def test_bench_setting(self):
        self.assertEqual(bench_setting('WORKERS'), 7)
        self.assertEqual(bench_setting('SEED', 3), 3)

    def test_error_context(self):
        error = SpectralBenchError('boom', path='/x')
        self.assertEqual(error.reason, 'error')
        self.assertEqual(error.context, {'path': '/x'})
        self.assertEqual(str(error), 'boom')
