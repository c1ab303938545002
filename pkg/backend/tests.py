# Django imports
from django.test import SimpleTestCase, override_settings

# Python imports
import json
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

# Third party imports
import httpx
import numpy as np

# Local imports
from .base import Backend
from .exceptions import AuthError, BackendError, InvalidRequest, ReplayMiss, StorageError, TransportError
from .factory import BackendSpec, build_backend
from .http import GenericMultimodalAdapter, HttpBackend
from .limiter import RateLimiter
from .messages import GenerationParams, ModelRequest, ModelResponse
from .mocks import EchoBackend, StaticBackend
from .store import FixtureStore
from .wrappers import LOCK_STRIPES, CachingBackend, RecordingBackend, ReplayBackend, record


def make_request(text='Classify the scene.', images=(b'\x89PNG-one', b'\x89PNG-two'), tag='S0001', **params):
    return ModelRequest(
        model_id='test-model',
        instruction_text=text,
        images=images,
        generation_params=GenerationParams(**params),
        tag=tag,
    )


class CountingBackend(Backend):
    def __init__(self, text='ANSWER: Forest'):
        super().__init__()
        self.text = text
        self.calls = 0
        self._lock = threading.Lock()

    @property
    def identity(self):
        return 'counting'

    def send(self, request):
        with self._lock:
            self.calls += 1
        return ModelResponse(text=self.text)


def http_backend(handler, **kwargs):
    kwargs.setdefault('max_attempts', 3)
    return HttpBackend(
        endpoint_url='https://vlm.test/v1/generate',
        model_id='test-model',
        backoff=0,
        transport=httpx.MockTransport(handler),
        **kwargs,
    )


class CacheKeyTests(SimpleTestCase):
    def test_tag_is_not_part_of_the_key(self):
        self.assertEqual(make_request(tag='a').cache_key, make_request(tag='b').cache_key)

    def test_every_field_changes_the_key(self):
        base = make_request().cache_key
        self.assertNotEqual(base, make_request(text='Classify the scene!').cache_key)
        self.assertNotEqual(base, make_request(temperature=0.5).cache_key)
        self.assertNotEqual(base, make_request(max_output_tokens=100).cache_key)
        self.assertNotEqual(base, make_request(images=(b'\x89PNG-two', b'\x89PNG-one')).cache_key)
        other_model = ModelRequest(model_id='other', instruction_text='Classify the scene.', images=(b'\x89PNG-one', b'\x89PNG-two'))
        self.assertNotEqual(base, other_model.cache_key)

    def test_moving_bytes_between_images_changes_the_key(self):
        self.assertNotEqual(
            make_request(images=(b'ab', b'c')).cache_key,
            make_request(images=(b'a', b'bc')).cache_key,
        )

    def test_single_byte_flips(self):
        rng = np.random.default_rng(3)
        image = bytes(rng.integers(0, 256, 256, dtype=np.uint8))
        base = make_request(images=(image,)).cache_key
        for _ in range(100):
            position = int(rng.integers(0, len(image)))
            flipped = bytearray(image)
            flipped[position] ^= 1 << int(rng.integers(0, 8))
            self.assertNotEqual(make_request(images=(bytes(flipped),)).cache_key, base)

    def test_request_validation(self):
        with self.assertRaises(InvalidRequest):
            make_request(text='')
        with self.assertRaises(InvalidRequest):
            make_request(images=())
        with self.assertRaises(InvalidRequest):
            make_request(temperature=-0.1)


class RateLimiterTests(SimpleTestCase):
    def test_starts_are_spaced(self):
        delays = []
        limiter = RateLimiter(requests_per_minute=60, clock=lambda: 0.0, sleep=delays.append)
        for _ in range(3):
            with limiter:
                pass
        self.assertEqual(delays, [1.0, 2.0])

    def test_in_flight_bound_under_load(self):
        lock = threading.Lock()
        active = [0]
        peak = [0]

        def handler(request):
            with lock:
                active[0] += 1
                peak[0] = max(peak[0], active[0])
            time.sleep(0.005)
            with lock:
                active[0] -= 1
            return httpx.Response(200, json={'text': 'ANSWER: Forest'})

        limiter = RateLimiter(max_in_flight=4)
        backend = http_backend(handler, limiter=limiter)
        with ThreadPoolExecutor(max_workers=32) as pool:
            responses = list(pool.map(lambda i: backend.send(make_request(tag=str(i))), range(64)))
        backend.close()

        self.assertEqual(len(responses), 64)
        self.assertLessEqual(peak[0], 4)
        self.assertGreaterEqual(peak[0], 1)
        self.assertEqual(active[0], 0)
        self.assertEqual(limiter.in_flight, 0)


class HttpBackendTests(SimpleTestCase):
    def test_payload_carries_text_and_images(self):
        seen = []

        def handler(request):
            seen.append(json.loads(request.content))
            return httpx.Response(200, json={'candidates': [{'content': {'parts': [{'text': 'ANSWER: '}, {'text': 'Forest'}]}}]})

        backend = http_backend(handler, api_key='secret')
        response = backend.send(make_request())
        self.assertEqual(response.text, 'ANSWER: Forest')
        self.assertFalse(response.from_cache)

        parts = seen[0]['contents'][0]['parts']
        self.assertEqual(parts[0], {'text': 'Classify the scene.'})
        self.assertEqual(len(parts), 3)
        self.assertEqual(parts[1]['inline_data']['mime_type'], 'image/png')
        self.assertEqual(seen[0]['generation_config'], {'temperature': 0.0, 'max_output_tokens': 2048})
        self.assertEqual(backend.identity, 'http:test-model@vlm.test')

    def test_retries_transient_errors_up_to_max_attempts(self):
        calls = []

        def handler(request):
            calls.append(1)
            return httpx.Response(503)

        backend = http_backend(handler, max_attempts=4)
        with self.assertRaises(TransportError):
            backend.send(make_request())
        self.assertEqual(len(calls), 4)
        self.assertEqual(backend.collect_stats()['network_calls'], 4)
        self.assertEqual(backend.collect_stats()['failures'], 1)

    def test_recovers_after_transient_error(self):
        statuses = iter([429, 500, 200])

        def handler(request):
            status = next(statuses)
            return httpx.Response(status, json={'text': 'ANSWER: Forest'} if status == 200 else {})

        backend = http_backend(handler)
        self.assertEqual(backend.send(make_request()).text, 'ANSWER: Forest')
        self.assertEqual(backend.collect_stats()['network_calls'], 3)

    def test_connection_errors_are_retried(self):
        calls = []

        def handler(request):
            calls.append(1)
            raise httpx.ConnectError('refused', request=request)

        with self.assertRaises(TransportError):
            http_backend(handler, max_attempts=2).send(make_request())
        self.assertEqual(len(calls), 2)

    def test_auth_errors_are_not_retried(self):
        calls = []

        def handler(request):
            calls.append(1)
            return httpx.Response(401)

        with self.assertRaises(AuthError):
            http_backend(handler).send(make_request())
        self.assertEqual(len(calls), 1)

    def test_client_errors_are_not_retried(self):
        calls = []

        def handler(request):
            calls.append(1)
            return httpx.Response(400, text='bad request')

        with self.assertRaises(TransportError):
            http_backend(handler).send(make_request())
        self.assertEqual(len(calls), 1)

    def test_malformed_body(self):
        with self.assertRaises(TransportError):
            GenericMultimodalAdapter().parse_text({'candidates': []})
        with self.assertRaises(TransportError):
            http_backend(lambda request: httpx.Response(200, text='not json')).send(make_request())

    def test_requires_endpoint(self):
        with self.assertRaises(TransportError):
            HttpBackend(endpoint_url='', model_id='m')


class StoreBackedTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_cache_hit_skips_the_network(self):
        calls = []

        def handler(request):
            calls.append(1)
            return httpx.Response(200, json={'text': 'ANSWER: Forest'})

        backend = CachingBackend(http_backend(handler), self.root / 'cache')
        first = backend.send(make_request(tag='first'))
        second = backend.send(make_request(tag='second'))

        self.assertEqual(first.text, second.text)
        self.assertFalse(first.from_cache)
        self.assertTrue(second.from_cache)
        self.assertEqual(len(calls), 1)
        stats = backend.collect_stats()
        self.assertEqual(stats['cache_hits'], 1)
        self.assertEqual(stats['cache_misses'], 1)
        self.assertEqual(stats['network_calls'], 1)

    def test_concurrent_identical_requests_reach_inner_once(self):
        inner = CountingBackend()
        backend = CachingBackend(inner, self.root / 'cache')
        with ThreadPoolExecutor(max_workers=8) as pool:
            list(pool.map(lambda i: backend.send(make_request(tag=str(i))), range(16)))
        self.assertEqual(inner.calls, 1)

    def test_lock_pool_is_bounded(self):
        inner = CountingBackend()
        backend = CachingBackend(inner, self.root / 'cache')
        with ThreadPoolExecutor(max_workers=8) as pool:
            list(pool.map(lambda i: backend.send(make_request(text=f'Scene {i}')), range(200)))
        self.assertEqual(inner.calls, 200)
        self.assertEqual(len(backend._locks), LOCK_STRIPES)

    def test_record_then_replay(self):
        store = FixtureStore(self.root / 'fixtures')
        request = make_request()
        recorded = record(request, StaticBackend('ANSWER: Water bodies'), store)
        self.assertIn(request.cache_key, store)
        self.assertEqual(store.keys(), [request.cache_key])

        saved = store.get(request.cache_key)
        self.assertEqual(saved['request']['model_id'], 'test-model')
        self.assertEqual(len(saved['request']['image_sha256']), 2)

        replayed = ReplayBackend(store).send(make_request(tag='other'))
        self.assertEqual(replayed.text, recorded.text)
        self.assertTrue(replayed.from_cache)

    def test_replay_miss(self):
        backend = ReplayBackend(self.root / 'empty')
        with self.assertRaises(ReplayMiss):
            backend.send(make_request())
        self.assertEqual(backend.collect_stats()['replay_misses'], 1)

    def test_failed_recording_keeps_the_response(self):
        blocker = self.root / 'blocker'
        blocker.write_text('')
        backend = RecordingBackend(StaticBackend('ANSWER: Forest'), blocker)
        with self.assertRaises(StorageError) as ctx:
            backend.send(make_request())
        self.assertEqual(ctx.exception.response.text, 'ANSWER: Forest')

    def test_unwritable_cache_still_answers(self):
        blocker = self.root / 'blocker'
        blocker.write_text('')
        backend = CachingBackend(StaticBackend('ANSWER: Forest'), blocker)
        self.assertEqual(backend.send(make_request()).text, 'ANSWER: Forest')

    def test_corrupt_fixture(self):
        store = FixtureStore(self.root / 'fixtures')
        key = make_request().cache_key
        store.path_for(key).parent.mkdir(parents=True)
        store.path_for(key).write_text('{broken')
        with self.assertRaises(StorageError):
            ReplayBackend(store).send(make_request())


class MockBackendTests(SimpleTestCase):
    def test_echo_answers_by_tag(self):
        backend = EchoBackend({'S0001': ['Forest', 'Water bodies']})
        self.assertEqual(backend.send(make_request(tag='S0001')).text, 'ANSWER: Forest; Water bodies')
        self.assertEqual(backend.send(make_request(tag='unknown')).text, 'ANSWER: ')

    def test_static(self):
        self.assertEqual(StaticBackend().send(make_request()).text, '')


@override_settings(SPECTRAL_BENCH={
    'BACKEND_MODEL_ID': 'settings-model',
    'BACKEND_ENDPOINT_URL': 'https://vlm.test/v1/generate',
    'BACKEND_MAX_ATTEMPTS': 2,
    'BACKEND_BACKOFF': 0,
    'CACHE_DIR': '/tmp/spectral-bench-tests/cache',
    'FIXTURE_DIR': '/tmp/spectral-bench-tests/fixtures',
})
class FactoryTests(SimpleTestCase):
    def test_defaults_come_from_settings(self):
        spec = BackendSpec.from_dict({'kind': 'http'})
        self.assertEqual(spec.model_id, 'settings-model')
        self.assertEqual(spec.max_attempts, 2)

    def test_unknown_kind_and_keys(self):
        with self.assertRaises(BackendError):
            BackendSpec(kind='carrier-pigeon')
        with self.assertRaises(BackendError):
            BackendSpec.from_dict({'kind': 'echo', 'colour': 'blue'})

    def test_identity_ignores_directories_and_credentials(self):
        first = BackendSpec(kind='http', cache_dir='/a', fixture_dir='/b', api_key_env='KEY_A')
        second = BackendSpec(kind='http', cache_dir='/c', fixture_dir='/d', api_key_env='KEY_B')
        self.assertEqual(first.identity_dict(), second.identity_dict())
        self.assertNotEqual(first.identity_dict(), BackendSpec(kind='http', temperature=0.7).identity_dict())

    def test_http_chain_is_cached(self):
        with tempfile.TemporaryDirectory() as tmp:
            spec = BackendSpec(kind='http', cache_dir=tmp)
            transport = httpx.MockTransport(lambda request: httpx.Response(200, json={'text': 'ok'}))
            backend = build_backend(spec, transport=transport)
            self.assertEqual(backend.identity, 'cache(http:settings-model@vlm.test)')
            self.assertEqual(backend.send(make_request()).text, 'ok')
            backend.close()

    def test_record_wraps_inner(self):
        with tempfile.TemporaryDirectory() as tmp:
            backend = build_backend(BackendSpec(kind='record', inner='echo', fixture_dir=tmp), answers={'S0001': ['Forest']})
            self.assertEqual(backend.identity, 'record(echo)')
            backend.send(make_request())
            self.assertEqual(len(FixtureStore(tmp).keys()), 1)

            replay = build_backend(BackendSpec(kind='replay', fixture_dir=tmp))
            self.assertEqual(replay.send(make_request()).text, 'ANSWER: Forest')

    def test_record_after_cached_http_run_writes_fixtures(self):
        calls = []

        def handler(request):
            calls.append(1)
            return httpx.Response(200, json={'text': 'ANSWER: Forest'})

        with tempfile.TemporaryDirectory() as tmp:
            cache_dir, fixture_dir = Path(tmp) / 'cache', Path(tmp) / 'fixtures'
            transport = httpx.MockTransport(handler)
            http = build_backend(BackendSpec(kind='http', cache_dir=str(cache_dir)), transport=transport)
            http.send(make_request())
            http.close()

            recorder = build_backend(
                BackendSpec(kind='record', inner='http', cache_dir=str(cache_dir), fixture_dir=str(fixture_dir)),
                transport=transport,
            )
            self.assertEqual(recorder.identity, 'record(cache(http:settings-model@vlm.test))')
            self.assertEqual(recorder.send(make_request()).text, 'ANSWER: Forest')
            recorder.close()

            self.assertEqual(len(calls), 1)
            self.assertEqual(FixtureStore(fixture_dir).keys(), [make_request().cache_key])
            replay = build_backend(BackendSpec(kind='replay', fixture_dir=str(fixture_dir)))
            self.assertEqual(replay.send(make_request(tag='S0002')).text, 'ANSWER: Forest')

    def test_replay_cannot_be_recorded(self):
        with self.assertRaises(BackendError):
            build_backend(BackendSpec(kind='record', inner='replay'))
