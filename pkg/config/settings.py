"""
Django settings for the spectral bench project.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from datetime import timedelta
from pathlib import Path
import os
import environ


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

env = environ.Env()
env_file = BASE_DIR / '.env'
if env_file.exists():
    environ.Env.read_env(env_file)


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = env('SECRET_KEY', default='django-insecure-spectral-bench-local-development-key')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = env.bool('DEBUG', default=True)

SITE_DOMAIN = env('SITE_DOMAIN', default='localhost')

ALLOWED_HOSTS = env.list('ALLOWED_HOSTS', default=['localhost', '127.0.0.1', SITE_DOMAIN])

CSRF_TRUSTED_ORIGINS = [
    "http://localhost:8000",
    "http://127.0.0.1:8000",
    f"http://{SITE_DOMAIN}",
    f"https://{SITE_DOMAIN}",
]

CORS_ALLOWED_ORIGINS = [
    f"http://{SITE_DOMAIN}",
    f"https://{SITE_DOMAIN}",
    "http://localhost:8000",
    "http://127.0.0.1:8000",
    "http://localhost:3000",
]


# Application definition

INSTALLED_APPS = [
    # django apps
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',

    # third party apps
    'rest_framework',
    'rest_framework_simplejwt',
    'corsheaders',
    'drf_spectacular',
    'django_filters',

    # local apps
    'utils',
    'raster',
    'spectral',
    'promptkit',
    'backend',
    'parse',
    'metrics',
    'bench',
]

MIDDLEWARE = [
    # third party middleware
    'corsheaders.middleware.CorsMiddleware',

    # django middleware
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'config.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'config.wsgi.application'
ASGI_APPLICATION = 'config.asgi.application'


# Database
# SQLite for desk-scale runs; set DB_ENGINE=django.db.backends.postgresql for a shared store.

DB_ENGINE = env('DB_ENGINE', default='django.db.backends.sqlite3')

if DB_ENGINE.endswith('sqlite3'):
    DATABASES = {
        'default': {
            'ENGINE': DB_ENGINE,
            'NAME': env('DB_NAME', default=str(BASE_DIR / 'db.sqlite3')),
        }
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': DB_ENGINE,
            'NAME': env('DB_NAME', default='spectral_bench'),
            'USER': env('DB_USER', default='postgres'),
            'PASSWORD': env('DB_PASSWORD', default='postgres'),
            'HOST': env('DB_HOST', default='db'),
            'PORT': env('DB_PORT', default='5432'),
        }
    }


# Password validation
# https://docs.djangoproject.com/en/5.2/ref/settings/#auth-password-validators

AUTH_PASSWORD_VALIDATORS = [
    {
        'NAME': 'django.contrib.auth.password_validation.UserAttributeSimilarityValidator',
    },
    {
        'NAME': 'django.contrib.auth.password_validation.MinimumLengthValidator',
    },
    {
        'NAME': 'django.contrib.auth.password_validation.CommonPasswordValidator',
    },
    {
        'NAME': 'django.contrib.auth.password_validation.NumericPasswordValidator',
    },
]


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = env('TIME_ZONE', default='UTC')

USE_I18N = True

USE_TZ = True


# Static files (CSS, JavaScript, Images)

STATIC_URL = '/static/'
STATIC_ROOT = os.path.join(BASE_DIR, 'static')


DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Spectral bench
# Every tunable of the pipeline; run configs and CLI flags override these.
VAR_DIR = Path(env('VAR_DIR', default=str(BASE_DIR / 'var')))

SPECTRAL_BENCH = {
    # raster
    'TARGET_RESOLUTION': env.int('BENCH_TARGET_RESOLUTION', default=10),
    'NORMALIZATION': {
        'mode': env('BENCH_NORMALIZATION_MODE', default='scene'),
        'default_range': [0, 2000],
        'band_ranges': {},
    },

    # promptkit
    'PROMPT_TEMPLATE_DIRS': env.list('BENCH_PROMPT_TEMPLATE_DIRS', default=[]),

    # backend
    'BACKEND_MODEL_ID': env('BENCH_MODEL_ID', default='gemini-2.5-pro'),
    'BACKEND_ENDPOINT_URL': env('BENCH_ENDPOINT_URL', default=''),
    'BACKEND_API_KEY': env('BENCH_API_KEY', default=''),
    'BACKEND_RATE_LIMIT': env.int('BENCH_RATE_LIMIT', default=60),
    'BACKEND_MAX_IN_FLIGHT': env.int('BENCH_MAX_IN_FLIGHT', default=4),
    'BACKEND_MAX_ATTEMPTS': env.int('BENCH_MAX_ATTEMPTS', default=5),
    'BACKEND_TIMEOUT': env.float('BENCH_TIMEOUT', default=120.0),
    'BACKEND_BACKOFF': env.float('BENCH_BACKOFF', default=1.0),
    'TEMPERATURE': env.float('BENCH_TEMPERATURE', default=0.0),
    'MAX_OUTPUT_TOKENS': env.int('BENCH_MAX_OUTPUT_TOKENS', default=2048),
    'CACHE_DIR': str(VAR_DIR / 'cache'),
    'FIXTURE_DIR': str(VAR_DIR / 'fixtures'),

    # bench
    'REPORT_DIR': str(VAR_DIR / 'reports'),
    'WORKERS': env.int('BENCH_WORKERS', default=4),
    'SAMPLE_LIMIT': env.int('BENCH_SAMPLE_LIMIT', default=1000),
    'SEED': env.int('BENCH_SEED', default=0),
    'AVERAGING': env('BENCH_AVERAGING', default='samples'),
}


# Logging
LOG_LEVEL = env('LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} [{threadName}] {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': LOG_LEVEL,
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': env('DJANGO_LOG_LEVEL', default='WARNING'),
            'propagate': False,
        },
        'httpx': {
            'level': 'WARNING',
        },
    },
}


# REST framework
REST_FRAMEWORK = {
    'DEFAULT_PERMISSION_CLASSES': ('rest_framework.permissions.IsAuthenticated',),
    'DEFAULT_AUTHENTICATION_CLASSES': (
        'rest_framework_simplejwt.authentication.JWTAuthentication',
    ),
    'DEFAULT_PAGINATION_CLASS': 'rest_framework.pagination.PageNumberPagination',
    'PAGE_SIZE': 20,
    'DEFAULT_SCHEMA_CLASS': 'drf_spectacular.openapi.AutoSchema',
    'DEFAULT_FILTER_BACKENDS': (
        'django_filters.rest_framework.DjangoFilterBackend',
    ),
}

# jwt
SIMPLE_JWT = {
    "ACCESS_TOKEN_LIFETIME": timedelta(days=1),
    "REFRESH_TOKEN_LIFETIME": timedelta(days=30),
}

# Celery settings
CELERY_BROKER_URL = env('CELERY_BROKER_URL', default='redis://redis:6379/0')
CELERY_RESULT_BACKEND = env('CELERY_RESULT_BACKEND', default='redis://redis:6379/0')
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = TIME_ZONE
CELERY_TASK_TRACK_STARTED = True
CELERY_TASK_TIME_LIMIT = env.int('CELERY_TASK_TIME_LIMIT', default=6 * 60 * 60)
CELERY_TASK_ALWAYS_EAGER = env.bool('CELERY_TASK_ALWAYS_EAGER', default=False)

# OpenAPI / drf-spectacular configuration
SPECTACULAR_SETTINGS = {
    'TITLE': 'Spectral Bench API',
    'DESCRIPTION': 'Read-only access to zero-shot multispectral evaluation runs and their per-sample audit trail.',
    'VERSION': '1.0.0',
    'SCHEMA_PATH_PREFIX': r'/api/v1',
    'COMPONENT_SPLIT_REQUEST': True,
    'SCHEMA_COERCE_PATH_PK': True,
    'SECURITY': [
        {'JWT': []},
    ],
    'SECURITY_SCHEMES': {
        'JWT': {
            'type': 'http',
            'scheme': 'bearer',
            'bearerFormat': 'JWT',
        },
    }
}
