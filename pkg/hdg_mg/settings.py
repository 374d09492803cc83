from pathlib import Path
import os
from dotenv import load_dotenv
import sentry_sdk
from sentry_sdk.integrations.django import DjangoIntegration

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv('SECRET_KEY', 'hdg-mg-local-only')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'mesh',
    'quadrature',
    'spaces',
    'linalg',
    'hdg_diffusion',
    'hdg_stokes',
    'transfer',
    'smoothers',
    'multigrid',
    'experiments',
]

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

# Defaults for every solver knob; each one can be overridden with HDG_<KEY>.
SOLVER_DEFAULTS = {
    'REL_TOL': float(os.getenv('HDG_REL_TOL', 1e-8)),
    'MAX_ITER': int(os.getenv('HDG_MAX_ITER', 500)),
    'STATIONARY_MAX_ITER': int(os.getenv('HDG_STATIONARY_MAX_ITER', 100)),
    'DIVERGENCE_FACTOR': float(os.getenv('HDG_DIVERGENCE_FACTOR', 1e4)),
    'EPSILON': float(os.getenv('HDG_EPSILON', 1e-8)),
    'UZAWA_STEPS': int(os.getenv('HDG_UZAWA_STEPS', 1)),
    'POINT_DAMPING': float(os.getenv('HDG_POINT_DAMPING', 0.5)),
    'BLOCK_DAMPING': float(os.getenv('HDG_BLOCK_DAMPING', 0.4)),
}

LOG_LEVEL = os.getenv('HDG_LOG_LEVEL', 'DEBUG' if DEBUG else 'INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'solver': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'solver',
        },
    },
    'loggers': {
        app: {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False}
        for app in INSTALLED_APPS + ['decorators', 'helpers']
    },
}

SENTRY_DSN = os.getenv('SENTRY_DSN')

if SENTRY_DSN:
    sentry_sdk.init(
        dsn=SENTRY_DSN,
        integrations=[DjangoIntegration()],
        traces_sample_rate=float(os.getenv('SENTRY_TRACES_SAMPLE_RATE', 0.0)),
        send_default_pii=False
    )
