"""
Django settings for the popmatch project.

popmatch has no database and serves no HTTP traffic: Django provides the settings
layer, the management-command CLI, and the test runner, while DRF renders JSON output.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/6.0/ref/settings/
"""

import os
from pathlib import Path
from dotenv import load_dotenv


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file
load_dotenv(BASE_DIR / ".env")

# Nothing is signed or stored, but Django refuses to start without a key
SECRET_KEY = os.environ.get("SECRET_KEY", "django-insecure-popmatch-local-only")

DEBUG = os.environ.get("DEBUG", "False") == "True"

ALLOWED_HOSTS: list[str] = []

# Application definition
INSTALLED_APPS = [
    "rest_framework",
    "popmatch",
    "api",
]

# No persistence: every computation is a pure function of its input files
DATABASES: dict[str, dict] = {}

# Internationalization
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True

# Django REST Framework (serializers + JSONRenderer only)
REST_FRAMEWORK = {
    "DEFAULT_RENDERER_CLASSES": [
        "rest_framework.renderers.JSONRenderer",
    ],
    "UNICODE_JSON": True,
    "COMPACT_JSON": True,
    # django.contrib.auth is not installed
    "UNAUTHENTICATED_USER": None,
}

# Logging goes to stderr so command output on stdout stays machine-readable
LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "{levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "stderr": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "plain",
        },
    },
    "loggers": {
        "popmatch": {
            "handlers": ["stderr"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}

# Matching search bounds (agents per side)
POPMATCH_ORACLE_BOUND = int(os.environ.get("POPMATCH_ORACLE_BOUND", "8"))
POPMATCH_SEARCH_BOUND = int(os.environ.get("POPMATCH_SEARCH_BOUND", "12"))
POPMATCH_STRONG_BOUND = int(os.environ.get("POPMATCH_STRONG_BOUND", "8"))

# Backend for PopularEdge / DominantEdge queries
POPMATCH_EDGE_SOLVER = os.environ.get("POPMATCH_EDGE_SOLVER", "certified-search")
