"""
Django settings for uldpack project.

Generated by 'django-admin startproject' using Django 5.2.1.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/
"""

from pathlib import Path
import environ
import os

env = environ.Env(
    DEBUG=(bool, False),
    ULDPACK_BENCH_WORKERS=(int, 1),
    ULDPACK_LOG_LEVEL=(str, 'INFO'),
)

environ.Env.read_env(os.path.join(Path(__file__).resolve().parent.parent, '.env'))

BASE_DIR = Path(__file__).resolve().parent.parent


SECRET_KEY = env('SECRET_KEY', default='django-insecure-uldpack-local-only-7f3c1a9e2b')

DEBUG = env('DEBUG', default=True)

ALLOWED_HOSTS = env.list('ALLOWED_HOSTS', default=['localhost', '127.0.0.1'])


INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'rest_framework',
    'packing',
    'instances',
    'benchmarks',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'uldpack.urls'

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

WSGI_APPLICATION = 'uldpack.wsgi.application'


DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}


LANGUAGE_CODE = 'fr-fr'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


STATIC_URL = 'static/'
STATIC_ROOT = os.path.join(BASE_DIR, 'staticfiles')

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# =================================================================
# ULDPACK CONFIGURATION
# =================================================================
# Fichier YAML des paramètres de chargement et d'algorithme par défaut
ULDPACK_CONFIG = env('ULDPACK_CONFIG', default=str(BASE_DIR / 'config' / 'uldpack.yaml'))

# Géométries des ULD fournies avec le projet
ULDPACK_ULD_CATALOG = env('ULDPACK_ULD_CATALOG', default=str(BASE_DIR / 'instances' / 'data' / 'b777_ulds.yaml'))

# Banc d'essai
ULDPACK_BENCH_WORKERS = env('ULDPACK_BENCH_WORKERS')
ULDPACK_BENCH_DIR = env('ULDPACK_BENCH_DIR', default=str(BASE_DIR / 'bench_data'))

ULDPACK_LOG_LEVEL = env('ULDPACK_LOG_LEVEL')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'packing': {'handlers': ['console'], 'level': ULDPACK_LOG_LEVEL, 'propagate': False},
        'instances': {'handlers': ['console'], 'level': ULDPACK_LOG_LEVEL, 'propagate': False},
        'benchmarks': {'handlers': ['console'], 'level': ULDPACK_LOG_LEVEL, 'propagate': False},
    },
}
