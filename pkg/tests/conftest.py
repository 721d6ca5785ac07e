# Configure Django for pytest the same way django-app-helper does for
# ``tests/settings.py`` (app under test added to INSTALLED_APPS).
import django
from django.conf import settings

from .settings import HELPER_SETTINGS


if not settings.configured:
    config = dict(HELPER_SETTINGS)
    config['INSTALLED_APPS'] = list(config['INSTALLED_APPS']) + ['raag_stabilisers']
    config.setdefault('DATABASES', {'default': {'ENGINE': 'django.db.backends.sqlite3', 'NAME': ':memory:'}})
    settings.configure(**config)
    django.setup()
