from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class RaagStabilisersConfig(AppConfig):
    default_auto_field = 'django.db.models.AutoField'
    name = 'raag_stabilisers'
    verbose_name = _('Stabilisers of parabolic centralisers')

    def ready(self):
        import raag_stabilisers.checks  # noqa
