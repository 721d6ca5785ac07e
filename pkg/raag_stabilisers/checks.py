from django.core import checks

from .conf import DEFAULTS, MINIMUMS, get_setting


@checks.register('raag')
def check_settings(app_configs, **kwargs):
    errors = []
    for name in DEFAULTS:
        value = get_setting(name)
        if not isinstance(value, int) or isinstance(value, bool):
            errors.append(checks.Error(
                f'{name} must be an integer, got {value!r}.',
                id='raag_stabilisers.E001',
            ))
            continue
        minimum = MINIMUMS[name]
        if minimum is not None and value < minimum:
            errors.append(checks.Error(
                f'{name} must be at least {minimum}, got {value}.',
                id='raag_stabilisers.E002',
            ))
    return errors
