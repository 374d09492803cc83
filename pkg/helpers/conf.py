from django.conf import settings

DEFAULTS = {
    'REL_TOL': 1e-8,
    'MAX_ITER': 500,
    'STATIONARY_MAX_ITER': 100,
    'DIVERGENCE_FACTOR': 1e4,
    'EPSILON': 1e-8,
    'UZAWA_STEPS': 1,
    'POINT_DAMPING': 0.5,
    'BLOCK_DAMPING': 0.4,
}


def solver_setting(key, override=None):
    """
    This function returns a solver default, preferring an explicit override

    @param key: one of the keys of `SOLVER_DEFAULTS`
    @type key: `str`
    @param override: value passed by the caller, used when not None
    @returns: the override, the configured value, or the built-in default
    """
    if override is not None:
        return override
    if key not in DEFAULTS:
        raise KeyError(f'Unknown solver setting {key!r}')
    if settings.configured:
        return getattr(settings, 'SOLVER_DEFAULTS', {}).get(key, DEFAULTS[key])
    return DEFAULTS[key]
