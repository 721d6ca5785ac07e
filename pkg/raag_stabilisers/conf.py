from django.conf import settings


DEFAULTS = {
    'RAAG_SEED': 0,
    'RAAG_SAMPLE_BOUND': 5,
    'RAAG_VERIFY_MAX_VERTICES': 5,
    'RAAG_VERIFY_RANDOM_GRAPHS': 300,
    'RAAG_VERIFY_RANDOM_MAX_VERTICES': 8,
    'RAAG_VERIFY_PAIRS': 1000,
    'RAAG_VERIFY_WORDS': 500,
    'RAAG_VERIFY_MATRICES': 500,
    'RAAG_VERIFY_THETAS': 200,
    'RAAG_VERIFY_WORKERS': 0,
    'RAAG_WORD_LENGTH': 12,
    'RAAG_COMPOSITION_LENGTH': 6,
    'RAAG_WITNESS_LENGTH_FACTOR': 2,
    'RAAG_WITNESS_SEARCH_LIMIT': 5000,
}

# smallest accepted value of each setting
MINIMUMS = {
    'RAAG_SEED': None,
    'RAAG_SAMPLE_BOUND': 1,
    'RAAG_VERIFY_MAX_VERTICES': 1,
    'RAAG_VERIFY_RANDOM_GRAPHS': 0,
    'RAAG_VERIFY_RANDOM_MAX_VERTICES': 1,
    'RAAG_VERIFY_PAIRS': 1,
    'RAAG_VERIFY_WORDS': 1,
    'RAAG_VERIFY_MATRICES': 1,
    'RAAG_VERIFY_THETAS': 1,
    # 0 starts one worker per CPU
    'RAAG_VERIFY_WORKERS': 0,
    'RAAG_WORD_LENGTH': 1,
    'RAAG_COMPOSITION_LENGTH': 1,
    'RAAG_WITNESS_LENGTH_FACTOR': 1,
    'RAAG_WITNESS_SEARCH_LIMIT': 1,
}


def get_setting(name):
    return getattr(settings, name, DEFAULTS[name])


def get_seed():
    return get_setting('RAAG_SEED')


def get_sample_bound():
    return get_setting('RAAG_SAMPLE_BOUND')


def get_witness_length_factor():
    return get_setting('RAAG_WITNESS_LENGTH_FACTOR')


def get_witness_search_limit():
    return get_setting('RAAG_WITNESS_SEARCH_LIMIT')
