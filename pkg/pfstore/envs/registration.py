''' Simulated deployments by id

    Entry points are 'module:Class' strings, imported on first use.
'''
import importlib

DEFAULT_CONFIG = {
        'seed': None,
        'strategy': 'ramp-otp',
        'field_m': 8,
        }

_entry_points = {}


def register(env_id, entry_point):
    ''' Register a deployment class under env_id

    Raises:
        ValueError: env_id is already taken
    '''
    if env_id in _entry_points:
        raise ValueError('Cannot re-register env_id: {}'.format(env_id))
    _entry_points[env_id] = entry_point


def make(env_id, config={}):
    ''' Create a deployment

    Args:
        env_id (string): A registered id, 'simnet' for the built-in one
        config (dict): Settings merged over DEFAULT_CONFIG
    '''
    if env_id not in _entry_points:
        raise ValueError('Cannot find env_id: {}'.format(env_id))
    mod_name, class_name = _entry_points[env_id].split(':')
    env_class = getattr(importlib.import_module(mod_name), class_name)
    _config = DEFAULT_CONFIG.copy()
    _config.update(config)
    return env_class(_config)
