import numpy as np

from pfstore.fields import get_field
from pfstore.storage.protocol import FileRecord, StorageParams, UserParams
from pfstore.storage.registration import load
from pfstore.utils import seeding


class Env(object):
    '''
    The base Env class. A simulated deployment of L servers, a public
    channel and the users storing files on them.
    '''
    def __init__(self, config):
        ''' Initialize the environment

        Args:
            config (dict): A config dictionary. All the fields are
                optional. Currently, the dictionary includes:
                'seed' (int) - seed of keys, tapes and generated files;
                 None draws keys and tapes from system entropy.
                'strategy' (str) - id of the storage strategy.
                'field_m' (int) - symbol width of GF(2^m).
                Simulation specific settings start with 'sim_', their
                defaults live in the subclass, e.g. 'pfstore/envs/storage.py'.
        '''
        self.strategy = load(config['strategy'])
        self.spec = get_field(config['field_m'])

        _sim_config = self.default_sim_config.copy()
        for key in config:
            if key in _sim_config:
                _sim_config[key] = config[key]
        self.sim_config = _sim_config

        # Set random seed, default is None
        self.seed(config['seed'])

    def seed(self, seed=None):
        self.seed_value = seed
        self.np_random, _ = seeding.np_random(seed)
        return seed

    def make_params(self, L, users):
        ''' StorageParams over this environment's field

        Args:
            L (int): number of servers
            users (list): (user_id, t, z, n) tuples
        '''
        return StorageParams([UserParams(*user) for user in users], L, self.spec)

    def random_file(self, params, user_id):
        ''' A file filling the user's capacity, drawn from the environment's generator
        '''
        symbols = self.np_random.randint(0, params.spec.order, size=params.capacity_symbols(user_id))
        return FileRecord.from_symbols(user_id, symbols.astype(np.uint8), params.spec)

    def deploy(self, params, rings, server_ids=None):
        raise NotImplementedError

    def run_store_scenario(self, files, tapes=None):
        raise NotImplementedError

    def collusion_attack(self, colluders, user_id):
        raise NotImplementedError

    def persist(self, directory):
        raise NotImplementedError

    def restore(self, directory):
        raise NotImplementedError
