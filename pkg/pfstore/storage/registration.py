import importlib

class StrategySpec(object):
    ''' A specification for a particular storage strategy.
    '''
    def __init__(self, strategy_id, entry_point=None):
        ''' Initialize

        Args:
            strategy_id (string): the name of the strategy
            entry_point (string): a string that indicates the location of the strategy class
        '''
        self.strategy_id = strategy_id
        mod_name, class_name = entry_point.split(':')
        self._entry_point = getattr(importlib.import_module(mod_name), class_name)

    def load(self):
        ''' Instantiates an instance of the strategy

        Returns:
            strategy (PrivateStorageProtocol): an instance of the strategy
        '''
        return self._entry_point()


class StrategyRegistry(object):
    ''' Register a strategy by ID
    '''

    def __init__(self):
        self.strategy_specs = {}

    def register(self, strategy_id, entry_point):
        if strategy_id in self.strategy_specs:
            raise ValueError('Cannot re-register strategy_id: {}'.format(strategy_id))
        self.strategy_specs[strategy_id] = StrategySpec(strategy_id, entry_point)

    def load(self, strategy_id):
        ''' Create a strategy instance

        Args:
            strategy_id (string): the name of the strategy
        '''
        if strategy_id not in self.strategy_specs:
            raise ValueError('Cannot find strategy_id: {}'.format(strategy_id))
        return self.strategy_specs[strategy_id].load()

    @property
    def strategy_ids(self):
        return sorted(self.strategy_specs)

# Have a global registry
strategy_registry = StrategyRegistry()


def register(strategy_id, entry_point):
    ''' Register a strategy

    Args:
        strategy_id (string): the name of the strategy
        entry_point (string): a string the indicates the location of the strategy class
    '''
    return strategy_registry.register(strategy_id, entry_point)

def load(strategy_id):
    ''' Create a strategy instance

    Args:
        strategy_id (string): the name of the strategy
    '''
    return strategy_registry.load(strategy_id)
