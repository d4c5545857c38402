''' JSON scenario files driving the simulated network end to end

    {
        "field_m": 2, "L": 3, "seed": 7, "strategy": "ramp-otp",
        "users": [{"user_id": 1, "t": 2, "z": 1, "n": 1}],
        "files": {"1": "c0"},
        "collusions": [{"user": 1, "servers": [1]}]
    }

    "files" holds hex strings and is optional: missing files are drawn from
    the seed at full capacity. "seed", "strategy" and "collusions" are
    optional as well.
'''
import json
from dataclasses import dataclass, field

from pfstore.envs.registration import make
from pfstore.storage.dealer import keygen
from pfstore.storage.protocol import FileRecord
from pfstore.utils.pfstore_error import UsageError


@dataclass
class Scenario:
    config: dict
    L: int
    users: list
    files: dict = field(default_factory=dict)
    collusions: list = field(default_factory=list)


def parse_scenario(data):
    ''' Validate a decoded scenario document

    Args:
        data (dict): the decoded JSON

    Returns:
        (Scenario): the scenario
    '''
    if not isinstance(data, dict):
        raise UsageError('A scenario must be a JSON object')
    for key in ('field_m', 'L', 'users'):
        if key not in data:
            raise UsageError('Scenario lacks "{}"'.format(key))
    config = {'field_m': int(data['field_m'])}
    for key in ('seed', 'strategy'):
        if data.get(key) is not None:
            config[key] = data[key]
    try:
        users = [(int(u['user_id']), int(u['t']), int(u['z']), int(u['n'])) for u in data['users']]
        files = {int(u): bytes.fromhex(h) for u, h in data.get('files', {}).items()}
        collusions = [(int(c['user']), [int(l) for l in c['servers']]) for c in data.get('collusions', [])]
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError('Malformed scenario: {}'.format(e)) from e
    return Scenario(config, int(data['L']), users, files, collusions)


def load_scenario(path):
    with open(path) as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise UsageError('{} is not valid JSON: {}'.format(path, e)) from e
    return parse_scenario(data)


def run_scenario(scenario):
    ''' Deploy, store every user's file and run every collusion

    Returns:
        (dict): the environment, the transcript, the attack summaries and
            the measured resources
    '''
    env = make('simnet', scenario.config)
    params = env.make_params(scenario.L, scenario.users)
    seed = scenario.config.get('seed')
    rings = {user.user_id: keygen(user.user_id, params.L, user.n_symbols, params.spec, seed=seed)
             for user in params.users}
    env.deploy(params, rings)
    files = {user_id: (FileRecord(user_id, scenario.files[user_id]) if user_id in scenario.files
                       else env.random_file(params, user_id))
             for user_id in params.user_ids}
    transcript, servers = env.run_store_scenario(files)
    attacks = [env.collusion_attack(colluders, user_id) for user_id, colluders in scenario.collusions]
    return {
        'env': env,
        'transcript': transcript,
        'attacks': attacks,
        'report': env.report,
        'storage_bits': env.storage_bits(),
    }
