''' Register new environments
'''
from pfstore.envs.env import Env
from pfstore.envs.registration import register, make

register(
    env_id='simnet',
    entry_point='pfstore.envs.storage:StorageEnv',
)
