name = "pfstore"
__version__ = "0.1.0"

from pfstore.envs import make
