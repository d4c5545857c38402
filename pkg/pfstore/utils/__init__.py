from pfstore.utils.logger import AuditLogger, log
from pfstore.utils import seeding
from pfstore.utils.utils import *
