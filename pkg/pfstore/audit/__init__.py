from pfstore.audit.distribution import (JointDistribution, ProductDistribution, entropy,
                                        mutual_information, conditional_entropy, is_uniform)
from pfstore.audit.enumerator import enumerate_strategy, state_count, sample_report, MAX_ATOMS
from pfstore.audit.judger import (LeakageReport, check_security, check_recoverability,
                                  check_symmetry, audit)
