from pfstore.bounds.optima import (OptimaTable, UserOptima, Verdict, FrontierRow, compute_optima,
                                   verify_achievement, capacity_frontier, message_lower_bound,
                                   check_converse)
