from pfstore.sharing.ramp import (RampParams, RandomTape, ShareBundle,
                                  ramp_encode, ramp_decode, ramp_leakage_profile)
