from wound_flow.tamagawa.counterexample import SHA_W_TRIVIAL, CounterexampleReport, counterexample_report
from wound_flow.tamagawa.oesterle import (GENUS, LPlace, NormalizedW, NPlace, TamagawaReport, UnsupportedCharacteristic,
                                          compute_l, compute_N, normalize_W, tamagawa_number)
