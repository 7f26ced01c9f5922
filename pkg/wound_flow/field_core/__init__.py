from wound_flow.field_core.fq_field import (FqElem, FqField, NotPresent, find_zeta, get_field,
                                            is_pminus1_power, pth_root, subfield_embedding)
