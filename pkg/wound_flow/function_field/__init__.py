from wound_flow.function_field.poly import Poly, coeff_text, poly_crt, poly_gcd, poly_inverse_mod, poly_xgcd
from wound_flow.function_field.ratfn import (ParseError, RatFn, RationalFunctionField, parse_ratfn, random_poly,
                                             random_ratfn)
from wound_flow.function_field.places import (Divisor, ExactDifferentialZero, Place, PoleAtPlace, PreconditionViolated,
                                              ResidueField, ZeroInput, diff_ratio, differential_support,
                                              enumerate_places, is_pth_power, ord_differential, residue, support,
                                              valuation)
from wound_flow.function_field.approximation import (InsufficientPrecision, approximate, lift_series,
                                                     polynomial_part)
