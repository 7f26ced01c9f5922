from wound_flow.groups.descent import DescentReport, descent_twist
from wound_flow.groups.etale import EtaleAlg, EtaleElem, NotEtale, v_point_algebra, v_point_tower
from wound_flow.groups.law import (GroupPoint, LawViolation, OffCurve, RingMismatch, b_map, cocycle, commutator,
                                   conjugate, constant_scalars, h_alternating, h_new, h_plus, h_zeta, identity,
                                   inverse, is_trivial, make_point, mul, noncommutativity_witness, on_curve,
                                   random_v_point, zeta_in)
from wound_flow.groups.spec import (GroupKind, GroupSpec, KindUnsupported, ParameterInKp, ZetaMissing,
                                    default_extension_kind, make_group, woundness_witness)
