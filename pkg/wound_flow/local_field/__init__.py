from wound_flow.local_field.additive import (AdditiveMap, FrobeniusShape, Monomial, artin_schreier_map, identity_map,
                                             v_map, w_map, wplus_map)
from wound_flow.local_field.image import (Decision, ImageLattice, LinearFunctional, NotFound, SoundBox, Verdict,
                                          Window, WindowInvalid, default_window, image_member,
                                          local_nontrivial_witness, sound_box)
from wound_flow.local_field.laurent import LaurentLocal, LocalRing, expand, teichmuller_lift
from wound_flow.local_field.newton import NoConvergence, newton_solve
