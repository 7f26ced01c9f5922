from wound_flow.cohomology.local_classes import (ClassRelation, CohClassRep, LocalWitness, TrivialClass, bad_places,
                                                 che1_witness, class_relation, global_preimage_search)
from wound_flow.cohomology.connecting import (ValueNotRational, additivity_preimage, delta_closed, delta_generic,
                                              n_value)
from wound_flow.cohomology.global_solver import GlobalSolveResult, solve_global_V
