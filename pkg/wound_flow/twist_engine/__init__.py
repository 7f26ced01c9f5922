from wound_flow.twist_engine.search import (DEFAULT_PRECISION, PlaceObstruction, SeedFailure, TwistCertificate,
                                            WindowTooSmall, first_places, local_target, nested_search, places_needed,
                                            seed_point, twist_search, verify_obstruction)
from wound_flow.twist_engine.verify import Check, VerificationReport, certificate_verify
