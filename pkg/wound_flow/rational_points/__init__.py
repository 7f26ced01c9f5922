from wound_flow.rational_points.bounds import (InfinitePointSet, PlaceBound, PoleBound, frobenius_exponent,
                                               pole_bounds)
from wound_flow.rational_points.enumeration import (brute_force_points, enumerate_points, rational_functions,
                                                    solve_frobenius_linear, solve_y)
from wound_flow.rational_points.workers import PointScanWorker, run_scan
