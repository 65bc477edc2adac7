"""Numerical laboratory for nonpositively curved neck surfaces of revolution."""

from .profiles import (BUMP_COEFF, DEFAULT_DELTA, Profile, base_profile,
                       bump_alpha, custom_profile, parse_profile_spec,
                       swing_profile, t_max_threshold,
                       verify_profile_conditions)
from .surface import (christoffel_at, curvature_table, gauss_curvature,
                      metric_at)
from .geodesic import (GeodesicState, Trajectory, geodesic_family_convergence,
                       geodesic_rhs, integrate_ensemble, integrate_geodesic,
                       normalize_state)
from .shorten import (ClosedGeodesic, Loop, ShorteningError, init_loop,
                      loop_length, minimal_length, shorten_step,
                      shorten_to_geodesic)
from .moduli import (ModuliSlice, SweepResult, c0_bound_check,
                     escape_bound_search, flat_ribbon_check, minimizer_set,
                     neighborhood_stability, sweep)

__version__ = "0.1.0"
