"""Monte Carlo laboratory for random walks in weakly dependent random scenery."""

__version__ = "0.1.0"

from .walk import (IncrementLaw, LocalTimeProfile, WalkPath, check_property_P, local_time,
                   max_local_time, sample_walk, self_intersection)
from .scenery import (IID, DoublingMap, IteratedFunction, LinearProcess, analytic_covariance,
                      empirical_covariance, sample_scenery)
from .dependence import DecayBound, check_A2, theta_bound, weighted_cov_sum
from .rwrs import RwrsConfig, second_moment_identity, simulate_rwrs
from .limit import LimitConfig, simulate_bm_local_time, simulate_delta
from .verify import ks_two_sample, run_suite
