"""Secrecy-rate simulation and optimization for pinching-antenna downlinks."""

from .channel import (channel_vector, composite_channel, free_space_channel,
                      inwaveguide_phase)
from .errors import (ConfigError, DegenerateGeometryError, GeometryError,
                     InfeasibleLayoutError, PinchSecError, SearchExhaustedError)
from .estimators import (BaseSecrecyEstimator, ConventionalAnalogBeamformer,
                         FdbBeamformer, PastOptimizer, RandomPositionBaseline,
                         SinglePsoOptimizer, WdOptimizer, WmOptimizer,
                         check_scenario)
from .geometry import PinchLayout, project_to_feasible
from .kernels import (ScaTrace, extract_rank_one, hermitian_eig, lift,
                      project_psd, wd_power_sca, wm_beamform_sca)
from .past import (AlignmentTarget, FineTuneParams, PastResult,
                   coarse_uniform_placement, fine_step_left, fine_step_right,
                   past_optimize)
from .pso import PsoHyper, SwarmState, init_swarm, pso_optimize, pso_step
from .rates import (PowerSplit, SecrecyReport, miso_rate, rate_single, rate_wd,
                    rate_wm, secrecy_rate, wm_effective_channel)
from .scenario import (Scenario, dual_waveguide_offsets, load_scenario,
                       save_scenario)
from .wd import WdSolution, optimize_wd
from .wm import WmSolution, optimize_wm, pa_fitness

__version__ = "0.1.0"
