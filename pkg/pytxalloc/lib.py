"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""

from .core.pta_allocation import (PTAAllocationReport, allocate_load_only, allocate_load_and_gen, compensate_losers,
                                  benefit_cost_ratios, compare_scopes)
from .core.pta_backend import PTAHighsBackend, get_backend, export_lp
from .core.pta_benefits import (PTABenefitReport, generator_unit_benefit, load_benefit, congestion_rent,
                                surplus_decomposition, classify_generator, compute_benefits)
from .core.pta_case import load_case, load_scenarios
from .core.pta_configuration import PTAConfiguration
from .core.pta_counterfactual import PTACounterfactual, resolve_subset
from .core.pta_encoder import PTAEncoder
from .core.pta_evaluate import build_oos_lp, sweep, ex_ante_vs_ex_post, later_stage_scenario
from .core.pta_optimizer import build_expansion_mip, solve_mip, fix_and_solve_lp, verify_kkt
from .core.pta_scenario import PTAScenarioTree, validate_tree, path_to_root, discount_factor, enumerate_grid
from .core.pta_system import compute_shift_factors, line_flows, curtailment_cost
from .core.pta_timeseries import cluster_days, net_load, case_net_load, full_year_blocks
from .core.pta_version import PYTXALLOC_VERSION
from .core.errors import *
