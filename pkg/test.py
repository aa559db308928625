"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""

from test import test_pta_environment
from test import test_pta_scenario
from test import test_pta_system
from test import test_pta_timeseries
from test import test_pta_case
from test import test_pta_optimizer
from test import test_pta_counterfactual
from test import test_pta_benefits
from test import test_pta_allocation
from test import test_pta_evaluate
from test import test_pta_desk_case
from test import test_pta_encoder
from test import test_pta_configuration
from test import test_pta_cli

if __name__ == "__main__":
    print("PyTxAlloc - Test Unit")
    print("[INFO] Starting tests...\n\n")
    test_pta_environment.test()
    test_pta_scenario.test()
    test_pta_system.test()
    test_pta_timeseries.test()
    test_pta_case.test()
    test_pta_optimizer.test()
    test_pta_counterfactual.test()
    test_pta_benefits.test()
    test_pta_allocation.test()
    test_pta_evaluate.test()
    test_pta_desk_case.test()
    test_pta_encoder.test()
    test_pta_configuration.test()
    test_pta_cli.test()
