"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
import os

CASES_PATH = os.path.dirname(os.path.abspath(__file__))

DESK_CASE = os.path.join(CASES_PATH, "desk8", "case.json")

DESK_SCENARIOS = os.path.join(CASES_PATH, "desk8", "scenarios.json")
