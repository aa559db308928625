"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
import os

CONF_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.json")
