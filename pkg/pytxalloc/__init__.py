"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
