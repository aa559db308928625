"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
import logging

PYTXALLOC_LOGLEVEL = logging.INFO

PYTXALLOC_VERSION = '0.3.0'

PYTXALLOC_AUTHOR = "PyTxAlloc contributors"

PYTXALLOC_LOGO = """\033[92mPyTxAlloc - transmission planning and beneficiaries-pay allocation\033[0m
  ___     _____      _   _ _
 | _ \\_  |_   _|_ __/_\\ | | |___  __
 |  _/ || || | \\ \\ / _ \\| | / _ \\/ _|
 |_|  \\_, ||_| /_\\_\\/ \\_\\_|_\\___/\\__| \033[91mv\033[0m{0}
      |__/
\033[92mAuthor\033[0m: {1}
""".format(PYTXALLOC_VERSION, PYTXALLOC_AUTHOR)
