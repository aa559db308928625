"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .pta_version import PYTXALLOC_LOGLEVEL
import logging
import time
import sys


class PTALogger(object):

    _configured = False

    @staticmethod
    def init_logger(name="pytxalloc"):
        if not PTALogger._configured:
            logging.basicConfig(filename="pta_{0}.log".format(time.strftime("%d_%m_%Y")),
                                level=PYTXALLOC_LOGLEVEL,
                                format="%(asctime)s %(levelname)s %(name)s: %(message)s")
            PTALogger._configured = True
        logger = logging.getLogger(name)

        def handle_exception(exc_type, exc_value, exc_traceback):
            if issubclass(exc_type, KeyboardInterrupt):
                sys.__excepthook__(exc_type, exc_value, exc_traceback)
                return
            logger.error("Uncaught exception", exc_info=(exc_type, exc_value, exc_traceback))
            sys.__excepthook__(exc_type, exc_value, None)

        sys.excepthook = handle_exception
        return logger

    @staticmethod
    def stamp():
        """
        Prefix used on every lifecycle debug line
        """
        return "[{0}]".format(time.strftime("%H:%M:%S"))
