"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import PTAInvalidType
import pandas as pd
import numpy as np
import json
import os

FLOAT_FORMAT = "%.10g"
PERCENT_FORMAT = "%.2f"


class PTAEncoder(object):
    """
    Deterministic text encoding of report objects
    """

    @staticmethod
    def plain(obj):
        """
        Recursively turn numpy scalars/arrays, tuple keys and dataclass reports into JSON types
        """
        if hasattr(obj, "as_dict"):
            return PTAEncoder.plain(obj.as_dict())
        if isinstance(obj, dict):
            return {PTAEncoder.key(k): PTAEncoder.plain(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [PTAEncoder.plain(e) for e in obj]
        if isinstance(obj, np.ndarray):
            return PTAEncoder.plain(obj.tolist())
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, (np.floating, float)):
            value = float(obj)
            return value if np.isfinite(value) else None
        if obj is None or isinstance(obj, (str, int, bool)):
            return obj
        raise PTAInvalidType(obj, dict)

    @staticmethod
    def key(k):
        if isinstance(k, tuple):
            return "/".join(str(e) for e in k)
        return str(k)

    @staticmethod
    def dumps(obj, indent=True):
        return json.dumps(PTAEncoder.plain(obj), indent=2 if indent else None, sort_keys=True) + "\n"


def write_json(path, obj):
    with open(path, "w") as handle:
        handle.write(PTAEncoder.dumps(obj))
    return path


def write_csv(path, frame, float_format=FLOAT_FORMAT, index=False):
    """
    Delimited text with a fixed float format and unix line endings
    """
    if not isinstance(frame, pd.DataFrame):
        raise PTAInvalidType(frame, pd.DataFrame)
    frame.to_csv(path, index=index, float_format=float_format, lineterminator="\n")
    return path


def write_percent_table(path, frame):
    """
    Ratio tables are written to two decimals
    """
    return write_csv(path, frame, float_format=PERCENT_FORMAT, index=True)


def output_path(directory, name):
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, name)
