"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from pytxalloc.core.pta_encoder import PTAEncoder, write_csv, write_json, write_percent_table, output_path
from pytxalloc.core.errors import PTAInvalidType
import pandas as pd
import numpy as np
import unittest
import tempfile
import json
import os

__TITLE__ = "Testing PTAEncoder object"


class Report(object):

    def as_dict(self):
        return {"value": np.float64(2.5), "count": np.int64(3)}


class TestPTAEncoder(unittest.TestCase):

    def test_plain_numpy_types(self):
        plain = PTAEncoder.plain({"f": np.float32(1.5), "i": np.int32(4), "b": np.bool_(True),
                                  "a": np.arange(3), "nan": float("nan"), "inf": np.inf})
        self.assertEqual(plain, {"f": 1.5, "i": 4, "b": True, "a": [0, 1, 2], "nan": None, "inf": None})
        self.assertIsInstance(plain["i"], int)

    def test_tuple_keys_and_reports(self):
        plain = PTAEncoder.plain({("b1", "fleet"): Report(), "b2": (1, 2)})
        self.assertEqual(plain, {"b1/fleet": {"value": 2.5, "count": 3}, "b2": [1, 2]})

    def test_unsupported_type(self):
        with self.assertRaises(PTAInvalidType):
            PTAEncoder.plain({"x": object()})

    def test_dumps_is_deterministic(self):
        first = PTAEncoder.dumps({"b": 1, "a": {"d": 2, "c": 3}})
        second = PTAEncoder.dumps({"a": {"c": 3, "d": 2}, "b": 1})
        self.assertEqual(first, second)
        self.assertTrue(first.endswith("\n"))
        self.assertLess(first.index('"a"'), first.index('"b"'))

    def test_write_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            directory = output_path(os.path.join(tmp, "nested"), "x.json")
            self.assertTrue(os.path.isdir(os.path.dirname(directory)))
            path = write_json(directory, {"k": np.float64(0.1)})
            with open(path, "r") as handle:
                self.assertEqual(json.load(handle), {"k": 0.1})

            frame = pd.DataFrame({"bus": ["b1", "b2"], "value": [1.0 / 3.0, 2.0]})
            path = write_csv(os.path.join(tmp, "values.csv"), frame)
            with open(path, "rb") as handle:
                raw = handle.read()
            self.assertNotIn(b"\r\n", raw)
            self.assertEqual(raw.decode().splitlines(), ["bus,value", "b1,0.3333333333", "b2,2"])

            ratios = pd.DataFrame({"ratio": [57.1666, 42.8334]}, index=pd.Index(["b1", "b8"], name="bus"))
            path = write_percent_table(os.path.join(tmp, "ratios.csv"), ratios)
            with open(path, "r") as handle:
                self.assertEqual(handle.read().splitlines(), ["bus,ratio", "b1,57.17", "b8,42.83"])

    def test_write_csv_needs_frame(self):
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(PTAInvalidType):
                write_csv(os.path.join(tmp, "x.csv"), [1, 2])


def test():
    print("=" * len(__TITLE__))
    print(__TITLE__)
    print("=" * len(__TITLE__))
    suite = unittest.TestLoader().loadTestsFromTestCase(TestPTAEncoder)
    unittest.TextTestRunner(verbosity=2).run(suite)
