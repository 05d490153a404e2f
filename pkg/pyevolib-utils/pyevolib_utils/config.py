#
# Copyright 2026 evolib developers
#
# Licensed to the Apache Software Foundation (ASF) under one
# or more contributor license agreements.  See the NOTICE file
# distributed with this work for additional information
# regarding copyright ownership.  The ASF licenses this file
# to you under the Apache License, Version 2.0 (the
# "License"); you may not use this file except in compliance
# with the License.  You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing,
# software distributed under the License is distributed on an
# "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, either express or implied.  See the License for the
# specific language governing permissions and limitations
# under the License.
#

import json
import logging
import os
import os.path as op

from pyevolib.conjectures import DISTRIBUTIONS


class Config:
    FILEPATH = op.join(os.environ.get("XDG_DATA_HOME", op.expanduser("~/.local/share")), "evolib", "evolib.json")
    CHOICES = {
        "dist": list(DISTRIBUTIONS.keys()),
    }
    TYPES = {
        "eps": float,
        "seed": int,
        "trials": int,
        "budget": int,
        "threads": int,
        "dist": str,
        "residual_tol": float,
        "dedup_tol": float,
        "support_eps": float,
    }

    def __init__(self, filepath=None):
        self._cfg = {
            "eps": 1e-9,
            "seed": 0,
            "trials": 64,
            "budget": 64,
            "threads": None,
            "dist": "gaussian",
            "residual_tol": 1e-9,
            "dedup_tol": 1e-6,
            "support_eps": 1e-6,
        }
        self._filepath = filepath or self.FILEPATH
        self._needs_saving = False

        if op.exists(self._filepath):
            with open(self._filepath) as f:
                self._cfg.update(self._sanitized_config(json.load(f)))

    @classmethod
    def _coerce(cls, key, value):
        kind = cls.TYPES[key]
        if kind is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if not isinstance(value, kind) or isinstance(value, bool):
            raise ValueError(f"{key} expects a {kind.__name__}")
        if kind in (int, float) and key != "seed" and value <= 0:
            raise ValueError(f"{key} must be positive")
        allowed_values = cls.CHOICES.get(key)
        if allowed_values is not None and value not in allowed_values:
            raise ValueError(f"{value} not allowed for {key}, expected one of {', '.join(allowed_values)}")
        return value

    def _sanitized_config(self, cfg):
        out_cfg = {}
        for key, value in cfg.items():
            if key not in self.TYPES:
                logging.warning("ignoring unknown configuration key %s", key)
                continue
            try:
                out_cfg[key] = self._coerce(key, value)
            except ValueError as e:
                logging.warning("ignoring configuration value %r: %s", value, e)
        return out_cfg

    @property
    def filepath(self):
        return self._filepath

    def items(self):
        return sorted(self._cfg.items())

    def get(self, key):
        return self._cfg.get(key)

    def set_(self, key, value):
        if key not in self.TYPES:
            raise KeyError(key)
        value = self._coerce(key, value)
        if self._cfg.get(key) == value:
            return
        self._cfg[key] = value
        self._needs_saving = True

    def save(self):
        if not self._needs_saving:
            return
        os.makedirs(op.dirname(self._filepath), exist_ok=True)
        with open(self._filepath, "w") as config_file:
            json.dump(self._cfg, config_file, indent=4)
        self._needs_saving = False
