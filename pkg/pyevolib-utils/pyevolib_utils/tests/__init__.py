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

import importlib.util
import os
import os.path as op
import sys


def _load_test_function(script_path, func_name):
    """Import a test category file by path and return one of its test functions"""
    name = op.splitext(op.basename(script_path))[0]
    module_spec = importlib.util.spec_from_file_location(name, script_path)
    if module_spec is None or module_spec.loader is None:
        raise ImportError(f"unable to load test script {script_path}")
    module = importlib.util.module_from_spec(module_spec)
    sys.modules[name] = module
    module_spec.loader.exec_module(module)
    if not hasattr(module, func_name):
        raise AttributeError(f"{op.basename(script_path)} has no test named {func_name}")
    return getattr(module, func_name)


def _run_test(func_name, tester, ref_data, out_data):
    err = []
    if len(ref_data) != len(out_data):
        err = [f"{func_name}: data len mismatch (ref:{len(ref_data)} out:{len(out_data)})"]
    err += tester.compare_data(func_name, ref_data, out_data)
    return err


def _set_ref_data(tester, ref_filepath, data):
    os.makedirs(op.dirname(op.abspath(ref_filepath)), exist_ok=True)
    with open(ref_filepath, "w") as ref_file:
        ref_file.write(tester.serialize(data))


def _get_ref_data(tester, ref_filepath):
    with open(ref_filepath) as ref_file:
        serialized_data = ref_file.read()
    return tester.deserialize(serialized_data)


def _check_default(func_name, tester, ref_filepath, dump=False):
    if not op.exists(ref_filepath):
        return [f"{func_name}: reference file {ref_filepath} not found, use REFGEN=create to create it"]
    ref_data = _get_ref_data(tester, ref_filepath)
    out_data = tester.get_out_data(dump, func_name)
    return _run_test(func_name, tester, ref_data, out_data)


def _check_create(func_name, tester, ref_filepath, dump=False):
    out_data = tester.get_out_data(dump, func_name)
    if not op.exists(ref_filepath):
        sys.stderr.write(f"{func_name}: creating {ref_filepath}\n")
        _set_ref_data(tester, ref_filepath, out_data)
        return []
    ref_data = _get_ref_data(tester, ref_filepath)
    return _run_test(func_name, tester, ref_data, out_data)


def _check_update(func_name, tester, ref_filepath, dump=False):
    err = _check_create(func_name, tester, ref_filepath, dump)
    if err:
        sys.stderr.write(f"{func_name}: re-generating {ref_filepath}\n")
        _set_ref_data(tester, ref_filepath, tester.get_out_data(dump, func_name))
    return []


def _check_force(func_name, tester, ref_filepath, dump=False):
    verb = "re-generating" if op.exists(ref_filepath) else "creating"
    sys.stderr.write(f"{func_name}: {verb} {ref_filepath}\n")
    _set_ref_data(tester, ref_filepath, tester.get_out_data(dump, func_name))
    return []


_refgen_map = {
    "no": _check_default,
    "create": _check_create,
    "update": _check_update,
    "force": _check_force,
}

_allowed_tests_opts = ("dump",)


def get_refgen():
    refgen_opt = os.environ.get("REFGEN", "no")
    if refgen_opt not in _refgen_map:
        allowed_str = ", ".join(_refgen_map.keys())
        raise ValueError(f"REFGEN environment variable must be any of {allowed_str}")
    return refgen_opt


def get_dump():
    tests_opts = os.environ.get("TESTS_OPTIONS")
    if tests_opts is not None and tests_opts not in _allowed_tests_opts:
        allowed_str = ", ".join(_allowed_tests_opts)
        raise ValueError(f"TESTS_OPTIONS environment variable must be any of {allowed_str}")
    return tests_opts == "dump"


def check_reference(func_name, tester, ref_filepath):
    """Compare (or regenerate, depending on REFGEN) a test output with its reference file"""
    return _refgen_map[get_refgen()](func_name, tester, ref_filepath, get_dump())


def run():
    try:
        get_refgen()
        get_dump()
    except ValueError as e:
        sys.stderr.write(f"{e}\n")
        sys.exit(1)

    if len(sys.argv) not in (3, 4):
        sys.stderr.write(
            "Usage: [TESTS_OPTIONS={} REFGEN={}] {} <script_path> <func_name> [<ref_filepath>]\n".format(
                "|".join(_allowed_tests_opts), "|".join(_refgen_map.keys()), op.basename(sys.argv[0])
            )
        )
        sys.exit(1)

    script_path, func_name = sys.argv[1:3]
    ref_filepath = sys.argv[3] if len(sys.argv) == 4 else None
    func = _load_test_function(script_path, func_name)

    tester = getattr(func, "tester", None)
    if ref_filepath is None or tester is None:
        ret = tester.get_out_data(func_name=func_name) if tester else func()
        if ret:
            print(ret)
        sys.exit(0)

    err = check_reference(func_name, tester, ref_filepath)
    if err:
        sys.stderr.write(f"{func_name} failed\n")
        sys.stderr.write("\n".join(err) + "\n")
        sys.exit(1)
    print(f"{func_name} passed")
    sys.exit(0)
