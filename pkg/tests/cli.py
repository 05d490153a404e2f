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

import io
import json

import pytest
from pyevolib_utils import serialize
from pyevolib_utils.cli import EXIT_INCONCLUSIVE, EXIT_INPUT_ERROR, EXIT_OK, run
from pyevolib_utils.config import Config
from pyevolib_utils.tests.data import e2, example_no_natural_basis

import pyevolib as evo


@pytest.fixture(autouse=True)
def _isolated_config(tmp_path, monkeypatch):
    monkeypatch.setattr(Config, "FILEPATH", str(tmp_path / "config" / "evolib.json"))
    monkeypatch.delenv("EVOLIB_THREADS", raising=False)


def _algebra_file(tmp_path, E, eps=None, name="algebra.json"):
    path = tmp_path / name
    path.write_text(serialize.serialize_algebra(E, eps))
    return str(path)


def _run(tmp_path, *args):
    out = tmp_path / "report.json"
    code = run([*args, "--out", str(out)])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


def cli_decide_p(tmp_path):
    code, report = _run(tmp_path, "decide-p", "--in", _algebra_file(tmp_path, e2()))
    assert code == EXIT_OK
    assert report["tool"] == "evolib"
    assert report["command"] == "decide-p"
    assert report["input_digest"].startswith("sha256:")
    assert report["result"]["verdict"] == "fails"
    assert report["result"]["dim2"]["tag"] == "E2"


def cli_standard_input(tmp_path, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(serialize.serialize_algebra(evo.en(3))))
    code, report = _run(tmp_path, "nilpotency", "--in", "-")
    assert code == EXIT_OK
    assert report["result"] == {"nilpotent": True, "order": [1, 2, 3]}


def cli_standard_output(tmp_path, capsys):
    code = run(["classify2", "--in", _algebra_file(tmp_path, e2()), "-q"])
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["result"]["tag"] == "E2"


def cli_schema_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"dim": 2, "matrix": [[[1, 0]], [[0, 0], [0, 0]]]}')
    code, report = _run(tmp_path, "decide-p", "--in", str(path))
    assert code == EXIT_INPUT_ERROR
    assert report is None
    assert "error: matrix[0]: row 1" in capsys.readouterr().err


def cli_missing_file(tmp_path):
    code, _ = _run(tmp_path, "decide-p", "--in", str(tmp_path / "missing.json"))
    assert code == EXIT_INPUT_ERROR


def cli_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        run(["decide-p"])
    assert excinfo.value.code == 2


def cli_classify_subspace(tmp_path):
    E, vectors = example_no_natural_basis()
    subspace = tmp_path / "subspace.json"
    subspace.write_text(json.dumps({"vectors": [serialize.encode_vector(v) for v in vectors]}))
    path = _algebra_file(tmp_path, E)
    code, report = _run(tmp_path, "classify-subspace", "--in", path, "--subspace", str(subspace))
    assert code == EXIT_OK
    assert report["result"]["kind"] == "subalgebra-no-natural-basis"


def cli_multiply(tmp_path):
    x = "[[1, 0], [0, 1]]"
    code, report = _run(tmp_path, "multiply", "--in", _algebra_file(tmp_path, e2()), "--x", x, "--y", x)
    assert code == EXIT_OK
    assert report["result"]["product"] == [[0.0, 0.0], [0.0, 0.0]]


def cli_nilindex(tmp_path):
    path = _algebra_file(tmp_path, evo.en(4))
    code, report = _run(tmp_path, "nilindex", "--in", path)
    assert code == EXIT_OK
    assert report["result"]["index"] == 9
    code, report = _run(tmp_path, "nilindex", "--in", path, "--cap", "4")
    assert code == EXIT_INCONCLUSIVE
    assert report["result"]["index"] is None


def cli_decompose_perm(tmp_path):
    code, report = _run(tmp_path, "decompose-perm", "--pi", "2,3,1,4", "--a", "1,2j,0,1")
    assert code == EXIT_OK
    assert report["result"]["chains"] == [3]
    assert report["result"]["cycles"] == [1]
    assert report["result"]["verification_error"] <= 1e-9
    assert report["input_digest"] is None


def cli_decompose_perm_invalid(tmp_path):
    assert _run(tmp_path, "decompose-perm", "--pi", "1,1", "--a", "1,1")[0] == EXIT_INPUT_ERROR
    assert _run(tmp_path, "decompose-perm", "--pi", "2,x", "--a", "1,1")[0] == EXIT_INPUT_ERROR


def cli_canonicalize_nilpotent(tmp_path):
    code, report = _run(tmp_path, "canonicalize-nilpotent", "--in", _algebra_file(tmp_path, evo.en(3)))
    assert code == EXIT_OK
    assert report["result"]["canonical"]["k"] == 3
    code, _ = _run(tmp_path, "canonicalize-nilpotent", "--in", _algebra_file(tmp_path, evo.es(3)))
    assert code == EXIT_INPUT_ERROR


def cli_solve_fixedpoint(tmp_path):
    path = _algebra_file(tmp_path, evo.EvolutionAlgebra.from_rows([[1, 0], [0, 1]]))
    code, report = _run(tmp_path, "solve-fixedpoint", "--in", path)
    assert code == EXIT_OK
    assert report["result"]["method"] == "small"
    assert report["result"]["root_count"] == 4
    assert report["result"]["full_support"] == [[[1.0, 0.0], [1.0, 0.0]]]
    code, report = _run(tmp_path, "solve-fixedpoint", "--in", path, "--method", "numeric")
    assert report["result"]["root_count"] == 4


def cli_conjecture51(tmp_path):
    code, report = _run(tmp_path, "conjecture51", "--n", "2", "--samples", "3", "--threads", "1", "--seed", "9")
    assert code == EXIT_OK
    assert report["seed"] == 9
    assert report["result"]["samples"] == 3
    assert report["result"]["dist"] == "gaussian"


def cli_conjecture51_documented_form(tmp_path):
    code, report = _run(tmp_path, "conjecture51", "--n", "3", "--samples", "4", "--seed", "7")
    assert code == EXIT_OK
    assert report["command"] == "conjecture51"
    assert report["result"]["n"] == 3
    assert report["result"]["success_fraction"] == 1.0


def cli_reduce53(tmp_path):
    code, report = _run(tmp_path, "reduce53", "--in", _algebra_file(tmp_path, evo.direct_sum(evo.es(1), evo.en(2))))
    assert code == EXIT_OK
    assert report["result"]["outcome"] == "conjectural-satisfies"


def cli_eps_precedence(tmp_path):
    path = _algebra_file(tmp_path, e2(), eps=1e-6)
    assert _run(tmp_path, "classify2", "--in", path)[1]["eps"] == 1e-6
    assert _run(tmp_path, "classify2", "--in", path, "--eps", "1e-3")[1]["eps"] == 1e-3
    assert _run(tmp_path, "classify2", "--in", _algebra_file(tmp_path, e2()))[1]["eps"] == 1e-9


def cli_config(tmp_path):
    assert _run(tmp_path, "config", "seed", "5")[0] == EXIT_OK
    code, report = _run(tmp_path, "config", "seed")
    assert report["result"] == {"seed": 5}
    assert _run(tmp_path, "classify2", "--in", _algebra_file(tmp_path, e2()))[1]["seed"] == 5
    assert _run(tmp_path, "config", "dist", "cauchy")[0] == EXIT_INPUT_ERROR
    code, report = _run(tmp_path, "config")
    assert report["result"]["dist"] == "gaussian"
