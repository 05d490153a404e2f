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
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

import pyevolib as evo


class SchemaError(evo.EvolibError):
    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


def _number(value, location: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number, got {type(value).__name__}", location)
    if not math.isfinite(value):
        raise evo.NonFiniteError(f"{location}: non-finite number {value}")
    return float(value)


def decode_complex(value, location: str) -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise SchemaError("expected a [re, im] pair", location)
    return complex(_number(value[0], f"{location}[0]"), _number(value[1], f"{location}[1]"))


def encode_complex(z) -> List[float]:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def decode_vector(value, dim: int, location: str) -> np.ndarray:
    if not isinstance(value, list):
        raise SchemaError("expected a list of [re, im] pairs", location)
    if len(value) != dim:
        raise SchemaError(f"expected {dim} coordinates, got {len(value)}", location)
    return np.array([decode_complex(v, f"{location}[{i}]") for i, v in enumerate(value)], dtype=complex)


def encode_vector(vector) -> List[List[float]]:
    return [encode_complex(z) for z in np.asarray(vector).reshape(-1)]


def encode_matrix(matrix) -> List[List[List[float]]]:
    return [encode_vector(row) for row in np.asarray(matrix)]


def parse_document(text: str) -> Dict[str, Any]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(e.msg, f"line {e.lineno} column {e.colno}")
    if not isinstance(doc, dict):
        raise SchemaError("expected a JSON object", "$")
    return doc


def decode_matrix(doc: Dict[str, Any]) -> np.ndarray:
    dim = doc.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise SchemaError("expected a positive integer", "dim")
    rows = doc.get("matrix")
    if not isinstance(rows, list):
        raise SchemaError("expected a list of rows", "matrix")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            count = len(row) if isinstance(row, list) else type(row).__name__
            raise SchemaError(f"row {i + 1}: expected {dim} entries, got {count}", f"matrix[{i}]")
    if len(rows) != dim:
        raise SchemaError(f"expected {dim} rows, got {len(rows)}", "matrix")
    return np.array([decode_vector(row, dim, f"matrix[{i}]") for i, row in enumerate(rows)])


def algebra_from_document(doc: Dict[str, Any]) -> Tuple[evo.EvolutionAlgebra, Optional[float]]:
    matrix = decode_matrix(doc)
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaError("expected a string", "name")
    eps = doc.get("eps")
    if eps is not None:
        eps = _number(eps, "eps")
        if eps <= 0:
            raise SchemaError("must be positive", "eps")
    return evo.EvolutionAlgebra(matrix, name=name), eps


def parse_algebra(text: str) -> evo.EvolutionAlgebra:
    return algebra_from_document(parse_document(text))[0]


def algebra_document(E: evo.EvolutionAlgebra, eps: Optional[float] = None) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"dim": E.dim, "matrix": encode_matrix(E.matrix)}
    if E.name is not None:
        doc["name"] = E.name
    if eps is not None:
        doc["eps"] = eps
    return doc


def serialize_algebra(E: evo.EvolutionAlgebra, eps: Optional[float] = None) -> str:
    return json.dumps(algebra_document(E, eps))


def parse_vectors(text: str, dim: int) -> np.ndarray:
    doc = parse_document(text)
    vectors = doc.get("vectors")
    if not isinstance(vectors, list):
        raise SchemaError("expected a list of vectors", "vectors")
    if not vectors:
        return np.zeros((0, dim), dtype=complex)
    return np.array([decode_vector(v, dim, f"vectors[{i}]") for i, v in enumerate(vectors)])


def parse_element(text: str, dim: int, location: str = "x") -> np.ndarray:
    try:
        value = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(e.msg, location)
    return decode_vector(value, dim, location)


def one_based(indices: Sequence[int]) -> List[int]:
    return [int(i) + 1 for i in indices]


def subspace_record(S: evo.Subspace) -> Dict[str, Any]:
    return {"rank": S.rank, "echelon_basis": encode_matrix(S.basis)}


def classification_record(cls: evo.SubspaceClass) -> Dict[str, Any]:
    record = {
        "kind": cls.kind.value,
        "certainty": cls.certainty.value,
        "subspace": subspace_record(cls.subspace),
    }
    if cls.natural_basis is not None:
        record["natural_basis"] = encode_matrix(cls.natural_basis)
    if cls.extension is not None:
        record["extension"] = encode_matrix(cls.extension)
    return record


def witness_record(witness: Optional[evo.Witness]) -> Optional[Dict[str, Any]]:
    if witness is None:
        return None
    return {
        "generators": encode_matrix(witness.generators),
        "classification": classification_record(witness.classification),
    }


def canonical_record(form: Optional[evo.CanonicalForm]) -> Optional[Dict[str, Any]]:
    if form is None:
        return None
    return {"k": form.k, "matrix": encode_matrix(form.matrix.matrix), "change": encode_matrix(form.change.matrix)}


def dim2_record(dim2: Optional[evo.Dim2Class]) -> Optional[Dict[str, Any]]:
    if dim2 is None:
        return None
    return {"tag": dim2.tag.value, "params": [encode_complex(p) for p in dim2.params]}


def decomposition_record(report: evo.DecompositionReport, error: Optional[float] = None) -> Dict[str, Any]:
    record = {
        "cycles": list(report.cycles),
        "chains": list(report.chains),
        "blocks": [{"kind": b.kind, "size": b.size, "vertices": one_based(b.vertices)} for b in report.blocks],
        "change": encode_matrix(report.witness.matrix),
    }
    if error is not None:
        record["verification_error"] = error
    return record


def decision_record(decision: evo.PDecision) -> Dict[str, Any]:
    return {
        "verdict": decision.verdict.value,
        "route": decision.route.value,
        "exact": decision.exact,
        "witness": witness_record(decision.witness),
        "canonical": canonical_record(decision.canonical),
        "dim2": dim2_record(decision.dim2),
        "decomposition": decomposition_record(decision.decomposition) if decision.decomposition else None,
    }


def solutions_record(solutions: evo.SolutionSet) -> Dict[str, Any]:
    return {
        "roots": encode_matrix(np.array(solutions.roots).reshape(len(solutions), -1)),
        "root_count": len(solutions),
        "full_support": encode_matrix(np.array(solutions.full_support).reshape(len(solutions.full_support), -1)),
        "path_failures": solutions.path_failures,
    }


def campaign_record(report: evo.CampaignReport) -> Dict[str, Any]:
    return {
        "n": report.n,
        "samples": report.samples,
        "seed": report.seed,
        "dist": report.dist,
        "success_count": report.success_count,
        "success_fraction": report.success_fraction,
        "full_count_fraction": report.full_count_fraction,
        "root_counts": list(report.root_counts),
        "path_failures": report.path_failures,
        "closed_form_mismatches": report.closed_form_mismatches,
        "failures": [{"index": f.index, "matrix": encode_matrix(f.matrix)} for f in report.failures],
        "elapsed": report.elapsed,
    }


def pipeline_record(report: evo.PipelineReport) -> Dict[str, Any]:
    return {
        "outcome": report.outcome.value,
        "witness": witness_record(report.witness),
        "presentation": encode_matrix(report.presentation.matrix) if report.presentation is not None else None,
        "change": encode_matrix(report.change.matrix),
        "certificate": encode_matrix(report.certificate.matrix) if report.certificate is not None else None,
        "canonical": canonical_record(report.canonical),
        "trace": [{"level": s.level, "zero_rows": one_based(s.zero_rows), "action": s.action} for s in report.trace],
    }


def report_document(
    command: str,
    argv: Sequence[str],
    result: Dict[str, Any],
    input_digest: Optional[str] = None,
    seed: Optional[int] = None,
    eps: Optional[float] = None,
    elapsed: Optional[float] = None,
) -> Dict[str, Any]:
    return {
        "tool": "evolib",
        "version": evo.__version__,
        "command": command,
        "argv": list(argv),
        "input_digest": input_digest,
        "seed": seed,
        "eps": eps,
        "result": result,
        "elapsed": elapsed,
    }
