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

import argparse
import json
import logging
import os
import sys
import time
from typing import Callable, Dict, Optional, Tuple

import pyevolib as evo
from pyevolib_utils import serialize
from pyevolib_utils.config import Config
from pyevolib_utils.misc import digest, read_input

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_INCONCLUSIVE = 3


class _Context:
    """Resolved settings and input for one command: flag > environment > document > config > default"""

    def __init__(self, pargs, config: Config):
        self.pargs = pargs
        self.config = config
        self.text: Optional[str] = None
        self.algebra: Optional[evo.EvolutionAlgebra] = None
        doc_eps = None
        if getattr(pargs, "input", None):
            self.text = read_input(pargs.input)
            self.algebra, doc_eps = serialize.algebra_from_document(serialize.parse_document(self.text))
        self.eps = self._pick("eps", doc_eps)
        self.seed = self._pick("seed")
        self.trials = self._pick("trials")
        self.budget = self._pick("budget")
        self.tol = evo.Tolerance(self.eps)

    def _pick(self, key, document_value=None):
        value = getattr(self.pargs, key, None)
        if value is not None:
            return value
        if document_value is not None:
            return document_value
        return self.config.get(key)

    def fixedpoint_config(self) -> evo.FixedPointConfig:
        return evo.FixedPointConfig(
            residual_tol=self._pick("residual_tol"),
            dedup_tol=self._pick("dedup_tol"),
            support_eps=self._pick("support_eps"),
            seed=self.seed,
        )

    @property
    def digest(self) -> Optional[str]:
        return digest(self.text) if self.text is not None else None


def _cmd_multiply(ctx: _Context) -> Tuple[dict, int]:
    E = ctx.algebra
    x = serialize.parse_element(ctx.pargs.x, E.dim, "x")
    y = serialize.parse_element(ctx.pargs.y, E.dim, "y")
    return {"product": serialize.encode_vector(evo.multiply(E, x, y))}, EXIT_OK


def _cmd_classify_subspace(ctx: _Context) -> Tuple[dict, int]:
    E = ctx.algebra
    vectors = serialize.parse_vectors(read_input(ctx.pargs.subspace), E.dim)
    cls = evo.classify_span(E, vectors, trials=ctx.trials, seed=ctx.seed, tol=ctx.tol)
    code = EXIT_OK if cls.certainty == evo.Certainty.PROVED else EXIT_INCONCLUSIVE
    return serialize.classification_record(cls), code


def _cmd_nilpotency(ctx: _Context) -> Tuple[dict, int]:
    nilpotent, order = evo.is_nilpotent(ctx.algebra, ctx.tol)
    return {"nilpotent": nilpotent, "order": serialize.one_based(order) if order else None}, EXIT_OK


def _cmd_nilindex(ctx: _Context) -> Tuple[dict, int]:
    cap = ctx.pargs.cap if ctx.pargs.cap is not None else 2 ** (ctx.algebra.dim - 1) + 2
    try:
        index = evo.nilpotency_index(ctx.algebra, cap, ctx.tol)
    except evo.CapExceededError as e:
        logging.warning("%s", e)
        return {"index": None, "nilpotent": None, "cap": cap}, EXIT_INCONCLUSIVE
    return {"index": index, "nilpotent": index is not None, "cap": cap}, EXIT_OK


def _parse_pi(text: str):
    try:
        return tuple(int(v) - 1 for v in text.split(","))
    except ValueError:
        raise serialize.SchemaError("expected comma separated integers", "--pi")


def _parse_coefficients(text: str):
    try:
        return [complex(v.strip()) for v in text.split(",")]
    except ValueError:
        raise serialize.SchemaError("expected comma separated complex literals", "--a")


def _cmd_decompose_perm(ctx: _Context) -> Tuple[dict, int]:
    spec = evo.PermutationSpec(_parse_pi(ctx.pargs.pi), _parse_coefficients(ctx.pargs.a))
    report = evo.decompose(spec, ctx.tol)
    error = evo.verification_error(spec, report, ctx.tol)
    return serialize.decomposition_record(report, error), EXIT_OK


def _cmd_classify2(ctx: _Context) -> Tuple[dict, int]:
    return serialize.dim2_record(evo.classify_dim2(ctx.algebra, ctx.tol)), EXIT_OK


def _decision_code(verdict: evo.Verdict) -> int:
    return EXIT_INCONCLUSIVE if verdict == evo.Verdict.UNKNOWN else EXIT_OK


def _cmd_decide_p(ctx: _Context) -> Tuple[dict, int]:
    decision = evo.decide_p(ctx.algebra, budget=ctx.budget, trials=ctx.trials, seed=ctx.seed, tol=ctx.tol)
    return serialize.decision_record(decision), _decision_code(decision.verdict)


def _cmd_canonicalize_nilpotent(ctx: _Context) -> Tuple[dict, int]:
    decision = evo.decide_p_nilpotent(ctx.algebra, trials=ctx.trials, seed=ctx.seed, tol=ctx.tol)
    return serialize.decision_record(decision), _decision_code(decision.verdict)


def _cmd_solve_fixedpoint(ctx: _Context) -> Tuple[dict, int]:
    system = evo.FixedPointSystem(ctx.algebra.matrix)
    cfg = ctx.fixedpoint_config()
    method = ctx.pargs.method
    if method == "auto":
        method = "small" if system.n <= 2 else "numeric"
    solutions = evo.solve_small(system, cfg) if method == "small" else evo.solve_numeric(system, cfg)
    record = serialize.solutions_record(solutions)
    record["method"] = method
    return record, EXIT_OK


def _cmd_conjecture51(ctx: _Context) -> Tuple[dict, int]:
    pargs = ctx.pargs
    threads = pargs.threads
    if threads is None and not os.environ.get("EVOLIB_THREADS"):
        threads = ctx.config.get("threads")
    dist = pargs.dist or ctx.config.get("dist")
    report = evo.sample_campaign(pargs.n, pargs.samples, ctx.seed, dist, ctx.fixedpoint_config(), threads)
    return serialize.campaign_record(report), EXIT_OK


def _cmd_reduce53(ctx: _Context) -> Tuple[dict, int]:
    report = evo.reduce_pipeline(ctx.algebra, ctx.fixedpoint_config(), trials=ctx.trials, seed=ctx.seed, tol=ctx.tol)
    code = EXIT_INCONCLUSIVE if report.outcome == evo.PipelineOutcome.UNKNOWN else EXIT_OK
    return serialize.pipeline_record(report), code


def _cmd_config(ctx: _Context) -> Tuple[dict, int]:
    pargs, config = ctx.pargs, ctx.config
    if pargs.value is not None:
        try:
            value = json.loads(pargs.value)
        except json.JSONDecodeError:
            value = pargs.value
        try:
            config.set_(pargs.key, value)
        except (KeyError, ValueError) as e:
            raise serialize.SchemaError(str(e), pargs.key)
        config.save()
    if pargs.key is not None:
        return {pargs.key: config.get(pargs.key)}, EXIT_OK
    return dict(config.items()), EXIT_OK


_COMMANDS: Dict[str, Tuple[Callable[[_Context], Tuple[dict, int]], str]] = {
    "multiply": (_cmd_multiply, "multiply two elements"),
    "classify-subspace": (_cmd_classify_subspace, "classify a subspace given by spanning vectors"),
    "nilpotency": (_cmd_nilpotency, "decide nilpotency with a triangularizing permutation"),
    "nilindex": (_cmd_nilindex, "compute the nilpotency index"),
    "decompose-perm": (_cmd_decompose_perm, "decompose an algebra of permutation type"),
    "classify2": (_cmd_classify2, "classify a 2-dimensional algebra"),
    "decide-p": (_cmd_decide_p, "decide condition P"),
    "canonicalize-nilpotent": (_cmd_canonicalize_nilpotent, "canonical form of a nilpotent algebra"),
    "solve-fixedpoint": (_cmd_solve_fixedpoint, "solve x_i^2 = (Mx)_i"),
    "conjecture51": (_cmd_conjecture51, "sample full-support solutions over random matrices"),
    "reduce53": (_cmd_reduce53, "run the level-by-level reduction"),
    "config": (_cmd_config, "show or change the persistent defaults"),
}

_NO_INPUT = {"decompose-perm", "conjecture51", "config"}


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--eps", type=float, help="zero tolerance")
    parser.add_argument("--seed", type=int, help="seed of every randomized search")
    parser.add_argument("--out", dest="out", help="write the report to this file instead of standard output")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-q", "--quiet", action="store_true", help="only log warnings and errors")
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log debugging information")
    return parser


def _build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="evolib", description="Evolution algebra toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {evo.__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="command", required=True)
    for name, (_, help_text) in _COMMANDS.items():
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        if name not in _NO_INPUT:
            sub.add_argument("--in", dest="input", required=True, help="algebra document, '-' for standard input")
        if name in ("classify-subspace", "decide-p", "canonicalize-nilpotent", "reduce53"):
            sub.add_argument("--trials", type=int, help="random combinations tried per natural basis search")
        if name in ("solve-fixedpoint", "conjecture51", "reduce53"):
            sub.add_argument("--residual-tol", dest="residual_tol", type=float, help="root acceptance residual")
            sub.add_argument("--dedup-tol", dest="dedup_tol", type=float, help="distance under which roots merge")
            sub.add_argument("--support-eps", dest="support_eps", type=float, help="smallest full-support coordinate")
        if name == "multiply":
            sub.add_argument("--x", required=True, help="first factor as a JSON list of [re, im] pairs")
            sub.add_argument("--y", required=True, help="second factor as a JSON list of [re, im] pairs")
        elif name == "classify-subspace":
            sub.add_argument("--subspace", required=True, help='document {"vectors": [...]}')
        elif name == "nilindex":
            sub.add_argument("--cap", type=int, help="largest power computed (default 2^(n-1)+2)")
        elif name == "decompose-perm":
            sub.add_argument("--pi", required=True, help="1-based images, e.g. 2,3,1")
            sub.add_argument("--a", required=True, help="coefficients as complex literals, e.g. 1,1j,0")
        elif name == "decide-p":
            sub.add_argument("--budget", type=int, help="random starts of the idempotent search")
        elif name == "solve-fixedpoint":
            sub.add_argument("--method", choices=("auto", "small", "numeric"), default="auto")
        elif name == "conjecture51":
            sub.add_argument("--n", type=int, required=True, help="matrix size")
            sub.add_argument("--samples", type=int, required=True, help="number of random matrices")
            sub.add_argument("--dist", choices=list(evo.DISTRIBUTIONS.keys()), help="entry distribution")
            sub.add_argument("--threads", type=int, help="worker threads (default EVOLIB_THREADS or CPU count)")
        elif name == "config":
            sub.add_argument("key", nargs="?", choices=list(Config.TYPES.keys()))
            sub.add_argument("value", nargs="?", help="new value, parsed as JSON when possible")
    return parser


def _write_report(document: dict, out: Optional[str]):
    data = json.dumps(document, indent=2) + "\n"
    if out:
        with open(out, "w") as f:
            f.write(data)
    else:
        sys.stdout.write(data)


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    pargs = _build_parser().parse_args(argv)

    level = logging.WARNING if pargs.quiet else logging.DEBUG if pargs.verbose else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s", stream=sys.stderr)

    func, _ = _COMMANDS[pargs.command]
    start = time.perf_counter()
    try:
        ctx = _Context(pargs, Config())
        result, code = func(ctx)
    except (evo.EvolibError, ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT_ERROR
    elapsed = time.perf_counter() - start

    document = serialize.report_document(
        pargs.command, argv, result, ctx.digest, seed=ctx.seed, eps=ctx.eps, elapsed=elapsed
    )
    try:
        _write_report(document, pargs.out)
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT_ERROR
    return code
