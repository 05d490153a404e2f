#!/usr/bin/env python3
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
import logging
import os.path as op
import platform
import shlex
from subprocess import run
import venv

_ROOTDIR = op.abspath(op.dirname(__file__))
_SYSTEM = platform.system()


def _block(name, prerequisites=None):
    def real_decorator(block_func):
        block_func.name = name
        block_func.prerequisites = prerequisites if prerequisites else []
        return block_func

    return real_decorator


def _quote(s):
    if not s or " " in s:
        return f'"{s}"'
    assert '"' not in s
    return s


def _cmd_join(*cmds):
    if _SYSTEM == "Windows":
        return " ".join(_quote(cmd) for cmd in cmds)
    return shlex.join(cmds)


def _rd(d):
    return f"(if exist {d} rd /s /q {d})" if _SYSTEM == "Windows" else f"$(RM) -r {d}"


def _pip_requirements(package):
    return "$(PIP) " + _cmd_join("install", "-r", op.join(".", package, "requirements.txt"))


def _pip_editable(package):
    return "$(PIP) " + _cmd_join("-v", "install", "-e", op.join(".", package))


@_block("pyevolib-deps-install")
def _pyevolib_deps_install(cfg):
    return [_pip_requirements("pyevolib")]


@_block("pyevolib-install", [_pyevolib_deps_install])
def _pyevolib_install(cfg):
    return [_pip_editable("pyevolib")]


@_block("pyevolib-utils-deps-install", [_pyevolib_install])
def _pyevolib_utils_deps_install(cfg):
    return [_pip_requirements("pyevolib-utils")]


@_block("pyevolib-utils-install", [_pyevolib_utils_deps_install])
def _pyevolib_utils_install(cfg):
    return [_pip_editable("pyevolib-utils")]


@_block("all", [_pyevolib_utils_install])
def _all(cfg):
    activate = op.join(cfg.venv_bin_path, "Activate.ps1" if _SYSTEM == "Windows" else "activate")
    echo = ["", "Build completed.", "", "You can now enter the venv with:", " " * 4 + activate]
    if _SYSTEM == "Windows":
        return [f"@echo.{e}" for e in echo]
    return [f'@echo "    {e}"' for e in echo]


@_block("tests", [_pyevolib_utils_install])
def _tests(cfg):
    cmd = ["-m", "pytest"]
    if cfg.args.coverage:
        cmd += ["--cov=pyevolib", "--cov=pyevolib_utils", "--cov-report=xml"]
    return ["$(PYTHON) " + _cmd_join(*cmd)]


@_block("tests-full", [_pyevolib_utils_install])
def _tests_full(cfg):
    if _SYSTEM == "Windows":
        return ["set EVOLIB_TESTS_FULL=1 && $(PYTHON) " + _cmd_join("-m", "pytest")]
    return ["EVOLIB_TESTS_FULL=1 $(PYTHON) " + _cmd_join("-m", "pytest")]


@_block("htmldoc-deps-install")
def _htmldoc_deps_install(cfg):
    return ["$(PIP) " + _cmd_join("install", "-r", op.join(".", "doc", "requirements.txt"))]


@_block("htmldoc", [_htmldoc_deps_install])
def _htmldoc(cfg):
    return [_cmd_join("sphinx-build", "-W", "doc", op.join("builddir", "doc"))]


@_block("clean")
def _clean(cfg):
    return [
        _rd(op.join("pyevolib", "build")),
        _rd(op.join("pyevolib", "pyevolib.egg-info")),
        _rd(op.join("pyevolib-utils", "pyevolib_utils.egg-info")),
        _rd("builddir"),
    ]


def _get_make_vars(cfg):
    # Python must not be picked from the PATH but from the venv
    python = op.join(cfg.venv_bin_path, "python")
    return dict(
        PYTHON=python,
        PIP=_cmd_join(python, "-m", "pip"),
    )


def _get_makefile_rec(cfg, blocks, declared):
    ret = ""
    for block in blocks:
        if block.name in declared:
            continue
        declared |= {block.name}
        req_names = " ".join(r.name for r in block.prerequisites)
        req = f" {req_names}" if req_names else ""
        commands = "\n".join("\t" + cmd for cmd in block(cfg))
        ret += f"{block.name}:{req}\n{commands}\n"
        ret += _get_makefile_rec(cfg, block.prerequisites, declared)
    return ret


def _get_makefile(cfg, blocks):
    make_vars = _get_make_vars(cfg)
    ret = "\n".join(f"{k} = {v}" for k, v in make_vars.items()) + "\n"
    declared = set()
    ret += _get_makefile_rec(cfg, blocks, declared)
    ret += ".PHONY: " + " ".join(sorted(declared)) + "\n"
    return ret


class _EnvBuilder(venv.EnvBuilder):
    def __init__(self):
        super().__init__(with_pip=True, prompt="evolib")

    def post_setup(self, context):
        pip_install = [context.env_exe, "-m", "pip", "install", "pytest", "pytest-cov"]
        logging.info("install test dependencies: %s", _cmd_join(*pip_install))
        run(pip_install, check=True)


def _build_venv(args):
    if op.exists(args.venv_path):
        logging.warning("Python virtual env already exists at %s", args.venv_path)
        return
    logging.info("creating Python virtualenv: %s", args.venv_path)
    _EnvBuilder().create(args.venv_path)


class _Config:
    def __init__(self, args):
        self.args = args
        self.venv_path = op.abspath(args.venv_path)
        self.venv_bin_path = op.join(self.venv_path, "Scripts" if _SYSTEM == "Windows" else "bin")


def _run():
    parser = argparse.ArgumentParser(description="Create and manage a standalone evolib virtual environment")
    parser.add_argument("-p", "--venv-path", default=op.join(_ROOTDIR, "venv"), help="Virtual environment directory")
    parser.add_argument("--coverage", action="store_true", help="Code coverage")
    args = parser.parse_args()

    logging.basicConfig(level="INFO")

    _build_venv(args)
    cfg = _Config(args)
    blocks = [_all, _tests, _tests_full, _htmldoc, _clean]

    dst_makefile = op.join(_ROOTDIR, "Makefile")
    logging.info("writing %s", dst_makefile)
    with open(dst_makefile, "w") as f:
        f.write(_get_makefile(cfg, blocks))


if __name__ == "__main__":
    _run()
