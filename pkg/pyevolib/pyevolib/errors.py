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


class EvolibError(Exception):
    pass


class DimensionError(EvolibError):
    pass


class NonFiniteError(EvolibError):
    pass


class SingularError(EvolibError):
    pass


class NotNaturalError(EvolibError):
    pass


class InvalidPermutationError(EvolibError):
    pass


class NotNilpotentError(EvolibError):
    pass


class CapExceededError(EvolibError):
    def __init__(self, cap: int):
        super().__init__(f"power sequence did not settle within cap={cap}")
        self.cap = cap
