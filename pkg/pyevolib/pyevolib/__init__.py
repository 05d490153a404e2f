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

__version__ = "0.1.0"

from .algebra import (
    DEFAULT_TOLERANCE,
    BasisChange,
    Element,
    EvolutionAlgebra,
    Subspace,
    Tolerance,
    abelian,
    apply_basis_change,
    as_element,
    closure,
    direct_sum,
    en,
    es,
    is_natural,
    is_subalgebra,
    make_basis_change,
    multiply,
    rank_of_structure_matrix,
    square_space,
)
from .condition_p import (
    CanonicalForm,
    Dim2Class,
    Dim2Tag,
    PDecision,
    Route,
    Verdict,
    Witness,
    classify_dim2,
    decide_p,
    decide_p_dim2,
    decide_p_nilpotent,
    find_idempotents,
    find_null_square,
)
from .conjectures import (
    DISTRIBUTIONS,
    CampaignReport,
    PipelineOutcome,
    PipelineReport,
    Reduction,
    order_by_nonzero_squares,
    reduce_iteration1,
    reduce_pipeline,
    sample_campaign,
)
from .errors import (
    CapExceededError,
    DimensionError,
    EvolibError,
    InvalidPermutationError,
    NonFiniteError,
    NotNaturalError,
    NotNilpotentError,
    SingularError,
)
from .fixedpoint import (
    FixedPointConfig,
    FixedPointSystem,
    SolutionSet,
    full_support_solution,
    idempotent_system_of,
    solve_numeric,
    solve_small,
)
from .natural_basis import (
    BilinearFamily,
    Certainty,
    Search,
    SubspaceClass,
    SubspaceKind,
    annihilator,
    classify_span,
    classify_subspace,
    extend_to_natural_basis,
    find_diagonal_family,
    find_natural_basis,
    restrict_product,
)
from .nilpotency import (
    PowerSequence,
    PowerStatus,
    ProductDigraph,
    is_nilpotent,
    is_zn_form,
    nilpotency_index,
    power_sequence,
)
from .permutation import (
    Block,
    DecompositionReport,
    PermutationSpec,
    build,
    canonical_algebra,
    decompose,
    is_permutation_type,
    realize_isomorphism,
    spec_from_matrix,
    verification_error,
)
