"""Finite rings and modules with exhaustively checked structure tables."""
from .constructions import (
    coequalizer,
    image,
    image_factorization,
    kernel,
    pullback,
)
from .corpus import (
    corpus_rings,
    f2_times_f2_pair,
    f2_times_f2_ring,
    f2xy_ring,
    probe_modules,
    radical_quotient,
    ring_by_spec,
    upper_triangular_f2_ring,
)
from .homs import (
    ENUM_BUDGET,
    HomModule,
    TensorProduct,
    bilinearity_failure,
    dd_unit,
    double_dual,
    dual,
    dual_map,
    enumerate_homs,
    extend_generator_images,
    free_extension,
    generating_set,
    hom_module,
    is_reflexive,
    is_separated,
    search_homs_by_backtracking,
    tensor_product,
)
from .modules import (
    FiniteModule,
    LATTICE_BUDGET,
    LinearMap,
    SubmoduleHandle,
    enumerate_module_structures,
    enumerate_submodules,
    free_basis_index,
    free_index,
    free_module,
    free_tuple,
    full_submodule,
    identity_map,
    intersect_submodules,
    linear_map,
    linearity_failure,
    make_module,
    product_module,
    quotient_module,
    ring_module,
    submodule_module,
    submodule_span,
    trivial_submodule,
    validate_module,
    zero_map,
    zero_module,
)
from .rings import FiniteRing, make_ring, make_table_ring, make_zmod, noncommutativity_witness
from .tableio import parse, serialize
