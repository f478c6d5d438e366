"""clusterkit: exact seeds, mutations and morphisms for cluster algebras
of geometric type.

Everything computes over arbitrary-precision integers; there is no floating
point anywhere.  The library is organised as:

- laurent: sparse integer Laurent polynomials (values of cluster variables)
- exchange: extended exchange matrices and their mutation theory
- seeds: seeds, mutation, sub-seeds, amalgamated sums, gluing, isomorphism
- homs: seed homomorphisms
- morphisms: rooted cluster morphisms at bounded verification depth
- census: subalgebra census, finite type, Dynkin recognition
- io / service / cli: JSON schemas, the stateless evaluation core, the CLI
"""

from .laurent import LaurentPoly, Monomial, VarId, parse, render
from .exchange import (
    ExtMatrix,
    check_totally_sss,
    diagonal_unitization,
    is_acyclic,
    is_sign_skew_symmetric,
    mutate_matrix,
    principal_blocks,
    skew_symmetrizer,
)
from .seeds import (
    MutationSeq,
    Seed,
    SeedVar,
    SubseedSpec,
    amalgamate_partial,
    amalgamated_sum,
    apply_sequence,
    decompose,
    glue,
    is_connected,
    is_indecomposable,
    mutate_seed,
    new_initial_seed,
    seed_from_entries,
    seeds_isomorphic,
    subseed,
)
from .homs import (
    SeedHom,
    SignClass,
    check_seed_hom,
    compose,
    hom_is_injective,
    hom_is_isomorphism,
    hom_is_surjective,
    image_seed,
    mutate_hom,
    sign_classify,
)
from .morphisms import (
    MorphSpec,
    canonical_gluing,
    check_cm12,
    check_cm3,
    contraction_morphism,
    contraction_seed,
    decompose_surjective,
    glueable,
    induce_morphism,
    restricted_hom,
    specialisation,
    unitary_morphism,
)
from .census import (
    Census,
    census,
    count_zero_submatrices,
    dynkin_recognition,
    finite_mutation_type,
    finite_type,
    is_rooted_subalgebra_spec,
)

__version__ = "0.1.0"
