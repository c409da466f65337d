"""Exact minimal faithful permutation degrees of finite p-groups."""

from .errors import (
    AuditFailed,
    BadPrime,
    BoundExceeded,
    InconsistentPresentation,
    MalformedRule,
    MindegError,
    NotAbelian,
    NotFaithful,
    NotNormal,
    PrimeMismatch,
    UnknownName,
)
from .pcpres import Collector, PcPresentation, overlap_witness
from .groups import (
    DirectProductGroup,
    FiniteGroup,
    Homomorphism,
    PcGroup,
    QuotientGroup,
    build_pc_group,
    consistency_check,
    direct_product,
    generated_bits,
    quotient_group,
    trivial_group,
    verify_epimorphism,
)
from .lattice import (
    LatticeIndex,
    Subgroup,
    abelian_invariants,
    all_subgroups,
    center,
    core,
    core_bits,
    echelon_gens,
    has_abelian_normal_of_order,
    is_normal,
    normalizer,
    omega1_center,
    pc_presentation_from_subgroup,
    sift,
    socle_minimal_normals,
    subgroup_from_gens,
    subgroup_from_words,
)
from .mu import (
    build_permutation_rep,
    check_certificate,
    minimal_degree,
    minimal_family,
    mu_abelian_crosscheck,
    mu_bruteforce_oracle,
    mu_certificate,
)
from .catalog import ENTRIES, build_group, list_catalog, relation_audit, resolve
from .exceptional import (
    check_distinguished,
    dihedral_power_example,
    exceptional_scan,
    quaternion_power_example,
    verify_distinguished_entry,
)
from .claims import build_all

__version__ = "0.1.0"
