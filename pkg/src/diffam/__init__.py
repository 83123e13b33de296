"""Difference families, difference sets, and difference matrices over finite
abelian groups: constructions, exhaustive verification, and admissibility."""

from .algebra import (
    GROUP_ORDER_CAP,
    ExhaustiveCapError,
    FieldDescriptor,
    GroupDescriptor,
    Isomorphism,
    RingDescriptor,
    ScalarAction,
    UnitAction,
    abelian_iso,
    build_field,
    build_ring,
    cyclic_group,
    invariant_factors,
    is_semiregular,
    orbits,
    product_group,
    unit_subgroup_of_order,
)
from .admissibility import (
    IdentityVerdict,
    Result3Verdict,
    dds_counting_identity,
    ds_admissible,
    proportional_pair_admissible,
    refute_result3,
)
from .constructions import (
    ConstructionError,
    DDSConstruction,
    NotSemiregularError,
    cyclotomic_half_ddf,
    dds_from_ds,
    furino_ddf,
    orbit_ddf,
    orbit_ddf_split,
    product_ddf,
    result1_ddf,
    result3star_dds,
    singer_ds,
    trivial_ds,
    units_hdm,
)
from .designs import (
    DDSParams,
    DSParams,
    DiffMatrix,
    DiffMultiset,
    Family,
    Report,
    classify_family,
    delta_multiset,
    dm_to_hdm,
    extend_to_pdf,
    hdm_to_dm,
    normalize_dm,
    verify_dds,
    verify_df,
    verify_dm,
    verify_ds,
    verify_hdm,
)
from .fileformat import DesignFile, load_design, save_design

__version__ = "0.1.0"
