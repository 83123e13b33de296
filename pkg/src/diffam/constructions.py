"""Constructions of difference families, difference sets, and difference
matrices.  Every function re-verifies its output with the exhaustive checkers
before returning, so a successful return is a certificate.

The orbit constructions rest on one fact: when a group A of automorphisms of
G acts semiregularly on the nonzero elements with |A| = k, the A-orbits form
a (v, k, k-1) disjoint difference family — each orbit contributes every value
a(x) - b(x) exactly once per (a, b) pair.  When v*k is odd no orbit is fixed
by negation, so orbits split into {B, -B} pairs and picking one member of
each pair halves every difference count, giving a (v, k, (k-1)/2) family.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import itertools

from .algebra import (
    Element,
    GroupDescriptor,
    RingDescriptor,
    ScalarAction,
    abelian_iso,
    build_field,
    check_cap,
    cyclic_group,
    factorize,
    fixed_point_witness,
    invariant_factors,
    orbits,
    prime_power,
    product_group,
    unit_subgroup_of_order,
)
from .designs import (
    DDSParams,
    DSParams,
    DiffMatrix,
    Family,
    classify_family,
    verify_df,
    verify_dds,
    verify_ds,
    verify_hdm,
)

__all__ = [
    "ConstructionError",
    "NotSemiregularError",
    "DDSConstruction",
    "orbit_ddf",
    "orbit_ddf_split",
    "furino_ddf",
    "cyclotomic_half_ddf",
    "trivial_ds",
    "units_hdm",
    "product_ddf",
    "result1_ddf",
    "singer_ds",
    "dds_from_ds",
    "result3star_dds",
]


class ConstructionError(ValueError):
    """A construction precondition failed, or (never expected) an output
    failed its own verification."""


class NotSemiregularError(ConstructionError):
    """The supplied action fixes a nonzero element; carries the witness."""

    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


def _require(report, what: str) -> None:
    if not report.ok:
        raise ConstructionError(f"{what} failed verification: {report.message}")


# ---------------------------------------------------------------------------
# orbit families
# ---------------------------------------------------------------------------


def orbit_ddf(group: GroupDescriptor, action) -> Family:
    """The orbits of a semiregular order-k automorphism group on the nonzero
    elements, returned as a verified (v, k, k-1) disjoint difference family."""
    witness = fixed_point_witness(group, action)
    if witness is not None:
        x, j = witness
        raise NotSemiregularError(
            f"action is not semiregular: nonzero element {x} is fixed "
            f"(automorphism index {j})",
            witness,
        )
    blocks = orbits(group, action)
    family = Family(group, blocks)
    k = family.uniform_k()
    if blocks and k is None:
        raise ConstructionError("orbit sizes are not uniform")  # unreachable
    if blocks:
        _require(verify_df(family, k - 1), "orbit difference family")
        if classify_family(family) == "plain":
            raise ConstructionError("orbits overlap")  # unreachable
    return family


def orbit_ddf_split(group: GroupDescriptor, action) -> tuple[Family, Family]:
    """Split the orbit family of a semiregular order-k action into the two
    half-index (v, k, (k-1)/2) families given by negation pairing.

    Requires v*k odd; then no orbit equals its own negation, and the orbits
    fall into pairs {B, -B} whose halves each cover every nonzero element
    (k-1)/2 times.
    """
    witness = fixed_point_witness(group, action)
    if witness is not None:
        x, j = witness
        raise NotSemiregularError(
            f"action is not semiregular: nonzero element {x} is fixed "
            f"(automorphism index {j})",
            witness,
        )
    all_orbits = orbits(group, action)
    v = group.order
    k = len(all_orbits[0]) if all_orbits else 1
    if (v * k) % 2 == 0:
        raise ConstructionError(
            f"v*k = {v}*{k} is even; the negation split needs v*k odd"
        )
    neg = group.neg
    chosen: list[tuple[Element, ...]] = []
    mirrored: list[tuple[Element, ...]] = []
    taken: set[tuple[Element, ...]] = set()
    for orbit in all_orbits:
        if orbit in taken:
            continue
        negated = tuple(sorted(neg(x) for x in orbit))
        if negated == orbit:
            raise ConstructionError(
                f"orbit {orbit} is fixed by negation"
            )  # unreachable when v*k is odd
        chosen.append(orbit)
        mirrored.append(negated)
        taken.add(orbit)
        taken.add(negated)
    first = Family(group, chosen)
    second = Family(group, mirrored)
    half = (k - 1) // 2
    for fam in (first, second):
        _require(verify_df(fam, half), "half-index orbit family")
    if set(first.blocks) | set(second.blocks) != set(all_orbits):
        raise ConstructionError("split lost an orbit")  # unreachable
    return first, second


def _least_semiregular_unit(v: int, k: int) -> int:
    """The least residue u acting semiregularly on Z_v with order k:
    u^k = 1 (mod v) and every u^j - 1 (1 <= j < k) coprime to v."""
    if k == 1:
        return 1
    for u in range(2, v):
        if pow(u, k, v) != 1:
            continue
        if all(gcd(pow(u, j, v) - 1, v) == 1 for j in range(1, k)):
            return u
    raise ConstructionError(
        f"no unit of order {k} acts semiregularly on Z_{v}"
    )


def furino_ddf(base, k: int, half: bool = False) -> Family:
    """Unit-orbit (v, k, k-1) disjoint difference families.

    ``base`` is either an integer v — every prime divisor of which must be
    congruent to 1 mod k — giving orbits of the least semiregular unit of
    order k on Z_v, or a product ring whose field orders q_i are all
    congruent to 1 mod k, giving orbits of the canonical order-k unit
    subgroup.  With ``half=True`` (requires v*k odd) the negation split is
    applied and the first half, a (v, k, (k-1)/2) family, is returned.
    """
    if k < 1:
        raise ConstructionError(f"block size must be positive, got {k}")
    if isinstance(base, int):
        v = base
        if v < 1:
            raise ConstructionError(f"group order must be positive, got {v}")
        for p in factorize(v) if v > 1 else ():
            if (p - 1) % k != 0:
                raise ConstructionError(
                    f"prime divisor {p} of {v} is not congruent to 1 mod {k}"
                )
        group = cyclic_group(v)
        if v == 1:
            return Family(group, [])
        action = ScalarAction(group, _least_semiregular_unit(v, k))
    elif isinstance(base, RingDescriptor):
        for f in base.factors:
            if (f.q - 1) % k != 0:
                raise ConstructionError(
                    f"field order {f.q}: {f.q - 1} is not divisible by {k}"
                )
        group = base.additive_group()
        action = unit_subgroup_of_order(base, k)
    else:
        raise ConstructionError(f"unsupported base {base!r}: pass v or a ring")
    if half:
        if (group.order * k) % 2 == 0:
            raise ConstructionError(
                f"v*k = {group.order}*{k} is even; no half-index variant"
            )
        return orbit_ddf_split(group, action)[0]
    return orbit_ddf(group, action)


# ---------------------------------------------------------------------------
# the explicit half-index family from multiplicative classes
# ---------------------------------------------------------------------------


def _associate_classes(t: int) -> list[tuple[int, ...]]:
    """Nonempty supports of the 2^t - 1 associate classes, ordered by size
    then lexicographically; the support lists the non-null factor positions."""
    out: list[tuple[int, ...]] = []
    for size in range(1, t + 1):
        out.extend(itertools.combinations(range(t), size))
    return out


def cyclotomic_half_ddf(
    ring: RingDescriptor, k: int, sigma_choice: dict[int, int] | None = None
) -> Family:
    """A (v, k, (k-1)/2) disjoint difference family over a product of fields
    of orders q_i = 2*k*n_i + 1, for odd k.

    Blocks are the order-k unit-subgroup multiples of a transversal X built
    classwise: each associate class (a choice of null/non-null factors) has
    one non-null position replaced by the index set
    S_i = {w_i, w_i^2, ..., w_i^(n_i)} of powers of the canonical primitive
    element, which picks exactly one representative from each {B, -B} orbit
    pair inside that class.  ``sigma_choice`` optionally overrides the
    replaced position per class index (default: the lowest non-null
    position); any legal choice yields a valid family.
    """
    if k < 1 or k % 2 == 0:
        raise ConstructionError(f"block size must be odd and positive, got {k}")
    ns = []
    for f in ring.factors:
        if (f.q - 1) % (2 * k) != 0:
            raise ConstructionError(
                f"field order {f.q}: expected q = 2*{k}*n + 1 for a positive n"
            )
        ns.append((f.q - 1) // (2 * k))
    action = unit_subgroup_of_order(ring, k)
    subgroup = action.elements()
    index_sets = []
    for f, n in zip(ring.factors, ns):
        w = f.primitive_element()
        powers = []
        value = f.one
        for _ in range(n):
            value = f.mul(value, w)
            powers.append(value)
        index_sets.append(tuple(powers))
    t = len(ring.factors)
    classes = _associate_classes(t)
    if sigma_choice:
        for idx in sigma_choice:
            if not 0 <= idx < len(classes):
                raise ConstructionError(
                    f"class index {idx} out of range (have {len(classes)} classes)"
                )
    transversal: list[Element] = []
    for ci, support in enumerate(classes):
        pick = sigma_choice.get(ci, support[0]) if sigma_choice else support[0]
        if pick not in support:
            raise ConstructionError(
                f"class {ci} has support {support}; cannot replace factor {pick}"
            )
        coordinate_sets = []
        for i, f in enumerate(ring.factors):
            if i == pick:
                coordinate_sets.append(index_sets[i])
            elif i in support:
                coordinate_sets.append(tuple(range(1, f.q)))
            else:
                coordinate_sets.append((0,))
        transversal.extend(itertools.product(*coordinate_sets))
    v = ring.order
    if len(transversal) * 2 * k != v - 1:
        raise ConstructionError(
            f"transversal has {len(transversal)} members, expected {(v - 1) // (2 * k)}"
        )  # unreachable
    mul = ring.mul
    blocks = [tuple(mul(x, a) for a in subgroup) for x in transversal]
    family = Family(ring.additive_group(), blocks)
    _require(verify_df(family, (k - 1) // 2), "half-index family")
    if classify_family(family) == "plain":
        raise ConstructionError("transversal multiples overlap")  # unreachable
    return family


# ---------------------------------------------------------------------------
# difference sets and matrices used as product ingredients
# ---------------------------------------------------------------------------


def trivial_ds(k: int) -> tuple[tuple[Element, ...], GroupDescriptor]:
    """The nonzero elements of Z_{k+1}: a (k+1, k, k-1) difference set."""
    if k < 1:
        raise ConstructionError(f"block size must be positive, got {k}")
    group = cyclic_group(k + 1)
    dset = tuple((i,) for i in range(1, k + 1))
    _require(verify_ds(dset, group, DSParams(k + 1, k, k - 1)), "trivial difference set")
    return dset, group


def units_hdm(ring: RingDescriptor, k: int) -> DiffMatrix:
    """The k x v multiplication table of the canonical order-k unit subgroup
    against all ring elements: a (v, k, 1) homogeneous difference matrix.

    Row differences (u - u')x run over the whole ring as x does because
    u - u' is a unit; each row ux is a permutation for the same reason.
    """
    action = unit_subgroup_of_order(ring, k)
    mul = ring.mul
    columns = list(ring.elements())
    rows = [tuple(mul(a, x) for x in columns) for a in action.elements()]
    mat = DiffMatrix(ring.additive_group(), rows)
    _require(verify_hdm(mat), "unit multiplication table")
    return mat


# ---------------------------------------------------------------------------
# the product construction and its ready-made composition
# ---------------------------------------------------------------------------


def _one_uncovered(family: Family, what: str) -> Element:
    missing = family.uncovered()
    if len(missing) != 1:
        raise ConstructionError(
            f"{what} leaves {len(missing)} elements uncovered; need exactly 1"
        )
    return missing[0]


def product_ddf(family_g: Family, family_h: Family, hdm_h: DiffMatrix) -> Family:
    """Compose a (u, k, k-1) DDF in G and a (v, k, k-1) DDF in H — each
    covering all but one element — with a (v, k, 1) homogeneous difference
    matrix over H into a (u*v, k, k-1) DDF in G x H.

    Each G-block A = {a_1 < ... < a_k} spawns v product blocks
    {(a_i, M[i][j]) : i} (one per column j); each H-block B is lifted as
    {g0} x B with g0 the element missed in G.  Exactly (g0, h0) stays
    uncovered.
    """
    k = family_g.uniform_k()
    if k is None or k != family_h.uniform_k():
        raise ConstructionError("both families must share one block size")
    if hdm_h.k != k:
        raise ConstructionError(
            f"matrix has {hdm_h.k} rows, families have block size {k}"
        )
    if hdm_h.group != family_h.group:
        raise ConstructionError("matrix and second family live over different groups")
    _require(verify_df(family_g, k - 1), "first factor family")
    _require(verify_df(family_h, k - 1), "second factor family")
    if classify_family(family_g) == "plain" or classify_family(family_h) == "plain":
        raise ConstructionError("factor families must be disjoint")
    g0 = _one_uncovered(family_g, "first factor family")
    h0 = _one_uncovered(family_h, "second factor family")
    _require(verify_hdm(hdm_h), "homogeneous difference matrix")
    big = product_group(family_g.group, family_h.group)
    check_cap(big.order)
    blocks: list[tuple[Element, ...]] = []
    width = hdm_h.columns
    for block_a in family_g.blocks:
        for j in range(width):
            blocks.append(
                tuple(a + hdm_h.rows[i][j] for i, a in enumerate(block_a))
            )
    for block_b in family_h.blocks:
        blocks.append(tuple(g0 + y for y in block_b))
    family = Family(big, blocks)
    _require(verify_df(family, k - 1), "product family")
    if classify_family(family) == "plain":
        raise ConstructionError("product blocks overlap")  # unreachable
    leftover = _one_uncovered(family, "product family")
    if leftover != g0 + h0:
        raise ConstructionError("product family misses an unexpected element")
    return family


def result1_ddf(k: int, ring: RingDescriptor) -> Family:
    """A (v*(k+1), k, k-1) DDF in Z_{k+1} x R for a product ring R of field
    orders congruent to 1 mod k: the trivial difference set, the unit-orbit
    family over R, and the unit multiplication table composed via the
    product construction."""
    dset, zk = trivial_ds(k)
    family_g = Family(zk, [dset])
    family_h = furino_ddf(ring, k, half=False)
    return product_ddf(family_g, family_h, units_hdm(ring, k))


# ---------------------------------------------------------------------------
# hyperplane difference sets and divisible variants
# ---------------------------------------------------------------------------


def singer_ds(q: int, m: int) -> tuple[tuple[Element, ...], GroupDescriptor]:
    """The classical point/hyperplane difference set of PG(m-1, q): indices i
    in Z_v, v = (q^m - 1)/(q - 1), with trace(alpha^i) = 0 in GF(q^m) over
    GF(q).  Parameters ((q^m-1)/(q-1), (q^(m-1)-1)/(q-1), (q^(m-2)-1)/(q-1)).

    The trace of alpha^i is scale-invariant under GF(q)* (trace is
    GF(q)-linear), so membership depends only on i mod v.
    """
    pp = prime_power(q)
    if pp is None:
        raise ConstructionError(f"{q} is not a prime power")
    if m < 3:
        raise ConstructionError(f"need dimension >= 3, got {m}")
    p, a = pp
    check_cap(q**m)
    ext = build_field(p, a * m)
    alpha = ext.primitive_element()
    v = (q**m - 1) // (q - 1)
    params = DSParams(v, (q ** (m - 1) - 1) // (q - 1), (q ** (m - 2) - 1) // (q - 1))
    dset = []
    x = ext.one
    for i in range(v):
        if ext.trace(x, a) == 0:
            dset.append((i,))
        x = ext.mul(x, alpha)
    group = cyclic_group(v)
    _require(verify_ds(dset, group, params), "hyperplane difference set")
    return tuple(dset), group


@dataclass
class DDSConstruction:
    """A verified divisible difference set with its ambient group, the
    forbidden subgroup, and parameters."""

    elements: tuple[Element, ...]
    group: GroupDescriptor
    subgroup: tuple[Element, ...]
    params: DDSParams


def dds_from_ds(
    dset: Sequence[Element], group: GroupDescriptor, h: int
) -> DDSConstruction:
    """Lift a (v, k, lambda) difference set D in G to the divisible
    difference set D x Z_h in G x Z_h relative to {0} x Z_h, with parameters
    (v, h, k*h, k*h, lambda*h)."""
    if h < 1:
        raise ConstructionError(f"subgroup order must be positive, got {h}")
    block = tuple(sorted(set(dset)))
    if len(block) != len(tuple(dset)):
        raise ConstructionError("difference set input has repeated elements")
    from .designs import _single_block_counts  # single source for the count engine

    counts = _single_block_counts(group, block)
    zero = group.zero
    lam: int | None = None
    for x in group.elements():
        if x == zero:
            continue
        c = counts.get(x, 0)
        if lam is None:
            lam = c
        elif c != lam:
            raise ConstructionError(
                f"input is not a difference set: counts {lam} and {c} both occur"
            )
    if lam is None:
        lam = 0  # trivial group; no nonzero differences to balance
    k = len(block)
    base_params = DSParams(group.order, k, lam)
    _require(verify_ds(block, group, base_params), "difference set input")
    big = product_group(group, cyclic_group(h))
    check_cap(big.order)
    lifted = tuple(x + (j,) for x in block for j in range(h))
    subgroup = tuple(zero + (j,) for j in range(h))
    params = DDSParams(group.order, h, k * h, k * h, lam * h)
    _require(verify_dds(lifted, big, subgroup, params), "lifted divisible set")
    return DDSConstruction(tuple(sorted(lifted)), big, subgroup, params)


def result3star_dds(q: int, d: int, e: int, h: int) -> DDSConstruction:
    """The corrected divisible variant of the hyperplane family: lift the
    (q^d - 1)/(q - 1)-point hyperplane difference set by Z_n with
    n = h*(q-1)/e, then transport it along an explicit isomorphism into
    Z_((q^d - 1)/e) x Z_h.  Parameters:

        m = (q^d - 1)/(q - 1),    n = h*(q - 1)/e,
        k = lambda1 = h*(q^(d-1) - 1)/e,    lambda2 = h*(q^(d-2) - 1)/e.

    Requires e | q - 1, gcd(d, e) = 1, and 1 <= h <= e; those conditions
    make n integral and the two groups isomorphic.
    """
    if prime_power(q) is None:
        raise ConstructionError(f"{q} is not a prime power")
    if d < 3:
        raise ConstructionError(f"need dimension >= 3, got {d}")
    if e < 1 or (q - 1) % e != 0:
        raise ConstructionError(f"{e} does not divide q - 1 = {q - 1}")
    if gcd(d, e) != 1:
        raise ConstructionError(f"gcd(d, e) = gcd({d}, {e}) != 1")
    if not 1 <= h <= e:
        raise ConstructionError(f"need 1 <= h <= e, got h={h}, e={e}")
    dset, base_group = singer_ds(q, d)
    n = h * (q - 1) // e
    inner = dds_from_ds(dset, base_group, n)
    if (q**d - 1) % e != 0:
        raise ConstructionError(
            f"{e} does not divide q^d - 1 = {q**d - 1}"
        )  # unreachable given e | q - 1
    target = GroupDescriptor(((q**d - 1) // e, h))
    iso = abelian_iso(inner.group, target)
    if iso is None:
        raise ConstructionError(
            f"constructed group {inner.group!r} with invariant factors "
            f"{invariant_factors(inner.group)} is not isomorphic to target "
            f"{target!r} with invariant factors {invariant_factors(target)}"
        )
    moved = tuple(sorted(iso.apply(x) for x in inner.elements))
    moved_subgroup = tuple(sorted(iso.apply(x) for x in inner.subgroup))
    _require(
        verify_dds(moved, target, moved_subgroup, inner.params),
        "transported divisible set",
    )
    return DDSConstruction(moved, target, moved_subgroup, inner.params)
