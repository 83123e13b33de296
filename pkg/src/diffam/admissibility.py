"""Parameter arithmetic for difference sets and their divisible variants.

Everything here is exact integer counting.  A (v, k, lambda) difference set
produces k*(k-1) ordered differences spread evenly over v - 1 nonzero
elements, so

    lambda * (v - 1) = k * (k - 1)

is necessary.  Scaling an admissible triple to (mu*v, mu*k, mu*lambda)
leaves the two sides differing by mu*(mu - 1)*k*(v - k)/(v - 1), so a
nondegenerate scaled triple stays admissible only when mu = 1; the reported
residual drops the positive factors and keeps the telling one,
(v - k)*(mu - 1).  The divisible analogue counts subgroup and non-subgroup
differences separately:

    k * (k - 1) = lambda1 * (n - 1) + lambda2 * n * (m - 1).

These verdicts carry both sides of the identity they test, so a refutation
is printable evidence rather than a bare boolean.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .algebra import prime_power
from .designs import DDSParams, DSParams

__all__ = [
    "IdentityVerdict",
    "Result3Verdict",
    "ds_admissible",
    "proportional_pair_admissible",
    "dds_counting_identity",
    "refute_result3",
]


@dataclass(frozen=True)
class IdentityVerdict:
    """One counting identity, evaluated: ok iff lhs == rhs (and any range
    condition noted in ``note`` holds)."""

    ok: bool
    identity: str
    lhs: int
    rhs: int
    note: str = ""

    def __str__(self) -> str:
        status = "holds" if self.ok else "fails"
        text = f"{self.identity}: {self.lhs} vs {self.rhs} ({status})"
        return f"{text}; {self.note}" if self.note else text


def ds_admissible(params: DSParams) -> IdentityVerdict:
    """Necessary counting condition lambda*(v-1) = k*(k-1), plus the range
    condition 0 <= lambda <= k <= v."""
    lhs = params.lam * (params.v - 1)
    rhs = params.k * (params.k - 1)
    note = ""
    range_ok = 0 <= params.lam <= params.k <= params.v
    if not range_ok:
        note = f"range violated: need 0 <= {params.lam} <= {params.k} <= {params.v}"
    return IdentityVerdict(lhs == rhs and range_ok, "lambda*(v-1) = k*(k-1)", lhs, rhs, note)


def proportional_pair_admissible(params: DSParams, mu: int) -> IdentityVerdict:
    """Whether the scaled triple (mu*v, mu*k, mu*lambda) of an admissible
    triple can itself be admissible: the identity residual factors as
    (v - k)*(mu - 1), so only mu = 1 or the degenerate v = k survive.

    The factored residual presumes a nonempty block (k >= 1): for k = 0 the
    scaled triple is again (mu*v, 0, 0) and satisfies the counting identity
    trivially, so this verdict is only meaningful for k >= 1."""
    if mu < 1:
        raise ValueError(f"scale factor must be positive, got {mu}")
    base = ds_admissible(params)
    if not base.ok:
        raise ValueError(f"base triple {params} is not admissible: {base}")
    residual = (params.v - params.k) * (mu - 1)
    return IdentityVerdict(
        residual == 0,
        "(v-k)*(mu-1) = 0",
        residual,
        0,
        f"scaled triple {params.scaled(mu)}",
    )


def dds_counting_identity(params: DDSParams) -> IdentityVerdict:
    """Necessary counting condition for an (m, n, k, lambda1, lambda2)
    divisible difference set: k*(k-1) = lambda1*(n-1) + lambda2*n*(m-1)."""
    lhs = params.k * (params.k - 1)
    rhs = params.lam1 * (params.n - 1) + params.lam2 * params.n * (params.m - 1)
    return IdentityVerdict(
        lhs == rhs, "k*(k-1) = lambda1*(n-1) + lambda2*n*(m-1)", lhs, rhs
    )


@dataclass(frozen=True)
class Result3Verdict:
    """Admissibility of the scaled hyperplane triple

        ( h*(q^m - 1)/e, h*(q^(m-1) - 1)/e, h*(q^(m-2) - 1)/e ),

    which is the classical ((q^m-1)/(q-1), ...) triple scaled by
    mu = h*(q-1)/e.  ``ok`` (equivalently ``singer_case``) holds exactly for
    (e, h) = (q-1, 1), i.e. mu = 1; otherwise ``evidence`` is the failing
    counting identity of the scaled triple."""

    ok: bool
    singer_case: bool
    base: DSParams
    mu: int
    triple: DSParams
    evidence: IdentityVerdict
    residual: IdentityVerdict


def refute_result3(q: int, m: int, e: int, h: int) -> Result3Verdict:
    """Evaluate the scaled hyperplane triple for dimension m over GF(q) with
    divisor e of q - 1 and 1 <= h <= e, gcd(m, e) = 1.

    Returns a verdict that is ok only in the unscaled case (e, h) = (q-1, 1);
    in every other case the verdict carries the failing identity
    lambda*(v-1) = k*(k-1) of the scaled triple and the nonzero residual
    (v0 - k0)*(mu - 1) of the base triple (v0, k0, lambda0).
    """
    if prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")
    if m < 3:
        raise ValueError(f"need dimension >= 3, got {m}")
    if e < 1 or (q - 1) % e != 0:
        raise ValueError(f"{e} does not divide q - 1 = {q - 1}")
    if gcd(m, e) != 1:
        raise ValueError(f"gcd(m, e) = gcd({m}, {e}) != 1")
    if not 1 <= h <= e:
        raise ValueError(f"need 1 <= h <= e, got h={h}, e={e}")
    base = DSParams(
        (q**m - 1) // (q - 1),
        (q ** (m - 1) - 1) // (q - 1),
        (q ** (m - 2) - 1) // (q - 1),
    )
    mu = h * (q - 1) // e
    for value, name in ((q**m - 1, "q^m - 1"), (q ** (m - 1) - 1, "q^(m-1) - 1"), (q ** (m - 2) - 1, "q^(m-2) - 1")):
        if (value * h) % e != 0:
            raise ValueError(f"{e} does not divide h*({name})")  # unreachable: e | q-1
    triple = base.scaled(mu)
    singer_case = e == q - 1 and h == 1
    evidence = ds_admissible(triple)
    residual = proportional_pair_admissible(base, mu)
    if evidence.ok != singer_case or residual.ok != singer_case:
        raise RuntimeError(
            f"inconsistent verdict for (q,m,e,h)=({q},{m},{e},{h})"
        )  # the identities make these equivalent
    return Result3Verdict(singer_case, singer_case, base, mu, triple, evidence, residual)
