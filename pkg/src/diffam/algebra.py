"""Exact arithmetic for finite fields, products of finite fields, and finite
abelian groups presented as products of cyclic and field factors.

Encoding conventions
--------------------
An element of GF(p^n) is stored as a plain integer in [0, p^n).  The integer
packs the coefficient list (c0, c1, ..., c_{n-1}) of the residue polynomial
c0 + c1*x + ... + c_{n-1}*x^(n-1) with c0 as the *most* significant base-p
digit:

    encode(c0, ..., c_{n-1}) = c0*p^(n-1) + c1*p^(n-2) + ... + c_{n-1}

so that integer comparison of encodings agrees with the canonical order used
throughout this package: lexicographic comparison of coefficient lists, low
degree coefficients first.  For a prime field (n = 1) the encoding is the
residue itself.  One consequence worth knowing: the multiplicative identity
of an extension field encodes as p^(n-1), not as 1; always use ``f.one``.

Ring and group elements are tuples holding one encoded integer per factor.
Tuples compare lexicographically factor by factor, which again realizes the
canonical order, so built-in sorting of element tuples sorts canonically and
``itertools.product`` over per-factor ranges enumerates canonically.

Exhaustive routines (orbit enumeration, isomorphism checking) refuse groups
larger than GROUP_ORDER_CAP rather than run unbounded scans.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import gcd, lcm, prod
from typing import Iterable, Iterator, Sequence

GROUP_ORDER_CAP = 10**6

Element = tuple  # one encoded int per factor


class ExhaustiveCapError(ValueError):
    """An exhaustive computation would exceed GROUP_ORDER_CAP."""


def check_cap(order: int) -> None:
    """Refuse exhaustive work on a group of more than GROUP_ORDER_CAP elements."""
    if order > GROUP_ORDER_CAP:
        raise ExhaustiveCapError(
            f"group order {order} exceeds the exhaustive-verification cap "
            f"{GROUP_ORDER_CAP}"
        )


# ---------------------------------------------------------------------------
# elementary number theory (trial division is plenty for the sizes we handle)
# ---------------------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization ``{p: multiplicity}`` by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in itertools.chain((2,), itertools.count(3, 2)):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out

def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, a) with n = p^a, or None if n is not a prime power."""
    if n < 2:
        return None
    fac = factorize(n)
    if len(fac) != 1:
        return None
    return next(iter(fac.items()))


def multiplicative_order(a: int, n: int, limit: int | None = None) -> int | None:
    """Order of a modulo n (requires gcd(a, n) = 1).

    With ``limit`` set, give up and return None once the order is known to
    exceed it — handy when scanning for low-order units.
    """
    if n == 1:
        return 1
    a %= n
    if gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit modulo {n}")
    order, value = 1, a
    while value != 1:
        order += 1
        if limit is not None and order > limit:
            return None
        value = value * a % n
    return order


# ---------------------------------------------------------------------------
# polynomial arithmetic over GF(p) — internal helpers for field construction
# (coefficient lists, low degree first, trimmed of trailing zeros)
# ---------------------------------------------------------------------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    n = len(mod) - 1  # mod is monic of degree n
    for i in range(len(res) - 1, n - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(n):
                res[i - n + j] = (res[i - n + j] - c * mod[j]) % p
    return _poly_trim(res)


def _poly_powmod(a: Sequence[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        e >>= 1
        if e:
            base = _poly_mulmod(base, base, mod, p)
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        inv_lead = pow(b[-1], -1, p)
        monic = [c * inv_lead % p for c in b]
        r = list(a)  # reduce a mod monic, top coefficient down
        while len(r) >= len(monic):
            c = r[-1]
            if c:
                shift = len(r) - len(monic)
                for j, mj in enumerate(monic):
                    r[shift + j] = (r[shift + j] - c * mj) % p
            r.pop()
        a, b = monic, _poly_trim(r)
    return a


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Monic polynomial irreducibility over GF(p) via Frobenius iteration:
    f of degree n is irreducible iff x^(p^n) = x mod f and, for every prime
    l dividing n, gcd(x^(p^(n/l)) - x, f) is constant."""
    n = len(poly) - 1
    if n < 1 or poly[-1] != 1:
        return False
    if n == 1:
        return True
    if poly[0] == 0:  # divisible by x
        return False
    x = [0, 1]
    frob: list[list[int]] = [x]  # frob[k] = x^(p^k) mod poly
    t = x
    for _ in range(n):
        t = _poly_powmod(t, p, poly, p)
        frob.append(t)
    if frob[n] != x:
        return False
    for ell in factorize(n):
        diff = [c for c in frob[n // ell]]
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(diff, poly, p)
        if len(g) > 1:
            return False
    return True


def _least_irreducible(p: int, n: int) -> tuple[int, ...]:
    """The canonically least monic irreducible of degree n over GF(p)
    (coefficient lists compared low degree first)."""
    if n == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=n):
        if low[0] == 0:
            continue
        candidate = list(low) + [1]
        if _is_irreducible(candidate, p):
            return tuple(candidate)
    raise RuntimeError(f"no irreducible of degree {n} over GF({p})")  # unreachable


# ---------------------------------------------------------------------------
# finite fields
# ---------------------------------------------------------------------------


class FieldDescriptor:
    """GF(p^n) with a fixed monic irreducible modulus polynomial.

    Elements are encoded integers (see the module docstring).  Prime fields
    use direct modular arithmetic; extension fields multiply through exp/log
    tables built lazily from the canonical primitive element.
    """

    def __init__(self, p: int, n: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"field characteristic {p} is not prime")
        if n < 1:
            raise ValueError(f"extension degree must be positive, got {n}")
        self.p = p
        self.n = n
        self.q = p**n
        if modulus is None:
            modulus = _least_irreducible(p, n)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise ValueError(
                    f"modulus must be monic of degree {n}, got {list(modulus)}"
                )
            if n > 1 and not _is_irreducible(list(modulus), p):
                raise ValueError(f"modulus {list(modulus)} is reducible over GF({p})")
        self.modulus: tuple[int, ...] = tuple(modulus)
        self.zero = 0
        self.one = p ** (n - 1)  # encodes (1, 0, ..., 0)
        self._primitive: int | None = None
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        if n == 1:
            # fast path: elements are residues
            self.add = lambda a, b: (a + b) % p  # type: ignore[assignment]
            self.sub = lambda a, b: (a - b) % p  # type: ignore[assignment]
            self.neg = lambda a: -a % p  # type: ignore[assignment]
            self.mul = lambda a, b: a * b % p  # type: ignore[assignment]

    # -- encoding ----------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Decode to the coefficient list (c0, ..., c_{n-1}), low degree first."""
        out = []
        for _ in range(self.n):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(reversed(out))

    def element(self, coeffs: Sequence[int]) -> int:
        """Encode a coefficient list (low degree first) after range-checking."""
        if len(coeffs) != self.n:
            raise ValueError(
                f"expected {self.n} coefficients for GF({self.q}), got {len(coeffs)}"
            )
        e = 0
        for c in coeffs:
            if not 0 <= c < self.p:
                raise ValueError(f"coefficient {c} out of range for GF({self.p}^{self.n})")
            e = e * self.p + c
        return e

    def elements(self) -> range:
        return range(self.q)

    # -- arithmetic ---------------------------------------------------------
    # (n == 1 instances override add/sub/neg/mul with closures in __init__)

    def add(self, a: int, b: int) -> int:
        da, db, p = self.coeffs(a), self.coeffs(b), self.p
        return self.element(tuple((x + y) % p for x, y in zip(da, db)))

    def sub(self, a: int, b: int) -> int:
        da, db, p = self.coeffs(a), self.coeffs(b), self.p
        return self.element(tuple((x - y) % p for x, y in zip(da, db)))

    def neg(self, a: int) -> int:
        return self.element(tuple(-c % self.p for c in self.coeffs(a)))

    def scalar(self, c: int, a: int) -> int:
        """Integer scalar action c*a on the additive group."""
        c %= self.p
        if self.n == 1:
            return c * a % self.p
        return self.element(tuple(c * x % self.p for x in self.coeffs(a)))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        exp, log = self._tables()
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ValueError(f"zero has no inverse in GF({self.q})")
        if self.n == 1:
            return pow(a, -1, self.p)
        exp, log = self._tables()
        return exp[-log[a] % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ValueError(f"zero has no inverse in GF({self.q})")
            return self.one if e == 0 else 0
        e %= self.q - 1
        if self.n == 1:
            return pow(a, e, self.p)
        exp, log = self._tables()
        return exp[log[a] * e % (self.q - 1)]

    def element_order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        order = self.q - 1
        for ell in factorize(self.q - 1):
            while order % ell == 0 and self.pow(a, order // ell) == self.one:
                order //= ell
        return order

    def primitive_element(self) -> int:
        """The canonically least element of multiplicative order q - 1."""
        if self._primitive is None:
            self._primitive = self._find_primitive()
        return self._primitive

    def trace(self, a: int, sub_degree: int = 1) -> int:
        """Trace into the subfield GF(p^sub_degree):
        a + a^s + a^(s^2) + ... with s = p^sub_degree."""
        if sub_degree < 1 or self.n % sub_degree != 0:
            raise ValueError(
                f"sub_degree {sub_degree} does not divide extension degree {self.n}"
            )
        s = self.p**sub_degree
        acc = y = a
        for _ in range(self.n // sub_degree - 1):
            y = self.pow(y, s)
            acc = self.add(acc, y)
        return acc

    # -- internals ----------------------------------------------------------

    def _raw_mul(self, a: int, b: int) -> int:
        """Table-free multiplication via polynomial arithmetic."""
        pa = _poly_trim(list(self.coeffs(a)))
        pb = _poly_trim(list(self.coeffs(b)))
        prod_ = _poly_mulmod(pa, pb, self.modulus, self.p)
        prod_ += [0] * (self.n - len(prod_))
        return self.element(tuple(prod_[: self.n]))

    def _find_primitive(self) -> int:
        if self.q == 2:
            return 1
        exponents = [(self.q - 1) // ell for ell in factorize(self.q - 1)]
        if self.n == 1:
            for g in range(1, self.p):
                if all(pow(g, e, self.p) != 1 for e in exponents):
                    return g
        else:
            for g in range(1, self.q):
                poly = _poly_trim(list(self.coeffs(g)))
                if all(
                    _poly_powmod(poly, e, self.modulus, self.p) != [1]
                    for e in exponents
                ):
                    return g
        raise RuntimeError(f"no primitive element in GF({self.q})")  # unreachable

    def _tables(self) -> tuple[list[int], list[int]]:
        if self._exp is None:
            g = self.primitive_element()
            exp = [0] * (self.q - 1)
            log = [0] * self.q
            value = self.one
            for i in range(self.q - 1):
                exp[i] = value
                log[value] = i
                value = self._raw_mul(value, g)
            if value != self.one:
                raise RuntimeError("primitive element walk failed to close")
            self._exp, self._log = exp, log
        return self._exp, self._log

    # -- identity -----------------------------------------------------------

    def _key(self) -> tuple:
        return (self.p, self.n, self.modulus)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldDescriptor) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def build_field(p: int, n: int = 1) -> FieldDescriptor:
    """GF(p^n) with the canonically least monic irreducible modulus."""
    return FieldDescriptor(p, n)


# ---------------------------------------------------------------------------
# componentwise tuple operations shared by rings and groups
# ---------------------------------------------------------------------------


def _componentwise2(ops: Sequence) -> callable:
    if len(ops) == 1:
        (f0,) = ops
        return lambda a, b: (f0(a[0], b[0]),)
    if len(ops) == 2:
        f0, f1 = ops
        return lambda a, b: (f0(a[0], b[0]), f1(a[1], b[1]))
    if len(ops) == 3:
        f0, f1, f2 = ops
        return lambda a, b: (f0(a[0], b[0]), f1(a[1], b[1]), f2(a[2], b[2]))
    return lambda a, b: tuple(f(x, y) for f, x, y in zip(ops, a, b))


def _componentwise1(ops: Sequence) -> callable:
    if len(ops) == 1:
        (f0,) = ops
        return lambda a: (f0(a[0]),)
    return lambda a: tuple(f(x) for f, x in zip(ops, a))


# ---------------------------------------------------------------------------
# product rings of finite fields
# ---------------------------------------------------------------------------


class RingDescriptor:
    """Direct product of finite fields; elements are tuples of encoded ints.

    The unit group is exactly the set of tuples with every coordinate
    nonzero, so unit tests and unit inverses are coordinatewise.
    """

    def __init__(self, fields: Sequence[FieldDescriptor]):
        if not fields:
            raise ValueError("a ring needs at least one field factor")
        self.factors: tuple[FieldDescriptor, ...] = tuple(fields)
        self.order = prod(f.q for f in self.factors)
        self.zero: Element = (0,) * len(self.factors)
        self.one: Element = tuple(f.one for f in self.factors)
        self.add = _componentwise2([f.add for f in self.factors])
        self.sub = _componentwise2([f.sub for f in self.factors])
        self.neg = _componentwise1([f.neg for f in self.factors])
        self.mul = _componentwise2([f.mul for f in self.factors])

    def elements(self) -> Iterator[Element]:
        """All ring elements in canonical order."""
        return itertools.product(*(range(f.q) for f in self.factors))

    def is_unit(self, x: Element) -> bool:
        return all(c != 0 for c in x)

    def inv(self, x: Element) -> Element:
        return tuple(f.inv(c) for f, c in zip(self.factors, x))

    def pow(self, x: Element, e: int) -> Element:
        return tuple(f.pow(c, e) for f, c in zip(self.factors, x))

    def additive_group(self) -> "GroupDescriptor":
        return GroupDescriptor(self.factors)

    def _key(self) -> tuple:
        return tuple(f._key() for f in self.factors)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RingDescriptor) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return " x ".join(repr(f) for f in self.factors)


def build_ring(factor_orders: Sequence[int]) -> RingDescriptor:
    """Product of fields of the given orders, e.g. [7, 13, 19].

    Every order must be a prime power; fields are built with canonical moduli.
    """
    fields = []
    for m in factor_orders:
        pp = prime_power(m)
        if pp is None:
            raise ValueError(f"ring factor {m} is not a prime power")
        fields.append(build_field(*pp))
    return RingDescriptor(fields)


# ---------------------------------------------------------------------------
# finite abelian groups as products of cyclic and field-additive factors
# ---------------------------------------------------------------------------


def _cyclic_ops(n: int):
    return (
        lambda a, b: (a + b) % n,
        lambda a, b: (a - b) % n,
        lambda a: -a % n,
    )


class GroupDescriptor:
    """Finite abelian group: a product of Z_n factors and additive groups of
    finite fields.  Elements are tuples of encoded ints, one per factor."""

    def __init__(self, factors: Sequence):
        if not factors:
            raise ValueError("a group needs at least one factor")
        norm: list = []
        sizes: list[int] = []
        adds, subs, negs = [], [], []
        for fac in factors:
            if isinstance(fac, FieldDescriptor):
                norm.append(fac)
                sizes.append(fac.q)
                adds.append(fac.add)
                subs.append(fac.sub)
                negs.append(fac.neg)
            elif isinstance(fac, int):
                if fac < 1:
                    raise ValueError(f"cyclic order must be positive, got {fac}")
                norm.append(fac)
                sizes.append(fac)
                a, s, g = _cyclic_ops(fac)
                adds.append(a)
                subs.append(s)
                negs.append(g)
            else:
                raise ValueError(f"unsupported group factor {fac!r}")
        self.factors = tuple(norm)
        self.factor_sizes = tuple(sizes)
        self.order = prod(sizes)
        self.zero: Element = (0,) * len(self.factors)
        self.add = _componentwise2(adds)
        self.sub = _componentwise2(subs)
        self.neg = _componentwise1(negs)

    def elements(self) -> Iterator[Element]:
        """All group elements in canonical order."""
        return itertools.product(*(range(s) for s in self.factor_sizes))

    def nonzero_elements(self) -> Iterator[Element]:
        zero = self.zero
        return (x for x in self.elements() if x != zero)

    def scalar_mul(self, c: int, x: Element) -> Element:
        out = []
        for fac, size, coord in zip(self.factors, self.factor_sizes, x):
            if isinstance(fac, FieldDescriptor):
                out.append(fac.scalar(c, coord))
            else:
                out.append(c * coord % size)
        return tuple(out)

    def exponent(self) -> int:
        """The additive exponent: lcm of factor exponents."""
        out = 1
        for fac, size in zip(self.factors, self.factor_sizes):
            out = lcm(out, fac.p if isinstance(fac, FieldDescriptor) else size)
        return out

    def canonical_generators(self) -> list[Element]:
        """A generating set: one residue generator per cyclic factor, one
        basis monomial per field-factor dimension."""
        gens: list[Element] = []
        for i, fac in enumerate(self.factors):
            if isinstance(fac, FieldDescriptor):
                for j in range(fac.n):
                    g = list(self.zero)
                    g[i] = fac.p ** (fac.n - 1 - j)  # encodes the monomial x^j
                    gens.append(tuple(g))
            elif fac > 1:
                g = list(self.zero)
                g[i] = 1
                gens.append(tuple(g))
        return gens

    def contains(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == len(self.factors)
            and all(
                isinstance(c, int) and 0 <= c < s
                for c, s in zip(x, self.factor_sizes)
            )
        )

    def validate_element(self, x) -> None:
        if not self.contains(x):
            raise ValueError(f"{x!r} is not an element of {self!r}")

    def _key(self) -> tuple:
        # the additive group of GF(p) is Z_p with identical element encoding
        # and identical operations, so the two factor spellings compare equal
        out = []
        for f in self.factors:
            if isinstance(f, FieldDescriptor):
                out.append(("Z", f.p) if f.n == 1 else f._key())
            else:
                out.append(("Z", f))
        return tuple(out)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupDescriptor) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        parts = [
            repr(f) if isinstance(f, FieldDescriptor) else f"Z{f}"
            for f in self.factors
        ]
        return " x ".join(parts)


def cyclic_group(n: int) -> GroupDescriptor:
    return GroupDescriptor((n,))


def product_group(*groups: GroupDescriptor) -> GroupDescriptor:
    """Direct product; element tuples concatenate coordinatewise."""
    factors: list = []
    for g in groups:
        factors.extend(g.factors)
    return GroupDescriptor(factors)


# ---------------------------------------------------------------------------
# automorphism actions: unit multiplication, scalar multiplication, explicit
# ---------------------------------------------------------------------------


class UnitAction:
    """The cyclic group of additive automorphisms x -> u^j * x of a product
    ring, generated by multiplication by a fixed unit u."""

    def __init__(self, ring: RingDescriptor, generator: Element):
        if not ring.is_unit(generator):
            raise ValueError(f"{generator} is not a unit of {ring!r}")
        self.ring = ring
        self.generator = generator
        self.group = ring.additive_group()
        order, value = 1, generator
        bound = lcm(*(f.q - 1 for f in ring.factors))
        while value != ring.one:
            order += 1
            if order > bound:
                raise RuntimeError("unit order walk exceeded the unit-group exponent")
            value = ring.mul(value, generator)
        self.order = order

    def step(self, x: Element) -> Element:
        return self.ring.mul(self.generator, x)

    def elements(self) -> list[Element]:
        """The k subgroup members in power order: one, u, u^2, ..."""
        out = [self.ring.one]
        for _ in range(self.order - 1):
            out.append(self.ring.mul(out[-1], self.generator))
        return out

    def __repr__(self) -> str:
        return f"<unit action by {self.generator} of order {self.order} on {self.ring!r}>"


class ScalarAction:
    """The cyclic group of automorphisms x -> m^j * x of an abelian group,
    for an integer m coprime to the group exponent."""

    def __init__(self, group: GroupDescriptor, multiplier: int):
        exponent = group.exponent()
        if gcd(multiplier, exponent) != 1:
            raise ValueError(
                f"multiplication by {multiplier} is not an automorphism of "
                f"{group!r} (gcd with exponent {exponent} is "
                f"{gcd(multiplier, exponent)})"
            )
        self.group = group
        self.multiplier = multiplier % exponent
        order = multiplicative_order(self.multiplier, exponent)
        assert order is not None
        self.order = order

    def step(self, x: Element) -> Element:
        return self.group.scalar_mul(self.multiplier, x)

    def __repr__(self) -> str:
        return (
            f"<scalar action by {self.multiplier} of order {self.order} "
            f"on {self.group!r}>"
        )


def _validated_maps(group: GroupDescriptor, maps: Sequence[dict]) -> list[dict]:
    """Check an explicit automorphism list: every map is an additive bijection
    fixing zero (homomorphism tested against the canonical generators), the
    identity is present, and the set is closed under composition."""
    check_cap(group.order)
    elements = list(group.elements())
    element_set = set(elements)
    gens = group.canonical_generators()
    add = group.add
    for m in maps:
        if set(m) != element_set:
            raise ValueError("automorphism map is not defined on the whole group")
        if len(set(m.values())) != group.order:
            raise ValueError("automorphism map is not a bijection")
        if m[group.zero] != group.zero:
            raise ValueError("automorphism map does not fix zero")
        for g in gens:
            mg = m[g]
            for x in elements:
                if m[add(x, g)] != add(m[x], mg):
                    raise ValueError(
                        f"map is not additive: differs at {x} + {g}"
                    )
    identity = {x: x for x in elements}
    if identity not in maps:
        raise ValueError("automorphism list must contain the identity map")
    fingerprints = {tuple(m[x] for x in elements) for m in maps}
    for m1 in maps:
        for m2 in maps:
            comp = tuple(m1[m2[x]] for x in elements)
            if comp not in fingerprints:
                raise ValueError("automorphism list is not closed under composition")
    return list(maps)


def _cyclic_action(group: GroupDescriptor, action) -> tuple | None:
    """Normalize a UnitAction/ScalarAction into (step, order), or None."""
    if isinstance(action, (UnitAction, ScalarAction)):
        if action.group != group:
            raise ValueError(
                f"action is defined on {action.group!r}, not on {group!r}"
            )
        return action.step, action.order
    return None


def fixed_point_witness(group: GroupDescriptor, action):
    """A nonzero element fixed by some non-identity member of the action, as
    (element, power-or-map-index), or None when the action is semiregular."""
    check_cap(group.order)
    cyc = _cyclic_action(group, action)
    zero = group.zero
    if cyc is not None:
        step, order = cyc
        for x in group.elements():
            if x == zero:
                continue
            y = step(x)
            for j in range(1, order):
                if y == x:
                    return (x, j)
                y = step(y)
        return None
    maps = _validated_maps(group, action)
    identity = {x: x for x in group.elements()}
    for idx, m in enumerate(maps):
        if m == identity:
            continue
        for x in group.elements():
            if x != zero and m[x] == x:
                return (x, idx)
    return None


def is_semiregular(group: GroupDescriptor, action) -> bool:
    """True when no non-identity automorphism in the action fixes a nonzero
    element (exhaustive scan)."""
    return fixed_point_witness(group, action) is None


def orbits(group: GroupDescriptor, action) -> list[tuple[Element, ...]]:
    """Orbits of the action on the nonzero elements, each orbit sorted
    canonically, listed in order of their least members."""
    check_cap(group.order)
    zero = group.zero
    cyc = _cyclic_action(group, action)
    out: list[tuple[Element, ...]] = []
    seen: set[Element] = set()
    if cyc is not None:
        step, _ = cyc
        for x in group.elements():
            if x == zero or x in seen:
                continue
            orbit = [x]
            y = step(x)
            while y != x:
                orbit.append(y)
                y = step(y)
            seen.update(orbit)
            out.append(tuple(sorted(orbit)))
        return out
    maps = _validated_maps(group, action)
    for x in group.elements():
        if x == zero or x in seen:
            continue
        orbit = sorted({m[x] for m in maps})
        seen.update(orbit)
        out.append(tuple(orbit))
    return out


def unit_subgroup_of_order(ring: RingDescriptor, k: int) -> UnitAction:
    """The order-k subgroup of the unit group generated coordinatewise by
    w_i^((q_i - 1)/k), with w_i the canonical primitive element of factor i.

    Requires k to divide every q_i - 1.  Distinct members differ in every
    coordinate, so pairwise differences of members are units.
    """
    if k < 1:
        raise ValueError(f"subgroup order must be positive, got {k}")
    coords = []
    for f in ring.factors:
        if (f.q - 1) % k != 0:
            raise ValueError(
                f"{k} does not divide |GF({f.q})*| = {f.q - 1}"
            )
        coords.append(f.pow(f.primitive_element(), (f.q - 1) // k))
    action = UnitAction(ring, tuple(coords))
    if action.order != k:
        raise RuntimeError(
            f"unit subgroup generator has order {action.order}, expected {k}"
        )
    return action


# ---------------------------------------------------------------------------
# abelian group isomorphism via prime-power decomposition
# ---------------------------------------------------------------------------


def invariant_factors(group: GroupDescriptor) -> list[int]:
    """Invariant factor chain d1 | d2 | ... | dt (ascending) of the group."""
    orders: list[int] = []
    for fac, size in zip(group.factors, group.factor_sizes):
        if isinstance(fac, FieldDescriptor):
            orders.extend([fac.p] * fac.n)
        elif size > 1:
            orders.append(size)
    ds = [o for o in orders if o > 1]
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            if ds[j] % ds[i]:
                g = gcd(ds[i], ds[j])
                ds[i], ds[j] = g, ds[i] * ds[j] // g
    return sorted(d for d in ds if d > 1)


class _Atom:
    """One cyclic factor Z_{p^a} of the primary decomposition, with its
    embedded generator and the projection extracting its coordinate."""

    __slots__ = ("p", "a", "size", "generator", "extract")

    def __init__(self, p: int, a: int, size: int, generator: Element, extract):
        self.p, self.a, self.size = p, a, size
        self.generator = generator
        self.extract = extract


def _atoms(group: GroupDescriptor) -> list[_Atom]:
    atoms: list[_Atom] = []
    for i, (fac, size) in enumerate(zip(group.factors, group.factor_sizes)):
        if isinstance(fac, FieldDescriptor):
            p, n = fac.p, fac.n
            for j in range(n):
                weight = p ** (n - 1 - j)
                gen = list(group.zero)
                gen[i] = weight
                atoms.append(
                    _Atom(
                        p,
                        1,
                        p,
                        tuple(gen),
                        lambda x, i=i, w=weight, p=p: (x[i] // w) % p,
                    )
                )
        else:
            if size == 1:
                continue
            for p, a in sorted(factorize(size).items()):
                pa = p**a
                cofactor = size // pa
                inv_cof = pow(cofactor, -1, pa)
                gen = list(group.zero)
                gen[i] = cofactor
                atoms.append(
                    _Atom(
                        p,
                        a,
                        pa,
                        tuple(gen),
                        lambda x, i=i, pa=pa, inv=inv_cof: (x[i] % pa) * inv % pa,
                    )
                )
    return atoms


class Isomorphism:
    """A verified isomorphism between two abelian groups, applied elementwise
    through matched prime-power coordinates."""

    def __init__(self, domain: GroupDescriptor, codomain: GroupDescriptor, pairs):
        self.domain = domain
        self.codomain = codomain
        self._pairs = pairs  # list of (_Atom in domain, _Atom in codomain)

    def apply(self, x: Element) -> Element:
        self.domain.validate_element(x)
        y = self.codomain.zero
        add = self.codomain.add
        for src, dst in self._pairs:
            c = src.extract(x)
            if c:
                y = add(y, self.codomain.scalar_mul(c, dst.generator))
        return y

    def generator_images(self) -> list[tuple[Element, Element]]:
        return [(src.generator, dst.generator) for src, dst in self._pairs]

    def __repr__(self) -> str:
        return f"<isomorphism {self.domain!r} -> {self.codomain!r}>"


def abelian_iso(g1: GroupDescriptor, g2: GroupDescriptor) -> Isomorphism | None:
    """An explicit isomorphism g1 -> g2 when the invariant-factor
    decompositions coincide, else None.  The returned map is verified to be
    a bijective homomorphism before it is handed back."""
    if g1.order != g2.order:
        return None
    a1 = sorted(_atoms(g1), key=lambda at: (at.p, at.a))
    a2 = sorted(_atoms(g2), key=lambda at: (at.p, at.a))
    if [(at.p, at.a) for at in a1] != [(at.p, at.a) for at in a2]:
        return None
    iso = Isomorphism(g1, g2, list(zip(a1, a2)))
    check_cap(g1.order)
    images = {iso.apply(x) for x in g1.elements()}
    if len(images) != g1.order:
        raise RuntimeError("isomorphism candidate is not a bijection")
    add1, add2 = g1.add, g2.add
    gens = [at.generator for at in a1] or [g1.zero]
    image = {g: iso.apply(g) for g in gens}
    for ga in gens:
        for gb in gens:
            if iso.apply(add1(ga, gb)) != add2(image[ga], image[gb]):
                raise RuntimeError("isomorphism candidate is not additive")
    return iso
