"""Exact arithmetic in small finite fields and their extension towers.

A field is either a prime field GF(p) or an extension of a smaller field
by a monic irreducible polynomial, so residue fields of places over a
non-prime constant field keep an exact arithmetic path down to GF(p).
Field objects are cached and interned; elements are immutable, and every
operation is a pure function, so values can be shared freely between
concurrent workers.

Element representation: an element of a prime field is an integer in
[0, p); an element of an extension of K of relative degree r is a tuple
of r elements of K (coefficients of the adjoined root, constant term
first).  Serialization flattens this to base-p digits, e.g. "GF(9):[1,2]".
"""

from __future__ import annotations

import itertools

MAX_FIELD_ORDER = 1 << 20       # hard cap for any constructed field
EXHAUSTIVE_LIMIT = 1 << 12      # below this, brute-force searches are fine
GENERATOR_EAGER_LIMIT = 1 << 16  # exhibit a generator on construction


def factorint(n: int) -> dict[int, int]:
    """Factor a small positive integer by trial division."""
    fs: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            fs[d] = fs.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        fs[n] = fs.get(n, 0) + 1
    return fs


def is_prime(n: int) -> bool:
    return n >= 2 and factorint(n) == {n: 1}


_PRIME_FIELDS: dict[int, "FiniteField"] = {}


class FiniteField:
    """GF(p^r), either a prime field or an extension of a smaller field."""

    __slots__ = ("p", "base", "rel_degree", "degree", "order", "_modulus",
                 "_red", "_generator", "_ext_cache")

    def __init__(self, p, base=None, modulus_raw=None):
        # Use GF(p) / base.extension(...) factories instead of this directly.
        self.p = p
        self.base = base
        if base is None:
            self.rel_degree = 1
            self.degree = 1
            self.order = p
            self._modulus = None
            self._red = None
        else:
            r = len(modulus_raw) - 1
            if r < 2:
                raise ValueError("extension degree must be at least 2")
            self.rel_degree = r
            self.degree = base.degree * r
            self.order = base.order ** r
            if self.order > MAX_FIELD_ORDER:
                raise ValueError(
                    f"field of order {base.order}^{r} exceeds the "
                    f"size cap 2^20")
            self._modulus = tuple(modulus_raw)  # monic, length r+1, base raws
            # reduction rows: x^k mod modulus for k = r .. 2r-2, as raw tuples
            top = [base._neg(c) for c in modulus_raw[:r]]
            red = [tuple(top)]
            for _ in range(r - 2):
                prev = red[-1]
                shifted = [base.zero_raw()] + list(prev[:r - 1])
                c = prev[r - 1]
                row = [base._add(shifted[j], base._mul(c, top[j]))
                       for j in range(r)]
                red.append(tuple(row))
            self._red = red
        self._generator = None
        self._ext_cache = {}
        if self.order <= GENERATOR_EAGER_LIMIT:
            self.generator()  # cyclicity witness, as a construction check

    # -- construction -------------------------------------------------

    def extension_with_modulus(self, modulus) -> "FiniteField":
        """Extension of this field by a monic irreducible polynomial.

        ``modulus`` is a sequence of elements of this field, constant
        coefficient first, leading coefficient 1.  Extensions are interned
        per (field, modulus).
        """
        coeffs = tuple(self.coerce(c) for c in modulus)
        if coeffs[-1] != self.one():
            raise ValueError("modulus must be monic")
        key = tuple(c.raw for c in coeffs)
        ext = self._ext_cache.get(key)
        if ext is None:
            ext = FiniteField(self.p, self, [c.raw for c in coeffs])
            self._ext_cache[key] = ext
        return ext

    def extension(self, r: int) -> "FiniteField":
        """Deterministic degree-r extension (lexicographically least
        monic irreducible modulus, coefficients compared from the top)."""
        if r == 1:
            return self
        ext = self._ext_cache.get(r)
        if ext is None:
            from .polys import Poly, is_irreducible
            one = self.one()
            for tail in itertools.product(self.elements(), repeat=r):
                # tail = (c_{r-1}, ..., c_0), most significant first
                coeffs = tuple(reversed(tail)) + (one,)
                f = Poly(self, coeffs)
                if is_irreducible(f):
                    ext = self.extension_with_modulus(coeffs)
                    break
            else:  # pragma: no cover - an irreducible always exists
                raise RuntimeError("no irreducible modulus found")
            self._ext_cache[r] = ext
        return ext

    # -- raw arithmetic (recursive over the tower) ----------------------

    def zero_raw(self):
        if self.base is None:
            return 0
        return tuple(self.base.zero_raw() for _ in range(self.rel_degree))

    def one_raw(self):
        if self.base is None:
            return 1
        return (self.base.one_raw(),) + tuple(
            self.base.zero_raw() for _ in range(self.rel_degree - 1))

    def from_int_raw(self, k: int):
        if self.base is None:
            return k % self.p
        return (self.base.from_int_raw(k),) + tuple(
            self.base.zero_raw() for _ in range(self.rel_degree - 1))

    def _is_zero(self, a) -> bool:
        if self.base is None:
            return a == 0
        return all(self.base._is_zero(c) for c in a)

    def _add(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        base = self.base
        return tuple(base._add(x, y) for x, y in zip(a, b))

    def _sub(self, a, b):
        if self.base is None:
            return (a - b) % self.p
        base = self.base
        return tuple(base._sub(x, y) for x, y in zip(a, b))

    def _neg(self, a):
        if self.base is None:
            return (-a) % self.p
        return tuple(self.base._neg(c) for c in a)

    def _mul(self, a, b):
        if self.base is None:
            return (a * b) % self.p
        base = self.base
        r = self.rel_degree
        conv = [base.zero_raw()] * (2 * r - 1)
        for i, ai in enumerate(a):
            if base._is_zero(ai):
                continue
            for j, bj in enumerate(b):
                conv[i + j] = base._add(conv[i + j], base._mul(ai, bj))
        for k in range(2 * r - 2, r - 1, -1):
            c = conv[k]
            if base._is_zero(c):
                continue
            row = self._red[k - r]
            for j in range(r):
                conv[j] = base._add(conv[j], base._mul(c, row[j]))
        return tuple(conv[:r])

    def _pow(self, a, e: int):
        if e < 0:
            a = self._inv(a)
            e = -e
        result = self.one_raw()
        while e:
            if e & 1:
                result = self._mul(result, a)
            a = self._mul(a, a)
            e >>= 1
        return result

    def _inv(self, a):
        if self._is_zero(a):
            raise ZeroDivisionError("inverse of zero field element")
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        return self._pow(a, self.order - 2)

    # -- element constructors -------------------------------------------

    def zero(self) -> "FieldElem":
        return FieldElem(self, self.zero_raw())

    def one(self) -> "FieldElem":
        return FieldElem(self, self.one_raw())

    def from_int(self, k: int) -> "FieldElem":
        return FieldElem(self, self.from_int_raw(k))

    def coerce(self, x) -> "FieldElem":
        if isinstance(x, FieldElem):
            if x.field is self:
                return x
            if _in_tower(x.field, self):
                return embed(x, self)
            raise ValueError(f"cannot coerce element of {x.field} into {self}")
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def from_digits(self, digits) -> "FieldElem":
        """Inverse of FieldElem.digits(): base-p digit list, low first."""
        digits = list(digits)
        if len(digits) > self.degree:
            raise ValueError("too many digits for this field")
        digits += [0] * (self.degree - len(digits))
        return FieldElem(self, self._raw_from_digits(digits))

    def _raw_from_digits(self, digits):
        if self.base is None:
            return digits[0] % self.p
        step = self.base.degree
        return tuple(self.base._raw_from_digits(digits[i * step:(i + 1) * step])
                     for i in range(self.rel_degree))

    def elements(self):
        """All field elements in ascending serialization order."""
        if self.base is None:
            for v in range(self.p):
                yield FieldElem(self, v)
        else:
            base_raws = [e.raw for e in self.base.elements()]
            for raws in itertools.product(base_raws, repeat=self.rel_degree):
                yield FieldElem(self, raws)

    def gen_elem(self) -> "FieldElem":
        """The adjoined root defining this extension."""
        if self.base is None:
            raise ValueError("prime field has no adjoined root")
        raw = [self.base.zero_raw()] * self.rel_degree
        raw[1] = self.base.one_raw()
        return FieldElem(self, tuple(raw))

    def generator(self) -> "FieldElem":
        """A fixed generator of the multiplicative group (least by key)."""
        if self._generator is None:
            q1 = self.order - 1
            primes = list(factorint(q1))
            for a in self.elements():
                if a.is_zero():
                    continue
                if all(a ** (q1 // ell) != self.one() for ell in primes):
                    self._generator = a
                    break
            else:  # pragma: no cover - F_q^* is cyclic
                raise RuntimeError("multiplicative group has no generator")
        return self._generator

    def modulus(self):
        """Defining modulus over the base field, as a tuple of elements."""
        if self._modulus is None:
            return None
        return tuple(FieldElem(self.base, c) for c in self._modulus)

    def __repr__(self):
        return f"GF({self.order})"


def GF(p: int, r: int = 1) -> FiniteField:
    """The field with p^r elements (p prime), interned."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    pf = _PRIME_FIELDS.get(p)
    if pf is None:
        pf = FiniteField(p)
        _PRIME_FIELDS[p] = pf
    return pf if r == 1 else pf.extension(r)


def GF_of_order(q: int) -> FiniteField:
    """The field of order q = p^r, from q alone."""
    fs = factorint(q)
    if len(fs) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, r), = fs.items()
    return GF(p, r)


class FieldElem:
    """Immutable element of a FiniteField; supports +,-,*,/,** and
    coercion from int."""

    __slots__ = ("field", "raw")

    def __init__(self, field: FiniteField, raw):
        self.field = field
        self.raw = raw

    # -- arithmetic ---------------------------------------------------

    def _rhs(self, other):
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise ValueError(
                    f"elements of {self.field} and {other.field} cannot be "
                    f"combined; embed explicitly")
            return other.raw
        if isinstance(other, int):
            return self.field.from_int_raw(other)
        return None

    def __add__(self, other):
        raw = self._rhs(other)
        if raw is None:
            return NotImplemented
        return FieldElem(self.field, self.field._add(self.raw, raw))

    __radd__ = __add__

    def __sub__(self, other):
        raw = self._rhs(other)
        if raw is None:
            return NotImplemented
        return FieldElem(self.field, self.field._sub(self.raw, raw))

    def __rsub__(self, other):
        raw = self._rhs(other)
        if raw is None:
            return NotImplemented
        return FieldElem(self.field, self.field._sub(raw, self.raw))

    def __neg__(self):
        return FieldElem(self.field, self.field._neg(self.raw))

    def __mul__(self, other):
        raw = self._rhs(other)
        if raw is None:
            return NotImplemented
        return FieldElem(self.field, self.field._mul(self.raw, raw))

    __rmul__ = __mul__

    def __truediv__(self, other):
        raw = self._rhs(other)
        if raw is None:
            return NotImplemented
        return FieldElem(self.field, self.field._mul(self.raw,
                                                     self.field._inv(raw)))

    def __rtruediv__(self, other):
        raw = self._rhs(other)
        if raw is None:
            return NotImplemented
        return FieldElem(self.field, self.field._mul(raw,
                                                     self.field._inv(self.raw)))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field._pow(self.raw, e))

    def inverse(self):
        return FieldElem(self.field, self.field._inv(self.raw))

    def is_zero(self) -> bool:
        return self.field._is_zero(self.raw)

    # -- comparison / hashing ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return other.field is self.field and other.raw == self.raw
        if isinstance(other, int):
            return self.raw == self.field.from_int_raw(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.raw))

    def key(self) -> tuple:
        """Base-p digit tuple (low digit first); the fixed element order."""
        return tuple(self.digits_full())

    def digits_full(self) -> list[int]:
        out: list[int] = []
        _flatten(self.field, self.raw, out)
        return out

    def digits(self) -> list[int]:
        """Digits with trailing zeros removed (zero keeps one digit)."""
        d = self.digits_full()
        while len(d) > 1 and d[-1] == 0:
            d.pop()
        return d

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ValueError("zero has no multiplicative order")
        n = self.field.order - 1
        for p, e in factorint(n).items():
            while n % p == 0 and self ** (n // p) == self.field.one():
                n //= p
        return n

    def __repr__(self):
        return f"GF({self.field.order}):{self.digits()}"


def _flatten(field, raw, out):
    if field.base is None:
        out.append(raw)
    else:
        for c in raw:
            _flatten(field.base, c, out)


def _in_tower(sub: FiniteField, sup: FiniteField) -> bool:
    f = sup
    while f is not None:
        if f is sub:
            return True
        f = f.base
    return False


def embed(a: FieldElem, ext: FiniteField) -> FieldElem:
    """Lift an element into an extension field on the same tower."""
    if a.field is ext:
        return a
    if not _in_tower(a.field, ext):
        raise ValueError(f"{a.field} is not a subfield of {ext} on its tower")
    b = embed(a, ext.base)
    raw = (b.raw,) + tuple(ext.base.zero_raw()
                           for _ in range(ext.rel_degree - 1))
    return FieldElem(ext, raw)


def lower(a: FieldElem, sub: FiniteField) -> FieldElem:
    """Inverse of embed(); fails if the element is not in the subfield."""
    if a.field is sub:
        return a
    if not _in_tower(sub, a.field):
        raise ValueError(f"{sub} is not on the tower of {a.field}")
    field = a.field
    if any(not field.base._is_zero(c) for c in a.raw[1:]):
        raise ValueError(f"{a!r} does not lie in {sub}")
    return lower(FieldElem(field.base, a.raw[0]), sub)


def ff_norm(a: FieldElem, base: FiniteField) -> FieldElem:
    """Field norm down to ``base``: a^(1 + q + ... + q^(r-1)) for q the
    order of ``base`` and r the relative degree.  Multiplicative."""
    if not _in_tower(base, a.field):
        raise ValueError(f"{base} is not a subfield of {a.field}")
    if a.field is base:
        return a
    if a.is_zero():
        return base.zero()
    e = (a.field.order - 1) // (base.order - 1)
    return lower(a ** e, base)


def bsgs_dlog(target: FieldElem, g: FieldElem, n: int) -> int | None:
    """Discrete log of target in <g> where g has order n (baby-step
    giant-step); None if target is outside <g>."""
    one = g.field.one()
    m = 1
    while m * m < n:
        m += 1
    baby = {}
    cur = one
    for j in range(m):
        baby.setdefault(cur, j)
        cur = cur * g
    giant = g ** (-m)
    cur = target
    for i in range(m + 1):
        j = baby.get(cur)
        if j is not None:
            return (i * m + j) % n
        cur = cur * giant
    return None


def element_dlog(target: FieldElem, g: FieldElem, n: int) -> int | None:
    """dlog in a cyclic group of order n; exhaustive when small."""
    if n <= EXHAUSTIVE_LIMIT:
        cur = g.field.one()
        for k in range(n):
            if cur == target:
                return k
            cur = cur * g
        return None
    return bsgs_dlog(target, g, n)


def ff_nth_root(a: FieldElem, n: int) -> FieldElem | None:
    """Some b with b^n = a, or None; deterministic (least b in the fixed
    element order).  a must be nonzero."""
    if a.is_zero():
        raise ValueError("n-th root of zero is excluded; handle separately")
    field = a.field
    if field.order <= EXHAUSTIVE_LIMIT:
        for b in field.elements():
            if not b.is_zero() and b ** n == a:
                return b
        return None
    g = field.generator()
    q1 = field.order - 1
    t = element_dlog(a, g, q1)
    assert t is not None
    d = _gcd(n, q1)
    if t % d != 0:
        return None
    n1, q2 = n // d, q1 // d
    x0 = (t // d) * pow(n1, -1, q2) % q2
    candidates = [g ** ((x0 + k * q2) % q1) for k in range(d)]
    return min(candidates, key=lambda b: b.key())


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class MuN:
    """The group of n-th roots of unity inside a field with n | q - 1,
    with a fixed generator for discrete-log reports."""

    __slots__ = ("field", "n", "gen")

    def __init__(self, field: FiniteField, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        if (field.order - 1) % n != 0:
            raise ValueError(
                f"mu_{n} does not embed in {field}: n must divide q-1")
        if n % field.p == 0:
            raise ValueError("n must be coprime to the characteristic")
        self.field = field
        self.n = n
        self.gen = field.generator() ** ((field.order - 1) // n)
        assert self.gen.multiplicative_order() == n

    def contains(self, z: FieldElem) -> bool:
        return z.field is self.field and not z.is_zero() and \
            z ** self.n == self.field.one()

    def dlog(self, z: FieldElem) -> int:
        """k with gen^k = z, 0 <= k < n; requires z^n = 1."""
        z = self.field.coerce(z)
        if z.is_zero() or z ** self.n != self.field.one():
            raise ValueError(f"{z!r} is not an n-th root of unity (n={self.n})")
        k = element_dlog(z, self.gen, self.n)
        assert k is not None
        return k

    def __repr__(self):
        return f"mu_{self.n} in GF({self.field.order})"


def mu_dlog(z: FieldElem, mu: MuN) -> int:
    """Discrete log of z in mu (z must satisfy z^n = 1)."""
    return mu.dlog(z)
