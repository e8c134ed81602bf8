"""Univariate polynomials over a finite field, with exact factorization.

Factorization runs squarefree decomposition, then distinct-degree
splitting, then equal-degree splitting with a randomized splitter whose
seed is derived from the polynomial itself, so every factorization is
deterministic and reports are reproducible.
"""

from __future__ import annotations

import hashlib
import random
import re

from .ffield import FieldElem, FiniteField


class Poly:
    """Polynomial with coefficients in a FiniteField, constant term first.

    Coefficient tuples carry no trailing zeros; the zero polynomial has an
    empty tuple and degree -1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs=()):
        cs = [field.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def x(field: FiniteField) -> "Poly":
        return Poly(field, (0, 1))

    @staticmethod
    def const(field: FiniteField, c) -> "Poly":
        return Poly(field, (c,))

    # -- basic queries ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self) -> FieldElem:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> FieldElem:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def key(self) -> tuple:
        """Total order on polynomials: by degree, then coefficients from
        the leading one down."""
        return (self.degree,) + tuple(c.key() for c in reversed(self.coeffs))

    # -- ring operations --------------------------------------------------

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            if other.field is not self.field:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, (int, FieldElem)):
            return Poly.const(self.field, self.field.coerce(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return Poly(self.field)
        zero = self.field.zero()
        out = [zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        field = self.field
        rem = list(self.coeffs)
        db = o.degree
        inv_lc = o.lc().inverse()
        quot = [field.zero()] * max(0, len(rem) - db)
        for i in range(len(rem) - db - 1, -1, -1):
            c = rem[i + db] * inv_lc
            if c.is_zero():
                continue
            quot[i] = c
            for j, bc in enumerate(o.coeffs):
                rem[i + j] = rem[i + j] - c * bc
        return Poly(field, quot), Poly(field, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, FieldElem)):
            o = self._coerce(other)
            return self.coeffs == o.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def monic(self) -> "Poly":
        if self.is_zero() or self.is_monic():
            return self
        inv = self.lc().inverse()
        return Poly(self.field, [c * inv for c in self.coeffs])

    def derivative(self) -> "Poly":
        return Poly(self.field,
                    [i * c for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x) -> FieldElem:
        """Horner evaluation; x may live in an extension of the
        coefficient field."""
        if isinstance(x, FieldElem) and x.field is not self.field:
            from .ffield import embed
            field = x.field
            acc = field.zero()
            for c in reversed(self.coeffs):
                acc = acc * x + embed(c, field)
            return acc
        x = self.field.coerce(x)
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def map_coeffs(self, fn) -> "Poly":
        return Poly(self.field, [fn(c) for c in self.coeffs])

    def __repr__(self):
        return poly_to_text(self)


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def ext_gcd(a: Poly, b: Poly):
    """(g, s, t) with s*a + t*b = g, g monic."""
    field = a.field
    r0, r1 = a, b
    s0, s1 = Poly.const(field, 1), Poly(field)
    t0, t1 = Poly(field), Poly.const(field, 1)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = r0.lc().inverse()
    return r0 * inv, s0 * inv, t0 * inv


def invmod(a: Poly, m: Poly) -> Poly:
    g, s, _ = ext_gcd(a % m, m)
    if not g.is_one():
        raise ZeroDivisionError(f"{a!r} is not invertible mod {m!r}")
    return s % m


def powmod(a: Poly, e: int, m: Poly) -> Poly:
    if e < 0:
        return powmod(invmod(a, m), -e, m)
    result = Poly.const(a.field, 1)
    base = a % m
    while e:
        if e & 1:
            result = result * base % m
        base = base * base % m
        e >>= 1
    return result


def is_irreducible(f: Poly) -> bool:
    """Irreducibility over the coefficient field GF(q): f of degree d is
    irreducible iff x^(q^d) = x mod f and gcd(x^(q^(d/l)) - x, f) = 1 for
    every prime l dividing d."""
    from .ffield import factorint
    d = f.degree
    if d <= 0:
        return False
    if d == 1:
        return True
    q = f.field.order
    x = Poly.x(f.field)
    h = powmod(x, q ** d, f)
    if h != x % f:
        return False
    for ell in factorint(d):
        h = powmod(x, q ** (d // ell), f)
        if not gcd(h - x, f).is_one():
            return False
    return True


def _stable_seed(f: Poly) -> int:
    payload = repr((f.field.p, f.field.degree,
                    tuple(c.key() for c in f.coeffs))).encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(),
                          "big")


def squarefree_decomposition(f: Poly) -> dict[Poly, int]:
    """Monic f -> {squarefree monic part: multiplicity}; handles p-th
    powers (vanishing derivative) by exact p-th roots of coefficients."""
    field = f.field
    p = field.p
    out: dict[Poly, int] = {}

    def accumulate(g: Poly, mult: int):
        d = g.derivative()
        if d.is_zero():
            # g = h(x^p); p-th root the coefficients (c -> c^(q/p))
            e = field.order // p
            root = Poly(field, [g.coeffs[i * p] ** e if not
                                g.coeffs[i * p].is_zero() else field.zero()
                                for i in range(g.degree // p + 1)])
            accumulate(root, mult * p)
            return
        c = gcd(g, d)
        w = g // c
        i = 1
        while not w.is_one():
            y = gcd(w, c)
            z = w // y
            if not z.is_one():
                out[z] = out.get(z, 0) + mult * i
            w = y
            c = c // y
            i += 1
        if not c.is_one():
            accumulate(c, mult)

    accumulate(f.monic(), 1)
    # merge possibly repeated squarefree parts by multiplying them out
    return out


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Squarefree monic f -> [(product of irreducible factors of degree d,
    d)]."""
    q = f.field.order
    x = Poly.x(f.field)
    out = []
    h = x
    g = f
    d = 0
    while g.degree > 0:
        d += 1
        if 2 * d > g.degree:
            out.append((g, g.degree))
            break
        h = powmod(h, q, g)
        factor = gcd(h - x, g)
        if not factor.is_one():
            out.append((factor, d))
            g = g // factor
            h = h % g
    return out


def _equal_degree_split(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus split of a product of degree-d irreducibles."""
    if f.degree == d:
        return [f]
    q = f.field.order
    if q % 2 == 0:
        raise NotImplementedError(
            "equal-degree splitting implemented for odd characteristic only")
    e = (q ** d - 1) // 2
    field = f.field
    elems = None
    while True:
        # deterministic given the seeded rng
        coeffs = []
        for _ in range(f.degree):
            if elems is None:
                elems = [el for el in field.elements()]
            coeffs.append(elems[rng.randrange(len(elems))])
        r = Poly(field, coeffs)
        if r.degree < 1:
            continue
        g = gcd(r, f)
        if not g.is_one():
            pass  # lucky factor
        else:
            s = powmod(r, e, f)
            g = gcd(s - 1, f)
        if 0 < g.degree < f.degree:
            left = _equal_degree_split(g, d, rng)
            right = _equal_degree_split(f // g, d, rng)
            return left + right


def factor(f: Poly) -> tuple[FieldElem, dict[Poly, int]]:
    """Full factorization: (unit, {monic irreducible: multiplicity}).
    Deterministic: the splitter is seeded from the input polynomial."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    unit = f.lc()
    if f.degree == 0:
        return unit, {}
    rng = random.Random(_stable_seed(f))
    out: dict[Poly, int] = {}
    for sqfree, mult in squarefree_decomposition(f).items():
        for prod, d in _distinct_degree(sqfree):
            for irr in _equal_degree_split(prod, d, rng):
                out[irr] = out.get(irr, 0) + mult
    check = Poly.const(f.field, unit)
    for g, m in out.items():
        check = check * g ** m
    assert check == f, "factorization does not multiply back"
    return unit, out


def roots(f: Poly) -> list[FieldElem]:
    """Roots in the coefficient field, ascending, with multiplicity one."""
    _, fs = factor(f)
    out = [(-g.coeffs[0]) / g.coeffs[1] for g in fs if g.degree == 1]
    return sorted(out, key=lambda c: c.key())


def monic_irreducibles_of_degree(field: FiniteField, d: int):
    """Monic irreducibles of exact degree d, in key order."""
    import itertools
    one = field.one()
    for tail in itertools.product(field.elements(), repeat=d):
        poly = Poly(field, tuple(reversed(tail)) + (one,))
        if d == 1 or is_irreducible(poly):
            yield poly


def monic_irreducibles(field: FiniteField, max_degree: int):
    """All monic irreducibles of degree <= max_degree in (degree, key)
    order."""
    for d in range(1, max_degree + 1):
        yield from monic_irreducibles_of_degree(field, d)


# -- text form ---------------------------------------------------------

def _coeff_text(c: FieldElem) -> str:
    d = c.digits()
    if len(d) == 1:
        return str(d[0])
    return "[" + ",".join(str(t) for t in d) + "]"


def poly_to_text(f: Poly, var: str = "x") -> str:
    if f.is_zero():
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = f[i]
        if c.is_zero():
            continue
        if i == 0:
            parts.append(_coeff_text(c))
        else:
            xs = var if i == 1 else f"{var}^{i}"
            if c == 1:
                parts.append(xs)
            else:
                parts.append(f"{_coeff_text(c)}*{xs}")
    return "+".join(parts)


_TERM_RE = re.compile(
    r"""(?P<sign>[+-])?\s*
        (?:(?P<coeff>\[[0-9,\s]+\]|\d+)\s*\*?\s*)?
        (?:(?P<var>[a-zA-Z]\w*)\s*(?:\^\s*(?P<exp>\d+))?)?\s*""",
    re.VERBOSE)


def parse_poly(field: FiniteField, text: str, var: str = "x") -> Poly:
    """Parse "x^4+2*x", "x-1", "[1,2]*x^2+1" into a Poly over field."""
    text = text.strip()
    if text in ("", "0"):
        return Poly(field)
    pos = 0
    terms: list[tuple[FieldElem, int]] = []
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at: {text[pos:]!r}")
        sign, coeff, v, exp = (m.group("sign"), m.group("coeff"),
                               m.group("var"), m.group("exp"))
        if coeff is None and v is None:
            raise ValueError(f"cannot parse polynomial at: {text[pos:]!r}")
        if v is not None and v != var:
            raise ValueError(f"unexpected variable {v!r} (expected {var!r})")
        if coeff is None:
            c = field.one()
        elif coeff.startswith("["):
            digits = [int(t) for t in coeff[1:-1].split(",")]
            c = field.from_digits(digits)
        else:
            c = field.from_int(int(coeff))
        if sign == "-":
            c = -c
        e = 0 if v is None else (1 if exp is None else int(exp))
        terms.append((c, e))
        pos = m.end()
    deg = max(e for _, e in terms)
    coeffs = [field.zero()] * (deg + 1)
    for c, e in terms:
        coeffs[e] = coeffs[e] + c
    return Poly(field, coeffs)
