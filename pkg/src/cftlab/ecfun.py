"""Elliptic function fields: curve arithmetic, places as Frobenius
orbits, Miller functions with exact divisor bookkeeping, evaluation at
divisors, the Tate pairing, and n-th roots of functions.

Curves are short Weierstrass y^2 = x^3 + a x + b over fields of
characteristic > 3.  A curve object is bound to its constant field;
base-changing returns a new curve over the extension.  A Miller function
is a list of (line, exponent) factors plus a constant, and carries its
divisor explicitly; the factor-wise divisor sum always equals the
declared divisor.
"""

from __future__ import annotations

import itertools

from .divisor import Divisor
from .ffield import FieldElem, FiniteField, embed, ff_norm, lower

MAX_ENUMERATION = 1 << 20


class Curve:
    """y^2 = x^3 + a x + b over a fixed constant field."""

    def __init__(self, field: FiniteField, a, b):
        if field.p <= 3:
            raise ValueError("short Weierstrass curves need char > 3")
        self.field = field
        self.a = field.coerce(a)
        self.b = field.coerce(b)
        disc = 4 * self.a ** 3 + 27 * self.b ** 2
        if disc.is_zero():
            raise ValueError("singular curve: 4a^3 + 27b^2 = 0")
        self._points_cache: dict[int, list] = {}
        self._ext_cache: dict[int, "Curve"] = {}

    def zero(self) -> "ECPoint":
        return ECPoint(self, None, None)

    def point(self, x, y) -> "ECPoint":
        x = self.field.coerce(x)
        y = self.field.coerce(y)
        p = ECPoint(self, x, y)
        if not p.on_curve():
            raise ValueError(f"({x!r}, {y!r}) is not on {self!r}")
        return p

    def base_extend(self, d: int) -> "Curve":
        if d == 1:
            return self
        ext = self._ext_cache.get(d)
        if ext is None:
            big = self.field.extension(d)
            ext = Curve(big, embed(self.a, big), embed(self.b, big))
            self._ext_cache[d] = ext
        return ext

    def points(self, d: int = 1) -> list:
        """All points of E over the degree-d constant field extension,
        deterministic order, the zero point first."""
        cached = self._points_cache.get(d)
        if cached is not None:
            return cached
        curve = self.base_extend(d)
        field = curve.field
        if field.order > MAX_ENUMERATION:
            raise ValueError("point enumeration exceeds the size cap")
        sqrt_table: dict = {}
        for y in field.elements():
            sqrt_table.setdefault(y * y, []).append(y)
        out = [curve.zero()]
        for x in field.elements():
            rhs = (x * x + curve.a) * x + curve.b
            for y in sqrt_table.get(rhs, ()):
                out.append(ECPoint(curve, x, y))
        self._points_cache[d] = out
        return out

    def order(self, d: int = 1) -> int:
        return len(self.points(d))

    def __eq__(self, other):
        if not isinstance(other, Curve):
            return NotImplemented
        return (self.field is other.field and self.a == other.a
                and self.b == other.b)

    def __hash__(self):
        return hash((id(self.field), self.a.raw, self.b.raw))

    def __repr__(self):
        return curve_to_text(self)


class ECPoint:
    """Affine point or the point at infinity of a curve."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: Curve, x, y):
        self.curve = curve
        self.x = x
        self.y = y

    @property
    def is_zero(self) -> bool:
        return self.x is None

    def on_curve(self) -> bool:
        if self.is_zero:
            return True
        x, y = self.x, self.y
        return y * y == (x * x + self.curve.a) * x + self.curve.b

    def __eq__(self, other):
        if not isinstance(other, ECPoint):
            return NotImplemented
        return (self.curve == other.curve and self.x == other.x
                and self.y == other.y)

    def __hash__(self):
        if self.is_zero:
            return hash((hash(self.curve), None))
        return hash((hash(self.curve), self.x.raw, self.y.raw))

    def __neg__(self):
        if self.is_zero:
            return self
        return ECPoint(self.curve, self.x, -self.y)

    def __add__(self, other):
        return ec_add(self, other)

    def __sub__(self, other):
        return ec_add(self, -other)

    def __rmul__(self, k: int):
        return scalar_mul(k, self)

    def key(self):
        if self.is_zero:
            return (0,)
        return (1,) + self.x.key() + self.y.key()

    def __repr__(self):
        if self.is_zero:
            return "O"
        return f"({self.x!r},{self.y!r})"


def ec_add(p: ECPoint, q: ECPoint) -> ECPoint:
    """Chord-and-tangent group law."""
    if p.curve != q.curve:
        raise ValueError("points on different curves")
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    if p.x == q.x:
        if p.y == -q.y:
            return p.curve.zero()
        lam = (3 * p.x * p.x + p.curve.a) / (2 * p.y)
    else:
        lam = (q.y - p.y) / (q.x - p.x)
    x3 = lam * lam - p.x - q.x
    y3 = lam * (p.x - x3) - p.y
    return ECPoint(p.curve, x3, y3)


def scalar_mul(k: int, p: ECPoint) -> ECPoint:
    if k < 0:
        return scalar_mul(-k, -p)
    acc = p.curve.zero()
    while k:
        if k & 1:
            acc = ec_add(acc, p)
        p = ec_add(p, p)
        k >>= 1
    return acc


def frobenius_point(p: ECPoint, q: int) -> ECPoint:
    """Image under the q-power Frobenius (coordinate powers)."""
    if p.is_zero:
        return p
    return ECPoint(p.curve, p.x ** q, p.y ** q)


class ECPlace:
    """A closed point of the elliptic function field over the curve's
    constant field: a Frobenius orbit of points, canonically rotated."""

    __slots__ = ("curve", "points", "degree")

    def __init__(self, curve: Curve, orbit):
        orbit = list(orbit)
        start = min(range(len(orbit)), key=lambda i: orbit[i].key())
        orbit = orbit[start:] + orbit[:start]
        self.curve = curve           # the curve over the constant field
        self.points = tuple(orbit)
        self.degree = len(orbit)

    @staticmethod
    def of_point(p: ECPoint, base_curve: Curve | None = None) -> "ECPlace":
        """Degree-one place of a point rational over the constant field."""
        curve = base_curve if base_curve is not None else p.curve
        return ECPlace(curve, (p,))

    @property
    def is_zero_place(self) -> bool:
        return self.degree == 1 and self.points[0].is_zero

    def sort_key(self):
        return (self.degree,) + self.points[0].key()

    def __eq__(self, other):
        if not isinstance(other, ECPlace):
            return NotImplemented
        return self.curve == other.curve and self.points == other.points

    def __hash__(self):
        return hash((hash(self.curve), tuple(hash(p) for p in self.points)))

    def __repr__(self):
        if self.degree == 1:
            return f"[{self.points[0]!r}]"
        return f"[orbit deg {self.degree}: {self.points[0]!r}]"


def places_up_to_degree(curve: Curve, d_max: int) -> list[ECPlace]:
    """All closed points of degree <= d_max, each Frobenius orbit once."""
    q = curve.field.order
    if q ** d_max > MAX_ENUMERATION:
        raise ValueError("place enumeration exceeds the size cap")
    out = []
    for d in range(1, d_max + 1):
        seen = set()
        for p in curve.points(d):
            if p in seen:
                continue
            orbit = [p]
            cur = frobenius_point(p, q)
            while cur != p:
                orbit.append(cur)
                cur = frobenius_point(cur, q)
            for t in orbit:
                seen.add(t)
            if len(orbit) == d:
                out.append(ECPlace(curve, orbit))
    out.sort(key=lambda pl: pl.sort_key())
    return out


def rational_place(p: ECPoint) -> ECPlace:
    return ECPlace.of_point(p)


def point_divisor(items) -> Divisor:
    """Divisor from (point, multiplicity) pairs (degree-one places)."""
    return Divisor([(rational_place(p), m) for p, m in items])


# -- Miller functions -----------------------------------------------------

class Line:
    """c0 + cx*x + cy*y on a curve, with its divisor of zeros."""

    __slots__ = ("curve", "c0", "cx", "cy", "zeros")

    def __init__(self, curve: Curve, c0, cx, cy, zeros):
        self.curve = curve
        self.c0 = c0
        self.cx = cx
        self.cy = cy
        self.zeros = tuple(zeros)    # affine points, with multiplicity

    def value_at(self, p: ECPoint) -> FieldElem:
        if p.is_zero:
            raise ValueError("lines have a pole at the zero point")
        v = self.c0 + self.cx * p.x + self.cy * p.y
        return v

    def pole_order_at_zero(self) -> int:
        return 3 if not self.cy.is_zero() else 2

    def divisor(self, base_curve: Curve) -> Divisor:
        items = [(ECPlace.of_point(p, base_curve), 1) for p in self.zeros]
        items.append((ECPlace.of_point(self.curve.zero(), base_curve),
                      -self.pole_order_at_zero()))
        return Divisor(items)

    def map_points(self, fn, curve: Curve) -> "Line":
        return Line(curve, fn(self.c0), fn(self.cx), fn(self.cy),
                    [ECPoint(curve, fn(p.x), fn(p.y)) for p in self.zeros])

    def __repr__(self):
        return f"line({self.c0!r},{self.cx!r},{self.cy!r})"


def vertical_line(p: ECPoint) -> Line:
    """x - x(P); zeros (P) + (-P), double zero when P = -P."""
    field = p.curve.field
    zeros = [p, -p] if p != -p else [p, p]
    return Line(p.curve, -p.x, field.one(), field.zero(), zeros)


def chord_line(p: ECPoint, q: ECPoint) -> Line:
    """Line through P and Q (tangent when P = Q); zeros (P)+(Q)+(-(P+Q))."""
    curve = p.curve
    field = curve.field
    if p.is_zero or q.is_zero:
        raise ValueError("chord through the zero point is a vertical")
    if p == q:
        if p.y.is_zero():
            return vertical_line(p)
        lam = (3 * p.x * p.x + curve.a) / (2 * p.y)
    elif p.x == q.x:
        return vertical_line(p)
    else:
        lam = (q.y - p.y) / (q.x - p.x)
    s = ec_add(p, q)
    zeros = [p, q, -s]
    c0 = lam * p.x - p.y
    return Line(curve, c0, -lam, field.one(), zeros)


class MillerFunc:
    """Product of line factors with integer exponents times a constant."""

    __slots__ = ("curve", "factors", "const", "div")

    def __init__(self, curve: Curve, factors=(), const=None,
                 div: Divisor | None = None):
        self.curve = curve
        self.factors = tuple(factors)
        self.const = curve.field.coerce(const if const is not None else 1)
        if self.const.is_zero():
            raise ValueError("the zero function is not a Miller function")
        if div is None:
            div = Divisor()
            for line, e in self.factors:
                div = div + e * line.divisor(curve)
        self.div = div

    @staticmethod
    def constant(curve: Curve, c) -> "MillerFunc":
        return MillerFunc(curve, (), c, Divisor())

    def factor_divisor(self) -> Divisor:
        out = Divisor()
        for line, e in self.factors:
            out = out + e * line.divisor(self.curve)
        return out

    def __mul__(self, other):
        if isinstance(other, MillerFunc):
            if other.curve != self.curve:
                raise ValueError("functions on different curves")
            return MillerFunc(self.curve, self.factors + other.factors,
                              self.const * other.const,
                              self.div + other.div)
        if isinstance(other, (int, FieldElem)):
            return MillerFunc(self.curve, self.factors,
                              self.const * self.curve.field.coerce(other),
                              self.div)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e == 0:
            return MillerFunc.constant(self.curve, 1)
        return MillerFunc(self.curve,
                          tuple((l, k * e) for l, k in self.factors),
                          self.const ** e, e * self.div)

    def inverse(self) -> "MillerFunc":
        return self ** -1

    def __truediv__(self, other):
        if isinstance(other, MillerFunc):
            return self * other.inverse()
        if isinstance(other, (int, FieldElem)):
            return self * self.curve.field.coerce(other).inverse()
        return NotImplemented

    def ord_at(self, place: ECPlace) -> int:
        return self.div[place]

    def support(self) -> frozenset:
        return self.div.support()

    def factor_support(self) -> frozenset:
        """Places where some individual line factor vanishes or has a
        pole; evaluation divisors must avoid these (a superset of the
        reduced support)."""
        out = {ECPlace.of_point(self.curve.zero(), self.curve)}
        for line, _ in self.factors:
            for p in line.zeros:
                out.add(ECPlace.of_point(p, self.curve))
        return frozenset(out)

    def value_at(self, p: ECPoint) -> FieldElem:
        """Plain product of factor values; raises when a factor vanishes
        (evaluate away from every factor's zeros and from O)."""
        if p.is_zero:
            raise ValueError("evaluation at the zero point needs divisors "
                             "avoiding it")
        v = embed(self.const, p.curve.field)
        for line, e in self.factors:
            lv = line.value_at(p) if line.curve == p.curve else \
                _lifted_line_value(line, p)
            if lv.is_zero():
                raise ValueError(
                    f"a line factor vanishes at {p!r}: choose a divisor "
                    f"avoiding the factor supports")
            v = v * lv ** e
        return v

    def map_coeffs(self, fn) -> "MillerFunc":
        """Apply a field automorphism to every coefficient and divisor
        point (used for Frobenius twists)."""
        factors = tuple((l.map_points(fn, self.curve), e)
                        for l, e in self.factors)
        items = []
        for place, m in self.div:
            pts = [ECPoint(self.curve, fn(p.x), fn(p.y)) if not p.is_zero
                   else p for p in place.points]
            items.append((ECPlace(self.curve, pts), m))
        return MillerFunc(self.curve, factors, fn(self.const),
                          Divisor(items))

    def __repr__(self):
        return (f"miller({len(self.factors)} factors, const {self.const!r}, "
                f"div {self.div!r})")


def _lifted_line_value(line: Line, p: ECPoint) -> FieldElem:
    field = p.curve.field
    return (embed(line.c0, field) + embed(line.cx, field) * p.x
            + embed(line.cy, field) * p.y)


def miller_function(n: int, p: ECPoint) -> MillerFunc:
    """f_{n,P} with divisor n(P) - (nP) - (n-1)(O), by double-and-add."""
    if n < 1:
        raise ValueError("n must be positive")
    curve = p.curve
    if p.is_zero:
        return MillerFunc.constant(curve, 1)
    target = (n * Divisor.of(rational_place(p))
              - Divisor.of(rational_place(scalar_mul(n, p)))
              - (n - 1) * Divisor.of(rational_place(curve.zero())))
    if n == 1:
        return MillerFunc(curve, (), 1, target)
    f = MillerFunc(curve, (), 1, Divisor())
    r = p
    for bit in bin(n)[3:]:
        f = f * f * _addition_step(r, r)
        r = ec_add(r, r)
        if bit == "1":
            f = f * _addition_step(r, p)
            r = ec_add(r, p)
    assert f.div == target, "miller loop divisor bookkeeping failed"
    return f


def _addition_step(r: ECPoint, q: ECPoint) -> MillerFunc:
    """Function with divisor (R) + (Q) - (R+Q) - (O)."""
    curve = r.curve
    if r.is_zero and q.is_zero:
        return MillerFunc.constant(curve, 1)
    if r.is_zero or q.is_zero:
        # (O) + (Q) - (Q) - (O) = 0
        return MillerFunc.constant(curve, 1)
    s = ec_add(r, q)
    if s.is_zero:
        line = vertical_line(r)
        return MillerFunc(curve, ((line, 1),))
    line = chord_line(r, q)
    vert = vertical_line(s)
    return MillerFunc(curve, ((line, 1), (vert, -1)))


def ec_evaluate(f: MillerFunc, d: Divisor) -> FieldElem:
    """f(D): product over places of the norm of the residue, raised to
    the multiplicity; supports must be disjoint (factor-wise)."""
    base = f.curve.field
    value = base.one()
    for place, mult in d:
        if f.ord_at(place) != 0:
            raise ValueError(f"supports overlap at {place!r}")
        rep = place.points[0]
        v = f.value_at(rep)
        value = value * ff_norm(v, base) ** mult
    return value


# -- divisor reduction and n-th roots ---------------------------------------

def divisor_sum(d: Divisor) -> ECPoint:
    """The curve point sum of a degree-zero divisor of rational places."""
    curve = None
    acc = None
    for place, mult in d:
        if place.degree != 1:
            raise ValueError("divisor reduction needs rational places")
        p = place.points[0]
        if acc is None:
            curve = p.curve
            acc = curve.zero()
        acc = ec_add(acc, scalar_mul(mult, p))
    if acc is None:
        raise ValueError("empty divisor")
    return acc


def function_with_divisor(d: Divisor, curve: Curve) -> MillerFunc:
    """A Miller function with exactly the given principal divisor
    (degree 0 and point sum O are required and checked)."""
    if d.degree != 0:
        raise ValueError("divisor has nonzero degree")
    # invariant: work = d - div(fn); each step shrinks the non-O mass
    work = {place: m for place, m in d}
    fn = MillerFunc(curve, (), 1, Divisor())

    def side_entries(sign):
        return [(pl, m) for pl, m in sorted(work.items(),
                                            key=lambda kv: kv[0].sort_key())
                if m * sign > 0 and not pl.is_zero_place]

    while True:
        pos = side_entries(+1)
        neg = side_entries(-1)
        if sum(m for _, m in pos) >= 2:
            side, sign = pos, +1
        elif sum(-m for _, m in neg) >= 2:
            side, sign = neg, -1
        else:
            break
        p = side[0][0].points[0]
        q = p if abs(side[0][1]) >= 2 else side[1][0].points[0]
        step = _addition_step(p, q)
        # div(step) = (P)+(Q)-(P+Q)-(O)
        fn = fn * step ** sign
        for place, mult in step.div:
            new = work.get(place, 0) - sign * mult
            if new:
                work[place] = new
            else:
                work.pop(place, None)
    leftover = Divisor(work.items())
    if not leftover.is_zero():
        raise ValueError(
            f"divisor is not principal: reduces to {leftover!r}")
    assert fn.div == d
    return fn


def nth_root_function(g: MillerFunc, n: int) -> list[MillerFunc]:
    """All n functions h with h^n = g exactly; needs div(g) = n*D with D
    principal, and the leftover constant must have an n-th root."""
    curve = g.curve
    field = curve.field
    for place, mult in g.div:
        if mult % n != 0:
            raise ValueError(
                f"divisor multiplicity {mult} at {place!r} is not "
                f"divisible by {n}")
    droot = Divisor([(pl, m // n) for pl, m in g.div])
    if droot.degree != 0 or not divisor_sum(droot).is_zero:
        raise ValueError("the divided divisor is not principal")
    h0 = function_with_divisor(droot, curve)
    # g / h0^n is constant; evaluate both at a fresh point to find it
    c = None
    for p in curve.points(1):
        if p.is_zero:
            continue
        try:
            c = g.value_at(p) / h0.value_at(p) ** n
            break
        except ValueError:
            continue
    if c is None:
        for p in curve.points(2):
            if p.is_zero:
                continue
            try:
                c = lower(g.value_at(p) / h0.value_at(p) ** n, field)
                break
            except ValueError:
                continue
    assert c is not None, "no evaluation point found"
    from .ffield import ff_nth_root
    rho = ff_nth_root(c, n)
    if rho is None:
        k = _required_extension(c, n)
        raise ValueError(
            f"the constant has no n-th root in GF({field.order}); a "
            f"degree-{k} constant field extension is required")
    mu = _mu_elements(field, n)
    return [h0 * (rho * zeta) for zeta in mu]


def _required_extension(c: FieldElem, n: int) -> int:
    o = c.multiplicative_order()
    q = c.field.order
    for k in range(1, 13):
        qk = q ** k
        from .ffield import _gcd
        g = _gcd(n, qk - 1)
        if (qk - 1) // g % o == 0:
            return k
    return 0


def _mu_elements(field: FiniteField, n: int) -> list[FieldElem]:
    from .ffield import _gcd
    g = _gcd(n, field.order - 1)
    if g != n:
        raise ValueError(f"mu_{n} is not contained in GF({field.order})")
    gen = field.generator() ** ((field.order - 1) // n)
    out = [field.one()]
    cur = gen
    for _ in range(n - 1):
        out.append(cur)
        cur = cur * gen
    return out


# -- the Tate pairing -----------------------------------------------------

def embedding_degree(q: int, n: int, cap: int = 12) -> int:
    for k in range(1, cap + 1):
        if (q ** k - 1) % n == 0:
            return k
    raise ValueError(f"mu_{n} needs an extension of degree > {cap}")


def tate_pairing(p: ECPoint, q_point: ECPoint, n: int) -> FieldElem:
    """The pairing value f_{n,P}(D_Q)^((q^k-1)/n) in mu_n over the
    embedding field; bilinear and well-defined modulo n-th powers."""
    curve = p.curve
    if q_point.curve != curve:
        raise ValueError("points on different curves")
    if not scalar_mul(n, p).is_zero:
        raise ValueError(f"{p!r} is not {n}-torsion")
    q = curve.field.order
    k = embedding_degree(q, n)
    big = curve.base_extend(k)
    pl = lift_point(p, big)
    ql = lift_point(q_point, big)
    if pl.is_zero or ql.is_zero:
        return big.field.one()
    f = miller_function(n, pl)
    exp = (q ** k - 1) // n
    for r in big.points(1):
        if r.is_zero:
            continue
        qr = ec_add(ql, r)
        if qr.is_zero:
            continue
        try:
            num = f.value_at(qr)
            den = f.value_at(r)
        except ValueError:
            continue
        return (num / den) ** exp
    raise RuntimeError("no auxiliary point avoids the factor supports")


def lift_point(p: ECPoint, big_curve: Curve) -> ECPoint:
    if p.is_zero:
        return big_curve.zero()
    field = big_curve.field
    return ECPoint(big_curve, embed(p.x, field), embed(p.y, field))


# -- text grammar -----------------------------------------------------------

def curve_to_text(curve: Curve) -> str:
    from .polys import _coeff_text
    parts = ["x^3"]
    if not curve.a.is_zero():
        parts.append(f"{_coeff_text(curve.a)}*x" if curve.a != 1 else "x")
    if not curve.b.is_zero():
        parts.append(_coeff_text(curve.b))
    rhs = "+".join(parts)
    return f"y^2={rhs} over GF({curve.field.order})"


def parse_curve(text: str) -> Curve:
    text = text.strip()
    expr, _, field_text = text.rpartition(" over ")
    from .ratfun import _parse_field_order
    field = _parse_field_order(field_text.strip())
    lhs, _, rhs = expr.partition("=")
    if lhs.strip() != "y^2":
        raise ValueError(f"curve text must start with y^2=: {text!r}")
    from .polys import parse_poly
    poly = parse_poly(field, rhs.strip())
    if poly.degree != 3 or poly[3] != 1 or not poly[2].is_zero():
        raise ValueError("curve right side must be x^3 + a*x + b")
    return Curve(field, poly[1], poly[0])
