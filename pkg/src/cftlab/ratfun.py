"""The rational function field GF(q)(x): places, divisors, evaluation,
residues modulo n-th powers, and generalized Selmer groups.

A place is a monic irreducible polynomial or the place at infinity
(uniformizer 1/x).  Functions are reduced fractions with monic
denominator, so equality of functions is equality of representations.
"""

from __future__ import annotations

import itertools

from . import polys, snf
from .divisor import Divisor
from .ffield import FieldElem, FiniteField, ff_norm, GF_of_order
from .polys import Poly


class RatPlace:
    """A closed point of GF(q)(x): Finite(monic irreducible) or infinity."""

    __slots__ = ("field", "poly", "degree")

    def __init__(self, field: FiniteField, poly: Poly | None):
        self.field = field
        self.poly = poly          # None encodes the infinite place
        if poly is None:
            self.degree = 1
        else:
            if not poly.is_monic():
                raise ValueError("finite places are monic polynomials")
            self.degree = poly.degree

    @staticmethod
    def finite(poly: Poly) -> "RatPlace":
        return RatPlace(poly.field, poly)

    @staticmethod
    def infinity(field: FiniteField) -> "RatPlace":
        return RatPlace(field, None)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    def norm(self) -> int:
        """Cardinality of the residue field, q^deg."""
        return self.field.order ** self.degree

    def residue_field(self) -> FiniteField:
        if self.poly is None or self.degree == 1:
            return self.field
        return self.field.extension_with_modulus(self.poly.coeffs)

    def sort_key(self):
        if self.poly is None:
            return (1, 0, ())
        return (0, self.degree, self.poly.key())

    def __eq__(self, other):
        if not isinstance(other, RatPlace):
            return NotImplemented
        return self.field is other.field and self.poly == other.poly

    def __hash__(self):
        return hash((id(self.field), None if self.poly is None
                     else self.poly.coeffs))

    def __repr__(self):
        return place_to_text(self)


class RatFunc:
    """Nonzero rational function, reduced, with monic denominator."""

    __slots__ = ("field", "num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        field = num.field
        if den is None:
            den = Poly.const(field, 1)
        if num.is_zero():
            raise ValueError("functions are nonzero by definition")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = polys.gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        lc = den.lc()
        if lc != 1:
            inv = lc.inverse()
            num, den = num * inv, den * inv
        self.field = field
        self.num = num
        self.den = den

    @staticmethod
    def const(field: FiniteField, c) -> "RatFunc":
        return RatFunc(Poly.const(field, c))

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> FieldElem:
        if not self.is_constant():
            raise ValueError(f"{self!r} is not constant")
        return self.num[0] / self.den[0]

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self.num * other.num, self.den * other.den)
        if isinstance(other, (int, FieldElem)):
            return RatFunc(self.num * self.field.coerce(other), self.den)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self.num * other.den, self.den * other.num)
        if isinstance(other, (int, FieldElem)):
            return RatFunc(self.num, self.den * self.field.coerce(other))
        return NotImplemented

    def inverse(self) -> "RatFunc":
        return RatFunc(self.den, self.num)

    def __pow__(self, e: int):
        if e == 0:
            return RatFunc.const(self.field, 1)
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num ** e, self.den ** e)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def ord_at(self, place: RatPlace) -> int:
        """Valuation at a place (no factorization: trial division only)."""
        if place.is_infinite:
            return self.den.degree - self.num.degree
        pi = place.poly

        def mult(f: Poly) -> int:
            k = 0
            while True:
                q, r = divmod(f, pi)
                if not r.is_zero():
                    return k
                f = q
                k += 1

        return mult(self.num) - mult(self.den)

    def residue_at(self, place: RatPlace) -> FieldElem:
        """Image in the residue field; requires valuation 0 there."""
        if self.ord_at(place) != 0:
            raise ValueError(f"function has a zero or pole at {place!r}")
        if place.is_infinite:
            return self.num.lc() / self.den.lc()
        rf = place.residue_field()
        if place.degree == 1:
            a = -place.poly[0]
            return self.num.evaluate(a) / self.den.evaluate(a)
        z = rf.gen_elem()
        return self.num.evaluate(z) / self.den.evaluate(z)

    def map_coeffs(self, fn) -> "RatFunc":
        return RatFunc(self.num.map_coeffs(fn), self.den.map_coeffs(fn))

    def __repr__(self):
        return function_to_text(self)


# -- places ------------------------------------------------------------

def infinity(field: FiniteField) -> RatPlace:
    return RatPlace.infinity(field)


def finite_place(field: FiniteField, poly_text_or_poly) -> RatPlace:
    if isinstance(poly_text_or_poly, Poly):
        return RatPlace.finite(poly_text_or_poly.monic())
    return RatPlace.finite(polys.parse_poly(field, poly_text_or_poly).monic())


def places_up_to_degree(field: FiniteField, max_degree: int,
                        include_infinity: bool = True):
    """All places of degree <= max_degree in canonical order."""
    out = []
    if include_infinity:
        out.append(infinity(field))
    for p in polys.monic_irreducibles(field, max_degree):
        out.append(RatPlace.finite(p))
    out.sort(key=lambda p: (p.degree, p.sort_key()))
    return out


# -- divisors and principal divisors -------------------------------------

def principal_divisor(f: RatFunc) -> Divisor:
    """div(f): zeros minus poles, including the infinite place; the total
    degree is always 0."""
    field = f.field
    items = []
    _, num_fs = polys.factor(f.num)
    for g, m in num_fs.items():
        items.append((RatPlace.finite(g), m))
    _, den_fs = polys.factor(f.den)
    for g, m in den_fs.items():
        items.append((RatPlace.finite(g), -m))
    items.append((infinity(field), f.den.degree - f.num.degree))
    div = Divisor(items)
    assert div.degree == 0, "principal divisor of nonzero degree"
    return div


def support_of(f: RatFunc) -> frozenset:
    return principal_divisor(f).support()


def evaluate(f: RatFunc, d: Divisor) -> FieldElem:
    """f(D) = prod over places of N(f mod p)^ord_p(D); needs supp(f)
    disjoint from supp(D)."""
    field = f.field
    value = field.one()
    for place, mult in d:
        if f.ord_at(place) != 0:
            raise ValueError(
                f"supports overlap at {place!r}: evaluation undefined")
        r = f.residue_at(place)
        value = value * ff_norm(r, field) ** mult
    return value


def residue_mod_nth_powers(f: RatFunc, place: RatPlace, n: int) -> FieldElem:
    """Representative of the residue of f at a place modulo n-th powers.

    If ord_p(f) is divisible by n the residue of f * u^(-ord) is returned
    (u a uniformizer, so the class is independent of the choice); if not,
    the class of 1 is returned by convention.
    """
    if n < 1:
        raise ValueError("n must be positive")
    ord_f = f.ord_at(place)
    rf = place.residue_field()
    if ord_f % n != 0:
        return rf.one()
    if ord_f != 0:
        if place.is_infinite:
            shift = RatFunc(Poly.const(f.field, 1), Poly.x(f.field)) ** ord_f
        else:
            shift = RatFunc(place.poly) ** (-ord_f)
        f = f * shift
    return f.residue_at(place)


def same_residue_class(a: FieldElem, b: FieldElem, n: int) -> bool:
    """Whether a and b agree in F^x/(F^x)^n."""
    field = a.field
    q1 = field.order - 1
    from .ffield import _gcd
    g = _gcd(n, q1)
    return (a / b) ** (q1 // g) == field.one()


# -- the approximation-theorem shift --------------------------------------

def coprime_shift(f: RatFunc, n: int, avoid) -> RatFunc:
    """Multiply f by an n-th power so its support avoids the given places.

    Preconditions: ord_p(f) = 0 mod n at every avoided place.  Finite
    avoided places are cleared with their own uniformizers (the slack
    lands on infinity); if infinity is avoided too, the slack is moved to
    the least auxiliary monic irreducible outside avoid and supp(f).
    """
    avoid = set(avoid)
    field = f.field
    shift_num = Poly.const(field, 1)
    shift_den = Poly.const(field, 1)
    inf = infinity(field)
    for place in sorted(avoid, key=lambda p: p.sort_key()):
        if place.is_infinite:
            continue
        o = f.ord_at(place)
        if o == 0:
            continue
        if o % n != 0:
            raise ValueError(
                f"valuation {o} at {place!r} is not divisible by {n}")
        e = -o // n
        if e > 0:
            shift_num = shift_num * place.poly ** e
        else:
            shift_den = shift_den * place.poly ** (-e)
    g0 = RatFunc(shift_num, shift_den)
    if inf in avoid:
        o_inf = f.ord_at(inf)
        if o_inf % n != 0:
            raise ValueError(
                f"valuation {o_inf} at inf is not divisible by {n}")
        s = o_inf // n + g0.ord_at(inf)
        if s != 0:
            blocked = set(avoid)
            blocked.update(support_of(f))
            blocked.update(support_of(g0) if not g0.is_constant() else ())
            aux = None
            for pi in polys.monic_irreducibles(field, 6):
                place = RatPlace.finite(pi)
                if place in blocked:
                    continue
                if s % pi.degree == 0:
                    aux = pi
                    break
            if aux is None:
                raise ValueError("no auxiliary place available for the shift")
            g0 = g0 * RatFunc(aux) ** (s // aux.degree)
    out = f * g0 ** n
    for place in avoid:
        assert out.ord_at(place) == 0
    return out


# -- Selmer groups -------------------------------------------------------

def selmer_contains(f: RatFunc, n: int, s_places) -> bool:
    """Membership in F_{n,S}: ord_p(f) = 0 mod n at every place outside S
    (infinity included when it is not in S)."""
    s_places = set(s_places)
    for place, mult in principal_divisor(f):
        if place not in s_places and mult % n != 0:
            return False
    return True


class SelmerGroup:
    """F_{n,S}/(F^x)^n presented by independent generators.

    Candidate generators are a fixed generator of the constant group and
    the monic irreducibles of S; exponent vectors that land in F_{n,S}
    form the kernel mod n of the valuation relation matrix, extracted by
    Smith normal form.
    """

    def __init__(self, field: FiniteField, n: int, s_places):
        if n < 1:
            raise ValueError("n must be positive")
        if n % field.p == 0:
            raise ValueError("n must be coprime to the field characteristic")
        self.field = field
        self.n = n
        self.s_places = frozenset(s_places)
        for p in self.s_places:
            if p.field is not field:
                raise ValueError("S contains places of a different field")
        finite_s = sorted((p for p in self.s_places if not p.is_infinite),
                          key=lambda p: p.sort_key())
        g = field.generator()
        self.candidates: list[RatFunc] = [RatFunc.const(field, g)]
        self.candidates += [RatFunc(p.poly) for p in finite_s]
        self._finite_s = finite_s
        k = len(self.candidates)
        inf_in_s = any(p.is_infinite for p in self.s_places)
        rows = []
        if not inf_in_s:
            rows.append([0] + [-p.degree for p in finite_s])
        m = rows if rows else [[0] * k]
        res = snf.smith_normal_form([row[:] for row in m])
        diag = res.diagonal
        basis_cols = []
        for i in range(k):
            d = diag[i] if i < len(diag) else 0
            from .ffield import _gcd
            mult = n // _gcd(d, n) if d != 0 else 1
            col = [res.v[r][i] * mult for r in range(k)]
            basis_cols.append(col)
        # B columns span {e : M e = 0 mod n}
        self._b = [[basis_cols[j][i] for j in range(k)] for i in range(k)]
        q1 = field.order - 1
        from .ffield import _gcd as gcd_
        lat = [[0] * k for _ in range(k)]
        lat[0][0] = gcd_(n, q1)
        for i in range(1, k):
            lat[i][i] = n
        x = snf.solve_integer(self._b, lat)
        pres = snf.smith_normal_form([row[:] for row in x], with_uinv=True)
        self._pres = pres
        self._kept = []
        self.orders = []
        self.gen_vectors = []
        for i in range(k):
            d = pres.diagonal[i] if i < len(pres.diagonal) else 0
            assert d > 0, "selmer quotient must be finite"
            if d == 1:
                continue
            # column i of Uinv, mapped through B, is a generator exponent
            col = [pres.uinv[r][i] for r in range(k)]
            vec = [sum(self._b[r][j] * col[j] for j in range(k))
                   for r in range(k)]
            self._kept.append(i)
            self.orders.append(d)
            self.gen_vectors.append(vec)
        self.generators = [self._vector_to_function(v)
                           for v in self.gen_vectors]

    def _vector_to_function(self, vec) -> RatFunc:
        out = RatFunc.const(self.field, 1)
        for c, e in zip(self.candidates, vec):
            e_red = e % self.n
            if e_red:
                out = out * c ** e_red
        return out

    @property
    def order(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out

    def elements(self):
        """(coords, representative function) for the whole quotient."""
        for coords in itertools.product(*(range(d) for d in self.orders)):
            f = RatFunc.const(self.field, 1)
            for c, g in zip(coords, self.generators):
                if c:
                    f = f * g ** c
            yield coords, f

    def express(self, f: RatFunc):
        """Coordinates of f's class in the generator basis, or None when
        f is not in F_{n,S} (modulo n-th powers)."""
        vec = self._candidate_vector(f)
        if vec is None:
            return None
        w = snf.solve_integer(self._b, [[v] for v in vec])
        w = [row[0] for row in w]
        k = len(self.candidates)
        out = []
        for i, d in zip(self._kept, self.orders):
            c = sum(self._pres.u[i][j] * w[j] for j in range(k))
            out.append(c % d)
        return tuple(out)

    def _candidate_vector(self, f: RatFunc):
        field = self.field
        n = self.n
        g = field.generator()
        vec = [0] * len(self.candidates)
        unit = field.one()
        for poly, sign in ((f.num, 1), (f.den, -1)):
            u, fs = polys.factor(poly)
            unit = unit * u ** sign
            for irr, mult in fs.items():
                place = RatPlace.finite(irr)
                if place in self.s_places:
                    vec[1 + self._finite_s.index(place)] += sign * mult
                elif (sign * mult) % n != 0:
                    return None
        inf = infinity(field)
        if inf not in self.s_places and \
                (f.den.degree - f.num.degree) % n != 0:
            return None
        from .ffield import element_dlog
        k = element_dlog(unit, g, field.order - 1)
        assert k is not None
        vec[0] = k
        return vec

    def class_equal(self, f: RatFunc, g: RatFunc) -> bool:
        return self.express(f / g) == tuple([0] * len(self.orders))


def selmer_basis(field: FiniteField, n: int, s_places) -> SelmerGroup:
    """Generators with multiplicative orders for F_{n,S}/(F^x)^n."""
    return SelmerGroup(field, n, s_places)


# -- constant-field extensions ---------------------------------------------

def lift_function(f: RatFunc, big: FiniteField) -> RatFunc:
    """View a function of GF(q)(x) inside GF(q^r)(x)."""
    from .ffield import embed

    def up(poly: Poly) -> Poly:
        return Poly(big, [embed(c, big) for c in poly.coeffs])

    return RatFunc(up(f.num), up(f.den))


def frobenius_order(field: FiniteField, q: int) -> int:
    """Order of the q-power Frobenius on this field (least s with
    q^s = field order, i.e. the degree over GF(q))."""
    s, power = 1, q
    while power != field.order:
        power *= q
        s += 1
        if power > field.order:
            raise ValueError(f"{field} is not an extension of GF({q})")
    return s


def frobenius_function(f: RatFunc, q: int, times: int = 1) -> RatFunc:
    """Apply the q-power Frobenius to the coefficients; ``times`` may be
    negative (inverse Frobenius)."""
    s = frobenius_order(f.field, q)
    e = q ** (times % s)
    return f.map_coeffs(lambda c: c ** e if not c.is_zero() else c)


def conorm_place(place: RatPlace, big: FiniteField) -> list[tuple[RatPlace, int]]:
    """Places of GF(q^r)(x) above a place of GF(q)(x), with multiplicity
    one each (constant extensions are unramified)."""
    if place.is_infinite:
        return [(infinity(big), 1)]
    lifted = Poly(big, [_embed_into(c, big) for c in place.poly.coeffs])
    _, fs = polys.factor(lifted)
    return [(RatPlace.finite(g), m) for g, m in sorted(
        fs.items(), key=lambda kv: kv[0].key())]


def _embed_into(c, big):
    from .ffield import embed
    return embed(c, big)


def conorm_divisor(d: Divisor, big: FiniteField) -> Divisor:
    items = []
    for place, mult in d:
        for above, e in conorm_place(place, big):
            items.append((above, e * mult))
    return Divisor(items)


def norm_place(place: RatPlace, small: FiniteField) -> tuple[RatPlace, int]:
    """(place below, residue degree) for a place of GF(q^r)(x) over
    GF(q)(x); the divisor norm sends the place to residue_degree * below."""
    if place.is_infinite:
        return infinity(small), 1
    big = place.field
    r = big.degree // small.degree
    # product of the distinct Frobenius conjugates of the defining poly
    q = small.order
    conj = place.poly
    seen = {conj.coeffs}
    prod = conj
    for _ in range(r - 1):
        conj = conj.map_coeffs(lambda c: c ** q)
        if conj.coeffs in seen:
            break
        seen.add(conj.coeffs)
        prod = prod * conj
    below = Poly(small, [_lower_into(c, small) for c in prod.coeffs])
    below_place = RatPlace.finite(below)
    assert below_place.degree == len(seen) * place.degree
    return below_place, r // len(seen)


def _lower_into(c, small):
    from .ffield import lower
    return lower(c, small)


def norm_divisor(d: Divisor, small: FiniteField) -> Divisor:
    items = []
    for place, mult in d:
        below, f = norm_place(place, small)
        items.append((below, f * mult))
    return Divisor(items)


# -- text grammar ---------------------------------------------------------

def place_to_text(place: RatPlace) -> str:
    if place.is_infinite:
        return "inf"
    return f"({polys.poly_to_text(place.poly)})"


def parse_place(field: FiniteField, text: str) -> RatPlace:
    text = text.strip()
    if text == "inf":
        return infinity(field)
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    poly = polys.parse_poly(field, text).monic()
    return RatPlace.finite(poly)


def divisor_to_text(d: Divisor) -> str:
    if d.is_zero():
        return "[]"
    parts = [f"{place_to_text(p)}:{m}" for p, m in d]
    return "[" + ", ".join(parts) + "]"


def parse_divisor(field: FiniteField, text: str) -> Divisor:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"divisor text must be bracketed: {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return Divisor()
    items = []
    depth = 0
    start = 0
    chunks = []
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            chunks.append(inner[start:i])
            start = i + 1
    chunks.append(inner[start:])
    for chunk in chunks:
        place_text, _, mult_text = chunk.rpartition(":")
        items.append((parse_place(field, place_text), int(mult_text)))
    return Divisor(items)


def function_to_text(f: RatFunc, with_field: bool = False) -> str:
    num = polys.poly_to_text(f.num)
    if f.den.is_one():
        text = num
    else:
        text = f"({num})/({polys.poly_to_text(f.den)})"
    if with_field:
        text += f" over GF({f.field.order})"
    return text


def parse_function(text: str, field: FiniteField | None = None) -> RatFunc:
    """Parse "(x^4+2*x)/(x-1) over GF(5)"; the field tag is optional when
    a field is supplied."""
    text = text.strip()
    if " over " in text:
        expr, _, field_text = text.rpartition(" over ")
        field_text = field_text.strip()
        if not field_text.startswith("GF(") or not field_text.endswith(")"):
            raise ValueError(f"bad field tag {field_text!r}")
        parsed = _parse_field_order(field_text)
        if field is not None and parsed is not field:
            raise ValueError("field tag disagrees with the supplied field")
        field = parsed
        text = expr.strip()
    if field is None:
        raise ValueError("no field given for function text")
    if "/" in text:
        depth = 0
        for i, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "/" and depth == 0:
                num_t, den_t = text[:i], text[i + 1:]
                break
        else:
            num_t, den_t = text, "1"
        num_t = num_t.strip()
        den_t = den_t.strip()
        if num_t.startswith("(") and num_t.endswith(")"):
            num_t = num_t[1:-1]
        if den_t.startswith("(") and den_t.endswith(")"):
            den_t = den_t[1:-1]
        return RatFunc(polys.parse_poly(field, num_t),
                       polys.parse_poly(field, den_t))
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    return RatFunc(polys.parse_poly(field, text))


def _parse_field_order(text: str) -> FiniteField:
    inner = text[3:-1]
    if "^" in inner:
        p, r = inner.split("^")
        from .ffield import GF
        return GF(int(p), int(r))
    return GF_of_order(int(inner))
