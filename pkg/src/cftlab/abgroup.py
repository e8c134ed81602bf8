"""Ray class groups of GF(q)(x) modulo n, presented two independent ways.

ray_class_group presents Cl_m/n Cl_m on generator places of bounded
degree with relations harvested from ray functions f = 1 + m*t, reduced
by Smith normal form; arbitrary divisors are mapped into the
presentation through explicit ray-function certificates, which also
serve as the stabilization witness for the degree bound.

ray_class_structural is the independent oracle: it computes
(Z + (GF(q)[x]/m)^x / GF(q)^x) mod n by direct unit-group enumeration
and never touches the divisor presentation.
"""

from __future__ import annotations

import itertools

from . import polys, snf
from .divisor import Divisor
from .ffield import FiniteField
from .polys import Poly
from .ratfun import RatFunc, RatPlace, infinity, places_up_to_degree
from .snf import FinAbGroup, Presentation, smith_normal_form

DEFAULT_DEGREE_BOUND = 3
STABILIZATION_SAMPLES = 40


def modulus_poly(m: Divisor) -> Poly:
    """The polynomial prod p^ord_p(m); rejects the infinite place."""
    field = None
    out = None
    for place, mult in m:
        if place.is_infinite:
            raise ValueError(
                "moduli with the infinite place in their support are not "
                "supported by the ray class presentation")
        if mult < 0:
            raise ValueError("modulus must be effective")
        field = place.field
        term = place.poly ** mult
        out = term if out is None else out * term
    if out is None:
        raise ValueError("modulus_poly of the zero divisor")
    return out


class RayClassData:
    """Cl_m(F)/n Cl_m(F) for F = GF(q)(x), with a divisor-to-element map."""

    def __init__(self, field: FiniteField, m: Divisor, n: int,
                 degree_bound: int = DEFAULT_DEGREE_BOUND):
        if n < 1:
            raise ValueError("n must be positive")
        if n % field.p == 0:
            raise ValueError("n must be coprime to q")
        if not m.is_effective():
            raise ValueError("modulus must be effective")
        self.field = field
        self.modulus = m
        self.n = n
        self.m_poly = modulus_poly(m) if not m.is_zero() else None
        bound = max(degree_bound, self.m_poly.degree if self.m_poly else 1)
        self.degree_bound = bound
        self.places = [p for p in places_up_to_degree(field, bound)
                       if p not in m.support()]
        self._index = {p: i for i, p in enumerate(self.places)}
        self._inf_index = self._index[infinity(field)]
        relations = self._harvest_relations()
        self._pres = snf.presentation(len(self.places), relations, mod=n)
        self.group = self._pres.group
        self._reduction_cache: dict[RatPlace, list[tuple[int, int]]] = {}
        self._check_stabilization()

    # -- presentation -----------------------------------------------------

    def _harvest_relations(self):
        field = self.field
        bound = self.degree_bound
        relations = []
        if self.m_poly is None:
            for pi in polys.monic_irreducibles(field, bound):
                vec = [0] * len(self.places)
                vec[self._index[RatPlace.finite(pi)]] = 1
                vec[self._inf_index] = -pi.degree
                relations.append(vec)
            return relations
        # ray functions f = 1 + m*t; degrees above the bound are kept
        # only when f factors over the generator places
        dm = self.m_poly.degree
        max_tdeg = max(bound + 2 - dm, 1)
        budget = 4000
        for tdeg in range(0, max_tdeg + 1):
            if field.order ** (tdeg + 1) > budget:
                break
            budget -= field.order ** (tdeg + 1)
            for tail in itertools.product(field.elements(), repeat=tdeg + 1):
                t = Poly(field, tuple(reversed(tail)))
                if t.degree != tdeg:
                    continue
                f = self.m_poly * t + 1
                vec = self._divisor_vector_of_poly(f)
                if vec is not None:
                    relations.append(vec)
        # a ray certificate g = pi * r / aux with pi * r = aux (mod m)
        # ties every generator place to the low-degree ones
        for place in self.places:
            if place.is_infinite:
                continue
            vec = [0] * len(self.places)
            vec[self._index[place]] = 1
            for idx, coeff in self._certificate(place):
                vec[idx] -= coeff
            relations.append(vec)
        return relations

    def _divisor_vector_of_poly(self, f: Poly):
        """Exponent vector of div(f) over the generator places, or None
        if some factor is not a generator."""
        vec = [0] * len(self.places)
        _, fs = polys.factor(f)
        for irr, mult in fs.items():
            idx = self._index.get(RatPlace.finite(irr))
            if idx is None:
                return None
            vec[idx] += mult
        vec[self._inf_index] -= f.degree
        return vec

    # -- divisor map --------------------------------------------------------

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.group.factors

    @property
    def order(self) -> int:
        return self.group.order

    def divisor_class(self, d: Divisor):
        """Class of a divisor coprime to the modulus, as coordinates in
        the presented group."""
        vec = [0] * len(self.places)
        for place, mult in d:
            if place in self.modulus.support():
                raise ValueError(
                    f"divisor meets the modulus support at {place!r}")
            idx = self._index.get(place)
            if idx is not None:
                vec[idx] += mult
            else:
                for gen_idx, coeff in self.reduce_place(place):
                    vec[gen_idx] += coeff * mult
        return self._pres.coords(vec)

    def element_divisor(self, coords) -> Divisor:
        """A representative divisor for abstract group coordinates."""
        items: dict[RatPlace, int] = {}
        for i, c in enumerate(coords):
            if not c:
                continue
            gv = self._pres.generator_vector(i)
            for j, e in enumerate(gv):
                if e:
                    items[self.places[j]] = items.get(self.places[j], 0) \
                        + c * e
        return Divisor(items.items())

    def reduce_place(self, place: RatPlace) -> list[tuple[int, int]]:
        """Express any place coprime to the modulus in the generator
        places modulo the ray; the witness is an explicit ray function."""
        cached = self._reduction_cache.get(place)
        if cached is not None:
            return cached
        out = self._certificate(place)
        self._reduction_cache[place] = out
        return out

    def _certificate(self, place: RatPlace) -> list[tuple[int, int]]:
        if place.is_infinite or place in self.modulus.support():
            raise ValueError(f"cannot reduce {place!r}")
        pi = place.poly
        if self.m_poly is None:
            # div(pi) is a ray relation: (p) = deg(p) * (inf)
            return [(self._inf_index, pi.degree)]
        aux = None
        for cand in self.places:
            if not cand.is_infinite and cand.degree == 1:
                aux = cand
                break
        if aux is None:
            raise ValueError(
                "no degree-one auxiliary place outside the modulus")
        # g = pi * r / aux, with pi * r = aux (mod m); div(g) is a ray
        # relation expressing (place) in the generators
        r = (polys.invmod(pi, self.m_poly) * aux.poly) % self.m_poly
        assert not r.is_zero()
        out = [(self._index[aux], 1)]
        _, fs = polys.factor(r)
        for irr, mult in fs.items():
            idx = self._index.get(RatPlace.finite(irr))
            assert idx is not None, "reduction factor exceeds degree bound"
            out.append((idx, -mult))
        e_inf = aux.degree - pi.degree - r.degree
        if e_inf:
            out.append((self._inf_index, -e_inf))
        return out

    def _check_stabilization(self):
        """Certify that places one and two degrees past the bound reduce
        into the presented group (the degree bound is stable)."""
        field = self.field
        for extra in (1, 2):
            d = self.degree_bound + extra
            if field.order ** d > 1 << 20:
                continue
            count = 0
            for pi in polys.monic_irreducibles_of_degree(field, d):
                place = RatPlace.finite(pi)
                if place in self.modulus.support():
                    continue
                self.reduce_place(place)
                count += 1
                if count >= STABILIZATION_SAMPLES:
                    break
            if count == 0:
                raise ValueError("insufficient degree bound")

    def __repr__(self):
        return (f"Cl_m/{self.n}Cl_m over GF({self.field.order})(x), "
                f"m={self.modulus!r}: {self.group!r}")


def ray_class_group(field: FiniteField, m: Divisor, n: int,
                    degree_bound: int = DEFAULT_DEGREE_BOUND) -> RayClassData:
    """Present Cl_m(F)/n Cl_m(F) on places of bounded degree."""
    return RayClassData(field, m, n, degree_bound)


class StructuralRayClass:
    """Independent oracle for Cl_m/n Cl_m when m is finite and nonzero:
    (Z + (GF(q)[x]/m)^x / GF(q)^x) mod n via unit enumeration."""

    def __init__(self, field: FiniteField, m: Divisor, n: int):
        if m.is_zero():
            raise ValueError("oracle inapplicable: zero modulus")
        for place, _ in m:
            if place.is_infinite:
                raise ValueError("oracle inapplicable: infinite place in m")
        if n < 1 or n % field.p == 0:
            raise ValueError("n must be positive and coprime to q")
        self.field = field
        self.modulus = m
        self.n = n
        self.m_poly = modulus_poly(m)
        self._build_unit_group()
        rels = []
        for i, rel in enumerate(self._unit_relations):
            rels.append([0] + rel)
        self._pres = snf.presentation(1 + len(self._unit_gens), rels, mod=n)
        self.group = self._pres.group

    def _canonical(self, u: Poly) -> Poly:
        # representative of u * GF(q)^x: scale the leading coefficient to 1
        return u.monic()

    def _build_unit_group(self):
        field = self.field
        mp = self.m_poly
        # each class of (GF(q)[x]/m)^x / GF(q)^x has a unique monic
        # representative of degree < deg(m)
        reps = []
        for deg in range(mp.degree):
            for tail in itertools.product(field.elements(), repeat=deg):
                u = Poly(field, tuple(reversed(tail)) + (field.one(),))
                if polys.gcd(u, mp).is_one():
                    reps.append(u)
        table: dict[tuple, list[int]] = {
            Poly.const(field, 1).coeffs: []}
        gens: list[Poly] = []
        relations: list[list[int]] = []
        for u in reps:
            if u.coeffs in table:
                continue
            k = len(gens)
            # least t >= 1 with u^t in the subgroup generated so far
            power = u
            t = 1
            while power.coeffs not in table:
                power = self._canonical(power * u % mp)
                t += 1
            known = table[power.coeffs]
            rel = [0] * (k + 1)
            rel[k] = t
            for i, e in enumerate(known):
                rel[i] -= e
            for old in relations:
                old.append(0)
            relations.append(rel)
            gens.append(u)
            new_table = {}
            cur = Poly.const(field, 1)
            for j in range(t):
                for key, vec in table.items():
                    prod = self._canonical(Poly(field, key) * cur % mp)
                    new_table[prod.coeffs] = vec + [j]
                cur = self._canonical(cur * u % mp)
            table = new_table
        assert len(table) == len(reps), "unit closure is incomplete"
        self._unit_gens = gens
        self._unit_relations = relations
        self._unit_dlog = table

    def _unit_vector(self, u: Poly) -> list[int]:
        u = self._canonical(u % self.m_poly)
        vec = self._unit_dlog.get(u.coeffs)
        if vec is None:
            raise ValueError(f"{u!r} is not a unit modulo the modulus")
        return list(vec)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.group.factors

    @property
    def order(self) -> int:
        return self.group.order

    def divisor_class(self, d: Divisor):
        """(deg, unit part) coordinates of a divisor coprime to m."""
        vec = [0] * (1 + len(self._unit_gens))
        for place, mult in d:
            if place in self.modulus.support():
                raise ValueError(
                    f"divisor meets the modulus support at {place!r}")
            vec[0] += mult * place.degree
            if not place.is_infinite:
                uv = self._unit_vector(place.poly)
                for i, e in enumerate(uv):
                    vec[1 + i] += mult * e
        return self._pres.coords(vec)


def ray_class_structural(field: FiniteField, m: Divisor,
                         n: int) -> StructuralRayClass:
    """The unit-group oracle for Cl_m/n Cl_m (finite nonzero m only)."""
    return StructuralRayClass(field, m, n)
