"""Formal integer combinations of places.

Works for any place type exposing ``degree`` and ``sort_key()``; both the
rational function field and elliptic function fields use it.
"""

from __future__ import annotations


class Divisor:
    """Immutable finite formal Z-combination of places."""

    __slots__ = ("_data",)

    def __init__(self, data=()):
        if isinstance(data, dict):
            items = data.items()
        else:
            items = data
        d = {}
        for place, mult in items:
            if mult:
                d[place] = d.get(place, 0) + mult
                if d[place] == 0:
                    del d[place]
        self._data = d

    @staticmethod
    def of(place, mult: int = 1) -> "Divisor":
        return Divisor([(place, mult)])

    def __iter__(self):
        return iter(sorted(self._data.items(),
                           key=lambda kv: kv[0].sort_key()))

    def items(self):
        return list(self)

    def __getitem__(self, place) -> int:
        return self._data.get(place, 0)

    def __contains__(self, place) -> bool:
        return place in self._data

    def __len__(self) -> int:
        return len(self._data)

    def is_zero(self) -> bool:
        return not self._data

    def support(self) -> frozenset:
        return frozenset(self._data)

    @property
    def degree(self) -> int:
        return sum(m * p.degree for p, m in self._data.items())

    def is_effective(self) -> bool:
        return all(m > 0 for m in self._data.values())

    def __add__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        out = dict(self._data)
        for p, m in other._data.items():
            out[p] = out.get(p, 0) + m
            if out[p] == 0:
                del out[p]
        d = Divisor.__new__(Divisor)
        d._data = out
        return d

    def __neg__(self):
        d = Divisor.__new__(Divisor)
        d._data = {p: -m for p, m in self._data.items()}
        return d

    def __sub__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return Divisor()
        d = Divisor.__new__(Divisor)
        d._data = {p: k * m for p, m in self._data.items()}
        return d

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def __repr__(self):
        if not self._data:
            return "0"
        return " + ".join(f"{m}*({p!r})" if m != 1 else f"({p!r})"
                          for p, m in self)
