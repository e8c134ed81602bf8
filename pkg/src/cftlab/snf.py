"""Smith normal form over the integers, and finite abelian group
presentations built from it.

The elimination keeps a set of nonzero positions per row and prefers
pivots of minimal absolute value, which stops coefficient blowup on the
sparse relation matrices produced by the class-group code.  When ``mod``
is given the input lattice is assumed to contain mod * Z^rows (the caller
appends mod * identity columns), so every entry, including the transform
matrices, may be reduced modulo ``mod``; the transforms are then only
meaningful modulo ``mod``, which is all the quotient constructions need.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class SNFResult:
    diagonal: list[int]
    u: list[list[int]]            # row transform, u * a * v = d
    v: list[list[int]] | None     # column transform (None when mod is set)
    uinv: list[list[int]] | None


def _balanced(x: int, mod: int) -> int:
    x %= mod
    if x > mod // 2:
        x -= mod
    return x


class _Eliminator:
    def __init__(self, a, mod=None, with_v=True, with_uinv=False):
        self.a = [list(row) for row in a]
        self.rows = len(self.a)
        self.cols = len(self.a[0]) if self.rows else 0
        self.mod = mod
        self.u = [[int(i == j) for j in range(self.rows)]
                  for i in range(self.rows)]
        self.uinv = ([[int(i == j) for j in range(self.rows)]
                      for i in range(self.rows)] if with_uinv else None)
        self.v = ([[int(i == j) for j in range(self.cols)]
                   for i in range(self.cols)] if with_v else None)
        if mod is not None:
            for row in self.a:
                for j in range(self.cols):
                    row[j] = _balanced(row[j], mod)
        self.nz = [set(j for j, x in enumerate(row) if x)
                   for row in self.a]

    # -- elementary operations ------------------------------------------

    def _rebuild_row(self, i):
        self.nz[i] = set(j for j, x in enumerate(self.a[i]) if x)

    def row_op(self, i, j, c):
        """row_i -= c * row_j"""
        if c == 0:
            return
        ai, aj = self.a[i], self.a[j]
        mod = self.mod
        for col in list(self.nz[j]):
            ai[col] -= c * aj[col]
            if mod is not None:
                ai[col] = _balanced(ai[col], mod)
            if ai[col]:
                self.nz[i].add(col)
            else:
                self.nz[i].discard(col)
        ui, uj = self.u[i], self.u[j]
        for t in range(self.rows):
            ui[t] -= c * uj[t]
            if mod is not None:
                ui[t] = _balanced(ui[t], mod)
        if self.uinv is not None:
            for t in range(self.rows):
                self.uinv[t][j] += c * self.uinv[t][i]
                if mod is not None:
                    self.uinv[t][j] = _balanced(self.uinv[t][j], mod)

    def col_op(self, i, j, c):
        """col_i -= c * col_j"""
        if c == 0:
            return
        mod = self.mod
        for t in range(self.rows):
            x = self.a[t][j]
            if not x:
                continue
            self.a[t][i] -= c * x
            if mod is not None:
                self.a[t][i] = _balanced(self.a[t][i], mod)
            if self.a[t][i]:
                self.nz[t].add(i)
            else:
                self.nz[t].discard(i)
        if self.v is not None:
            for t in range(self.cols):
                self.v[t][i] -= c * self.v[t][j]

    def swap_rows(self, i, j):
        if i == j:
            return
        self.a[i], self.a[j] = self.a[j], self.a[i]
        self.nz[i], self.nz[j] = self.nz[j], self.nz[i]
        self.u[i], self.u[j] = self.u[j], self.u[i]
        if self.uinv is not None:
            for t in range(self.rows):
                row = self.uinv[t]
                row[i], row[j] = row[j], row[i]

    def swap_cols(self, i, j):
        if i == j:
            return
        for t in range(self.rows):
            row = self.a[t]
            if row[i] or row[j]:
                row[i], row[j] = row[j], row[i]
                has_i = bool(row[i])
                has_j = bool(row[j])
                (self.nz[t].add(i) if has_i else self.nz[t].discard(i))
                (self.nz[t].add(j) if has_j else self.nz[t].discard(j))
        if self.v is not None:
            for t in range(self.cols):
                row = self.v[t]
                row[i], row[j] = row[j], row[i]

    def negate_row(self, i):
        self.a[i] = [-x for x in self.a[i]]
        self.u[i] = [-x for x in self.u[i]]
        if self.uinv is not None:
            for t in range(self.rows):
                self.uinv[t][i] = -self.uinv[t][i]

    # -- pivoting ---------------------------------------------------------

    def find_pivot(self, k):
        best = None
        for i in range(k, self.rows):
            for j in self.nz[i]:
                if j < k:
                    continue
                v = abs(self.a[i][j])
                if best is None or v < best[0]:
                    best = (v, i, j)
                    if v == 1:
                        return best
        return best

    def clear_pivot(self, k):
        """Make entry (k,k) the only nonzero of row k and column k."""
        while True:
            pivot = self.a[k][k]
            # clear column k
            changed = False
            for i in range(self.rows):
                if i == k or self.a[i][k] == 0:
                    continue
                q = self.a[i][k] // pivot
                self.row_op(i, k, q)
                if self.a[i][k]:
                    self.swap_rows(i, k)
                    changed = True
                    break
            if changed:
                continue
            # clear row k
            for j in list(self.nz[k]):
                if j == k:
                    continue
                q = self.a[k][j] // pivot
                self.col_op(j, k, q)
                if self.a[k][j]:
                    self.swap_cols(j, k)
                    changed = True
                    break
            if not changed:
                return

    def run(self):
        n = min(self.rows, self.cols)
        k = 0
        while k < n:
            best = self.find_pivot(k)
            if best is None:
                break
            _, i, j = best
            self.swap_rows(k, i)
            self.swap_cols(k, j)
            self.clear_pivot(k)
            if self.a[k][k] < 0:
                self.negate_row(k)
            k += 1
        rank = k
        # divisibility chain
        changed = True
        while changed:
            changed = False
            for i in range(rank - 1):
                di, dj = self.a[i][i], self.a[i + 1][i + 1]
                if dj % di != 0:
                    # mix column i+1 into column i and re-eliminate
                    self.col_op(i, i + 1, -1)
                    self.clear_pivot(i)
                    if self.a[i][i] < 0:
                        self.negate_row(i)
                    self.clear_pivot(i + 1)
                    if self.a[i + 1][i + 1] < 0:
                        self.negate_row(i + 1)
                    changed = True
        return rank


def smith_normal_form(a, mod=None, with_uinv=False) -> SNFResult:
    """U * A * V = D with U, V unimodular and D diagonal with the
    divisibility chain d1 | d2 | ...; deterministic.

    With ``mod`` set the caller asserts the column lattice contains
    mod * Z^rows; entries and transforms are reduced modulo ``mod`` and V
    is not tracked.
    """
    if not a or not a[0]:
        rows = len(a)
        ident = [[int(i == j) for j in range(rows)] for i in range(rows)]
        return SNFResult([], ident, [], ident if with_uinv else None)
    e = _Eliminator(a, mod=mod, with_v=(mod is None), with_uinv=with_uinv)
    rank = e.run()
    diag = [e.a[i][i] for i in range(min(e.rows, e.cols))]
    if mod is not None:
        # report the canonical nonnegative divisor of mod for each entry
        from math import gcd
        diag = [gcd(d, mod) for d in diag]
    return SNFResult(diag, e.u, e.v, e.uinv)


def matmul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for t in range(inner):
            x = ai[t]
            if not x:
                continue
            bt = b[t]
            for j in range(cols):
                oi[j] += x * bt[j]
    return out


def det(a) -> int:
    """Exact determinant (fraction-free Bareiss)."""
    n = len(a)
    m = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def solve_integer(b, l):
    """The integer matrix X with B * X = L; raises if none exists."""
    res = smith_normal_form([row[:] for row in b])
    k = len(b)
    m = matmul(res.u, l)
    cols = len(l[0]) if l else 0
    for i in range(k):
        d = res.diagonal[i] if i < len(res.diagonal) else 0
        for j in range(cols):
            if d == 0:
                if m[i][j] != 0:
                    raise ValueError("no integer solution")
            else:
                if m[i][j] % d != 0:
                    raise ValueError("no integer solution")
                m[i][j] //= d
    return matmul(res.v, m)


class FinAbGroup:
    """Finite abelian group as invariant factors d1 | d2 | ... (each > 1).

    Elements are integer coordinate tuples modulo the factors.
    """

    __slots__ = ("factors",)

    def __init__(self, factors):
        factors = tuple(int(d) for d in factors if d != 1)
        for i in range(len(factors) - 1):
            if factors[i + 1] % factors[i] != 0:
                raise ValueError(f"no divisibility chain: {factors}")
        if any(d <= 0 for d in factors):
            raise ValueError("factors must be positive (finite group)")
        self.factors = factors

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    def zero(self):
        return (0,) * len(self.factors)

    def reduce(self, vec):
        return tuple(v % d for v, d in zip(vec, self.factors))

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def neg(self, x):
        return tuple((-a) % d for a, d in zip(x, self.factors))

    def scale(self, k, x):
        return tuple((k * a) % d for a, d in zip(x, self.factors))

    def elements(self):
        import itertools
        return itertools.product(*(range(d) for d in self.factors))

    def __eq__(self, other):
        if not isinstance(other, FinAbGroup):
            return NotImplemented
        return self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        if not self.factors:
            return "Z/1"
        return " x ".join(f"Z/{d}" for d in self.factors)


@dataclass
class Presentation:
    """Quotient Z^g / (column lattice of relations), with transforms.

    coords() maps a generator-exponent vector to group coordinates;
    generator_vector() expresses an abstract group generator back in the
    original generators (valid modulo ``mod`` when set).
    """

    group: FinAbGroup
    full_factors: list[int]
    kept: list[int]
    u: list[list[int]]
    uinv: list[list[int]] | None
    mod: int | None

    def coords(self, vec):
        g = len(self.u)
        out = []
        for idx in self.kept:
            row = self.u[idx]
            s = sum(row[j] * vec[j] for j in range(g) if vec[j])
            out.append(s % self.full_factors[idx])
        return tuple(out)

    def generator_vector(self, i: int):
        idx = self.kept[i]
        return [self.uinv[t][idx] for t in range(len(self.uinv))]


def presentation(num_gens: int, relation_columns, mod: int | None = None,
                 with_uinv: bool = True) -> Presentation:
    """Present Z^g modulo relations (and mod * Z^g when mod is given)."""
    cols = [list(c) for c in relation_columns]
    if mod is not None:
        for i in range(num_gens):
            e = [0] * num_gens
            e[i] = mod
            cols.append(e)
    if not cols:
        raise ValueError("a finite presentation needs relations")
    a = [[cols[j][i] for j in range(len(cols))] for i in range(num_gens)]
    res = smith_normal_form(a, mod=mod, with_uinv=with_uinv)
    full = []
    for i in range(num_gens):
        d = res.diagonal[i] if i < len(res.diagonal) else 0
        if d == 0:
            raise ValueError("presentation has infinite quotient")
        full.append(d)
    kept = [i for i, d in enumerate(full) if d != 1]
    group = FinAbGroup([full[i] for i in kept])
    return Presentation(group, full, kept, res.u, res.uinv, mod)
