"""
Exact rational linear algebra: sparse matrices, rank, kernels and a
simplex LP solver.

Entries are Python ints or Fractions (never floats). Matrices are stored
row-wise as ``{row: {col: value}}`` with no explicit zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Iterator, Sequence


def _norm(v):
    # Fractions with denominator 1 are stored as ints (faster arithmetic)
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    if isinstance(v, float):
        raise TypeError("floating point entries are not allowed")
    return v


def fstr(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


class RationalMatrix:
    """Immutable sparse matrix over the rationals."""

    __slots__ = ("rows", "cols", "_rows", "_hash")

    def __init__(self, rows: int, cols: int, data: dict[int, dict[int, object]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        self.rows = rows
        self.cols = cols
        clean: dict[int, dict[int, object]] = {}
        for i, row in (data or {}).items():
            if not 0 <= i < rows:
                raise IndexError("row index %d out of range" % i)
            r = {}
            for j, v in row.items():
                if not 0 <= j < cols:
                    raise IndexError("column index %d out of range" % j)
                v = _norm(v)
                if v:
                    r[j] = v
            if r:
                clean[i] = r
        self._rows = clean
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def _raw(cls, rows, cols, data) -> RationalMatrix:
        # trusted path: data already clean
        m = cls.__new__(cls)
        m.rows, m.cols, m._rows, m._hash = rows, cols, data, None
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls._raw(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls._raw(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], cols: int | None = None) -> RationalMatrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ValueError("ragged dense matrix")
            data[i] = {j: v for j, v in enumerate(row)}
        return cls(len(rows), cols, data)

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[tuple[int, int, object]]) -> RationalMatrix:
        """Build from (i, j, value) triplets; repeated positions are summed."""
        data: dict[int, dict[int, object]] = {}
        for i, j, v in triplets:
            r = data.setdefault(i, {})
            r[j] = r.get(j, 0) + v
        return cls(rows, cols, data)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Sequence]) -> RationalMatrix:
        data: dict[int, dict[int, object]] = {}
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError("column length mismatch")
            for i, v in enumerate(col):
                if v:
                    data.setdefault(i, {})[j] = v
        return cls(rows, len(columns), data)

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def __getitem__(self, ij) -> object:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._rows.get(i, {}).get(j, 0)

    def row(self, i: int) -> dict[int, object]:
        return dict(self._rows.get(i, {}))

    def column(self, j: int) -> list:
        return [self._rows.get(i, {}).get(j, 0) for i in range(self.rows)]

    def triplets(self) -> Iterator[tuple[int, int, object]]:
        """Nonzero entries in row-major order."""
        for i in sorted(self._rows):
            r = self._rows[i]
            for j in sorted(r):
                yield i, j, r[j]

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, r in self._rows.items():
            for j, v in r.items():
                out[i][j] = v
        return out

    # -- algebra ----------------------------------------------------------

    def transpose(self) -> RationalMatrix:
        data: dict[int, dict[int, object]] = {}
        for i, r in self._rows.items():
            for j, v in r.items():
                data.setdefault(j, {})[i] = v
        return RationalMatrix._raw(self.cols, self.rows, data)

    @property
    def T(self) -> RationalMatrix:
        return self.transpose()

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
            orows = other._rows
            data = {}
            for i, r in self._rows.items():
                acc: dict[int, object] = {}
                for k, a in r.items():
                    ok = orows.get(k)
                    if ok is None:
                        continue
                    for j, b in ok.items():
                        acc[j] = acc.get(j, 0) + a * b
                acc = {j: _norm(v) for j, v in acc.items() if v}
                if acc:
                    data[i] = acc
            return RationalMatrix._raw(self.rows, other.cols, data)
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("vector length %d, expected %d" % (len(vec), self.cols))
        out = [0] * self.rows
        for i, r in self._rows.items():
            s = 0
            for j, a in r.items():
                if vec[j]:
                    s += a * vec[j]
            out[i] = _norm(s)
        return out

    def _combine(self, other: RationalMatrix, sign: int) -> RationalMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))
        data = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            acc = data.setdefault(i, {})
            for j, v in r.items():
                w = acc.get(j, 0) + sign * v
                if w:
                    acc[j] = _norm(w)
                else:
                    acc.pop(j, None)
            if not acc:
                del data[i]
        return RationalMatrix._raw(self.rows, self.cols, data)

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        return self._combine(other, 1)

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        return self._combine(other, -1)

    def __neg__(self) -> RationalMatrix:
        return self.scale(-1)

    def scale(self, s) -> RationalMatrix:
        if not s:
            return RationalMatrix.zeros(self.rows, self.cols)
        return RationalMatrix._raw(
            self.rows, self.cols,
            {i: {j: _norm(v * s) for j, v in r.items()} for i, r in self._rows.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, tuple(self.triplets())))
        return self._hash

    def __repr__(self) -> str:
        return "RationalMatrix(%d, %d, nnz=%d)" % (self.rows, self.cols, self.nnz)

    def is_zero(self) -> bool:
        return not self._rows

    def is_identity(self) -> bool:
        if self.rows != self.cols or len(self._rows) != self.rows:
            return False
        return all(r == {i: 1} for i, r in self._rows.items())

    def permutation(self) -> list[int] | None:
        """If this is a permutation matrix return p with M[p[j], j] = 1, else None."""
        if self.rows != self.cols:
            return None
        p = [-1] * self.cols
        for i, r in self._rows.items():
            if len(r) != 1:
                return None
            (j, v), = r.items()
            if v != 1 or p[j] != -1:
                return None
            p[j] = i
        if -1 in p:
            return None
        return p

    def select_rows(self, keep: Sequence[int]) -> RationalMatrix:
        data = {}
        for new, old in enumerate(keep):
            r = self._rows.get(old)
            if r:
                data[new] = dict(r)
        return RationalMatrix._raw(len(keep), self.cols, data)

    def select_columns(self, keep: Sequence[int]) -> RationalMatrix:
        return self.transpose().select_rows(keep).transpose()

    def hstack(self, other: RationalMatrix) -> RationalMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        data = {i: dict(r) for i, r in self._rows.items()}
        off = self.cols
        for i, r in other._rows.items():
            acc = data.setdefault(i, {})
            for j, v in r.items():
                acc[j + off] = v
        return RationalMatrix._raw(self.rows, self.cols + other.cols, data)

    def vstack(self, other: RationalMatrix) -> RationalMatrix:
        return self.transpose().hstack(other.transpose()).transpose()

    # -- sparse triplet text ---------------------------------------------

    def to_triplet_text(self, name: str = "") -> str:
        """Export as the sparse triplet format.

        Header line ``%%triplet <rows> <cols> <nnz> [name]`` followed by one
        ``<row> <col> <value>`` line per nonzero (0-based, row-major, values
        as ``p`` or ``p/q``).
        """
        head = "%%%%triplet %d %d %d" % (self.rows, self.cols, self.nnz)
        if name:
            head += " " + name
        lines = [head]
        for i, j, v in self.triplets():
            lines.append("%d %d %s" % (i, j, fstr(v)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_triplet_text(cls, text: str) -> RationalMatrix:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("%%triplet"):
            raise ValueError("missing %%triplet header")
        fields = lines[0].split()
        rows, cols, nnz = int(fields[1]), int(fields[2]), int(fields[3])
        if len(lines) - 1 != nnz:
            raise ValueError("expected %d entries, found %d" % (nnz, len(lines) - 1))
        trip = []
        for ln in lines[1:]:
            i, j, v = ln.split()
            trip.append((int(i), int(j), Fraction(v)))
        return cls.from_triplets(rows, cols, trip)


# -- elimination ----------------------------------------------------------

def _integer_row(r: dict[int, object]) -> dict[int, int]:
    den = reduce(lcm, (Fraction(v).denominator for v in r.values()), 1)
    out = {j: int(v * den) for j, v in r.items()}
    g = reduce(gcd, out.values(), 0)
    if g > 1:
        out = {j: v // g for j, v in out.items()}
    return out


def _eliminate(r: dict[int, int], p: dict[int, int], col: int) -> dict[int, int]:
    # fraction-free: r <- b*r - a*p, then strip the row content
    a, b = r[col], p[col]
    g = gcd(a, b)
    a, b = a // g, b // g
    out = {j: b * v for j, v in r.items()}
    for j, v in p.items():
        w = out.get(j, 0) - a * v
        if w:
            out[j] = w
        else:
            out.pop(j, None)
    if out:
        c = reduce(gcd, out.values(), 0)
        if c > 1:
            out = {j: v // c for j, v in out.items()}
    return out


def _echelon(vectors: Iterable[dict[int, object]]) -> dict[int, dict[int, int]]:
    """Incremental integer row echelon form keyed by leading column."""
    pivots: dict[int, dict[int, int]] = {}
    for v in vectors:
        if not v:
            continue
        r = _integer_row(v)
        while r:
            lead = min(r)
            p = pivots.get(lead)
            if p is None:
                pivots[lead] = r
                break
            r = _eliminate(r, p, lead)
    return pivots


def rank(m: RationalMatrix) -> int:
    """Exact rank over the rationals."""
    if m.rows <= m.cols:
        vecs = m._rows.values()
    else:
        vecs = m.transpose()._rows.values()
    return len(_echelon(vecs))


def kernel_basis(m: RationalMatrix) -> list[list[Fraction]]:
    """Basis of {v : m v = 0}; one vector per free column of the RREF."""
    pivots = _echelon(m._rows.values())
    leads = sorted(pivots)
    # back substitution to reduced form, last pivot first
    for idx in range(len(leads) - 1, -1, -1):
        lc = leads[idx]
        p = pivots[lc]
        for other in leads[:idx]:
            q = pivots[other]
            if lc in q:
                pivots[other] = _eliminate(q, p, lc)
    pivot_set = set(leads)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for lc in leads:
            p = pivots[lc]
            if f in p:
                v[lc] = Fraction(-p[f], p[lc])
        basis.append(v)
    return basis


def columns_matrix(vectors: Sequence[Sequence], rows: int) -> RationalMatrix:
    return RationalMatrix.from_columns(rows, vectors)


def same_column_space(a: RationalMatrix, b: RationalMatrix) -> bool:
    r = rank(a.hstack(b))
    return r == rank(a) == rank(b)


# -- linear programming ---------------------------------------------------

@dataclass(frozen=True)
class LPResult:
    status: str                 # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    pivots: int = 0


def solve_lp(objective: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    """Maximize ``objective . x`` subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0.

    Two-phase dense tableau simplex over Fractions with Bland's rule, so it
    terminates on degenerate problems. Infeasible and unbounded problems are
    verdicts, not exceptions.
    """
    n = len(objective)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    slack_of: list[int | None] = []
    n_ub = len(A_ub)
    if len(b_ub) != n_ub or len(b_eq) != len(A_eq):
        raise ValueError("constraint/rhs length mismatch")
    for a in list(A_ub) + list(A_eq):
        if len(a) != n:
            raise ValueError("constraint row has wrong length")
    width = n + n_ub
    for k, (a, b) in enumerate(zip(A_ub, b_ub)):
        row = [Fraction(v) for v in a] + [Fraction(0)] * n_ub
        row[n + k] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(b))
        slack_of.append(n + k)
    for a, b in zip(A_eq, b_eq):
        rows.append([Fraction(v) for v in a] + [Fraction(0)] * n_ub)
        rhs.append(Fraction(b))
        slack_of.append(None)
    m = len(rows)
    # make rhs nonnegative; a negated slack can no longer start in the basis
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
            slack_of[i] = None
    basis: list[int] = []
    art = []
    for i in range(m):
        if slack_of[i] is not None:
            basis.append(slack_of[i])
        else:
            col = width + len(art)
            art.append(i)
            basis.append(col)
    total = width + len(art)
    for i in range(m):
        rows[i] = rows[i] + [Fraction(0)] * len(art)
    for k, i in enumerate(art):
        rows[i][width + k] = Fraction(1)

    npiv = 0

    def run(cost: list[Fraction], allowed: int) -> str:
        # reduced costs r_j = cost_j - cost_B . column_j ; maximize
        nonlocal npiv
        while True:
            red = list(cost[:allowed])
            for i in range(m):
                cb = cost[basis[i]]
                if cb:
                    ri = rows[i]
                    for j in range(allowed):
                        if ri[j]:
                            red[j] -= cb * ri[j]
            enter = next((j for j in range(allowed) if red[j] > 0 and j not in basis), None)
            if enter is None:
                return "optimal"
            leave = None
            best = None
            for i in range(m):
                a = rows[i][enter]
                if a > 0:
                    ratio = rhs[i] / a
                    if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return "unbounded"
            _pivot(leave, enter)
            npiv += 1

    def _pivot(i: int, j: int) -> None:
        piv = rows[i][j]
        ri = [v / piv for v in rows[i]]
        rows[i] = ri
        rhs[i] = rhs[i] / piv
        for k in range(m):
            if k != i:
                f = rows[k][j]
                if f:
                    rk = rows[k]
                    for c in range(total):
                        if ri[c]:
                            rk[c] -= f * ri[c]
                    rhs[k] -= f * rhs[i]
        basis[i] = j

    if art:
        cost1 = [Fraction(0)] * width + [Fraction(-1)] * len(art)
        run(cost1, total)
        infeas = sum(rhs[i] for i in range(m) if basis[i] >= width)
        if infeas > 0:
            return LPResult("infeasible", pivots=npiv)
        # drive zero-level artificials out of the basis
        drop = []
        for i in range(m):
            if basis[i] >= width:
                j = next((j for j in range(width) if rows[i][j] != 0), None)
                if j is None:
                    drop.append(i)      # redundant equality
                else:
                    _pivot(i, j)
                    npiv += 1
        for i in reversed(drop):
            del rows[i], rhs[i], basis[i]
            m -= 1
    cost2 = [Fraction(v) for v in objective] + [Fraction(0)] * (total - n)
    status = run(cost2, width)
    if status == "unbounded":
        return LPResult("unbounded", pivots=npiv)
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = rhs[i]
    value = sum((Fraction(c) * v for c, v in zip(objective, x)), Fraction(0))
    return LPResult("optimal", value, tuple(x), npiv)
