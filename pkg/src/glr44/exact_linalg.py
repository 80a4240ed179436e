"""Exact linear algebra kernel.

GF(2) matrices (bitmask rows), arbitrary-precision integer matrices with
Smith normal form, rational reduced row echelon form, finitely generated
abelian groups presented by integer relation matrices, and orders of
finitely generated subgroups of (Q/mZ)^r.

All values are immutable; every operation returns fresh objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm, prod
from typing import Iterable, Sequence


# ---------------------------------------------------------------------------
# GF(2) matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class F2Matrix:
    """Dense GF(2) matrix; row i is the bitmask ``rows[i]`` (bit j = entry ij)."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise ValueError("row count mismatch")
        mask = (1 << self.ncols) - 1
        for r in self.rows:
            if r & ~mask:
                raise ValueError("entry outside declared width")

    @staticmethod
    def from_rows(data: Iterable[Iterable[int]], ncols: int | None = None) -> "F2Matrix":
        rows = []
        width = ncols
        for row in data:
            row = list(row)
            if width is None:
                width = len(row)
            elif ncols is None and len(row) != width:
                raise ValueError("ragged rows")
            bits = 0
            for j, v in enumerate(row):
                if v & 1:
                    bits |= 1 << j
            rows.append(bits)
        return F2Matrix(len(rows), width or 0, tuple(rows))

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "F2Matrix":
        return F2Matrix(nrows, ncols, (0,) * nrows)

    @staticmethod
    def identity(n: int) -> "F2Matrix":
        return F2Matrix(n, n, tuple(1 << i for i in range(n)))

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError("entry access out of bounds")
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def transpose(self) -> "F2Matrix":
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                j = (r & -r).bit_length() - 1
                cols[j] |= 1 << i
                r &= r - 1
        return F2Matrix(self.ncols, self.nrows, tuple(cols))

    def mul(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        out = []
        for r in self.rows:
            acc = 0
            rr = r
            while rr:
                i = (rr & -rr).bit_length() - 1
                acc ^= other.rows[i]
                rr &= rr - 1
            out.append(acc)
        return F2Matrix(self.nrows, other.ncols, tuple(out))

    def apply(self, vec: int) -> int:
        """Image of a column vector (bitmask over ncols) as bitmask over nrows."""
        out = 0
        for i, r in enumerate(self.rows):
            if bin(r & vec).count("1") & 1:
                out |= 1 << i
        return out

    def hstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.nrows != other.nrows:
            raise ValueError("shape mismatch in hstack")
        rows = tuple(a | (b << self.ncols) for a, b in zip(self.rows, other.rows))
        return F2Matrix(self.nrows, self.ncols + other.ncols, rows)

    def vstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.ncols:
            raise ValueError("shape mismatch in vstack")
        return F2Matrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def add(self, other: "F2Matrix") -> "F2Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in sum")
        return F2Matrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.rows)

    def rank(self) -> int:
        return len(_row_reduce(list(self.rows))[0])

    def column_space_contains(self, vec: int) -> bool:
        return self.solve(vec) is not None

    def solve(self, vec: int) -> int | None:
        """One solution x (bitmask over ncols) of self @ x = vec, or None."""
        # Row-reduce the transpose augmented with the target.
        t = self.transpose()
        rows = [(t.rows[j], 1 << j) for j in range(t.nrows)]
        target = vec
        sol = 0
        pivots = []
        for col in range(self.nrows):
            piv = None
            for k in range(len(rows)):
                if k in pivots:
                    continue
                if (rows[k][0] >> col) & 1:
                    piv = k
                    break
            if piv is None:
                continue
            pivots.append(piv)
            pr, pc = rows[piv]
            for k in range(len(rows)):
                if k != piv and (rows[k][0] >> col) & 1:
                    rows[k] = (rows[k][0] ^ pr, rows[k][1] ^ pc)
            if (target >> col) & 1:
                target ^= pr
                sol ^= pc
        return sol if target == 0 else None


def _row_reduce(rows: list[int]) -> tuple[list[int], list[int]]:
    """In-place style GF(2) reduction; returns (pivot columns, reduced rows)."""
    pivot_cols: list[int] = []
    reduced: list[int] = []
    for r in rows:
        for pc, pr in zip(pivot_cols, reduced):
            if (r >> pc) & 1:
                r ^= pr
        if r:
            c = (r & -r).bit_length() - 1
            # Back-substitute into earlier rows for a canonical reduced set.
            for k in range(len(reduced)):
                if (reduced[k] >> c) & 1:
                    reduced[k] ^= r
            pivot_cols.append(c)
            reduced.append(r)
    return pivot_cols, reduced


class F2Subspace:
    """Growing subspace of GF(2)^n kept in reduced form."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivot_cols: list[int] = []
        self.rows: list[int] = []

    def reduce(self, v: int) -> int:
        for pc, pr in zip(self.pivot_cols, self.rows):
            if (v >> pc) & 1:
                v ^= pr
        return v

    def add(self, v: int) -> bool:
        """Insert v; True if the dimension grew."""
        v = self.reduce(v)
        if v == 0:
            return False
        c = (v & -v).bit_length() - 1
        for k in range(len(self.rows)):
            if (self.rows[k] >> c) & 1:
                self.rows[k] ^= v
        self.pivot_cols.append(c)
        self.rows.append(v)
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self.rows)


def f2_rank_kernel(m: F2Matrix) -> tuple[int, list[tuple[int, ...]]]:
    """Rank and a kernel basis (vectors as 0/1 tuples of length ncols)."""
    masks = f2_kernel_masks(m)
    rank = m.ncols - len(masks)
    kernel = [tuple((v >> j) & 1 for j in range(m.ncols)) for v in masks]
    return rank, kernel


def f2_kernel_masks(m: F2Matrix) -> list[int]:
    """Kernel basis of m as column bitmasks."""
    # Reduce the transpose, tracking the combination of original columns.
    t = m.transpose()
    pivot_cols: list[int] = []
    pivot_rows: list[int] = []
    pivot_combos: list[int] = []
    kernel: list[int] = []
    for j in range(t.nrows):
        r = t.rows[j]
        cmb = 1 << j
        for pc, pr, pcmb in zip(pivot_cols, pivot_rows, pivot_combos):
            if (r >> pc) & 1:
                r ^= pr
                cmb ^= pcmb
        if r == 0:
            kernel.append(cmb)
        else:
            c = (r & -r).bit_length() - 1
            pivot_cols.append(c)
            pivot_rows.append(r)
            pivot_combos.append(cmb)
    return kernel


# ---------------------------------------------------------------------------
# Integer matrices and Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix with arbitrary-precision entries."""

    entries: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(data: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = tuple(tuple(int(v) for v in row) for row in data)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged rows")
        return IntMatrix(rows)

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "IntMatrix":
        return IntMatrix(tuple((0,) * ncols for _ in range(nrows)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def entry(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        ot = other.transpose().entries
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in ot) for row in self.entries)
        )

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.nrows != other.nrows:
            raise ValueError("shape mismatch in hstack")
        return IntMatrix(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def det(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("determinant of nonsquare matrix")
        # Fraction-free Gaussian elimination (Bareiss).
        n = self.nrows
        m = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithNormalForm:
    divisors: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix


def smith_normal_form(m: IntMatrix) -> SmithNormalForm:
    """Smith normal form with unimodular transforms.

    Returns divisors d1 | d2 | ... (nonnegative, zeros trailing) and
    unimodular left/right with ``left * m * right`` diagonal.  Pivoting picks
    the smallest absolute nonzero entry, ties broken in (row, col) order, so
    the transforms are reproducible.
    """
    nrows, ncols = m.nrows, m.ncols
    a = [list(row) for row in m.entries]
    left = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    right = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + c * y for x, y in zip(left[dst], left[src])]

    def addmul_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in right:
            row[dst] += c * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]

    k = 0
    limit = min(nrows, ncols)
    while k < limit:
        # Locate the smallest-absolute-value nonzero pivot in the submatrix.
        best = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                v = a[i][j]
                if v != 0 and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(k, best[0])
        swap_cols(k, best[1])
        while True:
            # Clear column k.
            dirty = False
            for i in range(k + 1, nrows):
                if a[i][k] != 0:
                    q = a[i][k] // a[k][k]
                    addmul_row(i, k, -q)
                    if a[i][k] != 0:
                        swap_rows(i, k)
                        dirty = True
            # Clear row k.
            for j in range(k + 1, ncols):
                if a[k][j] != 0:
                    q = a[k][j] // a[k][k]
                    addmul_col(j, k, -q)
                    if a[k][j] != 0:
                        swap_cols(j, k)
                        dirty = True
            if not dirty:
                break
        if a[k][k] < 0:
            negate_row(k)
        # Enforce divisibility into the remaining block.
        piv = a[k][k]
        offender = None
        for i in range(k + 1, nrows):
            for j in range(k + 1, ncols):
                if a[i][j] % piv != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            addmul_row(k, offender, 1)
            continue
        k += 1

    divisors = tuple(a[i][i] for i in range(limit))
    return SmithNormalForm(divisors, IntMatrix.from_rows(left), IntMatrix.from_rows(right))


def integer_kernel(m: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the integer kernel {x : m x = 0} as column vectors."""
    snf = smith_normal_form(m)
    cols = []
    rt = snf.right.transpose().entries
    for j, d in enumerate(snf.divisors):
        if d == 0:
            cols.append(rt[j])
    for j in range(len(snf.divisors), m.ncols):
        cols.append(rt[j])
    return cols


# ---------------------------------------------------------------------------
# Rational echelon form
# ---------------------------------------------------------------------------

def rational_echelon(rows: Sequence[Sequence[Fraction | int]]):
    """Reduced row echelon form over Q.

    Returns (echelon rows as tuples of Fractions, rank, pivot column list).
    Deterministic: leftmost pivots, unit pivots, zero rows last.
    """
    work = [[Fraction(v) for v in row] for row in rows]
    nrows = len(work)
    ncols = len(work[0]) if work else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        pv = work[r][c]
        work[r] = [v / pv for v in work[r]]
        for i in range(nrows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [v - f * w for v, w in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    echelon = tuple(tuple(row) for row in work)
    return echelon, len(pivots), pivots


# ---------------------------------------------------------------------------
# Finitely generated abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroupPresentation:
    """f.g. abelian group: generators + integer relation matrix (columns)."""

    generators: tuple[str, ...]
    relations: IntMatrix  # nrows == len(generators); each column is a relation

    def __post_init__(self):
        if self.relations.entries and self.relations.nrows != len(self.generators):
            raise ValueError("relation rows must match generator count")

    @staticmethod
    def from_columns(generators: Sequence[str], columns: Sequence[Sequence[int]]) -> "AbelianGroupPresentation":
        gens = tuple(generators)
        if not columns:
            return AbelianGroupPresentation(gens, IntMatrix.zeros(len(gens), 0))
        rows = [[col[i] for col in columns] for i in range(len(gens))]
        return AbelianGroupPresentation(gens, IntMatrix.from_rows(rows))

    @staticmethod
    def cyclic(order: int, name: str = "g") -> "AbelianGroupPresentation":
        return AbelianGroupPresentation((name,), IntMatrix.from_rows([[order]]))

    def invariant_factors(self) -> tuple[int, ...]:
        """Nontrivial invariant factors, ascending; 0 denotes a free summand."""
        n = len(self.generators)
        if self.relations.ncols == 0:
            return (0,) * n
        divisors = list(smith_normal_form(self.relations).divisors)
        divisors += [0] * (n - len(divisors))
        return tuple(d for d in divisors if d != 1)

    def is_finite(self) -> bool:
        return 0 not in self.invariant_factors()

    def order(self) -> int | None:
        facs = self.invariant_factors()
        if 0 in facs:
            return None
        return prod(facs) if facs else 1

    def log2_order(self) -> int:
        o = self.order()
        if o is None:
            raise ValueError("group is infinite")
        if o & (o - 1):
            raise ValueError(f"order {o} is not a power of two")
        return o.bit_length() - 1

    def iso_type(self) -> tuple[int, ...]:
        """Sorted nontrivial invariant factors; the isomorphism invariant."""
        return tuple(sorted(self.invariant_factors()))

    def describe(self) -> str:
        facs = self.invariant_factors()
        if not facs:
            return "0"
        parts = ["Z" if d == 0 else f"Z/{d}" for d in sorted(facs, reverse=True)]
        return " + ".join(parts)

    def element_order(self, coeffs: Sequence[int]) -> int | None:
        """Order of sum(coeffs[i] * generator_i); None means infinite."""
        if len(coeffs) != len(self.generators):
            raise ValueError("coefficient length mismatch")
        snf = smith_normal_form(self.relations) if self.relations.ncols else None
        if snf is None:
            return None if any(coeffs) else 1
        y = [sum(snf.left.entry(i, j) * coeffs[j] for j in range(len(coeffs)))
             for i in range(len(coeffs))]
        divisors = list(snf.divisors) + [0] * (len(coeffs) - len(snf.divisors))
        result = 1
        for yi, d in zip(y, divisors):
            if d == 0:
                if yi != 0:
                    return None
            elif d == 1:
                continue
            else:
                result = lcm(result, d // gcd(d, yi % d if yi % d else d))
        return result


def hom_cokernel(target: AbelianGroupPresentation, matrix: IntMatrix,
                 gen_names: Sequence[str] | None = None) -> AbelianGroupPresentation:
    """Cokernel of Z^a -> target given by an integer matrix (columns = images)."""
    rel = target.relations.hstack(matrix) if target.relations.ncols else matrix
    return AbelianGroupPresentation(target.generators, rel)


def hom_kernel(source: AbelianGroupPresentation, target: AbelianGroupPresentation,
               matrix: IntMatrix) -> AbelianGroupPresentation:
    """Kernel of a homomorphism of presented groups.

    ``matrix`` (rows = target gens, cols = source gens) must send source
    relations into the target relation lattice, i.e. be a well-defined map.
    """
    a = len(source.generators)
    v = target.relations.ncols
    # Solve matrix * x = V * y: kernel of [matrix | -V] projected to x.
    if v:
        neg_v = IntMatrix(tuple(tuple(-e for e in row) for row in target.relations.entries))
        big = matrix.hstack(neg_v)
    else:
        big = matrix
    kern = integer_kernel(big)
    pre_basis = [k[:a] for k in kern]
    # The preimage lattice P contains the source relation lattice U.
    p_mat = IntMatrix.from_rows([[vec[i] for vec in pre_basis] for i in range(a)]) \
        if pre_basis else IntMatrix.zeros(a, 0)
    # Express source relations in the P-basis (rational solve, must be integral).
    u_cols = [tuple(source.relations.entry(i, j) for i in range(a))
              for j in range(source.relations.ncols)]
    rel_cols = []
    for u in u_cols:
        sol = _solve_integer(p_mat, u)
        if sol is None:
            raise ValueError("source relations not inside preimage lattice; not a homomorphism?")
        rel_cols.append(sol)
    names = [f"k{i}" for i in range(len(pre_basis))]
    rows = [[col[i] for col in rel_cols] for i in range(len(pre_basis))]
    rel = IntMatrix.from_rows(rows) if rel_cols else IntMatrix.zeros(len(pre_basis), 0)
    return AbelianGroupPresentation(tuple(names), rel)


def _solve_integer(m: IntMatrix, target: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution x of m x = target, or None."""
    if m.ncols == 0:
        return () if not any(target) else None
    snf = smith_normal_form(m)
    y = [sum(snf.left.entry(i, j) * target[j] for j in range(m.nrows)) for i in range(m.nrows)]
    z = []
    for i in range(m.ncols):
        d = snf.divisors[i] if i < len(snf.divisors) else 0
        yi = y[i] if i < len(y) else 0
        if d == 0:
            if yi != 0:
                return None
            z.append(0)
        else:
            if yi % d:
                return None
            z.append(yi // d)
    for i in range(m.ncols, m.nrows):
        if y[i] != 0:
            return None
    x = [sum(snf.right.entry(i, j) * z[j] for j in range(m.ncols)) for i in range(m.ncols)]
    return tuple(x)


# ---------------------------------------------------------------------------
# Elements of Q/Z and Q/2Z, and subgroup orders in (Q/mZ)^r
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircleElement:
    """Element of Q/Z (modulus 1) or Q/2Z (modulus 2), stored reduced."""

    value: Fraction
    modulus: int = 1

    def __post_init__(self):
        if self.modulus not in (1, 2):
            raise ValueError("modulus must be 1 or 2")
        object.__setattr__(self, "value", Fraction(self.value) % self.modulus)

    def __add__(self, other: "CircleElement") -> "CircleElement":
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")
        return CircleElement(self.value + other.value, self.modulus)

    def __neg__(self) -> "CircleElement":
        return CircleElement(-self.value, self.modulus)

    def __sub__(self, other: "CircleElement") -> "CircleElement":
        return self + (-other)

    def scale(self, k: int) -> "CircleElement":
        return CircleElement(self.value * k, self.modulus)

    def is_zero(self) -> bool:
        return self.value == 0

    def order(self) -> int:
        p, q = self.value.numerator, self.value.denominator
        if p == 0:
            return 1
        qm = q * self.modulus
        return qm // gcd(p, qm)


def subgroup_order_in_circle_power(
    vectors: Sequence[Sequence[CircleElement]], width: int, modulus: int
) -> tuple[int, int | None]:
    """Order of the subgroup of (Q/mZ)^r generated by the given tuples.

    Returns (order, log2 order) with the log None when the order is not a
    power of two.  Let D be the lcm of all entry denominators and N = m*D.
    The order is N^r / [Z^r : L] for the lattice L spanned by the D-scaled
    vectors together with N*e_j.
    """
    for v in vectors:
        if len(v) != width:
            raise ValueError("vector width mismatch")
        for e in v:
            if e.modulus != modulus:
                raise ValueError("modulus mismatch")
    denom = 1
    for v in vectors:
        for e in v:
            denom = lcm(denom, e.value.denominator)
    n = modulus * denom
    rows = [[int(e.value * denom) for e in v] for v in vectors]
    rows += [[n if i == j else 0 for j in range(width)] for i in range(width)]
    snf = smith_normal_form(IntMatrix.from_rows(rows))
    index = prod(snf.divisors[:width])
    order = n**width // index
    log2 = order.bit_length() - 1 if order & (order - 1) == 0 else None
    return order, log2


def subgroup_order_brute_force(
    vectors: Sequence[Sequence[CircleElement]], width: int, modulus: int
) -> int:
    """Closure enumeration oracle; only sensible for small generated groups."""
    for v in vectors:
        if len(v) != width:
            raise ValueError("vector width mismatch")
    denom = 1
    for v in vectors:
        for e in v:
            denom = lcm(denom, e.value.denominator)
    n = modulus * denom
    gens = [tuple(int(e.value * denom) % n for e in v) for v in vectors]
    seen = {(0,) * width}
    frontier = [(0,) * width]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = tuple((a + b) % n for a, b in zip(cur, g))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen)
