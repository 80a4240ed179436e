"""The integral model of ku_*(BZ/4) and Kunneth/Tor orders for the smash.

ku_(2n-1)(BZ/4) is the cokernel of the upper-triangular binomial matrix
with (i, i+k) entry C(4, k+1); the distinguished generators B_s satisfy
B_s = v^(n-s-1) . (new generator of degree 2s+1), so the v-map preserves
the B-index.  As a Z[v]-module the odd ku-homology is presented by one
generator gamma_n per odd degree 2n-1 and one relation
rho_n = sum_k C(4,k) v^(k-1) gamma_(n-k+1); the presentation is a length-1
free resolution, which drives the degreewise tensor and Tor computations
for ku of the smash product.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .exact_linalg import (
    AbelianGroupPresentation,
    IntMatrix,
    hom_cokernel,
    hom_kernel,
    smith_normal_form,
    _solve_integer,
)

M_PARAM = 4  # order of the cyclic group


def binomial_matrix(n: int) -> IntMatrix:
    """Upper-triangular n x n matrix with (i, i+k) entry C(4, k+1)."""
    if n < 1:
        raise ValueError("n must be positive")
    rows = [[comb(M_PARAM, j - i + 1) if j >= i else 0 for j in range(n)] for i in range(n)]
    return IntMatrix.from_rows(rows)


def ku_odd_group(n: int) -> AbelianGroupPresentation:
    """Reduced ku_(2n-1)(BZ/4) presented on the Hashimoto generators."""
    mat = binomial_matrix(n)
    return AbelianGroupPresentation(tuple(f"B{s}" for s in range(n)), mat)


def hashimoto_divisor(n: int, i: int) -> tuple[int, tuple[int, ...]]:
    """Closed-form elementary divisor t_i and its basis vector B(i).

    Valid for 1 <= i <= min(n, 3).  The basis formula's typeset defect is
    read as the sign (-1)^(2^t - j); only the divisor multiset is validated
    against the Smith normal form.
    """
    if not 1 <= i <= min(n, 3):
        raise ValueError("index out of the published range")
    s = i.bit_length() - 1
    d = i - (1 << s)
    a_sn, b_sn = divmod(n - (1 << s) + 1, 1 << s)
    abar = a_sn + 1 if d < b_sn else a_sn
    t_i = 2 ** (1 - s + abar)
    vec = [0] * n
    if d == b_sn - 1:
        for k in range(1, (1 << s) + 1):
            idx = n - k - d
            if 0 <= idx < n:
                vec[idx] += comb(1 << s, k)
    else:
        for k in range(1, (1 << s) + 1):
            coeff = 0
            for t in range(s + 1):
                for j in range(1, (1 << t) + 1):
                    coeff += ((-1) ** ((1 << t) - j)) * (2 ** (((1 << t) - 1) * abar)) \
                        * comb(1 << t, j) * comb(j * (1 << (s - t)), k)
            idx = n - k - d
            if 0 <= idx < n:
                vec[idx] += coeff
    return t_i, tuple(vec)


def hashimoto_divisors(n: int) -> list[int]:
    return [hashimoto_divisor(n, i)[0] for i in range(1, min(n, 3) + 1)]


def rep_ring_group(n: int) -> AbelianGroupPresentation:
    """R0/(R0)^(n+1) for the complex representation ring R = Z[alpha]/(alpha^4-1).

    Presented on the monomials (alpha-1)^k, k = 1..3, with the relations
    (alpha-1)^(n+1) alpha^j expanded in that basis.
    """
    if n < 1:
        raise ValueError("n must be positive")

    def poly_mul(p, q):
        out = [0, 0, 0, 0]
        for a, pa in enumerate(p):
            for b, qb in enumerate(q):
                out[(a + b) % 4] += pa * qb
        return out

    alpha_minus_1 = [-1, 1, 0, 0]
    powers = [[1, 0, 0, 0]]
    for _ in range(n + 4):
        powers.append(poly_mul(powers[-1], alpha_minus_1))
    basis = [powers[1], powers[2], powers[3]]  # Z-basis of the augmentation ideal

    def in_basis(p):
        # Solve p = sum c_k (alpha-1)^k; the change of basis is unitriangular
        # against alpha^k - 1, so integer coordinates always exist.
        assert sum(p) == 0, "element not in the augmentation ideal"
        mat_rows = [[basis[k][row] for k in range(3)] for row in range(4)]
        target = list(p)
        sol = _solve_integer(IntMatrix.from_rows(mat_rows), target)
        assert sol is not None
        return list(sol)

    rel_cols = []
    alpha = [0, 1, 0, 0]
    cur = powers[n + 1]
    for _ in range(4):
        rel_cols.append(in_basis(cur))
        cur = poly_mul(cur, alpha)
    gens = tuple(f"(a-1)^{k}" for k in range(1, 4))
    rows = [[col[i] for col in rel_cols] for i in range(3)]
    return AbelianGroupPresentation(gens, IntMatrix.from_rows(rows))


# ---------------------------------------------------------------------------
# Adams filtration probes and hidden extensions
# ---------------------------------------------------------------------------

@dataclass
class FiltrationReport:
    element: tuple[int, ...]
    filtration: int
    double_filtration: int
    double_is_zero: bool

    @property
    def hidden_jump(self) -> bool:
        return (not self.double_is_zero
                and self.double_filtration > self.filtration + 1)


def _filtration_lattice(n: int, i: int) -> list[list[int]]:
    """Generators of F_i in ku_(2n-1): 2^max(i-k,0) B_(n-1-k) for all k."""
    cols = []
    for k in range(n):
        col = [0] * n
        col[n - 1 - k] = 2 ** max(i - k, 0)
        cols.append(col)
    return cols


def _member(n: int, i: int, coeffs) -> bool:
    """Is the element inside filtration F_i modulo the relations?"""
    mat = binomial_matrix(n)
    cols = _filtration_lattice(n, i)
    for j in range(n):
        cols.append([mat.entry(r, j) for r in range(n)])
    big = IntMatrix.from_rows([[col[r] for col in cols] for r in range(n)])
    return _solve_integer(big, list(coeffs)) is not None


def hidden_extension_probe(n: int, coeffs) -> FiltrationReport:
    """Adams-filtration membership of x and 2x in ku_(2n-1)(BZ/4).

    ``coeffs`` expresses x in the generators B_0..B_(n-1).  A hidden
    extension is a jump filt(2x) > filt(x) + 1 with 2x nonzero.
    """
    group = ku_odd_group(n)
    if len(coeffs) != n:
        raise ValueError("coefficient length mismatch")

    def filt(vec):
        f = 0
        while f < 3 * n and _member(n, f + 1, vec):
            f += 1
        return f

    x = list(coeffs)
    two_x = [2 * c for c in coeffs]
    double_zero = group.element_order(x) in (1, 2)
    return FiltrationReport(tuple(coeffs), filt(x), filt(two_x), double_zero)


# ---------------------------------------------------------------------------
# Degreewise Kunneth: tensor and Tor over Z[v]
# ---------------------------------------------------------------------------

def _f0f0_basis(d: int) -> list[tuple[int, int, int]]:
    """Basis (c, m, n) of (F0 tensor F0)_d: v^c gamma_m gamma_n, m, n >= 1."""
    out = []
    for c in range((d - 2) // 2 + 1):
        rest = d - 2 * c
        for m in range(1, rest // 2 + 1):
            twon = rest - (2 * m - 1)
            if twon <= 0 or twon % 2 == 0:
                continue
            out.append((c, m, (twon + 1) // 2))
    return sorted(out)


def _rho_terms(m: int) -> list[tuple[int, int, int]]:
    """rho_m = sum of coeff * v^e gamma_idx as (coeff, e, idx)."""
    return [(comb(M_PARAM, k), k - 1, m - k + 1)
            for k in range(1, min(M_PARAM, m) + 1)]


def _map_phi_tensor_one(d: int):
    """Matrix of (phi tensor 1) + (1 tensor phi) relations into (F0 F0)_d.

    Returns (basis, relation columns), one column per basis element of
    (F1 tensor F0)_d and of (F0 tensor F1)_d.
    """
    basis = _f0f0_basis(d)
    index = {b: k for k, b in enumerate(basis)}
    cols = []
    for c, m, n in basis:  # (F1 F0): rho_m tensor gamma_n at the same degrees
        col = [0] * len(basis)
        for coeff, e, idx in _rho_terms(m):
            if idx >= 1:
                col[index[(c + e, idx, n)]] += coeff
        cols.append(col)
    for c, m, n in basis:  # (F0 F1)
        col = [0] * len(basis)
        for coeff, e, idx in _rho_terms(n):
            if idx >= 1:
                col[index[(c + e, m, idx)]] += coeff
        cols.append(col)
    return basis, cols


def tensor_part(d: int) -> AbelianGroupPresentation:
    """(ku_odd tensor_Z[v] ku_odd) in total degree d (nonzero for even d)."""
    basis, cols = _map_phi_tensor_one(d)
    gens = tuple(f"v^{c}B{m - 1},{n - 1}" for c, m, n in basis)
    if not basis:
        return AbelianGroupPresentation((), IntMatrix.zeros(0, 0))
    rows = [[col[i] for col in cols] for i in range(len(basis))]
    return AbelianGroupPresentation(gens, IntMatrix.from_rows(rows))


def tor_part(d: int) -> AbelianGroupPresentation:
    """Tor^1 over Z[v] of ku_odd with itself, in internal degree d."""
    # ker(phi tensor M -> F0 tensor M) with M presented degreewise.
    f1f0 = _f0f0_basis(d)  # (F1 F0)_d has the same index set as (F0 F0)_d
    if not f1f0:
        return AbelianGroupPresentation((), IntMatrix.zeros(0, 0))
    index = {b: k for k, b in enumerate(f1f0)}
    # Relations of F1 tensor M: images of (1 tensor phi) on (F1 F1)_d.
    rel_cols_src = []
    for c, m, n in f1f0:
        col = [0] * len(f1f0)
        for coeff, e, idx in _rho_terms(n):
            if idx >= 1:
                col[index[(c + e, m, idx)]] += coeff
        rel_cols_src.append(col)
    src = AbelianGroupPresentation(
        tuple(f"r{k}" for k in range(len(f1f0))),
        IntMatrix.from_rows([[col[i] for col in rel_cols_src] for i in range(len(f1f0))]),
    )
    tgt = tensor_part(d)
    # phi tensor 1 on generators.
    tmat = [[0] * len(f1f0) for _ in range(len(f1f0))]
    for j, (c, m, n) in enumerate(f1f0):
        for coeff, e, idx in _rho_terms(m):
            if idx >= 1:
                tmat[index[(c + e, idx, n)]][j] += coeff
    return hom_kernel(src, tgt, IntMatrix.from_rows(tmat))


@dataclass(frozen=True)
class KunnethDegree:
    degree: int
    tensor: AbelianGroupPresentation
    tor_shifted: AbelianGroupPresentation  # Tor_1 in degree d-1
    iso_type: tuple[int, ...]
    log2_order: int


def kunneth_orders(degree: int) -> KunnethDegree:
    """Middle-term data of the Kunneth sequence for ku_degree(smash).

    Even degrees are pure tensor, odd degrees pure Tor (the graded pieces
    cannot interleave), so the middle group is the surviving side.
    """
    if degree < 2:
        raise ValueError("reduced smash starts in degree 2")
    ten = tensor_part(degree)
    tor = tor_part(degree - 1)
    if ten.iso_type() and tor.iso_type():
        raise AssertionError("tensor and Tor overlap in one degree")
    iso = ten.iso_type() if ten.iso_type() else tor.iso_type()
    log2 = sum((f.bit_length() - 1) for f in iso)
    if any(f & (f - 1) for f in iso):
        raise AssertionError("non-2-power invariant factor")
    return KunnethDegree(degree, ten, tor, iso, log2)


def tensor_class_order(i: int, j: int, d: int, e: int) -> int:
    """Order of v^d (B_i tensor B_j) in the tensor module; needs i + j = e."""
    if i + j != e:
        raise ValueError("indices must satisfy i + j = e")
    degree = 2 * (d + e) + 2
    ten = tensor_part(degree)
    basis = _f0f0_basis(degree)
    target = (d, i + 1, j + 1)
    coeffs = [1 if b == target else 0 for b in basis]
    order = ten.element_order(coeffs)
    assert order is not None
    return order


def v_annihilation_exponent(i: int = 0, j: int = 0, max_power: int = 12) -> int:
    """Minimal N with v^N (B_i tensor B_j) = 0 in the tensor module."""
    e = i + j
    for n_pow in range(max_power + 1):
        if tensor_class_order(i, j, n_pow, e) == 1:
            return n_pow
    raise AssertionError("no annihilation within the probed range")


def two_exponent_even_degrees(max_degree: int = 24) -> int:
    """Minimal N with 2^N ku_even(smash) = 0 through the given degree."""
    worst = 0
    for d in range(2, max_degree + 1, 2):
        iso = kunneth_orders(d).iso_type
        if iso:
            worst = max(worst, max(f.bit_length() - 1 for f in iso))
    return worst


def v_map_sends_relations_to_relations(n: int) -> bool:
    """Relations of ku_(2n-1) map into the relation lattice one degree up."""
    src = binomial_matrix(n)
    tgt = binomial_matrix(n + 1)
    for j in range(n):
        col = [src.entry(i, j) for i in range(n)] + [0]
        if _solve_integer(tgt, col) is None:
            return False
    return True
