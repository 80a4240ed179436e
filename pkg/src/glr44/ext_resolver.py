"""Minimal free resolutions and Ext charts over A(1) and E(1).

A resolution stores, per homological stage, the list of free-module
generators (with internal degree) and each generator's differential image
in the previous stage.  Generator counts of a minimal resolution are the
Ext dimensions; products with the degree-(1,*) classes are computed by
lifting cocycles through the resolution, and the complexification map c
by a comparison chain map between the A(1)-resolution viewed over E(1)
and the minimal E(1)-resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import steenrod as sd
from .exact_linalg import F2Matrix, F2Subspace, f2_kernel_masks


def _letters(alg: sd.AlgebraTable) -> list[list[str]]:
    out = []
    for lab in alg.labels:
        if lab == "1":
            out.append([])
            continue
        letters = []
        rest = lab
        while rest:
            for g in sorted(alg.generators, key=len, reverse=True):
                if rest.startswith(g):
                    letters.append(g)
                    rest = rest[len(g):]
                    break
            else:
                raise AssertionError(f"unparseable label {lab}")
        out.append(letters)
    return out


@dataclass
class _Gen:
    label: str
    degree: int
    image: int  # bitmask in previous stage's basis at this degree (or in M for s=0)


class Resolution:
    """Minimal free resolution of a graded module, up to (s_max, t_max)."""

    def __init__(self, module: sd.GradedF2Module, s_max: int, t_max: int):
        if module.top is not None and module.top < t_max:
            raise ValueError(
                f"module truncated at {module.top}; need data through degree {t_max}")
        self.module = module
        self.algebra = module.algebra
        self.s_max = s_max
        self.t_max = t_max
        self._letters = _letters(self.algebra)
        self._basis_cache: dict[tuple[int, int], list[tuple[int, int]]] = {}
        self._index_cache: dict[tuple[int, int], dict[tuple[int, int], int]] = {}
        self._diff_cache: dict[tuple[int, int], F2Matrix] = {}
        self._solver_cache: dict[tuple[int, int], tuple] = {}
        self.stages: list[list[_Gen]] = []
        self._build()

    # -- free module bookkeeping ------------------------------------------

    def stage_basis(self, s: int, t: int) -> list[tuple[int, int]]:
        """Basis of F_s in degree t: pairs (generator index, algebra index)."""
        key = (s, t)
        if key not in self._basis_cache:
            basis = []
            for gi, gen in enumerate(self.stages[s]):
                rem = t - gen.degree
                if rem < 0:
                    continue
                for ai in self.algebra.basis_of_degree(rem):
                    basis.append((gi, ai))
            self._basis_cache[key] = basis
            self._index_cache[key] = {pair: k for k, pair in enumerate(basis)}
        return self._basis_cache[key]

    def stage_dim(self, s: int, t: int) -> int:
        if s < 0:
            return self.module.dim(t)
        return len(self.stage_basis(s, t))

    def mult_free(self, s: int, t: int, a_idx: int, vec: int) -> int:
        """Left-multiply a degree-t vector of F_s by algebra basis element a."""
        if vec == 0:
            return 0
        t_out = t + self.algebra.degrees[a_idx]
        idx_out = self._index_cache_for(s, t_out)
        basis = self.stage_basis(s, t)
        out = 0
        v = vec
        while v:
            k = (v & -v).bit_length() - 1
            v &= v - 1
            gi, bi = basis[k]
            for ci in self.algebra.product(a_idx, bi):
                out ^= 1 << idx_out[(gi, ci)]
        return out

    def _index_cache_for(self, s, t):
        self.stage_basis(s, t)
        return self._index_cache[(s, t)]

    def module_act(self, a_idx: int, d: int, vec: int) -> int:
        cur, cur_d = vec, d
        for g in reversed(self._letters[a_idx]):
            cur = self.module.act_vector(g, cur_d, cur)
            cur_d += self.algebra.degree_of(g)
        return cur

    def diff_matrix(self, s: int, t: int) -> F2Matrix:
        """Differential F_s,t -> F_(s-1),t (or -> M_t when s = 0)."""
        key = (s, t)
        if key in self._diff_cache:
            return self._diff_cache[key]
        basis = self.stage_basis(s, t)
        tgt_dim = self.stage_dim(s - 1, t)
        cols = []
        for gi, ai in basis:
            gen = self.stages[s][gi]
            if s == 0:
                cols.append(self.module_act(ai, gen.degree, gen.image))
            else:
                cols.append(self.mult_free(s - 1, gen.degree, ai, gen.image))
        rows = [0] * tgt_dim
        for c, colvec in enumerate(cols):
            v = colvec
            while v:
                r = (v & -v).bit_length() - 1
                v &= v - 1
                rows[r] |= 1 << c
        mat = F2Matrix(tgt_dim, len(basis), tuple(rows))
        self._diff_cache[key] = mat
        return mat

    def solve_diff(self, s: int, t: int, target: int) -> int | None:
        """One preimage of target under the stage-s differential in degree t."""
        return self.diff_matrix(s, t).solve(target)

    # -- construction -------------------------------------------------------

    def _build(self):
        mod = self.module
        alg = self.algebra
        lo = min(mod.support(), default=0)
        # Stage 0: cover M by a free module on a lift of a basis of M/A+.M.
        gens0: list[_Gen] = []
        self.stages.append(gens0)
        for t in range(lo, self.t_max + 1):
            dim = mod.dim(t)
            if dim == 0:
                continue
            covered = F2Subspace(dim)
            for g in alg.generators:
                gd = alg.degree_of(g)
                mat = mod.action(g, t - gd)
                for col in range(mat.ncols):
                    covered.add(mat.transpose().rows[col])
            for k in range(dim):
                if not covered.contains(1 << k):
                    covered.add(1 << k)
                    gens0.append(_Gen(f"g0_{len(gens0)}", t, 1 << k))
        # Higher stages: cover each kernel minimally, degree by degree.
        for s in range(1, self.s_max + 1):
            gens: list[_Gen] = []
            self.stages.append(gens)
            for t in range(lo + s, self.t_max + 1):
                mat = self.diff_matrix(s - 1, t)
                if mat.ncols == 0:
                    continue
                kernel = f2_kernel_masks(mat)
                if not kernel:
                    continue
                covered = F2Subspace(mat.ncols)
                for gi, gen in enumerate(gens):
                    rem = t - gen.degree
                    if rem < 0:
                        continue
                    for ai in self.algebra.basis_of_degree(rem):
                        covered.add(self.mult_free(s - 1, gen.degree, ai, gen.image))
                for v in kernel:
                    if not covered.contains(v):
                        covered.add(v)
                        gens.append(_Gen(f"g{s}_{len(gens)}", t, v))

    # -- reporting ------------------------------------------------------------

    def chart_dims(self) -> dict[tuple[int, int], int]:
        dims: dict[tuple[int, int], int] = {}
        for s, gens in enumerate(self.stages):
            for gen in gens:
                dims[(s, gen.degree)] = dims.get((s, gen.degree), 0) + 1
        return dims

    def gens_at(self, s: int, t: int) -> list[int]:
        return [gi for gi, g in enumerate(self.stages[s]) if g.degree == t]

    def verify(self, sample_limit: int | None = None) -> list[str]:
        """d o d = 0 and minimality (no unit coefficients in differentials)."""
        problems = []
        unit = self.algebra.index("1")
        for s in range(1, len(self.stages)):
            for gen in self.stages[s][:sample_limit]:
                img2 = self.diff_matrix(s - 1, gen.degree).apply(gen.image)
                if img2 != 0:
                    problems.append(f"d^2 != 0 at stage {s} gen {gen.label}")
                basis = self.stage_basis(s - 1, gen.degree)
                v = gen.image
                while v:
                    k = (v & -v).bit_length() - 1
                    v &= v - 1
                    if basis[k][1] == unit:
                        problems.append(f"unit entry at stage {s} gen {gen.label}")
                        break
        return problems


@dataclass(frozen=True)
class ExtChart:
    """Bigraded Ext dimensions with named classes and (1,*)-products."""

    algebra_name: str
    dims: dict[tuple[int, int], int]
    labels: dict[tuple[int, int], tuple[str, ...]]
    # actions[h][(s, t)] = F2Matrix: Ext^(s,t) -> Ext^(s+1, t+deg h)
    actions: dict[str, dict[tuple[int, int], F2Matrix]]
    s_max: int
    t_max: int

    def dim(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)

    def action(self, h: str, s: int, t: int, h_degree: int) -> F2Matrix:
        mat = self.actions.get(h, {}).get((s, t))
        if mat is None:
            return F2Matrix.zeros(self.dim(s + 1, t + h_degree), self.dim(s, t))
        return mat

    def column_dims(self, n: int) -> list[int]:
        """Dimensions along the Adams column t - s = n."""
        return [self.dim(s, n + s) for s in range(self.s_max + 1)]


_POINT_CACHE: dict[tuple[str, int, int], Resolution] = {}


def point_resolution(algebra_name: str, s_max: int, t_max: int) -> Resolution:
    key = (algebra_name, s_max, t_max)
    if key not in _POINT_CACHE:
        alg = sd.algebra(algebra_name)
        pt = sd.GradedF2Module(alg, {0: ("pt",)}, {})
        _POINT_CACHE[key] = Resolution(pt, s_max, t_max)
    return _POINT_CACHE[key]


def ext_class_degrees(algebra_name: str) -> dict[str, int]:
    """Internal degrees of the (1,*) classes used for products."""
    return {"A1": {"h0": 1, "h1": 2}, "E1": {"h0": 1, "v": 3}}[algebra_name]


def product_action(res: Resolution, h: str) -> dict[tuple[int, int], F2Matrix]:
    """Matrices of multiplication by h in Ext^(1,*) of the point.

    Computed by lifting each chart class (dual of a stage generator) to a
    chain map into the point resolution; the h-component of the degree-1
    lift gives the product coefficients.
    """
    alg_name = res.algebra.name
    q = ext_class_degrees(alg_name)[h]
    point = point_resolution(alg_name, 2, max(q + 1, 4))
    h_gens = point.gens_at(1, q)
    if len(h_gens) != 1:
        raise AssertionError(f"expected one point generator at (1,{q})")
    h_gen = h_gens[0]
    unit = res.algebra.index("1")
    q0_basis = point.stage_basis(0, q)
    # Positions of (iota, a) in Q_0 degree q, per algebra element a.
    pos_by_alg = {ai: k for k, (gi, ai) in enumerate(q0_basis)}
    dq = point.diff_matrix(1, q)
    q1_basis = point.stage_basis(1, q)
    h_unit_pos = q1_basis.index((h_gen, unit))

    out: dict[tuple[int, int], F2Matrix] = {}
    for s in range(len(res.stages) - 1):
        by_degree: dict[int, list[int]] = {}
        for gi, gen in enumerate(res.stages[s]):
            by_degree.setdefault(gen.degree, []).append(gi)
        for t, src_gens in sorted(by_degree.items()):
            tgt_gens = res.gens_at(s + 1, t + q)
            if not tgt_gens:
                continue
            rows = [0] * len(tgt_gens)
            for col, gi in enumerate(src_gens):
                for r, gj in enumerate(tgt_gens):
                    gen2 = res.stages[s + 1][gj]
                    # u = X_0(d(gen2)) in Q_0 at degree q.
                    u = 0
                    basis = res.stage_basis(s, gen2.degree)
                    v = gen2.image
                    while v:
                        k = (v & -v).bit_length() - 1
                        v &= v - 1
                        bgi, bai = basis[k]
                        if bgi == gi:
                            u ^= 1 << pos_by_alg[bai]
                    if u == 0:
                        continue
                    w = dq.solve(u)
                    if w is None:
                        raise AssertionError("cocycle lift failed on exact data")
                    if (w >> h_unit_pos) & 1:
                        rows[r] |= 1 << col
            out[(s, t)] = F2Matrix(len(tgt_gens), len(src_gens), tuple(rows))
    return out


def ext_chart(res: Resolution, with_actions: tuple[str, ...] = ()) -> ExtChart:
    dims = res.chart_dims()
    labels = {}
    for s, gens in enumerate(res.stages):
        per_t: dict[int, list[str]] = {}
        for gen in gens:
            per_t.setdefault(gen.degree, []).append(gen.label)
        for t, labs in per_t.items():
            labels[(s, t)] = tuple(labs)
    actions = {h: product_action(res, h) for h in with_actions}
    return ExtChart(res.algebra.name, dims, labels, actions,
                    len(res.stages) - 1, res.t_max)


# ---------------------------------------------------------------------------
# Change of rings: the complexification map c
# ---------------------------------------------------------------------------

def _e1_in_a1() -> dict[int, frozenset[int]]:
    """E(1) basis elements expanded as sums of A(1) basis elements."""
    a1 = sd.algebra("A1")
    e1 = sd.algebra("E1")
    sq1 = a1.index("Sq1")
    sq2 = a1.index("Sq2")
    q0 = frozenset({sq1})
    q1 = frozenset(a1.product(sq1, sq2) ^ a1.product(sq2, sq1))
    q0q1 = a1.product_sets(q0, q1)
    table = {}
    for idx, lab in enumerate(e1.labels):
        if lab == "1":
            table[idx] = frozenset({a1.index("1")})
        elif lab == "Q0":
            table[idx] = q0
        elif lab == "Q1":
            table[idx] = q1
        elif lab in ("Q0Q1", "Q1Q0"):
            table[idx] = q0q1
        else:
            raise AssertionError(f"unexpected E1 label {lab}")
    return table


def change_of_rings_c(res_a1: Resolution, res_e1: Resolution) -> dict[tuple[int, int], F2Matrix]:
    """The map c: Ext_A1^(s,t)(M) -> Ext_E1^(s,t)(M) on chart classes.

    res_a1 resolves M over A(1); res_e1 resolves the E(1)-restriction of M.
    Built from a comparison chain map phi: R -> P|E(1) over the identity;
    the matrix entry at (E1 gen r, A1 gen g) is the coefficient of (g, 1)
    in phi(r).
    """
    if res_a1.algebra.name != "A1" or res_e1.algebra.name != "E1":
        raise ValueError("change of rings expects an A1 and an E1 resolution")
    e1_to_a1 = _e1_in_a1()
    unit_a1 = res_a1.algebra.index("1")
    s_top = min(len(res_a1.stages), len(res_e1.stages))
    # phi[s][r] = vector in P_s at degree of r-th generator of R_s.
    phi: list[list[int]] = []
    out: dict[tuple[int, int], F2Matrix] = {}

    def e1_mult_on_p(s: int, t: int, e_idx: int, vec: int) -> int:
        outv = 0
        for a_idx in e1_to_a1[e_idx]:
            outv ^= res_a1.mult_free(s, t, a_idx, vec)
        return outv

    for s in range(s_top):
        cur: list[int] = []
        for r_idx, r_gen in enumerate(res_e1.stages[s]):
            t = r_gen.degree
            if t > res_a1.t_max:
                cur.append(0)
                continue
            if s == 0:
                target = r_gen.image  # vector in M_t (same underlying space)
            else:
                # phi_(s-1)(d_R r): expand d image over E1 basis of R_(s-1).
                target = 0
                basis = res_e1.stage_basis(s - 1, t)
                v = r_gen.image
                while v:
                    k = (v & -v).bit_length() - 1
                    v &= v - 1
                    r2, e_idx = basis[k]
                    prev = phi[s - 1][r2]
                    t2 = res_e1.stages[s - 1][r2].degree
                    target ^= e1_mult_on_p(s - 1, t2, e_idx, prev)
            w = res_a1.solve_diff(s, t, target)
            if w is None:
                raise AssertionError("comparison lift failed on exact data")
            cur.append(w)
        phi.append(cur)
        # Extract unit coefficients per bidegree.
        degrees = sorted({g.degree for g in res_a1.stages[s]} |
                         {g.degree for g in res_e1.stages[s]})
        for t in degrees:
            a_gens = res_a1.gens_at(s, t)
            e_gens = res_e1.gens_at(s, t)
            if not a_gens or not e_gens:
                if a_gens or e_gens:
                    out[(s, t)] = F2Matrix.zeros(len(e_gens), len(a_gens))
                continue
            basis = res_a1.stage_basis(s, t)
            pos = {gi: basis.index((gi, unit_a1)) for gi in a_gens}
            rows = [0] * len(e_gens)
            for rr, r_idx in enumerate(e_gens):
                w = cur[r_idx]
                for cc, gi in enumerate(a_gens):
                    if (w >> pos[gi]) & 1:
                        rows[rr] |= 1 << cc
            out[(s, t)] = F2Matrix(len(e_gens), len(a_gens), tuple(rows))
    return out


# ---------------------------------------------------------------------------
# The eta-c-R dimension-exactness identity
# ---------------------------------------------------------------------------

@dataclass
class EtaCRReport:
    window: tuple[int, int]
    checked: int
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def eta_c_r_check(module_a1: sd.GradedF2Module, s_max: int, t_max: int) -> EtaCRReport:
    """Verify dim Ext_E1^(s,t) = rank c + dim ker(h1: Ext_A1^(s,t-2) -> Ext_A1^(s+1,t)).

    This is the dimension identity forced by exactness of the eta-c-R
    sequence; it is checked at every bidegree with s < s_max and t <= t_max.
    """
    res_a1 = Resolution(module_a1, s_max + 1, t_max)
    res_e1 = Resolution(sd.restrict_to_E1(module_a1), s_max, t_max)
    c = change_of_rings_c(res_a1, res_e1)
    h1 = product_action(res_a1, "h1")
    failures = []
    checked = 0
    margin = res_a1.algebra.top_degree
    for s in range(s_max):
        for t in range(t_max - margin + 1):
            dim_e1 = len(res_e1.gens_at(s, t)) if t <= res_e1.t_max else 0
            mat_c = c.get((s, t))
            rank_c = mat_c.rank() if mat_c is not None else 0
            n_src = len(res_a1.gens_at(s, t - 2)) if t >= 2 else 0
            mat_h1 = h1.get((s, t - 2))
            if mat_h1 is None:
                ker_h1 = n_src
            else:
                ker_h1 = n_src - mat_h1.rank()
            checked += 1
            if dim_e1 != rank_c + ker_h1:
                failures.append(
                    f"(s,t)=({s},{t}): dimE1={dim_e1} rank c={rank_c} ker h1={ker_h1}")
    return EtaCRReport((s_max, t_max), checked, failures)


# ---------------------------------------------------------------------------
# Model charts for the point (acceptance comparisons)
# ---------------------------------------------------------------------------

def model_point_dim_E1(s: int, t: int) -> int:
    """F2[h0, v]: h0 at (1,1), v at (1,3)."""
    if s < 0 or (t - s) < 0 or (t - s) % 2:
        return 0
    return 1 if (t - s) // 2 <= s else 0


def model_point_dim_A1(s: int, t: int) -> int:
    """F2[h0,h1,a,b]/(h0 h1, h1^3, h1 a, a^2 + h0^2 b) by monomial count."""
    count = 0
    # h0^i b^l and h0^i a b^l
    for l in range((t // 12) + 1):
        i = s - 4 * l
        if i >= 0 and i + 12 * l == t:
            count += 1
        i = s - 3 - 4 * l
        if i >= 0 and i + 7 + 12 * l == t:
            count += 1
    # h1 b^l, h1^2 b^l
    for l in range((t // 12) + 1):
        if s == 1 + 4 * l and t == 2 + 12 * l:
            count += 1
        if s == 2 + 4 * l and t == 4 + 12 * l:
            count += 1
    return count


def model_bow_dim_A1(s: int, t: int) -> int:
    """F2[h0] on classes x_i at (t-s, s) = (2i, i)."""
    n = t - s
    return 1 if n >= 0 and n % 2 == 0 and s >= n // 2 else 0


def model_sb_dim_A1(s: int, t: int) -> int:
    """F2[h0] on a_(0,i) at (2i, i) and a_(2,i) at (2i+2, i)."""
    n = t - s
    count = 0
    if n >= 0 and n % 2 == 0 and s >= n // 2:
        count += 1
    if n - 2 >= 0 and n % 2 == 0 and s >= (n - 2) // 2:
        count += 1
    return count


def model_sb_dim_E1(s: int, t: int) -> int:
    """F2[h0] on b_(0,i) (2i,i), b_(20,i), b_(21,i) (2i+2,i), b_(4,i) (2i+4,i)."""
    n = t - s
    if n < 0 or n % 2:
        return 0
    count = 0
    for off, mult in ((0, 1), (2, 2), (4, 1)):
        if n - off >= 0 and s >= (n - off) // 2:
            count += mult
    return count
