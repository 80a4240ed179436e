"""Mod-2 cohomology of BZ/4, of the product, and of the smash factor.

Monomials are written in the canonical order x0, T0, x1, T1 with exponents
omitted when 0 or 1 (e.g. ``x0T0^3x1T1``).  Sq1 vanishes on every generator
(the Bockstein of Z/4 is zero mod 2) and Sq2 is given on T-monomials by the
parity rule Sq2(T0^i T1^j) = [i odd] T0^(i+1) T1^j + [j odd] T0^i T1^(j+1),
which the tensor-built Cartan action must reproduce.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import steenrod as sd
from .exact_linalg import F2Matrix, F2Subspace

DEFAULT_TOP = 48

Monomial = tuple[int, int, int, int]  # (e0, i, e1, j): x0^e0 T0^i x1^e1 T1^j


def monomial_label(m: Monomial) -> str:
    e0, i, e1, j = m
    parts = []
    if e0:
        parts.append("x0")
    if i:
        parts.append("T0" if i == 1 else f"T0^{i}")
    if e1:
        parts.append("x1")
    if j:
        parts.append("T1" if j == 1 else f"T1^{j}")
    return "".join(parts) or "1"


def parse_label(label: str) -> Monomial:
    e0 = i = e1 = j = 0
    rest = label
    if rest.startswith("x0"):
        e0, rest = 1, rest[2:]
    if rest.startswith("T0"):
        rest = rest[2:]
        if rest.startswith("^"):
            num = ""
            rest = rest[1:]
            while rest and rest[0].isdigit():
                num, rest = num + rest[0], rest[1:]
            i = int(num)
        else:
            i = 1
    if rest.startswith("x1"):
        e1, rest = 1, rest[2:]
    if rest.startswith("T1"):
        rest = rest[2:]
        if rest.startswith("^"):
            num = ""
            rest = rest[1:]
            while rest and rest[0].isdigit():
                num, rest = num + rest[0], rest[1:]
            j = int(num)
        else:
            j = 1
    if rest:
        raise ValueError(f"bad monomial label {label!r}")
    return (e0, i, e1, j)


def monomial_degree(m: Monomial) -> int:
    e0, i, e1, j = m
    return e0 + 2 * i + e1 + 2 * j


def sq2_closed_formula(m: Monomial) -> list[Monomial]:
    """The parity-case formula for Sq2 on a monomial; Sq1 is zero."""
    e0, i, e1, j = m
    out = []
    if i % 2:
        out.append((e0, i + 1, e1, j))
    if j % 2:
        out.append((e0, i, e1, j + 1))
    return out


@dataclass(frozen=True)
class NamedCohomology:
    """A cohomology module with named monomial basis."""

    module: sd.GradedF2Module
    monomials: dict[str, Monomial]

    @property
    def top(self) -> int:
        return self.module.top

    def dim(self, d: int) -> int:
        return self.module.dim(d)

    def basis(self, d: int) -> tuple[str, ...]:
        return self.module.basis(d)

    def vector_of(self, label: str) -> tuple[int, int]:
        """(degree, basis bitmask) of a monomial label."""
        m = self.monomials[label]
        d = monomial_degree(m)
        return d, 1 << self.module.label_index(d, label)


def _build_named(monomials: list[Monomial], top: int) -> NamedCohomology:
    a1 = sd.algebra("A1")
    per_degree: dict[int, list[Monomial]] = {}
    for m in monomials:
        d = monomial_degree(m)
        if d <= top:
            per_degree.setdefault(d, []).append(m)
    for d in per_degree:
        per_degree[d].sort()
    degs = {d: tuple(monomial_label(m) for m in ms) for d, ms in per_degree.items()}
    index = {monomial_label(m): (d, k) for d, ms in per_degree.items() for k, m in enumerate(ms)}
    sq2: dict[int, F2Matrix] = {}
    for d, ms in per_degree.items():
        if d + 2 > top:
            continue
        tgt = per_degree.get(d + 2, [])
        rows = [0] * len(tgt)
        for col, m in enumerate(ms):
            for t in sq2_closed_formula(m):
                lab = monomial_label(t)
                if lab in index:
                    rows[index[lab][1]] ^= 1 << col
        sq2[d] = F2Matrix(len(tgt), len(ms), tuple(rows))
    module = sd.GradedF2Module(a1, degs, {"Sq2": sq2}, top)
    problems = sd.verify_module(module)
    if problems:
        raise AssertionError("cohomology violates A(1) relations: " + "; ".join(problems))
    return NamedCohomology(module, {monomial_label(m): m for ms in per_degree.values() for m in ms})


def cohomology_Z4(top: int = DEFAULT_TOP, factor: int = 0) -> NamedCohomology:
    """Reduced mod-2 cohomology of BZ/4 as an A(1)-module (one polynomial T,
    one exterior x).  ``factor`` selects the x0/T0 or x1/T1 naming."""
    if top < 1:
        raise ValueError("top must be at least 1")
    monomials = []
    for e in (0, 1):
        for k in range(0, top // 2 + 1):
            if e + 2 * k == 0:
                continue
            monomials.append((e, k, 0, 0) if factor == 0 else (0, 0, e, k))
    return _build_named(monomials, top)


def _all_product_monomials(top: int) -> list[Monomial]:
    out = []
    for e0 in (0, 1):
        for e1 in (0, 1):
            for i in range(0, top // 2 + 1):
                for j in range(0, (top - e0 - e1 - 2 * i) // 2 + 1):
                    if e0 + e1 + i + j > 0:
                        out.append((e0, i, e1, j))
    return out


def cohomology_product(top: int = DEFAULT_TOP) -> NamedCohomology:
    """Reduced cohomology of BZ/4 x BZ/4 (all monomials with some factor)."""
    return _build_named(_all_product_monomials(top), top)


def reduced_smash(top: int = DEFAULT_TOP) -> NamedCohomology:
    """Monomials positive in both factors; closed under Sq1, Sq2."""
    mons = [m for m in _all_product_monomials(top)
            if (m[0] + m[1] > 0) and (m[2] + m[3] > 0)]
    return _build_named(mons, top)


def tensor_square_of_Z4(top: int = DEFAULT_TOP) -> sd.GradedF2Module:
    """The product cohomology built through the generic Cartan tensor.

    Includes the two reduced factors and the smash part; used to check the
    closed Sq2 formula against the tensor action.
    """
    full0 = _with_unit(cohomology_Z4(top, factor=0))
    full1 = _with_unit(cohomology_Z4(top, factor=1))

    def merge(a: str, b: str) -> str:
        ma = parse_label(a) if a != "1" else (0, 0, 0, 0)
        mb = parse_label(b) if b != "1" else (0, 0, 0, 0)
        return monomial_label((ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]))

    return sd.tensor(full0.module, full1.module, label_fn=merge)


def _with_unit(h: NamedCohomology) -> NamedCohomology:
    degs = dict(h.module.degrees)
    degs[0] = ("1",)
    module = sd.GradedF2Module(h.module.algebra, degs, h.module.actions, h.module.top)
    mons = dict(h.monomials)
    mons["1"] = (0, 0, 0, 0)
    return NamedCohomology(module, mons)


def cartan_matches_closed_formula(top: int = DEFAULT_TOP) -> bool:
    """Tensor-built Sq2 equals the parity-case formula on every monomial."""
    via_tensor = tensor_square_of_Z4(top)
    direct = _build_named(_all_product_monomials(top) + [(0, 0, 0, 0)], top).module
    for d in range(0, top - 1):
        if via_tensor.dim(d) != direct.dim(d):
            return False
        if via_tensor.dim(d) == 0:
            continue
        # Match up bases by label.
        perm_src = [direct.label_index(d, lab) for lab in via_tensor.basis(d)]
        if d + 2 > top:
            continue
        perm_tgt = {direct.label_index(d + 2, lab): r
                    for r, lab in enumerate(via_tensor.basis(d + 2))}
        a = via_tensor.action("Sq2", d)
        b = direct.action("Sq2", d)
        for col in range(a.ncols):
            img_a = {r for r in range(a.nrows) if a.entry(r, col)}
            img_b = {perm_tgt[r] for r in range(b.nrows) if b.entry(r, perm_src[col])}
            if img_a != img_b:
                return False
        if not via_tensor.action("Sq1", d).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# Decomposition into point / bow / double-bow summands
# ---------------------------------------------------------------------------

_MODELS = {
    "point": (sd.module_point, [("pt", 0)]),
    "MB": (sd.module_bow, [("w0", 0)]),
    "MSB": (sd.module_sb, [("d0", 0), ("d20", 2)]),
}


def _algebra_words(a1: sd.AlgebraTable) -> list[list[str]]:
    """Canonical basis labels parsed into generator letters."""
    words = []
    for lab in a1.labels:
        letters = []
        rest = lab
        if rest == "1":
            words.append([])
            continue
        while rest:
            for g in sorted(a1.generators, key=len, reverse=True):
                if rest.startswith(g):
                    letters.append(g)
                    rest = rest[len(g):]
                    break
            else:
                raise AssertionError(f"unparseable algebra label {lab}")
        words.append(letters)
    return words


def _act_word(mod: sd.GradedF2Module, word: Sequence[str], d: int, vec: int) -> tuple[int, int]:
    """Apply a generator word (rightmost letter first), returning (degree, vector)."""
    cur_d, cur = d, vec
    for g in reversed(word):
        cur = mod.act_vector(g, cur_d, cur)
        cur_d += mod.algebra.degree_of(g)
    return cur_d, cur


@dataclass
class ClaimResult:
    shift: int
    kind: str
    generator: str
    ok: bool
    detail: str = ""


@dataclass
class DecomposeReport:
    claims: list[ClaimResult]
    direct: bool
    exhaustive: bool
    failures: list[str]

    @property
    def ok(self) -> bool:
        return self.direct and self.exhaustive and all(c.ok for c in self.claims)


def decompose(h: NamedCohomology, claimed: Iterable[tuple[int, str, str]],
              max_degree: int | None = None) -> DecomposeReport:
    """Check a claimed decomposition into suspended point/MB/MSB summands.

    Each claim is (shift, kind, generator monomial).  For MSB the summand is
    generated by the monomial together with the monomial components of its
    Sq2 image (the module needs two generators).  The summand must be
    isomorphic to the suspended model, the sum of all claimed summands must
    be direct, and it must exhaust the module in every checked degree.
    """
    mod = h.module
    a1 = mod.algebra
    words = _algebra_words(a1)
    if max_degree is None:
        max_degree = (mod.top or 0) - a1.top_degree
    claims: list[ClaimResult] = []
    span: dict[int, F2Subspace] = {}
    dim_sum: dict[int, int] = {}
    failures: list[str] = []
    direct = True

    for shift, kind, gen_label in claimed:
        model_fn, model_gens = _MODELS[kind]
        model = model_fn()
        # Candidate generators mirror the model generators.
        d0, v0 = h.vector_of(gen_label)
        if d0 != shift:
            claims.append(ClaimResult(shift, kind, gen_label, False,
                                      f"generator degree {d0} != shift {shift}"))
            continue
        cand = [(d0, v0)]
        if kind == "MSB":
            img = mod.act_vector("Sq2", d0, v0)
            if img == 0:
                claims.append(ClaimResult(shift, kind, gen_label, False, "Sq2 image vanishes"))
                continue
            first = img & -img
            cand.append((d0 + 2, first))
        ok, detail, sub_dims, sub_vectors = _check_summand(mod, words, model, model_gens, cand, shift)
        claims.append(ClaimResult(shift, kind, gen_label, ok, detail))
        if not ok:
            continue
        for d, vecs in sub_vectors.items():
            sub = span.setdefault(d, F2Subspace(mod.dim(d)))
            for v in vecs:
                if not sub.add(v):
                    direct = False
                    failures.append(f"overlap at degree {d} from {gen_label}")
            dim_sum[d] = dim_sum.get(d, 0) + sub_dims.get(d, 0)

    exhaustive = True
    for d in range(1, max_degree + 1):
        have = span.get(d)
        have_dim = have.dim if have else 0
        if have_dim != mod.dim(d):
            exhaustive = False
            failures.append(f"degree {d}: spanned {have_dim} of {mod.dim(d)}")
    return DecomposeReport(claims, direct, exhaustive, failures)


def _check_summand(mod, words, model, model_gens, cand, shift):
    """Verify the submodule generated by cand is isomorphic to the shifted model."""
    per_degree_model: dict[int, list[int]] = {}
    per_degree_cand: dict[int, list[int]] = {}
    for (g_lab, g_deg), (c_deg, c_vec) in zip(model_gens, cand):
        g_vec = 1 << model.label_index(g_deg, g_lab)
        for word in words:
            wd = sum(model.algebra.degree_of(let) for let in word)
            md, mv = _act_word(model, word, g_deg, g_vec)
            cd, cv = _act_word(mod, word, c_deg, c_vec)
            if md != cd - shift:
                return False, "degree drift", {}, {}
            per_degree_model.setdefault(md, []).append(mv)
            per_degree_cand.setdefault(md, []).append(cv)
    sub_dims: dict[int, int] = {}
    sub_vectors: dict[int, list[int]] = {}
    for md in sorted(per_degree_model):
        mvs = per_degree_model[md]
        cvs = per_degree_cand[md]
        # Kernels of the two word-indexed families must agree.
        mker = _relation_space(mvs)
        cker = _relation_space(cvs)
        if mker.dim != cker.dim or any(not cker.contains(r) for r in mker.rows):
            return False, f"relations differ in degree {md + shift}", {}, {}
        span_dim = len(mvs) - mker.dim
        if span_dim != model.dim(md):
            return False, f"candidate span too small in degree {md + shift}", {}, {}
        sub_dims[md + shift] = span_dim
        keep = F2Subspace(1 << 62)
        chosen = []
        for v in cvs:
            if v and keep.add(v):
                chosen.append(v)
        sub_vectors[md + shift] = chosen
    return True, "", sub_dims, sub_vectors


def _relation_space(vectors: list[int]) -> F2Subspace:
    """Kernel of the map F2^len(vectors) -> span, as a subspace of coefficient space."""
    n = len(vectors)
    mat = F2Matrix(0, n, ())
    # Build matrix whose columns are the vectors (rows = ambient bits used).
    bits = set()
    for v in vectors:
        vv = v
        while vv:
            bits.add((vv & -vv).bit_length() - 1)
            vv &= vv - 1
    bit_list = sorted(bits)
    rows = []
    for b in bit_list:
        row = 0
        for jx, v in enumerate(vectors):
            if (v >> b) & 1:
                row |= 1 << jx
        rows.append(row)
    mat = F2Matrix(len(rows), n, tuple(rows))
    sub = F2Subspace(n)
    from .exact_linalg import f2_kernel_masks
    for mask in f2_kernel_masks(mat):
        sub.add(mask)
    return sub


def generator_count(h: NamedCohomology, degree: int) -> int:
    """dim of (H / A(1)+ . H) in the given degree."""
    mod = h.module
    if mod.top is not None and degree > mod.top - mod.algebra.top_degree:
        raise ValueError("degree too close to the truncation bound")
    sub = F2Subspace(mod.dim(degree))
    for g in mod.algebra.generators:
        gd = mod.algebra.degree_of(g)
        mat = mod.action(g, degree - gd)
        for col in range(mat.ncols):
            vec = 0
            for r in range(mat.nrows):
                if mat.entry(r, col):
                    vec |= 1 << r
            sub.add(vec)
    return mod.dim(degree) - sub.dim


# ---------------------------------------------------------------------------
# The published decompositions (derived generator tables)
# ---------------------------------------------------------------------------

def bz4_claims(max_degree: int, factor: int = 0) -> list[tuple[int, str, str]]:
    """Summands of reduced H*(BZ/4): x, then bows on odd T-powers."""
    x, t = ("x0", "T0") if factor == 0 else ("x1", "T1")
    claims = [(1, "point", x)]
    k = 0
    while 4 * k + 2 <= max_degree:
        e = 2 * k + 1
        claims.append((4 * k + 2, "MB", t if e == 1 else f"{t}^{e}"))
        if 4 * k + 3 <= max_degree:
            claims.append((4 * k + 3, "MB", f"{x}{t}" if e == 1 else f"{x}{t}^{e}"))
        k += 1
    return claims


def smash_claims(max_degree: int) -> list[tuple[int, str, str]]:
    """Summands of the smash factor, derived by enumeration.

    Degree 4k carries two bows (x0x1 T^odd) and k double bows on
    T0^odd T1^odd; degree 4k+1 carries 2k double bows (x0- and x1-types);
    degree 4k+2 carries k double bows (x0x1-type); degree 4k+3 two bows.
    """
    claims: list[tuple[int, str, str]] = [(2, "point", "x0x1")]

    def lab(e0, i, e1, j):
        return monomial_label((e0, i, e1, j))

    k = 1
    while 4 * k <= max_degree:
        claims.append((4 * k, "MB", lab(1, 2 * k - 1, 1, 0)))
        claims.append((4 * k, "MB", lab(1, 0, 1, 2 * k - 1)))
        for l in range(k):
            claims.append((4 * k, "MSB", lab(0, 2 * l + 1, 0, 2 * (k - l) - 1)))
        if 4 * k + 1 <= max_degree:
            for l in range(k):
                claims.append((4 * k + 1, "MSB", lab(1, 2 * l + 1, 0, 2 * (k - l) - 1)))
                claims.append((4 * k + 1, "MSB", lab(0, 2 * l + 1, 1, 2 * (k - l) - 1)))
        if 4 * k + 2 <= max_degree:
            for l in range(k):
                claims.append((4 * k + 2, "MSB", lab(1, 2 * l + 1, 1, 2 * (k - l) - 1)))
        k += 1
    k = 0
    while 4 * k + 3 <= max_degree:
        claims.append((4 * k + 3, "MB", lab(1, 0, 0, 2 * k + 1)))
        claims.append((4 * k + 3, "MB", lab(0, 2 * k + 1, 1, 0)))
        k += 1
    return sorted(claims)


def product_claims(max_degree: int) -> list[tuple[int, str, str]]:
    return sorted(bz4_claims(max_degree, 0) + bz4_claims(max_degree, 1)
                  + smash_claims(max_degree))


def summand_multiplicities(claims: Iterable[tuple[int, str, str]]) -> dict[tuple[int, str], int]:
    out: dict[tuple[int, str], int] = {}
    for shift, kind, _ in claims:
        out[(shift, kind)] = out.get((shift, kind), 0) + 1
    return out
