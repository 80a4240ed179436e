"""Finite subalgebras of the mod-2 Steenrod algebra and their graded modules.

The algebras A(1) = <Sq1, Sq2 | Sq1 Sq2 Sq1 = Sq2 Sq2>, E(1) = exterior on
Q0, Q1, and E(0) = exterior on Sq1 are built by closing words of generators
modulo the two-sided ideal of relations and tabulating products on the
quotient basis.  Modules are finite-by-degree GF(2) vector spaces with one
action matrix per algebra generator per degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exact_linalg import F2Matrix, F2Subspace

_UNBOUNDED = None  # truncation sentinel: module exact in all degrees


# ---------------------------------------------------------------------------
# Algebra tables
# ---------------------------------------------------------------------------

_PRESENTATIONS = {
    # name: (generators (label, degree), relations as lists of words, closure bound)
    "A1": (
        (("Sq1", 1), ("Sq2", 2)),
        [
            [("Sq1", "Sq1")],
            [("Sq2", "Sq2"), ("Sq1", "Sq2", "Sq1")],
        ],
        14,
    ),
    "E1": (
        (("Q0", 1), ("Q1", 3)),
        [
            [("Q0", "Q0")],
            [("Q1", "Q1")],
            [("Q0", "Q1"), ("Q1", "Q0")],
        ],
        14,
    ),
    "E0": (
        (("Sq1", 1),),
        [
            [("Sq1", "Sq1")],
        ],
        8,
    ),
}


@dataclass(frozen=True)
class AlgebraTable:
    """Multiplication table of a finite graded GF(2) algebra."""

    name: str
    labels: tuple[str, ...]
    degrees: tuple[int, ...]
    generators: tuple[str, ...]
    # mult[i][j] = frozenset of basis indices appearing in basis_i * basis_j
    mult: tuple[tuple[frozenset[int], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def top_degree(self) -> int:
        return max(self.degrees)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def degree_of(self, label: str) -> int:
        return self.degrees[self.index(label)]

    def basis_of_degree(self, d: int) -> list[int]:
        return [i for i, deg in enumerate(self.degrees) if deg == d]

    def product(self, i: int, j: int) -> frozenset[int]:
        return self.mult[i][j]

    def product_sets(self, left: Iterable[int], right: Iterable[int]) -> frozenset[int]:
        acc: set[int] = set()
        for i in left:
            for j in right:
                acc ^= self.mult[i][j]
        return frozenset(acc)


def _words_of_degree(gens, d):
    """All generator words of total degree d, in lexicographic order."""
    out = []

    def rec(prefix, rem):
        if rem == 0:
            out.append(tuple(prefix))
            return
        for label, gd in gens:
            if gd <= rem:
                prefix.append(label)
                rec(prefix, rem - gd)
                prefix.pop()

    rec([], d)
    return sorted(out)


def build_algebra(name: str) -> AlgebraTable:
    """Close the generators under multiplication modulo the relations."""
    if name not in _PRESENTATIONS:
        raise ValueError(f"unknown algebra {name!r}")
    gens, relations, bound = _PRESENTATIONS[name]
    gen_degree = dict(gens)

    def word_degree(w):
        return sum(gen_degree[s] for s in w)

    words_by_degree = {d: _words_of_degree(gens, d) for d in range(bound + 1)}
    word_index = {d: {w: i for i, w in enumerate(ws)} for d, ws in words_by_degree.items()}

    # Ideal component per degree: span of u * r * v over GF(2).
    ideal_rows: dict[int, F2Subspace] = {}
    basis_words: dict[int, list[tuple[str, ...]]] = {}
    reducers: dict[int, tuple[list[int], list[int]]] = {}
    for d in range(bound + 1):
        ws = words_by_degree[d]
        sub = F2Subspace(len(ws))
        for rel in relations:
            rdeg = word_degree(rel[0])
            if rdeg > d:
                continue
            rest = d - rdeg
            for du in range(rest + 1):
                dv = rest - du
                for u in words_by_degree[du]:
                    for v in words_by_degree[dv]:
                        vec = 0
                        for term in rel:
                            vec ^= 1 << word_index[d][u + term + v]
                        sub.add(vec)
        ideal_rows[d] = sub
        pivots = set(sub.pivot_cols)
        basis_words[d] = [w for i, w in enumerate(ws) if i not in pivots]
        reducers[d] = (sub.pivot_cols, sub.rows)

    # Confirm the closure stabilised to zero above the top degree.
    top = max(d for d in range(bound + 1) if basis_words[d])
    if any(basis_words[d] for d in range(top + 1, bound + 1)):
        raise RuntimeError(f"closure bound too small for {name}")

    labels: list[str] = []
    degrees: list[int] = []
    canon: dict[tuple[str, ...], int] = {}
    for d in range(top + 1):
        for w in basis_words[d]:
            canon[w] = len(labels)
            labels.append("".join(w) if w else "1")
            degrees.append(d)

    def reduce_word(w) -> frozenset[int]:
        d = word_degree(w)
        if d > top:
            return frozenset()
        vec = 1 << word_index[d][w]
        for pc, pr in zip(*reducers[d]):
            if (vec >> pc) & 1:
                vec ^= pr
        out = set()
        for i, bw in enumerate(words_by_degree[d]):
            if (vec >> i) & 1:
                out.add(canon[bw])
        return frozenset(out)

    words = list(canon)
    mult = tuple(
        tuple(reduce_word(wi + wj) for wj in words) for wi in words
    )
    return AlgebraTable(name, tuple(labels), tuple(degrees),
                        tuple(label for label, _ in gens), mult)


_ALGEBRA_CACHE: dict[str, AlgebraTable] = {}


def algebra(name: str) -> AlgebraTable:
    if name not in _ALGEBRA_CACHE:
        _ALGEBRA_CACHE[name] = build_algebra(name)
    return _ALGEBRA_CACHE[name]


# ---------------------------------------------------------------------------
# Graded modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedF2Module:
    """Graded GF(2) module over a finite algebra.

    ``degrees`` carries the ordered basis labels for each nonzero degree and
    ``actions[g][d]`` the matrix of generator g from degree d to d + |g|
    (columns = source basis).  ``top`` bounds the degrees with valid data;
    None means the module is exact everywhere.
    """

    algebra: AlgebraTable
    degrees: dict[int, tuple[str, ...]]
    actions: dict[str, dict[int, F2Matrix]]
    top: int | None = _UNBOUNDED

    def dim(self, d: int) -> int:
        return len(self.degrees.get(d, ()))

    def basis(self, d: int) -> tuple[str, ...]:
        return self.degrees.get(d, ())

    def support(self) -> list[int]:
        return sorted(d for d, b in self.degrees.items() if b)

    def min_degree(self) -> int:
        sup = self.support()
        return sup[0] if sup else 0

    def action(self, gen: str, d: int) -> F2Matrix:
        gd = self.algebra.degree_of(gen)
        mat = self.actions.get(gen, {}).get(d)
        if mat is None:
            return F2Matrix.zeros(self.dim(d + gd), self.dim(d))
        return mat

    def act_vector(self, gen: str, d: int, vec: int) -> int:
        return self.action(gen, d).apply(vec)

    def total_dim(self) -> int:
        return sum(len(b) for b in self.degrees.values())

    def label_index(self, d: int, label: str) -> int:
        return self.degrees[d].index(label)


def make_module(algebra_table: AlgebraTable, degrees: dict[int, Sequence[str]],
                action_entries: dict[str, dict[int, Sequence[Sequence[int]]]],
                top: int | None = _UNBOUNDED) -> GradedF2Module:
    """Convenience constructor from dense 0/1 action matrices."""
    degs = {d: tuple(b) for d, b in degrees.items() if b}
    actions: dict[str, dict[int, F2Matrix]] = {}
    for gen, per_deg in action_entries.items():
        gd = algebra_table.degree_of(gen)
        actions[gen] = {}
        for d, rows in per_deg.items():
            m = F2Matrix.from_rows(rows, ncols=len(degs.get(d, ())))
            if m.nrows != len(degs.get(d + gd, ())):
                raise ValueError("action matrix shape mismatch")
            actions[gen][d] = m
    mod = GradedF2Module(algebra_table, degs, actions, top)
    problems = verify_module(mod)
    if problems:
        raise ValueError("module violates algebra relations: " + "; ".join(problems))
    return mod


def module_point(top: int | None = _UNBOUNDED) -> GradedF2Module:
    """One class in degree 0; all operations vanish."""
    a1 = algebra("A1")
    return GradedF2Module(a1, {0: ("pt",)}, {}, top)


def module_bow(top: int | None = _UNBOUNDED) -> GradedF2Module:
    """Classes w0 (degree 0), w2 (degree 2); Sq2 w0 = w2, Sq1 = 0."""
    a1 = algebra("A1")
    return make_module(
        a1,
        {0: ("w0",), 2: ("w2",)},
        {"Sq2": {0: [[1]]}},
        top,
    )


def module_sb(top: int | None = _UNBOUNDED) -> GradedF2Module:
    """d0; d20, d21; d4 with Sq2 d0 = d20 + d21 and Sq2 d2i = d4."""
    a1 = algebra("A1")
    return make_module(
        a1,
        {0: ("d0",), 2: ("d20", "d21"), 4: ("d4",)},
        {"Sq2": {0: [[1], [1]], 2: [[1, 1]]}},
        top,
    )


def verify_module(m: GradedF2Module) -> list[str]:
    """Check every defining relation of the algebra degreewise.

    Returns a list of human-readable violations; empty on success.
    """
    _, relations, _ = _PRESENTATIONS[m.algebra.name]
    problems = []
    degrees = sorted(m.degrees)
    for rel in relations:
        rdeg = sum(m.algebra.degree_of(g) for g in rel[0])
        for d in degrees:
            if m.top is not None and d + rdeg > m.top:
                continue
            if m.dim(d) == 0:
                continue
            total = F2Matrix.zeros(m.dim(d + rdeg), m.dim(d))
            for word in rel:
                comp = F2Matrix.identity(m.dim(d))
                cur = d
                for g in reversed(word):
                    comp = m.action(g, cur).mul(comp)
                    cur += m.algebra.degree_of(g)
                total = total.add(comp)
            if not total.is_zero():
                words = " + ".join("".join(w) for w in rel)
                problems.append(f"{words} != 0 on degree {d}")
    return problems


def suspend(m: GradedF2Module, k: int) -> GradedF2Module:
    """Degree shift: (suspend m)_n = m_(n-k)."""
    degs = {d + k: b for d, b in m.degrees.items()}
    actions = {g: {d + k: mat for d, mat in per.items()} for g, per in m.actions.items()}
    top = None if m.top is None else m.top + k
    return GradedF2Module(m.algebra, degs, actions, top)


def direct_sum(mods: Sequence[GradedF2Module]) -> GradedF2Module:
    """Blockwise sum; colliding labels get an @index suffix."""
    if not mods:
        raise ValueError("empty direct sum")
    alg = mods[0].algebra
    if any(m.algebra.name != alg.name for m in mods):
        raise ValueError("algebra mismatch in direct sum")
    all_degrees = sorted({d for m in mods for d in m.degrees})
    degs: dict[int, tuple[str, ...]] = {}
    for d in all_degrees:
        labels: list[str] = []
        seen: set[str] = set()
        for i, m in enumerate(mods):
            for lab in m.basis(d):
                name = lab if lab not in seen else f"{lab}@{i}"
                while name in seen:
                    name += "'"
                seen.add(name)
                labels.append(name)
        degs[d] = tuple(labels)
    actions: dict[str, dict[int, F2Matrix]] = {}
    for g in alg.generators:
        gd = alg.degree_of(g)
        actions[g] = {}
        for d in all_degrees:
            src = sum(m.dim(d) for m in mods)
            tgt = sum(m.dim(d + gd) for m in mods)
            if src == 0 or tgt == 0:
                continue
            rows = [0] * tgt
            roff = coff = 0
            for m in mods:
                mat = m.action(g, d)
                for i in range(mat.nrows):
                    rows[roff + i] |= mat.rows[i] << coff
                roff += m.dim(d + gd)
                coff += m.dim(d)
            actions[g][d] = F2Matrix(tgt, src, tuple(rows))
    tops = [m.top for m in mods]
    top = None if all(t is None for t in tops) else min(t for t in tops if t is not None)
    return GradedF2Module(alg, degs, actions, top)


_CARTAN = {
    # gen -> list of (left word, right word) in the coproduct expansion
    "Sq1": [(("Sq1",), ()), ((), ("Sq1",))],
    "Sq2": [(("Sq2",), ()), (("Sq1",), ("Sq1",)), ((), ("Sq2",))],
    "Q0": [(("Q0",), ()), ((), ("Q0",))],
    "Q1": [(("Q1",), ()), ((), ("Q1",))],
}


def _tensor_top(m: GradedF2Module, n: GradedF2Module) -> int | None:
    if m.top is None and n.top is None:
        return None
    if m.top is None:
        return n.top + m.min_degree()
    if n.top is None:
        return m.top + n.min_degree()
    return min(m.top + n.min_degree(), n.top + m.min_degree())


def tensor(m: GradedF2Module, n: GradedF2Module,
           label_fn=None) -> GradedF2Module:
    """Tensor product with the Cartan-formula action."""
    alg = m.algebra
    if alg.name != n.algebra.name:
        raise ValueError("algebra mismatch in tensor")
    if label_fn is None:
        label_fn = lambda a, b: f"{a}|{b}"
    top = _tensor_top(m, n)
    max_deg = top
    if max_deg is None:
        max_deg = max(m.support(), default=0) + max(n.support(), default=0)
    degs: dict[int, tuple[str, ...]] = {}
    index: dict[int, dict[tuple[int, int, int, int], int]] = {}
    for d in range(min([*m.support(), 0]) + min([*n.support(), 0]), max_deg + 1):
        labels = []
        idx = {}
        for d1 in m.support():
            d2 = d - d1
            for i, la in enumerate(m.basis(d1)):
                for j, lb in enumerate(n.basis(d2)):
                    idx[(d1, i, d2, j)] = len(labels)
                    labels.append(label_fn(la, lb))
        if labels:
            degs[d] = tuple(labels)
            index[d] = idx
    actions: dict[str, dict[int, F2Matrix]] = {}
    for g in alg.generators:
        gd = alg.degree_of(g)
        actions[g] = {}
        for d, idx in index.items():
            if d + gd not in index:
                if degs.get(d + gd):
                    raise AssertionError("missing target degree")
                continue
            tgt_idx = index[d + gd]
            rows = [0] * len(tgt_idx)
            for (d1, i, d2, j), col in idx.items():
                for lw, rw in _CARTAN[g]:
                    lv = 1 << i
                    cur = d1
                    for sym in reversed(lw):
                        lv = m.act_vector(sym, cur, lv)
                        cur += alg.degree_of(sym)
                    rv = 1 << j
                    cur2 = d2
                    for sym in reversed(rw):
                        rv = n.act_vector(sym, cur2, rv)
                        cur2 += alg.degree_of(sym)
                    lvv = lv
                    while lvv:
                        a = (lvv & -lvv).bit_length() - 1
                        lvv &= lvv - 1
                        rvv = rv
                        while rvv:
                            b = (rvv & -rvv).bit_length() - 1
                            rvv &= rvv - 1
                            rows[tgt_idx[(cur, a, cur2, b)]] ^= 1 << col
            actions[g][d] = F2Matrix(len(tgt_idx), len(idx), tuple(rows))
    return GradedF2Module(alg, degs, actions, top)


def restrict_to_E1(m: GradedF2Module) -> GradedF2Module:
    """View an A(1)-module over E(1): Q0 = Sq1, Q1 = Sq1 Sq2 + Sq2 Sq1."""
    if m.algebra.name != "A1":
        raise ValueError("restriction expects an A(1)-module")
    e1 = algebra("E1")
    actions: dict[str, dict[int, F2Matrix]] = {"Q0": {}, "Q1": {}}
    for d in m.degrees:
        if m.dim(d) == 0:
            continue
        if m.top is None or d + 1 <= m.top:
            actions["Q0"][d] = m.action("Sq1", d)
        if m.top is None or d + 3 <= m.top:
            q1 = m.action("Sq1", d + 2).mul(m.action("Sq2", d)).add(
                m.action("Sq2", d + 1).mul(m.action("Sq1", d)))
            actions["Q1"][d] = q1
    return GradedF2Module(e1, dict(m.degrees), actions, m.top)


# ---------------------------------------------------------------------------
# Serialization (line-based text)
# ---------------------------------------------------------------------------

def module_to_text(m: GradedF2Module) -> str:
    lines = [f"algebra {m.algebra.name}", f"top {'-' if m.top is None else m.top}"]
    for d in sorted(m.degrees):
        lines.append(f"degree {d}: " + " ".join(m.degrees[d]))
    for g in sorted(m.actions):
        for d in sorted(m.actions[g]):
            mat = m.actions[g][d]
            rows = ",".join(format(r, "x") for r in mat.rows) or "-"
            lines.append(f"action {g} {d} {mat.nrows}x{mat.ncols} {rows}")
    return "\n".join(lines) + "\n"


def module_from_text(text: str) -> GradedF2Module:
    alg = None
    top: int | None = None
    degrees: dict[int, tuple[str, ...]] = {}
    actions: dict[str, dict[int, F2Matrix]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("algebra "):
            alg = algebra(line.split()[1])
        elif line.startswith("top "):
            tok = line.split()[1]
            top = None if tok == "-" else int(tok)
        elif line.startswith("degree "):
            head, _, labels = line.partition(":")
            d = int(head.split()[1])
            degrees[d] = tuple(labels.split())
        elif line.startswith("action "):
            _, g, d, shape, rows = line.split()
            nrows, ncols = (int(x) for x in shape.split("x"))
            vals = () if rows == "-" else tuple(int(r, 16) for r in rows.split(","))
            actions.setdefault(g, {})[int(d)] = F2Matrix(nrows, ncols, vals)
    if alg is None:
        raise ValueError("missing algebra header")
    return GradedF2Module(alg, degrees, actions, top)
