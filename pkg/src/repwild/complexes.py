"""Bounded complexes of finitely generated projectives.

A map of left modules P_i -> P_j is right multiplication by an element of
e_i A e_j, so differential blocks are stored as algebra elements in basis
coordinates and compose through the algebra product.  Differentials lower
the degree: diff[d] maps the degree d+1 component to the degree d one.

Complexes are decomposed and compared by re-encoding them as modules over
the product of the algebra with the chain quiver (one vertex per (vertex,
degree) pair, differential arrows, commutation and d^2 relations); for
minimal complexes chain-level isomorphism and indecomposability agree with
the homotopy-category notions, which is what makes this sound.

Homotopy strings follow the same function-composition convention as
strings; the induced maps compose in the reverse order of the letters, so
a direct letter sends the slot at its target to the slot at its source.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fields import FpMatrix
from .quiver import BoundQuiver, BoundQuiverAlgebra, PathWord, Quiver, Relation
from .reps import Representation, decompose, is_isomorphic

Element = np.ndarray  # algebra element in basis coordinates


class ProjComplex:
    """A bounded complex of direct sums of indecomposable projectives.

    components[d] lists the projective's vertex for every block in degree
    d; diffs[d][i][j] is the algebra element giving the component map from
    block j in degree d+1 to block i in degree d (an element of
    e_{v_j} A e_{u_i}).
    """

    def __init__(
        self,
        algebra: BoundQuiverAlgebra,
        lo: int,
        components: Dict[int, List[int]],
        diffs: Dict[int, list],
        check: bool = True,
    ):
        self.algebra = algebra
        degrees = sorted(components)
        if not degrees:
            degrees = [lo]
            components = {lo: []}
        self.lo = degrees[0]
        self.hi = degrees[-1]
        self.components = {
            d: list(components.get(d, [])) for d in range(self.lo, self.hi + 1)
        }
        self.diffs = {}
        for d in range(self.lo, self.hi):
            tgt = self.components[d]
            src = self.components[d + 1]
            blocks = diffs.get(d)
            if blocks is None:
                blocks = [[algebra.zero() for _ in src] for _ in tgt]
            if len(blocks) != len(tgt) or any(len(r) != len(src) for r in blocks):
                raise ValueError(f"differential at degree {d} has wrong block shape")
            self.diffs[d] = [[np.asarray(e) % algebra.field.p for e in row] for row in blocks]
        if check:
            self._check_blocks()
            defect = self.d_squared_defect()
            if defect is not None:
                raise ValueError(f"d^2 != 0 at degree {defect}")

    def _check_blocks(self):
        alg = self.algebra
        for d in range(self.lo, self.hi):
            tgt = self.components[d]
            src = self.components[d + 1]
            for i, u in enumerate(tgt):
                for j, v in enumerate(src):
                    e = self.diffs[d][i][j]
                    # entry must live in the (u -> v) path block
                    for g in np.nonzero(e)[0]:
                        q = alg.basis[int(g)]
                        if q.source != u or q.target != v:
                            raise ValueError(
                                f"differential entry at degree {d} block ({i},{j}) "
                                f"is not in e_{v} A e_{u}"
                            )

    def d_squared_defect(self) -> Optional[int]:
        alg = self.algebra
        for d in range(self.lo, self.hi - 1):
            D1 = self.diffs[d + 1]  # C_{d+2} -> C_{d+1}
            D0 = self.diffs[d]  # C_{d+1} -> C_d
            for i in range(len(self.components[d])):
                for k in range(len(self.components[d + 2])):
                    acc = alg.zero()
                    for j in range(len(self.components[d + 1])):
                        acc = (acc + alg.multiply(D1[j][k], D0[i][j])) % alg.field.p
                    if acc.any():
                        return d
        return None

    def is_minimal(self) -> bool:
        """True iff every differential entry lies in the radical."""
        for d in range(self.lo, self.hi):
            for row in self.diffs[d]:
                for e in row:
                    if not self.algebra.is_radical(e):
                        return False
        return True

    def shift(self, k: int) -> "ProjComplex":
        comps = {d + k: list(v) for d, v in self.components.items()}
        diffs = {d + k: v for d, v in self.diffs.items()}
        return ProjComplex(self.algebra, self.lo + k, comps, diffs, check=False)

    def pad(self, lo: int, hi: int) -> "ProjComplex":
        if lo > self.lo or hi < self.hi:
            raise ValueError("padding must extend the range")
        comps = {d: list(self.components.get(d, [])) for d in range(lo, hi + 1)}
        return ProjComplex(self.algebra, lo, comps, dict(self.diffs), check=False)

    def total_blocks(self) -> int:
        return sum(len(v) for v in self.components.values())

    def multiplicity_vector(self, d: int) -> List[int]:
        out = [0] * self.algebra.vertex_count
        for v in self.components.get(d, []):
            out[v] += 1
        return out

    def __repr__(self):
        rng = ", ".join(
            f"{d}:{self.components[d]}" for d in range(self.lo, self.hi + 1)
        )
        return f"ProjComplex({rng})"


def direct_sum_complex(cx: ProjComplex, cy: ProjComplex) -> ProjComplex:
    alg = cx.algebra
    lo = min(cx.lo, cy.lo)
    hi = max(cx.hi, cy.hi)
    cx = cx.pad(lo, hi)
    cy = cy.pad(lo, hi)
    comps = {d: cx.components[d] + cy.components[d] for d in range(lo, hi + 1)}
    diffs = {}
    for d in range(lo, hi):
        nx_t, ny_t = len(cx.components[d]), len(cy.components[d])
        nx_s, ny_s = len(cx.components[d + 1]), len(cy.components[d + 1])
        rows = []
        for i in range(nx_t + ny_t):
            row = []
            for j in range(nx_s + ny_s):
                if i < nx_t and j < nx_s:
                    row.append(cx.diffs[d][i][j])
                elif i >= nx_t and j >= nx_s:
                    row.append(cy.diffs[d][i - nx_t][j - nx_s])
                else:
                    row.append(alg.zero())
            rows.append(row)
        diffs[d] = rows
    return ProjComplex(alg, lo, comps, diffs, check=False)


# ---------------------------------------------------------------------------
# the tensor (algebra x chain quiver) encoding
# ---------------------------------------------------------------------------


@dataclass
class TensorLayout:
    bound_quiver: BoundQuiver
    lo: int
    hi: int
    base_vertex_count: int
    # (degree, block index) -> (product vertex per base vertex is implicit);
    # slices[d][k] = per-base-vertex (offset, size) ranges of block k
    slices: Dict[int, List[Dict[int, Tuple[int, int]]]]

    def vertex(self, base_vertex: int, degree: int) -> int:
        return (degree - self.lo) * self.base_vertex_count + base_vertex


def _product_bound_quiver(alg: BoundQuiverAlgebra, lo: int, hi: int) -> BoundQuiver:
    nv = alg.vertex_count
    degs = range(lo, hi + 1)
    arrows = []
    for d in degs:
        for a in alg.quiver.arrows:
            arrows.append((f"{a.name}@{d}", (d - lo) * nv + a.src, (d - lo) * nv + a.tgt))
    for d in range(lo, hi):
        for v in range(nv):
            arrows.append((f"d{v}@{d}", (d - lo + 1) * nv + v, (d - lo) * nv + v))
    quiver = Quiver((hi - lo + 1) * nv, arrows)
    rels = []
    p = alg.field.p
    w = lambda names: PathWord.from_names(quiver, names)
    for d in degs:
        for rel in alg.relations:
            terms = []
            for c, q in rel:
                names = [f"{alg.quiver.arrows[ai].name}@{d}" for ai in reversed(q.arrows)]
                terms.append((c, w(names)))
            rels.append(Relation(terms, p))
    for d in range(lo, hi - 1):
        for v in range(nv):
            rels.append(Relation([(1, w([f"d{v}@{d}", f"d{v}@{d+1}"]))], p))
    for d in range(lo, hi):
        for a in alg.quiver.arrows:
            rels.append(
                Relation(
                    [
                        (1, w([f"d{a.tgt}@{d}", f"{a.name}@{d+1}"])),
                        (-1, w([f"{a.name}@{d}", f"d{a.src}@{d}"])),
                    ],
                    p,
                )
            )
    return BoundQuiver(quiver, rels, alg.field)


def to_representation_of_tensor(cx: ProjComplex) -> Tuple[Representation, TensorLayout]:
    """Encode the complex as a representation of the product bound quiver."""
    alg = cx.algebra
    nv = alg.vertex_count
    lo, hi = cx.lo, cx.hi
    bq = _product_bound_quiver(alg, lo, hi)
    # space at (v, d) = direct sum over blocks of (P_comp)_v
    dims = [0] * bq.vertex_count
    slices: Dict[int, List[Dict[int, Tuple[int, int]]]] = {}
    for d in range(lo, hi + 1):
        slices[d] = []
        for comp in cx.components[d]:
            entry = {}
            for v in range(nv):
                size = len(alg.blocks.get((comp, v), []))
                idx = (d - lo) * nv + v
                entry[v] = (dims[idx], size)
                dims[idx] += size
            slices[d].append(entry)
    field = alg.field
    maps = {}
    # algebra arrows act blockwise by the projective structure
    R = alg.left_mult_matrices()
    # positions of global basis indices inside their block
    pos_in_block = {}
    for key, idxs in alg.blocks.items():
        for k, g in enumerate(idxs):
            pos_in_block[g] = k
    for d in range(lo, hi + 1):
        for a in alg.quiver.arrows:
            ai = alg.quiver.index[a.name]
            m = np.zeros(
                (dims[(d - lo) * nv + a.tgt], dims[(d - lo) * nv + a.src]), dtype=np.int64
            )
            for k, comp in enumerate(cx.components[d]):
                off_s, size_s = slices[d][k][a.src]
                off_t, _ = slices[d][k][a.tgt]
                for col, g in enumerate(alg.blocks.get((comp, a.src), [])):
                    vec = R[ai][:, g]
                    for gg in np.nonzero(vec)[0]:
                        m[off_t + pos_in_block[int(gg)], off_s + col] = vec[gg]
            maps[f"{a.name}@{d}"] = FpMatrix(field, m)
    # differential arrows act by right multiplication with the entries
    for d in range(lo, hi):
        for v in range(nv):
            m = np.zeros(
                (dims[(d - lo) * nv + v], dims[(d - lo + 1) * nv + v]), dtype=np.int64
            )
            for i, tgt_comp in enumerate(cx.components[d]):
                for j, src_comp in enumerate(cx.components[d + 1]):
                    e = cx.diffs[d][i][j]
                    if not e.any():
                        continue
                    off_s, _ = slices[d + 1][j][v]
                    off_t, _ = slices[d][i][v]
                    for col, g in enumerate(alg.blocks.get((src_comp, v), [])):
                        q = alg.basis[g]
                        prod = alg.multiply(alg.path_vector(q), e)
                        for gg in np.nonzero(prod)[0]:
                            m[off_t + pos_in_block[int(gg)], off_s + col] = prod[gg]
            maps[f"d{v}@{d}"] = FpMatrix(field, m)
    rep = Representation(bq, dims, maps)
    layout = TensorLayout(bq, lo, hi, nv, slices)
    return rep, layout


def complex_from_tensor(rep: Representation, layout: TensorLayout, alg: BoundQuiverAlgebra,
                        components: Dict[int, List[int]]) -> ProjComplex:
    """Reconstruct the block differentials from a tensor representation.

    Round-trip helper: the representation must have come from a complex
    with the given layout and components.
    """
    lo, hi = layout.lo, layout.hi
    diffs = {}
    from .fields import solve

    for d in range(lo, hi):
        rows = []
        for i, tgt_comp in enumerate(components[d]):
            row = []
            for j, src_comp in enumerate(components[d + 1]):
                # the entry is determined by the image of the trivial path
                # e_{src_comp}, read off at base vertex src_comp
                v = src_comp
                m = rep.maps[f"d{v}@{d}"]
                off_s, size_s = layout.slices[d + 1][j][v]
                off_t, size_t = layout.slices[d][i][v]
                e = alg.zero()
                if size_s:
                    col_of_triv = alg.blocks[(src_comp, v)].index(
                        alg.trivial_indices[src_comp]
                    )
                    col = m.a[off_t : off_t + size_t, off_s + col_of_triv]
                    for k, g in enumerate(alg.blocks.get((tgt_comp, v), [])):
                        e[g] = col[k]
                row.append(e)
            rows.append(row)
        diffs[d] = rows
    return ProjComplex(alg, lo, {d: components[d] for d in range(lo, hi + 1)}, diffs)


def cohomology_dims(cx: ProjComplex) -> Dict[int, List[int]]:
    """dim ker - dim im of the realized differentials, per degree and vertex."""
    from .fields import kernel_basis, rank

    rep, layout = to_representation_of_tensor(cx)
    nv = cx.algebra.vertex_count
    out = {}
    for d in range(cx.lo, cx.hi + 1):
        row = []
        for v in range(nv):
            dim_here = rep.dims[layout.vertex(v, d)]
            if d > cx.lo:
                mout = rep.maps[f"d{v}@{d-1}"]
                ker = mout.cols - rank(mout)
            else:
                ker = dim_here
            im = rank(rep.maps[f"d{v}@{d}"]) if d < cx.hi else 0
            row.append(ker - im)
        out[d] = row
    return out


def _require_minimal(cx: ProjComplex):
    if not cx.is_minimal():
        raise ValueError("complex is not minimal")


def decompose_complex(cx: ProjComplex):
    """Krull-Schmidt decomposition of a minimal complex (chain level)."""
    _require_minimal(cx)
    rep, _ = to_representation_of_tensor(cx)
    return decompose(rep)


def is_isomorphic_complex(cx: ProjComplex, cy: ProjComplex) -> bool:
    """Chain-level (= homotopy-level, by minimality) isomorphism."""
    _require_minimal(cx)
    _require_minimal(cy)
    if cx.algebra is not cy.algebra:
        raise ValueError("complexes over different algebras")
    lo = min(cx.lo, cy.lo)
    hi = max(cx.hi, cy.hi)
    rx, _ = to_representation_of_tensor(cx.pad(lo, hi))
    ry, _ = to_representation_of_tensor(cy.pad(lo, hi))
    return is_isomorphic(rx, ry)


def chain_hom_dim(cx: ProjComplex, cy: ProjComplex) -> int:
    """Dimension of the space of chain maps, computed by block linear algebra.

    Independent of the tensor encoding; used to cross-check it.
    """
    alg = cx.algebra
    p = alg.field.p
    lo = min(cx.lo, cy.lo)
    hi = max(cx.hi, cy.hi)
    cx = cx.pad(lo, hi)
    cy = cy.pad(lo, hi)
    # unknowns: per degree d, block entries f_d[i][j] in e_{v_j} A e_{w_i},
    # where v_j runs over cx components and w_i over cy components
    unknowns = []  # (degree, i, j, basis-global-index)
    index = {}
    for d in range(lo, hi + 1):
        for i, w_i in enumerate(cy.components[d]):
            for j, v_j in enumerate(cx.components[d]):
                for g in alg.blocks.get((w_i, v_j), []):
                    index[(d, i, j, g)] = len(unknowns)
                    unknowns.append((d, i, j, g))
    if not unknowns:
        return 0
    rows = []
    # condition: f_d . d^cx_d = d^cy_d . f_{d+1}   (maps C^cx_{d+1} -> C^cy_d)
    for d in range(lo, hi):
        for i in range(len(cy.components[d])):
            for k in range(len(cx.components[d + 1])):
                # row entries over unknowns; each term is an algebra element
                acc: Dict[int, np.ndarray] = {}
                for j in range(len(cx.components[d])):
                    dvec = cx.diffs[d][j][k]
                    for g in alg.blocks.get((cy.components[d][i], cx.components[d][j]), []):
                        basis_vec = alg.zero()
                        basis_vec[g] = 1
                        prod = alg.multiply(dvec, basis_vec)
                        if prod.any():
                            uidx = index[(d, i, j, g)]
                            acc[uidx] = (acc.get(uidx, alg.zero()) + prod) % p
                for j in range(len(cy.components[d + 1])):
                    dvec = cy.diffs[d][i][j]
                    for g in alg.blocks.get(
                        (cy.components[d + 1][j], cx.components[d + 1][k]), []
                    ):
                        basis_vec = alg.zero()
                        basis_vec[g] = 1
                        prod = alg.multiply(basis_vec, dvec)
                        if prod.any():
                            uidx = index[(d + 1, j, k, g)]
                            acc[uidx] = (acc.get(uidx, alg.zero()) - prod) % p
                if acc:
                    for coord in range(alg.dim):
                        row = np.zeros(len(unknowns), dtype=np.int64)
                        nonzero = False
                        for uidx, vec in acc.items():
                            if vec[coord]:
                                row[uidx] = vec[coord]
                                nonzero = True
                        if nonzero:
                            rows.append(row)
    if not rows:
        return len(unknowns)
    mat = FpMatrix(alg.field, np.array(rows, dtype=np.int64))
    from .fields import rank as _rank

    return len(unknowns) - _rank(mat)


# ---------------------------------------------------------------------------
# homotopy strings for gentle algebras
# ---------------------------------------------------------------------------

HLetter = Tuple[PathWord, bool]  # (nonzero path, is_inverse)


@dataclass(frozen=True)
class HomotopyString:
    """Letters in application order; trivial string at a vertex if empty."""

    source: int
    target: int
    letters: Tuple[HLetter, ...] = ()

    @staticmethod
    def trivial(vertex: int) -> "HomotopyString":
        return HomotopyString(vertex, vertex, ())

    @property
    def num_letters(self) -> int:
        return len(self.letters)

    def inverse(self) -> "HomotopyString":
        return HomotopyString(
            self.target,
            self.source,
            tuple((q, not inv) for q, inv in reversed(self.letters)),
        )

    def key(self):
        written = tuple(
            (tuple(reversed(q.arrows)), inv) for q, inv in reversed(self.letters)
        )
        return (len(self.letters), written, self.source)

    def canonical(self) -> "HomotopyString":
        inv = self.inverse()
        return self if self.key() <= inv.key() else inv

    def to_text(self, quiver: Quiver) -> str:
        if not self.letters:
            return f"(e{self.source})"
        parts = []
        for q, inv in reversed(self.letters):
            body = "·".join(q.word_names(quiver))
            parts.append(f"({body})" + ("~" if inv else ""))
        return "".join(parts)


def homotopy_string_from_text(alg: BoundQuiverAlgebra, text: str) -> HomotopyString:
    import re

    toks = re.findall(r"\(([^)]*)\)(~?)", text.strip())
    if not toks:
        raise ValueError(f"cannot parse homotopy string {text!r}")
    if len(toks) == 1 and toks[0][0].startswith("e") and toks[0][0][1:].isdigit():
        return HomotopyString.trivial(int(toks[0][0][1:]))
    letters = []
    for body, inv in reversed(toks):
        q = PathWord.from_names(alg.quiver, body.split("·"))
        letters.append((q, inv == "~"))
    src = _hletter_source(letters[0])
    tgt = _hletter_target(letters[-1])
    return HomotopyString(src, tgt, tuple(letters))


def _hletter_source(letter: HLetter) -> int:
    q, inv = letter
    return q.target if inv else q.source


def _hletter_target(letter: HLetter) -> int:
    q, inv = letter
    return q.source if inv else q.target


def _valid_adjacent(alg: BoundQuiverAlgebra, x: HLetter, y: HLetter) -> bool:
    """Can letter y follow letter x (y = next letter after x in the walk)?"""
    qx, ix = x
    qy, iy = y
    if _hletter_source(y) != _hletter_target(x):
        return False
    if qx == qy and ix != iy:
        return False  # reduced
    if not ix and not iy:
        # both direct: the composite must fall in the ideal
        return not alg.multiply(alg.path_vector(qy), alg.path_vector(qx)).any()
    if ix and iy:
        return not alg.multiply(alg.path_vector(qx), alg.path_vector(qy)).any()
    if not ix and iy:
        # peak: target-adjacent arrows must differ
        return qx.arrows[-1] != qy.arrows[-1]
    # valley: source-adjacent arrows must differ
    return qx.arrows[0] != qy.arrows[0]


@dataclass
class HomotopyStringEnumeration:
    strings: List[HomotopyString]
    bands: List[HomotopyString]


def enumerate_homotopy_strings(
    alg: BoundQuiverAlgebra, max_letters: int
) -> HomotopyStringEnumeration:
    """Canonical homotopy strings (up to inverse) and homotopy bands."""
    from .strings import classify_type

    if classify_type(alg) != "gentle":
        raise ValueError("homotopy strings require a gentle algebra")
    letters = []
    for q in alg.basis:
        if q.length >= 1:
            letters.append((q, False))
            letters.append((q, True))
    partial = [
        HomotopyString(_hletter_source(l), _hletter_target(l), (l,)) for l in letters
    ]
    strings = {}
    for v in range(alg.vertex_count):
        t = HomotopyString.trivial(v)
        strings[t.canonical().key()] = t.canonical()
    bands = {}
    frontier = partial
    for w in frontier:
        c = w.canonical()
        strings[c.key()] = c
    for _ in range(max_letters - 1):
        nxt = []
        for w in frontier:
            for l in letters:
                if _valid_adjacent(alg, w.letters[-1], l):
                    ext = HomotopyString(w.source, _hletter_target(l), w.letters + (l,))
                    nxt.append(ext)
                    c = ext.canonical()
                    strings[c.key()] = c
        frontier = nxt
    # homotopy bands: cyclic, valid at the wrap, balanced directions, primitive
    for key, w in list(strings.items()):
        n = w.num_letters
        if n == 0 or w.source != w.target:
            continue
        if not _valid_adjacent(alg, w.letters[-1], w.letters[0]):
            continue
        ndir = sum(1 for _, inv in w.letters if not inv)
        if ndir * 2 != n:
            continue
        primitive = True
        for dd in range(1, n):
            if n % dd == 0 and w.letters == w.letters[:dd] * (n // dd):
                primitive = False
                break
        if not primitive:
            continue
        # canonical up to rotation and inverse
        cands = []
        for k in range(n):
            rot = w.letters[k:] + w.letters[:k]
            src = _hletter_source(rot[0])
            ww = HomotopyString(src, src, rot)
            cands.append(ww.key())
            cands.append(ww.inverse().key())
        bands[min(cands)] = w
    ordered = sorted(strings.values(), key=lambda w: w.key())
    return HomotopyStringEnumeration(ordered, [bands[k] for k in sorted(bands)])


def string_complex(alg: BoundQuiverAlgebra, hs: HomotopyString) -> ProjComplex:
    """The minimal complex attached to a homotopy string.

    Walking the written word left to right, the degree drops by one along a
    direct letter and rises along an inverse one; the leftmost endpoint is
    anchored at degree 0.  A direct letter q contributes right
    multiplication P_{t(q)} -> P_{s(q)}.
    """
    if hs.num_letters == 0:
        return ProjComplex(alg, 0, {0: [hs.source]}, {})
    r = hs.num_letters
    deg = [0] * (r + 1)  # degree of slot z_i; z_r is the leftmost endpoint
    vert = [0] * (r + 1)
    deg[r] = 0
    # walk downward from z_r to z_0 assigning degrees
    for i in range(r, 0, -1):
        q, inv = hs.letters[i - 1]
        if not inv:
            deg[i - 1] = deg[i] - 1
            vert[i] = q.target
            vert[i - 1] = q.source
        else:
            deg[i - 1] = deg[i] + 1
            vert[i - 1] = q.target
            vert[i] = q.source
    lo = min(deg)
    hi = max(deg)
    components: Dict[int, List[int]] = {d: [] for d in range(lo, hi + 1)}
    slot_block = {}
    for i in range(r + 1):
        slot_block[i] = len(components[deg[i]])
        components[deg[i]].append(vert[i])
    diffs = {
        d: [
            [alg.zero() for _ in components[d + 1]] for _ in components[d]
        ]
        for d in range(lo, hi)
    }
    for i in range(1, r + 1):
        q, inv = hs.letters[i - 1]
        vec = alg.path_vector(q)
        if not inv:
            # map z_i -> z_{i-1}
            d = deg[i - 1]
            diffs[d][slot_block[i - 1]][slot_block[i]] = vec
        else:
            # map z_{i-1} -> z_i
            d = deg[i]
            diffs[d][slot_block[i]][slot_block[i - 1]] = vec
    cx = ProjComplex(alg, lo, components, diffs)
    if not cx.is_minimal():
        raise AssertionError("string complex failed minimality")
    return cx


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def _element_to_json(alg: BoundQuiverAlgebra, e: Element):
    terms = []
    for g in np.nonzero(e)[0]:
        q = alg.basis[int(g)]
        term = {"coef": int(e[g])}
        if q.length == 0:
            term["e"] = q.source
        else:
            term["path"] = q.word_names(alg.quiver)
        terms.append(term)
    return terms


def _element_from_json(alg: BoundQuiverAlgebra, terms) -> Element:
    from .quiver import path_from_json

    return alg.element([(t.get("coef", 1), path_from_json(alg.quiver, t)) for t in terms])


def complex_to_json(cx: ProjComplex) -> dict:
    # canonical export order: blocks sorted by vertex within each degree
    perms = {}
    for d in range(cx.lo, cx.hi + 1):
        order = sorted(range(len(cx.components[d])), key=lambda k: cx.components[d][k])
        perms[d] = order
    mult = [
        [sorted(cx.components[d]).count(v) for v in range(cx.algebra.vertex_count)]
        for d in range(cx.lo, cx.hi + 1)
    ]
    diffs = []
    for d in range(cx.lo, cx.hi):
        rows = []
        for i in perms[d]:
            rows.append(
                [
                    _element_to_json(cx.algebra, cx.diffs[d][i][j])
                    for j in perms[d + 1]
                ]
            )
        diffs.append({"deg": d, "blocks": rows})
    return {"degrees": [cx.lo, cx.hi], "mult": mult, "diff": diffs}


def complex_from_json(alg: BoundQuiverAlgebra, data) -> ProjComplex:
    import json as _json

    if isinstance(data, str):
        data = _json.loads(data)
    lo, hi = data["degrees"]
    comps = {}
    for k, row in enumerate(data["mult"]):
        comp = []
        for v, m in enumerate(row):
            comp.extend([v] * m)
        comps[lo + k] = comp
    diffs = {}
    for dd in data.get("diff", []):
        d = dd["deg"]
        diffs[d] = [
            [_element_from_json(alg, cell) for cell in row] for row in dd["blocks"]
        ]
    return ProjComplex(alg, lo, comps, diffs)
