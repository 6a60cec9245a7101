"""Bound quivers and admissible path algebras with computed path bases.

Paths compose like functions: in a written word a1 a2 ... an the rightmost
arrow is applied first, and s(a_j) = t(a_{j+1}).  Internally a PathWord
stores its arrows in application order (index 0 applied first), so the
written word is the reversed name sequence.

The path basis of an algebra is computed by linear algebra on each
(source, target) block of the span of paths up to a length cap L: the
two-sided ideal generated by the relations is materialized as every
product u * r * w whose terms fit inside the cap, and row reduction picks
basis representatives.  Construction fails loudly if some path of length L
does not reduce to strictly shorter basis paths ("not saturated at L").
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .fields import FpMatrix, PrimeField, _rref_array


class NotSaturatedError(ValueError):
    """The length cap L was too small to exhibit ideal saturation."""


@dataclass(frozen=True)
class Arrow:
    name: str
    src: int
    tgt: int


class Quiver:
    """A finite directed multigraph with named arrows."""

    def __init__(self, vertex_count: int, arrows: Sequence[tuple]):
        self.vertex_count = int(vertex_count)
        self.arrows = tuple(
            a if isinstance(a, Arrow) else Arrow(a[0], int(a[1]), int(a[2])) for a in arrows
        )
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        for a in self.arrows:
            if not (0 <= a.src < self.vertex_count and 0 <= a.tgt < self.vertex_count):
                raise ValueError(f"arrow {a.name} endpoints out of range")
        self.index = {a.name: i for i, a in enumerate(self.arrows)}
        self.out_of = [[] for _ in range(self.vertex_count)]
        self.into = [[] for _ in range(self.vertex_count)]
        for i, a in enumerate(self.arrows):
            self.out_of[a.src].append(i)
            self.into[a.tgt].append(i)

    def arrow(self, name: str) -> Arrow:
        return self.arrows[self.index[name]]

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and other.vertex_count == self.vertex_count
            and other.arrows == self.arrows
        )

    def __hash__(self):
        return hash((self.vertex_count, self.arrows))


@dataclass(frozen=True)
class PathWord:
    """A path: trivial at a vertex, or a nonempty composable arrow sequence.

    `arrows` holds arrow indices in application order; for the trivial path
    it is empty and source == target.
    """

    source: int
    target: int
    arrows: tuple = ()

    @staticmethod
    def trivial(vertex: int) -> "PathWord":
        return PathWord(vertex, vertex, ())

    @staticmethod
    def from_names(quiver: Quiver, names: Sequence[str]) -> "PathWord":
        """Build from a written word (leftmost name applied last)."""
        idx = [quiver.index[n] for n in reversed(names)]
        if not idx:
            raise ValueError("empty name list; use PathWord.trivial")
        for a, b in zip(idx, idx[1:]):
            if quiver.arrows[a].tgt != quiver.arrows[b].src:
                raise ValueError(f"non-composable word {list(names)}")
        return PathWord(quiver.arrows[idx[0]].src, quiver.arrows[idx[-1]].tgt, tuple(idx))

    @property
    def length(self) -> int:
        return len(self.arrows)

    def compose(self, other: "PathWord", quiver: Quiver) -> "PathWord":
        """self after other (function composition)."""
        if other.target != self.source:
            raise ValueError("paths not composable")
        return PathWord(other.source, self.target, other.arrows + self.arrows)

    def word_names(self, quiver: Quiver):
        return [quiver.arrows[i].name for i in reversed(self.arrows)]

    def display(self, quiver: Quiver) -> str:
        if not self.arrows:
            return f"e_{self.source}"
        return "".join(self.word_names(quiver))


class Relation:
    """A homogeneous linear combination of paths of length >= 2."""

    def __init__(self, terms: Sequence[tuple], p: int):
        terms = [(int(c) % p, w) for c, w in terms]
        terms = [(c, w) for c, w in terms if c != 0]
        if not terms:
            raise ValueError("relation has no nonzero terms")
        src = terms[0][1].source
        tgt = terms[0][1].target
        for c, w in terms:
            if w.source != src or w.target != tgt:
                raise ValueError("relation terms must share source and target")
            if w.length < 2:
                raise ValueError("relation terms must have length >= 2 (admissibility)")
        self.terms = tuple(terms)
        self.source = src
        self.target = tgt

    def max_length(self) -> int:
        return max(w.length for _, w in self.terms)

    def min_length(self) -> int:
        return min(w.length for _, w in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __iter__(self):
        return iter(self.terms)


class BoundQuiver:
    """A quiver with relations over F_p, without a computed basis.

    Sufficient for representation-theoretic work (validation, Hom spaces,
    decomposition); BoundQuiverAlgebra extends this with the path basis.
    """

    def __init__(self, quiver: Quiver, relations: Sequence[Relation], field: PrimeField):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.field = field

    @property
    def vertex_count(self):
        return self.quiver.vertex_count


def _path_key(path: PathWord):
    # written-word lex key; arrow order = declaration order
    return (path.length, tuple(reversed(path.arrows)))


class BoundQuiverAlgebra(BoundQuiver):
    """Admissible path algebra kQ/(rho) with an explicit path basis.

    Attributes:
        cap: the length cap L used for the ideal truncation.
        basis: global list of PathWord basis representatives, grouped by
            (source, target) block and ordered by (length, word lex).
        blocks: dict (src, tgt) -> list of global basis indices.
    """

    def __init__(self, quiver, relations, field: PrimeField, cap: int):
        super().__init__(quiver, relations, field)
        if cap < 2:
            raise ValueError("length cap must be >= 2")
        for r in self.relations:
            if r.max_length() > cap:
                raise NotSaturatedError(
                    f"relation of length {r.max_length()} exceeds cap {cap}"
                )
        self.cap = cap
        self._build()
        self._left_mult = None
        self._struct = {}

    # -- construction ------------------------------------------------------

    def _monomials(self):
        return [rel.terms[0][1].arrows for rel in self.relations if rel.is_monomial()]

    def _contains_monomial(self, arrows) -> bool:
        for m in self._monomials():
            L = len(m)
            for i in range(len(arrows) - L + 1):
                if arrows[i : i + L] == m:
                    return True
        return False

    def _all_paths(self):
        """Paths up to the cap, pruning any containing a monomial relation.

        A pruned path lies in the ideal outright, so treating it as zero is
        sound; this keeps the column count manageable for long caps.
        """
        monomials = self._monomials()

        def pruned(arrows):
            for m in monomials:
                L = len(m)
                if len(arrows) >= L and arrows[-L:] == m:
                    return True
            return False

        paths = [[PathWord.trivial(v) for v in range(self.vertex_count)]]
        for _ in range(self.cap):
            nxt = []
            for q in paths[-1]:
                for ai in self.quiver.out_of[q.target]:
                    a = self.quiver.arrows[ai]
                    arrows = q.arrows + (ai,)
                    if pruned(arrows):
                        continue
                    nxt.append(PathWord(q.source, a.tgt, arrows))
            paths.append(nxt)
            if sum(len(layer) for layer in paths) > 500_000:
                raise MemoryError("path enumeration exploded; lower the cap")
        return [q for layer in paths for q in layer]

    def _ideal_rows(self, by_block):
        p = self.field.p
        # paths indexed by endpoint for pre/post composition
        by_target = {}
        by_source = {}
        for q in self._paths:
            by_target.setdefault(q.target, []).append(q)
            by_source.setdefault(q.source, []).append(q)
        rows = {key: [] for key in by_block}
        seen = {key: set() for key in by_block}
        for rel in self.relations:
            m = rel.min_length()
            for u in by_source.get(rel.target, []):
                for w in by_target.get(rel.source, []):
                    if u.length + w.length + m > self.cap:
                        continue
                    key = (w.source, u.target)
                    row = np.zeros(len(by_block[key]), dtype=np.int64)
                    col_of = self._col_index[key]
                    usable = True
                    for c, q in rel:
                        arrows = w.arrows + q.arrows + u.arrows
                        if self._contains_monomial(arrows):
                            continue  # that term is zero by a monomial relation
                        if u.length + q.length + w.length > self.cap:
                            usable = False  # an honest term escapes the window
                            break
                        full = PathWord(w.source, u.target, arrows)
                        row[col_of[full]] = (row[col_of[full]] + c) % p
                    if usable and row.any():
                        b = row.tobytes()
                        if b not in seen[key]:
                            seen[key].add(b)
                            rows[key].append(row)
        return rows

    def _build(self):
        p = self.field.p
        self._paths = self._all_paths()
        by_block = {}
        for q in self._paths:
            by_block.setdefault((q.source, q.target), []).append(q)
        # column order: longest / lex-largest first so that reduction keeps
        # the lexicographically smallest representatives
        for key in by_block:
            by_block[key].sort(key=_path_key, reverse=True)
        self._col_index = {
            key: {q: i for i, q in enumerate(cols)} for key, cols in by_block.items()
        }
        rows = self._ideal_rows(by_block)

        self.basis = []
        self.blocks = {}
        self._expansion = {}
        basis_per_block = {}
        for key in sorted(by_block):
            cols = by_block[key]
            mat = np.array(rows[key], dtype=np.int64) if rows[key] else np.zeros(
                (0, len(cols)), dtype=np.int64
            )
            red, pivots = _rref_array(mat, p)
            pivot_set = set(pivots)
            keep = [i for i in range(len(cols)) if i not in pivot_set]
            for i in keep:
                if cols[i].length >= self.cap:
                    raise NotSaturatedError(
                        f"path {cols[i].display(self.quiver)} of length {cols[i].length} "
                        f"does not reduce at cap {self.cap}"
                    )
            basis_per_block[key] = keep
        # global numbering: blocks in sorted order, shortest/lex-smallest first
        for key in sorted(by_block):
            cols = by_block[key]
            keep = sorted(basis_per_block[key], key=lambda i: _path_key(cols[i]))
            idxs = []
            for i in keep:
                idxs.append(len(self.basis))
                self.basis.append(cols[i])
            self.blocks[key] = idxs
        self.dim = len(self.basis)
        self._basis_index = {q: i for i, q in enumerate(self.basis)}

        # expansion of every enumerated path in basis coordinates
        for key in sorted(by_block):
            cols = by_block[key]
            mat = np.array(rows[key], dtype=np.int64) if rows[key] else np.zeros(
                (0, len(cols)), dtype=np.int64
            )
            red, pivots = _rref_array(mat, p)
            for q in cols:
                vec = np.zeros(self.dim, dtype=np.int64)
                if q in self._basis_index:
                    vec[self._basis_index[q]] = 1
                self._expansion[q] = vec
            for r, piv in enumerate(pivots):
                vec = np.zeros(self.dim, dtype=np.int64)
                for j in range(piv + 1, len(cols)):
                    c = red[r, j]
                    if c and cols[j] in self._basis_index:
                        vec[self._basis_index[cols[j]]] = (-c) % p
                self._expansion[cols[piv]] = vec
        # pivot expansions may reference other pivots only transitively via
        # non-pivot columns, so the vectors above are already final.
        self.trivial_indices = [self._basis_index[PathWord.trivial(v)] for v in range(self.vertex_count)]
        del self._paths
        self._check_relations()

    def _check_relations(self):
        for rel in self.relations:
            acc = np.zeros(self.dim, dtype=np.int64)
            for c, q in rel:
                acc = (acc + c * self.path_vector(q)) % self.field.p
            if acc.any():
                raise AssertionError("relation does not evaluate to zero in the built algebra")

    # -- elements ----------------------------------------------------------

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def unit(self) -> np.ndarray:
        vec = self.zero()
        for i in self.trivial_indices:
            vec[i] = 1
        return vec

    def trivial_path_vector(self, vertex: int) -> np.ndarray:
        vec = self.zero()
        vec[self.trivial_indices[vertex]] = 1
        return vec

    def left_mult_matrices(self):
        """R[ai]: basis-coordinate matrix of left multiplication by arrow ai."""
        if self._left_mult is None:
            p = self.field.p
            mats = []
            for ai, a in enumerate(self.quiver.arrows):
                m = np.zeros((self.dim, self.dim), dtype=np.int64)
                for j, q in enumerate(self.basis):
                    if q.target != a.src:
                        continue
                    longer = PathWord(q.source, a.tgt, q.arrows + (ai,))
                    m[:, j] = self._expand_path(longer)
                mats.append(m % p)
            self._left_mult = mats
        return self._left_mult

    def _expand_path(self, q: PathWord) -> np.ndarray:
        if q in self._expansion:
            return self._expansion[q]
        if self._contains_monomial(q.arrows):
            return self.zero()
        if q.length <= self.cap:
            raise AssertionError("enumerated path missing from the expansion table")
        # longer than the cap: reduce arrow by arrow
        vec = self.trivial_path_vector(q.source)
        R = self.left_mult_matrices()
        for ai in q.arrows:
            vec = (R[ai] @ vec) % self.field.p
        return vec

    def path_vector(self, q: PathWord) -> np.ndarray:
        """Basis coordinates of (the class of) a path."""
        return self._expand_path(q).copy()

    def element(self, terms: Iterable[tuple]) -> np.ndarray:
        """Basis coordinates of sum(coef * path)."""
        vec = self.zero()
        for c, q in terms:
            vec = (vec + (int(c) % self.field.p) * self.path_vector(q)) % self.field.p
        return vec

    def multiply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Product u * v in basis coordinates (u composed after v)."""
        p = self.field.p
        out = self.zero()
        for i in np.nonzero(u)[0]:
            i = int(i)
            if i not in self._struct:
                q = self.basis[i]
                vec_of = self.trivial_path_vector(q.source)
                R = self.left_mult_matrices()
                m = np.eye(self.dim, dtype=np.int64)
                for ai in q.arrows:
                    m = (R[ai] @ m) % p
                self._struct[i] = m
            out = (out + int(u[i]) * (self._struct[i] @ v)) % p
        return out

    def multiply_terms(self, terms_u, terms_v) -> np.ndarray:
        return self.multiply(self.element(terms_u), self.element(terms_v))

    def block_of(self, vec: np.ndarray, src: int, tgt: int) -> np.ndarray:
        return vec[self.blocks.get((src, tgt), [])]

    def is_radical(self, vec: np.ndarray) -> bool:
        """True iff the element lies in the arrow ideal (= Jacobson radical)."""
        return not any(vec[i] for i in self.trivial_indices)

    def block_dims(self):
        return {key: len(idx) for key, idx in self.blocks.items()}

    def basis_display(self):
        return [q.display(self.quiver) for q in self.basis]

    # -- quotients ---------------------------------------------------------

    def delete_vertices(self, kill) -> "BoundQuiverAlgebra":
        """Quotient by the idempotents of the killed vertices.

        Arrows touching a killed vertex disappear and every relation is
        projected by dropping the terms whose path passes through a killed
        vertex.  The returned algebra carries a `vertex_map` attribute
        (old index -> new index).
        """
        kill = set(kill)
        if not kill <= set(range(self.vertex_count)):
            raise ValueError("killed vertices out of range")
        survivors = [v for v in range(self.vertex_count) if v not in kill]
        if not survivors:
            raise ValueError("cannot kill every vertex")
        vmap = {v: i for i, v in enumerate(survivors)}
        keep_arrows = [a for a in self.quiver.arrows if a.src not in kill and a.tgt not in kill]
        amap = {}
        new_arrows = []
        for a in keep_arrows:
            amap[self.quiver.index[a.name]] = len(new_arrows)
            new_arrows.append(Arrow(a.name, vmap[a.src], vmap[a.tgt]))
        new_quiver = Quiver(len(survivors), new_arrows)

        def passes(q: PathWord) -> bool:
            if q.source in kill or q.target in kill:
                return True
            at = q.source
            for ai in q.arrows:
                at = self.quiver.arrows[ai].tgt
                if at in kill:
                    return True
            return False

        new_rels = []
        for rel in self.relations:
            terms = []
            for c, q in rel:
                if passes(q):
                    continue
                word = PathWord(
                    vmap[q.source], vmap[q.target], tuple(amap[ai] for ai in q.arrows)
                )
                terms.append((c, word))
            if terms:
                new_rels.append(Relation(terms, self.field.p))
        out = BoundQuiverAlgebra(new_quiver, new_rels, self.field, self.cap)
        out.vertex_map = vmap
        return out


def build_algebra(quiver: Quiver, relations, field: PrimeField, cap: int) -> BoundQuiverAlgebra:
    return BoundQuiverAlgebra(quiver, relations, field, cap)


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def path_to_json(quiver: Quiver, q: PathWord):
    if q.length == 0:
        return {"e": q.source}
    return {"path": q.word_names(quiver)}


def path_from_json(quiver: Quiver, data) -> PathWord:
    if "e" in data:
        return PathWord.trivial(int(data["e"]))
    return PathWord.from_names(quiver, data["path"])


def algebra_to_json(alg: BoundQuiverAlgebra) -> dict:
    return {
        "vertices": alg.vertex_count,
        "arrows": [{"name": a.name, "src": a.src, "tgt": a.tgt} for a in alg.quiver.arrows],
        "relations": [
            [dict(coef=int(c), **path_to_json(alg.quiver, q)) for c, q in rel]
            for rel in alg.relations
        ],
        "p": alg.field.p,
        "cap": alg.cap,
    }


def algebra_from_json(data) -> BoundQuiverAlgebra:
    if isinstance(data, str):
        data = json.loads(data)
    quiver = Quiver(data["vertices"], [(a["name"], a["src"], a["tgt"]) for a in data["arrows"]])
    field = PrimeField(data["p"])
    rels = []
    for rel in data.get("relations", []):
        rels.append(
            Relation([(t.get("coef", 1), path_from_json(quiver, t)) for t in rel], field.p)
        )
    return BoundQuiverAlgebra(quiver, rels, field, int(data["cap"]))
