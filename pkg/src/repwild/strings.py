"""Strings, bands, and their modules for special biserial algebras.

A string is a reduced, relation-avoiding walk through arrows and formal
inverses.  Words follow the same function-composition convention as paths:
internally letters are stored in application order (index 0 is the
rightmost letter of the written word).  The worked 5-dimensional example
module in the source material fixes the slot convention used here: for a
direct letter the arrow maps slot i-1 to slot i, for an inverse letter the
arrow maps slot i to slot i-1.

Text encoding: letters in written order, separated by a middle dot, with a
"~" suffix for inverse letters; trivial strings are "e0", "e1", ...  Bands
are prefixed "band:".
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .fields import (
    FpMatrix,
    PrimeField,
    companion_matrix,
    poly_is_irreducible,
    poly_pow,
)
from .quiver import BoundQuiverAlgebra, PathWord, Quiver, Relation
from .reps import Representation, is_isomorphic, projective

Letter = Tuple[int, bool]  # (arrow index, is_inverse)


def letter_source(quiver: Quiver, letter: Letter) -> int:
    ai, inv = letter
    a = quiver.arrows[ai]
    return a.tgt if inv else a.src


def letter_target(quiver: Quiver, letter: Letter) -> int:
    ai, inv = letter
    a = quiver.arrows[ai]
    return a.src if inv else a.tgt


@dataclass(frozen=True)
class StringWord:
    """A walk; letters in application order, or trivial at a vertex."""

    source: int
    target: int
    letters: Tuple[Letter, ...] = ()

    @staticmethod
    def trivial(vertex: int) -> "StringWord":
        return StringWord(vertex, vertex, ())

    @property
    def length(self) -> int:
        return len(self.letters)

    def inverse(self) -> "StringWord":
        return StringWord(
            self.target, self.source, tuple((ai, not inv) for ai, inv in reversed(self.letters))
        )

    def slot_vertices(self, quiver: Quiver) -> List[int]:
        verts = [self.source]
        for letter in self.letters:
            verts.append(letter_target(quiver, letter))
        return verts

    def key(self):
        # written order; direct sorts before inverse
        return (self.length, tuple((ai, inv) for ai, inv in reversed(self.letters)), self.source)

    def canonical(self) -> "StringWord":
        inv = self.inverse()
        return self if self.key() <= inv.key() else inv

    def to_text(self, quiver: Quiver) -> str:
        if not self.letters:
            return f"e{self.source}"
        parts = []
        for ai, inv in reversed(self.letters):
            parts.append(quiver.arrows[ai].name + ("~" if inv else ""))
        return "·".join(parts)


def string_from_text(quiver: Quiver, text: str) -> StringWord:
    text = text.strip()
    if text.startswith("e") and text[1:].isdigit():
        return StringWord.trivial(int(text[1:]))
    letters = []
    for tok in reversed(text.split("·")):
        tok = tok.strip()
        inv = tok.endswith("~")
        name = tok[:-1] if inv else tok
        letters.append((quiver.index[name], inv))
    letters = tuple(letters)
    src = letter_source(quiver, letters[0])
    tgt = letter_target(quiver, letters[-1])
    for x, y in zip(letters, letters[1:]):
        if letter_target(quiver, x) != letter_source(quiver, y):
            raise ValueError(f"walk {text} is not composable")
    return StringWord(src, tgt, letters)


@dataclass(frozen=True)
class BandWord:
    """A cyclic string, stored like a StringWord with target == source."""

    word: StringWord

    def rotations(self) -> List["StringWord"]:
        out = []
        letters = self.word.letters
        quiver_independent = len(letters)
        for k in range(quiver_independent):
            rot = letters[k:] + letters[:k]
            out.append(StringWord(self.word.source, self.word.source, rot))
        return out

    def canonical_key(self, quiver: Quiver):
        cands = []
        for rot in self.rotations():
            src = letter_source(quiver, rot.letters[0])
            w = StringWord(src, src, rot.letters)
            cands.append(w.key())
            cands.append(w.inverse().key())
        return min(cands)


@dataclass(frozen=True)
class BandParam:
    """Monic irreducible phi != t together with an exponent e >= 1."""

    phi: Tuple[int, ...]
    e: int

    def validate(self, p: int):
        phi = list(self.phi)
        if self.e < 1:
            raise ValueError("exponent must be >= 1")
        if not phi or phi[0] % p == 0:
            raise ValueError("phi(0) must be nonzero (companion matrix invertible)")
        if not poly_is_irreducible(phi, p):
            raise ValueError("phi must be irreducible")

    def matrix(self, field: PrimeField) -> FpMatrix:
        self.validate(field.p)
        return companion_matrix(poly_pow(list(self.phi), self.e, field.p), field)

    @property
    def degree(self) -> int:
        return (len(self.phi) - 1) * self.e


# ---------------------------------------------------------------------------
# classification of the algebra
# ---------------------------------------------------------------------------


def _path_is_zero(alg: BoundQuiverAlgebra, arrows: Sequence[int]) -> bool:
    src = alg.quiver.arrows[arrows[0]].src
    tgt = alg.quiver.arrows[arrows[-1]].tgt
    return not alg.path_vector(PathWord(src, tgt, tuple(arrows))).any()


def classify_type(alg: BoundQuiverAlgebra) -> str:
    """One of not-special-biserial | special-biserial | string | gentle."""
    q = alg.quiver
    for v in range(q.vertex_count):
        if len(q.out_of[v]) > 2 or len(q.into[v]) > 2:
            return "not-special-biserial"
    for ai, a in enumerate(q.arrows):
        succ = [bi for bi in q.out_of[a.tgt] if not _path_is_zero(alg, (ai, bi))]
        pred = [bi for bi in q.into[a.src] if not _path_is_zero(alg, (bi, ai))]
        if len(succ) > 1 or len(pred) > 1:
            return "not-special-biserial"
    if not all(rel.is_monomial() for rel in alg.relations):
        return "special-biserial"
    if not all(rel.max_length() == 2 for rel in alg.relations):
        return "string"
    for ai, a in enumerate(q.arrows):
        succ = [bi for bi in q.out_of[a.tgt] if _path_is_zero(alg, (ai, bi))]
        pred = [bi for bi in q.into[a.src] if _path_is_zero(alg, (bi, ai))]
        if len(succ) > 1 or len(pred) > 1:
            return "string"
    return "gentle"


def associated_string_algebra(alg: BoundQuiverAlgebra) -> BoundQuiverAlgebra:
    """Replace each binomial relation by its two monomial halves."""
    kind = classify_type(alg)
    if kind == "not-special-biserial":
        raise ValueError("algebra is not special biserial")
    if kind in ("string", "gentle"):
        return alg
    new_rels = []
    for rel in alg.relations:
        if rel.is_monomial():
            new_rels.append(rel)
        elif len(rel.terms) == 2:
            for c, w in rel:
                new_rels.append(Relation([(1, w)], alg.field.p))
        else:
            raise ValueError("special biserial relations must be monomial or binomial")
    return BoundQuiverAlgebra(alg.quiver, new_rels, alg.field, alg.cap)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _forbidden_paths(alg: BoundQuiverAlgebra) -> List[Tuple[int, ...]]:
    out = []
    for rel in alg.relations:
        if not rel.is_monomial():
            raise ValueError("string enumeration needs monomial relations")
        (_, w), = rel.terms
        out.append(w.arrows)
    return out


def _is_string(quiver: Quiver, forbidden, letters: Tuple[Letter, ...]) -> bool:
    for x, y in zip(letters, letters[1:]):
        if letter_target(quiver, x) != letter_source(quiver, y):
            return False
        if x[0] == y[0] and x[1] != y[1]:
            return False
    for f in forbidden:
        L = len(f)
        for i in range(len(letters) - L + 1):
            seg = letters[i : i + L]
            if all(not inv for _, inv in seg) and tuple(ai for ai, _ in seg) == f:
                return False
            if all(inv for _, inv in seg) and tuple(ai for ai, _ in reversed(seg)) == f:
                return False
    return True


@dataclass
class StringEnumeration:
    algebra: BoundQuiverAlgebra
    words: List[StringWord]  # canonical representatives, sorted
    complete: bool
    max_length_seen: int


def enumerate_strings(alg: BoundQuiverAlgebra, max_len: int) -> StringEnumeration:
    """All strings of length <= max_len, one representative per {w, w^-1}."""
    base = associated_string_algebra(alg)
    quiver = base.quiver
    forbidden = _forbidden_paths(base)
    rel_len = max((len(f) for f in forbidden), default=2)
    layers = [[StringWord.trivial(v) for v in range(quiver.vertex_count)]]
    for _ in range(max_len):
        nxt = []
        for w in layers[-1]:
            for ai in range(len(quiver.arrows)):
                for inv in (False, True):
                    letter = (ai, inv)
                    if letter_source(quiver, letter) != w.target:
                        continue
                    letters = w.letters + (letter,)
                    if _is_string(quiver, forbidden, letters):
                        nxt.append(StringWord(w.source, letter_target(quiver, letter), letters))
        layers.append(nxt)
    seen = {}
    max_seen = 0
    for layer in layers:
        for w in layer:
            c = w.canonical()
            seen[(c.source, c.letters)] = c
            if w.length:
                max_seen = max(max_seen, w.length)
    complete = False
    # a double gap beyond the longest relation certifies exhaustion
    for ell in range(rel_len, max_len):
        if not layers[ell] and ell + 1 <= max_len and not layers[ell + 1]:
            complete = True
            break
    words = sorted(seen.values(), key=lambda w: w.key())
    return StringEnumeration(base, words, complete, max_seen)


def enumerate_bands(alg: BoundQuiverAlgebra, max_len: int) -> List[BandWord]:
    """Primitive cyclic strings with both letter directions, up to rotation/inverse."""
    base = associated_string_algebra(alg)
    quiver = base.quiver
    forbidden = _forbidden_paths(base)
    rel_len = max((len(f) for f in forbidden), default=2)
    enum = enumerate_strings(alg, max_len)
    out = {}
    for w in enum.words:
        if w.length == 0 or w.source != w.target:
            continue
        if all(inv for _, inv in w.letters) or all(not inv for _, inv in w.letters):
            continue
        # primitive?
        n = w.length
        primitive = True
        for d in range(1, n):
            if n % d == 0 and w.letters == w.letters[:d] * (n // d):
                primitive = False
                break
        if not primitive:
            continue
        # all powers are strings; powers up to the relation span suffice
        reps = max(2, (rel_len // n) + 2)
        if not _is_string(quiver, forbidden, w.letters * reps):
            continue
        band = BandWord(w)
        out.setdefault(band.canonical_key(quiver), band)
    return [out[k] for k in sorted(out)]


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------


def string_module(alg: BoundQuiverAlgebra, w: StringWord) -> Representation:
    """One copy of k per slot of the walk; arrows act along the letters."""
    quiver = alg.quiver
    verts = w.slot_vertices(quiver)
    dims = [0] * quiver.vertex_count
    slot_pos = []
    for v in verts:
        slot_pos.append(dims[v])
        dims[v] += 1
    mats = {
        a.name: np.zeros((dims[a.tgt], dims[a.src]), dtype=np.int64) for a in quiver.arrows
    }
    for i, (ai, inv) in enumerate(w.letters):
        a = quiver.arrows[ai]
        if not inv:
            mats[a.name][slot_pos[i + 1], slot_pos[i]] = 1
        else:
            mats[a.name][slot_pos[i], slot_pos[i + 1]] = 1
    rep = Representation(
        alg, dims, {k: FpMatrix(alg.field, m) for k, m in mats.items()}
    )
    defect = rep.relation_defect()
    if defect is not None:
        raise ValueError(f"word {w.to_text(quiver)} is not a string for this algebra")
    return rep


def band_module(alg: BoundQuiverAlgebra, band: BandWord, param: BandParam) -> Representation:
    """Slots carry k^n; the closing letter acts by the companion of phi^e."""
    quiver = alg.quiver
    w = band.word
    if w.source != w.target or w.length == 0:
        raise ValueError("band must be a nontrivial cyclic string")
    phi_mat = param.matrix(alg.field)
    n = phi_mat.rows
    verts = w.slot_vertices(quiver)[:-1]
    dims = [0] * quiver.vertex_count
    slot_pos = []
    for v in verts:
        slot_pos.append(dims[v])
        dims[v] += n
    mats = {
        a.name: np.zeros((dims[a.tgt], dims[a.src]), dtype=np.int64) for a in quiver.arrows
    }
    r = w.length
    eye = np.eye(n, dtype=np.int64)
    for i, (ai, inv) in enumerate(w.letters):
        a = quiver.arrows[ai]
        lo = slot_pos[i]
        hi = slot_pos[(i + 1) % r]
        block = phi_mat.a if i == r - 1 else eye
        if not inv:
            mats[a.name][hi : hi + n, lo : lo + n] = block
        else:
            mats[a.name][lo : lo + n, hi : hi + n] = block
    rep = Representation(alg, dims, {k: FpMatrix(alg.field, m) for k, m in mats.items()})
    defect = rep.relation_defect()
    if defect is not None:
        raise ValueError("band word does not satisfy the relations")
    return rep


# ---------------------------------------------------------------------------
# the full indecomposable list
# ---------------------------------------------------------------------------


@dataclass
class IndecomposableEntry:
    kind: str  # "string" | "band" | "projective-injective"
    label: str
    rep: Representation


def _irreducible_polys(p: int, max_deg: int) -> List[List[int]]:
    out = []
    for deg in range(1, max_deg + 1):
        for tup in np.ndindex(*([p] * deg)):
            f = list(tup) + [1]
            if f[0] == 0:
                continue
            if poly_is_irreducible(f, p):
                out.append(f)
    return out


def special_biserial_indecomposables(
    alg: BoundQuiverAlgebra,
    max_string_len: int = 24,
    max_band_deg: int = 0,
) -> List[IndecomposableEntry]:
    """Strings + parametrized bands + biserial projective-injectives.

    Band modules are enumerated up to parameter degree max_band_deg; string
    enumeration must stabilize below max_string_len when the band list is
    empty, otherwise the returned list is a bounded front of an infinite
    classification.
    """
    kind = classify_type(alg)
    if kind == "not-special-biserial":
        raise ValueError("algebra is not special biserial")
    base = associated_string_algebra(alg)
    enum = enumerate_strings(alg, max_string_len)
    entries = []
    for w in enum.words:
        entries.append(IndecomposableEntry("string", w.to_text(alg.quiver), string_module(alg, w)))
    if max_band_deg:
        polys = _irreducible_polys(alg.field.p, max_band_deg)
        for band in enumerate_bands(alg, max_string_len):
            for phi in polys:
                if phi == [0, 1]:
                    continue
                dphi = len(phi) - 1
                for e in range(1, max_band_deg // dphi + 1):
                    param = BandParam(tuple(phi), e)
                    label = f"band:{band.word.to_text(alg.quiver)}|phi={phi}|e={e}"
                    entries.append(
                        IndecomposableEntry("band", label, band_module(alg, band, param))
                    )
    # biserial projective-injectives: projectives killed in the string algebra
    if base is not alg:
        for v in range(alg.vertex_count):
            P = projective(alg, v)
            over_string = Representation(base, P.dims, P.maps)
            if over_string.relation_defect() is not None:
                entries.append(IndecomposableEntry("projective-injective", f"P{v}", P))
    # merge duplicates (band parametrizations may repeat classes)
    kept: List[IndecomposableEntry] = []
    for entry in entries:
        if any(
            k.rep.dims == entry.rep.dims and is_isomorphic(k.rep, entry.rep) for k in kept
        ):
            continue
        kept.append(entry)
    return kept
