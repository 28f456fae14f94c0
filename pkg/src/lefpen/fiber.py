"""Concrete models of the fiber mapping class group and its vanishing cycles.

Hamiltonian-isotopy classes of Lagrangian spheres in the reference fiber are
not decidable objects, so this module trades them for three exactly
computable proxies:

* ``torus``: cycles are primitive integer vectors (p, q), mapping classes
  are SL(2, Z) matrices.  Algebraic and geometric intersection numbers
  agree here, so the model is exact and faithful.
* ``sp`` (genus h >= 1): cycles are primitive vectors in Z^(2h), mapping
  classes are integer symplectic matrices.  The pairing only bounds the
  geometric intersection from below, and the model says so.
* ``disc`` (n >= 2 punctures): cycles are canonical cyclic words over the
  puncture generators, mapping classes are braids on n strands acting by
  pushforward.  Exact for the base-point phenomena (half-twists of the
  base locus, lantern relation).

Cycles are unoriented: homology vectors are kept up to global sign, disc
words up to rotation and inversion.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .words import Braid, FreeWord, artin_apply, word_from_str, word_to_str

EXACT = "exact"
LOWER_BOUND = "lower_bound"

TORUS = "torus"
SP = "sp"
DISC = "disc"


class ModelMismatch(ValueError):
    """Operands belong to different fiber models."""


class UnsupportedCycle(ValueError):
    """A disc-model operation needs a curve presentation this cycle lacks."""


@dataclass(frozen=True)
class FiberModel:
    kind: str
    genus: int = 0
    punctures: int = 0

    def __post_init__(self):
        if self.kind == TORUS:
            pass
        elif self.kind == SP:
            if self.genus < 1:
                raise ValueError("sp model needs genus >= 1")
        elif self.kind == DISC:
            if self.punctures < 2:
                raise ValueError("disc model needs at least 2 punctures")
        else:
            raise ValueError("unknown fiber model %r" % (self.kind,))

    @classmethod
    def torus(cls):
        return cls(TORUS)

    @classmethod
    def sp(cls, genus):
        return cls(SP, genus=genus)

    @classmethod
    def disc(cls, punctures):
        return cls(DISC, punctures=punctures)

    @property
    def dim(self):
        """Length of homology vectors (homology models only)."""
        if self.kind == TORUS:
            return 2
        if self.kind == SP:
            return 2 * self.genus
        raise ModelMismatch("disc model has no homology coordinates")


def _require_same_model(a, b):
    if a.model != b.model:
        raise ModelMismatch("fiber models differ: %r vs %r" % (a.model, b.model))


def symplectic_pairing(u, v):
    """Standard pairing sum(u_{2i-1} v_{2i} - u_{2i} v_{2i-1})."""
    s = 0
    for i in range(0, len(u), 2):
        s += u[i] * v[i + 1] - u[i + 1] * v[i]
    return s


def _normalize_sign(vec):
    for x in vec:
        if x > 0:
            return vec
        if x < 0:
            return tuple(-y for y in vec)
    return vec


def _canonical_cyclic(letters):
    """Lexicographically least rotation of a cyclically reduced word or its inverse."""
    while len(letters) >= 2 and letters[0] == -letters[-1]:
        letters = letters[1:-1]
    if not letters:
        return ()
    key = lambda l: (abs(l), 0 if l > 0 else 1)
    candidates = []
    for w in (letters, tuple(-l for l in reversed(letters))):
        for i in range(len(w)):
            candidates.append(w[i:] + w[:i])
    return min(candidates, key=lambda w: tuple(key(l) for l in w))


class Cycle:
    """An unoriented vanishing-cycle class in one of the fiber models.

    Homology models store a primitive, sign-normalized integer vector.
    The disc model stores the canonical cyclic word; when the curve is a
    known pushforward of a standard range curve, the presentation
    ``(carrier braid, (i, j))`` rides along so the Dehn twist about the
    cycle stays computable.  The presentation never enters equality or
    hashing.
    """

    __slots__ = ("model", "vector", "word", "support")

    def __init__(self, model, vector=None, word=None, support=None):
        self.model = model
        self.support = None
        if model.kind in (TORUS, SP):
            vec = tuple(int(x) for x in vector)
            if len(vec) != model.dim:
                raise ValueError("cycle vector has length %d, expected %d" % (len(vec), model.dim))
            if all(x == 0 for x in vec):
                raise ValueError("cycle vector must be nonzero")
            if gcd(*(abs(x) for x in vec)) != 1:
                raise ValueError("cycle vector must be primitive: %r" % (vec,))
            self.vector = _normalize_sign(vec)
            self.word = None
        elif model.kind == DISC:
            if isinstance(word, FreeWord):
                if word.rank != model.punctures:
                    raise ValueError("disc cycle word over wrong puncture count")
                letters = word.letters
            else:
                # free reduction first, so the canonical form is well defined
                letters = FreeWord(model.punctures, tuple(word)).letters
            canon = _canonical_cyclic(letters)
            if not canon:
                raise ValueError("disc cycle word must be essential (nonempty after cyclic reduction)")
            self.word = FreeWord(model.punctures, canon)
            self.vector = None
            if support is not None:
                carrier, (i, j) = support
                pushed = artin_apply(carrier, FreeWord(model.punctures, tuple(range(i, j + 1))))
                if _canonical_cyclic(pushed.letters) != canon:
                    raise ValueError("support presentation does not match the cycle word")
                self.support = (carrier, (i, j))
            else:
                rng = _as_range(canon)
                if rng is not None:
                    self.support = (Braid.identity(model.punctures), rng)
        else:
            raise ValueError("unknown model")

    def __eq__(self, other):
        if not isinstance(other, Cycle) or self.model != other.model:
            return False
        return self.vector == other.vector and self.word == other.word

    def __hash__(self):
        return hash((self.model, self.vector, self.word.letters if self.word else None))

    def __repr__(self):
        if self.model.kind == DISC:
            return "Cycle(disc, %r)" % (word_to_str(self.word),)
        return "Cycle(%s, %r)" % (self.model.kind, list(self.vector))


def _as_range(letters):
    """Recognize x_i x_{i+1} .. x_j (up to the stored canonical form)."""
    if any(l < 0 for l in letters):
        return None
    idx = sorted(letters)
    lo, hi = idx[0], idx[-1]
    if idx != list(range(lo, hi + 1)):
        return None
    # the canonical rotation of the ascending range word is the word itself
    if list(letters) != list(range(lo, hi + 1)):
        return None
    return (lo, hi)


def standard_curve(model, i, j):
    """The round curve enclosing punctures i..j of a disc fiber."""
    if model.kind != DISC:
        raise ModelMismatch("standard_curve lives in the disc model")
    if not 1 <= i <= j <= model.punctures:
        raise ValueError("bad puncture range %d..%d" % (i, j))
    return Cycle(model, word=tuple(range(i, j + 1)))


class FiberElement:
    """A mapping class of the fiber: an integer matrix, or a braid (disc)."""

    __slots__ = ("model", "matrix", "braid")

    def __init__(self, model, matrix=None, braid=None):
        self.model = model
        if model.kind in (TORUS, SP):
            mat = tuple(tuple(int(x) for x in row) for row in matrix)
            d = model.dim
            if len(mat) != d or any(len(row) != d for row in mat):
                raise ValueError("matrix must be %dx%d" % (d, d))
            if not _is_symplectic(mat):
                raise ValueError("matrix does not preserve the symplectic form")
            self.matrix = mat
            self.braid = None
        elif model.kind == DISC:
            if braid.strands != model.punctures:
                raise ValueError("braid strand count does not match puncture count")
            self.braid = braid
            self.matrix = None
        else:
            raise ValueError("unknown model")

    @classmethod
    def identity(cls, model):
        if model.kind == DISC:
            return cls(model, braid=Braid.identity(model.punctures))
        d = model.dim
        return cls(model, matrix=[[1 if i == j else 0 for j in range(d)] for i in range(d)])

    def __mul__(self, other):
        if not isinstance(other, FiberElement):
            return NotImplemented
        _require_same_model(self, other)
        if self.model.kind == DISC:
            return FiberElement(self.model, braid=self.braid * other.braid)
        return FiberElement(self.model, matrix=_matmul(self.matrix, other.matrix))

    def inverse(self):
        if self.model.kind == DISC:
            return FiberElement(self.model, braid=self.braid.inverse())
        return FiberElement(self.model, matrix=_symplectic_inverse(self.matrix))

    def __pow__(self, n):
        base = self if n >= 0 else self.inverse()
        out = FiberElement.identity(self.model)
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, other):
        if not isinstance(other, FiberElement) or self.model != other.model:
            return False
        if self.model.kind == DISC:
            return self.braid == other.braid
        return self.matrix == other.matrix

    def __hash__(self):
        return hash((self.model, self.matrix, self.braid))

    def __repr__(self):
        if self.model.kind == DISC:
            return "FiberElement(disc, %r)" % (str(self.braid),)
        return "FiberElement(%s, %r)" % (self.model.kind, [list(r) for r in self.matrix])


def _matmul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _is_symplectic(mat):
    """M^t J M == J for the block-diagonal standard form."""
    n = len(mat)
    cols = list(zip(*mat))
    for i in range(n):
        for j in range(n):
            want = 0
            if j == i + 1 and i % 2 == 0:
                want = 1
            elif j == i - 1 and i % 2 == 1:
                want = -1
            if symplectic_pairing(cols[i], cols[j]) != want:
                return False
    return True


def _symplectic_inverse(mat):
    """Inverse via M^(-1) = J^(-1) M^t J = (-J)(M^t J), exact over Z."""
    n = len(mat)
    mt = tuple(zip(*mat))
    a = tuple(
        tuple(-mt[i][j + 1] if j % 2 == 0 else mt[i][j - 1] for j in range(n))
        for i in range(n)
    )
    inv = tuple(
        tuple(-a[i + 1][j] if i % 2 == 0 else a[i - 1][j] for j in range(n))
        for i in range(n)
    )
    return inv


def dehn_twist(c):
    """The Dehn twist about the cycle, as a fiber mapping class.

    Homology models use the transvection v -> v + <v, c> c.  In the disc
    model the cycle must be presented as a pushforward b . (round curve
    around punctures i..j); the twist is then b * full_twist(i..j) * b^(-1).
    """
    model = c.model
    if model.kind in (TORUS, SP):
        d = model.dim
        cols = [[0] * d for _ in range(d)]
        for j in range(d):
            e = tuple(1 if t == j else 0 for t in range(d))
            coeff = symplectic_pairing(e, c.vector)
            for i in range(d):
                cols[j][i] = (1 if i == j else 0) + coeff * c.vector[i]
        mat = [[cols[j][i] for j in range(d)] for i in range(d)]
        return FiberElement(model, matrix=mat)
    if c.support is None:
        raise UnsupportedCycle(
            "disc cycle %r has no pushforward presentation; build it via "
            "standard_curve/act" % (word_to_str(c.word),)
        )
    carrier, (i, j) = c.support
    return FiberElement(model, braid=carrier * full_twist(model.punctures, i, j) * carrier.inverse())


def full_twist(n, i, j):
    """Full twist on strands i..j of B_n: (s_i .. s_{j-1})^(j-i+1)."""
    if not 1 <= i <= j <= n:
        raise ValueError("bad strand range %d..%d" % (i, j))
    ring = Braid(n, tuple(range(i, j)))
    return ring ** (j - i + 1)


def act(g, c):
    """Image of the cycle under the fiber mapping class."""
    if g.model != c.model:
        raise ModelMismatch("fiber element and cycle from different models")
    model = c.model
    if model.kind in (TORUS, SP):
        v = tuple(sum(g.matrix[i][j] * c.vector[j] for j in range(len(c.vector))) for i in range(len(c.vector)))
        return Cycle(model, vector=v)
    pushed = artin_apply(g.braid, c.word)
    support = None
    if c.support is not None:
        carrier, rng = c.support
        support = (g.braid * carrier, rng)
    return Cycle(model, word=pushed.letters, support=support)


def cycle_eq(c1, c2):
    """Equality of unoriented cycle classes (necessary condition for isotopy)."""
    _require_same_model(c1, c2)
    return c1 == c2


def intersection_number(c1, c2):
    """(value, exactness) for a pair of cycles in the same model.

    torus: |p1 q2 - p2 q1|, exact.  sp: |pairing|, a lower bound only.
    disc: exact 0 for disjoint or nested round range curves; overlapping
    ranges meet in (at least) 2 points; anything else is reported as the
    vacuous lower bound 0.
    """
    _require_same_model(c1, c2)
    model = c1.model
    if model.kind == TORUS:
        return abs(symplectic_pairing(c1.vector, c2.vector)), EXACT
    if model.kind == SP:
        return abs(symplectic_pairing(c1.vector, c2.vector)), LOWER_BOUND
    r1 = _as_range(c1.word.letters)
    r2 = _as_range(c2.word.letters)
    if r1 is None or r2 is None:
        return 0, LOWER_BOUND
    (a1, b1), (a2, b2) = r1, r2
    disjoint = b1 < a2 or b2 < a1
    nested = (a1 <= a2 and b2 <= b1) or (a2 <= a1 and b1 <= b2)
    if disjoint or nested:
        return 0, EXACT
    return 2, LOWER_BOUND


@dataclass(frozen=True)
class PunctureArc:
    """An arc between two punctures of a disc fiber (same encoding as Arc)."""

    base: int
    carrier: Braid

    def __post_init__(self):
        if not 1 <= self.base <= self.carrier.strands - 1:
            raise ValueError("puncture arc base out of range")

    @property
    def punctures(self):
        return self.carrier.strands


def base_half_twist(d, model):
    """Half-twist of the fiber exchanging the arc's two punctures."""
    if model.kind != DISC:
        raise ModelMismatch("base half-twists live in the disc model")
    if d.punctures != model.punctures:
        raise ValueError("puncture arc strand count does not match the model")
    tw = d.carrier * Braid.generator(model.punctures, d.base) * d.carrier.inverse()
    return FiberElement(model, braid=tw)


# --- JSON-compatible encodings ------------------------------------------

def model_to_json(model):
    out = {"model": model.kind}
    if model.kind == SP:
        out["genus"] = model.genus
    if model.kind == DISC:
        out["punctures"] = model.punctures
    return out


def model_from_json(doc):
    kind = doc.get("model")
    if kind == TORUS:
        return FiberModel.torus()
    if kind == SP:
        return FiberModel.sp(int(doc["genus"]))
    if kind == DISC:
        return FiberModel.disc(int(doc["punctures"]))
    raise ValueError("unknown fiber model %r" % (kind,))


def cycle_to_json(c):
    if c.model.kind == DISC:
        return word_to_str(c.word)
    return list(c.vector)


def cycle_from_json(model, doc):
    if model.kind == DISC:
        if not isinstance(doc, str):
            raise ValueError("disc cycle must be a free-word token string")
        return Cycle(model, word=word_from_str(model.punctures, doc).letters)
    if not isinstance(doc, list):
        raise ValueError("homology cycle must be an integer array")
    return Cycle(model, vector=doc)


def element_to_json(g):
    if g.model.kind == DISC:
        return str(g.braid)
    return [x for row in g.matrix for x in row]


def element_from_json(model, doc):
    from .words import braid_from_str

    if model.kind == DISC:
        return FiberElement(model, braid=braid_from_str(model.punctures, doc))
    d = model.dim
    if not isinstance(doc, list) or len(doc) != d * d:
        raise ValueError("matrix must be a row-major array of %d integers" % (d * d,))
    rows = [doc[i * d : (i + 1) * d] for i in range(d)]
    return FiberElement(model, matrix=rows)
