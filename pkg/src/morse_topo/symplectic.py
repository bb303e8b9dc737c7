"""Exact integer symplectic group Sp(2g, Z).

Vectors are columns over the ordered basis (a_1..a_g, b_1..b_g); the
alternating form has matrix [[0, I], [-I, 0]], so form(a_i, b_i) = 1.
Group elements act on the left and composition ``p * q`` applies ``q``
first.  All arithmetic is arbitrary-precision integer; nothing is reduced
modulo anything.

Besides plain transvections the module provides the five named generator
families Ta(i), Tb(i), Mu(i,j), Eta(i,j), Nu(i,j), word evaluation, and two
factorisation routines: ``general_sp_factor`` (symplectic Gaussian
elimination over a chosen index range) and ``stabilizer_decompose`` (words
for elements fixing the first basis vector, avoiding Tb(1), Eta(1,*) and
Nu(*,1)).
"""
from __future__ import annotations

import math
import re
from typing import Iterable, NamedTuple, Sequence


class SpMatrix:
    """Immutable 2g x 2g integer matrix, normally a symplectic one."""

    __slots__ = ("rows", "n")

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0 or n % 2 != 0 or any(len(row) != n for row in rows):
            raise ValueError("matrix must be square of even size")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("SpMatrix is immutable")

    @property
    def g(self) -> int:
        return self.n // 2

    @classmethod
    def identity(cls, g: int) -> "SpMatrix":
        n = 2 * g
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __eq__(self, other) -> bool:
        return isinstance(other, SpMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __mul__(self, other: "SpMatrix") -> "SpMatrix":
        if not isinstance(other, SpMatrix) or other.n != self.n:
            return NotImplemented
        a, b = self.rows, other.rows
        n = self.n
        cols = list(zip(*b))
        return SpMatrix(
            [[sum(ra[k] * cb[k] for k in range(n)) for cb in cols] for ra in a]
        )

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"SpMatrix[{body}]"

    def transpose(self) -> "SpMatrix":
        return SpMatrix(list(zip(*self.rows)))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.n:
            raise ValueError("vector length does not match matrix size")
        return tuple(sum(row[k] * vec[k] for k in range(self.n)) for row in self.rows)

    def is_symplectic(self) -> bool:
        return self.transpose() * omega_matrix(self.g) * self == omega_matrix(self.g)

    def inverse(self) -> "SpMatrix":
        """Exact inverse of a symplectic matrix: -Omega * M^T * Omega."""
        if not self.is_symplectic():
            raise ValueError("matrix is not symplectic")
        om = omega_matrix(self.g)
        inv = SpMatrix([[-x for x in row] for row in (om * self.transpose() * om).rows])
        assert inv * self == SpMatrix.identity(self.g)
        return inv


def omega_matrix(g: int) -> SpMatrix:
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for i in range(g):
        rows[i][g + i] = 1
        rows[g + i][i] = -1
    return SpMatrix(rows)


def omega_product(x: Sequence[int], y: Sequence[int]) -> int:
    """The alternating form: sum of x_i y_{g+i} - x_{g+i} y_i."""
    if len(x) != len(y) or len(x) % 2 != 0:
        raise ValueError("vectors must have equal even length")
    g = len(x) // 2
    return sum(x[i] * y[g + i] - x[g + i] * y[i] for i in range(g))


def transvection(gamma: Sequence[int]) -> SpMatrix:
    """Matrix of x -> form(gamma, x) * gamma + x.

    Always symplectic; the inverse flips the sign of the form coefficient.
    """
    gamma = [int(x) for x in gamma]
    if len(gamma) % 2 != 0 or not gamma:
        raise ValueError("vector length must be even and positive")
    n = len(gamma)
    g = n // 2
    # row vector w with form(gamma, x) = w . x
    w = [-gamma[g + c] for c in range(g)] + [gamma[c] for c in range(g)]
    return SpMatrix(
        [
            [(1 if r == c else 0) + gamma[r] * w[c] for c in range(n)]
            for r in range(n)
        ]
    )


# ---------------------------------------------------------------------------
# Named generators and words


class GenPower(NamedTuple):
    """One factor of a generator word: a named generator raised to a power."""

    name: str  # "Ta", "Tb", "Mu", "Eta", "Nu"
    i: int
    j: int | None
    exp: int


_SINGLE = {"Ta", "Tb"}
_DOUBLE = {"Mu", "Eta", "Nu"}
_SYMMETRIC = {"Mu", "Eta"}

Word = tuple[GenPower, ...]


def gen(name: str, i: int, j: int | None = None, exp: int = 1) -> GenPower:
    """Build a normalized generator power (Mu/Eta indices sorted, exp != 0)."""
    if name in _SINGLE:
        if j is not None:
            raise ValueError(f"{name} takes a single index")
    elif name in _DOUBLE:
        if j is None or i == j:
            raise ValueError(f"{name} takes two distinct indices")
        if name in _SYMMETRIC and i > j:
            i, j = j, i
    else:
        raise ValueError(f"unknown generator name {name!r}")
    if i < 1 or (j is not None and j < 1):
        raise ValueError("generator indices start at 1")
    if exp == 0:
        raise ValueError("generator exponent must be non-zero")
    return GenPower(name, i, j, int(exp))


def _nilpotent_part(p: GenPower, g: int) -> list[tuple[int, int, int]]:
    """Sparse entries (row, col, value) of N with generator = I + N and N^2 = 0."""
    i = p.i - 1
    j = (p.j - 1) if p.j is not None else None
    top = 0
    bot = g
    if p.name == "Ta":
        return [(top + i, bot + i, 1)]
    if p.name == "Tb":
        return [(bot + i, top + i, -1)]
    if p.name == "Mu":
        return [(top + i, bot + j, -1), (top + j, bot + i, -1)]
    if p.name == "Eta":
        return [(bot + i, top + j, 1), (bot + j, top + i, 1)]
    # Nu
    return [(top + i, top + j, 1), (bot + j, bot + i, -1)]


def named_generator(name: str, i: int, j: int | None = None, *, g: int) -> SpMatrix:
    """Closed-form matrix of one named generator at genus g."""
    p = gen(name, i, j)
    _check_indices((p,), g)
    n = 2 * g
    rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    for r, c, v in _nilpotent_part(p, g):
        rows[r][c] += v
    return SpMatrix(rows)


def generator_power(p: GenPower, g: int) -> SpMatrix:
    """Matrix of one generator power, using (I + N)^t = I + t N."""
    n = 2 * g
    rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    for r, c, v in _nilpotent_part(p, g):
        rows[r][c] += p.exp * v
    return SpMatrix(rows)


def _check_indices(word: Iterable[GenPower], g: int):
    for p in word:
        top = p.i if p.j is None else max(p.i, p.j)
        if top > g:
            raise ValueError(f"generator index {top} exceeds genus {g}")


def _left_apply(p: GenPower, rows: list[list[int]], g: int):
    """rows <- generator_power(p) * rows, as a sparse row operation.

    ``rows`` must have 2g rows but may have any width (a single column is
    enough when only a vector is being reduced).
    """
    updates = []
    for r, c, v in _nilpotent_part(p, g):
        coeff = p.exp * v
        updates.append((r, [coeff * x for x in rows[c]]))
    for r, add in updates:
        row = rows[r]
        for k in range(len(add)):
            row[k] += add[k]


def evaluate(word: Sequence[GenPower], g: int) -> SpMatrix:
    """Left-to-right product of the generator powers in ``word``."""
    _check_indices(word, g)
    rows = [[1 if r == c else 0 for c in range(2 * g)] for r in range(2 * g)]
    for p in reversed(word):
        _left_apply(p, rows, g)
    return SpMatrix(rows)


def word_inverse(word: Sequence[GenPower]) -> Word:
    """Formal inverse of a word: reversed order, negated exponents."""
    return tuple(p._replace(exp=-p.exp) for p in reversed(word))


def _undo_ops(ops: Sequence[GenPower]) -> Word:
    """Word for the inverse of a stack of left-applied operations.

    Applying ops G1, G2, ..., Gm on the left realises the product
    Gm * ... * G1, whose inverse reads G1^-1 * ... * Gm^-1, i.e. the ops in
    their original order with negated exponents.
    """
    return tuple(p._replace(exp=-p.exp) for p in ops)


def _normalize(word: Iterable[GenPower]) -> Word:
    """Merge adjacent powers of the same generator and drop zero exponents."""
    out: list[GenPower] = []
    for p in word:
        if p.exp == 0:
            continue
        if out and out[-1][:3] == p[:3]:
            merged = out[-1].exp + p.exp
            out.pop()
            if merged:
                out.append(p._replace(exp=merged))
        else:
            out.append(p)
    return tuple(out)


# ---------------------------------------------------------------------------
# Word and matrix text formats


_TOKEN_RE = re.compile(r"^(Ta|Tb|Mu|Eta|Nu)(\d+)(?:,(\d+))?(?:\^(-?\d+))?$")


def format_word(word: Sequence[GenPower]) -> str:
    """Space-separated tokens like ``Ta1^3 Nu2,3^-1`` (unit exponents omitted)."""
    parts = []
    for p in word:
        idx = str(p.i) if p.j is None else f"{p.i},{p.j}"
        suffix = "" if p.exp == 1 else f"^{p.exp}"
        parts.append(f"{p.name}{idx}{suffix}")
    return " ".join(parts)


def parse_word(text: str) -> Word:
    word = []
    for token in text.split():
        m = _TOKEN_RE.match(token)
        if not m:
            raise ValueError(f"bad generator token {token!r}")
        name, i, j, exp = m.groups()
        if (name in _SINGLE) != (j is None):
            raise ValueError(f"bad index count in token {token!r}")
        word.append(
            gen(name, int(i), int(j) if j else None, int(exp) if exp else 1)
        )
    return tuple(word)


def format_matrix(m: SpMatrix) -> str:
    lines = [f"SP {m.g}"]
    lines.extend(" ".join(str(x) for x in row) for row in m.rows)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> SpMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("SP"):
        raise ValueError("matrix text must start with an 'SP <g>' header")
    try:
        g = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ValueError("bad 'SP <g>' header") from None
    if len(lines) != 1 + 2 * g:
        raise ValueError(f"expected {2 * g} matrix rows, got {len(lines) - 1}")
    try:
        rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except ValueError:
        raise ValueError("matrix entries must be integers") from None
    if any(len(row) != 2 * g for row in rows):
        raise ValueError("matrix rows must have 2g entries")
    return SpMatrix(rows)


# ---------------------------------------------------------------------------
# Factorisation


def _euclid_pair(read, move_a, move_b):
    """Drive the pair (a, b) read by ``read`` to (d, 0) with gcd moves.

    ``move_a(t)`` must add t*b to a, ``move_b(t)`` must subtract t*a from b.
    Returns nothing; the moves are expected to record themselves.
    """
    a, b = read()
    while b != 0:
        if a == 0:
            move_a(1)
            a, b = read()
        q = b // a
        if q != 0:
            move_b(q)
        a, b = read()
        if b == 0:
            break
        q = a // b
        if q != 0:
            move_a(-q)
        a, b = read()


class _Eliminator:
    """Row-operation state for symplectic Gaussian elimination.

    Left-multiplies an integer matrix by generator powers, recording them.
    Indices are local (1-based within the current block); ``offset`` shifts
    them to the caller's numbering on emission.
    """

    def __init__(self, rows: list[list[int]], offset: int):
        self.rows = rows
        self.g = len(rows) // 2
        self.offset = offset
        self.ops: list[GenPower] = []

    def apply(self, name: str, i: int, j: int | None, exp: int):
        if exp == 0:
            return
        p = gen(name, i, j, exp)
        _left_apply(p, self.rows, self.g)
        shifted = p._replace(
            i=p.i + self.offset, j=None if p.j is None else p.j + self.offset
        )
        self.ops.append(shifted)

    # -- column stage: drive column 0 to the first basis vector ------------

    def reduce_first_column(self):
        g = self.g
        col = 0

        def pair_reader(i):
            return lambda: (self.rows[i][col], self.rows[g + i][col])

        # gcd within each (a_i, b_i) coordinate pair
        for i in range(g):
            _euclid_pair(
                pair_reader(i),
                lambda t, i=i: self.apply("Ta", i + 1, None, t),
                lambda t, i=i: self.apply("Tb", i + 1, None, t),
            )
        # merge every a_j (j >= 2) into a_1; the b-entries are all zero now,
        # so Nu moves touch nothing else in this column
        for j in range(1, g):

            def read(j=j):
                return (self.rows[0][col], self.rows[j][col])

            a1, aj = read()
            while aj != 0:
                if a1 == 0:
                    self.apply("Nu", 1, j + 1, 1)
                    a1, aj = read()
                q = aj // a1
                if q != 0:
                    self.apply("Nu", j + 1, 1, -q)
                a1, aj = read()
                if aj == 0:
                    break
                q = a1 // aj
                if q != 0:
                    self.apply("Nu", 1, j + 1, -q)
                a1, aj = read()
        if self.rows[0][col] == -1:
            # (-1, 0) -> (1, 0) on the first hyperbolic pair
            self.apply("Tb", 1, None, 1)
            self.apply("Ta", 1, None, 2)
            self.apply("Tb", 1, None, 1)
        if self.column_is(0, 0):
            return
        raise ValueError("matrix is not symplectic: first column not unimodular")

    def column_is(self, col: int, basis_index: int) -> bool:
        n = 2 * self.g
        return all(
            self.rows[r][col] == (1 if r == basis_index else 0) for r in range(n)
        )

    # -- beta stage: fix the image of the first dual basis vector ----------

    def fix_first_beta(self):
        """Assuming column 0 is e_0, drive column g to e_g.

        Uses only Ta(1), Mu(1,*) and Nu(1,*), all of which fix the first
        basis vector.
        """
        g = self.g
        col = g
        if self.rows[g][col] != 1:
            raise ValueError(
                "matrix is not symplectic: pairing of fixed vector broken"
            )
        for i in range(1, g):
            self.apply("Mu", 1, i + 1, self.rows[i][col])
        for j in range(1, g):
            self.apply("Nu", 1, j + 1, self.rows[g + j][col])
        self.apply("Ta", 1, None, -self.rows[0][col])
        if not self.column_is(col, g):
            raise ValueError("matrix is not symplectic: beta column irreducible")


def _strip_first_pair(rows: list[list[int]]) -> list[list[int]]:
    """Drop the first hyperbolic pair from a block-diagonal matrix."""
    g = len(rows) // 2
    n = 2 * g
    keep = list(range(1, g)) + list(range(g + 1, n))
    for r in (0, g):
        for c in range(n):
            expect = 1 if r == c else 0
            if rows[r][c] != expect or rows[c][r] != expect:
                raise ValueError("residual matrix is not block-diagonal")
    return [[rows[r][c] for c in keep] for r in keep]


def _factor(rows: list[list[int]], offset: int) -> Word:
    """Word over indices offset+1..offset+g for the matrix held in ``rows``."""
    g = len(rows) // 2
    if g == 0:
        return ()
    if all(
        rows[r][c] == (1 if r == c else 0) for r in range(2 * g) for c in range(2 * g)
    ):
        return ()
    elim = _Eliminator(rows, offset)
    elim.reduce_first_column()
    elim.fix_first_beta()
    rest = _factor(_strip_first_pair(rows), offset + 1)
    return _normalize(_undo_ops(elim.ops) + rest)


def general_sp_factor(h: SpMatrix, first_index: int = 2) -> Word:
    """Factor a symplectic matrix into named generators over a shifted index set.

    ``h`` is the matrix of a symplectic automorphism of the sub-lattice
    spanned by the basis pairs ``first_index .. first_index + g(h) - 1`` of
    some ambient lattice; the returned word uses exactly those indices and
    evaluates (in the sub-lattice coordinates) to ``h``.
    """
    if first_index < 1:
        raise ValueError("first_index must be at least 1")
    if not h.is_symplectic():
        raise ValueError("matrix is not symplectic")
    word = _factor([list(row) for row in h.rows], first_index - 1)
    return _embed_check(word, h, first_index)


def _embed_check(word: Word, h: SpMatrix, first_index: int) -> Word:
    shifted = tuple(
        p._replace(
            i=p.i - (first_index - 1),
            j=None if p.j is None else p.j - (first_index - 1),
        )
        for p in word
    )
    assert evaluate(shifted, h.g) == h
    return word


FORBIDDEN_NOTE = "Tb(1), Eta(1,*) and Nu(*,1) are never used"


def stabilizer_decompose(h: SpMatrix) -> Word:
    """Word for a symplectic matrix fixing the first basis vector.

    The output avoids Tb(1), Eta(1,i) and Nu(i,1) entirely: the image of the
    first dual basis vector is corrected with Mu(1,i), Nu(1,j) and Ta(1)
    powers, after which the residual is the identity on the first hyperbolic
    pair and factors over indices 2..g.
    """
    if not h.is_symplectic():
        raise ValueError("matrix is not symplectic")
    g = h.g
    e0 = tuple(1 if r == 0 else 0 for r in range(2 * g))
    if h.column(0) != e0:
        raise ValueError("matrix does not fix the first basis vector")
    rows = [list(row) for row in h.rows]
    elim = _Eliminator(rows, 0)
    elim.fix_first_beta()
    rest = _factor(_strip_first_pair(rows), 1)
    word = _normalize(_undo_ops(elim.ops) + rest)
    assert not any(_is_forbidden(p) for p in word)
    return word


def _is_forbidden(p: GenPower) -> bool:
    if p.name == "Tb" and p.i == 1:
        return True
    if p.name == "Eta" and 1 in (p.i, p.j):
        return True
    if p.name == "Nu" and p.j == 1:
        return True
    return False


def symplectic_completion(v: Sequence[int]) -> SpMatrix:
    """A symplectic matrix whose first column is the primitive vector ``v``.

    Produced by running the gcd-driven column reduction on ``v`` and
    inverting the recorded moves, so the result is symplectic by
    construction.
    """
    v = [int(x) for x in v]
    if len(v) % 2 != 0 or not v:
        raise ValueError("vector length must be even and positive")
    d = 0
    for x in v:
        d = math.gcd(d, x)
    if d != 1:
        raise ValueError("vector must be primitive (gcd of entries 1)")
    g = len(v) // 2
    elim = _Eliminator([[x] for x in v], offset=0)
    elim.reduce_first_column()
    completion = evaluate(_undo_ops(elim.ops), g)
    assert completion.column(0) == tuple(v)
    return completion
