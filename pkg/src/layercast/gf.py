"""Prime-field arithmetic and small-dimension vector algebra.

Coefficient vectors are plain tuples of ints in ``range(q)``; entry ``i``
(0-based) is the coefficient of layer ``i + 1``.  All routines are pure and
deterministic, so results are safe to share between threads.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import NotABasis, PreconditionViolated

Vector = tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    p = n + 1
    while not is_prime(p):
        p += 1
    return p


class Field:
    """The prime field F_q."""

    def __init__(self, q: int):
        if not is_prime(q):
            raise ValueError(f"field size {q} is not prime")
        self.q = q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.q - 2, self.q)

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("Field", self.q))

    def __repr__(self) -> str:
        return f"Field({self.q})"


def vec_zero(k: int) -> Vector:
    return (0,) * k


def unit_vector(i: int, k: int) -> Vector:
    """Unit vector of layer i (1-based)."""
    if not 1 <= i <= k:
        raise ValueError(f"layer {i} out of range 1..{k}")
    return tuple(1 if j == i - 1 else 0 for j in range(k))


def vec_add(a: Vector, b: Vector, field: Field) -> Vector:
    return tuple((x + y) % field.q for x, y in zip(a, b))

def vec_scale(c: int, a: Vector, field: Field) -> Vector:
    c %= field.q
    return tuple((c * x) % field.q for x in a)


def vec_addmul(a: Vector, c: int, b: Vector, field: Field) -> Vector:
    """a + c*b."""
    c %= field.q
    return tuple((x + c * y) % field.q for x, y in zip(a, b))


def dot(a: Vector, b: Vector, field: Field) -> int:
    return sum(x * y for x, y in zip(a, b)) % field.q


def height(v: Vector) -> int:
    """Index (1-based) of the highest non-zero entry; 0 for the zero vector."""
    for i in range(len(v) - 1, -1, -1):
        if v[i] != 0:
            return i + 1
    return 0


def rref(vectors: Iterable[Vector], field: Field) -> tuple[Vector, ...]:
    """Reduced row echelon form of the given rows; zero rows dropped.

    The result is canonical: two sets of vectors span the same subspace
    iff their rref rows are equal.
    """
    q = field.q
    rows = [list(v) for v in vectors]
    if not rows:
        return ()
    k = len(rows[0])
    out: list[list[int]] = []
    pivots: list[int] = []
    for row in rows:
        row = list(row)
        for prow, pcol in zip(out, pivots):
            c = row[pcol]
            if c:
                for j in range(k):
                    row[j] = (row[j] - c * prow[j]) % q
        col = next((j for j, x in enumerate(row) if x), None)
        if col is None:
            continue
        inv = pow(row[col], q - 2, q)
        row = [(x * inv) % q for x in row]
        out.append(row)
        pivots.append(col)
        # keep rows sorted by pivot column and re-reduce above
        order = sorted(range(len(out)), key=lambda r: pivots[r])
        out = [out[r] for r in order]
        pivots = [pivots[r] for r in order]
        for ri in range(len(out)):
            for rj in range(len(out)):
                if ri != rj:
                    c = out[ri][pivots[rj]]
                    if c and pivots[rj] != pivots[ri]:
                        for j in range(k):
                            out[ri][j] = (out[ri][j] - c * out[rj][j]) % q
    return tuple(tuple(r) for r in out)


class Subspace:
    """A linear subspace of F_q^k held as a canonical echelon basis."""

    def __init__(self, vectors: Iterable[Vector], field: Field):
        self.field = field
        self.basis = rref(vectors, field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Vector) -> bool:
        q = self.field.q
        rem = list(v)
        for row in self.basis:
            pcol = next(j for j, x in enumerate(row) if x)
            c = rem[pcol]
            if c:
                for j in range(len(rem)):
                    rem[j] = (rem[j] - c * row[j]) % q
        return not any(rem)

    def extended(self, v: Vector) -> "Subspace":
        return Subspace(list(self.basis) + [tuple(v)], self.field)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and other.field == self.field
            and other.basis == self.basis
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, basis={self.basis})"


def span(vectors: Iterable[Vector], field: Field) -> Subspace:
    return Subspace(vectors, field)


def contains(sub: Subspace, v: Vector) -> bool:
    return sub.contains(v)


def solve_in_span(vectors: Sequence[Vector], target: Vector, field: Field):
    """Coefficients expressing target as a combination of vectors, or None."""
    q = field.q
    n = len(vectors)
    if not n:
        return [] if not any(target) else None
    k = len(target)
    # augmented system: columns are the vectors, rhs is target
    rows = [[vectors[j][i] % q for j in range(n)] + [target[i] % q] for i in range(k)]
    piv_cols: list[int] = []
    r = 0
    for c in range(n):
        sel = next((i for i in range(r, k) if rows[i][c]), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = pow(rows[r][c], q - 2, q)
        rows[r] = [(x * inv) % q for x in rows[r]]
        for i in range(k):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % q for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == k:
            break
    for i in range(r, k):
        if rows[i][n]:
            return None
    coeffs = [0] * n
    for i, c in enumerate(piv_cols):
        coeffs[c] = rows[i][n]
    return coeffs


def invert_matrix(rows: Sequence[Sequence[int]], field: Field):
    """Inverse of a square matrix over F_q, or None if singular."""
    q = field.q
    n = len(rows)
    a = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        sel = next((i for i in range(col, n) if a[i][col] % q), None)
        if sel is None:
            return None
        a[col], a[sel] = a[sel], a[col]
        inv = pow(a[col][col] % q, q - 2, q)
        a[col] = [(x * inv) % q for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] % q:
                f = a[i][col] % q
                a[i] = [(x - f * y) % q for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def nullspace(rows: Sequence[Sequence[int]], ncols: int, field: Field) -> list[Vector]:
    """Canonical basis of {x in F_q^ncols : row . x == 0 for every row}."""
    q = field.q
    mat = [list(r[:ncols]) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        sel = next((i for i in range(r, len(mat)) if mat[i][c] % q), None)
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        inv = pow(mat[r][c] % q, q - 2, q)
        mat[r] = [(x * inv) % q for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] % q:
                f = mat[i][c] % q
                mat[i] = [(x - f * y) % q for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for c in free:
        v = [0] * ncols
        v[c] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-mat[i][c]) % q
        out.append(tuple(v))
    return out


def control_vectors(basis: Sequence[Vector], field: Field) -> list[Vector]:
    """Dual vectors y_1..y_n for a basis of the first-n-layer subspace.

    Requires every basis vector to vanish on coordinates beyond n and the
    n leading coordinates to form an invertible matrix.  The returned y_j
    satisfy basis[j] . y_j != 0 and basis[i] . y_j == 0 for i != j, each
    supported on the first n coordinates.
    """
    n = len(basis)
    if n == 0:
        return []
    k = len(basis[0])
    if n > k:
        raise NotABasis("more vectors than dimensions")
    for v in basis:
        if any(x % field.q for x in v[n:]):
            raise NotABasis("vector leaves the first-n-layer subspace")
    lead = [[v[j] % field.q for j in range(n)] for v in basis]
    inv = invert_matrix(lead, field)
    if inv is None:
        raise NotABasis("vectors are linearly dependent")
    pad = (0,) * (k - n)
    # column j of the inverse isolates basis[j]
    return [tuple(inv[i][j] for i in range(n)) + pad for j in range(n)]


def coding_lemma_combine(
    pairs: Sequence[tuple[Vector, Vector]], field: Field
) -> Vector:
    """Combination b of the x_i with b . y_i != 0 for every pair (x_i, y_i).

    Deterministic incremental search: b starts at x_1 and, whenever the
    next product vanishes, the smallest update b <- beta*b + alpha*x fixing
    it while keeping all earlier products non-zero is applied (beta = 1
    preferred).  Rescaling the running combination is what makes the step
    total for n <= q: each constraint kills one line of (beta, alpha)
    values through the origin, and n <= q lines cannot cover the plane.
    Requires n <= q and x_i . y_i != 0 throughout.
    """
    n = len(pairs)
    q = field.q
    if n == 0:
        raise PreconditionViolated("no pairs given")
    if n > q:
        raise PreconditionViolated(f"{n} pairs over F_{q} (need n <= q)")
    for x, y in pairs:
        if dot(x, y, field) == 0:
            raise PreconditionViolated("pair with x . y == 0")
    b = pairs[0][0]
    for i in range(1, n):
        x, y = pairs[i]
        if dot(b, y, field) != 0:
            continue
        chosen = None
        for beta in (1, *range(2, q), 0):
            for alpha in range(1, q):
                cand = vec_add(
                    vec_scale(beta, b, field), vec_scale(alpha, x, field), field
                )
                if all(dot(cand, pairs[j][1], field) != 0 for j in range(i + 1)):
                    chosen = cand
                    break
            if chosen is not None:
                break
        if chosen is None:
            raise PreconditionViolated("no combining coefficient found")
        b = chosen
    return b
