"""Exact dense linear algebra over the coefficient rings.

Matrices are immutable tuples of tuples of exact scalars.  The central
primitive is the Smith normal form U*A*V = D with both transition matrices
and their inverses tracked; everything else (solving, kernels, lattice
membership, preimages, affine morphism systems) reduces to it.

Over the integers D has a nonnegative diagonal with the divisibility chain
d1 | d2 | ...; over a field the diagonal is 1,...,1,0,...,0.  Pivot choice
is deterministic, so all outputs are byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rings import CoefficientRing, RingMismatchError


class Matrix:
    """An immutable exact matrix over a coefficient ring.

    Shape is explicit so that 0-row and 0-column matrices (empty
    presentations, maps to or from the zero module) work everywhere.
    """

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: CoefficientRing, rows, ncols: int | None = None):
        rows = tuple(tuple(ring.element(x) for x in row) for row in rows)
        if rows:
            widths = {len(r) for r in rows}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            width = widths.pop()
            if ncols is not None and ncols != width:
                raise ValueError(f"expected {ncols} columns, got {width}")
            ncols = width
        elif ncols is None:
            ncols = 0
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(ring, nrows, ncols):
        zero = ring.zero
        return Matrix(ring, [[zero] * ncols for _ in range(nrows)], ncols)

    @staticmethod
    def identity(ring, n):
        one, zero = ring.one, ring.zero
        return Matrix(ring, [[one if i == j else zero for j in range(n)] for i in range(n)], n)

    @staticmethod
    def from_columns(ring, columns, nrows):
        cols = list(columns)
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column length mismatch")
        return Matrix(ring, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @staticmethod
    def diagonal(ring, entries, nrows=None, ncols=None):
        entries = [ring.element(e) for e in entries]
        nrows = len(entries) if nrows is None else nrows
        ncols = len(entries) if ncols is None else ncols
        zero = ring.zero
        return Matrix(
            ring,
            [[entries[i] if i == j and i < len(entries) else zero for j in range(ncols)] for i in range(nrows)],
            ncols,
        )

    # -- access -------------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def column(self, j):
        return tuple(self.rows[i][j] for i in range(self.nrows))

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def is_zero(self) -> bool:
        zero = self.ring.zero
        return all(x == zero for row in self.rows for x in row)

    # -- arithmetic ---------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ring = self.ring
        zero = ring.zero
        out = []
        for i in range(self.nrows):
            arow = self.rows[i]
            orow = []
            for j in range(other.ncols):
                acc = zero
                for k in range(self.ncols):
                    a = arow[k]
                    if a != zero:
                        acc = acc + a * other.rows[k][j]
                orow.append(ring.element(acc))
            out.append(orow)
        return Matrix(ring, out, other.ncols)

    def apply(self, vector):
        """Matrix-vector product, returning a tuple."""
        if len(vector) != self.ncols:
            raise ValueError("vector length mismatch")
        ring = self.ring
        zero = ring.zero
        vec = [ring.element(x) for x in vector]
        return tuple(
            ring.element(sum((row[k] * vec[k] for k in range(self.ncols)), zero))
            for row in self.rows
        )

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        ring = self.ring
        return Matrix(
            ring,
            [[ring.add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        ring = self.ring
        return Matrix(ring, [[ring.neg(a) for a in row] for row in self.rows], self.ncols)

    def scale(self, c):
        ring = self.ring
        c = ring.element(c)
        return Matrix(ring, [[ring.mul(c, a) for a in row] for row in self.rows], self.ncols)

    def transpose(self):
        return Matrix(self.ring, [self.column(j) for j in range(self.ncols)], self.nrows)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix(
            self.ring,
            [self.rows[i] + other.rows[i] for i in range(self.nrows)],
            self.ncols + other.ncols,
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix(self.ring, self.rows + other.rows, self.ncols)

    def take_columns(self, indices):
        return Matrix(self.ring, [[row[j] for j in indices] for row in self.rows], len(indices))

    def take_rows(self, indices):
        return Matrix(self.ring, [self.rows[i] for i in indices], self.ncols)

    def to_lists(self):
        return [list(row) for row in self.rows]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ring, self.ncols, self.rows))

    def __repr__(self):
        return f"Matrix({self.ring}, {self.nrows}x{self.ncols})"


def block_diagonal(ring, blocks, shapes=None):
    """Block-diagonal assembly; `shapes` supplies sizes for empty blocks."""
    if shapes is None:
        shapes = [b.shape for b in blocks]
    nrows = sum(s[0] for s in shapes)
    ncols = sum(s[1] for s in shapes)
    zero = ring.zero
    out = [[zero] * ncols for _ in range(nrows)]
    r0 = c0 = 0
    for block, (r, c) in zip(blocks, shapes):
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = block.rows[i][j]
        r0 += r
        c0 += c
    return Matrix(ring, out, ncols)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithForm:
    """U @ A @ V == D with U, V invertible over the ring (unimodular over Z)."""

    U: Matrix
    U_inv: Matrix
    D: Matrix
    V: Matrix
    V_inv: Matrix

    @property
    def diagonal(self):
        n = min(self.D.nrows, self.D.ncols)
        return tuple(self.D.rows[i][i] for i in range(n))

    @property
    def rank(self):
        zero = self.D.ring.zero
        return sum(1 for d in self.diagonal if d != zero)


class _Worker:
    """Mutable state for the reduction, tracking transitions and inverses."""

    def __init__(self, A: Matrix):
        self.ring = A.ring
        self.red = A.ring.reduce
        self.m = A.nrows
        self.n = A.ncols
        self.d = [list(r) for r in A.rows]
        self.u = [[self.ring.one if i == j else self.ring.zero for j in range(self.m)] for i in range(self.m)]
        self.ui = [r[:] for r in self.u]
        self.v = [[self.ring.one if i == j else self.ring.zero for j in range(self.n)] for i in range(self.n)]
        self.vi = [r[:] for r in self.v]

    # Row ops act on d and u on the left; the inverse op lands on ui columns.
    def row_add(self, i, j, c):
        # row_i += c * row_j
        red = self.red
        for mat in (self.d, self.u):
            ri, rj = mat[i], mat[j]
            for k in range(len(ri)):
                ri[k] = red(ri[k] + c * rj[k])
        for row in self.ui:
            row[j] = red(row[j] - c * row[i])

    def row_swap(self, i, j):
        self.d[i], self.d[j] = self.d[j], self.d[i]
        self.u[i], self.u[j] = self.u[j], self.u[i]
        for row in self.ui:
            row[i], row[j] = row[j], row[i]

    def row_scale(self, i, c, c_inv):
        red = self.red
        self.d[i] = [red(c * x) for x in self.d[i]]
        self.u[i] = [red(c * x) for x in self.u[i]]
        for row in self.ui:
            row[i] = red(c_inv * row[i])

    def col_add(self, j, k, c):
        # col_j += c * col_k
        red = self.red
        for row in self.d:
            row[j] = red(row[j] + c * row[k])
        for row in self.v:
            row[j] = red(row[j] + c * row[k])
        vi_k, vi_j = self.vi[k], self.vi[j]
        for t in range(len(vi_k)):
            vi_k[t] = red(vi_k[t] - c * vi_j[t])

    def col_swap(self, j, k):
        for row in self.d:
            row[j], row[k] = row[k], row[j]
        for row in self.v:
            row[j], row[k] = row[k], row[j]
        self.vi[j], self.vi[k] = self.vi[k], self.vi[j]

    def col_scale(self, j, c, c_inv):
        red = self.red
        for row in self.d:
            row[j] = red(c * row[j])
        for row in self.v:
            row[j] = red(c * row[j])
        self.vi[j] = [red(c_inv * x) for x in self.vi[j]]

    def result(self) -> SmithForm:
        ring = self.ring
        return SmithForm(
            U=Matrix(ring, self.u, self.m),
            U_inv=Matrix(ring, self.ui, self.m),
            D=Matrix(ring, self.d, self.n),
            V=Matrix(ring, self.v, self.n),
            V_inv=Matrix(ring, self.vi, self.n),
        )


def _smith_field(w: _Worker) -> None:
    ring = w.ring
    zero, one = ring.zero, ring.one
    t = 0
    while t < min(w.m, w.n):
        pivot = None
        for i in range(t, w.m):
            for j in range(t, w.n):
                if w.d[i][j] != zero:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            w.row_swap(t, i)
        if j != t:
            w.col_swap(t, j)
        p = w.d[t][t]
        if p != one:
            w.row_scale(t, ring.inv(p), p)
        for i in range(w.m):
            if i != t and w.d[i][t] != zero:
                w.row_add(i, t, ring.neg(w.d[i][t]))
        for j in range(w.n):
            if j != t and w.d[t][j] != zero:
                w.col_add(j, t, ring.neg(w.d[t][j]))
        t += 1


def _smith_integer(w: _Worker) -> None:
    m, n = w.m, w.n
    t = 0
    while t < min(m, n):
        # deterministic pivot: least |value|, then row, then column
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = w.d[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            w.row_swap(t, i)
        if j != t:
            w.col_swap(t, j)
        while True:
            # clear column t
            moved = False
            for i in range(t + 1, m):
                x = w.d[i][t]
                if x == 0:
                    continue
                q = x // w.d[t][t]
                if q:
                    w.row_add(i, t, -q)
                if w.d[i][t] != 0:
                    w.row_swap(t, i)
                    moved = True
            if moved:
                continue
            # clear row t
            for j in range(t + 1, n):
                x = w.d[t][j]
                if x == 0:
                    continue
                q = x // w.d[t][t]
                if q:
                    w.col_add(j, t, -q)
                if w.d[t][j] != 0:
                    w.col_swap(t, j)
                    moved = True
            if moved:
                continue
            # pivot must divide the rest of the submatrix for the chain
            d = w.d[t][t]
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if w.d[i][j] % d != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            w.row_add(t, offender, 1)
        t += 1
    for i in range(min(m, n)):
        if w.d[i][i] < 0:
            w.row_scale(i, -1, -1)


def smith_normal_form(A: Matrix) -> SmithForm:
    """Diagonalize A as U @ A @ V = D with invertible transitions.

    >>> from qrep.rings import ZZ
    >>> sf = smith_normal_form(Matrix(ZZ, [[2, 4], [6, 8]]))
    >>> sf.diagonal
    (2, 4)
    """
    w = _Worker(A)
    if A.ring.is_field:
        _smith_field(w)
    else:
        _smith_integer(w)
    return w.result()


# ---------------------------------------------------------------------------
# Solving and kernels
# ---------------------------------------------------------------------------


def solve_from_smith(sf: SmithForm, b) -> tuple | None:
    """One solution x of A x = b given the Smith form of A, or None."""
    ring = sf.D.ring
    zero = ring.zero
    c = sf.U.apply(b)
    diag = sf.diagonal
    y = [zero] * sf.D.ncols
    for i in range(sf.D.nrows):
        ci = c[i]
        if i < len(diag) and diag[i] != zero:
            if ring.is_field:
                y[i] = ring.mul(ci, ring.inv(diag[i]))
            else:
                q, r = divmod(ci, diag[i])
                if r != 0:
                    return None
                y[i] = q
        elif ci != zero:
            return None
    return sf.V.apply(y)


def solve(A: Matrix, b) -> tuple | None:
    """One solution of A x = b over the ring; None if there is none."""
    return solve_from_smith(smith_normal_form(A), b)


def solve_matrix(A: Matrix, B: Matrix) -> Matrix | None:
    """One solution X of A @ X = B, or None."""
    sf = smith_normal_form(A)
    cols = []
    for j in range(B.ncols):
        x = solve_from_smith(sf, B.column(j))
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_columns(A.ring, cols, A.ncols)


def kernel_basis(A: Matrix) -> Matrix:
    """Columns spanning {x : A x = 0}.

    Over Z the columns generate the full integer kernel lattice (they are
    the V-columns matching zero diagonal entries, hence saturated).
    """
    sf = smith_normal_form(A)
    zero = A.ring.zero
    diag = sf.diagonal
    free = [j for j in range(A.ncols) if j >= len(diag) or diag[j] == zero]
    return sf.V.take_columns(free)


# ---------------------------------------------------------------------------
# Lattices (finitely generated subgroups / subspaces of ring^n)
# ---------------------------------------------------------------------------


class Lattice:
    """Subgroup of ring^n generated by the columns of a matrix.

    Over a field this is simply a subspace.  The Smith form of the
    generator matrix is cached, so repeated membership tests are cheap.
    """

    __slots__ = ("ring", "ambient", "gens", "_sf")

    def __init__(self, ring, ambient: int, gens: Matrix | None = None):
        if gens is None:
            gens = Matrix.zeros(ring, ambient, 0)
        if gens.nrows != ambient or gens.ring != ring:
            raise ValueError("generator matrix does not match ambient space")
        self.ring = ring
        self.ambient = ambient
        self.gens = gens
        self._sf = None

    @property
    def sf(self) -> SmithForm:
        if self._sf is None:
            self._sf = smith_normal_form(self.gens)
        return self._sf

    def coordinates(self, v) -> tuple | None:
        if len(v) != self.ambient:
            raise ValueError("vector length mismatch")
        return solve_from_smith(self.sf, v)

    def contains(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains_columns(self, M: Matrix) -> bool:
        return all(self.contains(M.column(j)) for j in range(M.ncols))

    def contains_lattice(self, other: "Lattice") -> bool:
        return self.contains_columns(other.gens)

    def equals(self, other: "Lattice") -> bool:
        return self.contains_lattice(other) and other.contains_lattice(self)

    def sum(self, other: "Lattice") -> "Lattice":
        if other.ambient != self.ambient:
            raise ValueError("ambient mismatch")
        return Lattice(self.ring, self.ambient, self.gens.hstack(other.gens))

    def preimage(self, F: Matrix) -> "Lattice":
        """{x : F x in self} as a lattice in ring^{F.ncols}."""
        if F.nrows != self.ambient:
            raise ValueError("map does not land in the ambient space")
        stacked = F.hstack(-self.gens)
        ker = kernel_basis(stacked)
        gens = ker.take_rows(range(F.ncols))
        return Lattice(self.ring, F.ncols, gens)

    def intersection(self, other: "Lattice") -> "Lattice":
        w = other.preimage(self.gens)
        return Lattice(self.ring, self.ambient, self.gens @ w.gens)

    def is_zero(self) -> bool:
        zero = self.ring.zero
        return all(d == zero for d in self.sf.diagonal)

    def __repr__(self):
        return f"Lattice({self.ring}, ambient={self.ambient}, gens={self.gens.ncols})"


# ---------------------------------------------------------------------------
# Affine systems in matrix unknowns
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixVar:
    name: str
    nrows: int
    ncols: int
    offset: int

    @property
    def size(self):
        return self.nrows * self.ncols

    def index(self, i, j):
        return self.offset + i * self.ncols + j


class AffineSystem:
    """Simultaneous linear equations in several matrix unknowns.

    A constraint states  sum of terms == rhs  where each term is
    left @ X @ right for an unknown X (either side optional), and the
    equality may be taken modulo a column lattice (each column of the
    matrix expression is only required to match up to the lattice).
    Lattice slack is encoded with fresh auxiliary unknowns, and the whole
    system is solved exactly by one Smith reduction.
    """

    def __init__(self, ring):
        self.ring = ring
        self.vars: list[MatrixVar] = []
        self._by_name: dict[str, MatrixVar] = {}
        self._primary_size = 0
        self._constraints = []  # (terms, rhs Matrix, mod gens Matrix|None)

    def add_var(self, name: str, nrows: int, ncols: int) -> MatrixVar:
        if name in self._by_name:
            raise ValueError(f"duplicate variable {name}")
        var = MatrixVar(name, nrows, ncols, self._primary_size)
        self.vars.append(var)
        self._by_name[name] = var
        self._primary_size += var.size
        return var

    def add_constraint(self, terms, rhs: Matrix | None = None, mod: Matrix | None = None):
        """terms: list of (sign, left Matrix|None, var, right Matrix|None)."""
        shape = None
        for sign, left, var, right in terms:
            r = left.nrows if left is not None else var.nrows
            c = right.ncols if right is not None else var.ncols
            if left is not None and left.ncols != var.nrows:
                raise ValueError("left factor shape mismatch")
            if right is not None and right.nrows != var.ncols:
                raise ValueError("right factor shape mismatch")
            if shape is None:
                shape = (r, c)
            elif shape != (r, c):
                raise ValueError("terms have inconsistent shapes")
        if shape is None:
            raise ValueError("constraint needs at least one term")
        if rhs is None:
            rhs = Matrix.zeros(self.ring, *shape)
        if rhs.shape != shape:
            raise ValueError("rhs shape mismatch")
        if mod is not None and mod.nrows != shape[0]:
            raise ValueError("mod lattice ambient mismatch")
        self._constraints.append((list(terms), rhs, mod))

    # -- assembly -----------------------------------------------------

    def _assemble(self):
        ring = self.ring
        zero = ring.zero
        slack = 0
        widths = []
        for terms, rhs, mod in self._constraints:
            w = mod.ncols if mod is not None else 0
            widths.append(w)
            slack += w * rhs.ncols
        total = self._primary_size + slack
        rows = []
        rhs_vec = []
        slack_base = self._primary_size
        for (terms, rhs, mod), w in zip(self._constraints, widths):
            r, c = rhs.shape
            for j in range(c):
                for i in range(r):
                    row = [zero] * total
                    for sign, left, var, right in terms:
                        for k in range(var.nrows):
                            lv = left.rows[i][k] if left is not None else (ring.one if k == i else zero)
                            if lv == zero:
                                continue
                            for l in range(var.ncols):
                                rv = right.rows[l][j] if right is not None else (ring.one if l == j else zero)
                                if rv == zero:
                                    continue
                                idx = var.index(k, l)
                                coeff = lv * rv
                                if sign < 0:
                                    coeff = -coeff
                                row[idx] = ring.element(row[idx] + coeff)
                    if mod is not None:
                        base = slack_base + j * w
                        for t in range(w):
                            row[base + t] = ring.neg(mod.rows[i][t])
                    rows.append(row)
                    rhs_vec.append(rhs.rows[i][j])
            if mod is not None:
                slack_base += w * rhs.ncols
        return Matrix(ring, rows, total), tuple(rhs_vec)

    def _split(self, flat):
        out = {}
        for var in self.vars:
            rows = [
                [flat[var.index(i, j)] for j in range(var.ncols)]
                for i in range(var.nrows)
            ]
            out[var.name] = Matrix(self.ring, rows, var.ncols)
        return out

    def solve(self) -> dict[str, Matrix] | None:
        """One solution assigning a matrix to each unknown, or None."""
        M, b = self._assemble()
        x = solve(M, b)
        if x is None:
            return None
        return self._split(x)

    def solution_set(self):
        """(particular dict | None, homogeneous lattice over the primary vars).

        The lattice columns are flattened var-vectors; use split_vector()
        to read a column back into matrices.
        """
        M, b = self._assemble()
        sf = smith_normal_form(M)
        x = solve_from_smith(sf, b)
        particular = self._split(x) if x is not None else None
        zero = self.ring.zero
        diag = sf.diagonal
        free = [j for j in range(M.ncols) if j >= len(diag) or diag[j] == zero]
        ker = sf.V.take_columns(free).take_rows(range(self._primary_size))
        # drop columns that are identically zero on the primary block
        keep = [j for j in range(ker.ncols) if any(ker.rows[i][j] != zero for i in range(ker.nrows))]
        lattice = Lattice(self.ring, self._primary_size, ker.take_columns(keep))
        return particular, lattice

    def split_vector(self, flat) -> dict[str, Matrix]:
        if len(flat) != self._primary_size:
            raise ValueError("flat vector length mismatch")
        return self._split(flat)

    def flatten(self, assignment: dict[str, Matrix]) -> tuple:
        flat = [self.ring.zero] * self._primary_size
        for var in self.vars:
            mat = assignment[var.name]
            if mat.shape != (var.nrows, var.ncols):
                raise ValueError(f"shape mismatch for {var.name}")
            for i in range(var.nrows):
                for j in range(var.ncols):
                    flat[var.index(i, j)] = mat.rows[i][j]
        return tuple(flat)
