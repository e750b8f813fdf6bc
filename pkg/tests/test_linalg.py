from hypothesis import given, settings, strategies as st

from qrep.rings import ZZ, QQ, GF
from qrep.linalg import (
    AffineSystem,
    Lattice,
    Matrix,
    block_diagonal,
    kernel_basis,
    smith_normal_form,
    solve,
    solve_matrix,
)


def mat(rows, ring=ZZ):
    return Matrix(ring, rows)


small_int = st.integers(min_value=-9, max_value=9)


def int_matrices(max_dim=4):
    return st.integers(min_value=0, max_value=max_dim).flatmap(
        lambda m: st.integers(min_value=0, max_value=max_dim).flatmap(
            lambda n: st.lists(
                st.lists(small_int, min_size=n, max_size=n), min_size=m, max_size=m
            ).map(lambda rows: Matrix(ZZ, rows, n))
        )
    )


class TestSmithNormalForm:
    def test_two_by_two(self):
        sf = smith_normal_form(mat([[2, 4], [6, 8]]))
        assert sf.diagonal == (2, 4)

    def test_zero_matrix(self):
        sf = smith_normal_form(Matrix.zeros(ZZ, 3, 2))
        assert sf.D == Matrix.zeros(ZZ, 3, 2)

    def test_identity(self):
        sf = smith_normal_form(Matrix.identity(ZZ, 3))
        assert sf.D == Matrix.identity(ZZ, 3)

    def test_diag_2_3_has_factor_6(self):
        sf = smith_normal_form(mat([[2, 0], [0, 3]]))
        assert sf.diagonal == (1, 6)

    @settings(max_examples=200, deadline=None)
    @given(int_matrices())
    def test_decomposition_properties(self, A):
        sf = smith_normal_form(A)
        assert sf.U @ A @ sf.V == sf.D
        assert sf.U @ sf.U_inv == Matrix.identity(ZZ, A.nrows)
        assert sf.V @ sf.V_inv == Matrix.identity(ZZ, A.ncols)
        diag = [d for d in sf.diagonal]
        assert all(d >= 0 for d in diag)
        nonzero = [d for d in diag if d != 0]
        # divisibility chain, and zeros only after the nonzero part
        for a, b in zip(nonzero, nonzero[1:]):
            assert b % a == 0
        assert diag[: len(nonzero)] == nonzero
        # off-diagonal must vanish
        for i in range(sf.D.nrows):
            for j in range(sf.D.ncols):
                if i != j:
                    assert sf.D[i, j] == 0

    def test_field_diagonal_is_unit(self):
        sf = smith_normal_form(Matrix(QQ, [[2, 4], [1, 2]]))
        assert sf.diagonal == (1, 0)
        sf5 = smith_normal_form(Matrix(GF(5), [[2, 4], [1, 2]]))
        assert sf5.diagonal == (1, 0)

    def test_deterministic(self):
        A = mat([[2, 4], [6, 8]])
        assert smith_normal_form(A).U == smith_normal_form(A).U


class TestSolve:
    def test_solvable(self):
        A = mat([[2, 0], [0, 3]])
        x = solve(A, (4, 9))
        assert A.apply(x) == (4, 9)

    def test_unsolvable_divisibility(self):
        assert solve(mat([[2]]), (1,)) is None

    def test_unsolvable_rank(self):
        assert solve(mat([[1, 1], [1, 1]]), (0, 1)) is None

    def test_rational_solves_what_z_cannot(self):
        x = solve(Matrix(QQ, [[2]]), (1,))
        assert x is not None and 2 * x[0] == 1

    def test_solve_matrix(self):
        A = mat([[1, 2], [0, 1]])
        B = mat([[1, 0], [0, 1]])
        X = solve_matrix(A, B)
        assert A @ X == B

    @settings(max_examples=100, deadline=None)
    @given(int_matrices(3), st.lists(small_int, min_size=3, max_size=3))
    def test_solution_is_exact(self, A, xs):
        x = tuple(xs[: A.ncols]) + (0,) * max(0, A.ncols - 3)
        b = A.apply(x)
        got = solve(A, b)
        assert got is not None
        assert A.apply(got) == b


class TestKernel:
    def test_kernel_of_projection(self):
        K = kernel_basis(mat([[1, 0]]))
        assert K.ncols == 1
        assert K.column(0) in ((0, 1), (0, -1))

    @settings(max_examples=100, deadline=None)
    @given(int_matrices())
    def test_kernel_annihilates(self, A):
        K = kernel_basis(A)
        assert (A @ K).is_zero()

    def test_kernel_is_saturated(self):
        # x + y = 0 over Z: kernel generated by (1, -1), not (2, -2)
        K = kernel_basis(mat([[1, 1]]))
        lat = Lattice(ZZ, 2, K)
        assert lat.contains((1, -1))


class TestLattice:
    def test_membership(self):
        lat = Lattice(ZZ, 2, mat([[2, 0], [0, 3]]))
        assert lat.contains((2, 3))
        assert not lat.contains((1, 0))

    def test_preimage(self):
        # {x : 2x in 4Z} = 2Z
        lat = Lattice(ZZ, 1, mat([[4]]))
        pre = lat.preimage(mat([[2]]))
        assert pre.contains((2,))
        assert not pre.contains((1,))

    def test_intersection(self):
        a = Lattice(ZZ, 1, mat([[4]]))
        b = Lattice(ZZ, 1, mat([[6]]))
        c = a.intersection(b)
        assert c.contains((12,))
        assert not c.contains((6,))
        assert not c.contains((4,))

    def test_sum_and_equality(self):
        a = Lattice(ZZ, 1, mat([[4]]))
        b = Lattice(ZZ, 1, mat([[6]]))
        s = a.sum(b)
        assert s.equals(Lattice(ZZ, 1, mat([[2]])))

    def test_empty_lattice(self):
        lat = Lattice(ZZ, 2)
        assert lat.is_zero()
        assert lat.contains((0, 0))
        assert not lat.contains((1, 0))


class TestAffineSystem:
    def test_single_matrix_equation(self):
        sys = AffineSystem(ZZ)
        X = sys.add_var("X", 2, 2)
        A = mat([[1, 1], [0, 1]])
        sys.add_constraint([(1, A, X, None)], rhs=Matrix.identity(ZZ, 2))
        sol = sys.solve()
        assert sol is not None
        assert A @ sol["X"] == Matrix.identity(ZZ, 2)

    def test_mod_lattice_constraint(self):
        # 2x == 1 mod 3Z has the solution x = 2 (4 = 1 + 3)
        sys = AffineSystem(ZZ)
        X = sys.add_var("X", 1, 1)
        sys.add_constraint([(1, mat([[2]]), X, None)], rhs=mat([[1]]), mod=mat([[3]]))
        sol = sys.solve()
        assert sol is not None
        assert (2 * sol["X"][0, 0] - 1) % 3 == 0

    def test_coupled_vars(self):
        # X = Y and X + Y = [[2]]
        sys = AffineSystem(ZZ)
        X = sys.add_var("X", 1, 1)
        Y = sys.add_var("Y", 1, 1)
        sys.add_constraint([(1, None, X, None), (-1, None, Y, None)])
        sys.add_constraint([(1, None, X, None), (1, None, Y, None)], rhs=mat([[2]]))
        sol = sys.solve()
        assert sol["X"][0, 0] == 1 and sol["Y"][0, 0] == 1

    def test_inconsistent(self):
        sys = AffineSystem(ZZ)
        X = sys.add_var("X", 1, 1)
        sys.add_constraint([(1, mat([[2]]), X, None)], rhs=mat([[1]]))
        assert sys.solve() is None

    def test_solution_set_lattice(self):
        # x == x has everything; homogeneous lattice is all of Z
        sys = AffineSystem(ZZ)
        X = sys.add_var("X", 1, 1)
        sys.add_constraint([(1, None, X, None), (-1, None, X, None)])
        particular, lattice = sys.solution_set()
        assert particular is not None
        assert lattice.contains((1,))

    def test_right_multiplication(self):
        # X @ [[2],[0]] = [[2],[4]] forces first column (1, 2)
        sys = AffineSystem(ZZ)
        X = sys.add_var("X", 2, 2)
        R = mat([[2], [0]])
        sys.add_constraint([(1, None, X, R)], rhs=mat([[2], [4]]))
        sol = sys.solve()
        assert sol is not None
        assert sol["X"] @ R == mat([[2], [4]])


def test_block_diagonal():
    B = block_diagonal(ZZ, [mat([[1]]), mat([[2, 0], [0, 3]])])
    assert B == mat([[1, 0, 0], [0, 2, 0], [0, 0, 3]])


def test_degenerate_shapes():
    empty = Matrix.zeros(ZZ, 0, 3)
    tall = Matrix.zeros(ZZ, 3, 0)
    prod = tall @ empty
    assert prod.shape == (3, 3)
    assert prod.is_zero()
    sf = smith_normal_form(empty)
    assert sf.D.shape == (0, 3)
    assert kernel_basis(empty).ncols == 3
