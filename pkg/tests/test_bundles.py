import pytest

from symheat.bundles import (
    BundleError,
    build_rep,
    catalog_rep,
    gamma_matrices,
    scalar_rep,
    spinor_rep,
    tensor_product_rep,
    twist_matrix,
    validate_rep,
    vector_rep,
)
from symheat.exact import GaussianRational, Matrix, ZERO, commutator, invert, rational
from symheat.spaces import flat, hyperbolic, product, sphere

EPS = Matrix.from_rows([[0, 1], [-1, 0]])


def casimir_by_contraction(model, rep):
    # independent oracle: (1/4) R^abcd G_ab G_cd with explicit loops
    n = model.n
    acc = Matrix.zeros(rep.dimV)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    x = model.riemann[a][b][c][d]
                    if not x.is_zero():
                        acc = acc + (rep.G[a][b] * rep.G[c][d]).scale(x)
    return acc.scale(rational(1, 4))


class TestGammaMatrices:
    @pytest.mark.parametrize("n,dim", [(1, 1), (2, 2), (3, 2), (4, 4), (5, 4), (6, 8)])
    def test_dimensions(self, n, dim):
        gs = gamma_matrices(n)
        assert len(gs) == n
        assert all(g.rows == dim for g in gs)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_clifford_relations(self, n):
        gs = gamma_matrices(n)
        dim = gs[0].rows
        for a in range(n):
            for b in range(n):
                anti = gs[a] * gs[b] + gs[b] * gs[a]
                want = Matrix.identity(dim).scale(2) if a == b else Matrix.zeros(dim)
                assert anti == want

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_hermitian(self, n):
        for g in gamma_matrices(n):
            assert g.conj_transpose() == g

    def test_unsupported_dimension(self):
        with pytest.raises(BundleError):
            gamma_matrices(7)


class TestBuildRep:
    def test_scalar_on_s2(self):
        rep = scalar_rep(sphere(2, 1))
        assert rep.dimV == 1
        assert rep.R[0].is_zero()
        assert rep.casimir.is_zero()
        assert all(rep.Omega[a][b].is_zero() for a in range(2) for b in range(2))

    def test_spinor_on_s2(self):
        m = sphere(2, 1)
        rep = spinor_rep(m)
        assert rep.dimV == 2
        assert rep.R[0] == -rep.G[0][1]
        assert rep.casimir == Matrix.identity(2).scale(rational(-1, 4))

    def test_vector_on_s2(self):
        rep = vector_rep(sphere(2, 1))
        assert rep.R[0] == -EPS
        assert rep.casimir == -Matrix.identity(2)

    def test_vector_on_s3(self):
        rep = vector_rep(sphere(3, 1))
        assert rep.dimV == 3
        assert rep.casimir == Matrix.identity(3).scale(-2)

    def test_casimir_matches_contraction_oracle(self):
        for maker, repf in [
            (lambda: sphere(3, 1), vector_rep),
            (lambda: sphere(2, 1), spinor_rep),
            (lambda: sphere(4, 1), spinor_rep),
        ]:
            m = maker()
            rep = repf(m)
            assert rep.casimir == casimir_by_contraction(m, rep)

    def test_casimir_equals_beta_contraction_of_r(self):
        # R^2 = beta^{ij} R_i R_j must agree with the curvature contraction
        for m, rep in [
            (sphere(3, 1), vector_rep(sphere(3, 1))),
            (sphere(2, 1), spinor_rep(sphere(2, 1))),
        ]:
            beta_inv = invert(m.beta)
            acc = Matrix.zeros(rep.dimV)
            for i in range(m.p):
                for k in range(m.p):
                    x = beta_inv[i, k]
                    if not x.is_zero():
                        acc = acc + (rep.R[i] * rep.R[k]).scale(x)
            assert acc == rep.casimir

    def test_broken_antisymmetry_rejected(self):
        m = sphere(2, 1)
        table = [[Matrix.zeros(2), Matrix.identity(2)],
                 [Matrix.identity(2), Matrix.zeros(2)]]
        with pytest.raises(BundleError):
            build_rep(m, table, dimV=2)

    def test_so_n_violation_rejected(self):
        m = sphere(3, 1)
        table = {
            (0, 1): Matrix.from_rows([[0, 1], [-1, 0]]),
            (0, 2): Matrix.from_rows([[0, GaussianRational(0, 1)], [GaussianRational(0, 1), 0]]),
            (1, 2): Matrix.zeros(2),
        }
        with pytest.raises(BundleError, match="so-n"):
            build_rep(m, table, dimV=2)


class TestTwist:
    def test_u1_twist_block(self):
        m = product([flat(2), sphere(2, 1)])
        rep = catalog_rep(m, "u1_twist", twist=[1])
        want = Matrix.zeros(4).to_rows()
        want[0][1] = GaussianRational(0, 1)
        want[1][0] = GaussianRational(0, -1)
        assert rep.B == Matrix.from_rows(want)
        assert rep.dimV == 1

    def test_twist_needs_flat_room(self):
        with pytest.raises(BundleError, match="flat"):
            catalog_rep(sphere(2, 1), "u1_twist", twist=[1])

    def test_two_blocks(self):
        m = flat(4)
        B = twist_matrix(m, [rational(1, 2), rational(1, 3)])
        assert B[0, 1] == GaussianRational(0, rational(1, 2))
        assert B[2, 3] == GaussianRational(0, rational(1, 3))

    def test_odd_flat_block_rejected(self):
        m = flat(3)
        with pytest.raises(BundleError):
            twist_matrix(m, [1, 1])

    def test_twist_with_spinor(self):
        m = product([flat(2), sphere(2, 1)])
        rep = spinor_rep(m, twist=[rational(1, 2)])
        assert rep.B[0, 1] == GaussianRational(0, rational(1, 2))
        assert validate_rep(m, rep).ok


class TestTensorProduct:
    def test_dimension_and_generators(self):
        m = sphere(2, 1)
        rep = tensor_product_rep(spinor_rep(m), vector_rep(m))
        assert rep.dimV == 4

    def test_casimir_sum_rule(self):
        # R^2_(1x2) = R^2_1 x I + I x R^2_2 + 2 beta^{ik} R1_i x R2_k
        m = sphere(2, 1)
        r1, r2 = spinor_rep(m), vector_rep(m)
        rep = tensor_product_rep(r1, r2)
        beta_inv = invert(m.beta)
        e1 = Matrix.identity(r1.dimV)
        e2 = Matrix.identity(r2.dimV)
        want = r1.casimir.kron(e2) + e1.kron(r2.casimir)
        for i in range(m.p):
            for k in range(m.p):
                x = beta_inv[i, k]
                if not x.is_zero():
                    want = want + r1.R[i].kron(r2.R[k]).scale(2 * x)
        assert rep.casimir == want

    def test_catalog_tensor_product(self):
        m = sphere(2, 1)
        rep = catalog_rep(m, "tensor_product", factors=["spinor", "spinor"])
        assert rep.dimV == 4


class TestRepInvariants:
    @pytest.mark.parametrize("maker,repname", [
        (lambda: sphere(2, 1), "scalar"),
        (lambda: sphere(2, 1), "spinor"),
        (lambda: sphere(2, 1), "vector"),
        (lambda: sphere(3, 1), "vector"),
        (lambda: sphere(3, 1), "spinor"),
        (lambda: sphere(4, 1), "spinor"),
        (lambda: hyperbolic(3, 1), "vector"),
        (lambda: product([flat(2), sphere(2, 1)]), "spinor"),
    ])
    def test_validation_passes(self, maker, repname):
        m = maker()
        rep = catalog_rep(m, repname)
        report = validate_rep(m, rep)
        assert report.ok, report.failed()

    def test_casimir_commutes_with_holonomy(self):
        m = sphere(4, 1)
        rep = vector_rep(m)
        for r in rep.R:
            assert commutator(rep.casimir, r).is_zero()

    def test_scalar_rep_everything_vanishes(self):
        m = sphere(4, 1)
        rep = scalar_rep(m)
        assert all(r.is_zero() for r in rep.R)
        assert rep.casimir.is_zero()
