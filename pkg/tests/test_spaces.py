import random
from dataclasses import replace

import pytest

from symheat.exact import GaussianRational, Matrix, ZERO, invert, rational
from symheat.spaces import (
    CurvatureData,
    ModelBuildError,
    build_model,
    catalog_space,
    flat,
    hyperbolic,
    product,
    space_from_descriptor,
    sphere,
    validate_model,
)

EPS = Matrix.from_rows([[0, 1], [-1, 0]])


def scalar_curvature_by_contraction(model):
    # independent oracle: rebuild R_abcd from (E, beta) and contract
    n, p = model.n, model.p
    E, beta = model.data.E, model.beta
    acc = GaussianRational(0)
    for a in range(n):
        for b in range(n):
            for i in range(p):
                for k in range(p):
                    acc = acc + beta[i, k] * E[i][a, b] * E[k][a, b]
    return acc


class TestBuildModel:
    def test_unit_two_sphere(self):
        m = sphere(2, 1)
        assert m.D[0] == -EPS
        assert m.F[0].is_zero()
        assert m.scalar_R == GaussianRational(2)
        assert m.R_H == GaussianRational(0)
        assert m.R_G == GaussianRational(rational(3, 2))

    def test_flat_three_space(self):
        m = flat(3)
        assert m.scalar_R == GaussianRational(0)
        assert m.R_G == GaussianRational(0)
        assert m.N == 3
        assert all(c.is_zero() for c in m.C)

    def test_unit_three_sphere(self):
        m = sphere(3, 1)
        assert m.scalar_R == GaussianRational(6)
        assert m.scalar_R == scalar_curvature_by_contraction(m)
        # holonomy closes on so(3): every bracket lands back in span{D_i}
        assert m.R_H == GaussianRational(rational(3, 2))

    def test_sphere_radius_scaling(self):
        m = sphere(2, 2)
        assert m.scalar_R == GaussianRational(rational(1, 2))

    def test_dependent_generators_rejected(self):
        e = Matrix.from_rows([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
        data = CurvatureData(n=3, p=2, E=(e, e), beta=Matrix.identity(2))
        with pytest.raises(ModelBuildError, match="dependent"):
            build_model(data)

    def test_ricci_of_unit_sphere(self):
        m = sphere(3, 1)
        assert m.ricci == Matrix.identity(3).scale(2)


class TestCatalog:
    def test_sphere_scalar_curvature(self):
        assert sphere(2, 1).scalar_R == GaussianRational(2)

    def test_hyperbolic_scalar_curvature(self):
        assert hyperbolic(2, 1).scalar_R == GaussianRational(-2)

    def test_product_flat_sphere(self):
        m = product([flat(1), sphere(2, 1)])
        assert m.n == 3
        assert m.flat_dim == 1
        assert m.scalar_R == GaussianRational(2)
        assert m.q == Matrix.diag([1, 0, 0])

    def test_product_of_spheres(self):
        m = product([sphere(2, 1), sphere(2, 1)])
        assert m.n == 4 and m.p == 2
        assert m.scalar_R == GaussianRational(4)

    def test_flat_factor_hoisted_to_front(self):
        m = product([sphere(2, 1), flat(2)])
        assert m.flat_dim == 2
        assert m.q == Matrix.diag([1, 1, 0, 0])
        assert validate_model(m).ok

    def test_invalid_radius(self):
        with pytest.raises(ModelBuildError):
            sphere(2, -1)

    def test_unknown_name(self):
        with pytest.raises(ModelBuildError):
            catalog_space("torus", {})

    def test_sphere_scalar_curvature_formula(self):
        for n in (2, 3, 4):
            assert sphere(n, 1).scalar_R == GaussianRational(n * (n - 1))


class TestValidateModel:
    @pytest.mark.parametrize("maker", [
        lambda: sphere(2, 1),
        lambda: sphere(3, 1),
        lambda: sphere(4, 1),
        lambda: hyperbolic(2, 1),
        lambda: hyperbolic(3, 1),
        lambda: flat(3),
        lambda: product([flat(2), sphere(2, 1)]),
        lambda: product([sphere(2, 1), sphere(2, 1)]),
    ])
    def test_catalog_models_pass(self, maker):
        report = validate_model(maker())
        assert report.ok, report.failed()

    def test_sign_flip_still_passes(self):
        # H^2 is S^2 with beta -> -beta; all structural checks are sign-blind
        assert validate_model(hyperbolic(2, 1)).ok

    def test_corrupted_e_detected(self):
        m = sphere(2, 1)
        sym = Matrix.from_rows([[0, 1], [1, 0]])
        corrupted = replace(m, data=replace(m.data, E=(sym,)))
        report = validate_model(corrupted)
        assert not report.ok
        assert "e-antisymmetry" in report.failed()

    def test_corrupted_beta_detected(self):
        m = sphere(3, 1)
        bad_beta = Matrix.from_rows([
            [1, rational(1, 2), 0],
            [0, 1, 0],
            [0, 0, 1],
        ])
        corrupted = replace(m, data=replace(m.data, beta=bad_beta))
        report = validate_model(corrupted)
        assert not report.ok
        assert "beta-symmetric" in report.failed()

    def test_corrupted_f_detected(self):
        m = sphere(3, 1)
        rows = m.F[0].to_rows()
        rows[0][1] = rows[0][1] + GaussianRational(1)
        corrupted = replace(m, F=(Matrix.from_rows(rows),) + m.F[1:])
        report = validate_model(corrupted)
        assert not report.ok
        assert "holonomy-bracket" in report.failed()

    def test_corrupted_riemann_detected(self):
        m = sphere(2, 1)
        riem = [[[[x for x in c] for c in b] for b in a] for a in m.riemann]
        riem[0][0][0][0] = GaussianRational(1)
        corrupted = replace(m, riemann=tuple(
            tuple(tuple(tuple(d) for d in c) for c in b) for b in riem
        ))
        report = validate_model(corrupted)
        assert not report.ok
        assert "riemann-from-e-beta" in report.failed()


class TestInvariants:
    def test_scalar_curvature_matches_contraction(self):
        for maker in (lambda: sphere(2, 1), lambda: sphere(3, 1),
                      lambda: hyperbolic(3, 1), lambda: product([flat(1), sphere(2, 1)])):
            m = maker()
            assert m.scalar_R == scalar_curvature_by_contraction(m)

    def test_killing_form_antisymmetry(self):
        for m in (sphere(3, 1), hyperbolic(2, 1)):
            N = m.N
            for c in range(N):
                gc = m.gamma * m.C[c]
                assert gc.transpose() == -gc

    def test_basis_covariance(self):
        # E -> S.E, beta -> (S^-1)^T beta S^-1 leaves all curvatures fixed
        rng = random.Random(42)
        base = sphere(3, 1)
        p = base.p
        while True:
            s = Matrix.from_rows([
                [rational(rng.randint(-2, 2)) for _ in range(p)] for _ in range(p)
            ])
            try:
                s_inv = invert(s)
                break
            except ValueError:
                continue
        new_E = []
        for i in range(p):
            acc = Matrix.zeros(base.n)
            for j in range(p):
                if not s[i, j].is_zero():
                    acc = acc + base.data.E[j].scale(s[i, j])
            new_E.append(acc)
        new_beta = s_inv.transpose() * base.beta * s_inv
        m2 = build_model(CurvatureData(n=base.n, p=p, E=tuple(new_E), beta=new_beta))
        assert m2.scalar_R == base.scalar_R
        assert m2.R_G == base.R_G
        assert m2.R_H == base.R_H
        assert validate_model(m2).ok

    def test_d_annihilates_flat_directions(self):
        m = product([flat(2), sphere(2, 1)])
        for d in m.D:
            assert (d * m.q).is_zero()
            assert (m.q * d).is_zero()


class TestDescriptors:
    def test_catalog_descriptor(self):
        m = space_from_descriptor({"catalog": "sphere", "params": {"n": 2, "radius": "1"}})
        assert m.scalar_R == GaussianRational(2)

    def test_explicit_descriptor_round_trip(self):
        obj = {
            "explicit": {
                "n": 2,
                "p": 1,
                "flat_dim": 0,
                "E": [[["0/1", "1/1"], ["-1/1", "0/1"]]],
                "beta": [["1/1"]],
            }
        }
        m = space_from_descriptor(obj)
        assert m.scalar_R == GaussianRational(2)

    def test_product_descriptor(self):
        obj = {
            "catalog": "product",
            "params": {"factors": [
                {"catalog": "flat", "params": {"n": 1}},
                {"catalog": "sphere", "params": {"n": 2, "radius": "1"}},
            ]},
        }
        m = space_from_descriptor(obj)
        assert m.n == 3 and m.flat_dim == 1

    def test_bad_descriptor(self):
        with pytest.raises(ModelBuildError):
            space_from_descriptor({"nope": 1})
