import pytest
from mpmath import mp

from symheat.bundles import catalog_rep, scalar_rep, spinor_rep, vector_rep
from symheat.engine import HeatRequest, heat_coefficients
from symheat.exact import GaussianRational, Matrix, rational
from symheat.oracles import (
    SpectralModel,
    extract_coefficients,
    gilkey_a1,
    gilkey_a2,
    sphere_trace,
)
from symheat.spaces import flat, hyperbolic, product, sphere


class TestSpectralModel:
    def test_s2_multiplicities(self):
        sm = SpectralModel(2)
        assert [sm.multiplicity(l) for l in range(5)] == [1, 3, 5, 7, 9]

    def test_s3_multiplicities(self):
        sm = SpectralModel(3)
        assert [sm.multiplicity(l) for l in range(5)] == [1, 4, 9, 16, 25]

    def test_s4_multiplicities(self):
        sm = SpectralModel(4)
        # (2l+3)(l+1)(l+2)/6
        assert [sm.multiplicity(l) for l in range(4)] == [1, 5, 14, 30]

    def test_eigenvalues_scale_with_radius(self):
        sm = SpectralModel(2, rational(2))
        assert mp.almosteq(sm.eigenvalue(1), mp.mpf(2) / 4)

    def test_volume_s2(self):
        sm = SpectralModel(2)
        assert mp.almosteq(sm.volume(), 4 * mp.pi)


class TestSphereTrace:
    def test_s2_at_t_one(self):
        # frozen from direct 60-digit summation of sum (2l+1) e^{-l(l+1)}
        with mp.workdps(40):
            got = sphere_trace(SpectralModel(2), 1)
            want = mp.mpf("1.41844263863105511321351408405")
            assert abs(got - want) < mp.mpf("1e-28")

    def test_matches_independent_inline_sum(self):
        with mp.workdps(50):
            total = mp.mpf(0)
            for l in range(120):
                total += (2 * l + 1) * mp.e ** (-mp.mpf("0.3") * l * (l + 1))
            got = sphere_trace(SpectralModel(2), mp.mpf("0.3"))
            assert abs(got - total) < mp.mpf("1e-40")

    def test_large_t_approaches_ground_state(self):
        got = sphere_trace(SpectralModel(2), 40)
        assert abs(got - 1) < 1e-30

    def test_s3_index_shift_identity(self):
        # sum (l+1)^2 e^{-t l(l+2)} = e^t sum_{m>=1} m^2 e^{-t m^2}
        with mp.workdps(50):
            t = mp.mpf("0.5")
            got = sphere_trace(SpectralModel(3), t)
            shifted = mp.mpf(0)
            for m in range(1, 120):
                shifted += m * m * mp.e ** (-t * m * m)
            shifted *= mp.e**t
            assert abs(got - shifted) < mp.mpf("1e-40")
            assert abs(got - mp.mpf("2.06636525163437411909233915363")) < mp.mpf("1e-28")

    def test_bad_t_rejected(self):
        with pytest.raises(ValueError):
            sphere_trace(SpectralModel(2), 0)


class TestExtraction:
    def test_s2_coefficients(self):
        vals, errs = extract_coefficients(SpectralModel(2), 3)
        true = [1, 1 / 3, 1 / 15, 4 / 315]
        for k, (v, t) in enumerate(zip(vals, true)):
            tol = 1e-6 if k <= 2 else 1e-5
            assert abs(v - t) < tol

    def test_s3_coefficients(self):
        vals, _ = extract_coefficients(SpectralModel(3), 3)
        true = [1, 1, 0.5, 1 / 6]
        for v, t in zip(vals, true):
            assert abs(v - t) < 1e-5

    def test_error_estimates_bound_deviation(self):
        vals, errs = extract_coefficients(SpectralModel(2), 3)
        true = [1, 1 / 3, 1 / 15, 4 / 315]
        for v, t, e in zip(vals, true, errs):
            assert abs(v - t) <= 10 * e + 1e-12

    def test_k4_best_effort(self):
        vals, _ = extract_coefficients(SpectralModel(2), 4)
        assert abs(vals[4] - 1 / 315) < 1e-4

    def test_kmax_guard(self):
        with pytest.raises(ValueError):
            extract_coefficients(SpectralModel(2), 5)


class TestGilkey:
    def test_s2_scalar(self):
        m = sphere(2, 1)
        rep = scalar_rep(m)
        assert gilkey_a1(m, rep)[0, 0] == GaussianRational(rational(1, 3))
        # (1/180)(4 - 2) + (1/72)*4 = 1/15
        assert gilkey_a2(m, rep)[0, 0] == GaussianRational(rational(1, 15))

    def test_s2_spinor(self):
        m = sphere(2, 1)
        rep = spinor_rep(m)
        want = Matrix.identity(2).scale(rational(1, 15))
        omega2 = Matrix.zeros(2)
        for a in range(2):
            for b in range(2):
                omega2 = omega2 + rep.Omega[a][b] * rep.Omega[a][b]
        want = want + omega2.scale(rational(1, 12))
        assert gilkey_a2(m, rep) == want
        assert gilkey_a2(m, rep) == Matrix.identity(2).scale(rational(1, 40))

    def test_flat_twist(self):
        m = flat(2)
        b = rational(5, 4)
        rep = catalog_rep(m, "u1_twist", twist=[b])
        assert gilkey_a1(m, rep).is_zero()
        assert gilkey_a2(m, rep)[0, 0] == GaussianRational(-b * b / 6)

    @pytest.mark.parametrize("maker", [
        lambda: sphere(2, 1),
        lambda: sphere(3, 1),
        lambda: hyperbolic(2, 1),
        lambda: product([flat(2), sphere(2, 1)]),
    ])
    @pytest.mark.parametrize("repname", ["scalar", "vector", "spinor"])
    def test_matches_heat_engine(self, maker, repname):
        model = maker()
        rep = catalog_rep(model, repname)
        hc = heat_coefficients(HeatRequest(model, rep, 2))
        assert hc.a[1] == gilkey_a1(model, rep)
        assert hc.a[2] == gilkey_a2(model, rep)

    def test_matches_heat_engine_with_twist(self):
        model = product([flat(2), sphere(2, 1)])
        rep = catalog_rep(model, "spinor", twist=[rational(1, 2)])
        hc = heat_coefficients(HeatRequest(model, rep, 2))
        assert hc.a[1] == gilkey_a1(model, rep)
        assert hc.a[2] == gilkey_a2(model, rep)
