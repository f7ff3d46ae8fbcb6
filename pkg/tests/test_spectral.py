import numpy as np
import pytest

from core.lattice import hamiltonian
from core.params import ModelParams, homogeneous_params, sample_params
from core.spectral import (
    PolynomialC,
    coefficient_distance,
    derivative_condition_residual,
    det_k_minus_closed,
    det_k_plus_closed,
    from_crossing_coefficients,
    functional_rhs,
    functional_rhs_vacuum,
    homogeneous_quantum_determinant,
    lambda_at_zero,
    lambda_from_oracle,
    match_to_oracle,
    quantum_determinant,
    solve_lambda_functional,
)


class TestPolynomials:
    def test_crossing_round_trip(self):
        poly = from_crossing_coefficients([1.0, 2.0, -0.5j])
        assert poly.degree == 4
        assert poly.crossing_asymmetry() < 1e-14
        assert np.allclose(poly.crossing_coefficients(), [1.0, 2.0, -0.5j])

    def test_crossing_symmetry(self):
        poly = from_crossing_coefficients([0.3, -1.0, 1.0])
        u = 0.41 - 0.77j
        assert poly(-u - 1) == pytest.approx(poly(u))

    def test_asymmetric(self):
        assert PolynomialC((0.0, 1.0)).crossing_asymmetry() > 0.1

    def test_trailing_zeros_trimmed(self):
        assert PolynomialC((1.0, 2.0, 0.0, 0.0)).degree == 1

    def test_coefficient_distance(self):
        a = PolynomialC((1.0, 2.0))
        assert coefficient_distance(a, a) == 0.0
        assert coefficient_distance(a, PolynomialC((1.0, 2.0, 1.0))) == pytest.approx(0.5)


class TestQuantumDeterminant:
    def test_boundary_factors(self):
        params = ModelParams(N=1, p=2.0, q=3.0, xi=0.0, theta=(0.2,))
        assert det_k_minus_closed(0.5, params) == pytest.approx(-3.75)
        assert det_k_plus_closed(0.5, params) == pytest.approx(-26.25)

    def test_homogeneous_at_zero(self):
        params = homogeneous_params(1, 2.0, 3.0, 0.0)
        assert homogeneous_quantum_determinant(0.0, params) == pytest.approx(144.0)

    @pytest.mark.parametrize("u", [0.3 + 0.2j, -0.8 + 0.1j, 1.7])
    def test_trace_form_matches_closed_form(self, params_n2, u):
        closed = quantum_determinant(u, params_n2, "closed_form")
        trace = quantum_determinant(u, params_n2, "trace_form")
        assert abs(trace - closed) <= 1e-10 * abs(closed)

    @pytest.mark.parametrize("N", [1, 2, 3])
    def test_trace_form_on_random_samples(self, rng, N):
        for _ in range(10):
            params = sample_params(rng, N)
            # zeros of Delta_q are real here; keep u off the axis
            u = complex(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 1.5))
            closed = quantum_determinant(u, params, "closed_form")
            trace = quantum_determinant(u, params, "trace_form")
            assert abs(trace - closed) <= 1e-12 * abs(closed), (params, u)

    def test_unknown_mode(self, params_n1):
        with pytest.raises(ValueError):
            quantum_determinant(0.1, params_n1, "guess")

    def test_unknown_form(self, homogeneous_n1):
        with pytest.raises(ValueError):
            homogeneous_quantum_determinant(0.1, homogeneous_n1, "other")

    def test_vacuum_form_of_rhs(self, params_n2):
        for t in params_n2.theta:
            assert functional_rhs_vacuum(t, params_n2) == pytest.approx(functional_rhs(t, params_n2))


class TestOracle:
    def test_candidates(self, params_n2):
        cands = lambda_from_oracle(params_n2)
        assert len(cands) == 4
        for c in cands:
            assert c.max_residual < 1e-8
            assert c.poly.degree == 6
            assert c.poly(0.0) == pytest.approx(lambda_at_zero(params_n2))

    def test_deterministic_order(self, params_n2):
        a = lambda_from_oracle(params_n2)
        b = lambda_from_oracle(params_n2)
        assert [c.poly.coeffs for c in a] == [c.poly.coeffs for c in b]

    def test_energies_at_homogeneous_point(self, homogeneous_n2):
        cands = lambda_from_oracle(homogeneous_n2)
        energies = np.sort([c.energy(homogeneous_n2).real for c in cands])
        exact = np.sort(np.linalg.eigvalsh(hamiltonian(homogeneous_n2).entries))
        assert np.allclose(energies, exact, atol=1e-7)

    def test_determinant_forms(self):
        params = homogeneous_params(1, 1.3, 2.1, 1.0)
        for c in lambda_from_oracle(params):
            assert derivative_condition_residual(c.poly, params, "factor_product") < 1e-8
            assert derivative_condition_residual(c.poly, params, "printed") > 1e-2

    def test_site_limit(self):
        params = homogeneous_params(11, 1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            lambda_from_oracle(params)


class TestFunctionalSolve:
    def test_inhomogeneous_recovers_oracle(self, params_n1):
        solved = solve_lambda_functional(params_n1, "inhomogeneous", 50)
        oracle = lambda_from_oracle(params_n1)
        assert solved.converged > 0
        assert max(match_to_oracle(solved.candidates, oracle)) <= 1e-7

    @pytest.mark.slow
    def test_inhomogeneous_recovers_full_set_n2(self, params_n2):
        solved = solve_lambda_functional(params_n2, "inhomogeneous", 200)
        oracle = lambda_from_oracle(params_n2)
        distances = match_to_oracle(solved.candidates, oracle)
        assert len(distances) == 4
        assert max(distances) <= 1e-7

    def test_homogeneous_recovers_oracle(self, homogeneous_n1):
        solved = solve_lambda_functional(homogeneous_n1, "homogeneous", 50)
        oracle = lambda_from_oracle(homogeneous_n1)
        assert max(match_to_oracle(solved.candidates, oracle)) <= 1e-7

    def test_explicit_seeds_keep_order(self, params_n1):
        solved = solve_lambda_functional(params_n1, "inhomogeneous", [[1.0 + 0.5j], [1.0 + 0.5j]])
        assert solved.seeds_tried == 2
        assert len(solved.candidates) <= 1

    def test_seed_shape(self, params_n2):
        with pytest.raises(ValueError):
            solve_lambda_functional(params_n2, "inhomogeneous", [[1.0]])

    def test_inhomogeneous_needs_theta(self, homogeneous_n1):
        with pytest.raises(ValueError):
            solve_lambda_functional(homogeneous_n1, "inhomogeneous", 4)

    def test_unknown_mode(self, params_n1):
        with pytest.raises(ValueError):
            solve_lambda_functional(params_n1, "mixed", 4)
