import numpy as np
import pytest

from core.lattice import (
    b_from_one_row,
    double_row_components,
    extract_one_row_components,
    hamiltonian,
    k_minus,
    k_plus,
    monodromy,
    on_two_aux,
    one_row_components,
    r_matrix,
    t_hat_by_crossing,
    total_sz,
    transfer_from_components,
    transfer_matrix,
    vacuum_a,
    vacuum_d,
    vacuum_state,
    xi_unitarity,
)
from core.params import ModelParams, ParamsError, homogeneous_params, pole_violations
from core.tensor import ANTISYMMETRIZER, PERMUTATION, DenseOperator


class TestLocalMatrices:
    def test_r_initial(self):
        assert np.allclose(r_matrix(0), PERMUTATION)

    def test_r_antisymmetry_point(self):
        expected = np.array([[0, 0, 0, 0], [0, -1, 1, 0], [0, 1, -1, 0], [0, 0, 0, 0]])
        assert np.allclose(r_matrix(-1), expected)
        assert np.allclose(r_matrix(-1), -2 * ANTISYMMETRIZER)

    def test_r_at_one(self):
        expected = np.array([[2, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [0, 0, 0, 2]])
        assert np.allclose(r_matrix(1), expected)

    @pytest.mark.parametrize("u, value", [(2, 3), (1, 0), (0, -1)])
    def test_unitarity_factor(self, u, value):
        assert xi_unitarity(u) == pytest.approx(value)

    def test_k_minus(self, params_n2):
        assert np.allclose(k_minus(0, params_n2), 2 * np.eye(2))
        assert np.allclose(k_minus(0.3, params_n2), np.diag([2.3, 1.7]))
        assert np.linalg.matrix_rank(k_minus(params_n2.p, params_n2)) == 1

    def test_k_plus(self, params_n2):
        assert np.allclose(k_plus(0, params_n2), [[4, 0.5], [0.5, 2]])
        assert np.allclose(k_plus(-1, params_n2), 3 * np.eye(2))
        diag = params_n2.with_xi(0.0)
        assert np.allclose(k_plus(0.7, diag), np.diag([4.7, 1.3]))


class TestMonodromy:
    def test_initial_condition(self, params_n1):
        t = monodromy(params_n1.theta[0], params_n1)
        assert np.allclose(t.entries, PERMUTATION)

    def test_hat_by_crossing(self, params_n2):
        u = 0.37 - 0.21j
        assert np.allclose(t_hat_by_crossing(u, params_n2).entries, monodromy(u, params_n2, "hat").entries)

    def test_unknown_variant(self, params_n1):
        with pytest.raises(ValueError):
            monodromy(0.1, params_n1, "sideways")

    def test_identity_has_no_beta(self):
        p = ModelParams(N=1, p=1.0, q=1.0, xi=0.0, theta=(0.3,))
        comps = extract_one_row_components(DenseOperator.identity(2))
        assert np.allclose(comps.beta.entries, 0)
        assert np.abs(one_row_components(0.5, p).beta.entries).max() > 0

    def test_b_from_one_row(self, params_n2):
        u = 0.23 + 0.41j
        assert np.allclose(b_from_one_row(u, params_n2).entries, double_row_components(u, params_n2).B.entries)

    def test_two_aux_rejects_third(self, params_n1):
        with pytest.raises(ValueError):
            on_two_aux(monodromy(0.1, params_n1), 3, 1)


class TestTransferMatrix:
    def test_value_at_zero(self, params_n2):
        assert np.allclose(transfer_matrix(0.0, params_n2).entries, 9.6768 * np.eye(4))

    def test_component_form(self, params_n2):
        u = -0.31 + 0.58j
        assert np.allclose(transfer_from_components(u, params_n2).entries, transfer_matrix(u, params_n2).entries)

    def test_crossing(self, params_n2):
        u = 0.44 + 0.17j
        assert np.allclose(transfer_matrix(-u - 1, params_n2).entries, transfer_matrix(u, params_n2).entries)

    def test_commuting(self, params_n2):
        a = transfer_matrix(0.3 + 0.1j, params_n2).entries
        b = transfer_matrix(-0.7 + 0.5j, params_n2).entries
        assert np.linalg.norm(a @ b - b @ a) <= 1e-11 * np.linalg.norm(a) * np.linalg.norm(b)


class TestVacuum:
    def test_a_and_d(self, params_n1):
        assert vacuum_a(0.5, params_n1) == pytest.approx(5.525)
        assert vacuum_d(0.5, params_n1) == pytest.approx(0.105)

    def test_actions(self, params_n1):
        u = 0.5
        comps = double_row_components(u, params_n1)
        vac = vacuum_state(1)
        assert np.allclose(comps.A.apply(vac), 5.525 * vac)
        assert np.allclose(comps.Dbar.apply(vac), 0.105 * vac)
        assert np.allclose(comps.C.apply(vac), 0)


class TestHamiltonian:
    def test_hermitian(self, homogeneous_n2):
        h = hamiltonian(homogeneous_n2).entries
        assert np.allclose(h, h.conj().T)

    def test_from_transfer(self, homogeneous_n2):
        direct = hamiltonian(homogeneous_n2, "direct").entries
        derived = hamiltonian(homogeneous_n2, "from_transfer").entries
        assert np.allclose(direct, derived, atol=1e-7)

    def test_from_transfer_needs_homogeneous(self, params_n2):
        with pytest.raises(ValueError):
            hamiltonian(params_n2, "from_transfer")

    def test_boundary_fields(self):
        params = homogeneous_params(2, 2.0, 4.0, 0.5)
        assert params.h_N == pytest.approx(0.5)
        assert params.h1_z == pytest.approx(0.25)
        assert params.h1_x == pytest.approx(0.125)

    def test_diagonal_limit_conserves_sz(self):
        params = homogeneous_params(3, 1.1, 1.7, 0.0)
        h = hamiltonian(params).entries
        sz = total_sz(3).entries
        assert np.allclose(h @ sz, sz @ h)


class TestParams:
    def test_theta_length(self):
        with pytest.raises(ParamsError) as e:
            ModelParams(N=2, p=1.0, q=1.0, xi=0.0, theta=(0.1, 0.2, 0.3))
        assert e.value.rule == "theta_length"

    def test_pole_rule(self):
        params = ModelParams(N=2, p=1.0, q=1.0, xi=0.0, theta=(0.5, 0.1))
        bad = pole_violations(params)
        assert bad and "1-2theta_j" in bad[0]

    def test_non_finite(self):
        with pytest.raises(ParamsError):
            ModelParams(N=1, p=float("nan"), q=1.0, xi=0.0, theta=(0.2,))
