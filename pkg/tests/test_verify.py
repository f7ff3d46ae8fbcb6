import numpy as np
import pytest

from core.params import ModelParams, ParamsError, sample_params
from core.verify import (
    CATALOG,
    UnknownIdentityError,
    richardson,
    sample_points,
    summarize,
    verify_catalog,
    verify_identity,
    verify_vacuum_relations,
)


class TestCatalog:
    def test_all_pass(self, params_n2):
        results = verify_catalog(params_n2)
        failed = [(r.identity_id, r.residual) for r in results if not r.passed]
        assert not failed
        # operator_functional runs once per site
        assert len(results) == len(CATALOG) + 1

    def test_subset(self, params_n1):
        results = verify_catalog(params_n1, ids=["qybe", "unitarity"])
        assert [r.identity_id for r in results] == ["qybe", "unitarity"]

    def test_reproducible(self, params_n1):
        a = verify_catalog(params_n1, rng_seed=3)
        b = verify_catalog(params_n1, rng_seed=3)
        assert [r.sample for r in a] == [r.sample for r in b]
        assert [r.residual for r in a] == [r.residual for r in b]

    def test_antisymmetry_tight(self, params_n1):
        assert verify_identity("antisymmetry", params_n1, [], tol=1e-13).passed

    def test_operator_functional(self, params_n2):
        result = verify_identity("operator_functional", params_n2, [1])
        assert result.passed
        assert result.to_dict()["sample"]["points"] == [[1.0, 0.0]]

    def test_operator_functional_site_range(self, params_n2):
        with pytest.raises(ValueError):
            verify_identity("operator_functional", params_n2, [3])

    def test_unknown_identity(self, params_n1):
        with pytest.raises(UnknownIdentityError) as e:
            verify_identity("yang_baxter", params_n1, [])
        assert isinstance(e.value, KeyError)
        assert "yang_baxter" in str(e.value)

    def test_point_count(self, params_n1):
        with pytest.raises(ValueError):
            verify_identity("qybe", params_n1, [0.1, 0.2])

    def test_non_generic_theta(self):
        params = ModelParams(N=2, p=2.0, q=3.0, xi=0.5, theta=(0.5, 0.1))
        with pytest.raises(ParamsError):
            verify_identity("transfer_crossing", params, [0.3])

    def test_guarded_sampling(self, rng, params_n2):
        for _ in range(20):
            a, b = sample_points("cb_relation", rng, params_n2)
            assert abs(a - b) >= 0.02
            assert abs(a + b + 1) >= 0.02

    def test_summary(self, params_n1):
        s = summarize(verify_catalog(params_n1))
        assert s["passed"] == s["total"]
        assert s["failed"] == []
        assert set(s["worst_residual"]) == set(CATALOG)

    @pytest.mark.slow
    @pytest.mark.parametrize("N", [1, 2, 3])
    def test_random_samples_pass(self, rng, N):
        for _ in range(10):
            params = sample_params(rng, N)
            failed = [(r.identity_id, r.residual) for r in verify_catalog(params) if not r.passed]
            assert not failed, params

    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    def test_operator_functional_every_site(self, rng, N):
        params = sample_params(rng, N)
        results = verify_catalog(params, ids=["operator_functional"])
        assert len(results) == N
        assert all(r.passed for r in results), [r.residual for r in results]


class TestVacuumRelations:
    def test_all_pass(self, params_n2):
        results = verify_vacuum_relations(params_n2)
        failed = [(r.identity_id, r.detail, r.residual) for r in results if not r.passed]
        assert not failed

    def test_expected_checks(self, params_n1):
        ids = {r.identity_id for r in verify_vacuum_relations(params_n1)}
        assert {"vacuum_c", "vacuum_zeros", "bb_vanishing", "tt_expansion", "tt_reduction", "tt_final"} <= ids

    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    def test_bb_vanishing_every_site(self, rng, N):
        params = sample_params(rng, N)
        results = [r for r in verify_vacuum_relations(params) if r.identity_id == "bb_vanishing"]
        assert len(results) == N
        assert all(r.passed for r in results), [r.residual for r in results]
        assert all(r.tolerance <= 1e-11 for r in results)


class TestRichardson:
    def test_linear_error_removed(self):
        vals = [np.array([2.0 + 0.5 * h]) for h in (1.0, 0.5, 0.25)]
        assert richardson(vals)[0] == pytest.approx(2.0)

    def test_quadratic_error_removed(self):
        vals = [np.array([1.0 + h + 3 * h ** 2]) for h in (0.1, 0.05, 0.025)]
        assert richardson(vals)[0] == pytest.approx(1.0)
