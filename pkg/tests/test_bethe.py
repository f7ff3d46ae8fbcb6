import numpy as np
import pytest

from core.bethe import (
    BetheRootSet,
    PoleError,
    a_bar,
    bae_relative_residuals,
    bae_residuals_printed,
    continue_in_xi,
    energy_by_log_derivative,
    energy_from_roots,
    exact_energies,
    make_context,
    match_levels,
    parse_branch,
    root_set_distance,
    solve_bae,
    solve_sector,
    solve_tied,
    spectrum_match,
    third_term,
    trace_drift,
)
from core.lattice import hamiltonian
from core.modes import default_sector, get_parametrization, lambda_count, sweep_sectors
from core.params import homogeneous_params


def _n1_energies(params, strategy="homotopy_xi"):
    out = []
    for branch in (1, -1):
        ctx = make_context(params, branch)
        solved = solve_bae(ctx, 0, strategy)
        out += [energy_from_roots(r, ctx) for r in solved.solutions]
    return out


class TestBranchAndRoots:
    @pytest.mark.parametrize("raw, value", [("+", 1), ("minus", -1), (-1, -1), ("\u2212", -1)])
    def test_parse_branch(self, raw, value):
        assert parse_branch(raw) == value

    @pytest.mark.parametrize("raw", ["up", 0, 2])
    def test_parse_branch_rejects(self, raw):
        with pytest.raises(ValueError):
            parse_branch(raw)

    def test_root_count_checked(self):
        with pytest.raises(ValueError):
            BetheRootSet(N=2, branch=1, M=0, lam=(0.1,))
        with pytest.raises(ValueError):
            BetheRootSet(N=2, branch=1, M=1, mu=(0.1,), nu=())

    def test_canonical_mirror(self):
        a = BetheRootSet(N=1, branch=1, M=0, lam=(-1.3,))
        b = BetheRootSet(N=1, branch=1, M=0, lam=(0.3,))
        assert a.canonical().lam == pytest.approx((0.3,))
        assert root_set_distance(a, b) < 1e-12

    def test_canonical_mu_nu_swap(self):
        a = BetheRootSet(N=2, branch=-1, M=1, mu=(0.2 + 0.1j,), nu=(0.4j,))
        b = BetheRootSet(N=2, branch=-1, M=1, mu=(-1 - 0.4j,), nu=(-1.2 - 0.1j,))
        assert root_set_distance(a, b) < 1e-12

    def test_distance_across_sectors(self):
        a = BetheRootSet(N=1, branch=1, M=0, lam=(0.3,))
        b = BetheRootSet(N=1, branch=-1, M=0, lam=(0.3,))
        assert root_set_distance(a, b) == float("inf")


class TestTQPieces:
    def test_pole_of_a_bar(self, homogeneous_n1):
        with pytest.raises(PoleError):
            a_bar(-0.5, make_context(homogeneous_n1, "+"))

    def test_third_term_vanishes_without_xi(self):
        params = homogeneous_params(1, 1.3, 2.1, 0.0)
        roots = BetheRootSet(N=1, branch=1, M=0, lam=(0.7 + 0.2j,))
        assert third_term(0.3, roots, make_context(params, 1)) == 0

    def test_energy_pole(self, homogeneous_n1):
        roots = BetheRootSet(N=1, branch=1, M=0, lam=(0.0,))
        with pytest.raises(PoleError):
            energy_from_roots(roots, make_context(homogeneous_n1, 1))

    def test_energy_needs_homogeneous(self, params_n1):
        roots = BetheRootSet(N=1, branch=1, M=0, lam=(0.7,))
        with pytest.raises(ValueError):
            energy_from_roots(roots, make_context(params_n1, 1))


class TestSolveN1:
    @pytest.mark.parametrize("p, q, xi", [(1.3, 2.1, 0.5), (2.0, 3.0, 1.2)])
    def test_energies_match_exact(self, p, q, xi):
        params = homogeneous_params(1, p, q, xi)
        found = np.sort(np.real(_n1_energies(params)))
        exact = np.sort(np.linalg.eigvalsh(hamiltonian(params).entries))
        assert np.allclose(found, exact, atol=1e-8)

    @pytest.mark.parametrize("strategy", ["multistart", "oracle_seeded"])
    def test_other_strategies_are_sound(self, homogeneous_n1, strategy):
        found = _n1_energies(homogeneous_n1, strategy)
        exact = np.asarray(exact_energies(homogeneous_n1))
        assert found
        for e in found:
            assert np.min(np.abs(exact - e)) < 1e-8

    def test_residuals_and_energy_forms(self, homogeneous_n1):
        ctx = make_context(homogeneous_n1, 1)
        for r in solve_bae(ctx, 0).solutions:
            assert np.max(bae_relative_residuals(r, ctx)) < 1e-9
            assert np.max(np.abs(bae_residuals_printed(r, ctx))) < 1e-6
            assert energy_by_log_derivative(r, ctx) == pytest.approx(energy_from_roots(r, ctx), rel=1e-6)

    def test_homotopy_ignores_rng_seed(self, homogeneous_n1):
        ctx = make_context(homogeneous_n1, -1)
        a = solve_bae(ctx, 0, "homotopy_xi", rng_seed=0).solutions
        b = solve_bae(ctx, 0, "homotopy_xi", rng_seed=9).solutions
        assert a == b

    @pytest.mark.parametrize("steps", [9, 51])
    def test_xi_steps_range(self, homogeneous_n1, steps):
        with pytest.raises(ValueError):
            solve_bae(make_context(homogeneous_n1, 1), 0, "homotopy_xi", xi_steps=steps)

    def test_unknown_strategy(self, homogeneous_n1):
        with pytest.raises(ValueError):
            solve_bae(make_context(homogeneous_n1, 1), 0, "annealing")

    def test_oracle_seeded_paired_sector(self, homogeneous_n2):
        exact = np.asarray(exact_energies(homogeneous_n2))
        for branch in (1, -1):
            ctx = make_context(homogeneous_n2, branch)
            solved = solve_bae(ctx, 1, "oracle_seeded")
            assert solved.solutions
            for r in solved.solutions:
                assert np.min(np.abs(exact - energy_from_roots(r, ctx))) < 1e-8


class TestXiContinuation:
    @pytest.mark.parametrize("branch", [1, -1])
    def test_paired_chains_leave_the_tie(self, homogeneous_n2, branch):
        ctx = make_context(homogeneous_n2, branch)
        solved = solve_bae(ctx, 1, "homotopy_xi")
        completed = [t for t in solved.traces if t.completed]
        assert len(completed) >= 2, [t.reason for t in solved.traces]
        assert len(solved.solutions) >= 2
        exact = np.asarray(exact_energies(homogeneous_n2))
        for r in solved.solutions:
            assert np.min(np.abs(exact - energy_from_roots(r, ctx))) < 1e-6

    def test_split_start_is_regular(self, homogeneous_n2):
        ctx0 = make_context(homogeneous_params(2, 1.3, 2.1, 0.0), 1)
        tied = solve_tied(ctx0, 1, 32, 0)
        assert tied.solutions
        for t in tied.solutions:
            trace = continue_in_xi(t, homogeneous_n2, [0.0, 0.025, 0.05])
            assert trace.steps[0].xi == 0
            assert trace.steps[0].measure < 1e-10

    @pytest.mark.slow
    @pytest.mark.parametrize("M", [0, 1])
    def test_energy_tracks_exact_levels(self, homogeneous_n2, M):
        for branch in (1, -1):
            solved = solve_bae(make_context(homogeneous_n2, branch), M, "homotopy_xi")
            done = [t for t in solved.traces if t.completed]
            assert done
            for trace in done:
                drift = trace_drift(trace, homogeneous_n2)
                assert drift
                assert max(s["drift"] for s in drift) <= 1e-3

    def test_abandoned_chain_has_reason(self, homogeneous_n2):
        bad = BetheRootSet(N=2, branch=1, M=0, lam=(0.3 + 0.1j, 0.8 - 0.2j))
        trace = continue_in_xi(bad, homogeneous_n2, [0.0, 0.5], max_iter=1)
        assert not trace.completed
        assert "does not solve" in trace.reason
        assert trace.to_dict()["reason"] == trace.reason

    def test_oracle_fallback_on_lost_chains(self, homogeneous_n2, monkeypatch):
        import core.bethe as bethe

        def lost(start, params, xi_path, **_kw):
            return bethe.HomotopyTrace(start=start, steps=[], end=None, reason="forced")

        monkeypatch.setattr(bethe, "continue_in_xi", lost)
        out = solve_sector(make_context(homogeneous_n2, 1), 1)
        assert [s.strategy for s in out] == ["homotopy_xi", "oracle_seeded"]
        assert not out[0].solutions
        assert out[1].solutions
        assert solve_sector(make_context(homogeneous_n2, 1), 1, oracle_fallback=False)[-1].strategy == "homotopy_xi"


class TestSpectrumMatch:
    def test_n1_complete(self, homogeneous_n1):
        match = spectrum_match(homogeneous_n1)
        assert match.matched_fraction == 1.0
        assert match.completeness_confirmed
        assert match.note == ""

    def test_under_seeded_is_flagged(self, homogeneous_n2):
        match = spectrum_match(homogeneous_n2, 0, strategies=("multistart",), seed_count=1)
        assert match.matched_fraction <= 0.5
        assert not match.completeness_confirmed
        assert "completeness unconfirmed" in match.note
        assert len(match.unmatched) >= 2

    def test_n2_diagonal_levels_are_sound(self):
        params = homogeneous_params(2, 1.3, 2.1, 0.0)
        match = spectrum_match(params, strategies=("homotopy_xi",))
        exact = np.asarray(match.exact)
        assert match.levels
        for level in match.levels:
            e = complex(*level["energy"])
            assert np.min(np.abs(exact - e)) < 1e-6

    def test_needs_homogeneous(self, params_n1):
        with pytest.raises(ValueError):
            spectrum_match(params_n1)

    def test_match_levels(self):
        pairs, matched, worst = match_levels([0.0, 1.0, 2.0], [2.0000001, 0.5], 1e-6)
        assert len(pairs) == 2
        assert matched == 1
        assert worst == pytest.approx(1e-7)

    def test_match_levels_empty(self):
        assert match_levels([0.0], [], 1e-6) == ([], 0, None)

    def test_match_levels_nothing_close(self):
        pairs, matched, worst = match_levels([0.0, 1.0], [5.0], 1e-6)
        assert len(pairs) == 1
        assert matched == 0
        assert worst is None

    def test_worst_covers_matched_pairs_only(self):
        _, matched, worst = match_levels([0.0, 1.0], [1e-8, 3.0], 1e-6)
        assert matched == 1
        assert worst == pytest.approx(1e-8)

    def test_unmatched_count_reported(self, homogeneous_n2):
        match = spectrum_match(homogeneous_n2, 0, strategies=("multistart",), seed_count=1)
        d = match.to_dict()
        assert d["unmatched_count"] == len(match.unmatched) >= 2
        assert d["max_distance"] is None or d["max_distance"] <= match.tolerance

    @pytest.mark.slow
    def test_n2_sweep_complete(self, homogeneous_n2):
        match = spectrum_match(homogeneous_n2, "sweep")
        assert match.matched_fraction == 1.0, match.note
        assert match.unmatched_count == 0
        assert match.completeness_confirmed

    @pytest.mark.slow
    def test_n2_sweep_complete_diagonal(self):
        match = spectrum_match(homogeneous_params(2, 1.3, 2.1, 0.0))
        assert match.matched_fraction == 1.0, match.note
        assert match.completeness_confirmed


class TestModes:
    def test_registry(self):
        assert get_parametrization(4, 1).key == "generic"
        assert get_parametrization(4, 2).key == "even_half"
        assert get_parametrization(3, 2).key == "odd_extended"
        assert get_parametrization(3, 2).third_power == 2

    @pytest.mark.parametrize("N, M", [(2, 2), (3, 3), (1, -1)])
    def test_out_of_range(self, N, M):
        with pytest.raises(ValueError):
            get_parametrization(N, M)

    def test_lambda_count(self):
        assert lambda_count(5, 1) == 3
        assert lambda_count(4, 2) == 0
        assert lambda_count(3, 2) == 0

    def test_sectors(self):
        assert sweep_sectors(4) == [0, 1, 2]
        assert sweep_sectors(3) == [0, 1, 2]
        assert sweep_sectors(3, include_extended=False) == [0, 1]
        assert sweep_sectors(1) == [0, 1]
        assert default_sector(4) == 2
        assert default_sector(3) == 2
