import numpy as np
import pytest

from core.tensor import (
    PERMUTATION,
    SIGMA_X,
    SIGMA_Z,
    DenseOperator,
    embed_factors,
    embed_pair,
    embed_site,
    kron,
    partial_transpose,
    relative_residual,
    trace_factors,
)


def _random_op(rng, dim):
    return rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))


class TestEmbed:
    def test_single_site(self):
        assert np.allclose(embed_site(SIGMA_Z, 1, 1).entries, np.diag([1, -1]))

    def test_first_factor_is_leftmost(self):
        assert np.allclose(embed_site(SIGMA_Z, 1, 2).entries, np.diag([1, 1, -1, -1]))

    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_identity_anywhere(self, j):
        assert np.allclose(embed_site(np.eye(2), j, 3).entries, np.eye(8))

    def test_pair_permutation(self):
        assert np.allclose(embed_pair(PERMUTATION, 1, 2, 2).entries, PERMUTATION)
        assert np.allclose(embed_pair(PERMUTATION, 2, 1, 2).entries, PERMUTATION)

    def test_pair_factorizes(self, rng):
        a, b = _random_op(rng, 2), _random_op(rng, 2)
        lhs = embed_pair(kron(a, b), 1, 3, 3).entries
        rhs = embed_site(a, 1, 3).entries @ embed_site(b, 3, 3).entries
        assert np.allclose(lhs, rhs)

    def test_swapped_slots(self, rng):
        a, b = _random_op(rng, 2), _random_op(rng, 2)
        assert np.allclose(embed_pair(kron(a, b), 3, 1, 3).entries, embed_pair(kron(b, a), 1, 3, 3).entries)

    def test_three_slot_operator(self, rng):
        a, b, c = (_random_op(rng, 2) for _ in range(3))
        lhs = embed_factors(kron(a, b, c), [3, 1, 2], 3).entries
        assert np.allclose(lhs, kron(b, c, a))

    def test_bad_indices(self):
        with pytest.raises(ValueError):
            embed_site(SIGMA_X, 0, 2)
        with pytest.raises(ValueError):
            embed_site(SIGMA_X, 3, 2)
        with pytest.raises(ValueError):
            embed_pair(PERMUTATION, 2, 2, 3)


class TestTransposeAndTrace:
    def test_partial_transpose_involution(self, rng):
        x = DenseOperator(_random_op(rng, 8), (2, 2, 2))
        back = partial_transpose(partial_transpose(x, 2), 2)
        assert np.allclose(back.entries, x.entries)

    def test_partial_transpose_of_product(self, rng):
        a, b = _random_op(rng, 2), _random_op(rng, 2)
        out = partial_transpose(DenseOperator(kron(a, b), (2, 2)), 2)
        assert np.allclose(out.entries, kron(a, b.T))

    def test_trace_second_factor(self, rng):
        a, b = _random_op(rng, 2), _random_op(rng, 2)
        out = trace_factors(DenseOperator(kron(a, b), (2, 2)), {2})
        assert out.factor_dims == (2,)
        assert np.allclose(out.entries, a * np.trace(b))

    def test_full_trace(self):
        out = trace_factors(DenseOperator.identity(3), {1, 2, 3})
        assert out.scalar() == pytest.approx(8.0)

    def test_empty_trace_set(self):
        with pytest.raises(ValueError):
            trace_factors(DenseOperator.identity(2), set())


class TestDenseOperator:
    def test_shape_checked(self):
        with pytest.raises(ValueError):
            DenseOperator(np.eye(4), (2,))

    def test_factor_mismatch(self):
        with pytest.raises(ValueError):
            DenseOperator.identity(2) @ DenseOperator(np.eye(4), (4,))

    def test_scalar_algebra(self):
        op = 2 * DenseOperator.identity(1) - DenseOperator.identity(1)
        assert op.is_scalar_multiple_of_identity()
        assert np.allclose(op.entries, np.eye(2))

    def test_relative_residual(self, rng):
        x = _random_op(rng, 4)
        assert relative_residual(x, x) == 0.0
        assert relative_residual(x, -x) == pytest.approx(2.0)
