"""
core.selfcheck
Minimal "it runs" proof for the numeric core.

Run:
  python -m core.selfcheck
"""

from __future__ import annotations

import numpy as np

from .bethe import energy_from_roots, make_context, solve_bae
from .lattice import hamiltonian, transfer_matrix
from .params import ModelParams, homogeneous_params
from .spectral import lambda_from_oracle
from .verify import verify_catalog, verify_vacuum_relations


def run_smoke() -> None:
    params = ModelParams(N=2, p=2.0, q=3.0, xi=0.5, theta=(0.2, -0.4))

    # tau(0) = 2pq prod(1-theta^2) id
    tau0 = transfer_matrix(0.0, params).entries
    assert np.allclose(tau0, 9.6768 * np.eye(4)), tau0.diagonal()

    results = verify_catalog(params) + verify_vacuum_relations(params)
    failed = [r.identity_id for r in results if not r.passed]
    assert not failed, failed

    cands = lambda_from_oracle(params)
    assert len(cands) == 4
    assert all(c.max_residual < 1e-8 for c in cands)

    # N=1 homogeneous: one level per branch
    h = homogeneous_params(1, 1.3, 2.1, 0.5)
    exact = np.sort(np.linalg.eigvalsh(hamiltonian(h).entries))
    energies = []
    for branch in (1, -1):
        ctx = make_context(h, branch)
        solved = solve_bae(ctx, 0, "homotopy_xi")
        energies += [energy_from_roots(r, ctx).real for r in solved.solutions]
    assert np.allclose(np.sort(energies), exact, atol=1e-9), (energies, exact)

    print("OK: core smoke test passed.")
    print("Identities checked:", len(results))
    print("N=1 energies:", [round(e, 12) for e in sorted(energies)])


if __name__ == "__main__":
    run_smoke()
