from __future__ import annotations

import numpy as np

from privamp import CQState


def rand_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return m / float(np.trace(m).real)


def rand_cq(rng: np.random.Generator, nx: int, dim_e: int) -> CQState:
    probs = rng.dirichlet(np.ones(nx))
    conds = [rand_density(rng, dim_e) for _ in range(nx)]
    return CQState(probs, conds)


def rand_commuting_pair(rng: np.random.Generator, dim: int):
    """A density matrix and a PSD reference sharing one random eigenbasis."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, _ = np.linalg.qr(g)
    p = rng.dirichlet(np.ones(dim))
    w = rng.dirichlet(np.ones(dim)) * float(rng.uniform(0.5, 2.0))
    rho = (q * p) @ q.conj().T
    sigma = (q * w) @ q.conj().T
    return rho, sigma
