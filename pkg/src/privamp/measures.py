"""Distance and divergence measures, all logarithms base 2.

The sandwiched Renyi family is evaluated through cached curve objects
(RenyiDivergenceCurve for an operator pair, ConditionalRenyiCurve for a
classical-quantum state) that diagonalize the reference operator once and
reduce each order-alpha evaluation to one small batched eigvalsh. Exponent
optimizations call these evaluators hundreds of times, so the caching is
what keeps the desk-scale suites fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import DEFAULT_SUPPORT_CUT, HermitianOperator, _as_matrix, mat_power
from .states import CQState, StateDescriptor, _as_state_matrix

ALPHA_ONE_GUARD = 1e-6
SUPPORT_VIOLATION_TOL = 1e-10
LOG2E = math.log2(math.e)


@dataclass(frozen=True)
class DivergenceResult:
    """Value of a divergence in bits, with support diagnostics.

    support_violation is the rho-mass found outside the support of the
    reference operator; values above SUPPORT_VIOLATION_TOL force +inf for
    divergences that require support containment.
    """

    value: float
    alpha: float | None = None
    support_violation: float = 0.0

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)


def _log2sumexp2(terms: np.ndarray) -> float:
    """log2 of a sum of 2**terms, stable against overflow."""
    t = np.asarray(terms, dtype=float)
    t = t[~np.isneginf(t)]
    if t.size == 0:
        return -math.inf
    m = float(t.max())
    return m + math.log2(float(np.exp2(t - m).sum()))


def _entropy_bits(w: np.ndarray) -> float:
    """Shannon entropy of a nonnegative eigenvalue vector, in bits."""
    w = np.asarray(w, dtype=float)
    w = w[w > 0]
    return float(-(w * np.log2(w)).sum()) if w.size else 0.0


def _nuclear_norm(m: np.ndarray) -> float:
    return float(np.linalg.svd(m, compute_uv=False).sum())


def fidelity(rho, sigma) -> float:
    """Generalized fidelity of (sub)normalized states.

    ||sqrt(rho) sqrt(sigma)||_1 plus the subnormalized cross term
    sqrt((1 - tr rho)(1 - tr sigma)); the result is clamped to [0, 1].
    """
    rm, sm = _as_state_matrix(rho), _as_state_matrix(sigma)
    sqr = mat_power(rm, 0.5).mat
    sqs = mat_power(sm, 0.5).mat
    val = _nuclear_norm(sqr @ sqs)
    tr_r = min(1.0, float(np.trace(rm).real))
    tr_s = min(1.0, float(np.trace(sm).real))
    val += math.sqrt(max(0.0, 1.0 - tr_r) * max(0.0, 1.0 - tr_s))
    return min(1.0, max(0.0, val))


def purified_distance(rho, sigma) -> float:
    """P = sqrt(1 - F^2) for the generalized fidelity F."""
    f = fidelity(rho, sigma)
    return math.sqrt(max(0.0, 1.0 - f * f))


def trace_distance(rho, sigma) -> float:
    """Generalized trace distance (1/2)(||rho - sigma||_1 + |tr rho - tr sigma|)."""
    rm, sm = _as_state_matrix(rho), _as_state_matrix(sigma)
    w = np.linalg.eigvalsh(rm - sm)
    return 0.5 * (float(np.abs(w).sum()) + abs(float(np.trace(rm - sm).real)))


class RenyiDivergenceCurve:
    """Cached evaluator of alpha -> Q_alpha(rho || sigma) for one pair.

    sigma is diagonalized once; rho is rotated into the support eigenbasis.
    Each order evaluates one eigvalsh of the sandwiched matrix. Supports
    pseudo-powers of sigma; support conditions are enforced at the
    divergence() level, not inside log2_q.
    """

    def __init__(self, rho, sigma, support_cut: float = DEFAULT_SUPPORT_CUT):
        rm = _as_state_matrix(rho)
        sm = _as_matrix(sigma)
        if rm.shape != sm.shape:
            raise ValueError(f"dimension mismatch: {rm.shape} vs {sm.shape}")
        w, v = np.linalg.eigh(sm)
        scale = max(1.0, float(np.max(np.abs(w))))
        if float(w[0]) < -1e-9 * scale:
            raise ValueError(f"reference operator not PSD: min eigenvalue {w[0]:.3e}")
        lam_max = float(w[-1])
        keep = w > support_cut * lam_max if lam_max > 0 else np.zeros_like(w, dtype=bool)
        self._mu = np.clip(w[keep], 0.0, None)
        vk = v[:, keep]
        b = vk.conj().T @ rm @ vk
        self._b = (b + b.conj().T) / 2.0
        self.rho_trace = float(np.trace(rm).real)
        self.support_violation = max(0.0, self.rho_trace - float(np.trace(self._b).real))
        self.tr_rho_sigma = float(np.trace(rm @ sm).real)
        self._rho_mat = rm
        self._sigma_eigs = (w, v)

    def log2_q(self, alpha: float) -> float:
        """log2 tr((sigma^e rho sigma^e)^alpha), e = (1-alpha)/(2 alpha), on supp(sigma)."""
        if alpha <= 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        if self._mu.size == 0:
            return -math.inf
        e = (1.0 - alpha) / (2.0 * alpha)
        d = self._mu**e
        a = d[:, None] * self._b * d[None, :]
        w = np.linalg.eigvalsh(a)
        w = np.clip(w, 0.0, None)
        wmax = float(w.max(initial=0.0))
        if wmax <= 0.0:
            return -math.inf
        return alpha * math.log2(wmax) + math.log2(float(((w / wmax) ** alpha).sum()))

    def divergence(self, alpha: float) -> DivergenceResult:
        """Sandwiched Renyi divergence of order alpha, +inf on support failure."""
        if alpha <= 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        if abs(alpha - 1.0) <= ALPHA_ONE_GUARD:
            raise ValueError(
                f"alpha = {alpha} is within {ALPHA_ONE_GUARD} of 1; "
                "use umegaki() for the order-1 divergence"
            )
        if alpha > 1 and self.support_violation > SUPPORT_VIOLATION_TOL:
            return DivergenceResult(math.inf, alpha, self.support_violation)
        if alpha < 1 and self.tr_rho_sigma <= 1e-14:
            return DivergenceResult(math.inf, alpha, self.support_violation)
        val = self.log2_q(alpha) / (alpha - 1.0)
        return DivergenceResult(float(val), alpha, self.support_violation)

    def umegaki(self) -> DivergenceResult:
        """Order-1 divergence tr rho (log rho - log sigma), +inf on support failure."""
        if self.support_violation > SUPPORT_VIOLATION_TOL:
            return DivergenceResult(math.inf, 1.0, self.support_violation)
        wr = np.linalg.eigvalsh(self._rho_mat)
        tr_rho_log_rho = float((wr[wr > 0] * np.log2(wr[wr > 0])).sum())
        diag_b = np.real(np.diag(self._b))
        mu = self._mu
        pos = mu > 0
        tr_rho_log_sigma = float((diag_b[pos] * np.log2(mu[pos])).sum())
        return DivergenceResult(tr_rho_log_rho - tr_rho_log_sigma, 1.0, self.support_violation)

    def dmax(self) -> DivergenceResult:
        """Max-relative entropy log2 min{c : rho <= c sigma}, +inf on support failure."""
        if self.support_violation > SUPPORT_VIOLATION_TOL:
            return DivergenceResult(math.inf, math.inf, self.support_violation)
        if self._mu.size == 0:
            return DivergenceResult(math.inf, math.inf, self.support_violation)
        d = self._mu**-0.5
        a = d[:, None] * self._b * d[None, :]
        lam = float(np.linalg.eigvalsh(a)[-1])
        if lam <= 0:
            return DivergenceResult(-math.inf, math.inf, self.support_violation)
        return DivergenceResult(math.log2(lam), math.inf, self.support_violation)


def sandwiched_renyi_divergence(rho, sigma, alpha: float) -> DivergenceResult:
    """Sandwiched Renyi divergence D_alpha(rho || sigma) in bits.

    rho must be a normalized state; sigma any PSD operator. Orders within
    ALPHA_ONE_GUARD of 1 are rejected (use relative_entropy). For alpha > 1
    the result is +inf when rho has mass outside supp(sigma) above tolerance;
    for alpha < 1 it is +inf when tr(rho sigma) vanishes.
    """
    return RenyiDivergenceCurve(rho, sigma).divergence(alpha)


def relative_entropy(rho, sigma) -> DivergenceResult:
    """Umegaki relative entropy D(rho || sigma) in bits, +inf on support failure."""
    return RenyiDivergenceCurve(rho, sigma).umegaki()


def max_relative_entropy(rho, sigma) -> DivergenceResult:
    """D_max(rho || sigma) = log2 of the least c with rho <= c sigma."""
    return RenyiDivergenceCurve(rho, sigma).dmax()


class ConditionalRenyiCurve:
    """Cached evaluator of conditional Renyi entropies of a CQ state.

    Diagonalizes the marginal rho_E once and stores every conditional in that
    basis, compressed to the support. Q_alpha against 1_X (x) rho_E is then a
    batched eigvalsh of scaled blocks, so sweeping alpha is cheap.
    """

    def __init__(self, cq: CQState, support_cut: float = DEFAULT_SUPPORT_CUT):
        self.cq = cq
        re = cq.rho_e()
        w, v = np.linalg.eigh(re)
        lam_max = float(w[-1])
        keep = w > support_cut * lam_max if lam_max > 0 else np.zeros_like(w, dtype=bool)
        self._mu = np.clip(w[keep], 0.0, None)
        vk = v[:, keep]
        mask = cq.probs > 0
        self._p = cq.probs[mask]
        blocks = np.stack([vk.conj().T @ c @ vk for c, m in zip(cq.conditionals, mask) if m])
        self._blocks = (blocks + np.conj(np.transpose(blocks, (0, 2, 1)))) / 2.0
        self._h_e = _entropy_bits(w)

    def log2_q(self, alpha: float) -> float:
        """log2 Q_alpha(rho_XE || 1_X (x) rho_E)."""
        if alpha <= 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        e = (1.0 - alpha) / (2.0 * alpha)
        d = self._mu**e
        a = d[None, :, None] * self._blocks * d[None, None, :]
        w = np.clip(np.linalg.eigvalsh(a), 0.0, None)
        terms = np.empty(len(self._p))
        for i in range(len(self._p)):
            wi = w[i]
            wmax = float(wi.max(initial=0.0))
            if wmax <= 0.0:
                terms[i] = -math.inf
                continue
            terms[i] = (
                alpha * math.log2(self._p[i])
                + alpha * math.log2(wmax)
                + math.log2(float(((wi / wmax) ** alpha).sum()))
            )
        return _log2sumexp2(terms)

    def s_times_h(self, s: float) -> float:
        """s * H_{1+s}(X|E) = -log2 Q_{1+s}; concave in s, zero at s = 0."""
        return -self.log2_q(1.0 + s)

    def h1(self) -> float:
        """von Neumann conditional entropy H(X|E) = H(XE) - H(E), in bits."""
        h_xe = _entropy_bits(self._p)
        for px, block in zip(self._p, self._blocks):
            h_xe += px * _entropy_bits(np.linalg.eigvalsh(block))
        return h_xe - self._h_e

    def hmin(self) -> float:
        """H_min(X|E) = -log2 max_x lambda_max(p_x rho_E^{-1/2} rho_x rho_E^{-1/2})."""
        d = self._mu**-0.5
        a = d[None, :, None] * self._blocks * d[None, None, :]
        w = np.linalg.eigvalsh(a)
        lam = float((self._p * w[:, -1]).max())
        return -math.log2(lam)

    def h(self, alpha: float) -> float:
        """Conditional Renyi entropy of order alpha (1 and inf included)."""
        if alpha == 1.0:
            return self.h1()
        if math.isinf(alpha):
            return self.hmin()
        if abs(alpha - 1.0) <= ALPHA_ONE_GUARD:
            raise ValueError(
                f"alpha = {alpha} is within {ALPHA_ONE_GUARD} of 1; pass alpha=1 exactly"
            )
        return -self.log2_q(alpha) / (alpha - 1.0)


def renyi_conditional_entropy(state, alpha: float, dims: tuple[int, int] | None = None) -> float:
    """H_alpha(A|B) = -D_alpha(rho_AB || 1_A (x) rho_B) in bits.

    Accepts a CQState (fast block path) or a bipartite StateDescriptor with
    dims = (dim_a, dim_b) for the dense path. alpha = 1 gives the von Neumann
    conditional entropy; alpha = inf gives H_min.
    """
    if isinstance(state, CQState):
        return ConditionalRenyiCurve(state).h(alpha)
    if dims is None:
        raise ValueError("dense bipartite input needs dims=(dim_a, dim_b)")
    da, db = dims
    rm = _as_state_matrix(state)
    if rm.shape[0] != da * db:
        raise ValueError(f"state dim {rm.shape[0]} is not dim_a*dim_b = {da * db}")
    rho_b = np.einsum("aibj->ij", rm.reshape(da, db, da, db))
    sigma = np.kron(np.eye(da), rho_b)
    curve = RenyiDivergenceCurve(rm, sigma)
    if alpha == 1.0:
        return -curve.umegaki().value
    if math.isinf(alpha):
        return -curve.dmax().value
    return -curve.divergence(alpha).value


def min_conditional_entropy(state, dims: tuple[int, int] | None = None) -> float:
    """H_min(A|B), the alpha -> inf limit."""
    return renyi_conditional_entropy(state, math.inf, dims)


def apply_measurement(rho, povm) -> np.ndarray:
    """Outcome distribution of a POVM, as a classical probability vector."""
    rm = _as_state_matrix(rho)
    p = np.array([float(np.trace(rm @ _as_matrix(m)).real) for m in povm])
    return np.clip(p, 0.0, None)
