"""Exact solvers for the linear one-class problem and the nu-parameterized bridge.

Two convex programs are solved here, both restricted to linear scores
s(x) = w'x (no hidden layers):

* the hinge form: minimize 0.5||w||^2 + C * sum_i max(0, 1 - w'z_i), handled
  through its box-constrained dual in ``solve_oneclass_dual``;
* the nu form: minimize 0.5||w||^2 + (1/(nu*n)) * sum_i max(0, rho - w'z_i)
  - rho, handled through its capped-simplex dual in ``solve_nu_svm``.

``map_to_nu`` converts an optimal hinge solution into the matching nu problem
(delta = 1/sum(alpha), nu = sum(alpha)/(C*n), w_hat = w*delta, rho = delta),
and ``verify_boundary_coincidence`` checks that both decision rules carve the
same half-space on a probe set.

Every solve is certified: the recovered primal objective must sit within
GAP_TOL of the dual value, otherwise the solver raises rather than returning
a silently loose answer.  Certification precision degrades with the dynamic
range C * max||z||^2; rescale features first (datasets.scale_to_range) if
that product is extreme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import Dataset

GAP_TOL = 1e-6
KKT_TOL = 1e-8
# a sweep has converged when no single coordinate can improve the dual by this much
SWEEP_IMPROVEMENT_TOL = 1e-12
BOUNDARY_TOL = 1e-6


class DualityError(RuntimeError):
    """Solver failed to certify, or a mapped quantity is degenerate."""


@dataclass(frozen=True)
class DualSolution:
    """Optimal multipliers for the hinge-form dual.

    alpha holds the margin multipliers in [0, C], beta the complementary
    slack multipliers (beta = C - alpha exactly), w the recovered primal
    weights sum_i alpha_i z_i, and objective the attained dual value.
    """

    alpha: np.ndarray
    beta: np.ndarray
    w: np.ndarray
    objective: float


@dataclass(frozen=True)
class NuMapping:
    """Hinge solution re-expressed in the nu parameterization."""

    delta_scalar: float
    nu: float
    rho: float
    w_hat: np.ndarray


@dataclass(frozen=True)
class NuSolution:
    """Output of the nu-form solver.

    rho_ambiguous marks solutions recovered without any strictly interior
    support vector; the primal is constant in rho across the reported
    interval midpoint, so the offset (and with it the decision boundary) is
    not unique.  Cross-solver comparisons must skip ambiguous instances.
    """

    alpha: np.ndarray
    w_hat: np.ndarray
    rho: float
    rho_ambiguous: bool
    gap: float


@dataclass(frozen=True)
class CoincidenceReport:
    """Probe-level agreement between a hinge rule and a nu rule."""

    probes_checked: int
    disagreements: tuple[int, ...]

    @property
    def coincide(self) -> bool:
        return not self.disagreements


def _as_features(data: Dataset) -> np.ndarray:
    if not isinstance(data, Dataset):
        raise TypeError("expected a Dataset")
    return data.x


def _hinge_dual_value(alpha: np.ndarray, f: np.ndarray) -> float:
    return float(np.sum(alpha) - 0.5 * alpha @ f)


def _hinge_primal_value(z: np.ndarray, w: np.ndarray, c: float) -> float:
    return float(0.5 * w @ w + c * np.sum(np.maximum(0.0, 1.0 - z @ w)))


def _stationarity_candidate(K, alpha, c, free, tol_b):
    """Solve the first-order system on a trial free set, clipped to the box."""
    at_c = (alpha >= c - tol_b) & ~free
    rhs = np.full(int(free.sum()), 1.0)
    if np.any(at_c):
        rhs = rhs - K[np.ix_(free, at_c)] @ alpha[at_c]
    sol, *_ = np.linalg.lstsq(K[np.ix_(free, free)], rhs, rcond=None)
    cand = alpha.copy()
    cand[~free & ~at_c] = 0.0
    cand[free] = np.clip(sol, 0.0, c)
    f_cand = K @ cand
    return cand, f_cand, _hinge_dual_value(cand, f_cand)


def _ascent_polish(K, alpha, f, c, deep):
    """Accept the best strictly improving free-set solve, if any.

    The light pass re-solves only the currently interior coordinates; the
    deep pass additionally guesses free sets from near-margin scores and
    from the largest per-point certificate violations.  Candidates never
    decrease the dual, so interleaving them preserves monotone ascent.
    """
    obj = _hinge_dual_value(alpha, f)
    tol_b = 1e-10 * max(1.0, c)
    base_free = (alpha > tol_b) & (alpha < c - tol_b)
    candidates = [base_free]
    if deep:
        for tau in (1e-9, 1e-7, 1e-5, 1e-3):
            candidates.append(base_free | (np.abs(f - 1.0) < tau))
        contrib = alpha * (f - 1.0) + c * np.maximum(0.0, 1.0 - f)
        viol_order = np.argsort(-contrib)
        for k in (1, 2, 4, 8, 16):
            cand = base_free.copy()
            cand[viol_order[:k]] = True
            candidates.append(cand)
    best = (alpha, f, False)
    best_obj = obj + 1e-15 * max(1.0, abs(obj))
    seen = set()
    for free in candidates:
        if not np.any(free):
            continue
        key = free.tobytes()
        if key in seen:
            continue
        seen.add(key)
        cand, f_cand, obj_new = _stationarity_candidate(K, alpha, c, free, tol_b)
        if obj_new > best_obj:
            best = (cand, f_cand, True)
            best_obj = obj_new
    return best


def solve_oneclass_dual(
    data: Dataset,
    c: float,
    max_sweeps: int = 200000,
    seed: int = 0,
) -> DualSolution:
    """Maximize sum(alpha) - 0.5*alpha'K alpha over the box [0, C]^n.

    Projected cyclic coordinate ascent with a fixed per-seed visiting order.
    Each visited coordinate jumps to its exact clipped optimum.  Because
    single-coordinate moves crawl along nearly flat valleys when C is large,
    an exact stationarity re-solve on the current free set runs every ten
    sweeps and again whenever a sweep stalls (best improvement below
    SWEEP_IMPROVEMENT_TOL); only strictly improving re-solves are kept.
    A stalled iterate gets two fresh visiting orders before the solver
    gives up.

    Returns the certified solution.  Raises DualityError when the final
    primal-dual gap still exceeds GAP_TOL, with the gap in the message.
    """
    z = _as_features(data)
    if not np.isfinite(c) or c <= 0.0:
        raise DualityError(f"cost must be positive, got {c!r}")
    n = data.n
    K = z @ z.T
    diag = np.diag(K).copy()
    # stall detection must not trip while O(1) margins remain on big-norm rows
    imp_tol = SWEEP_IMPROVEMENT_TOL / max(1.0, float(diag.max(initial=0.0)))
    alpha = np.zeros(n)
    f = np.zeros(n)
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)

    stalls = 0
    reshuffles_left = 2
    for sweep in range(max_sweeps):
        best = 0.0
        for i in order:
            g = 1.0 - f[i]
            if diag[i] > 0.0:
                new = min(max(alpha[i] + g / diag[i], 0.0), c)
            else:
                new = c if g > 0.0 else alpha[i]
            d = new - alpha[i]
            if d != 0.0:
                imp = g * d - 0.5 * diag[i] * d * d
                if imp > best:
                    best = imp
                alpha[i] = new
                f += d * K[:, i]
        if (sweep + 1) % 10 == 0:
            alpha, f, _ = _ascent_polish(K, alpha, f, c, deep=False)
        if best < imp_tol:
            dual = _hinge_dual_value(alpha, f)
            gap = _hinge_primal_value(z, z.T @ alpha, c) - dual
            if gap <= max(1e-9, 1e-12 * abs(dual)):
                break
            alpha, f, improved = _ascent_polish(K, alpha, f, c, deep=True)
            stalls += 1
            if not improved and stalls >= 3:
                if reshuffles_left > 0:
                    reshuffles_left -= 1
                    order = rng.permutation(n)
                    stalls = 0
                else:
                    break
        else:
            stalls = 0

    w = z.T @ alpha
    dual = _hinge_dual_value(alpha, f)
    gap = _hinge_primal_value(z, w, c) - dual
    if not np.isfinite(gap) or abs(gap) > GAP_TOL:
        raise DualityError(
            f"dual ascent did not certify: primal-dual gap {gap:.3e} exceeds "
            f"{GAP_TOL:.0e} (dynamic range C*max||z||^2 = {c * diag.max(initial=0.0):.3e})"
        )
    return DualSolution(alpha=alpha, beta=c - alpha, w=w, objective=dual)


def map_to_nu(sol: DualSolution, c: float, n: int) -> NuMapping:
    """Re-express a hinge optimum in the nu parameterization.

    delta = 1/sum(alpha); nu = sum(alpha)/(C*n), always in (0, 1] at an
    optimum; the rescaled rule is w_hat = w*delta with offset rho = delta.
    """
    total = float(np.sum(sol.alpha))
    if total <= 0.0:
        raise DualityError("degenerate solution: sum of alpha is zero, no support vectors")
    if c <= 0.0 or n <= 0:
        raise DualityError(f"need positive cost and sample count, got c={c!r}, n={n!r}")
    delta = 1.0 / total
    # alpha <= c entrywise puts nu <= 1 analytically; summation roundoff can
    # overshoot by an ulp when every coordinate sits at the cap
    nu = min(total / (c * n), 1.0)
    return NuMapping(delta_scalar=delta, nu=nu, rho=delta, w_hat=sol.w * delta)


def _project_capped_simplex(v: np.ndarray, cap: float) -> np.ndarray:
    """Exact Euclidean projection onto {a : 0 <= a_i <= cap, sum a = 1}.

    The projection is clip(v - tau, 0, cap) for the unique shift tau making
    the coordinates sum to one.  The sum is piecewise linear in tau with
    breakpoints at v_i and v_i - cap, so tau comes from a binary search over
    sorted breakpoints plus one linear interpolation.
    """
    n = len(v)
    total = cap * n
    if total < 1.0 - 1e-9:
        raise DualityError("projection infeasible: n*cap < 1")
    if total <= 1.0 + 1e-9:
        return np.full(n, 1.0 / n)
    bps = np.concatenate([v, v - cap])
    bps.sort()

    def mass(tau: float) -> float:
        return float(np.sum(np.clip(v - tau, 0.0, cap)))

    if mass(bps[0]) <= 1.0:
        tau0, tau1 = bps[0] - 1.0, bps[0]
    else:
        lo, hi = 0, len(bps) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if mass(bps[mid]) >= 1.0:
                lo = mid
            else:
                hi = mid
        tau0, tau1 = bps[lo], bps[hi]
    m0, m1 = mass(tau0), mass(tau1)
    tau = tau0 if m1 == m0 else tau0 + (m0 - 1.0) * (tau1 - tau0) / (m0 - m1)
    out = np.clip(v - tau, 0.0, cap)
    drift = out.sum() - 1.0
    if drift != 0.0:
        interior = (out > 0.0) & (out < cap)
        k = int(interior.sum())
        if k:
            out[interior] -= drift / k
            out = np.clip(out, 0.0, cap)
    return out


def _recover_offset(alpha: np.ndarray, scores: np.ndarray, cap: float) -> tuple[float, bool]:
    """Offset from interior support vectors, else the ambiguity-interval midpoint.

    With no interior support vector the primal is constant in rho over
    [max score at the cap, min score at zero]; the midpoint is reported and
    flagged.  When the interval is one-sided (every multiplier at the cap,
    which requires nu = 1) its finite endpoint is used.
    """
    tol_sv = 1e-7 * cap
    free = (alpha > tol_sv) & (alpha < cap - tol_sv)
    if np.any(free):
        return float(np.mean(scores[free])), False
    at_cap = alpha >= cap - tol_sv
    at_zero = alpha <= tol_sv
    lo = float(np.max(scores[at_cap])) if np.any(at_cap) else -np.inf
    hi = float(np.min(scores[at_zero])) if np.any(at_zero) else np.inf
    if np.isinf(hi):
        return lo, True
    if np.isinf(lo):
        return hi, True
    return 0.5 * (lo + hi), True


def solve_nu_svm(data: Dataset, nu: float, max_iters: int = 300000) -> NuSolution:
    """Minimize 0.5*alpha'K alpha over {0 <= alpha <= 1/(nu*n), sum alpha = 1}.

    Accelerated projected gradient with the exact capped-simplex projection,
    momentum restarted whenever it points uphill.  Every 50 iterations the
    candidate primal (with the offset recovered from support vectors) is
    compared against the dual value; iteration stops once the gap falls
    below 1e-9-scale noise.  Raises DualityError if the final gap exceeds
    GAP_TOL.
    """
    z = _as_features(data)
    n = data.n
    if not np.isfinite(nu) or not 0.0 < nu <= 1.0:
        raise DualityError(f"nu must lie in (0, 1], got {nu!r}")
    K = z @ z.T
    cap = 1.0 / (nu * n)

    def certify(a: np.ndarray):
        w_hat = z.T @ a
        scores = z @ w_hat
        rho, flagged = _recover_offset(a, scores, cap)
        primal = 0.5 * w_hat @ w_hat + np.sum(np.maximum(0.0, rho - scores)) / (nu * n) - rho
        dual = -0.5 * float(a @ (K @ a))
        return float(primal - dual), w_hat, rho, flagged

    alpha = _project_capped_simplex(np.full(n, 1.0 / n), cap)
    if n > 1:
        step = 1.0 / max(float(np.linalg.eigvalsh(K)[-1]), 1e-300)
        y = alpha.copy()
        t_mom = 1.0
        for t in range(max_iters):
            g = K @ y
            new = _project_capped_simplex(y - step * g, cap)
            t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_mom * t_mom))
            if g @ (new - alpha) > 0.0:
                y = new.copy()
                t_mom = 1.0
            else:
                y = new + ((t_mom - 1.0) / t_next) * (new - alpha)
                t_mom = t_next
            alpha = new
            if (t + 1) % 50 == 0:
                gap, _, _, _ = certify(alpha)
                if gap <= max(1e-10, 1e-9 * abs(0.5 * alpha @ (K @ alpha))):
                    break

    gap, w_hat, rho, flagged = certify(alpha)
    if not np.isfinite(gap) or abs(gap) > GAP_TOL:
        raise DualityError(
            f"projected gradient did not certify: primal-dual gap {gap:.3e} exceeds {GAP_TOL:.0e}"
        )
    return NuSolution(alpha=alpha, w_hat=w_hat, rho=rho, rho_ambiguous=flagged, gap=gap)


def verify_boundary_coincidence(
    w: np.ndarray,
    w_hat: np.ndarray,
    rho: float,
    probes: np.ndarray,
) -> CoincidenceReport:
    """Compare sign(w'x - 1) against sign(w_hat'x - rho) on every probe row.

    Probes lying within BOUNDARY_TOL of either hyperplane are never counted
    as disagreements; everywhere else the two rules must pick the same side.
    """
    probes = np.asarray(probes, dtype=float)
    if probes.ndim == 1:
        probes = probes[None, :]
    if probes.size == 0:
        raise DualityError("probe set is empty")
    margins_hinge = probes @ np.asarray(w, dtype=float) - 1.0
    margins_nu = probes @ np.asarray(w_hat, dtype=float) - float(rho)
    off_boundary = (np.abs(margins_hinge) > BOUNDARY_TOL) & (np.abs(margins_nu) > BOUNDARY_TOL)
    split = np.sign(margins_hinge) != np.sign(margins_nu)
    bad = np.flatnonzero(off_boundary & split)
    return CoincidenceReport(probes_checked=len(probes), disagreements=tuple(int(i) for i in bad))
