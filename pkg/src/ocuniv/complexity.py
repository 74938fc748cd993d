"""Capacity estimates for linear score classes, with and without contradiction slabs.

The inductive class is {x -> w'x : ||w|| <= Lambda}.  The contradiction-aware
class additionally pins every universum row u_j into a band |w'u_j - 1| <= Delta.
This module estimates the empirical Rademacher complexity of both classes by
Monte Carlo (paired noise streams, so the two estimates are comparable draw by
draw), evaluates the matching closed-form ceilings, and computes the
train/universum alignment statistic sigma that controls how much the slabs can
shrink the ceiling.

Complexity values feed the excess-risk ceiling assembled by ``theorem1_rhs``:
(1/(kappa*n)) * sum(xi) + (2/kappa) * erc + 3*sqrt(ln(2/eta)/(2n)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MC_DRAWS_DEFAULT = 200
ASCENT_ITERATIONS = 500
ASCENT_OBJECTIVE_TOL = 1e-8
PROJECTION_TOL = 1e-12
FEASIBILITY_TOL = 1e-9
MAX_ENUMERATED_SLABS = 8

# gamma = 0 recovers the plain ceiling, the tail entry is the analytic limit
DEFAULT_GAMMA_GRID = (0.0,) + tuple(np.logspace(-6.0, 6.0, 49)) + (math.inf,)


class ComplexityError(ValueError):
    """Invalid capacity inputs or an empty constraint set."""


@dataclass(frozen=True)
class FeatureBatch:
    """Training features z (n x p) alongside universum features u (m x p)."""

    z: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        z = np.atleast_2d(np.asarray(self.z, dtype=float))
        u = np.atleast_2d(np.asarray(self.u, dtype=float))
        if z.ndim != 2 or u.ndim != 2 or z.size == 0 or u.size == 0:
            raise ComplexityError("feature batch needs non-empty 2-D z and u")
        if z.shape[1] != u.shape[1]:
            raise ComplexityError(
                f"feature dimensions differ: z has {z.shape[1]}, u has {u.shape[1]}"
            )
        if not (np.isfinite(z).all() and np.isfinite(u).all()):
            raise ComplexityError("feature batch entries must be finite")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "u", u)

    @property
    def n(self) -> int:
        return self.z.shape[0]

    @property
    def m(self) -> int:
        return self.u.shape[0]

    @property
    def p(self) -> int:
        return self.z.shape[1]


@dataclass(frozen=True)
class ClassBudget:
    """Hard weight-norm budget and universum band half-width."""

    lambda_cap: float
    delta: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.lambda_cap) or self.lambda_cap <= 0.0:
            raise ComplexityError(f"lambda_cap must be positive, got {self.lambda_cap!r}")
        if not np.isfinite(self.delta) or self.delta < 0.0:
            raise ComplexityError(f"delta must be non-negative, got {self.delta!r}")


@dataclass(frozen=True)
class BoundReport:
    """Everything the capacity analysis produces for one feature batch."""

    erc_ind_mc: float
    erc_ind_stderr: float
    erc_univ_mc: float
    erc_univ_stderr: float
    bound_bi: float
    bound_bii: float
    gamma_star: float
    sigma_inf: float
    sigma_gamma_curve: tuple[tuple[float, float], ...]
    lambda_cap: float
    delta: float
    theorem1_rhs: float | None = None
    draws: int = MC_DRAWS_DEFAULT
    seed: int = 0

    def __post_init__(self):
        if self.bound_bii > self.bound_bi + 1e-12:
            raise ComplexityError(
                f"slab ceiling {self.bound_bii!r} exceeds plain ceiling {self.bound_bi!r}"
            )
        for name in ("erc_ind_mc", "erc_univ_mc"):
            if getattr(self, name) < 0.0:
                raise ComplexityError(f"{name} must be non-negative")


def build_v_matrix(u: np.ndarray) -> np.ndarray:
    """Stack the universum rows on top of their reflections: [u; -u]."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if u.size == 0:
        raise ComplexityError("universum matrix is empty")
    return np.vstack([u, -u])


def _rademacher(seed: int, n: int, draws: int) -> np.ndarray:
    """Deterministic (draws x n) array of +-1 noise; both estimators share it."""
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(draws, n)).astype(float) * 2.0 - 1.0


def _ind_draw_sups(z: np.ndarray, lambda_cap: float, sigmas: np.ndarray) -> np.ndarray:
    # sup over the ball of (2/n)|sigma'Z w| is attained along Z'sigma
    n = z.shape[0]
    return (2.0 / n) * lambda_cap * np.linalg.norm(sigmas @ z, axis=1)


def _spectral_norm(z: np.ndarray, iterations: int = 60, seed: int = 0) -> float:
    """Largest singular value by power iteration on z'z."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=z.shape[1])
    norm = np.linalg.norm(v)
    if norm == 0.0 or not np.any(z):
        return 0.0
    v /= norm
    for _ in range(iterations):
        w = z.T @ (z @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
    return float(np.linalg.norm(z @ v))


def _project_slabs_ball(w: np.ndarray, u: np.ndarray, budget: ClassBudget,
                        max_cycles: int = 100) -> np.ndarray:
    """Dykstra cycle (ball first, then slabs) applied to every row of w.

    Slabs join the cycle lazily, on the first cycle some row violates them;
    until then their corrections are identically zero and visiting them would
    be a no-op, so the skipped visits leave the iteration unchanged while the
    per-cycle cost tracks the handful of facets actually touched rather than
    the full slab count.  Iterates until the worst constraint violation across
    rows drops below PROJECTION_TOL or the cycle budget runs out; rows are
    then rescaled onto the ball exactly, so returned points never leave the
    norm budget.
    """
    w = np.array(w, dtype=float)
    lam, delta = budget.lambda_cap, budget.delta
    u_norms_sq = np.einsum("ij,ij->i", u, u)
    usable = np.flatnonzero(u_norms_sq > 0.0)
    ball_correction = np.zeros_like(w)
    engaged: list[int] = []
    slab_corrections: dict[int, np.ndarray] = {}

    for _ in range(max_cycles):
        y = w + ball_correction
        norms = np.linalg.norm(y, axis=1, keepdims=True)
        w = y * np.minimum(1.0, lam / np.maximum(norms, 1e-300))
        ball_correction = y - w
        if usable.size:
            margins = np.abs(w @ u[usable].T - 1.0).max(axis=0)
            for j in usable[margins > delta]:
                if j not in slab_corrections:
                    slab_corrections[j] = np.zeros_like(w)
                    engaged.append(j)
        for j in engaged:
            y = w + slab_corrections[j]
            t = y @ u[j]
            clamped = np.clip(t, 1.0 - delta, 1.0 + delta)
            w = y + np.outer((clamped - t) / u_norms_sq[j], u[j])
            slab_corrections[j] = y - w
        violation = max(0.0, float(np.max(np.linalg.norm(w, axis=1))) - lam)
        if usable.size:
            violation = max(violation,
                            float(np.max(np.abs(w @ u[usable].T - 1.0))) - delta)
        if violation < PROJECTION_TOL:
            break
    norms = np.linalg.norm(w, axis=1, keepdims=True)
    return w * np.minimum(1.0, lam / np.maximum(norms, 1e-300))


def _feasible_point(u: np.ndarray, budget: ClassBudget) -> np.ndarray:
    """A point in ball-intersect-slabs, or an error naming a violated slab."""
    lam, delta = budget.lambda_cap, budget.delta
    u_norms_sq = np.einsum("ij,ij->i", u, u)
    for j in np.flatnonzero(u_norms_sq == 0.0):
        if delta < 1.0:
            raise ComplexityError(
                f"constraint set empty: slab {j} has a zero universum row, "
                f"so |w'u_{j} - 1| = 1 > delta = {delta}"
            )
    start, *_ = np.linalg.lstsq(u, np.ones(u.shape[0]), rcond=None)
    w = _project_slabs_ball(start[None, :], u, budget, max_cycles=2000)[0]
    t = u @ w
    slack = np.abs(t - 1.0) - delta
    worst = int(np.argmax(slack))
    if slack[worst] > FEASIBILITY_TOL:
        raise ComplexityError(
            f"constraint set empty: slab {worst} violated by {slack[worst]:.3e} "
            f"at the closest ball point (|w'u_{worst} - 1| = {abs(t[worst] - 1.0):.6f} "
            f"> delta = {delta})"
        )
    return w


def _active_set_slices(u: np.ndarray, budget: ClassBudget):
    """Closed-form data for every slab active-set combination.

    Each slab is either inactive or pinned at one band edge.  For a chosen
    set of edge equalities E w = b the maximum of a linear objective over
    the remaining ball is w_aff + sqrt(lambda^2 - ||w_aff||^2) * unit(P g),
    with w_aff the min-norm solution and P the null-space projector.  Yields
    (w_aff, P) pairs; inconsistent or ball-incompatible combinations are
    dropped.
    """
    m, p = u.shape
    lam, delta = budget.lambda_cap, budget.delta
    eye = np.eye(p)
    yield np.zeros(p), eye
    for mask in range(1, 3**m):
        digits = [(mask // 3**j) % 3 for j in range(m)]
        active = [j for j, d in enumerate(digits) if d > 0]
        e = u[active]
        b = np.array([1.0 + delta if digits[j] == 1 else 1.0 - delta for j in active])
        w_aff, *_ = np.linalg.lstsq(e, b, rcond=None)
        if np.linalg.norm(e @ w_aff - b) > 1e-9 * (1.0 + np.linalg.norm(b)):
            continue
        if np.linalg.norm(w_aff) > lam * (1.0 + 1e-12):
            continue
        yield w_aff, eye - np.linalg.pinv(e) @ e


def _best_feasible_candidates(u: np.ndarray, budget: ClassBudget, grads: np.ndarray,
                              fallback: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exact per-row linear maxima over ball-with-slabs via active-set search."""
    lam, delta = budget.lambda_cap, budget.delta
    slab_tol = 1e-9 * (1.0 + delta + lam * np.linalg.norm(u, axis=1))
    best_w = np.tile(fallback, (len(grads), 1))
    best_obj = grads @ fallback
    # a projected gradient at rounding scale is a garbage direction, not a
    # tangent: walking the sphere radius along it can leave the ball while
    # staying inside wide slabs, so such rows stop at w_aff instead
    noise_floor = 1e-9 * (1.0 + np.linalg.norm(grads, axis=1, keepdims=True))
    for w_aff, proj in _active_set_slices(u, budget):
        radius_sq = lam * lam - float(w_aff @ w_aff)
        if radius_sq < -1e-11 * lam * lam:
            continue
        q = grads @ proj
        q_norms = np.linalg.norm(q, axis=1, keepdims=True)
        radius = math.sqrt(max(0.0, radius_sq))
        cand = w_aff + radius * np.where(q_norms > noise_floor, q / np.maximum(q_norms, 1e-300), 0.0)
        bands = np.abs(cand @ u.T - 1.0) - delta
        feasible = np.all(bands <= slab_tol, axis=1)
        obj = np.einsum("ij,ij->i", grads, cand)
        take = feasible & (obj > best_obj)
        best_w[take] = cand[take]
        best_obj[take] = obj[take]
    return best_w, best_obj


def _greedy_linear_max(g: np.ndarray, u: np.ndarray, budget: ClassBudget,
                       w_start: np.ndarray) -> tuple[np.ndarray, bool]:
    """Maximize g'w over the ball cut by slabs, walking facet to facet.

    Slab counts beyond the enumeration cap make exhaustive active-set search
    unaffordable, but at the optimum only a few facets bind.  Starting from a
    feasible point, each step solves the current facet slice of the ball in
    closed form (the same w_aff + r * unit(Pg) expression the enumeration
    uses) and moves along the segment toward that slice optimum: the segment
    stays in the ball by convexity, so a vectorized ratio test against every
    slab either clears the move or names the first blocking facet, which
    joins the working set.  At an unblocked slice optimum the facet whose
    multiplier comes out negative leaves the set (first index on ties, which
    keeps the walk from cycling), and a clean multiplier certificate ends the
    walk at the exact maximum.  Near-parallel slab bundles need two guards:
    a working set gone numerically rank-deficient retires its oldest facet,
    and a slice optimum that fails to improve on x is treated as reached
    rather than walked to, since ill-conditioned facet intersections can sit
    far from x with a worse objective.  Every iterate is feasible and the
    objective never decreases, so hitting the iteration cap still returns a
    valid lower bound no worse than w_start.

    Returns (x, certified).  certified is True when the walk ended on a
    global-optimality proof: either the unconstrained ball maximizer itself
    turned out feasible, or the gradient wrote as a non-negative combination
    of the outward normals active at x (for a linear objective over this
    convex set that certificate is global, not just local).  Guard exits and
    the iteration cap return certified False.
    """
    lam, delta = budget.lambda_cap, budget.delta
    p = u.shape[1]
    lower, upper = 1.0 - delta, 1.0 + delta
    x = np.array(w_start, dtype=float)
    eye = np.eye(p)
    work: list[tuple[int, int]] = []
    certified = False
    for _ in range(20 * (p + 2)):
        if work:
            rows = np.array([side * u[j] for j, side in work])
            if len(work) > 1:
                spectrum = np.linalg.svd(rows, compute_uv=False)
                if spectrum[-1] < 1e-8 * spectrum[0]:
                    work.pop(0)
                    continue
            targets = np.array([upper if side > 0 else -lower for _, side in work])
            w_aff, *_ = np.linalg.lstsq(rows, targets, rcond=None)
            if np.linalg.norm(rows @ w_aff - targets) > 1e-9 * (1.0 + np.abs(targets).max()):
                break
            proj = eye - np.linalg.pinv(rows) @ rows
        else:
            rows = np.zeros((0, p))
            w_aff = np.zeros(p)
            proj = eye
        radius_sq = lam * lam - float(w_aff @ w_aff)
        if radius_sq < 0.0:
            break
        direction = proj @ g
        dnorm = float(np.linalg.norm(direction))
        if dnorm > 1e-9 * (1.0 + float(np.linalg.norm(g))):
            x_star = w_aff + (math.sqrt(radius_sq) / dnorm) * direction
        else:
            x_star = w_aff
        at_optimum = float(g @ (x_star - x)) <= 1e-12 * (1.0 + abs(float(g @ x)))
        if not at_optimum:
            step_vec = x_star - x
            t = u @ x
            dt = u @ step_vec
            moving = np.abs(dt) > 1e-12 * (1.0 + np.abs(t))
            up = moving & (dt > 0.0)
            down = moving & (dt < 0.0)
            ratios = np.concatenate([
                np.where(up, np.maximum(upper - t, 0.0) / np.where(up, dt, 1.0), np.inf),
                np.where(down, np.maximum(t - lower, 0.0) / np.where(down, -dt, 1.0), np.inf),
            ])
            blocker = int(np.argmin(ratios))
            alpha = min(1.0, float(ratios[blocker]))
            x = x + alpha * step_vec
            if alpha < 1.0:
                m = len(t)
                pair = (blocker % m, 1 if blocker < m else -1)
                if pair in work:
                    break
                work.append(pair)
                continue
        if not work:
            certified = True
            break
        ball_tight = float(np.linalg.norm(x)) >= lam * (1.0 - 1e-9)
        basis = np.column_stack([x[:, None], rows.T] if ball_tight else [rows.T])
        mults, *_ = np.linalg.lstsq(basis, g, rcond=None)
        if np.linalg.norm(basis @ mults - g) > 1e-7 * (1.0 + np.linalg.norm(g)):
            break
        facet_mults = mults[1:] if ball_tight else mults
        tol = 1e-9 * (1.0 + float(np.abs(facet_mults).max(initial=0.0)))
        negatives = np.flatnonzero(facet_mults < -tol)
        if negatives.size == 0:
            certified = ball_tight is False or float(mults[0]) >= -tol
            break
        work.pop(int(negatives[0]))
    return x, certified


def _univ_draw_sups(batch: FeatureBatch, budget: ClassBudget,
                    sigmas: np.ndarray) -> np.ndarray:
    """Per-draw sup of (2/n)|sigma'Z w| over the ball cut by universum slabs.

    The absolute value splits into two signed linear maximizations.  Below
    MAX_ENUMERATED_SLABS every row takes the exact exhaustive active-set
    maximum and projected ascent still runs as an independent cross-check
    that can only raise the answer.  Above the cap each row walks the facets
    instead; rows whose walk ended on an optimality certificate are final,
    and only uncertified rows get the ascent polish, crediting just the
    iterates whose slab violations stay at projection-noise level.  Either
    way every counted point is feasible, so the estimate is a lower bound on
    the true sup and can never exceed the paired inductive value.
    """
    z, u = batch.z, batch.u
    n = batch.n
    w_feasible = _feasible_point(u, budget)
    grads = (2.0 / n) * (sigmas @ z)
    grads = np.vstack([grads, -grads])
    step = 1.0 / max(_spectral_norm(z), 1e-300)

    if batch.m <= MAX_ENUMERATED_SLABS:
        w, objective = _best_feasible_candidates(u, budget, grads, w_feasible)
        open_rows = np.arange(len(grads))
    else:
        walks = [_greedy_linear_max(g, u, budget, w_feasible) for g in grads]
        w = np.array([point for point, _ in walks])
        objective = np.einsum("ij,ij->i", grads, w)
        open_rows = np.flatnonzero([not certified for _, certified in walks])
        w = w[open_rows]

    best = objective.copy()
    if open_rows.size:
        g_open = grads[open_rows]
        slab_tol = 1e-9 * (1.0 + budget.delta
                           + budget.lambda_cap * np.linalg.norm(u, axis=1))
        for _ in range(ASCENT_ITERATIONS):
            w = _project_slabs_ball(w + step * g_open, u, budget)
            feasible = np.all(np.abs(w @ u.T - 1.0) - budget.delta <= slab_tol, axis=1)
            obj = np.where(feasible, np.einsum("ij,ij->i", g_open, w), -np.inf)
            gain = float(np.max(obj - best[open_rows], initial=0.0))
            best[open_rows] = np.maximum(best[open_rows], obj)
            if gain < ASCENT_OBJECTIVE_TOL:
                break

    half = len(sigmas)
    return np.maximum(best[:half], best[half:])


def erc_monte_carlo_ind(z: np.ndarray, budget: ClassBudget, draws: int = MC_DRAWS_DEFAULT,
                        seed: int = 0) -> tuple[float, float]:
    """Monte-Carlo Rademacher complexity of the plain norm-ball class.

    The inner sup has the closed form (2/n)*Lambda*||Z'sigma||, so only the
    noise is sampled.  Returns (mean, standard error).
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    if draws < 2:
        raise ComplexityError("need at least 2 draws for a standard error")
    sups = _ind_draw_sups(z, budget.lambda_cap, _rademacher(seed, z.shape[0], draws))
    return float(sups.mean()), float(sups.std(ddof=1) / math.sqrt(draws))


def erc_monte_carlo_univ(batch: FeatureBatch, budget: ClassBudget,
                         draws: int = MC_DRAWS_DEFAULT, seed: int = 0) -> tuple[float, float]:
    """Monte-Carlo Rademacher complexity of the slab-restricted class.

    Shares the noise stream of ``erc_monte_carlo_ind`` under the same seed,
    so the two estimates pair draw by draw.  Raises when the constraint set
    is empty, naming a violated slab.
    """
    if draws < 2:
        raise ComplexityError("need at least 2 draws for a standard error")
    sups = _univ_draw_sups(batch, budget, _rademacher(seed, batch.n, draws))
    return float(sups.mean()), float(sups.std(ddof=1) / math.sqrt(draws))


def erc_bound_ind(z: np.ndarray, budget: ClassBudget) -> float:
    """Closed-form ceiling (2*Lambda/n)*sqrt(sum_i ||z_i||^2)."""
    z = np.atleast_2d(np.asarray(z, dtype=float))
    n = z.shape[0]
    return float(2.0 * budget.lambda_cap / n * np.linalg.norm(z))


def k_gamma(gamma: float, m: int, delta: float, lambda_cap: float) -> float:
    """Slab-price factor sqrt(1 + 2*gamma*m*(delta^2 + 1)/lambda_cap^2)."""
    if gamma < 0.0:
        raise ComplexityError(f"gamma must be non-negative, got {gamma!r}")
    if m < 1 or lambda_cap <= 0.0 or delta < 0.0:
        raise ComplexityError("need m >= 1, lambda_cap > 0, delta >= 0")
    return math.sqrt(1.0 + 2.0 * gamma * m * (delta * delta + 1.0) / (lambda_cap * lambda_cap))


def _alignment_traces(batch: FeatureBatch) -> tuple[float, float, float]:
    """(tr(V Z'Z V'), tr(Z'Z), tr(VV')) via Frobenius identities.

    With V = [u; -u]: tr(V Z'Z V') = 2*||z u'||_F^2, tr(Z'Z) = ||z||_F^2 and
    tr(VV') = 2*||u||_F^2.
    """
    cross = 2.0 * float(np.sum((batch.z @ batch.u.T) ** 2))
    train = float(np.sum(batch.z * batch.z))
    refl = 2.0 * float(np.sum(batch.u * batch.u))
    return cross, train, refl


def sigma_gamma(gamma: float, batch: FeatureBatch) -> float:
    """Alignment gamma*tr(V Z'Z V') / (tr(Z'Z) * tr(I + gamma VV')).

    The identity block is 2m x 2m.  gamma = inf returns the analytic limit.
    """
    if gamma < 0.0:
        raise ComplexityError(f"gamma must be non-negative, got {gamma!r}")
    cross, train, refl = _alignment_traces(batch)
    if train <= 0.0:
        raise ComplexityError("training features are all zero: alignment undefined")
    if math.isinf(gamma):
        return sigma_inf(batch)
    return gamma * cross / (train * (2.0 * batch.m + gamma * refl))


def sigma_inf(batch: FeatureBatch) -> float:
    """Limit alignment tr(V Z'Z V') / (tr(Z'Z) * tr(VV')), in [0, 1]."""
    cross, train, refl = _alignment_traces(batch)
    if train <= 0.0:
        raise ComplexityError("training features are all zero: alignment undefined")
    if refl <= 0.0:
        raise ComplexityError("universum features are all zero: alignment undefined")
    return cross / (train * refl)


def _bii_factor(gamma: float, batch: FeatureBatch, budget: ClassBudget) -> float:
    """K(gamma)*sqrt(1 - sigma(gamma)), or inf/nan markers for invalid points."""
    if math.isinf(gamma):
        # K^2*(1 - sigma) -> a*2m/tr(VV') when sigma_inf = 1, else diverges,
        # with a = 2m*(delta^2+1)/lambda_cap^2
        s_inf = sigma_inf(batch)
        _, _, refl = _alignment_traces(batch)
        a = 2.0 * batch.m * (budget.delta**2 + 1.0) / budget.lambda_cap**2
        if s_inf >= 1.0 - 1e-15:
            return math.sqrt(a * 2.0 * batch.m / refl)
        return math.inf
    s = sigma_gamma(gamma, batch)
    if s > 1.0:
        return math.nan
    return k_gamma(gamma, batch.m, budget.delta, budget.lambda_cap) * math.sqrt(1.0 - s)


def erc_bound_univ(batch: FeatureBatch, budget: ClassBudget,
                   gamma_grid=DEFAULT_GAMMA_GRID) -> tuple[float, float]:
    """Minimum slab-aware ceiling over the gamma grid, with its minimizer.

    Each grid point contributes erc_bound_ind * K(gamma)*sqrt(1 - sigma(gamma));
    points where sigma exceeds one are skipped.  The grid must contain 0,
    which always yields the plain ceiling as a fallback.
    """
    grid = [float(g) for g in gamma_grid]
    if not any(g == 0.0 for g in grid):
        raise ComplexityError("gamma grid must contain 0")
    base = erc_bound_ind(batch.z, budget)
    best_factor = math.inf
    best_gamma = 0.0
    for gamma in grid:
        factor = _bii_factor(gamma, batch, budget)
        if math.isnan(factor):
            continue
        if factor < best_factor:
            best_factor = factor
            best_gamma = gamma
    return base * best_factor, best_gamma


def theorem1_rhs(xi: np.ndarray, erc: float, kappa: float, eta: float, n: int) -> float:
    """Excess-risk ceiling (1/(kappa*n))*sum(xi) + (2/kappa)*erc + 3*sqrt(ln(2/eta)/(2n))."""
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if not np.isfinite(kappa) or kappa <= 0.0:
        raise ComplexityError(f"kappa must be positive, got {kappa!r}")
    if not np.isfinite(eta) or not 0.0 < eta < 1.0:
        raise ComplexityError(f"eta must lie in (0, 1), got {eta!r}")
    if n < 1 or len(xi) != n:
        raise ComplexityError(f"need n >= 1 slacks, got n={n!r} with {len(xi)} values")
    if np.any(xi < 0.0) or not np.isfinite(xi).all():
        raise ComplexityError("margin slacks must be finite and non-negative")
    return float(
        xi.sum() / (kappa * n) + 2.0 * erc / kappa + 3.0 * math.sqrt(math.log(2.0 / eta) / (2.0 * n))
    )


def bound_report(batch: FeatureBatch, budget: ClassBudget, draws: int = MC_DRAWS_DEFAULT,
                 seed: int = 0, gamma_grid=DEFAULT_GAMMA_GRID,
                 xi: np.ndarray | None = None, kappa: float = 1.0,
                 eta: float = 0.05) -> BoundReport:
    """Run the full capacity analysis on one feature batch."""
    est_ind, se_ind = erc_monte_carlo_ind(batch.z, budget, draws, seed)
    est_univ, se_univ = erc_monte_carlo_univ(batch, budget, draws, seed)
    bi = erc_bound_ind(batch.z, budget)
    bii, gamma_star = erc_bound_univ(batch, budget, gamma_grid)
    curve = tuple(
        (float(g), sigma_gamma(float(g), batch)) for g in gamma_grid if not math.isinf(g)
    )
    rhs = None
    if xi is not None:
        rhs = theorem1_rhs(xi, est_univ, kappa, eta, len(np.asarray(xi).reshape(-1)))
    return BoundReport(
        erc_ind_mc=est_ind,
        erc_ind_stderr=se_ind,
        erc_univ_mc=est_univ,
        erc_univ_stderr=se_univ,
        bound_bi=bi,
        bound_bii=bii,
        gamma_star=gamma_star,
        sigma_inf=sigma_inf(batch),
        sigma_gamma_curve=curve,
        lambda_cap=budget.lambda_cap,
        delta=budget.delta,
        theorem1_rhs=rhs,
        draws=draws,
        seed=seed,
    )
