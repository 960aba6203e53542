"""Weighted interference minimization over the real-embedded coefficients.

The decision vector stacks per-user blocks x_k = (alpha'_k; beta'_k), each
of length 4N, so x has dimension 4NK.  Feasible points satisfy
beta'_k = E alpha'_k (E the embedded orthogonal change-of-basis matrix) and
||alpha'_k||^2 = N.  The solver eliminates beta' and runs projected
gradient descent on the product of radius-sqrt(N) spheres: Armijo
backtracking with halving, an initial step from a Barzilai-Borwein
estimate, and a monotone nonincreasing objective trace.  Because Armijo
comparisons bottom out at the floating-point resolution of the objective
well above the gradient norms needed to certify first-order conditions, a
stationarity polish follows: coordinates vanishing at the optimum are
snapped to exact zero (zeros are invariant under the iteration) and
fixed-size gradient steps sized by the same Barzilai-Borwein estimate run
until the Riemannian gradient norm meets tolerance.  Polish steps do not
consult objective differences; their net objective change is below double
precision resolution and they are reported separately from the descent
trace.
"""

from dataclasses import dataclass, field

import numpy as np

from .backend import quartic_value_grad
from .correlation import cosine_weights
from .errors import (DegenerateAlpha, DimensionMismatch, LineSearchStall,
                     NonFeasiblePoint, NonFeasibleStart)
from .model import SystemModel
from .snr import weight_matrix
from .spectral import (SpectralCoefficients, TransformPair, basis_matrix,
                       build_transforms, embed_matrix, embed_vector,
                       unembed_vector)

FEAS_TOL = 1e-9


@dataclass(frozen=True)
class ProblemInstance:
    """Weights, transforms and cached arrays for one optimization run."""

    weights: np.ndarray
    transforms: TransformPair
    model: SystemModel
    embedded: np.ndarray = field(init=False, repr=False)
    w_int: np.ndarray = field(init=False, repr=False)
    w_half: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        weights = np.ascontiguousarray(np.asarray(self.weights, float))
        if weights.shape != (self.model.n_users, self.model.n_users):
            raise DimensionMismatch("weights must be K x K")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "embedded",
                           embed_matrix(self.transforms.beta_from_alpha))
        w_int, w_half = cosine_weights(self.model.n_chips)
        object.__setattr__(self, "w_int", w_int)
        object.__setattr__(self, "w_half", w_half)

    @classmethod
    def from_channels(cls, model, channels):
        return cls(weight_matrix(model, channels), build_transforms(model.n_chips), model)

    @property
    def n_chips(self):
        return self.model.n_chips

    @property
    def n_users(self):
        return self.model.n_users


@dataclass(frozen=True)
class DecisionVector:
    """Per-user blocks (alpha'; beta'), stored as a (K, 4N) array."""

    data: np.ndarray

    def __post_init__(self):
        data = np.ascontiguousarray(np.asarray(self.data, float))
        if data.ndim != 2 or data.shape[1] % 4:
            raise DimensionMismatch("decision data must be (K, 4N)")
        object.__setattr__(self, "data", data)

    @property
    def n_users(self):
        return self.data.shape[0]

    @property
    def n_chips(self):
        return self.data.shape[1] // 4

    @property
    def alpha(self):
        """(K, 2N) embedded alpha blocks."""
        return self.data[:, :2 * self.n_chips]

    @property
    def beta(self):
        """(K, 2N) embedded beta blocks."""
        return self.data[:, 2 * self.n_chips:]

    def flat(self):
        return self.data.ravel()

    @classmethod
    def from_flat(cls, vec, n_users):
        vec = np.asarray(vec, float)
        return cls(vec.reshape(n_users, -1))

    @classmethod
    def from_alpha(cls, alpha, inst):
        """Lift embedded alpha blocks to a feasible decision vector."""
        alpha = np.atleast_2d(np.asarray(alpha, float))
        beta = alpha @ inst.embedded.T
        return cls(np.concatenate([alpha, beta], axis=1))

    @classmethod
    def from_coefficients(cls, coeff_list, inst):
        alpha = np.array([embed_vector(c.alpha) for c in coeff_list])
        return cls.from_alpha(alpha, inst)

    @classmethod
    def random_feasible(cls, inst, rng):
        """Random unit-modulus chips, projected onto the coefficient basis.

        Unit-modulus chips have squared norm N exactly, and the projection
        is unitary, so the result is feasible by construction.
        """
        N, K = inst.n_chips, inst.n_users
        chips = np.exp(2j * np.pi * rng.uniform(size=(K, N)))
        alpha_c = chips @ basis_matrix(0.0, N).conj() / np.sqrt(N)
        alpha = np.concatenate([alpha_c.real, alpha_c.imag], axis=1)
        return cls.from_alpha(alpha, inst)

    def coefficients(self, user):
        """Back to complex coefficient vectors for one user."""
        return SpectralCoefficients(unembed_vector(self.alpha[user]),
                                    unembed_vector(self.beta[user]))

    def feasibility_error(self, inst):
        """(max norm defect, max linear-constraint defect)."""
        N = self.n_chips
        norm_err = np.abs(np.sum(self.alpha ** 2, axis=1) - N).max()
        link_err = np.abs(self.beta - self.alpha @ inst.embedded.T).max()
        return norm_err, link_err

    def is_feasible(self, inst, tol=FEAS_TOL):
        norm_err, link_err = self.feasibility_error(inst)
        return norm_err <= tol and link_err <= tol


def objective(x: DecisionVector, inst: ProblemInstance) -> float:
    """Weighted quartic interference objective; defined on all of R^{4NK}."""
    if x.n_users != inst.n_users or x.n_chips != inst.n_chips:
        raise DimensionMismatch("decision vector does not match instance")
    value, _, _ = quartic_value_grad(np.ascontiguousarray(x.alpha),
                                     np.ascontiguousarray(x.beta),
                                     inst.weights, inst.w_int, inst.w_half)
    return value


def gradient(x: DecisionVector, inst: ProblemInstance) -> np.ndarray:
    """Analytic gradient with the same (K, 4N) layout as x.data."""
    if x.n_users != inst.n_users or x.n_chips != inst.n_chips:
        raise DimensionMismatch("decision vector does not match instance")
    _, grad_a, grad_b = quartic_value_grad(np.ascontiguousarray(x.alpha),
                                           np.ascontiguousarray(x.beta),
                                           inst.weights, inst.w_int, inst.w_half)
    return np.concatenate([grad_a, grad_b], axis=1)


def reduce_vector(x: DecisionVector) -> np.ndarray:
    """Drop the beta blocks: the reduced variable is alpha' only."""
    return x.alpha.copy()


def lift_vector(alpha, inst) -> DecisionVector:
    """Rebuild the full vector with beta' = E alpha'."""
    return DecisionVector.from_alpha(alpha, inst)


def reduced_value_grad(alpha, inst):
    """Objective and gradient of the beta-eliminated problem.

    Chain rule: grad = alpha-block gradient + E^T (beta-block gradient).
    """
    alpha = np.ascontiguousarray(alpha)
    beta = np.ascontiguousarray(alpha @ inst.embedded.T)
    value, grad_a, grad_b = quartic_value_grad(alpha, beta, inst.weights,
                                               inst.w_int, inst.w_half)
    return value, grad_a + grad_b @ inst.embedded


@dataclass
class SolveResult:
    x: DecisionVector
    objective: float
    grad_norm: float
    iterations: int
    status: str
    trace: np.ndarray          # rows (iter, f, grad_norm, step)
    polish_iterations: int
    restart: int
    start_objective: float


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-8
    max_iters: int = 5000
    restarts: int = 8
    seed: int = 0
    step_init: float = None
    armijo_c: float = 1e-4
    min_step: float = 1e-14
    polish: bool = True
    polish_iters: int = 8000
    snap_threshold: float = 1e-6


def _project(alpha, radius):
    norms = np.linalg.norm(alpha, axis=1, keepdims=True)
    return alpha * (radius / norms)


def _riemannian(grad, alpha, n_chips):
    """Project the gradient onto the sphere tangent spaces, per user block."""
    radial = np.sum(grad * alpha, axis=1, keepdims=True) / n_chips
    return grad - radial * alpha


def _descent(alpha, inst, opts):
    """Monotone Armijo descent with Barzilai-Borwein initial steps.

    Returns (alpha, f, grad, rgrad, grad_norm, trace_rows, iters, step,
    stalled).
    """
    N = inst.n_chips
    radius = np.sqrt(N)
    f, grad = reduced_value_grad(alpha, inst)
    rgrad = _riemannian(grad, alpha, N)
    grad_norm = np.linalg.norm(rgrad)
    step = opts.step_init or 1.0 / max(grad_norm, 1e-12)
    trace = [(0, f, grad_norm, 0.0)]
    stalled = False
    it = 0
    while it < opts.max_iters and grad_norm > opts.tol:
        it += 1
        s = step
        accepted = False
        while s >= opts.min_step:
            cand = _project(alpha - s * rgrad, radius)
            f_new, grad_new = reduced_value_grad(cand, inst)
            if f_new <= f - opts.armijo_c * s * grad_norm ** 2:
                accepted = True
                break
            s *= 0.5
        if not accepted:
            stalled = True
            break
        rgrad_new = _riemannian(grad_new, cand, N)
        dx = (cand - alpha).ravel()
        dg = (rgrad_new - rgrad).ravel()
        denom = dx @ dg
        step = (dx @ dx) / denom if denom > 1e-18 else 2.0 * s
        if not np.isfinite(step) or step <= 0:
            step = 2.0 * s
        alpha, f, grad, rgrad = cand, f_new, grad_new, rgrad_new
        grad_norm = np.linalg.norm(rgrad)
        trace.append((it, f, grad_norm, s))
    return alpha, f, rgrad, grad_norm, trace, it, step, stalled


def _polish(alpha, inst, opts, step_hint):
    """Drive the Riemannian gradient norm to tolerance with fixed steps.

    Snaps coordinates below snap_threshold to exact zero first (accepted
    only if the objective does not increase beyond rounding), then iterates
    plain projected gradient steps sized by a Barzilai-Borwein estimate,
    halving whenever the gradient norm jumps.  No objective comparisons:
    near the optimum those differences sit below double resolution.
    """
    N = inst.n_chips
    radius = np.sqrt(N)
    f, grad = reduced_value_grad(alpha, inst)
    rgrad = _riemannian(grad, alpha, N)
    grad_norm = np.linalg.norm(rgrad)

    snapped = alpha.copy()
    snapped[np.abs(snapped) < opts.snap_threshold] = 0.0
    if not np.array_equal(snapped, alpha):
        snapped = _project(snapped, radius)
        f_snap, grad_snap = reduced_value_grad(snapped, inst)
        if f_snap <= f + 1e-12 * max(1.0, abs(f)):
            alpha, f, grad = snapped, f_snap, grad_snap
            rgrad = _riemannian(grad, alpha, N)
            grad_norm = np.linalg.norm(rgrad)

    step = step_hint if np.isfinite(step_hint) and 0 < step_hint < 1e3 else 1e-2
    best = grad_norm
    since_best = 0
    it = 0
    while it < opts.polish_iters and grad_norm > opts.tol:
        it += 1
        cand = _project(alpha - step * rgrad, radius)
        f_new, grad_new = reduced_value_grad(cand, inst)
        rgrad_new = _riemannian(grad_new, cand, N)
        gn_new = np.linalg.norm(rgrad_new)
        if not np.isfinite(gn_new) or gn_new > 3.0 * grad_norm:
            step *= 0.5
            if step < 1e-15:
                break
            continue
        dx = (cand - alpha).ravel()
        dg = (rgrad_new - rgrad).ravel()
        denom = dx @ dg
        if denom > 1e-300:
            step = min(max((dx @ dx) / denom, 1e-13), 1e3)
        alpha, f, rgrad, grad_norm = cand, f_new, rgrad_new, gn_new
        if grad_norm < 0.999 * best:
            best = grad_norm
            since_best = 0
        else:
            since_best += 1
            if since_best > 400:
                break
    return alpha, f, grad_norm, it


def _single_run(alpha0, inst, opts, restart_idx):
    f0, _ = reduced_value_grad(alpha0, inst)
    alpha, f, rgrad, grad_norm, trace, iters, step, stalled = _descent(
        alpha0, inst, opts)
    polish_iters = 0
    if opts.polish and grad_norm > opts.tol:
        alpha, f, grad_norm, polish_iters = _polish(alpha, inst, opts, step)
    if grad_norm <= opts.tol:
        status = "converged"
    elif stalled:
        status = "stalled"
    else:
        status = "max_iters"
    return SolveResult(
        x=lift_vector(alpha, inst),
        objective=f,
        grad_norm=grad_norm,
        iterations=iters,
        status=status,
        trace=np.array(trace),
        polish_iterations=polish_iters,
        restart=restart_idx,
        start_objective=f0,
    )


def solve(inst: ProblemInstance, start: DecisionVector = None,
          opts: SolverOptions = SolverOptions(),
          extra_starts=()) -> SolveResult:
    """Minimize the objective over the feasible set; best of multi-start.

    Runs from `start` (if given), from every vector in `extra_starts`, and
    from opts.restarts random feasible points seeded by opts.seed, then
    returns the best final objective, preferring converged runs.  Raises
    NonFeasibleStart for an infeasible explicit start and LineSearchStall
    (with the best iterate attached) when every run stalls before reaching
    tolerance.
    """
    starts = []
    for x in ((start,) if start is not None else ()) + tuple(extra_starts):
        if not x.is_feasible(inst):
            norm_err, link_err = x.feasibility_error(inst)
            raise NonFeasibleStart(
                f"start violates constraints (norm defect {norm_err:.2e}, "
                f"link defect {link_err:.2e})")
        starts.append(reduce_vector(x))
    rng = np.random.default_rng(opts.seed)
    for _ in range(opts.restarts):
        starts.append(reduce_vector(DecisionVector.random_feasible(inst, rng)))
    if not starts:
        raise NonFeasibleStart("no start point: give start or restarts > 0")

    results = [_single_run(a0, inst, opts, idx) for idx, a0 in enumerate(starts)]
    best = min(results, key=lambda r: r.objective)
    # prefer a certified-converged run at the same objective
    if best.status != "converged":
        slack = 1e-9 * max(1.0, abs(best.objective))
        for r in results:
            if r.status == "converged" and r.objective <= best.objective + slack:
                best = r
                break
    if all(r.status == "stalled" for r in results):
        raise LineSearchStall(
            f"all {len(results)} runs stalled (best grad norm "
            f"{best.grad_norm:.2e})", last_point=best.x, grad_norm=best.grad_norm)
    return best


@dataclass(frozen=True)
class ConstraintResiduals:
    """Defects of the equality constraints at a point; zero when feasible.

    c1/c2 are the (K, N) component defects of beta' - E alpha', d the
    per-user norm defects ||alpha'||^2 - N.
    """

    c1: np.ndarray
    c2: np.ndarray
    d: np.ndarray

    def max_abs(self):
        return max(np.abs(self.c1).max(), np.abs(self.c2).max(),
                   np.abs(self.d).max())


def constraint_residuals(x: DecisionVector, inst: ProblemInstance) -> ConstraintResiduals:
    N = inst.n_chips
    defect = x.beta - x.alpha @ inst.embedded.T
    d = np.sum(x.alpha ** 2, axis=1) - N
    return ConstraintResiduals(defect[:, :N].copy(), defect[:, N:].copy(), d)


@dataclass(frozen=True)
class KktCertificate:
    """Closed-form multipliers and first-order residuals at a feasible point.

    lambda1/lambda2 are the (K, N) multipliers of the linear constraints,
    mu the per-user norm multipliers recovered by weighted least squares
    over the 2N stationarity equations, mu_spread the largest deviation of
    any per-equation implied value from mu, and stationarity_residual the
    norm of the full Lagrangian gradient with these multipliers.
    """

    lambda1: np.ndarray
    lambda2: np.ndarray
    mu: np.ndarray
    stationarity_residual: float
    mu_spread: float

    def as_dict(self):
        return {
            "lambda1": self.lambda1.tolist(),
            "lambda2": self.lambda2.tolist(),
            "mu": self.mu.tolist(),
            "stationarity_residual": self.stationarity_residual,
            "mu_spread": self.mu_spread,
        }


def kkt_multipliers(x: DecisionVector, inst: ProblemInstance,
                    alpha_threshold: float = 1e-8) -> KktCertificate:
    """Recover the multipliers at a feasible point and measure consistency.

    The linear-constraint multipliers have closed forms in the beta blocks;
    each of the 2N alpha stationarity equations with |alpha| above the
    threshold is solved for the norm multiplier it implies, and mu is their
    weighted least-squares value (weights (2 N alpha)^2).
    """
    if not x.is_feasible(inst):
        norm_err, link_err = x.feasibility_error(inst)
        raise NonFeasiblePoint(
            f"point violates constraints (norm defect {norm_err:.2e}, "
            f"link defect {link_err:.2e})")
    N, K = inst.n_chips, inst.n_users
    kern = inst.transforms.imag_kernel  # kern[m, q], m constraint row
    zs = inst.weights + inst.weights.T
    a1, a2 = x.alpha[:, :N], x.alpha[:, N:]
    b1, b2 = x.beta[:, :N], x.beta[:, N:]
    alpha_w = (a1 ** 2 + a2 ** 2) * inst.w_int   # (K, N)
    beta_w = (b1 ** 2 + b2 ** 2) * inst.w_half
    force_b = zs @ beta_w
    lam1 = -2.0 * b1 * force_b
    lam2 = -2.0 * b2 * force_b
    force_a = zs @ alpha_w

    mu = np.empty(K)
    spread = 0.0
    for p in range(K):
        sum1 = lam1[p].sum()
        sum2 = lam2[p].sum()
        rhs1 = sum1 + kern.T @ lam2[p]           # (N,) over q
        rhs2 = sum2 - kern.T @ lam1[p]
        coords = np.concatenate([a1[p], a2[p]])
        rhs = np.concatenate([rhs1, rhs2])
        coef = np.concatenate([force_a[p], force_a[p]])
        keep = np.abs(coords) > alpha_threshold
        if not keep.any():
            raise DegenerateAlpha(f"user {p}: no alpha coordinate above threshold")
        scale = 2.0 * N * coords[keep]
        implied = rhs[keep] / scale - coef[keep]
        weights = scale ** 2
        mu[p] = np.sum(weights * implied) / np.sum(weights)
        spread = max(spread, np.abs(implied - mu[p]).max())

    # Lagrangian gradient with the recovered multipliers; beta components
    # vanish identically by the closed form for the lambdas.
    resid_sq = 0.0
    for p in range(K):
        r1 = (2.0 * a1[p] * (force_a[p] + mu[p])
              - (lam1[p].sum() + kern.T @ lam2[p]) / N)
        r2 = (2.0 * a2[p] * (force_a[p] + mu[p])
              - (lam2[p].sum() - kern.T @ lam1[p]) / N)
        resid_sq += np.sum(r1 ** 2) + np.sum(r2 ** 2)
    return KktCertificate(lam1, lam2, mu, float(np.sqrt(resid_sq)), float(spread))


