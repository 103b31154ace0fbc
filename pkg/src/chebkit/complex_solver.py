"""Weighted Chebyshev polynomials on discretized complex sets.

The discrete problem ``min_T max_j w_j |T(z_j)|`` over monic ``T`` is attacked
by Lawson's iteratively reweighted least squares. Every Lawson weight vector
``lam`` yields the lower bound ``sqrt(min_T sum lam_j w_j^2 |T(z_j)|^2)`` on the
discrete optimum, so the gap between that bound and the current max is a
certificate. Lawson converges linearly and slowly on sets with few extremal
points, so when it stagnates the same problem is finished as a second-order
cone program; the cone solver's dual is fed back through the least-squares
bound, which keeps the certificate independent of the cone solver.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .basis import AffineFrame, ArnoldiBasis, StablePolynomial
from .closed_forms import closed_form_capacity
from .errors import DegreeError, LSQFailure, NoProgress, ValidationError
from .poly_core import MonicPolynomial
from .sets_weights import (
    Circle,
    CircularArc,
    Grid,
    IntervalUnion,
    One,
    SetDescriptor,
    WeightDescriptor,
    discretize,
)

log = logging.getLogger(__name__)

MAX_COMPLEX_DEGREE = 40


@dataclass(frozen=True)
class LawsonConfig:
    """Knobs of :func:`solve_complex`."""

    tol: float = 1e-9
    grid_factor: int = 64
    max_lawson: int = 80
    stagnation_window: int = 5
    refinements: int = 2
    exchange_rounds: int = 6
    verify_factor: int = 4
    polish: bool = True
    max_gap: float = 1e-6
    # interior-point duals stall near 1e-8 on nearly equimodular problems
    certify_floor: float = 1e-7


@dataclass
class ComplexChebSolution:
    """Result of a complex solve.

    ``norm`` is the sup of ``w |T|`` over the solve grid, ``lower_bound`` the
    Szego bound ``Cap^n`` when the capacity has a closed form, and ``gap`` the
    relative duality gap of the certificate.
    """

    poly: MonicPolynomial
    norm: float
    lawson_weights: np.ndarray = field(repr=False)
    equimodularity_defect: float
    lower_bound: float | None
    iterations: int
    gap: float = 0.0
    certified: bool = False
    fine_norm: float = 0.0
    dual_bound: float = 0.0
    polished: bool = False
    degree: int = 0
    stable: StablePolynomial | None = field(default=None, repr=False)
    grid: Grid | None = field(default=None, repr=False)
    history: list[float] = field(default_factory=list, repr=False)
    monotone_violations: int = 0

    def __call__(self, z):
        return self.stable(z)

    @property
    def upper_norm(self) -> float:
        """Largest weighted modulus seen on the solve or verification grid."""
        return max(self.norm, self.fine_norm)


class _LsqSystem:
    """Residual map ``d -> b + A d`` of monic polynomials on a weighted grid."""

    def __init__(self, basis: ArnoldiBasis, wg: np.ndarray) -> None:
        n = basis.n
        self.n = n
        self.lead = basis.lead()
        self.A = wg[:, None] * basis.Q[:, :n]
        self.b = wg * self.lead * basis.Q[:, n]

    def solve(self, lam: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Minimize ``sum lam_j |b_j + (A d)_j|^2``; return ``d`` and ``|residual|``."""
        s = np.sqrt(lam)
        rows = s > 0
        As = s[rows, None] * self.A[rows]
        bs = s[rows] * self.b[rows]
        if self.n == 0:
            d = np.zeros(0, dtype=self.A.dtype)
        else:
            Qm, R = np.linalg.qr(As)
            diag = np.abs(np.diag(R))
            if diag.size < self.n or diag.min() <= 1e-13 * max(diag.max(), 1e-300):
                raise LSQFailure("weighted least-squares system is rank deficient")
            d = np.linalg.solve(R, -(Qm.conj().T @ bs))
        return d, np.abs(self.b + self.A @ d)

    def coeffs(self, d: np.ndarray) -> np.ndarray:
        return np.append(d, self.lead)


def weighted_lsq_monic(grid: Grid, lam, n: int) -> MonicPolynomial:
    """Monic ``T`` of degree ``n`` minimizing ``sum lam_j w_j^2 |T(z_j)|^2``.

    Raises
    ------
    LSQFailure
        If fewer than ``n + 1`` points carry positive ``lam_j w_j``.
    """
    lam = np.asarray(lam, dtype=float)
    active = (lam * grid.weights) > 0
    if lam.sum() <= 0 or np.count_nonzero(active) < n + 1:
        raise LSQFailure("need at least n + 1 points with positive weight")
    pts = grid.points[active]
    frame = AffineFrame.fit(pts)
    y = frame.to_local(pts.real if np.all(pts.imag == 0) else pts)
    basis = ArnoldiBasis(y, n)
    system = _LsqSystem(basis, grid.weights[active])
    d, _ = system.solve(lam[active] / lam[active].sum())
    return StablePolynomial(basis, system.coeffs(d), frame).to_monic()


def szego_lower_bound(s: SetDescriptor, n: int) -> float | None:
    """``Cap(E)^n`` when the capacity of ``s`` has a closed form."""
    cap = closed_form_capacity(s)
    return None if cap is None else cap**n


def _lawson(system: _LsqSystem, lam0: np.ndarray, cfg: LawsonConfig):
    lam = lam0.copy()
    support = lam0 > 0
    best = None
    history: list[float] = []
    maxima: list[float] = []
    violations = 0
    l2_prev = 0.0
    for it in range(1, cfg.max_lawson + 1):
        d, r = system.solve(lam)
        mx = float(r[support].max())
        l2 = float(np.sqrt(np.sum(lam * r * r)))
        if l2 < l2_prev * (1.0 - 1e-12):
            violations += 1
        l2_prev = max(l2_prev, l2)
        history.append(l2)
        maxima.append(mx)
        if best is None or mx < best[1]:
            best = (d, mx, lam.copy(), l2)
        if (mx - l2_prev) <= cfg.tol * mx:
            return best, it, history, violations, True
        k = cfg.stagnation_window
        if len(maxima) > k and min(maxima[:-k]) - min(maxima) <= cfg.tol * min(maxima):
            break
        lam = lam * r
        lam[support] = np.maximum(lam[support], 1e-300)
        lam = lam / lam.sum()
    return best, it, history, violations, False


def _cone_polish(system: _LsqSystem, support: np.ndarray, tol: float, level: float):
    """Solve the discrete minimax problem as a second-order cone program.

    ``level`` is the current max residual; the data are scaled so that the
    optimum is of order one, which the absolute solver tolerances assume.
    """
    import cvxpy as cp

    A = system.A[support] / level
    b = system.b[support] / level
    d = cp.Variable(system.n, complex=bool(np.iscomplexobj(A) or np.iscomplexobj(b)))
    t = cp.Variable()
    cons = [cp.abs(b + A @ d) <= t]
    prob = cp.Problem(cp.Minimize(t), cons)
    eps = min(1e-12, 1e-3 * tol)
    try:
        with warnings.catch_warnings():
            # accuracy is judged by the independent least-squares bound
            warnings.simplefilter("ignore", UserWarning)
            prob.solve(solver=cp.CLARABEL, tol_gap_abs=eps, tol_gap_rel=eps, tol_feas=eps,
                       tol_ktratio=1e-10, max_iter=400)
    except cp.error.SolverError as exc:
        log.debug("cone solver failed: %s", exc)
        return None
    if d.value is None or cons[0].dual_value is None:
        return None
    mu = np.maximum(np.asarray(cons[0].dual_value, dtype=float).ravel(), 0.0)
    if mu.sum() <= 0:
        return None
    lam = np.zeros(system.A.shape[0])
    lam[support] = mu / mu.sum()
    return np.asarray(d.value), lam


_INVGOLD = 0.6180339887498949


class _Parametrization:
    """Parameter line of sets traced by a real parameter ``t``.

    Neighbouring grid points in ``t`` order bound a piece of the set, which
    lets refinement locate continuous maxima rather than only grid maxima.
    """

    def __init__(self, s: SetDescriptor) -> None:
        self.s = s

    @staticmethod
    def supports(s: SetDescriptor) -> bool:
        return isinstance(s, (IntervalUnion, Circle, CircularArc))

    def param(self, z: np.ndarray) -> np.ndarray:
        s = self.s
        if isinstance(s, IntervalUnion):
            return z.real.copy()
        return np.angle(z - s.center)

    def point(self, t: np.ndarray) -> np.ndarray:
        s = self.s
        if isinstance(s, IntervalUnion):
            return t.astype(complex)
        return s.center + s.radius * np.exp(1j * t)

    def brackets(self, t: np.ndarray, f: np.ndarray):
        """Brackets ``[t_{j-1}, t_{j+1}]`` around strict local maxima of ``f``."""
        order = np.argsort(t, kind="stable")
        ts, fs = t[order], f[order]
        periodic = isinstance(self.s, Circle)
        if periodic:
            left_t = np.roll(ts, 1)
            left_t[0] -= 2 * np.pi
            right_t = np.roll(ts, -1)
            right_t[-1] += 2 * np.pi
            left_f, right_f = np.roll(fs, 1), np.roll(fs, -1)
        else:
            left_t = np.concatenate(([ts[0]], ts[:-1]))
            right_t = np.concatenate((ts[1:], [ts[-1]]))
            left_f = np.concatenate(([-np.inf], fs[:-1]))
            right_f = np.concatenate((fs[1:], [-np.inf]))
        peak = (fs >= left_f) & (fs >= right_f) & (fs > 0)
        lo, hi = left_t[peak], right_t[peak]
        if isinstance(self.s, IntervalUnion):
            # brackets must not straddle a gap
            lo = np.where(self.s.contains(0.5 * (lo + ts[peak])), lo, ts[peak])
            hi = np.where(self.s.contains(0.5 * (hi + ts[peak])), hi, ts[peak])
        return lo, hi


def _golden_max(f, lo: np.ndarray, hi: np.ndarray, steps: int = 60) -> np.ndarray:
    a, b = lo.copy(), hi.copy()
    x1 = b - _INVGOLD * (b - a)
    x2 = a + _INVGOLD * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(steps):
        left = f1 >= f2
        b = np.where(left, x2, b)
        a = np.where(left, a, x1)
        nx1 = np.where(left, b - _INVGOLD * (b - a), x2)
        nx2 = np.where(left, x1, a + _INVGOLD * (b - a))
        nf = f(np.where(left, nx1, nx2))
        f1, f2 = np.where(left, nf, f2), np.where(left, f1, nf)
        x1, x2 = nx1, nx2
    cand = np.where(f1 >= f2, x1, x2)
    # the bracket ends are grid points and may beat the interior
    fa, fb, fc = f(lo), f(hi), f(cand)
    return np.where(fc >= np.maximum(fa, fb), cand, np.where(fa >= fb, lo, hi))


def _assemble(grid: Grid, n: int):
    pts = grid.points
    real_pts = bool(np.all(pts.imag == 0))
    frame = AffineFrame.fit(pts)
    basis = ArnoldiBasis(frame.to_local(pts.real if real_pts else pts), n)
    return frame, basis, _LsqSystem(basis, grid.weights)


def _weighted_modulus(frame, basis, c, w, z: np.ndarray) -> np.ndarray:
    g = Grid(z, np.zeros(z.size)).with_weight(w)
    y = frame.to_local(z.real if basis.is_real and np.all(z.imag == 0) else z)
    return g.weights * np.abs(basis.evaluate(y) @ c)


def _active_newton(system: _LsqSystem, d0: np.ndarray, lam0: np.ndarray, cut: float = 1e-5, steps: int = 30,
                   drops: int = 4):
    """Newton polish of the minimax optimality system on the active set.

    Unknowns are ``d``, the level ``h`` and the dual masses ``mu`` of the
    points where ``lam0 >= cut max(lam0)``; equations are ``|r_j| = h`` on
    that set, stationarity ``sum mu_j A_j^H r_j = 0`` and ``sum mu_j = 1``.
    A point whose mass turns negative is dropped and the solve repeated, at
    most ``drops`` times. Returns ``(d, mu)`` or ``None`` when the iteration
    fails.
    """
    K = np.flatnonzero(lam0 >= cut * lam0.max())
    for _ in range(drops + 1):
        out, K_bad = _newton_on(system, d0, lam0, K, steps)
        if K_bad is None:
            return out
        K = K[K != K_bad]
        if K.size <= system.n:
            break
    return None


def _newton_on(system: _LsqSystem, d0: np.ndarray, lam0: np.ndarray, K: np.ndarray, steps: int):
    """One Newton solve on the active set ``K``; returns ``(result, index to drop)``."""
    lam0 = np.where(lam0[K] > 0, lam0[K], 1e-3 * lam0[K].max())
    level = float(np.abs(system.b[K] + system.A[K] @ d0).max())
    A, b = system.A[K] / level, system.b[K] / level
    cplx = np.iscomplexobj(A) or np.iscomplexobj(b) or np.iscomplexobj(d0)
    n = system.n
    if cplx:
        # rows come in (re, im) pairs per point
        M = np.stack([np.hstack([A.real, -A.imag]), np.hstack([A.imag, A.real])], axis=1)
        beta = np.stack([b.real, b.imag], axis=1)
        x = np.concatenate([d0.real, d0.imag])
    else:
        M = A.real[:, None, :]
        beta = b.real[:, None]
        x = d0.real.copy()
    k, q = K.size, x.size
    mu = lam0 / lam0.sum()
    r = beta + np.einsum("jpq,q->jp", M, x)
    h = float(np.sqrt(np.max(np.sum(r * r, axis=1))))

    def residual(x, h, mu):
        r = beta + np.einsum("jpq,q->jp", M, x)
        f1 = np.sum(r * r, axis=1) - h * h
        f2 = np.einsum("j,jpq,jp->q", mu, M, r)
        return r, np.concatenate([f1, f2, [mu.sum() - 1.0]])

    r, F = residual(x, h, mu)
    for _ in range(steps):
        if np.linalg.norm(F) <= 1e-15 * max(h * h, 1e-300):
            break
        J = np.zeros((k + q + 1, q + 1 + k))
        J[:k, :q] = 2.0 * np.einsum("jp,jpq->jq", r, M)
        J[:k, q] = -2.0 * h
        J[k : k + q, :q] = np.einsum("j,jpq,jps->qs", mu, M, M)
        J[k : k + q, q + 1 :] = np.einsum("jpq,jp->qj", M, r)
        J[k + q, q + 1 :] = 1.0
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        t = 1.0
        base = np.linalg.norm(F)
        while t > 1e-4:
            x1, h1, mu1 = x + t * step[:q], h + t * step[q], mu + t * step[q + 1 :]
            r1, F1 = residual(x1, h1, mu1)
            if np.linalg.norm(F1) < base:
                break
            t *= 0.5
        else:
            break
        x, h, mu, r, F = x1, h1, mu1, r1, F1
    if np.linalg.norm(F) > 1e-8 * h * h:
        log.debug("active-set Newton stalled at residual %.3e", np.linalg.norm(F))
        return None, None
    if not np.all(np.isfinite(x)):
        return None, None
    if np.any(mu < -1e-12):
        log.debug("active-set Newton left the feasible region (min mu %.3e)", mu.min())
        return None, int(K[np.argmin(mu)])
    d = x[:n] + 1j * x[n:] if cplx else x
    lam = np.zeros(system.A.shape[0])
    lam[K] = np.maximum(mu, 0.0) / np.maximum(mu, 0.0).sum()
    return (d, lam), None


def _certify(system: _LsqSystem, support: np.ndarray, d: np.ndarray, lam: np.ndarray):
    """Primal max of ``d`` and the least-squares lower bound of ``lam``."""
    mx = float(np.abs(system.b + system.A @ d)[support].max())
    _, r = system.solve(lam)
    return mx, float(np.sqrt(np.sum(lam * r * r)))


def _cone_cutting_plane(system: _LsqSystem, support: np.ndarray, tol: float, d0: np.ndarray, mx: float):
    """Cone solve on the near-extremal points, adding violated points until none remain.

    Any dual measure on a subset certifies the full grid, so only the primal
    needs the full-grid check.
    """
    r = np.abs(system.b + system.A @ d0)
    active = support & (r >= 0.9 * mx)
    need = min(4 * (system.n + 1), int(np.count_nonzero(support)))
    if np.count_nonzero(active) < need:
        active = support & (r >= np.sort(r[support])[-need])
    out = None
    for _ in range(8):
        out = _cone_polish(system, active, tol, mx)
        if out is None:
            return None
        r = np.abs(system.b + system.A @ out[0])
        level = r[active].max()
        viol = support & ~active & (r > level * (1.0 + 1e-12))
        if not np.any(viol):
            break
        active |= viol
    return out


def _solve_grid(grid: Grid, n: int, cfg: LawsonConfig, lam_start: np.ndarray | None = None):
    support = grid.weights > 0
    if np.count_nonzero(support) < n + 1:
        raise LSQFailure("weight is nonzero at fewer than n + 1 grid points")
    frame, basis, system = _assemble(grid, n)
    if lam_start is None:
        lam0, lawson_cfg = support / np.count_nonzero(support), cfg
    else:
        # warm restarts only need Lawson to seed the cone solve
        lam0 = np.where(support, np.maximum(lam_start, 1e-300), 0.0)
        lam0, lawson_cfg = lam0 / lam0.sum(), replace(cfg, max_lawson=max(5, cfg.max_lawson // 8))

    (d, mx, lam, l2), iters, history, violations, certified = _lawson(system, lam0, lawson_cfg)
    polished = False
    if not certified and cfg.polish:
        out = _cone_cutting_plane(system, support, cfg.tol, d, mx)
        candidates = [] if out is None else [out]
        # the active set is unknown; the certificate arbitrates between cuts
        for cut in (1e-1, 1e-2, 1e-3, 1e-5) if out is not None else ():
            candidates.append(_active_newton(system, *out, cut=cut))
        if out is not None and lam_start is not None:
            # the previous grid's active set usually survives refinement
            candidates.append(_active_newton(system, out[0], lam0, cut=1e-5))
        for cand in candidates:
            if cand is None:
                continue
            mx_new, dual = _certify(system, support, *cand)
            if mx_new < mx:
                d, mx, polished = cand[0], mx_new, True
            if dual > l2:
                lam, l2 = cand[1], dual
            if mx - l2 <= 0.1 * cfg.tol * mx:
                break
    gap = (mx - min(l2, mx)) / mx
    return frame, basis, system, d, mx, lam, l2, gap, iters, history, violations, polished


def solve_complex(
    s: SetDescriptor,
    w: WeightDescriptor | None = None,
    n: int = 1,
    tol: float = 1e-9,
    config: LawsonConfig | None = None,
    grid_points: int | None = None,
) -> ComplexChebSolution:
    """Discrete weighted Chebyshev polynomial of degree ``n`` on ``s``.

    Parameters
    ----------
    s : SetDescriptor
    w : WeightDescriptor, optional
    n : int
        Degree, at most 40.
    tol : float
        Target relative duality gap.
    config : LawsonConfig, optional
    grid_points : int, optional
        Grid budget, default ``64 (n + 2)``.

    Returns
    -------
    ComplexChebSolution

    Raises
    ------
    LSQFailure
        Singular least-squares systems.
    NoProgress
        If the certified gap stays above ``config.max_gap``.

    Notes
    -----
    Intervals, circles and arcs are refined by adding the continuous local
    maxima of ``w |T|`` to the grid, for up to ``exchange_rounds`` rounds;
    other sets double the grid, up to ``refinements`` times.
    """
    if not 1 <= n <= MAX_COMPLEX_DEGREE:
        raise DegreeError(f"complex degree must lie in 1..{MAX_COMPLEX_DEGREE}")
    w = One() if w is None else w
    cfg = config or LawsonConfig()
    if tol != cfg.tol:
        cfg = replace(cfg, tol=tol)
    m = grid_points or cfg.grid_factor * (n + 2)
    grid = discretize(s, m).with_weight(w)
    if len(grid) < 4 * (n + 1):
        raise ValidationError(f"grid of {len(grid)} points is too small for degree {n}")
    param = _Parametrization(s) if _Parametrization.supports(s) else None
    rounds = cfg.exchange_rounds if param is not None else cfg.refinements
    lam_start = None
    # refined grids are nested, so an earlier dual bound still bounds the current grid
    carried = 0.0
    for attempt in range(rounds + 1):
        frame, basis, system, d, mx, lam, l2, gap, iters, history, violations, polished = _solve_grid(
            grid, n, cfg, lam_start)
        if param is not None:
            unit = frame.scale**n
            l2 = max(l2, min(carried / unit, mx))
            gap = (mx - min(l2, mx)) / mx
            carried = max(carried, l2 * unit)
        c = system.coeffs(d)
        log.debug("attempt %d: m=%d max=%.17g gap=%.3e polished=%s", attempt, len(grid), mx, gap, polished)
        fine = discretize(s, cfg.verify_factor * m).points
        fine_vals = _weighted_modulus(frame, basis, c, w, fine)
        extra = np.zeros(0, dtype=complex)
        if param is not None:
            t_all = param.param(np.concatenate([grid.points, fine]))
            f_all = np.concatenate([np.abs(system.b + system.A @ d), fine_vals])
            lo, hi = param.brackets(t_all, f_all)
            fun = lambda t: _weighted_modulus(frame, basis, c, w, param.point(t))
            t_new = _golden_max(fun, lo, hi)
            t_grid = np.sort(param.param(grid.points))
            k = np.clip(np.searchsorted(t_grid, t_new), 1, t_grid.size - 1)
            near = np.minimum(np.abs(t_new - t_grid[k - 1]), np.abs(t_new - t_grid[k]))
            # near-duplicate points make the active-set system singular
            extra = param.point(t_new[near > (hi - lo) / 256])
        fine_norm = float(max(fine_vals.max(), _weighted_modulus(frame, basis, c, w, extra).max(initial=0.0)))
        if fine_norm <= (1.0 + 10.0 * cfg.tol) * mx or attempt == rounds:
            break
        if param is not None:
            if extra.size == 0:
                break
            pts = np.concatenate([grid.points, extra])
            grid = Grid(pts, np.zeros(pts.size), "refined").with_weight(w)
            lam_start = np.concatenate([lam, np.full(extra.size, lam.max())])
        else:
            m *= 2
            grid = discretize(s, m).with_weight(w)
    if gap > cfg.max_gap:
        raise NoProgress(f"duality gap {gap:.3e} exceeds {cfg.max_gap:.1e}")
    scale = frame.scale**n
    r = np.abs(system.b + system.A @ d)
    top = max(n + 1, int(np.ceil(0.05 * r.size)))
    near = np.sort(r)[-top:]
    stable = StablePolynomial(basis, c, frame)
    return ComplexChebSolution(
        poly=stable.to_monic(),
        norm=mx * scale,
        lawson_weights=lam,
        equimodularity_defect=float((near[-1] - near[0]) / near[-1]),
        lower_bound=szego_lower_bound(s, n),
        iterations=iters,
        gap=gap,
        certified=gap <= max(cfg.tol, cfg.certify_floor),
        fine_norm=fine_norm * scale,
        dual_bound=min(l2, mx) * scale,
        polished=polished,
        degree=n,
        stable=stable,
        grid=grid,
        history=[h * scale for h in history],
        monotone_violations=violations,
    )
