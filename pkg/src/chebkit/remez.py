"""Weighted Chebyshev polynomials on unions of real intervals by exchange.

The solver runs a multi-point exchange: solve the leveled system on a
reference of ``n + 1`` points, collect one extremum of the weighted error per
sign run, and swap in an alternating subset containing the global maximum.
Iterates live in a grid-orthonormal Arnoldi basis in a local coordinate, and
extrema are polished on the continuum by golden-section search, so the final
alternation certificate is not limited by the grid spacing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as npcheb

from .basis import AffineFrame, ArnoldiBasis, StablePolynomial
from .errors import BadReference, DegreeError, LSQFailure, RankDeficient, Stalled, ValidationError
from .poly_core import MonicPolynomial
from .sets_weights import IntervalUnion, One, WeightDescriptor, discretize, weight_values

MAX_REAL_DEGREE = 64
_INVGOLD = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class RemezConfig:
    """Knobs of :func:`solve_real`."""

    tol: float = 1e-12
    grid_factor: int = 64
    max_iter: int = 200
    refinements: int = 3
    verify_factor: int = 4
    golden_steps: int = 64


@dataclass
class ChebSolution:
    """Result of a real solve.

    Attributes
    ----------
    poly : MonicPolynomial
        Power-basis coefficients (real).
    norm : float
        Sup of ``w |T|`` over the grid and the polished extrema.
    reference : tuple of (float, int)
        Alternation points ``x_0 < ... < x_n`` with the signs of ``w T``.
    equioscillation_defect : float
        ``(norm - h) / norm`` with ``h`` the leveled error.
    iterations : int
    grid_norm : float
    leveled_error : float
    stable : StablePolynomial
        Well-conditioned representation used for evaluation.
    """

    poly: MonicPolynomial
    norm: float
    reference: tuple[tuple[float, int], ...]
    equioscillation_defect: float
    iterations: int
    grid_norm: float
    leveled_error: float
    stable: StablePolynomial = field(repr=False)
    degree: int = 0
    verified_norm: float = 0.0
    history: list[float] = field(default_factory=list, repr=False)

    def __call__(self, x):
        return self.stable(x)

    @property
    def reference_values(self) -> np.ndarray:
        return np.array([x for x, _ in self.reference])


class _Problem:
    """Grid, weights and basis of one real solve, in the local coordinate."""

    def __init__(self, s: IntervalUnion, w: WeightDescriptor, n: int, m: int) -> None:
        grid = discretize(s, m)
        x = np.sort(grid.points.real)
        self.set = s
        self.w = w
        self.n = n
        self.frame = AffineFrame.fit(np.array(s.bounds, dtype=complex))
        self.x = x
        self.wx = weight_values(w, x)
        self.y = self.frame.to_local(x)
        try:
            self.basis = ArnoldiBasis(self.y, n)
        except LSQFailure as exc:
            raise BadReference(str(exc)) from None
        self.lead = self.basis.lead()
        self.intervals = np.array(s.intervals, dtype=float)

    def weight(self, x: np.ndarray) -> np.ndarray:
        return weight_values(self.w, x)

    def error_at(self, x: np.ndarray, c: np.ndarray) -> np.ndarray:
        return self.weight(x) * (self.basis.evaluate(self.frame.to_local(x)) @ c)

    def error_on_grid(self, c: np.ndarray) -> np.ndarray:
        return self.wx * (self.basis.Q @ c)

    def containing_interval(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        idx = np.searchsorted(self.intervals[:, 0], x, side="right") - 1
        idx = np.clip(idx, 0, len(self.intervals) - 1)
        return self.intervals[idx, 0], self.intervals[idx, 1]


def _leveled(B: np.ndarray, wr: np.ndarray, lead: float, n: int) -> tuple[np.ndarray, float, np.ndarray]:
    """Solve ``w_j T(x_j) = (-1)^{n-j} h`` in a basis with values ``B``.

    Returns the basis coefficients of ``T`` (last entry ``lead``), ``|h|``
    and the signs of ``w T`` at the reference.
    """
    sig = (-1.0) ** (n - np.arange(n + 1))
    A = np.column_stack([wr[:, None] * B[:, :n], -sig])
    rhs = -wr * lead * B[:, n]
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError:
        raise RankDeficient("leveled system is singular") from None
    if not np.all(np.isfinite(sol)) or np.linalg.cond(A) > 1e15:
        raise RankDeficient("leveled system is numerically singular")
    h = float(sol[-1])
    if h == 0.0:
        raise RankDeficient("leveled error vanishes on the reference")
    c = np.append(sol[:-1], lead)
    return c, abs(h), sig * np.sign(h)


def leveled_system_solve(reference, w: WeightDescriptor, n: int) -> tuple[tuple[complex, ...], float]:
    """Leveled monic fit through ``n + 1`` reference points.

    Solves ``w(x_j) T(x_j) = (-1)^{n-j} h`` for the low coefficients of the
    monic ``T`` and ``h`` (returned as ``|h|``; a negative solution flips the
    sign pattern). The system is assembled in the Chebyshev basis of the
    reference's bounding interval and solved by LU with partial pivoting.

    Raises
    ------
    RankDeficient
        When the weight vanishes on too much of the reference.
    """
    x = np.asarray(reference, dtype=float)
    if x.size != n + 1:
        raise BadReference(f"need {n + 1} reference points, got {x.size}")
    if np.any(np.diff(x) <= 0):
        raise BadReference("reference must be strictly increasing")
    if np.count_nonzero(weight_values(w, x)) < n:
        raise RankDeficient("weight vanishes on the reference")
    c0, hw = 0.5 * (x[0] + x[-1]), 0.5 * (x[-1] - x[0])
    t = (x - c0) / hw
    B = npcheb.chebvander(t, n)
    lead = 2.0 ** (1 - n) if n >= 1 else 1.0
    coef, h, _ = _leveled(B, weight_values(w, x), lead, n)
    # coef is monic in t; rescale to monic in x
    power_t = npcheb.cheb2poly(coef)
    power_t = power_t / power_t[-1]
    inner = np.array([-c0 / hw, 1.0 / hw])
    acc = np.array([power_t[-1]])
    for a in power_t[-2::-1]:
        acc = np.convolve(acc, inner)
        acc[0] += a
    acc = acc * hw**n
    return tuple(complex(v) for v in acc[:-1]), h * hw**n


def _runs(values: np.ndarray) -> list[np.ndarray]:
    """Index groups of consecutive nonzero values sharing a sign."""
    nz = np.flatnonzero(values != 0)
    if nz.size == 0:
        return []
    sg = np.sign(values[nz])
    breaks = np.flatnonzero(sg[1:] != sg[:-1]) + 1
    return np.split(nz, breaks)


def _select_alternating(vals: np.ndarray, k: int) -> np.ndarray:
    """Keep ``k`` alternating entries of an alternating sequence.

    Repeatedly drops the smallest entry (paired with its smaller neighbour
    when interior), so the global maximum always survives.
    """
    keep = list(range(vals.size))
    mags = np.abs(vals)
    while len(keep) > k:
        m = [mags[i] for i in keep]
        j = int(np.argmin(m))
        excess = len(keep) - k
        if j == 0 or j == len(keep) - 1:
            keep.pop(j)
        elif excess == 1:
            keep.pop(0 if m[0] <= m[-1] else len(keep) - 1)
        else:
            nb = j - 1 if m[j - 1] < m[j + 1] else j + 1
            for t in sorted((j, nb), reverse=True):
                keep.pop(t)
    return np.array(keep)


def _polish(prob: _Problem, c: np.ndarray, x0: np.ndarray, lo: np.ndarray, hi: np.ndarray, steps: int):
    """Golden-section maximization of ``|e|`` on brackets ``[lo, hi]``."""
    a, b = lo.copy(), hi.copy()
    x1 = b - _INVGOLD * (b - a)
    x2 = a + _INVGOLD * (b - a)
    f1 = np.abs(prob.error_at(x1, c))
    f2 = np.abs(prob.error_at(x2, c))
    for _ in range(steps):
        left = f1 >= f2
        b = np.where(left, x2, b)
        a = np.where(left, a, x1)
        nx1 = np.where(left, b - _INVGOLD * (b - a), x2)
        nx2 = np.where(left, x1, a + _INVGOLD * (b - a))
        nf = np.abs(prob.error_at(np.where(left, nx1, nx2), c))
        f1, f2 = np.where(left, nf, f2), np.where(left, f1, nf)
        x1, x2 = nx1, nx2
        if np.all(b - a <= 4e-16 * (1.0 + np.abs(a))):
            break
    xm = np.where(f1 >= f2, x1, x2)
    return xm


def _exchange(prob: _Problem, c: np.ndarray, ref: np.ndarray, polish: bool, steps: int):
    """One multi-point exchange.

    Returns the new reference, the sup of ``|e|`` over the grid, the current
    reference and the polished extrema, and the signed extremal values.
    """
    n = prob.n
    xs = np.concatenate([prob.x, ref])
    es = np.concatenate([prob.error_on_grid(c), prob.error_at(ref, c)])
    order = np.argsort(xs, kind="stable")
    xs, es = xs[order], es[order]
    runs = _runs(es)
    if len(runs) < n + 1:
        raise Stalled("error has fewer sign runs than the degree requires")
    cand = np.array([r[np.argmax(np.abs(es[r]))] for r in runs])
    cx, ce = xs[cand], es[cand]
    if polish:
        lo_iv, hi_iv = prob.containing_interval(cx)
        g = prob.x
        below = g[np.clip(np.searchsorted(g, cx, side="left") - 1, 0, g.size - 1)]
        above = g[np.clip(np.searchsorted(g, cx, side="right"), 0, g.size - 1)]
        left = np.maximum(np.minimum(below, cx), lo_iv)
        right = np.minimum(np.maximum(above, cx), hi_iv)
        xm = _polish(prob, c, cx, left, right, steps)
        em = prob.error_at(xm, c)
        better = (np.abs(em) > np.abs(ce)) & (np.sign(em) == np.sign(ce))
        cx = np.where(better, xm, cx)
        ce = np.where(better, em, ce)
    sup = float(np.max(np.abs(np.concatenate([es, ce]))))
    keep = _select_alternating(ce, n + 1)
    return cx[keep], ce[keep], sup


def _initial_reference(prob: _Problem) -> np.ndarray:
    """Chebyshev extrema of the bounding interval snapped to the grid."""
    n, x = prob.n, prob.x
    lo, hi = prob.set.bounds
    target = 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(np.pi * np.arange(n + 1) / n)
    idx = np.clip(np.searchsorted(x, target), 0, x.size - 1)
    prev = np.clip(idx - 1, 0, x.size - 1)
    idx = np.where(np.abs(x[prev] - target) <= np.abs(x[idx] - target), prev, idx)
    chosen = sorted(set(int(i) for i in idx))
    while len(chosen) < n + 1:
        bounds = [-1] + chosen + [x.size]
        gaps = [(bounds[i + 1] - bounds[i], i) for i in range(len(bounds) - 1)]
        size, i = max(gaps)
        if size < 2:
            raise BadReference("grid too small for the requested degree")
        chosen.insert(i, (bounds[i] + bounds[i + 1]) // 2)
        chosen = sorted(set(chosen))
    return _off_zeros(prob, np.array(chosen))


def _off_zeros(prob: _Problem, idx: np.ndarray) -> np.ndarray:
    """Move reference indices off weight zeros by single grid steps."""
    taken = set(int(i) for i in idx)
    out = []
    mid = prob.x.size // 2
    for i in idx:
        i = int(i)
        if prob.wx[i] > 0:
            out.append(i)
            continue
        step = 1 if i < mid else -1
        j = i
        for _ in range(prob.x.size):
            j += step
            if j < 0 or j >= prob.x.size:
                step, j = -step, i
                continue
            if prob.wx[j] > 0 and j not in taken:
                break
        taken.discard(i)
        taken.add(j)
        out.append(j)
    return prob.x[np.array(sorted(set(out)))]


def _solve_on(prob: _Problem, cfg: RemezConfig, ref: np.ndarray):
    n = prob.n
    history: list[float] = []
    h_prev = 0.0
    polish = False
    for it in range(1, cfg.max_iter + 1):
        if ref.size != n + 1:
            raise BadReference("reference lost points during exchange")
        B = prob.basis.evaluate(prob.frame.to_local(ref))
        c, h, signs = _leveled(B, prob.weight(ref), prob.lead, n)
        if h < h_prev * (1.0 - 1e-12):
            raise Stalled(f"leveled error decreased from {h_prev:.17g} to {h:.17g}")
        history.append(h)
        h_prev = h
        new_ref, new_vals, sup = _exchange(prob, c, ref, polish, cfg.golden_steps)
        if sup <= (1.0 + cfg.tol) * h:
            if polish:
                return c, h, signs, ref, sup, it, history
            polish = True
            new_ref, new_vals, sup = _exchange(prob, c, ref, True, cfg.golden_steps)
            if sup <= (1.0 + cfg.tol) * h:
                return c, h, signs, ref, sup, it, history
        ref = np.sort(new_ref)
    raise Stalled(f"exchange did not converge in {cfg.max_iter} iterations")


def solve_real(
    s: IntervalUnion,
    w: WeightDescriptor | None = None,
    n: int = 1,
    tol: float = 1e-12,
    config: RemezConfig | None = None,
    grid_points: int | None = None,
    initial_reference=None,
) -> ChebSolution:
    """Weighted Chebyshev polynomial of degree ``n`` on a union of intervals.

    Parameters
    ----------
    s : IntervalUnion
    w : WeightDescriptor, optional
        Defaults to the constant weight.
    n : int
        Degree, ``1 <= n <= 64``.
    tol : float
        Relative tolerance: success means ``sup w|T| <= (1 + tol) h``.
    config : RemezConfig, optional
    grid_points : int, optional
        Grid budget; defaults to ``64 (n + 2)``.
    initial_reference : array_like, optional
        Starting reference of ``n + 1`` points.

    Returns
    -------
    ChebSolution

    Raises
    ------
    RankDeficient, Stalled, BadReference
    """
    if not isinstance(s, IntervalUnion):
        raise ValidationError("solve_real needs an interval union")
    if not 1 <= n <= MAX_REAL_DEGREE:
        raise DegreeError(f"real degree must lie in 1..{MAX_REAL_DEGREE}")
    w = One() if w is None else w
    cfg = config or RemezConfig(tol=tol)
    if config is not None and tol != cfg.tol:
        cfg = RemezConfig(tol=tol, grid_factor=cfg.grid_factor, max_iter=cfg.max_iter,
                          refinements=cfg.refinements, verify_factor=cfg.verify_factor,
                          golden_steps=cfg.golden_steps)
    m = grid_points or cfg.grid_factor * (n + 2)
    last_exc: Exception | None = None
    for _ in range(cfg.refinements + 1):
        try:
            prob = _Problem(s, w, n, m)
            if np.count_nonzero(prob.wx) < n + 1:
                raise BadReference("weight is nonzero at fewer than n + 1 grid points")
            if initial_reference is not None:
                ref = np.sort(np.asarray(initial_reference, dtype=float))
            else:
                ref = _initial_reference(prob)
            c, h, signs, ref, sup, iters, history = _solve_on(prob, cfg, ref)
        except Stalled as exc:
            last_exc = exc
            m *= 2
            continue
        fine = discretize(s, cfg.verify_factor * m).points.real
        fine_sup = float(np.max(np.abs(prob.error_at(fine, c))))
        if fine_sup <= (1.0 + cfg.tol) * h * (1.0 + 1e-13):
            break
        last_exc = Stalled(f"verification grid exceeds the leveled error ({fine_sup:.3e} vs {h:.3e})")
        m *= 2
    else:
        raise last_exc if last_exc else Stalled("grid refinement exhausted")
    scale = prob.frame.scale**n
    stable = StablePolynomial(prob.basis, c, prob.frame)
    poly = stable.to_monic()
    norm = max(sup, fine_sup) * scale
    return ChebSolution(
        poly=poly,
        norm=norm,
        reference=tuple((float(x), int(sg)) for x, sg in zip(ref, signs)),
        equioscillation_defect=(norm - h * scale) / norm,
        iterations=iters,
        grid_norm=sup * scale,
        leveled_error=h * scale,
        stable=stable,
        degree=n,
        verified_norm=fine_sup * scale,
        history=[v * scale for v in history],
    )


def exchange_step(solution: ChebSolution, s: IntervalUnion, w: WeightDescriptor | None = None,
                  grid_points: int | None = None) -> np.ndarray:
    """New reference after one exchange from a candidate solution's reference.

    Only the reference of ``solution`` is used: the leveled system is solved
    on it, and the extrema of the resulting error over the grid are
    exchanged in.

    Raises
    ------
    BadReference
        If the grid has fewer than ``n + 1`` points.
    Stalled
        If the error has too few sign runs.
    """
    w = One() if w is None else w
    n = solution.degree
    m = grid_points or 64 * (n + 2)
    grid = discretize(s, m)
    if len(grid) < n + 1:
        raise BadReference(f"grid of {len(grid)} points cannot carry degree {n}")
    prob = _Problem(s, w, n, m)
    ref = solution.reference_values
    B = prob.basis.evaluate(prob.frame.to_local(ref))
    c, h, _ = _leveled(B, prob.weight(ref), prob.lead, n)
    new_ref, _, _ = _exchange(prob, c, ref, False, 0)
    return np.sort(new_ref)


def reference_solution(reference, n: int) -> ChebSolution:
    """Bare candidate carrying only a reference, as input to :func:`exchange_step`."""
    ref = tuple((float(x), 0) for x in reference)
    dummy = MonicPolynomial.monomial(n)
    return ChebSolution(dummy, 1.0, ref, 0.0, 0, 1.0, 1.0, stable=None, degree=n)  # type: ignore[arg-type]
