"""Ring of ``p`` workers running the blocked one-sided Jacobi sweeps.

Each worker is a thread that owns two block-column slabs.  Per step it forms
its pivot block, factors it, runs the inner Jacobi on the square factor and
updates the slabs with one matrix product.  It then swaps one slab with a
ring neighbour (blocking send/receive) following the modulus strategy.  After
every sweep an OR-reduction over "did anyone rotate" decides termination.

Trigonometric variants transform ``G° = G^T`` (the signature weights its
rows) and carry an eigenvector slab alongside.  Hyperbolic variants transform
``G`` itself; the signature belongs to its columns and travels with them.
"""

from dataclasses import dataclass, field
import queue
import threading

import numpy as np

from .factorizations import (
    NotPositiveDefiniteError,
    bunch_parlett_complete,
    cholesky_diag_pivoted,
    cholesky_sign_pivoted,
    cholesky_unpivoted,
    qr_of_trapezoid,
    restore_column_order,
)
from .inner import MAX_INNER_SWEEPS, apply_permutation_rows, inner_sweep_hyp, inner_sweep_trig
from .matrix import EPS, ConfigurationError, as_matrix, as_signs, gram_with_signs, make_partition
from .strategy import StrategyState, exchange_plan, next_pair, steps_per_sweep

ALGORITHMS = ("TB", "TBC", "TF", "TFC", "HB", "HBC", "HBSC", "HF", "HFC", "HFSC")
TRIG_ALGORITHMS = ALGORITHMS[:4]
HYP_ALGORITHMS = ALGORITHMS[4:]


class NonConvergenceError(RuntimeError):
    def __init__(self, msg, sweeps=None, rotations_last_sweep=None):
        super().__init__(msg)
        self.sweeps = sweeps
        self.rotations_last_sweep = rotations_last_sweep


class WorkerError(RuntimeError):
    """A worker failed; carries its rank, sweep and step."""

    def __init__(self, rank, sweep, step, cause):
        super().__init__(f"worker {rank} failed in sweep {sweep}, step {step}: {cause}")
        self.rank = rank
        self.sweep = sweep
        self.step = step
        self.cause = cause


class _Aborted(Exception):
    pass


def normalize_algorithm(name):
    up = str(name).upper()
    if up not in ALGORITHMS:
        raise ConfigurationError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
    return up


def default_conv_tol(n):
    return float(np.sqrt(n) * EPS)


@dataclass
class EngineConfig:
    p: int
    algorithm: str
    conv_tol: float | None = None
    max_sweeps: int = 50
    max_inner_sweeps: int = MAX_INNER_SWEEPS
    keep_trace: bool = False

    def __post_init__(self):
        self.algorithm = normalize_algorithm(self.algorithm)
        if self.p < 1:
            raise ConfigurationError("p must be at least 1")
        if self.conv_tol is not None and not self.conv_tol > 0:
            raise ConfigurationError("conv_tol must be positive")
        if self.max_sweeps < 1:
            raise ConfigurationError("max_sweeps must be at least 1")

    @property
    def trigonometric(self):
        return self.algorithm in TRIG_ALGORITHMS

    @property
    def full_block(self):
        return self.algorithm[1] == "F"


@dataclass
class Slab:
    """One block column in flight: global block index, data and (hyperbolic) signs."""

    index: int
    g: np.ndarray
    u: np.ndarray | None = None
    signs: np.ndarray | None = None

    @property
    def width(self):
        return self.g.shape[1]

    def copy(self):
        return Slab(
            self.index,
            self.g.copy(order="F"),
            None if self.u is None else self.u.copy(order="F"),
            None if self.signs is None else self.signs.copy(),
        )


@dataclass
class WorkerState:
    rank: int
    strategy: StrategyState
    first: Slab
    second: Slab
    rotation_counter: int = 0
    stage_log: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    rotated_this_sweep: bool = False

    def slabs_by_index(self):
        return (self.first, self.second) if self.first.index < self.second.index else (self.second, self.first)


@dataclass
class EngineResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    G: np.ndarray
    signs: np.ndarray
    sweeps: int
    stages: int
    rotations: int
    trace: list


def _pivot_scope(cfg, first_step, side):
    if cfg.full_block or first_step:
        return None, ("diagonalize" if cfg.full_block else "one_sweep")
    return side, "one_sweep"


def trig_pivot_transform(x, j, lo_width, cfg, tol, first_step=False):
    """Pivot-block transform ``U_P`` for the trig variants.

    ``x`` holds the two block columns of ``G°`` side by side (lower block
    index first, ``lo_width`` columns).  Returns ``(U_P, rotations, stages,
    singular)``; a singular pivot Gram is handled through the QR of its
    trapezoidal factor and the result is orthogonal either way.
    """
    n_p = x.shape[1]
    h_p = gram_with_signs(x.T, j)
    fac = bunch_parlett_complete(h_p)
    if fac.rank < n_p:
        # singular pivot: orthogonalize a reduced full-rank factor instead
        f = restore_column_order(fac)
        q1, t = qr_of_trapezoid(f.T)
        res = inner_sweep_trig(t.T, fac.J, None, "diagonalize", tol, cfg.max_inner_sweeps)
        r = fac.rank
        u_p = q1.copy(order="F")
        u_p[:, :r] = q1[:, :r] @ res.Q
        return u_p, res.rotations_used + 1, res.stages_used + 1, True
    if cfg.algorithm in ("TB", "TF"):
        f = restore_column_order(fac)
        side = (np.arange(n_p) >= lo_width).astype(np.int64)
    else:
        f = fac.R
        side = (fac.perm >= lo_width).astype(np.int64)
    scope, mode = _pivot_scope(cfg, first_step, side)
    res = inner_sweep_trig(f, fac.J, scope, mode, tol, cfg.max_inner_sweeps)
    u_p = res.Q
    if cfg.algorithm in ("TBC", "TFC"):
        u_p = apply_permutation_rows(u_p, fac.perm)
    return u_p, res.rotations_used, res.stages_used, False


def _trig_update(w, cfg, ctx, first_step):
    lo, hi = w.slabs_by_index()
    x = np.hstack((lo.g, hi.g))
    u_p, rotations, stages, _ = trig_pivot_transform(x, ctx["J"], lo.width, cfg, ctx["tol"],
                                                     first_step)
    if rotations:
        x = np.asfortranarray(x @ u_p)
        u = np.asfortranarray(np.hstack((lo.u, hi.u)) @ u_p)
        lo.g, hi.g = x[:, :lo.width].copy(order="F"), x[:, lo.width:].copy(order="F")
        lo.u, hi.u = u[:, :lo.width].copy(order="F"), u[:, lo.width:].copy(order="F")
    return rotations, stages


def _hyp_factor(alg, a_p, s):
    """Square factor and column permutation of the pivot Gram for variant ``alg``."""
    if alg in ("HB", "HF"):
        f = cholesky_unpivoted(a_p)
        return f.R, f.perm
    if alg in ("HBC", "HFC"):
        f = cholesky_diag_pivoted(a_p)
        return f.R, f.perm
    sigma = np.argsort(-s, kind="stable")
    try:
        f = cholesky_sign_pivoted(a_p[np.ix_(sigma, sigma)], s[sigma])
    except NotPositiveDefiniteError:
        f = cholesky_unpivoted(a_p)
        return f.R, f.perm
    return f.R, sigma[f.perm]


def _hyp_update(w, cfg, ctx, first_step):
    lo, hi = w.slabs_by_index()
    x = np.hstack((lo.g, hi.g))
    s = np.concatenate((lo.signs, hi.signs))
    a_p = gram_with_signs(x.T)
    r, perm = _hyp_factor(cfg.algorithm, a_p, s)
    j_r = s[perm]
    side = (perm >= lo.width).astype(np.int64)
    scope, mode = _pivot_scope(cfg, first_step, side)
    res = inner_sweep_hyp(r, j_r, scope, mode, ctx["tol"], cfg.max_inner_sweeps)
    if res.rotations_used:
        v = apply_permutation_rows(res.Q, perm)
        x = np.asfortranarray(x @ v)
        lo.g, hi.g = x[:, :lo.width].copy(order="F"), x[:, lo.width:].copy(order="F")
        lo.signs, hi.signs = j_r[:lo.width].copy(), j_r[lo.width:].copy()
    return res.rotations_used, res.stages_used


def step_once(w, cfg, ctx, first_step=False):
    """Process the worker's pivot block in place; returns (rotations, stages)."""
    update = _trig_update if cfg.trigonometric else _hyp_update
    rot, stages = update(w, cfg, ctx, first_step)
    w.rotation_counter += rot
    if rot:
        w.rotated_this_sweep = True
    return rot, stages


class _Ring:
    """Blocking point-to-point mailboxes plus a per-sweep OR-reduction."""

    def __init__(self, p):
        self.p = p
        self.boxes = {}
        for r in range(p):
            for d in ((r - 1) % p, (r + 1) % p):
                self.boxes.setdefault((r, d), queue.Queue(maxsize=1))
        self.barrier = threading.Barrier(p)
        self.flags = [False] * p
        self.failed = threading.Event()

    def _put(self, key, item):
        while True:
            if self.failed.is_set():
                raise _Aborted
            try:
                self.boxes[key].put(item, timeout=0.05)
                return
            except queue.Full:
                continue

    def _get(self, key):
        while True:
            if self.failed.is_set():
                raise _Aborted
            try:
                return self.boxes[key].get(timeout=0.05)
            except queue.Empty:
                continue

    def sendrecv(self, rank, dest, src, payload):
        self._put((rank, dest), payload)
        return self._get((src, rank))

    def allreduce_or(self, rank, flag):
        self.flags[rank] = bool(flag)
        try:
            self.barrier.wait()
            result = any(self.flags)
            self.barrier.wait()
        except threading.BrokenBarrierError:
            raise _Aborted from None
        return result

    def abort(self):
        self.failed.set()
        self.barrier.abort()


def exchange(w, plan, ring):
    """Send the slab named by ``plan`` and receive its replacement into the same slot."""
    if ring.p == 1 or not plan.snd_blk:
        return
    slot = plan.snd_blk
    out = getattr(w, slot).copy()
    incoming = ring.sendrecv(w.rank, plan.snd_rnk, plan.rcv_rnk, out)
    setattr(w, slot, incoming)


def _initial_workers(g, j, cfg):
    n = g.shape[1]
    part = make_partition(n, cfg.p)
    trig = cfg.trigonometric
    workers = []
    for r in range(cfg.p):
        st = StrategyState.initial(r, cfg.p)
        slabs = []
        for b in st.pair:
            cols = part.columns(b)
            gs = np.asfortranarray(g[:, cols].copy())
            if trig:
                u = np.zeros((n, part.widths[b - 1]), order="F")
                u[cols, :] = np.eye(part.widths[b - 1])
                slabs.append(Slab(b, gs, u=u))
            else:
                slabs.append(Slab(b, gs, signs=j[cols].copy()))
        workers.append(WorkerState(rank=r, strategy=st, first=slabs[0], second=slabs[1]))
    return workers


def _worker_loop(w, cfg, ctx, ring, status):
    p = cfg.p
    nsteps = steps_per_sweep(p)
    sweep = step = 0
    try:
        for sweep in range(1, cfg.max_sweeps + 1):
            w.rotated_this_sweep = False
            for step in range(nsteps):
                pair = (w.first.index, w.second.index)
                if pair != w.strategy.pair:
                    raise AssertionError(f"held blocks {pair} differ from strategy {w.strategy.pair}")
                rot, stages = step_once(w, cfg, ctx, first_step=(step == 0))
                w.stage_log.append(stages)
                if cfg.keep_trace:
                    w.trace.append({"sweep": sweep, "step": step, "rank": w.rank,
                                    "i_blk": pair[0], "j_blk": pair[1], "rotations": rot})
                if p > 1:
                    nxt = next_pair(w.strategy)
                    exchange(w, exchange_plan(nxt, sweep), ring)
                    w.strategy = nxt
            if not ring.allreduce_or(w.rank, w.rotated_this_sweep):
                status[w.rank] = ("converged", sweep)
                return
        status[w.rank] = ("maxed", cfg.max_sweeps)
    except _Aborted:
        status[w.rank] = ("aborted", sweep)
    except Exception as exc:  # noqa: BLE001 - re-raised by the engine with context
        status[w.rank] = ("error", WorkerError(w.rank, sweep, step, exc))
        ring.abort()


def extract_results(workers, cfg, ctx):
    """Gather slabs in block order and read off eigenpairs."""
    slabs = sorted((s for w in workers for s in (w.first, w.second)), key=lambda s: s.index)
    g = np.hstack([s.g for s in slabs])
    if cfg.trigonometric:
        u = np.hstack([s.u for s in slabs])
        lam = np.einsum("ij,i,ij->j", g, ctx["J"].astype(np.float64), g)
        signs = ctx["J"].copy()
    else:
        signs = np.concatenate([s.signs for s in slabs])
        norms = np.linalg.norm(g, axis=0)
        if np.any(norms == 0):
            raise np.linalg.LinAlgError("zero column in the converged factor")
        lam = signs * norms ** 2
        u = g / norms
    return np.asarray(lam), np.asfortranarray(u), np.asfortranarray(g), signs


def run(g, j, cfg):
    """Diagonalize ``H = G J G^T`` from its square factor.

    ``g`` is ``G°``: for trigonometric variants the rows are weighted by
    ``j`` (``H = G°^T J G°``), for hyperbolic ones the columns are
    (``H = G J G^T``).  The signature should be sorted (+ first).
    Eigenpairs come back in global column order.
    """
    g = as_matrix(g, square=True, name="G")
    n = g.shape[0]
    j = as_signs(j, n)
    if n < 2 * cfg.p:
        raise ConfigurationError(f"n={n} is too small for p={cfg.p} workers (need n >= 2p)")
    tol = cfg.conv_tol if cfg.conv_tol is not None else default_conv_tol(n)
    ctx = {"J": j, "tol": tol, "n": n}
    workers = _initial_workers(g, j, cfg)
    ring = _Ring(cfg.p)
    status = [None] * cfg.p
    threads = [
        threading.Thread(target=_worker_loop, args=(w, cfg, ctx, ring, status), daemon=True)
        for w in workers
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    errors = [s[1] for s in status if s and s[0] == "error"]
    if errors:
        raise errors[0]
    if any(s is None or s[0] != "converged" for s in status):
        raise NonConvergenceError(
            f"{cfg.algorithm} did not converge in {cfg.max_sweeps} sweeps", sweeps=cfg.max_sweeps
        )
    sweeps = status[0][1]
    lam, u, gfin, signs = extract_results(workers, cfg, ctx)
    stages = int(np.sum(np.max([w.stage_log for w in workers], axis=0)))
    trace = sorted((t for w in workers for t in w.trace),
                   key=lambda t: (t["sweep"], t["step"], t["rank"]))
    return EngineResult(
        eigenvalues=lam,
        eigenvectors=u,
        G=gfin,
        signs=signs,
        sweeps=sweeps,
        stages=stages,
        rotations=sum(w.rotation_counter for w in workers),
        trace=trace,
    )
