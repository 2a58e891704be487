"""Modified modulus block pivot strategy on a ring of ``p`` workers.

Block indices are 1-based, ranks 0-based.  Each worker starts with blocks
``(r + 1, 2p - r)`` and, after every step, hands one of its block columns to
a ring neighbour.  One sweep is ``2p`` steps; at its end the workers are back
on the antidiagonal in reversed rank order and the exchange direction flips
for the next sweep.  For ``p = 1`` a sweep is the single pair ``(1, 2)``.

Slots of a sweep that the plain modulus strategy would skip (the pair
``(s, s + p)`` met on an even antidiagonal) are marked ``extra``.
"""

from typing import NamedTuple
from itertools import combinations


class StrategyState(NamedTuple):
    r: int
    p: int
    ip: int
    jp: int
    i_blk: int
    j_blk: int
    snd: str = ""
    nsweep: int = 1

    @classmethod
    def initial(cls, r, p):
        if not 0 <= r < p:
            raise ValueError(f"rank {r} outside 0..{p - 1}")
        return cls(r=r, p=p, ip=r + 1, jp=2 * p - r, i_blk=r + 1, j_blk=2 * p - r)

    @property
    def pair(self):
        return (self.i_blk, self.j_blk)


class ExchangePlan(NamedTuple):
    snd_blk: str  # "first" (i_blk slot) or "second" (j_blk slot); "" for no exchange
    snd_rnk: int
    rcv_rnk: int


def next_pair(st):
    """Advance one step: the pseudocode's ``Next_Pair`` routine."""
    p, ip, jp = st.p, st.ip, st.jp
    i_blk, j_blk = st.i_blk, st.j_blk
    if ip + jp > 2 * p:
        snd = "first"
        ip += 1
        if ip == jp:
            ip -= p
            jp = ip
        i_blk = ip
    else:
        snd = "second"
        jp += 1
        j_blk = jp
    return StrategyState(st.r, p, ip, jp, i_blk, j_blk, snd, st.nsweep)


def exchange_plan(st, nsweep=None):
    """Ring partners for the exchange after the step that produced ``st``."""
    p, r = st.p, st.r
    nsweep = st.nsweep if nsweep is None else nsweep
    if p == 1:
        return ExchangePlan("", 0, 0)
    if nsweep % 2 > 0:
        snd_rnk, rcv_rnk = (p + r - 1) % p, (p + r + 1) % p
    else:
        snd_rnk, rcv_rnk = (p + r + 1) % p, (p + r - 1) % p
    return ExchangePlan(st.snd, snd_rnk, rcv_rnk)


def steps_per_sweep(p):
    return 1 if p == 1 else 2 * p


class ScheduleEntry(NamedTuple):
    sweep: int
    step: int
    rank: int
    i_blk: int
    j_blk: int
    snd_blk: str
    snd_rnk: int
    rcv_rnk: int
    extra: bool


def _is_extra(pair, step, p):
    # antidiagonal of step k (0-based) holds i + j = 2p + 1 + k (mod 2p);
    # off that antidiagonal a worker is on the modified-modulus extra block
    i, j = pair
    return (i + j - (2 * p + 1 + step)) % (2 * p) != 0


def sweep_schedule(p, nsweeps=1):
    """Materialize the per-step pivot pair of every worker.

    Returns a list of :class:`ScheduleEntry`, ordered by sweep, step, rank.
    Block pairs are reported as held (not sorted).
    """
    if p < 1:
        raise ValueError("need p >= 1")
    states = [StrategyState.initial(r, p) for r in range(p)]
    out = []
    nsteps = steps_per_sweep(p)
    for sweep in range(1, nsweeps + 1):
        for step in range(nsteps):
            nxt = []
            for st in states:
                moved = next_pair(st) if p > 1 else st
                plan = exchange_plan(moved, sweep)
                out.append(ScheduleEntry(
                    sweep=sweep, step=step, rank=st.r, i_blk=st.i_blk, j_blk=st.j_blk,
                    snd_blk=plan.snd_blk, snd_rnk=plan.snd_rnk, rcv_rnk=plan.rcv_rnk,
                    extra=p > 1 and _is_extra(st.pair, step, p),
                ))
                nxt.append(moved)
            states = nxt
    return out


def all_block_pairs(p):
    return set(combinations(range(1, 2 * p + 1), 2))


def schedule_rows(p, nsweeps=1):
    """Schedule as CSV-ready rows (step, rank, i_blk, j_blk, snd_blk, snd_rnk, rcv_rnk, extra)."""
    nsteps = steps_per_sweep(p)
    rows = []
    for e in sweep_schedule(p, nsweeps):
        rows.append({
            "step": (e.sweep - 1) * nsteps + e.step,
            "rank": e.rank,
            "i_blk": e.i_blk,
            "j_blk": e.j_blk,
            "snd_blk": e.snd_blk,
            "snd_rnk": e.snd_rnk,
            "rcv_rnk": e.rcv_rnk,
            "extra": int(e.extra),
        })
    return rows
