"""Sampled regularity: PSD checks over many windows ``[T~(p_i - p_j)]``."""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..positivity import DEFAULT_TOL, is_psd
from ..report import Report, elapsed_ms
from ..representation import Representation
from .windows import build_tilde_gram

MAX_GRID_TUPLE = 4
MAX_RANDOM_TUPLE = 6
RANDOM_MAX_ENTRY = 2
THREADS_ENV = "LATREG_THREADS"
TIE_TOL = 1e-12


def thread_cap(requested: int | None = None) -> int:
    """Worker count: ``requested`` (default 1) capped by ``$LATREG_THREADS``."""
    workers = 1 if requested is None else max(1, int(requested))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            workers = min(workers, max(1, int(env)))
        except ValueError:
            pass
    return workers


def _grid_windows(n: int, max_entry: int):
    grid = list(itertools.product(range(max_entry + 1), repeat=n))
    out = []
    for size in range(1, min(MAX_GRID_TUPLE, len(grid)) + 1):
        out.extend(itertools.combinations(grid, size))
    return out


def sample_windows(n: int, max_entry: int = 1, extra_random: int = 20, seed: int = 0):
    """Grid subsets of size 1..4 from ``{0..max_entry}^n`` then seeded random tuples.

    Grid windows are taken as sets: permuting or repeating entries of a tuple
    conjugates its window by a permutation or copies rows, so PSD status only
    depends on the set of distinct entries.
    """
    out = _grid_windows(n, max_entry)
    rng = np.random.default_rng(seed)
    for _ in range(extra_random):
        size = int(rng.integers(1, MAX_RANDOM_TUPLE + 1))
        pts = rng.integers(0, RANDOM_MAX_ENTRY + 1, size=(size, n))
        out.append(tuple(tuple(int(c) for c in p) for p in pts))
    return out


def check_regular_sampled(rep: Representation, max_entry: int = 1, extra_random: int = 20,
                          seed: int = 0, tol: float = DEFAULT_TOL,
                          workers: int | None = None) -> Report:
    """PSD test of every sampled window.

    ``lambda_min`` is the smallest eigenvalue over all windows.  The witness
    is a failing grid window with the smallest ``lambda_min`` (ties go to the
    larger window, which contains the smaller ones as principal blocks); if
    only random tuples fail, it is the worst of those.
    """
    start = time.perf_counter()
    windows = sample_windows(rep.n, max_entry, extra_random, seed)

    def judge(t):
        return is_psd(build_tilde_gram(rep, t), tol)

    nworkers = thread_cap(workers)
    if nworkers > 1:
        with ThreadPoolExecutor(nworkers) as pool:
            verdicts = list(pool.map(judge, windows))
    else:
        verdicts = [judge(t) for t in windows]

    worst = min(range(len(windows)), key=lambda i: verdicts[i].lambda_min)
    failures = sum(not v for v in verdicts)
    witness = None
    if failures:
        n_grid = len(_grid_windows(rep.n, max_entry))
        failing = [i for i in range(len(windows)) if not verdicts[i]]
        pool = [i for i in failing if i < n_grid] or failing
        floor = min(verdicts[i].lambda_min for i in pool)
        slack = TIE_TOL * max(1.0, abs(floor))
        tied = [i for i in pool if verdicts[i].lambda_min <= floor + slack]
        witness = windows[max(tied, key=lambda i: (len(windows[i]), -i))]
    return Report(
        check="regular-sampled",
        verdict=failures == 0,
        lambda_min=verdicts[worst].lambda_min,
        witness=witness,
        tolerances={"psd": tol},
        seed=seed,
        runtime_ms=elapsed_ms(start),
        details={"windows_checked": len(windows), "failures": failures,
                 "max_entry": max_entry, "extra_random": extra_random,
                 "worst_window": windows[worst],
                 "worst_scale": verdicts[worst].scale},
    )
