import logging
from typing import Optional

import numpy as np

from buchi_rl.mc.dtmc import bsccs
from buchi_rl.mc.models import Dtmc

logger = logging.getLogger(__name__)


def simulate_buchi(
    d: Dtmc,
    rng: np.random.Generator,
    rollouts: int = 10_000,
    horizon: Optional[int] = None,
) -> float:
    """Monte-Carlo estimate of the Büchi satisfaction probability.

    A rollout stops when it enters a BSCC and counts as satisfying when that
    BSCC is accepting; rollouts still transient after `horizon` steps count
    as failures.
    """
    horizon = 100 * d.n if horizon is None else horizon
    decomposition = bsccs(d)
    outcome = np.full(d.n, -1, dtype=np.int8)
    outcome[decomposition.rejecting_states()] = 0
    outcome[decomposition.accepting_states()] = 1
    cumulative = [
        np.cumsum(d.probs[d.indptr[i] : d.indptr[i + 1]]) for i in range(d.n)
    ]
    successors = d.successors()
    hits = truncated = 0
    for _ in range(rollouts):
        s = d.init
        for _ in range(horizon):
            if outcome[s] >= 0:
                break
            c = cumulative[s]
            k = int(np.searchsorted(c, rng.random() * c[-1], side="right"))
            s = successors[s][min(k, len(c) - 1)]
        if outcome[s] < 0:
            truncated += 1
        else:
            hits += int(outcome[s])
    if truncated:
        logger.debug("%d of %d rollouts truncated", truncated, rollouts)
    return hits / rollouts if rollouts else 0.0
