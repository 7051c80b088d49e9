"""How much work monotonicity pruning saves, and what it can miss.

Pruning skips expansions of candidates that fail the support or determinism
threshold.  Because segmentation maximises covered events, a bigger model can
occasionally score higher than its parent, so pruning is a heuristic.
"""

import random

from lpmine import EventLog, MinerConfig, mine
from lpmine.tree import canonical_form


def random_log(rng: random.Random) -> EventLog:
    alphabet = "abcd"
    return EventLog(
        tuple(rng.choice(alphabet) for _ in range(rng.randint(2, 9))) for _ in range(rng.randint(3, 15))
    )


def main(n_logs: int = 15, seed: int = 4) -> None:
    rng = random.Random(seed)
    saved = missed = 0
    for i in range(n_logs):
        log = random_log(rng)
        kw = dict(min_support=0.8, min_determinism=0.5, min_leaves=2, max_iterations=3,
                  top_k=10**6, max_frontier=None)
        fast = mine(log, MinerConfig(**kw))
        exact = mine(log, MinerConfig(pruning_enabled=False, **kw))
        lost = {canonical_form(m.tree) for m in exact.selected} - {canonical_form(m.tree) for m in fast.selected}
        saved += exact.candidates_evaluated - fast.candidates_evaluated
        missed += len(lost)
        print(f"log {i:2d}: evaluated {fast.candidates_evaluated:5d} vs {exact.candidates_evaluated:5d}, "
              f"missed {len(lost)}" + (f" e.g. {min(map(str, lost))}" if lost else ""))
    print(f"total evaluations saved {saved}, models missed {missed}")


if __name__ == "__main__":
    main()
