from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class VariableMapping:
    """
    One correct-program variable chosen for every buggy-program variable.

    `choice[i]` is the column of the correct variable picked for buggy row i, and `pairs`
    the same assignment as (buggy Variable, correct Variable). The probability matrix the
    choice came from is kept for reporting; it does not take part in equality.
    """
    pairs: tuple
    choice: tuple
    log_likelihood: float = field(default=0.0, compare=False)
    probabilities: np.ndarray = field(default=None, compare=False, repr=False)
    buggy_vars: tuple = field(default=(), compare=False, repr=False)
    correct_vars: tuple = field(default=(), compare=False, repr=False)
    elapsed: float = field(default=0.0, compare=False)

    @classmethod
    def from_choice(cls, choice, buggy_vars, correct_vars, probabilities=None, elapsed=0.0):
        choice = tuple(int(c) for c in choice)
        log_likelihood = 0.0
        if probabilities is not None and choice:
            picked = probabilities[np.arange(len(choice)), list(choice)]
            log_likelihood = float(np.log(np.maximum(picked, 1e-300)).sum())
        return cls(
            pairs=tuple((buggy_vars[i], correct_vars[c]) for i, c in enumerate(choice)),
            choice=choice,
            log_likelihood=log_likelihood,
            probabilities=probabilities,
            buggy_vars=tuple(buggy_vars),
            correct_vars=tuple(correct_vars),
            elapsed=elapsed,
        )

    @property
    def empty(self):
        """True when either program has no variables, so there is nothing to map."""
        return not self.buggy_vars or not self.correct_vars

    @property
    def probability(self):
        return float(np.exp(self.log_likelihood))

    @property
    def is_injective(self):
        return len(set(self.choice)) == len(self.choice)

    def as_dict(self):
        return {str(buggy): str(correct) for buggy, correct in self.pairs}

    def __str__(self):
        return '{' + '; '.join(f'{b} : {c}' for b, c in self.pairs) + '}'
