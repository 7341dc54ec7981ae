"""Small state builders and closed forms used across suites."""
import numpy as np

from core.states import pure_state


def plus_state():
    return pure_state([1.0, 1.0])


def zero_state():
    return pure_state([1.0, 0.0])


def werner_discord(z):
    """Closed-form minimized discord of the Werner family."""
    def xlog(x):
        return 0.0 if x <= 0.0 else x * np.log2(x)
    return xlog(1 + 3 * z) / 4 - xlog(1 + z) / 2 + xlog(1 - z) / 4
