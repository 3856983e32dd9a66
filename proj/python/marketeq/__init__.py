"""Price equilibria and entry-policy comparisons in mandatory-purchase markets."""

try:
    from ._marketeq import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _marketeq import *  # noqa: F401,F403  (build-tree layout)
