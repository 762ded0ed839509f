"""
Macro settings that can be imported and toggled. Internally, specific parts of the codebase rely on these settings
for determining search budgets and default bounds.

To make sure global reference is maintained, should import these settings as:

`import localsim.macros as macros`
"""

# whether to print debugging information and show progress bars
VERBOSE = False

# logging levels for the default logger (None disables the file handler)
CONSOLE_LOGGING_LEVEL = "WARN"
FILE_LOGGING_LEVEL = None

# default depth for census / witness searches; every documented example decides well below it
DEPTH_BUDGET = 6

# number of decomposition pairs the generic local equivalence search may examine
SEARCH_BUDGET = 20000

# default element budget for subgroup closure
CLOSURE_BUDGET = 10000

# default bound for order detection
ORDER_BOUND = 100

# largest finest partition for which admissible permutations are brute forced
ADMISSIBLE_BLOCK_CAP = 8

# default syllable length for the reduced word search
REDUCED_WORD_MAX_LEN = 6

# maximum number of similarities a finitely enumerated structure may close up to
FINITE_CLOSURE_CAP = 5000

# maximum number of points of a finite space whose group is enumerated by brute force
FINITE_POINT_CAP = 8

# maximum number of partitions returned by enumerate_partitions
ENUMERATION_BUDGET = 100000

# maximum number of levels explored when looking for a ball sequence level deep enough
MAX_SEQUENCE_LEVEL = 32

try:
    from localsim.macros_private import *  # noqa: F401,F403
except ImportError:
    pass
