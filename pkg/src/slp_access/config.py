"""slp-access configuration constants.

Defaults for the CLI and the audit suites. `settings.load_settings` may
override the tunable ones from a YAML file.
"""

# Text format
SLP_MAGIC = "SLPv1"

# Lengths must fit an unsigned 64-bit value
U64_MAX = (1 << 64) - 1

# Oracle expansion is refused above this many characters
ORACLE_CAP = 1 << 24

# Engines
ENGINES = ("baseline", "linear", "biased")
DEFAULT_ENGINE = "biased"
DEFAULT_LEVELS = 1
MAX_LEVELS = 2

# Audit constants
TELESCOPE_C = 4  # predecessor visits per access <= TELESCOPE_C * (2 + log2 N)
IBST_BUILD_C = 4  # construction search steps <= IBST_BUILD_C * intervals

# Ingestion
REPAIR_MAX_RULES = None  # None: replace pairs until none repeats

# Verify / bench
VERIFY_SAMPLES = 2_000
BENCH_QUERIES = 10_000
BENCH_THREADS = 1
DEFAULT_SEED = 0
