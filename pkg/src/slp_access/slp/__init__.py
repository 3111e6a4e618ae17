"""Grammar model, text format, ingestion and generators."""

from .core import (  # noqa: F401
    ExpansionOracle,
    Pair,
    Rule,
    Slp,
    Terminal,
    compute_sizes,
    decode,
    expand,
    expand_node,
    height,
    make_slp,
    naive_access,
    naive_walk,
    reachable,
)
from .generators import MODES, random_slp  # noqa: F401
from .repair import build_grammar  # noqa: F401
from .text_format import parse_slp, read_slp, serialize_slp, write_slp  # noqa: F401
