"""
csspapr: cyclic shifted sequences (CSS) PAPR reduction for OFDM.

Submodules
----------
spectral   unitary DFT pair, cyclic shift, PAPR
modem      16-QAM mapping and seeded symbol streams
partition  interleaved / adjacent / random subcarrier partitions
css        candidate generation and minimum-PAPR selection (plus PTS baseline)
acf        subblock ACF magnitudes, numeric and closed form
svsets     shift-value set criteria, scoring and search
harness    Monte Carlo CCDF experiments and CSV persistence
cli        command-line entry point
"""
__version__ = "0.1.0"

from .acf import acf_adjacent_closed, acf_compare, acf_interleaved_closed, acf_numeric, power_spectrum
from .css import (
    CandidateResult,
    SvCollection,
    make_candidate,
    pts_candidate,
    select_min_papr,
    side_info_bits,
    subblock_signals,
)
from .exceptions import ConfigurationError, DomainError, PreconditionError, SearchFailedError
from .harness import CcdfTable, SimConfig, interpolate_papr_at, run_experiment, run_trial
from .modem import map_16qam, random_symbol_sequence
from .partition import (
    PartitionPattern,
    adjacent_pattern,
    interleaved_pattern,
    msequence_pattern,
    random_pattern,
    split,
)
from .spectral import cyclic_shift_left, dft, idft, mean_power, papr_db
from .svsets import (
    CriterionReport,
    Criterion3Score,
    check_criterion1,
    check_criterion2,
    criterion3_score,
    paper_collection,
    relative_distances,
    search_sv_collection,
)
