"""Pattern complexity, periods and directional entropy of Z^2 subshift samples."""
from .complexity import (ComplexityTable, GapResult, MorseHedlundResult, UndersizedWindowWarning,
                         complexity_1d, complexity_table, exact_complexity_table, gap_classify,
                         morse_hedlund_classify)
from .core import (Alphabet, Pattern, Shape, Window, extract_pattern, format_grid, occurrences,
                   parse_grid, read_grid, write_grid)
from .errors import (CellRangeError, DomainError, GridFormatError, PrecisionError, SizeError,
                     SubshiftError)
from .generators import (BASE_P_DIGIT, BASE_Q_DIGIT, HALF_INTERVAL, ExactRational, FromFile,
                         FullShift, NaturalExtension, Periodic, RandomDyadic, Sturmian,
                         SturmianVertical, TimesPQ, atomic_orbit, fixed_points, generate,
                         is_multiplicatively_independent, required_bits, sturmian_word,
                         vertical_extension)
from .kernels import BACKEND
from .lattice import Lattice2D, hermite_basis
from .measure import (HORIZONTAL, VERTICAL, CylinderStats, EntropyEstimate, directional_entropy_estimate,
                      empirical_measure, entropy_curve, partition_entropy)
from .periodicity import PeriodLattice, fundamental_domain, lattice_rank, period_vectors, reconstruct

__version__ = "0.1.0"
