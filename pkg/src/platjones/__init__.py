"""Jones polynomials of plat-closed braids via the path model representation.

The package has four layers:

* :mod:`platjones.braid` - braid words, plat closures, writhe, random sampling.
* :mod:`platjones.skein` - exact Kauffman-bracket state sum used as an oracle.
* :mod:`platjones.pathmodel` - the Temperley-Lieb path representation at
  ``q = exp(2 pi i / k)``.
* :mod:`platjones.jones`, :mod:`platjones.moments`, :mod:`platjones.experiments` -
  Jones values from amplitudes, moment operators, and random-braid experiments.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .braid import (
    BraidError,
    BraidWord,
    PlatDiagram,
    design_length,
    format_braid_word,
    parse_braid_word,
    plat_components,
    random_braid,
    writhe,
)
from .laurent import LaurentPolynomial
from .skein import (
    OracleBudgetError,
    RootOfUnity,
    evaluate_at,
    jones_oracle,
    kauffman_bracket,
    skein_residual,
)
from .pathmodel import (
    DimensionError,
    PathBasis,
    apply_braid,
    braid_generator_rep,
    cap_state,
    enumerate_paths,
    rep_matrix,
    tl_generator,
)
from .jones import JonesComparison, cross_check, jones_via_path_model, plat_amplitude
from .moments import calibrate_lambda, exact_moment_gap, haar_moment
from .experiments import (
    ConfigError,
    ExperimentConfig,
    anticoncentration_fraction,
    estimate_design_moments,
    l1_distance,
    output_distribution,
    paley_zygmund_check,
    sample_outcomes,
)

__all__ = [name for name in dir() if not name.startswith("_")]
