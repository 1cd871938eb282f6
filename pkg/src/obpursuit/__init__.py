"""Greedy sparse recovery with oblique projections.

A numpy/scipy library covering: a field-generic dense linear-algebra
substrate (hard thresholding, coordinate projections, weighted least
squares, oblique projectors), random frame sensing-pair constructions
with sampling densities and biorthogonal duals, conditioned sparsifying
dictionaries, the six-pursuit family in oblique and conventional
variants, exact small-scale restricted-constant certification with
guarantee checkers, and deterministic experiment harnesses with a CLI.
"""

from .errors import (ConfigError, DegenerateFrameError, EnumerationBudgetError,
                     InvalidDensityError, InvalidSparsityError, ObPursuitError,
                     RankDeficiencyError)
from .linalg import (ObliqueProjector, SparseSignal, build_oblique_projector,
                     coordinate_project, hard_threshold, spectral_norm,
                     top_support, weighted_ls_solve)
from .frames import (FrameFamily, SamplingDensity, SensingPair, build_density,
                     dual_frame, expected_dual_gram, expected_plain_gram,
                     expected_preconditioned_gram, frame_operator_stats,
                     masked_fourier_frame, partial_dft_frame,
                     preconditioned_matrix, sample_sensing_pair,
                     save_sensing_pair, load_sensing_pair,
                     synthetic_biorthogonal_frame)
from .dictionaries import (DictionaryPair, dictionary_dual, dictionary_one_norm,
                           make_dictionary, save_dictionary, load_dictionary)
from .pursuits import (ALGORITHMS, PursuitConfig, RecoveryResult, oblique_cosamp,
                       oblique_htp, oblique_iht, oblique_mp, oblique_sp,
                       oblique_thresholding, run_pursuit)
from .certificates import (ConstantsReport, ConvergenceConstants, CrossBabelReport,
                           bound_constants_K, check_sufficient_conditions,
                           component_bands, constants_report, convergence_constants,
                           cross_babel, dynamic_range_functional, iteration_bound,
                           restricted_biorthogonality_constant,
                           restricted_isometry_constant, run_lemma_suite,
                           theta_of_gram, verify_projection_preservation)
from .experiments import (ExperimentConfig, ExperimentGrid, ab_comparison,
                          load_config, parse_config_text, phase_transition,
                          rbop_trend, run_grid, write_grid_csv, write_grid_json,
                          write_plot_data)

__version__ = "0.1.0"
