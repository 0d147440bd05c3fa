"""Fluctuation theory of random walks, with exact certificates.

Local times at the running maximum, ladder processes, norming constants,
excursion-reversal path transforms, walks conditioned to stay positive, and
meanders; identities are certified by an exact enumeration oracle and the
scaling behavior is checked by Monte Carlo experiments against closed-form
limit targets.
"""

from .increments import IncrementLaw, WalkPath, derive_seed, sample_walk, skeleton
from .fluctuation import (LadderSequence, LocalTimeCurve, ladder_sequence,
                          last_max_index, last_min_index, local_time_strict,
                          local_time_verbatim, records_ratio, running_max)
from .transforms import (ExcursionDecomposition, decompose_excursions,
                         future_min_local_time, post_min_process,
                         reverse_at_ladder, reverse_at_last_max, tanaka_transform)
from .scaling import (FristedtReport, PositivitySequence, fristedt_residual,
                      norming_constant, positivity_probabilities)
from .conditioning import (RenewalFunction, SurvivalEstimate, conditioned_walk,
                           h_kernel_step, harmonic_limits, meander_sample,
                           renewal_function, survival_probability)
from .oracle import (ExactDistribution, distribution_equality, enumerate_paths,
                     exact_functional_distribution, functional_distribution)
from .stats import Sample, ks_statistic, trend_test, wasserstein1
from .limit_laws import (ReferenceLaw, h_bm, half_stable_tau_tail, kappa_bm,
                         levy_half_cdf, rayleigh_cdf, reference)
from .experiments import (ExperimentConfig, ExperimentReport, run_lemma1,
                          run_localtime_stability, run_meander, run_theorem1)

__version__ = "0.1.0"
