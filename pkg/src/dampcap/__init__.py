"""Certified lower bounds on the classical capacity of multilevel damping channels.

Two encodings are compared: letters written on the computational basis and
read out in it, and letters written on the Fourier basis and read out in
that.  The better of the two optimized mutual informations is a detected
lower bound on the channel's classical capacity.
"""
from .capacity import (BAResult, CapacityReport, ConvergenceWarning, blahut_arimoto,
                       detected_capacity, holevo_direct, holevo_fourier, mutual_information,
                       report_from_amplitudes, symmetric_capacity)
from .channel import (amplitudes_from_transition, apply_channel, direct_transition,
                      fourier_basis, fourier_output_state, fourier_transition,
                      fourier_transition_oracle, kraus_operators, level_populations)
from .families import (FAMILIES, ChannelSpec, beta_binomial, bosonic, constant_ratio,
                       family_moments, geometric, hypergeometric, lambda_channel,
                       negative_hypergeometric, two_jump, v_channel)
from .harness import (PRESETS, SweepSpec, emit, figure_preset, load_reports, parse_config,
                      run_sweep)
from .numerics import (hermitian_eigenvalues, log_beta, log_binomial, shannon_entropy,
                       von_neumann_entropy, xlogx)

__version__ = "0.1.0"
