"""Desk-scale verification lab for the nonlocal diffusion flow
u_t = div(A[u] grad u) with the Coulomb-type coefficient
A[u] = c_d (u * P(z)/|z|).

Submodules:

* :mod:`landaulab.grid`        grids, presets, discrete calculus, snapshots
* :mod:`landaulab.kernel`      FFT free-space convolution of the coefficients
* :mod:`landaulab.functionals` norms, energies, inequality verifiers
* :mod:`landaulab.solver`      conservative explicit time integration
* :mod:`landaulab.degiorgi`    level-set energies and the recursion audit
* :mod:`landaulab.harness`     named experiments and report emission
"""

from .degiorgi import parameters, recursion_report, schedule, truncate
from .functionals import (InequalityReport, check_interpolation_full,
                          check_interpolation_star, check_poincare_gks,
                          check_weighted_sobolev, dissipation, entropy,
                          lemma21_ratios, linf_norm, lp_norm, weighted_l1m)
from .grid import (Grid, boundary_mass_fraction, gradient, integrate,
                   load_snapshot, make_grid, sample_preset, save_snapshot)
from .harness import (ExperimentConfig, RateFit, fit_decay_rate, load_config,
                      run_experiment)
from .kernel import (DEFAULT_C_D, build_kernel_table, compute_A, compute_divA,
                     ellipticity_profile, newtonian_potential,
                     quadrature_oracle_A)
from .solver import (SolverConfig, Trajectory, apply_diffusion, cfl_dt,
                     moment_envelope, run, step, theoretical_lp_envelope)

__version__ = "0.1.0"
