"""Waveguide cavity QED with atomic mirrors.

A driven two-level atom between atomic mirrors coupled to a 1D waveguide:
non-Hermitian excitation spectra, driven Lindblad dynamics, and the photon
statistics of the emitted field, computed along two independent routes
(quantum regression on the master equation and weak-drive resolvents).
"""

__version__ = "0.1.0"

from .model import (AtomSpec, ConfigError, DriveSpec, SystemConfig,
                    ValidatedSystem, canonical_three_atom, geometry_id,
                    n_atom_mirror_config, validate)
from .subspace import (Basis, BlockStructureError, OperatorRep, block_between,
                       embed, enumerate_basis, ladder_operator, number_operator,
                       restrict)
from .hamiltonian import (CouplingMatrices, coherent_hamiltonian,
                          coupling_matrices, driven_hamiltonian,
                          effective_hamiltonian)
from .spectral import (EP_GAMMA_SINGLE, EP_GAMMA_TWO, NearDefectiveError,
                       Spectrum, biorthogonal_decompose, closed_form_single,
                       closed_form_two, match_to_reference, spectrum_report,
                       spectrum_rows_to_csv)
from .lindblad import (DegenerateSteadyStateError, DensityMatrix,
                       IntegrationError, Superoperator, TruncationWarning,
                       build_liouvillian, propagate, steady_state)
from .collective import (CollectiveMode, ModeSet, PolaritonCensus,
                         TwoExcitationCensus, collective_modes,
                         mode_basis_hamiltonians, polariton_census,
                         two_excitation_census)
from .correlations import (CorrelationUnderflowError, EmissionOperator,
                           G2Curve, SingularResolventError, ZenoReport,
                           emission_operator, g1, g2_regression,
                           g2_zero_analytic, g2_zero_regression,
                           zeno_diagnostics)
from .oracle import (OracleReport, mode_reduction_check, g2_cross_validation,
                     long_time_steady_oracle, steady_state_cross_check)
from .scenarios import built_in_scenarios, resonant_detuning

__all__ = [name for name in dir() if not name.startswith("_")]
