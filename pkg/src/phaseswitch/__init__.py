"""Single atom in a lossy one-sided cavity inside a polarization
interferometer: linear response, saturation, photon statistics and the
photon-controlled atomic phase switch."""

__version__ = "0.1.0"

from .params import (NS, LAB_PARAMS, InterferometerConfig, NoCouplingWarning,
                     ParameterError, SingularityError, SystemParams,
                     cooperativity_from_lifetime, derive_rates, load_params,
                     two_pi_ghz, two_pi_mhz)
from .traces import TraceSeries, read_traces, write_traces
from .linres import (ScatteringAmplitudes, SpectrumModel,
                     characterization_spectrum, interferometer_numbers,
                     phase_spectrum, phase_winding, port_fields,
                     reflection_lossless, scattering_amplitudes)
from .saturation import (bloch_closed_form, bloch_steady_state, loss_budget,
                         port_intensities, port_intensities_closed_form)
from .lindblad import (ConvergenceError, DarkPortWarning, DrivenSystem,
                       HilbertConfig, QuantumState, TruncationWarning,
                       build_liouvillian, g2, steady_state)
from .disorder import DetuningDistribution, average_g2, average_intensity
from .switch import (AtomDensityMatrix, ReadoutModel, atom_presence_posterior,
                     balanced_fidelity, fringe_shift, gate_fidelities,
                     ramsey_fringe, readout_fidelity, switch_densities,
                     switch_success_probability)
from .fitkit import FitResult, fit_exponential, fit_sinusoid, fit_spectrum
