"""Time-frequency tools: STFT, modulation norms, cube coefficients and Gelfand-Shilov probes."""
from .experiment import modspace_identity_experiment, modspace_test_functions, shipped_windows
from .hermite import (MEMBER, NON_MEMBER, GSFunction, GSProbeResult, gs_membership_probe,
                      gs_seminorm, hermite_functions)
from .modulation import (FINITE, CubeCoeffSeq, cube_coefficients, membership_probe_modulation,
                         modulation_norm)
from .signals import (SampledSignal, STFTGrid, dft, gaussian_window, load_signal_csv, load_stft,
                      save_signal_csv, save_stft, stft, symmetric_grid)

__all__ = [
    "CubeCoeffSeq", "FINITE", "GSFunction", "GSProbeResult", "MEMBER", "NON_MEMBER",
    "STFTGrid", "SampledSignal", "cube_coefficients", "dft", "gaussian_window",
    "gs_membership_probe", "gs_seminorm", "hermite_functions", "load_signal_csv", "load_stft",
    "membership_probe_modulation", "modspace_identity_experiment", "modspace_test_functions",
    "modulation_norm", "save_signal_csv", "save_stft", "shipped_windows", "stft", "symmetric_grid",
]
