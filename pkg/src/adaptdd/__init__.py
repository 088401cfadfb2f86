"""Decoy-guided selection of dynamical-decoupling masks for noisy quantum circuits."""
from .circuit import Circuit, Gate, GateKind
from .dd import DDMask, DDProtocol, characterization_circuit, delay_slot, insert_dd, xy4_block
from .decoy import ideal_distribution, make_cdc, make_sdc
from .device import CrosstalkMap, DeviceModel, load_device
from .distribution import Distribution
from .metrics import FidelityReport, fidelity, spearman, tvd
from .noise import NoiseModel, NoisyExecutor, analytic_mode, run_noisy
from .qasm import parse_qasm, serialize_qasm
from .schedule import GateSequenceTable, build_gst, idle_fraction, idle_windows
from .search import SearchReport, adapt_search, exhaustive_best, partition_neighborhoods, policy_compare

__version__ = "0.1.0"
