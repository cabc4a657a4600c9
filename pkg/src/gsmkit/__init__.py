"""Generalised symmetric measurements: construction, verification and applications."""

from .applications import (
    DualFrame, ProbabilityTable, Verdict, c_max, correlation_matrix, dual_frame, eur_bound,
    index_of_coincidence, probabilities, purity_from_probabilities, separability_test,
    shannon_renyi_check,
)
from .basis import BasisPartition, gell_mann_basis, partition_basis, random_partition, rotate_block
from .construction import (
    Variant, build_h_operators, build_measurement_block, recover_basis_block, t_from_x, t_range,
    variant_coincidence, x_from_t,
)
from .designs import DesignKind, certify_design, choi_of_channel_sum
from .gsm import (
    ClassTag, GeneralizedSymmetricMeasurement, classify, construct_gsm, feasible_parameter_ranges,
    is_informationally_complete, r_class_gsm, verify_gsm,
)

__version__ = "0.1.0"
