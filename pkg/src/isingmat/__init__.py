"""Ising partition functions of binary matroids: exact evaluation, sum identities
and a decomposition-driven estimator."""

from .decompose import (CertLeaf, CertSum, DecompositionError, Leaf, SumNode, decompose, is_cographic,
                        is_graphic, is_r10, to_certificate, tree_minor)
from .fpras import AccuracyUnderflow, EstimateResult, estimate, noisy_oracle
from .gf2 import Gf2Matrix
from .io import ParseError, format_certificate, parse_certificate, parse_instance, read_certificate, read_instance
from .matroid import (BinaryMatroid, GroundSetTooLarge, SumError, UnknownElementError, WeightedMatroid,
                      delta_sum, fixed_matroids, weighted_delta_sum)
from .signatures import (RHO, Signature, clamp_2sum, clamp_signature, i2_weight, i3_weights, replace_2sum,
                         replace_3sum, signature_of)
from .sums import correction_data, matrix_identities, verify_2sum_split, verify_3sum_split
from .tutte import (dual_evaluate, minor_vector_2, minor_vector_3, potts_crosscheck, tutte_by_recursion,
                    tutte_exact, zhat_vector)

__version__ = "0.1.0"
