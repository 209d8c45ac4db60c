"""Small-world random graphs: sampling, entropies, symmetry and compression."""
from .codec import (BitStream, CompressedGraph, decode, decode_labelled, decode_structural,
                    encode_labelled, encode_structural)
from .entropy import (EntropyReport, compressibility_ratio, entropy_report, er_entropy,
                      er_structural_entropy_asymptotic, pag_entropy_asymptotic,
                      sw_conditional_entropy_upper, sw_entropy_asymptotic, sw_entropy_constant,
                      sw_entropy_exact, sw_structural_entropy_asymptotic)
from .errors import (CorruptPayload, HeaderMismatch, InvalidParams, NotAdmissible, ResourceLimit,
                     SWGraphError, TooLarge)
from .model import (LabelledGraph, ModelParams, circle_distance, edge_probability,
                    log_likelihood_sw, read_edge_list, sample_er, sample_sw, write_edge_list)
from .moments import (MomentReport, max_degree_exceedance, mean_degree_asymptotic,
                      mean_degree_exact, moment_report, s_sums_asymptotic, s_sums_exact)
from .series import (SumExpansion, binary_entropy, binary_entropy_expansion, harmonic_sum,
                     log_power_sum, power_sum)
from .symmetry import (CanonicalForm, Permutation, aut_size, canonical_form, graph_defect,
                       is_admissible, is_asymmetric, tau_count, total_defect, vertex_defect,
                       z_statistic)

__version__ = "0.1.0"
