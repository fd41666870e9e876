"""Heat-kernel spectral methods for small-set expansion on Markov chains."""
from .chain import (DirectedChain, ReversibleChain, WeightedGraph, as_reversible, from_graph,
                    reversibilize, stationary_distribution)
from .enumeration import EnumResult, NetSpec, build_net, enumerate_sparse, search_eigenspace
from .escape import (BoundVerification, DirichletSpectrum, EscapeReport, dirichlet_spectrum,
                     escape_report, exact_stay_probability, mc_stay_probability,
                     phi_from_spectrum, poisson_stay_probability, verify_bound)
from .functionals import (ProfilePoint, conductance_profile_oracle, measure, mu, phi, phi_set,
                          spectral_profile_oracle)
from .graphio import load_graph, parse_edge_list, parse_json
from .heat import (SparseWitness, TraceCertificate, best_certificate, certificate, heat_witness,
                   nullity_bound, nullity_witness, per_state_diagnostic, profile_bound,
                   profile_parameters, trace_condition)
from .spectral import (SpectralBasis, analytic_nullity, decompose, eigen_residuals, heat_apply,
                       heat_trace, laplacian_heat_trace)
from .sse import (CutProfileReport, CutResult, SseConfig, SseResult, analytic_sse, cut_profile_check,
                  sse_sets, sweep_abs, sweep_cut)

__version__ = "0.1.0"
