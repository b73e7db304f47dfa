"""Exact local densities of hermitian lattices over ramified quadratic
extensions of p-adic fields (odd residue characteristic).

Everything is computed in exact rational arithmetic: density polynomials,
primitive densities, derived densities and their corrections, together with
a brute-force counting oracle and a library of supporting identities over
finite quadratic spaces.
"""

__version__ = "0.1.0"

from .density import (InternalConsistencyError, coefficients_c, dden,
                      delta_odd, den_poly, den_prime, den_prime_raw,
                      den_t_counts, density_report, pden_from_den_roundtrip,
                      pden_piece, pden_poly, pden_prime, pden_prime_raw,
                      pdden_closed, pdden_machine, unimodular_self_density)
from .felements import (FElement, fundamental_invariants, gram_matrix,
                        is_hermitian, mat_inverse)
from .fourier import (FlatConfiguration, d_sum, d_sum_terms, horizontal_set,
                      is_horizontal)
from .fqspaces import (FqQuadSpace, alpha, beta, brute_isometry_count,
                       brute_subspace_count, classify_gram, delta_sign,
                       gram_of, isometry_count, isotropic_subspace_count,
                       legendre, smallest_nonresidue, subspace_count)
from .lattices import (AmbientLattice, Block, GenusSymbol,
                       check_mu_identities, enumerate_genus_symbols,
                       genus_from_gram, hermite_normal_form,
                       hyperbolic_planes, lambda_sharp, mu_counts,
                       overlattice_count, overlattices,
                       sublattices_in_pi_inverse, t_max, unimodular)
from .oracle import (BudgetError, StabilizationError, den_oracle,
                     den_oracle_sequence, herm_count, pherm_count,
                     smart_pair_count)
from .polynomials import Poly
from .qcombo import gl_order, q_binomial, triangular

__all__ = [
    "AmbientLattice", "Block", "BudgetError", "FElement",
    "FlatConfiguration", "FqQuadSpace", "GenusSymbol",
    "InternalConsistencyError", "Poly", "StabilizationError", "alpha",
    "beta", "brute_isometry_count", "brute_subspace_count",
    "check_mu_identities", "classify_gram", "coefficients_c", "d_sum",
    "d_sum_terms", "dden", "delta_odd", "delta_sign", "den_oracle",
    "den_oracle_sequence", "den_poly", "den_prime", "den_prime_raw",
    "den_t_counts", "density_report", "enumerate_genus_symbols",
    "fundamental_invariants", "genus_from_gram", "gl_order", "gram_matrix",
    "gram_of", "herm_count", "hermite_normal_form", "horizontal_set",
    "hyperbolic_planes", "is_hermitian", "is_horizontal", "isometry_count",
    "isotropic_subspace_count", "lambda_sharp", "legendre", "mat_inverse",
    "mu_counts", "overlattice_count", "overlattices",
    "pden_from_den_roundtrip", "pden_piece", "pden_poly", "pden_prime",
    "pden_prime_raw", "pdden_closed", "pdden_machine", "pherm_count",
    "q_binomial", "smallest_nonresidue", "smart_pair_count",
    "sublattices_in_pi_inverse", "t_max", "triangular", "unimodular",
    "unimodular_self_density",
]
