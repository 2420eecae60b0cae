"""derhamkit: exact desk-scale homological algebra over truncated p-adic rings.

Simplicial resolutions, cotangent complexes, Hodge-filtered derived de Rham
algebras, divided powers, Witt vectors, tilts and theta, with every claim
backed by finite exact linear algebra over Z, Z/p^n and F_p.
"""

from .exactlin import ModRing, ZZ, PAdicValue, ModulePresentation, normal_form, module_invariants, padic_valuation, resultant
from .polyalg import PolyAlgebra, Poly, DifferentialForm, AlgebraMap, apply_map, derham_d, wedge, graded_slice_basis
from .complexes import GradedSliceComplex, DoubleComplex, HomologyReport, slice_homology, total_complex, compare_homology, homology_report
from .simplex import (
    MonotoneMap,
    SimplicialModule,
    BisimplicialModule,
    epi_mono_factorize,
    normalized_complex,
    unnormalized_complex,
    kan_transform,
    diagonal,
    double_kan,
    shuffle_product,
)
from .cotangent import (
    AlgebraPresentation,
    FreeSimplicialResolution,
    bar_resolution,
    base_change_resolution,
    kaehler_presentation,
    cotangent_homology,
    ext1_cotangent,
    FiniteBModule,
    transitivity_report,
)
from .pdpow import PDAlgebra, PDElement, pd_multiply, pd_gamma, pd_filtration, derived_power, koszul_gamma_complex, exterior_filtration
from .derham import build_derham, hodge_quotient_homology, graded_piece_report, universal_thickening, pd_envelope_report, h0_shuffle_product
from .witt import (
    structure_polynomials,
    QuotientRing,
    WittRing,
    WittVector,
    lift_homomorphism,
    CyclotomicModel,
    tilt_ring,
    theta_map,
    ker_theta_report,
)
from .padicfield import (
    MonogenicExtension,
    cyclotomic_extension,
    eisenstein_extension,
    unramified_extension,
    different_valuation,
    omega_invariants,
    fontaine_annihilator_check,
)
from .suites import list_suites, run_suite

__version__ = "0.1.0"
