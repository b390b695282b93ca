"""persimod: persistence modules, barcodes and their comparison machinery."""

from .barcode import (Bar, Barcode, Matching, bar_match_cost, beta_k,
                      bottleneck_distance, boundary_depth, ell,
                      infinite_endpoint_spectrum, interval_interleaving_distance,
                      is_delta_matching, matching_lemma, multiplicity_function,
                      mu_odd, nu, optimal_matching, persistent_betti,
                      shift_barcode)
from .complexes import (FiniteMetricSpace, GridFunction, PointCloud,
                        Triangulation, cech_barcode, cech_complex,
                        circle_complex, log2_rescale, meb_radius, oscillation,
                        rips_barcode, rips_complex, sublevel_filtration,
                        torus_grid_complex)
from .filtered_complex import (Cell, FilteredComplex, JordanPairing,
                               barannikov_reduce, barcode_of_complex,
                               boundary_depth_usher, homology_module)
from .function_theory import (FunctionNorms, TrigPolynomial2D,
                              alternance_bound, circle_ell_identity,
                              grid_norms, perturbation_inequalities,
                              verify_length_inequality)
from .metric_geometry import distortion, gh_bruteforce, gh_equivariant
from .module_rep import (ModuleMorphism, ModuleRep,
                         barcode as module_barcode,
                         characteristic_exponent, direct_sum, from_barcode,
                         image, induced_matching, induced_matching_inj,
                         induced_matching_sur, interleaving_distance,
                         interleaving_from_matching, kernel, rank_invariant,
                         refine_spectra, shift, truncate)
from . import barcode  # keep the submodule reachable as persimod.barcode
from .representations import (ModuleRepWithAction, eigenspace_submodule,
                              even_multiplicity_check, verify_representation,
                              z4_obstruction_bound)
from .symplectic import (EllipsoidSpec, cz_rotation_index,
                         ellipsoid_degree0_bar, ellipsoid_sh_degree,
                         normalized_index, sbm_lower_bound)

__version__ = "0.1.0"
