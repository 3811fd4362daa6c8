"""Exact computations with Takiff algebras, periodic automorphisms and
quasi-graded contractions of Lie algebras, including degree-by-degree
invariants of adjoint and coadjoint representations.

Everything runs over cyclotomic fields Q(zeta_N) in exact arithmetic;
no floating point is involved anywhere.
"""

from .autos import (Automorphism, PeriodicGrading, cyclic_shift,
                    eigenspace_grading, extend_to_copies, fixed_subalgebra,
                    identity_automorphism, inner_from_torus, outer_involution,
                    validate_automorphism, vandermonde_grading)
from .contract import (QuasiGrading, as_quasi, compare_structure, contract,
                       isotropy_contraction, quasi_from_fixedpoints,
                       scaled_algebra, semidirect_tower, validate_quasigrading)
from .invariants import (IndexReport, InvariantBasis, Polynomial,
                         act_derivation, argument_shift, block_degree,
                         coadjoint_index, free_generation_check, graded_part,
                         graded_span, invariant_basis, is_invariant,
                         kostant_bound, peak_summands, poincare, poisson,
                         restrict, transfer_family, transport)
from .liealg import (BilinearForm, LieAlgebra, Subspace, bracket, centralizer,
                     construct_classical, coxeter_number, direct_sum,
                     element_type, invariant_form, is_regular, validate)
from .scalars import (Cyclotomic, cyc, cyc_arith, lift_conductor,
                      lower_conductor, primitive_root, zeta_pow)
from .takiff import (TakiffAlgebra, extend_form, form_eigen_report,
                     hat_component, lift_automorphism, lifted_fixed_algebra,
                     lifted_grading, takiff)
from .verify import (RegularityProfile, check_N_regular, check_S_regular,
                     check_very_N, run_scenario, verify_adjoint_theorem,
                     verify_adjoint_theorem_plus, verify_coadjoint_theorem)

__version__ = "0.1.0"
