"""Asymmetry obstructions for cohomology algebras given by trilinear forms."""

from .algebra import (GradedAlgebra, check_structure, cup_length, form_nondegenerate,
                      generated_by_degree, six_manifold_algebra, three_manifold_algebra)
from .automorphisms import (FormAutomorphism, enumerate_form_automorphisms, find_involution,
                            find_order_q_automorphism)
from .census import (CensusConfig, CensusReport, CertificationRecord, CertifyOptions,
                     census_3m, census_6m, certify_form, density_estimate)
from .deformations import (DeformationResult, FilteredDeformation, SearchStatus,
                           associated_graded, deformation_search, is_trivial_deformation)
from .derivations import (Derivation, DerivationSpace, PreconditionError, derivation_space,
                          has_negative_derivation, lemma1_criterion, lemma2_property_check)
from .fields import F2, ZZ, Field, Fp
from .forms import (Postnikov, PostnikovClass, TrilinearForm, WallInvariants, alpha,
                    from_cubic_polynomial, postnikov_classify, random_form, reduce_mod,
                    to_cubic_polynomial, wall_admissible, wall_check)
from .polynomial import CubicParseError, CubicPolynomial, format_cubic, parse_cubic

__version__ = "0.1.0"
