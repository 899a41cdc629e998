"""Quaternionic hyperbolic isometries: classification, reversers and
involution factorizations for Sp(n) and Sp(n,1)."""
from .classify import (ConjugacyInvariant, IsometryClass, ParabolicNormalForm, classify,
                       conjugacy_invariant, normal_form_parabolic)
from .errors import (BadRecipe, DimensionMismatch, IllConditioned, MalformedDocument, NotImaginary,
                     NotInGroup, NotInImage, NotSemisimple, OddDimension, QHIError, SingularMatrix,
                     WrongModel, ZeroInput)
from .generators import ElementRecipe, Generated, random_element
from .io import element_from_json, element_to_json, read_element, write_element
from .qmatrix import (Form, QMatrix, cayley, complex_adjoint, direct_sum, form_matrix,
                      from_complex_adjoint, is_in_group, is_unitary_adjoint, to_ball, to_siegel,
                      transport)
from .quaternion import Quaternion, SimilarityClass, canonicalize, similar, similarity_conjugator
from .reversibility import (ReversibilityReport, Verification, four_involution_factorization,
                            is_strongly_reversible_spn, is_strongly_reversible_spn1,
                            projective_reverser, reverse, reverser_spn, reverser_spn1,
                            strong_reversibility, verify_report)
from .spectral import EigenClass, JordanPair, diagonalize, eigen_classes, jordan_decompose

__version__ = "0.1.0"
