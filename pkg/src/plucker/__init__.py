"""Exact exterior algebra, Pfaffians, infinite-wedge combinatorics and membership tests."""

from .scalar import QQ, GF, ModP, FieldMismatchError, parse_field
from .exterior import (AltTensor, LinearMap, OpCounter, SpaceSpec, apply_exterior_power, contract_lemma,
                       hodge_dual, interior_product, pairing, tensor_up, wedge)
from .maya import (MayaIndex, MayaPoly, derive_poly, derive_variable, enumerate_index, index_of_partition,
                   is_good, leq, lift_instance, partition_of, permute, plucker_relation, project_instance)
from .pfaffian import (SkewMatrix, check_recursion, check_star_recursion, pf_poly, pf_star_poly, pfaffian,
                       reconstruction_equation, two_form_rank)
from .membership import (MembershipVerdict, VarietySpec, decompose_pure, grassmannian_deterministic,
                         randomized_membership, reduce_witness, secant_sample, symbolic_membership)
from .tuples import (MatrixTuple, TotPoint, find_independent_vector, find_subspace, normal_form, tuple_rank)

__version__ = "0.1.0"
