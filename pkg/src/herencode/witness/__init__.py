"""Structural certificates for hereditary bipartite classes."""

from .certificates import (Cover, Delta, Layer, LowDegree, LowDegreeList, Modular, Part, Peel, PrimePiece,
                           Reduce, Verification, certificate_from_json, certificate_to_json,
                           stated_delta_bound, verify_certificate)
from .classes import ClassRef, class_ids, class_info
from .finders import BicliquePartition, biclique_partition, find_certificate, maximum_induced_matching
from .schemes import SuccinctPlan, certificate_to_scheme, observed_degeneracy

__all__ = [
    "BicliquePartition", "ClassRef", "Cover", "Delta", "Layer", "LowDegree", "LowDegreeList", "Modular",
    "Part", "Peel", "PrimePiece", "Reduce", "SuccinctPlan", "Verification", "biclique_partition",
    "certificate_from_json", "certificate_to_json", "certificate_to_scheme", "class_ids", "class_info",
    "find_certificate", "maximum_induced_matching", "observed_degeneracy", "stated_delta_bound",
    "verify_certificate",
]
