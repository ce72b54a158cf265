"""Secure linear network codes over prime fields.

Builds families of secure codes that share every non-source local kernel,
one code per rate, for a fixed security level.
"""

from snc.errors import SNCError
from snc.gf import FieldSpec, Subspace
from snc.lnc import (LinearNetworkCode, construct_decodable, global_kernels, is_decodable,
                     load_kernels, transform, transmit)
from snc.network import Edge, Network, WiretapCollection, primary_min_cut, primary_subsets
from snc.oracle import all_wiretap_sets, exhaustive_decodability, exhaustive_secrecy
from snc.slnc import (CodeFamily, SecureCode, build_family, check_security, construct_Q,
                      reduce_rate)

__all__ = [
    "CodeFamily", "Edge", "FieldSpec", "LinearNetworkCode", "Network", "SNCError",
    "SecureCode", "Subspace", "WiretapCollection", "all_wiretap_sets", "build_family",
    "check_security", "construct_Q", "construct_decodable", "exhaustive_decodability",
    "exhaustive_secrecy", "global_kernels", "is_decodable", "load_kernels",
    "primary_min_cut", "primary_subsets", "reduce_rate", "transform", "transmit",
]
