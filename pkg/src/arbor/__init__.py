"""Random binary trees: four tree classes, bijections with permutations and
dyadic partitions, exact counting, splitting models and tree-pair diagrams."""

__version__ = "0.1.0"

from .errors import (
    ArborError,
    InvalidModelError,
    InvalidPairError,
    InvalidPartitionError,
    InvalidPermutationError,
    InvalidSplitError,
    InvalidTreeError,
    NotDyadicError,
    ResourceGuardError,
    TheoremInapplicableError,
)
from .trees import (
    PlaneTree,
    RankedPlaneTree,
    RankedTree,
    TreeShape,
    cherries,
    embeddings,
    preorder_ranking,
    project,
    rankings,
    symmetry_nodes,
)
from .bijections import (
    bst_insert_all,
    canonical_ranked_word,
    is_canonical,
    lift,
    parse_permutation,
    read_infix,
    tree_to_partition,
)
from .partitions import Partition, depths, partition_of, split_at, split_depths, split_midpoint
from .counting import (
    balance_q,
    catalan,
    catalan_coefficient,
    enumerate_trees,
    euler_zigzag,
    family_count,
    max_catalan_coefficient,
    ranked_per_shape,
    rpt_per_ranked_tree,
    rpt_per_shape,
    shape_coefficient,
    wedderburn_etherington,
)
from .models import (
    BetaSplittingModel,
    DepthProportionalModel,
    SEBModel,
    SplittingModel,
    YuleModel,
    check_plane_invariant,
    check_split_exchangeable,
    estimate_fill_limit,
    lift_to_plane,
    lift_to_shape,
    make_model,
    plane_probability,
    sample_uniform_plane_tree,
    shape_probability,
)
from .thompson import PLMap, TreePair, pair_weights, pl_map
